//! CSV input and output. Header rows are mandatory.

use crate::CliError;
use matterwave::mwkernel::WavePacket1D;
use num_complex::Complex64;
use std::collections::HashMap;

/// Read named numeric columns from CSV text; returns one vector per requested column.
pub fn read_columns(text: &str, columns: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| CliError::Validation(format!("CSV header: {e}")))?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let cols: Vec<usize> = columns
        .iter()
        .map(|c| index.get(c).copied().ok_or_else(|| CliError::Validation(format!("CSV is missing column '{c}'"))))
        .collect::<Result<_, _>>()?;
    let mut out = vec![Vec::new(); columns.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Validation(format!("CSV row {}: {e}", line + 2)))?;
        for (k, &i) in cols.iter().enumerate() {
            let field = rec.get(i).unwrap_or("");
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Validation(format!("CSV row {}: '{field}' is not a number", line + 2)))?;
            out[k].push(v);
        }
    }
    Ok(out)
}

/// Write a table with a header row.
pub fn write_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

/// Wave packet as `x,re,im`.
pub fn packet_csv(psi: &WavePacket1D) -> String {
    let rows: Vec<Vec<f64>> =
        psi.amplitudes.iter().enumerate().map(|(i, a)| vec![psi.x(i), a.re, a.im]).collect();
    write_table(&["x", "re", "im"], &rows)
}

/// Ladder amplitudes as `index,re,im`, with the index running over `−n_max ..= n_max`.
pub fn ladder_csv(amplitudes: &[Complex64]) -> String {
    let n_max = (amplitudes.len() / 2) as f64;
    let rows: Vec<Vec<f64>> =
        amplitudes.iter().enumerate().map(|(i, a)| vec![i as f64 - n_max, a.re, a.im]).collect();
    write_table(&["index", "re", "im"], &rows)
}
