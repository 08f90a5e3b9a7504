//! Bookkeeping for the acceptance run: named checks grouped per criterion and the
//! rounding tolerance implied by a printed table value.

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    /// `|value − target| ≤ rel·|target|`.
    pub fn within(&mut self, name: &str, value: f64, target: f64, rel: f64) {
        let dev = (value - target).abs() / target.abs();
        self.check(name, dev <= rel, format!("got {value:.6e}, target {target:.6e}, deviation {dev:.2e} (limit {rel:.0e})"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Half a unit in the last printed digit of `printed` (`"0.707"`, `"5e-7"`, ...).
pub fn print_tolerance(printed: &str) -> f64 {
    let (mantissa, exp) = match printed.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().expect("exponent")),
        None => (printed, 0),
    };
    let decimals = mantissa.split_once('.').map(|(_, d)| d.len() as i32).unwrap_or(0);
    0.5 * 10f64.powi(exp - decimals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_from_printed_digits() {
        assert_eq!(print_tolerance("0.707"), 0.0005);
        assert_eq!(print_tolerance("2"), 0.5);
        assert!((print_tolerance("5e-7") - 5e-8).abs() < 1e-22);
        assert!((print_tolerance("0.00050025") - 5e-9).abs() < 1e-22);
    }

    #[test]
    fn report_tracks_failures() {
        let mut r = Report::default();
        r.within("close", 1.001, 1.0, 1e-2);
        assert!(r.passed());
        r.within("far", 1.1, 1.0, 1e-2);
        assert!(!r.passed());
    }
}
