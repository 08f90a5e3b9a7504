use mwi::io::{read_columns, write_table};
use mwi::plot::{emit_plot, Mark, PlotError, PlotStyle, Series};
use mwi::report::inputs_digest;
use proptest::prelude::*;

proptest! {
    #[test]
    fn csv_round_trip_is_exact(rows in prop::collection::vec(prop::array::uniform3(-1e30f64..1e30), 1..40)) {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        let text = write_table(&["a", "b", "c"], &rows);
        let cols = read_columns(&text, &["c", "a"]).unwrap();
        for (i, r) in rows.iter().enumerate() {
            prop_assert_eq!(cols[0][i], r[2]);
            prop_assert_eq!(cols[1][i], r[0]);
        }
    }

    #[test]
    fn digest_ignores_key_order(a in any::<i32>(), b in "[a-z]{0,8}") {
        let one: serde_json::Value = serde_json::from_str(&format!(r#"{{"x": {a}, "y": "{b}"}}"#)).unwrap();
        let two: serde_json::Value = serde_json::from_str(&format!(r#"{{"y": "{b}", "x": {a}}}"#)).unwrap();
        prop_assert_eq!(inputs_digest(&one), inputs_digest(&two));
    }
}

#[test]
fn missing_column_is_a_validation_error() {
    let err = read_columns("t,value\n1,2\n", &["sigma"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn empty_series_rejected() {
    let style = PlotStyle {
        title: "t".into(),
        x_label: "x".into(),
        y_label: "y".into(),
        y2_label: None,
        log_x: false,
        log_y: false,
    };
    let err = emit_plot(&[Series::new("none", vec![], Mark::Line)], &style).unwrap_err();
    assert!(matches!(err, PlotError::EmptySeries(_)));
    assert!(matches!(emit_plot(&[], &style).unwrap_err(), PlotError::NoSeries));
    let single = emit_plot(&[Series::new("one", vec![(1.0, 2.0)], Mark::Markers)], &style).unwrap();
    assert!(single.contains("<circle"));
}
