//! Static SVG plots with deterministic output: fixed layout, fixed palette and
//! fixed-precision coordinates, so identical input gives identical bytes.

use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("series '{0}' has no plottable points")]
    EmptySeries(String),
    #[error("no series to plot")]
    NoSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
    pub axis: Axis,
}

impl Series {
    pub fn new(label: &str, points: Vec<(f64, f64)>, mark: Mark) -> Self {
        Series { label: label.into(), points, mark, axis: Axis::Left }
    }

    pub fn on_right(mut self) -> Self {
        self.axis = Axis::Right;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Label of the right-hand axis, used when a series is drawn against it.
    pub y2_label: Option<String>,
    pub log_x: bool,
    pub log_y: bool,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 80.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 5] = ["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400"];

#[derive(Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Range {
    fn from_values(values: impl Iterator<Item = f64>, log: bool) -> Option<Range> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return None;
        }
        if log {
            lo = lo.floor();
            hi = hi.ceil();
            if hi <= lo {
                hi = lo + 1.0;
            }
        } else if hi <= lo {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            lo -= pad;
            hi += pad;
        }
        Some(Range { lo, hi, log })
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in transformed units, with their labels.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let step = ((self.hi - self.lo) / 8.0).ceil().max(1.0) as i64;
            (self.lo as i64..=self.hi as i64)
                .filter(|k| (k - self.lo as i64) % step == 0)
                .map(|k| (k as f64, format!("1e{k}")))
                .collect()
        } else {
            (0..=4)
                .map(|i| {
                    let v = self.lo + (self.hi - self.lo) * i as f64 / 4.0;
                    (v, format!("{v:.3e}"))
                })
                .collect()
        }
    }
}

fn transform(v: f64, log: bool) -> Option<f64> {
    if !v.is_finite() {
        return None;
    }
    if log {
        (v > 0.0).then(|| v.log10())
    } else {
        Some(v)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render `series` to an SVG document. Points that cannot be shown on a log
/// axis are dropped; a series left with no points is an error.
pub fn emit_plot(series: &[Series], style: &PlotStyle) -> Result<String, PlotError> {
    if series.is_empty() {
        return Err(PlotError::NoSeries);
    }
    let mut data = Vec::with_capacity(series.len());
    for s in series {
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter_map(|&(x, y)| Some((transform(x, style.log_x)?, transform(y, style.log_y)?)))
            .collect();
        if pts.is_empty() {
            return Err(PlotError::EmptySeries(s.label.clone()));
        }
        data.push(pts);
    }
    let all = || data.iter().flatten();
    let xr = Range::from_values(all().map(|p| p.0), style.log_x).ok_or(PlotError::NoSeries)?;
    let on = |axis: Axis| {
        Range::from_values(
            series.iter().zip(&data).filter(|(s, _)| s.axis == axis).flat_map(|(_, d)| d.iter().map(|p| p.1)),
            style.log_y,
        )
    };
    let yl = on(Axis::Left);
    let yr = on(Axis::Right);

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xr.frac(x) * pw;
    let py = |r: &Range, y: f64| TOP + (1.0 - r.frac(y)) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&style.title)
    );
    let _ = writeln!(svg, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);

    for (v, label) in xr.ticks() {
        let x = px(v);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP, TOP + ph);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 18.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0,
        escape(&style.x_label)
    );
    if let Some(r) = &yl {
        for (v, label) in r.ticks() {
            let y = py(r, v);
            let _ = writeln!(svg, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, y + 4.0);
        }
        let _ = writeln!(
            svg,
            r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + ph / 2.0,
            escape(&style.y_label)
        );
    }
    if let Some(r) = &yr {
        for (v, label) in r.ticks() {
            let y = py(r, v);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="start">{label}</text>"#, LEFT + pw + 6.0, y + 4.0);
        }
        let label = style.y2_label.as_deref().unwrap_or("");
        let _ = writeln!(
            svg,
            r#"<text transform="translate({:.2} {:.2}) rotate(90)" text-anchor="middle">{}</text>"#,
            WIDTH - 14.0,
            TOP + ph / 2.0,
            escape(label)
        );
    }

    for (i, (s, pts)) in series.iter().zip(&data).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let r = match s.axis {
            Axis::Left => yl.as_ref(),
            Axis::Right => yr.as_ref(),
        }
        .expect("axis range exists for its series");
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(r, y))).collect();
        if s.mark == Mark::Markers || pts.len() == 1 {
            for c in &coords {
                let (cx, cy) = c.split_once(',').expect("coordinate pair");
                let _ = writeln!(svg, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
            }
        } else {
            let dash = if s.mark == Mark::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let lx = LEFT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        );
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 26.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Allan deviation on log-log axes with the `10⁻⁸ (τ/1000 s)^{−1/2}` guide line.
pub fn allan_plot(points: &[(f64, f64)]) -> Result<String, PlotError> {
    let data = Series::new("Allan deviation", points.to_vec(), Mark::Markers);
    let (lo, hi) = points
        .iter()
        .filter(|p| p.0 > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let mut series = vec![data];
    if lo.is_finite() {
        let guide = [lo, hi].iter().map(|&t| (t, 1e-8 / (t / 1000.0).sqrt())).collect();
        series.push(Series::new("1e-8 (tau/1000 s)^-1/2", guide, Mark::Dashed));
    }
    emit_plot(
        &series,
        &PlotStyle {
            title: "Allan deviation".into(),
            x_label: "averaging time tau [s]".into(),
            y_label: "Allan deviation".into(),
            y2_label: None,
            log_x: true,
            log_y: true,
        },
    )
}

/// Acceleration noise model with the sensitivity function `|F(2πf)|` on the right-hand axis.
pub fn noise_overlay(
    model_points: &[(f64, f64)],
    sensitivity_points: &[(f64, f64)],
    model_name: &str,
) -> Result<String, PlotError> {
    emit_plot(
        &[
            Series::new(&format!("noise model '{model_name}'"), model_points.to_vec(), Mark::Line),
            Series::new("|F(f)|", sensitivity_points.to_vec(), Mark::Line).on_right(),
        ],
        &PlotStyle {
            title: "Acceleration noise and phase sensitivity".into(),
            x_label: "frequency f [Hz]".into(),
            y_label: "acceleration noise [m s^-2 / Hz^1/2]".into(),
            y2_label: Some("|F(f)|".into()),
            log_x: true,
            log_y: true,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn style() -> PlotStyle {
        PlotStyle {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            y2_label: None,
            log_x: true,
            log_y: true,
        }
    }

    #[test]
    fn empty_series_is_rejected() {
        let s = Series::new("none", vec![], Mark::Line);
        assert_eq!(emit_plot(&[s], &style()), Err(PlotError::EmptySeries("none".into())));
        // nothing positive survives the log transform
        let s = Series::new("neg", vec![(-1.0, 2.0)], Mark::Line);
        assert!(matches!(emit_plot(&[s], &style()), Err(PlotError::EmptySeries(_))));
        assert_eq!(emit_plot(&[], &style()), Err(PlotError::NoSeries));
    }

    #[test]
    fn single_point_gives_one_marker() {
        let svg = emit_plot(&[Series::new("p", vec![(10.0, 1e-9)], Mark::Line)], &style()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn output_is_deterministic() {
        let pts: Vec<(f64, f64)> = (1..20).map(|i| (i as f64, 1e-9 / (i as f64).sqrt())).collect();
        assert_eq!(allan_plot(&pts).unwrap(), allan_plot(&pts).unwrap());
        assert!(allan_plot(&pts).unwrap().contains("stroke-dasharray"));
    }
}
