//! Report rows and writers.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use qhmetric::qhgraph::InequalityRow;
use qhmetric::Point;
use serde::Serialize;

/// Header of every CSV report.
pub const CSV_HEADER: &str = "id,x_re,x_im,y_re,y_im,value,oracle,bound_lo,bound_hi,pass";

/// One checked quantity. Missing entries are left empty in CSV and null in JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub x_re: Option<f64>,
    pub x_im: Option<f64>,
    pub y_re: Option<f64>,
    pub y_im: Option<f64>,
    pub value: f64,
    pub oracle: Option<f64>,
    pub bound_lo: Option<f64>,
    pub bound_hi: Option<f64>,
    pub pass: bool,
}

impl Row {
    pub fn scalar(id: impl Into<String>, value: f64, pass: bool) -> Self {
        Row {
            id: id.into(),
            x_re: None,
            x_im: None,
            y_re: None,
            y_im: None,
            value,
            oracle: None,
            bound_lo: None,
            bound_hi: None,
            pass,
        }
    }

    pub fn at(mut self, x: Point, y: Option<Point>) -> Self {
        self.x_re = Some(x.re);
        self.x_im = Some(x.im);
        self.y_re = y.map(|p| p.re);
        self.y_im = y.map(|p| p.im);
        self
    }

    pub fn oracle(mut self, v: f64) -> Self {
        self.oracle = Some(v);
        self
    }

    pub fn bounds(mut self, lo: Option<f64>, hi: Option<f64>) -> Self {
        self.bound_lo = lo;
        self.bound_hi = hi;
        self
    }

    pub fn from_inequality(prefix: &str, r: &InequalityRow) -> Self {
        Row {
            id: format!("{prefix}:{}", r.id),
            x_re: Some(r.x.re),
            x_im: Some(r.x.im),
            y_re: Some(r.y.re),
            y_im: Some(r.y.im),
            value: r.value,
            oracle: r.oracle,
            bound_lo: Some(r.bound_lo),
            bound_hi: Some(r.bound_hi),
            pass: r.pass,
        }
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.id.replace(',', ";"),
            cell(r.x_re),
            cell(r.x_im),
            cell(r.y_re),
            cell(r.y_im),
            r.value,
            cell(r.oracle),
            cell(r.bound_lo),
            cell(r.bound_hi),
            r.pass
        );
    }
    out
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// A bare scatter plot with linear axes fitted to the data.
pub fn svg_scatter(title: &str, xlabel: &str, ylabel: &str, points: &[[f64; 2]]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const PAD: f64 = 48.0;
    let finite: Vec<[f64; 2]> = points
        .iter()
        .copied()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .collect();
    let span = |i: usize| {
        let lo = finite.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = finite
            .iter()
            .map(|p| p[i])
            .fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(0);
    let (y0, y1) = span(1);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}">{x0:.4}</text>"#,
        H - PAD + 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{x1:.4}</text>"#,
        W - PAD,
        H - PAD + 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{y0:.4}</text>"#,
        PAD - 4.0,
        H - PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{y1:.4}</text>"#,
        PAD - 4.0,
        PAD + 10.0
    );
    for p in &finite {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
            sx(p[0]),
            sy(p[1])
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhmetric::pt;

    #[test]
    fn csv_layout() {
        let rows = vec![
            Row::scalar("delta", 2.0, true),
            Row::scalar("k", 0.5, false)
                .at(pt(0.0, 1.0), Some(pt(0.0, 2.0)))
                .oracle(0.25)
                .bounds(Some(0.0), None),
        ];
        let text = csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "delta,,,,,2,,,,true");
        assert_eq!(lines[2], "k,0,1,0,2,0.5,0.25,0,,false");
    }

    #[test]
    fn svg_is_well_formed_for_degenerate_data() {
        let s = svg_scatter("t<1", "x", "y", &[[1.0, 1.0], [f64::NAN, 2.0]]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t&lt;1"));
        assert_eq!(s.matches("<circle").count(), 1);
    }
}
