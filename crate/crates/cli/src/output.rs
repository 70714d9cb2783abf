//! Sample tables and their CSV / JSON / SVG renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::format::number;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Columns `x, value, d1, …, dk`, one row per sample point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub label: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(label: impl Into<String>, derivs: usize) -> Self {
        let mut columns = vec!["x".to_string(), "value".to_string()];
        columns.extend((1..=derivs).map(|k| format!("d{k}")));
        Self {
            label: label.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[i])
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string_pretty(self)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Usage(e.to_string())),
            Format::Svg => Ok(self.to_svg()),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        let io = |e: csv::Error| CliError::Usage(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|&v| number(v))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }

    /// 800×600 SVG 1.1: axes, tick labels at the ends, one polyline per
    /// series on a shared vertical scale.
    pub fn to_svg(&self) -> String {
        const W: f64 = 800.0;
        const H: f64 = 600.0;
        const M: f64 = 50.0;
        const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        let xs: Vec<f64> = self.column(0).collect();
        let finite = |v: &f64| v.is_finite();
        let (x0, x1) = bounds(xs.iter().copied().filter(finite));
        let (y0, y1) = bounds(self.rows.iter().flat_map(|r| r[1..].iter().copied()).filter(finite));
        let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="600" viewBox="0 0 800 600">
<title>{}</title>
<rect width="800" height="600" fill="white"/>
<g stroke="black" stroke-width="1">
<line x1="{M}" y1="{b}" x2="{r}" y2="{b}"/>
<line x1="{M}" y1="{M}" x2="{M}" y2="{b}"/>
</g>
<g font-family="sans-serif" font-size="12">
<text x="{M}" y="{tb}" text-anchor="middle">{}</text>
<text x="{r}" y="{tb}" text-anchor="middle">{}</text>
<text x="{tl}" y="{b}" text-anchor="end">{}</text>
<text x="{tl}" y="{M}" text-anchor="end">{}</text>
</g>"#,
            escape(&self.label),
            number(x0),
            number(x1),
            number(y0),
            number(y1),
            b = H - M,
            r = W - M,
            tb = H - M + 18.0,
            tl = M - 6.0,
        );
        for (i, name) in self.columns.iter().enumerate().skip(1) {
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter(|r| r[0].is_finite() && r[i].is_finite())
                .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[i])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                COLORS[(i - 1) % COLORS.len()],
                pts.join(" "),
                escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new("B", 1);
        t.rows = vec![vec![0.0, 0.0, 0.0], vec![0.5, 0.5, 1.5], vec![1.0, 1.0, 0.0]];
        t
    }

    #[test]
    fn csv_layout() {
        assert_eq!(table().to_csv().unwrap(), "x,value,d1\n0,0,0\n0.5,0.5,1.5\n1,1,0\n");
    }

    #[test]
    fn json_round_trip() {
        let t = table();
        let s = t.render(Format::Json).unwrap();
        let back: Table = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let s = table().to_svg();
        assert!(s.starts_with("<?xml"));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert!(s.contains(r#"width="800" height="600""#));
    }
}
