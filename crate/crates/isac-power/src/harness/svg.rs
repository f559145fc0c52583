//! Minimal self-contained SVG line charts from CSV columns.
//!
//! Output bytes are a pure function of the input file and column choices:
//! fixed canvas, fixed precision, no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::csv::read_csv;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Renders one polyline per y column against the x column, with linear axes
/// and a legend. Rows with non-finite coordinates are skipped per series; a
/// single point degenerates to a marker.
pub fn render_svg(
    csv_path: &Path,
    x_column: &str,
    y_columns: &[String],
    out_path: &Path,
) -> Result<()> {
    let (header, rows) = read_csv(csv_path)?;
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    };
    let xi = col(x_column)?;
    let yis: Vec<usize> = y_columns
        .iter()
        .map(|name| col(name))
        .collect::<Result<_>>()?;

    let parse = |cell: &str, row: usize| -> Result<f64> {
        cell.parse::<f64>()
            .map_err(|_| Error::Csv(format!("row {row}: `{cell}` is not a number")))
    };

    // Collect finite (x, y) points per series, sorted by x.
    let mut series: Vec<Vec<(f64, f64)>> = Vec::with_capacity(yis.len());
    for &yi in &yis {
        let mut pts = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let x = parse(&row[xi], i + 2)?;
            let y = parse(&row[yi], i + 2)?;
            if x.is_finite() && y.is_finite() {
                pts.push((x, y));
            }
        }
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite by construction"));
        series.push(pts);
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for pts in &series {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        // No plottable points at all; draw an empty frame.
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max == x_min {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_max == y_min {
        y_min -= 0.5;
        y_max += 0.5;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    // Axes.
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>"
    );

    // Ticks and grid.
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let xp = px(xv);
        let yp = py(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{xp:.2}\" y1=\"{y0:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{xp:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{xv:.4}</text>",
            y0 + 18.0
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{x0:.2}\" y2=\"{yp:.2}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{yv:.4}</text>",
            x0 - 8.0,
            yp + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        x_column
    );

    // Series.
    for (s, pts) in series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        if pts.len() > 1 {
            let mut attr = String::new();
            for &(x, y) in pts {
                let _ = write!(attr, "{:.2},{:.2} ", px(x), py(y));
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                attr.trim_end()
            );
        }
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                px(x),
                py(y)
            );
        }
    }

    // Legend.
    for (s, name) in y_columns.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let ly = MARGIN_TOP + 16.0 * s as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 18.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
            lx + 24.0,
            ly + 4.0,
            name
        );
    }
    svg.push_str("</svg>\n");

    fs::write(out_path, svg).map_err(|source| Error::Io {
        path: out_path.to_path_buf(),
        source,
    })
}
