//! Minimal deterministic SVG line plots of solver CSV output.

use crate::runner::CsvTable;
use std::fmt::Write;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 710.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 470.0;

const PALETTE: [&str; 5] = ["#1b6ca8", "#c23b22", "#2e8540", "#7b4b94", "#b8860b"];

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Render every non-time column of `table` as a polyline.
/// Output is a pure function of the input bytes.
pub fn render(table: &CsvTable) -> String {
    let t = &table.values[0];
    let t_min = t.first().copied().unwrap_or(0.0);
    let t_max = t.last().copied().unwrap_or(1.0);
    let t_span = if t_max > t_min { t_max - t_min } else { 1.0 };

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for col in &table.values[1..] {
        for &v in col {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    y_min = y_min.min(0.0);
    let y_span = if y_max > y_min { y_max - y_min } else { 1.0 };

    let x = |tv: f64| LEFT + (tv - t_min) / t_span * (RIGHT - LEFT);
    let y = |v: f64| BOTTOM - (v - y_min) / y_span * (BOTTOM - TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{RIGHT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    );
    // axis labels and extents
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"505\" font-size=\"14\" text-anchor=\"middle\">days</text>",
        coord((LEFT + RIGHT) / 2.0)
    );
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">persons</text>",
        coord((TOP + BOTTOM) / 2.0),
        coord((TOP + BOTTOM) / 2.0)
    );
    let _ = writeln!(
        s,
        "<text x=\"{LEFT}\" y=\"490\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        crate::runner::fmt_sig10(t_min)
    );
    let _ = writeln!(
        s,
        "<text x=\"{RIGHT}\" y=\"490\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        crate::runner::fmt_sig10(t_max)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
        coord(LEFT - 6.0),
        coord(BOTTOM + 4.0),
        crate::runner::fmt_sig10(y_min)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
        coord(LEFT - 6.0),
        coord(TOP + 4.0),
        crate::runner::fmt_sig10(y_max)
    );

    for (idx, col) in table.values[1..].iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for (p, &v) in col.iter().enumerate() {
            if p > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{},{}", coord(x(t[p])), coord(y(v)));
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{points}\"/>"
        );
        // legend entry
        let ly = TOP + 20.0 * idx as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"3\"/>",
            coord(RIGHT + 20.0),
            coord(ly),
            coord(RIGHT + 50.0),
            coord(ly)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>",
            coord(RIGHT + 58.0),
            coord(ly + 4.0),
            table.columns[idx + 1]
        );
    }
    s.push_str("</svg>\n");
    s
}
