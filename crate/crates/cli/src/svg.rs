//! Small hand-rolled SVG calibration chart.
//!
//! The output is deterministic: fixed canvas, fixed precision, no
//! timestamps, so reruns of the same run are byte-identical. Each chart
//! contains exactly one dotted reference line and one rate polyline; the
//! grid is drawn with path elements so the two stay easy to pick out.

use std::fmt::Write as _;

use burrowcast_core::eval::DecileTable;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;

fn x_pos(p: f64) -> f64 {
    MARGIN_LEFT + p * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_pos(rate: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - rate * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Renders observed find rate against predicted probability per decile.
///
/// Bins with no observations are skipped; the dotted black diagonal marks
/// perfect calibration.
pub fn decile_chart(table: &DecileTable, title: &str) -> String {
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = write!(
        svg,
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );
    let _ = write!(
        svg,
        "  <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );

    let mut grid = String::new();
    for tick in 0..=5 {
        let v = f64::from(tick) / 5.0;
        let x = x_pos(v);
        let y = y_pos(v);
        let _ = write!(
            grid,
            "M {x:.1} {:.1} L {x:.1} {:.1} M {:.1} {y:.1} L {:.1} {y:.1} ",
            y_pos(0.0),
            y_pos(1.0),
            x_pos(0.0),
            x_pos(1.0)
        );
        let _ = write!(
            svg,
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{v:.1}</text>\n",
            y_pos(0.0) + 18.0
        );
        let _ = write!(
            svg,
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.1}</text>\n",
            x_pos(0.0) - 8.0,
            y + 4.0
        );
    }
    let _ = write!(
        svg,
        "  <path d=\"{}\" stroke=\"#ddd\" fill=\"none\"/>\n",
        grid.trim_end()
    );

    let _ = write!(
        svg,
        "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" \
         stroke=\"black\" stroke-dasharray=\"2 4\"/>\n",
        x_pos(0.0),
        y_pos(0.0),
        x_pos(1.0),
        y_pos(1.0)
    );

    let _ = write!(
        svg,
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">predicted probability</text>\n",
        x_pos(0.5),
        HEIGHT - 10.0
    );
    let _ = write!(
        svg,
        "  <text x=\"14\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.1})\">observed rate</text>\n",
        y_pos(0.5),
        y_pos(0.5)
    );

    let occupied: Vec<(f64, f64, u64, u64, f64, f64)> = table
        .bins
        .iter()
        .filter_map(|b| {
            b.rate
                .map(|r| ((b.lower + b.upper) / 2.0, r, b.found, b.count, b.lower, b.upper))
        })
        .collect();

    let mut points = String::new();
    for &(mid, rate, ..) in &occupied {
        let _ = write!(points, "{:.1},{:.1} ", x_pos(mid), y_pos(rate));
    }
    let _ = write!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n",
        points.trim_end()
    );
    for &(mid, rate, found, count, lower, upper) in &occupied {
        let _ = write!(
            svg,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#1f6fb2\">\
             <title>bin ({lower:.1}, {upper:.1}]: {found}/{count}</title></circle>\n",
            x_pos(mid),
            y_pos(rate)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
