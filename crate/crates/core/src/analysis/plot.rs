use std::fmt::Write;

use super::pareto::{frontier_indices, SystemPoint};

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotData {
    pub csv: String,
    pub svg: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Point table with an `on_frontier` flag and a standalone SVG scatter
/// with the frontier drawn as a polyline in x order.
pub fn emit_plot_data(points: &[SystemPoint], x_label: &str, y_label: &str) -> PlotData {
    let frontier = frontier_indices(points);
    let on: Vec<bool> = (0..points.len()).map(|i| frontier.contains(&i)).collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["system", "x", "y", "n_cases", "on_frontier"]).unwrap();
    for (p, &f) in points.iter().zip(&on) {
        w.write_record([
            p.system.clone(),
            format!("{:.6}", p.x),
            format!("{:.6}", p.y),
            p.n_cases.to_string(),
            f.to_string(),
        ])
        .unwrap();
    }
    let csv = String::from_utf8(w.into_inner().unwrap()).unwrap();

    let (x0, x1) = span(points.iter().map(|p| p.x));
    let (y0, y1) = span(points.iter().map(|p| p.y));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}" font-size="10">{x:.3}</text>"#,
            sx(x),
            bottom + 14.0
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{y:.3}</text>"#,
            left - 4.0,
            sy(y) + 3.0
        );
    }
    if !frontier.is_empty() {
        let coords: Vec<String> = frontier.iter().map(|&i| format!("{:.2},{:.2}", sx(points[i].x), sy(points[i].y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }
    for (p, &f) in points.iter().zip(&on) {
        let fill = if f { "firebrick" } else { "steelblue" };
        let (cx, cy) = (sx(p.x), sy(p.y));
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="5" fill="{fill}"><title>{}</title></circle>"#,
            escape(&p.system)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            cx + 7.0,
            cy - 7.0,
            escape(&p.system)
        );
    }
    svg.push_str("</svg>\n");
    PlotData { csv, svg }
}
