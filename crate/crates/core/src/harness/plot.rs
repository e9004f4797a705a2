//! Static log-log SVG of the sweep errors against `n`.

use std::fmt::Write as _;

use super::sweep::ConvergenceReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
}

pub fn error_vs_n_svg(report: &ConvergenceReport) -> String {
    let pick = |f: fn(&super::sweep::SweepRow) -> Option<f64>| -> Vec<(f64, f64)> {
        report
            .rows
            .iter()
            .filter_map(|r| f(r).filter(|v| *v > 0.0).map(|v| (r.n as f64, v)))
            .collect()
    };
    let series = [
        Series { label: "sup error H^s", color: "#1f77b4", points: pick(|r| r.sup_error_hs) },
        Series { label: "sup error L2", color: "#2ca02c", points: pick(|r| r.sup_error_l2) },
        Series { label: "mixed norm error", color: "#ff7f0e", points: pick(|r| r.mixed_norm_error) },
        Series { label: "Gronwall bound (C=1)", color: "#d62728", points: pick(|r| r.gronwall_rhs_root) },
    ];

    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if all.is_empty() {
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">no data</text>"#, WIDTH / 2.0, HEIGHT / 2.0);
        svg.push_str("</svg>\n");
        return svg;
    }
    let decade = |v: f64, up: bool| if up { v.log10().ceil() } else { v.log10().floor() };
    let x0 = decade(all.iter().map(|p| p.0).fold(f64::MAX, f64::min), false);
    let mut x1 = decade(all.iter().map(|p| p.0).fold(f64::MIN, f64::max), true);
    let y0 = decade(all.iter().map(|p| p.1).fold(f64::MAX, f64::min), false);
    let mut y1 = decade(all.iter().map(|p| p.1).fold(f64::MIN, f64::max), true);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| MARGIN + (x.log10() - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y.log10() - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for e in (x0 as i32)..=(x1 as i32) {
        let x = px(10f64.powi(e));
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" font-size="12" text-anchor="middle">1e{e}</text>"#,
            HEIGHT - MARGIN + 18.0
        );
    }
    for e in (y0 as i32)..=(y1 as i32) {
        let y = py(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##,
            WIDTH - MARGIN
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">1e{e}</text>"#,
            MARGIN - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    for (i, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            path.join(" "),
            s.color
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{}"/>"#,
                px(x),
                py(y),
                s.color
            );
        }
        let ly = MARGIN + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" font-size="12" fill="{}" text-anchor="end">{}</text>"#,
            WIDTH - MARGIN - 8.0,
            s.color,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}
