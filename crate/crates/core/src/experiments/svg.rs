//! Minimal SVG charts: population curves and a mixing-time heat map.

use std::fmt::Write as _;

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// One curve per series over a shared time axis; y is fixed to `[0, 1]`.
pub fn line_chart(title: &str, times: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let mut out = String::new();
    header(&mut out);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let t_max = times.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let x = |t: f64| MARGIN_LEFT + plot_w * t / t_max;
    let y = |p: f64| MARGIN_TOP + plot_h * (1.0 - p.clamp(0.0, 1.0));

    let _ = writeln!(out, r#"<text x="{}" y="18" text-anchor="middle">{title}</text>"#, MARGIN_LEFT + plot_w / 2.0);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{p:.1}</text>"#,
            MARGIN_LEFT - 6.0,
            y(p) + 4.0
        );
        let t = t_max * k as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{:.3}</text>"#,
            x(t),
            HEIGHT - MARGIN_BOTTOM + 18.0,
            t
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">time [1/γ]</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">probability</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (k, (label, values)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let dash = if k >= PALETTE.len() { r#" stroke-dasharray="6 3""# } else { "" };
        let mut points = String::new();
        for (&t, &p) in times.iter().zip(values) {
            let _ = write!(points, "{:.2},{:.2} ", x(t), y(p));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.trim_end()
        );
        let ly = MARGIN_TOP + 10.0 + 16.0 * k as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"{dash}/>"#,
            lx + 20.0
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}">{label}</text>"#, lx + 26.0, ly + 4.0);
    }
    out.push_str("</svg>\n");
    out
}

fn colour_ramp(v: f64) -> String {
    // Dark blue → teal → yellow.
    let stops = [(0.0, [68.0, 1.0, 84.0]), (0.5, [33.0, 145.0, 140.0]), (1.0, [253.0, 231.0, 37.0])];
    let v = v.clamp(0.0, 1.0);
    let (lo, hi) = if v <= 0.5 { (stops[0], stops[1]) } else { (stops[1], stops[2]) };
    let f = (v - lo.0) / (hi.0 - lo.0);
    let c: Vec<u8> = (0..3).map(|i| (lo.1[i] + f * (hi.1[i] - lo.1[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Heat map of `values[g][k]` over κ (columns) and γ (rows).
pub fn heat_map(title: &str, kappas: &[f64], gammas: &[f64], values: &[Vec<f64>]) -> String {
    let mut out = String::new();
    header(&mut out);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let cell_w = plot_w / kappas.len().max(1) as f64;
    let cell_h = plot_h / gammas.len().max(1) as f64;
    let valid: Vec<f64> = values.iter().flatten().copied().filter(|v| *v > 0.0).collect();
    let lo = valid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = valid.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let _ = writeln!(out, r#"<text x="{}" y="18" text-anchor="middle">{title}</text>"#, MARGIN_LEFT + plot_w / 2.0);
    for (gi, row) in values.iter().enumerate() {
        // γ grows upwards.
        let top = MARGIN_TOP + plot_h - (gi + 1) as f64 * cell_h;
        for (ki, &v) in row.iter().enumerate() {
            let left = MARGIN_LEFT + ki as f64 * cell_w;
            let fill = if v <= 0.0 {
                "#d9d9d9".to_string()
            } else if hi > lo {
                colour_ramp((v - lo) / (hi - lo))
            } else {
                colour_ramp(0.5)
            };
            let _ = writeln!(
                out,
                r#"<rect x="{left:.2}" y="{top:.2}" width="{cell_w:.2}" height="{cell_h:.2}" fill="{fill}" stroke="white"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="black">{:.2}</text>"#,
                left + cell_w / 2.0,
                top + cell_h / 2.0 + 4.0,
                v
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            top + cell_h / 2.0 + 4.0,
            gammas[gi]
        );
    }
    for (ki, k) in kappas.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{k}</text>"#,
            MARGIN_LEFT + (ki as f64 + 0.5) * cell_w,
            HEIGHT - MARGIN_BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">κ</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle">γ</text>"#,
        MARGIN_TOP + plot_h / 2.0
    );
    let lx = WIDTH - MARGIN_RIGHT + 15.0;
    let _ = writeln!(out, r#"<text x="{lx}" y="{}">T_M [1/γ]</text>"#, MARGIN_TOP + 10.0);
    if valid.is_empty() {
        let _ = writeln!(out, r#"<text x="{lx}" y="{}">no convergent points</text>"#, MARGIN_TOP + 30.0);
    } else {
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let ly = MARGIN_TOP + 25.0 + 18.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{lx}" y="{ly}" width="14" height="14" fill="{}"/><text x="{}" y="{}">{:.2}</text>"#,
                colour_ramp(f),
                lx + 20.0,
                ly + 11.0,
                lo + f * (hi - lo)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_has_one_polyline_per_series() {
        let svg = line_chart(
            "demo",
            &[0.0, 1.0, 2.0],
            &[("000".into(), vec![1.0, 0.5, 0.2]), ("001".into(), vec![0.0, 0.5, 0.8])],
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">001</text>"));
    }

    #[test]
    fn heat_map_cells() {
        let svg = heat_map("T", &[0.2, 2.0], &[1.0], &[vec![3.0, 0.0]]);
        assert!(svg.contains("#d9d9d9"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
