//! Minimal SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// `sign(x) · log10(1 + |x|)` from the sign and natural log of `|x|`, for
/// values spanning hundreds of orders of magnitude.
pub fn signed_log(sign: i32, ln_abs: f64) -> f64 {
    if sign == 0 || ln_abs == f64::NEG_INFINITY {
        return 0.0;
    }
    let l = ln_abs / std::f64::consts::LN_10;
    let mag = if l > 15.0 { l } else { (1.0 + 10f64.powf(l)).log10() };
    f64::from(sign.signum()) * mag
}

/// A single-series line plot. Non-finite points are dropped; an empty series
/// still yields a valid document with axes and labels.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, 0.0, 1.0);
    if !pts.is_empty() {
        x0 = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
        y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).max(0.0);
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        WIDTH - MARGIN,
        HEIGHT - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{:.2}" stroke="black"/>"#,
        HEIGHT - MARGIN
    );
    let zero = sy(0.0);
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        WIDTH - MARGIN
    );
    for (v, x, anchor) in [(x0, sx(x0), "start"), (x1, sx(x1), "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}" font-size="11">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            escape(&format!("{v:.4}"))
        );
    }
    for (v, y) in [(y0, sy(y0)), (y1, sy(y1))] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN - 4.0,
            escape(&format!("{v:.3}"))
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    if !pts.is_empty() {
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_log_is_odd_and_monotone() {
        assert_eq!(signed_log(0, 3.0), 0.0);
        assert!((signed_log(1, 0.0) - 2f64.log10()).abs() < 1e-15);
        assert_eq!(signed_log(-1, 2.0), -signed_log(1, 2.0));
        assert!(signed_log(1, 1000.0) > signed_log(1, 10.0));
        assert!((signed_log(1, 1000.0) - 1000.0 / std::f64::consts::LN_10).abs() < 1e-12);
    }

    #[test]
    fn empty_plot_still_has_axes() {
        let s = line_plot("t <&>", "x", "y", &[]);
        assert!(s.starts_with("<svg"));
        assert!(s.contains("&lt;&amp;&gt;"));
        assert!(!s.contains("polyline"));
    }

    #[test]
    fn drops_non_finite_points() {
        let s = line_plot("p", "x", "y", &[(0.0, 1.0), (1.0, f64::NAN), (2.0, -1.0)]);
        let poly = s.lines().find(|l| l.contains("polyline")).unwrap();
        assert_eq!(poly.matches(',').count(), 2);
    }
}
