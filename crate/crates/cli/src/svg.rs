//! Plain SVG 1.1: one stroked path per polyline in a fixed 600×600 box.

pub const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Polylines in data coordinates (y up), scaled uniformly into the box.
pub fn polylines(lines: &[(&[(f64, f64)], bool)]) -> String {
    let pts = lines.iter().flat_map(|(l, _)| l.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-300);
    let k = (SIZE - 2.0 * MARGIN) / span;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let map = |x: f64, y: f64| (SIZE / 2.0 + k * (x - cx), SIZE / 2.0 - k * (y - cy));

    let mut out = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    for (line, closed) in lines {
        if line.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, &(x, y)) in line.iter().enumerate() {
            let (u, v) = map(x, y);
            d.push_str(&format!("{}{u:.3} {v:.3} ", if i == 0 { "M" } else { "L" }));
        }
        if *closed {
            d.push('Z');
        }
        out.push_str(&format!("<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n", d.trim_end()));
    }
    out.push_str("</svg>\n");
    out
}
