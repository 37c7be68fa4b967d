//! Static SVG emission: the numerical-range boundary, the enlarged smooth
//! domain, the image curves of f and g, and the convex hull of conj(f).

use num_complex::Complex64;

pub struct LabeledPath {
    pub id: &'static str,
    pub stroke: &'static str,
    pub closed: bool,
    pub points: Vec<Complex64>,
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

pub fn render(paths: &[LabeledPath]) -> String {
    let all: Vec<Complex64> = paths.iter().flat_map(|p| p.points.iter().copied()).collect();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &all {
        min_x = min_x.min(p.re);
        max_x = max_x.max(p.re);
        min_y = min_y.min(p.im);
        max_y = max_y.max(p.im);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |z: Complex64| {
        let x = MARGIN + (z.re - min_x) * scale;
        // flip the y axis for screen coordinates
        let y = SIZE - MARGIN - (z.im - min_y) * scale;
        (x, y)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    for p in paths {
        if p.points.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, z) in p.points.iter().enumerate() {
            let (x, y) = map(*z);
            d.push_str(&format!("{}{x:.3} {y:.3} ", if i == 0 { "M " } else { "L " }));
        }
        if p.closed {
            d.push('Z');
        }
        out.push_str(&format!(
            "  <path id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" d=\"{}\"><title>{}</title></path>\n",
            p.id, p.stroke, d.trim_end(), p.id
        ));
    }
    out.push_str("</svg>\n");
    out
}
