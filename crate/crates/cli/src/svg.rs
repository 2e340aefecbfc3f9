//! Flat orthographic scatter plots viewed along `(1, 1, 1)`.

use std::fmt::Write;

use tropdyn::geometry::SkeletonMesh;
use tropdyn::rational::to_f64;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Screen coordinates before fitting: `((x - y)/√2, -(x + y - 2z)/√6)`.
pub fn project(p: [f64; 3]) -> (f64, f64) {
    let u = (p[0] - p[1]) / 2f64.sqrt();
    let v = (p[0] + p[1] - 2.0 * p[2]) / 6f64.sqrt();
    (u, -v)
}

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

pub fn point_radius(count: usize) -> f64 {
    (40.0 / (count.max(1) as f64).sqrt()).clamp(0.3, 4.0)
}

pub fn scatter(points: &[[f64; 3]], mesh: Option<&SkeletonMesh>) -> String {
    let outline: Vec<Vec<(f64, f64)>> = mesh
        .map(|m| {
            m.faces
                .iter()
                .map(|f| {
                    f.vertices
                        .iter()
                        .map(|&i| {
                            let v = &m.vertices[i];
                            project([to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])])
                        })
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default();
    let dots: Vec<(f64, f64)> = points.iter().map(|&p| project(p)).collect();
    let all = dots.iter().chain(outline.iter().flatten());
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in all {
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    if lo_x > hi_x {
        (lo_x, lo_y, hi_x, hi_y) = (-1.0, -1.0, 1.0, 1.0);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let screen = |(x, y): (f64, f64)| (MARGIN + (x - lo_x) * scale, MARGIN + (y - lo_y) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SIZE
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for face in &outline {
        let pts: Vec<String> = face
            .iter()
            .map(|&p| {
                let (x, y) = screen(p);
                format!("{},{}", fmt(x), fmt(y))
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="none" stroke="#999999" stroke-width="0.8"/>"##,
            pts.join(" ")
        );
    }
    let r = fmt(point_radius(dots.len()));
    for &p in &dots {
        let (x, y) = screen(p);
        let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="{r}" fill="#1f4e9c"/>"##, fmt(x), fmt(y));
    }
    out.push_str("</svg>\n");
    out
}
