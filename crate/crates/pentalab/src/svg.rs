//! Static SVG snapshots of polygons.

use std::fmt::Write;

use num_traits::Zero;

use crate::dynamics::{Kind, TwistedPolygon};
use crate::projective::Hom;
use crate::scalar::to_f64;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Affine vertices of one period plus the first vertex of the next, so a
/// twisted polygon shows how the monodromy moves it. Line polygons are drawn
/// through the meets of consecutive lines. Points at infinity are skipped.
pub fn affine_vertices(p: &TwistedPolygon) -> Vec<(f64, f64)> {
    let c = p.class().base();
    let n = p.n() as i64;
    let vertex = |i: i64| -> Option<Hom> {
        let l = c + 4 * i;
        match p.kind() {
            Kind::Points => Some(p.at(l)),
            Kind::Lines => Hom::new(p.at(l).cross(&p.at(l + 4))).ok(),
        }
    };
    (0..=n)
        .filter_map(vertex)
        .filter(|h| !h.coords()[2].is_zero())
        .map(|h| {
            let [x, y, z] = h.coords();
            (to_f64(&(x / z)), to_f64(&(y / z)))
        })
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect()
}

/// A self-contained SVG document with the polygon scaled to fit.
pub fn polygon_svg(p: &TwistedPolygon, title: &str) -> String {
    let pts = affine_vertices(p);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    if !pts.is_empty() {
        let path: Vec<String> = pts.iter().map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        }).collect();
        let _ = writeln!(s, r#"  <polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, path.join(" "));
        for &p in &pts {
            let (x, y) = map(p);
            let _ = writeln!(s, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="crimson"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
