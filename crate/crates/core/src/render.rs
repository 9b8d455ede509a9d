//! Deterministic SVG drawing of a color map.

use std::fmt::Write;

use crate::colormap::{Color, ColorMap};
use crate::lattice::Vertex;

/// Pixels per unit edge.
pub const SCALE: f64 = 60.0;
pub const MARGIN: f64 = 20.0;

pub fn stroke(c: Color) -> &'static str {
    match c {
        Color::Zero => "blue",
        Color::One => "red",
        Color::Three => "green",
        Color::M => "black",
    }
}

fn point(v: Vertex, n: usize) -> (f64, f64) {
    let h = 3f64.sqrt() / 2.0;
    let x = v.r as f64 + v.s as f64 / 2.0;
    let y = (n as f64 - v.s as f64) * h;
    (MARGIN + SCALE * x, MARGIN + SCALE * y)
}

/// One `<line>` per edge in canonical order; coordinates to three decimals.
pub fn render_svg(c: &ColorMap) -> String {
    let n = c.n();
    let width = 2.0 * MARGIN + SCALE * n as f64;
    let height = 2.0 * MARGIN + SCALE * n as f64 * 3f64.sqrt() / 2.0;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
    writeln!(out, "<g stroke-width=\"4\" stroke-linecap=\"round\">").unwrap();
    for (e, &col) in c.lattice().edges().iter().zip(c.colors()) {
        let (p, q) = e.endpoints();
        let ((x1, y1), (x2, y2)) = (point(p, n), point(q, n));
        writeln!(
            out,
            "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{}\"/>",
            stroke(col)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}
