//! SVG drawings of planar packings.
//!
//! Coordinates are printed with six decimals from the exact data; the drawing is
//! presentation only and a function of its input alone.

use std::fmt::Write;

use seppack_core::planar::{Line, PlanarPacking, SeparabilityReport};
use seppack_core::scalar::rational_to_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Pixels per unit.
    pub scale: f64,
    /// Margin around the translates, in units.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 40.0,
            margin: 0.5,
        }
    }
}

struct Frame {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

/// Segment of `line` inside the frame, if any.
fn clip(line: &Line, f: &Frame) -> Option<((f64, f64), (f64, f64))> {
    let (a, b) = line.normal.to_f64();
    let c = rational_to_f64(&line.offset);
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if b != 0.0 {
        for x in [f.x0, f.x1] {
            let y = (c - a * x) / b;
            if (f.y0..=f.y1).contains(&y) {
                hits.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [f.y0, f.y1] {
            let x = (c - b * y) / a;
            if (f.x0..=f.x1).contains(&x) {
                hits.push((x, y));
            }
        }
    }
    hits.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    hits.dedup();
    (hits.len() >= 2).then(|| (hits[0], hits[hits.len() - 1]))
}

/// One closed path per translate, then the distinct witness lines of `lines` (if
/// given) clipped to the drawing.
pub fn render_svg(packing: &PlanarPacking, lines: Option<&SeparabilityReport>, options: &SvgOptions) -> String {
    let body = packing.body();
    let pts: Vec<Vec<(f64, f64)>> = packing
        .centers()
        .iter()
        .map(|c| body.vertices().iter().map(|v| c.add(v).to_f64()).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let m = options.margin;
    let frame = Frame {
        x0: x0 - m,
        y0: y0 - m,
        x1: x1 + m,
        y1: y1 + m,
    };
    let s = options.scale;
    // SVG's y axis points down.
    let px = |(x, y): (f64, f64)| ((x - frame.x0) * s, (frame.y1 - y) * s);
    let (w, h) = ((frame.x1 - frame.x0) * s, (frame.y1 - frame.y0) * s);
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.6}\" height=\"{h:.6}\" viewBox=\"0 0 {w:.6} {h:.6}\">"
    )
    .unwrap();
    writeln!(out, "<g fill=\"#dce6f2\" stroke=\"#1f3b5c\" stroke-width=\"1\">").unwrap();
    for (i, poly) in pts.iter().enumerate() {
        let mut d = String::new();
        for (k, &p) in poly.iter().enumerate() {
            let (x, y) = px(p);
            write!(d, "{}{x:.6} {y:.6} ", if k == 0 { "M" } else { "L" }).unwrap();
        }
        d.push('Z');
        writeln!(out, "<path id=\"t{i}\" d=\"{d}\"/>").unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if let Some(report) = lines {
        writeln!(out, "<g stroke=\"#b03030\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\">").unwrap();
        for line in report.distinct_lines() {
            if let Some((a, b)) = clip(&line, &frame) {
                let ((ax, ay), (bx, by)) = (px(a), px(b));
                writeln!(out, "<line x1=\"{ax:.6}\" y1=\"{ay:.6}\" x2=\"{bx:.6}\" y2=\"{by:.6}\"/>").unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}
