//! SVG drawings of complexes: one chart per face, glued edges sharing a
//! color, cuts dashed.

use std::fmt::Write;

use crate::complex::FlatComplex;
use crate::trace::TracedSegment;

/// Drawing units per unit of length.
pub const SCALE: f64 = 100.0;
const GAP: f64 = 0.5;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];

fn f(x: &crate::field::QSqrt2) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

pub fn render_svg(c: &FlatComplex, cuts: &[TracedSegment]) -> String {
    // lay faces out left to right
    let mut shift = Vec::new();
    let mut cursor = 0.0;
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for face in &c.faces {
        let xs: Vec<f64> = face.vertices.iter().map(|v| f(&v.x)).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in &face.vertices {
            ymin = ymin.min(f(&v.y));
            ymax = ymax.max(f(&v.y));
        }
        shift.push(cursor - lo);
        cursor += hi - lo + GAP;
    }
    let width = (cursor - GAP).max(0.0) + 2.0 * GAP;
    let height = (ymax - ymin).max(0.0) + 2.0 * GAP;
    let to = |face: usize, p: &crate::geom::Point2| {
        let x = (f(&p.x) + shift[face] + GAP) * SCALE;
        let y = (ymax - f(&p.y) + GAP) * SCALE;
        (x, y)
    };

    let mut color = vec![Vec::new(); c.faces.len()];
    for (i, face) in c.faces.iter().enumerate() {
        color[i] = vec!["#000000"; face.vertices.len()];
    }
    for (k, g) in c.gluings.iter().enumerate() {
        let col = PALETTE[k % PALETTE.len()];
        color[g.0.face][g.0.edge] = col;
        color[g.1.face][g.1.edge] = col;
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.2} {:.2}">"#,
        width * SCALE,
        height * SCALE,
        width * SCALE,
        height * SCALE
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (fi, face) in c.faces.iter().enumerate() {
        let pts: Vec<String> = face.vertices.iter().map(|v| to(fi, v)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(s, r##"<polygon points="{}" fill="#f4f4f4" stroke="none"/>"##, pts.join(" "));
        let n = face.vertices.len();
        for (e, col) in color[fi].iter().enumerate() {
            let (x1, y1) = to(fi, &face.vertices[e]);
            let (x2, y2) = to(fi, &face.vertices[(e + 1) % n]);
            let _ = writeln!(
                s,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{}" stroke-width="3"/>"#,
                col
            );
        }
        let (lx, ly) = to(fi, &face.vertices[0]);
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-size="14" fill="#555555">{}</text>"##,
            lx,
            ly + 30.0,
            xml(&face.id)
        );
    }
    for seg in cuts {
        for st in &seg.steps {
            let (x1, y1) = to(st.face, &st.entry);
            let (x2, y2) = to(st.face, &st.exit);
            let _ = writeln!(
                s,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#000000" stroke-width="2" stroke-dasharray="8 5"/>"##
            );
        }
    }
    for (label, v) in &c.marks {
        if v.face >= c.faces.len() || v.vertex >= c.faces[v.face].vertices.len() {
            continue;
        }
        let (x, y) = to(v.face, c.vertex(*v));
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="16">{}</text>"#, x + 6.0, y - 6.0, xml(label));
    }
    s.push_str("</svg>\n");
    s
}

fn xml(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::octagon0;

    #[test]
    fn renders_every_edge() {
        let svg = render_svg(&octagon0(), &[]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<line").count(), 10);
        assert!(svg.contains(">B'<"));
    }
}
