//! Saddle connection enumeration by visibility-window propagation.
//!
//! The search runs on a triangulated copy of the complex. From every corner
//! at a cone point, the corner's out-ray is traced exactly with the walker
//! and the open wedge is pushed through triangles as a window of directions.
//! A triangle vertex strictly inside a window splits it; a window whose
//! visible part of the exit edge lies beyond the search radius is dropped.
//! Every direction at a cone point is examined exactly once.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::complex::{Corner, EdgeRef, Face, FlatComplex, Gluing, Topology};
use crate::error::TraceError;
use crate::field::QSqrt2;
use crate::geom::{self, Point2, Vec2};
use crate::trace::{self, Limit, Position, TraceEnd, TracedSegment};

/// A saddle connection: a trace that ends at a cone point with no cone
/// point in its interior.
pub type SaddleConnection = TracedSegment;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Maximum number of windows to process before giving up.
    pub budget: Option<usize>,
}

struct Triangulated {
    complex: FlatComplex,
    topo: Topology,
    /// Original corner of every triangle corner.
    origin: Vec<[Corner; 3]>,
}

fn triangulated(c: &FlatComplex) -> Triangulated {
    let mut faces = Vec::new();
    let mut origin = Vec::new();
    // (face, from, to) -> triangle edge, original vertex indices
    let mut edge_at: HashMap<(usize, usize, usize), EdgeRef> = HashMap::new();
    for (fi, face) in c.faces.iter().enumerate() {
        for tri in geom::triangulate(&face.vertices) {
            let t = faces.len();
            faces.push(Face {
                id: format!("{}#{}", face.id, t),
                vertices: tri.iter().map(|&i| face.vertices[i].clone()).collect(),
            });
            origin.push(tri.map(|i| Corner { face: fi, vertex: i }));
            for k in 0..3 {
                edge_at.insert((fi, tri[k], tri[(k + 1) % 3]), EdgeRef { face: t, edge: k });
            }
        }
    }
    let mut gluings = Vec::new();
    for g in &c.gluings {
        let key = |e: EdgeRef| {
            let n = c.face_len(e.face);
            edge_at[&(e.face, e.edge, (e.edge + 1) % n)]
        };
        gluings.push(Gluing(key(g.0), key(g.1)));
    }
    let mut diagonals: Vec<_> = edge_at
        .iter()
        .filter(|((f, a, b), _)| {
            let n = c.face_len(*f);
            (a + 1) % n != *b && a < b
        })
        .map(|(&(f, a, b), &e)| (f, a, b, e))
        .collect();
    diagonals.sort();
    for (f, a, b, e) in diagonals {
        gluings.push(Gluing(e, edge_at[&(f, b, a)]));
    }
    let complex = FlatComplex { faces, gluings, marks: Default::default() };
    let topo = complex.topology().expect("triangulation of a valid complex is valid");
    Triangulated { complex, topo, origin }
}

struct Window {
    start: Corner,
    tri: usize,
    exit: usize,
    offset: Vec2,
    cw: Vec2,
    ccw: Vec2,
}

fn ray_line(ray: &Vec2, a: &Point2, b: &Point2) -> Point2 {
    let ab = b - a;
    let s = &a.cross(&ab) / &ray.cross(&ab);
    ray.scale(&s)
}

/// Saddle connections up to squared length `max_sq_len`, one per
/// unoriented connection (the orientation with an upper holonomy vector is
/// kept). Sorted by squared length, then direction, then start corner.
pub fn saddle_connections_up_to(c: &FlatComplex, max_sq_len: &QSqrt2) -> Result<Vec<SaddleConnection>, TraceError> {
    saddle_connections_with(c, max_sq_len, &SearchOptions::default())
}

pub fn saddle_connections_with(
    c: &FlatComplex,
    max_sq_len: &QSqrt2,
    opts: &SearchOptions,
) -> Result<Vec<SaddleConnection>, TraceError> {
    let topo = c.topology()?;
    if !max_sq_len.is_positive() || topo.cone_classes().is_empty() {
        return Ok(Vec::new());
    }
    let tc = triangulated(c);
    let (t, tt) = (&tc.complex, &tc.topo);
    let r2 = max_sq_len;
    let mut found: Vec<(Position, Vec2)> = Vec::new();
    let mut stack: Vec<Window> = Vec::new();
    let mut processed = 0usize;

    let to_orig =
        |pos: &Position| Position { corner: tc.origin[pos.corner.face][pos.corner.vertex], dir: pos.dir.clone() };

    for (ti, face) in t.faces.iter().enumerate() {
        for k in 0..3 {
            let corner = Corner { face: ti, vertex: k };
            if !tt.is_cone(corner) {
                continue;
            }
            let apex = &face.vertices[k];
            let out = &face.vertices[(k + 1) % 3] - apex;
            let inn = &face.vertices[(k + 2) % 3] - apex;
            // the out-ray, traced exactly in the original complex
            let pos = Position { corner, dir: out.clone() };
            let seg = trace::walk(c, &topo, &to_orig(&pos), &Limit::SqLen(r2.clone()))?;
            if seg.is_saddle_connection() {
                found.push((pos, seg.holonomy()));
            }
            stack.push(Window { start: corner, tri: ti, exit: (k + 1) % 3, offset: -apex, cw: out, ccw: inn });
        }
    }

    while let Some(w) = stack.pop() {
        processed += 1;
        if opts.budget.is_some_and(|b| processed > b) {
            return Err(TraceError::BudgetExceeded { budget: opts.budget.unwrap_or(0) });
        }
        let tri = &t.faces[w.tri].vertices;
        let e1 = &tri[w.exit] + &w.offset;
        let e2 = &tri[(w.exit + 1) % 3] + &w.offset;
        // exit edge runs e1 -> e2, which is counterclockwise to clockwise as seen from the apex
        let near = geom::dist2_origin_segment(&ray_line(&w.cw, &e1, &e2), &ray_line(&w.ccw, &e1, &e2));
        if near > *r2 {
            continue;
        }
        let er = EdgeRef { face: w.tri, edge: w.exit };
        let p = tt.partner(er);
        let offset = &w.offset - &tt.translation(t, er);
        let verts = &t.faces[p.face].vertices;
        let apex_idx = (p.edge + 2) % 3;
        let big_w = &verts[apex_idx] + &offset;
        let after_cw = w.cw.cross(&big_w).signum();
        let before_ccw = big_w.cross(&w.ccw).signum();
        // entry edge P -> Q: Q is the clockwise end, so Q -> W is edge +1
        let cw_exit = (p.edge + 1) % 3;
        let ccw_exit = (p.edge + 2) % 3;
        if after_cw > 0 && before_ccw > 0 {
            if big_w.norm2() <= *r2 {
                let target = Corner { face: p.face, vertex: apex_idx };
                let pos = Position { corner: w.start, dir: big_w.clone() };
                if tt.is_cone(target) {
                    found.push((pos, big_w.clone()));
                } else {
                    let seg = trace::walk(c, &topo, &to_orig(&pos), &Limit::SqLen(r2.clone()))?;
                    if seg.is_saddle_connection() {
                        found.push((pos, seg.holonomy()));
                    }
                }
            }
            stack.push(Window {
                start: w.start,
                tri: p.face,
                exit: ccw_exit,
                offset: offset.clone(),
                cw: big_w.clone(),
                ccw: w.ccw,
            });
            stack.push(Window { start: w.start, tri: p.face, exit: cw_exit, offset, cw: w.cw, ccw: big_w });
        } else if after_cw <= 0 {
            stack.push(Window { start: w.start, tri: p.face, exit: ccw_exit, offset, cw: w.cw, ccw: w.ccw });
        } else {
            stack.push(Window { start: w.start, tri: p.face, exit: cw_exit, offset, cw: w.cw, ccw: w.ccw });
        }
    }

    let mut out = Vec::new();
    for (pos, v) in found {
        if !v.is_upper() {
            continue;
        }
        let start = Position { corner: tc.origin[pos.corner.face][pos.corner.vertex], dir: v.clone() };
        let seg = trace::walk(c, &topo, &start, &Limit::Param(QSqrt2::one()))?;
        if !matches!(seg.end, TraceEnd::Cone { .. }) || seg.t_end != QSqrt2::one() {
            return Err(TraceError::Lost);
        }
        out.push(seg);
    }
    out.sort_by(compare_connections);
    Ok(out)
}

fn compare_connections(a: &SaddleConnection, b: &SaddleConnection) -> Ordering {
    a.sq_len
        .cmp(&b.sq_len)
        .then_with(|| a.holonomy().lex_cmp(&b.holonomy()))
        .then_with(|| a.start.corner.cmp(&b.start.corner))
}

/// Shortest saddle connections: the squared length and every connection
/// attaining it. The radius starts at 1 and doubles until something is found.
pub fn systole(c: &FlatComplex) -> Result<(QSqrt2, Vec<SaddleConnection>), TraceError> {
    systole_with(c, &SearchOptions::default())
}

pub fn systole_with(c: &FlatComplex, opts: &SearchOptions) -> Result<(QSqrt2, Vec<SaddleConnection>), TraceError> {
    let topo = c.topology()?;
    if topo.cone_classes().is_empty() {
        return Err(TraceError::NoConePoint);
    }
    let mut r2 = QSqrt2::one();
    loop {
        let all = saddle_connections_with(c, &r2, opts)?;
        if let Some(first) = all.first() {
            let best = first.sq_len.clone();
            let shortest = all.into_iter().take_while(|s| s.sq_len == best).collect();
            return Ok((best, shortest));
        }
        r2 = &r2 * &QSqrt2::from_int(4);
    }
}
