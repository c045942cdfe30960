//! Straight-line tracing across glued faces.
//!
//! A direction leaving a vertex class is pinned down by a [`Position`]: a
//! corner together with a vector lying in that corner's half-open wedge
//! `[out, in)`. Listing the positions of a fixed set of directions in
//! counterclockwise order around the class gives exact angle bookkeeping.

use serde::Serialize;

use crate::complex::{Corner, EdgeRef, FlatComplex, Topology};
use crate::error::TraceError;
use crate::field::QSqrt2;
use crate::geom::{self, Point2, Vec2};

/// A direction at a vertex class, attached to the corner whose wedge holds it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Position {
    pub corner: Corner,
    pub dir: Vec2,
}

/// Moves a direction sitting on a corner's incoming ray to the next corner,
/// where it is the outgoing ray.
pub fn canonical_corner(c: &FlatComplex, topo: &Topology, corner: Corner, d: &Vec2) -> Corner {
    let (_, inn) = topo.corner_rays(c, corner);
    if geom::same_direction(&inn, d) {
        topo.next_ccw(c, corner)
    } else {
        corner
    }
}

/// Positions of the directions `dirs` around vertex class `class`, in
/// counterclockwise order starting from the first member corner.
pub fn around(c: &FlatComplex, topo: &Topology, class: usize, dirs: &[Vec2]) -> Vec<Position> {
    let mut out = Vec::new();
    for &corner in &topo.classes[class].members {
        let (o, inn) = topo.corner_rays(c, corner);
        let mut here: Vec<&Vec2> = dirs.iter().filter(|d| geom::in_wedge(&o, &inn, d)).collect();
        here.sort_by(|x, y| geom::ccw_cmp_from(&o, x, y));
        out.extend(here.into_iter().map(|d| Position { corner, dir: d.clone() }));
    }
    out
}

/// Index of `pos` in a list produced by [`around`].
pub fn index_of(list: &[Position], pos: &Position) -> Option<usize> {
    list.iter().position(|p| p.corner == pos.corner && geom::same_direction(&p.dir, &pos.dir))
}

/// Where a trace is within a face: at a polygon vertex, on an edge, or in
/// the interior (only for truncated ends).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Boundary {
    Vertex(usize),
    Edge(usize),
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub face: usize,
    pub face_id: String,
    pub entry: Point2,
    pub exit: Point2,
    pub entry_at: Boundary,
    pub exit_at: Boundary,
    /// Parameter range along the direction vector.
    pub t0: QSqrt2,
    pub t1: QSqrt2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TraceEnd {
    Cone { corner: Corner, class: usize },
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TracedSegment {
    pub start: Position,
    pub start_class: usize,
    /// Index of the start among the positions of `direction` around the class.
    pub wedge: usize,
    pub direction: Vec2,
    pub steps: Vec<Step>,
    pub end: TraceEnd,
    /// Final parameter: the segment is `start + t·direction`, `t ∈ [0, t_end]`.
    pub t_end: QSqrt2,
    pub sq_len: QSqrt2,
}

impl TracedSegment {
    pub fn is_saddle_connection(&self) -> bool {
        matches!(self.end, TraceEnd::Cone { .. })
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.end, TraceEnd::Cone { class, .. } if class == self.start_class)
    }

    pub fn end_class(&self) -> Option<usize> {
        match self.end {
            TraceEnd::Cone { class, .. } => Some(class),
            TraceEnd::Truncated => None,
        }
    }

    /// Arrival position: the reversed direction at the end corner.
    pub fn end_position(&self) -> Option<Position> {
        match self.end {
            TraceEnd::Cone { corner, .. } => Some(Position { corner, dir: -&self.direction }),
            TraceEnd::Truncated => None,
        }
    }

    pub fn holonomy(&self) -> Vec2 {
        self.direction.scale(&self.t_end)
    }
}

/// How far a trace may run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    /// Stop at parameter `t`; the final step is clipped exactly.
    Param(QSqrt2),
    /// Stop before the squared length exceeds the bound; the trace is cut
    /// back to the last face transition inside the bound.
    SqLen(QSqrt2),
}

const MAX_STEPS: usize = 1_000_000;

/// First boundary contact of the ray `q + t·d`, `t > 0`, inside face `f`.
fn next_hit(c: &FlatComplex, f: usize, q: &Point2, d: &Vec2, at: Boundary) -> Option<(QSqrt2, Boundary)> {
    let verts = &c.faces[f].vertices;
    let n = verts.len();
    let dd = d.norm2();
    let mut best: Option<(QSqrt2, Boundary)> = None;
    let mut offer = |t: QSqrt2, b: Boundary| {
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            best = Some((t, b));
        }
    };
    for (k, v) in verts.iter().enumerate() {
        if at == Boundary::Vertex(k) {
            continue;
        }
        let w = v - q;
        if d.cross(&w).is_zero() && d.dot(&w).is_positive() {
            offer(&d.dot(&w) / &dd, Boundary::Vertex(k));
        }
    }
    for e in 0..n {
        if at == Boundary::Edge(e) {
            continue;
        }
        let a = &verts[e];
        let ab = &verts[(e + 1) % n] - a;
        let den = d.cross(&ab);
        if den.is_zero() {
            continue;
        }
        let aq = a - q;
        let t = &aq.cross(&ab) / &den;
        if !t.is_positive() {
            continue;
        }
        let s = &aq.cross(d) / &den;
        if s.is_positive() && s < QSqrt2::one() {
            offer(t, Boundary::Edge(e));
        }
    }
    best
}

/// Traces from `start` along its direction scaled as `d`.
pub fn walk(c: &FlatComplex, topo: &Topology, start: &Position, limit: &Limit) -> Result<TracedSegment, TraceError> {
    let d = start.dir.clone();
    if d.is_zero() {
        return Err(TraceError::ZeroDirection);
    }
    let dd = d.norm2();
    let start_class = topo.class_of(start.corner);
    let wedge = index_of(&around(c, topo, start_class, std::slice::from_ref(&d)), start)
        .ok_or(TraceError::AmbiguousWedge { wedge: usize::MAX })?;
    let mut f = start.corner.face;
    let mut q = c.vertex(start.corner).clone();
    let mut at = Boundary::Vertex(start.corner.vertex);
    let mut t = QSqrt2::zero();
    let mut steps = Vec::new();
    let end;
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > MAX_STEPS {
            return Err(TraceError::Lost);
        }
        let (dt, hit) = next_hit(c, f, &q, &d, at).ok_or(TraceError::Lost)?;
        let t_new = &t + &dt;
        let over = match limit {
            Limit::Param(l) => t_new > *l,
            Limit::SqLen(m) => &(&t_new * &t_new) * &dd > *m,
        };
        if over {
            if let Limit::Param(l) = limit {
                let p = &q + &d.scale(&(l - &t));
                if *l > t {
                    steps.push(Step {
                        face: f,
                        face_id: c.faces[f].id.clone(),
                        entry: q,
                        exit: p,
                        entry_at: at,
                        exit_at: Boundary::Interior,
                        t0: t,
                        t1: l.clone(),
                    });
                }
                t = l.clone();
            }
            end = TraceEnd::Truncated;
            break;
        }
        let p = &q + &d.scale(&dt);
        steps.push(Step {
            face: f,
            face_id: c.faces[f].id.clone(),
            entry: q,
            exit: p.clone(),
            entry_at: at,
            exit_at: hit,
            t0: t.clone(),
            t1: t_new.clone(),
        });
        t = t_new;
        match hit {
            Boundary::Vertex(k) => {
                let back = -&d;
                let corner = canonical_corner(c, topo, Corner { face: f, vertex: k }, &back);
                let class = topo.class_of(corner);
                if topo.classes[class].is_cone_point() {
                    end = TraceEnd::Cone { corner, class };
                    break;
                }
                let cont = around(c, topo, class, std::slice::from_ref(&d));
                let next = cont.first().ok_or(TraceError::Lost)?;
                f = next.corner.face;
                q = c.vertex(next.corner).clone();
                at = Boundary::Vertex(next.corner.vertex);
            }
            Boundary::Edge(e) => {
                let er = EdgeRef { face: f, edge: e };
                let g = topo.partner(er);
                q = &p + &topo.translation(c, er);
                f = g.face;
                at = Boundary::Edge(g.edge);
            }
            Boundary::Interior => unreachable!("hits are always on the boundary"),
        }
        if matches!(limit, Limit::Param(l) if t == *l) {
            end = TraceEnd::Truncated;
            break;
        }
    }
    let sq_len = &(&t * &t) * &dd;
    Ok(TracedSegment { start: start.clone(), start_class, wedge, direction: d, steps, end, t_end: t, sq_len })
}

/// Traces `direction` out of vertex class `class`, in the `wedge`-th
/// position of that direction around the class.
pub fn trace_from_cone(
    c: &FlatComplex,
    class: usize,
    direction: &Vec2,
    wedge: usize,
    max_sq_len: &QSqrt2,
) -> Result<TracedSegment, TraceError> {
    let topo = c.topology()?;
    if direction.is_zero() {
        return Err(TraceError::ZeroDirection);
    }
    if topo.cone_classes().is_empty() {
        return Err(TraceError::NoConePoint);
    }
    if class >= topo.classes.len() || !topo.classes[class].is_cone_point() {
        return Err(TraceError::NotAConePoint(class));
    }
    let positions = around(c, &topo, class, std::slice::from_ref(direction));
    let start = positions.get(wedge).ok_or(TraceError::AmbiguousWedge { wedge })?;
    walk(c, &topo, start, &Limit::SqLen(max_sq_len.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::unit_square_torus;

    #[test]
    fn torus_has_no_cone_point() {
        let t = unit_square_torus();
        let d = Point2::new(QSqrt2::one(), QSqrt2::zero());
        assert_eq!(trace_from_cone(&t, 0, &d, 0, &QSqrt2::one()), Err(TraceError::NoConePoint));
    }

    #[test]
    fn torus_walk_passes_regular_vertex() {
        let t = unit_square_torus();
        let topo = t.topology().unwrap();
        let d = Point2::new(QSqrt2::one(), QSqrt2::one());
        let start = around(&t, &topo, 0, std::slice::from_ref(&d)).remove(0);
        let seg = walk(&t, &topo, &start, &Limit::Param(QSqrt2::from_int(3))).unwrap();
        assert_eq!(seg.end, TraceEnd::Truncated);
        assert_eq!(seg.steps.len(), 3);
        assert_eq!(seg.sq_len, QSqrt2::from_int(18));
        for s in &seg.steps {
            assert_eq!(&s.exit - &s.entry, d);
        }
    }

    #[test]
    fn regular_point_positions() {
        let t = unit_square_torus();
        let topo = t.topology().unwrap();
        let dirs = [Point2::new(QSqrt2::one(), QSqrt2::zero()), Point2::new(-QSqrt2::one(), QSqrt2::zero())];
        assert_eq!(around(&t, &topo, 0, &dirs).len(), 2);
    }
}
