//! Twins of closed saddle connections and the slit-and-reglue surgery.
//!
//! Angles at the cone point are counted in half-turns on the list of
//! positions of `{d, −d}` around the point, where `d` is the direction of
//! the saddle connection. Consecutive entries of that list are exactly π
//! apart.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{EdgeRef, FlatComplex, Topology};
use crate::error::{SurgeryError, TraceError};
use crate::field::QSqrt2;
use crate::geom::{self, Point2};
use crate::mesh::{param_along, EdgeId, Mesh};
use crate::search::SaddleConnection;
use crate::trace::{self, around, index_of, Boundary, Limit, Position, TraceEnd, TracedSegment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Twin {
    pub segment: TracedSegment,
    /// Counterclockwise angle from the base's start, in units of 2π.
    pub turns: usize,
    pub embedded: bool,
    pub hits_saddle: bool,
    pub ends_at_saddle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinSet {
    pub base: SaddleConnection,
    pub twins: Vec<Twin>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// The angle between the twin's start and the base's start is 2π.
    pub start_angle_two_pi: bool,
    /// The clockwise angle from the base's end to the twin's start is π.
    pub end_angle_pi: bool,
    /// The straight continuation of the twin is a saddle connection whose
    /// start and end make an angle π (it bounds a cylinder).
    pub continuation_bounds_cylinder: bool,
    pub embedded: bool,
}

impl AdmissibilityReport {
    pub fn conditions(&self) -> (bool, bool, bool) {
        (self.start_angle_two_pi, self.end_angle_pi, self.continuation_bounds_cylinder)
    }

    pub fn all(&self) -> bool {
        self.start_angle_two_pi && self.end_angle_pi && self.continuation_bounds_cylinder && self.embedded
    }
}

/// Positions of `±d` around the class where `sc` starts.
fn axis_positions(c: &FlatComplex, topo: &Topology, sc: &TracedSegment) -> Vec<Position> {
    let d = sc.direction.clone();
    around(c, topo, sc.start_class, &[d.clone(), -&d])
}

fn locate(list: &[Position], p: &Position) -> Result<usize, SurgeryError> {
    index_of(list, p).ok_or(SurgeryError::Trace(TraceError::Lost))
}

/// Counterclockwise angle from position `a` to position `b`, in half-turns.
fn ccw_half_turns(list: &[Position], a: usize, b: usize) -> usize {
    (b + list.len() - a) % list.len()
}

fn unsigned_half_turns(list: &[Position], a: usize, b: usize) -> usize {
    let k = ccw_half_turns(list, a, b);
    k.min(list.len() - k)
}

fn require_closed(sc: &SaddleConnection) -> Result<(), SurgeryError> {
    if sc.is_closed() {
        Ok(())
    } else {
        Err(SurgeryError::NotClosed)
    }
}

/// The same connection traversed backwards.
pub fn reverse(c: &FlatComplex, sc: &SaddleConnection) -> Result<SaddleConnection, TraceError> {
    let topo = c.topology()?;
    let start = sc.end_position().ok_or(TraceError::Lost)?;
    let start = Position { corner: start.corner, dir: -&sc.direction };
    trace::walk(c, &topo, &start, &Limit::Param(sc.t_end.clone()))
}

/// Angle from the start to the end of a closed connection, in half-turns
/// counterclockwise.
pub fn return_angle(c: &FlatComplex, sc: &SaddleConnection) -> Result<usize, SurgeryError> {
    require_closed(sc)?;
    let topo = c.topology()?;
    let list = axis_positions(c, &topo, sc);
    let s = locate(&list, &sc.start)?;
    let e = locate(&list, &sc.end_position().ok_or(SurgeryError::NotClosed)?)?;
    Ok(ccw_half_turns(&list, s, e))
}

fn trace_twin(
    c: &FlatComplex,
    topo: &Topology,
    sc: &SaddleConnection,
    start: &Position,
) -> Result<TracedSegment, TraceError> {
    trace::walk(c, topo, start, &Limit::Param(sc.t_end.clone()))
}

/// The `d` segments leaving the cone point with the developed image of `sc`
/// (`d` the order of the point), at angles 2π, 4π, … from its start.
pub fn twins_of(c: &FlatComplex, sc: &SaddleConnection) -> Result<TwinSet, SurgeryError> {
    let topo = c.topology()?;
    let order = topo.classes[sc.start_class].order as usize;
    let list = axis_positions(c, &topo, sc);
    let s = locate(&list, &sc.start)?;
    let mut twins = Vec::new();
    for j in 1..=order {
        let start = Position { corner: list[(s + 2 * j) % list.len()].corner, dir: sc.direction.clone() };
        let seg = trace_twin(c, &topo, sc, &start)?;
        let (hits_saddle, ends_at_saddle) = match seg.end {
            TraceEnd::Cone { .. } if seg.t_end < sc.t_end => (true, false),
            TraceEnd::Cone { .. } => (false, true),
            TraceEnd::Truncated => (false, false),
        };
        let embedded = !hits_saddle && !ends_at_saddle && embedded_pair(c, &topo, sc, &seg);
        twins.push(Twin { segment: seg, turns: j, embedded, hits_saddle, ends_at_saddle });
    }
    Ok(TwinSet { base: sc.clone(), twins })
}

fn check_twin(
    c: &FlatComplex,
    topo: &Topology,
    sc: &SaddleConnection,
    t: &TracedSegment,
) -> Result<(Vec<Position>, usize, usize, usize), SurgeryError> {
    require_closed(sc)?;
    if t.start_class != sc.start_class
        || !geom::same_direction(&t.direction, &sc.direction)
        || t.holonomy() != sc.holonomy()
    {
        return Err(SurgeryError::NotATwin);
    }
    let list = axis_positions(c, topo, sc);
    let s = locate(&list, &sc.start)?;
    let e = locate(&list, &sc.end_position().ok_or(SurgeryError::NotClosed)?)?;
    let k = index_of(&list, &t.start).ok_or(SurgeryError::NotATwin)?;
    if k == s {
        return Err(SurgeryError::NotATwin);
    }
    Ok((list, s, e, k))
}

/// Left iff the clockwise angle from the end of `sc` to the start of `t` is π.
pub fn classify_twin(c: &FlatComplex, sc: &SaddleConnection, t: &TracedSegment) -> Result<Side, SurgeryError> {
    let topo = c.topology()?;
    let (list, _, e, k) = check_twin(c, &topo, sc, t)?;
    Ok(if ccw_half_turns(&list, k, e) == 1 { Side::Left } else { Side::Right })
}

/// The twin on the given side: clockwise (left) or counterclockwise (right)
/// by π from the end of `sc`.
pub fn twin_on_side(c: &FlatComplex, sc: &SaddleConnection, side: Side) -> Result<TracedSegment, SurgeryError> {
    require_closed(sc)?;
    let topo = c.topology()?;
    let list = axis_positions(c, &topo, sc);
    let e = locate(&list, &sc.end_position().ok_or(SurgeryError::NotClosed)?)?;
    let n = list.len();
    let k = match side {
        Side::Left => (e + n - 1) % n,
        Side::Right => (e + 1) % n,
    };
    let start = Position { corner: list[k].corner, dir: sc.direction.clone() };
    if !geom::same_direction(&list[k].dir, &sc.direction) {
        return Err(SurgeryError::NotATwin);
    }
    Ok(trace_twin(c, &topo, sc, &start)?)
}

pub fn surgery_admissible(
    c: &FlatComplex,
    sc: &SaddleConnection,
    t: &TracedSegment,
) -> Result<AdmissibilityReport, SurgeryError> {
    let topo = c.topology()?;
    let (list, s, e, k) = check_twin(c, &topo, sc, t)?;
    let start_angle_two_pi = unsigned_half_turns(&list, k, s) == 2;
    let end_angle_pi = ccw_half_turns(&list, k, e) == 1;
    // continue the twin until it meets a cone point
    let bound = &sc.sq_len * &QSqrt2::from_int(10_000);
    let cont = trace::walk(c, &topo, &t.start, &Limit::SqLen(bound))?;
    let continuation_bounds_cylinder = match cont.end_position() {
        Some(end) if cont.end_class() == Some(sc.start_class) => {
            let ce = locate(&list, &end)?;
            unsigned_half_turns(&list, k, ce) == 1
        }
        _ => false,
    };
    let embedded = matches!(t.end, TraceEnd::Truncated) && embedded_pair(c, &topo, sc, t);
    Ok(AdmissibilityReport { start_angle_two_pi, end_angle_pi, continuation_bounds_cylinder, embedded })
}

/// A chord of a traced segment inside one face chart.
struct Chord {
    seg: usize,
    step: usize,
    face: usize,
    a: Point2,
    b: Point2,
}

/// Canonical key of a surface point sitting on an edge or at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
enum PointKey {
    Class(usize),
    Edge(EdgeRef, Point2),
}

fn point_key(c: &FlatComplex, topo: &Topology, face: usize, p: &Point2) -> Option<PointKey> {
    let verts = &c.faces[face].vertices;
    let n = verts.len();
    if let Some(k) = verts.iter().position(|v| v == p) {
        return Some(PointKey::Class(topo.class_of(crate::complex::Corner { face, vertex: k })));
    }
    for k in 0..n {
        if geom::strictly_inside_segment(p, &verts[k], &verts[(k + 1) % n]) {
            let e = EdgeRef { face, edge: k };
            let q = topo.partner(e);
            if e <= q {
                return Some(PointKey::Edge(e, p.clone()));
            }
            return Some(PointKey::Edge(q, p + &topo.translation(c, e)));
        }
    }
    None
}

/// The base and the twin are embedded and meet only at cone points.
fn embedded_pair(c: &FlatComplex, topo: &Topology, sc: &SaddleConnection, t: &TracedSegment) -> bool {
    let segs = [sc, t];
    let mut chords = Vec::new();
    for (si, s) in segs.iter().enumerate() {
        for (k, st) in s.steps.iter().enumerate() {
            chords.push(Chord { seg: si, step: k, face: st.face, a: st.entry.clone(), b: st.exit.clone() });
            // a chord lying along an edge also shows up in the partner chart
            let verts = &c.faces[st.face].vertices;
            let n = verts.len();
            for e in 0..n {
                let (p, q) = (&verts[e], &verts[(e + 1) % n]);
                if geom::on_segment(&st.entry, p, q) && geom::on_segment(&st.exit, p, q) {
                    let er = EdgeRef { face: st.face, edge: e };
                    let shift = topo.translation(c, er);
                    chords.push(Chord {
                        seg: si,
                        step: k,
                        face: topo.partner(er).face,
                        a: &st.entry + &shift,
                        b: &st.exit + &shift,
                    });
                }
            }
        }
    }
    let is_cone_vertex = |face: usize, p: &Point2| {
        c.faces[face]
            .vertices
            .iter()
            .position(|v| v == p)
            .is_some_and(|k| topo.is_cone(crate::complex::Corner { face, vertex: k }))
    };
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (x, y) = (&chords[i], &chords[j]);
            if x.face != y.face || (x.seg == y.seg && x.step == y.step) {
                continue;
            }
            if !geom::segments_intersect(&x.a, &x.b, &y.a, &y.b) {
                continue;
            }
            let dx = &x.b - &x.a;
            let dy = &y.b - &y.a;
            if dx.cross(&dy).is_zero() {
                // collinear overlap or touching at a shared endpoint
                let shared = [&x.a, &x.b].into_iter().find(|p| **p == y.a || **p == y.b);
                let overlap = geom::strictly_inside_segment(&y.a, &x.a, &x.b)
                    || geom::strictly_inside_segment(&y.b, &x.a, &x.b)
                    || geom::strictly_inside_segment(&x.a, &y.a, &y.b)
                    || (x.a == y.a && x.b == y.b)
                    || (x.a == y.b && x.b == y.a);
                if overlap {
                    return false;
                }
                if let Some(p) = shared {
                    if is_cone_vertex(x.face, p) || consecutive(x, y, p) {
                        continue;
                    }
                }
                return false;
            }
            let den = dx.cross(&dy);
            let s = &(&y.a - &x.a).cross(&dy) / &den;
            let p = &x.a + &dx.scale(&s);
            if is_cone_vertex(x.face, &p) || consecutive(x, y, &p) {
                continue;
            }
            return false;
        }
    }
    // transitions between faces must not collide on the surface
    let mut seen: HashMap<PointKey, (usize, usize)> = HashMap::new();
    for (si, s) in segs.iter().enumerate() {
        for (k, st) in s.steps.iter().enumerate() {
            let last = k + 1 == s.steps.len();
            if last && matches!(s.end, TraceEnd::Cone { .. }) {
                continue;
            }
            if matches!(st.exit_at, Boundary::Interior) {
                continue;
            }
            if let Some(key) = point_key(c, topo, st.face, &st.exit) {
                if let PointKey::Class(cl) = key {
                    if topo.classes[cl].is_cone_point() {
                        continue;
                    }
                }
                if seen.insert(key, (si, k)).is_some() {
                    return false;
                }
            }
        }
    }
    true
}

fn consecutive(x: &Chord, y: &Chord, p: &Point2) -> bool {
    x.seg == y.seg && (x.step + 1 == y.step && x.b == *p && y.a == *p || y.step + 1 == x.step && y.b == *p && x.a == *p)
}

/// Inserts the chord `a -> b` of lineage `orig` into the mesh.
fn insert_chord(m: &mut Mesh, orig: usize, a: &Point2, b: &Point2) -> Result<(), SurgeryError> {
    let d = b - a;
    m.ensure_vertex(orig, a).ok_or(SurgeryError::TwinNotEmbedded)?;
    if m.ensure_vertex(orig, b).is_none() {
        // b is inside a face: cut through to the boundary, then split there
        let mid = Point2::new((&a.x + &b.x) / QSqrt2::from_int(2), (&a.y + &b.y) / QSqrt2::from_int(2));
        let f = m.face_containing(orig, &mid).ok_or(SurgeryError::TwinNotEmbedded)?;
        let poly = m.polygon(f);
        let far = first_exit(&poly, b, &d).ok_or(SurgeryError::TwinNotEmbedded)?;
        m.ensure_vertex(orig, &far).ok_or(SurgeryError::TwinNotEmbedded)?;
        cut(m, f, a, &far)?;
        let h = m.edge_between(orig, a, &far).ok_or(SurgeryError::TwinNotEmbedded)?;
        m.split_edge(h, b.clone());
        return Ok(());
    }
    if m.edge_between(orig, a, b).is_some() {
        return Ok(());
    }
    let mid = Point2::new((&a.x + &b.x) / QSqrt2::from_int(2), (&a.y + &b.y) / QSqrt2::from_int(2));
    let f = m.face_containing(orig, &mid).ok_or(SurgeryError::TwinNotEmbedded)?;
    cut(m, f, a, b)
}

fn cut(m: &mut Mesh, f: usize, a: &Point2, b: &Point2) -> Result<(), SurgeryError> {
    let cyc = m.faces[f].clone().ok_or(SurgeryError::TwinNotEmbedded)?;
    let ha = cyc.iter().copied().find(|&h| m.edges[h].origin == *a).ok_or(SurgeryError::TwinNotEmbedded)?;
    let hb = cyc.iter().copied().find(|&h| m.edges[h].origin == *b).ok_or(SurgeryError::TwinNotEmbedded)?;
    m.split_face(ha, hb);
    Ok(())
}

/// First boundary point of `poly` hit by the ray from interior point `p`.
fn first_exit(poly: &[Point2], p: &Point2, d: &Point2) -> Option<Point2> {
    let n = poly.len();
    let mut best: Option<QSqrt2> = None;
    for k in 0..n {
        let a = &poly[k];
        let ab = &poly[(k + 1) % n] - a;
        let den = d.cross(&ab);
        if den.is_zero() {
            continue;
        }
        let ap = a - p;
        let t = &ap.cross(&ab) / &den;
        let s = &ap.cross(d) / &den;
        if t.is_positive() && s.signum() >= 0 && s <= QSqrt2::one() && best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    }
    best.map(|t| p + &d.scale(&t))
}

/// Half-edges along the segment, oriented with it, with their parameters.
fn pieces(m: &Mesh, s: &TracedSegment) -> Vec<(EdgeId, QSqrt2, QSqrt2)> {
    let d = &s.direction;
    let mut out = Vec::new();
    for st in &s.steps {
        let orig = st.face;
        for f in m.live_faces().filter(|&f| m.lineage[f] == orig) {
            for &h in m.faces[f].as_ref().expect("live") {
                let (o, e) = (&m.edges[h].origin, m.end(h));
                let v = e - o;
                if geom::same_direction(&v, d)
                    && geom::on_segment(o, &st.entry, &st.exit)
                    && geom::on_segment(e, &st.entry, &st.exit)
                {
                    let t0 = &st.t0 + &param_along(&st.entry, d, o);
                    let t1 = &st.t0 + &param_along(&st.entry, d, e);
                    out.push((h, t0, t1));
                }
            }
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

fn subdivide(m: &mut Mesh, s: &TracedSegment, cuts: &[QSqrt2]) {
    for u in cuts {
        let hit = pieces(m, s).into_iter().find(|(_, t0, t1)| t0 < u && u < t1);
        if let Some((h, t0, _)) = hit {
            let p = &m.edges[h].origin + &s.direction.scale(&(u - &t0));
            m.split_edge(h, p);
        }
    }
}

/// Cuts along the closed connection `sc` and its twin `t` and reglues the
/// four sides crosswise.
pub fn slit_and_reglue(c: &FlatComplex, sc: &SaddleConnection, t: &TracedSegment) -> Result<FlatComplex, SurgeryError> {
    let topo = c.topology()?;
    let (list, s, _, k) = check_twin(c, &topo, sc, t)?;
    if let TraceEnd::Cone { .. } = t.end {
        return Err(if t.t_end < sc.t_end { SurgeryError::TwinHitsSaddle } else { SurgeryError::TwinEndsAtSaddle });
    }
    let turns = unsigned_half_turns(&list, k, s);
    if turns != 2 {
        return Err(SurgeryError::AngleNot2Pi { half_turns: turns });
    }
    if !embedded_pair(c, &topo, sc, t) {
        return Err(SurgeryError::TwinNotEmbedded);
    }
    let mut m = Mesh::from_complex(c);
    for seg in [sc, t] {
        for st in &seg.steps {
            insert_chord(&mut m, st.face, &st.entry, &st.exit)?;
        }
    }
    let breaks = |ps: &[(EdgeId, QSqrt2, QSqrt2)]| -> Vec<QSqrt2> { ps.iter().map(|p| p.1.clone()).skip(1).collect() };
    let bg = breaks(&pieces(&m, sc));
    let bt = breaks(&pieces(&m, t));
    subdivide(&mut m, sc, &bt);
    subdivide(&mut m, t, &bg);
    let pg = pieces(&m, sc);
    let pt = pieces(&m, t);
    if pg.len() != pt.len() || pg.iter().zip(&pt).any(|(a, b)| a.1 != b.1 || a.2 != b.2) {
        return Err(SurgeryError::TwinNotEmbedded);
    }
    for ((lg, _, _), (lt, _, _)) in pg.iter().zip(&pt) {
        let rg = m.edges[*lg].twin;
        let rt = m.edges[*lt].twin;
        m.edges[*lg].twin = rt;
        m.edges[rt].twin = *lg;
        m.edges[*lt].twin = rg;
        m.edges[rg].twin = *lt;
    }
    let raw = m.to_complex();
    let report = raw.validate();
    if report.violations.contains(&crate::complex::Violation::Disconnected) {
        return Err(SurgeryError::DisconnectedResult);
    }
    if !report.is_valid() {
        return Err(SurgeryError::InvalidResult(report));
    }
    m.simplify();
    let out = m.to_complex();
    let report = out.validate();
    if !report.is_valid() {
        return Err(SurgeryError::InvalidResult(report));
    }
    Ok(out)
}

/// Surgery along `sc` and its twin on `side`.
pub fn surgery(c: &FlatComplex, sc: &SaddleConnection, side: Side) -> Result<FlatComplex, SurgeryError> {
    let t = twin_on_side(c, sc, side)?;
    slit_and_reglue(c, sc, &t)
}
