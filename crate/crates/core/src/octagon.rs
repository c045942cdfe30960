//! The regular octagon and its fake relatives.
//!
//! `Oct_n` is presented as one strip: a parallelogram cylinder of
//! circumference `2+√2` and height `√2/2` with a unit-height rectangle on
//! top. The only free data are the positions of `P_n` on the bottom circle
//! `B'D` and of `P'_n` on the top edge `A'D'`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::{Corner, EdgeRef, Face, FlatComplex, Gluing, Topology, VertexRef};
use crate::error::{ModelError, SurgeryError};
use crate::field::{consts, QSqrt2};
use crate::geom::{self, Point2, Vec2};
use crate::period::absolute_period_module;
use crate::search::SaddleConnection;
use crate::surgery::{self, Side};
use crate::trace::{self, around, index_of, Boundary, Limit, Position, TraceEnd};

fn p(x: QSqrt2, y: QSqrt2) -> Point2 {
    Point2::new(x, y)
}

fn e(face: usize, edge: usize) -> EdgeRef {
    EdgeRef { face, edge }
}

/// The unit-edge regular octagon cut into a hexagon and a trapezoid.
pub fn octagon0() -> FlatComplex {
    let h = consts::half_sqrt2();
    let z = QSqrt2::zero();
    let one = QSqrt2::one();
    let hex = vec![
        p(z.clone(), z.clone()),   // B'
        p(one.clone(), z.clone()), // C'
        p(&one + &h, h.clone()),   // F
        p(&one + &h, &one + &h),   // D'
        p(-&h, &one + &h),         // A'
        p(-&h, h.clone()),         // E
    ];
    let trap = vec![
        p(-&h, z.clone()),         // A
        p(&one + &h, z.clone()),   // D
        p(one.clone(), h.clone()), // C
        p(z.clone(), h.clone()),   // B
    ];
    let mut marks = BTreeMap::new();
    for (label, face, vertex) in [
        ("B'", 0, 0),
        ("C'", 0, 1),
        ("F", 0, 2),
        ("D'", 0, 3),
        ("A'", 0, 4),
        ("E", 0, 5),
        ("A", 1, 0),
        ("D", 1, 1),
        ("C", 1, 2),
        ("B", 1, 3),
    ] {
        marks.insert(label.to_string(), VertexRef { face, vertex });
    }
    FlatComplex {
        faces: vec![Face { id: "hexagon".into(), vertices: hex }, Face { id: "trapezoid".into(), vertices: trap }],
        gluings: vec![
            Gluing(e(1, 2), e(0, 0)), // BC ~ B'C'
            Gluing(e(1, 0), e(0, 3)), // AD ~ A'D'
            Gluing(e(1, 3), e(0, 1)), // AB ~ C'F
            Gluing(e(1, 1), e(0, 5)), // CD ~ EB'
            Gluing(e(0, 4), e(0, 2)), // A'E ~ D'F
        ],
        marks,
    }
}

/// Fixed coordinates of the strip presentation.
pub mod strip {
    use crate::field::{consts, QSqrt2};

    /// Length of the bottom circle `B'D`.
    pub fn circle() -> QSqrt2 {
        consts::two_plus_sqrt2()
    }

    /// Length of the top edge `A'D'`.
    pub fn top() -> QSqrt2 {
        consts::silver()
    }

    pub fn height() -> QSqrt2 {
        consts::half_sqrt2()
    }

    /// x-coordinate of `B` (which is also `F`).
    pub fn bx() -> QSqrt2 {
        &QSqrt2::one() + &consts::half_sqrt2()
    }

    pub fn cx() -> QSqrt2 {
        &QSqrt2::from_int(2) + &consts::half_sqrt2()
    }
}

/// Positions of the marked points `P_n` and `P'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Positions {
    #[serde(rename = "P")]
    pub p: QSqrt2,
    #[serde(rename = "Pp")]
    pub pp: QSqrt2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NormalForm {
    pub n: i64,
    #[serde(rename = "P")]
    pub p: QSqrt2,
    #[serde(rename = "Pp")]
    pub pp: QSqrt2,
}

impl NormalForm {
    pub fn positions(&self) -> Positions {
        Positions { p: self.p.clone(), pp: self.pp.clone() }
    }
}

/// `P_n = n+1 mod 2+√2`, `P'_n = n mod 1+√2`.
pub fn normal_form(n: i64) -> NormalForm {
    let p = QSqrt2::from_int(n + 1).modulo(&strip::circle()).expect("positive modulus");
    let pp = QSqrt2::from_int(n).modulo(&strip::top()).expect("positive modulus");
    NormalForm { n, p, pp }
}

fn degenerate(msg: impl Into<String>) -> ModelError {
    ModelError::DegenerateConfiguration(msg.into())
}

fn md(x: &QSqrt2, m: &QSqrt2) -> QSqrt2 {
    x.modulo(m).expect("positive modulus")
}

/// The strip complex with `P_n`, `P'_n` at the given positions.
pub fn build_complex(nf: &NormalForm) -> Result<FlatComplex, ModelError> {
    build_from_positions(&nf.positions())
}

pub fn build_from_positions(pos: &Positions) -> Result<FlatComplex, ModelError> {
    let (l, m, h) = (strip::circle(), strip::top(), strip::height());
    let zero = QSqrt2::zero();
    let one = QSqrt2::one();
    let (p, pp) = (&pos.p, &pos.pp);
    if p.is_negative() || *p >= l {
        return Err(degenerate(format!("P = {p} is outside [0, 2+√2)")));
    }
    if pp.is_negative() || *pp >= m {
        return Err(degenerate(format!("P' = {pp} is outside [0, 1+√2)")));
    }
    let prev = md(&(p - &one), &l);
    // arc length from P along the bottom, and the matching top position
    let s_of = |x: &QSqrt2| if x >= p { x - p } else { &(x + &l) - p };
    let in_gamma = |x: &QSqrt2| s_of(x) >= m;
    let top_image_of_a = md(&(p + &md(&(&m - pp), &m)), &l);

    let mut bottom = vec![zero.clone(), l.clone(), p.clone(), prev.clone(), top_image_of_a];
    bottom.sort();
    bottom.dedup();
    // the circle point 0 ~ 2+√2 seen from the two glued sides
    let bc_break = (s_of(&zero) > m).then(|| md(&(&zero - &prev), &l));
    let mut top: Vec<QSqrt2> = vec![pp.clone()];
    let s0 = s_of(&zero);
    if s0.is_positive() && s0 < m {
        top.push(md(&(pp + &s0), &m));
    }
    top.retain(|u| u.is_positive());
    top.sort();
    top.dedup();

    let b = Point2::new(strip::bx(), h.clone());
    let a_top = Point2::new(-&h, &one + &h);
    let mut poly: Vec<Point2> =
        bottom[..bottom.len() - 1].iter().map(|x| Point2::new(x.clone(), zero.clone())).collect();
    poly.push(Point2::new(l.clone(), zero.clone()));
    poly.push(Point2::new(strip::cx(), h.clone()));
    if let Some(t) = &bc_break {
        poly.push(Point2::new(&strip::bx() + t, h.clone()));
    }
    poly.push(b.clone());
    poly.push(Point2::new(strip::bx(), &one + &h));
    for u in top.iter().rev() {
        poly.push(Point2::new(&a_top.x + u, a_top.y.clone()));
    }
    poly.push(a_top.clone());
    poly.push(Point2::new(-&h, h.clone()));

    let index: HashMap<Point2, usize> = poly.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
    let k = poly.len();
    let edge_from = |a: &Point2, b: &Point2| -> Result<EdgeRef, ModelError> {
        let i = *index.get(a).ok_or_else(|| degenerate(format!("no vertex at {a:?}")))?;
        if poly[(i + 1) % k] != *b {
            return Err(degenerate(format!("no edge {a:?} -> {b:?}")));
        }
        Ok(EdgeRef { face: 0, edge: i })
    };
    let at = |x: &QSqrt2| Point2::new(x.clone(), zero.clone());
    let mut gluings = Vec::new();
    let d = at(&l);
    let cpt = Point2::new(strip::cx(), h.clone());
    let ept = Point2::new(-&h, h.clone());
    let fpt = b.clone();
    let dprime = Point2::new(strip::bx(), &one + &h);
    gluings.push(Gluing(edge_from(&d, &cpt)?, edge_from(&ept, &at(&zero))?));
    gluings.push(Gluing(edge_from(&a_top, &ept)?, edge_from(&fpt, &dprime)?));
    for w in bottom.windows(2) {
        let (x0, x1) = (&w[0], &w[1]);
        let len = x1 - x0;
        let here = edge_from(&at(x0), &at(x1))?;
        let there = if in_gamma(x0) {
            let b0 = md(&(x0 - &prev), &l);
            let b1 = &b0 + &len;
            if b1 > one {
                return Err(degenerate("bottom piece overruns BC"));
            }
            edge_from(&Point2::new(&b.x + &b1, h.clone()), &Point2::new(&b.x + &b0, h.clone()))?
        } else {
            let u0 = md(&(pp + &s_of(x0)), &m);
            let u1 = &u0 + &len;
            if u1 > m {
                return Err(degenerate("bottom piece overruns the top edge"));
            }
            edge_from(&Point2::new(&a_top.x + &u1, a_top.y.clone()), &Point2::new(&a_top.x + &u0, a_top.y.clone()))?
        };
        gluings.push(Gluing(here, there));
    }

    let vref = |q: &Point2| VertexRef { face: 0, vertex: index[q] };
    let mut marks = BTreeMap::new();
    marks.insert("B'".to_string(), vref(&at(&zero)));
    marks.insert("D".to_string(), vref(&d));
    marks.insert("C".to_string(), vref(&cpt));
    marks.insert("B".to_string(), vref(&b));
    marks.insert("F".to_string(), vref(&fpt));
    marks.insert("D'".to_string(), vref(&dprime));
    marks.insert("A'".to_string(), vref(&a_top));
    marks.insert("E".to_string(), vref(&ept));
    marks.insert("P_n".to_string(), vref(&at(p)));
    marks.insert("P_{n-1}".to_string(), vref(&at(&prev)));
    marks.insert("P'_n".to_string(), vref(&Point2::new(&a_top.x + pp, a_top.y.clone())));
    let c = FlatComplex { faces: vec![Face { id: "strip".into(), vertices: poly }], gluings, marks };
    let report = c.validate();
    if !report.is_valid() {
        return Err(degenerate(report.to_string()));
    }
    Ok(c)
}

fn not_oct(msg: impl Into<String>) -> ModelError {
    ModelError::NotInOctFamily(msg.into())
}

fn unit(x: i64, y: i64) -> Vec2 {
    Point2::new(QSqrt2::from_int(x), QSqrt2::from_int(y))
}

/// The three horizontal closed saddle connections, oriented along `+x`.
pub struct Horizontals {
    pub topo: Topology,
    pub class: usize,
    /// The unit one.
    pub gamma: SaddleConnection,
    /// The long one sharing the cylinder boundary with `gamma`.
    pub eta: SaddleConnection,
    pub other: SaddleConnection,
}

pub fn horizontals(c: &FlatComplex) -> Result<Horizontals, ModelError> {
    let topo = c.topology()?;
    let cones = topo.cone_classes();
    if cones.len() != 1 || topo.classes[cones[0]].order != 2 {
        return Err(not_oct("expected a single cone point of order 2"));
    }
    let class = cones[0];
    let x = unit(1, 0);
    let list = around(c, &topo, class, &[x.clone(), -&x]);
    let bound = QSqrt2::from_int(16);
    let mut short = Vec::new();
    let mut long = Vec::new();
    let long_sq = QSqrt2::from_ints(3, 2);
    for pos in list.iter().filter(|q| q.dir == x) {
        let seg = trace::walk(c, &topo, pos, &Limit::SqLen(bound.clone()))?;
        if !seg.is_closed() {
            return Err(not_oct("a horizontal ray does not close up"));
        }
        if seg.sq_len == QSqrt2::one() {
            short.push(seg);
        } else if seg.sq_len == long_sq {
            long.push(seg);
        } else {
            return Err(not_oct(format!("horizontal saddle connection of squared length {}", seg.sq_len)));
        }
    }
    if short.len() != 1 || long.len() != 2 {
        return Err(not_oct("need one unit and two long horizontal saddle connections"));
    }
    let gamma = short.remove(0);
    let e = index_of(&list, &gamma.end_position().expect("closed"))
        .ok_or(not_oct("lost the end of the unit connection"))?;
    let after = &list[(e + list.len() - 1) % list.len()];
    let i = long.iter().position(|s| s.start == *after).ok_or(not_oct("no long connection continues the unit one"))?;
    let eta = long.remove(i);
    let other = long.remove(0);
    Ok(Horizontals { topo, class, gamma, eta, other })
}

/// Where an interior or edge point lies along `segs`: `(index, parameter)`.
fn locate_on(
    c: &FlatComplex,
    topo: &Topology,
    tr: &trace::TracedSegment,
    segs: &[&SaddleConnection],
) -> Option<(usize, QSqrt2)> {
    let last = tr.steps.last()?;
    let mut reps = vec![(last.face, last.exit.clone())];
    match last.exit_at {
        Boundary::Edge(e) => {
            let er = EdgeRef { face: last.face, edge: e };
            reps.push((topo.partner(er).face, &last.exit + &topo.translation(c, er)));
        }
        Boundary::Vertex(k) => {
            for &corner in &topo.class(Corner { face: last.face, vertex: k }).members {
                reps.push((corner.face, c.vertex(corner).clone()));
            }
        }
        Boundary::Interior => {}
    }
    for (i, sc) in segs.iter().enumerate() {
        for st in &sc.steps {
            for (f, q) in &reps {
                if *f == st.face && geom::on_segment(q, &st.entry, &st.exit) {
                    return Some((i, &st.t0 + &(&q.x - &st.entry.x)));
                }
            }
        }
    }
    None
}

/// Reads `(P, P')` off the intrinsic cylinder structure.
pub fn extract_normal_form(c: &FlatComplex) -> Result<Positions, ModelError> {
    let hz = horizontals(c)?;
    let topo = &hz.topo;
    let (l, m, h) = (strip::circle(), strip::top(), strip::height());
    let dirs = [unit(1, 0), unit(-1, 0), unit(0, 1), unit(0, -1)];
    let list = around(c, topo, hz.class, &dirs);
    let n = list.len();
    let s = index_of(&list, &hz.other.start).ok_or(not_oct("lost the upper horizontal"))?;
    let find = |p: &Position| index_of(&list, p);

    // drop from E to the bottom circle, which it meets at 2+√2 - √2/2
    let down = &list[(s + n - 1) % n];
    if down.dir != unit(0, -1) {
        return Err(not_oct("unexpected wedge below the upper horizontal"));
    }
    let tr = trace::walk(c, topo, down, &Limit::Param(h.clone()))?;
    let rel = match tr.end {
        TraceEnd::Cone { corner, .. } => {
            let i = find(&Position { corner, dir: unit(0, 1) }).ok_or(not_oct("lost arrival"))?;
            let k = (i + n - 1) % n;
            if find(&hz.gamma.start) == Some(k) {
                -QSqrt2::one()
            } else if find(&hz.eta.start) == Some(k) {
                QSqrt2::zero()
            } else {
                return Err(not_oct("drop lands on an unexpected cone position"));
            }
        }
        TraceEnd::Truncated => match locate_on(c, topo, &tr, &[&hz.gamma, &hz.eta]) {
            Some((0, lam)) => &lam - &QSqrt2::one(),
            Some((_, lam)) => lam,
            None => return Err(not_oct("drop does not land on the bottom circle")),
        },
    };
    let p = md(&(&(-&rel) - &h), &l);

    // climb from E to A' on the top edge, which is glued to eta
    let up = &list[(s + 1) % n];
    if up.dir != unit(0, 1) {
        return Err(not_oct("unexpected wedge above the upper horizontal"));
    }
    let tr = trace::walk(c, topo, up, &Limit::Param(QSqrt2::one()))?;
    let lam = match tr.end {
        TraceEnd::Cone { corner, .. } => {
            let i = find(&Position { corner, dir: unit(0, -1) }).ok_or(not_oct("lost arrival"))?;
            if find(&hz.eta.start) != Some((i + 1) % n) {
                return Err(not_oct("climb lands on an unexpected cone position"));
            }
            QSqrt2::zero()
        }
        TraceEnd::Truncated => match locate_on(c, topo, &tr, &[&hz.eta]) {
            Some((_, lam)) => lam,
            None => return Err(not_oct("climb does not land on the top edge")),
        },
    };
    let pp = md(&(-&lam), &m);
    Ok(Positions { p, pp })
}

/// One left surgery, or for [`Side::Right`] its inverse: a right surgery
/// along the reversed unit horizontal connection.
pub fn surgery_step(c: &FlatComplex, side: Side) -> Result<FlatComplex, ModelError> {
    let hz = horizontals(c)?;
    let out = match side {
        Side::Left => surgery::surgery(c, &hz.gamma, Side::Left)?,
        Side::Right => {
            let back = surgery::reverse(c, &hz.gamma).map_err(SurgeryError::from)?;
            surgery::surgery(c, &back, Side::Right)?
        }
    };
    Ok(out)
}

/// `octagon0` after `k` left surgeries, or `-k` right ones when `k < 0`.
pub fn left_iterate(k: i64) -> Result<FlatComplex, ModelError> {
    let side = if k >= 0 { Side::Left } else { Side::Right };
    let mut c = octagon0();
    for _ in 0..k.unsigned_abs() {
        c = surgery_step(&c, side)?;
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FakeReport {
    pub valid: bool,
    pub single_cone_point: bool,
    pub genus_two: bool,
    pub area_matches: bool,
    pub periods_match: bool,
    pub normal_form: Option<Positions>,
    pub not_octagon: bool,
    pub is_fake: bool,
    pub stratum: &'static str,
    pub problems: Vec<String>,
}

impl FakeReport {
    pub fn invariants_hold(&self) -> bool {
        self.valid && self.single_cone_point && self.genus_two && self.area_matches && self.periods_match
    }
}

pub fn verify_fake(c: &FlatComplex) -> FakeReport {
    let mut r = FakeReport {
        valid: false,
        single_cone_point: false,
        genus_two: false,
        area_matches: false,
        periods_match: false,
        normal_form: None,
        not_octagon: false,
        is_fake: false,
        stratum: "H(2)",
        problems: Vec::new(),
    };
    let report = c.validate();
    if !report.is_valid() {
        r.problems.push(report.to_string());
        return r;
    }
    r.valid = true;
    match c.vertex_classes() {
        Ok(classes) => {
            let cones: Vec<_> = classes.iter().filter(|k| k.order != 0).collect();
            r.single_cone_point = cones.len() == 1 && cones[0].order == 2;
        }
        Err(e) => r.problems.push(e.to_string()),
    }
    match c.genus() {
        Ok(g) => r.genus_two = g == 2,
        Err(e) => r.problems.push(e.to_string()),
    }
    r.area_matches = c.area() == QSqrt2::from_ints(2, 2);
    match absolute_period_module(c) {
        Ok(pm) => r.periods_match = pm == absolute_period_module(&octagon0()).expect("octagon is valid"),
        Err(e) => r.problems.push(e.to_string()),
    }
    match extract_normal_form(c) {
        Ok(pos) => {
            r.not_octagon = pos != normal_form(0).positions();
            r.normal_form = Some(pos);
        }
        Err(e) => r.problems.push(e.to_string()),
    }
    r.is_fake = r.invariants_hold() && r.not_octagon;
    r
}
