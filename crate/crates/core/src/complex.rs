//! Translation surfaces as Euclidean polygons glued along parallel edges.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::f64::consts::TAU;
use std::fmt;

use serde::Serialize;

use crate::error::ComplexError;
use crate::field::QSqrt2;
use crate::geom::{self, Point2, Vec2};

/// Tolerance for snapping a vertex class angle sum to a multiple of 2π.
pub const ANGLE_SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub id: String,
    /// Counterclockwise, in the face's own chart.
    pub vertices: Vec<Point2>,
}

/// Edge `edge` of face `face` runs from vertex `edge` to vertex `edge + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeRef {
    pub face: usize,
    pub edge: usize,
}

/// A polygon corner; also used for marked vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexRef {
    pub face: usize,
    pub vertex: usize,
}

pub type Corner = VertexRef;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing(pub EdgeRef, pub EdgeRef);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FlatComplex {
    pub faces: Vec<Face>,
    pub gluings: Vec<Gluing>,
    pub marks: BTreeMap<String, VertexRef>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    TooFewVertices { face: String },
    NonSimpleFace { face: String },
    NonPositiveArea { face: String },
    EdgeOutOfRange { face: usize, edge: usize },
    SelfGluing { face: String, edge: usize },
    DuplicateEdge { face: String, edge: usize },
    UnpairedEdge { face: String, edge: usize },
    NonParallel { a: (String, usize), b: (String, usize) },
    LengthMismatch { a: (String, usize), b: (String, usize) },
    Disconnected,
    BadConeAngle { class: usize, angle: f64 },
    BadMark { label: String },
    DuplicateFaceId { face: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { face } => write!(f, "face {face} has fewer than 3 vertices"),
            Violation::NonSimpleFace { face } => write!(f, "face {face} is not a simple polygon"),
            Violation::NonPositiveArea { face } => write!(f, "face {face} is not counterclockwise"),
            Violation::EdgeOutOfRange { face, edge } => {
                write!(f, "edge reference ({face}, {edge}) out of range")
            }
            Violation::SelfGluing { face, edge } => write!(f, "edge ({face}, {edge}) glued to itself"),
            Violation::DuplicateEdge { face, edge } => {
                write!(f, "edge ({face}, {edge}) appears in more than one gluing")
            }
            Violation::UnpairedEdge { face, edge } => write!(f, "edge ({face}, {edge}) is unpaired"),
            Violation::NonParallel { a, b } => write!(f, "edges {a:?} and {b:?} are not parallel"),
            Violation::LengthMismatch { a, b } => {
                write!(f, "edges {a:?} and {b:?} have different lengths")
            }
            Violation::Disconnected => write!(f, "gluing graph is disconnected"),
            Violation::BadConeAngle { class, angle } => {
                write!(f, "vertex class {class} has angle {angle}, not a multiple of 2π")
            }
            Violation::BadMark { label } => write!(f, "mark {label} points outside the complex"),
            Violation::DuplicateFaceId { face } => write!(f, "face id {face} is used twice"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// Corners in counterclockwise order around the point.
    pub members: Vec<Corner>,
    /// Total angle is `2π · total_angle_multiple`.
    pub total_angle_multiple: i64,
    pub order: i64,
}

impl VertexClass {
    pub fn is_cone_point(&self) -> bool {
        self.order > 0
    }
}

impl FlatComplex {
    pub fn face_len(&self, face: usize) -> usize {
        self.faces[face].vertices.len()
    }

    pub fn vertex(&self, v: VertexRef) -> &Point2 {
        &self.faces[v.face].vertices[v.vertex]
    }

    pub fn edge_start(&self, e: EdgeRef) -> &Point2 {
        &self.faces[e.face].vertices[e.edge]
    }

    pub fn edge_end(&self, e: EdgeRef) -> &Point2 {
        let f = &self.faces[e.face].vertices;
        &f[(e.edge + 1) % f.len()]
    }

    pub fn edge_vector(&self, e: EdgeRef) -> Vec2 {
        self.edge_end(e) - self.edge_start(e)
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    fn edge_name(&self, e: EdgeRef) -> (String, usize) {
        (self.faces[e.face].id.clone(), e.edge)
    }

    /// Every violated invariant; empty iff this is a translation surface.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut ids = HashSet::new();
        for face in &self.faces {
            if !ids.insert(face.id.as_str()) {
                v.push(Violation::DuplicateFaceId { face: face.id.clone() });
            }
            if face.vertices.len() < 3 {
                v.push(Violation::TooFewVertices { face: face.id.clone() });
                continue;
            }
            if !geom::twice_signed_area(&face.vertices).is_positive() {
                v.push(Violation::NonPositiveArea { face: face.id.clone() });
            }
            if !geom::is_simple(&face.vertices) {
                v.push(Violation::NonSimpleFace { face: face.id.clone() });
            }
        }
        let mut pairing_ok = true;
        let mut seen: HashSet<EdgeRef> = HashSet::new();
        for g in &self.gluings {
            let mut in_range = true;
            for e in [g.0, g.1] {
                if e.face >= self.faces.len() || e.edge >= self.face_len(e.face) {
                    v.push(Violation::EdgeOutOfRange { face: e.face, edge: e.edge });
                    in_range = false;
                }
            }
            if !in_range {
                pairing_ok = false;
                continue;
            }
            if g.0 == g.1 {
                v.push(Violation::SelfGluing { face: self.faces[g.0.face].id.clone(), edge: g.0.edge });
                pairing_ok = false;
                continue;
            }
            for e in [g.0, g.1] {
                if !seen.insert(e) {
                    v.push(Violation::DuplicateEdge { face: self.faces[e.face].id.clone(), edge: e.edge });
                    pairing_ok = false;
                }
            }
            let (a, b) = (self.edge_vector(g.0), self.edge_vector(g.1));
            if !a.cross(&b).is_zero() || !a.dot(&b).is_negative() {
                v.push(Violation::NonParallel { a: self.edge_name(g.0), b: self.edge_name(g.1) });
                pairing_ok = false;
            } else if a.norm2() != b.norm2() {
                v.push(Violation::LengthMismatch { a: self.edge_name(g.0), b: self.edge_name(g.1) });
                pairing_ok = false;
            }
        }
        for (fi, face) in self.faces.iter().enumerate() {
            for ei in 0..face.vertices.len() {
                if !seen.contains(&EdgeRef { face: fi, edge: ei }) {
                    v.push(Violation::UnpairedEdge { face: face.id.clone(), edge: ei });
                    pairing_ok = false;
                }
            }
        }
        if !self.faces.is_empty() && !self.is_connected() {
            v.push(Violation::Disconnected);
        }
        for (label, m) in &self.marks {
            if m.face >= self.faces.len() || m.vertex >= self.face_len(m.face) {
                v.push(Violation::BadMark { label: label.clone() });
            }
        }
        let faces_ok = v.is_empty();
        if pairing_ok && faces_ok {
            let topo = Topology::build_unchecked(self);
            for (ci, class) in topo.raw_classes.iter().enumerate() {
                let angle: f64 = class.iter().map(|&c| topo.corner_angle(self, c)).sum();
                let k = (angle / TAU).round();
                if k < 1.0 || (angle - k * TAU).abs() >= ANGLE_SNAP_TOLERANCE {
                    v.push(Violation::BadConeAngle { class: ci, angle });
                }
            }
        }
        ValidationReport { violations: v }
    }

    pub fn ensure_valid(&self) -> Result<(), ComplexError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(ComplexError::Invalid(r))
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.faces.len();
        let mut adj = vec![Vec::new(); n];
        for g in &self.gluings {
            if g.0.face < n && g.1.face < n {
                adj[g.0.face].push(g.1.face);
                adj[g.1.face].push(g.0.face);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for &g in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Exact sum of face areas.
    pub fn area(&self) -> QSqrt2 {
        self.faces.iter().fold(QSqrt2::zero(), |acc, f| acc + geom::signed_area(&f.vertices))
    }

    pub fn topology(&self) -> Result<Topology, ComplexError> {
        Topology::build(self)
    }

    pub fn vertex_classes(&self) -> Result<Vec<VertexClass>, ComplexError> {
        Ok(self.topology()?.classes)
    }

    /// Genus from the Euler characteristic, cross-checked against the cone
    /// orders (Gauss–Bonnet).
    pub fn genus(&self) -> Result<i64, ComplexError> {
        let topo = self.topology()?;
        let chi = topo.classes.len() as i64 - self.gluings.len() as i64 + self.faces.len() as i64;
        let euler = (2 - chi) / 2;
        let orders: i64 = topo.classes.iter().map(|c| c.order).sum();
        if (2 - chi) % 2 != 0 || orders != 2 * euler - 2 {
            return Err(ComplexError::EulerMismatch { euler, orders: orders / 2 + 1 });
        }
        Ok(euler)
    }
}

/// Combinatorics derived from a valid complex: edge partners, gluing
/// translations and the corner cycles around each vertex class.
#[derive(Clone, Debug)]
pub struct Topology {
    partner: Vec<Vec<EdgeRef>>,
    class_of: Vec<Vec<usize>>,
    raw_classes: Vec<Vec<Corner>>,
    pub classes: Vec<VertexClass>,
}

impl Topology {
    pub fn build(c: &FlatComplex) -> Result<Self, ComplexError> {
        c.ensure_valid()?;
        let mut topo = Self::build_unchecked(c);
        let mut classes = Vec::with_capacity(topo.raw_classes.len());
        for members in &topo.raw_classes {
            let angle: f64 = members.iter().map(|&m| topo.corner_angle(c, m)).sum();
            let k = (angle / TAU).round();
            if (angle - k * TAU).abs() >= ANGLE_SNAP_TOLERANCE || k < 1.0 {
                return Err(ComplexError::ConeAngleNotMultipleOf2Pi { angle });
            }
            classes.push(VertexClass { members: members.clone(), total_angle_multiple: k as i64, order: k as i64 - 1 });
        }
        topo.classes = classes;
        Ok(topo)
    }

    /// Requires every edge to be paired exactly once.
    fn build_unchecked(c: &FlatComplex) -> Self {
        let mut partner: Vec<Vec<EdgeRef>> =
            c.faces.iter().map(|f| vec![EdgeRef { face: usize::MAX, edge: 0 }; f.vertices.len()]).collect();
        for g in &c.gluings {
            partner[g.0.face][g.0.edge] = g.1;
            partner[g.1.face][g.1.edge] = g.0;
        }
        let mut class_of: Vec<Vec<usize>> = c.faces.iter().map(|f| vec![usize::MAX; f.vertices.len()]).collect();
        let mut raw_classes = Vec::new();
        let mut topo = Topology { partner, class_of: Vec::new(), raw_classes: Vec::new(), classes: Vec::new() };
        for fi in 0..c.faces.len() {
            for vi in 0..c.faces[fi].vertices.len() {
                if class_of[fi][vi] != usize::MAX {
                    continue;
                }
                let id = raw_classes.len();
                let start = Corner { face: fi, vertex: vi };
                let mut members = Vec::new();
                let mut cur = start;
                loop {
                    class_of[cur.face][cur.vertex] = id;
                    members.push(cur);
                    cur = topo.next_ccw_raw(c, cur);
                    if cur == start {
                        break;
                    }
                }
                raw_classes.push(members);
            }
        }
        topo.class_of = class_of;
        topo.raw_classes = raw_classes;
        topo
    }

    fn next_ccw_raw(&self, c: &FlatComplex, corner: Corner) -> Corner {
        let n = c.face_len(corner.face);
        let incoming = EdgeRef { face: corner.face, edge: (corner.vertex + n - 1) % n };
        let p = self.partner[incoming.face][incoming.edge];
        Corner { face: p.face, vertex: p.edge }
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.face][e.edge]
    }

    /// Translation taking points of edge `e` (in its face chart) to the
    /// corresponding points in the partner face chart.
    pub fn translation(&self, c: &FlatComplex, e: EdgeRef) -> Vec2 {
        let p = self.partner(e);
        c.edge_end(p) - c.edge_start(e)
    }

    /// The corner counterclockwise after `corner` around its vertex class.
    pub fn next_ccw(&self, c: &FlatComplex, corner: Corner) -> Corner {
        self.next_ccw_raw(c, corner)
    }

    pub fn class_of(&self, corner: Corner) -> usize {
        self.class_of[corner.face][corner.vertex]
    }

    pub fn class(&self, corner: Corner) -> &VertexClass {
        &self.classes[self.class_of(corner)]
    }

    pub fn is_cone(&self, corner: Corner) -> bool {
        self.class(corner).is_cone_point()
    }

    /// Outgoing edge direction and reversed incoming edge direction.
    pub fn corner_rays(&self, c: &FlatComplex, corner: Corner) -> (Vec2, Vec2) {
        let f = &c.faces[corner.face].vertices;
        let n = f.len();
        let v = &f[corner.vertex];
        (&f[(corner.vertex + 1) % n] - v, &f[(corner.vertex + n - 1) % n] - v)
    }

    pub fn corner_angle(&self, c: &FlatComplex, corner: Corner) -> f64 {
        let (out, inn) = self.corner_rays(c, corner);
        geom::wedge_angle(&out, &inn)
    }

    pub fn cone_classes(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i].is_cone_point()).collect()
    }
}
