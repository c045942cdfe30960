//! Mutable half-edge form of a flat complex used while cutting and regluing.
//!
//! Every face keeps the chart of the original face it descends from, so
//! points of a traced segment can be located in any descendant without
//! translation. Half-edge ids are stable: splitting appends new ids.

use crate::complex::{EdgeRef, Face, FlatComplex, Gluing};
use crate::field::QSqrt2;
use crate::geom::{self, Point2, Vec2};

pub type EdgeId = usize;

#[derive(Clone, Debug)]
pub struct HalfEdge {
    pub face: usize,
    /// Start point in the face chart.
    pub origin: Point2,
    pub twin: EdgeId,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub edges: Vec<HalfEdge>,
    /// Counterclockwise half-edge cycles; `None` for merged-away faces.
    pub faces: Vec<Option<Vec<EdgeId>>>,
    /// Original face each face descends from (charts agree).
    pub lineage: Vec<usize>,
}

impl Mesh {
    pub fn from_complex(c: &FlatComplex) -> Mesh {
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        let mut first = Vec::new();
        for (fi, f) in c.faces.iter().enumerate() {
            first.push(edges.len());
            let ids: Vec<EdgeId> = (0..f.vertices.len())
                .map(|k| {
                    edges.push(HalfEdge { face: fi, origin: f.vertices[k].clone(), twin: usize::MAX });
                    edges.len() - 1
                })
                .collect();
            faces.push(Some(ids));
        }
        for g in &c.gluings {
            let a = first[g.0.face] + g.0.edge;
            let b = first[g.1.face] + g.1.edge;
            edges[a].twin = b;
            edges[b].twin = a;
        }
        Mesh { edges, faces, lineage: (0..c.faces.len()).collect() }
    }

    fn cycle(&self, f: usize) -> &Vec<EdgeId> {
        self.faces[f].as_ref().expect("live face")
    }

    fn pos_in_face(&self, h: EdgeId) -> usize {
        let f = self.edges[h].face;
        self.cycle(f).iter().position(|&x| x == h).expect("edge in its face")
    }

    pub fn next(&self, h: EdgeId) -> EdgeId {
        let cyc = self.cycle(self.edges[h].face);
        cyc[(self.pos_in_face(h) + 1) % cyc.len()]
    }

    pub fn prev(&self, h: EdgeId) -> EdgeId {
        let cyc = self.cycle(self.edges[h].face);
        let n = cyc.len();
        cyc[(self.pos_in_face(h) + n - 1) % n]
    }

    pub fn end(&self, h: EdgeId) -> &Point2 {
        &self.edges[self.next(h)].origin
    }

    pub fn vector(&self, h: EdgeId) -> Vec2 {
        self.end(h) - &self.edges[h].origin
    }

    pub fn polygon(&self, f: usize) -> Vec<Point2> {
        self.cycle(f).iter().map(|&h| self.edges[h].origin.clone()).collect()
    }

    pub fn live_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].is_some())
    }

    fn faces_of_lineage(&self, orig: usize) -> Vec<usize> {
        self.live_faces().filter(|&f| self.lineage[f] == orig).collect()
    }

    /// Half-edge of lineage `orig` starting at `p`, if any.
    pub fn vertex_at(&self, orig: usize, p: &Point2) -> Option<EdgeId> {
        self.faces_of_lineage(orig)
            .into_iter()
            .flat_map(|f| self.cycle(f).clone())
            .find(|&h| self.edges[h].origin == *p)
    }

    /// Half-edge of lineage `orig` containing `p` strictly inside.
    pub fn edge_through(&self, orig: usize, p: &Point2) -> Option<EdgeId> {
        self.faces_of_lineage(orig)
            .into_iter()
            .flat_map(|f| self.cycle(f).clone())
            .find(|&h| geom::strictly_inside_segment(p, &self.edges[h].origin, self.end(h)))
    }

    /// Half-edge of lineage `orig` running from `a` to `b`.
    pub fn edge_between(&self, orig: usize, a: &Point2, b: &Point2) -> Option<EdgeId> {
        self.faces_of_lineage(orig)
            .into_iter()
            .flat_map(|f| self.cycle(f).clone())
            .find(|&h| self.edges[h].origin == *a && self.end(h) == b)
    }

    /// Face of lineage `orig` containing `p` in its open interior.
    pub fn face_containing(&self, orig: usize, p: &Point2) -> Option<usize> {
        self.faces_of_lineage(orig).into_iter().find(|&f| geom::point_in_polygon(p, &self.polygon(f)) == Some(true))
    }

    /// Splits `h` at `p` (strictly inside it) and splits its twin at the
    /// corresponding point. Returns the new half-edge starting at `p`.
    pub fn split_edge(&mut self, h: EdgeId, p: Point2) -> EdgeId {
        let t = self.edges[h].twin;
        // point on the twin: its origin corresponds to the end of h
        let shift = &self.edges[t].origin - self.end(h);
        let pt = &p + &shift;
        let h2 = self.edges.len();
        let t2 = h2 + 1;
        let (fh, ft) = (self.edges[h].face, self.edges[t].face);
        self.edges.push(HalfEdge { face: fh, origin: p, twin: t });
        self.edges.push(HalfEdge { face: ft, origin: pt, twin: h });
        self.edges[h].twin = t2;
        self.edges[t].twin = h2;
        let ih = self.pos_in_face(h);
        self.faces[fh].as_mut().expect("live").insert(ih + 1, h2);
        let it = self.pos_in_face(t);
        self.faces[ft].as_mut().expect("live").insert(it + 1, t2);
        h2
    }

    /// Cuts face `f` along the chord from the origin of `a` to the origin
    /// of `b`. Returns the chord half-edge running from `a`'s origin to
    /// `b`'s origin.
    pub fn split_face(&mut self, a: EdgeId, b: EdgeId) -> EdgeId {
        let f = self.edges[a].face;
        debug_assert_eq!(f, self.edges[b].face);
        let cyc = self.cycle(f).clone();
        let (ia, ib) = (self.pos_in_face(a), self.pos_in_face(b));
        let n = cyc.len();
        let from_b: Vec<EdgeId> = (0..(ia + n - ib) % n).map(|k| cyc[(ib + k) % n]).collect();
        let from_a: Vec<EdgeId> = (0..(ib + n - ia) % n).map(|k| cyc[(ia + k) % n]).collect();
        let chord_ab = self.edges.len();
        let chord_ba = chord_ab + 1;
        let g = self.faces.len();
        let pa = self.edges[a].origin.clone();
        let pb = self.edges[b].origin.clone();
        // f keeps the b..a side closed by a->b; g gets a..b closed by b->a
        self.edges.push(HalfEdge { face: f, origin: pa, twin: chord_ba });
        self.edges.push(HalfEdge { face: g, origin: pb, twin: chord_ab });
        let mut fcyc = from_b;
        fcyc.push(chord_ab);
        let mut gcyc = from_a;
        gcyc.push(chord_ba);
        for &h in &gcyc {
            self.edges[h].face = g;
        }
        self.faces[f] = Some(fcyc);
        self.faces.push(Some(gcyc));
        self.lineage.push(self.lineage[f]);
        chord_ab
    }

    /// Makes `p` (in the chart of lineage `orig`) a vertex. Points strictly
    /// inside a face are not handled here.
    pub fn ensure_vertex(&mut self, orig: usize, p: &Point2) -> Option<EdgeId> {
        if let Some(h) = self.vertex_at(orig, p) {
            return Some(h);
        }
        let h = self.edge_through(orig, p)?;
        Some(self.split_edge(h, p.clone()))
    }

    /// Merges the faces on the two sides of `h` when they differ and their
    /// union, drawn in the chart of `h`'s face, is a simple polygon.
    pub fn try_merge(&mut self, h: EdgeId) -> bool {
        let t = self.edges[h].twin;
        let (f, g) = (self.edges[h].face, self.edges[t].face);
        if f == g {
            return false;
        }
        let shift = self.end(h) - &self.edges[t].origin;
        let fc = self.cycle(f).clone();
        let gc = self.cycle(g).clone();
        let (ih, it) = (self.pos_in_face(h), self.pos_in_face(t));
        let mut merged: Vec<EdgeId> = (1..fc.len()).map(|k| fc[(ih + k) % fc.len()]).collect();
        merged.extend((1..gc.len()).map(|k| gc[(it + k) % gc.len()]));
        let pts: Vec<Point2> =
            merged
                .iter()
                .map(|&x| {
                    if self.edges[x].face == g {
                        &self.edges[x].origin + &shift
                    } else {
                        self.edges[x].origin.clone()
                    }
                })
                .collect();
        if !geom::is_simple(&pts) || !geom::twice_signed_area(&pts).is_positive() {
            return false;
        }
        for (k, &x) in merged.iter().enumerate() {
            self.edges[x].face = f;
            self.edges[x].origin = pts[k].clone();
        }
        self.faces[f] = Some(merged);
        self.faces[g] = None;
        true
    }

    /// Removes a straight two-corner vertex at the origin of `e2`.
    pub fn try_remove_vertex(&mut self, e2: EdgeId) -> bool {
        let f = self.edges[e2].face;
        if self.cycle(f).len() <= 3 {
            return false;
        }
        let e1 = self.prev(e2);
        let (v1, v2) = (self.vector(e1), self.vector(e2));
        if !v1.cross(&v2).is_zero() || !v1.dot(&v2).is_positive() {
            return false;
        }
        let (t1, t2) = (self.edges[e1].twin, self.edges[e2].twin);
        if t1 == e2 || self.next(t2) != t1 || self.cycle(self.edges[t1].face).len() <= 3 {
            return false;
        }
        // e1 absorbs e2; t2 absorbs t1
        self.edges[e1].twin = t2;
        self.edges[t2].twin = e1;
        let ft = self.edges[t1].face;
        self.faces[f].as_mut().expect("live").retain(|&x| x != e2);
        self.faces[ft].as_mut().expect("live").retain(|&x| x != t1);
        true
    }

    /// Greedy face merging followed by removal of straight regular vertices.
    pub fn simplify(&mut self) {
        loop {
            let mut changed = false;
            for f in 0..self.faces.len() {
                let Some(cyc) = self.faces[f].clone() else { continue };
                for h in cyc {
                    if self.faces[f].is_some() && self.edges[h].face == f && self.try_merge(h) {
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        loop {
            let mut changed = false;
            for f in 0..self.faces.len() {
                let Some(cyc) = self.faces[f].clone() else { continue };
                for h in cyc {
                    if self.faces[f].is_some() && self.try_remove_vertex(h) {
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Converts back, naming faces `f0, f1, …` and dropping marks.
    pub fn to_complex(&self) -> FlatComplex {
        let live: Vec<usize> = self.live_faces().collect();
        let mut index = vec![usize::MAX; self.faces.len()];
        for (k, &f) in live.iter().enumerate() {
            index[f] = k;
        }
        let mut eref = vec![None; self.edges.len()];
        let mut faces = Vec::new();
        for (k, &f) in live.iter().enumerate() {
            let cyc = self.cycle(f);
            for (i, &h) in cyc.iter().enumerate() {
                eref[h] = Some(EdgeRef { face: k, edge: i });
            }
            faces.push(Face { id: format!("f{k}"), vertices: self.polygon(f) });
        }
        let mut gluings = Vec::new();
        for &f in &live {
            for &h in self.cycle(f) {
                let t = self.edges[h].twin;
                if h < t {
                    gluings.push(Gluing(eref[h].expect("live edge"), eref[t].expect("live twin")));
                }
            }
        }
        FlatComplex { faces, gluings, marks: Default::default() }
    }
}

/// Parameter of `p` along `a + t·d`.
pub fn param_along(a: &Point2, d: &Vec2, p: &Point2) -> QSqrt2 {
    &(p - a).dot(d) / &d.norm2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::octagon0;

    #[test]
    fn round_trip_and_split() {
        let o = octagon0();
        let mut m = Mesh::from_complex(&o);
        let back = m.to_complex();
        assert!(back.validate().is_valid());
        assert_eq!(back.area(), o.area());
        // split the hexagon along B'D' and an edge at its midpoint
        let a = m.vertex_at(0, &o.faces[0].vertices[0]).unwrap();
        let b = m.vertex_at(0, &o.faces[0].vertices[3]).unwrap();
        m.split_face(a, b);
        let mid = Point2::new(QSqrt2::from_fracs(1, 2, 0, 1), QSqrt2::zero());
        m.ensure_vertex(0, &mid).unwrap();
        let split = m.to_complex();
        assert!(split.validate().is_valid(), "{}", split.validate());
        assert_eq!(split.faces.len(), 3);
        assert_eq!(split.genus().unwrap(), 2);
        m.simplify();
        let simple = m.to_complex();
        assert!(simple.validate().is_valid());
        assert_eq!(simple.faces.len(), 1);
        assert_eq!(simple.area(), o.area());
        assert_eq!(simple.gluings.len(), 4);
        assert_eq!(simple.faces[0].vertices.len(), 8);
    }
}
