use std::collections::HashMap;

use proptest::prelude::*;

use fakeoct::geom::{self, Point2};
use fakeoct::octagon::{build_complex, normal_form, octagon0};
use fakeoct::period::absolute_period_module;
use fakeoct::{EdgeRef, Face, FlatComplex, Gluing, QSqrt2, VertexRef};

fn q() -> impl Strategy<Value = QSqrt2> {
    (-60i64..60, 1i64..12, -60i64..60, 1i64..12).prop_map(|(a, b, c, d)| QSqrt2::from_fracs(a, b, c, d))
}

fn nonzero() -> impl Strategy<Value = QSqrt2> {
    q().prop_filter("nonzero", |x| !x.is_zero())
}

fn positive() -> impl Strategy<Value = QSqrt2> {
    nonzero().prop_map(|x| x.abs())
}

proptest! {
    #[test]
    fn field_axioms(a in q(), b in q(), c in q()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn inverses(a in nonzero()) {
        prop_assert_eq!(&a * &a.inverse().unwrap(), QSqrt2::one());
        prop_assert_eq!(&a + &(-&a), QSqrt2::zero());
    }

    #[test]
    fn sign_matches_float(a in q()) {
        let f = a.to_f64().unwrap();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.signum(), if f > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn near_zero_signs(k in 1i64..200) {
        // convergents of √2 make tiny values with large parts
        let (mut p, mut r) = (1i64, 1i64);
        for _ in 0..(k % 20) {
            let np = p + 2 * r;
            r += p;
            p = np;
        }
        let x = QSqrt2::from_ints(p, -r);
        prop_assert_eq!(x.signum(), if p * p > 2 * r * r { 1 } else { -1 });
    }

    #[test]
    fn modulo_invariants(x in q(), m in positive()) {
        let r = x.modulo(&m).unwrap();
        prop_assert!(!r.is_negative());
        prop_assert!(r < m);
        let k = (&x - &r).checked_div(&m).unwrap();
        prop_assert!(k.sqrt2_part().numer() == &0.into());
        prop_assert!(k.rational_part().is_integer());
    }

    #[test]
    fn periods_ignore_presentation(n in -6i64..6, seed in any::<u64>(), dx in q(), dy in q()) {
        let base = if n == 0 { octagon0() } else { build_complex(&normal_form(n)).unwrap() };
        let expect = absolute_period_module(&base).unwrap();
        let moved = shuffle(&base, seed, &Point2::new(dx, dy));
        prop_assert!(moved.validate().is_valid());
        prop_assert_eq!(absolute_period_module(&moved).unwrap(), expect.clone());
        prop_assert_eq!(moved.area(), base.area());
        let fine = refine(&moved);
        prop_assert_eq!(fine.area(), base.area());
        prop_assert_eq!(absolute_period_module(&fine).unwrap(), expect);
    }
}

/// Reverses the face order, rotates every face's vertex labels by a
/// seed-dependent amount and translates one face chart.
fn shuffle(c: &FlatComplex, seed: u64, shift: &Point2) -> FlatComplex {
    let nf = c.faces.len();
    let new_face = |f: usize| nf - 1 - f;
    let rot: Vec<usize> = (0..nf).map(|f| (seed as usize >> (f % 16)) % c.faces[f].vertices.len()).collect();
    let moved_face = seed as usize % nf;
    let mut faces = vec![None; nf];
    for (f, face) in c.faces.iter().enumerate() {
        let n = face.vertices.len();
        let mut verts: Vec<Point2> = (0..n).map(|i| face.vertices[(i + rot[f]) % n].clone()).collect();
        if f == moved_face {
            verts = verts.iter().map(|v| v + shift).collect();
        }
        faces[new_face(f)] = Some(Face { id: face.id.clone(), vertices: verts });
    }
    let map_edge = |e: EdgeRef| {
        let n = c.faces[e.face].vertices.len();
        EdgeRef { face: new_face(e.face), edge: (e.edge + n - rot[e.face]) % n }
    };
    let marks = c
        .marks
        .iter()
        .map(|(k, v)| {
            let n = c.faces[v.face].vertices.len();
            (k.clone(), VertexRef { face: new_face(v.face), vertex: (v.vertex + n - rot[v.face]) % n })
        })
        .collect();
    FlatComplex {
        faces: faces.into_iter().map(Option::unwrap).collect(),
        gluings: c.gluings.iter().map(|g| Gluing(map_edge(g.0), map_edge(g.1))).collect(),
        marks,
    }
}

/// Splits every face into triangles glued back along the diagonals.
fn refine(c: &FlatComplex) -> FlatComplex {
    let mut faces = Vec::new();
    let mut edge_at: HashMap<(usize, usize, usize), EdgeRef> = HashMap::new();
    for (fi, face) in c.faces.iter().enumerate() {
        for tri in geom::triangulate(&face.vertices) {
            let t = faces.len();
            faces.push(Face {
                id: format!("{}.{t}", face.id),
                vertices: tri.iter().map(|&i| face.vertices[i].clone()).collect(),
            });
            for k in 0..3 {
                edge_at.insert((fi, tri[k], tri[(k + 1) % 3]), EdgeRef { face: t, edge: k });
            }
        }
    }
    let mut gluings: Vec<Gluing> = c
        .gluings
        .iter()
        .map(|g| {
            let key = |e: EdgeRef| edge_at[&(e.face, e.edge, (e.edge + 1) % c.faces[e.face].vertices.len())];
            Gluing(key(g.0), key(g.1))
        })
        .collect();
    let mut diag: Vec<_> =
        edge_at.keys().filter(|(f, a, b)| (a + 1) % c.faces[*f].vertices.len() != *b && a < b).copied().collect();
    diag.sort();
    for (f, a, b) in diag {
        gluings.push(Gluing(edge_at[&(f, a, b)], edge_at[&(f, b, a)]));
    }
    FlatComplex { faces, gluings, marks: Default::default() }
}

#[test]
fn gauss_bonnet_on_family() {
    for n in -8..=8 {
        let c = if n == 0 { octagon0() } else { build_complex(&normal_form(n)).unwrap() };
        let orders: i64 = c.vertex_classes().unwrap().iter().map(|k| k.order).sum();
        assert_eq!(orders, 2 * c.genus().unwrap() - 2);
    }
}
