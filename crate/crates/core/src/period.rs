//! Absolute period module of a flat complex, in Hermite normal form.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::{EdgeRef, FlatComplex};
use crate::error::ComplexError;
use crate::field::Rational;
use crate::geom::Vec2;

/// Row-style Hermite normal form of the integer row span of `rows`.
///
/// Output rows are nonzero, pivot columns strictly increase, pivots are
/// positive, and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if pivot_row >= m.len() {
            break;
        }
        // gcd-combine all rows at or below pivot_row into a single pivot
        for r in pivot_row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[pivot_row][col].clone();
            let b = m[r][col].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let top: Vec<BigInt> = (0..cols).map(|k| &x * &m[pivot_row][k] + &y * &m[r][k]).collect();
            let bot: Vec<BigInt> = (0..cols).map(|k| &ag * &m[r][k] - &bg * &m[pivot_row][k]).collect();
            m[pivot_row] = top;
            m[r] = bot;
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for v in m[pivot_row].iter_mut() {
                *v = -&*v;
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    for &(pr, col) in &pivots {
        let p = m[pr][col].clone();
        for r in 0..pr {
            let q = m[r][col].div_floor(&p);
            if !q.is_zero() {
                let pivot_row = m[pr].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
    }
    m
}

/// Z-module of absolute periods in coordinates over `{1, √2, i, i√2}`.
///
/// `basis / denominator` is the canonical rational Hermite form; the
/// denominator is the smallest one making every entry integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodModule {
    pub denominator: BigInt,
    pub basis: Vec<[BigInt; 4]>,
}

impl PeriodModule {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Module spanned by the given plane vectors.
    pub fn from_vectors(vectors: &[Vec2]) -> Self {
        let coords: Vec<[Rational; 4]> = vectors.iter().map(coordinates).collect();
        let mut den = BigInt::one();
        for c in &coords {
            for r in c {
                den = den.lcm(r.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|c| c.iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let h = hermite_normal_form(&rows);
        // shrink to the minimal denominator
        let mut g = den.clone();
        for row in &h {
            for x in row {
                g = g.gcd(x);
            }
        }
        let basis = h
            .into_iter()
            .map(|row| {
                let v: Vec<BigInt> = row.into_iter().map(|x| x / &g).collect();
                [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
            })
            .collect();
        PeriodModule { denominator: den / g, basis }
    }
}

impl Serialize for PeriodModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            denominator: String,
            basis: Vec<[String; 4]>,
        }
        Repr {
            denominator: self.denominator.to_string(),
            basis: self.basis.iter().map(|r| r.clone().map(|x| x.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl fmt::Display for PeriodModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{} · [", self.denominator)?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({} {} {} {})", row[0], row[1], row[2], row[3])?;
        }
        write!(f, "]")
    }
}

fn coordinates(v: &Vec2) -> [Rational; 4] {
    [v.x.rational_part().clone(), v.x.sqrt2_part().clone(), v.y.rational_part().clone(), v.y.sqrt2_part().clone()]
}

/// Holonomy vectors of one loop per non-tree gluing of a spanning tree of
/// the face adjacency graph. They generate the absolute periods.
pub fn period_generators(c: &FlatComplex) -> Result<Vec<Vec2>, ComplexError> {
    let topo = c.topology()?;
    let n = c.faces.len();
    let mut offset: Vec<Option<Vec2>> = vec![None; n];
    let mut tree_edge = vec![false; c.gluings.len()];
    let mut glue_of: Vec<Vec<usize>> = c.faces.iter().map(|f| vec![0; f.vertices.len()]).collect();
    for (gi, g) in c.gluings.iter().enumerate() {
        glue_of[g.0.face][g.0.edge] = gi;
        glue_of[g.1.face][g.1.edge] = gi;
    }
    offset[0] = Some(Vec2::origin());
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let off_f = offset[f].clone().expect("visited face has an offset");
        for e in 0..c.face_len(f) {
            let er = EdgeRef { face: f, edge: e };
            let p = topo.partner(er);
            if offset[p.face].is_none() {
                // global = local + offset; crossing maps q to q + T
                offset[p.face] = Some(&off_f - &topo.translation(c, er));
                tree_edge[glue_of[f][e]] = true;
                queue.push_back(p.face);
            }
        }
    }
    let mut gens = Vec::new();
    for (gi, g) in c.gluings.iter().enumerate() {
        if tree_edge[gi] {
            continue;
        }
        let t = topo.translation(c, g.0);
        let off_f = offset[g.0.face].as_ref().expect("connected");
        let off_g = offset[g.1.face].as_ref().expect("connected");
        let h = &(&t + off_g) - off_f;
        if !h.is_zero() {
            gens.push(h);
        }
    }
    Ok(gens)
}

pub fn absolute_period_module(c: &FlatComplex) -> Result<PeriodModule, ComplexError> {
    Ok(PeriodModule::from_vectors(&period_generators(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::unit_square_torus;
    use crate::field::QSqrt2;
    use crate::geom::Point2;

    fn q(a: i64, b: i64) -> QSqrt2 {
        QSqrt2::from_ints(a, b)
    }

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_small() {
        let h = hermite_normal_form(&bi(&[&[2, 4], &[3, 5]]));
        assert_eq!(h, bi(&[&[1, 1], &[0, 2]]));
        let h = hermite_normal_form(&bi(&[&[0, 0], &[4, 6], &[6, 9]]));
        assert_eq!(h, bi(&[&[2, 3]]));
        let h = hermite_normal_form(&bi(&[&[4, 0], &[0, 6], &[6, 9]]));
        assert_eq!(h, bi(&[&[2, 3], &[0, 6]]));
        assert!(hermite_normal_form(&bi(&[&[0, 0, 0]])).is_empty());
    }

    #[test]
    fn torus_periods() {
        let m = absolute_period_module(&unit_square_torus()).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.denominator, BigInt::one());
        let expect = PeriodModule::from_vectors(&[Point2::new(q(1, 0), q(0, 0)), Point2::new(q(0, 0), q(1, 0))]);
        assert_eq!(m, expect);
    }

    #[test]
    fn generator_order_irrelevant() {
        let h = QSqrt2::from_fracs(0, 1, 1, 2);
        let vs = vec![
            Point2::new(q(1, 0), q(0, 0)),
            Point2::new(h.clone(), h.clone()),
            Point2::new(q(0, 0), q(1, 0)),
            Point2::new(-&h, h.clone()),
        ];
        let mut rev = vs.clone();
        rev.reverse();
        rev.push(&vs[0] + &vs[1]);
        assert_eq!(PeriodModule::from_vectors(&vs), PeriodModule::from_vectors(&rev));
        assert_eq!(PeriodModule::from_vectors(&vs).denominator, BigInt::from(2));
    }
}
