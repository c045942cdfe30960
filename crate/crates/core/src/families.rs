//! Closed-form invariants of the `Oct_n` family: systole families,
//! equal-systole partners and the density search.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::{Corner, FlatComplex};
use crate::error::ModelError;
use crate::field::QSqrt2;
use crate::octagon::{normal_form, strip};
use crate::search::SaddleConnection;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystoleReport {
    pub n: i64,
    /// 1, 2 or 3; absent for the octagon itself.
    pub family: Option<u8>,
    pub sq_len: QSqrt2,
    pub count: usize,
    /// Endpoint labels, one `(P-side, B/C-side)` pair per systole.
    pub endpoints: Vec<(String, String)>,
}

fn pair(a: &str, b: &str) -> (String, String) {
    (a.to_string(), b.to_string())
}

fn half() -> QSqrt2 {
    QSqrt2::from_fracs(1, 2, 0, 1)
}

/// Family of a position `P` on the bottom circle.
pub fn family_of(p: &QSqrt2) -> Result<u8, ModelError> {
    let one = QSqrt2::one();
    let half_top = &strip::top() * &half();
    let lo = &one + &half_top;
    let hi = &QSqrt2::from_int(2) + &half_top;
    if *p == one || *p == lo || *p == hi {
        return Err(ModelError::BoundaryCase);
    }
    Ok(if *p > one && *p < lo {
        1
    } else if *p > lo && *p < hi {
        2
    } else {
        3
    })
}

pub fn systole_closed_form(n: i64) -> Result<SystoleReport, ModelError> {
    if n == 0 {
        return Ok(SystoleReport { n, family: None, sq_len: QSqrt2::one(), count: 4, endpoints: Vec::new() });
    }
    let p = normal_form(n).p;
    let family = family_of(&p)?;
    let bx = strip::bx();
    let cx = strip::cx();
    let sq = |dx: QSqrt2| &dx.square() + &half();
    let (sq_len, endpoints) = match family {
        1 => (sq(&p - &bx), vec![pair("P_n", "B")]),
        2 => (sq(&(&p - &QSqrt2::one()) - &bx), vec![pair("P_{n-1}", "B"), pair("P_n", "C")]),
        _ => {
            let prev = (&p - &QSqrt2::one()).modulo(&strip::circle())?;
            (sq(&prev - &cx), vec![pair("P_{n-1}", "C")])
        }
    };
    Ok(SystoleReport { n, family: Some(family), sq_len, count: endpoints.len(), endpoints })
}

/// Label of a cone corner in a strip complex, preferring the marked
/// points `P_n`, `P_{n-1}` and reading `E` as `C`, `F` as `B`.
pub fn corner_label(c: &FlatComplex, corner: Corner) -> Option<String> {
    let at = c.vertex(corner);
    let hit = |label: &str| c.marks.get(label).is_some_and(|v| v.face == corner.face && c.vertex(*v) == at);
    for (label, shown) in [("P_n", "P_n"), ("P_{n-1}", "P_{n-1}"), ("B", "B"), ("F", "B"), ("C", "C"), ("E", "C")] {
        if hit(label) {
            return Some(shown.to_string());
        }
    }
    None
}

/// Endpoint labels of a saddle connection found on a strip complex,
/// ordered with the `P` end first.
pub fn connection_labels(c: &FlatComplex, sc: &SaddleConnection) -> Option<(String, String)> {
    let a = corner_label(c, sc.start.corner)?;
    let b = corner_label(c, sc.end_position()?.corner)?;
    Some(if a.starts_with('P') { (a, b) } else { (b, a) })
}

fn sq_of(m: i64) -> Result<QSqrt2, ModelError> {
    Ok(systole_closed_form(m)?.sq_len)
}

/// Every `m` in `range` whose systole has the same squared length as `n`'s.
pub fn brute_force_partners(n: i64, range: std::ops::RangeInclusive<i64>) -> Result<BTreeSet<i64>, ModelError> {
    let target = sq_of(n)?;
    let mut out = BTreeSet::new();
    for m in range {
        if sq_of(m)? == target {
            out.insert(m);
        }
    }
    Ok(out)
}

/// The index `n0` sharing `n`'s systole length with `P_{n0}` in `(1, B)`.
///
/// The systole of `Oct_m` is `d² + 1/2` where `d` is the distance from
/// `P_m` to the nearest of `1-√2/2`, `B`, `C` on the circle; which one is
/// nearest is exactly the family. Since `-√2 ≡ 2` on the circle, shifting
/// the index by one or two and reflecting `m ↦ -m` (which is `P ↦ 2-P`)
/// moves between the three targets and the two sides of each.
pub fn family_one_representative(n: i64) -> Result<i64, ModelError> {
    if n == 0 {
        return Err(ModelError::BoundaryCase);
    }
    let p = normal_form(n).p;
    let h = strip::height();
    let (target, left, right) = match family_of(&p)? {
        1 => (strip::bx(), n, -n - 2),
        2 => (strip::cx(), n - 1, -n - 1),
        _ => (&QSqrt2::one() - &h, n - 2, -n),
    };
    // signed offset from the target, taken in (-L/2, L/2]
    let l = strip::circle();
    let half_l = &l * &half();
    let sigma = &(&(&p - &target) + &half_l).modulo(&l)? - &half_l;
    Ok(if sigma.is_negative() { left } else { right })
}

/// The indices whose systoles match `n`'s, from the exact interval test
/// on the family-1 representative of `n`.
pub fn same_systole_partners(n: i64) -> Result<BTreeSet<i64>, ModelError> {
    if n == 0 {
        return Ok(BTreeSet::from([0]));
    }
    let n0 = family_one_representative(n)?;
    let x = normal_form(n0).p;
    let split = &strip::top() * &half();
    Ok(if x > split { BTreeSet::from([n0, n0 + 1, n0 + 2, -n0, -n0 - 1, -n0 - 2]) } else { BTreeSet::from([n0, -n0]) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Approximation {
    pub m: i64,
    pub n: i64,
    pub dist: f64,
    pub dist_exact: QSqrt2,
    pub reached: bool,
}

/// Distance on the circle of length `len`.
pub fn circle_distance(a: &QSqrt2, b: &QSqrt2, len: &QSqrt2) -> QSqrt2 {
    let d = (a - b).modulo(len).expect("positive modulus");
    let e = len - &d;
    d.min(e)
}

/// Larger of the two circle distances between the marked points of
/// `Oct_n` and `Oct_m`.
pub fn surface_distance(n: i64, m: i64) -> QSqrt2 {
    let (a, b) = (normal_form(n), normal_form(m));
    let dp = circle_distance(&a.p, &b.p, &strip::circle());
    let dq = circle_distance(&a.pp, &b.pp, &strip::top());
    dp.max(dq)
}

/// Scans `n = m∓1, m∓2, …` within `[-limit, limit]` for a surface closer
/// than `eps` to `Oct_m`.
pub fn approximate(m: i64, eps: f64, limit: i64) -> Approximation {
    let mut best: Option<Approximation> = None;
    let in_range = |n: i64| (-limit..=limit).contains(&n);
    let span = limit.saturating_add(m.abs());
    for k in 1..=span {
        for n in [m - k, m + k] {
            if !in_range(n) {
                continue;
            }
            let exact = surface_distance(n, m);
            let dist = exact.to_f64().unwrap_or(f64::INFINITY);
            if dist < eps {
                return Approximation { m, n, dist, dist_exact: exact, reached: true };
            }
            if best.as_ref().is_none_or(|b| dist < b.dist) {
                best = Some(Approximation { m, n, dist, dist_exact: exact, reached: false });
            }
        }
    }
    best.unwrap_or(Approximation { m, n: m, dist: 0.0, dist_exact: QSqrt2::zero(), reached: false })
}

/// `2/(2+√2) + 1/(1+√2) = 1`, checked exactly.
pub fn density_relation_holds() -> bool {
    let a = strip::circle().inverse().expect("nonzero");
    let b = strip::top().inverse().expect("nonzero");
    &(&a * &QSqrt2::from_int(2)) + &b == QSqrt2::one()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: i64,
    #[serde(rename = "P")]
    pub p: QSqrt2,
    #[serde(rename = "Pp")]
    pub pp: QSqrt2,
    pub p_f64: f64,
    pub pp_f64: f64,
    pub family: Option<u8>,
    pub systole_sq: QSqrt2,
    pub systole_sq_f64: f64,
    pub systole_count: usize,
    pub partners: Vec<i64>,
}

pub fn table_rows(a: i64, b: i64) -> Result<Vec<TableRow>, ModelError> {
    (a..=b)
        .map(|n| {
            let nf = normal_form(n);
            let s = systole_closed_form(n)?;
            Ok(TableRow {
                n,
                p_f64: nf.p.to_f64()?,
                pp_f64: nf.pp.to_f64()?,
                p: nf.p,
                pp: nf.pp,
                family: s.family,
                systole_sq_f64: s.sq_len.to_f64()?,
                systole_sq: s.sq_len,
                systole_count: s.count,
                partners: same_systole_partners(n)?.into_iter().collect(),
            })
        })
        .collect()
}

const COLUMNS: [&str; 10] =
    ["n", "P", "P_f64", "Pp", "Pp_f64", "family", "systole_sq", "systole_sq_f64", "count", "partners"];

fn cells(r: &TableRow) -> [String; 10] {
    let partners: Vec<String> = r.partners.iter().map(|m| m.to_string()).collect();
    [
        r.n.to_string(),
        r.p.to_string(),
        format!("{:.12}", r.p_f64),
        r.pp.to_string(),
        format!("{:.12}", r.pp_f64),
        r.family.map_or("-".to_string(), |f| f.to_string()),
        r.systole_sq.to_string(),
        format!("{:.12}", r.systole_sq_f64),
        r.systole_count.to_string(),
        partners.join(" "),
    ]
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("writing to memory");
    for r in rows {
        w.write_record(cells(r)).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("cells are UTF-8")
}

pub fn table_text(rows: &[TableRow]) -> String {
    let body: Vec<[String; 10]> = rows.iter().map(cells).collect();
    let mut widths = COLUMNS.map(|c| c.chars().count());
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let fmt = |row: &[String]| {
        let padded: Vec<String> =
            row.iter().zip(widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = fmt(&COLUMNS.map(String::from));
    out.push('\n');
    for row in &body {
        out.push_str(&fmt(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let two_minus = QSqrt2::from_ints(2, -1);
        let s1 = systole_closed_form(1).unwrap();
        assert_eq!((s1.family, s1.count, s1.sq_len.clone()), (Some(1), 1, two_minus.clone()));
        let s2 = systole_closed_form(2).unwrap();
        assert_eq!((s2.family, s2.count, s2.sq_len), (Some(2), 2, two_minus.clone()));
        let s3 = systole_closed_form(3).unwrap();
        assert_eq!((s3.family, s3.sq_len), (Some(3), two_minus));
    }

    #[test]
    fn parallelogram_identity() {
        for n in -40..=40 {
            let p = normal_form(n).p;
            let l = (&(&p - &QSqrt2::one()) - &strip::bx()).square();
            let r = (&p - &strip::cx()).square();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn density_relation() {
        assert!(density_relation_holds());
    }

    #[test]
    fn large_eps_accepts_neighbor() {
        let a = approximate(5, 4.0, 100);
        assert!(a.reached);
        assert_eq!(a.n, 4);
    }

    #[test]
    fn partners_match_brute_force_small() {
        for n in 1..=10 {
            assert_eq!(same_systole_partners(n).unwrap(), brute_force_partners(n, -100..=100).unwrap(), "n = {n}");
        }
    }
}
