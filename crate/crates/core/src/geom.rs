//! Exact planar predicates over Q(√2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::QSqrt2;

/// A point or vector in a face chart.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point2 {
    pub x: QSqrt2,
    pub y: QSqrt2,
}

pub type Vec2 = Point2;

impl Point2 {
    pub fn new(x: QSqrt2, y: QSqrt2) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, s: &QSqrt2) -> Self {
        Point2 { x: &self.x * s, y: &self.y * s }
    }

    pub fn dot(&self, o: &Point2) -> QSqrt2 {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> QSqrt2 {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> QSqrt2 {
        self.dot(self)
    }

    /// Lies in the closed upper half plane minus the negative x axis.
    pub fn is_upper(&self) -> bool {
        match self.y.signum() {
            1 => true,
            0 => self.x.is_positive(),
            _ => false,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }

    /// Lexicographic order on (x, y).
    pub fn lex_cmp(&self, o: &Point2) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Point2> for &Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2 { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Sub<&Point2> for &Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2 { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        &self + &o
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        &self - &o
    }
}

impl Neg for &Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2 { x: -&self.x, y: -&self.y }
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        -&self
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(QSqrt2, QSqrt2)>::deserialize(d)?;
        Ok(Point2 { x, y })
    }
}

/// Shorthand for building points from `a + b√2` coordinates given as
/// `(num, den)` pairs: `pt((an, ad, bn, bd), ...)`.
pub fn pt(x: (i64, i64, i64, i64), y: (i64, i64, i64, i64)) -> Point2 {
    Point2::new(QSqrt2::from_fracs(x.0, x.1, x.2, x.3), QSqrt2::from_fracs(y.0, y.1, y.2, y.3))
}

/// Sign of the turn a → b → c.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> i32 {
    (b - a).cross(&(c - a)).signum()
}

/// `p` lies on the closed segment `a b`.
pub fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let d = b - a;
    let t = (p - a).dot(&d);
    t.signum() >= 0 && t <= d.norm2()
}

/// `p` lies strictly between `a` and `b`.
pub fn strictly_inside_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    on_segment(p, a, b) && p != a && p != b
}

/// Closed segments `a b` and `c d` share at least one point.
pub fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
}

/// Twice the signed area of a polygon.
pub fn twice_signed_area(poly: &[Point2]) -> QSqrt2 {
    let n = poly.len();
    (0..n).fold(QSqrt2::zero(), |acc, i| acc + poly[i].cross(&poly[(i + 1) % n]))
}

pub fn signed_area(poly: &[Point2]) -> QSqrt2 {
    twice_signed_area(poly) * QSqrt2::from_fracs(1, 2, 0, 1)
}

/// Simple polygon test: non-adjacent edges are disjoint, adjacent edges meet
/// only at their shared vertex, all vertices distinct.
pub fn is_simple(poly: &[Point2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i] == poly[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (&poly[j], &poly[(j + 1) % n]);
            let adjacent_next = j == i + 1;
            let adjacent_prev = (j + 1) % n == i;
            if adjacent_next {
                // share b == c; must not fold back over each other
                if orient(a, b, d) == 0 && (d - b).dot(&(a - b)).is_positive() {
                    return false;
                }
            } else if adjacent_prev {
                if orient(c, d, b) == 0 && (b - a).dot(&(c - a)).is_positive() {
                    return false;
                }
            } else if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Point location relative to a simple polygon: `Some(true)` strict interior,
/// `Some(false)` exterior, `None` on the boundary.
pub fn point_in_polygon(p: &Point2, poly: &[Point2]) -> Option<bool> {
    let n = poly.len();
    for i in 0..n {
        if on_segment(p, &poly[i], &poly[(i + 1) % n]) {
            return None;
        }
    }
    // crossing number with the horizontal ray to the right, half-open rule
    let mut inside = false;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let a_above = a.y > p.y;
        let b_above = b.y > p.y;
        if a_above != b_above {
            // x-coordinate of crossing compared to p.x, without division
            let s = orient(a, b, p);
            let upward = b.y > a.y;
            if (upward && s > 0) || (!upward && s < 0) {
                inside = !inside;
            }
        }
    }
    Some(inside)
}

/// Ear-clipping triangulation of a simple counterclockwise polygon. Returns
/// vertex index triples, each counterclockwise with positive area.
pub fn triangulate(poly: &[Point2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (&poly[ia], &poly[ib], &poly[ic]);
            if orient(a, b, c) <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != ia && j != ib && j != ic && {
                    let p = &poly[j];
                    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
                }
            });
            if blocked {
                continue;
            }
            out.push([ia, ib, ic]);
            idx.remove(k);
            clipped = true;
            break;
        }
        assert!(clipped, "triangulate: no ear found; polygon is not simple");
    }
    if idx.len() == 3 && orient(&poly[idx[0]], &poly[idx[1]], &poly[idx[2]]) > 0 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    out
}

/// Counterclockwise angle order measured from `reference`: compares the
/// angles in `[0, 2π)` swept from `reference` to `x` and to `y`.
pub fn ccw_cmp_from(reference: &Vec2, x: &Vec2, y: &Vec2) -> Ordering {
    let half = |v: &Vec2| -> u8 {
        let c = reference.cross(v).signum();
        if c > 0 || (c == 0 && reference.dot(v).is_positive()) {
            0
        } else {
            1
        }
    };
    let (hx, hy) = (half(x), half(y));
    if hx != hy {
        return hx.cmp(&hy);
    }
    let xa0 = reference.cross(x).is_zero() && reference.dot(x).is_positive();
    let ya0 = reference.cross(y).is_zero() && reference.dot(y).is_positive();
    match (xa0, ya0) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    match x.cross(y).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Same direction (positive multiple).
pub fn same_direction(u: &Vec2, v: &Vec2) -> bool {
    u.cross(v).is_zero() && u.dot(v).is_positive()
}

/// `x` lies in the half-open counterclockwise wedge `[out, inn)`.
pub fn in_wedge(out: &Vec2, inn: &Vec2, x: &Vec2) -> bool {
    ccw_cmp_from(out, x, inn) == Ordering::Less
}

/// Interior angle of the wedge from `out` counterclockwise to `inn`, in
/// radians within `(0, 2π)`.
pub fn wedge_angle(out: &Vec2, inn: &Vec2) -> f64 {
    let (ox, oy) = out.to_f64();
    let (ix, iy) = inn.to_f64();
    let a = (ox * iy - oy * ix).atan2(ox * ix + oy * iy);
    if a <= 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Squared distance from the origin to the closed segment `a b`.
pub fn dist2_origin_segment(a: &Point2, b: &Point2) -> QSqrt2 {
    let d = b - a;
    let dd = d.norm2();
    if dd.is_zero() {
        return a.norm2();
    }
    let t = -a.dot(&d);
    if t.signum() <= 0 {
        return a.norm2();
    }
    if t >= dd {
        return b.norm2();
    }
    // |a|² - (a·d)²/|d|²
    a.norm2() - (&t * &t) / dd
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::new(QSqrt2::from_int(x), QSqrt2::from_int(y))
    }

    #[test]
    fn simple_polygons() {
        let sq = vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)];
        assert!(is_simple(&sq));
        let bow = vec![p(0, 0), p(1, 1), p(1, 0), p(0, 1)];
        assert!(!is_simple(&bow));
        let collinear = vec![p(0, 0), p(1, 0), p(2, 0), p(2, 1)];
        assert!(is_simple(&collinear));
        let spike = vec![p(0, 0), p(2, 0), p(1, 0), p(1, 1)];
        assert!(!is_simple(&spike));
    }

    #[test]
    fn triangulation_covers_area() {
        let poly = vec![p(0, 0), p(1, 0), p(2, 0), p(2, 2), p(1, 1), p(0, 2)];
        let tris = triangulate(&poly);
        assert_eq!(tris.len(), 4);
        let total = tris.iter().fold(QSqrt2::zero(), |acc, t| {
            acc + signed_area(&[poly[t[0]].clone(), poly[t[1]].clone(), poly[t[2]].clone()])
        });
        assert_eq!(total, signed_area(&poly));
    }

    #[test]
    fn point_location() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        assert_eq!(point_in_polygon(&p(1, 1), &sq), Some(true));
        assert_eq!(point_in_polygon(&p(3, 1), &sq), Some(false));
        assert_eq!(point_in_polygon(&p(2, 1), &sq), None);
    }

    #[test]
    fn angle_order() {
        let r = p(1, 0);
        assert_eq!(ccw_cmp_from(&r, &p(0, 1), &p(-1, 0)), Ordering::Less);
        assert_eq!(ccw_cmp_from(&r, &p(0, -1), &p(-1, 0)), Ordering::Greater);
        assert_eq!(ccw_cmp_from(&r, &p(2, 0), &p(0, -1)), Ordering::Less);
        assert!(in_wedge(&p(1, 0), &p(0, 1), &p(1, 0)));
        assert!(!in_wedge(&p(1, 0), &p(0, 1), &p(0, 1)));
        assert!(in_wedge(&p(1, 0), &p(0, -1), &p(-1, 0))); // reflex wedge
    }

    #[test]
    fn segment_distance() {
        assert_eq!(dist2_origin_segment(&p(-1, 1), &p(1, 1)), QSqrt2::one());
        assert_eq!(dist2_origin_segment(&p(1, 1), &p(2, 1)), QSqrt2::from_int(2));
    }
}
