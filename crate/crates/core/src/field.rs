//! Exact arithmetic in the real quadratic field Q(√2).
//!
//! Every coordinate, length-squared and circle position in the crate is a
//! [`QSqrt2`]. Values are stored as `a + b√2` with arbitrary-precision
//! rational `a`, `b`; the representation is unique, so structural equality is
//! numeric equality. Floating point only appears in [`QSqrt2::to_f64`] and as a
//! seed for [`QSqrt2::modulo`], where the answer is always certified exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FieldError;

pub type Rational = BigRational;

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    a: Rational,
    b: Rational,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    /// `a + b√2` from small integers.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QSqrt2 { a: rat(a), b: rat(b) }
    }

    /// `an/ad + (bn/bd)√2`.
    pub fn from_fracs(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt2 {
            a: Rational::new(BigInt::from(an), BigInt::from(ad)),
            b: Rational::new(BigInt::from(bn), BigInt::from(bd)),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QSqrt2 { a: Rational::from_integer(n), b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the integer value if this is an integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(2) * &self.b * &self.b
    }

    /// Exact sign of `a + b√2`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a² against 2b²
        let a2 = &self.a * &self.a;
        let b2 = rat(2) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // x / y = x * conj(y) / N(y)
        let n = rhs.norm();
        let num = self * &rhs.conjugate();
        Ok(QSqrt2 { a: num.a / &n, b: num.b / n })
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        Self::one().checked_div(self)
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let seed = self.to_f64_lossy().floor();
        let mut k = if seed.is_finite() {
            BigInt::from(seed as i64)
        } else {
            // fall back to the rational bound |b√2| < 2|b|
            (&self.a - rat(2) * self.b.abs()).floor().to_integer()
        };
        let le = |k: &BigInt| (self - &QSqrt2::from_bigint(k.clone())).signum() >= 0;
        // bracket [lo, hi) with lo <= x < hi, then bisect
        let mut step = BigInt::one();
        if le(&k) {
            let mut hi = &k + &step;
            while le(&hi) {
                k = hi.clone();
                step *= 2;
                hi = &k + &step;
            }
            bisect(k, hi, le)
        } else {
            let mut lo = &k - &step;
            while !le(&lo) {
                k = lo.clone();
                step *= 2;
                lo = &k - &step;
            }
            bisect(lo, k, le)
        }
    }

    /// Representative `r` of `self` modulo `m` with `0 <= r < m`.
    pub fn modulo(&self, m: &QSqrt2) -> Result<QSqrt2, FieldError> {
        Ok(self.div_rem(m)?.1)
    }

    /// `(k, r)` with `self = k·m + r`, `k` an integer and `0 <= r < m`.
    pub fn div_rem(&self, m: &QSqrt2) -> Result<(BigInt, QSqrt2), FieldError> {
        if !m.is_positive() {
            return Err(FieldError::NonPositiveModulus);
        }
        let q = self.checked_div(m)?;
        let k = q.floor();
        let r = self - &(m * &QSqrt2::from_bigint(k.clone()));
        debug_assert!(r.signum() >= 0 && (&r - m).is_negative());
        Ok((k, r))
    }

    /// Binary64 approximation. Opposite-sign components are combined through
    /// the conjugate so that cancellation does not destroy precision.
    pub fn to_f64(&self) -> Result<f64, FieldError> {
        let v = self.to_f64_lossy();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FieldError::Overflow)
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        let fa = self.a.to_f64().unwrap_or(f64::NAN);
        let fb = self.b.to_f64().unwrap_or(f64::NAN);
        if sa * sb >= 0 {
            return fa + fb * std::f64::consts::SQRT_2;
        }
        // a + b√2 = (a² - 2b²) / (a - b√2), denominator has no cancellation
        let n = self.norm().to_f64().unwrap_or(f64::NAN);
        n / (fa - fb * std::f64::consts::SQRT_2)
    }

    /// Canonical text form, e.g. `2`, `-1/2+3√2`, `1-√2`, `√2/2`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn bisect(mut lo: BigInt, mut hi: BigInt, le: impl Fn(&BigInt) -> bool) -> BigInt {
    // invariant: le(lo) && !le(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if le(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: &QSqrt2) -> QSqrt2 {
                let g: fn(&QSqrt2, &QSqrt2) -> QSqrt2 = $body;
                g(self, rhs)
            }
        }
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: &QSqrt2) -> QSqrt2 {
                (&self).$f(rhs)
            }
        }
        impl $tr<QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: QSqrt2) -> QSqrt2 {
                self.$f(&rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| QSqrt2 { a: &x.a + &y.a, b: &x.b + &y.b });
binop!(Sub, sub, |x, y| QSqrt2 { a: &x.a - &y.a, b: &x.b - &y.b });
binop!(Mul, mul, |x, y| QSqrt2 { a: &x.a * &y.a + rat(2) * &x.b * &y.b, b: &x.a * &y.b + &x.b * &y.a });
// Panics on a zero divisor, like the integer operators; use `checked_div` when
// the divisor is not known to be nonzero.
binop!(Div, div, |x, y| x.checked_div(y).expect("division by zero in Q(√2)"));

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -&self.a, b: -&self.b }
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_int(n)
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2 { a: r, b: Rational::zero() }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = |b: &Rational| -> String {
            let mag = b.abs();
            let n = mag.numer();
            let body = if n.is_one() { "√2".to_string() } else { format!("{n}√2") };
            if mag.is_integer() {
                body
            } else {
                format!("{body}/{}", mag.denom())
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => {
                let sign = if self.b.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", surd(&self.b))
            }
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{}", fmt_rational(&self.a), surd(&self.b))
            }
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct QSqrt2Repr {
    a: [String; 2],
    b: [String; 2],
}

fn rational_to_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn rational_from_pair(p: &[String; 2]) -> Result<Rational, FieldError> {
    let num = BigInt::from_str(p[0].trim()).map_err(|_| FieldError::Parse(p[0].clone()))?;
    let den = BigInt::from_str(p[1].trim()).map_err(|_| FieldError::Parse(p[1].clone()))?;
    if den.is_zero() {
        return Err(FieldError::Parse(format!("{}/{}", p[0], p[1])));
    }
    Ok(Rational::new(num, den))
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QSqrt2Repr { a: rational_to_pair(&self.a), b: rational_to_pair(&self.b) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = QSqrt2Repr::deserialize(d)?;
        let a = rational_from_pair(&repr.a).map_err(D::Error::custom)?;
        let b = rational_from_pair(&repr.b).map_err(D::Error::custom)?;
        Ok(QSqrt2 { a, b })
    }
}

/// Handy constants of the octagon geometry.
pub mod consts {
    use super::QSqrt2;

    /// `√2/2`
    pub fn half_sqrt2() -> QSqrt2 {
        QSqrt2::from_fracs(0, 1, 1, 2)
    }

    /// `1 + √2`
    pub fn silver() -> QSqrt2 {
        QSqrt2::from_ints(1, 1)
    }

    /// `2 + √2`
    pub fn two_plus_sqrt2() -> QSqrt2 {
        QSqrt2::from_ints(2, 1)
    }
}
