//! Elements of `U(1) = ℝ/ℤ` in additive notation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Reduce a real angle into `[0, 1)`.
pub fn reduce(a: f64) -> f64 {
    let r = a - a.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed representative of an angle in `(-1/2, 1/2]`.
pub fn wrap(a: f64) -> f64 {
    let r = reduce(a);
    if r > 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Distance to the nearest integer.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

fn reduce_exact(r: Rational64) -> Rational64 {
    r - r.floor()
}

/// A point of the circle group, either an exact rational angle or a float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleValue {
    Exact(Rational64),
    Float(f64),
}

impl CircleValue {
    pub fn identity() -> Self {
        CircleValue::Exact(Rational64::zero())
    }

    pub fn exact(num: i64, den: i64) -> Self {
        CircleValue::Exact(reduce_exact(Rational64::new(num, den)))
    }

    pub fn from_rational(r: Rational64) -> Self {
        CircleValue::Exact(reduce_exact(r))
    }

    pub fn float(a: f64) -> Self {
        CircleValue::Float(reduce(a))
    }

    /// Angle in `[0, 1)`.
    pub fn angle(&self) -> f64 {
        match self {
            CircleValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            CircleValue::Float(a) => *a,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CircleValue::Exact(_))
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match self {
            CircleValue::Exact(r) => Some(*r),
            CircleValue::Float(_) => None,
        }
    }

    /// Circular distance to `other`, in `[0, 1/2]`.
    pub fn distance(&self, other: &CircleValue) -> f64 {
        match (self, other) {
            (CircleValue::Exact(a), CircleValue::Exact(b)) => {
                let d = reduce_exact(*a - *b).to_f64().unwrap_or(f64::NAN);
                d.min(1.0 - d)
            }
            _ => circular_distance(self.angle(), other.angle()),
        }
    }

    /// Equality: exact values must agree exactly, otherwise within `tol`.
    pub fn approx_eq(&self, other: &CircleValue, tol: f64) -> bool {
        match (self, other) {
            (CircleValue::Exact(a), CircleValue::Exact(b)) => a == b,
            _ => self.distance(other) <= tol,
        }
    }

    /// `exp(2πi·angle)` as a complex pair.
    pub fn to_complex(&self) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * self.angle();
        (t.cos(), t.sin())
    }

    /// Angles as exact rationals when possible, otherwise 12 significant digits.
    pub fn report_string(&self) -> String {
        match self {
            CircleValue::Exact(r) => {
                if *r.denom() == 1 {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            CircleValue::Float(a) => format_float(*a),
        }
    }
}

/// 12 significant digits, trailing zeros trimmed.
pub fn format_float(a: f64) -> String {
    if a == 0.0 || !a.is_finite() {
        return format!("{}", if a.is_finite() { 0.0 } else { a });
    }
    let s = format!("{:.11e}", a);
    let v: f64 = s.parse().unwrap_or(a);
    let mut out = format!("{}", v);
    if out.contains('e') {
        out = s;
    }
    out
}

impl Default for CircleValue {
    fn default() -> Self {
        CircleValue::identity()
    }
}

impl Add for CircleValue {
    type Output = CircleValue;
    fn add(self, rhs: CircleValue) -> CircleValue {
        match (self, rhs) {
            (CircleValue::Exact(a), CircleValue::Exact(b)) => CircleValue::from_rational(a + b),
            (a, b) => CircleValue::float(a.angle() + b.angle()),
        }
    }
}

impl Neg for CircleValue {
    type Output = CircleValue;
    fn neg(self) -> CircleValue {
        match self {
            CircleValue::Exact(a) => CircleValue::from_rational(-a),
            CircleValue::Float(a) => CircleValue::float(-a),
        }
    }
}

impl Sub for CircleValue {
    type Output = CircleValue;
    fn sub(self, rhs: CircleValue) -> CircleValue {
        self + (-rhs)
    }
}

impl Mul<i64> for CircleValue {
    type Output = CircleValue;
    fn mul(self, n: i64) -> CircleValue {
        match self {
            CircleValue::Exact(a) => CircleValue::from_rational(a * Rational64::from_integer(n)),
            CircleValue::Float(a) => CircleValue::float(a * n as f64),
        }
    }
}

impl std::iter::Sum for CircleValue {
    fn sum<I: Iterator<Item = CircleValue>>(iter: I) -> CircleValue {
        iter.fold(CircleValue::identity(), |a, b| a + b)
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report_string())
    }
}

impl Serialize for CircleValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.report_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reduce_and_wrap() {
        assert_eq!(reduce(1.25), 0.25);
        assert_eq!(reduce(-0.25), 0.75);
        assert_eq!(wrap(0.75), -0.25);
        assert!((circular_distance(0.99, 0.01) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = CircleValue::exact(2, 3);
        let b = CircleValue::exact(1, 2);
        assert_eq!(a + b, CircleValue::exact(1, 6));
        assert_eq!(-a, CircleValue::exact(1, 3));
        assert_eq!(a * 3, CircleValue::identity());
        assert_eq!(a.report_string(), "2/3");
    }

    #[test]
    fn exact_no_drift_over_many_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dens = [2i64, 3, 4, 5, 6];
        let mut acc = CircleValue::identity();
        let mut num_sum: i64 = 0;
        // Track the same walk as an integer numerator over lcm = 60.
        for _ in 0..1_000_000 {
            let d = dens[rng.gen_range(0..dens.len())];
            let n = rng.gen_range(0..d);
            let v = CircleValue::exact(n, d);
            if rng.gen_bool(0.5) {
                acc = acc + v;
                num_sum += n * (60 / d);
            } else {
                acc = acc - v;
                num_sum -= n * (60 / d);
            }
        }
        let expected = CircleValue::exact(num_sum.rem_euclid(60), 60);
        assert_eq!(acc, expected);
        if let CircleValue::Exact(r) = acc {
            assert!(60 % r.denom() == 0);
        }
    }

    #[test]
    fn float_report_has_twelve_digits() {
        let v = CircleValue::float(1.0 / 3.0);
        assert_eq!(v.report_string(), "0.333333333333");
    }
}
