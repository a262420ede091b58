use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::scalar::Scalar;

/// A nonnegative distance or `∞`.
///
/// Addition saturates at infinity and the order is total: every finite value
/// sits below `Infinite`. The finite payload is assumed nonnegative and
/// comparable (no NaN); [`crate::MetricSpace`] enforces this on construction.
#[derive(Clone, Copy, Debug)]
pub enum ExtDist<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> ExtDist<T> {
    pub fn zero() -> Self {
        ExtDist::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtDist::Infinite)
    }

    pub fn finite(self) -> Option<T> {
        match self {
            ExtDist::Finite(v) => Some(v),
            ExtDist::Infinite => None,
        }
    }

    /// `self <= other + eps`, with `∞ <= ∞`.
    pub fn le_eps(self, other: Self, eps: T) -> bool {
        match (self, other) {
            (_, ExtDist::Infinite) => true,
            (ExtDist::Infinite, ExtDist::Finite(_)) => false,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a <= b + eps,
        }
    }

    /// Two-sided tolerance comparison; infinities only match each other.
    pub fn approx_eq(self, other: Self, eps: T) -> bool {
        match (self, other) {
            (ExtDist::Infinite, ExtDist::Infinite) => true,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => (a - b).abs() <= eps,
            _ => false,
        }
    }

    /// Nonnegative value test, rejecting NaN for float payloads.
    pub fn is_valid(&self) -> bool {
        match self {
            ExtDist::Finite(v) => *v >= T::zero(),
            ExtDist::Infinite => true,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtDist::Finite(v) => v.to_f64_lossy(),
            ExtDist::Infinite => f64::INFINITY,
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            ExtDist::Infinite
        } else {
            ExtDist::Finite(T::from_f64_lossy(v))
        }
    }

    /// Multiply by a nonnegative finite factor; `0 · ∞` is taken to be `∞`.
    pub fn scale(self, factor: T) -> Self {
        match self {
            ExtDist::Finite(v) => ExtDist::Finite(v * factor),
            ExtDist::Infinite => ExtDist::Infinite,
        }
    }
}

impl<T: Scalar> Add for ExtDist<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinite,
        }
    }
}

impl<T: Scalar> Add<T> for ExtDist<T> {
    type Output = Self;

    fn add(self, rhs: T) -> Self {
        match self {
            ExtDist::Finite(a) => ExtDist::Finite(a + rhs),
            ExtDist::Infinite => ExtDist::Infinite,
        }
    }
}

impl<T: Scalar> From<T> for ExtDist<T> {
    fn from(v: T) -> Self {
        ExtDist::Finite(v)
    }
}

impl<T: Scalar> PartialEq for ExtDist<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for ExtDist<T> {}

impl<T: Scalar> PartialOrd for ExtDist<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for ExtDist<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Infinite, ExtDist::Infinite) => Ordering::Equal,
            (ExtDist::Infinite, ExtDist::Finite(_)) => Ordering::Greater,
            (ExtDist::Finite(_), ExtDist::Infinite) => Ordering::Less,
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a
                .partial_cmp(b)
                .expect("distances must be comparable (NaN is not a distance)"),
        }
    }
}

/// An extremal value together with the point (or pair, or triple) realising it.
/// `witness` is `None` only when the extremum is taken over an empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremum<T: Scalar, W> {
    pub value: ExtDist<T>,
    pub witness: Option<W>,
}

impl<T: Scalar> fmt::Display for ExtDist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(v) => write!(f, "{v}"),
            ExtDist::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type D = ExtDist<f64>;

    #[test]
    fn addition_saturates() {
        assert_eq!(D::Finite(2.0) + D::Infinite, D::Infinite);
        assert_eq!(D::Infinite + D::Infinite, D::Infinite);
        assert_eq!(D::Finite(2.0) + D::Finite(3.5), D::Finite(5.5));
        assert_eq!(D::Infinite + 4.0, D::Infinite);
    }

    #[test]
    fn order_is_total_with_infinity_on_top() {
        let mut xs = vec![D::Infinite, D::Finite(3.0), D::zero(), D::Finite(1.0)];
        xs.sort();
        assert_eq!(xs, vec![D::zero(), D::Finite(1.0), D::Finite(3.0), D::Infinite]);
        assert_eq!(D::Finite(1.0).max(D::Infinite), D::Infinite);
        assert_eq!(D::Finite(1.0).min(D::Infinite), D::Finite(1.0));
    }

    #[test]
    fn tolerance_comparisons() {
        assert!(D::Finite(1.0 + 1e-12).le_eps(D::Finite(1.0), 1e-9));
        assert!(!D::Finite(1.1).le_eps(D::Finite(1.0), 1e-9));
        assert!(D::Infinite.le_eps(D::Infinite, 0.0));
        assert!(!D::Infinite.le_eps(D::Finite(1e300), 1e-9));
        assert!(D::Infinite.approx_eq(D::Infinite, 0.0));
        assert!(!D::Infinite.approx_eq(D::Finite(0.0), 1.0));
    }

    #[test]
    fn nan_is_invalid() {
        assert!(!D::Finite(f64::NAN).is_valid());
        assert!(!D::Finite(-1.0).is_valid());
        assert!(D::Infinite.is_valid());
    }

    #[test]
    fn rational_payloads() {
        let a = ExtDist::Finite(Rational64::new(1, 3));
        let b = ExtDist::Finite(Rational64::new(2, 3));
        assert_eq!(a + b, ExtDist::Finite(Rational64::from_integer(1)));
        assert_eq!(format!("{}", a), "1/3");
        assert_eq!(format!("{}", ExtDist::<Rational64>::Infinite), "inf");
    }
}
