//! The scalar abstraction every distance, control and tolerance is built on.
//!
//! Everything in the crate only needs an ordered field: distances are added,
//! compared, and occasionally divided (slopes, stretches). Floating point types
//! get a vectorisable shortest-path kernel; exact rationals fall back to the
//! generic one.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

use crate::ext::ExtDist;

pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Comparison slack used when a caller does not pass one.
    fn default_eps() -> Self;

    /// Lossy conversion used by the file formats and generators.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| panic!("{v} is not representable"))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Relax a row-major `n x n` distance matrix through the given pivots, in
    /// order. After the call `dist[i][j]` is the length of the shortest walk
    /// from `i` to `j` whose interior vertices all lie in `pivots`.
    fn relax_through_pivots(n: usize, dist: &mut [ExtDist<Self>], pivots: &[usize]) {
        crate::apsp::relax_generic(n, dist, pivots);
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn default_eps() -> Self {
                $eps
            }

            fn relax_through_pivots(n: usize, dist: &mut [ExtDist<Self>], pivots: &[usize]) {
                let mut raw: Vec<$t> = dist
                    .iter()
                    .map(|d| d.finite().unwrap_or(<$t as Float>::infinity()))
                    .collect();
                crate::apsp::relax_float(n, &mut raw, pivots);
                for (slot, v) in dist.iter_mut().zip(raw) {
                    *slot = if v.is_infinite() {
                        ExtDist::Infinite
                    } else {
                        ExtDist::Finite(v)
                    };
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);

impl Scalar for Rational64 {
    fn default_eps() -> Self {
        Rational64::from_integer(0)
    }

    fn from_f64_lossy(v: f64) -> Self {
        Rational64::from_f64(v).unwrap_or_else(|| panic!("{v} is not representable"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion_is_exact_on_dyadics() {
        assert_eq!(Rational64::from_f64_lossy(2.5), Rational64::new(5, 2));
        assert_eq!(Rational64::new(3, 4).to_f64_lossy(), 0.75);
        assert_eq!(<Rational64 as Scalar>::default_eps(), Rational64::from_integer(0));
    }

    #[test]
    fn two_is_two() {
        assert_eq!(f64::two(), 2.0);
        assert_eq!(Rational64::two(), Rational64::from_integer(2));
    }
}
