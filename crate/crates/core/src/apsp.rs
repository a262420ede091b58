//! Pivot-restricted Floyd–Warshall relaxation.
//!
//! Full Floyd–Warshall pivots through every vertex. Coarse gluing only needs
//! the endpoints of glued edges as pivots: in a path through a vertex with no
//! glued edge both incident edges are internal, and the triangle inequality of
//! the base metric lets the two be replaced by the direct internal edge.

use num_traits::Float;

use crate::ext::ExtDist;
use crate::scalar::Scalar;

pub(crate) fn relax_generic<T: Scalar>(n: usize, dist: &mut [ExtDist<T>], pivots: &[usize]) {
    debug_assert_eq!(dist.len(), n * n);
    let mut row_k = Vec::with_capacity(n);
    for &k in pivots {
        row_k.clear();
        row_k.extend_from_slice(&dist[k * n..(k + 1) * n]);
        for i in 0..n {
            let ExtDist::Finite(dik) = dist[i * n + k] else {
                continue;
            };
            for (slot, dkj) in dist[i * n..(i + 1) * n].iter_mut().zip(&row_k) {
                if let ExtDist::Finite(dkj) = dkj {
                    let cand = dik + *dkj;
                    match slot {
                        ExtDist::Finite(cur) if *cur <= cand => {}
                        _ => *slot = ExtDist::Finite(cand),
                    }
                }
            }
        }
    }
}

/// Same relaxation on raw floats with `inf` standing for `∞`; the inner loop
/// is branch-free so it vectorises.
pub(crate) fn relax_float<F: Float>(n: usize, dist: &mut [F], pivots: &[usize]) {
    debug_assert_eq!(dist.len(), n * n);
    let mut row_k = Vec::with_capacity(n);
    for &k in pivots {
        row_k.clear();
        row_k.extend_from_slice(&dist[k * n..(k + 1) * n]);
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for (slot, &dkj) in dist[i * n..(i + 1) * n].iter_mut().zip(&row_k) {
                let cand = dik + dkj;
                *slot = if cand < *slot { cand } else { *slot };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn path_matrix<T: Scalar>(w: T) -> Vec<ExtDist<T>> {
        // 0 - 1 - 2 as a path with edge weight w, nothing else known.
        let z = ExtDist::zero();
        let e = ExtDist::Finite(w);
        let inf = ExtDist::Infinite;
        vec![z, e, inf, e, z, e, inf, e, z]
    }

    #[test]
    fn generic_and_float_kernels_agree() {
        let mut a = path_matrix(1.5f64);
        relax_generic(3, &mut a, &[0, 1, 2]);
        let mut b = path_matrix(1.5f64);
        f64::relax_through_pivots(3, &mut b, &[0, 1, 2]);
        assert_eq!(a, b);
        assert_eq!(a[2], ExtDist::Finite(3.0));
    }

    #[test]
    fn only_pivots_are_used_as_intermediates() {
        let mut a = path_matrix(1.0f64);
        relax_generic(3, &mut a, &[0]);
        assert_eq!(a[2], ExtDist::Infinite);
        relax_generic(3, &mut a, &[1]);
        assert_eq!(a[2], ExtDist::Finite(2.0));
    }

    #[test]
    fn rational_kernel() {
        let mut a = path_matrix(Rational64::new(1, 3));
        Rational64::relax_through_pivots(3, &mut a, &[0, 1, 2]);
        assert_eq!(a[6], ExtDist::Finite(Rational64::new(2, 3)));
    }
}
