//! Fixed-order reductions.
//!
//! The reduction tree depends only on the input length, so results are
//! bit-identical regardless of how many worker threads take part.

use crate::scalar::Scalar;

const LEAF: usize = 64;
const PARALLEL_CUTOFF: usize = 1 << 14;

/// Pairwise sum over a slice.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    sum_by(xs.len(), |i| xs[i])
}

/// Pairwise sum of `f(i)` for `i in 0..len`.
pub fn sum_by<T, F>(len: usize, f: F) -> T
where
    T: Scalar,
    F: Fn(usize) -> T + Sync,
{
    sum_range(0, len, &f)
}

fn sum_range<T, F>(lo: usize, hi: usize, f: &F) -> T
where
    T: Scalar,
    F: Fn(usize) -> T + Sync,
{
    let len = hi - lo;
    if len <= LEAF {
        let mut acc = T::zero();
        for i in lo..hi {
            acc = acc + f(i);
        }
        return acc;
    }
    let mid = lo + len / 2;
    if len >= PARALLEL_CUTOFF {
        let (a, b) = rayon::join(|| sum_range(lo, mid, f), || sum_range(mid, hi, f));
        a + b
    } else {
        sum_range(lo, mid, f) + sum_range(mid, hi, f)
    }
}

/// Maximum of `f(i)`; order independent, so no tree is needed.
pub fn max_by<T, F>(len: usize, f: F) -> T
where
    T: Scalar,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len)
        .into_par_iter()
        .map(f)
        .reduce(T::zero, |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_integers() {
        let xs: Vec<f64> = (0..100_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 99_999.0 * 100_000.0 / 2.0);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let xs: Vec<f64> = (0..200_003).map(|i| ((i as f64) * 0.37).sin()).collect();
        let a = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| pairwise_sum(&xs));
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| pairwise_sum(&xs));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(pairwise_sum::<f32>(&[]), 0.0);
        assert_eq!(max_by::<f64, _>(0, |_| 1.0), 0.0);
    }
}
