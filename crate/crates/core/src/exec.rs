//! Batch execution over independent samples.
//!
//! Every verification and sampling routine funnels its inner loop through
//! [`Execution`]. With the `rayon` feature enabled (the default) the
//! [`Execution::Parallel`] mode fans out over the rayon pool; without it,
//! both modes run the same sequential loop. Results are always returned in
//! sample order and maxima are order-independent, so output is identical in
//! either mode.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "rayon") && self == Execution::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "rayon")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maximum of `f` over `items`; NaN anywhere yields NaN. Empty input gives 0.
    pub fn max<T, F>(self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        #[cfg(feature = "rayon")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).reduce(|| 0.0, nan_max);
        }
        items.iter().map(f).fold(0.0, nan_max)
    }

    /// Componentwise maximum of a fixed-width residual vector.
    pub fn max_n<T, F, const N: usize>(self, items: &[T], f: F) -> [f64; N]
    where
        T: Sync,
        F: Fn(&T) -> [f64; N] + Sync + Send,
    {
        let merge = |a: [f64; N], b: [f64; N]| {
            let mut out = a;
            for (o, x) in out.iter_mut().zip(b) {
                *o = nan_max(*o, x);
            }
            out
        };
        #[cfg(feature = "rayon")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).reduce(|| [0.0; N], merge);
        }
        items.iter().map(f).fold([0.0; N], merge)
    }

    /// Minimum of `f` over `items`; NaN anywhere yields NaN. Empty input gives +inf.
    pub fn min<T, F>(self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        let nan_min = |a: f64, b: f64| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.min(b)
            }
        };
        #[cfg(feature = "rayon")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).reduce(|| f64::INFINITY, nan_min);
        }
        items.iter().map(f).fold(f64::INFINITY, nan_min)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<f64> = (0..1000).map(|k| ((k * 37) % 101) as f64).collect();
        for mode in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(mode.max(&xs, |x| *x), 100.0);
            assert_eq!(mode.min(&xs, |x| *x), 0.0);
            assert_eq!(
                mode.map(&xs, |x| x * 2.0),
                xs.iter().map(|x| x * 2.0).collect::<Vec<_>>()
            );
            assert_eq!(mode.max_n(&xs, |x| [*x, -*x]), [100.0, 0.0]);
        }
    }

    #[test]
    fn nan_is_not_swallowed() {
        let xs = [1.0, f64::NAN, 3.0];
        for mode in [Execution::Sequential, Execution::Parallel] {
            assert!(mode.max(&xs, |x| *x).is_nan());
            assert!(mode.min(&xs, |x| *x).is_nan());
        }
    }

    #[test]
    fn empty_input() {
        let xs: [f64; 0] = [];
        assert_eq!(Execution::Parallel.max(&xs, |x| *x), 0.0);
        assert_eq!(Execution::Sequential.min(&xs, |x| *x), f64::INFINITY);
    }
}
