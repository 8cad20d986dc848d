//! Deterministic compensated reductions.
//!
//! Inputs are cut into fixed-size blocks, each block is summed with Kahan
//! compensation, and block sums are combined pairwise in index order. Block
//! boundaries never depend on the thread pool, so results are bit-identical
//! whatever the number of workers.

use rayon::prelude::*;

const BLOCK: usize = 1024;

#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

fn pairwise(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

/// Sum of `f(i)` for `i in 0..len`, deterministic across schedules.
pub fn det_sum_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let blocks = len.div_ceil(BLOCK);
    let partial: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = KahanSum::new();
            for i in b * BLOCK..((b + 1) * BLOCK).min(len) {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    pairwise(&partial)
}

pub fn det_sum(values: &[f64]) -> f64 {
    det_sum_by(values.len(), |i| values[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut v = vec![1.0];
        v.extend(std::iter::repeat_n(1e-16, 10_000));
        let s = det_sum(&v);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15, "{s}");
    }

    #[test]
    fn independent_of_thread_count() {
        let v: Vec<f64> = (0..50_000).map(|i| ((i as f64) * 0.37).sin() * 1e3).collect();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| det_sum(&v));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| det_sum(&v));
        assert_eq!(one.to_bits(), four.to_bits());
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(det_sum(&[]), 0.0);
    }
}
