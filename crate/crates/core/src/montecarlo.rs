//! Monte Carlo estimates of the return probability `|W_ℓ| / (2m)^ℓ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::stream;
use crate::word::sample_plain_word;
use crate::word_problem::TrivialityOracle;

const CHUNK: u64 = 4096;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MonteCarloEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Samples `trials` uniform words of length `len` and counts the trivial ones.
/// Chunk `i` draws from the substream keyed by `(seed, i)`, so the result does
/// not depend on the thread count.
pub fn monte_carlo_return(oracle: &dyn TrivialityOracle, len: usize, trials: u64, seed: u64) -> MonteCarloEstimate {
    assert!(trials >= 1);
    let m = oracle.generators();
    let chunks = trials.div_ceil(CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, &[c]);
            let n = CHUNK.min(trials - c * CHUNK);
            (0..n).filter(|_| oracle.is_trivial(&sample_plain_word(m, len, &mut rng))).count() as u64
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(successes, trials, Z95);
    MonteCarloEstimate { trials, successes, estimate: successes as f64 / trials as f64, ci_low, ci_high }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word_problem::FreeOracle;

    #[test]
    fn wilson_reference_values() {
        // 50/100: centre 0.5, half-width z·sqrt(0.25/100 + z²/40000)/(1 + z²/100).
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.403_831).abs() < 1e-5 && (hi - 0.596_169).abs() < 1e-5);
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.35);
    }

    #[test]
    fn free_group_return() {
        let free = FreeOracle::new(2);
        let e = monte_carlo_return(&free, 2, 1_000_000, 7);
        assert!(e.contains(0.25));
        let e = monte_carlo_return(&free, 4, 1_000_000, 8);
        assert!(e.contains(28.0 / 256.0));
        let e = monte_carlo_return(&free, 1, 10_000, 9);
        assert_eq!(e.successes, 0);
    }

    #[test]
    fn thread_count_independent() {
        let free = FreeOracle::new(2);
        let a = monte_carlo_return(&free, 6, 50_000, 3);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| monte_carlo_return(&free, 6, 50_000, 3));
        assert_eq!(a, b);
    }
}
