//! Dirichlet spectral radius of the simple random walk on a ball.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyBall, OUTSIDE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    /// Largest Rayleigh quotient of `M` seen; never above the true top eigenvalue.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `Mf(x) = (1/2m) Σ_s f(x·s)`, with moves leaving the ball contributing 0.
fn apply(ball: &CayleyBall, f: &[f64], out: &mut [f64]) {
    let scale = 1.0 / (2 * ball.generators()) as f64;
    out.par_iter_mut().enumerate().for_each(|(i, o)| {
        let mut acc = 0.0;
        for &j in ball.row(i) {
            if j != OUTSIDE {
                acc += f[j as usize];
            }
        }
        *o = acc * scale;
    });
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Power iteration on the lazy operator `(I + M)/2`, whose top eigenvector is
/// that of `M` and whose spectrum lies in `[0, 1]`. Stops once two successive
/// Rayleigh quotients differ by less than `tolerance`.
pub fn spectral_radius_lower_bound(ball: &CayleyBall, iterations: usize, tolerance: f64) -> SpectralEstimate {
    let n = ball.len();
    let mut f = vec![1.0 / (n as f64).sqrt(); n];
    let mut mf = vec![0.0; n];
    let mut best = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    for it in 1..=iterations {
        apply(ball, &f, &mut mf);
        let q = dot(&f, &mf) / dot(&f, &f);
        best = best.max(q);
        if (q - prev).abs() < tolerance {
            return SpectralEstimate { value: best, iterations: it, converged: true };
        }
        prev = q;
        f.par_iter_mut().zip(&mf).for_each(|(x, y)| *x = 0.5 * (*x + y));
        let norm = dot(&f, &f).sqrt();
        if norm == 0.0 {
            return SpectralEstimate { value: best, iterations: it, converged: true };
        }
        f.par_iter_mut().for_each(|x| *x /= norm);
    }
    SpectralEstimate { value: best, iterations, converged: false }
}
