//! Cogrowth exponents: exact lower bounds, two-point point estimates and the
//! Grigorchuk relation between the reduced (η) and plain (θ) exponents.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cayley::build_ball;
use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::locality::certify_upper_bound;
use crate::presentation::{Presentation, WordKind};
use crate::word_problem::TrivialityOracle;

/// `log_base x` for an arbitrary-precision `x >= 1`.
pub fn log_base(x: &BigUint, base: f64) -> f64 {
    ln_big(x) / base.ln()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentKind {
    /// Reduced words, base `2m − 1`.
    Eta,
    /// All words, base `2m`.
    Theta,
}

pub const POINT_ESTIMATOR: &str = "two-point log-count slope between the two largest usable lengths";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub kind: ExponentKind,
    /// Valid lower bound for the exponent.
    pub lower_bound: f64,
    /// Bound before the floor at 1/2 (η only); `None` when every count vanishes.
    pub raw_lower_bound: Option<f64>,
    pub point_estimate: f64,
    /// Slope before clamping to `[lower_bound, 1]`.
    pub raw_point_estimate: Option<f64>,
    pub point_lengths: Option<(usize, usize)>,
    pub certified_upper: Option<f64>,
    /// Smallest and largest length that entered the bounds.
    pub window: (usize, usize),
    pub empty_kernel: bool,
    pub odd_lengths_used: bool,
    pub estimator: String,
}

/// Lengths `ℓ >= 1` entering the bounds: only even ones unless some odd count is nonzero.
fn usable_lengths(t: &CountTable) -> (Vec<usize>, bool) {
    let odd = t.entries.iter().any(|(&l, w)| l % 2 == 1 && !w.is_zero());
    let lens = t.entries.keys().copied().filter(|&l| l >= 1 && (odd || l % 2 == 0)).collect();
    (lens, odd)
}

/// `max_ℓ (1/ℓ) log_{2m} |W_ℓ|` over usable lengths.
pub fn theta_lower_bound(t: &CountTable) -> Result<f64> {
    let (lens, _) = usable_lengths(t);
    let base = t.base as f64;
    lens.iter()
        .filter_map(|&l| t.get(l).filter(|w| !w.is_zero()).map(|w| log_base(w, base) / l as f64))
        .reduce(f64::max)
        .ok_or(Error::UndefinedEstimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaBound {
    pub value: f64,
    pub raw: Option<f64>,
    pub empty_kernel: bool,
}

/// `max_ℓ (log_{2m−1}|W'_ℓ| − 2)/ℓ`, floored at 1/2.
pub fn eta_lower_bound(t: &CountTable) -> EtaBound {
    let (lens, _) = usable_lengths(t);
    let base = t.base as f64;
    let raw = lens
        .iter()
        .filter_map(|&l| t.get(l).filter(|w| !w.is_zero()).map(|w| (log_base(w, base) - 2.0) / l as f64))
        .reduce(f64::max);
    EtaBound { value: raw.map_or(0.5, |r| r.max(0.5)), raw, empty_kernel: raw.is_none() }
}

/// `θ = log_{2m}((2m−1)^η + (2m−1)^{1−η})` for `η ∈ [1/2, 1]`.
pub fn grigorchuk_theta_from_eta(eta: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Grigorchuk relation needs m >= 2, got {m}")));
    }
    if !(0.5..=1.0).contains(&eta) {
        return Err(Error::Domain { value: eta, domain: "[1/2, 1]".into() });
    }
    let q = (2 * m - 1) as f64;
    Ok((q.powf(eta) + q.powf(1.0 - eta)).ln() / ((2 * m) as f64).ln())
}

/// Free-group value `log_{2m}(2√(2m−1))`, the smallest θ.
pub fn free_theta(m: usize) -> f64 {
    let q = (2 * m - 1) as f64;
    (2.0 * q.sqrt()).ln() / ((2 * m) as f64).ln()
}

/// Inverse branch with `x = (2m−1)^η >= √(2m−1)`: `x = (s + √(s² − 4(2m−1)))/2`, `s = (2m)^θ`.
///
/// At the free-group value the discriminant vanishes and is dominated by
/// rounding; values within a few ulps of `s²` are snapped to zero.
pub fn grigorchuk_eta_from_theta(theta: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Grigorchuk relation needs m >= 2, got {m}")));
    }
    if theta.is_nan() || theta > 1.0 {
        return Err(Error::Domain { value: theta, domain: "[log_{2m}(2√(2m−1)), 1]".into() });
    }
    let q = (2 * m - 1) as f64;
    let s = ((2 * m) as f64).powf(theta);
    let mut disc = s * s - 4.0 * q;
    if disc.abs() <= 16.0 * f64::EPSILON * s * s {
        disc = 0.0;
    }
    if disc < 0.0 {
        return Err(Error::NoSolution { theta });
    }
    let x = 0.5 * (s + disc.sqrt());
    Ok((x.ln() / q.ln()).clamp(0.5, 1.0))
}

fn slope(t: &CountTable, lens: &[usize]) -> Option<(f64, (usize, usize))> {
    let base = t.base as f64;
    let nonzero: Vec<usize> = lens.iter().copied().filter(|&l| t.get(l).is_some_and(|w| !w.is_zero())).collect();
    let (&l2, rest) = nonzero.split_last()?;
    let &l1 = rest.last()?;
    let (w1, w2) = (t.get(l1)?, t.get(l2)?);
    Some(((log_base(w2, base) - log_base(w1, base)) / (l2 - l1) as f64, (l1, l2)))
}

fn window_of(lens: &[usize]) -> (usize, usize) {
    (lens.first().copied().unwrap_or(0), lens.last().copied().unwrap_or(0))
}

/// θ estimate from a plain count table.
pub fn theta_estimate(t: &CountTable) -> Result<ExponentEstimate> {
    let lower = theta_lower_bound(t)?;
    let (lens, odd) = usable_lengths(t);
    let s = slope(t, &lens);
    Ok(ExponentEstimate {
        kind: ExponentKind::Theta,
        lower_bound: lower,
        raw_lower_bound: Some(lower),
        point_estimate: s.map_or(lower, |(v, _)| v.clamp(lower, 1.0f64.max(lower))),
        raw_point_estimate: s.map(|(v, _)| v),
        point_lengths: s.map(|(_, p)| p),
        certified_upper: None,
        window: window_of(&lens),
        empty_kernel: false,
        odd_lengths_used: odd,
        estimator: POINT_ESTIMATOR.into(),
    })
}

/// η estimate from a reduced count table.
pub fn eta_estimate(t: &CountTable) -> ExponentEstimate {
    let bound = eta_lower_bound(t);
    let (lens, odd) = usable_lengths(t);
    let s = if bound.empty_kernel { None } else { slope(t, &lens) };
    ExponentEstimate {
        kind: ExponentKind::Eta,
        lower_bound: bound.value,
        raw_lower_bound: bound.raw,
        point_estimate: s.map_or(bound.value, |(v, _)| v.clamp(bound.value, 1.0f64.max(bound.value))),
        raw_point_estimate: s.map(|(v, _)| v),
        point_lengths: s.map(|(_, p)| p),
        certified_upper: None,
        window: window_of(&lens),
        empty_kernel: bound.empty_kernel,
        odd_lengths_used: odd,
        estimator: POINT_ESTIMATOR.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub oracle: String,
    pub requested_radius: usize,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub plain_table_hash: String,
    pub reduced_table_hash: String,
    pub seed: Option<u64>,
    pub isoperimetric_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub eta: ExponentEstimate,
    pub theta: ExponentEstimate,
    pub plain: CountTable,
    pub reduced: CountTable,
    /// Why a requested certificate was not attached.
    pub certificate_notes: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub max_radius: usize,
    pub budget: usize,
    pub isoperimetric_constant: Option<f64>,
    pub seed: Option<u64>,
}

/// Builds the largest ball within budget (up to `max_radius`), counts, and
/// extracts both exponents. With a constant `C`, the widest window the
/// counts cover is fed to the locality certificate.
pub fn estimate_exponents(p: &Presentation, oracle: &dyn TrivialityOracle, opts: &EstimateOptions) -> Result<ExponentReport> {
    let ball = match build_ball(oracle, opts.max_radius, opts.budget) {
        Ok(b) => b,
        Err(Error::BallBudget { completed_radius, budget }) => {
            if completed_radius == 0 {
                return Err(Error::BallBudget { completed_radius, budget });
            }
            build_ball(oracle, completed_radius, opts.budget)?
        }
        Err(e) => return Err(e),
    };
    if ball.radius() == 0 {
        return Err(Error::InsufficientRadius { radius: 0, length: 2, needed: 1 });
    }
    let plain = CountTable::from_ball(&ball, WordKind::Plain);
    let reduced = CountTable::from_ball(&ball, WordKind::Reduced);
    let mut theta = theta_estimate(&plain)?;
    let mut eta = eta_estimate(&reduced);
    let mut notes = Vec::new();
    if let Some(c) = opts.isoperimetric_constant {
        let lambda = p.max_relator_len().max(1);
        let a = plain.exact_up_to as f64 / lambda as f64;
        for (est, table) in [(&mut theta, &plain), (&mut eta, &reduced)] {
            match certify_upper_bound(table, c, lambda, a) {
                Ok(cert) => est.certified_upper = Some(cert.certified_exponent.min(1.0)),
                Err(e) => notes.push(format!("{:?}: {e}", est.kind)),
            }
        }
    }
    let provenance = Provenance {
        oracle: oracle.name().to_string(),
        requested_radius: opts.max_radius,
        ball_radius: ball.radius(),
        ball_size: ball.len(),
        plain_table_hash: plain.hash(),
        reduced_table_hash: reduced.hash(),
        seed: opts.seed,
        isoperimetric_constant: opts.isoperimetric_constant,
    };
    Ok(ExponentReport { eta, theta, plain, reduced, certificate_notes: notes, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::word_problem::{AbelianOracle, FreeOracle};
    use std::collections::BTreeMap;

    /// Closed walks on the 2m-regular tree by distance class.
    fn tree_counts(m: usize, max_len: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::from(1u32)];
        let mut out = vec![BigUint::from(1u32)];
        for _ in 0..max_len {
            let mut next = vec![BigUint::zero(); v.len() + 1];
            for (k, c) in v.iter().enumerate() {
                if k == 0 {
                    next[1] += c * BigUint::from(2 * m);
                } else {
                    next[k - 1] += c;
                    next[k + 1] += c * BigUint::from(2 * m - 1);
                }
            }
            out.push(next[0].clone());
            v = next;
        }
        out
    }

    fn table(kind: WordKind, m: usize, counts: &[BigUint]) -> CountTable {
        CountTable::new(kind, m, counts.iter().cloned().enumerate().collect::<BTreeMap<_, _>>())
    }

    #[test]
    fn theta_lower_bound_matches_tree_oracle() {
        let exact = tree_counts(2, 20);
        assert_eq!(theta_lower_bound(&table(WordKind::Plain, 2, &exact[..3])).unwrap(), 0.5);
        let ball = build_ball(&FreeOracle::new(2), 10, 1 << 22).unwrap();
        let t = CountTable::from_ball(&ball, WordKind::Plain);
        let oracle = (1..=10).map(|n| log_base(&exact[2 * n], 4.0) / (2 * n) as f64).fold(0.0, f64::max);
        let got = theta_lower_bound(&t).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!(got < free_theta(2));
        // Per-length bounds increase, so the maximum sits at the top length.
        assert!((got - log_base(&exact[20], 4.0) / 20.0).abs() < 1e-12);
    }

    #[test]
    fn theta_lower_bound_is_running_max() {
        let exact = tree_counts(2, 16);
        let mut last = 0.0;
        for top in (2..=16).step_by(2) {
            let b = theta_lower_bound(&table(WordKind::Plain, 2, &exact[..=top])).unwrap();
            assert!(b >= last);
            last = b;
        }
        assert!(matches!(theta_lower_bound(&table(WordKind::Plain, 2, &exact[..1])), Err(Error::UndefinedEstimate)));
    }

    #[test]
    fn eta_bounds() {
        let ball = build_ball(&FreeOracle::new(2), 6, 1 << 20).unwrap();
        let free = eta_lower_bound(&CountTable::from_ball(&ball, WordKind::Reduced));
        assert_eq!(free.value, 0.5);
        assert!(free.empty_kernel && free.raw.is_none());
        let single = CountTable::new(WordKind::Reduced, 2, [(6, BigUint::from(1u32))].into_iter().collect());
        let b = eta_lower_bound(&single);
        assert_eq!(b.value, 0.5);
        assert!(!b.empty_kernel);
        assert!((b.raw.unwrap() + 2.0 / 6.0).abs() < 1e-15);

        let ab = build_ball(&AbelianOracle::new(2), 6, 1 << 20).unwrap();
        let e = eta_estimate(&CountTable::from_ball(&ab, WordKind::Reduced));
        assert!(e.lower_bound > 0.5 && e.lower_bound < 1.0);
        assert!(e.point_estimate >= e.lower_bound);
    }

    #[test]
    fn grigorchuk_values() {
        for m in 2..=5 {
            assert!((grigorchuk_theta_from_eta(1.0, m).unwrap() - 1.0).abs() < 1e-15);
            assert!((grigorchuk_eta_from_theta(1.0, m).unwrap() - 1.0).abs() < 1e-15);
        }
        let t2 = grigorchuk_theta_from_eta(0.5, 2).unwrap();
        assert!((t2 - 12f64.sqrt().ln() / 4f64.ln()).abs() < 1e-15);
        assert!((t2 - 0.896_240).abs() < 1e-6);
        let t3 = grigorchuk_theta_from_eta(0.5, 3).unwrap();
        assert!((t3 - 20f64.sqrt().ln() / 6f64.ln()).abs() < 1e-15);
        assert!((t3 - 0.835_975).abs() < 1e-6);
        for m in 2..=4 {
            assert!((grigorchuk_eta_from_theta(free_theta(m), m).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn grigorchuk_round_trip_and_monotone() {
        for m in 2..=4 {
            let mut last = f64::NEG_INFINITY;
            for i in 0..20 {
                let eta = 0.5 + 0.5 * i as f64 / 19.0;
                let theta = grigorchuk_theta_from_eta(eta, m).unwrap();
                assert!(theta > last);
                last = theta;
                let back = grigorchuk_eta_from_theta(theta, m).unwrap();
                assert!((back - eta).abs() < 1e-12, "m={m} eta={eta} back={back}");
            }
        }
    }

    #[test]
    fn grigorchuk_errors() {
        assert!(matches!(grigorchuk_theta_from_eta(0.4, 2), Err(Error::Domain { .. })));
        assert!(matches!(grigorchuk_theta_from_eta(1.01, 2), Err(Error::Domain { .. })));
        assert!(matches!(grigorchuk_eta_from_theta(1.01, 2), Err(Error::Domain { .. })));
        assert!(matches!(grigorchuk_eta_from_theta(0.8, 2), Err(Error::NoSolution { .. })));
        assert!(grigorchuk_theta_from_eta(0.7, 1).is_err());
    }

    #[test]
    fn free_group_report() {
        let p = Presentation::free(2).unwrap();
        let opts = EstimateOptions { max_radius: 10, budget: 1 << 22, isoperimetric_constant: None, seed: Some(1) };
        let r = estimate_exponents(&p, &FreeOracle::new(2), &opts).unwrap();
        assert_eq!(r.eta.point_estimate, 0.5);
        assert!(r.eta.empty_kernel);
        assert_eq!(r.theta.point_lengths, Some((18, 20)));
        assert!(r.theta.lower_bound <= r.theta.point_estimate && r.theta.point_estimate <= 1.0);
        let exact = tree_counts(2, 20);
        assert!((r.theta.lower_bound - log_base(&exact[20], 4.0) / 20.0).abs() < 1e-12);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ExponentReport>(&json).unwrap(), r);
    }

    #[test]
    fn budget_falls_back_to_completed_radius() {
        let p = Presentation::free(2).unwrap();
        let opts = EstimateOptions { max_radius: 10, budget: 200, isoperimetric_constant: None, seed: None };
        let r = estimate_exponents(&p, &FreeOracle::new(2), &opts).unwrap();
        assert_eq!(r.provenance.ball_radius, 4);
        assert_eq!(r.plain.exact_up_to, 8);
    }

    #[test]
    fn abelian_report() {
        let p: Presentation = "m=2\nabAB\n".parse().unwrap();
        let opts = EstimateOptions { max_radius: 16, budget: 1 << 20, isoperimetric_constant: None, seed: None };
        let r = estimate_exponents(&p, &AbelianOracle::new(2), &opts).unwrap();
        assert!(r.theta.point_estimate >= 0.9);
        assert!(r.eta.point_estimate >= 0.9);
        assert!(r.eta.lower_bound >= 0.5 && r.theta.lower_bound >= 0.5);
    }
}
