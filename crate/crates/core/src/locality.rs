//! Certified exponent bounds from exact counts on a finite window.
//!
//! Given an isoperimetric constant `C` (so `|∂D| >= C·A(D)` for every minimal
//! diagram) and `|W_ℓ| <= base^{ηℓ}` on `[Aλ/4, Aλ]`, the bound extends to all
//! `ℓ >= Aλ/4` with exponent `η·∏_{i>=0}(1 + 2√(B/A)(3/4)^{i/2})`.
//! `C` is an input; nothing here checks that it is a true isoperimetric constant.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::exponents::log_base;
use crate::presentation::WordKind;

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { value: c, domain: "(0, 1]".into() })
    }
}

/// `α = 1/ln(1/(1−C))`, with `α = 0` at `C = 1`.
pub fn alpha_of(c: f64) -> Result<f64> {
    check_c(c)?;
    if c == 1.0 {
        return Ok(0.0);
    }
    Ok(-1.0 / (-c).ln_1p())
}

/// Left side of the defining inequality for `B`, with the log taken in `base`.
pub fn b_inequality_lhs(b: f64, c: f64, base: f64, eta: f64) -> f64 {
    let alpha = alpha_of(c).expect("C checked by caller");
    4.0 * alpha * (b / c).ln() + 6.0 + b.ln() / (eta * base.ln())
}

/// `144/C²`, a value of `B` that always satisfies the inequality.
pub fn b_witness(c: f64) -> f64 {
    144.0 / (c * c)
}

/// Smallest `B >= 1` with `4α ln(B/C) + 6 + (1/η) log_base B <= B`.
///
/// `B − lhs(B)` is negative at 1, decreases until `B = 4α + 1/(η ln base)`
/// and increases afterwards, so the admissible set is a half-line.
pub fn min_b_in_base(c: f64, base: f64, eta: f64) -> Result<f64> {
    check_c(c)?;
    if !(eta >= 0.5) {
        return Err(Error::Domain { value: eta, domain: "[1/2, ∞)".into() });
    }
    if !(base >= 3.0) {
        return Err(Error::Domain { value: base, domain: "[3, ∞)".into() });
    }
    let ok = |b: f64| b_inequality_lhs(b, c, base, eta) <= b;
    let mut hi = b_witness(c);
    assert!(ok(hi), "witness 144/C² fails the B inequality at C = {c}, base = {base}, η = {eta}");
    let mut lo = 1.0f64;
    if ok(lo) {
        return Ok(lo);
    }
    while (hi - lo) > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// [`min_b_in_base`] with base `2m − 1`.
pub fn min_b(c: f64, m: usize, eta: f64) -> Result<f64> {
    min_b_in_base(c, (2 * m - 1) as f64, eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalityFactor {
    pub b: f64,
    /// `∏_{i>=0}(1 + 2√(B/A)(3/4)^{i/2})`, summed in log space to convergence.
    pub product: f64,
    /// `exp(200/(C√A))`.
    pub exp_bound: f64,
}

fn product_factor(b: f64, a: f64) -> f64 {
    let lead = 2.0 * (b / a).sqrt();
    let ratio = 0.75f64.sqrt();
    let mut term = lead;
    let mut log_sum = 0.0;
    while term > 1e-18 {
        log_sum += term.ln_1p();
        term *= ratio;
    }
    log_sum.exp()
}

/// Growth factor for window scale `A`, in base `base`.
pub fn locality_factor_in_base(c: f64, a: f64, base: f64, eta: f64) -> Result<LocalityFactor> {
    let b = min_b_in_base(c, base, eta)?;
    if a < b.max(1.0) {
        return Err(Error::HypothesisNotMet { a, b });
    }
    let product = product_factor(b, a);
    let exp_bound = (200.0 / (c * a.sqrt())).exp();
    // log ∏ <= 2√(B/A)/(1 − √(3/4)) < 14.93√(B/A), and B <= 144/C².
    assert!(product <= exp_bound, "product {product} exceeds exp(200/(C√A)) = {exp_bound}");
    Ok(LocalityFactor { b, product, exp_bound })
}

/// [`locality_factor_in_base`] with base `2m − 1`.
pub fn locality_factor(c: f64, a: f64, m: usize, eta: f64) -> Result<LocalityFactor> {
    locality_factor_in_base(c, a, (2 * m - 1) as f64, eta)
}

/// Window `[⌊Aλ/4⌋, ⌈Aλ⌉]`, rounded outward so it contains the real interval.
pub fn window(a: f64, lambda: usize) -> (usize, usize) {
    let al = a * lambda as f64;
    ((al / 4.0).floor() as usize, al.ceil() as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityCertificate {
    pub c: f64,
    pub a: f64,
    pub lambda: usize,
    pub m: usize,
    pub kind: WordKind,
    pub base: usize,
    pub alpha: f64,
    pub window: (usize, usize),
    /// `max (1/ℓ) log_base |W_ℓ|` over the window, at least 1/2.
    pub eta_window: f64,
    pub factor: LocalityFactor,
    /// `η_window × product`.
    pub certified_exponent: f64,
    /// `η_window × exp(200/(C√A))`, the coarser closed form.
    pub certified_exponent_exp_bound: f64,
    /// Claimed for every `ℓ >= claim_from`.
    pub claim_from: usize,
    pub inputs_hash: String,
    pub conditional_on: String,
}

/// Certifies `|W_ℓ| <= base^{certified·ℓ}` for all `ℓ >= Aλ/4`, assuming `C`.
///
/// Lengths in the window with zero count satisfy the hypothesis vacuously.
pub fn certify_upper_bound(counts: &CountTable, c: f64, lambda: usize, a: f64) -> Result<LocalityCertificate> {
    check_c(c)?;
    if lambda == 0 {
        return Err(Error::InvalidArgument("λ must be positive".into()));
    }
    if !(a > 1.0) {
        return Err(Error::Domain { value: a, domain: "(1, ∞)".into() });
    }
    let (lo, hi) = window(a, lambda);
    if hi > counts.exact_up_to || (lo..=hi).any(|l| counts.get(l).is_none()) {
        return Err(Error::IncompleteWindow { lo, hi, exact_up_to: counts.exact_up_to });
    }
    let base = counts.base as f64;
    let eta_window = (lo.max(1)..=hi)
        .filter_map(|l| {
            let w = counts.get(l)?;
            (*w >= BigUint::from(1u32)).then(|| log_base(w, base) / l as f64)
        })
        .fold(0.5f64, f64::max);
    let factor = locality_factor_in_base(c, a, base, eta_window)?;
    let mut h = Sha256::new();
    h.update(counts.hash().as_bytes());
    h.update(format!("{c}|{lambda}|{a}").as_bytes());
    Ok(LocalityCertificate {
        c,
        a,
        lambda,
        m: counts.generators,
        kind: counts.kind,
        base: counts.base,
        alpha: alpha_of(c)?,
        window: (lo, hi),
        eta_window,
        factor,
        certified_exponent: eta_window * factor.product,
        certified_exponent_exp_bound: eta_window * factor.exp_bound,
        claim_from: lo,
        inputs_hash: hex::encode(h.finalize()),
        conditional_on: format!("every minimal van Kampen diagram satisfies |∂D| >= {c}·A(D)"),
    })
}

/// Both sides of the quasimultiplicativity inequality at one length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiRow {
    pub length: usize,
    /// Even inflation `δ >= 2αλ ln(ℓ/(Cλ)) + 3λ`.
    pub inflation: usize,
    pub lhs: BigUint,
    /// `(ℓ/λ) · max_{ℓ/4 <= ℓ' <= 3ℓ/4} |W_{ℓ'+δ}| |W_{ℓ−ℓ'+δ}|`.
    pub rhs: f64,
    /// `log_base rhs − log_base lhs`; negative means `(counts, C)` are incompatible.
    pub slack: f64,
}

/// Superadditivity of the table: `|W_{ℓ+ℓ'+s}| >= |W_ℓ||W_{ℓ'}|` with shift
/// `s = 0` for plain counts and `s = 2` for reduced ones. The reduced form
/// needs at least one nonempty factor (`u x v x⁻¹` with a non-cancelling `x`).
pub fn check_superadditive(counts: &CountTable) -> Result<()> {
    let shift = match counts.kind {
        WordKind::Plain => 0,
        WordKind::Reduced => 2,
    };
    for (&a, wa) in &counts.entries {
        for (&b, wb) in counts.entries.range(a..) {
            if shift > 0 && a + b == 0 {
                continue;
            }
            if let Some(wab) = counts.get(a + b + shift) {
                if *wab < wa * wb {
                    return Err(Error::NotSuperadditive { a, b });
                }
            }
        }
    }
    Ok(())
}

/// Evaluates the quasimultiplicativity inequality at each of `lengths`.
/// A diagnostic for `(counts, C)` compatibility, not a proof of anything.
pub fn quasimultiplicativity_gap(counts: &CountTable, c: f64, lambda: usize, lengths: &[usize]) -> Result<Vec<QuasiRow>> {
    check_superadditive(counts)?;
    let alpha = alpha_of(c)?;
    let lam = lambda.max(1) as f64;
    let base = counts.base as f64;
    let mut rows = Vec::with_capacity(lengths.len());
    for &l in lengths {
        let lf = l as f64;
        let raw = 2.0 * alpha * lam * (lf / (c * lam)).ln().max(0.0) + 3.0 * lam;
        let mut inflation = raw.ceil() as usize;
        inflation += inflation % 2;
        let (p_lo, p_hi) = (l.div_ceil(4), (3 * l) / 4);
        let needed = l - p_lo + inflation;
        if needed > counts.exact_up_to || counts.get(l).is_none() {
            return Err(Error::Coverage { needed: needed.max(l), exact_up_to: counts.exact_up_to });
        }
        let mut best = BigUint::default();
        for lp in p_lo..=p_hi.max(p_lo) {
            let x = counts.get(lp + inflation).cloned().unwrap_or_default();
            let y = counts.get(l - lp + inflation).cloned().unwrap_or_default();
            let prod = x * y;
            if prod > best {
                best = prod;
            }
        }
        let lhs = counts.get(l).cloned().unwrap_or_default();
        let rhs_log = if best == BigUint::default() { f64::NEG_INFINITY } else { log_base(&best, base) + (lf / lam).ln() / base.ln() };
        let lhs_log = if lhs == BigUint::default() { f64::NEG_INFINITY } else { log_base(&lhs, base) };
        let slack = if lhs_log == f64::NEG_INFINITY { f64::INFINITY } else { rhs_log - lhs_log };
        rows.push(QuasiRow { length: l, inflation, lhs, rhs: base.powf(rhs_log), slack });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::word_problem::{AbelianOracle, FreeOracle};
    use std::collections::BTreeMap;

    #[test]
    fn alpha_examples() {
        assert!((alpha_of(1.0 - (-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(alpha_of(1.0).unwrap(), 0.0);
        let a = alpha_of(0.5).unwrap();
        assert!((a - 1.0 / 2f64.ln()).abs() < 1e-15);
        assert!(a <= 2.0);
        assert!(alpha_of(0.0).is_err() && alpha_of(1.5).is_err());
        for i in 1..=100 {
            let c = i as f64 / 100.0;
            assert!(alpha_of(c).unwrap() <= 1.0 / c);
        }
    }

    #[test]
    fn min_b_examples() {
        let lhs = 4.0 / 2f64.ln() * 1152f64.ln() + 6.0 + 2.0 * 576f64.ln() / 3f64.ln();
        assert!((lhs - 58.25).abs() < 0.01);
        assert!((b_inequality_lhs(576.0, 0.5, 3.0, 0.5) - lhs).abs() < 1e-12);
        let b = min_b(0.5, 2, 0.5).unwrap();
        assert!(b <= 576.0);
        assert!(b_inequality_lhs(b, 0.5, 3.0, 0.5) <= b);
        assert!(b_inequality_lhs(b * (1.0 - 1e-6), 0.5, 3.0, 0.5) > b * (1.0 - 1e-6));
        assert!(min_b(0.5, 2, 1.0).unwrap() < b);
    }

    #[test]
    fn witness_grid() {
        for i in 1..=10 {
            let c = i as f64 / 10.0;
            for m in 2..=4 {
                for eta in [0.5, 0.75, 1.0] {
                    let base = (2 * m - 1) as f64;
                    assert!(b_inequality_lhs(b_witness(c), c, base, eta) <= b_witness(c));
                    assert!(min_b(c, m, eta).unwrap() <= b_witness(c));
                }
            }
        }
    }

    #[test]
    fn factor_bounds() {
        let f = locality_factor(1.0, 40000.0, 2, 0.5).unwrap();
        assert!((f.exp_bound - std::f64::consts::E).abs() < 1e-12);
        assert!(f.product <= std::f64::consts::E);
        let g = locality_factor(0.5, 1e6, 2, 0.5).unwrap();
        assert!(g.product >= 1.0 && g.product <= 0.4f64.exp());
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let a = 600.0 * 1.5f64.powi(k);
            let f = locality_factor(0.5, a, 2, 0.5).unwrap();
            assert!(f.product < last);
            last = f.product;
        }
        assert!(matches!(locality_factor(0.5, 10.0, 2, 0.5), Err(Error::HypothesisNotMet { .. })));
    }

    #[test]
    fn product_factor_matches_direct_product() {
        let (b, a) = (40.0, 900.0);
        let mut direct = 1.0;
        for i in 0..400 {
            direct *= 1.0 + 2.0 * (b / a as f64).sqrt() * 0.75f64.powf(i as f64 / 2.0);
        }
        assert!((product_factor(b, a) / direct - 1.0).abs() < 1e-12);
    }

    fn synthetic(kind: WordKind, m: usize, top: usize, f: impl Fn(usize) -> BigUint) -> CountTable {
        CountTable::new(kind, m, (0..=top).map(|l| (l, f(l))).collect::<BTreeMap<_, _>>())
    }

    #[test]
    fn certificate_examples() {
        let zeros = synthetic(WordKind::Reduced, 2, 520, |l| BigUint::from((l == 0) as u32));
        let c = certify_upper_bound(&zeros, 0.5, 8, 64.0).unwrap();
        assert_eq!(c.eta_window, 0.5);
        assert!((c.certified_exponent - c.factor.product / 2.0).abs() < 1e-15);
        assert_eq!(c.window, (128, 512));

        let synth = synthetic(WordKind::Reduced, 2, 520, |l| BigUint::from(3u32).pow((3 * l / 5) as u32));
        assert!(matches!(certify_upper_bound(&synth, 0.5, 8, 16.0), Err(Error::HypothesisNotMet { .. })));
        let c = certify_upper_bound(&synth, 0.5, 8, 64.0).unwrap();
        assert!((c.eta_window - 0.6).abs() < 1e-12);
        assert!((c.certified_exponent - 0.6 * c.factor.product).abs() < 1e-9);
        assert!(c.certified_exponent >= c.eta_window);

        assert!(matches!(certify_upper_bound(&synth, 0.5, 8, 66.0), Err(Error::IncompleteWindow { .. })));
    }

    #[test]
    fn certificate_monotone_in_a() {
        let synth = synthetic(WordKind::Reduced, 2, 800, |l| BigUint::from(3u32).pow((3 * l / 5) as u32));
        let mut last = f64::INFINITY;
        for a in [40.0, 50.0, 64.0, 80.0, 100.0] {
            let c = certify_upper_bound(&synth, 0.5, 8, a).unwrap();
            assert!(c.factor.product <= last);
            last = c.factor.product;
        }
    }

    #[test]
    fn abelian_certificate_stays_above_window() {
        let ball = build_ball(&AbelianOracle::new(2), 20, 1 << 20).unwrap();
        let t = CountTable::from_ball(&ball, WordKind::Reduced);
        let c = certify_upper_bound(&t, 1.0, 4, 10.0).unwrap();
        assert!(c.eta_window > 0.75);
        assert!(c.certified_exponent >= c.eta_window);
    }

    #[test]
    fn free_plain_certificate_is_sound() {
        let ball = build_ball(&FreeOracle::new(2), 10, 1 << 22).unwrap();
        let t = CountTable::from_ball(&ball, WordKind::Plain);
        let c = certify_upper_bound(&t, 1.0, 1, 20.0).unwrap();
        assert!(c.certified_exponent >= crate::exponents::free_theta(2));
    }

    #[test]
    fn quasimultiplicativity() {
        let ball = build_ball(&FreeOracle::new(2), 9, 1 << 20).unwrap();
        let t = CountTable::from_ball(&ball, WordKind::Plain);
        let rows = quasimultiplicativity_gap(&t, 0.5, 1, &[4, 8]).unwrap();
        assert!(rows.iter().all(|r| r.slack > 1.0));
        assert!(matches!(quasimultiplicativity_gap(&t, 0.5, 1, &[40]), Err(Error::Coverage { .. })));

        let mut bad = t.clone();
        bad.entries.insert(4, BigUint::from(1u32));
        assert!(matches!(quasimultiplicativity_gap(&bad, 0.5, 1, &[4]), Err(Error::NotSuperadditive { .. })));
    }

    #[test]
    fn superadditivity_of_fixtures() {
        for kind in [WordKind::Plain, WordKind::Reduced] {
            let ab = build_ball(&AbelianOracle::new(2), 10, 1 << 20).unwrap();
            check_superadditive(&CountTable::from_ball(&ab, kind)).unwrap();
            let free = build_ball(&FreeOracle::new(2), 8, 1 << 20).unwrap();
            check_superadditive(&CountTable::from_ball(&free, kind)).unwrap();
        }
    }
}
