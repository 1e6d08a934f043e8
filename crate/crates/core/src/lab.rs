//! Experiment harness: density scans, cogrowth curves, result records and
//! their JSON and CSV exports.
//!
//! Each `(d, ℓ, seed index)` cell draws from its own substream of the master
//! seed, so a cell's output does not depend on which other cells run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{estimate_exponents, EstimateOptions, ExponentReport};
use crate::montecarlo::{wilson_interval, Z95};
use crate::pieces::{max_piece, satisfies};
use crate::presentation::{sample_density_presentation, DensityConfig, Presentation, WordKind};
use crate::rng::{derive_seed, seeded};
use crate::word_problem::{DehnOracle, FreeOracle, TrivialityOracle};

/// Densities at or above this bound get no exponent estimates.
pub const CURVE_DENSITY_LIMIT: f64 = 1.0 / 12.0;

/// One-sided 95% normal quantile.
pub const Z95_ONE_SIDED: f64 = 1.644_853_626_951_472_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sample,
    ScCheck,
    Count,
    Estimate,
    Certify,
    DensityScan,
    PieceScan,
    Curve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub generators: usize,
    pub word_kind: WordKind,
    pub densities: Vec<f64>,
    pub lengths: Vec<usize>,
    /// Number of seeds per `(d, ℓ)` cell.
    pub seeds: usize,
    pub seed: u64,
    /// Ball radius for exponent estimates; 0 skips them in scans.
    pub radius: usize,
    /// Ball element budget.
    pub budget: usize,
    /// Largest relator count a cell may sample.
    pub relator_budget: usize,
    pub trials: u64,
    pub isoperimetric_constant: Option<f64>,
    pub area: Option<f64>,
    pub max_faces: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::DensityScan,
            generators: 2,
            word_kind: WordKind::Reduced,
            densities: Vec::new(),
            lengths: Vec::new(),
            seeds: 30,
            seed: 0,
            radius: 0,
            budget: 2_000_000,
            relator_budget: 1_000_000,
            trials: 0,
            isoperimetric_constant: None,
            area: None,
            max_faces: 2,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::Domain { value: d, domain: "[0, 1]".into() });
        }
        if self.lengths.contains(&0) {
            return Err(Error::InvalidArgument("relator lengths must be positive".into()));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(f64, usize, usize)> {
        let mut out = Vec::new();
        for &d in &self.densities {
            for &ell in &self.lengths {
                for s in 0..self.seeds {
                    out.push((d, ell, s));
                }
            }
        }
        out
    }

    /// Seed of one cell, independent of the rest of the sweep.
    pub fn cell_seed(&self, d: f64, ell: usize, index: usize) -> u64 {
        derive_seed(self.seed, &[d.to_bits(), ell as u64, index as u64])
    }
}

/// Triviality oracle for a presentation: the free group when there are no
/// relators, Dehn's algorithm otherwise (which refuses outside C'(1/6)).
pub fn oracle_for(p: &Presentation) -> Result<Box<dyn TrivialityOracle>> {
    if p.relators().is_empty() {
        Ok(Box::new(FreeOracle::new(p.generators())))
    } else {
        Ok(Box::new(DehnOracle::new(p)?))
    }
}

/// `x` as a ratio with denominator 10⁶.
fn ratio(x: f64) -> Ratio<u64> {
    Ratio::new((x.max(0.0) * 1e6).round() as u64, 1_000_000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub eta_lower: f64,
    pub eta_point: f64,
    pub theta_lower: f64,
    pub theta_point: f64,
    pub cert_upper: Option<f64>,
}

impl EstimateRow {
    fn from_report(r: &ExponentReport) -> Self {
        EstimateRow {
            eta_lower: r.eta.lower_bound,
            eta_point: r.eta.point_estimate,
            theta_lower: r.theta.lower_bound,
            theta_point: r.theta.point_estimate,
            cert_upper: r.eta.certified_upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub d: f64,
    pub ell: usize,
    pub index: usize,
    pub seed: u64,
    pub relators: usize,
    pub max_piece: usize,
    pub piece_ratio: f64,
    pub sc16: bool,
    /// C'(2d + 0.05) and C'(2d + 0.1).
    pub sc_2d_plus: [bool; 2],
    pub estimates: Option<EstimateRow>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub d: f64,
    pub ell: usize,
    pub sc16_rate: f64,
    pub sc16_ci: (f64, f64),
    pub sc_2d_plus_rate: [f64; 2],
    pub mean_piece_ratio: f64,
    pub n_seeds: usize,
    pub n_errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveCell {
    pub d: f64,
    pub ell: usize,
    pub index: usize,
    pub seed: u64,
    pub sc16: bool,
    pub estimates: Option<EstimateRow>,
    pub report: Option<ExponentReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub d: f64,
    pub ell: usize,
    pub n_seeds: usize,
    pub n_estimates: usize,
    pub median_eta_point: Option<f64>,
    pub min_eta_lower: Option<f64>,
}

/// Test for medians decreasing along ordered groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendTest {
    /// Pairs `(x in an earlier group, y in a later group)` with `y < x`,
    /// ties counting one half.
    pub statistic: f64,
    pub z: f64,
    pub medians_decreasing: bool,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Outputs {
    DensityScan { cells: Vec<ScanCell>, rows: Vec<ScanRow> },
    Curve { cells: Vec<CurveCell>, summary: Vec<CurveSummary>, trends: Vec<(f64, Option<TrendTest>)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    pub config: ExperimentConfig,
    pub wall_clock_seconds: f64,
    pub outputs: Outputs,
}

fn sample_cell(cfg: &ExperimentConfig, d: f64, ell: usize, seed: u64) -> Result<Presentation> {
    let dc = DensityConfig { generators: cfg.generators, density: d, length: ell, kind: cfg.word_kind };
    Ok(sample_density_presentation(&dc, cfg.relator_budget, &mut seeded(seed))?.presentation)
}

fn estimate_options(cfg: &ExperimentConfig, seed: u64) -> EstimateOptions {
    EstimateOptions {
        max_radius: cfg.radius,
        budget: cfg.budget,
        isoperimetric_constant: cfg.isoperimetric_constant,
        seed: Some(seed),
    }
}

fn scan_cell(cfg: &ExperimentConfig, d: f64, ell: usize, index: usize) -> ScanCell {
    let seed = cfg.cell_seed(d, ell, index);
    let mut cell = ScanCell {
        d,
        ell,
        index,
        seed,
        relators: 0,
        max_piece: 0,
        piece_ratio: 0.0,
        sc16: false,
        sc_2d_plus: [false; 2],
        estimates: None,
        error: None,
    };
    let p = match sample_cell(cfg, d, ell, seed) {
        Ok(p) => p,
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    let report = max_piece(&p);
    cell.relators = p.relators().len();
    cell.max_piece = report.max_piece_length;
    cell.piece_ratio = report.max_piece_length as f64 / ell as f64;
    cell.sc16 = satisfies(&report, Ratio::new(1, 6));
    cell.sc_2d_plus = [satisfies(&report, ratio(2.0 * d + 0.05)), satisfies(&report, ratio(2.0 * d + 0.1))];
    if cfg.radius > 0 && cell.sc16 {
        match oracle_for(&p).and_then(|o| estimate_exponents(&p, o.as_ref(), &estimate_options(cfg, seed))) {
            Ok(r) => cell.estimates = Some(EstimateRow::from_report(&r)),
            Err(e) => cell.error = Some(e.to_string()),
        }
    }
    cell
}

/// Small-cancellation and piece statistics per `(d, ℓ, seed)`, plus exponent
/// estimates where C'(1/6) holds and a radius is set. Failing cells record
/// their error and the scan continues.
pub fn run_density_scan(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let cells: Vec<ScanCell> = cfg.cells().into_par_iter().map(|(d, ell, s)| scan_cell(cfg, d, ell, s)).collect();
    let mut rows = Vec::new();
    for &d in &cfg.densities {
        for &ell in &cfg.lengths {
            let group: Vec<&ScanCell> = cells.iter().filter(|c| c.d == d && c.ell == ell).collect();
            let ok: Vec<&&ScanCell> = group.iter().filter(|c| c.relators > 0 || c.error.is_none()).collect();
            let n = ok.len();
            let hits = ok.iter().filter(|c| c.sc16).count();
            let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
            rows.push(ScanRow {
                d,
                ell,
                sc16_rate: rate(hits),
                sc16_ci: wilson_interval(hits as u64, n as u64, Z95),
                sc_2d_plus_rate: [
                    rate(ok.iter().filter(|c| c.sc_2d_plus[0]).count()),
                    rate(ok.iter().filter(|c| c.sc_2d_plus[1]).count()),
                ],
                mean_piece_ratio: if n == 0 { 0.0 } else { ok.iter().map(|c| c.piece_ratio).sum::<f64>() / n as f64 },
                n_seeds: n,
                n_errors: group.len() - n,
            });
        }
    }
    Ok(ResultRecord {
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: Outputs::DensityScan { cells, rows },
    })
}

fn curve_cell(cfg: &ExperimentConfig, d: f64, ell: usize, index: usize) -> CurveCell {
    let seed = cfg.cell_seed(d, ell, index);
    let mut cell = CurveCell { d, ell, index, seed, sc16: false, estimates: None, report: None, error: None };
    let result = sample_cell(cfg, d, ell, seed).and_then(|p| {
        cell.sc16 = satisfies(&max_piece(&p), Ratio::new(1, 6));
        let oracle = oracle_for(&p)?;
        estimate_exponents(&p, oracle.as_ref(), &estimate_options(cfg, seed))
    });
    match result {
        Ok(r) => {
            cell.estimates = Some(EstimateRow::from_report(&r));
            cell.report = Some(r);
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

/// Jonckheere–Terpstra test against the alternative that values decrease
/// along the group order, normal approximation without tie correction.
/// `None` with fewer than two nonempty groups.
pub fn decreasing_trend_test(groups: &[Vec<f64>]) -> Option<TrendTest> {
    let groups: Vec<&Vec<f64>> = groups.iter().filter(|g| !g.is_empty()).collect();
    if groups.len() < 2 {
        return None;
    }
    let mut j = 0.0;
    for (a, ga) in groups.iter().enumerate() {
        for gb in &groups[a + 1..] {
            for &x in ga.iter() {
                for &y in gb.iter() {
                    j += if y < x {
                        1.0
                    } else if y == x {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
    }
    let n: f64 = groups.iter().map(|g| g.len() as f64).sum();
    let sq: f64 = groups.iter().map(|g| (g.len() as f64).powi(2)).sum();
    let mean = (n * n - sq) / 4.0;
    let var = (n * n * (2.0 * n + 3.0) - groups.iter().map(|g| (g.len() as f64).powi(2) * (2.0 * g.len() as f64 + 3.0)).sum::<f64>()) / 72.0;
    let z = if var > 0.0 { (j - mean) / var.sqrt() } else { 0.0 };
    let medians: Vec<f64> = groups.iter().filter_map(|g| median(g)).collect();
    Some(TrendTest {
        statistic: j,
        z,
        medians_decreasing: medians.windows(2).all(|w| w[1] < w[0]),
        significant: z > Z95_ONE_SIDED,
    })
}

/// Exponent estimates per `(d, ℓ, seed)` for densities below 1/12, where the
/// Dehn oracle is sound whenever C'(1/6) holds. Per-seed errors are recorded.
pub fn run_cogrowth_curve(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    cfg.validate()?;
    if let Some(&d) = cfg.densities.iter().find(|&&d| d >= CURVE_DENSITY_LIMIT) {
        return Err(Error::Domain { value: d, domain: "[0, 1/12)".into() });
    }
    let start = Instant::now();
    let cells: Vec<CurveCell> = cfg.cells().into_par_iter().map(|(d, ell, s)| curve_cell(cfg, d, ell, s)).collect();
    let mut summary = Vec::new();
    let mut trends = Vec::new();
    for &d in &cfg.densities {
        let mut groups = Vec::new();
        for &ell in &cfg.lengths {
            let group: Vec<&CurveCell> = cells.iter().filter(|c| c.d == d && c.ell == ell).collect();
            let points: Vec<f64> = group.iter().filter_map(|c| c.estimates.as_ref().map(|e| e.eta_point)).collect();
            let lowers = group.iter().filter_map(|c| c.estimates.as_ref().map(|e| e.eta_lower));
            summary.push(CurveSummary {
                d,
                ell,
                n_seeds: group.len(),
                n_estimates: points.len(),
                median_eta_point: median(&points),
                min_eta_lower: lowers.reduce(f64::min),
            });
            groups.push(points);
        }
        trends.push((d, decreasing_trend_test(&groups)));
    }
    Ok(ResultRecord {
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: Outputs::Curve { cells, summary, trends },
    })
}

#[derive(Serialize)]
struct ScanCsvRow {
    d: f64,
    ell: usize,
    sc16_rate: f64,
    mean_piece_ratio: f64,
    n_seeds: usize,
}

#[derive(Serialize)]
struct EstimateCsvRow {
    seed: u64,
    d: f64,
    ell: usize,
    eta_lower: Option<f64>,
    eta_point: Option<f64>,
    theta_lower: Option<f64>,
    theta_point: Option<f64>,
    cert_upper: Option<f64>,
}

impl ResultRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// The record's CSV table: density-scan rows or per-seed estimates.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.outputs {
            Outputs::DensityScan { rows, .. } => {
                for r in rows {
                    w.serialize(ScanCsvRow { d: r.d, ell: r.ell, sc16_rate: r.sc16_rate, mean_piece_ratio: r.mean_piece_ratio, n_seeds: r.n_seeds })?;
                }
                if rows.is_empty() {
                    w.write_record(["d", "ell", "sc16_rate", "mean_piece_ratio", "n_seeds"])?;
                }
            }
            Outputs::Curve { cells, .. } => {
                for c in cells {
                    let e = c.estimates.as_ref();
                    w.serialize(EstimateCsvRow {
                        seed: c.seed,
                        d: c.d,
                        ell: c.ell,
                        eta_lower: e.map(|e| e.eta_lower),
                        eta_point: e.map(|e| e.eta_point),
                        theta_lower: e.map(|e| e.theta_lower),
                        theta_point: e.map(|e| e.theta_point),
                        cert_upper: e.and_then(|e| e.cert_upper),
                    })?;
                }
                if cells.is_empty() {
                    w.write_record(["seed", "d", "ell", "eta_lower", "eta_point", "theta_lower", "theta_point", "cert_upper"])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn csv_name(&self) -> &'static str {
        match self.outputs {
            Outputs::DensityScan { .. } => "density_scan.csv",
            Outputs::Curve { .. } => "estimates.csv",
        }
    }

    /// Writes `record.json` and the CSV table into `dir`; returns both paths.
    pub fn export(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let json = dir.join("record.json");
        fs::write(&json, self.to_json()?).map_err(|e| Error::io(&json, e))?;
        let csv = dir.join(self.csv_name());
        fs::write(&csv, self.to_csv()?).map_err(|e| Error::io(&csv, e))?;
        Ok((json, csv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(densities: &[f64], lengths: &[usize], seeds: usize) -> ExperimentConfig {
        ExperimentConfig { densities: densities.to_vec(), lengths: lengths.to_vec(), seeds, seed: 7, ..Default::default() }
    }

    #[test]
    fn config_toml_round_trip() {
        let cfg = ExperimentConfig::from_toml_str("kind = \"curve\"\ndensities = [0.05]\nlengths = [8, 10]\nseeds = 3\nradius = 4\n").unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Curve);
        assert_eq!(cfg.lengths, vec![8, 10]);
        assert_eq!(cfg.budget, ExperimentConfig::default().budget);
        assert_eq!(ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap(), cfg);
        assert!(ExperimentConfig::from_toml_str("densities = [1.5]").is_err());
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
    }

    #[test]
    fn single_relator_at_density_zero() {
        let rec = run_density_scan(&scan(&[0.0], &[10], 5)).unwrap();
        let Outputs::DensityScan { cells, rows } = &rec.outputs else { panic!() };
        assert!(cells.iter().all(|c| c.relators == 1 && c.error.is_none()));
        assert_eq!(rows[0].n_seeds, 5);
    }

    #[test]
    fn scan_is_deterministic_and_seed_isolated() {
        let a = run_density_scan(&scan(&[0.05, 0.2], &[12], 6)).unwrap();
        let b = run_density_scan(&scan(&[0.05, 0.2], &[12], 6)).unwrap();
        let c = run_density_scan(&scan(&[0.2], &[12], 4)).unwrap();
        let (Outputs::DensityScan { cells: ca, .. }, Outputs::DensityScan { cells: cb, .. }, Outputs::DensityScan { cells: cc, .. }) =
            (&a.outputs, &b.outputs, &c.outputs)
        else {
            panic!()
        };
        assert_eq!(ca, cb);
        for cell in cc {
            assert!(ca.contains(cell));
        }
        let strip = |r: &ResultRecord| ResultRecord { wall_clock_seconds: 0.0, ..r.clone() };
        assert_eq!(strip(&a).to_json().unwrap(), strip(&b).to_json().unwrap());
    }

    #[test]
    fn budget_errors_are_recorded_per_cell() {
        let mut cfg = scan(&[0.0, 0.9], &[16], 2);
        cfg.relator_budget = 1000;
        let rec = run_density_scan(&cfg).unwrap();
        let Outputs::DensityScan { cells, rows } = &rec.outputs else { panic!() };
        assert!(cells.iter().filter(|c| c.d == 0.9).all(|c| c.error.is_some()));
        assert!(cells.iter().filter(|c| c.d == 0.0).all(|c| c.error.is_none()));
        assert_eq!((rows[1].n_seeds, rows[1].n_errors), (0, 2));
    }

    #[test]
    fn record_round_trip_and_csv_columns() {
        let rec = run_density_scan(&scan(&[0.1], &[8], 3)).unwrap();
        assert_eq!(ResultRecord::from_json(&rec.to_json().unwrap()).unwrap(), rec);
        let csv = rec.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), "d,ell,sc16_rate,mean_piece_ratio,n_seeds");

        let mut cfg = scan(&[0.0], &[8], 2);
        cfg.kind = ExperimentKind::Curve;
        cfg.generators = 3;
        cfg.radius = 3;
        let rec = run_cogrowth_curve(&cfg).unwrap();
        assert_eq!(ResultRecord::from_json(&rec.to_json().unwrap()).unwrap(), rec);
        let csv = rec.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), "seed,d,ell,eta_lower,eta_point,theta_lower,theta_point,cert_upper");
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn curve_gates_density_and_records_radius_errors() {
        let mut cfg = scan(&[0.1], &[8], 1);
        assert!(run_cogrowth_curve(&cfg).is_err());
        cfg.densities = vec![0.0];
        cfg.lengths = vec![14];
        cfg.generators = 3;
        cfg.seeds = 6;
        cfg.radius = 0;
        let rec = run_cogrowth_curve(&cfg).unwrap();
        let Outputs::Curve { cells, summary, .. } = &rec.outputs else { panic!() };
        assert!(cells.iter().any(|c| c.sc16));
        for c in cells {
            assert!(c.estimates.is_none());
            if c.sc16 {
                assert!(c.error.as_ref().unwrap().contains("radius"), "{:?}", c.error);
            }
        }
        assert_eq!(summary[0].n_estimates, 0);
    }

    #[test]
    fn free_baseline() {
        let p = Presentation::free(2).unwrap();
        let o = oracle_for(&p).unwrap();
        let r = estimate_exponents(&p, o.as_ref(), &EstimateOptions { max_radius: 6, budget: 1_000_000, ..Default::default() }).unwrap();
        assert_eq!(r.eta.lower_bound, 0.5);
        assert_eq!(r.eta.point_estimate, 0.5);
    }

    #[test]
    fn trend_test() {
        let dec = vec![vec![0.9, 0.8, 0.85, 0.95], vec![0.7, 0.75, 0.72, 0.8], vec![0.6, 0.55, 0.65, 0.5]];
        let t = decreasing_trend_test(&dec).unwrap();
        assert!(t.significant && t.medians_decreasing);
        assert_eq!(t.statistic, 47.5);
        let inc: Vec<Vec<f64>> = dec.iter().rev().cloned().collect();
        let t = decreasing_trend_test(&inc).unwrap();
        assert!(!t.significant && !t.medians_decreasing);
        assert!(decreasing_trend_test(&[vec![1.0], vec![]]).is_none());
        assert_eq!(median(&[3.0, 1.0, 2.0, 10.0]), Some(2.5));
    }
}
