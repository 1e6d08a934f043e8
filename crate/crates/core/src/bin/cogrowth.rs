use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;

use cogrowth::cayley::build_ball;
use cogrowth::counting::CountTable;
use cogrowth::exponents::{estimate_exponents, EstimateOptions};
use cogrowth::lab::{oracle_for, run_cogrowth_curve, run_density_scan, ExperimentConfig, ExperimentKind};
use cogrowth::locality::certify_upper_bound;
use cogrowth::pieces::check_small_cancellation;
use cogrowth::presentation::{sample_density_presentation, SampleSidecar};
use cogrowth::rng::seeded;
use cogrowth::vankampen::{search_diagram, SearchOutcome};
use cogrowth::{DensityConfig, Error, Presentation, Result, Word, WordKind};

#[derive(Parser)]
#[command(name = "cogrowth", version, about = "Cogrowth laboratory for finitely presented groups")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "COGROWTH_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "COGROWTH_THREADS")]
    threads: Option<usize>,
    /// Element budget for Cayley balls, node budget for diagram search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sweep {
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated densities.
    #[arg(long, value_delimiter = ',')]
    densities: Vec<f64>,
    /// Comma-separated relator lengths.
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<usize>,
    /// Seeds per cell.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    /// Isoperimetric constant C for certificates.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a presentation in the density model.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value = "reduced")]
        kind: WordKind,
    },
    /// Check the C'(α) small cancellation condition.
    ScCheck {
        presentation: PathBuf,
        #[arg(long, default_value = "1/6")]
        alpha: String,
    },
    /// Count trivial plain and reduced words in a Cayley ball.
    Count {
        presentation: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// Estimate the cogrowth exponents.
    Estimate {
        presentation: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Isoperimetric constant C; attaches certified upper bounds.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Certify an exponent upper bound from a count table.
    Certify {
        counts: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        area: f64,
    },
    /// Small-cancellation and piece statistics over densities and lengths.
    ScanDensity(Sweep),
    /// Exponent estimates over seeds for densities below 1/12.
    Curve(Sweep),
    /// Search for a van Kampen diagram with few faces.
    VkSearch {
        presentation: PathBuf,
        #[arg(long)]
        word: Word,
        #[arg(long, default_value_t = 2)]
        faces: usize,
    },
}

fn out_dir(cli: &Cli) -> Result<PathBuf> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidArgument(format!("expected a fraction like 1/6, got {s:?}"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let (n, d): (u64, u64) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

fn sweep_config(cli: &Cli, sweep: &Sweep, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.kind = kind;
    if let Some(m) = sweep.m {
        cfg.generators = m;
    }
    if !sweep.densities.is_empty() {
        cfg.densities = sweep.densities.clone();
    }
    if !sweep.lengths.is_empty() {
        cfg.lengths = sweep.lengths.clone();
    }
    if let Some(s) = sweep.seeds {
        cfg.seeds = s;
    }
    if let Some(r) = sweep.radius {
        cfg.radius = r;
    }
    if sweep.c.is_some() {
        cfg.isoperimetric_constant = sweep.c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let budget = cli.budget.unwrap_or(2_000_000);
    match &cli.command {
        Command::Sample { m, d, ell, kind } => {
            let cfg = DensityConfig { generators: *m, density: *d, length: *ell, kind: *kind };
            let sample = sample_density_presentation(&cfg, budget, &mut seeded(seed))?;
            let dir = out_dir(cli)?;
            sample.presentation.write(&dir.join("presentation.txt"))?;
            write(&dir.join("presentation.json"), &serde_json::to_string_pretty(&SampleSidecar::new(seed, &sample))?)?;
            print!("{}", sample.presentation.to_text());
        }
        Command::ScCheck { presentation, alpha } => {
            let p = Presentation::read(presentation)?;
            let alpha = parse_ratio(alpha)?;
            let (holds, report) = check_small_cancellation(&p, alpha);
            print_json(&serde_json::json!({ "alpha": alpha.to_string(), "holds": holds, "report": report }))?;
        }
        Command::Count { presentation, radius } => {
            let p = Presentation::read(presentation)?;
            let oracle = oracle_for(&p)?;
            let ball = build_ball(oracle.as_ref(), *radius, budget)?;
            let dir = out_dir(cli)?;
            for kind in [WordKind::Plain, WordKind::Reduced] {
                let t = CountTable::from_ball(&ball, kind);
                t.save(&dir.join(format!("{kind}_counts.csv")))?;
                println!("{kind}: exact up to length {}, sha256 {}", t.exact_up_to, t.hash());
                for (len, count) in &t.entries {
                    println!("  {len}\t{count}");
                }
            }
        }
        Command::Estimate { presentation, radius, c } => {
            let p = Presentation::read(presentation)?;
            let oracle = oracle_for(&p)?;
            let opts = EstimateOptions { max_radius: *radius, budget, isoperimetric_constant: *c, seed: cli.seed };
            let report = estimate_exponents(&p, oracle.as_ref(), &opts)?;
            let json = serde_json::to_string_pretty(&report)?;
            write(&out_dir(cli)?.join("exponents.json"), &json)?;
            println!("{json}");
        }
        Command::Certify { counts, m, c, lambda, area } => {
            let table = CountTable::load(counts, *m)?;
            print_json(&certify_upper_bound(&table, *c, *lambda, *area)?)?;
        }
        Command::ScanDensity(sweep) => {
            let record = run_density_scan(&sweep_config(cli, sweep, ExperimentKind::DensityScan)?)?;
            let (json, csv) = record.export(&out_dir(cli)?)?;
            print!("{}", record.to_csv()?);
            eprintln!("wrote {} and {}", json.display(), csv.display());
        }
        Command::Curve(sweep) => {
            let record = run_cogrowth_curve(&sweep_config(cli, sweep, ExperimentKind::Curve)?)?;
            let (json, csv) = record.export(&out_dir(cli)?)?;
            print!("{}", record.to_csv()?);
            eprintln!("wrote {} and {}", json.display(), csv.display());
        }
        Command::VkSearch { presentation, word, faces } => {
            let p = Presentation::read(presentation)?;
            match search_diagram(&p, word, *faces, budget as u64)? {
                SearchOutcome::Found(d) => {
                    let dir = out_dir(cli)?;
                    write(&dir.join("diagram.json"), &d.to_json()?)?;
                    write(&dir.join("diagram.dot"), &d.render_dot())?;
                    println!("found: {} faces", d.face_tags.len());
                    print_json(&d.metrics())?;
                }
                SearchOutcome::NotFound => println!("none: no diagram with at most {faces} faces"),
                SearchOutcome::Indeterminate => println!("indeterminate: budget exhausted"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
