//! Front end for the orbit-moduli sweeps, counterexamples and certificates.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 conjecture violation found by `explore`.

mod decompose;
mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbit_moduli::counterex::{
    four_isometry_obstruction, parallelogram_counterexample, qsym_exponent_counterexample, shift_counterexample,
    sym_thompson_counterexample, CounterReport, Value,
};
use orbit_moduli::ineq::{conjecture_explore, ExploreConfig, ExploreSummary};
use orbit_moduli::matcore::Tolerances;
use orbit_moduli::sample::{Ensemble, DEFAULT_SEED};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "orbit-moduli", version, about = "Unitary-orbit witnesses, counterexamples and Schatten-norm inequality sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded inequality sweeps and certificate checks.
    Verify(verify::VerifyArgs),
    /// Evaluate one of the explicit counterexamples.
    Counterexample(CounterArgs),
    /// Build an orbit certificate for matrices read from a JSON file.
    Decompose(decompose::DecomposeArgs),
    /// Search for triples that push the conjectured Clarkson–McCarthy constant.
    Explore(ExploreArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone)]
pub struct Common {
    /// Base seed; trial t draws from ChaCha20 stream (seed, t).
    #[arg(long, env = "ORBIT_MODULI_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sampling ensemble: ginibre, hermitian, psd or diagonal.
    #[arg(long, default_value = "ginibre")]
    pub ensemble: Ensemble,
    /// Allowed negative eigenvalue in psd tests, relative to max(1, norm) [default: 1e-9].
    #[arg(long, value_name = "EPS")]
    pub psd_slack: Option<f64>,
    /// Allowed ‖W*W − I‖ for isometries [default: 1e-10].
    #[arg(long, value_name = "EPS")]
    pub iso_defect: Option<f64>,
    /// Allowed equality residual, relative to max(1, norm) [default: 1e-9].
    #[arg(long, value_name = "EPS")]
    pub recon: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Common {
    pub fn tolerances(&self) -> Result<Tolerances, Failure> {
        let d = Tolerances::default();
        let tol = Tolerances {
            psd_slack: self.psd_slack.unwrap_or(d.psd_slack),
            isometry_defect: self.iso_defect.unwrap_or(d.isometry_defect),
            recon: self.recon.unwrap_or(d.recon),
            rank_rel: d.rank_rel,
        };
        tol.validate().map_err(Failure::usage)?;
        Ok(tol)
    }

    /// Writes `body` to `--output` or stdout, newline-terminated.
    pub fn emit(&self, body: &str) -> Result<(), Failure> {
        let mut w = open_output(self.output.as_ref())?;
        w.write_all(body.as_bytes()).map_err(Failure::io)?;
        if !body.ends_with('\n') {
            w.write_all(b"\n").map_err(Failure::io)?;
        }
        w.flush().map_err(Failure::io)
    }
}

pub fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write + Send>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// An error that ends the run with a specific exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, message: e.to_string() }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self { code: EXIT_FAILURE, message: e.to_string() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CounterKind {
    Parallelogram,
    Qsym,
    Shift,
    SymThompson,
    FourIsometry,
}

#[derive(Args)]
struct CounterArgs {
    #[arg(value_enum)]
    kind: CounterKind,
    /// Scalar of the parallelogram pair, `x ∉ {0, 1}`.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    x: f64,
    /// Exponent for `qsym` and `shift`.
    #[arg(long, default_value_t = 3.0)]
    p: f64,
    /// Block size for `four-isometry`.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ExploreArgs {
    /// Exponents, comma separated or repeated.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Matrix sizes cycled over trials.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    climb_steps: usize,
    #[command(flatten)]
    common: Common,
}

fn counter_text(r: &CounterReport) -> String {
    let mut s = format!("{}: {}\nverdict: {:?}\n", r.name, r.claim, r.verdict);
    for q in &r.quantities {
        match q.value {
            Value::Real(v) => s += &format!("  {} = {v:.12}\n", q.name),
            Value::Complex { re, im } => s += &format!("  {} = {re:.12} {im:+.12}i\n", q.name),
        }
    }
    for c in &r.strict {
        s += &format!("  strict  {} margin {:.6e}\n", c.claim, c.margin);
    }
    for c in &r.cross_checks {
        s += &format!("  cross   {} deviation {:.3e} (allowed {:.1e})\n", c.claim, c.deviation, c.allowed);
    }
    for d in &r.details {
        s += &format!("  note    {d}\n");
    }
    s
}

fn cmd_counterexample(a: &CounterArgs) -> Result<u8, Failure> {
    let tol = a.common.tolerances()?;
    let r = match a.kind {
        CounterKind::Parallelogram => parallelogram_counterexample(a.x, &tol),
        CounterKind::Qsym => qsym_exponent_counterexample(a.p, &tol),
        CounterKind::Shift => shift_counterexample(a.p, &tol),
        CounterKind::SymThompson => sym_thompson_counterexample(&tol),
        CounterKind::FourIsometry => four_isometry_obstruction(a.n, &tol),
    }
    .map_err(Failure::usage)?;
    let body = match a.common.format {
        Format::Json => r.to_json(),
        Format::Text => counter_text(&r),
        Format::Csv => {
            let mut s = String::from("name,value\n");
            for q in &r.quantities {
                if let Value::Real(v) = q.value {
                    s += &format!("{},{v:e}\n", q.name);
                }
            }
            s
        }
    };
    a.common.emit(&body)?;
    Ok(if r.confirmed() { EXIT_OK } else { EXIT_FAILURE })
}

fn explore_text(s: &ExploreSummary) -> String {
    format!(
        "p = {}: constant {:.9}, {} ratio: sampled {:.9} (trial {}, n = {}), climbed {:.9}, simplex {:.9}; gap {:.3e}{}\n  equal triple {:.12} (deviation {:.1e})\n  {}\n",
        s.p,
        s.constant,
        s.objective,
        s.sampled_ratio,
        s.extremal_trial,
        s.extremal_n,
        s.climbed_ratio,
        s.simplex_ratio,
        s.gap,
        if s.violation { "  VIOLATION" } else { "" },
        s.equal_triple_ratio,
        s.equal_triple_deviation,
        s.note
    )
}

fn cmd_explore(a: &ExploreArgs) -> Result<u8, Failure> {
    let mut out = Vec::new();
    for &p in &a.p {
        let mut cfg = ExploreConfig::new(p, a.trials);
        cfg.seed = a.common.seed;
        cfg.ensemble = a.common.ensemble;
        cfg.sizes = a.n.clone();
        cfg.climb_steps = a.climb_steps;
        cfg.jobs = a.common.jobs;
        out.push(conjecture_explore(&cfg).map_err(Failure::usage)?);
    }
    let body = match a.common.format {
        Format::Json => serde_json::to_string(&out).expect("summaries serialize"),
        Format::Text => out.iter().map(explore_text).collect(),
        Format::Csv => {
            let mut s = String::from("p,constant,objective,sampled_ratio,climbed_ratio,simplex_ratio,extremal_ratio,gap,violation\n");
            for e in &out {
                s += &format!(
                    "{},{:e},{},{:e},{:e},{:e},{:e},{:e},{}\n",
                    e.p, e.constant, e.objective, e.sampled_ratio, e.climbed_ratio, e.simplex_ratio, e.extremal_ratio, e.gap, e.violation
                );
            }
            s
        }
    };
    a.common.emit(&body)?;
    Ok(if out.iter().any(|s| s.violation) { EXIT_VIOLATION } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Counterexample(a) => cmd_counterexample(a),
        Command::Decompose(a) => decompose::cmd_decompose(a),
        Command::Explore(a) => cmd_explore(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
