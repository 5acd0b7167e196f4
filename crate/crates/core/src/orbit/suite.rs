use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    euler_fourier3_orbit, euler_fourier4_orbit, euler_hadamard_orbit, euler_modulus_orbit, isometry_decompose_psd,
    partitioned_pythagoras, polar_support, qsym_thompson, sqrt_two_orbit, thompson_rect, thompson_square,
    verify_certificate, CertificateCheck, Relation,
};
use crate::error::{Error, Result};
use crate::matcore::{op_norm, CMat, Tolerances};
use crate::sample::{ginibre, StreamRng, DEFAULT_SEED};

/// Every witness construction, each drivable from a seeded instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitOp {
    PolarSupport,
    IsometryDecomposePsd,
    PartitionedPythagoras,
    EulerHadamard,
    EulerFourier3,
    EulerFourier4,
    ThompsonSquare,
    ThompsonRect,
    QsymThompson,
    SqrtTwo,
    EulerModulus,
}

impl OrbitOp {
    pub const ALL: [OrbitOp; 11] = [
        OrbitOp::PolarSupport,
        OrbitOp::IsometryDecomposePsd,
        OrbitOp::PartitionedPythagoras,
        OrbitOp::EulerHadamard,
        OrbitOp::EulerFourier3,
        OrbitOp::EulerFourier4,
        OrbitOp::ThompsonSquare,
        OrbitOp::ThompsonRect,
        OrbitOp::QsymThompson,
        OrbitOp::SqrtTwo,
        OrbitOp::EulerModulus,
    ];

    /// Operations behind the Thompson-type dominations.
    pub const THOMPSON: [OrbitOp; 4] =
        [OrbitOp::ThompsonSquare, OrbitOp::ThompsonRect, OrbitOp::QsymThompson, OrbitOp::SqrtTwo];

    /// Operations behind the Euler identity and its modulus bound.
    pub const EULER: [OrbitOp; 4] =
        [OrbitOp::EulerHadamard, OrbitOp::EulerFourier3, OrbitOp::EulerFourier4, OrbitOp::EulerModulus];

    pub fn name(self) -> &'static str {
        match self {
            OrbitOp::PolarSupport => "polar_support",
            OrbitOp::IsometryDecomposePsd => "isometry_decompose_psd",
            OrbitOp::PartitionedPythagoras => "partitioned_pythagoras",
            OrbitOp::EulerHadamard => "euler_hadamard",
            OrbitOp::EulerFourier3 => "euler_fourier3",
            OrbitOp::EulerFourier4 => "euler_fourier4",
            OrbitOp::ThompsonSquare => "thompson_square",
            OrbitOp::ThompsonRect => "thompson_rect",
            OrbitOp::QsymThompson => "qsym_thompson",
            OrbitOp::SqrtTwo => "sqrt_two",
            OrbitOp::EulerModulus => "euler_modulus",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            OrbitOp::ThompsonSquare
            | OrbitOp::ThompsonRect
            | OrbitOp::QsymThompson
            | OrbitOp::SqrtTwo
            | OrbitOp::EulerModulus => Relation::Domination,
            _ => Relation::Equality,
        }
    }

    /// Builds the seeded instance of size `n` and checks what it produces.
    ///
    /// Block operations use two `n×n` blocks; `thompson_rect` uses
    /// `(n+2)×n` inputs.
    pub fn run(self, n: usize, seed: u64, trial: u64, tol: &Tolerances) -> Result<CertificateCheck> {
        let mut rng = StreamRng::new(seed, trial);
        let mut g = |r: usize, c: usize| ginibre(&mut rng, r, c);
        let cert = match self {
            OrbitOp::PolarSupport => return Ok(polar_check(&g(n, n), tol)),
            OrbitOp::IsometryDecomposePsd => isometry_decompose_psd(&g(2 * n, 2 * n).gram(), n, tol)?,
            OrbitOp::PartitionedPythagoras => partitioned_pythagoras(&g(2 * n, 2 * n), n, tol)?,
            OrbitOp::EulerHadamard => euler_hadamard_orbit(&g(n, n), &g(n, n), &g(n, n), tol)?,
            OrbitOp::EulerFourier3 => euler_fourier3_orbit(&g(n, n), &g(n, n), &g(n, n), tol)?,
            OrbitOp::EulerFourier4 => euler_fourier4_orbit(&g(n, n), &g(n, n), &g(n, n), tol)?,
            OrbitOp::EulerModulus => euler_modulus_orbit(&g(n, n), &g(n, n), &g(n, n), tol)?,
            OrbitOp::ThompsonSquare => thompson_square(&g(n, n), &g(n, n), tol)?,
            OrbitOp::ThompsonRect => thompson_rect(&g(n + 2, n), &g(n + 2, n), tol)?,
            OrbitOp::QsymThompson => qsym_thompson(&g(n, n), &g(n, n), tol)?,
            OrbitOp::SqrtTwo => sqrt_two_orbit(&g(n, n).gram(), &g(n, n).gram(), tol)?,
        };
        Ok(verify_certificate(&cert, tol))
    }
}

impl std::str::FromStr for OrbitOp {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        OrbitOp::ALL.iter().copied().find(|o| o.name() == s).ok_or_else(|| format!("unknown operation '{s}'"))
    }
}

/// `X = W·|X|` to `recon·max(1, ‖X‖)` and `W·W*·W = W` to `isometry_defect`.
fn polar_check(x: &CMat, tol: &Tolerances) -> CertificateCheck {
    let ps = polar_support(x, tol);
    let residual = op_norm(&(x - &ps.w.matmul(&ps.abs)));
    let allowed = tol.recon * op_norm(x).max(1.0);
    let defect = (&ps.w.matmul(&ps.w.gram()) - &ps.w).max_abs();
    let mut failures = Vec::new();
    if !(residual <= allowed) {
        failures.push(format!("residual {residual:.3e} exceeds {allowed:.3e}"));
    }
    if !(defect <= tol.isometry_defect) {
        failures.push(format!("partial isometry defect {defect:.3e} > {:.1e}", tol.isometry_defect));
    }
    CertificateCheck {
        passed: failures.is_empty(),
        relation: Relation::Equality,
        residual,
        allowed,
        max_isometry_defect: defect,
        failures,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSuiteConfig {
    pub seed: u64,
    pub instances: u64,
    pub sizes: Vec<usize>,
    pub ops: Vec<OrbitOp>,
    pub tol: Tolerances,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for OrbitSuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            instances: 100,
            sizes: vec![1, 2, 3, 5],
            ops: OrbitOp::ALL.to_vec(),
            tol: Tolerances::default(),
            jobs: None,
        }
    }
}

/// One checked instance, as written to the line stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub op: OrbitOp,
    pub n: usize,
    pub seed: u64,
    pub trial: u64,
    pub check: CertificateCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub op: OrbitOp,
    pub relation: Relation,
    pub n: usize,
    pub instances: u64,
    pub failures: u64,
    pub max_residual: f64,
    /// Largest `residual / allowed`; at most 1 when every instance passes.
    pub max_residual_ratio: f64,
    pub max_isometry_defect: f64,
    /// First failure message, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSuiteSummary {
    pub seed: u64,
    pub rows: Vec<OrbitRow>,
}

impl OrbitSuiteSummary {
    pub fn failures(&self) -> u64 {
        self.rows.iter().map(|r| r.failures).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

/// Runs each operation on `instances` seeded inputs per size. Trial `t` of
/// every operation and size uses the RNG stream `(seed, t)`. Records go to
/// `sink` in (operation, size, trial) order for any thread count.
pub fn run_orbit_suite(cfg: &OrbitSuiteConfig, sink: Option<&mut (dyn Write + Send)>) -> Result<OrbitSuiteSummary> {
    cfg.tol.validate()?;
    if cfg.sizes.contains(&0) {
        return Err(Error::Parameter("sizes must be positive".into()));
    }
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?
            .install(|| suite_inner(cfg, sink)),
        None => suite_inner(cfg, sink),
    }
}

fn suite_inner(cfg: &OrbitSuiteConfig, mut sink: Option<&mut (dyn Write + Send)>) -> Result<OrbitSuiteSummary> {
    let mut rows = Vec::new();
    for &op in &cfg.ops {
        for &n in &cfg.sizes {
            let checks: Vec<Result<CertificateCheck>> =
                (0..cfg.instances).into_par_iter().map(|t| op.run(n, cfg.seed, t, &cfg.tol)).collect();
            let mut row = OrbitRow {
                op,
                relation: op.relation(),
                n,
                instances: 0,
                failures: 0,
                max_residual: 0.0,
                max_residual_ratio: 0.0,
                max_isometry_defect: 0.0,
                first_failure: None,
            };
            for (trial, check) in checks.into_iter().enumerate() {
                // construction errors count as failed instances
                let check = check.unwrap_or_else(|e| CertificateCheck {
                    passed: false,
                    relation: op.relation(),
                    residual: f64::INFINITY,
                    allowed: 0.0,
                    max_isometry_defect: 0.0,
                    failures: vec![e.to_string()],
                });
                row.instances += 1;
                row.max_residual = row.max_residual.max(check.residual);
                let ratio = if check.allowed > 0.0 { check.residual / check.allowed } else { f64::INFINITY };
                row.max_residual_ratio = row.max_residual_ratio.max(ratio);
                row.max_isometry_defect = row.max_isometry_defect.max(check.max_isometry_defect);
                if !check.passed {
                    row.failures += 1;
                    if row.first_failure.is_none() {
                        row.first_failure = Some(format!("trial {trial}: {}", check.failures.join("; ")));
                    }
                }
                if let Some(w) = sink.as_deref_mut() {
                    let rec = OrbitRecord { op, n, seed: cfg.seed, trial: trial as u64, check };
                    writeln!(w, "{}", serde_json::to_string(&rec).expect("record serializes"))
                        .map_err(|e| Error::Format(e.to_string()))?;
                }
            }
            rows.push(row);
        }
    }
    Ok(OrbitSuiteSummary { seed: cfg.seed, rows })
}
