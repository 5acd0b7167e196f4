use std::path::PathBuf;

use clap::{Args, ValueEnum};
use orbit_moduli::matcore::{CMat, Tolerances};
use orbit_moduli::orbit::{
    euler_fourier3_orbit, euler_fourier4_orbit, euler_hadamard_orbit, euler_modulus_orbit, isometry_decompose_psd,
    partitioned_pythagoras, qsym_thompson, sqrt_two_orbit, thompson_rect, thompson_square, verify_certificate,
    OrbitCertificate,
};
use serde::Deserialize;

use crate::{Common, Failure, Format, EXIT_FAILURE, EXIT_OK};

#[derive(Clone, Copy, ValueEnum)]
pub enum DecomposeOp {
    IsometryDecomposePsd,
    PartitionedPythagoras,
    EulerHadamard,
    EulerFourier3,
    EulerFourier4,
    EulerModulus,
    ThompsonSquare,
    ThompsonRect,
    QsymThompson,
    SqrtTwo,
}

impl DecomposeOp {
    fn arity(self) -> usize {
        match self {
            DecomposeOp::IsometryDecomposePsd | DecomposeOp::PartitionedPythagoras => 1,
            DecomposeOp::ThompsonSquare | DecomposeOp::ThompsonRect | DecomposeOp::QsymThompson | DecomposeOp::SqrtTwo => 2,
            _ => 3,
        }
    }
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(value_enum)]
    op: DecomposeOp,
    /// JSON file holding one matrix or an array of matrices, each
    /// `{rows, cols, re, im}` row-major.
    #[arg(long)]
    input: PathBuf,
    /// Leading block size for the block operations; defaults to half the size.
    #[arg(long)]
    block: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Input {
    One(CMat),
    Many(Vec<CMat>),
}

fn read_input(path: &PathBuf) -> Result<Vec<CMat>, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let parsed: Input = serde_json::from_str(&s).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(match parsed {
        Input::One(m) => vec![m],
        Input::Many(v) => v,
    })
}

fn build(op: DecomposeOp, m: &[CMat], block: Option<usize>, tol: &Tolerances) -> Result<OrbitCertificate, Failure> {
    let half = || block.unwrap_or(m[0].rows() / 2);
    match op {
        DecomposeOp::IsometryDecomposePsd => isometry_decompose_psd(&m[0], half(), tol),
        DecomposeOp::PartitionedPythagoras => partitioned_pythagoras(&m[0], half(), tol),
        DecomposeOp::EulerHadamard => euler_hadamard_orbit(&m[0], &m[1], &m[2], tol),
        DecomposeOp::EulerFourier3 => euler_fourier3_orbit(&m[0], &m[1], &m[2], tol),
        DecomposeOp::EulerFourier4 => euler_fourier4_orbit(&m[0], &m[1], &m[2], tol),
        DecomposeOp::EulerModulus => euler_modulus_orbit(&m[0], &m[1], &m[2], tol),
        DecomposeOp::ThompsonSquare => thompson_square(&m[0], &m[1], tol),
        DecomposeOp::ThompsonRect => thompson_rect(&m[0], &m[1], tol),
        DecomposeOp::QsymThompson => qsym_thompson(&m[0], &m[1], tol),
        DecomposeOp::SqrtTwo => sqrt_two_orbit(&m[0], &m[1], tol),
    }
    .map_err(Failure::usage)
}

/// Writes the certificate only after it re-verifies from scratch.
pub fn cmd_decompose(a: &DecomposeArgs) -> Result<u8, Failure> {
    let tol = a.common.tolerances()?;
    let m = read_input(&a.input)?;
    if m.len() != a.op.arity() {
        return Err(Failure::usage(format!("expected {} input matrices, got {}", a.op.arity(), m.len())));
    }
    let cert = build(a.op, &m, a.block, &tol)?;
    let check = verify_certificate(&cert, &tol);
    if !check.passed {
        eprintln!("certificate failed re-verification: {}", check.failures.join("; "));
        return Ok(EXIT_FAILURE);
    }
    let body = match a.common.format {
        Format::Json => cert.to_json(),
        Format::Text => format!(
            "{:?} certificate: {} terms on a {}×{} target, residual {:.3e} (allowed {:.3e}), max isometry defect {:.3e}\n",
            cert.relation,
            cert.terms.len(),
            cert.target.rows(),
            cert.target.cols(),
            check.residual,
            check.allowed,
            check.max_isometry_defect
        ),
        Format::Csv => return Err(Failure::usage("certificates have no CSV form; use --format json")),
    };
    a.common.emit(&body)?;
    Ok(EXIT_OK)
}
