//! Isometry and unitary witnesses for orbit identities and dominations.
//!
//! Every construction returns an [`OrbitCertificate`]: a target, a list of
//! `(witness, operand, weight)` terms and a relation. The certificate claims
//! `target = Σ wᵢ·Wᵢ·Xᵢ·Wᵢ*` (equality) or `target ≤ Σ wᵢ·Wᵢ·Xᵢ·Wᵢ*`
//! (domination). [`verify_certificate`] re-derives every quantity from the
//! stored matrices.

mod euler;
mod polar;
mod suite;
mod thompson;

pub(crate) use euler::{euler_sum, pairwise_sum};
pub use euler::{euler_fourier3_orbit, euler_fourier4_orbit, euler_hadamard_orbit, euler_modulus_orbit, EulerClass};
pub use polar::{extend_partial_isometry, isometry_decompose_psd, partitioned_pythagoras, polar_support, PolarSupport};
pub use suite::{run_orbit_suite, OrbitOp, OrbitRecord, OrbitRow, OrbitSuiteConfig, OrbitSuiteSummary};
pub use thompson::{fan_hoffman_orbit, qsym_thompson, sqrt_two_orbit, thompson_rect, thompson_square};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{lambda_min, op_norm, CMat, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equality,
    Domination,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitTerm {
    /// Isometry with `rows ≥ cols`; `rows` equals the target size.
    pub witness: CMat,
    /// Hermitian psd, `cols × cols` of the witness.
    pub operand: CMat,
    pub weight: f64,
}

impl OrbitTerm {
    pub fn new(witness: CMat, operand: CMat, weight: f64) -> Self {
        Self { witness, operand, weight }
    }

    /// `weight · W · X · W*`.
    pub fn conjugated(&self) -> CMat {
        CMat::congruence(&self.witness, &self.operand).scale(self.weight)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitCertificate {
    pub target: CMat,
    pub relation: Relation,
    /// Equality: `‖target − Σ‖_∞`. Domination: `max(0, −λ_min(Σ − target))`.
    pub residual: f64,
    pub terms: Vec<OrbitTerm>,
}

impl OrbitCertificate {
    /// Assembles a certificate and measures its residual.
    pub fn new(target: CMat, relation: Relation, terms: Vec<OrbitTerm>) -> Result<Self> {
        let residual = measure(&target, relation, &terms)?.residual;
        Ok(Self { target, relation, residual, terms })
    }

    /// `Σ wᵢ·Wᵢ·Xᵢ·Wᵢ*`.
    pub fn orbit_sum(&self) -> Result<CMat> {
        orbit_sum(self.target.rows(), &self.terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

fn orbit_sum(size: usize, terms: &[OrbitTerm]) -> Result<CMat> {
    let mut sum = CMat::zeros(size, size);
    for (k, t) in terms.iter().enumerate() {
        let (r, c) = t.witness.shape();
        if r != size || t.operand.shape() != (c, c) {
            return Err(Error::Dimension(format!(
                "term {k}: witness {:?} and operand {:?} do not fit a {size}×{size} target",
                t.witness.shape(),
                t.operand.shape()
            )));
        }
        sum += &t.conjugated();
    }
    Ok(sum)
}

struct Measured {
    residual: f64,
    /// Equality: `max(1, ‖target‖)`. Domination: `max(1, ‖target‖, ‖Σ‖)`.
    scale: f64,
}

fn measure(target: &CMat, relation: Relation, terms: &[OrbitTerm]) -> Result<Measured> {
    if !target.is_square() {
        return Err(Error::Dimension(format!("target must be square, got {:?}", target.shape())));
    }
    let sum = orbit_sum(target.rows(), terms)?;
    let t_norm = op_norm(target);
    Ok(match relation {
        Relation::Equality => Measured { residual: op_norm(&(target - &sum)), scale: t_norm.max(1.0) },
        Relation::Domination => {
            let gap = (&sum - target).symmetrized();
            Measured { residual: (-lambda_min(&gap)?).max(0.0), scale: t_norm.max(op_norm(&sum)).max(1.0) }
        }
    })
}

/// Outcome of re-verifying a certificate from scratch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub relation: Relation,
    pub residual: f64,
    /// Residual bound the check was held to.
    pub allowed: f64,
    pub max_isometry_defect: f64,
    pub failures: Vec<String>,
}

/// Recomputes witness defects, operand positivity and the residual. Stored
/// residuals are ignored.
pub fn verify_certificate(cert: &OrbitCertificate, tol: &Tolerances) -> CertificateCheck {
    let mut failures = Vec::new();
    let mut max_defect: f64 = 0.0;
    for (k, t) in cert.terms.iter().enumerate() {
        let (r, c) = t.witness.shape();
        if r < c {
            failures.push(format!("term {k}: witness {r}×{c} is wider than tall"));
            continue;
        }
        let defect = (&t.witness.gram() - &CMat::identity(c)).max_abs();
        max_defect = max_defect.max(defect);
        if !(defect <= tol.isometry_defect) {
            failures.push(format!("term {k}: isometry defect {defect:.3e} > {:.1e}", tol.isometry_defect));
        }
        if !(t.weight > 0.0 && t.weight.is_finite()) {
            failures.push(format!("term {k}: weight {} is not positive", t.weight));
        }
        if t.operand.is_square() {
            let scale = op_norm(&t.operand).max(1.0);
            if t.operand.hermitian_defect() > tol.recon * scale {
                failures.push(format!("term {k}: operand is not Hermitian"));
            } else {
                match lambda_min(&t.operand.symmetrized()) {
                    Ok(m) if m >= -tol.psd_slack * scale => {}
                    Ok(m) => failures.push(format!("term {k}: operand not psd, λ_min = {m:.3e}")),
                    Err(e) => failures.push(format!("term {k}: {e}")),
                }
            }
        }
    }
    let (residual, allowed) = match measure(&cert.target, cert.relation, &cert.terms) {
        Ok(m) => {
            let allowed = match cert.relation {
                Relation::Equality => tol.recon * m.scale,
                Relation::Domination => tol.psd_slack * m.scale,
            };
            if !(m.residual <= allowed) {
                failures.push(format!("residual {:.3e} exceeds {allowed:.3e}", m.residual));
            }
            (m.residual, allowed)
        }
        Err(e) => {
            failures.push(e.to_string());
            (f64::INFINITY, 0.0)
        }
    };
    CertificateCheck {
        passed: failures.is_empty(),
        relation: cert.relation,
        residual,
        allowed,
        max_isometry_defect: max_defect,
        failures,
    }
}

fn same_square(what: &str, mats: &[&CMat]) -> Result<usize> {
    let n = mats[0].rows();
    if mats.iter().any(|m| m.shape() != (n, n)) {
        let shapes: Vec<_> = mats.iter().map(|m| m.shape()).collect();
        return Err(Error::Dimension(format!("{what} needs equal square inputs, got {shapes:?}")));
    }
    Ok(n)
}
