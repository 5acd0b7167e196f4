use serde::{Deserialize, Serialize};

use super::cmat::CMat;
use super::spectral::{herm_eig_with, singular_values, svd_with};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// Operator norm `μ₁(X)`.
pub fn op_norm(x: &CMat) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(h: &CMat) -> Result<f64> {
    let s = herm_eig_with(h, &Tolerances::default())?;
    Ok(*s.values.last().expect("non-empty"))
}

/// Applies `t ↦ t^r` to a psd matrix through its eigendecomposition.
///
/// Eigenvalues in `[-psd_slack·scale, 0)` are clamped to zero; anything more
/// negative is rejected. Eigenvalues within the rounding floor
/// `4·n·ε·scale` are treated as exact zeros so that small exponents do not
/// amplify noise (`(1e-17)^0.3 ≈ 1e-5`).
pub fn psd_power(h: &CMat, r: f64) -> Result<CMat> {
    psd_power_with(h, r, &Tolerances::default())
}

pub fn psd_power_with(h: &CMat, r: f64, tol: &Tolerances) -> Result<CMat> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!("psd_power exponent must be > 0, got {r}")));
    }
    let s = herm_eig_with(h, tol)?;
    let scale = s.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let min = *s.values.last().expect("non-empty");
    let allowed = tol.psd_slack * scale;
    if min < -allowed {
        return Err(Error::NotPsd { min_eig: min, allowed });
    }
    let floor = 4.0 * h.rows() as f64 * f64::EPSILON * scale;
    let powered: Vec<f64> = s.values.iter().map(|&v| if v <= floor { 0.0 } else { v.powf(r) }).collect();
    Ok(s.left_basis.scale_cols(&powered).mul_adj(&s.left_basis).symmetrized())
}

/// `|X| = (X*X)^{1/2}`, assembled from the thin SVD as `R·Σ·R*`.
pub fn abs_modulus(x: &CMat) -> CMat {
    let s = svd_with(x, &Tolerances::default());
    let r = s.right_basis.as_ref().expect("svd has a right basis");
    r.scale_cols(&s.values).mul_adj(r).symmetrized()
}

/// `|X|^p = R·Σ^p·R*` for any `p > 0`.
pub fn abs_power(x: &CMat, p: f64) -> CMat {
    svd_with(x, &Tolerances::default()).modulus_power(p)
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("Schatten exponent must be > 0, got {p}")))
    }
}

/// `Σ μ_k^p` over a singular-value list. Values within the rounding floor
/// `4·len·ε·max` count as zero, as in [`abs_power`].
pub fn lp_pow(values: &[f64], p: f64) -> f64 {
    let top = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let floor = 4.0 * values.len() as f64 * f64::EPSILON * top;
    values.iter().map(|&v| if v <= floor { 0.0 } else { v.powf(p) }).sum()
}

/// `(Σ μ_k^p)^{1/p}`, with `p = ∞` the largest value.
pub fn lp_norm(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0, |m, &v| m.max(v));
    }
    lp_pow(values, p).powf(1.0 / p)
}

/// Schatten p-(quasi)norm; `p = f64::INFINITY` is the operator norm.
pub fn schatten_norm(x: &CMat, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(lp_norm(&singular_values(x), p))
}

/// `‖X‖_p^p`, avoiding the root.
pub fn schatten_pow(x: &CMat, p: f64) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Err(Error::Parameter("schatten_pow needs a finite exponent".into()));
    }
    Ok(lp_pow(&singular_values(x), p))
}

/// Outcome of a psd-order test `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdOrder {
    pub holds: bool,
    /// `λ_min(B − A)`.
    pub margin: f64,
    /// `max(1, ‖A‖, ‖B‖)`, the scale the slack is measured against.
    pub scale: f64,
}

/// Tests `A ≤ B` in the Loewner order.
pub fn psd_leq(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<PsdOrder> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Dimension(format!("psd_leq on {:?} and {:?}", a.shape(), b.shape())));
    }
    let ea = herm_eig_with(a, tol)?;
    let eb = herm_eig_with(b, tol)?;
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = 1.0f64.max(norm(&ea.values)).max(norm(&eb.values));
    let d = herm_eig_with(&(b - a), tol)?;
    let margin = *d.values.last().expect("non-empty");
    Ok(PsdOrder { holds: margin >= -tol.psd_slack * scale, margin, scale })
}
