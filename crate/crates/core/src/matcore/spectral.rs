//! Jacobi eigen- and singular-value solvers.
//!
//! Both solvers use the same complex 2×2 rotation: a diagonal phase that makes
//! the pivot real, followed by the classical symmetric Jacobi rotation. Sweeps
//! are cyclic in row order, so the output is a deterministic function of the
//! input bits.

use serde::{Deserialize, Serialize};

use super::cmat::{CMat, C64};
use super::gram_schmidt;
use super::tol::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass at which two-sided Jacobi stops, relative to ‖H‖_F.
const EIG_OFF_REL: f64 = 1e-14;
/// Column-coupling cosine below which one-sided Jacobi treats a pair as orthogonal.
const SVD_COUPLING: f64 = 1e-15;

/// Ordered spectrum plus diagonalizing bases.
///
/// For [`herm_eig`] `values` are eigenvalues and `left_basis` is unitary with
/// `H = L·diag(values)·L*`. For [`svd`] `values` are singular values and the
/// thin factorization is `X = L·diag(values)·R*`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralData {
    pub values: Vec<f64>,
    pub left_basis: CMat,
    pub right_basis: Option<CMat>,
}

impl SpectralData {
    /// `L·diag(values)·R*` (or `L·diag·L*` when there is no right basis).
    pub fn reconstruct(&self) -> CMat {
        let r = self.right_basis.as_ref().unwrap_or(&self.left_basis);
        self.left_basis.scale_cols(&self.values).mul_adj(r)
    }

    /// `|X|^p = R·Σ^p·R*` from an SVD. Singular values within the rounding
    /// floor `4·max(m,n)·ε·σ₁` count as zero so small `p` does not amplify
    /// noise.
    pub fn modulus_power(&self, p: f64) -> CMat {
        let r = self.right_basis.as_ref().expect("modulus_power needs an SVD");
        let dim = self.left_basis.rows().max(r.rows());
        let floor = 4.0 * dim as f64 * f64::EPSILON * self.values.first().copied().unwrap_or(0.0);
        let powered: Vec<f64> = self.values.iter().map(|&v| if v <= floor { 0.0 } else { v.powf(p) }).collect();
        r.scale_cols(&powered).mul_adj(r).symmetrized()
    }
}

/// Rotation `J = [[c, s], [-s·e, c·e]]` with `|e| = 1` such that
/// `J* [[alpha, b], [conj(b), delta]] J` is diagonal.
fn jacobi_rotation(alpha: f64, delta: f64, b: C64) -> (f64, f64, C64) {
    let nb = b.norm();
    let e = (b / nb).conj();
    let zeta = (delta - alpha) / (2.0 * nb);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
        sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, e)
}

/// Multiplies `e` so that the first entry of largest modulus becomes real positive.
fn phase_of(v: &[C64]) -> C64 {
    let mut best = 0usize;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if best_abs <= 0.0 {
        C64::new(1.0, 0.0)
    } else {
        (v[best] / best_abs).conj()
    }
}

fn stable_desc_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Hermitian eigendecomposition with default tolerances.
pub fn herm_eig(h: &CMat) -> Result<SpectralData> {
    herm_eig_with(h, &Tolerances::default())
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned nonincreasing; ties keep the order in which the
/// sweep left them. Each eigenvector is phase-normalized.
pub fn herm_eig_with(h: &CMat, tol: &Tolerances) -> Result<SpectralData> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("herm_eig needs a square matrix, got {}x{}", h.rows(), h.cols())));
    }
    let scale = h.frobenius().max(1.0);
    let defect = h.hermitian_defect();
    let allowed = tol.recon * scale;
    if defect > allowed {
        return Err(Error::Symmetry { defect, allowed });
    }
    let n = h.rows();
    let mut a = h.symmetrized();
    let mut v = CMat::identity(n);
    let fro = a.frobenius();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off == 0.0 || off <= EIG_OFF_REL * fro {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                if b.norm() == 0.0 {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, b);
                let j10 = -e * s;
                let j11 = e * c;
                for k in 0..n {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    a[(k, p)] = ap * c + aq * j10;
                    a[(k, q)] = ap * s + aq * j11;
                }
                for k in 0..n {
                    let ap = a[(p, k)];
                    let aq = a[(q, k)];
                    a[(p, k)] = ap * c + aq * j10.conj();
                    a[(q, k)] = ap * s + aq * j11.conj();
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c + vq * j10;
                    v[(k, q)] = vp * s + vq * j11;
                }
            }
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let order = stable_desc_order(&raw);
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let cols: Vec<Vec<C64>> = order
        .iter()
        .map(|&i| {
            let col = v.col(i);
            let ph = phase_of(&col);
            col.iter().map(|z| z * ph).collect()
        })
        .collect();
    Ok(SpectralData { values, left_basis: CMat::from_cols(n, &cols), right_basis: None })
}

/// One-sided (Hestenes) Jacobi on the columns of `g`; returns the
/// orthogonalized columns and, when requested, the accumulated rotations.
fn hestenes(x: &CMat, want_v: bool) -> (Vec<Vec<C64>>, Option<Vec<Vec<C64>>>) {
    let n = x.cols();
    let mut g: Vec<Vec<C64>> = (0..n).map(|j| x.col(j)).collect();
    let mut v: Option<Vec<Vec<C64>>> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                e
            })
            .collect()
    });
    let rotate = |cols: &mut Vec<Vec<C64>>, p: usize, q: usize, c: f64, s: f64, e: C64| {
        let j10 = -e * s;
        let j11 = e * c;
        let (lo, hi) = cols.split_at_mut(q);
        let cp = &mut lo[p];
        let cq = &mut hi[0];
        for (zp, zq) in cp.iter_mut().zip(cq.iter_mut()) {
            let a = *zp;
            let b = *zq;
            *zp = a * c + b * j10;
            *zq = a * s + b * j11;
        }
    };
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = g[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = g[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = gram_schmidt::dot(&g[p], &g[q]);
                if gamma.norm() <= SVD_COUPLING * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                rotate(&mut g, p, q, c, s, e);
                if let Some(vv) = v.as_mut() {
                    rotate(vv, p, q, c, s, e);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (g, v)
}

/// Singular values only, nonincreasing, length `min(rows, cols)`.
pub fn singular_values(x: &CMat) -> Vec<f64> {
    let work = if x.rows() < x.cols() { x.adjoint() } else { x.clone() };
    let (g, _) = hestenes(&work, false);
    let mut s: Vec<f64> = g.iter().map(|c| gram_schmidt::norm(c)).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s.truncate(x.rows().min(x.cols()));
    s
}

/// Thin singular value decomposition `X = L·diag(values)·R*` of width
/// `min(rows, cols)`, with default tolerances.
pub fn svd(x: &CMat) -> SpectralData {
    svd_with(x, &Tolerances::default())
}

/// Thin SVD by one-sided Jacobi. Left singular vectors for singular values
/// at or below the rank cutoff are completed to an orthonormal set.
pub fn svd_with(x: &CMat, tol: &Tolerances) -> SpectralData {
    let (m, n) = x.shape();
    let k = m.min(n);
    let (g, v) = hestenes(x, true);
    let v = v.expect("rotations requested");
    let raw: Vec<f64> = g.iter().map(|c| gram_schmidt::norm(c)).collect();
    let order = stable_desc_order(&raw);
    let values: Vec<f64> = order.iter().take(k).map(|&i| raw[i]).collect();
    let rank = tol.rank(&values, m, n);

    let mut left: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut right: Vec<Vec<C64>> = Vec::with_capacity(k);
    for &i in order.iter().take(rank) {
        let ph = phase_of(&v[i]);
        right.push(v[i].iter().map(|z| z * ph).collect());
        let inv = 1.0 / raw[i];
        left.push(g[i].iter().map(|z| z * ph * inv).collect());
    }
    for &i in order.iter().skip(rank).take(k - rank) {
        let ph = phase_of(&v[i]);
        right.push(v[i].iter().map(|z| z * ph).collect());
    }
    // left columns from X·r/σ are orthogonal only to working accuracy;
    // completion vectors are made orthogonal to them explicitly
    gram_schmidt::complete_with_standard(&mut left, m, k);
    for col in left.iter_mut().skip(rank) {
        let ph = phase_of(col);
        col.iter_mut().for_each(|z| *z *= ph);
    }
    let mut values = values;
    for v in values.iter_mut().skip(rank) {
        // below the rank cutoff the value is kept as computed; it is only
        // the left vector that is synthetic
        *v = v.max(0.0);
    }
    SpectralData {
        values,
        left_basis: CMat::from_cols(m, &left),
        right_basis: Some(CMat::from_cols(n, &right)),
    }
}

/// `μ_m(X)` with 1-based `m`, zero beyond `min(rows, cols)`.
pub fn mu(values: &[f64], m: usize) -> f64 {
    assert!(m >= 1, "singular value indices are 1-based");
    values.get(m - 1).copied().unwrap_or(0.0)
}
