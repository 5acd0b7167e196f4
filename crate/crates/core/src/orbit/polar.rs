use serde::{Deserialize, Serialize};

use super::{OrbitCertificate, OrbitTerm, Relation};
use crate::error::{Error, Result};
use crate::matcore::gram_schmidt;
use crate::matcore::{abs_modulus, psd_power_with, svd_with, CMat, Tolerances, C64};

/// `X = W·|X|` with `W*W` the support projection of `|X|`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarSupport {
    pub w: CMat,
    pub abs: CMat,
    /// Numerical rank used for the support cut.
    pub rank: usize,
}

/// Polar decomposition with a partial-isometry factor supported exactly on
/// the numerical range of `|X|`.
///
/// From the thin SVD `X = L·Σ·R*`, `W = L_r·R_r*` over the singular values
/// above the rank cutoff and `|X| = R·Σ·R*`.
pub fn polar_support(x: &CMat, tol: &Tolerances) -> PolarSupport {
    let s = svd_with(x, tol);
    let r = s.right_basis.as_ref().expect("svd has a right basis");
    let rank = tol.rank(&s.values, x.rows(), x.cols());
    let w = s.left_basis.take_cols(rank).mul_adj(&r.take_cols(rank));
    let abs = r.scale_cols(&s.values).mul_adj(r).symmetrized();
    PolarSupport { w, abs, rank }
}

/// Extends a partial isometry `U` (`m×n`, `U*U = P` a projection, `m ≥ n`)
/// to an isometry `V` agreeing with `U` on `range(P)`.
///
/// `V = U + F·E*` where the columns of `E` are an orthonormal basis of
/// `range(I − P)` and those of `F` an orthonormal basis of a complement of
/// `range(U)`.
pub fn extend_partial_isometry(u: &CMat, tol: &Tolerances) -> Result<CMat> {
    let (m, n) = u.shape();
    if m < n {
        return Err(Error::Dimension(format!("cannot extend a {m}×{n} partial isometry to an isometry")));
    }
    let p = u.gram();
    let idem = (&p.matmul(&p) - &p).max_abs();
    // witnesses come from SVD factors, so P is a projection to working accuracy
    let allowed = tol.isometry_defect.max(1e-12);
    if idem > allowed {
        return Err(Error::Precondition(format!("U*U is not a projection: ‖P²−P‖ = {idem:.3e}")));
    }
    let rank = p.trace().re.round().max(0.0) as usize;
    let rank = rank.min(n);
    let d = n - rank;
    if d == 0 {
        return Ok(u.clone());
    }

    let q = &CMat::identity(n) - &p;
    let q_cols: Vec<Vec<C64>> = (0..n).map(|j| q.col(j)).collect();
    let mut e: Vec<Vec<C64>> = Vec::with_capacity(d);
    // the best remaining column of a rank-d projection has squared residual ≥ 1/n
    let floor = 0.5 / (n as f64).sqrt();
    if gram_schmidt::extend_pivoted(&mut e, &q_cols, d, floor) != d {
        return Err(Error::Precondition("range(I − U*U) has unexpected dimension".into()));
    }

    let u_cols: Vec<Vec<C64>> = (0..n).map(|j| u.col(j)).collect();
    let mut f: Vec<Vec<C64>> = Vec::with_capacity(n);
    if gram_schmidt::extend_pivoted(&mut f, &u_cols, rank, floor) != rank {
        return Err(Error::Precondition("range(U) has unexpected dimension".into()));
    }
    gram_schmidt::complete_with_standard(&mut f, m, rank + d);
    let f_new = CMat::from_cols(m, &f[rank..]);
    let e = CMat::from_cols(n, &e);
    Ok(u + &f_new.mul_adj(&e))
}

/// Isometries `V_k` from block columns of a square root `root` of `H`
/// (`root·root* = H`): `R_k = U_k·|R_k|`, then `U_k` extended.
pub(super) fn isometries_from_root(root: &CMat, n: usize, tol: &Tolerances) -> Result<Vec<CMat>> {
    let size = root.rows();
    let m = blocks(size, n)?;
    (0..m)
        .map(|k| {
            let rk = root.submatrix(0, k * n, size, n);
            extend_partial_isometry(&polar_support(&rk, tol).w, tol)
        })
        .collect()
}

fn blocks(size: usize, n: usize) -> Result<usize> {
    if n == 0 || !size.is_multiple_of(n) {
        return Err(Error::Dimension(format!("size {size} is not divisible by block size {n}")));
    }
    Ok(size / n)
}

fn diag_block(h: &CMat, k: usize, n: usize) -> CMat {
    h.submatrix(k * n, k * n, n, n).symmetrized()
}

/// `H = Σ_k V_k·H_kk·V_k*` with isometries `V_k`, for psd `H` in `n×n` blocks.
///
/// The witnesses come from the block columns of `R = H^{1/2}`.
pub fn isometry_decompose_psd(h: &CMat, n: usize, tol: &Tolerances) -> Result<OrbitCertificate> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {:?}", h.shape())));
    }
    let m = blocks(h.rows(), n)?;
    let root = psd_power_with(h, 0.5, tol)?;
    let vs = isometries_from_root(&root, n, tol)?;
    let terms = vs.into_iter().zip(0..m).map(|(v, k)| OrbitTerm::new(v, diag_block(h, k, n), 1.0)).collect();
    OrbitCertificate::new(h.symmetrized(), Relation::Equality, terms)
}

/// `|T|² = Σ_{i,j} W_ij·|T_ij|²·W_ij*` for square `T` in `n×n` blocks.
///
/// `|T|² = Σ_i R_i*·R_i` over block rows `R_i`, and `R_i*·R_i` has diagonal
/// blocks `|T_ij|²`; each is decomposed with root `|R_i|`. Terms are ordered
/// row-major in `(i, j)`.
pub fn partitioned_pythagoras(t: &CMat, n: usize, tol: &Tolerances) -> Result<OrbitCertificate> {
    if !t.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {:?}", t.shape())));
    }
    let size = t.rows();
    let m = blocks(size, n)?;
    let mut terms = Vec::with_capacity(m * m);
    for i in 0..m {
        let row = t.submatrix(i * n, 0, n, size);
        let vs = isometries_from_root(&abs_modulus(&row), n, tol)?;
        for (j, v) in vs.into_iter().enumerate() {
            terms.push(OrbitTerm::new(v, t.submatrix(i * n, j * n, n, n).gram(), 1.0));
        }
    }
    OrbitCertificate::new(t.gram(), Relation::Equality, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::op_norm;
    use crate::orbit::verify_certificate;
    use crate::sample::{ginibre, StreamRng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn iso_defect(v: &CMat) -> f64 {
        (&v.gram() - &CMat::identity(v.cols())).max_abs()
    }

    fn shift3() -> CMat {
        CMat::from_real_rows(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]])
    }

    #[test]
    fn truncated_shift_is_its_own_polar_factor() {
        let z = shift3();
        let ps = polar_support(&z, &tol());
        assert_eq!(ps.rank, 2);
        assert!((&ps.w - &z).max_abs() < 1e-15);
        assert!((&ps.abs - &CMat::diag_real(&[1.0, 1.0, 0.0])).max_abs() < 1e-15);
    }

    #[test]
    fn unitary_polar() {
        let u = crate::matcore::fourier(3);
        let ps = polar_support(&u, &tol());
        assert!((&ps.w - &u).max_abs() < 1e-14);
        assert!((&ps.abs - &CMat::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn rank_one_polar_postconditions() {
        let mut rng = StreamRng::new(3, 0);
        let x = ginibre(&mut rng, 4, 1).matmul(&ginibre(&mut rng, 1, 2));
        let ps = polar_support(&x, &tol());
        assert_eq!(ps.rank, 1);
        let p = ps.w.gram();
        assert!((&ps.w.matmul(&ps.abs) - &x).max_abs() < 1e-12);
        assert!((&p.matmul(&p) - &p).max_abs() < 1e-14);
        assert!((&p.matmul(&ps.abs) - &ps.abs).max_abs() < 1e-12);
        assert!(op_norm(&ps.w) < 1.0 + 1e-14);
    }

    #[test]
    fn zero_polar_has_zero_factor() {
        let ps = polar_support(&CMat::zeros(2, 3), &tol());
        assert_eq!(ps.rank, 0);
        assert_eq!(ps.w.max_abs(), 0.0);
    }

    #[test]
    fn extension_cases() {
        let iso = CMat::eye_rect(4, 2);
        assert_eq!(extend_partial_isometry(&iso, &tol()).unwrap().as_slice(), iso.as_slice());

        let v = extend_partial_isometry(&CMat::zeros(4, 2), &tol()).unwrap();
        assert!(iso_defect(&v) < 1e-15);

        let mut u = CMat::zeros(4, 2);
        u[(1, 0)] = C64::new(0.0, 1.0);
        let v = extend_partial_isometry(&u, &tol()).unwrap();
        let p = CMat::diag_real(&[1.0, 0.0]);
        assert!(iso_defect(&v) < 1e-15);
        assert!((&v.matmul(&p) - &u.matmul(&p)).max_abs() < 1e-15);
    }

    #[test]
    fn extension_rejects_bad_input() {
        assert!(matches!(extend_partial_isometry(&CMat::zeros(1, 2), &tol()), Err(Error::Dimension(_))));
        let not_partial = CMat::diag_real(&[0.5, 1.0]);
        assert!(matches!(extend_partial_isometry(&not_partial, &tol()), Err(Error::Precondition(_))));
    }

    #[test]
    fn block_diagonal_decomposition() {
        let h = crate::matcore::direct_sum(&[CMat::diag_real(&[2.0, 1.0]), CMat::diag_real(&[3.0, 0.0])]);
        let cert = isometry_decompose_psd(&h, 2, &tol()).unwrap();
        assert!(cert.residual < 1e-12);
        assert!(verify_certificate(&cert, &tol()).passed);
    }

    #[test]
    fn random_gram_decomposition() {
        let mut rng = StreamRng::new(11, 2);
        let h = ginibre(&mut rng, 6, 6).gram();
        let cert = isometry_decompose_psd(&h, 2, &tol()).unwrap();
        assert_eq!(cert.terms.len(), 3);
        let check = verify_certificate(&cert, &tol());
        assert!(check.passed, "{:?}", check.failures);
        assert!(check.residual <= 1e-9 * op_norm(&h).max(1.0));
    }

    #[test]
    fn low_rank_decomposition_still_isometric() {
        let mut rng = StreamRng::new(12, 0);
        let g = ginibre(&mut rng, 1, 6);
        let cert = isometry_decompose_psd(&g.gram(), 3, &tol()).unwrap();
        let check = verify_certificate(&cert, &tol());
        assert!(check.passed, "{:?}", check.failures);
    }

    #[test]
    fn decomposition_rejects_bad_input() {
        assert!(isometry_decompose_psd(&CMat::identity(5), 2, &tol()).is_err());
        assert!(matches!(
            isometry_decompose_psd(&CMat::diag_real(&[1.0, -1.0]), 1, &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn pythagoras_random_and_trace() {
        let mut rng = StreamRng::new(4, 4);
        let t = ginibre(&mut rng, 6, 6);
        let cert = partitioned_pythagoras(&t, 2, &tol()).unwrap();
        assert_eq!(cert.terms.len(), 9);
        let check = verify_certificate(&cert, &tol());
        assert!(check.passed, "{:?}", check.failures);
        let traced: f64 = cert.terms.iter().map(|term| term.operand.trace().re).sum();
        assert!((traced - t.frobenius().powi(2)).abs() < 1e-12 * traced);
    }

    #[test]
    fn pythagoras_single_block_is_unitary_orbit() {
        let mut rng = StreamRng::new(4, 5);
        let t = ginibre(&mut rng, 3, 3);
        let cert = partitioned_pythagoras(&t, 3, &tol()).unwrap();
        assert_eq!(cert.terms.len(), 1);
        assert!(iso_defect(&cert.terms[0].witness.adjoint()) < 1e-13);
        assert!(verify_certificate(&cert, &tol()).passed);
    }
}
