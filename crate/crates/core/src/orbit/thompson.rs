use super::{same_square, OrbitCertificate, OrbitTerm, Relation};
use crate::error::{Error, Result};
use crate::matcore::{abs_modulus, herm_eig_with, psd_power_with, svd_with, vstack, CMat, Tolerances};

/// Unitary `U` with `Re X ≤ U·|X|·U*`.
///
/// With `Re X = S·diag(λ↓)·S*` and `|X| = T·diag(μ↓)·T*`, `U = S·T*` gives
/// `U|X|U* − Re X = S·diag(μ↓ − λ↓)·S*`, which is psd since `λ_k ≤ μ_k`.
pub fn fan_hoffman_orbit(x: &CMat, tol: &Tolerances) -> Result<CMat> {
    if !x.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {:?}", x.shape())));
    }
    let s = herm_eig_with(&x.real_part(), tol)?.left_basis;
    let t = svd_with(x, tol).right_basis.expect("svd has a right basis");
    Ok(s.mul_adj(&t))
}

/// Unitaries realizing `|A+B| ≤ U|A|U* + V|B|V*` for equal-shape `A`, `B`.
///
/// With `A + B = W·|A+B|` from [`polar_support`](super::polar_support),
/// `|A+B| = Re(W*A) + Re(W*B)`, and `Re(W*A) ≤ U|W*A|U* ≤ U|A|U*` because
/// `|W*A|² = A*WW*A ≤ A*A`.
pub fn thompson_rect(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!("shape mismatch {:?} vs {:?}", a.shape(), b.shape())));
    }
    let sum = a + b;
    let w = super::polar_support(&sum, tol).w;
    let u = fan_hoffman_orbit(&w.adjoint().matmul(a), tol)?;
    let v = fan_hoffman_orbit(&w.adjoint().matmul(b), tol)?;
    OrbitCertificate::new(
        abs_modulus(&sum),
        Relation::Domination,
        vec![OrbitTerm::new(u, abs_modulus(a), 1.0), OrbitTerm::new(v, abs_modulus(b), 1.0)],
    )
}

/// Square case of [`thompson_rect`].
pub fn thompson_square(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    same_square("thompson_square", &[a, b])?;
    thompson_rect(a, b, tol)
}

fn gamma(z: &CMat) -> CMat {
    vstack(&[z.clone(), z.adjoint()]).expect("square blocks stack")
}

/// `|X+Y|_qsym ≤ U|X|_qsym U* + V|Y|_qsym V*` via the stacking map
/// `Γ(Z) = (Z; Z*)`, which satisfies `|Γ(Z)| = √2·|Z|_qsym`.
///
/// All moduli are taken as `|Γ(·)|/√2`, which keeps the common factor exact.
pub fn qsym_thompson(x: &CMat, y: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    same_square("qsym_thompson", &[x, y])?;
    let mut cert = thompson_rect(&gamma(x), &gamma(y), tol)?;
    let k = std::f64::consts::FRAC_1_SQRT_2;
    cert.target = cert.target.scale(k);
    for t in cert.terms.iter_mut() {
        t.operand = t.operand.scale(k);
    }
    OrbitCertificate::new(cert.target, cert.relation, cert.terms)
}

/// `√(H+K) ≤ U√H U* + V√K V*` from [`thompson_rect`] on `(√H; 0)` and
/// `(0; √K)`, whose sum has modulus `√(H+K)`.
pub fn sqrt_two_orbit(h: &CMat, k: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    let n = same_square("sqrt_two_orbit", &[h, k])?;
    let rh = psd_power_with(h, 0.5, tol)?;
    let rk = psd_power_with(k, 0.5, tol)?;
    let zero = CMat::zeros(n, n);
    let top = vstack(&[rh.clone(), zero.clone()])?;
    let bottom = vstack(&[zero, rk.clone()])?;
    let cert = thompson_rect(&top, &bottom, tol)?;
    let terms = cert.terms.into_iter().zip([rh, rk]).map(|(t, op)| OrbitTerm::new(t.witness, op, 1.0)).collect();
    OrbitCertificate::new(cert.target, Relation::Domination, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{lambda_min, psd_power, C64};
    use crate::orbit::verify_certificate;
    use crate::sample::{ginibre, StreamRng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_passes(cert: &OrbitCertificate) {
        let check = verify_certificate(cert, &tol());
        assert!(check.passed, "{:?}", check.failures);
    }

    #[test]
    fn fan_hoffman_on_nilpotent() {
        let x = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let u = fan_hoffman_orbit(&x, &tol()).unwrap();
        let rhs = CMat::congruence(&u, &abs_modulus(&x));
        assert!(lambda_min(&(&rhs - &x.real_part())).unwrap() >= -1e-15);
    }

    #[test]
    fn fan_hoffman_sweep() {
        for trial in 0..100 {
            let mut rng = StreamRng::new(17, trial);
            let x = ginibre(&mut rng, 3, 3);
            let u = fan_hoffman_orbit(&x, &tol()).unwrap();
            assert!((&u.gram() - &CMat::identity(3)).max_abs() < 1e-13);
            let gap = &CMat::congruence(&u, &abs_modulus(&x)) - &x.real_part();
            assert!(lambda_min(&gap).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn thompson_with_zero_is_tight() {
        let mut rng = StreamRng::new(2, 0);
        let a = ginibre(&mut rng, 3, 3);
        let cert = thompson_square(&a, &CMat::zeros(3, 3), &tol()).unwrap();
        assert_passes(&cert);
        let gap = &cert.orbit_sum().unwrap() - &cert.target;
        assert!(gap.max_abs() < 1e-12);
    }

    #[test]
    fn thompson_nilpotent_pair() {
        let a = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let cert = thompson_square(&a, &a.adjoint(), &tol()).unwrap();
        assert!((&cert.target - &CMat::identity(2)).max_abs() < 1e-15);
        assert_passes(&cert);
    }

    #[test]
    fn thompson_rect_row_vectors() {
        let a = CMat::from_complex_rows(&[&[C64::new(1.0, 2.0), C64::new(0.0, -1.0), C64::new(3.0, 0.0)]]);
        let b = CMat::from_complex_rows(&[&[C64::new(-2.0, 0.5), C64::new(1.0, 1.0), C64::new(0.0, 0.0)]]);
        let cert = thompson_rect(&a, &b, &tol()).unwrap();
        assert_passes(&cert);
        // traces give the triangle inequality for the row norms
        let lhs = cert.target.trace().re;
        let rhs: f64 = cert.terms.iter().map(|t| t.operand.trace().re).sum();
        assert!((lhs - (&a + &b).frobenius()).abs() < 1e-12);
        assert!(lhs <= rhs);
    }

    #[test]
    fn thompson_rect_sweep() {
        for trial in 0..100 {
            let mut rng = StreamRng::new(23, trial);
            let a = ginibre(&mut rng, 5, 2);
            let b = ginibre(&mut rng, 5, 2);
            assert_passes(&thompson_rect(&a, &b, &tol()).unwrap());
        }
    }

    #[test]
    fn thompson_rejects_shape_mismatch() {
        assert!(thompson_rect(&CMat::zeros(2, 3), &CMat::zeros(3, 2), &tol()).is_err());
        assert!(thompson_square(&CMat::zeros(2, 3), &CMat::zeros(2, 3), &tol()).is_err());
    }

    #[test]
    fn qsym_operands_match_definition() {
        let mut rng = StreamRng::new(8, 1);
        let x = ginibre(&mut rng, 3, 3);
        let y = ginibre(&mut rng, 3, 3);
        let cert = qsym_thompson(&x, &y, &tol()).unwrap();
        let qsym = |z: &CMat| psd_power(&(&z.gram() + &z.adjoint().gram()).scale(0.5), 0.5).unwrap();
        assert!((&cert.terms[0].operand - &qsym(&x)).max_abs() < 1e-12);
        assert!((&cert.terms[1].operand - &qsym(&y)).max_abs() < 1e-12);
        assert!((&cert.target - &qsym(&(&x + &y))).max_abs() < 1e-12);
        assert_passes(&cert);
    }

    #[test]
    fn qsym_sweep() {
        for trial in 0..200 {
            let mut rng = StreamRng::new(29, trial);
            let x = ginibre(&mut rng, 3, 3);
            let y = ginibre(&mut rng, 3, 3);
            assert_passes(&qsym_thompson(&x, &y, &tol()).unwrap());
        }
    }

    #[test]
    fn sqrt_two_cases() {
        let i2 = CMat::identity(2);
        let cert = sqrt_two_orbit(&i2, &i2, &tol()).unwrap();
        assert!((&cert.target - &i2.scale(2f64.sqrt())).max_abs() < 1e-14);
        assert_passes(&cert);

        let mut rng = StreamRng::new(31, 0);
        let h = ginibre(&mut rng, 3, 3).gram();
        let cert = sqrt_two_orbit(&h, &CMat::zeros(3, 3), &tol()).unwrap();
        assert!((&cert.orbit_sum().unwrap() - &cert.target).max_abs() < 1e-12);
        assert_passes(&cert);
    }

    #[test]
    fn sqrt_two_rejects_indefinite() {
        let bad = CMat::diag_real(&[1.0, -0.5]);
        assert!(sqrt_two_orbit(&bad, &CMat::identity(2), &tol()).is_err());
    }
}
