//! Explicit counterexamples and impossibility checks.
//!
//! Each report lists the strict inequalities its conclusion rests on. The
//! verdict is [`Verdict::ConfirmedCounterexample`] only if every one of them
//! holds with margin above `10·psd_slack` and every numeric cross-check is
//! within its stated tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    abs_modulus, abs_power, direct_sum, herm_eig_with, mu, op_norm, psd_leq, psd_power_with, singular_values, CMat,
    Tolerances, C64,
};
use crate::orbit::{euler_fourier3_orbit, qsym_thompson, verify_certificate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex { re: f64, im: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: Value,
}

/// A strict inequality `margin > 0` the counterexample depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictCheck {
    pub claim: String,
    pub margin: f64,
}

/// Closed form against numeric evaluation: `deviation ≤ allowed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub claim: String,
    pub deviation: f64,
    pub allowed: f64,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.deviation <= self.allowed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConfirmedCounterexample,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterReport {
    pub name: String,
    pub claim: String,
    pub quantities: Vec<Quantity>,
    pub strict: Vec<StrictCheck>,
    pub cross_checks: Vec<CrossCheck>,
    pub verdict: Verdict,
    pub details: Vec<String>,
}

impl CounterReport {
    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::ConfirmedCounterexample
    }

    /// Looks up a real quantity by name.
    pub fn real(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).and_then(|q| match q.value {
            Value::Real(v) => Some(v),
            Value::Complex { .. } => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct Builder {
    name: &'static str,
    claim: String,
    quantities: Vec<Quantity>,
    strict: Vec<StrictCheck>,
    cross: Vec<CrossCheck>,
    details: Vec<String>,
}

impl Builder {
    fn new(name: &'static str, claim: impl Into<String>) -> Self {
        Self { name, claim: claim.into(), quantities: Vec::new(), strict: Vec::new(), cross: Vec::new(), details: Vec::new() }
    }

    fn real(&mut self, name: &str, v: f64) -> &mut Self {
        self.quantities.push(Quantity { name: name.into(), value: Value::Real(v) });
        self
    }

    fn complex(&mut self, name: &str, z: C64) -> &mut Self {
        self.quantities.push(Quantity { name: name.into(), value: Value::Complex { re: z.re, im: z.im } });
        self
    }

    fn strict(&mut self, claim: impl Into<String>, margin: f64) -> &mut Self {
        self.strict.push(StrictCheck { claim: claim.into(), margin });
        self
    }

    fn cross(&mut self, claim: impl Into<String>, deviation: f64, allowed: f64) -> &mut Self {
        self.cross.push(CrossCheck { claim: claim.into(), deviation, allowed });
        self
    }

    fn note(&mut self, line: impl Into<String>) -> &mut Self {
        self.details.push(line.into());
        self
    }

    fn finish(self, tol: &Tolerances) -> CounterReport {
        let threshold = 10.0 * tol.psd_slack;
        let ok = !self.strict.is_empty()
            && self.strict.iter().all(|s| s.margin > threshold)
            && self.cross.iter().all(CrossCheck::passed);
        CounterReport {
            name: self.name.into(),
            claim: self.claim,
            quantities: self.quantities,
            strict: self.strict,
            cross_checks: self.cross,
            verdict: if ok { Verdict::ConfirmedCounterexample } else { Verdict::Failed },
            details: self.details,
        }
    }
}

fn sq_norm(x: &CMat) -> f64 {
    x.frobenius().powi(2)
}

/// Relative gap in `‖A⊕B‖₂² = ‖A∇ₓB‖₂² + ‖B∇ₓA‖₂² + 2x(1−x)‖A−B‖₂²`,
/// which holds for every real `x`.
pub fn parallelogram_trace_gap(a: &CMat, b: &CMat, x: f64) -> f64 {
    let anb = &a.scale(1.0 - x) + &b.scale(x);
    let bna = &b.scale(1.0 - x) + &a.scale(x);
    let lhs = sq_norm(a) + sq_norm(b);
    let cross = 2.0 * x * (1.0 - x) * sq_norm(&(a - b));
    let rhs = sq_norm(&anb) + sq_norm(&bna) + cross;
    let scale = lhs.max(sq_norm(&anb)).max(sq_norm(&bna)).max(cross.abs()).max(1.0);
    (lhs - rhs).abs() / scale
}

/// Scalar counterexample `A = 1`, `B = (x−1)/x` to the weighted parallelogram
/// orbit identity outside `x ∈ [0, 1]`.
///
/// There `A∇ₓB = 0` and `−x(1−x) > 0`, so the identity would equate a psd
/// term of rank 2 (at least `|A⊕B|²`) with `V·|B∇ₓA|²·V*`, which has rank at
/// most 1 for an isometry `V ∈ 𝕄_{2,1}`.
pub fn parallelogram_counterexample(x: f64, tol: &Tolerances) -> Result<CounterReport> {
    if !x.is_finite() || (0.0..=1.0).contains(&x) {
        return Err(Error::Parameter(format!("x = {x}: the identity holds on [0, 1]; need finite x outside it")));
    }
    let a = CMat::from_real_rows(&[&[1.0]]);
    let b = CMat::from_real_rows(&[&[(x - 1.0) / x]]);
    let anb = &a.scale(1.0 - x) + &b.scale(x);
    let bna = &b.scale(1.0 - x) + &a.scale(x);
    let diff = &a - &b;
    let lhs_core = direct_sum(&[a.gram(), b.gram()]);
    let rank_lhs = tol.rank(&singular_values(&lhs_core), 2, 2);
    // any isometry V in 𝕄_{2,1} gives V·|B∇A|²·V* of rank ≤ 1
    let rank_rhs_max = 1usize;
    let weight = -x * (1.0 - x);

    let mut r = Builder::new("parallelogram", format!("weighted parallelogram orbit identity fails at x = {x}"));
    r.real("x", x)
        .real("A", a[(0, 0)].re)
        .real("B", b[(0, 0)].re)
        .real("A_nabla_B", anb[(0, 0)].re)
        .real("B_nabla_A", bna[(0, 0)].re)
        .real("A_minus_B", diff[(0, 0)].re)
        .real("minus_x_1_minus_x", weight)
        .real("lambda_min_abs_sum_sq", herm_eig_with(&lhs_core, tol)?.values[1])
        .real("rank_lhs_lower_bound", rank_lhs as f64)
        .real("rank_rhs_upper_bound", rank_rhs_max as f64)
        .real("trace_identity_gap", parallelogram_trace_gap(&a, &b, x));
    r.strict("|B∇ₓA| > 0", bna[(0, 0)].norm())
        .strict("|A − B| > 0", diff[(0, 0)].norm())
        .strict("−x(1−x) > 0", weight)
        .strict("rank(|A⊕B|²) − max rank(V|B∇ₓA|²V*) ≥ 1", rank_lhs as f64 - rank_rhs_max as f64);
    r.note("A∇ₓB = 0, so the identity reads |A⊕B|² + (−x(1−x))(S|A−B|²S* + T|A−B|²T*) = V|B∇ₓA|²V*")
        .note(format!("left side ≥ |A⊕B|² = diag(1, {:.6e}) has rank {rank_lhs} under the rank rule", b[(0, 0)].re.powi(2)))
        .note("right side is a scalar times a rank-one projection")
        .note("the trace identity still holds, so the obstruction is positivity, not traces");
    Ok(r.finish(tol))
}

/// `Z_θ = [[cos θ, 0], [−sin θ, 0]]`.
pub fn z_theta(theta: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    CMat::from_real_rows(&[&[c, 0.0], &[-s, 0.0]])
}

/// Closed form of `Tr(((|Z_θ|^p + |Z_θ*|^p)/2)^{1/p})`, written with
/// half-angles so that small `θ` keeps full relative accuracy.
pub fn qsym_trace_closed(p: f64, theta: f64) -> f64 {
    let (sh, ch) = (0.5 * theta).sin_cos();
    (ch * ch).powf(1.0 / p) + (sh * sh).powf(1.0 / p)
}

/// Closed form of `Tr|Re Z_θ| + Tr|Im Z_θ| = 1 + sin θ`.
pub fn cartesian_trace_closed(theta: f64) -> f64 {
    1.0 + theta.sin()
}

/// `Φ(θ) = qsym trace − Cartesian trace`; positive values refute the
/// orbit inequality at exponent `p`.
pub fn phi(p: f64, theta: f64) -> f64 {
    qsym_trace_closed(p, theta) - cartesian_trace_closed(theta)
}

fn trace_abs(h: &CMat, tol: &Tolerances) -> Result<f64> {
    Ok(herm_eig_with(h, tol)?.values.iter().map(|v| v.abs()).sum())
}

/// `((|Z|^p + |Z*|^p)/2)^{1/p}`.
pub fn qsym_power(z: &CMat, p: f64, tol: &Tolerances) -> Result<CMat> {
    let m = &abs_power(z, p) + &abs_power(&z.adjoint(), p);
    psd_power_with(&m.scale(0.5), 1.0 / p, tol)
}

/// Both trace sides for `Z_θ` from the spectral routines.
pub fn qsym_trace_numeric(p: f64, theta: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let z = z_theta(theta);
    let lhs = qsym_power(&z, p, tol)?.trace().re;
    let rhs = trace_abs(&z.real_part(), tol)? + trace_abs(&z.imag_part(), tol)?;
    Ok((lhs, rhs))
}

/// Smallest angle of the halving scan `θ_k = 0.5·2^{-k}`.
pub const THETA_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaScan {
    pub p: f64,
    /// `(θ, Φ(θ))` for every grid point down to the floor.
    pub grid: Vec<(f64, f64)>,
    /// Largest grid angle with `Φ > 0`.
    pub first: Option<(f64, f64)>,
    /// Grid angle maximizing `Φ`, if `Φ > 0` anywhere.
    pub best: Option<(f64, f64)>,
}

pub fn phi_scan(p: f64, floor: f64) -> ThetaScan {
    let mut grid = Vec::new();
    let mut theta = 0.5;
    while theta >= floor {
        grid.push((theta, phi(p, theta)));
        theta *= 0.5;
    }
    let first = grid.iter().copied().find(|&(_, f)| f > 0.0);
    let best = grid.iter().copied().filter(|&(_, f)| f > 0.0).fold(None, |acc: Option<(f64, f64)>, g| match acc {
        Some(a) if a.1 >= g.1 => Some(a),
        _ => Some(g),
    });
    ThetaScan { p, grid, first, best }
}

/// `Z_θ` refuting `((|Z|^p+|Z*|^p)/2)^{1/p} ≤ U|Re Z|U* + V|Im Z|V*` for
/// `p > 2` through its trace consequence.
///
/// The reported angle maximizes `Φ` over the halving grid.
pub fn qsym_exponent_counterexample(p: f64, tol: &Tolerances) -> Result<CounterReport> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p}: the orbit inequality holds for p ≤ 2")));
    }
    let scan = phi_scan(p, THETA_FLOOR);
    let mut r = Builder::new("qsym_exponent", format!("qsym orbit inequality fails at p = {p}"));
    r.real("p", p);
    let Some((theta, phi_best)) = scan.best else {
        r.note(format!("no θ ≥ {THETA_FLOOR:e} on the halving grid gives Φ > 0"));
        return Ok(r.finish(tol));
    };
    let (first_theta, first_phi) = scan.first.expect("best implies first");
    let lhs = qsym_trace_closed(p, theta);
    let rhs = cartesian_trace_closed(theta);
    let (num_lhs, num_rhs) = qsym_trace_numeric(p, theta, tol)?;
    let agree = (lhs - num_lhs).abs().max((rhs - num_rhs).abs());
    r.real("theta_star", theta)
        .real("phi_star", phi_best)
        .real("theta_first", first_theta)
        .real("phi_first", first_phi)
        .real("lhs_closed", lhs)
        .real("rhs_closed", rhs)
        .real("lhs_numeric", num_lhs)
        .real("rhs_numeric", num_rhs)
        .real("closed_vs_numeric", agree);
    r.strict("Φ(θ*) > 0", phi_best);
    r.cross("closed-form traces match spectral traces", agree, 1e-10);
    r.note("Tr((|Z|^p+|Z*|^p)/2)^{1/p} = ((1+cos θ)/2)^{1/p} + ((1−cos θ)/2)^{1/p}")
        .note("Tr|Re Z| + Tr|Im Z| = 1 + sin θ")
        .note("both sides of an orbit domination have the traces above, so Φ > 0 rules out every U, V");
    Ok(r.finish(tol))
}

/// The truncated shift `e₁ ↦ e₂ ↦ e₃ ↦ 0`.
pub fn truncated_shift() -> CMat {
    CMat::from_real_rows(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]])
}

/// Truncated shift refuting
/// `μ_{1+j+k}(((|Z|^p+|Z*|^p)/2)^{1/p}) ≤ μ_{1+j}(Re Z) + μ_{1+k}(Im Z)`
/// at `(j, k) = (2, 0)` for `p > 2`.
pub fn shift_counterexample(p: f64, tol: &Tolerances) -> Result<CounterReport> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p}: 2^(-1/p) ≤ 2^(-1/2), no violation")));
    }
    let z = truncated_shift();
    let m = qsym_power(&z, p, tol)?;
    let mu_m = singular_values(&m);
    let re = z.real_part();
    let im = z.imag_part();
    let re_eig = herm_eig_with(&re, tol)?.values;
    let lhs = mu(&mu_m, 3);
    let rhs = mu(&singular_values(&re), 3) + mu(&singular_values(&im), 1);
    let d = CMat::diag(&[C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0)]);
    let similarity = (&im - &d.matmul(&re).mul_adj(&d)).max_abs();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let eig_gap = (re_eig[0] - h).abs().max(re_eig[1].abs()).max((re_eig[2] + h).abs());

    let mut r = Builder::new("shift", format!("corrected singular-value bound fails at p = {p}, (j,k) = (2,0)"));
    r.real("p", p)
        .real("mu3_qsym_power", lhs)
        .real("mu3_qsym_power_closed", 2f64.powf(-1.0 / p))
        .real("mu3_re", mu(&singular_values(&re), 3))
        .real("mu1_im", mu(&singular_values(&im), 1))
        .real("rhs", rhs)
        .real("re_eigenvalue_gap", eig_gap)
        .real("im_similarity_residual", similarity);
    for (k, v) in re_eig.iter().enumerate() {
        r.real(&format!("re_eigenvalue_{}", k + 1), *v);
    }
    r.complex("d_22", d[(1, 1)]);
    r.strict("μ₃(LHS) − (μ₃(Re Z) + μ₁(Im Z)) > 0", lhs - rhs)
        .cross("Im Z = D (Re Z) D*", similarity, 1e-12)
        .cross("Re Z eigenvalues are 2^{-1/2}, 0, −2^{-1/2}", eig_gap, 1e-12)
        .cross("μ₃ of the qsym power equals 2^{-1/p}", (lhs - 2f64.powf(-1.0 / p)).abs(), 1e-12);
    r.note("|Z| = diag(1,1,0) and |Z*| = diag(0,1,1), so the qsym power is diag(2^{-1/p}, 1, 2^{-1/p})")
        .note("μ₃(Re Z) = 0 and μ₁(Im Z) = 2^{-1/2} since Im Z is unitarily similar to Re Z");
    Ok(r.finish(tol))
}

/// `|Z|_sym = (|Z| + |Z*|)/2`.
pub fn sym_modulus(z: &CMat) -> CMat {
    (&abs_modulus(z) + &abs_modulus(&z.adjoint())).scale(0.5)
}

/// The real 2×2 pair for which `‖|X+Y|_sym‖_∞ > ‖|X|_sym‖_∞ + ‖|Y|_sym‖_∞`,
/// ruling out a Thompson inequality for the arithmetic symmetric modulus.
pub fn sym_thompson_pair() -> (CMat, CMat) {
    (
        CMat::from_real_rows(&[&[-1.0, -1.0], &[0.0, -1.0]]),
        CMat::from_real_rows(&[&[0.0, -1.0], &[0.0, 0.0]]),
    )
}

pub fn sym_thompson_counterexample(tol: &Tolerances) -> Result<CounterReport> {
    let (x, y) = sym_thompson_pair();
    let n_sum = op_norm(&sym_modulus(&(&x + &y)));
    let n_x = op_norm(&sym_modulus(&x));
    let n_y = op_norm(&sym_modulus(&y));
    let c_sum = 3.0 / 2f64.sqrt();
    let c_x = 7.0 / (2.0 * 5f64.sqrt());
    let c_y = 0.5;
    let agree = (n_sum - c_sum).abs().max((n_x - c_x).abs()).max((n_y - c_y).abs());
    let qsym = verify_certificate(&qsym_thompson(&x, &y, tol)?, tol);

    let mut r = Builder::new("sym_thompson", "no unitaries give |X+Y|_sym ≤ U|X|_sym U* + V|Y|_sym V*");
    r.real("norm_sym_x_plus_y", n_sum)
        .real("norm_sym_x", n_x)
        .real("norm_sym_y", n_y)
        .real("closed_vs_numeric", agree)
        .real("gap", n_sum - n_x - n_y)
        .real("qsym_residual", qsym.residual)
        .real("qsym_verified", if qsym.passed { 1.0 } else { 0.0 });
    r.strict("‖|X+Y|_sym‖ − ‖|X|_sym‖ − ‖|Y|_sym‖ > 0", n_sum - n_x - n_y)
        .cross("norms match 3/√2, 7/(2√5), 1/2", agree, 1e-10)
        .cross("qsym Thompson certificate on the same pair verifies", if qsym.passed { 0.0 } else { 1.0 }, 0.0);
    r.note("any orbit domination would give ‖|X+Y|_sym‖ ≤ ‖|X|_sym‖ + ‖|Y|_sym‖ by the triangle inequality")
        .note(format!("the quadratic symmetric modulus certificate for the same pair {}", if qsym.passed {
            "verifies"
        } else {
            "FAILS to verify"
        }));
    Ok(r.finish(tol))
}

/// `A = B = C = I_n` shows no four isometries can give
/// `|A+B|²⊕|B+C|²⊕|A+C|² = U₁|A+B+C|²U₁* + U₂|A|²U₂* + U₃|B|²U₃* + U₄|C|²U₄*`:
/// it would force `9·U₁U₁* ≤ 4·I_{3n}`.
pub fn four_isometry_obstruction(n: usize, tol: &Tolerances) -> Result<CounterReport> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let i = CMat::identity(n);
    let lhs = direct_sum(&[i.scale(4.0), i.scale(4.0), i.scale(4.0)]);
    // every rank-n projection is unitarily equivalent to this one
    let u1 = CMat::eye_rect(3 * n, n);
    let p = u1.mul_adj(&u1);
    let order = psd_leq(&p.scale(9.0), &lhs, tol)?;
    let three = verify_certificate(&euler_fourier3_orbit(&i, &i, &i, tol)?, tol);

    let mut r = Builder::new("four_isometry", format!("no four-isometry Euler identity for n = {n}"));
    r.real("n", n as f64)
        .real("margin", order.margin)
        .real("psd_leq_holds", if order.holds { 1.0 } else { 0.0 })
        .real("three_isometry_residual", three.residual)
        .real("three_isometry_verified", if three.passed { 1.0 } else { 0.0 });
    r.strict("λ_min(4I − 9P) < 0", -order.margin);
    r.note("all right-hand terms are psd, so 4I_{3n} ≥ 9U₁U₁*; but ‖9U₁U₁*‖ = 9 > 4")
        .note(format!("the three-isometry identity on the same triple {}", if three.passed {
            "verifies"
        } else {
            "FAILS to verify"
        }));
    Ok(r.finish(tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn parallelogram_at_two_and_minus_one() {
        let r = parallelogram_counterexample(2.0, &tol()).unwrap();
        assert!(r.confirmed());
        assert_eq!(r.real("B"), Some(0.5));
        assert_eq!(r.real("B_nabla_A"), Some(1.5));
        assert_eq!(r.real("A_minus_B"), Some(0.5));
        assert_eq!(r.real("A_nabla_B"), Some(0.0));

        let r = parallelogram_counterexample(-1.0, &tol()).unwrap();
        assert!(r.confirmed());
        assert_eq!(r.real("B"), Some(2.0));
        assert_eq!(r.real("B_nabla_A"), Some(3.0));
    }

    #[test]
    fn parallelogram_inside_unit_interval_is_rejected() {
        for x in [0.0, 0.5, 1.0] {
            assert!(matches!(parallelogram_counterexample(x, &tol()), Err(Error::Parameter(_))));
        }
        assert!(parallelogram_counterexample(f64::NAN, &tol()).is_err());
    }

    #[test]
    fn trace_identity_for_matrices_and_all_x() {
        let mut rng = crate::sample::StreamRng::new(9, 0);
        let a = crate::sample::ginibre(&mut rng, 3, 3);
        let b = crate::sample::ginibre(&mut rng, 3, 3);
        for x in [-7.5, -1.0, 0.0, 0.3, 1.0, 1.0001, 4.0] {
            assert!(parallelogram_trace_gap(&a, &b, x) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn phi_at_three_hundredths() {
        // Φ(0.01) at p = 3 from the closed forms
        let v = phi(3.0, 0.01);
        assert!((v - 0.0192).abs() < 5e-4, "{v}");
    }

    #[test]
    fn scan_fails_at_two() {
        let s = phi_scan(2.0, 1e-6);
        assert!(s.first.is_none());
        assert!(s.grid.iter().all(|&(_, f)| f <= 0.0));
        assert!(qsym_exponent_counterexample(2.0, &tol()).is_err());
    }

    #[test]
    fn closed_form_matches_spectrum() {
        let (l, r) = qsym_trace_numeric(4.0, 0.3, &tol()).unwrap();
        assert!((l - qsym_trace_closed(4.0, 0.3)).abs() < 1e-12);
        assert!((r - cartesian_trace_closed(0.3)).abs() < 1e-12);
    }

    #[test]
    fn phi_over_theta_grows() {
        let mut t = 0.05;
        while t > 1e-6 {
            assert!(phi(3.0, t / 4.0) / (t / 4.0) > phi(3.0, t) / t);
            t /= 4.0;
        }
    }

    #[test]
    fn qsym_and_shift_over_exponents() {
        for p in [2.1, 2.5, 3.0, 5.0, 10.0] {
            let q = qsym_exponent_counterexample(p, &tol()).unwrap();
            assert!(q.confirmed(), "qsym p = {p}: {:?}", q.strict);
            let s = shift_counterexample(p, &tol()).unwrap();
            assert!(s.confirmed(), "shift p = {p}: {:?}", s.strict);
            assert!((s.real("mu3_qsym_power").unwrap() - 2f64.powf(-1.0 / p)).abs() < 1e-12);
        }
        for p in [1.0, 1.5, 2.0] {
            assert!(qsym_exponent_counterexample(p, &tol()).is_err());
            assert!(shift_counterexample(p, &tol()).is_err());
        }
    }

    #[test]
    fn sym_thompson_norms() {
        let r = sym_thompson_counterexample(&tol()).unwrap();
        assert!(r.confirmed(), "{:?}", r.strict);
        assert!((r.real("norm_sym_x_plus_y").unwrap() - 2.1213203435596424).abs() < 1e-10);
        assert!((r.real("gap").unwrap() - 0.0561).abs() < 1e-3);
        assert_eq!(r.real("qsym_verified"), Some(1.0));
    }

    #[test]
    fn four_isometry_margin() {
        for n in 1..=3 {
            let r = four_isometry_obstruction(n, &tol()).unwrap();
            assert!(r.confirmed());
            assert!((r.real("margin").unwrap() + 5.0).abs() < 1e-12);
            assert_eq!(r.real("three_isometry_verified"), Some(1.0));
        }
        assert!(four_isometry_obstruction(0, &tol()).is_err());
    }
}
