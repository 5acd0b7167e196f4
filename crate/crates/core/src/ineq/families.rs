use super::IneqReport;
use crate::error::{Error, Result};
use crate::matcore::{lp_norm, lp_pow, mu, op_norm, singular_values, svd, vstack, CMat, SpectralData, C64};
use crate::orbit::{euler_sum, pairwise_sum};
use crate::counterex::qsym_power;
use crate::matcore::{herm_eig, Tolerances};

/// Contraction slack for `‖U‖_∞ ≤ 1`.
const CONTRACTION_SLACK: f64 = 1e-12;
/// Isometry slack for `‖U*U − I‖_∞`.
const ISOMETRY_SLACK: f64 = 1e-10;

fn check_positive(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("exponent must be a finite p > 0, got {p}")))
    }
}

fn check_above_one(p: f64) -> Result<f64> {
    if p > 1.0 && p.is_finite() {
        Ok(p / (p - 1.0))
    } else {
        Err(Error::Parameter(format!("mixed-norm exponent must be a finite p > 1, got {p}")))
    }
}

fn same_square(ms: &[&CMat]) -> Result<usize> {
    let n = ms[0].rows();
    if ms.iter().any(|m| m.shape() != (n, n)) {
        return Err(Error::Dimension("triple members must be square of one size".into()));
    }
    Ok(n)
}

/// Sum of `‖·‖_p^p` over singular-value lists.
fn pp_sum(lists: &[Vec<f64>], p: f64) -> f64 {
    lists.iter().map(|s| lp_pow(s, p)).sum()
}

/// Sum of `‖·‖_p^q` over singular-value lists.
fn pq_sum(lists: &[Vec<f64>], p: f64, q: f64) -> f64 {
    lists.iter().map(|s| lp_pow(s, p).powf(q / p)).sum()
}

fn top_sum(values: &[f64], m: usize) -> f64 {
    values.iter().take(m).sum()
}

fn bottom_sum(values: &[f64], m: usize) -> f64 {
    values.iter().rev().take(m).sum()
}

/// Spectral data of an Euler triple: the pairwise sums `X = (A+B, B+C, C+A)`,
/// the terms `Y = (A+B+C, A, B, C)` and the stack `(A+B+C; A; B; C)` whose
/// singular values are the eigenvalues of `√(|A+B+C|²+|A|²+|B|²+|C|²)`.
pub(crate) struct Triple {
    pub n: usize,
    pub x: Vec<SpectralData>,
    pub y: Vec<SpectralData>,
    pub root: Vec<f64>,
}

impl Triple {
    pub fn new(a: &CMat, b: &CMat, c: &CMat) -> Result<Self> {
        let n = same_square(&[a, b, c])?;
        let s = &(a + b) + c;
        let x = vec![svd(&(a + b)), svd(&(b + c)), svd(&(c + a))];
        let root = singular_values(&vstack(&[s.clone(), a.clone(), b.clone(), c.clone()])?);
        let y = vec![svd(&s), svd(a), svd(b), svd(c)];
        Ok(Self { n, x, y, root })
    }

    fn xs(&self) -> Vec<Vec<f64>> {
        self.x.iter().map(|s| s.values.clone()).collect()
    }

    fn ys(&self) -> Vec<Vec<f64>> {
        self.y.iter().map(|s| s.values.clone()).collect()
    }

    pub fn x_pp(&self, p: f64) -> f64 {
        pp_sum(&self.xs(), p)
    }

    pub fn y_pp(&self, p: f64) -> f64 {
        pp_sum(&self.ys(), p)
    }

    pub fn cm_pp(&self, p: f64) -> IneqReport {
        let c = 2f64.powf(p - 2.0);
        IneqReport::oriented("cm_euler_pp", Some(p), self.x_pp(p), c * self.y_pp(p), c, p >= 2.0, self.n)
    }

    /// `[y-form, x-form]`; `p > 1` is checked by the caller.
    pub fn cm_qp(&self, p: f64, q: f64) -> [IneqReport; 2] {
        let k = 2f64.powf(1.0 - q / p);
        let (xs, ys) = (self.xs(), self.ys());
        let forward = p <= 2.0;
        let y_form = IneqReport::oriented(
            "cm_euler_qp",
            Some(p),
            pq_sum(&ys, p, q),
            k * pp_sum(&xs, p).powf(q / p),
            k,
            forward,
            self.n,
        )
        .labeled("form=y".into());
        let x_form = IneqReport::oriented(
            "cm_euler_qp",
            Some(p),
            pq_sum(&xs, p, q),
            k * pp_sum(&ys, p).powf(q / p),
            k,
            forward,
            self.n,
        )
        .labeled("form=x".into());
        [y_form, x_form]
    }

    pub fn weak(&self, p: f64) -> IneqReport {
        let c = 3f64.powf(p / 2.0 - 1.0);
        IneqReport::oriented("weak_euler", Some(p), self.y_pp(p), c * self.x_pp(p), c, p >= 2.0, self.n)
    }

    /// `‖√E‖_p ≤ ‖A+B‖_p + ‖B+C‖_p + ‖C+A‖_p` for `p ≥ 1` (including ∞).
    pub fn cor82(&self, p: f64) -> IneqReport {
        let rhs = self.x.iter().map(|s| lp_norm(&s.values, p)).sum();
        IneqReport::new("euler_norm", Some(p), lp_norm(&self.root, p), rhs, 1.0, false, self.n)
    }

    pub fn weyl(&self, j: usize, k: usize, l: usize) -> Result<IneqReport> {
        if 1 + j + k + l > self.n {
            return Err(Error::Parameter(format!(
                "indices j={j}, k={k}, l={l} need 1+j+k+l ≤ n = {}",
                self.n
            )));
        }
        let lhs = mu(&self.root, 1 + j + k + l);
        let rhs = mu(&self.x[0].values, 1 + j) + mu(&self.x[1].values, 1 + k) + mu(&self.x[2].values, 1 + l);
        Ok(IneqReport::new("euler_weyl", None, lhs, rhs, 1.0, false, self.n).labeled(format!("j={j},k={k},l={l}")))
    }

    pub fn weyl_all(&self) -> Vec<IneqReport> {
        let n = self.n;
        let mut out = Vec::new();
        for j in 0..n {
            for k in 0..n - j {
                for l in 0..n - j - k {
                    out.push(self.weyl(j, k, l).expect("index range enumerated"));
                }
            }
        }
        out
    }

    /// Top-`m` and bottom-`m` eigenvalue sums of the Euler sum against the
    /// pairwise squares. The bottom form reads `≥`, hence `reversed`.
    pub fn kyfan_sums(&self) -> Vec<IneqReport> {
        let e: Vec<f64> = self.root.iter().map(|s| s * s).collect();
        let sq: Vec<Vec<f64>> = self.x.iter().map(|s| s.values.iter().map(|v| v * v).collect()).collect();
        let mut out = Vec::with_capacity(2 * self.n);
        for m in 1..=self.n {
            let top: f64 = sq.iter().map(|v| top_sum(v, m)).sum();
            out.push(
                IneqReport::new("kyfan_top", None, top_sum(&e, m), top, 1.0, false, self.n).labeled(format!("m={m}")),
            );
            let bottom: f64 = sq.iter().map(|v| bottom_sum(v, m)).sum();
            out.push(
                IneqReport::new("kyfan_bottom", None, bottom, bottom_sum(&e, m), 1.0, true, self.n)
                    .labeled(format!("m={m}")),
            );
        }
        out
    }

    /// Ky Fan `m`-norm form of `|A+B|^p+|B+C|^p+|C+A|^p ≤ 2^{p−2}(|A+B+C|^p+|A|^p+|B|^p+|C|^p)`
    /// for every `m`; reversed for `p ≤ 2`.
    pub fn kyfan_clarkson(&self, p: f64) -> Result<Vec<IneqReport>> {
        let sum_powers = |list: &[SpectralData]| -> Result<Vec<f64>> {
            let mut acc = CMat::zeros(self.n, self.n);
            for s in list {
                acc += &s.modulus_power(p);
            }
            let mut v = herm_eig(&acc)?.values;
            v.iter_mut().for_each(|e| *e = e.max(0.0));
            Ok(v)
        };
        let ex = sum_powers(&self.x)?;
        let ey = sum_powers(&self.y)?;
        let c = 2f64.powf(p - 2.0);
        Ok((1..=self.n)
            .map(|m| {
                IneqReport::oriented("kyfan_clarkson", Some(p), top_sum(&ex, m), c * top_sum(&ey, m), c, p >= 2.0, self.n)
                    .labeled(format!("m={m}"))
            })
            .collect())
    }
}

/// `‖(|A+B+C|²+|A|²+|B|²+|C|²) − (|A+B|²+|B+C|²+|C+A|²)‖_∞`, zero up to
/// rounding for every triple.
pub fn euler_identity_residual(a: &CMat, b: &CMat, c: &CMat) -> Result<f64> {
    same_square(&[a, b, c])?;
    Ok(op_norm(&(&euler_sum(a, b, c) - &pairwise_sum(a, b, c))))
}

/// `Σ‖pairwise‖_p^p ≤ 2^{p−2}·Σ‖terms‖_p^p` for `p ≥ 2`, reversed below.
pub fn cm_euler_pp(a: &CMat, b: &CMat, c: &CMat, p: f64) -> Result<IneqReport> {
    check_positive(p)?;
    Ok(Triple::new(a, b, c)?.cm_pp(p))
}

/// Mixed `ℓ_q(S_p)–ℓ_p(S_p)` forms with constant `2^{1−q/p}`:
/// `[Σ‖terms‖^q ≤ k(Σ‖pairwise‖^p)^{q/p}, Σ‖pairwise‖^q ≤ k(Σ‖terms‖^p)^{q/p}]`
/// for `1 < p ≤ 2`, both reversed for `p ≥ 2`.
pub fn cm_euler_qp(a: &CMat, b: &CMat, c: &CMat, p: f64) -> Result<[IneqReport; 2]> {
    let q = check_above_one(p)?;
    Ok(Triple::new(a, b, c)?.cm_qp(p, q))
}

/// `Σ‖terms‖_p^p ≤ 3^{p/2−1}·Σ‖pairwise‖_p^p` for `p ≥ 2`, reversed below.
pub fn weak_euler_bound(a: &CMat, b: &CMat, c: &CMat, p: f64) -> Result<IneqReport> {
    check_positive(p)?;
    Ok(Triple::new(a, b, c)?.weak(p))
}

/// Schatten-norm triangle bound for the Euler modulus, `p ≥ 1` or `p = ∞`.
pub fn cor82_norm_check(a: &CMat, b: &CMat, c: &CMat, p: f64) -> Result<IneqReport> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("norm exponent must be ≥ 1, got {p}")));
    }
    Ok(Triple::new(a, b, c)?.cor82(p))
}

/// `μ_{1+j+k+l}(√E) ≤ μ_{1+j}(A+B) + μ_{1+k}(B+C) + μ_{1+l}(C+A)`.
pub fn euler_weyl_checks(a: &CMat, b: &CMat, c: &CMat, j: usize, k: usize, l: usize) -> Result<IneqReport> {
    Triple::new(a, b, c)?.weyl(j, k, l)
}

/// [`euler_weyl_checks`] over every `(j, k, l)` with `1+j+k+l ≤ n`.
pub fn euler_weyl_all(a: &CMat, b: &CMat, c: &CMat) -> Result<Vec<IneqReport>> {
    Ok(Triple::new(a, b, c)?.weyl_all())
}

/// Ky Fan sum and anti-sum reports for every `m`, then the Ky Fan Clarkson
/// reports for each exponent in `p_grid`.
pub fn kyfan_checks(a: &CMat, b: &CMat, c: &CMat, p_grid: &[f64]) -> Result<Vec<IneqReport>> {
    for &p in p_grid {
        check_positive(p)?;
    }
    let t = Triple::new(a, b, c)?;
    let mut out = t.kyfan_sums();
    for &p in p_grid {
        out.extend(t.kyfan_clarkson(p)?);
    }
    Ok(out)
}

fn qsym_weyl(qsym: &[f64], re: &[f64], im: &[f64], p: f64, j: usize, k: usize, n: usize) -> IneqReport {
    let lhs = mu(qsym, 1 + j + k);
    let rhs = mu(re, 1 + j) + mu(im, 1 + k);
    IneqReport::new("weyl_qsym", Some(p), lhs, rhs, 1.0, false, n).labeled(format!("j={j},k={k}"))
}

struct QsymSpectra {
    n: usize,
    qsym: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl QsymSpectra {
    fn new(z: &CMat, p: f64) -> Result<Self> {
        check_positive(p)?;
        let n = same_square(&[z])?;
        Ok(Self {
            n,
            qsym: singular_values(&qsym_power(z, p, &Tolerances::default())?),
            re: singular_values(&z.real_part()),
            im: singular_values(&z.imag_part()),
        })
    }

    fn check(&self, p: f64, j: usize, k: usize) -> Result<IneqReport> {
        if 1 + j + k > self.n {
            return Err(Error::Parameter(format!("indices j={j}, k={k} need 1+j+k ≤ n = {}", self.n)));
        }
        Ok(qsym_weyl(&self.qsym, &self.re, &self.im, p, j, k, self.n))
    }
}

/// `μ_{1+j+k}(((|Z|^p+|Z*|^p)/2)^{1/p}) ≤ μ_{1+j}(Re Z) + μ_{1+k}(Im Z)`.
/// Proven for `p ≤ 2`; evaluated as stated for any `p > 0`, so it can report
/// `Violated` above 2.
pub fn weyl_singular_checks(z: &CMat, p: f64, j: usize, k: usize) -> Result<IneqReport> {
    QsymSpectra::new(z, p)?.check(p, j, k)
}

/// [`weyl_singular_checks`] over every `(j, k)` with `1+j+k ≤ n`.
pub fn weyl_singular_all(z: &CMat, p: f64) -> Result<Vec<IneqReport>> {
    let s = QsymSpectra::new(z, p)?;
    let mut out = Vec::new();
    for j in 0..s.n {
        for k in 0..s.n - j {
            out.push(s.check(p, j, k)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `Σ‖T_U Z‖^q` against `Σ‖Z‖^p`.
    Forward,
    /// `Σ‖Z‖^q` against `Σ‖T_U Z‖^p`.
    Backward,
}

/// Singular values of a tuple and of its image under `T_U`, with the data of
/// `U` that the preconditions need.
pub(crate) struct Mixed {
    n: usize,
    mu: f64,
    op: f64,
    iso_defect: f64,
    z: Vec<Vec<f64>>,
    tz: Vec<Vec<f64>>,
}

impl Mixed {
    pub fn new(u: &CMat, z: &[CMat]) -> Result<Self> {
        if z.len() != u.cols() {
            return Err(Error::Dimension(format!("U has {} columns but the tuple has {} members", u.cols(), z.len())));
        }
        let shape = z.first().map(CMat::shape).ok_or_else(|| Error::Dimension("empty tuple".into()))?;
        if z.iter().any(|m| m.shape() != shape) {
            return Err(Error::Dimension("tuple members must share one shape".into()));
        }
        let tz: Vec<Vec<f64>> = (0..u.rows())
            .map(|i| {
                let mut acc = CMat::zeros(shape.0, shape.1);
                for (j, zj) in z.iter().enumerate() {
                    if u[(i, j)] != C64::new(0.0, 0.0) {
                        acc += &zj.scale_c(u[(i, j)]);
                    }
                }
                singular_values(&acc)
            })
            .collect();
        Ok(Self {
            n: shape.0,
            mu: u.as_slice().iter().fold(0.0, |m, e| m.max(e.norm())),
            op: op_norm(u),
            iso_defect: op_norm(&(&u.gram() - &CMat::identity(u.cols()))),
            z: z.iter().map(singular_values).collect(),
            tz,
        })
    }

    pub fn report(&self, p: f64, dir: Direction) -> Result<IneqReport> {
        let q = check_above_one(p)?;
        let needs_isometry = dir == Direction::Backward || p > 2.0;
        if needs_isometry {
            if self.iso_defect > ISOMETRY_SLACK {
                return Err(Error::Precondition(format!(
                    "isometry required: ‖U*U − I‖ = {:.3e} > {ISOMETRY_SLACK:e}",
                    self.iso_defect
                )));
            }
        } else if self.op > 1.0 + CONTRACTION_SLACK {
            return Err(Error::Precondition(format!("contraction required: ‖U‖ = {} > 1", self.op)));
        }
        let c = self.mu.powf(q * (2.0 / p - 1.0));
        let (qside, pside, name) = match dir {
            Direction::Forward => (&self.tz, &self.z, "mixed_forward"),
            Direction::Backward => (&self.z, &self.tz, "mixed_backward"),
        };
        Ok(IneqReport::oriented(
            name,
            Some(p),
            pq_sum(qside, p, q),
            c * pp_sum(pside, p).powf(q / p),
            c,
            p <= 2.0,
            self.n,
        ))
    }
}

/// Mixed `ℓ_q(S_p)–ℓ_p(S_p)` estimate for `T_U(Z)_i = Σ_j u_ij Z_j` in
/// `q`-power form with constant `μ^{q(2/p−1)}`, `μ = max |u_ij|`. Forward for
/// `p ≤ 2` needs a contraction; every other case needs an isometry.
pub fn mixed_norm_check(u: &CMat, z: &[CMat], p: f64, dir: Direction) -> Result<IneqReport> {
    Mixed::new(u, z)?.report(p, dir)
}

/// Coefficients taking `(A+B+C, A, B, C)` to `(A+B, B+C, C+A)`; a co-isometry
/// with entries of modulus 1/2.
pub fn u113() -> CMat {
    CMat::from_real_rows(&[&[0.5, 0.5, 0.5, -0.5], &[0.5, -0.5, 0.5, 0.5], &[0.5, 0.5, -0.5, 0.5]])
}

/// The `(1 + n(n−1)/2) × n` isometry with rows `1ᵀ/√n` and `(e_i − e_j)ᵀ/√n`
/// for `i < j` in lexicographic order.
pub fn akc_isometry(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    let rows = 1 + n * (n.saturating_sub(1)) / 2;
    let mut u = CMat::zeros(rows, n);
    for j in 0..n {
        u[(0, j)] = C64::new(s, 0.0);
    }
    let mut r = 1;
    for i in 0..n {
        for j in i + 1..n {
            u[(r, i)] = C64::new(s, 0.0);
            u[(r, j)] = C64::new(-s, 0.0);
            r += 1;
        }
    }
    u
}

/// Singular values of `ΣA_i`, of every `A_i − A_j` (`i < j`) and of every `A_i`.
pub(crate) struct AkcData {
    count: usize,
    dim: usize,
    combos: Vec<Vec<f64>>,
    singles: Vec<Vec<f64>>,
}

impl AkcData {
    pub fn new(tuple: &[CMat]) -> Result<Self> {
        let count = tuple.len();
        if count < 2 {
            return Err(Error::Dimension(format!("tuple needs n ≥ 2 members, got {count}")));
        }
        let shape = tuple[0].shape();
        if tuple.iter().any(|m| m.shape() != shape) {
            return Err(Error::Dimension("tuple members must share one shape".into()));
        }
        let mut sum = CMat::zeros(shape.0, shape.1);
        for a in tuple {
            sum += a;
        }
        let mut combos = vec![singular_values(&sum)];
        for i in 0..count {
            for j in i + 1..count {
                combos.push(singular_values(&(&tuple[i] - &tuple[j])));
            }
        }
        Ok(Self { count, dim: shape.0, combos, singles: tuple.iter().map(singular_values).collect() })
    }

    /// `[akc, complement]`.
    pub fn reports(&self, p: f64) -> Result<[IneqReport; 2]> {
        let q = check_above_one(p)?;
        let nf = self.count as f64;
        let forward = p <= 2.0;
        let akc = IneqReport::oriented(
            "akc",
            Some(p),
            pq_sum(&self.combos, p, q),
            nf * pp_sum(&self.singles, p).powf(q / p),
            nf,
            forward,
            self.dim,
        );
        let c = nf.powf(-q / p);
        let complement = IneqReport::oriented(
            "akc_complement",
            Some(p),
            pq_sum(&self.singles, p, q),
            c * pp_sum(&self.combos, p).powf(q / p),
            c,
            forward,
            self.dim,
        );
        Ok([akc, complement])
    }
}

/// `[‖ΣA_i‖^q + Σ‖A_i−A_j‖^q ≤ n(Σ‖A_i‖^p)^{q/p},
///   Σ‖A_i‖^q ≤ n^{−q/p}(‖ΣA_i‖^p + Σ‖A_i−A_j‖^p)^{q/p}]` for `1 < p ≤ 2`,
/// both reversed for `p ≥ 2`.
pub fn akc_check(tuple: &[CMat], p: f64) -> Result<[IneqReport; 2]> {
    check_above_one(p)?;
    AkcData::new(tuple)?.reports(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::IneqVerdict;
    use crate::matcore::svd;
    use crate::sample::{ginibre, StreamRng};

    fn triple(seed: u64, n: usize) -> (CMat, CMat, CMat) {
        let mut rng = StreamRng::new(seed, 0);
        (ginibre(&mut rng, n, n), ginibre(&mut rng, n, n), ginibre(&mut rng, n, n))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    /// Diagonal triple with the scalar `ℓ_p` sums computed from the entries.
    fn diag_triple() -> (CMat, CMat, CMat, [Vec<f64>; 3]) {
        let a = [0.7, -1.3, 2.1];
        let b = [-0.4, 0.9, 0.5];
        let c = [1.1, 0.2, -2.6];
        (CMat::diag_real(&a), CMat::diag_real(&b), CMat::diag_real(&c), [a.to_vec(), b.to_vec(), c.to_vec()])
    }

    fn scalar_pp(v: &[f64], p: f64) -> f64 {
        v.iter().map(|x| x.abs().powf(p)).sum()
    }

    fn scalar_sides(d: &[Vec<f64>; 3], p: f64) -> (f64, f64) {
        let (a, b, c) = (&d[0], &d[1], &d[2]);
        let comb = |f: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..a.len()).map(f).collect() };
        let x = scalar_pp(&comb(&|i| a[i] + b[i]), p)
            + scalar_pp(&comb(&|i| b[i] + c[i]), p)
            + scalar_pp(&comb(&|i| c[i] + a[i]), p);
        let y = scalar_pp(&comb(&|i| a[i] + b[i] + c[i]), p) + scalar_pp(a, p) + scalar_pp(b, p) + scalar_pp(c, p);
        (x, y)
    }

    #[test]
    fn identity_triple_has_zero_residual() {
        let i = CMat::identity(3);
        assert_eq!(euler_identity_residual(&i, &i, &i).unwrap(), 0.0);
    }

    #[test]
    fn random_residual_is_rounding_level() {
        let (a, b, c) = triple(3, 5);
        let scale = op_norm(&pairwise_sum(&a, &b, &c)).max(1.0);
        assert!(euler_identity_residual(&a, &b, &c).unwrap() <= 1e-12 * scale);
        let r = euler_identity_residual(&a, &b, &(-&b)).unwrap();
        assert!(r <= 1e-12 * scale);
    }

    #[test]
    fn pp_matches_scalar_oracle() {
        let (a, b, c, d) = diag_triple();
        for p in [0.5, 1.5, 4.0] {
            let r = cm_euler_pp(&a, &b, &c, p).unwrap();
            let (x, y) = scalar_sides(&d, p);
            let (first, second) = if r.reversed { (r.rhs, r.lhs) } else { (r.lhs, r.rhs) };
            assert!(rel(first, x) < 1e-12, "p={p}");
            assert!(rel(second, 2f64.powf(p - 2.0) * y) < 1e-12, "p={p}");
            assert_ne!(r.verdict, IneqVerdict::Violated);
        }
    }

    #[test]
    fn pp_sharp_at_a_eq_b_eq_minus_c() {
        let (a, _, _) = triple(5, 3);
        for p in [0.5, 1.5, 3.0, 4.0] {
            let r = cm_euler_pp(&a, &a, &(-&a), p).unwrap();
            assert_eq!(r.verdict, IneqVerdict::Equality, "p={p}");
            assert!((r.ratio - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn p_two_is_equality_everywhere() {
        let (a, b, c) = triple(11, 4);
        assert_eq!(cm_euler_pp(&a, &b, &c, 2.0).unwrap().verdict, IneqVerdict::Equality);
        assert_eq!(weak_euler_bound(&a, &b, &c, 2.0).unwrap().verdict, IneqVerdict::Equality);
        for r in cm_euler_qp(&a, &b, &c, 2.0).unwrap() {
            assert_eq!(r.verdict, IneqVerdict::Equality);
            assert_eq!(r.constant, 1.0);
        }
    }

    #[test]
    fn qp_sharp_and_scalar() {
        let (a, _, _) = triple(6, 2);
        for r in cm_euler_qp(&a, &a, &(-&a), 1.5).unwrap() {
            assert_eq!(r.verdict, IneqVerdict::Equality);
        }
        let (a, b, c, d) = diag_triple();
        let p = 1.2;
        let q = p / (p - 1.0);
        let [y_form, _] = cm_euler_qp(&a, &b, &c, p).unwrap();
        let lists = |m: &[&CMat]| -> Vec<Vec<f64>> { m.iter().map(|x| singular_values(x)).collect() };
        let s = &(&a + &b) + &c;
        let ys = lists(&[&s, &a, &b, &c]);
        assert!(rel(y_form.lhs, pq_sum(&ys, p, q)) < 1e-12);
        let (x, _) = scalar_sides(&d, p);
        assert!(rel(y_form.rhs, 2f64.powf(1.0 - q / p) * x.powf(q / p)) < 1e-12);
    }

    #[test]
    fn qp_rejects_small_p() {
        let i = CMat::identity(1);
        assert!(cm_euler_qp(&i, &i, &i, 1.0).is_err());
        assert!(cm_euler_pp(&i, &i, &i, 0.0).is_err());
    }

    #[test]
    fn u113_maps_terms_to_pairwise() {
        let (a, b, c) = triple(8, 3);
        let s = &(&a + &b) + &c;
        let u = u113();
        assert!(op_norm(&(&u.mul_adj(&u) - &CMat::identity(3))) < 1e-15);
        let y = [s, a.clone(), b.clone(), c.clone()];
        let x = [&a + &b, &b + &c, &c + &a];
        for (i, xi) in x.iter().enumerate() {
            let mut acc = CMat::zeros(3, 3);
            for (j, yj) in y.iter().enumerate() {
                acc += &yj.scale_c(u[(i, j)]);
            }
            assert!(op_norm(&(&acc - xi)) < 1e-14);
        }
    }

    #[test]
    fn u113_forward_reproduces_qp() {
        let (a, b, c) = triple(9, 3);
        let s = &(&a + &b) + &c;
        let p = 1.5;
        let mixed = mixed_norm_check(&u113(), &[s, a.clone(), b.clone(), c.clone()], p, Direction::Forward).unwrap();
        let [_, x_form] = cm_euler_qp(&a, &b, &c, p).unwrap();
        assert!(rel(mixed.lhs, x_form.lhs) < 1e-12);
        assert!(rel(mixed.rhs, x_form.rhs) < 1e-12);
        // the co-isometry cannot drive the reversed regime
        let y = [CMat::identity(2), CMat::identity(2), CMat::identity(2), CMat::identity(2)];
        let err = mixed_norm_check(&u113(), &y, 3.0, Direction::Forward).unwrap_err();
        assert!(err.to_string().contains("isometry"));
    }

    #[test]
    fn contraction_precondition_is_named() {
        let u = CMat::from_real_rows(&[&[1.0, 1.0]]);
        let z = [CMat::identity(1), CMat::identity(1)];
        let err = mixed_norm_check(&u, &z, 1.5, Direction::Forward).unwrap_err();
        assert!(err.to_string().contains("contraction"));
        let err = mixed_norm_check(&u, &z, 1.5, Direction::Backward).unwrap_err();
        assert!(err.to_string().contains("isometry"));
    }

    #[test]
    fn identity_coefficients() {
        // a single member: ℓ_q and ℓ_p sums coincide
        let (a, b, c) = triple(10, 2);
        for p in [1.3, 2.0, 3.5] {
            for dir in [Direction::Forward, Direction::Backward] {
                let r = mixed_norm_check(&CMat::identity(1), std::slice::from_ref(&a), p, dir).unwrap();
                assert_eq!(r.verdict, IneqVerdict::Equality, "p={p} {dir:?}");
            }
        }
        // several members: strict ℓ_q versus ℓ_p comparison, equal only at p = 2
        let z = [a, b, c];
        for p in [1.3, 2.0, 3.5] {
            let r = mixed_norm_check(&CMat::identity(3), &z, p, Direction::Forward).unwrap();
            let want = if p == 2.0 { IneqVerdict::Equality } else { IneqVerdict::Holds };
            assert_eq!(r.verdict, want, "p={p}");
        }
    }

    #[test]
    fn akc_isometry_is_isometric() {
        for n in 2..6 {
            let u = akc_isometry(n);
            assert_eq!(u.shape(), (1 + n * (n - 1) / 2, n));
            assert!(op_norm(&(&u.gram() - &CMat::identity(n))) < 1e-14);
        }
    }

    #[test]
    fn mixed_with_akc_isometry_matches_akc() {
        let mut rng = StreamRng::new(12, 0);
        let tuple: Vec<CMat> = (0..3).map(|_| ginibre(&mut rng, 2, 2)).collect();
        let u = akc_isometry(3);
        for p in [1.5, 3.0] {
            let q = p / (p - 1.0);
            let [akc, comp] = akc_check(&tuple, p).unwrap();
            let fwd = mixed_norm_check(&u, &tuple, p, Direction::Forward).unwrap();
            let bwd = mixed_norm_check(&u, &tuple, p, Direction::Backward).unwrap();
            // T_U rows carry 1/√n, so the q-side scales by n^{-q/2} and the p-side by n^{-1/2·q}
            let s = 3f64.powf(-q / 2.0);
            assert!(rel(fwd.ratio, akc.ratio) < 1e-12, "p={p}");
            assert!(rel(bwd.ratio, comp.ratio) < 1e-12, "p={p}");
            let (f_first, a_first) = if p <= 2.0 { (fwd.lhs, akc.lhs) } else { (fwd.rhs, akc.rhs) };
            assert!(rel(f_first, s * a_first) < 1e-12);
        }
    }

    #[test]
    fn akc_equal_tuples_are_sharp() {
        let mut rng = StreamRng::new(13, 0);
        let a = ginibre(&mut rng, 3, 3);
        let tuple = vec![a.clone(), a.clone(), a.clone(), a];
        for p in [1.5, 3.0] {
            for r in akc_check(&tuple, p).unwrap() {
                assert_eq!(r.verdict, IneqVerdict::Equality, "{} p={p}", r.name);
            }
        }
    }

    #[test]
    fn akc_scalar_oracle_and_pair_reduction() {
        let a = [1.0, -2.0];
        let b = [0.5, 3.0];
        let tuple = [CMat::diag_real(&a), CMat::diag_real(&b)];
        let p = 3.0;
        let q = 1.5;
        let [akc, _] = akc_check(&tuple, p).unwrap();
        let sum: Vec<f64> = vec![1.5, 1.0];
        let diff: Vec<f64> = vec![0.5, -5.0];
        let lhs = scalar_pp(&sum, p).powf(q / p) + scalar_pp(&diff, p).powf(q / p);
        let rhs = 2.0 * (scalar_pp(&a, p) + scalar_pp(&b, p)).powf(q / p);
        // p > 2 reverses, so the displayed left side is the valid right side
        assert!(akc.reversed);
        assert!(rel(akc.rhs, lhs) < 1e-12 && rel(akc.lhs, rhs) < 1e-12);
    }

    #[test]
    fn weak_bound_scalar_oracle_and_constants() {
        let (a, b, c, d) = diag_triple();
        for p in [0.5, 3.0] {
            let r = weak_euler_bound(&a, &b, &c, p).unwrap();
            let (x, y) = scalar_sides(&d, p);
            let (first, second) = if r.reversed { (r.rhs, r.lhs) } else { (r.lhs, r.rhs) };
            assert!(rel(first, y) < 1e-12 && rel(second, 3f64.powf(p / 2.0 - 1.0) * x) < 1e-12);
        }
        let (a, _, _) = triple(14, 3);
        let r = weak_euler_bound(&a, &a, &a, 4.0).unwrap();
        assert_eq!(r.verdict, IneqVerdict::Holds);
        // equal triples sit on the sharper constant 28/16, not on 3
        assert!(rel(r.ratio, 1.75 / 3.0) < 1e-12);
    }

    #[test]
    fn euler_norm_and_weyl_hold() {
        let (a, b, c) = triple(15, 4);
        for p in [1.0, 1.5, 3.0, f64::INFINITY] {
            assert_eq!(cor82_norm_check(&a, &b, &c, p).unwrap().verdict, IneqVerdict::Holds);
        }
        assert!(cor82_norm_check(&a, &b, &c, 0.5).is_err());
        let all = euler_weyl_all(&a, &b, &c).unwrap();
        assert_eq!(all.len(), 20);
        assert!(all.iter().all(|r| !r.violated()));
        assert!(euler_weyl_checks(&a, &b, &c, 2, 1, 1).is_err());
    }

    #[test]
    fn kyfan_full_trace_is_identity() {
        let (a, b, c) = triple(16, 4);
        let reps = kyfan_checks(&a, &b, &c, &[1.5, 3.0]).unwrap();
        assert!(reps.iter().all(|r| !r.violated()));
        for r in reps.iter().filter(|r| r.label.as_deref() == Some("m=4") && r.p.is_none()) {
            assert_eq!(r.verdict, IneqVerdict::Equality, "{}", r.name);
        }
    }

    #[test]
    fn kyfan_clarkson_sharp() {
        let (a, _, _) = triple(17, 3);
        let reps = kyfan_checks(&a, &a, &(-&a), &[0.5, 1.5, 3.0, 4.0]).unwrap();
        for r in reps.iter().filter(|r| r.name == "kyfan_clarkson") {
            assert_eq!(r.verdict, IneqVerdict::Equality, "{:?} {:?}", r.p, r.label);
        }
    }

    #[test]
    fn weyl_qsym_holds_at_two_fails_above() {
        let z = crate::counterex::truncated_shift();
        assert!(weyl_singular_all(&z, 2.0).unwrap().iter().all(|r| !r.violated()));
        let r = weyl_singular_checks(&z, 3.0, 2, 0).unwrap();
        assert_eq!(r.verdict, IneqVerdict::Violated);
        assert!(weyl_singular_checks(&z, 2.0, 2, 1).is_err());
    }

    #[test]
    fn modulus_power_matches_definition() {
        let (a, _, _) = triple(18, 3);
        let s = svd(&a);
        assert!(op_norm(&(&s.modulus_power(2.0) - &a.gram())) < 1e-12);
    }
}
