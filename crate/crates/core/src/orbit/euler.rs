use serde::{Deserialize, Serialize};

use super::polar::{isometries_from_root, partitioned_pythagoras};
use super::thompson::thompson_rect;
use super::{same_square, OrbitCertificate, OrbitTerm, Relation};
use crate::error::Result;
use crate::matcore::{abs_modulus, direct_sum, fourier, hadamard4, kron, vstack, CMat, Tolerances};

/// Operand classes of the Hadamard orbit identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EulerClass {
    /// `A + B + C`
    Sum,
    A,
    B,
    C,
}

impl EulerClass {
    /// Class of a block `½·(c_A·A + c_B·B + c_C·C)` with integer `c`, if any.
    fn of(c: [i32; 3]) -> Option<Self> {
        match c.map(i32::abs) {
            [1, 1, 1] if c == [1, 1, 1] => Some(Self::Sum),
            [1, 0, 0] => Some(Self::A),
            [0, 1, 0] => Some(Self::B),
            [0, 0, 1] => Some(Self::C),
            _ => None,
        }
    }

    fn matrix(self, a: &CMat, b: &CMat, c: &CMat) -> CMat {
        match self {
            Self::Sum => &(a + b) + c,
            Self::A => a.clone(),
            Self::B => b.clone(),
            Self::C => c.clone(),
        }
    }
}

fn combine(coef: [i32; 3], mats: [&CMat; 3]) -> CMat {
    let n = mats[0].rows();
    let mut out = CMat::zeros(n, n);
    for (k, m) in coef.iter().zip(mats) {
        if *k != 0 {
            out += &m.scale(0.5 * f64::from(*k));
        }
    }
    out
}

/// `|A+B|² ⊕ |B+C|² ⊕ |C+A|² ⊕ 0 = ¼·Σ U_ij·|class_ij|²·U_ij*` with sixteen
/// isometries, four per class in `{A+B+C, A, B, C}`.
///
/// `T = 𝒰·diag(A+B, B+C, C+A, 0)·𝒰*` with `𝒰 = H₄ ⊗ I` has every block equal
/// to `±½` times one class; [`partitioned_pythagoras`] on `T` followed by
/// conjugation with `𝒰*` gives the witnesses. Terms are grouped by class in
/// the order above, row-major within a class.
pub fn euler_hadamard_orbit(a: &CMat, b: &CMat, c: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    let n = same_square("euler_hadamard_orbit", &[a, b, c])?;
    let h = hadamard4();
    // doubled coefficient vectors over (A, B, C) of the diagonal of Δ_Y
    let y: [[f64; 3]; 4] = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
    let mut grid = vec![vec![CMat::zeros(n, n); 4]; 4];
    let mut classes = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut coef = [0i32; 3];
            for (l, cl) in coef.iter_mut().enumerate() {
                let v: f64 = (0..4).map(|k| h[(i, k)].re * h[(j, k)].re * y[k][l]).sum();
                *cl = (2.0 * v).round() as i32;
            }
            let class = EulerClass::of(coef).expect("every Hadamard block carries one class");
            grid[i][j] = combine(coef, [a, b, c]);
            classes.push(class);
        }
    }
    let t = crate::matcore::block_compose(&grid)?;
    let pyth = partitioned_pythagoras(&t, n, tol)?;
    let u_adj = kron(&h, &CMat::identity(n)).adjoint();

    let mut tagged: Vec<(EulerClass, usize, CMat)> =
        pyth.terms.into_iter().enumerate().map(|(k, term)| (classes[k], k, u_adj.matmul(&term.witness))).collect();
    tagged.sort_by_key(|(class, k, _)| (*class, *k));
    let terms = tagged
        .into_iter()
        .map(|(class, _, w)| OrbitTerm::new(w, class.matrix(a, b, c).gram(), 0.25))
        .collect();
    let target = direct_sum(&[(a + b).gram(), (b + c).gram(), (c + a).gram(), CMat::zeros(n, n)]);
    OrbitCertificate::new(target, Relation::Equality, terms)
}

/// `|A+B+C|² + |A|² + |B|² + |C|²`.
pub(crate) fn euler_sum(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    let mut s = (&(a + b) + c).gram();
    s += &a.gram();
    s += &b.gram();
    s += &c.gram();
    s
}

/// `|A+B|² + |B+C|² + |C+A|²`.
pub(crate) fn pairwise_sum(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    let mut s = (a + b).gram();
    s += &(b + c).gram();
    s += &(c + a).gram();
    s
}

/// Decomposes `F·diag(D_k)·F*` (`F = F_m ⊗ I`), which has constant diagonal
/// block `(ΣD_k)/m`, and conjugates back by `F*`. `roots[k]² = D_k`.
fn fourier_orbit(roots: &[CMat], common: CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    let m = roots.len();
    let n = roots[0].rows();
    let f = kron(&fourier(m), &CMat::identity(n));
    let root = CMat::congruence(&f, &direct_sum(roots));
    let f_adj = f.adjoint();
    let weight = 1.0 / m as f64;
    let terms = isometries_from_root(&root, n, tol)?
        .into_iter()
        .map(|v| OrbitTerm::new(f_adj.matmul(&v), common.clone(), weight))
        .collect();
    let squares: Vec<CMat> = roots.iter().map(|r| r.matmul(r).symmetrized()).collect();
    OrbitCertificate::new(direct_sum(&squares), Relation::Equality, terms)
}

/// `|A+B|² ⊕ |B+C|² ⊕ |A+C|² = ⅓·Σ_k U_k·(|A+B+C|²+|A|²+|B|²+|C|²)·U_k*`
/// with three isometries.
pub fn euler_fourier3_orbit(a: &CMat, b: &CMat, c: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    same_square("euler_fourier3_orbit", &[a, b, c])?;
    let roots = [abs_modulus(&(a + b)), abs_modulus(&(b + c)), abs_modulus(&(a + c))];
    let mut cert = fourier_orbit(&roots, euler_sum(a, b, c), tol)?;
    cert.target = direct_sum(&[(a + b).gram(), (b + c).gram(), (a + c).gram()]);
    OrbitCertificate::new(cert.target, cert.relation, cert.terms)
}

/// `|A+B+C|² ⊕ |A|² ⊕ |B|² ⊕ |C|² = ¼·Σ_k U_k·(|A+B|²+|B+C|²+|A+C|²)·U_k*`
/// with four isometries.
pub fn euler_fourier4_orbit(a: &CMat, b: &CMat, c: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    same_square("euler_fourier4_orbit", &[a, b, c])?;
    let abc = &(a + b) + c;
    let roots = [abs_modulus(&abc), abs_modulus(a), abs_modulus(b), abs_modulus(c)];
    let mut cert = fourier_orbit(&roots, pairwise_sum(a, b, c), tol)?;
    cert.target = direct_sum(&[abc.gram(), a.gram(), b.gram(), c.gram()]);
    OrbitCertificate::new(cert.target, cert.relation, cert.terms)
}

/// `√(|A+B+C|²+|A|²+|B|²+|C|²) ≤ U|A+B|U* + V|B+C|V* + W|C+A|W*`.
///
/// The target is `|M|` for the stack `M = (A+B; B+C; C+A)`. Splitting `M`
/// as `(A+B; 0; 0) + (0; B+C; C+A)` and then `(B+C; 0) + (0; C+A)` gives two
/// rectangular Thompson steps; the second is conjugated by the first step's
/// witness for the tail.
pub fn euler_modulus_orbit(a: &CMat, b: &CMat, c: &CMat, tol: &Tolerances) -> Result<OrbitCertificate> {
    let n = same_square("euler_modulus_orbit", &[a, b, c])?;
    let (ab, bc, ca) = (a + b, b + c, c + a);
    let z = CMat::zeros(n, n);
    let first = thompson_rect(
        &vstack(&[ab.clone(), z.clone(), z.clone()])?,
        &vstack(&[z.clone(), bc.clone(), ca.clone()])?,
        tol,
    )?;
    let second = thompson_rect(&vstack(&[bc.clone(), z.clone()])?, &vstack(&[z, ca.clone()])?, tol)?;
    let v1 = &first.terms[1].witness;
    let terms = vec![
        OrbitTerm::new(first.terms[0].witness.clone(), abs_modulus(&ab), 1.0),
        OrbitTerm::new(v1.matmul(&second.terms[0].witness), abs_modulus(&bc), 1.0),
        OrbitTerm::new(v1.matmul(&second.terms[1].witness), abs_modulus(&ca), 1.0),
    ];
    OrbitCertificate::new(first.target, Relation::Domination, terms)
}
