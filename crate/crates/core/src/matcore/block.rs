use std::f64::consts::PI;

use super::cmat::{CMat, C64};
use crate::error::{Error, Result};

/// Assembles a block grid. Every block in a grid row must share a row count,
/// every block in a grid column a column count.
pub fn block_compose(grid: &[Vec<CMat>]) -> Result<CMat> {
    let nr = grid.len();
    if nr == 0 || grid[0].is_empty() {
        return Err(Error::Dimension("empty block grid".into()));
    }
    let nc = grid[0].len();
    if grid.iter().any(|row| row.len() != nc) {
        return Err(Error::Dimension("ragged block grid".into()));
    }
    let heights: Vec<usize> = grid.iter().map(|row| row[0].rows()).collect();
    let widths: Vec<usize> = grid[0].iter().map(|b| b.cols()).collect();
    for (i, row) in grid.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if b.rows() != heights[i] || b.cols() != widths[j] {
                return Err(Error::Dimension(format!(
                    "block ({i},{j}) is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    heights[i],
                    widths[j]
                )));
            }
        }
    }
    let mut out = CMat::zeros(heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (i, row) in grid.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            out.set_submatrix(r0, c0, b);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    Ok(out)
}

/// The `(i, j)` block of size `n × n` (0-based block indices).
pub fn block_extract(x: &CMat, i: usize, j: usize, n: usize) -> Result<CMat> {
    if n == 0 || (i + 1) * n > x.rows() || (j + 1) * n > x.cols() {
        return Err(Error::Dimension(format!("block ({i},{j}) of size {n} outside {}x{}", x.rows(), x.cols())));
    }
    Ok(x.submatrix(i * n, j * n, n, n))
}

pub fn direct_sum(blocks: &[CMat]) -> CMat {
    let rows = blocks.iter().map(CMat::rows).sum();
    let cols = blocks.iter().map(CMat::cols).sum();
    let mut out = CMat::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.set_submatrix(r0, c0, b);
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// Vertical concatenation.
pub fn vstack(blocks: &[CMat]) -> Result<CMat> {
    let grid: Vec<Vec<CMat>> = blocks.iter().map(|b| vec![b.clone()]).collect();
    block_compose(&grid)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = b.shape();
    CMat::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Normalized `m`-point Fourier matrix, entries `ω^{rs}/√m` with `ω = e^{2πi/m}`.
pub fn fourier(m: usize) -> CMat {
    let norm = 1.0 / (m as f64).sqrt();
    CMat::from_fn(m, m, |r, s| {
        // quarter turns are set exactly so that e.g. ω^2 = -1 for m = 4
        let k = (r * s) % m;
        if (4 * k).is_multiple_of(m) {
            exact_root(4 * k / m) * norm
        } else {
            C64::from_polar(norm, 2.0 * PI * k as f64 / m as f64)
        }
    })
}

/// `i^q` for q in 0..4.
fn exact_root(q: usize) -> C64 {
    match q {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// The real 4×4 Hadamard matrix used for the sixteen-term Euler orbit.
pub fn hadamard4() -> CMat {
    CMat::from_real_rows(&[
        &[1.0, 1.0, 1.0, 1.0],
        &[1.0, -1.0, 1.0, -1.0],
        &[1.0, 1.0, -1.0, -1.0],
        &[-1.0, 1.0, 1.0, -1.0],
    ])
    .scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::spectral::singular_values;
    use crate::sample::{ginibre, StreamRng};

    fn unitary_defect(u: &CMat) -> f64 {
        (&u.gram() - &CMat::identity(u.cols())).max_abs()
    }

    #[test]
    fn direct_sum_merges_spectra() {
        let mut rng = StreamRng::new(1, 0);
        let a = ginibre(&mut rng, 2, 2);
        let b = ginibre(&mut rng, 3, 3);
        let mut want: Vec<f64> = singular_values(&a).into_iter().chain(singular_values(&b)).collect();
        want.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let got = singular_values(&direct_sum(&[a, b]));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn fourier_kron_identity_is_unitary() {
        let f4 = fourier(4);
        assert_eq!(f4[(1, 1)], C64::new(0.0, 0.5));
        assert_eq!(f4[(2, 2)], C64::new(0.5, 0.0));
        assert!(unitary_defect(&kron(&f4, &CMat::identity(2))) < 1e-15);
        assert!(unitary_defect(&fourier(3)) < 1e-15);
        assert!(unitary_defect(&hadamard4()) == 0.0);
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = StreamRng::new(2, 0);
        let a = ginibre(&mut rng, 2, 3);
        let b = ginibre(&mut rng, 2, 2);
        let c = ginibre(&mut rng, 3, 2);
        let d = ginibre(&mut rng, 2, 1);
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        assert!((&lhs - &rhs).max_abs() < 1e-13);
    }

    #[test]
    fn compose_extract_round_trip() {
        let mut rng = StreamRng::new(3, 0);
        let grid: Vec<Vec<CMat>> = (0..3).map(|_| (0..2).map(|_| ginibre(&mut rng, 2, 2)).collect()).collect();
        let x = block_compose(&grid).unwrap();
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                assert_eq!(&block_extract(&x, i, j, 2).unwrap(), b);
            }
        }
        assert!(block_extract(&x, 3, 0, 2).is_err());
    }

    #[test]
    fn nonconformal_grid_rejected() {
        let grid = vec![vec![CMat::zeros(2, 2), CMat::zeros(2, 1)], vec![CMat::zeros(1, 2), CMat::zeros(2, 1)]];
        assert!(matches!(block_compose(&grid), Err(Error::Dimension(_))));
        assert!(block_compose(&[]).is_err());
    }
}
