use super::cmat::C64;

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for q in basis {
        let h = dot(q, v);
        for (x, y) in v.iter_mut().zip(q) {
            *x -= h * y;
        }
    }
}

/// Residual of `v` after removing its components along `basis`, using
/// modified Gram–Schmidt with one re-orthogonalization pass whenever the
/// norm drops below half of its value before projection.
pub(crate) fn residual(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut r = v.to_vec();
    let before = norm(&r);
    project_out(&mut r, basis);
    if norm(&r) < 0.5 * before {
        project_out(&mut r, basis);
    }
    r
}

/// Extends the orthonormal `basis` by up to `count` vectors drawn from
/// `candidates`, choosing at each step the candidate with the largest residual
/// (column pivoting). Candidates whose residual falls below `min_norm` are
/// never used. Returns how many vectors were added.
pub(crate) fn extend_pivoted(
    basis: &mut Vec<Vec<C64>>,
    candidates: &[Vec<C64>],
    count: usize,
    min_norm: f64,
) -> usize {
    let mut used = vec![false; candidates.len()];
    let mut added = 0;
    while added < count {
        let mut best: Option<(usize, Vec<C64>, f64)> = None;
        for (idx, cand) in candidates.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let r = residual(cand, basis);
            let nr = norm(&r);
            if best.as_ref().is_none_or(|b| nr > b.2) {
                best = Some((idx, r, nr));
            }
        }
        let Some((idx, r, nr)) = best else { break };
        if nr <= min_norm {
            break;
        }
        used[idx] = true;
        let mut q: Vec<C64> = r.iter().map(|z| z / nr).collect();
        // one more pass keeps the new column orthogonal to working precision
        project_out(&mut q, basis);
        let nq = norm(&q);
        q.iter_mut().for_each(|z| *z /= nq);
        basis.push(q);
        added += 1;
    }
    added
}

/// Completes `basis` (orthonormal vectors in `C^dim`) with standard basis
/// candidates until it holds `total` vectors.
pub(crate) fn complete_with_standard(basis: &mut Vec<Vec<C64>>, dim: usize, total: usize) {
    if basis.len() >= total {
        return;
    }
    let cands: Vec<Vec<C64>> = (0..dim)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[i] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let need = total - basis.len();
    let got = extend_pivoted(basis, &cands, need, 0.0);
    debug_assert_eq!(got, need, "standard basis always completes");
}
