use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::Triple;
use crate::error::{Error, Result};
use crate::matcore::{CMat, C64};
use crate::sample::{Ensemble, TupleSample, DEFAULT_SEED};

/// Band beyond the conjectured constant that counts as a violation.
pub const VIOLATION_BAND: f64 = 1e-9;

pub const EVIDENCE_NOTE: &str = "evidence-grade: sampled and locally optimized ratios only; nothing here proves the bound";

/// `(3^{p−1} + 1) / 2^p`, attained by `A = B = C`.
pub fn conjecture_constant(p: f64) -> f64 {
    (3f64.powf(p - 1.0) + 1.0) / 2f64.powf(p)
}

/// Rank-one triple `A, B, C = −u_k u_kᵀ` (`k = 1, 2, 3`) from the four
/// equiangular unit vectors `u_0 = e₁`, `u_k = (1/√3, √(2/3)·ω^k)` of `C²`
/// (`|⟨u_j, u_k⟩|² = 1/3`). `A+B+C = −e₁e₁ᵀ` and every pairwise sum has both
/// singular values `√(2/3)`, so the ratio is exactly `(3/2)^{p/2−1}`.
pub fn simplex_triple() -> (CMat, CMat, CMat) {
    let r = (2.0f64 / 3.0).sqrt();
    let s = 1.0 / 3f64.sqrt();
    let member = |k: u32| {
        let w = C64::from_polar(r, 2.0 * std::f64::consts::PI * f64::from(k) / 3.0);
        let u = [C64::new(s, 0.0), w];
        CMat::from_fn(2, 2, |i, j| -(u[i] * u[j]))
    };
    (member(1), member(2), member(3))
}

/// `(3/2)^{p/2−1}`, the ratio of [`simplex_triple`].
pub fn simplex_ratio(p: f64) -> f64 {
    1.5f64.powf(p / 2.0 - 1.0)
}

/// `(‖A+B+C‖_p^p + ‖A‖_p^p + ‖B‖_p^p + ‖C‖_p^p) / (‖A+B‖_p^p + ‖B+C‖_p^p + ‖C+A‖_p^p)`;
/// NaN for the zero triple.
pub fn conjecture_ratio(a: &CMat, b: &CMat, c: &CMat, p: f64) -> Result<f64> {
    let t = Triple::new(a, b, c)?;
    Ok(t.y_pp(p) / t.x_pp(p))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExploreConfig {
    pub p: f64,
    pub trials: u64,
    pub ensemble: Ensemble,
    pub seed: u64,
    /// Trial `t` uses size `sizes[t mod len]`.
    pub sizes: Vec<usize>,
    pub climb_steps: usize,
    pub climb_step: f64,
    pub climb_decay: f64,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl ExploreConfig {
    pub fn new(p: f64, trials: u64) -> Self {
        Self {
            p,
            trials,
            ensemble: Ensemble::Ginibre,
            seed: DEFAULT_SEED,
            sizes: vec![2],
            climb_steps: 50,
            climb_step: 0.1,
            climb_decay: 0.9,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreSummary {
    pub p: f64,
    pub constant: f64,
    /// `max` for `p ≥ 2`, `min` below: the side the conjecture bounds.
    pub objective: String,
    pub trials: u64,
    pub ensemble: Ensemble,
    pub seed: u64,
    /// Extremal ratio over the sampled triples.
    pub sampled_ratio: f64,
    pub extremal_trial: u64,
    pub extremal_n: usize,
    /// Extremal ratio after the local search started from that triple.
    pub climbed_ratio: f64,
    /// The most extreme of the sampled, climbed and simplex ratios.
    pub extremal_ratio: f64,
    /// `constant − extremal` for `max`, `extremal − constant` for `min`;
    /// negative beyond the band flags a violation.
    pub gap: f64,
    /// Ratio at `A = B = C`, and its distance to the constant.
    pub equal_triple_ratio: f64,
    pub equal_triple_deviation: f64,
    /// Ratio of the rank-one [`simplex_triple`].
    pub simplex_ratio: f64,
    pub violation: bool,
    pub note: String,
}

impl ExploreSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

fn maximize(p: f64) -> bool {
    p >= 2.0
}

/// Larger is better in the explorer's objective.
fn score(ratio: f64, p: f64) -> f64 {
    if !ratio.is_finite() {
        f64::NEG_INFINITY
    } else if maximize(p) {
        ratio
    } else {
        -ratio
    }
}

/// Samples triples, keeps the one pushing hardest against the conjectured
/// constant, then runs a coordinate search on it. Reports evidence only.
pub fn conjecture_explore(cfg: &ExploreConfig) -> Result<ExploreSummary> {
    if !(cfg.p > 0.0 && cfg.p.is_finite()) {
        return Err(Error::Parameter(format!("p must be a finite positive number, got {}", cfg.p)));
    }
    if cfg.trials == 0 || cfg.sizes.is_empty() || cfg.sizes.contains(&0) {
        return Err(Error::Parameter("need trials ≥ 1 and positive sizes".into()));
    }
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?
            .install(|| explore_inner(cfg)),
        None => explore_inner(cfg),
    }
}

fn draw(cfg: &ExploreConfig, trial: u64) -> Vec<CMat> {
    let n = cfg.sizes[(trial % cfg.sizes.len() as u64) as usize];
    TupleSample::draw(cfg.ensemble, cfg.seed, trial, 3, n).matrices
}

fn explore_inner(cfg: &ExploreConfig) -> Result<ExploreSummary> {
    let p = cfg.p;
    let ratios: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let m = draw(cfg, t);
            conjecture_ratio(&m[0], &m[1], &m[2], p)
        })
        .collect::<Result<_>>()?;
    // strict improvement keeps the earliest trial on ties
    let mut best = 0usize;
    for (i, &r) in ratios.iter().enumerate() {
        if score(r, p) > score(ratios[best], p) {
            best = i;
        }
    }
    let start = draw(cfg, best as u64);
    let sampled = ratios[best];
    let climbed = climb(&start, cfg)?;
    let (sa, sb, sc) = simplex_triple();
    let simplex = conjecture_ratio(&sa, &sb, &sc, p)?;
    let extremal = [sampled, climbed, simplex]
        .into_iter()
        .fold(sampled, |best, r| if score(r, p) > score(best, p) { r } else { best });

    let k = conjecture_constant(p);
    let gap = if maximize(p) { k - extremal } else { extremal - k };
    let a = &start[0];
    let equal = conjecture_ratio(a, a, a, p)?;
    Ok(ExploreSummary {
        p,
        constant: k,
        objective: if maximize(p) { "max" } else { "min" }.into(),
        trials: cfg.trials,
        ensemble: cfg.ensemble,
        seed: cfg.seed,
        sampled_ratio: sampled,
        extremal_trial: best as u64,
        extremal_n: start[0].rows(),
        climbed_ratio: climbed,
        extremal_ratio: extremal,
        gap,
        equal_triple_ratio: equal,
        equal_triple_deviation: (equal - k).abs(),
        simplex_ratio: simplex,
        violation: gap < -VIOLATION_BAND,
        note: EVIDENCE_NOTE.into(),
    })
}

/// Coordinate search over the real and imaginary parts of every entry; step
/// `h·decay^k` at sweep `k`, accepting any strict improvement.
fn climb(start: &[CMat], cfg: &ExploreConfig) -> Result<f64> {
    let p = cfg.p;
    let mut m = start.to_vec();
    let eval = |m: &[CMat]| conjecture_ratio(&m[0], &m[1], &m[2], p);
    let mut cur = eval(&m)?;
    let (rows, cols) = m[0].shape();
    let mut h = cfg.climb_step;
    for _ in 0..cfg.climb_steps {
        for which in 0..3 {
            for i in 0..rows {
                for j in 0..cols {
                    for dir in [C64::new(h, 0.0), C64::new(-h, 0.0), C64::new(0.0, h), C64::new(0.0, -h)] {
                        let old = m[which][(i, j)];
                        m[which][(i, j)] = old + dir;
                        let r = eval(&m)?;
                        if score(r, p) > score(cur, p) {
                            cur = r;
                        } else {
                            m[which][(i, j)] = old;
                        }
                    }
                }
            }
        }
        h *= cfg.climb_decay;
    }
    Ok(cur)
}
