use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{akc_isometry, u113, weyl_singular_all, AkcData, Direction, Mixed, Triple};
use super::{IneqReport, IneqVerdict, InstanceDigest};
use crate::error::{Error, Result};
use crate::matcore::CMat;
use crate::sample::{Ensemble, TupleSample, DEFAULT_SEED};

pub const DEFAULT_P_GRID: [f64; 6] = [0.5, 1.2, 1.5, 2.0, 3.0, 4.0];
pub const DEFAULT_SIZES: [usize; 4] = [1, 2, 3, 5];

/// Matrices drawn per trial; families use a prefix.
const DRAW: usize = 4;

/// One proven inequality family together with its valid exponent range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    CmEulerPp,
    CmEulerQp,
    /// Co-isometry taking `(A+B+C, A, B, C)` to the pairwise sums, on a
    /// generic 4-tuple; forward only, `1 < p ≤ 2`.
    MixedU113Forward,
    /// Adjoint of the same matrix (an isometry) on a 3-tuple.
    MixedU113AdjForward,
    MixedU113AdjBackward,
    /// Pairwise-difference isometry on a 4-tuple.
    MixedAkcForward,
    MixedAkcBackward,
    Akc,
    AkcComplement,
    WeakEuler,
    EulerNorm,
    EulerWeyl,
    KyFanSums,
    KyFanClarkson,
    WeylQsym,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Akc,
        Family::AkcComplement,
        Family::CmEulerPp,
        Family::CmEulerQp,
        Family::EulerNorm,
        Family::EulerWeyl,
        Family::KyFanClarkson,
        Family::KyFanSums,
        Family::MixedAkcBackward,
        Family::MixedAkcForward,
        Family::MixedU113AdjBackward,
        Family::MixedU113AdjForward,
        Family::MixedU113Forward,
        Family::WeakEuler,
        Family::WeylQsym,
    ];

    /// The three-triple families driven by the `euler` suite.
    pub const EULER: [Family; 6] = [
        Family::CmEulerPp,
        Family::CmEulerQp,
        Family::WeakEuler,
        Family::EulerNorm,
        Family::EulerWeyl,
        Family::KyFanSums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::CmEulerPp => "cm_euler_pp",
            Family::CmEulerQp => "cm_euler_qp",
            Family::MixedU113Forward => "mixed_u113_forward",
            Family::MixedU113AdjForward => "mixed_u113_adj_forward",
            Family::MixedU113AdjBackward => "mixed_u113_adj_backward",
            Family::MixedAkcForward => "mixed_akc_forward",
            Family::MixedAkcBackward => "mixed_akc_backward",
            Family::Akc => "akc",
            Family::AkcComplement => "akc_complement",
            Family::WeakEuler => "weak_euler",
            Family::EulerNorm => "euler_norm",
            Family::EulerWeyl => "euler_weyl",
            Family::KyFanSums => "kyfan_sums",
            Family::KyFanClarkson => "kyfan_clarkson",
            Family::WeylQsym => "weyl_qsym",
        }
    }

    /// `false` for families without an exponent; they run once per trial.
    pub fn uses_p(self) -> bool {
        !matches!(self, Family::EulerWeyl | Family::KyFanSums)
    }

    pub fn accepts(self, p: f64) -> bool {
        match self {
            Family::CmEulerPp | Family::WeakEuler | Family::KyFanClarkson => p > 0.0,
            Family::MixedU113Forward => p > 1.0 && p <= 2.0,
            Family::CmEulerQp
            | Family::MixedU113AdjForward
            | Family::MixedU113AdjBackward
            | Family::MixedAkcForward
            | Family::MixedAkcBackward
            | Family::Akc
            | Family::AkcComplement => p > 1.0,
            Family::EulerNorm => p >= 1.0,
            Family::WeylQsym => p > 0.0 && p <= 2.0,
            Family::EulerWeyl | Family::KyFanSums => true,
        }
    }

    /// Reports for one instance at one exponent (`p` is ignored by
    /// exponent-free families).
    pub fn evaluate(self, m: &[CMat], p: f64) -> Result<Vec<IneqReport>> {
        let triple = || Triple::new(&m[0], &m[1], &m[2]);
        let mixed = |u: &CMat, z: &[CMat], dir| -> Result<Vec<IneqReport>> { Ok(vec![Mixed::new(u, z)?.report(p, dir)?]) };
        let q = p / (p - 1.0);
        match self {
            Family::CmEulerPp => Ok(vec![triple()?.cm_pp(p)]),
            Family::CmEulerQp => Ok(triple()?.cm_qp(p, q).to_vec()),
            Family::WeakEuler => Ok(vec![triple()?.weak(p)]),
            Family::EulerNorm => Ok(vec![triple()?.cor82(p)]),
            Family::EulerWeyl => Ok(triple()?.weyl_all()),
            Family::KyFanSums => Ok(triple()?.kyfan_sums()),
            Family::KyFanClarkson => triple()?.kyfan_clarkson(p),
            Family::MixedU113Forward => mixed(&u113(), &m[..4], Direction::Forward),
            Family::MixedU113AdjForward => mixed(&u113().adjoint(), &m[..3], Direction::Forward),
            Family::MixedU113AdjBackward => mixed(&u113().adjoint(), &m[..3], Direction::Backward),
            Family::MixedAkcForward => mixed(&akc_isometry(4), &m[..4], Direction::Forward),
            Family::MixedAkcBackward => mixed(&akc_isometry(4), &m[..4], Direction::Backward),
            Family::Akc => Ok(vec![AkcData::new(&m[..4])?.reports(p)?[0].clone()]),
            Family::AkcComplement => Ok(vec![AkcData::new(&m[..4])?.reports(p)?[1].clone()]),
            Family::WeylQsym => weyl_singular_all(&m[0], p),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: u64,
    /// Trial `t` uses size `sizes[t mod len]`.
    pub sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub ensemble: Ensemble,
    pub families: Vec<Family>,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: 1000,
            sizes: DEFAULT_SIZES.to_vec(),
            p_grid: DEFAULT_P_GRID.to_vec(),
            ensemble: Ensemble::Ginibre,
            families: Family::ALL.to_vec(),
            jobs: None,
        }
    }
}

/// Aggregate over all reports of one family at one exponent and size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: Family,
    pub p: Option<f64>,
    pub n: usize,
    pub trials: u64,
    pub reports: u64,
    pub min_margin: f64,
    pub min_rel_margin: f64,
    pub max_ratio: f64,
    pub holds: u64,
    pub equality: u64,
    pub violated: u64,
    /// Smallest relative margin; earliest trial on ties.
    pub worst: IneqReport,
}

impl FamilySummary {
    fn start(family: Family, p: Option<f64>, r: &IneqReport) -> Self {
        Self {
            family,
            p,
            n: r.instance.n,
            trials: 0,
            reports: 0,
            min_margin: f64::INFINITY,
            min_rel_margin: f64::INFINITY,
            max_ratio: f64::NEG_INFINITY,
            holds: 0,
            equality: 0,
            violated: 0,
            worst: r.clone(),
        }
    }

    fn add(&mut self, r: &IneqReport) {
        self.reports += 1;
        self.min_margin = self.min_margin.min(r.margin);
        self.max_ratio = self.max_ratio.max(r.ratio);
        if r.rel_margin() < self.min_rel_margin {
            self.min_rel_margin = r.rel_margin();
            self.worst = r.clone();
        }
        match r.verdict {
            IneqVerdict::Holds => self.holds += 1,
            IneqVerdict::Equality => self.equality += 1,
            IneqVerdict::Violated => self.violated += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub trials: u64,
    pub ensemble: Ensemble,
    pub rows: Vec<FamilySummary>,
}

impl SweepSummary {
    pub fn violations(&self) -> u64 {
        self.rows.iter().map(|r| r.violated).sum()
    }

    pub fn reports(&self) -> u64 {
        self.rows.iter().map(|r| r.reports).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fmt = |e: csv::Error| Error::Format(e.to_string());
        w.write_record([
            "name", "p", "n", "trials", "reports", "min_margin", "max_ratio", "holds", "equality", "violated",
        ])
        .map_err(fmt)?;
        for r in &self.rows {
            w.write_record([
                r.family.name().to_string(),
                r.p.map_or(String::new(), |p| p.to_string()),
                r.n.to_string(),
                r.trials.to_string(),
                r.reports.to_string(),
                format!("{:e}", r.min_margin),
                format!("{:e}", r.max_ratio),
                r.holds.to_string(),
                r.equality.to_string(),
                r.violated.to_string(),
            ])
            .map_err(fmt)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.sizes.is_empty() || cfg.sizes.contains(&0) {
        return Err(Error::Parameter("sizes must be a non-empty list of positive dimensions".into()));
    }
    if cfg.p_grid.iter().any(|p| !(*p > 0.0) || p.is_nan()) {
        return Err(Error::Parameter("every exponent in the grid must be > 0".into()));
    }
    Ok(())
}

/// Runs every configured family over `trials` seeded instances.
///
/// Families run in name order and trials in index order, so the report
/// stream written to `sink` (one JSON object per line) is sorted by
/// `(name, trial)` and identical for any thread count.
pub fn run_sweep(cfg: &SweepConfig, sink: Option<&mut (dyn Write + Send)>) -> Result<SweepSummary> {
    validate(cfg)?;
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?
            .install(|| sweep_inner(cfg, sink)),
        None => sweep_inner(cfg, sink),
    }
}

/// Trials per parallel batch; bounds the reports held in memory.
const BATCH: u64 = 512;

fn sweep_inner(cfg: &SweepConfig, mut sink: Option<&mut (dyn Write + Send)>) -> Result<SweepSummary> {
    let mut families = cfg.families.clone();
    families.sort_by_key(|f| f.name());
    families.dedup();
    let mut rows: Vec<FamilySummary> = Vec::new();
    for family in families {
        let grid: Vec<Option<f64>> = if family.uses_p() {
            cfg.p_grid.iter().copied().filter(|&p| family.accepts(p)).map(Some).collect()
        } else {
            vec![None]
        };
        if grid.is_empty() {
            continue;
        }
        // keyed by (grid index, size index)
        let mut acc: Vec<Option<FamilySummary>> = vec![None; grid.len() * cfg.sizes.len()];
        let mut start = 0;
        while start < cfg.trials {
            let end = (start + BATCH).min(cfg.trials);
            let batch: Vec<Result<Vec<(usize, IneqReport)>>> = (start..end)
                .into_par_iter()
                .map(|trial| {
                    let n = cfg.sizes[(trial % cfg.sizes.len() as u64) as usize];
                    let tuple = TupleSample::draw(cfg.ensemble, cfg.seed, trial, DRAW, n);
                    let mut out = Vec::new();
                    for (gi, p) in grid.iter().enumerate() {
                        for mut r in family.evaluate(&tuple.matrices, p.unwrap_or(2.0))? {
                            r.name = family.name().into();
                            r.instance = InstanceDigest {
                                n,
                                seed: Some(cfg.seed),
                                trial: Some(trial),
                                ensemble: Some(cfg.ensemble),
                            };
                            out.push((gi, r));
                        }
                    }
                    Ok(out)
                })
                .collect();
            for (offset, reps) in batch.into_iter().enumerate() {
                let trial = start + offset as u64;
                let si = (trial % cfg.sizes.len() as u64) as usize;
                let mut seen = vec![false; grid.len()];
                for (gi, r) in reps? {
                    if let Some(w) = sink.as_deref_mut() {
                        writeln!(w, "{}", r.to_json()).map_err(|e| Error::Format(e.to_string()))?;
                    }
                    let slot = acc[gi * cfg.sizes.len() + si].get_or_insert_with(|| FamilySummary::start(family, grid[gi], &r));
                    if !seen[gi] {
                        slot.trials += 1;
                        seen[gi] = true;
                    }
                    slot.add(&r);
                }
            }
            start = end;
        }
        rows.extend(acc.into_iter().flatten());
    }
    rows.sort_by(|a, b| {
        (a.family.name(), a.n)
            .cmp(&(b.family.name(), b.n))
            .then(a.p.unwrap_or(0.0).total_cmp(&b.p.unwrap_or(0.0)))
    });
    Ok(SweepSummary { seed: cfg.seed, trials: cfg.trials, ensemble: cfg.ensemble, rows })
}
