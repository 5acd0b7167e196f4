//! Property harness for Clarkson–McCarthy type inequalities on Euler's
//! identity and their mixed-norm, Ky Fan and singular-value relatives.
//!
//! Every check produces an [`IneqReport`] oriented so that the proven
//! statement reads `lhs ≤ rhs`; `reversed` records that the displayed form of
//! the inequality flips in the current exponent regime.

mod explore;
mod families;
mod sweep;

pub use explore::{
    conjecture_constant, conjecture_explore, conjecture_ratio, simplex_ratio, simplex_triple, ExploreConfig, ExploreSummary, EVIDENCE_NOTE, VIOLATION_BAND,
};
pub use families::{
    akc_check, akc_isometry, cm_euler_pp, cm_euler_qp, cor82_norm_check, euler_identity_residual, euler_weyl_all,
    euler_weyl_checks, kyfan_checks, mixed_norm_check, u113, weak_euler_bound, weyl_singular_all,
    weyl_singular_checks, Direction,
};
pub use sweep::{run_sweep, Family, FamilySummary, SweepConfig, SweepSummary, DEFAULT_P_GRID, DEFAULT_SIZES};

use serde::{Deserialize, Serialize};

use crate::sample::Ensemble;

/// Relative width of the equality band: `|margin| ≤ EQ_REL·max(1, rhs)`.
pub const EQ_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IneqVerdict {
    Holds,
    Equality,
    Violated,
}

/// Where an instance came from; enough to regenerate it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceDigest {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<Ensemble>,
}

impl InstanceDigest {
    pub fn of_size(n: usize) -> Self {
        Self { n, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub name: String,
    /// `None` for exponent-free statements.
    pub p: Option<f64>,
    /// Index label such as `m=2` or `j=2,k=0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// `lhs / rhs`; 0 when both vanish.
    pub ratio: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub verdict: IneqVerdict,
    pub reversed: bool,
    pub instance: InstanceDigest,
}

impl IneqReport {
    pub(crate) fn new(name: &str, p: Option<f64>, lhs: f64, rhs: f64, constant: f64, reversed: bool, n: usize) -> Self {
        let margin = rhs - lhs;
        let band = EQ_REL * rhs.abs().max(1.0);
        let verdict = if margin.abs() <= band {
            IneqVerdict::Equality
        } else if margin < -band {
            IneqVerdict::Violated
        } else {
            IneqVerdict::Holds
        };
        let ratio = if rhs == 0.0 {
            if lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lhs / rhs
        };
        Self {
            name: name.into(),
            p,
            label: None,
            lhs,
            rhs,
            constant,
            ratio,
            margin,
            verdict,
            reversed,
            instance: InstanceDigest::of_size(n),
        }
    }

    pub(crate) fn labeled(mut self, label: String) -> Self {
        self.label = Some(label);
        self
    }

    /// Builds a report for `small ≤ big` in the regime where it holds, where
    /// the displayed form is `first ≤ second` for `forward` and reversed
    /// otherwise.
    pub(crate) fn oriented(
        name: &str,
        p: Option<f64>,
        first: f64,
        second: f64,
        constant: f64,
        forward: bool,
        n: usize,
    ) -> Self {
        if forward {
            Self::new(name, p, first, second, constant, false, n)
        } else {
            Self::new(name, p, second, first, constant, true, n)
        }
    }

    /// `margin / max(1, rhs)`, the scale-free margin used to rank instances.
    pub fn rel_margin(&self) -> f64 {
        self.margin / self.rhs.abs().max(1.0)
    }

    pub fn violated(&self) -> bool {
        self.verdict == IneqVerdict::Violated
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
