use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global numeric policy shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed negative eigenvalue, relative to `max(1, ‖·‖)`, in psd tests.
    pub psd_slack: f64,
    /// Allowed `‖W*W − I‖` for isometries.
    pub isometry_defect: f64,
    /// Allowed reconstruction / equality residual, relative to `max(1, ‖·‖)`.
    pub recon: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd_slack: 1e-9,
            isometry_defect: 1e-10,
            recon: 1e-9,
            rank_rel: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("psd_slack", self.psd_slack),
            ("isometry_defect", self.isometry_defect),
            ("recon", self.recon),
            ("rank_rel", self.rank_rel),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!("tolerance {name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    /// Numerical rank of a nonincreasing list of singular values of a
    /// `rows × cols` matrix.
    pub fn rank(&self, values: &[f64], rows: usize, cols: usize) -> usize {
        let top = values.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return 0;
        }
        let cut = self.rank_rel * top * rows.max(cols) as f64;
        values.iter().take_while(|&&v| v > cut).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let t = Tolerances::default();
        t.validate().unwrap();
        assert_eq!(t.psd_slack, 1e-9);
        assert_eq!(t.rank_rel, 1e-12);
    }

    #[test]
    fn negative_tolerance_rejected() {
        let t = Tolerances { recon: -1.0, ..Default::default() };
        assert!(matches!(t.validate(), Err(Error::Parameter(_))));
        let t = Tolerances { psd_slack: f64::NAN, ..Default::default() };
        assert!(t.validate().is_err());
    }

    #[test]
    fn rank_rule() {
        let t = Tolerances::default();
        assert_eq!(t.rank(&[1.0, 1e-3, 1e-13], 3, 3), 2);
        assert_eq!(t.rank(&[0.0, 0.0], 2, 2), 0);
        assert_eq!(t.rank(&[], 2, 2), 0);
    }
}
