use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds for the float backend. The exact backend ignores them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Singular values below `rank_rel_tol · σ_max` count as zero.
    pub rank_rel_tol: f64,
    /// Eigenvalue clustering and invariant comparison threshold.
    pub eig_tol: f64,
    /// Largest admissible change of the flow Hamiltonian in one step.
    pub flow_drift_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-9,
            eig_tol: 1e-9,
            flow_drift_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, eig_tol: f64, flow_drift_tol: f64) -> Result<Self> {
        let cfg = Self {
            rank_rel_tol,
            eig_tol,
            flow_drift_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("eig_tol", self.eig_tol),
            ("flow_drift_tol", self.flow_drift_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}
