use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every check in the workbench.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative Frobenius tolerance for equality of matrices.
    pub eq_tol: f64,
    /// Smallest singular value accepted as invertible.
    pub inv_tol: f64,
    /// Eigenvalue floor for positivity.
    pub psd_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: 1e-9,
            inv_tol: 1e-8,
            psd_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, inv_tol: f64, psd_tol: f64) -> Result<Self> {
        let tol = Self {
            eq_tol,
            inv_tol,
            psd_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eq_tol", self.eq_tol),
            ("inv_tol", self.inv_tol),
            ("psd_tol", self.psd_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.eq_tol >= 1.0 {
            return Err(Error::InvalidTolerance(format!(
                "eq_tol must be below 1, got {}",
                self.eq_tol
            )));
        }
        Ok(())
    }

    /// Relative comparison: `residual <= eq_tol * max(1, scale)`.
    pub fn close(&self, residual: f64, scale: f64) -> bool {
        residual <= self.eq_tol * scale.max(1.0)
    }
}
