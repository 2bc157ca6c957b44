use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Numerical tolerances and the RNG seed threaded through every checker and solver.
///
/// Values are stored as `f64` and converted to the working scalar on use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Horizontal-plane membership slack, scaled by `1 + |t| + |t0|`.
    pub plane_tol: f64,
    /// Finite-difference step, scaled by `1 + |g|`.
    pub fd_step: f64,
    /// Residual target for solvers and slack floor for inequality scans.
    pub conv_tol: f64,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            plane_tol: 1e-9,
            fd_step: 1e-5,
            conv_tol: 1e-10,
            seed: 0x5eed,
        }
    }
}

impl ToleranceConfig {
    /// Defaults widened to the precision of `S`; identical to [`Default`] for `f64`.
    pub fn for_scalar<S: Scalar>() -> Self {
        let eps = S::epsilon().to_f64_lossy();
        let ratio = (eps / f64::EPSILON).max(1.0);
        let d = Self::default();
        Self {
            plane_tol: d.plane_tol * ratio,
            fd_step: d.fd_step * ratio.cbrt(),
            conv_tol: d.conv_tol * ratio,
            seed: d.seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("plane_tol", self.plane_tol),
            ("fd_step", self.fd_step),
            ("conv_tol", self.conv_tol),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Overrides one field by name, as in `--tol conv_tol=1e-8`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parse = |name: &'static str| -> Result<f64> {
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidTolerance { name, value: f64::NAN })
        };
        match key.trim() {
            "plane_tol" => self.plane_tol = parse("plane_tol")?,
            "fd_step" => self.fd_step = parse("fd_step")?,
            "conv_tol" => self.conv_tol = parse("conv_tol")?,
            "seed" => {
                self.seed = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("seed `{value}` is not a u64")))?
            }
            other => return Err(Error::UnknownToleranceKey(other.to_string())),
        }
        self.validate()
    }

    pub(crate) fn plane<S: Scalar>(&self) -> S {
        S::lit(self.plane_tol)
    }

    pub(crate) fn fd<S: Scalar>(&self) -> S {
        S::lit(self.fd_step)
    }

    pub(crate) fn conv<S: Scalar>(&self) -> S {
        S::lit(self.conv_tol)
    }
}
