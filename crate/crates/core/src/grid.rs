//! Uniform time mesh.

use crate::error::{Error, Result};

/// Uniform mesh with P steps over [0, T]: t_p = p * dt, dt = T / P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    steps: usize,
    horizon: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(steps: usize, horizon: f64) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidParams {
                field: "P",
                reason: format!("must be >= 2, got {steps}"),
            });
        }
        if horizon.is_nan() || horizon <= 0.0 {
            return Err(Error::InvalidParams {
                field: "T",
                reason: format!("must be > 0, got {horizon}"),
            });
        }
        Ok(Self { steps, horizon, dt: horizon / steps as f64 })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of mesh points, P + 1.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// t_p; the final point is pinned to T exactly.
    pub fn point(&self, p: usize) -> f64 {
        debug_assert!(p <= self.steps);
        if p == self.steps {
            self.horizon
        } else {
            p as f64 * self.dt
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|p| self.point(p))
    }
}
