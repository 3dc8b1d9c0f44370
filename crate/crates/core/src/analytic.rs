//! Closed-form hyperbolic-tangent approximation of the removals curve for
//! the classic SIR model, obtained by truncating the exponential in the
//! removals equation at second order.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::model::SirParams;

/// Precomputed constants of the tanh approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    /// eta = sqrt(2 n mu^2 (N - n) + (n mu - 1)^2).
    pub eta: f64,
    /// Phase shift psi = atanh((n mu - 1) / eta), making R(0) = 0.
    pub psi: f64,
    pub source: SirParams,
}

/// Derive the tanh-approximation constants from SIR parameters.
pub fn analytic_params(p: &SirParams) -> Result<AnalyticParams> {
    let nmu = p.n * p.mu;
    let eta = (2.0 * p.n * p.mu * p.mu * (p.total - p.n) + (nmu - 1.0).powi(2)).sqrt();
    let arg = (nmu - 1.0) / eta;
    if arg.is_nan() || arg.abs() >= 1.0 {
        return Err(Error::InvalidParams {
            field: "n",
            reason: format!("tanh phase undefined: |(n mu - 1)/eta| = {} >= 1", arg.abs()),
        });
    }
    Ok(AnalyticParams { eta, psi: arg.atanh(), source: *p })
}

/// R(t) = [n mu - 1 + eta * tanh(gamma eta t / 2 - psi)] / (n mu^2).
pub fn analytic_removals(t: f64, ap: &AnalyticParams) -> f64 {
    let p = &ap.source;
    let nmu = p.n * p.mu;
    (nmu - 1.0 + ap.eta * (p.gamma * ap.eta * t / 2.0 - ap.psi).tanh()) / (p.n * p.mu * p.mu)
}

/// Sample the closed form on a mesh.
pub fn analytic_solve(ap: &AnalyticParams, grid: &TimeGrid) -> Vec<f64> {
    grid.points().map(|t| analytic_removals(t, ap)).collect()
}
