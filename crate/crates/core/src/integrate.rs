//! Fixed-step discrete schemes: the semi-implicit Euler step used by the
//! relaxation iteration, classical RK4, the RK4 step specialized to the
//! linear relaxation right-hand side, and the direct baselines (explicit
//! Euler and classical RK4 applied to the nonlinear removals equation).

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::model::{g_sir, SirParams};

/// One semi-implicit Euler step of R' + M R = forcing:
/// the M R term is taken at the new time level and solved exactly by
/// division, R^p = (R^{p-1} + dt * forcing) / (1 + dt * M).
pub fn euler_relax_step(r_prev: f64, forcing: f64, dt: f64, m: f64) -> f64 {
    (r_prev + dt * forcing) / (1.0 + dt * m)
}

/// One classical RK4 step for R'(t) = f(t, R).
pub fn rk4_step<F>(f: F, t_prev: f64, r_prev: f64, dt: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let k1 = dt * f(t_prev, r_prev);
    let k2 = dt * f(t_prev + dt / 2.0, r_prev + k1 / 2.0);
    let k3 = dt * f(t_prev + dt / 2.0, r_prev + k2 / 2.0);
    let k4 = dt * f(t_prev + dt, r_prev + k3);
    r_prev + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
}

/// One RK4 step for the linear relaxation equation R' = -M R + b(t), with
/// the previous-iterate forcing b sampled at the step endpoints and at the
/// midpoint. The two half-step stages share the same midpoint forcing,
/// which is a linear interpolation of the previous iterate's mesh values.
pub fn rk4_relax_step(
    r_prev: f64,
    m: f64,
    b_prev: f64,
    b_mid: f64,
    b_next: f64,
    dt: f64,
) -> f64 {
    let k1 = dt * (-m * r_prev + b_prev);
    let k2 = dt * (-m * (r_prev + k1 / 2.0) + b_mid);
    let k3 = dt * (-m * (r_prev + k2 / 2.0) + b_mid);
    let k4 = dt * (-m * (r_prev + k3) + b_next);
    r_prev + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
}

/// Explicit Euler applied directly to the nonlinear removals equation
/// R' = gamma N - g(R), for the classic SIR model.
pub fn direct_euler_solve(params: &SirParams, grid: &TimeGrid) -> Result<Vec<f64>> {
    let dt = grid.dt();
    let c = params.gamma * params.total;
    let mut r = vec![0.0; grid.len()];
    for p in 1..grid.len() {
        r[p] = r[p - 1] + dt * (c - g_sir(r[p - 1], params));
        if !r[p].is_finite() {
            return Err(Error::NonFinite { k: 0, p });
        }
    }
    Ok(r)
}

/// Classical RK4 applied directly to the nonlinear removals equation,
/// for the classic SIR model.
pub fn direct_rk4_solve(params: &SirParams, grid: &TimeGrid) -> Result<Vec<f64>> {
    let dt = grid.dt();
    let rhs = |_t: f64, r: f64| {
        params.gamma * (params.total - params.n * (-params.mu * r).exp() - r)
    };
    let mut r = vec![0.0; grid.len()];
    for p in 1..grid.len() {
        r[p] = rk4_step(rhs, grid.point(p - 1), r[p - 1], dt);
        if !r[p].is_finite() {
            return Err(Error::NonFinite { k: 0, p });
        }
    }
    Ok(r)
}
