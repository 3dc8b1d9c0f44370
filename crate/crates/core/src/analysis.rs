//! End-to-end solution drivers: method dispatch over a shared removals
//! trajectory, reconstruction of the remaining compartments, peak and
//! conservation reporting, reference trajectories for error studies, and
//! empirical convergence-order estimation.

use crate::analytic::{analytic_params, analytic_solve};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::integrate::{direct_euler_solve, direct_rk4_solve};
use crate::model::{
    deceased_from_removals, infectives_from_conservation, susceptibles_from_removals, ModelSpec,
};
use crate::relax::{relax_solve, RelaxBackend, RelaxationConfig};

/// Solution methods exposed to callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Relaxation iteration marched with semi-implicit Euler.
    EulerRelax,
    /// Relaxation iteration marched with RK4 on each linear iterate.
    Rk4Relax,
    /// Explicit Euler on the nonlinear removals equation (SIR only).
    EulerDirect,
    /// Classical RK4 on the nonlinear removals equation (SIR only).
    Rk4Direct,
    /// Hyperbolic-tangent closed form (SIR only).
    Analytic,
    /// Regular linearization: the relaxation iteration with M = 0.
    Linearization,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::EulerRelax => "euler_relax",
            Method::Rk4Relax => "rk4_relax",
            Method::EulerDirect => "euler_direct",
            Method::Rk4Direct => "rk4_direct",
            Method::Analytic => "analytic",
            Method::Linearization => "linearization",
        }
    }

    /// Whether the method consumes the relaxation parameters M and K.
    pub fn is_iterative(&self) -> bool {
        matches!(
            self,
            Method::EulerRelax | Method::Rk4Relax | Method::Linearization
        )
    }
}

/// Default iteration count when a caller leaves K unset.
pub const DEFAULT_ITERATIONS: usize = 50;

/// Compute the removals trajectory of `method` on `grid`.
///
/// For the background-mortality variant the returned values are the
/// transformed removals; [`reconstruct`] undoes the transformation. The
/// direct and analytic baselines are defined for the classic SIR model only.
pub fn solve_removals(
    model: &ModelSpec,
    method: Method,
    grid: &TimeGrid,
    m: Option<f64>,
    iterations: Option<usize>,
    allow_violation: bool,
) -> Result<Vec<f64>> {
    let sir_only = |name: &'static str| match model {
        ModelSpec::Sir(p) => Ok(p),
        _ => Err(Error::InvalidParams {
            field: "method",
            reason: format!("`{name}` supports only the classic SIR model"),
        }),
    };
    match method {
        Method::EulerDirect => direct_euler_solve(sir_only("euler_direct")?, grid),
        Method::Rk4Direct => direct_rk4_solve(sir_only("rk4_direct")?, grid),
        Method::Analytic => {
            let ap = analytic_params(sir_only("analytic")?)?;
            Ok(analytic_solve(&ap, grid))
        }
        Method::EulerRelax | Method::Rk4Relax | Method::Linearization => {
            let cfg = RelaxationConfig {
                m: if method == Method::Linearization {
                    0.0
                } else {
                    m.unwrap_or_else(|| model.relaxation_threshold())
                },
                iterations: iterations.unwrap_or(DEFAULT_ITERATIONS),
                backend: if method == Method::Rk4Relax {
                    RelaxBackend::Rk4
                } else {
                    RelaxBackend::Euler
                },
                // M = 0 is the defining property of the linearization, not
                // a configuration mistake.
                allow_violation: allow_violation || method == Method::Linearization,
            };
            Ok(relax_solve(model, grid, &cfg)?.last().to_vec())
        }
    }
}

/// All compartments over a mesh, derived from one removals trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBundle {
    pub grid: TimeGrid,
    pub s: Vec<f64>,
    pub i: Vec<f64>,
    pub r: Vec<f64>,
    /// Deceased, present for the SIRD variant.
    pub d: Option<Vec<f64>>,
    /// Decaying total population, present for the background-mortality variant.
    pub n_of_t: Option<Vec<f64>>,
    pub method: Method,
    pub model: ModelSpec,
}

/// Rebuild S, I (and D or N(t) where applicable) from a removals
/// trajectory as produced by [`solve_removals`].
pub fn reconstruct(
    removals: &[f64],
    model: &ModelSpec,
    grid: &TimeGrid,
    method: Method,
) -> SolutionBundle {
    debug_assert_eq!(removals.len(), grid.len());
    let len = grid.len();
    let mut s = Vec::with_capacity(len);
    let mut i = Vec::with_capacity(len);
    let mut r = Vec::with_capacity(len);
    let mut d = matches!(model, ModelSpec::Sird(_)).then(|| Vec::with_capacity(len));
    let mut n_of_t = matches!(model, ModelSpec::SirMortality(_)).then(|| Vec::with_capacity(len));

    for (p, &raw) in removals.iter().enumerate() {
        let t = grid.point(p);
        // the solver works in transformed removals for the mortality variant
        let rem = match model {
            ModelSpec::SirMortality(mp) => (-mp.sigma * t).exp() * raw,
            _ => raw,
        };
        let sp = susceptibles_from_removals(rem, model, t);
        let dp = match model {
            ModelSpec::Sird(pp) => Some(deceased_from_removals(rem, pp)),
            _ => None,
        };
        let ip = infectives_from_conservation(sp, rem, dp, model, t);
        s.push(sp);
        i.push(ip);
        r.push(rem);
        if let (Some(d), Some(dp)) = (d.as_mut(), dp) {
            d.push(dp);
        }
        if let (Some(n_of_t), ModelSpec::SirMortality(mp)) = (n_of_t.as_mut(), model) {
            n_of_t.push((-mp.sigma * t).exp() * mp.sir.total);
        }
    }
    SolutionBundle { grid: *grid, s, i, r, d, n_of_t, method, model: *model }
}

/// Convenience wrapper: solve and reconstruct in one call.
pub fn solve(
    model: &ModelSpec,
    method: Method,
    grid: &TimeGrid,
    m: Option<f64>,
    iterations: Option<usize>,
    allow_violation: bool,
) -> Result<SolutionBundle> {
    let removals = solve_removals(model, method, grid, m, iterations, allow_violation)?;
    Ok(reconstruct(&removals, model, grid, method))
}

/// Integer report convention: populations and days are truncated toward zero.
pub fn report_int(x: f64) -> i64 {
    x.trunc() as i64
}

/// Location of the infectives maximum: (peak time, peak day).
/// Ties resolve to the earliest mesh point; the day is the truncated time.
pub fn peak(infectives: &[f64], grid: &TimeGrid) -> (f64, i64) {
    let mut best = 0usize;
    for (p, &v) in infectives.iter().enumerate() {
        if v > infectives[best] {
            best = p;
        }
    }
    let t = grid.point(best);
    (t, report_int(t))
}

/// Summary of one solution run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub amplitude: f64,
    pub amplitude_int: i64,
    pub peak_time: f64,
    pub peak_day: i64,
    /// max_p |S + I + R (+ D) - N(t_p)|.
    pub conservation_residual: f64,
    /// Minimum over every compartment value in the run.
    pub min_compartment: f64,
}

impl RunReport {
    pub fn from_bundle(b: &SolutionBundle) -> Self {
        let amplitude = b.i.iter().copied().fold(f64::MIN, f64::max);
        let (peak_time, peak_day) = peak(&b.i, &b.grid);
        let (conservation_residual, min_compartment) = audit(b);
        RunReport {
            amplitude,
            amplitude_int: report_int(amplitude),
            peak_time,
            peak_day,
            conservation_residual,
            min_compartment,
        }
    }
}

/// Conservation residual and the smallest compartment value of a run.
pub fn audit(b: &SolutionBundle) -> (f64, f64) {
    let total0 = b.model.base().total;
    let mut residual = 0.0f64;
    let mut min_value = f64::INFINITY;
    for p in 0..b.grid.len() {
        let dead = b.d.as_ref().map_or(0.0, |d| d[p]);
        let expected = b.n_of_t.as_ref().map_or(total0, |n| n[p]);
        let sum = b.s[p] + b.i[p] + b.r[p] + dead;
        residual = residual.max((sum - expected).abs());
        min_value = min_value.min(b.s[p]).min(b.i[p]).min(b.r[p]);
        if let Some(d) = &b.d {
            min_value = min_value.min(d[p]);
        }
    }
    (residual, min_value)
}

/// High-accuracy reference removals trajectory for error measurement:
/// direct RK4 for SIR, a deeply iterated RK4 relaxation run otherwise.
/// For the mortality variant the values are transformed removals, matching
/// [`solve_removals`] output.
pub fn reference_oracle(model: &ModelSpec, steps: usize) -> Result<Vec<f64>> {
    let grid = TimeGrid::new(steps, model.base().horizon)?;
    match model {
        ModelSpec::Sir(p) => direct_rk4_solve(p, &grid),
        _ => {
            let cfg = RelaxationConfig {
                m: model.relaxation_threshold(),
                iterations: 200,
                backend: RelaxBackend::Rk4,
                allow_violation: false,
            };
            Ok(relax_solve(model, &grid, &cfg)?.last().to_vec())
        }
    }
}

/// Restrict a fine-mesh trajectory to a coarse mesh by exact index mapping.
pub fn downsample(fine: &[f64], coarse_steps: usize) -> Result<Vec<f64>> {
    let fine_steps = fine.len() - 1;
    if coarse_steps == 0 || !fine_steps.is_multiple_of(coarse_steps) {
        return Err(Error::GridMismatch { fine: fine_steps, coarse: coarse_steps });
    }
    let stride = fine_steps / coarse_steps;
    Ok(fine.iter().step_by(stride).copied().collect())
}

/// Outcome of fitting log(error) against log(dt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEstimate {
    /// Least-squares slope across the sampled step sizes.
    Slope(f64),
    /// Some error fell below measurement resolution; no order is quotable.
    Saturated,
}

/// Estimate the observed convergence order from matched (dt, error) pairs.
pub fn observed_order(dts: &[f64], errors: &[f64]) -> OrderEstimate {
    assert_eq!(dts.len(), errors.len());
    assert!(dts.len() >= 2, "need at least two step sizes");
    if errors.iter().any(|&e| e < 1e-12) {
        return OrderEstimate::Saturated;
    }
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    OrderEstimate::Slope(num / den)
}

/// Sup-norm distance between two equally sized trajectories.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
