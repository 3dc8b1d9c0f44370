//! The relaxation iteration
//! R_k' + M R_k = gamma N - g(R_{k-1}) + M R_{k-1},
//! solved discretely per iterate, plus relaxation-constant validation and
//! the computable a priori error bounds.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::integrate::{euler_relax_step, rk4_relax_step};
use crate::model::ModelSpec;

/// Discrete backend used to march each linear iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxBackend {
    Euler,
    Rk4,
}

/// Configuration of a relaxation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationConfig {
    /// Relaxation constant M.
    pub m: f64,
    /// Iteration count K.
    pub iterations: usize,
    pub backend: RelaxBackend,
    /// Permit M below the model threshold (reproduces the violating runs).
    pub allow_violation: bool,
}

/// Outcome of checking M against the model-specific threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantCheck {
    Ok,
    Violation { threshold: f64 },
}

/// M must satisfy M >= gamma (SIR, background mortality) or
/// M >= gamma + sigma (SIRD).
pub fn validate_relaxation_constant(model: &ModelSpec, m: f64) -> ConstantCheck {
    let threshold = model.relaxation_threshold();
    if m >= threshold {
        ConstantCheck::Ok
    } else {
        ConstantCheck::Violation { threshold }
    }
}

/// All iterates R_k^p of one relaxation run, k = 0..=K over a shared grid.
/// For the background-mortality variant these hold the transformed
/// removals; back-substitution happens at reconstruction time.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateSequence {
    pub grid: TimeGrid,
    pub iterates: Vec<Vec<f64>>,
}

impl IterateSequence {
    /// The final iterate R_K.
    pub fn last(&self) -> &[f64] {
        self.iterates.last().expect("iterates[0] always present")
    }
}

/// Run the relaxation iteration from the zero starting trajectory.
///
/// The forcing uses the full previous iterate at matching mesh indices;
/// the RK4 backend interpolates it linearly at step midpoints.
pub fn relax_solve(
    model: &ModelSpec,
    grid: &TimeGrid,
    cfg: &RelaxationConfig,
) -> Result<IterateSequence> {
    if let ConstantCheck::Violation { threshold } = validate_relaxation_constant(model, cfg.m) {
        if !cfg.allow_violation {
            return Err(Error::RelaxationViolation { m: cfg.m, threshold });
        }
    }

    let dt = grid.dt();
    let m = cfg.m;
    let c = model.forcing_constant();
    let forcing = |t: f64, r: f64| c - model.g(t, r) + m * r;

    let mut iterates = Vec::with_capacity(cfg.iterations + 1);
    iterates.push(vec![0.0; grid.len()]);
    for k in 1..=cfg.iterations {
        let prev = &iterates[k - 1];
        let mut cur = vec![0.0; grid.len()];
        for p in 1..grid.len() {
            cur[p] = match cfg.backend {
                RelaxBackend::Euler => {
                    euler_relax_step(cur[p - 1], forcing(grid.point(p), prev[p]), dt, m)
                }
                RelaxBackend::Rk4 => {
                    let t0 = grid.point(p - 1);
                    let r_mid = 0.5 * (prev[p - 1] + prev[p]);
                    let b0 = forcing(t0, prev[p - 1]);
                    let b_mid = forcing(t0 + dt / 2.0, r_mid);
                    let b1 = forcing(grid.point(p), prev[p]);
                    rk4_relax_step(cur[p - 1], m, b0, b_mid, b1, dt)
                }
            };
            if !cur[p].is_finite() {
                return Err(Error::NonFinite { k, p });
            }
        }
        iterates.push(cur);
    }
    Ok(IterateSequence { grid: *grid, iterates })
}

/// max_p |R_k^p - R_{k-1}^p| for k = 1..=K; a convergence diagnostic.
pub fn successive_diffs(seq: &IterateSequence) -> Vec<f64> {
    seq.iterates
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (b - a).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Computable a priori bounds for a relaxation run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Squared-error bound per iterate k = 1..=K:
    /// ((M + gamma n mu - gamma_eff)^2 T^2)^k / k! * sup|R_ref|^2.
    pub thm_main_bound: Vec<f64>,
    /// Geometric contraction rate sqrt((M + gamma n mu - gamma_eff) /
    /// (M - gamma n mu + gamma_eff)), defined only when n mu < 1.
    pub corollary_rate: Option<f64>,
    /// Iterate sup-norm bound per k: gamma N sum_{i=1..k} (M-gamma_eff)^{i-1} T^i / i!.
    pub iterate_sup_bound: Vec<f64>,
}

/// Evaluate the a priori bounds for `cfg.iterations` iterates, scaled by the
/// sup norm of a reference removals trajectory supplied by the caller.
pub fn apriori_bounds(
    model: &ModelSpec,
    cfg: &RelaxationConfig,
    grid: &TimeGrid,
    r_ref_sup: f64,
) -> BoundReport {
    let p = model.base();
    let horizon = grid.horizon();
    let gamma_eff = model.relaxation_threshold();
    // gamma n mu equals beta n regardless of variant.
    let lipschitz = cfg.m + p.beta * p.n - gamma_eff;

    let contraction = lipschitz * lipschitz * horizon * horizon;
    let mut thm_main_bound = Vec::with_capacity(cfg.iterations);
    let mut b = r_ref_sup * r_ref_sup;
    for k in 1..=cfg.iterations {
        b *= contraction / k as f64;
        thm_main_bound.push(b);
    }

    let corollary_rate = (p.n * p.mu < 1.0).then(|| {
        ((cfg.m + p.beta * p.n - gamma_eff) / (cfg.m - p.beta * p.n + gamma_eff)).sqrt()
    });

    let mut iterate_sup_bound = Vec::with_capacity(cfg.iterations);
    let mut term = p.gamma * p.total * horizon;
    let mut sum = 0.0;
    for k in 1..=cfg.iterations {
        sum += term;
        iterate_sup_bound.push(sum);
        term *= (cfg.m - gamma_eff) * horizon / (k + 1) as f64;
    }

    BoundReport { thm_main_bound, corollary_rate, iterate_sup_bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SirParams, SirdParams};
    use approx::assert_relative_eq;

    fn test1_model() -> ModelSpec {
        ModelSpec::Sir(SirParams::new(0.0004, 0.02, 998.0, 2.0, 365.0).unwrap())
    }

    fn euler_cfg(m: f64, k: usize) -> RelaxationConfig {
        RelaxationConfig { m, iterations: k, backend: RelaxBackend::Euler, allow_violation: false }
    }

    #[test]
    fn constant_validation() {
        assert_eq!(validate_relaxation_constant(&test1_model(), 0.02), ConstantCheck::Ok);
        let sird = ModelSpec::Sird(
            SirdParams::new(SirParams::new(0.0004, 0.02, 998.0, 2.0, 365.0).unwrap(), 0.01)
                .unwrap(),
        );
        assert_eq!(
            validate_relaxation_constant(&sird, 0.015),
            ConstantCheck::Violation { threshold: 0.03 }
        );
        assert_eq!(validate_relaxation_constant(&sird, 0.03), ConstantCheck::Ok);
    }

    #[test]
    fn violation_rejected_unless_allowed() {
        let model = test1_model();
        let grid = TimeGrid::new(100, 365.0).unwrap();
        let err = relax_solve(&model, &grid, &euler_cfg(0.001, 2)).unwrap_err();
        assert_eq!(err, Error::RelaxationViolation { m: 0.001, threshold: 0.02 });
        let mut cfg = euler_cfg(0.001, 2);
        cfg.allow_violation = true;
        assert!(relax_solve(&model, &grid, &cfg).is_ok());
    }

    #[test]
    fn zero_iterations_yield_only_the_zero_trajectory() {
        let model = test1_model();
        let grid = TimeGrid::new(10, 365.0).unwrap();
        let seq = relax_solve(&model, &grid, &euler_cfg(0.02, 0)).unwrap();
        assert_eq!(seq.iterates.len(), 1);
        assert!(seq.last().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn first_iterate_matches_closed_form() {
        // R_1(t) = gamma (N - n) / M * (1 - e^{-M t}), global error O(dt).
        let model = test1_model();
        let m = 0.02;
        let closed = |t: f64| 0.02 * 2.0 / m * (1.0 - (-m * t).exp());
        assert_relative_eq!(closed(365.0), 1.99865, max_relative = 1e-5);

        let mut errs = Vec::new();
        for steps in [100usize, 200] {
            let grid = TimeGrid::new(steps, 365.0).unwrap();
            let seq = relax_solve(&model, &grid, &euler_cfg(m, 1)).unwrap();
            let err = seq.last()
                .iter()
                .enumerate()
                .map(|(p, &v)| (v - closed(grid.point(p))).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        // halving dt halves the error (observed order within [0.9, 1.1])
        let order = (errs[0] / errs[1]).log2();
        assert!((0.9..=1.1).contains(&order), "order {order}");
    }

    #[test]
    fn initial_condition_exact_for_every_iterate() {
        let model = test1_model();
        let grid = TimeGrid::new(50, 365.0).unwrap();
        for backend in [RelaxBackend::Euler, RelaxBackend::Rk4] {
            let cfg = RelaxationConfig {
                m: 0.02,
                iterations: 6,
                backend,
                allow_violation: false,
            };
            let seq = relax_solve(&model, &grid, &cfg).unwrap();
            assert!(seq.iterates[0].iter().all(|&v| v == 0.0));
            assert!(seq.iterates.iter().all(|it| it[0] == 0.0));
        }
    }

    #[test]
    fn non_finite_abort_carries_location() {
        // M = 0 (regular linearization) diverges; large K drives the
        // iterates past the exponential overflow threshold.
        let model = test1_model();
        let grid = TimeGrid::new(100, 365.0).unwrap();
        let mut cfg = euler_cfg(0.0, 400);
        cfg.allow_violation = true;
        match relax_solve(&model, &grid, &cfg) {
            Err(Error::NonFinite { k, p }) => {
                assert!(k >= 1 && p >= 1);
            }
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn successive_diffs_basics() {
        let model = test1_model();
        let grid = TimeGrid::new(1000, 365.0).unwrap();
        let seq = relax_solve(&model, &grid, &euler_cfg(0.02, 1)).unwrap();
        let diffs = successive_diffs(&seq);
        assert_eq!(diffs.len(), 1);
        assert_relative_eq!(diffs[0], 1.9987, max_relative = 2e-3);

        let same = IterateSequence {
            grid,
            iterates: vec![vec![1.0; grid.len()], vec![1.0; grid.len()]],
        };
        assert_eq!(successive_diffs(&same), vec![0.0]);
    }

    #[test]
    fn diffs_decay_geometrically_when_contractive() {
        // n mu = 0.5 < 1: ratio of successive diffs stays near the
        // corollary rate c = 0.57735.
        let model = ModelSpec::Sir(SirParams::new(0.001, 0.02, 10.0, 1.0, 365.0).unwrap());
        let grid = TimeGrid::new(2000, 365.0).unwrap();
        let seq = relax_solve(&model, &grid, &euler_cfg(0.02, 8)).unwrap();
        let diffs = successive_diffs(&seq);
        for w in diffs.windows(2) {
            assert!(w[1] / w[0] <= 0.57735 + 0.05, "ratio {}", w[1] / w[0]);
        }
    }

    #[test]
    fn bound_report_values() {
        let model = test1_model();
        let grid = TimeGrid::new(100, 365.0).unwrap();
        let cfg = euler_cfg(0.02, 5);
        let report = apriori_bounds(&model, &cfg, &grid, 1.0);
        // Lipschitz factor M + gamma n mu - gamma = beta n = 0.3992
        let f = 0.3992f64;
        assert_relative_eq!(report.thm_main_bound[0], f * f * 365.0 * 365.0, max_relative = 1e-12);
        assert_relative_eq!(
            report.thm_main_bound[1],
            (f * f * 365.0 * 365.0).powi(2) / 2.0,
            max_relative = 1e-12
        );
        // n mu = 19.96 >= 1: no geometric rate
        assert!(report.corollary_rate.is_none());
        // M = gamma collapses the sup bound to its first term for every k
        for b in &report.iterate_sup_bound {
            assert_relative_eq!(*b, 0.02 * 1000.0 * 365.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn corollary_rate_when_contractive() {
        let model = ModelSpec::Sir(SirParams::new(0.001, 0.02, 10.0, 1.0, 365.0).unwrap());
        let grid = TimeGrid::new(10, 365.0).unwrap();
        let report = apriori_bounds(&model, &euler_cfg(0.02, 3), &grid, 1.0);
        let c = report.corollary_rate.unwrap();
        assert_relative_eq!(c, (0.01f64 / 0.03).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(c, 0.57735, max_relative = 1e-5);
        assert!(c > 0.0 && c < 1.0);
    }

    #[test]
    fn corollary_rate_absent_at_unit_threshold() {
        // n mu = 1 exactly: hypothesis of the geometric estimate fails.
        let model = ModelSpec::Sir(SirParams::new(0.002, 0.02, 10.0, 1.0, 365.0).unwrap());
        let grid = TimeGrid::new(10, 365.0).unwrap();
        let report = apriori_bounds(&model, &euler_cfg(0.02, 3), &grid, 1.0);
        assert!(report.corollary_rate.is_none());
    }

    #[test]
    fn thm_bound_eventually_decreasing() {
        let model = test1_model();
        let grid = TimeGrid::new(10, 365.0).unwrap();
        let report = apriori_bounds(&model, &euler_cfg(0.02, 60_000), &grid, 1.0);
        let b = &report.thm_main_bound;
        let tail = &b[30_000..];
        assert!(tail.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn linearization_reproduces_regular_method() {
        // M = 0, K = 2 at P = 100 gives the regular linearization amplitude.
        let model = test1_model();
        let grid = TimeGrid::new(100, 365.0).unwrap();
        let mut cfg = euler_cfg(0.0, 2);
        cfg.allow_violation = true;
        let seq = relax_solve(&model, &grid, &cfg).unwrap();
        let p = model.base();
        let amp = seq
            .last()
            .iter()
            .map(|&r| p.total - p.n * (-p.mu * r).exp() - r)
            .fold(f64::MIN, f64::max);
        assert_eq!(amp.trunc() as i64, 800);
    }
}
