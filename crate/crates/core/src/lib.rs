//! Numerical solvers for SIR-type compartmental models reduced to a scalar
//! removals equation, built around a linear relaxation iteration with a
//! provable a priori error bound.
//!
//! The library covers three model variants (classic SIR, SIRD with disease
//! mortality, SIR with background mortality), two discrete backends for the
//! relaxation iterates (semi-implicit Euler and RK4), direct nonlinear
//! baselines, a closed-form tanh approximation, and reporting utilities
//! (amplitude, peak day, conservation audit, observed convergence order).

pub mod analysis;
pub mod analytic;
pub mod error;
pub mod grid;
pub mod integrate;
pub mod model;
pub mod relax;

pub use analysis::{
    audit, downsample, observed_order, peak, reconstruct, reference_oracle, report_int, solve,
    solve_removals, sup_distance, Method, OrderEstimate, RunReport, SolutionBundle,
    DEFAULT_ITERATIONS,
};
pub use analytic::{analytic_params, analytic_removals, analytic_solve, AnalyticParams};
pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use model::{
    amplitude_sir, amplitude_sird, ModelSpec, SirMortalityParams, SirParams, SirdParams,
};
pub use relax::{
    apriori_bounds, relax_solve, successive_diffs, validate_relaxation_constant, BoundReport,
    ConstantCheck, IterateSequence, RelaxBackend, RelaxationConfig,
};
