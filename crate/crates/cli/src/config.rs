//! Scenario configuration files (TOML) and their validation into core types.

use serde::Deserialize;
use sir_relax::{Method, ModelSpec, SirMortalityParams, SirParams, SirdParams, TimeGrid};

/// A configuration problem; the message names the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), reason: reason.into() }
}

/// One solver scenario as written on disk.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: String,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: Option<f64>,
    pub n: f64,
    pub a: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub method: String,
    #[serde(rename = "P")]
    pub steps: usize,
    #[serde(rename = "K")]
    pub iterations: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub allow_violation: Option<bool>,
}

/// A compare set: shared model parameters plus per-run method settings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub model: String,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: Option<f64>,
    pub n: f64,
    pub a: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub allow_violation: Option<bool>,
    pub runs: Vec<RunSpec>,
}

/// Method/mesh/iteration settings of one compare row.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub method: String,
    #[serde(rename = "P")]
    pub steps: usize,
    #[serde(rename = "K")]
    pub iterations: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
}

/// A fully validated scenario ready to hand to the solver.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: ModelSpec,
    pub method: Method,
    pub grid: TimeGrid,
    pub iterations: Option<usize>,
    pub m: Option<f64>,
    pub allow_violation: bool,
}

pub fn parse_method(name: &str) -> Result<Method, ConfigError> {
    match name {
        "euler_relax" => Ok(Method::EulerRelax),
        "rk4_relax" => Ok(Method::Rk4Relax),
        "euler_direct" => Ok(Method::EulerDirect),
        "rk4_direct" => Ok(Method::Rk4Direct),
        "analytic" => Ok(Method::Analytic),
        "linearization" => Ok(Method::Linearization),
        other => Err(err("method", format!("unknown method `{other}`"))),
    }
}

pub fn build_model(
    model: &str,
    beta: f64,
    gamma: f64,
    sigma: Option<f64>,
    n: f64,
    a: f64,
    horizon: f64,
) -> Result<ModelSpec, ConfigError> {
    let core_err = |e: sir_relax::Error| match e {
        sir_relax::Error::InvalidParams { field, reason } => err(field, reason),
        other => err("model", other.to_string()),
    };
    let sir = SirParams::new(beta, gamma, n, a, horizon).map_err(core_err)?;
    match model {
        "sir" => {
            if sigma.is_some() {
                return Err(err("sigma", "not applicable to model `sir`"));
            }
            Ok(ModelSpec::Sir(sir))
        }
        "sird" => {
            let sigma = sigma.ok_or_else(|| err("sigma", "required for model `sird`"))?;
            Ok(ModelSpec::Sird(SirdParams::new(sir, sigma).map_err(core_err)?))
        }
        "sir_mortality" => {
            let sigma =
                sigma.ok_or_else(|| err("sigma", "required for model `sir_mortality`"))?;
            Ok(ModelSpec::SirMortality(
                SirMortalityParams::new(sir, sigma).map_err(core_err)?,
            ))
        }
        other => Err(err("model", format!("unknown model `{other}`"))),
    }
}

fn validate_method_fields(
    method: Method,
    iterations: Option<usize>,
    m: Option<f64>,
) -> Result<(), ConfigError> {
    match method {
        Method::EulerRelax | Method::Rk4Relax => {
            if iterations.is_none() {
                return Err(err("K", format!("required for method `{}`", method.name())));
            }
            if m.is_none() {
                return Err(err("M", format!("required for method `{}`", method.name())));
            }
        }
        Method::Linearization => {
            if iterations.is_none() {
                return Err(err("K", "required for method `linearization`"));
            }
            if let Some(m) = m {
                if m != 0.0 {
                    return Err(err("M", "must be 0 (or omitted) for method `linearization`"));
                }
            }
        }
        Method::EulerDirect | Method::Rk4Direct | Method::Analytic => {}
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| err("config", e.to_string()))
    }

    /// Validate the raw fields into core types; `force_allow` is the
    /// command-line override flag.
    pub fn validate(&self, force_allow: bool) -> Result<Scenario, ConfigError> {
        let model = build_model(
            &self.model, self.beta, self.gamma, self.sigma, self.n, self.a, self.horizon,
        )?;
        let method = parse_method(&self.method)?;
        validate_method_fields(method, self.iterations, self.m)?;
        let grid = TimeGrid::new(self.steps, self.horizon).map_err(|e| match e {
            sir_relax::Error::InvalidParams { field, reason } => err(field, reason),
            other => err("P", other.to_string()),
        })?;
        Ok(Scenario {
            model,
            method,
            grid,
            iterations: self.iterations,
            m: self.m,
            allow_violation: force_allow || self.allow_violation.unwrap_or(false),
        })
    }
}

impl CompareConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: CompareConfig = toml::from_str(text).map_err(|e| err("config", e.to_string()))?;
        if cfg.runs.is_empty() {
            return Err(err("runs", "at least one run is required"));
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Result<ModelSpec, ConfigError> {
        build_model(&self.model, self.beta, self.gamma, self.sigma, self.n, self.a, self.horizon)
    }

    pub fn scenario(&self, run: &RunSpec, force_allow: bool) -> Result<Scenario, ConfigError> {
        let method = parse_method(&run.method)?;
        validate_method_fields(method, run.iterations, run.m)?;
        Ok(Scenario {
            model: self.model()?,
            method,
            grid: TimeGrid::new(run.steps, self.horizon).map_err(|e| err("P", e.to_string()))?,
            iterations: run.iterations,
            m: run.m,
            allow_violation: force_allow || self.allow_violation.unwrap_or(false),
        })
    }
}
