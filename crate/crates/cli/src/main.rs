//! Command-line front end: scenario solving with CSV export, method
//! comparison tables, a priori bound tables, and SVG plotting.

mod config;
mod runner;
mod svg;

use clap::{Parser, Subcommand};
use config::{CompareConfig, ScenarioConfig};
use runner::{exit_for, fmt_sig10, run_scenario, EXIT_CONFIG};
use sir_relax::{
    amplitude_sir, amplitude_sird, apriori_bounds, reference_oracle, Method, ModelSpec,
    RelaxBackend, RelaxationConfig,
};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sir-relax", about = "Relaxation-based solvers for SIR-type models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write the trajectories as CSV.
    Solve {
        /// Scenario TOML file.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Permit a relaxation constant below the model threshold.
        #[arg(long)]
        allow_violation: bool,
    },
    /// Run a set of methods on shared parameters and tabulate amplitude/peak.
    Compare {
        /// Compare-set TOML file.
        #[arg(long)]
        config: PathBuf,
        /// Optional CSV copy of the table.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Permit relaxation constants below the model threshold.
        #[arg(long)]
        allow_violation: bool,
    },
    /// Print the a priori error bounds for a relaxation scenario.
    Bound {
        /// Scenario TOML file (relaxation method required).
        #[arg(long)]
        config: PathBuf,
    },
    /// Render a solver CSV as an SVG line plot.
    Plot {
        /// Input CSV produced by `solve`.
        #[arg(long)]
        config: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn read_file(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path)
        .map_err(|e| fail(EXIT_CONFIG, &format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    fs::write(path, contents)
        .map_err(|e| fail(EXIT_CONFIG, &format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    match cli.command {
        Command::Solve { config, out, allow_violation } => {
            let text = read_file(&config)?;
            let cfg = ScenarioConfig::parse(&text)
                .map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            let sc = cfg
                .validate(allow_violation)
                .map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            let (bundle, report) = run_scenario(&sc).map_err(|e| {
                let (code, msg) = exit_for(&e);
                fail(code, &msg)
            })?;
            write_file(&out, &runner::to_csv(&bundle))?;
            println!("amplitude={} peak_day={}", report.amplitude_int, report.peak_day);
            Ok(())
        }
        Command::Compare { config, out, allow_violation } => {
            let text = read_file(&config)?;
            let cfg = CompareConfig::parse(&text)
                .map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            let model = cfg.model().map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            let mut csv = String::from("method,P,K,amplitude,peak_day\n");
            println!("{:<14} {:>8} {:>5} {:>16} {:>9}", "method", "P", "K", "amplitude", "peak_day");
            for run in &cfg.runs {
                let k_label = run.iterations.map_or("-".to_string(), |k| k.to_string());
                let row = cfg
                    .scenario(run, allow_violation)
                    .map_err(|e| e.to_string())
                    .and_then(|sc| run_scenario(&sc).map_err(|e| exit_for(&e).1));
                match row {
                    Ok((_, report)) => {
                        println!(
                            "{:<14} {:>8} {:>5} {:>16} {:>9}",
                            run.method,
                            run.steps,
                            k_label,
                            fmt_sig10(report.amplitude),
                            report.peak_day
                        );
                        csv.push_str(&format!(
                            "{},{},{},{},{}\n",
                            run.method,
                            run.steps,
                            k_label,
                            fmt_sig10(report.amplitude),
                            report.peak_day
                        ));
                    }
                    Err(msg) => {
                        println!(
                            "{:<14} {:>8} {:>5} {:>16} {:>9}",
                            run.method, run.steps, k_label, "ERR", "-"
                        );
                        eprintln!("error in run `{}` (P={}): {msg}", run.method, run.steps);
                        csv.push_str(&format!("{},{},{},ERR,-\n", run.method, run.steps, k_label));
                    }
                }
            }
            let truth = match &model {
                ModelSpec::Sir(p) => Some(amplitude_sir(p)),
                ModelSpec::Sird(p) => Some(amplitude_sird(p)),
                ModelSpec::SirMortality(_) => None,
            };
            let truth_label = truth.map_or("n/a".to_string(), fmt_sig10);
            println!("{:<14} {:>8} {:>5} {:>16} {:>9}", "true_amplitude", "-", "-", truth_label, "-");
            csv.push_str(&format!("true_amplitude,-,-,{truth_label},-\n"));
            if let Some(out) = out {
                write_file(&out, &csv)?;
            }
            Ok(())
        }
        Command::Bound { config } => {
            let text = read_file(&config)?;
            let cfg = ScenarioConfig::parse(&text)
                .map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            let sc = cfg.validate(false).map_err(|e| fail(EXIT_CONFIG, &e.to_string()))?;
            if !sc.method.is_iterative() || sc.method == Method::Linearization {
                return Err(fail(
                    EXIT_CONFIG,
                    "invalid config field `method`: bounds require `euler_relax` or `rk4_relax`",
                ));
            }
            let relax_cfg = RelaxationConfig {
                m: sc.m.expect("validated"),
                iterations: sc.iterations.expect("validated"),
                backend: RelaxBackend::Euler,
                allow_violation: sc.allow_violation,
            };
            // reference trajectory on a 10x finer mesh supplies the sup norm
            let reference = reference_oracle(&sc.model, 10 * sc.grid.steps()).map_err(|e| {
                let (code, msg) = exit_for(&e);
                fail(code, &msg)
            })?;
            let sup = reference.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            let report = apriori_bounds(&sc.model, &relax_cfg, &sc.grid, sup);
            let rate = report
                .corollary_rate
                .map_or("n/a".to_string(), fmt_sig10);
            println!("{:<6} {:>16} {:>14} {:>18}", "k", "thm_main_bound", "corollary_rate", "iterate_sup_bound");
            for k in 0..relax_cfg.iterations {
                println!(
                    "{:<6} {:>16} {:>14} {:>18}",
                    k + 1,
                    fmt_sig10(report.thm_main_bound[k]),
                    rate,
                    fmt_sig10(report.iterate_sup_bound[k])
                );
            }
            Ok(())
        }
        Command::Plot { config, out } => {
            let text = read_file(&config)?;
            let table = runner::parse_csv(&text)
                .map_err(|e| fail(EXIT_CONFIG, &format!("malformed CSV: {e}")))?;
            write_file(&out, &svg::render(&table))?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}
