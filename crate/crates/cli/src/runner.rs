//! Scenario execution, CSV serialization, and exit-code mapping.

use crate::config::Scenario;
use sir_relax::{solve, Error, ModelSpec, RunReport, SolutionBundle};

/// Stable process exit codes.
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_OVERFLOW: u8 = 4;

/// Map a solver error to (exit code, message).
pub fn exit_for(err: &Error) -> (u8, String) {
    match err {
        Error::InvalidParams { .. } | Error::GridMismatch { .. } => (EXIT_CONFIG, err.to_string()),
        Error::RelaxationViolation { .. } => (EXIT_VIOLATION, err.to_string()),
        Error::NonFinite { .. } => (EXIT_OVERFLOW, err.to_string()),
    }
}

pub fn run_scenario(sc: &Scenario) -> Result<(SolutionBundle, RunReport), Error> {
    let bundle = solve(
        &sc.model,
        sc.method,
        &sc.grid,
        sc.m,
        sc.iterations,
        sc.allow_violation,
    )?;
    let report = RunReport::from_bundle(&bundle);
    Ok((bundle, report))
}

/// Render a value with at most 10 significant digits, shortest form,
/// period decimal separator, no exponent.
pub fn fmt_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (9 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column layout of a bundle's CSV: header plus one extra column for the
/// variant-specific trajectory when present.
pub fn csv_header(b: &SolutionBundle) -> &'static str {
    match b.model {
        ModelSpec::Sir(_) => "t,S,I,R",
        ModelSpec::Sird(_) => "t,S,I,R,D",
        ModelSpec::SirMortality(_) => "t,S,I,R,N",
    }
}

/// Serialize a bundle as CSV with LF line endings.
pub fn to_csv(b: &SolutionBundle) -> String {
    let mut out = String::new();
    out.push_str(csv_header(b));
    out.push('\n');
    for p in 0..b.grid.len() {
        out.push_str(&fmt_sig10(b.grid.point(p)));
        for col in [&b.s, &b.i, &b.r] {
            out.push(',');
            out.push_str(&fmt_sig10(col[p]));
        }
        if let Some(d) = &b.d {
            out.push(',');
            out.push_str(&fmt_sig10(d[p]));
        }
        if let Some(n) = &b.n_of_t {
            out.push(',');
            out.push_str(&fmt_sig10(n[p]));
        }
        out.push('\n');
    }
    out
}

/// A CSV file read back in: column names and per-column values.
pub struct CsvTable {
    pub columns: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Parse a solver CSV; returns an error message on malformed input.
pub fn parse_csv(text: &str) -> Result<CsvTable, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    if columns.first().map(String::as_str) != Some("t") || columns.len() < 2 {
        return Err(format!("unexpected CSV header `{header}`"));
    }
    let mut values = vec![Vec::new(); columns.len()];
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(format!(
                "row {}: expected {} fields, found {}",
                i + 2,
                columns.len(),
                fields.len()
            ));
        }
        for (col, field) in values.iter_mut().zip(fields) {
            let v: f64 = field
                .parse()
                .map_err(|_| format!("row {}: not a number: `{field}`", i + 2))?;
            col.push(v);
        }
    }
    if values[0].is_empty() {
        return Err("CSV has no data rows".to_string());
    }
    Ok(CsvTable { columns, values })
}
