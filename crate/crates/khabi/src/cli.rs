//! Command surface behind the `khabi` binary.
//!
//! Exit-code contract: 0 everything passed, 1 usage error, 2 oracle or
//! invariant failure, 3 numerical non-convergence. The `KHABI_TOL`
//! environment variable overrides the default quadrature tolerance; the
//! `--tol` flag wins over both. Identical invocations produce byte-identical
//! output.

use crate::constants::{constants_report, ConstantsReport, ToleranceProfile};
use crate::dahlberg::{compare, DahlbergReport};
use crate::deriv::build_stack;
use crate::functional::{maximize, MaximizeOptions};
use crate::report::{fmt_g17, json_document, Table};
use crate::sign::{descartes_bound, positive_roots_with_tol, sign_pattern};
use crate::{Error, ProblemParams, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Constants,
    PsiRoots,
    Maximize,
    Dahlberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Single(f64),
    Range { min: f64, max: f64, steps: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: u32,
    pub rho: RhoSpec,
    pub iters: u32,
    pub tol: Option<f64>,
    pub precision: Precision,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

pub struct RunOutput {
    pub text: String,
    pub all_ok: bool,
}

pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::Domain(_) | Error::Io(_) => 1,
        Error::OracleFailure(_) => 2,
        Error::NonConvergence(_) | Error::RootIsolation(_) => 3,
    }
}

impl RunConfig {
    fn rho_values(&self) -> Result<Vec<f64>> {
        let values = match self.rho {
            RhoSpec::Single(v) => vec![v],
            RhoSpec::Range { min, max, steps } => {
                if steps < 1 {
                    return Err(Error::InvalidParams("steps must be >= 1".into()));
                }
                if max < min {
                    return Err(Error::InvalidParams("rho-max must be >= rho-min".into()));
                }
                if steps == 1 {
                    vec![min]
                } else {
                    (0..steps)
                        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
                        .collect()
                }
            }
        };
        for &rho in &values {
            if !(rho > 1.0) {
                return Err(Error::InvalidParams(format!(
                    "pipeline commands require rho > 1, got {rho}"
                )));
            }
        }
        Ok(values)
    }

    fn profile(&self) -> Result<ToleranceProfile> {
        let mut profile = match self.precision {
            Precision::Double => ToleranceProfile::default(),
            Precision::Extended => ToleranceProfile::extended(),
        };
        let env_tol = match std::env::var("KHABI_TOL") {
            Ok(s) => Some(s.parse::<f64>().map_err(|_| {
                Error::InvalidParams(format!("KHABI_TOL is not a float: {s:?}"))
            })?),
            Err(_) => None,
        };
        if let Some(t) = self.tol.or(env_tol) {
            if !(t > 1e-14 && t < 1e-2) {
                return Err(Error::InvalidParams(format!(
                    "tolerance must lie in (1e-14, 1e-2), got {t}"
                )));
            }
            profile.quad_rel = t;
            profile.root_rel = t.min(1e-13);
        }
        Ok(profile)
    }
}

/// Execute one command; writes to `config.out` when set and always returns
/// the rendered text.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let out = match config.command {
        CommandKind::Constants => cmd_constants(config)?,
        CommandKind::PsiRoots => cmd_psi_roots(config)?,
        CommandKind::Maximize => cmd_maximize(config)?,
        CommandKind::Dahlberg => cmd_dahlberg(config)?,
    };
    if let Some(path) = &config.out {
        std::fs::write(path, &out.text)?;
    }
    Ok(out)
}

// CSV and JSON carry the full 17 significant digits; the human format is
// for eyes and keeps 9
fn number_formatter(format: OutputFormat) -> fn(f64) -> String {
    match format {
        OutputFormat::Human => |x| format!("{x:.8e}"),
        _ => fmt_g17,
    }
}

fn cmd_constants(config: &RunConfig) -> Result<RunOutput> {
    let ff = number_formatter(config.format);
    let profile = config.profile()?;
    let rhos = config.rho_values()?;
    let reports: Vec<ConstantsReport> = rhos
        .par_iter()
        .map(|&rho| {
            let params = ProblemParams::new(config.n, rho)?;
            constants_report(&params, &profile)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "n",
        "rho",
        "p_n",
        "deficiency",
        "j_sup",
        "k_n",
        "k_n_estimate_form",
        "upper_bound",
        "residual_full_line",
        "residual_d_minus",
        "residual_antiderivative",
        "residual_k2_closed",
        "oracles_pass",
    ]);
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    for r in &reports {
        for (k, v) in &r.oracle_residuals {
            let slot = worst.entry(k.clone()).or_insert(f64::NEG_INFINITY);
            *slot = slot.max(*v);
        }
        let opt = |x: Option<f64>| x.map(ff).unwrap_or_default();
        table.push(vec![
            r.n.to_string(),
            ff(r.rho),
            ff(r.p_n),
            ff(r.deficiency),
            ff(r.j_sup),
            ff(r.k_n),
            ff(r.k_n_estimate_form),
            ff(r.upper_bound),
            opt(r.oracle_residuals.get("full_line_vs_p_n").copied()),
            opt(r.oracle_residuals.get("d_minus_vs_deficiency").copied()),
            opt(r.oracle_residuals.get("antiderivative_identity").copied()),
            opt(r.oracle_residuals.get("k2_closed_vs_j_sup").copied()),
            r.all_passed().to_string(),
        ]);
    }
    let all_ok = reports.iter().all(|r| r.all_passed());
    let text = render(config, table, &reports, &worst);
    Ok(RunOutput { text, all_ok })
}

#[derive(Serialize)]
struct ZeroRow {
    index: usize,
    tau: f64,
    x: f64,
    even_multiplicity: bool,
    interval_negative: bool,
}

fn cmd_psi_roots(config: &RunConfig) -> Result<RunOutput> {
    let profile = config.profile()?;
    let rhos = config.rho_values()?;
    if rhos.len() != 1 {
        return Err(Error::InvalidParams(
            "psi-roots takes a single --rho, not a range".into(),
        ));
    }
    let params = ProblemParams::new(config.n, rhos[0])?;
    let stack = build_stack(&params)?;
    let roots = positive_roots_with_tol(&stack, profile.root_rel)?;
    let pattern = sign_pattern(&stack, &roots)?;

    let rows: Vec<ZeroRow> = pattern
        .zeros
        .iter()
        .enumerate()
        .map(|(idx, z)| ZeroRow {
            index: idx + 1,
            tau: z.tau,
            x: z.x,
            even_multiplicity: z.even_multiplicity,
            interval_negative: pattern.index_set().contains(&(idx + 1)),
        })
        .collect();

    let ff = number_formatter(config.format);
    let mut table = Table::new(&["index", "tau", "x", "even_multiplicity", "interval_negative"]);
    for r in &rows {
        table.push(vec![
            r.index.to_string(),
            ff(r.tau),
            ff(r.x),
            r.even_multiplicity.to_string(),
            r.interval_negative.to_string(),
        ]);
    }
    let mut evidence = BTreeMap::new();
    evidence.insert(
        "descartes_bound".to_string(),
        descartes_bound(&stack) as f64,
    );
    evidence.insert("zeros_found".to_string(), rows.len() as f64);
    let mut text = render(config, table, &rows, &evidence);
    if config.format == OutputFormat::Human {
        let dm = pattern
            .d_minus()
            .iter()
            .map(|(a, b)| format!("({a:.12e}, {b:.12e})"))
            .collect::<Vec<_>>()
            .join(" u ");
        text.push_str(&format!(
            "I = {:?}; D_- = {dm}; census: {} zeros against Descartes bound {}\n",
            pattern.index_set(),
            rows.len(),
            descartes_bound(&stack),
        ));
    }
    Ok(RunOutput { text, all_ok: true })
}

fn cmd_maximize(config: &RunConfig) -> Result<RunOutput> {
    let profile = config.profile()?;
    let rhos = config.rho_values()?;
    if rhos.len() != 1 {
        return Err(Error::InvalidParams(
            "maximize takes a single --rho, not a range".into(),
        ));
    }
    let params = ProblemParams::new(config.n, rhos[0])?;
    let opts = MaximizeOptions {
        iterations: config.iters,
        quad_rel: profile.quad_rel.max(1e-11),
        ..Default::default()
    };
    let run = maximize(&params, &opts)?;

    let ff = number_formatter(config.format);
    let mut table = Table::new(&["k", "epsilon", "j_value", "gap", "margin"]);
    for r in &run.rows {
        table.push(vec![
            r.k.to_string(),
            ff(r.epsilon),
            ff(r.j_value),
            ff(r.gap),
            ff(r.margin),
        ]);
    }
    let mut extras = BTreeMap::new();
    extras.insert("j_sup".to_string(), run.j_sup);
    extras.insert("alpha".to_string(), run.schedule.alpha);
    extras.insert(
        "final_gap_fraction".to_string(),
        run.rows.last().map(|r| r.gap / run.j_sup).unwrap_or(f64::NAN),
    );
    let text = render(config, table, &run.rows, &extras);
    Ok(RunOutput { text, all_ok: true })
}

fn cmd_dahlberg(config: &RunConfig) -> Result<RunOutput> {
    let profile = config.profile()?;
    let rhos = config.rho_values()?;
    let reports: Vec<(ConstantsReport, DahlbergReport)> = rhos
        .par_iter()
        .map(|&rho| {
            let params = ProblemParams::new(config.n, rho)?;
            let consts = constants_report(&params, &profile)?;
            let cmp = compare(config.n, rho, &consts)?;
            Ok((consts, cmp))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "n",
        "rho",
        "theta_star",
        "vartheta",
        "vartheta_closed",
        "closed_form_residual",
        "reference_coefficient",
        "e_pow_p",
        "k_n",
        "exceeds_e_pow_p",
        "at_least_k_n",
    ]);
    let ff = number_formatter(config.format);
    for (_, r) in &reports {
        let opt = |x: Option<f64>| x.map(ff).unwrap_or_default();
        table.push(vec![
            r.n.to_string(),
            ff(r.rho),
            ff(r.theta_star),
            ff(r.vartheta),
            opt(r.vartheta_closed),
            opt(r.closed_form_residual),
            opt(r.reference_coefficient),
            ff(r.e_pow_p),
            ff(r.k_n),
            r.exceeds_e_pow_p.to_string(),
            r.at_least_k_n.to_string(),
        ]);
    }
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    for (c, r) in &reports {
        for (k, v) in &c.oracle_residuals {
            let slot = worst.entry(k.clone()).or_insert(f64::NEG_INFINITY);
            *slot = slot.max(*v);
        }
        if let Some(res) = r.closed_form_residual {
            let slot = worst
                .entry("vartheta_closed_residual".to_string())
                .or_insert(f64::NEG_INFINITY);
            *slot = slot.max(res);
        }
    }
    let rows: Vec<&DahlbergReport> = reports.iter().map(|(_, r)| r).collect();
    let all_ok = reports
        .iter()
        .all(|(c, r)| c.all_passed() && r.at_least_k_n);
    let text = render(config, table, &rows, &worst);
    Ok(RunOutput { text, all_ok })
}

fn render<R: Serialize>(
    config: &RunConfig,
    table: Table,
    rows: &R,
    residuals: &BTreeMap<String, f64>,
) -> String {
    match config.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Human => table.to_human(),
        OutputFormat::Json => json_document(config, rows, residuals),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: CommandKind, n: u32, rho: RhoSpec, format: OutputFormat) -> RunConfig {
        RunConfig {
            command,
            n,
            rho,
            iters: 0,
            tol: None,
            precision: Precision::Double,
            format,
            out: None,
        }
    }

    #[test]
    fn rho_grid_expansion() {
        let c = config(
            CommandKind::Constants,
            2,
            RhoSpec::Range {
                min: 1.1,
                max: 5.0,
                steps: 10,
            },
            OutputFormat::Csv,
        );
        let v = c.rho_values().unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 1.1);
        assert_eq!(v[9], 5.0);
    }

    #[test]
    fn rejects_rho_at_most_one() {
        let c = config(
            CommandKind::Constants,
            2,
            RhoSpec::Single(1.0),
            OutputFormat::Csv,
        );
        assert!(matches!(c.rho_values(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn psi_roots_rejects_ranges() {
        let c = config(
            CommandKind::PsiRoots,
            2,
            RhoSpec::Range {
                min: 2.0,
                max: 3.0,
                steps: 2,
            },
            OutputFormat::Csv,
        );
        assert!(run(&c).is_err());
    }

    #[test]
    fn maximize_zero_iters_single_row() {
        let c = config(
            CommandKind::Maximize,
            2,
            RhoSpec::Single(2.0),
            OutputFormat::Csv,
        );
        let out = run(&c).unwrap();
        assert!(out.all_ok);
        let lines: Vec<&str> = out.text.trim_end().lines().collect();
        assert_eq!(lines.len(), 2); // header + k=0
        assert!(lines[1].starts_with("0,"));
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code_for_error(&Error::InvalidParams("x".into())), 1);
        assert_eq!(exit_code_for_error(&Error::OracleFailure("x".into())), 2);
        assert_eq!(exit_code_for_error(&Error::NonConvergence("x".into())), 3);
        assert_eq!(exit_code_for_error(&Error::RootIsolation("x".into())), 3);
    }
}
