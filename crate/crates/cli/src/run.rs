use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hvt_core::axioms::{
    axiom_table, repro_decomp, repro_nogo, repro_strong_continuity, AxiomTable, DecompReport,
    NogoReport, StrongContinuityReport, TableOptions,
};
use hvt_core::blocks::minimal_blocks;
use hvt_core::theories::apply_theory;
use hvt_core::TheoryResult;

use crate::check::{check_axiom, CheckRow};
use crate::config::{CheckSpec, Command, OutputFormat, ReproTarget, RunConfig};
use crate::error::{CliError, EXIT_MISMATCH, EXIT_OK};
use crate::mnemonic;
use crate::sample::{sample_trajectories, SampleReport};

/// Result of a successful run. `mismatch` is set when a reproduction or a
/// check disagrees with the expected outcome.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: RunConfig,
    pub result: Value,
    pub text: String,
    pub mismatch: bool,
}

impl Outcome {
    pub fn document(&self) -> Value {
        json!({ "config": self.config, "result": self.result })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Structured => {
                let mut s = serde_json::to_string_pretty(&self.document()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.mismatch {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }
}

/// Reads the config embedded in a structured output document.
pub fn config_from_document(text: &str) -> Result<RunConfig, CliError> {
    #[derive(Deserialize)]
    struct Doc {
        config: RunConfig,
    }
    let doc: Doc = serde_json::from_str(text).map_err(hvt_core::Error::from)?;
    Ok(doc.config)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReproResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nogo: Option<NogoReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomp: Option<DecompReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_continuity: Option<StrongContinuityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<AxiomTable>,
    pub passed: bool,
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let opts = &config.options;
    let (result, text, mismatch) = match &config.command {
        Command::Map { theory, rho, u } => {
            let rho = mnemonic::state(rho)?;
            let u = mnemonic::unitary(u)?;
            let r = apply_theory(*theory, &rho, &u, opts)?;
            (value(&r), map_text(&r), false)
        }
        Command::Blocks { u } => {
            let u = mnemonic::unitary(u)?;
            let b = minimal_blocks(&u, opts.zero_tol)?;
            (value(&b), b.to_string(), false)
        }
        Command::Check(spec) => check(spec, config)?,
        Command::Repro { target } => {
            let r = repro(*target, config)?;
            let text = repro_text(&r);
            (value(&r), text, !r.passed)
        }
        Command::Sample {
            theory,
            rho,
            u,
            trajectories,
        } => {
            let rho = mnemonic::state(rho)?;
            let us = u
                .iter()
                .map(|s| mnemonic::unitary(s))
                .collect::<Result<Vec<_>, _>>()?;
            if us.is_empty() {
                return Err(CliError::Usage("sample needs at least one --u".into()));
            }
            let r = sample_trajectories(*theory, &rho, &us, *trajectories, config.seed, opts)?;
            (value(&r), sample_text(&r), false)
        }
    };
    Ok(Outcome {
        config: config.clone(),
        result,
        text,
        mismatch,
    })
}

pub fn table_options(config: &RunConfig) -> TableOptions {
    TableOptions {
        theory: config.options.clone(),
        seed: config.seed,
        ..TableOptions::default()
    }
}

fn check(spec: &CheckSpec, config: &RunConfig) -> Result<(Value, String, bool), CliError> {
    match spec.axiom {
        None => {
            let table = axiom_table(&TableOptions {
                delta: spec.delta,
                tol: spec.tol,
                ..table_options(config)
            })?;
            let text = table.to_string();
            Ok((value(&table), text, !table.all_match()))
        }
        Some(axiom) => {
            let rows = check_axiom(axiom, spec, config.seed, &config.options)?;
            let text = check_text(&rows);
            let mismatch = rows.iter().any(|r| r.mismatch);
            Ok((value(&rows), text, mismatch))
        }
    }
}

fn repro(target: ReproTarget, config: &RunConfig) -> Result<ReproResult, CliError> {
    let opts = &config.options;
    let want = |t: ReproTarget| target == t || target == ReproTarget::All;
    let mut r = ReproResult::default();
    if want(ReproTarget::Nogo) {
        r.nogo = Some(repro_nogo(opts)?);
    }
    if want(ReproTarget::Decomp) {
        r.decomp = Some(repro_decomp(opts)?);
    }
    if want(ReproTarget::StrongContinuity) {
        r.strong_continuity = Some(repro_strong_continuity(opts)?);
    }
    if want(ReproTarget::Table) {
        r.table = Some(axiom_table(&table_options(config))?);
    }
    r.passed = r.nogo.as_ref().is_none_or(NogoReport::passed)
        && r.decomp.as_ref().is_none_or(DecompReport::passed)
        && r.strong_continuity
            .as_ref()
            .is_none_or(StrongContinuityReport::passed)
        && r.table.as_ref().is_none_or(AxiomTable::all_match);
    Ok(r)
}

fn undefined_text(cols: &[usize]) -> String {
    if cols.is_empty() {
        "none".into()
    } else {
        cols.iter()
            .map(|c| (c + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn map_text(r: &TheoryResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} ({}), N = {}",
        r.theory.short_name(),
        r.theory.long_name(),
        r.dim
    );
    let _ = writeln!(s, "S (row = output, column = input):\n{:.8}", r.stochastic);
    let _ = writeln!(s, "P:\n{:.8}", r.joint.as_matrix());
    let _ = writeln!(
        s,
        "undefined columns: {}",
        undefined_text(&r.undefined_columns)
    );
    let d = &r.diagnostics;
    if let (Some(it), Some(res)) = (d.st_iterations, d.st_residual) {
        let _ = writeln!(s, "sinkhorn: {it} iterations, residual {res:.3e}");
    }
    if let Some(p) = d.ft_permutations {
        let _ = write!(s, "flow: {p} relabelings");
        if let Some(se) = d.ft_std_error {
            let _ = write!(s, ", std error {se:.3e}");
        }
        let _ = writeln!(s);
    }
    if let Some(z) = d.zero_mass_blocks.filter(|&z| z > 0) {
        let _ = writeln!(s, "blocks without mass: {z}");
    }
    if !d.limit_columns.is_empty() {
        let _ = writeln!(
            s,
            "columns from the small-population limit: {}",
            undefined_text(&d.limit_columns)
        );
    }
    s
}

fn check_text(rows: &[CheckRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let rep = &r.report;
        let _ = writeln!(
            s,
            "{:<24} {}  {:<12} deviation {:.3e} (tolerance {:.3e}, {} trials){}{}",
            rep.axiom.title(),
            rep.theory.short_name(),
            format!("{:?}", rep.verdict),
            rep.max_deviation,
            rep.tolerance,
            rep.trials,
            r.expected
                .map(|e| format!("  expected {}", e.symbol()))
                .unwrap_or_default(),
            if r.mismatch { "  MISMATCH" } else { "" }
        );
        for (k, v) in &rep.measurements {
            let _ = writeln!(s, "    {k} = {v:.6e}");
        }
    }
    s
}

fn repro_text(r: &ReproResult) -> String {
    let mut s = String::new();
    if let Some(n) = &r.nogo {
        let _ = writeln!(s, "commutativity no-go (Bell state, R(pi/8) and R(-pi/8))");
        let _ = writeln!(
            s,
            "  Pr[E] bounds: A first <= {:.6}, B first >= {:.6}",
            n.a_first_upper, n.b_first_lower
        );
        for row in &n.rows {
            let _ = writeln!(
                s,
                "  {}  A first {:.6}  B first {:.6}  {}",
                row.theory.short_name(),
                row.pr_e_a_first,
                row.pr_e_b_first,
                if row.within_bounds { "ok" } else { "FAIL" }
            );
        }
    }
    if let Some(d) = &r.decomp {
        let _ = writeln!(s, "decomposition invariance (theta = {:.6})", d.theta);
        for row in &d.forced {
            let _ = writeln!(
                s,
                "  {}  forced deviation {:.3e}  S(I/2, R) distance from uniform {:.6}",
                row.theory.short_name(),
                row.forced_deviation,
                row.distance_from_uniform
            );
        }
        let _ = writeln!(
            s,
            "  (P)_01 from |0>,|1>: {:.6}  bound from phi pair: {:.6}",
            d.computational_value, d.phi_lower_bound
        );
        let _ = writeln!(s, "  S_FT(I/2, R(pi/4)):\n{:.6}", d.flow_quarter_rotation);
    }
    if let Some(sc) = &r.strong_continuity {
        let _ = writeln!(s, "strong continuity");
        for row in &sc.rows {
            let _ = writeln!(
                s,
                "  delta {:.0e}  {}  S jump {:.6}  P jump {:.3e}  rho distance {:.3e}  {}",
                row.delta,
                row.theory.short_name(),
                row.s_jump,
                row.p_jump,
                row.rho_distance,
                if row.matches_displayed { "ok" } else { "FAIL" }
            );
        }
    }
    if let Some(t) = &r.table {
        let _ = writeln!(s, "{t}");
    }
    let _ = writeln!(
        s,
        "{}",
        if r.passed {
            "all reproductions passed"
        } else {
            "MISMATCH"
        }
    );
    s
}

fn sample_text(r: &SampleReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} trajectories under {}, seed {}",
        r.trajectories,
        r.theory.short_name(),
        r.seed
    );
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (t, (b, e)) in r.born.iter().zip(&r.empirical).enumerate() {
        let _ = writeln!(s, "t = {t}  born [{}]  empirical [{}]", fmt(b), fmt(e));
    }
    let _ = writeln!(
        s,
        "max |empirical - born| = {:.4e} (3/sqrt(n) = {:.4e})",
        r.max_born_deviation,
        3.0 / (r.trajectories.max(1) as f64).sqrt()
    );
    for (t, counts) in r.transition_counts.iter().enumerate() {
        let _ = writeln!(s, "transitions {t} -> {} (row = to, column = from):", t + 1);
        for row in counts {
            let _ = writeln!(s, "  {row:?}");
        }
    }
    for p in &r.examples {
        let path: Vec<String> = p.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "  {}", path.join(" -> "));
    }
    s
}
