use std::fs;
use std::path::Path;

use qpl_core::seqsim::{analytic_correlations, simulated_correlations};
use qpl_core::steering::steering_functional_montecarlo;
use qpl_core::tables::{published_ns, table1, table2, table3, PrintedBound};
use qpl_core::{
    analytic_pair_correlation, build_symmetric_global, chained_report, eta_opt_equatorial, local_analogue,
    simulate_pair, steering_functional, verify_global, AxisFamily, Chained, EffectRecord, GlobalPovm, PovmSet,
    SimMode, SteeringReport, TwoQubitState,
};
use serde_json::{json, Value};

use crate::args::{Command, EtaArg, SamplingArgs, StateArg};
use crate::report::{Cell, Kind, Report, Table};
use crate::CliError;

/// Output of a command: a report, or a raw document written as-is.
pub enum Output {
    Report(Box<Report>),
    Raw(Vec<u8>),
}

pub fn execute(cmd: &Command) -> Result<Output, CliError> {
    let report = match cmd {
        Command::Table1 { .. } => cmd_table1()?,
        Command::Table2 { n, .. } => cmd_table2(n)?,
        Command::Table3 { n, montecarlo, sampling, .. } => cmd_table3(n, montecarlo.then_some(*sampling))?,
        Command::Chained { which, n, eta, montecarlo, sampling, .. } => {
            cmd_chained(*which, *n, *eta, montecarlo.then_some(*sampling))?
        }
        Command::Simulate { n, k, l, eta, sampling, .. } => cmd_simulate(*n, *k, *l, *eta, *sampling)?,
        Command::Steering { n, eta, state, montecarlo, sampling, .. } => {
            cmd_steering(*n, *eta, *state, montecarlo.then_some(*sampling))?
        }
        Command::LocalSteering { n, eta, montecarlo, sampling, .. } => {
            cmd_local_steering(*n, *eta, montecarlo.then_some(*sampling))?
        }
        Command::VerifyGlobal { file, axes, eta, .. } => cmd_verify_global(file, *axes, *eta)?,
        Command::BuildGlobal { axes, eta, output } => {
            let g = cmd_build_global(*axes, *eta)?;
            return match output.format {
                crate::args::Format::Json => {
                    let mut out = serde_json::to_vec_pretty(&g.to_records())
                        .map_err(|e| CliError::new("serialize", e.to_string()))?;
                    out.push(b'\n');
                    Ok(Output::Raw(out))
                }
                crate::args::Format::Csv => Ok(Output::Report(Box::new(effects_report(&g, *axes, *eta)?))),
            };
        }
    };
    Ok(Output::Report(Box::new(report)))
}

fn ns_or_default(ns: &[usize]) -> Vec<usize> {
    if ns.is_empty() {
        published_ns()
    } else {
        ns.to_vec()
    }
}

fn ns_text(ns: &[usize]) -> String {
    ns.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::new("serialize", e.to_string()))
}

pub fn cmd_table1() -> Result<Report, CliError> {
    let mut t = Table::new(&[
        ("label", Kind::Text),
        ("n", Kind::Int),
        ("eta_necessary", Kind::Eta),
        ("eta_sufficient", Kind::Eta),
        ("reference_value", Kind::Eta),
        ("reference_bound", Kind::Text),
    ]);
    for row in table1()? {
        let bound = match row.reference_bound {
            PrintedBound::Both => "both",
            PrintedBound::Necessary => "necessary",
            PrintedBound::Sufficient => "sufficient",
        };
        t.push(vec![
            row.label.into(),
            row.n.into(),
            row.eta_necessary.into(),
            row.eta_sufficient.into(),
            row.reference_value.into(),
            bound.into(),
        ]);
    }
    Ok(Report::new("table1", t))
}

pub fn cmd_table2(ns: &[usize]) -> Result<Report, CliError> {
    let ns = ns_or_default(ns);
    let mut t = Table::new(&[("n", Kind::Int), ("eta_opt", Kind::Eta), ("uola", Kind::Eta), ("reference_value", Kind::Eta)]);
    for row in table2(&ns)? {
        t.push(vec![row.n.into(), row.eta_opt.into(), row.uola.into(), row.reference_value.into()]);
    }
    Ok(Report::new("table2", t).with("n", ns_text(&ns)))
}

pub fn cmd_table3(ns: &[usize], sampling: Option<SamplingArgs>) -> Result<Report, CliError> {
    let ns = ns_or_default(ns);
    let mut t = Table::new(&[
        ("n", Kind::Int),
        ("classical", Kind::Score),
        ("quantum", Kind::Score),
        ("attenuated", Kind::Score),
        ("montecarlo", Kind::Score),
        ("montecarlo_stderr", Kind::Real),
    ]);
    for row in table3(&ns, sampling.map(|s| (s.shots, s.seed)))? {
        t.push(vec![
            row.n.into(),
            row.classical.into(),
            row.quantum.into(),
            row.attenuated.into(),
            row.montecarlo.into(),
            row.montecarlo_stderr.into(),
        ]);
    }
    let r = Report::new("table3", t).with("n", ns_text(&ns));
    Ok(with_sampling(r, sampling))
}

fn with_sampling(r: Report, sampling: Option<SamplingArgs>) -> Report {
    match sampling {
        Some(s) => r.with("mode", "montecarlo").with("shots", s.shots).seeded(s.seed),
        None => r.with("mode", "analytic"),
    }
}

fn sim_mode(sampling: Option<SamplingArgs>) -> SimMode {
    sampling.map_or(SimMode::Analytic, |s| SimMode::MonteCarlo { shots: s.shots, seed: s.seed })
}

pub fn cmd_chained(which: u8, n: usize, eta: EtaArg, sampling: Option<SamplingArgs>) -> Result<Report, CliError> {
    let which_ineq = Chained::try_from(which)?;
    let eta_v = eta.resolve(n)?;
    let corr = match sampling {
        Some(s) => simulated_correlations(n, eta_v, s.shots, s.seed)?,
        None => analytic_correlations(n, eta_v)?,
    };
    let full = chained_report(&corr)?;
    let idx = which_ineq as usize - 1;
    let mut t = Table::new(&[
        ("n", Kind::Int),
        ("which", Kind::Int),
        ("eta", Kind::Eta),
        ("value", Kind::Score),
        ("classical_bound", Kind::Score),
        ("violated", Kind::Flag),
    ]);
    t.push(vec![
        n.into(),
        (which as usize).into(),
        eta_v.into(),
        full.values[idx].into(),
        full.classical_bound.into(),
        full.violated[idx].into(),
    ]);
    let r = Report::new("chained", t).with("which", which).with("n", n).with("eta", eta_v);
    Ok(with_sampling(r, sampling).detail(json!({ "report": to_value(&full)?, "correlations": to_value(&corr)? })))
}

pub fn cmd_simulate(n: usize, k: usize, l: usize, eta: EtaArg, s: SamplingArgs) -> Result<Report, CliError> {
    let eta_v = eta.resolve(n)?;
    let est = simulate_pair(n, k, l, eta_v, s.shots, s.seed)?;
    let exact = analytic_pair_correlation(n, k, l, eta_v)?;
    let mut t = Table::new(&[
        ("n", Kind::Int),
        ("k", Kind::Int),
        ("l", Kind::Int),
        ("eta", Kind::Eta),
        ("mean", Kind::Real),
        ("stderr", Kind::Real),
        ("shots", Kind::Int),
        ("analytic", Kind::Real),
    ]);
    t.push(vec![n.into(), k.into(), l.into(), eta_v.into(), est.mean.into(), est.stderr.into(), est.shots.into(), exact.into()]);
    Ok(Report::new("simulate", t)
        .with("n", n)
        .with("k", k)
        .with("l", l)
        .with("eta", eta_v)
        .with("shots", s.shots)
        .seeded(s.seed))
}

fn steering_table(r: &SteeringReport, state: &str) -> Table {
    let mut t = Table::new(&[
        ("n", Kind::Int),
        ("eta", Kind::Eta),
        ("state", Kind::Text),
        ("functional", Kind::Eta),
        ("bound", Kind::Eta),
        ("violated", Kind::Flag),
        ("stderr", Kind::Real),
    ]);
    t.push(vec![
        r.n.into(),
        r.eta.into(),
        state.into(),
        r.functional.into(),
        r.bound.into(),
        r.violated.into(),
        r.stderr.into(),
    ]);
    t
}

pub fn cmd_steering(n: usize, eta: EtaArg, state: StateArg, sampling: Option<SamplingArgs>) -> Result<Report, CliError> {
    let eta_v = eta.resolve(n)?;
    let (rho, name) = match state {
        StateArg::Bell => (TwoQubitState::singlet(), "bell"),
        StateArg::Mixed => (TwoQubitState::maximally_mixed(), "mixed"),
    };
    let rep = match sampling {
        Some(s) => steering_functional_montecarlo(&rho, n, eta_v, s.shots, s.seed)?,
        None => steering_functional(&rho, n, eta_v)?,
    };
    let r = Report::new("steering", steering_table(&rep, name)).with("n", n).with("eta", eta_v).with("state", name);
    Ok(with_sampling(r, sampling).detail(to_value(&rep)?))
}

pub fn cmd_local_steering(n: usize, eta: EtaArg, sampling: Option<SamplingArgs>) -> Result<Report, CliError> {
    let eta_v = eta.resolve(n)?;
    let rep = local_analogue(n, eta_v, sim_mode(sampling))?;
    let r = Report::new("local-steering", steering_table(&rep, "single-qubit")).with("n", n).with("eta", eta_v);
    Ok(with_sampling(r, sampling).detail(to_value(&rep)?))
}

pub fn read_effect_file(path: &Path) -> Result<GlobalPovm, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    let records: Vec<EffectRecord> =
        serde_json::from_str(&text).map_err(|e| CliError::new("input", format!("{}: {e}", path.display())))?;
    if let Some(bad) = records.iter().find(|r| ![r.c0, r.cx, r.cy, r.cz].iter().all(|x| x.is_finite())) {
        return Err(CliError::new("input", format!("effect {} has a non-finite coefficient", bad.a)));
    }
    Ok(GlobalPovm::from_records(&records)?)
}

fn povm_set(axes: AxisFamily, eta: EtaArg) -> Result<(PovmSet, f64), CliError> {
    let eta_v = match eta {
        EtaArg::Opt => eta_opt_equatorial(axes.n())?,
        EtaArg::Value(v) => v,
    };
    Ok((PovmSet::from_axes(&axes.axes()?, eta_v)?, eta_v))
}

pub fn cmd_verify_global(file: &Path, axes: AxisFamily, eta: EtaArg) -> Result<Report, CliError> {
    let (set, eta_v) = povm_set(axes, eta)?;
    let g = read_effect_file(file)?;
    let rep = verify_global(&g, &set)?;
    let mut t = Table::new(&[
        ("n", Kind::Int),
        ("eta", Kind::Eta),
        ("min_eigenvalue", Kind::Real),
        ("min_eigenvalue_at", Kind::Text),
        ("completeness_residual", Kind::Sci),
        ("marginal_residual", Kind::Sci),
        ("positive", Kind::Flag),
        ("complete", Kind::Flag),
        ("marginals_match", Kind::Flag),
        ("pass", Kind::Flag),
    ]);
    t.push(vec![
        rep.n.into(),
        eta_v.into(),
        rep.min_eigenvalue.into(),
        rep.min_eigenvalue_at.as_str().into(),
        rep.completeness_residual.into(),
        rep.marginal_residual.into(),
        rep.positive.into(),
        rep.complete.into(),
        rep.marginals_match.into(),
        rep.pass.into(),
    ]);
    Ok(Report::new("verify-global", t)
        .with("file", file.display().to_string())
        .with("axes", axes.to_string())
        .with("eta", eta_v)
        .detail(to_value(&rep)?))
}

pub fn cmd_build_global(axes: AxisFamily, eta: EtaArg) -> Result<GlobalPovm, CliError> {
    let (set, _) = povm_set(axes, eta)?;
    Ok(build_symmetric_global(&set)?)
}

fn effects_report(g: &GlobalPovm, axes: AxisFamily, eta: EtaArg) -> Result<Report, CliError> {
    let (_, eta_v) = povm_set(axes, eta)?;
    let mut t = Table::new(&[("a", Kind::Text), ("c0", Kind::Real), ("cx", Kind::Real), ("cy", Kind::Real), ("cz", Kind::Real)]);
    for r in g.to_records() {
        t.push(vec![Cell::Text(r.a), r.c0.into(), r.cx.into(), r.cy.into(), r.cz.into()]);
    }
    Ok(Report::new("build-global", t).with("axes", axes.to_string()).with("eta", eta_v))
}
