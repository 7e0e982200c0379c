//! Scenario evaluation: optimization summary and sweep rows.

use std::io::Write;
use std::path::Path;

use mzi_opt_core::optimize::evaluate;
use mzi_opt_core::prelude::{
    extinction_rate, fisher_matrix, joint_optimize_with, mean_n4, qfi_report, schwinger_moments, tau_to_theta, BsAngles,
    Error, InputState, JointOptions, OptimizationReport, Reference, Scheme, StateMoments,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::scenario::{Scenario, Setting, SweepVariable};

/// Why a command failed, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(Vec<String>),
    Computation(Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Computation(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(v) => write!(f, "invalid scenario:\n  {}", v.join("\n  ")),
            Failure::Computation(e) => write!(f, "computation failed ({e:?}): {e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e)
    }
}

/// One machine-parsable line per evaluated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scheme: &'static str,
    pub tau: f64,
    pub tau_prime: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub phi: f64,
    pub phi_local: f64,
    pub delta_phi: f64,
    pub qcrb_2p: f64,
    pub qcrb_i: f64,
    pub extinction_rate: Option<f64>,
    pub hessian_verified: bool,
    pub degenerate: bool,
    pub grid_fallback: bool,
}

/// One CSV row; `None` fields are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub value: f64,
    pub delta_phi: Option<f64>,
    pub qcrb_2p: Option<f64>,
    pub qcrb_i: Option<f64>,
    pub extinction_rate: Option<f64>,
    pub mean_n4: Option<f64>,
}

pub const CSV_HEADER: [&str; 7] = ["sweep_var", "value", "delta_phi", "qcrb_2p", "qcrb_i", "extinction_rate", "mean_n4"];

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::DifferenceIntensity => "difference",
        Scheme::SingleModeIntensity => "single_mode",
        Scheme::BalancedHomodyne => "homodyne",
    }
}

fn validated(s: &Scenario) -> Result<InputState, Failure> {
    let v = s.validate();
    if !v.is_empty() {
        return Err(Failure::Validation(v.iter().map(|v| v.to_string()).collect()));
    }
    s.state().map_err(|e| Failure::Validation(vec![e]))
}

/// Joint optimum with the fixed settings of `s` held.
fn resolve(s: &Scenario, state: &InputState, bs1: Setting, bs2: Setting) -> Result<OptimizationReport, Error> {
    let scheme: Scheme = s.scheme.into();
    let reference: Reference = s.reference.into();
    let opts = JointOptions {
        theta: bs1.fixed().map(tau_to_theta).transpose()?,
        theta_prime: bs2.fixed().map(tau_to_theta).transpose()?,
        phi: s.working_point.fixed(),
        phi_local: s.local_oscillator.fixed(),
        initial: None,
    };
    joint_optimize_with(state, scheme, reference, opts)
}

fn summarize(s: &Scenario, state: &InputState, rep: &OptimizationReport) -> Result<Summary, Error> {
    let scheme: Scheme = s.scheme.into();
    let qfi = qfi_report(fisher_matrix(state, rep.theta_opt))?;
    let m = schwinger_moments(state);
    let extinction = match scheme {
        Scheme::BalancedHomodyne => None,
        _ => Some(extinction_rate(&m, rep.angles(), rep.phi_opt)?),
    };
    Ok(Summary {
        scheme: scheme_name(scheme),
        tau: rep.tau(),
        tau_prime: rep.tau_prime(),
        theta: rep.theta_opt,
        theta_prime: rep.theta_prime_opt,
        phi: rep.phi_opt,
        phi_local: rep.phi_local_opt,
        delta_phi: rep.delta_phi_opt,
        qcrb_2p: qfi.qcrb_2p,
        qcrb_i: qfi.qcrb_i,
        extinction_rate: extinction,
        hessian_verified: rep.hessian_verified,
        degenerate: rep.degenerate,
        grid_fallback: rep.grid_fallback,
    })
}

/// Row at an explicit configuration; quantities that are undefined there stay empty.
fn row_at(value: f64, state: &InputState, scheme: Scheme, angles: BsAngles, phi: f64, phi_local: f64) -> Row {
    let moments = StateMoments::of(state);
    let qfi = qfi_report(fisher_matrix(state, angles.theta)).ok();
    let finite = |x: f64| x.is_finite().then_some(x);
    Row {
        value,
        delta_phi: evaluate(&moments, scheme, angles, phi, phi_local).ok().and_then(finite),
        qcrb_2p: qfi.and_then(|q| finite(q.qcrb_2p)),
        qcrb_i: qfi.and_then(|q| finite(q.qcrb_i)),
        extinction_rate: extinction_rate(&moments.schwinger, angles, phi).ok(),
        mean_n4: Some(mean_n4(&moments.schwinger, angles, phi)),
    }
}

/// Row after re-optimizing every `"auto"` setting at the swept point.
fn row_reoptimized(value: f64, s: &Scenario, state: &InputState, bs1: Setting) -> Row {
    let scheme: Scheme = s.scheme.into();
    match resolve(s, state, bs1, s.bs2) {
        Ok(rep) => row_at(value, state, scheme, rep.angles(), rep.phi_opt, rep.phi_local_opt),
        Err(_) => {
            // The optimum is undefined here; keep whatever is still meaningful.
            let theta = bs1.fixed().and_then(|t| tau_to_theta(t).ok());
            let qfi = theta.and_then(|t| qfi_report(fisher_matrix(state, t)).ok());
            Row {
                value,
                delta_phi: None,
                qcrb_2p: qfi.map(|q| q.qcrb_2p).filter(|x| x.is_finite()),
                qcrb_i: qfi.map(|q| q.qcrb_i).filter(|x| x.is_finite()),
                extinction_rate: None,
                mean_n4: None,
            }
        }
    }
}

/// Optimum summary plus, when a sweep is configured, its rows.
pub struct Outcome {
    pub summary: Summary,
    pub rows: Vec<Row>,
}

pub fn evaluate_scenario(s: &Scenario) -> Result<Outcome, Failure> {
    let state = validated(s)?;
    let rep = resolve(s, &state, s.bs1, s.bs2)?;
    let summary = summarize(s, &state, &rep)?;
    let rows = match &s.sweep {
        None => vec![row_at(f64::NAN, &state, s.scheme.into(), rep.angles(), rep.phi_opt, rep.phi_local_opt)],
        Some(_) => sweep_rows(s, &state, &rep)?,
    };
    Ok(Outcome { summary, rows })
}

/// Rows of the configured sweep. `phi` and `tau2` vary one angle around the
/// resolved optimum; `tau1` and `alpha` re-optimize the `"auto"` settings at
/// every point.
pub fn sweep_rows(s: &Scenario, state: &InputState, rep: &OptimizationReport) -> Result<Vec<Row>, Failure> {
    let sw = s.sweep.as_ref().ok_or_else(|| Failure::Validation(vec!["sweep: not configured".into()]))?;
    let scheme: Scheme = s.scheme.into();
    let values = sw.values();
    let rows = values
        .par_iter()
        .map(|&v| match sw.variable {
            SweepVariable::Phi => row_at(v, state, scheme, rep.angles(), v, rep.phi_local_opt),
            SweepVariable::Tau2 => match tau_to_theta(v) {
                Ok(tp) => row_at(v, state, scheme, BsAngles { theta: rep.theta_opt, theta_prime: tp }, rep.phi_opt, rep.phi_local_opt),
                Err(_) => Row { value: v, delta_phi: None, qcrb_2p: None, qcrb_i: None, extinction_rate: None, mean_n4: None },
            },
            SweepVariable::Tau1 => row_reoptimized(v, s, state, Setting::Fixed(v)),
            SweepVariable::Alpha => match s.state_with_alpha(Some(v)) {
                Ok(st) => row_reoptimized(v, s, &st, s.bs1),
                Err(_) => Row { value: v, delta_phi: None, qcrb_2p: None, qcrb_i: None, extinction_rate: None, mean_n4: None },
            },
        })
        .collect();
    Ok(rows)
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    format!("{x:.16e}")
}

pub fn csv_bytes(sweep_var: &str, rows: &[Row]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    let opt = |x: Option<f64>| x.map(format_float).unwrap_or_default();
    for r in rows {
        w.write_record([
            sweep_var.to_string(),
            format_float(r.value),
            opt(r.delta_phi),
            opt(r.qcrb_2p),
            opt(r.qcrb_i),
            opt(r.extinction_rate),
            opt(r.mean_n4),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Evaluates `s`, writes its CSV under `base` and returns the summary.
pub fn run_to(s: &Scenario, base: &Path) -> Result<Summary, Failure> {
    let out = evaluate_scenario(s)?;
    let var = s.sweep.map(|sw| sw.variable.name()).unwrap_or("none");
    write_atomic(&base.join(&s.output_path), &csv_bytes(var, &out.rows)?)?;
    Ok(out.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::NAN), "");
    }

    #[test]
    fn csv_has_header_and_empty_fields() {
        let rows = [Row { value: 1.0, delta_phi: None, qcrb_2p: Some(0.5), qcrb_i: None, extinction_rate: None, mean_n4: None }];
        let text = String::from_utf8(csv_bytes("phi", &rows).unwrap()).unwrap();
        assert_eq!(
            text,
            "sweep_var,value,delta_phi,qcrb_2p,qcrb_i,extinction_rate,mean_n4\nphi,1.0000000000000000e0,,5.0000000000000000e-1,,,\n"
        );
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested/out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
    }
}
