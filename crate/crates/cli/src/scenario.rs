//! Scenario files: strict JSON with `"auto"`-or-number settings.

use std::fmt;
use std::path::Path;

use mzi_opt_core::prelude::{apply_pmc, InputState, ModeSpec, PmcId, Reference, Scheme};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AutoTag {
    Auto,
}

/// A value the optimizer may choose (`"auto"`) or a fixed number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Setting {
    #[default]
    #[serde(with = "auto_tag")]
    Auto,
    Fixed(f64),
}

mod auto_tag {
    use super::AutoTag;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&AutoTag::Auto, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        AutoTag::deserialize(d).map(|_| ())
    }
}

impl Setting {
    pub fn fixed(self) -> Option<f64> {
        match self {
            Setting::Auto => None,
            Setting::Fixed(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Mode {
    Vacuum,
    Coherent { amplitude: f64, phase: f64 },
    SqueezedVacuum { squeeze: f64, squeeze_phase: f64 },
    SqueezedCoherent { amplitude: f64, phase: f64, squeeze: f64, squeeze_phase: f64 },
    Fock { n: u32 },
}

impl From<Mode> for ModeSpec {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Vacuum => ModeSpec::Vacuum,
            Mode::Coherent { amplitude, phase } => ModeSpec::Coherent { amplitude, phase },
            Mode::SqueezedVacuum { squeeze, squeeze_phase } => ModeSpec::SqueezedVacuum { squeeze, squeeze_phase },
            Mode::SqueezedCoherent { amplitude, phase, squeeze, squeeze_phase } => {
                ModeSpec::SqueezedCoherent { amplitude, phase, squeeze, squeeze_phase }
            }
            Mode::Fock { n } => ModeSpec::Fock { n },
        }
    }
}

impl Mode {
    /// Same mode with a new coherent amplitude, if it has one.
    fn with_amplitude(self, a: f64) -> Option<Mode> {
        match self {
            Mode::Coherent { phase, .. } => Some(Mode::Coherent { amplitude: a, phase }),
            Mode::SqueezedCoherent { phase, squeeze, squeeze_phase, .. } => {
                Some(Mode::SqueezedCoherent { amplitude: a, phase, squeeze, squeeze_phase })
            }
            _ => None,
        }
    }
}

/// Port 0 carries `β`, `ξ` or the Fock state; port 1 carries `α`, `ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    pub port0: Mode,
    pub port1: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pmc {
    CohSqzVac,
    SqzCohSqzVac,
    Pmc1,
    Pmc2,
    Pmc3,
}

impl From<Pmc> for PmcId {
    fn from(p: Pmc) -> Self {
        match p {
            Pmc::CohSqzVac => PmcId::CohSqzVac,
            Pmc::SqzCohSqzVac => PmcId::SqzCohSqzVac,
            Pmc::Pmc1 => PmcId::Pmc1,
            Pmc::Pmc2 => PmcId::Pmc2,
            Pmc::Pmc3 => PmcId::Pmc3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Difference,
    SingleMode,
    Homodyne,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Difference => Scheme::DifferenceIntensity,
            SchemeName::SingleMode => Scheme::SingleModeIntensity,
            SchemeName::Homodyne => Scheme::BalancedHomodyne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceName {
    None,
    External,
}

impl From<ReferenceName> for Reference {
    fn from(r: ReferenceName) -> Self {
        match r {
            ReferenceName::None => Reference::None,
            ReferenceName::External => Reference::External,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Working point in radians.
    Phi,
    /// Second beam-splitter transmittance.
    Tau2,
    /// First beam-splitter transmittance.
    Tau1,
    /// Coherent amplitude `|α|` of port 1.
    Alpha,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Phi => "phi",
            SweepVariable::Tau2 => "tau2",
            SweepVariable::Tau1 => "tau1",
            SweepVariable::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Sweep {
    /// Grid values; a degenerate range yields a single point.
    pub fn values(&self) -> Vec<f64> {
        if self.from == self.to {
            return vec![self.from];
        }
        let n = self.points.max(2);
        (0..n).map(|k| self.from + (self.to - self.from) * k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub input: Input,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmc: Option<Pmc>,
    pub scheme: SchemeName,
    pub reference: ReferenceName,
    #[serde(default)]
    pub bs1: Setting,
    #[serde(default)]
    pub bs2: Setting,
    #[serde(default)]
    pub working_point: Setting,
    #[serde(default)]
    pub local_oscillator: Setting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub output_path: String,
}

/// A rule a scenario breaks, with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, Violation> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Violation { path: if path == "." { "$".into() } else { path }, message: e.into_inner().to_string() }
        })
    }

    pub fn from_file(path: &Path) -> std::io::Result<Result<Self, Violation>> {
        Ok(Self::from_json(&std::fs::read_to_string(path)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }

    /// Input state after the phase-matching condition, with `|α|` optionally replaced.
    pub fn state_with_alpha(&self, alpha: Option<f64>) -> Result<InputState, String> {
        let port1 = match alpha {
            None => self.input.port1,
            Some(a) => self.input.port1.with_amplitude(a).ok_or("port1 has no coherent amplitude to sweep")?,
        };
        let st = InputState::new(self.input.port0.into(), port1.into()).map_err(|e| e.to_string())?;
        match self.pmc {
            Some(p) => apply_pmc(&st, p.into()).map_err(|e| e.to_string()),
            None => Ok(st),
        }
    }

    pub fn state(&self) -> Result<InputState, String> {
        self.state_with_alpha(None)
    }

    /// Every rule violation; never panics.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |path: &str, message: String| out.push(Violation { path: path.into(), message });

        for (path, mode) in [("input.port0", self.input.port0), ("input.port1", self.input.port1)] {
            if let Err(e) = ModeSpec::from(mode).validate() {
                push(path, e.to_string());
            }
        }
        if let Err(e) = self.state() {
            push(if self.pmc.is_some() { "pmc" } else { "input" }, e);
        }
        if self.scheme == SchemeName::Homodyne && self.reference != ReferenceName::External {
            push("reference", "homodyne detection requires reference = external".into());
        }
        for (path, name, s) in [("bs1", "bs1", self.bs1), ("bs2", "bs2", self.bs2)] {
            if let Setting::Fixed(v) = s {
                if !(0.0..=1.0).contains(&v) {
                    push(path, format!("{name} transmittance out of [0,1]: {v}"));
                }
            }
        }
        for (path, s) in [("working_point", self.working_point), ("local_oscillator", self.local_oscillator)] {
            if let Setting::Fixed(v) = s {
                if !v.is_finite() {
                    push(path, format!("angle must be finite, got {v}"));
                }
            }
        }
        if let Some(sw) = &self.sweep {
            if sw.points < 2 {
                push("sweep.points", format!("at least 2 points required, got {}", sw.points));
            }
            if !sw.from.is_finite() || !sw.to.is_finite() {
                push("sweep", "range must be finite".into());
            }
            match sw.variable {
                SweepVariable::Tau1 | SweepVariable::Tau2 => {
                    for (p, v) in [("sweep.from", sw.from), ("sweep.to", sw.to)] {
                        if !(0.0..=1.0).contains(&v) {
                            push(p, format!("transmittance out of [0,1]: {v}"));
                        }
                    }
                }
                SweepVariable::Alpha => {
                    if self.input.port1.with_amplitude(0.0).is_none() {
                        push("sweep.variable", "alpha sweep needs a coherent amplitude on port1".into());
                    }
                    for (p, v) in [("sweep.from", sw.from), ("sweep.to", sw.to)] {
                        if v < 0.0 {
                            push(p, format!("amplitude must be nonnegative: {v}"));
                        }
                    }
                }
                SweepVariable::Phi => {}
            }
        }
        if self.output_path.trim().is_empty() {
            push("output_path", "must not be empty".into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "input": {"port0": {"kind": "squeezed_vacuum", "squeeze": 1.2, "squeeze_phase": 0.0},
                  "port1": {"kind": "coherent", "amplitude": 100.0, "phase": 0.0}},
        "pmc": "coh_sqz_vac",
        "scheme": "homodyne",
        "reference": "external",
        "bs1": "auto",
        "bs2": 0.45,
        "output_path": "out.csv"
    }"#;

    #[test]
    fn parses_auto_and_numbers() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.bs1, Setting::Auto);
        assert_eq!(s.bs2, Setting::Fixed(0.45));
        assert_eq!(s.working_point, Setting::Auto);
        assert!(s.validate().is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let text = MINIMAL.replace("\"squeeze\": 1.2", "\"squeeze\": 1.2, \"sqeeze\": 1");
        let err = Scenario::from_json(&text).unwrap_err();
        assert!(err.path.starts_with("input.port0"), "{err}");
        let text = MINIMAL.replace("\"scheme\"", "\"extra\": 1, \"scheme\"");
        assert!(Scenario::from_json(&text).is_err());
    }

    #[test]
    fn bad_setting_string_is_rejected() {
        let text = MINIMAL.replace("\"bs1\": \"auto\"", "\"bs1\": \"automatic\"");
        assert!(Scenario::from_json(&text).is_err());
    }

    #[test]
    fn violations() {
        let mut s = Scenario::from_json(MINIMAL).unwrap();
        s.bs1 = Setting::Fixed(1.5);
        s.reference = ReferenceName::None;
        let v = s.validate();
        assert!(v.iter().any(|v| v.message == "bs1 transmittance out of [0,1]: 1.5"));
        assert!(v.iter().any(|v| v.path == "reference"));

        let mut s = Scenario::from_json(MINIMAL).unwrap();
        s.pmc = Some(Pmc::Pmc1);
        assert!(s.validate().iter().any(|v| v.path == "pmc"));
    }

    #[test]
    fn degenerate_sweep_is_one_point() {
        let sw = Sweep { variable: SweepVariable::Phi, from: 1.0, to: 1.0, points: 50 };
        assert_eq!(sw.values(), vec![1.0]);
        let sw = Sweep { variable: SweepVariable::Phi, from: 0.0, to: 1.0, points: 5 };
        assert_eq!(sw.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn json_round_trip() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }
}
