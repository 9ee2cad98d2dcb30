//! Scenario files: the JSON input format of the `scenario` command.
//!
//! ```json
//! {
//!   "state": "ghz",
//!   "settings": { "a": "z", "b": "z", "c": [0.0, 0.0, 1.0] },
//!   "timing": { "model": "pf", "x": 1.0, "v_hc": 4.0, "t_c": 0.8 },
//!   "mode": "communication_only"
//! }
//! ```
//!
//! States are named (`"ghz"`, `"w"`) or given as eight `[re, im]` pairs;
//! timing is a causal-model config (`"pf"` or `"multisim"`), an explicit
//! pair-label map, or a raw constraint spec. Unknown keys are rejected.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::feasibility::ConstraintSpec;
use crate::quantum::{LocalSetting, MeasurementSettings, Party, QuantumError, StateVector};
use crate::timing::{
    model1_classify, multisim_classify, Model1Config, Model2Config, PairLabel, SpacetimeEvent,
    TimingError, TimingStructure,
};
use crate::witness::{Mode, Scenario, TimingInput};

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("scenario JSON is invalid: {0}")]
    Parse(String),
    #[error("unknown named state {0:?}; use \"ghz\", \"w\", or an amplitude list")]
    UnknownState(String),
    #[error("state must list exactly 8 amplitudes, got {0}")]
    WrongAmplitudeCount(usize),
    #[error("unknown named observable {0:?}; use \"x\", \"y\", \"z\", or a Bloch triple")]
    UnknownObservable(String),
    #[error("party {0:?} lists multiple settings; multi-setting runs go through `sweep --box-chsh`")]
    MultiSettingUnsupported(Party),
    #[error("events and velocities must each list exactly 3 entries")]
    WrongMultisimArity,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Timing(#[from] TimingError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub state: StateSpec,
    pub settings: SettingsSpec,
    pub timing: TimingSpec,
    pub mode: Mode,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default)]
    pub feasibility: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Amplitudes(Vec<[f64; 2]>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsSpec {
    pub a: BlochSpec,
    pub b: BlochSpec,
    pub c: BlochSpec,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum BlochSpec {
    Named(String),
    Vector([f64; 3]),
    List(Vec<serde_json::Value>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum TimingSpec {
    Model(ModelSpec),
    Labels(LabelsSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Pf {
        x: f64,
        v_hc: f64,
        t_c: f64,
        #[serde(default)]
        delay_a: f64,
        #[serde(default)]
        delay_b: f64,
    },
    Multisim {
        events: Vec<SpacetimeEvent>,
        velocities: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsSpec {
    pub labels: LabelMap,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelMap {
    pub ab: PairLabel,
    pub ac: PairLabel,
    pub bc: PairLabel,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub constraints: ConstraintSpec,
}

/// Builds a named or explicit state.
pub fn parse_state(spec: &StateSpec) -> Result<StateVector, ScenarioError> {
    match spec {
        StateSpec::Named(name) => match name.as_str() {
            "ghz" => Ok(StateVector::ghz()),
            "w" => Ok(StateVector::w()),
            other => Err(ScenarioError::UnknownState(other.to_string())),
        },
        StateSpec::Amplitudes(pairs) => {
            if pairs.len() != 8 {
                return Err(ScenarioError::WrongAmplitudeCount(pairs.len()));
            }
            let mut amps = [Complex64::ZERO; 8];
            for (slot, [re, im]) in amps.iter_mut().zip(pairs) {
                *slot = Complex64::new(*re, *im);
            }
            Ok(StateVector::new(amps)?)
        }
    }
}

/// Named axis or explicit Bloch vector for one party.
pub fn parse_setting(party: Party, spec: &BlochSpec) -> Result<LocalSetting, ScenarioError> {
    match spec {
        BlochSpec::Named(name) => named_setting(party, name),
        BlochSpec::Vector(bloch) => Ok(LocalSetting::new(party, *bloch)?),
        BlochSpec::List(_) => Err(ScenarioError::MultiSettingUnsupported(party)),
    }
}

pub fn named_setting(party: Party, name: &str) -> Result<LocalSetting, ScenarioError> {
    match name {
        "x" => Ok(LocalSetting::x(party)),
        "y" => Ok(LocalSetting::y(party)),
        "z" => Ok(LocalSetting::z(party)),
        other => Err(ScenarioError::UnknownObservable(other.to_string())),
    }
}

fn build_timing(spec: &TimingSpec) -> Result<TimingInput, ScenarioError> {
    match spec {
        TimingSpec::Model(ModelSpec::Pf {
            x,
            v_hc,
            t_c,
            delay_a,
            delay_b,
        }) => {
            let cfg = Model1Config::symmetric(*x, *v_hc, *t_c)?.with_delays(*delay_a, *delay_b)?;
            Ok(TimingInput::Structure(model1_classify(&cfg)))
        }
        TimingSpec::Model(ModelSpec::Multisim { events, velocities }) => {
            if events.len() != 3 || velocities.len() != 3 {
                return Err(ScenarioError::WrongMultisimArity);
            }
            let cfg = Model2Config::new(
                [events[0], events[1], events[2]],
                [velocities[0], velocities[1], velocities[2]],
            )?;
            Ok(TimingInput::Structure(multisim_classify(&cfg)?))
        }
        TimingSpec::Labels(labels) => Ok(TimingInput::Structure(TimingStructure {
            ab: labels.labels.ab,
            ac: labels.labels.ac,
            bc: labels.labels.bc,
        })),
        TimingSpec::Explicit(explicit) => Ok(TimingInput::Explicit(explicit.constraints)),
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    /// Validates and assembles the runnable scenario plus the feasibility
    /// tolerance to use.
    pub fn build(&self) -> Result<(Scenario, Option<f64>), ScenarioError> {
        let state = parse_state(&self.state)?;
        let settings = MeasurementSettings::new(
            parse_setting(Party::A, &self.settings.a)?,
            parse_setting(Party::B, &self.settings.b)?,
            parse_setting(Party::C, &self.settings.c)?,
        )?;
        let timing = build_timing(&self.timing)?;
        let tol = self.tolerances.as_ref().and_then(|t| t.feasibility);
        Ok((
            Scenario {
                state,
                settings,
                timing,
                mode: self.mode,
            },
            tol,
        ))
    }
}
