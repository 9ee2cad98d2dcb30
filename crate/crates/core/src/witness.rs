//! Orchestration: from a timing structure and a quantum scenario to a
//! signaling verdict.
//!
//! Condition 1 fixes every single and every quantum-correlated pair at the
//! QM prediction; Condition 2 pins a severed pair to the product of its
//! singles when correlations are assumed to arise only from the hidden
//! communication. The feasibility engine then decides whether any joint
//! distribution survives.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Component, CorrelationTensor};
use crate::feasibility::{
    feasible_region_with_tol, max_min_probability, project_interval, Constraint, ConstraintSpec,
    FeasibilityError, FeasibleRegion, FEAS_TOL,
};
use crate::quantum::{
    correlation_tensor, LocalSetting, MeasurementSettings, QuantumError, StateVector,
};
use crate::timing::{Pair, PairLabel, TimingStructure};

#[derive(Debug, Error, PartialEq)]
pub enum WitnessError {
    #[error("after-after pair present: the model leaves its statistics undefined")]
    AfterAfterPresent,
    #[error("unsupported timing pattern: {0} severed pairs (at most one)")]
    UnsupportedTimingPattern(usize),
    #[error("CHSH box test needs at least 2 settings per side, got {alice}x{bob}")]
    TooFewSettings { alice: usize, bob: usize },
    #[error("CHSH selection index {index} out of range for {side} ({len} settings)")]
    SelectionOutOfRange {
        side: &'static str,
        index: usize,
        len: usize,
    },
    #[error("pair ({n},{m}) already infeasible on its own: stronger signaling witness")]
    EmptyIntervalEncountered { n: usize, m: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),
}

/// How a severed pair is constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Correlations arise only from the hidden communication: a severed
    /// pair factorizes into the product of its singles (Condition 2).
    CommunicationOnly,
    /// Probe for mixed models: severed pairs are left free.
    MixedModelProbe,
}

/// Timing input: either a classified structure or a hand-built spec.
#[derive(Debug, Clone, PartialEq)]
pub enum TimingInput {
    Structure(TimingStructure),
    Explicit(ConstraintSpec),
}

/// One full run: state, joint settings, timing, and mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub state: StateVector,
    pub settings: MeasurementSettings,
    pub timing: TimingInput,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The constraints admit exactly one tensor: the QM point.
    ConsistentUniqueQm,
    /// A nonempty range of tensors is admissible.
    ConsistentRange,
    /// No valid joint distribution exists; the model signals.
    SignalingWitness,
}

/// Feasible interval of a projected component, or Empty when the region
/// has no points. Serializes as `[lo, hi]` or the string `"empty"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Empty,
    Range(f64, f64),
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Interval::Empty => serializer.serialize_str("empty"),
            Interval::Range(lo, hi) => [lo, hi].serialize(serializer),
        }
    }
}

/// Outcome of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub qm_tensor: CorrelationTensor,
    pub constraints: ConstraintSpec,
    pub region: FeasibleRegion,
    pub e_ab_interval: Interval,
    /// Best achievable minimum probability over the free components;
    /// negative iff the region is empty.
    pub worst_probability: f64,
    pub verdict: Verdict,
}

fn pair_component(pair: Pair) -> Component {
    match pair {
        Pair::AB => Component::EAB,
        Pair::AC => Component::EAC,
        Pair::BC => Component::EBC,
    }
}

/// Translates the timing structure into a constraint spec against the
/// scenario's QM correlators.
pub fn build_constraints(scenario: &Scenario) -> Result<ConstraintSpec, WitnessError> {
    let structure = match &scenario.timing {
        TimingInput::Explicit(spec) => return Ok(*spec),
        TimingInput::Structure(s) => *s,
    };
    if scenario.mode == Mode::CommunicationOnly
        && !structure.pairs_with(PairLabel::AfterAfterUndefined).is_empty()
    {
        return Err(WitnessError::AfterAfterPresent);
    }
    let severed = structure.pairs_with(PairLabel::NoHiddenCommunication);
    if severed.len() > 1 {
        return Err(WitnessError::UnsupportedTimingPattern(severed.len()));
    }

    let qm = correlation_tensor(&scenario.state, &scenario.settings)?;
    let mut spec = ConstraintSpec::fixed_at(&qm);
    let mut all_qm = true;
    for pair in Pair::ALL {
        let component = pair_component(pair);
        match structure.get(pair) {
            PairLabel::QmCorrelated => {}
            PairLabel::NoHiddenCommunication => {
                all_qm = false;
                match scenario.mode {
                    Mode::CommunicationOnly => spec.set(component, Constraint::Product),
                    Mode::MixedModelProbe => spec.set(component, Constraint::Free),
                }
            }
            PairLabel::AfterAfterUndefined => {
                // Probe mode only; no correlator constraint is assigned.
                all_qm = false;
                spec.set(component, Constraint::Free);
            }
        }
    }
    if !all_qm {
        spec.set(Component::EABC, Constraint::Free);
    }
    Ok(spec)
}

/// Runs the full pipeline with the default feasibility tolerance.
pub fn run_scenario(scenario: &Scenario) -> Result<WitnessReport, WitnessError> {
    run_scenario_with_tol(scenario, FEAS_TOL)
}

pub fn run_scenario_with_tol(
    scenario: &Scenario,
    tol: f64,
) -> Result<WitnessReport, WitnessError> {
    let qm_tensor = correlation_tensor(&scenario.state, &scenario.settings)?;
    let constraints = build_constraints(scenario)?;
    let region = feasible_region_with_tol(&constraints, tol)?;
    let (worst_probability, _) = max_min_probability(&constraints)?;

    let e_ab_interval = if region.free.contains(&Component::EAB) {
        match project_interval(&region, Component::EAB)? {
            Some((lo, hi)) => Interval::Range(lo, hi),
            None => Interval::Empty,
        }
    } else if region.empty {
        Interval::Empty
    } else {
        let v = constraints
            .resolved_value(Component::EAB)
            .expect("non-free component resolves");
        Interval::Range(v, v)
    };

    let verdict = if region.empty {
        Verdict::SignalingWitness
    } else if region.is_point() {
        Verdict::ConsistentUniqueQm
    } else {
        Verdict::ConsistentRange
    };

    if region.empty != (worst_probability < -tol) {
        return Err(WitnessError::InternalInconsistency(format!(
            "region emptiness ({}) disagrees with max-min probability {worst_probability}",
            region.empty
        )));
    }

    Ok(WitnessReport {
        qm_tensor,
        constraints,
        region,
        e_ab_interval,
        worst_probability,
        verdict,
    })
}

/// Which two settings per side enter the CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChshSelection {
    pub alice: [usize; 2],
    pub bob: [usize; 2],
}

impl ChshSelection {
    pub fn first_two() -> Self {
        ChshSelection {
            alice: [0, 1],
            bob: [0, 1],
        }
    }
}

/// Feasible A-B interval for one (n, m) setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshPairInterval {
    pub n: usize,
    pub m: usize,
    pub e_ab_qm: f64,
    pub e_ab_lo: f64,
    pub e_ab_hi: f64,
}

/// Interval-box CHSH test: per-setting-pair feasibility intervals treated
/// independently, then the CHSH extremes over the box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshBox {
    pub pairs: Vec<ChshPairInterval>,
    /// Sign pattern of S = E11 + E12 + E21 - E22.
    pub signs: [[f64; 2]; 2],
    pub qm_chsh: f64,
    pub min_chsh: f64,
    pub max_chsh: f64,
}

/// For each selected Alice/Bob setting pair, fixes Condition 1 from QM
/// (singles and the two C-pairs) with the A-B correlator free, projects
/// its feasible interval, and minimizes/maximizes the CHSH combination
/// over the interval box. Both extremes are attained at per-term interval
/// endpoints by linearity.
pub fn mixed_model_box_test(
    state: &StateVector,
    alice_settings: &[LocalSetting],
    bob_settings: &[LocalSetting],
    charlie_setting: &LocalSetting,
    selection: ChshSelection,
) -> Result<ChshBox, WitnessError> {
    if alice_settings.len() < 2 || bob_settings.len() < 2 {
        return Err(WitnessError::TooFewSettings {
            alice: alice_settings.len(),
            bob: bob_settings.len(),
        });
    }
    for (side, indices, len) in [
        ("alice", selection.alice, alice_settings.len()),
        ("bob", selection.bob, bob_settings.len()),
    ] {
        for index in indices {
            if index >= len {
                return Err(WitnessError::SelectionOutOfRange { side, index, len });
            }
        }
    }

    let signs = [[1.0, 1.0], [1.0, -1.0]];
    let mut pairs = Vec::with_capacity(4);
    let mut qm_chsh = 0.0;
    let mut min_chsh = 0.0;
    let mut max_chsh = 0.0;
    for (i, &n) in selection.alice.iter().enumerate() {
        for (j, &m) in selection.bob.iter().enumerate() {
            let settings = MeasurementSettings::new(
                alice_settings[n],
                bob_settings[m],
                *charlie_setting,
            )?;
            let qm = correlation_tensor(state, &settings)?;
            let mut spec = ConstraintSpec::fixed_at(&qm);
            spec.set(Component::EAB, Constraint::Free);
            spec.set(Component::EABC, Constraint::Free);
            let region = feasible_region_with_tol(&spec, FEAS_TOL)?;
            let Some((lo, hi)) = project_interval(&region, Component::EAB)? else {
                return Err(WitnessError::EmptyIntervalEncountered { n, m });
            };
            let sign = signs[i][j];
            qm_chsh += sign * qm.e_ab;
            min_chsh += if sign > 0.0 { sign * lo } else { sign * hi };
            max_chsh += if sign > 0.0 { sign * hi } else { sign * lo };
            pairs.push(ChshPairInterval {
                n,
                m,
                e_ab_qm: qm.e_ab,
                e_ab_lo: lo,
                e_ab_hi: hi,
            });
        }
    }
    Ok(ChshBox {
        pairs,
        signs,
        qm_chsh,
        min_chsh,
        max_chsh,
    })
}

/// Visibility bounds for the A-B correlator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityReport {
    pub e_ab_qm: f64,
    /// Smallest feasible scaling V of the QM value.
    pub v_min: f64,
    /// Largest feasible scaling; can exceed 1 when the feasible interval
    /// reaches beyond the QM value.
    pub v_max: f64,
}

/// Maps the feasible A-B interval (Condition 1 fixed, e_ab and e_abc
/// free) through division by the QM value.
pub fn visibility_report(
    state: &StateVector,
    settings: &MeasurementSettings,
) -> Result<VisibilityReport, WitnessError> {
    let qm = correlation_tensor(state, settings)?;
    if qm.e_ab.abs() < 1e-12 {
        return Err(WitnessError::Feasibility(FeasibilityError::ZeroQMValue(
            Component::EAB,
        )));
    }
    let mut spec = ConstraintSpec::fixed_at(&qm);
    spec.set(Component::EAB, Constraint::Free);
    spec.set(Component::EABC, Constraint::Free);
    let region = feasible_region_with_tol(&spec, FEAS_TOL)?;
    let Some((lo, hi)) = project_interval(&region, Component::EAB)? else {
        return Err(WitnessError::InternalInconsistency(
            "QM tensor itself infeasible".into(),
        ));
    };
    let (v1, v2) = (lo / qm.e_ab, hi / qm.e_ab);
    Ok(VisibilityReport {
        e_ab_qm: qm.e_ab,
        v_min: v1.min(v2),
        v_max: v1.max(v2),
    })
}
