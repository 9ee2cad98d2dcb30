//! Relativistic event machinery for the two hidden-communication models.
//!
//! Units: c = 1 throughout; `v_hc` is expressed in units of c. Geometry is
//! one-dimensional. Model 1 coordinates are given in the preferred frame,
//! Model 2 coordinates in the laboratory frame.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::Party;

/// Strict-inequality margin used when comparing times.
const TIME_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum TimingError {
    #[error("device frame velocity |v| = {0} is not below the speed of light")]
    SuperluminalFrame(f64),
    #[error("hidden-communication speed must be positive, got {0}")]
    InvalidHcSpeed(f64),
    #[error("detection delays must be non-negative, got {0}")]
    NegativeDelay(f64),
    #[error("coordinate is not finite")]
    NonFiniteCoordinate,
}

/// A detection event at position x and time t (c = 1). Coordinates are
/// interpreted in the frame fixed by the enclosing model config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub x: f64,
    pub t: f64,
}

impl SpacetimeEvent {
    pub fn new(x: f64, t: f64) -> Self {
        SpacetimeEvent { x, t }
    }
}

/// An unordered pair of parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    pub fn parties(self) -> (Party, Party) {
        match self {
            Pair::AB => (Party::A, Party::B),
            Pair::AC => (Party::A, Party::C),
            Pair::BC => (Party::B, Party::C),
        }
    }
}

/// Correlation status of one pair of parties under a causal model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairLabel {
    /// The hidden communication connects the pair; QM statistics apply.
    #[serde(rename = "qm")]
    QmCorrelated,
    /// Neither detection receives the other's communication.
    #[serde(rename = "no_hc")]
    NoHiddenCommunication,
    /// Multisimultaneity after-after timing; the model leaves its
    /// statistics undefined and this crate only labels it.
    #[serde(rename = "after_after")]
    AfterAfterUndefined,
}

/// Pair labels for all three pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingStructure {
    pub ab: PairLabel,
    pub ac: PairLabel,
    pub bc: PairLabel,
}

impl TimingStructure {
    pub fn get(&self, pair: Pair) -> PairLabel {
        match pair {
            Pair::AB => self.ab,
            Pair::AC => self.ac,
            Pair::BC => self.bc,
        }
    }

    pub fn all_qm() -> Self {
        TimingStructure {
            ab: PairLabel::QmCorrelated,
            ac: PairLabel::QmCorrelated,
            bc: PairLabel::QmCorrelated,
        }
    }

    /// The central three-particle configuration: A-B severed, both
    /// C-pairs quantum correlated.
    pub fn severed_ab() -> Self {
        TimingStructure {
            ab: PairLabel::NoHiddenCommunication,
            ac: PairLabel::QmCorrelated,
            bc: PairLabel::QmCorrelated,
        }
    }

    pub fn pairs_with(&self, label: PairLabel) -> Vec<Pair> {
        Pair::ALL
            .into_iter()
            .filter(|p| self.get(*p) == label)
            .collect()
    }
}

/// Preferred-frame model with finite hidden-communication speed.
/// Events are given in preferred-frame coordinates; detection delays are
/// added to the A and B times before classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model1Config {
    events: [SpacetimeEvent; 3],
    v_hc: f64,
    delay_a: f64,
    delay_b: f64,
}

impl Model1Config {
    pub fn new(
        events: [SpacetimeEvent; 3],
        v_hc: f64,
        delay_a: f64,
        delay_b: f64,
    ) -> Result<Self, TimingError> {
        if !(v_hc > 0.0) || !v_hc.is_finite() {
            return Err(TimingError::InvalidHcSpeed(v_hc));
        }
        for d in [delay_a, delay_b] {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(TimingError::NegativeDelay(d));
            }
        }
        if events.iter().any(|e| !e.x.is_finite() || !e.t.is_finite()) {
            return Err(TimingError::NonFiniteCoordinate);
        }
        Ok(Model1Config {
            events,
            v_hc,
            delay_a,
            delay_b,
        })
    }

    /// The symmetric layout: A at (-x, 0), B at (x, 0), C at (0, t_c).
    pub fn symmetric(x: f64, v_hc: f64, t_c: f64) -> Result<Self, TimingError> {
        Model1Config::new(
            [
                SpacetimeEvent::new(-x, 0.0),
                SpacetimeEvent::new(x, 0.0),
                SpacetimeEvent::new(0.0, t_c),
            ],
            v_hc,
            0.0,
            0.0,
        )
    }

    pub fn with_delays(mut self, delay_a: f64, delay_b: f64) -> Result<Self, TimingError> {
        for d in [delay_a, delay_b] {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(TimingError::NegativeDelay(d));
            }
        }
        self.delay_a = delay_a;
        self.delay_b = delay_b;
        Ok(self)
    }

    pub fn v_hc(&self) -> f64 {
        self.v_hc
    }

    /// Events with delays applied.
    pub fn effective_events(&self) -> [SpacetimeEvent; 3] {
        let [a, b, c] = self.events;
        [
            SpacetimeEvent::new(a.x, a.t + self.delay_a),
            SpacetimeEvent::new(b.x, b.t + self.delay_b),
            c,
        ]
    }
}

/// Multisimultaneity: per-party choice-device rest-frame velocities along
/// x, events in laboratory coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model2Config {
    events: [SpacetimeEvent; 3],
    velocities: [f64; 3],
}

impl Model2Config {
    pub fn new(events: [SpacetimeEvent; 3], velocities: [f64; 3]) -> Result<Self, TimingError> {
        for v in velocities {
            if !(v.abs() < 1.0) {
                return Err(TimingError::SuperluminalFrame(v.abs()));
            }
        }
        if events.iter().any(|e| !e.x.is_finite() || !e.t.is_finite()) {
            return Err(TimingError::NonFiniteCoordinate);
        }
        Ok(Model2Config { events, velocities })
    }

    pub fn events(&self) -> [SpacetimeEvent; 3] {
        self.events
    }

    pub fn velocities(&self) -> [f64; 3] {
        self.velocities
    }

    /// Mirror image of the setup: A and B exchanged, x -> -x, v -> -v.
    pub fn mirrored(&self) -> Self {
        let [a, b, c] = self.events;
        let [va, vb, vc] = self.velocities;
        Model2Config {
            events: [
                SpacetimeEvent::new(-b.x, b.t),
                SpacetimeEvent::new(-a.x, a.t),
                SpacetimeEvent::new(-c.x, c.t),
            ],
            velocities: [-vb, -va, -vc],
        }
    }
}

/// Boosted time coordinate t' = γ(t - v x) of an event in a frame moving
/// with velocity v.
pub fn lorentz_time(event: &SpacetimeEvent, v: f64) -> Result<f64, TimingError> {
    if !(v.abs() < 1.0) {
        return Err(TimingError::SuperluminalFrame(v.abs()));
    }
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    Ok(gamma * (event.t - v * event.x))
}

/// True iff the hidden communication emitted at `src` can reach `dst`:
/// strictly later in the propagation frame and within the v_hc cone.
pub fn hc_reachable(src: &SpacetimeEvent, dst: &SpacetimeEvent, v_hc: f64) -> bool {
    let dt = dst.t - src.t;
    dt > TIME_TOL && (dst.x - src.x).abs() <= v_hc * dt + TIME_TOL
}

/// The open interval of admissible t_C for the symmetric layout:
/// (3x/v_hc, x). Empty iff v_hc <= 3 (with c = 1).
pub fn model1_timing_window(x: f64, v_hc: f64) -> Option<(f64, f64)> {
    assert!(x > 0.0 && v_hc > 0.0);
    let lo = 3.0 * x / v_hc;
    let hi = x;
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Classifies each pair: quantum correlated iff the earlier detection's
/// hidden communication reaches the later one.
pub fn model1_classify(cfg: &Model1Config) -> TimingStructure {
    let events = cfg.effective_events();
    let label = |i: usize, j: usize| {
        if hc_reachable(&events[i], &events[j], cfg.v_hc)
            || hc_reachable(&events[j], &events[i], cfg.v_hc)
        {
            PairLabel::QmCorrelated
        } else {
            PairLabel::NoHiddenCommunication
        }
    };
    TimingStructure {
        ab: label(0, 1),
        ac: label(0, 2),
        bc: label(1, 2),
    }
}

/// Classifies each pair by device-frame time order. A party is "before"
/// iff, in the rest frame of its own choice-device, the other party has
/// not strictly already chosen (simultaneity counts as before). Both
/// before: no hidden communication. Exactly one: quantum correlated.
/// Neither: after-after, left undefined.
pub fn multisim_classify(cfg: &Model2Config) -> Result<TimingStructure, TimingError> {
    let events = cfg.events;
    let velocities = cfg.velocities;
    let is_before = |own: usize, other: usize| -> Result<bool, TimingError> {
        let t_own = lorentz_time(&events[own], velocities[own])?;
        let t_other = lorentz_time(&events[other], velocities[own])?;
        Ok(t_other >= t_own - TIME_TOL)
    };
    let label = |i: usize, j: usize| -> Result<PairLabel, TimingError> {
        Ok(match (is_before(i, j)?, is_before(j, i)?) {
            (true, true) => PairLabel::NoHiddenCommunication,
            (true, false) | (false, true) => PairLabel::QmCorrelated,
            (false, false) => PairLabel::AfterAfterUndefined,
        })
    };
    Ok(TimingStructure {
        ab: label(0, 1)?,
        ac: label(0, 2)?,
        bc: label(1, 2)?,
    })
}
