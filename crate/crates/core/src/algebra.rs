//! Model-independent correlator/probability algebra for three dichotomic
//! parties.
//!
//! Any tripartite ±1-outcome distribution is parameterized by seven
//! correlators (three singles, three pairs, one triple):
//!
//! ```text
//! p(ξ) = (1/8) [ 1 + ξ_A E_A + ξ_B E_B + ξ_C E_C
//!              + ξ_Aξ_B E_AB + ξ_Aξ_C E_AC + ξ_Bξ_C E_BC
//!              + ξ_Aξ_Bξ_C E_ABC ]
//! ```
//!
//! `Distribution3` deliberately admits negative entries: the negative
//! probability forced by an infeasible constraint set is the computed
//! witness object, not an exception.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{Outcome, OutcomeTriple, Party};

/// Default tolerance separating rounding noise from genuine negativity.
pub const VALIDITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("tensor component {component} = {value} lies outside [-1, 1]")]
    ComponentOutOfRange { component: Component, value: f64 },
    #[error("distribution is not normalized: sum deviates from 1 by {0:.3e}")]
    NotNormalized(f64),
    #[error("marginal subset must name at least one party")]
    EmptySubset,
    #[error("marginal subset repeats party {0:?}")]
    DuplicateParty(Party),
    #[error("marginal subset must be a proper subset of the three parties")]
    FullSubset,
}

/// Identifies one of the seven correlator components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "e_a")]
    EA,
    #[serde(rename = "e_b")]
    EB,
    #[serde(rename = "e_c")]
    EC,
    #[serde(rename = "e_ab")]
    EAB,
    #[serde(rename = "e_ac")]
    EAC,
    #[serde(rename = "e_bc")]
    EBC,
    #[serde(rename = "e_abc")]
    EABC,
}

impl Component {
    pub const ALL: [Component; 7] = [
        Component::EA,
        Component::EB,
        Component::EC,
        Component::EAB,
        Component::EAC,
        Component::EBC,
        Component::EABC,
    ];

    pub const SINGLES: [Component; 3] = [Component::EA, Component::EB, Component::EC];
    pub const PAIRS: [Component; 3] = [Component::EAB, Component::EAC, Component::EBC];

    pub fn name(self) -> &'static str {
        match self {
            Component::EA => "e_a",
            Component::EB => "e_b",
            Component::EC => "e_c",
            Component::EAB => "e_ab",
            Component::EAC => "e_ac",
            Component::EBC => "e_bc",
            Component::EABC => "e_abc",
        }
    }

    /// Parties whose outcome signs multiply into this correlator.
    pub fn parties(self) -> &'static [Party] {
        match self {
            Component::EA => &[Party::A],
            Component::EB => &[Party::B],
            Component::EC => &[Party::C],
            Component::EAB => &[Party::A, Party::B],
            Component::EAC => &[Party::A, Party::C],
            Component::EBC => &[Party::B, Party::C],
            Component::EABC => &[Party::A, Party::B, Party::C],
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, Component::EAB | Component::EAC | Component::EBC)
    }

    /// Singles whose product constrains this pair component.
    pub fn factor_singles(self) -> Option<(Component, Component)> {
        match self {
            Component::EAB => Some((Component::EA, Component::EB)),
            Component::EAC => Some((Component::EA, Component::EC)),
            Component::EBC => Some((Component::EB, Component::EC)),
            _ => None,
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The ±1 coefficient multiplying a component in the expansion above.
///
/// The sign bookkeeping of the whole crate funnels through this function;
/// the probability formula, its inverse, and the feasibility inequalities
/// are all generated from it rather than hand-entered.
pub fn eq_coefficient(component: Component, outcome: OutcomeTriple) -> f64 {
    component
        .parties()
        .iter()
        .map(|p| outcome.get(*p).sign())
        .product()
}

/// The seven expectation values of a tripartite ±1 distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    pub e_a: f64,
    pub e_b: f64,
    pub e_c: f64,
    pub e_ab: f64,
    pub e_ac: f64,
    pub e_bc: f64,
    pub e_abc: f64,
}

impl CorrelationTensor {
    pub fn zero() -> Self {
        CorrelationTensor {
            e_a: 0.0,
            e_b: 0.0,
            e_c: 0.0,
            e_ab: 0.0,
            e_ac: 0.0,
            e_bc: 0.0,
            e_abc: 0.0,
        }
    }

    pub fn get(&self, component: Component) -> f64 {
        match component {
            Component::EA => self.e_a,
            Component::EB => self.e_b,
            Component::EC => self.e_c,
            Component::EAB => self.e_ab,
            Component::EAC => self.e_ac,
            Component::EBC => self.e_bc,
            Component::EABC => self.e_abc,
        }
    }

    pub fn set(&mut self, component: Component, value: f64) {
        match component {
            Component::EA => self.e_a = value,
            Component::EB => self.e_b = value,
            Component::EC => self.e_c = value,
            Component::EAB => self.e_ab = value,
            Component::EAC => self.e_ac = value,
            Component::EBC => self.e_bc = value,
            Component::EABC => self.e_abc = value,
        }
    }

    /// Raw probability of one outcome from the expansion; may be negative.
    pub fn probability(&self, outcome: OutcomeTriple) -> f64 {
        let mut acc = 1.0;
        for component in Component::ALL {
            acc += eq_coefficient(component, outcome) * self.get(component);
        }
        acc / 8.0
    }
}

/// Joint distribution over the 8 outcome triples. Entries may be negative;
/// positivity is a query, not an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution3 {
    p: [f64; 8],
}

impl Distribution3 {
    /// Builds from raw values, requiring normalization within 1e-9.
    pub fn new(p: [f64; 8]) -> Result<Self, AlgebraError> {
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AlgebraError::NotNormalized((sum - 1.0).abs()));
        }
        Ok(Distribution3 { p })
    }

    pub fn probability(&self, outcome: OutcomeTriple) -> f64 {
        self.p[outcome.index()]
    }

    pub fn values(&self) -> &[f64; 8] {
        &self.p
    }

    pub fn min_probability(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Two-party marginal; index order follows the pair's party order.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution2 {
    p: [f64; 4],
}

impl Distribution2 {
    pub fn new(p: [f64; 4]) -> Result<Self, AlgebraError> {
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AlgebraError::NotNormalized((sum - 1.0).abs()));
        }
        Ok(Distribution2 { p })
    }

    pub fn probability(&self, first: Outcome, second: Outcome) -> f64 {
        self.p[(outcome_bit(first) << 1) | outcome_bit(second)]
    }

    pub fn values(&self) -> &[f64; 4] {
        &self.p
    }

    /// E(xy) of the pair.
    pub fn correlator(&self) -> f64 {
        let mut acc = 0.0;
        for (i, p) in self.p.iter().enumerate() {
            let sa = 1.0 - 2.0 * ((i >> 1) & 1) as f64;
            let sb = 1.0 - 2.0 * (i & 1) as f64;
            acc += sa * sb * p;
        }
        acc
    }
}

/// Single-party marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution1 {
    p: [f64; 2],
}

impl Distribution1 {
    pub fn new(p: [f64; 2]) -> Result<Self, AlgebraError> {
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AlgebraError::NotNormalized((sum - 1.0).abs()));
        }
        Ok(Distribution1 { p })
    }

    pub fn uniform() -> Self {
        Distribution1 { p: [0.5, 0.5] }
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.p[outcome_bit(outcome)]
    }

    pub fn values(&self) -> &[f64; 2] {
        &self.p
    }

    /// E(x) of the single party.
    pub fn mean(&self) -> f64 {
        self.p[0] - self.p[1]
    }
}

fn outcome_bit(o: Outcome) -> usize {
    match o {
        Outcome::Plus => 0,
        Outcome::Minus => 1,
    }
}

/// A marginal over one or two parties.
#[derive(Debug, Clone, PartialEq)]
pub enum Marginal {
    One(Distribution1),
    Two(Distribution2),
}

impl Marginal {
    fn values(&self) -> &[f64] {
        match self {
            Marginal::One(d) => &d.p,
            Marginal::Two(d) => &d.p,
        }
    }
}

/// Expands a tensor into the 8 outcome probabilities. Negativity is not
/// an error here; out-of-range components are.
pub fn probabilities_from_tensor(t: &CorrelationTensor) -> Result<Distribution3, AlgebraError> {
    for component in Component::ALL {
        let value = t.get(component);
        if value.abs() > 1.0 + 1e-9 {
            return Err(AlgebraError::ComponentOutOfRange { component, value });
        }
    }
    let mut p = [0.0; 8];
    for outcome in OutcomeTriple::all() {
        p[outcome.index()] = t.probability(outcome);
    }
    Ok(Distribution3 { p })
}

/// Inverts the expansion: each correlator is the signed sum of the
/// probabilities.
pub fn tensor_from_probabilities(d: &Distribution3) -> Result<CorrelationTensor, AlgebraError> {
    let sum: f64 = d.p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(AlgebraError::NotNormalized((sum - 1.0).abs()));
    }
    let mut t = CorrelationTensor::zero();
    for component in Component::ALL {
        let value = OutcomeTriple::all()
            .map(|o| eq_coefficient(component, o) * d.probability(o))
            .sum();
        t.set(component, value);
    }
    Ok(t)
}

/// True iff every probability implied by the tensor is >= -tol.
pub fn is_valid(t: &CorrelationTensor, tol: f64) -> bool {
    OutcomeTriple::all().all(|o| t.probability(o) >= -tol)
}

/// Sums out the parties not listed. The subset must be a nonempty proper
/// subset of {A, B, C}; pairs keep party order (first named party is the
/// more significant index).
pub fn marginal(d: &Distribution3, parties: &[Party]) -> Result<Marginal, AlgebraError> {
    let mut distinct: Vec<Party> = Vec::new();
    for p in parties {
        if distinct.contains(p) {
            return Err(AlgebraError::DuplicateParty(*p));
        }
        distinct.push(*p);
    }
    match distinct.len() {
        0 => Err(AlgebraError::EmptySubset),
        1 => {
            let party = distinct[0];
            let mut p = [0.0; 2];
            for o in OutcomeTriple::all() {
                p[outcome_bit(o.get(party))] += d.probability(o);
            }
            Ok(Marginal::One(Distribution1 { p }))
        }
        2 => {
            let (first, second) = (distinct[0], distinct[1]);
            let mut p = [0.0; 4];
            for o in OutcomeTriple::all() {
                let idx = (outcome_bit(o.get(first)) << 1) | outcome_bit(o.get(second));
                p[idx] += d.probability(o);
            }
            Ok(Marginal::Two(Distribution2 { p }))
        }
        _ => Err(AlgebraError::FullSubset),
    }
}

/// Maximum absolute difference between the spectator marginals of two
/// distributions; 0 means no signaling detectable at this marginal.
pub fn no_signaling_violation(
    d1: &Distribution3,
    d2: &Distribution3,
    spectators: &[Party],
) -> Result<f64, AlgebraError> {
    let m1 = marginal(d1, spectators)?;
    let m2 = marginal(d2, spectators)?;
    Ok(m1
        .values()
        .iter()
        .zip(m2.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// The uncorrelated pair distribution p(a,b) = m_A(a) m_B(b).
pub fn product_distribution(
    m_a: &Distribution1,
    m_b: &Distribution1,
) -> Result<Distribution2, AlgebraError> {
    for m in [m_a, m_b] {
        let sum: f64 = m.p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AlgebraError::NotNormalized((sum - 1.0).abs()));
        }
    }
    let mut p = [0.0; 4];
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = m_a.p[(i >> 1) & 1] * m_b.p[i & 1];
    }
    Ok(Distribution2 { p })
}
