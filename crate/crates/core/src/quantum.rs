//! Exact 3-qubit quantum mechanics for dichotomic Bloch observables.
//!
//! Basis ordering is fixed throughout: amplitudes are stored in the order
//! |000⟩, |001⟩, ..., |111⟩ with party A the most significant bit. All
//! operations are pure; values are immutable after construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::CorrelationTensor;

/// Tolerance on state normalization and Bloch vector length.
pub const NORM_TOL: f64 = 1e-12;

/// Imaginary residue above this in a Hermitian expectation is treated as
/// an internal consistency failure rather than rounding noise.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("state is not normalized: sum of |amplitude|^2 deviates from 1 by {0:.3e}")]
    NonNormalizedState(f64),
    #[error("Bloch vector is not unit length: |n| = {0}")]
    NonUnitBloch(f64),
    #[error("duplicate setting for party {0:?}")]
    DuplicateParty(Party),
    #[error("expectation requires at least one setting")]
    EmptySettings,
    #[error("setting slot {expected:?} holds a setting tagged {found:?}")]
    SettingPartyMismatch { expected: Party, found: Party },
    #[error("Hermitian expectation has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
}

/// One of the three measurement parties. A is the most significant bit of
/// the 3-bit basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    /// Bit position of this party in a basis index.
    pub(crate) fn bit(self) -> usize {
        match self {
            Party::A => 2,
            Party::B => 1,
            Party::C => 0,
        }
    }
}

/// A dichotomic measurement outcome, +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    fn bit(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }
}

/// Joint outcome (ξ_A, ξ_B, ξ_C), each ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomeTriple {
    pub a: Outcome,
    pub b: Outcome,
    pub c: Outcome,
}

impl OutcomeTriple {
    pub fn new(a: Outcome, b: Outcome, c: Outcome) -> Self {
        OutcomeTriple { a, b, c }
    }

    /// Index in 0..8; A is the most significant bit, Plus maps to bit 0.
    pub fn index(self) -> usize {
        (self.a.bit() << 2) | (self.b.bit() << 1) | self.c.bit()
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 8);
        OutcomeTriple {
            a: Outcome::from_bit((index >> 2) & 1),
            b: Outcome::from_bit((index >> 1) & 1),
            c: Outcome::from_bit(index & 1),
        }
    }

    pub fn all() -> impl Iterator<Item = OutcomeTriple> {
        (0..8).map(OutcomeTriple::from_index)
    }

    pub fn get(self, party: Party) -> Outcome {
        match party {
            Party::A => self.a,
            Party::B => self.b,
            Party::C => self.c,
        }
    }

    /// Label like "++-", in party order A, B, C.
    pub fn label(self) -> String {
        [self.a, self.b, self.c].iter().map(|o| o.symbol()).collect()
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let mut outcomes = [Outcome::Plus; 3];
        let chars: Vec<char> = label.chars().collect();
        if chars.len() != 3 {
            return None;
        }
        for (slot, ch) in outcomes.iter_mut().zip(chars) {
            *slot = match ch {
                '+' => Outcome::Plus,
                '-' => Outcome::Minus,
                _ => return None,
            };
        }
        Some(OutcomeTriple::new(outcomes[0], outcomes[1], outcomes[2]))
    }
}

/// A normalized 3-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: [Complex64; 8],
}

impl StateVector {
    pub fn new(amps: [Complex64; 8]) -> Result<Self, QuantumError> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NonNormalizedState((norm_sq - 1.0).abs()));
        }
        Ok(StateVector { amps })
    }

    /// Normalizes the given amplitudes; fails only on a zero vector.
    pub fn normalized(amps: [Complex64; 8]) -> Result<Self, QuantumError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QuantumError::NonNormalizedState(1.0));
        }
        let mut amps = amps;
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { amps })
    }

    /// The computational basis state |index⟩.
    pub fn basis(index: usize) -> Self {
        assert!(index < 8);
        let mut amps = [Complex64::ZERO; 8];
        amps[index] = Complex64::ONE;
        StateVector { amps }
    }

    /// (|000⟩ + |111⟩)/√2.
    pub fn ghz() -> Self {
        let mut amps = [Complex64::ZERO; 8];
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0b000] = r;
        amps[0b111] = r;
        StateVector { amps }
    }

    /// (|001⟩ + |010⟩ + |100⟩)/√3.
    pub fn w() -> Self {
        let mut amps = [Complex64::ZERO; 8];
        let r = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        amps[0b001] = r;
        amps[0b010] = r;
        amps[0b100] = r;
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amps
    }
}

/// A dichotomic local observable n·σ for one party, with n a unit Bloch
/// vector; eigenvalues ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSetting {
    party: Party,
    bloch: [f64; 3],
}

impl LocalSetting {
    pub fn new(party: Party, bloch: [f64; 3]) -> Result<Self, QuantumError> {
        let norm = (bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NonUnitBloch(norm));
        }
        Ok(LocalSetting { party, bloch })
    }

    pub fn x(party: Party) -> Self {
        LocalSetting { party, bloch: [1.0, 0.0, 0.0] }
    }

    pub fn y(party: Party) -> Self {
        LocalSetting { party, bloch: [0.0, 1.0, 0.0] }
    }

    pub fn z(party: Party) -> Self {
        LocalSetting { party, bloch: [0.0, 0.0, 1.0] }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// Same observable with the Bloch vector negated.
    pub fn negated(&self) -> Self {
        LocalSetting {
            party: self.party,
            bloch: [-self.bloch[0], -self.bloch[1], -self.bloch[2]],
        }
    }

    /// The 2x2 matrix n·σ.
    fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [nx, ny, nz] = self.bloch;
        [
            [Complex64::new(nz, 0.0), Complex64::new(nx, -ny)],
            [Complex64::new(nx, ny), Complex64::new(-nz, 0.0)],
        ]
    }

    /// Projector (I + ξ n·σ)/2 onto the ±1 eigenspace.
    fn projector(&self, outcome: Outcome) -> [[Complex64; 2]; 2] {
        let s = outcome.sign();
        let [nx, ny, nz] = self.bloch;
        [
            [
                Complex64::new((1.0 + s * nz) / 2.0, 0.0),
                Complex64::new(s * nx / 2.0, -s * ny / 2.0),
            ],
            [
                Complex64::new(s * nx / 2.0, s * ny / 2.0),
                Complex64::new((1.0 - s * nz) / 2.0, 0.0),
            ],
        ]
    }
}

/// One setting per party, for full joint measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub a: LocalSetting,
    pub b: LocalSetting,
    pub c: LocalSetting,
}

impl MeasurementSettings {
    pub fn new(
        a: LocalSetting,
        b: LocalSetting,
        c: LocalSetting,
    ) -> Result<Self, QuantumError> {
        for (expected, setting) in Party::ALL.iter().zip([&a, &b, &c]) {
            if setting.party() != *expected {
                return Err(QuantumError::SettingPartyMismatch {
                    expected: *expected,
                    found: setting.party(),
                });
            }
        }
        Ok(MeasurementSettings { a, b, c })
    }

    /// The same named Pauli axis on every party.
    pub fn all_axis(make: fn(Party) -> LocalSetting) -> Self {
        MeasurementSettings {
            a: make(Party::A),
            b: make(Party::B),
            c: make(Party::C),
        }
    }

    pub fn get(&self, party: Party) -> &LocalSetting {
        match party {
            Party::A => &self.a,
            Party::B => &self.b,
            Party::C => &self.c,
        }
    }

    fn as_array(&self) -> [LocalSetting; 3] {
        [self.a, self.b, self.c]
    }
}

fn apply_one_qubit(amps: &mut [Complex64; 8], bit: usize, m: &[[Complex64; 2]; 2]) {
    let mask = 1usize << bit;
    for i in 0..8 {
        if i & mask == 0 {
            let j = i | mask;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// ⟨ψ| O |ψ⟩ where O is the tensor product of n·σ on the listed parties
/// and identity elsewhere. At most one setting per party.
pub fn expectation(state: &StateVector, settings: &[LocalSetting]) -> Result<f64, QuantumError> {
    if settings.is_empty() {
        return Err(QuantumError::EmptySettings);
    }
    let mut seen = [false; 3];
    for s in settings {
        let slot = &mut seen[s.party().bit()];
        if *slot {
            return Err(QuantumError::DuplicateParty(s.party()));
        }
        *slot = true;
    }
    let mut v = *state.amplitudes();
    for s in settings {
        apply_one_qubit(&mut v, s.party().bit(), &s.matrix());
    }
    let value: Complex64 = state
        .amplitudes()
        .iter()
        .zip(&v)
        .map(|(a, b)| a.conj() * b)
        .sum();
    if value.im.abs() > IMAG_RESIDUE_TOL {
        return Err(QuantumError::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// ‖Π_A ⊗ Π_B ⊗ Π_C |ψ⟩‖² with Π = (I + ξ n·σ)/2 per party.
pub fn joint_probability(
    state: &StateVector,
    settings: &MeasurementSettings,
    outcome: OutcomeTriple,
) -> f64 {
    let mut v = *state.amplitudes();
    for s in settings.as_array() {
        apply_one_qubit(&mut v, s.party().bit(), &s.projector(outcome.get(s.party())));
    }
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// All seven correlators of the joint measurement: three singles, three
/// pairs, and the triple.
pub fn correlation_tensor(
    state: &StateVector,
    settings: &MeasurementSettings,
) -> Result<CorrelationTensor, QuantumError> {
    let [a, b, c] = settings.as_array();
    Ok(CorrelationTensor {
        e_a: expectation(state, &[a])?,
        e_b: expectation(state, &[b])?,
        e_c: expectation(state, &[c])?,
        e_ab: expectation(state, &[a, b])?,
        e_ac: expectation(state, &[a, c])?,
        e_bc: expectation(state, &[b, c])?,
        e_abc: expectation(state, &[a, b, c])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ghz_state_amplitudes_and_norm() {
        let ghz = StateVector::ghz();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(ghz.amplitudes()[0].re, r, 1e-15));
        assert!(close(ghz.amplitudes()[7].re, r, 1e-15));
        for i in 1..7 {
            assert_eq!(ghz.amplitudes()[i], Complex64::ZERO);
        }
        let norm_sq: f64 = ghz.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!(close(norm_sq, 1.0, 1e-15));
    }

    #[test]
    fn ghz_triple_z_expectation_vanishes() {
        let ghz = StateVector::ghz();
        let settings = MeasurementSettings::all_axis(LocalSetting::z);
        let e = expectation(&ghz, &[settings.a, settings.b, settings.c]).unwrap();
        assert!(close(e, 0.0, 1e-12));
    }

    #[test]
    fn w_state_amplitudes_and_xxx_expectation() {
        let w = StateVector::w();
        let r = 1.0 / 3f64.sqrt();
        for idx in [0b001, 0b010, 0b100] {
            assert!(close(w.amplitudes()[idx].re, r, 1e-15));
        }
        let norm_sq: f64 = w.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!(close(norm_sq, 1.0, 1e-15));
        // X⊗X⊗X maps each W basis ket to a ket orthogonal to the W support.
        let s = MeasurementSettings::all_axis(LocalSetting::x);
        let e = expectation(&w, &[s.a, s.b, s.c]).unwrap();
        assert!(close(e, 0.0, 1e-12));
    }

    #[test]
    fn ghz_pair_and_single_correlators() {
        let ghz = StateVector::ghz();
        let e_ac = expectation(
            &ghz,
            &[LocalSetting::z(Party::A), LocalSetting::z(Party::C)],
        )
        .unwrap();
        assert!(close(e_ac, 1.0, 1e-12));
        let e_a = expectation(&ghz, &[LocalSetting::z(Party::A)]).unwrap();
        assert!(close(e_a, 0.0, 1e-12));
    }

    #[test]
    fn w_pair_x_correlator_is_two_thirds() {
        let w = StateVector::w();
        let e_ac = expectation(&w, &[LocalSetting::x(Party::A), LocalSetting::x(Party::C)])
            .unwrap();
        assert!(close(e_ac, 2.0 / 3.0, 1e-12));
    }

    #[test]
    fn ghz_joint_probabilities_all_z() {
        let ghz = StateVector::ghz();
        let settings = MeasurementSettings::all_axis(LocalSetting::z);
        let ppp = joint_probability(&ghz, &settings, OutcomeTriple::from_label("+++").unwrap());
        assert!(close(ppp, 0.5, 1e-12));
        let ppm = joint_probability(&ghz, &settings, OutcomeTriple::from_label("++-").unwrap());
        assert!(close(ppm, 0.0, 1e-12));
        let total: f64 = OutcomeTriple::all()
            .map(|o| joint_probability(&ghz, &settings, o))
            .sum();
        assert!(close(total, 1.0, 1e-12));
    }

    #[test]
    fn basis_state_is_deterministic() {
        let state = StateVector::basis(0);
        let settings = MeasurementSettings::all_axis(LocalSetting::z);
        let p = joint_probability(&state, &settings, OutcomeTriple::from_label("+++").unwrap());
        assert!(close(p, 1.0, 1e-12));
        let t = correlation_tensor(&state, &settings).unwrap();
        for v in [t.e_a, t.e_b, t.e_c, t.e_ab, t.e_ac, t.e_bc, t.e_abc] {
            assert!(close(v, 1.0, 1e-12));
        }
    }

    #[test]
    fn ghz_tensor_all_z() {
        let t = correlation_tensor(
            &StateVector::ghz(),
            &MeasurementSettings::all_axis(LocalSetting::z),
        )
        .unwrap();
        assert!(close(t.e_a, 0.0, 1e-12));
        assert!(close(t.e_b, 0.0, 1e-12));
        assert!(close(t.e_c, 0.0, 1e-12));
        assert!(close(t.e_ab, 1.0, 1e-12));
        assert!(close(t.e_ac, 1.0, 1e-12));
        assert!(close(t.e_bc, 1.0, 1e-12));
        assert!(close(t.e_abc, 0.0, 1e-12));
    }

    #[test]
    fn w_tensor_all_x() {
        let t = correlation_tensor(
            &StateVector::w(),
            &MeasurementSettings::all_axis(LocalSetting::x),
        )
        .unwrap();
        for single in [t.e_a, t.e_b, t.e_c] {
            assert!(close(single, 0.0, 1e-12));
        }
        for pair in [t.e_ab, t.e_ac, t.e_bc] {
            assert!(close(pair, 2.0 / 3.0, 1e-12));
        }
        assert!(close(t.e_abc, 0.0, 1e-12));
    }

    #[test]
    fn sign_flip_of_bloch_negates_expectation() {
        let w = StateVector::w();
        let s = LocalSetting::new(Party::B, [0.6, 0.0, 0.8]).unwrap();
        let e = expectation(&w, &[s]).unwrap();
        let e_neg = expectation(&w, &[s.negated()]).unwrap();
        assert_eq!(e, -e_neg);
    }

    #[test]
    fn construction_errors() {
        let mut amps = [Complex64::ZERO; 8];
        amps[0] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            StateVector::new(amps),
            Err(QuantumError::NonNormalizedState(_))
        ));
        assert!(matches!(
            LocalSetting::new(Party::A, [1.0, 1.0, 0.0]),
            Err(QuantumError::NonUnitBloch(_))
        ));
        let dup = expectation(
            &StateVector::ghz(),
            &[LocalSetting::z(Party::A), LocalSetting::x(Party::A)],
        );
        assert_eq!(dup, Err(QuantumError::DuplicateParty(Party::A)));
        assert_eq!(
            expectation(&StateVector::ghz(), &[]),
            Err(QuantumError::EmptySettings)
        );
        assert!(matches!(
            MeasurementSettings::new(
                LocalSetting::z(Party::B),
                LocalSetting::z(Party::B),
                LocalSetting::z(Party::C),
            ),
            Err(QuantumError::SettingPartyMismatch { .. })
        ));
    }

    #[test]
    fn outcome_triple_indexing_round_trips() {
        for idx in 0..8 {
            let o = OutcomeTriple::from_index(idx);
            assert_eq!(o.index(), idx);
            assert_eq!(OutcomeTriple::from_label(&o.label()), Some(o));
        }
        assert_eq!(OutcomeTriple::from_label("+++").unwrap().index(), 0);
        assert_eq!(OutcomeTriple::from_label("---").unwrap().index(), 7);
    }
}
