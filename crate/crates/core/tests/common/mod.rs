//! Independent oracles shared by the integration suites.
//!
//! Everything here recomputes results from first principles — dense 8x8
//! operator algebra for the quantum side, brute-force grid scans for the
//! feasibility side — so it shares no code path with the library under
//! test beyond the public data types.

use num_complex::Complex64;
use rand::Rng;

use nosig::feasibility::{Constraint, ConstraintSpec};
use nosig::quantum::{LocalSetting, MeasurementSettings, OutcomeTriple, Party, StateVector};
use nosig::Component;

type C = Complex64;
type Mat2 = [[C; 2]; 2];
type Mat8 = [[C; 8]; 8];

pub fn pauli_dot(n: [f64; 3]) -> Mat2 {
    let [nx, ny, nz] = n;
    [
        [C::new(nz, 0.0), C::new(nx, -ny)],
        [C::new(nx, ny), C::new(-nz, 0.0)],
    ]
}

pub fn identity2() -> Mat2 {
    [[C::ONE, C::ZERO], [C::ZERO, C::ONE]]
}

/// Rank-1 projector (I + sign n·sigma) / 2.
pub fn projector2(n: [f64; 3], sign: f64) -> Mat2 {
    let s = pauli_dot(n);
    let mut m = identity2();
    for (row, srow) in m.iter_mut().zip(s) {
        for (v, sv) in row.iter_mut().zip(srow) {
            *v = (*v + sign * sv) * 0.5;
        }
    }
    m
}

/// Kronecker product in party order A ⊗ B ⊗ C (A owns the leading bit).
pub fn kron3(a: &Mat2, b: &Mat2, c: &Mat2) -> Mat8 {
    let mut m = [[C::ZERO; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i >> 2][j >> 2] * b[(i >> 1) & 1][(j >> 1) & 1] * c[i & 1][j & 1];
        }
    }
    m
}

/// <psi| M |psi> for a dense 8x8 operator; returns the real part.
pub fn dense_expectation(state: &StateVector, m: &Mat8) -> f64 {
    let amps = state.amplitudes();
    let mut acc = C::ZERO;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            acc += amps[i].conj() * v * amps[j];
        }
    }
    acc.re
}

fn party_factor(settings: &MeasurementSettings, party: Party, listed: &[Party]) -> Mat2 {
    if listed.contains(&party) {
        pauli_dot(settings.get(party).bloch())
    } else {
        identity2()
    }
}

/// Correlator oracle: dense tensor-product operator expectation for the
/// listed parties (identity on the rest).
pub fn oracle_correlator(
    state: &StateVector,
    settings: &MeasurementSettings,
    listed: &[Party],
) -> f64 {
    let m = kron3(
        &party_factor(settings, Party::A, listed),
        &party_factor(settings, Party::B, listed),
        &party_factor(settings, Party::C, listed),
    );
    dense_expectation(state, &m)
}

/// Joint-probability oracle: expectation of the product of the three
/// outcome projectors.
pub fn oracle_probability(
    state: &StateVector,
    settings: &MeasurementSettings,
    outcome: OutcomeTriple,
) -> f64 {
    let m = kron3(
        &projector2(settings.get(Party::A).bloch(), outcome.a.sign()),
        &projector2(settings.get(Party::B).bloch(), outcome.b.sign()),
        &projector2(settings.get(Party::C).bloch(), outcome.c.sign()),
    );
    dense_expectation(state, &m)
}

pub fn random_state<R: Rng>(rng: &mut R) -> StateVector {
    loop {
        let mut amps = [C::ZERO; 8];
        for a in &mut amps {
            *a = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        if let Ok(state) = StateVector::normalized(amps) {
            return state;
        }
    }
}

pub fn random_bloch<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-3 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

pub fn random_setting<R: Rng>(rng: &mut R, party: Party) -> LocalSetting {
    LocalSetting::new(party, random_bloch(rng)).expect("unit bloch")
}

pub fn random_settings<R: Rng>(rng: &mut R) -> MeasurementSettings {
    MeasurementSettings::new(
        random_setting(rng, Party::A),
        random_setting(rng, Party::B),
        random_setting(rng, Party::C),
    )
    .expect("distinct parties")
}

/// Sign of a component's term in the probability expansion at `outcome`:
/// the product of the outcome signs of the component's parties.
fn coefficient(component: Component, outcome: OutcomeTriple) -> f64 {
    component
        .parties()
        .iter()
        .map(|&party| outcome.get(party).sign())
        .product()
}

/// Brute-force feasibility scan over the free components on a regular
/// grid of the given step, entirely independent of the vertex-enumeration
/// solver. Returns the per-free-component (min, max) over feasible grid
/// points, or `None` if no grid point is feasible. Supports up to two
/// free components.
pub fn grid_intervals(spec: &ConstraintSpec, step: f64) -> Option<Vec<(f64, f64)>> {
    let free = spec.free_components();
    assert!(free.len() <= 2, "grid oracle supports at most 2 free");

    // p_k = base_k + sum_j coeff_kj * x_j, all divided by 8 (the division
    // does not change signs, so it is dropped).
    let mut base = [1.0f64; 8];
    let mut coeff = vec![[0.0f64; 8]; free.len()];
    for (k, b) in base.iter_mut().enumerate() {
        let outcome = OutcomeTriple::from_index(k);
        for component in Component::ALL {
            let c = coefficient(component, outcome);
            if let Some(j) = free.iter().position(|&f| f == component) {
                coeff[j][k] = c;
            } else {
                *b += c * spec
                    .resolved_value(component)
                    .expect("non-free component resolves");
            }
        }
    }

    let points = (2.0 / step).round() as usize;
    let coord = |i: usize| -1.0 + i as f64 * step;
    let tol = 1e-9;

    let mut bounds: Vec<(f64, f64)> = vec![(f64::INFINITY, f64::NEG_INFINITY); free.len()];
    let mut any = false;
    let record = |bounds: &mut Vec<(f64, f64)>, xs: &[f64]| {
        for (b, &x) in bounds.iter_mut().zip(xs) {
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
        }
    };

    match free.len() {
        0 => {
            any = base.iter().all(|&p| p >= -tol);
        }
        1 => {
            for i in 0..=points {
                let x = coord(i);
                if (0..8).all(|k| base[k] + coeff[0][k] * x >= -tol) {
                    any = true;
                    record(&mut bounds, &[x]);
                }
            }
        }
        2 => {
            for i in 0..=points {
                let x = coord(i);
                let row: [f64; 8] = std::array::from_fn(|k| base[k] + coeff[0][k] * x);
                for j in 0..=points {
                    let y = coord(j);
                    if (0..8).all(|k| row[k] + coeff[1][k] * y >= -tol) {
                        any = true;
                        record(&mut bounds, &[x, y]);
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    if any {
        Some(bounds)
    } else {
        None
    }
}

/// Condition-1 spec for a QM tensor with the chosen components freed.
pub fn freed_spec(qm: &nosig::CorrelationTensor, free: &[Component]) -> ConstraintSpec {
    let mut spec = ConstraintSpec::fixed_at(qm);
    for &component in free {
        spec.set(component, Constraint::Free);
    }
    spec
}
