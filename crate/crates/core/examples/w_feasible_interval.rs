//! The W example: unlike GHZ, pinning the singles and the two C-pairs
//! leaves a whole polygon of allowed (e_ab, e_abc) values — but the A-B
//! correlator is still bounded away from 0, so complete loss of the A-B
//! correlation is still impossible.
//!
//! Run with: cargo run --example w_feasible_interval

use nosig::feasibility::{feasible_region, project_interval, Constraint, ConstraintSpec};
use nosig::quantum::{correlation_tensor, LocalSetting};
use nosig::{Component, MeasurementSettings, StateVector};

fn main() {
    let state = StateVector::w();
    let settings = MeasurementSettings::all_axis(LocalSetting::x);
    let qm = correlation_tensor(&state, &settings).expect("valid settings");
    println!("QM tensor along x: e_ab = {:.6}, e_ac = {:.6}, e_abc = {:.6}", qm.e_ab, qm.e_ac, qm.e_abc);

    let mut spec = ConstraintSpec::fixed_at(&qm);
    spec.set(Component::EAB, Constraint::Free);
    spec.set(Component::EABC, Constraint::Free);

    let region = feasible_region(&spec).expect("two free components");
    println!("feasible polygon in (e_ab, e_abc), {} vertices:", region.vertices.len());
    for v in &region.vertices {
        println!("  ({:+.6}, {:+.6})", v[0], v[1]);
    }

    let (lo, hi) = project_interval(&region, Component::EAB)
        .expect("projection works")
        .expect("region nonempty");
    println!("allowed e_ab interval: [{lo:.6}, {hi:.6}]  (QM value {:.6})", qm.e_ab);

    // Forcing complete decorrelation lands outside the polygon.
    spec.set(Component::EAB, Constraint::Fixed(0.0));
    let severed = feasible_region(&spec).expect("one free component");
    println!("with e_ab = 0 the region is empty: {}", severed.empty);
}
