//! The GHZ example end to end: with the singles and the two C-pairs
//! pinned to their quantum values, the A-B correlator is forced to 1 —
//! so a model that severs the A-B correlation (forcing the product value
//! 0) admits no joint distribution at all, and the gap shows up as a
//! strictly negative max-min probability.
//!
//! Run with: cargo run --example ghz_uniqueness

use nosig::feasibility::max_min_probability;
use nosig::quantum::LocalSetting;
use nosig::timing::TimingStructure;
use nosig::witness::{run_scenario, Mode, Scenario, TimingInput};
use nosig::{MeasurementSettings, StateVector};

fn main() {
    let state = StateVector::ghz();
    let settings = MeasurementSettings::all_axis(LocalSetting::z);
    let timing = TimingInput::Structure(TimingStructure::severed_ab());

    // First the probe: leave the severed correlators free and see what
    // the no-signaling constraints allow.
    let probe = run_scenario(&Scenario {
        state: state.clone(),
        settings,
        timing: timing.clone(),
        mode: Mode::MixedModelProbe,
    })
    .expect("probe runs");
    println!("probe verdict:     {:?}", probe.verdict);
    println!("feasible vertices: {:?}", probe.region.vertices);
    println!("e_ab interval:     {:?}", probe.e_ab_interval);

    // Then the communication-only model: the severed pair must factor
    // into the product of the singles, which is 0 for GHZ along z.
    let severed = run_scenario(&Scenario {
        state,
        settings,
        timing,
        mode: Mode::CommunicationOnly,
    })
    .expect("severed scenario runs");
    println!();
    println!("severed verdict:   {:?}", severed.verdict);
    println!("worst probability: {}", severed.worst_probability);

    let (worst, at) = max_min_probability(&severed.constraints).expect("bounded program");
    println!("best the model can do: min outcome probability {worst} at e_abc = {}", at[0]);
}
