//! Mixed-model probe: if the A-B correlator is only constrained to its
//! per-setting feasible interval (instead of a fixed quantum value), can
//! the four CHSH terms still be forced past the classical bound of 2?
//!
//! For GHZ with x/y settings the intervals are so loose that the box
//! reaches from -4 to 4, so nothing forces a Bell violation — the open
//! question this harness explores over states and settings.
//!
//! Run with: cargo run --example chsh_box

use nosig::quantum::{LocalSetting, Party};
use nosig::witness::{mixed_model_box_test, ChshSelection};
use nosig::StateVector;

fn main() {
    let alice = [LocalSetting::x(Party::A), LocalSetting::y(Party::A)];
    let bob = [LocalSetting::x(Party::B), LocalSetting::y(Party::B)];
    let charlie = LocalSetting::x(Party::C);

    let result = mixed_model_box_test(
        &StateVector::ghz(),
        &alice,
        &bob,
        &charlie,
        ChshSelection::first_two(),
    )
    .expect("selection is valid");

    println!("per-pair feasible A-B intervals (GHZ, C along x):");
    for pair in &result.pairs {
        println!(
            "  a{} b{}: QM {:+.4}, allowed [{:+.4}, {:+.4}]",
            pair.n, pair.m, pair.e_ab_qm, pair.e_ab_lo, pair.e_ab_hi
        );
    }
    println!("CHSH signs: {:?}", result.signs);
    println!("QM CHSH value: {:+.4}", result.qm_chsh);
    println!("CHSH over the interval box: [{:+.4}, {:+.4}]", result.min_chsh, result.max_chsh);

    if result.min_chsh <= 2.0 {
        println!("no forced violation: the box dips to {:+.4} <= 2", result.min_chsh);
    } else {
        println!("every point of the box violates CHSH — a forced Bell violation");
    }
}
