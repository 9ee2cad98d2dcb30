//! The two causal models that decide which pairs stay quantum-correlated.
//!
//! Model 1 (preferred frame): influences propagate at a finite speed
//! v_hc > c in one special frame. Placing C's measurement inside the
//! timing window severs exactly the A-B pair.
//!
//! Model 2 (per-device frames): each measuring device uses its own rest
//! frame to decide who measured "first". Receding devices can each see
//! the other as first ("before-before"), which also severs the pair.
//!
//! Run with: cargo run --example timing_models

use nosig::timing::{
    model1_classify, model1_timing_window, multisim_classify, Model1Config, Model2Config,
    SpacetimeEvent,
};

fn main() {
    // Model 1: A at (-1, 0), B at (1, 0), C at (0, t_c).
    let (x, v_hc) = (1.0, 4.0);
    let (lo, hi) = model1_timing_window(x, v_hc).expect("v_hc > 3");
    println!("model 1, x = {x}, v_hc = {v_hc}: window for t_C is ({lo}, {hi})");

    // The labels track the hidden-communication cone; the window adds
    // the light-cone requirements that make the severed pair meaningful.
    let cfg = Model1Config::symmetric(x, v_hc, 0.8).expect("valid geometry");
    let labels = model1_classify(&cfg);
    println!("  t_C = 0.8: ab = {:?}, ac = {:?}, bc = {:?}", labels.ab, labels.ac, labels.bc);

    // Delaying A past the communication time restores the A-B pair.
    let delayed = Model1Config::symmetric(x, 1000.0, 0.5)
        .expect("valid geometry")
        .with_delays(0.05, 0.0)
        .expect("positive times");
    println!("  v_hc = 1000, A delayed by 0.05: ab = {:?}", model1_classify(&delayed).ab);

    // Below three times light speed there is no window at all.
    println!("  v_hc = 2.5: window = {:?}", model1_timing_window(x, 2.5));

    // Model 2: receding devices, simultaneous detections in the lab.
    let events = [
        SpacetimeEvent::new(-1.0, 0.0),
        SpacetimeEvent::new(1.0, 0.0),
        SpacetimeEvent::new(0.0, 0.5),
    ];
    let receding = Model2Config::new(events, [-0.5, 0.5, 0.0]).expect("subluminal");
    let labels = multisim_classify(&receding).expect("no after-after pair");
    println!();
    println!("model 2, receding devices (v = -/+0.5):");
    println!("  ab = {:?} (before-before), ac = {:?}, bc = {:?}", labels.ab, labels.ac, labels.bc);

    // Approaching devices invert the situation: each sees the other as
    // earlier, and the pair statistics are undefined ("after-after").
    let approaching = Model2Config::new(events, [0.5, -0.5, 0.0]).expect("subluminal");
    match multisim_classify(&approaching) {
        Ok(labels) => println!("  approaching: ab = {:?}", labels.ab),
        Err(e) => println!("  approaching devices: {e}"),
    }
}
