//! Tripartite no-signaling feasibility toolkit.
//!
//! Decides whether "hidden communication" models of quantum correlations
//! admit a valid three-party joint probability distribution once the
//! no-signaling constraints are imposed. The pieces:
//!
//! - [`quantum`]: exact 3-qubit states, dichotomic Bloch observables, and
//!   the correlators that serve as the QM side of every constraint.
//! - [`algebra`]: the model-independent correlator/probability algebra,
//!   marginals, product distributions, and no-signaling checks.
//! - [`feasibility`]: the constraint engine; exact feasible regions for
//!   partially fixed correlation tensors by half-space intersection.
//! - [`timing`]: relativistic timing for the two causal models
//!   (preferred frame with finite `v_hc`, and Multisimultaneity).
//! - [`witness`]: orchestration from a timing structure to a signaling
//!   verdict, plus the visibility and interval-box CHSH probes.
//! - [`scenario`] / [`cli`]: JSON scenario files and the command-line
//!   surface (`demo`, `scenario`, `timing`, `sweep`).

pub mod algebra;
pub mod cli;
pub mod feasibility;
pub mod quantum;
pub mod report;
pub mod scenario;
pub mod timing;
pub mod witness;

pub use algebra::{Component, CorrelationTensor, Distribution1, Distribution2, Distribution3};
pub use feasibility::FEAS_TOL;
pub use feasibility::{Constraint, ConstraintSpec, FeasibleRegion};
pub use quantum::{LocalSetting, MeasurementSettings, Outcome, OutcomeTriple, Party, StateVector};
pub use timing::{Model1Config, Model2Config, Pair, PairLabel, SpacetimeEvent, TimingStructure};
pub use witness::{Mode, Scenario, Verdict, WitnessReport};
