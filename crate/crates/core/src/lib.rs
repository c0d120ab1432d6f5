//! Thermal-comfort modeling and control for a single enclosed space.
//!
//! The crate has three layers:
//!
//! * an analytic comfort engine ([`fanger`], [`psychro`], [`classify`]) that
//!   maps an environment reading and an occupant description to a predicted
//!   mean vote (PMV) and a five-band comfort class,
//! * a data/learning layer ([`dataset`], [`mlp`]) that samples the engine
//!   over a temperature/humidity box and fits a small feed-forward surrogate
//!   suitable for export to constrained devices,
//! * a control layer ([`control`], [`chamber`]) that turns PMV into on/off
//!   actuator commands and exercises them against a simulated first-order
//!   plant with duty-cycle accounting.
//!
//! Everything is deterministic under fixed seeds: dataset generation,
//! weight initialization, training, and the simulated sensor noise all draw
//! from explicitly seeded ChaCha streams.

pub mod chamber;
pub mod classify;
pub mod control;
pub mod dataset;
pub mod fanger;
pub mod mlp;
pub mod occupant;
pub mod psychro;
pub mod sample;

pub use chamber::{run_closed_loop, ChamberState, EnergyReport, PlantParams, TraceRecord};
pub use classify::{classify_comfort, ComfortClass};
pub use control::{decide, ActuatorCommand, ControlDecision, Controller, PmvSource};
pub use dataset::{generate_dataset, split_and_normalize, NormalizationStats, SampleRecord};
pub use fanger::{
    compute_pmv, convective_coefficient, solve_clothing_temperature, PmvResult, SolveError,
};
pub use mlp::{init_model, Metrics, MlpModel, PmvPrediction, TrainConfig};
pub use occupant::{clothing_area_factor, OccupantProfile};
pub use psychro::vapor_pressure;
pub use sample::EnvironmentSample;
