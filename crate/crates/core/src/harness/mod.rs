//! Seeded set generation, experiment orchestration and report output.

pub mod experiment;
pub mod report;
pub mod rng;

pub use experiment::{
    default_budget, random_set, random_set_in, run_experiment, ExperimentSpec, GraphSource, Record,
    Report, SetSource, Suite, Summary,
};
