//! Finite-field character sums, Fourier analysis on F_q^d, and counts of
//! distance-graph embeddings in subsets of F_q^d.
//!
//! The pieces build on each other: [`field`] supplies arithmetic and the
//! canonical characters, [`geometry`] the vector space, point sets and
//! spheres, [`fourier`] transforms and the distance bilinear form, and
//! [`embeddings`] exact embedding counts checked against their density bounds.

pub mod char_sums;
pub mod embeddings;
pub mod error;
pub mod field;
pub mod fourier;
pub mod geometry;
pub mod graph;
pub mod harness;

pub use char_sums::{gauss_sum, kloosterman, salie, CharSumRecord, SumKind};
pub use embeddings::{
    asymptotic_check, count_backtracking, count_bruteforce, fullspace_triangle_count,
    genuine_check, EmbeddingCount, TheoremCheckRecord,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec, FiniteField};
pub use geometry::{PointSet, Space, SphereIndex, Vector};
pub use graph::{DistanceGraph, GraphKind, Lengths};
pub use harness::{random_set, run_experiment, ExperimentSpec, Report};
