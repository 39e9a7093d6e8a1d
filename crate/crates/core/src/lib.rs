//! Bounded-round randomized approximation of `|A_1 ∪ … ∪ A_m|` over set
//! oracles that only expose an approximate size, a biased random generator
//! and membership queries.
//!
//! The crate is organised around the estimator pipeline:
//!
//! * [`oracle`]: the set-oracle contract, explicit in-memory sets with
//!   injected bias, and the two-step random choice over a list.
//! * [`schedule`]: every derived accuracy/failure constant and sample-count
//!   function for a given `(m, ε, γ, c1, z_min, z_max)`.
//! * [`rounds`]: the simulated client/server transport; one batch exchange
//!   is one round.
//! * [`estimator`]: the staged union estimator itself.
//! * [`lattice`]: exact and approximate counting of lattice points in balls,
//!   and exact / biased random lattice-point generation.
//! * [`ball_union`]: lattice balls wrapped as set oracles.
//! * [`coverage`]: greedy maximum coverage driven by union estimates.
//! * [`reference`]: brute-force oracles used to check everything above.

pub mod ball_union;
pub mod coverage;
pub mod element;
pub mod error;
pub mod estimator;
pub mod instance;
pub mod lattice;
pub mod oracle;
pub mod reference;
pub mod rng;
pub mod rounds;
pub mod schedule;

pub use element::ElementId;
pub use error::{Error, Result};
pub use estimator::{approximate_union, EstimatorOptions, UnionEstimate};
pub use oracle::{BiasSpec, ExplicitSet, OracleList, SetOracle};
pub use rng::SeedTree;
pub use schedule::{ParameterSchedule, SampleScale};

/// Schema tag printed by `--version` and embedded in JSON output.
pub const SCHEMA_VERSION: &str = "unionscope/1";
