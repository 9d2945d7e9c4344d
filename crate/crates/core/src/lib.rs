//! Allocation-only core of an NDN cache-size allocation simulator.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! - [`topology`]: validated network graphs, betweenness and degree
//!   centrality, and shortest-path next-hop tables.
//! - [`engine`]: a deterministic discrete-event kernel with integer
//!   nanosecond timestamps and seeded random streams.
//! - [`ndn`]: content stores, pending interest tables, router forwarding,
//!   consumer/producer applications and the Mandelbrot-Zipf workload.
//! - [`metrics`]: EWMA estimators over sampled PIT occupancy and CS hits.
//! - [`fusion`]: PCA fusion of per-router features into weights and the
//!   integer cache allocation, plus the uniform and degree baselines.
//! - [`experiment`]: the two-phase experiment driver and report aggregation.
//!
//! File formats, IO and the command-line interface live in the `ndncache`
//! companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod engine;
pub mod experiment;
pub mod fusion;
pub mod metrics;
pub mod ndn;
pub mod numeric;
pub mod topology;

pub use engine::{EventQueue, RngStream, SimTime};
pub use experiment::{
    aggregate_replications, hit_ratio, measure_features, run_experiment, run_traced, ExperimentConfig,
    ExperimentError, MetricsReport, Scheme, Summary,
};
pub use fusion::{AllocationPlan, FeatureMatrix, NormalizationMode, PrincipalComponents, WeightVector};
pub use metrics::{EwmaEstimator, RouterFeatureRecord};
pub use topology::{CentralityVector, Link, NodeId, NodeKind, Topology, TopologyError};
