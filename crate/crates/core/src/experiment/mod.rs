//! Two-phase allocation experiment.
//!
//! Phase 1 runs every router with an equal share of the cache budget. At the
//! end of the warm-up the chosen scheme computes new weights (the proposed
//! scheme from betweenness plus the smoothed PIT/CS-hit samples gathered
//! during phase 1, the baselines from the topology alone), every Content
//! Store is resized and its counters reset, and phase 2 runs to the end of
//! the simulated time. Only phase 2 is reported.

mod network;
mod report;

use core::fmt;

pub use network::{DataCause, TraceRecord};
pub use report::{
    aggregate_replications, hit_ratio, AppHits, HitMiss, MetricsReport, SeriesStat, Summary,
};

use crate::engine::{replication_seeds, SimTime};
use crate::fusion::{FusionError, NormalizationMode};
use crate::metrics::RouterFeatureRecord;
use crate::ndn::{CatalogError, APPLICATIONS, CHUNK_SIZE_BYTES};
use crate::topology::Topology;
use network::{Network, Phase};

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Uniform,
    Degree,
    Proposed,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Uniform, Scheme::Degree, Scheme::Proposed];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Uniform => "uniform",
            Scheme::Degree => "degree",
            Scheme::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Scheme {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "uniform" => Ok(Scheme::Uniform),
            "degree" => Ok(Scheme::Degree),
            "proposed" => Ok(Scheme::Proposed),
            _ => Err(()),
        }
    }
}

/// Experiment parameters. The defaults are the desk-scale setup: a
/// `10^4`-file catalog of 10-chunk files, 1 100 router chunks in total and
/// 100 simulated seconds with allocation at 40 s.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub chunk_size: u32,
    pub total_router_cache_chunks: usize,
    /// Catalog size over all applications; each owns a quarter of it.
    pub file_count: u32,
    pub chunks_per_file: u32,
    pub q: f64,
    pub s: f64,
    pub interest_rate_hz: f64,
    pub sim_time_s: f64,
    pub warmup_fraction: f64,
    pub sample_interval_s: f64,
    pub pit_lifetime_s: f64,
    pub master_seed: u64,
    pub replications: usize,
    pub producer_cs_chunks: usize,
    pub bucket_s: f64,
    pub normalization: NormalizationMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Proposed,
            chunk_size: CHUNK_SIZE_BYTES,
            total_router_cache_chunks: 1_100,
            file_count: 10_000,
            chunks_per_file: 10,
            q: 5.0,
            s: 0.7,
            interest_rate_hz: 20.0,
            sim_time_s: 100.0,
            warmup_fraction: 0.4,
            sample_interval_s: 0.01,
            pit_lifetime_s: 2.0,
            master_seed: 1,
            replications: 10,
            producer_cs_chunks: 100,
            bucket_s: 10.0,
            normalization: NormalizationMode::MinMax,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |what: &'static str| Err(ExperimentError::InvalidConfig(what));
        if !(self.sim_time_s > 0.0) || !self.sim_time_s.is_finite() {
            return bad("sim_time_s must be > 0");
        }
        if !(self.warmup_fraction > 0.0 && self.warmup_fraction < 1.0) {
            return bad("warmup_fraction must lie in (0, 1)");
        }
        if self.replications == 0 {
            return bad("replications must be >= 1");
        }
        if !(self.sample_interval_s > 0.0) {
            return bad("sample_interval_s must be > 0");
        }
        if !(self.bucket_s > 0.0) {
            return bad("bucket_s must be > 0");
        }
        if !(self.pit_lifetime_s > 0.0) {
            return bad("pit_lifetime_s must be > 0");
        }
        if !(self.interest_rate_hz >= 0.0) || !self.interest_rate_hz.is_finite() {
            return bad("interest_rate_hz must be >= 0");
        }
        if self.chunk_size == 0 {
            return bad("chunk_size must be > 0");
        }
        if self.file_count < APPLICATIONS as u32 {
            return bad("file_count must cover at least one file per application");
        }
        Ok(())
    }

    /// Files in each application's catalog.
    pub fn files_per_application(&self) -> u32 {
        self.file_count / APPLICATIONS as u32
    }

    pub fn reallocation_time(&self) -> SimTime {
        SimTime::from_secs_f64(self.warmup_fraction * self.sim_time_s)
    }

    /// Seeds of every replication, derived from the master seed.
    pub fn replication_seeds(&self) -> Vec<u64> {
        replication_seeds(self.master_seed, self.replications)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentError {
    InvalidConfig(&'static str),
    Topology(&'static str),
    Catalog(CatalogError),
    Fusion(FusionError),
    EmptyReplications,
    MismatchedBuckets,
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            ExperimentError::Topology(why) => write!(f, "unsuitable topology: {why}"),
            ExperimentError::Catalog(e) => write!(f, "catalog: {e}"),
            ExperimentError::Fusion(e) => write!(f, "fusion: {e}"),
            ExperimentError::EmptyReplications => f.write_str("no replications to aggregate"),
            ExperimentError::MismatchedBuckets => f.write_str("replications use different bucket grids"),
        }
    }
}

impl core::error::Error for ExperimentError {}

impl From<CatalogError> for ExperimentError {
    fn from(e: CatalogError) -> Self {
        ExperimentError::Catalog(e)
    }
}

impl From<FusionError> for ExperimentError {
    fn from(e: FusionError) -> Self {
        ExperimentError::Fusion(e)
    }
}

/// Runs one replication with the given seed and reports phase 2.
pub fn run_experiment(
    topology: &Topology,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<MetricsReport, ExperimentError> {
    let mut net = Network::new(topology, config, seed)?;
    net.run(Phase::Full)?;
    Ok(net.into_report())
}

/// Like [`run_experiment`], also returning every protocol step in order.
pub fn run_traced(
    topology: &Topology,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(MetricsReport, Vec<TraceRecord>), ExperimentError> {
    let mut net = Network::new(topology, config, seed)?;
    net.enable_trace();
    net.run(Phase::Full)?;
    let trace = net.take_trace();
    Ok((net.into_report(), trace))
}

/// Runs only the uniform warm-up with sampling enabled and returns the raw
/// per-router features that the proposed scheme would fuse.
pub fn measure_features(
    topology: &Topology,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<RouterFeatureRecord>, ExperimentError> {
    let config = ExperimentConfig {
        scheme: Scheme::Proposed,
        ..config.clone()
    };
    let mut net = Network::new(topology, &config, seed)?;
    net.run(Phase::WarmupOnly)?;
    Ok(net.features())
}
