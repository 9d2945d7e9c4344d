//! Runs independent replications on worker threads.

use std::thread;

use ndncache_core::{
    aggregate_replications, run_experiment, ExperimentConfig, ExperimentError, MetricsReport,
    Summary, Topology,
};

/// One report per replication seed, in seed order. Each replication owns
/// its own engine, so the result does not depend on the thread count.
pub fn run_replications(
    topology: &Topology,
    config: &ExperimentConfig,
) -> Result<Vec<MetricsReport>, ExperimentError> {
    config.validate()?;
    let seeds = config.replication_seeds();
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(seeds.len())
        .max(1);
    let chunk = seeds.len().div_ceil(workers);
    let results: Vec<Result<MetricsReport, ExperimentError>> = thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&seed| run_experiment(topology, config, seed))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("replication thread panicked"))
            .collect()
    });
    results.into_iter().collect()
}

pub fn run_and_summarize(
    topology: &Topology,
    config: &ExperimentConfig,
) -> Result<(Vec<MetricsReport>, Summary), ExperimentError> {
    let reports = run_replications(topology, config)?;
    let summary = aggregate_replications(&reports)?;
    Ok((reports, summary))
}
