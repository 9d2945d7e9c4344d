use ndncache::output::{write_report, REPORT_FILES};
use ndncache::runner::{run_and_summarize, run_replications};
use ndncache::topo::parse_topology;
use ndncache::ABILENE27;
use ndncache_core::experiment::HitMiss;
use ndncache_core::{aggregate_replications, hit_ratio, run_experiment, ExperimentConfig, Scheme, Topology};

fn abilene() -> Topology {
    parse_topology(ABILENE27, "abilene27.topo").unwrap()
}

fn short(scheme: Scheme) -> ExperimentConfig {
    ExperimentConfig {
        scheme,
        sim_time_s: 30.0,
        replications: 2,
        ..ExperimentConfig::default()
    }
}

#[test]
fn golden_proposed_allocation() {
    let config = ExperimentConfig::default();
    let seed = config.replication_seeds()[0];
    let report = run_experiment(&abilene(), &config, seed).unwrap();
    assert_eq!(
        report.allocation.capacities,
        [54, 97, 181, 122, 118, 124, 89, 3, 146, 68, 98]
    );
    assert_eq!(report.fusion_calls, 1);
    assert!(report.metric_samples > 0);
}

#[test]
fn degree_allocation_follows_router_degree() {
    let config = short(Scheme::Degree);
    let report = run_experiment(&abilene(), &config, 3).unwrap();
    assert_eq!(
        report.allocation.capacities,
        [100, 100, 125, 125, 100, 100, 100, 50, 125, 75, 100]
    );
}

#[test]
fn baselines_skip_sampling_and_fusion() {
    for scheme in [Scheme::Uniform, Scheme::Degree] {
        let report = run_experiment(&abilene(), &short(scheme), 11).unwrap();
        assert_eq!(report.metric_samples, 0, "{scheme}");
        assert_eq!(report.fusion_calls, 0, "{scheme}");
        assert!(report.components.is_none());
    }
    let uniform = run_experiment(&abilene(), &short(Scheme::Uniform), 11).unwrap();
    assert!(uniform.allocation.capacities.iter().all(|&c| c == 100));
}

#[test]
fn bucket_hit_ratios_match_raw_counts() {
    for report in run_replications(&abilene(), &short(Scheme::Proposed)).unwrap() {
        for (b, counts) in report.router_counts.iter().enumerate() {
            let hits: u64 = counts.iter().map(|c| c.hits).sum();
            let misses: u64 = counts.iter().map(|c| c.misses).sum();
            let expected = if hits + misses == 0 { 0.0 } else { hits as f64 / (hits + misses) as f64 };
            assert_eq!(report.router_hit_ratio[b], expected);
            assert!((0.0..=1.0).contains(&report.router_hit_ratio[b]));
        }
        for (b, counts) in report.producer_counts.iter().enumerate() {
            let pooled = HitMiss::pooled(counts);
            assert_eq!(report.producer_hit_ratio[b], hit_ratio(pooled.hits, pooled.misses));
            assert!((0.0..=1.0).contains(&report.producer_hit_ratio[b]));
        }
        assert!(report.totals.is_conserved());
        assert!(report.warmup_totals.is_conserved());
        assert_eq!(report.bucket_starts_s, [12.0, 22.0]);
    }
}

#[test]
fn replication_results_do_not_depend_on_scheduling() {
    let topo = abilene();
    let config = short(Scheme::Proposed);
    let parallel = run_replications(&topo, &config).unwrap();
    let serial: Vec<_> = config
        .replication_seeds()
        .into_iter()
        .map(|s| run_experiment(&topo, &config, s).unwrap())
        .collect();
    assert_eq!(parallel, serial);
}

#[test]
fn empty_report_writes_headers_only() {
    let topo = abilene();
    let config = ExperimentConfig {
        sim_time_s: 10.0,
        warmup_fraction: 0.5,
        bucket_s: 10.0,
        replications: 1,
        ..ExperimentConfig::default()
    };
    let (_, summary) = run_and_summarize(&topo, &config).unwrap();
    // a 5 s phase 2 with 10 s buckets still yields one truncated bucket
    let dir = tempfile::tempdir().unwrap();
    write_report(dir.path(), &summary, None).unwrap();
    let alloc = std::fs::read_to_string(dir.path().join("allocation.csv")).unwrap();
    assert_eq!(alloc, "router_id,weight,capacity_chunks\n");
    let hr = std::fs::read_to_string(dir.path().join("router_hit_ratio.csv")).unwrap();
    assert_eq!(hr.lines().count(), 1 + summary.bucket_starts_s.len());
    assert!(hr.starts_with("bucket_start_s,mean,std\n5.00000000,"));
}

#[test]
fn report_files_are_stable() {
    let topo = abilene();
    let (reports, summary) = run_and_summarize(&topo, &short(Scheme::Degree)).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_report(a.path(), &summary, reports.first()).unwrap();
    write_report(b.path(), &summary, reports.first()).unwrap();
    for name in REPORT_FILES {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let cumulative = std::fs::read_to_string(a.path().join("cumulative.csv")).unwrap();
    assert_eq!(cumulative.lines().count(), 5);
    let alloc = std::fs::read_to_string(a.path().join("allocation.csv")).unwrap();
    assert_eq!(alloc.lines().count(), 12);
    let per_app = std::fs::read_to_string(a.path().join("per_app_hits.csv")).unwrap();
    assert_eq!(per_app.lines().count(), 5);
}

#[test]
fn single_replication_has_zero_spread() {
    let topo = abilene();
    let config = short(Scheme::Uniform);
    let report = run_experiment(&topo, &config, 9).unwrap();
    let summary = aggregate_replications(&[report.clone(), report]).unwrap();
    assert!(summary.router_hit_ratio.std.iter().all(|&s| s == 0.0));
    assert!(summary.cumulative.std.iter().all(|&s| s == 0.0));
}
