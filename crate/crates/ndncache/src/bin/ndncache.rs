use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ndncache::config::{load_config, ConfigFile};
use ndncache::output::{print_allocation, read_features, write_features, write_report};
use ndncache::runner::run_and_summarize;
use ndncache::topo::{load_topology, parse_topology};
use ndncache::ABILENE27;
use ndncache_core::fusion::{allocate, proposed_weights};
use ndncache_core::{measure_features, FeatureMatrix, NormalizationMode, Scheme, Topology};

#[derive(Parser)]
#[command(name = "ndncache", version, about = "NDN in-network cache size allocation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Uniform,
    Degree,
    Proposed,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Uniform => Scheme::Uniform,
            SchemeArg::Degree => Scheme::Degree,
            SchemeArg::Proposed => Scheme::Proposed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Minmax,
    Zscore,
    Raw,
}

impl NormArg {
    fn mode(self) -> Option<NormalizationMode> {
        match self {
            NormArg::Minmax => Some(NormalizationMode::MinMax),
            NormArg::Zscore => Some(NormalizationMode::ZScore),
            NormArg::Raw => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Minmax,
    Zscore,
}

impl From<ModeArg> for NormalizationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Minmax => NormalizationMode::MinMax,
            ModeArg::Zscore => NormalizationMode::ZScore,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run replications of one scheme and write the CSV reports.
    Simulate {
        /// Topology file; defaults to the config's topology_path, then the
        /// built-in Abilene network.
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure per-router features during a uniform warm-up and dump them.
    Features {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "minmax")]
        normalize: NormArg,
    },
    /// Fuse a raw feature CSV into weights and split a chunk budget.
    Allocate {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        total: usize,
        #[arg(long, value_enum, default_value = "minmax")]
        normalize: ModeArg,
        /// Write the allocation here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_setup(config: Option<&Path>, topology: Option<&Path>) -> Result<(ConfigFile, Topology)> {
    let cfg = match config {
        Some(p) => load_config(p)?,
        None => ConfigFile::default(),
    };
    let topo = match topology.or(cfg.topology_path.as_deref()) {
        Some(p) => load_topology(p)?,
        None => parse_topology(ABILENE27, "abilene27.topo")?,
    };
    Ok((cfg, topo))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            topology,
            scheme,
            config,
            seed,
            replications,
            out,
        } => {
            let (cfg, topo) = load_setup(config.as_deref(), topology.as_deref())?;
            let mut exp = cfg.experiment;
            if let Some(s) = scheme {
                exp.scheme = s.into();
            }
            if let Some(s) = seed {
                exp.master_seed = s;
            }
            if let Some(n) = replications {
                exp.replications = n;
            }
            let (reports, summary) = run_and_summarize(&topo, &exp)?;
            let files = write_report(&out, &summary, reports.first())?;
            println!(
                "{} x{}: router hit ratio {:.6} (std {:.6}), producer hit ratio {:.6}, PIT occupancy {:.4}, RTT {:.6} s",
                exp.scheme,
                summary.replications,
                summary.mean_router_hit_ratio(),
                summary.cumulative.std[0],
                summary.mean_producer_hit_ratio(),
                summary.mean_pit_occupancy(),
                summary.mean_rtt_s(),
            );
            let t = summary.totals;
            println!(
                "interests: issued {} satisfied {} expired {} dropped {}",
                t.issued, t.satisfied, t.expired, t.dropped
            );
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Command::Features {
            out,
            topology,
            config,
            seed,
            normalize,
        } => {
            let (cfg, topo) = load_setup(config.as_deref(), topology.as_deref())?;
            let mut exp = cfg.experiment;
            if let Some(s) = seed {
                exp.master_seed = s;
            }
            let rep_seed = exp.replication_seeds()[0];
            let records = measure_features(&topo, &exp, rep_seed)?;
            write_features(&out, &records, normalize.mode())?;
            println!("wrote {} ({} routers)", out.display(), records.len());
        }
        Command::Allocate {
            features,
            total,
            normalize,
            out,
        } => {
            let records = read_features(&features)?;
            if records.is_empty() {
                bail!("{}: no feature rows", features.display());
            }
            let outcome = proposed_weights(&FeatureMatrix::from_records(&records), normalize.into())
                .context("fusing features")?;
            if let Some(f) = &outcome.fallback {
                eprintln!("note: uniform fallback ({f:?})");
            }
            let plan = allocate(&outcome.weights, total).context("allocating")?;
            match out {
                Some(p) => {
                    ndncache::output::write_allocation(&p, &outcome.weights, &plan)?;
                    println!("wrote {}", p.display());
                }
                None => print_allocation(&mut std::io::stdout().lock(), &outcome.weights, &plan)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
