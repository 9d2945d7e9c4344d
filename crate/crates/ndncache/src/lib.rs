//! File formats, replication runner and CSV reports for the NDN cache-size
//! allocation simulator. The simulation itself lives in `ndncache-core`.

pub mod config;
pub mod output;
pub mod runner;
pub mod topo;

pub use ndncache_core as core;

use std::path::PathBuf;

/// The shipped 27-node Abilene topology.
pub const ABILENE27: &str = include_str!("../data/abilene27.topo");

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Topology {
        path: String,
        #[source]
        source: ndncache_core::TopologyError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}
