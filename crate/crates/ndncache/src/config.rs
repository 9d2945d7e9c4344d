//! `key = value` experiment configuration files.
//!
//! Keys are the [`ExperimentConfig`] field names plus `topology_path`.
//! Unknown keys, repeated keys and unparsable values are errors; missing
//! keys keep their defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndncache_core::{ExperimentConfig, NormalizationMode, Scheme};

use crate::{read_file, FormatError};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub experiment: ExperimentConfig,
    /// Relative paths are resolved against the config file's directory.
    pub topology_path: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "topology_path",
    "scheme",
    "chunk_size",
    "total_router_cache_chunks",
    "file_count",
    "chunks_per_file",
    "q",
    "s",
    "interest_rate_hz",
    "sim_time_s",
    "warmup_fraction",
    "sample_interval_s",
    "pit_lifetime_s",
    "master_seed",
    "replications",
    "producer_cs_chunks",
    "bucket_s",
    "normalization",
];

pub fn parse_config(text: &str, origin: &str) -> Result<ConfigFile, FormatError> {
    let mut out = ConfigFile::default();
    let mut seen = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let err = |message: String| FormatError::Syntax {
            path: origin.to_string(),
            line: lineno,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err("expected `key = value`".into()));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        if seen.contains(&key) {
            return Err(err(format!("key `{key}` given twice")));
        }
        seen.push(key);
        set(&mut out, key, value).map_err(|m| err(format!("{key}: {m}")))?;
    }
    out.experiment
        .validate()
        .map_err(|e| FormatError::Syntax {
            path: origin.to_string(),
            line: 0,
            message: e.to_string(),
        })?;
    Ok(out)
}

fn num<T: FromStr>(value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse `{value}`"))
}

fn set(out: &mut ConfigFile, key: &str, value: &str) -> Result<(), String> {
    let c = &mut out.experiment;
    match key {
        "topology_path" => out.topology_path = Some(PathBuf::from(value)),
        "scheme" => {
            c.scheme = Scheme::from_str(value)
                .map_err(|_| format!("expected uniform|degree|proposed, got `{value}`"))?
        }
        "normalization" => {
            c.normalization = NormalizationMode::from_str(value)
                .map_err(|_| format!("expected minmax|zscore, got `{value}`"))?
        }
        "chunk_size" => c.chunk_size = num(value)?,
        "total_router_cache_chunks" => c.total_router_cache_chunks = num(value)?,
        "file_count" => c.file_count = num(value)?,
        "chunks_per_file" => c.chunks_per_file = num(value)?,
        "q" => c.q = num(value)?,
        "s" => c.s = num(value)?,
        "interest_rate_hz" => c.interest_rate_hz = num(value)?,
        "sim_time_s" => c.sim_time_s = num(value)?,
        "warmup_fraction" => c.warmup_fraction = num(value)?,
        "sample_interval_s" => c.sample_interval_s = num(value)?,
        "pit_lifetime_s" => c.pit_lifetime_s = num(value)?,
        "master_seed" => c.master_seed = num(value)?,
        "replications" => c.replications = num(value)?,
        "producer_cs_chunks" => c.producer_cs_chunks = num(value)?,
        "bucket_s" => c.bucket_s = num(value)?,
        _ => unreachable!("key list and setter disagree on `{key}`"),
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<ConfigFile, FormatError> {
    let mut cfg = parse_config(&read_file(path)?, &path.display().to_string())?;
    if let Some(p) = cfg.topology_path.as_mut() {
        if p.is_relative() {
            if let Some(dir) = path.parent() {
                *p = dir.join(&*p);
            }
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_config("", "x").unwrap(), ConfigFile::default());
    }

    #[test]
    fn every_key_is_settable() {
        let text = "\
topology_path = net.topo
scheme = degree
chunk_size = 4096
total_router_cache_chunks = 500
file_count = 400
chunks_per_file = 5
q = 0
s = 1.5
interest_rate_hz = 10
sim_time_s = 50
warmup_fraction = 0.5
sample_interval_s = 0.02
pit_lifetime_s = 1
master_seed = 99
replications = 3
producer_cs_chunks = 0
bucket_s = 5
normalization = zscore   # trailing comment
";
        let cfg = parse_config(text, "x").unwrap();
        let c = &cfg.experiment;
        assert_eq!(cfg.topology_path, Some(PathBuf::from("net.topo")));
        assert_eq!(c.scheme, Scheme::Degree);
        assert_eq!((c.chunk_size, c.total_router_cache_chunks), (4096, 500));
        assert_eq!((c.file_count, c.chunks_per_file), (400, 5));
        assert_eq!((c.q, c.s, c.interest_rate_hz), (0.0, 1.5, 10.0));
        assert_eq!((c.sim_time_s, c.warmup_fraction), (50.0, 0.5));
        assert_eq!((c.sample_interval_s, c.pit_lifetime_s), (0.02, 1.0));
        assert_eq!((c.master_seed, c.replications, c.producer_cs_chunks), (99, 3, 0));
        assert_eq!(c.bucket_s, 5.0);
        assert_eq!(c.normalization, NormalizationMode::ZScore);
    }

    #[test]
    fn unknown_key_is_an_error_with_line() {
        match parse_config("q = 5\n\ncache = 3\n", "x") {
            Err(FormatError::Syntax { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("cache"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_values_and_repeats_are_errors() {
        assert!(parse_config("q = five\n", "x").is_err());
        assert!(parse_config("q = 1\nq = 2\n", "x").is_err());
        assert!(parse_config("scheme = random\n", "x").is_err());
        assert!(parse_config("just text\n", "x").is_err());
        assert!(parse_config("warmup_fraction = 1.5\n", "x").is_err());
    }
}
