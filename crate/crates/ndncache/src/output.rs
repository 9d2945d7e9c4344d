//! CSV reports. Every float is printed with 9 significant digits so that
//! identical results give identical bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndncache_core::fusion::WeightVector;
use ndncache_core::{
    AllocationPlan, FeatureMatrix, MetricsReport, NodeId, NormalizationMode, RouterFeatureRecord,
    Summary,
};

use crate::FormatError;

pub const FEATURES_HEADER: [&str; 4] = ["router_id", "bc", "ewma_pi", "ewma_hi"];

/// `x` with 9 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // the exponent of the rounded scientific form already accounts for carries
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting has an exponent");
    if !(-4..15).contains(&exp) {
        return sci;
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> FormatError + '_ {
    move |source| FormatError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn series_rows(starts: &[f64], mean: &[f64], std: &[f64]) -> Vec<Vec<String>> {
    starts
        .iter()
        .zip(mean)
        .zip(std)
        .map(|((t, m), s)| vec![fmt_sig9(*t), fmt_sig9(*m), fmt_sig9(*s)])
        .collect()
}

pub const REPORT_FILES: [&str; 7] = [
    "router_hit_ratio.csv",
    "producer_hit_ratio.csv",
    "rtt.csv",
    "pit_occupancy.csv",
    "per_app_hits.csv",
    "cumulative.csv",
    "allocation.csv",
];

/// Writes the aggregated series plus `allocation.csv` (taken from the first
/// replication) into `dir`, which is created if needed. Returns the paths
/// written.
pub fn write_report(
    dir: &Path,
    summary: &Summary,
    first: Option<&MetricsReport>,
) -> Result<Vec<PathBuf>, FormatError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let header = ["bucket_start_s", "mean", "std"];
    let starts = &summary.bucket_starts_s;
    let series = [
        (REPORT_FILES[0], &summary.router_hit_ratio),
        (REPORT_FILES[1], &summary.producer_hit_ratio),
        (REPORT_FILES[2], &summary.rtt_mean_s),
        (REPORT_FILES[3], &summary.pit_occupancy),
    ];
    let mut written = Vec::new();
    for (name, stat) in series {
        let path = dir.join(name);
        write_rows(&path, &header, &series_rows(starts, &stat.mean, &stat.std))?;
        written.push(path);
    }

    let path = dir.join(REPORT_FILES[4]);
    let rows: Vec<Vec<String>> = summary
        .per_app_keys
        .iter()
        .enumerate()
        .map(|(k, (producer, app))| {
            vec![
                producer.index().to_string(),
                app.to_string(),
                fmt_sig9(summary.per_app_hits.mean[k]),
            ]
        })
        .collect();
    write_rows(&path, &["producer", "application", "hits"], &rows)?;
    written.push(path);

    let path = dir.join(REPORT_FILES[5]);
    let labels = ["router_hit_ratio", "producer_hit_ratio", "rtt_s", "pit_occupancy"];
    let rows: Vec<Vec<String>> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| {
            vec![
                l.to_string(),
                fmt_sig9(summary.cumulative.mean.get(k).copied().unwrap_or(0.0)),
                fmt_sig9(summary.cumulative.std.get(k).copied().unwrap_or(0.0)),
            ]
        })
        .collect();
    write_rows(&path, &["metric", "mean", "std"], &rows)?;
    written.push(path);

    let path = dir.join(REPORT_FILES[6]);
    match first {
        Some(r) => write_allocation(&path, &r.weights, &r.allocation)?,
        None => write_rows(&path, &["router_id", "weight", "capacity_chunks"], &[])?,
    }
    written.push(path);
    Ok(written)
}

pub fn allocation_rows(weights: &WeightVector, plan: &AllocationPlan) -> Vec<Vec<String>> {
    plan.routers
        .iter()
        .zip(&plan.capacities)
        .map(|(&r, &cap)| {
            vec![
                r.index().to_string(),
                fmt_sig9(weights.get(r).unwrap_or(0.0)),
                cap.to_string(),
            ]
        })
        .collect()
}

pub fn write_allocation(
    path: &Path,
    weights: &WeightVector,
    plan: &AllocationPlan,
) -> Result<(), FormatError> {
    write_rows(
        path,
        &["router_id", "weight", "capacity_chunks"],
        &allocation_rows(weights, plan),
    )
}

/// Same content as [`write_allocation`], to any writer.
pub fn print_allocation(
    out: &mut impl Write,
    weights: &WeightVector,
    plan: &AllocationPlan,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["router_id", "weight", "capacity_chunks"])?;
    for r in allocation_rows(weights, plan) {
        w.write_record(&r)?;
    }
    w.flush()
}

/// Feature table; with `normalize` set the three columns are normalized
/// first.
pub fn write_features(
    path: &Path,
    records: &[RouterFeatureRecord],
    normalize: Option<NormalizationMode>,
) -> Result<(), FormatError> {
    let matrix = FeatureMatrix::from_records(records);
    let matrix = match normalize {
        Some(mode) => matrix.normalize(mode).map_err(|e| FormatError::Syntax {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?,
        None => matrix,
    };
    let rows: Vec<Vec<String>> = matrix
        .routers
        .iter()
        .zip(&matrix.rows)
        .map(|(r, row)| {
            let mut v = vec![r.index().to_string()];
            v.extend(row.iter().map(|&x| fmt_sig9(x)));
            v
        })
        .collect();
    write_rows(path, &FEATURES_HEADER, &rows)
}

pub fn read_features(path: &Path) -> Result<Vec<RouterFeatureRecord>, FormatError> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let headers = rdr.headers().map_err(csv_err(path))?.clone();
    if headers.iter().collect::<Vec<_>>() != FEATURES_HEADER {
        return Err(FormatError::Syntax {
            path: path.display().to_string(),
            line: 1,
            message: format!("expected header {}", FEATURES_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let line = k + 2;
        let bad = |what: &str| FormatError::Syntax {
            path: path.display().to_string(),
            line,
            message: format!("bad {what}"),
        };
        let field = |i: usize, what: &str| -> Result<f64, FormatError> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(what))
        };
        let router: usize = rec
            .get(0)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("router_id"))?;
        out.push(RouterFeatureRecord {
            router: NodeId(router),
            bc: field(1, "bc")?,
            estimated_pi: field(2, "ewma_pi")?,
            estimated_hi: field(3, "ewma_hi")?,
        });
    }
    Ok(out)
}
