use alloc::vec::Vec;
use core::ops::AddAssign;

use super::{ExperimentError, Scheme};
use crate::fusion::{AllocationPlan, Fallback, PrincipalComponents, WeightVector};
use crate::metrics::RouterFeatureRecord;
use crate::ndn::{ContentStore, InterestTotals};
use crate::numeric::{mean, sample_std};
use crate::topology::NodeId;

/// `hits / (hits + misses)`, or 0 when there were no requests.
pub fn hit_ratio(hits: u64, misses: u64) -> f64 {
    let total = hits + misses;
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HitMiss {
    pub hits: u64,
    pub misses: u64,
}

impl HitMiss {
    pub fn of(cs: &ContentStore) -> Self {
        Self {
            hits: cs.hits(),
            misses: cs.misses(),
        }
    }

    pub fn ratio(&self) -> f64 {
        hit_ratio(self.hits, self.misses)
    }

    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &HitMiss) -> HitMiss {
        HitMiss {
            hits: self.hits - earlier.hits,
            misses: self.misses - earlier.misses,
        }
    }

    /// Sum over a set of caches.
    pub fn pooled(items: &[HitMiss]) -> HitMiss {
        let mut acc = HitMiss::default();
        for x in items {
            acc += *x;
        }
        acc
    }
}

impl AddAssign for HitMiss {
    fn add_assign(&mut self, rhs: HitMiss) {
        self.hits += rhs.hits;
        self.misses += rhs.misses;
    }
}

/// Producer Content Store counts for one application during phase 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppHits {
    pub producer: NodeId,
    pub app: u8,
    pub hits: u64,
    pub misses: u64,
}

/// Phase-2 results of one replication.
///
/// Per-bucket series are windowed: each value covers one bucket only. A
/// bucket's hit ratio pools the counts of every cache in the set. The
/// `cumulative_*` fields pool the whole phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub scheme: Scheme,
    pub seed: u64,
    pub bucket_starts_s: Vec<f64>,
    pub router_hit_ratio: Vec<f64>,
    pub producer_hit_ratio: Vec<f64>,
    /// Mean round-trip time of Interests satisfied in the bucket (0 if none).
    pub rtt_mean_s: Vec<f64>,
    /// Mean PIT entries per router, sampled every sampling interval.
    pub pit_occupancy: Vec<f64>,
    /// `[bucket][router]` raw counts behind `router_hit_ratio`.
    pub router_counts: Vec<Vec<HitMiss>>,
    /// `[bucket][producer]` raw counts behind `producer_hit_ratio`.
    pub producer_counts: Vec<Vec<HitMiss>>,
    pub per_app_hits: Vec<AppHits>,
    pub cumulative_router_hit_ratio: f64,
    pub cumulative_producer_hit_ratio: f64,
    pub mean_rtt_s: f64,
    pub mean_pit_occupancy: f64,
    /// `pit_histogram[k]`: router samples that found `k` PIT entries.
    pub pit_histogram: Vec<u64>,
    /// Interests issued in phase 2, resolved after the drain.
    pub totals: InterestTotals,
    /// Interests issued during the warm-up.
    pub warmup_totals: InterestTotals,
    pub allocation: AllocationPlan,
    pub weights: WeightVector,
    /// Raw features fused at reallocation (proposed scheme only).
    pub features: Vec<RouterFeatureRecord>,
    pub components: Option<PrincipalComponents>,
    pub fallback: Option<Fallback>,
    pub metric_samples: u64,
    pub fusion_calls: u64,
    pub router_drops: u64,
    pub producer_drops: u64,
    pub unsolicited: u64,
}

/// Per-bucket mean and sample standard deviation across replications.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesStat {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl SeriesStat {
    fn from_rows<'a>(rows: impl Iterator<Item = &'a [f64]> + Clone, width: usize) -> Self {
        let mut out = SeriesStat::default();
        for j in 0..width {
            let column: Vec<f64> = rows.clone().map(|r| r[j]).collect();
            out.mean.push(mean(&column));
            out.std.push(sample_std(&column));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub scheme: Scheme,
    pub replications: usize,
    pub bucket_starts_s: Vec<f64>,
    pub router_hit_ratio: SeriesStat,
    pub producer_hit_ratio: SeriesStat,
    pub rtt_mean_s: SeriesStat,
    pub pit_occupancy: SeriesStat,
    /// `(producer, application)` keys of `per_app_hits`.
    pub per_app_keys: Vec<(NodeId, u8)>,
    pub per_app_hits: SeriesStat,
    /// Whole-phase values, one entry each: router hit ratio, producer hit
    /// ratio, RTT, PIT occupancy.
    pub cumulative: SeriesStat,
    pub totals: InterestTotals,
}

/// Joins replications of one scheme into per-bucket statistics.
pub fn aggregate_replications(reports: &[MetricsReport]) -> Result<Summary, ExperimentError> {
    let first = reports.first().ok_or(ExperimentError::EmptyReplications)?;
    let keys: Vec<(NodeId, u8)> = first.per_app_hits.iter().map(|a| (a.producer, a.app)).collect();
    for r in reports {
        let same_keys = r.per_app_hits.len() == keys.len()
            && r.per_app_hits.iter().zip(&keys).all(|(a, k)| (a.producer, a.app) == *k);
        if r.bucket_starts_s != first.bucket_starts_s || !same_keys {
            return Err(ExperimentError::MismatchedBuckets);
        }
    }
    let nb = first.bucket_starts_s.len();
    let series = |f: fn(&MetricsReport) -> &[f64]| SeriesStat::from_rows(reports.iter().map(f), nb);
    let app_rows: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| r.per_app_hits.iter().map(|a| a.hits as f64).collect())
        .collect();
    let cumulative_rows: Vec<[f64; 4]> = reports
        .iter()
        .map(|r| {
            [
                r.cumulative_router_hit_ratio,
                r.cumulative_producer_hit_ratio,
                r.mean_rtt_s,
                r.mean_pit_occupancy,
            ]
        })
        .collect();
    let mut totals = InterestTotals::default();
    for r in reports {
        totals.merge(&r.totals);
    }
    Ok(Summary {
        scheme: first.scheme,
        replications: reports.len(),
        bucket_starts_s: first.bucket_starts_s.clone(),
        router_hit_ratio: series(|r| &r.router_hit_ratio),
        producer_hit_ratio: series(|r| &r.producer_hit_ratio),
        rtt_mean_s: series(|r| &r.rtt_mean_s),
        pit_occupancy: series(|r| &r.pit_occupancy),
        per_app_hits: SeriesStat::from_rows(app_rows.iter().map(Vec::as_slice), keys.len()),
        per_app_keys: keys,
        cumulative: SeriesStat::from_rows(cumulative_rows.iter().map(|r| &r[..]), 4),
        totals,
    })
}

impl Summary {
    pub fn mean_router_hit_ratio(&self) -> f64 {
        self.cumulative.mean[0]
    }

    pub fn mean_producer_hit_ratio(&self) -> f64 {
        self.cumulative.mean[1]
    }

    pub fn mean_rtt_s(&self) -> f64 {
        self.cumulative.mean[2]
    }

    pub fn mean_pit_occupancy(&self) -> f64 {
        self.cumulative.mean[3]
    }
}
