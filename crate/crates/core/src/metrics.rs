//! Smoothed short-term router metrics.
//!
//! Every sampling tick feeds two estimators per router: the current PIT
//! occupancy and the number of Content Store hits since the previous tick.
//! Each estimator tracks an exponentially weighted average and an
//! exponentially weighted absolute deviation; the estimate adds a fraction
//! of the deviation to the average as a safety margin.

use alloc::vec::Vec;
use core::fmt;

use crate::ndn::RouterNode;
use crate::topology::{CentralityVector, NodeId};

/// Gain on new samples in the average (1/8).
pub const AVERAGE_GAIN: f64 = 0.125;
/// Gain on new absolute deviations.
pub const DEVIATION_GAIN: f64 = 0.25;
/// Deviation multiplier added to the average in the estimate.
pub const MARGIN_COEFF: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricsError {
    NegativeSample(f64),
    Uninitialized,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::NegativeSample(x) => write!(f, "negative sample {x}"),
            MetricsError::Uninitialized => f.write_str("estimator has no samples yet"),
        }
    }
}

impl core::error::Error for MetricsError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwmaEstimator {
    avg: f64,
    dev: f64,
    gain: f64,
    dev_gain: f64,
    margin_coeff: f64,
    initialized: bool,
}

impl Default for EwmaEstimator {
    fn default() -> Self {
        Self::new()
    }
}

impl EwmaEstimator {
    pub fn new() -> Self {
        Self::with_gains(AVERAGE_GAIN, DEVIATION_GAIN, MARGIN_COEFF)
    }

    /// Panics unless both gains lie strictly between 0 and 1.
    pub fn with_gains(gain: f64, dev_gain: f64, margin_coeff: f64) -> Self {
        assert!(gain > 0.0 && gain < 1.0, "gain must be in (0, 1)");
        assert!(dev_gain > 0.0 && dev_gain < 1.0, "deviation gain must be in (0, 1)");
        Self {
            avg: 0.0,
            dev: 0.0,
            gain,
            dev_gain,
            margin_coeff,
            initialized: false,
        }
    }

    /// An already-initialized estimator with the given state.
    pub fn seeded(avg: f64, dev: f64) -> Self {
        Self {
            avg,
            dev,
            initialized: true,
            ..Self::new()
        }
    }

    pub fn avg(&self) -> f64 {
        self.avg
    }

    pub fn dev(&self) -> f64 {
        self.dev
    }

    pub fn is_initialized(&self) -> bool {
        self.initialized
    }

    /// Folds in one sample. The first sample seeds the average with zero
    /// deviation; afterwards the deviation is measured against the average
    /// that includes the current sample.
    pub fn update(&mut self, sample: f64) -> Result<(), MetricsError> {
        if !(sample >= 0.0) {
            return Err(MetricsError::NegativeSample(sample));
        }
        if !self.initialized {
            self.avg = sample;
            self.dev = 0.0;
            self.initialized = true;
            return Ok(());
        }
        self.avg = self.gain * sample + (1.0 - self.gain) * self.avg;
        self.dev += self.dev_gain * ((sample - self.avg).abs() - self.dev);
        Ok(())
    }

    /// `avg + margin_coeff * dev`.
    pub fn estimate(&self) -> Result<f64, MetricsError> {
        if !self.initialized {
            return Err(MetricsError::Uninitialized);
        }
        Ok(self.avg + self.margin_coeff * self.dev)
    }
}

/// Per-router sampler state: PI and HI estimators plus the hit counter
/// reading from the previous tick.
#[derive(Debug, Clone, Default)]
pub struct RouterSampler {
    pub pi: EwmaEstimator,
    pub hi: EwmaEstimator,
    last_hits: u64,
    samples: u64,
}

impl RouterSampler {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts the hit window from the router's current counter.
    pub fn anchored(router: &RouterNode) -> Self {
        Self {
            last_hits: router.cs.hits(),
            ..Self::default()
        }
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Feeds the current PIT size and the hits since the last tick; returns
    /// the `(pi, hi)` samples.
    pub fn sample(&mut self, router: &RouterNode) -> (u64, u64) {
        let pi = router.pit.len() as u64;
        let hits = router.cs.hits();
        // counters may have been reset underneath us
        let hi = hits.saturating_sub(self.last_hits);
        self.last_hits = hits;
        self.samples += 1;
        self.pi.update(pi as f64).expect("PIT size is non-negative");
        self.hi.update(hi as f64).expect("hit delta is non-negative");
        (pi, hi)
    }
}

/// Raw (un-normalized) feature row for one router.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouterFeatureRecord {
    pub router: NodeId,
    pub bc: f64,
    pub estimated_pi: f64,
    pub estimated_hi: f64,
}

impl RouterFeatureRecord {
    pub fn as_row(&self) -> [f64; 3] {
        [self.bc, self.estimated_pi, self.estimated_hi]
    }
}

/// One record per router, in the order given. Estimators that never saw a
/// sample contribute 0.
pub fn collect_features(
    routers: &[NodeId],
    bc: &CentralityVector,
    samplers: &[RouterSampler],
) -> Vec<RouterFeatureRecord> {
    assert_eq!(routers.len(), samplers.len());
    routers
        .iter()
        .zip(samplers)
        .map(|(&router, s)| RouterFeatureRecord {
            router,
            bc: bc.get(router),
            estimated_pi: s.pi.estimate().unwrap_or(0.0),
            estimated_hi: s.hi.estimate().unwrap_or(0.0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndn::ContentName;
    use crate::engine::SimTime;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    #[test]
    fn constant_series_is_a_fixed_point() {
        let mut e = EwmaEstimator::new();
        for _ in 0..1000 {
            e.update(7.0).unwrap();
        }
        assert_eq!(e.avg(), 7.0);
        assert_eq!(e.dev(), 0.0);
        assert_eq!(e.estimate().unwrap(), 7.0);
    }

    #[test]
    fn single_step_by_hand() {
        let mut e = EwmaEstimator::seeded(0.0, 0.0);
        e.update(16.0).unwrap();
        assert_eq!(e.avg(), 2.0);
        assert_eq!(e.dev(), 3.5);
        assert!((e.estimate().unwrap() - 2.35).abs() < 1e-15);
    }

    #[test]
    fn alternating_series_keeps_positive_deviation() {
        let mut e = EwmaEstimator::new();
        for k in 0..1000 {
            e.update((k % 2) as f64).unwrap();
        }
        assert!(e.avg() > 0.0 && e.avg() < 1.0);
        assert!(e.dev() > 0.0);
        assert!(e.estimate().unwrap() >= e.avg());
    }

    #[test]
    fn rejects_negative_and_uninitialized() {
        let mut e = EwmaEstimator::new();
        assert_eq!(e.estimate(), Err(MetricsError::Uninitialized));
        assert!(matches!(e.update(-1.0), Err(MetricsError::NegativeSample(_))));
        assert_eq!(EwmaEstimator::seeded(0.0, 0.0).estimate(), Ok(0.0));
    }

    fn router() -> RouterNode {
        RouterNode::new(NodeId(0), 8, BTreeMap::new())
    }

    #[test]
    fn sampler_reads_pit_and_hit_delta() {
        let mut r = router();
        let mut s = RouterSampler::anchored(&r);
        assert_eq!(s.sample(&r), (0, 0));

        let life = SimTime::from_secs_f64(2.0);
        for f in 0..3 {
            r.pit.create(ContentName::new(1, f, 0), NodeId(1), SimTime::ZERO, life);
        }
        let cached = ContentName::new(2, 1, 0);
        r.cs.insert(cached);
        for _ in 0..5 {
            r.cs.lookup(&cached);
        }
        assert_eq!(s.sample(&r), (3, 5));
        // no traffic in between: windowed hits drop back to zero
        assert_eq!(s.sample(&r), (3, 0));
        assert_eq!(s.samples(), 3);
    }

    #[test]
    fn features_follow_router_order() {
        let routers = [NodeId(0), NodeId(1)];
        let bc = CentralityVector::from_values(vec![3.0, 1.0]);
        let samplers = vec![RouterSampler::new(), RouterSampler::new()];
        let recs = collect_features(&routers, &bc, &samplers);
        assert_eq!(recs[0].as_row(), [3.0, 0.0, 0.0]);
        assert_eq!(recs[1].router, NodeId(1));
    }
}
