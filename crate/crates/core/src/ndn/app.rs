use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::catalog::CatalogModel;
use super::cs::ContentStore;
use super::name::{ContentName, DataChunk, Interest, InterestId};
use super::APPLICATIONS;
use crate::engine::{RngStream, SimTime};
use crate::topology::NodeId;

/// Fate of every Interest a consumer issued.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InterestTotals {
    pub issued: u64,
    pub satisfied: u64,
    pub expired: u64,
    pub dropped: u64,
}

impl InterestTotals {
    pub fn resolved(&self) -> u64 {
        self.satisfied + self.expired + self.dropped
    }

    pub fn is_conserved(&self) -> bool {
        self.issued == self.resolved()
    }

    pub fn merge(&mut self, other: &InterestTotals) {
        self.issued += other.issued;
        self.satisfied += other.satisfied;
        self.expired += other.expired;
        self.dropped += other.dropped;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterestOutcome {
    Satisfied,
    Expired,
    Dropped,
}

#[derive(Debug, Clone, Copy)]
struct Outstanding {
    id: InterestId,
    issued_at: SimTime,
    epoch: usize,
}

/// Poisson request source attached to one router.
///
/// Each Interest picks an application uniformly, a file rank from the
/// Mandelbrot-Zipf catalog, and the next chunk of that file from a
/// per-file cursor that wraps after the last chunk.
#[derive(Debug, Clone)]
pub struct Consumer {
    pub id: NodeId,
    pub router: NodeId,
    rng: RngStream,
    rate_hz: f64,
    cursors: BTreeMap<(u8, u32), u32>,
    outstanding: BTreeMap<ContentName, Vec<Outstanding>>,
    totals: Vec<InterestTotals>,
}

impl Consumer {
    pub fn new(id: NodeId, router: NodeId, rng: RngStream, rate_hz: f64) -> Self {
        Self {
            id,
            router,
            rng,
            rate_hz,
            cursors: BTreeMap::new(),
            outstanding: BTreeMap::new(),
            totals: Vec::new(),
        }
    }

    fn totals_mut(&mut self, epoch: usize) -> &mut InterestTotals {
        if self.totals.len() <= epoch {
            self.totals.resize(epoch + 1, InterestTotals::default());
        }
        &mut self.totals[epoch]
    }

    /// Totals of Interests issued during `epoch`.
    pub fn totals(&self, epoch: usize) -> InterestTotals {
        self.totals.get(epoch).copied().unwrap_or_default()
    }

    pub fn outstanding(&self) -> usize {
        self.outstanding.values().map(Vec::len).sum()
    }

    /// Issues one Interest and returns it with the gap to the next tick
    /// (infinite when the rate is zero).
    pub fn tick(
        &mut self,
        catalog: &CatalogModel,
        now: SimTime,
        id: InterestId,
        epoch: usize,
    ) -> (Interest, f64) {
        let app = 1 + self.rng.index(APPLICATIONS as usize) as u8;
        let rank = catalog.sample(&mut self.rng);
        let cursor = self.cursors.entry((app, rank)).or_insert(0);
        let seq = *cursor;
        *cursor = (seq + 1) % catalog.chunks_per_file();
        let gap = self.rng.exponential(self.rate_hz);

        let name = ContentName::new(app, rank, seq);
        self.outstanding.entry(name).or_default().push(Outstanding {
            id,
            issued_at: now,
            epoch,
        });
        self.totals_mut(epoch).issued += 1;
        let interest = Interest {
            id,
            name,
            issued_at: now,
            origin: self.id,
        };
        (interest, gap)
    }

    /// Satisfies every outstanding Interest for the chunk; returns their
    /// round-trip times in seconds.
    pub fn receive(&mut self, data: &DataChunk, now: SimTime) -> Vec<f64> {
        let Some(waiting) = self.outstanding.remove(&data.name) else {
            return Vec::new();
        };
        let mut rtts = Vec::with_capacity(waiting.len());
        for o in waiting {
            self.totals_mut(o.epoch).satisfied += 1;
            rtts.push((now - o.issued_at).as_secs_f64());
        }
        rtts
    }

    /// Resolves one Interest as expired or dropped if it is still outstanding.
    pub fn resolve(&mut self, name: &ContentName, id: InterestId, outcome: InterestOutcome) -> bool {
        let Some(waiting) = self.outstanding.get_mut(name) else {
            return false;
        };
        let Some(pos) = waiting.iter().position(|o| o.id == id) else {
            return false;
        };
        let o = waiting.remove(pos);
        if waiting.is_empty() {
            self.outstanding.remove(name);
        }
        let t = self.totals_mut(o.epoch);
        match outcome {
            InterestOutcome::Satisfied => t.satisfied += 1,
            InterestOutcome::Expired => t.expired += 1,
            InterestOutcome::Dropped => t.dropped += 1,
        }
        true
    }
}

/// Content source for one or more applications, fronted by its own Content
/// Store.
#[derive(Debug, Clone)]
pub struct Producer {
    pub id: NodeId,
    apps: Vec<u8>,
    pub cs: ContentStore,
    chunk_size: u32,
    drops: u64,
}

impl Producer {
    pub fn new(id: NodeId, app: u8, cs_capacity: usize) -> Self {
        Self::serving(id, alloc::vec![app], cs_capacity)
    }

    pub fn serving(id: NodeId, mut apps: Vec<u8>, cs_capacity: usize) -> Self {
        apps.sort_unstable();
        apps.dedup();
        Self {
            id,
            apps,
            cs: ContentStore::new(cs_capacity),
            chunk_size: super::CHUNK_SIZE_BYTES,
            drops: 0,
        }
    }

    pub fn with_chunk_size(mut self, bytes: u32) -> Self {
        self.chunk_size = bytes;
        self
    }

    pub fn drops(&self) -> u64 {
        self.drops
    }

    pub fn apps(&self) -> &[u8] {
        &self.apps
    }

    pub fn serves(&self, app: u8) -> bool {
        self.apps.binary_search(&app).is_ok()
    }

    /// Serves from the Content Store when possible, otherwise from the
    /// repository (which always has the chunk) and caches it.
    pub fn respond(&mut self, interest: &Interest) -> Option<DataChunk> {
        let name = interest.name;
        if !self.serves(name.app) {
            self.drops += 1;
            return None;
        }
        if !self.cs.lookup(&name) {
            self.cs.record_miss();
            self.cs.insert(name);
        }
        Some(DataChunk {
            name,
            size_bytes: self.chunk_size,
        })
    }
}
