use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::name::ContentName;

/// LRU chunk cache with cumulative hit/miss counters.
///
/// Recency is a monotone stamp; the smallest stamp is the eviction victim.
#[derive(Debug, Clone)]
pub struct ContentStore {
    capacity: usize,
    stamps: BTreeMap<ContentName, u64>,
    by_stamp: BTreeMap<u64, ContentName>,
    clock: u64,
    hits: u64,
    misses: u64,
}

impl ContentStore {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            stamps: BTreeMap::new(),
            by_stamp: BTreeMap::new(),
            clock: 0,
            hits: 0,
            misses: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.stamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stamps.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Membership test without touching recency or counters.
    pub fn contains(&self, name: &ContentName) -> bool {
        self.stamps.contains_key(name)
    }

    fn touch(&mut self, name: ContentName) {
        self.clock += 1;
        if let Some(old) = self.stamps.insert(name, self.clock) {
            self.by_stamp.remove(&old);
        }
        self.by_stamp.insert(self.clock, name);
    }

    /// On a hit, counts it and promotes the entry to most-recently-used.
    /// A miss changes nothing; callers count it with [`record_miss`](Self::record_miss)
    /// once they know the lookup really ends upstream.
    pub fn lookup(&mut self, name: &ContentName) -> bool {
        if self.stamps.contains_key(name) {
            self.hits += 1;
            self.touch(*name);
            true
        } else {
            false
        }
    }

    pub fn record_miss(&mut self) {
        self.misses += 1;
    }

    /// Inserts (or refreshes) `name`, returning the evicted entry if any.
    /// A zero-capacity store keeps nothing.
    pub fn insert(&mut self, name: ContentName) -> Option<ContentName> {
        if self.capacity == 0 {
            return None;
        }
        let evicted = if !self.stamps.contains_key(&name) && self.stamps.len() >= self.capacity {
            self.evict_lru()
        } else {
            None
        };
        self.touch(name);
        debug_assert!(self.stamps.len() <= self.capacity);
        evicted
    }

    fn evict_lru(&mut self) -> Option<ContentName> {
        let (_, victim) = self.by_stamp.pop_first()?;
        self.stamps.remove(&victim);
        Some(victim)
    }

    /// Changes the capacity; shrinking evicts least-recently-used entries first.
    pub fn resize(&mut self, capacity: usize) -> Vec<ContentName> {
        self.capacity = capacity;
        let mut evicted = Vec::new();
        while self.stamps.len() > capacity {
            match self.evict_lru() {
                Some(v) => evicted.push(v),
                None => break,
            }
        }
        evicted
    }

    pub fn reset_counters(&mut self) {
        self.hits = 0;
        self.misses = 0;
    }

    /// Entries from least to most recently used.
    pub fn lru_order(&self) -> impl Iterator<Item = &ContentName> + '_ {
        self.by_stamp.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn n(i: u32) -> ContentName {
        ContentName::new(1, i, 0)
    }

    #[test]
    fn full_store_evicts_lru() {
        let mut cs = ContentStore::new(1);
        cs.insert(n(1));
        assert_eq!(cs.insert(n(2)), Some(n(1)));
        assert!(cs.contains(&n(2)));
        assert_eq!(cs.len(), 1);
    }

    #[test]
    fn hit_promotes_to_mru() {
        let mut cs = ContentStore::new(2);
        cs.insert(n(1));
        cs.insert(n(2));
        assert!(cs.lookup(&n(1)));
        assert_eq!(cs.insert(n(3)), Some(n(2)));
        assert_eq!(cs.hits(), 1);
        assert_eq!(cs.misses(), 0);
    }

    #[test]
    fn zero_capacity_keeps_nothing() {
        let mut cs = ContentStore::new(0);
        assert_eq!(cs.insert(n(1)), None);
        assert!(!cs.lookup(&n(1)));
        assert!(cs.is_empty());
    }

    #[test]
    fn shrink_evicts_oldest_first() {
        let mut cs = ContentStore::new(4);
        for i in 1..=4 {
            cs.insert(n(i));
        }
        cs.lookup(&n(1));
        assert_eq!(cs.resize(2), vec![n(2), n(3)]);
        assert_eq!(cs.lru_order().copied().collect::<Vec<_>>(), vec![n(4), n(1)]);
        assert!(cs.resize(8).is_empty());
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn reinsert_does_not_evict() {
        let mut cs = ContentStore::new(2);
        cs.insert(n(1));
        cs.insert(n(2));
        assert_eq!(cs.insert(n(1)), None);
        assert_eq!(cs.len(), 2);
    }
}
