use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::name::ContentName;
use crate::engine::SimTime;
use crate::topology::NodeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitEntry {
    pub name: ContentName,
    /// Requesting neighbors, sorted and without duplicates.
    pub faces: Vec<NodeId>,
    pub created_at: SimTime,
    pub expires_at: SimTime,
}

impl PitEntry {
    pub fn add_face(&mut self, face: NodeId) {
        if let Err(pos) = self.faces.binary_search(&face) {
            self.faces.insert(pos, face);
        }
    }
}

/// Pending Interest Table: at most one entry per name.
#[derive(Debug, Clone, Default)]
pub struct Pit {
    entries: BTreeMap<ContentName, PitEntry>,
}

impl Pit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &ContentName) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn get_mut(&mut self, name: &ContentName) -> Option<&mut PitEntry> {
        self.entries.get_mut(name)
    }

    /// Creates an entry for a name that has none.
    pub fn create(&mut self, name: ContentName, face: NodeId, now: SimTime, lifetime: SimTime) -> &PitEntry {
        debug_assert!(!self.entries.contains_key(&name));
        self.entries.entry(name).or_insert(PitEntry {
            name,
            faces: alloc::vec![face],
            created_at: now,
            expires_at: now + lifetime,
        })
    }

    pub fn remove(&mut self, name: &ContentName) -> Option<PitEntry> {
        self.entries.remove(name)
    }

    /// Drops the entry for `name` if it is the one created at `created_at`
    /// and it has reached its expiry time.
    pub fn expire(&mut self, name: &ContentName, created_at: SimTime, now: SimTime) -> Option<PitEntry> {
        match self.entries.get(name) {
            Some(e) if e.created_at == created_at && e.expires_at <= now => self.entries.remove(name),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &PitEntry> + '_ {
        self.entries.values()
    }
}
