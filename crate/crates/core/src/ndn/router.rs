use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::cs::ContentStore;
use super::name::{DataChunk, Interest};
use super::pit::Pit;
use crate::engine::SimTime;
use crate::topology::NodeId;

/// What a router does with an incoming Interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterestAction {
    /// Content Store hit: send `data` back on the arrival face.
    Satisfied { to: NodeId, data: DataChunk },
    /// Name already pending; the arrival face was added to the PIT entry.
    Aggregated,
    /// New PIT entry; the Interest goes upstream to `to`.
    Forwarded {
        to: NodeId,
        created_at: SimTime,
        expires_at: SimTime,
    },
    /// No route to the content's producer.
    Dropped,
}

/// What a router does with an incoming Data chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataAction {
    /// Cached and copied to every face of the consumed PIT entry.
    Forward { faces: Vec<NodeId> },
    /// No PIT entry; discarded.
    Unsolicited,
}

/// One NDN router: Content Store, PIT and FIB.
#[derive(Debug, Clone)]
pub struct RouterNode {
    pub id: NodeId,
    pub cs: ContentStore,
    pub pit: Pit,
    /// producer -> next hop
    pub fib: BTreeMap<NodeId, NodeId>,
    chunk_size: u32,
    drops: u64,
    unsolicited: u64,
}

impl RouterNode {
    pub fn new(id: NodeId, cs_capacity: usize, fib: BTreeMap<NodeId, NodeId>) -> Self {
        Self {
            id,
            cs: ContentStore::new(cs_capacity),
            pit: Pit::new(),
            fib,
            chunk_size: super::CHUNK_SIZE_BYTES,
            drops: 0,
            unsolicited: 0,
        }
    }

    pub fn with_chunk_size(mut self, bytes: u32) -> Self {
        self.chunk_size = bytes;
        self
    }

    pub fn drops(&self) -> u64 {
        self.drops
    }

    pub fn unsolicited(&self) -> u64 {
        self.unsolicited
    }

    /// CS lookup, then PIT aggregation, then FIB forwarding.
    ///
    /// `producer` is the node serving the Interest's application, if known.
    /// Only the forwarding branch counts a CS miss.
    pub fn handle_interest(
        &mut self,
        interest: &Interest,
        from: NodeId,
        producer: Option<NodeId>,
        now: SimTime,
        pit_lifetime: SimTime,
    ) -> InterestAction {
        let name = interest.name;
        if self.cs.lookup(&name) {
            return InterestAction::Satisfied {
                to: from,
                data: DataChunk {
                    name,
                    size_bytes: self.chunk_size,
                },
            };
        }
        if let Some(entry) = self.pit.get_mut(&name) {
            entry.add_face(from);
            return InterestAction::Aggregated;
        }
        let Some(next) = producer.and_then(|p| self.fib.get(&p)).copied() else {
            self.drops += 1;
            return InterestAction::Dropped;
        };
        self.cs.record_miss();
        let entry = self.pit.create(name, from, now, pit_lifetime);
        InterestAction::Forwarded {
            to: next,
            created_at: entry.created_at,
            expires_at: entry.expires_at,
        }
    }

    pub fn handle_data(&mut self, data: &DataChunk) -> DataAction {
        match self.pit.remove(&data.name) {
            Some(entry) => {
                assert!(!entry.faces.is_empty(), "PIT entry without faces");
                self.cs.insert(data.name);
                DataAction::Forward { faces: entry.faces }
            }
            None => {
                self.unsolicited += 1;
                DataAction::Unsolicited
            }
        }
    }
}
