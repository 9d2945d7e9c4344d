use core::fmt;

use crate::engine::SimTime;
use crate::topology::NodeId;

/// Name of one chunk: `/app/<app>/file/<rank>/<seq>`.
///
/// The derived order compares application, then file rank, then sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentName {
    pub app: u8,
    pub file_rank: u32,
    pub chunk_seq: u32,
}

impl ContentName {
    pub fn new(app: u8, file_rank: u32, chunk_seq: u32) -> Self {
        Self {
            app,
            file_rank,
            chunk_seq,
        }
    }
}

impl fmt::Display for ContentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "/app{}/file{}/{}", self.app, self.file_rank, self.chunk_seq)
    }
}

/// Identifier of one issued Interest, unique within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterestId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interest {
    pub id: InterestId,
    pub name: ContentName,
    pub issued_at: SimTime,
    pub origin: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataChunk {
    pub name: ContentName,
    pub size_bytes: u32,
}

impl DataChunk {
    pub fn new(name: ContentName) -> Self {
        Self {
            name,
            size_bytes: super::CHUNK_SIZE_BYTES,
        }
    }
}
