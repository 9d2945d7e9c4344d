//! NDN forwarding semantics and the request workload.

mod app;
mod catalog;
mod cs;
mod name;
mod pit;
mod router;

pub use app::{Consumer, InterestOutcome, InterestTotals, Producer};
pub use catalog::{mzipf_head_mass, CatalogError, CatalogModel};
pub use cs::ContentStore;
pub use name::{ContentName, DataChunk, Interest, InterestId};
pub use pit::{Pit, PitEntry};
pub use router::{DataAction, InterestAction, RouterNode};

/// Chunk payload size in bytes.
pub const CHUNK_SIZE_BYTES: u32 = 10_240;

/// Nominal wire size of an Interest, used only for link serialization time.
pub const INTEREST_SIZE_BYTES: u32 = 64;

/// Number of applications; application `k` is served by the `k`-th producer.
pub const APPLICATIONS: u8 = 4;
