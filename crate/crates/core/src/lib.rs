//! Search, verification and analysis of locked polyomino tilings.
//!
//! A tiling of a grid or torus by t-ominoes is *locked* when no two adjacent
//! tiles can be merged and re-split into a different pair of t-ominoes, and
//! the board admits at least one other tiling. The crate provides:
//!
//! * [`geometry`]: boards, fixed polyominoes, cell types, board symmetries;
//! * [`tables`]: pairwise type compatibility tables and their cache files;
//! * [`search`]: the exhaustive forward-checking search for locked tilings;
//! * [`verify`]: a table-free lockedness checker;
//! * [`metagraph`]: the recombination metagraph of small boards;
//! * [`constructions`]: explicit move sequences and tiling families;
//! * [`document`]: the JSON exchange formats.

pub mod constructions;
pub mod document;
pub mod error;
pub mod geometry;
pub mod metagraph;
pub mod search;
pub mod tables;
pub mod tiling;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{CellType, Polyomino, Topology, Transform, TransformKind};
pub use tables::{PairTable, TableKind, TableStore};
pub use tiling::Tiling;
pub use verify::{LockReport, Verdict};
