//! JSON exchange format for tilings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Topology;
use crate::tiling::Tiling;
use crate::verify::validate_tiling;

pub const SCHEMA_VERSION: u32 = 1;

/// A tiling on disk: one tile identifier per cell in row-major order.
/// Identifiers are arbitrary; equal identifiers mean the same tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingDocument {
    pub schema_version: u32,
    pub topology: Topology,
    pub t: usize,
    pub cells: Vec<u32>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl TilingDocument {
    pub fn from_tiling(tiling: &Tiling) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            topology: *tiling.topology(),
            t: tiling.t(),
            cells: tiling.labels().to_vec(),
            metadata: serde_json::Map::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    /// The tiling, provided it passes validation.
    pub fn to_tiling(&self) -> Result<Tiling> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!("unsupported schema_version {}", self.schema_version)));
        }
        let topo = Topology::new(self.topology.width, self.topology.height, self.topology.wrap)
            .map_err(|e| Error::Document(e.to_string()))?;
        if self.cells.len() != topo.area() {
            return Err(Error::Document(format!("{} cells listed for a board of {} cells", self.cells.len(), topo.area())));
        }
        let tiling = Tiling::from_labels(topo, self.t, self.cells.clone());
        validate_tiling(&tiling).map_err(|d| Error::Document(format!("invalid tiling: {d}")))?;
        Ok(tiling)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Reads and validates a tiling file.
pub fn load_tiling(path: &Path) -> Result<Tiling> {
    TilingDocument::load(path)?.to_tiling()
}
