use crate::geometry::{first_visit_normalize, Topology};

/// A partition of a board into labelled parts, stored as one label per cell
/// in row-major order. Labels are kept in first-visit order, so two equal
/// partitions always have equal label vectors.
///
/// Construction does not check that the parts are valid t-ominoes; see
/// [`crate::verify::validate_tiling`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tiling {
    topo: Topology,
    t: usize,
    labels: Vec<u32>,
}

impl Tiling {
    /// Panics if `labels.len()` differs from the board area.
    pub fn from_labels(topo: Topology, t: usize, mut labels: Vec<u32>) -> Self {
        assert_eq!(labels.len(), topo.area(), "one label per board cell");
        first_visit_normalize(&mut labels, &mut Vec::new());
        Self { topo, t, labels }
    }

    /// Builds a tiling from explicit tiles (lists of cell indices). Cells not
    /// covered by any tile each get a fresh singleton label.
    pub fn from_tiles(topo: Topology, t: usize, tiles: &[Vec<usize>]) -> Self {
        let mut labels = vec![u32::MAX; topo.area()];
        for (i, tile) in tiles.iter().enumerate() {
            for &c in tile {
                labels[c] = i as u32;
            }
        }
        let mut next = tiles.len() as u32;
        for l in labels.iter_mut().filter(|l| **l == u32::MAX) {
            *l = next;
            next += 1;
        }
        Self::from_labels(topo, t, labels)
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, cell: usize) -> u32 {
        self.labels[cell]
    }

    pub fn num_tiles(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Cells of every tile, indexed by label, each list ascending.
    pub fn tiles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_tiles()];
        for (cell, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(cell);
        }
        out
    }

    /// Replaces two tiles by a different split of their union. The caller is
    /// responsible for `first` and `second` covering the same cells.
    pub fn with_resplit(&self, a: u32, b: u32, first: &[usize], second: &[usize]) -> Tiling {
        let mut labels = self.labels.clone();
        for &c in first {
            labels[c] = a;
        }
        for &c in second {
            labels[c] = b;
        }
        Tiling::from_labels(self.topo, self.t, labels)
    }

    /// Whether two cells lie in the same tile.
    pub fn same_tile(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }
}
