//! Explicit move sequences and tiling families.

mod blocks;
mod domino;
mod narrow;
mod spiral;

pub use blocks::{block_decompose, replicate_flip, BlockDecomposition};
pub use domino::{domino_canonicalize, horizontal_prefix};
pub use narrow::{narrow_canonical, narrow_triomino_canonicalize, NarrowCanonicalization};
pub use spiral::{spiral_prototile, spiral_side, spiral_size, torus_spiral};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiling::Tiling;
use crate::verify::{connected_splits, validate_tiling};

/// One recombination move: two tiles, given by their cells, replaced by a
/// different pair of tiles covering the same cells. Cell lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub before: [Vec<usize>; 2],
    pub after: [Vec<usize>; 2],
}

impl Move {
    fn new(before: [Vec<usize>; 2], after: [Vec<usize>; 2]) -> Self {
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        let [b0, b1] = before;
        let [a0, a1] = after;
        Self { before: [sorted(b0), sorted(b1)], after: [sorted(a0), sorted(a1)] }
    }

    /// Applies the move, checking that both tiles exist and that the result
    /// is a different valid split of the same cells.
    pub fn apply(&self, tiling: &Tiling) -> Result<Tiling> {
        let tiles = tiling.tiles();
        let mut labels = [0u32; 2];
        for (k, part) in self.before.iter().enumerate() {
            let Some(&first) = part.first() else {
                return Err(Error::ContractViolation("move names an empty tile".into()));
            };
            let l = tiling.label(first);
            if tiles[l as usize] != *part {
                return Err(Error::ContractViolation(format!("move tile {part:?} is not a tile of the tiling")));
            }
            labels[k] = l;
        }
        if labels[0] == labels[1] {
            return Err(Error::ContractViolation("move names the same tile twice".into()));
        }
        let mut union_before: Vec<usize> = self.before.concat();
        let mut union_after: Vec<usize> = self.after.concat();
        union_before.sort_unstable();
        union_after.sort_unstable();
        if union_before != union_after {
            return Err(Error::ContractViolation("move changes the covered cells".into()));
        }
        let same = |x: &[Vec<usize>; 2], y: &[Vec<usize>; 2]| (x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0]);
        if same(&self.before, &self.after) {
            return Err(Error::ContractViolation("move does not change the tiling".into()));
        }
        let next = tiling.with_resplit(labels[0], labels[1], &self.after[0], &self.after[1]);
        validate_tiling(&next).map_err(|d| Error::ContractViolation(format!("move yields an invalid tiling: {d}")))?;
        Ok(next)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Applies every move in order, returning the final tiling.
    pub fn apply(&self, tiling: &Tiling) -> Result<Tiling> {
        self.moves.iter().try_fold(tiling.clone(), |acc, mv| mv.apply(&acc))
    }

    /// Every intermediate tiling, starting with the input.
    pub fn trajectory(&self, tiling: &Tiling) -> Result<Vec<Tiling>> {
        let mut out = vec![tiling.clone()];
        for mv in &self.moves {
            let next = mv.apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }
}

/// All tilings reachable from `tiling` by one move, paired with that move.
/// Only pairs where both tiles satisfy `allow` are considered.
pub(crate) fn moves_from(tiling: &Tiling, allow: &dyn Fn(&[usize]) -> bool) -> Result<Vec<(Move, Tiling)>> {
    let topo = tiling.topology();
    let tiles = tiling.tiles();
    let mut out = Vec::new();
    for (a, b) in crate::verify::adjacent_pairs_unchecked(tiling) {
        let (ta, tb) = (&tiles[a as usize], &tiles[b as usize]);
        if !allow(ta) || !allow(tb) {
            continue;
        }
        let mut union: Vec<usize> = ta.iter().chain(tb).copied().collect();
        union.sort_unstable();
        for part in connected_splits(topo, &union, tiling.t())? {
            if part == *ta || part == *tb {
                continue;
            }
            let rest: Vec<usize> = union.iter().copied().filter(|c| part.binary_search(c).is_err()).collect();
            let next = tiling.with_resplit(a, b, &part, &rest);
            out.push((Move::new([ta.clone(), tb.clone()], [part, rest]), next));
        }
    }
    Ok(out)
}
