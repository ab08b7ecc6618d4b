use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Topology;
use crate::tiling::Tiling;
use crate::verify::{is_locked, Verdict};

/// Block counts with `m = 6·x1 + 9·x2` and `n = 22·x3 + 19·x4 + 8·x5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub x1: usize,
    pub x2: usize,
    pub x3: usize,
    pub x4: usize,
    pub x5: usize,
}

impl BlockDecomposition {
    pub fn height(&self) -> usize {
        6 * self.x1 + 9 * self.x2
    }

    pub fn width(&self) -> usize {
        22 * self.x3 + 19 * self.x4 + 8 * self.x5
    }

    pub fn is_valid(&self) -> bool {
        (self.x1 > 0 || self.x2 > 0) && self.x3 > 0
    }
}

/// Lexicographically smallest `(x1, …, x5)` for an `m × n` board with `m`
/// divisible by 3, `m ≥ 6` and `n ≥ 100`.
pub fn block_decompose(m: usize, n: usize) -> Result<BlockDecomposition> {
    if m % 3 != 0 || m < 6 || n < 100 {
        return Err(Error::InvalidParameter(format!("block decomposition needs 3 | m, m ≥ 6, n ≥ 100; got {m}×{n}")));
    }
    let (x1, x2) = (0..=m / 6)
        .find_map(|x1| {
            let rest = m - 6 * x1;
            (rest % 9 == 0).then_some((x1, rest / 9))
        })
        .ok_or_else(|| Error::Internal(format!("no height decomposition for m = {m}")))?;
    for x3 in 1..=n / 22 {
        let r3 = n - 22 * x3;
        for x4 in 0..=r3 / 19 {
            let r4 = r3 - 19 * x4;
            if r4 % 8 == 0 {
                return Ok(BlockDecomposition { x1, x2, x3, x4, x5: r4 / 8 });
            }
        }
    }
    Err(Error::Internal(format!("no width decomposition for n = {n}")))
}

/// Copies a locked 6×6 triomino tiling into a `bm × bn` array of blocks
/// (block rows × block columns), mirroring left-right every block whose row
/// plus column is odd. The result's lockedness is not guaranteed; check it
/// with [`is_locked`].
pub fn replicate_flip(base: &Tiling, bm: usize, bn: usize) -> Result<Tiling> {
    let topo = base.topology();
    if topo.wrap || topo.width != 6 || topo.height != 6 || base.t() != 3 {
        return Err(Error::ContractViolation("replicate_flip needs a 6×6 grid triomino tiling".into()));
    }
    if bm == 0 || bn == 0 {
        return Err(Error::InvalidParameter("block counts must be positive".into()));
    }
    if is_locked(base).verdict != Verdict::Locked {
        return Err(Error::ContractViolation("replicate_flip needs a locked base tiling".into()));
    }
    let out = Topology::grid(6 * bn, 6 * bm);
    let tiles_per_block = base.num_tiles() as u32;
    let mut labels = vec![0u32; out.area()];
    for (cell, label) in labels.iter_mut().enumerate() {
        let (x, y) = out.coords(cell);
        let (br, bc) = (y / 6, x / 6);
        let (mut lx, ly) = (x % 6, y % 6);
        if (br + bc) % 2 == 1 {
            lx = 5 - lx;
        }
        *label = (br * bn + bc) as u32 * tiles_per_block + base.label(topo.index(lx, ly));
    }
    Ok(Tiling::from_labels(out, 3, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        let d = block_decompose(6, 100).unwrap();
        assert_eq!((d.x1, d.x2, d.x3, d.x4, d.x5), (1, 0, 1, 2, 5));
        let d = block_decompose(15, 100).unwrap();
        assert_eq!((d.x1, d.x2), (1, 1));
        assert!(block_decompose(7, 100).is_err());
        assert!(block_decompose(6, 99).is_err());
    }
}
