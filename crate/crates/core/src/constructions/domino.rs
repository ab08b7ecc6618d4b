use super::{Move, MoveSequence};
use crate::error::{Error, Result};
use crate::tiling::Tiling;
use crate::verify::validate_tiling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Domino {
    /// Top or left cell.
    first: usize,
    vertical: bool,
}

impl Domino {
    fn cells(self, width: usize) -> [usize; 2] {
        [self.first, self.first + if self.vertical { width } else { 1 }]
    }
}

fn domino_at(tiling: &Tiling, cell: usize) -> Domino {
    let w = tiling.topology().width;
    let label = tiling.label(cell);
    let partner = [cell + 1, cell + w, cell.wrapping_sub(1), cell.wrapping_sub(w)]
        .into_iter()
        .find(|&c| c < tiling.labels().len() && c != cell && tiling.label(c) == label && tiling.topology().adjacent(cell, c))
        .expect("validated domino tiling");
    let first = cell.min(partner);
    Domino { first, vertical: cell.abs_diff(partner) == w }
}

/// Number of cells, in row-major order, before the first cell of a vertical
/// domino. Equals the board area for the all-horizontal tiling.
pub fn horizontal_prefix(tiling: &Tiling) -> usize {
    let area = tiling.topology().area();
    (0..area).find(|&c| domino_at(tiling, c).vertical).unwrap_or(area)
}

fn forms_square(a: Domino, b: Domino, width: usize) -> bool {
    if a.vertical != b.vertical {
        return false;
    }
    let (lo, hi) = (a.first.min(b.first), a.first.max(b.first));
    if a.vertical {
        hi == lo + 1 && hi % width != 0
    } else {
        hi == lo + width
    }
}

/// Moves from a domino tiling of a grid with even width to the all-horizontal
/// tiling. Each outer step takes the first vertical domino, follows the
/// staircase of dominoes below and to its right until two of them form a
/// 2×2 square, then rotates squares back up the staircase.
pub fn domino_canonicalize(tiling: &Tiling) -> Result<MoveSequence> {
    let topo = *tiling.topology();
    if topo.wrap {
        return Err(Error::Unsupported("domino canonicalization needs a grid, not a torus".into()));
    }
    if tiling.t() != 2 {
        return Err(Error::ContractViolation(format!("expected a domino tiling, got t = {}", tiling.t())));
    }
    validate_tiling(tiling).map_err(|d| Error::ContractViolation(d.to_string()))?;
    let (w, h) = (topo.width, topo.height);
    if w % 2 != 0 {
        return Err(Error::ContractViolation("the horizontal dimension must be even; rotate the tiling first".into()));
    }

    let mut current = tiling.clone();
    let mut moves = MoveSequence::default();
    loop {
        let prefix = horizontal_prefix(&current);
        if prefix == topo.area() {
            return Ok(moves);
        }
        let mut ladder = vec![domino_at(&current, prefix)];
        loop {
            let d = *ladder.last().expect("nonempty ladder");
            let next = ladder_step(d, w, h)?;
            let e = domino_at(&current, next);
            ladder.push(e);
            if forms_square(d, e, w) {
                break;
            }
        }
        while ladder.len() >= 2 {
            let e = ladder.pop().expect("two dominoes");
            let d = ladder.pop().expect("two dominoes");
            let corner = d.first.min(e.first);
            let rotated = [Domino { first: corner, vertical: !d.vertical }, Domino {
                first: corner + if d.vertical { w } else { 1 },
                vertical: !d.vertical,
            }];
            let mv = Move::new(
                [d.cells(w).to_vec(), e.cells(w).to_vec()],
                [rotated[0].cells(w).to_vec(), rotated[1].cells(w).to_vec()],
            );
            current = mv.apply(&current)?;
            moves.moves.push(mv);
            if let Some(&prev) = ladder.last() {
                let f = domino_at(&current, ladder_step(prev, w, h)?);
                if !forms_square(prev, f, w) {
                    return Err(Error::Internal("staircase did not close into a square".into()));
                }
                ladder.push(f);
            }
        }
        if horizontal_prefix(&current) <= prefix {
            return Err(Error::Internal("canonicalization step made no progress".into()));
        }
    }
}

/// The cell whose domino continues the staircase after `d`.
fn ladder_step(d: Domino, w: usize, h: usize) -> Result<usize> {
    let (x, y) = (d.first % w, d.first / w);
    if d.vertical && x + 1 < w {
        Ok(d.first + 1)
    } else if !d.vertical && y + 1 < h {
        Ok(d.first + w)
    } else {
        Err(Error::Internal("staircase reached the board boundary".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Topology;

    #[test]
    fn examples() {
        let topo = Topology::grid(2, 2);
        let horizontal = Tiling::from_labels(topo, 2, vec![0, 0, 1, 1]);
        assert!(domino_canonicalize(&horizontal).unwrap().is_empty());
        let vertical = Tiling::from_labels(topo, 2, vec![0, 1, 0, 1]);
        let seq = domino_canonicalize(&vertical).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.apply(&vertical).unwrap(), horizontal);
    }

    #[test]
    fn staircase() {
        // Vertical domino, then horizontals stacked to its right.
        let topo = Topology::grid(4, 2);
        let tiling = Tiling::from_labels(topo, 2, vec![0, 1, 1, 2, 0, 3, 3, 2]);
        let seq = domino_canonicalize(&tiling).unwrap();
        let end = seq.apply(&tiling).unwrap();
        assert_eq!(horizontal_prefix(&end), 8);
    }

    #[test]
    fn odd_width_rejected() {
        let topo = Topology::grid(3, 2);
        let tiling = Tiling::from_labels(topo, 2, vec![0, 1, 2, 0, 1, 2]);
        assert!(matches!(domino_canonicalize(&tiling), Err(Error::ContractViolation(_))));
    }
}
