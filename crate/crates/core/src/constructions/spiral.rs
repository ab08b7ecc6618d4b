use crate::error::{Error, Result};
use crate::geometry::{Topology, Vec2};
use crate::tiling::Tiling;

/// Cells of the double spiral with `n` turns per arm.
pub fn spiral_size(n: usize) -> usize {
    2 * n * (n + 1) + 1
}

/// Side of the square torus the spirals tile; always `2 · spiral_size(n)`.
pub fn spiral_side(n: usize) -> usize {
    (2 * n + 1).pow(2) + 1
}

/// Offsets of the double spiral relative to its center cell. One arm leaves
/// the center downward for `n` cells, then turns clockwise on screen after
/// runs of `2n - 1, 2n - 3, …, 1` cells; the other arm is its half-turn image.
pub fn spiral_prototile(n: usize) -> Vec<Vec2> {
    let mut runs = vec![n as i32];
    runs.extend((1..n as i32).rev().map(|k| 2 * k + 1).chain(std::iter::once(1)));
    let mut arm = Vec::new();
    let (mut p, mut d) = ((0, 0), (0, 1));
    for (k, &run) in runs.iter().enumerate() {
        if k > 0 {
            d = (-d.1, d.0);
        }
        for _ in 0..run {
            p = (p.0 + d.0, p.1 + d.1);
            arm.push(p);
        }
    }
    let mut cells: Vec<Vec2> = arm.iter().flat_map(|&(x, y)| [(x, y), (-x, -y)]).collect();
    cells.push((0, 0));
    cells.sort_unstable();
    cells
}

/// Locked tiling of the `spiral_side(n)`-square torus by double spirals.
/// Spirals centered on the lattice spanned by `(2n + 1, -1)` and `(1, 2n + 1)`
/// keep the base orientation; the same lattice shifted by `(t, 0)` carries
/// the quarter-turned spiral.
pub fn torus_spiral(n: usize) -> Result<Tiling> {
    if n == 0 {
        return Err(Error::InvalidParameter("the spiral family starts at n = 1".into()));
    }
    let t = spiral_size(n);
    let side = spiral_side(n);
    let topo = Topology::torus(side, side);
    let shape = spiral_prototile(n);
    let turned: Vec<Vec2> = shape.iter().map(|&(x, y)| (-y, x)).collect();
    let s = side as i64;
    let step = (2 * n as i64 + 1, -1i64);

    let mut labels = vec![u32::MAX; topo.area()];
    let mut next = 0u32;
    for (cells, shift) in [(&shape, 0i64), (&turned, t as i64)] {
        for i in 0..s {
            let (cx, cy) = ((i * step.0 + shift).rem_euclid(s), (i * step.1).rem_euclid(s));
            for &(dx, dy) in cells.iter() {
                let cell = topo.resolve(cx + dx as i64, cy + dy as i64).expect("torus cells always resolve");
                if labels[cell] != u32::MAX {
                    return Err(Error::Internal(format!("spirals overlap at cell {cell}")));
                }
                labels[cell] = next;
            }
            next += 1;
        }
    }
    if labels.contains(&u32::MAX) {
        return Err(Error::Internal("spirals leave cells uncovered".into()));
    }
    Ok(Tiling::from_labels(topo, t, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::validate_tiling;

    #[test]
    fn sizes() {
        for n in 1..=6 {
            assert_eq!(spiral_prototile(n).len(), spiral_size(n));
            assert_eq!(spiral_side(n), 2 * spiral_size(n));
        }
        assert_eq!((spiral_side(4), spiral_size(4)), (82, 41));
    }

    #[test]
    fn smallest_spiral_is_an_s_pentomino() {
        assert_eq!(spiral_prototile(1), vec![(-1, 1), (0, -1), (0, 0), (0, 1), (1, -1)]);
    }

    #[test]
    fn tilings_are_valid() {
        for n in 1..=3 {
            let tiling = torus_spiral(n).unwrap();
            validate_tiling(&tiling).unwrap();
            assert_eq!(tiling.num_tiles(), 4 * spiral_size(n));
        }
    }
}
