//! Table-free oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use polylock::{Tiling, Topology};

pub mod props;

/// Fixed polyominoes of size `t`, grown cell by cell and normalized to the
/// origin.
pub fn fixed_polyominoes(t: usize) -> Vec<Vec<(i64, i64)>> {
    let mut layer: BTreeSet<Vec<(i64, i64)>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..t {
        let mut next = BTreeSet::new();
        for shape in &layer {
            for &(x, y) in shape {
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let c = (x + dx, y + dy);
                    if shape.contains(&c) {
                        continue;
                    }
                    let mut grown = shape.clone();
                    grown.push(c);
                    let (mx, my) = (grown.iter().map(|p| p.0).min().unwrap(), grown.iter().map(|p| p.1).min().unwrap());
                    let mut norm: Vec<_> = grown.iter().map(|&(a, b)| (a - mx, b - my)).collect();
                    norm.sort_unstable();
                    next.insert(norm);
                }
            }
        }
        layer = next;
    }
    layer.into_iter().collect()
}

/// For each cell, the distinct cell sets of polyomino placements covering it.
fn placements(topo: &Topology, t: usize) -> Vec<Vec<Vec<usize>>> {
    let shapes = fixed_polyominoes(t);
    let mut out = vec![BTreeSet::new(); topo.area()];
    for y in 0..topo.height as i64 {
        for x in 0..topo.width as i64 {
            for shape in &shapes {
                let cells: Option<Vec<usize>> = shape.iter().map(|&(dx, dy)| topo.resolve(x + dx, y + dy)).collect();
                let Some(mut cells) = cells else { continue };
                cells.sort_unstable();
                cells.dedup();
                if cells.len() != t {
                    continue;
                }
                for &c in &cells {
                    out[c].insert(cells.clone());
                }
            }
        }
    }
    out.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Calls `visit` once per tiling of the board by `t`-ominoes.
pub fn for_each_tiling(topo: &Topology, t: usize, visit: &mut dyn FnMut(Tiling)) {
    for_each_tiling_pruned(topo, t, &mut |_, _| false, &mut |tiling| {
        visit(tiling);
        true
    });
}

pub fn all_tilings(topo: &Topology, t: usize) -> Vec<Tiling> {
    let mut out = Vec::new();
    for_each_tiling(topo, t, &mut |tiling| out.push(tiling));
    out
}

/// Number of tilings, counting no further than `stop`.
pub fn count_tilings_up_to(topo: &Topology, t: usize, stop: usize) -> usize {
    let mut n = 0;
    for_each_tiling_pruned(topo, t, &mut |_, _| false, &mut |_| {
        n += 1;
        n < stop
    });
    n
}

/// Every tiling without a recombinable pair of adjacent tiles. Branches are
/// cut as soon as a newly placed tile recombines with a placed neighbor.
pub fn locked_tilings(topo: &Topology, t: usize) -> Vec<Tiling> {
    let mut out = Vec::new();
    for_each_tiling_pruned(topo, t, &mut |a, b| recombinable(topo, t, a, b), &mut |tiling| {
        out.push(tiling);
        true
    });
    out
}

/// Exact cover on the first uncovered cell; `reject(new, placed)` prunes a
/// placement against each adjacent placed tile, and `visit` returning false
/// stops the enumeration.
fn for_each_tiling_pruned(
    topo: &Topology,
    t: usize,
    reject: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    visit: &mut dyn FnMut(Tiling) -> bool,
) {
    if topo.area() % t != 0 {
        return;
    }
    let places = placements(topo, t);
    let mut labels = vec![u32::MAX; topo.area()];
    let mut tiles: Vec<Vec<usize>> = Vec::new();
    struct Ctx<'a> {
        topo: &'a Topology,
        t: usize,
        places: &'a [Vec<Vec<usize>>],
        reject: &'a mut dyn FnMut(&[usize], &[usize]) -> bool,
        visit: &'a mut dyn FnMut(Tiling) -> bool,
    }
    fn go(ctx: &mut Ctx<'_>, labels: &mut Vec<u32>, tiles: &mut Vec<Vec<usize>>) -> bool {
        let Some(c) = labels.iter().position(|&l| l == u32::MAX) else {
            return (ctx.visit)(Tiling::from_labels(*ctx.topo, ctx.t, labels.clone()));
        };
        for p in &ctx.places[c] {
            if !p.iter().all(|&q| labels[q] == u32::MAX) {
                continue;
            }
            let mut touching: Vec<u32> = p
                .iter()
                .flat_map(|&q| ctx.topo.neighbors(q).collect::<Vec<_>>())
                .map(|n| labels[n])
                .filter(|&l| l != u32::MAX)
                .collect();
            touching.sort_unstable();
            touching.dedup();
            if touching.iter().any(|&l| (ctx.reject)(p, &tiles[l as usize])) {
                continue;
            }
            let id = tiles.len() as u32;
            for &q in p {
                labels[q] = id;
            }
            tiles.push(p.clone());
            let go_on = go(ctx, labels, tiles);
            tiles.pop();
            for &q in p {
                labels[q] = u32::MAX;
            }
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut ctx = Ctx { topo, t, places: &places, reject, visit };
    go(&mut ctx, &mut labels, &mut tiles);
}

/// Whether the union of two disjoint tiles splits into two connected
/// `t`-cell parts other than the given pair.
pub fn recombinable(topo: &Topology, t: usize, a: &[usize], b: &[usize]) -> bool {
    let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
    union.sort_unstable();
    let first = union[0];
    let original: BTreeSet<usize> = if a.contains(&first) { a.iter().copied().collect() } else { b.iter().copied().collect() };
    let rest: Vec<usize> = union[1..].to_vec();
    let mut found = false;
    choose(&rest, t - 1, &mut vec![first], &mut |part| {
        if found {
            return;
        }
        let set: BTreeSet<usize> = part.iter().copied().collect();
        if set == original {
            return;
        }
        let other: Vec<usize> = union.iter().copied().filter(|c| !set.contains(c)).collect();
        if connected(topo, part) && connected(topo, &other) {
            found = true;
        }
    });
    found
}

/// Whether two tiles of the tiling can be replaced by a different pair of
/// connected `t`-cell parts covering the same cells, by direct enumeration
/// of the subsets of their union.
pub fn has_recombination(tiling: &Tiling) -> bool {
    let topo = tiling.topology();
    let tiles = tiling.tiles();
    let mut pairs = BTreeSet::new();
    for c in 0..topo.area() {
        for n in topo.neighbors(c) {
            let (a, b) = (tiling.label(c), tiling.label(n));
            if a != b {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    pairs.into_iter().any(|(a, b)| recombinable(topo, tiling.t(), &tiles[a as usize], &tiles[b as usize]))
}

fn choose(pool: &[usize], k: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k == 0 {
        f(acc);
        return;
    }
    for i in 0..pool.len() {
        if pool.len() - i < k {
            break;
        }
        acc.push(pool[i]);
        choose(&pool[i + 1..], k - 1, acc, f);
        acc.pop();
    }
}

fn connected(topo: &Topology, cells: &[usize]) -> bool {
    let mut seen = vec![cells[0]];
    let mut stack = vec![cells[0]];
    while let Some(c) = stack.pop() {
        for n in topo.neighbors(c) {
            if cells.contains(&n) && !seen.contains(&n) {
                seen.push(n);
                stack.push(n);
            }
        }
    }
    seen.len() == cells.len()
}
