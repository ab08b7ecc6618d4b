//! Table-free validation and lockedness checking.
//!
//! Nothing here touches the pair tables: splits of a two-tile union are
//! enumerated directly on the board graph, so this module can serve as an
//! independent check on the search.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Topology;
use crate::tiling::Tiling;

/// A structural problem with a claimed tiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum Defect {
    ZeroTileSize,
    AreaNotDivisible { area: usize, t: usize },
    TileSize { tile: u32, size: usize, expected: usize },
    Disconnected { tile: u32 },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::ZeroTileSize => write!(f, "tile size t must be positive"),
            Defect::AreaNotDivisible { area, t } => write!(f, "board area {area} is not divisible by t = {t}"),
            Defect::TileSize { tile, size, expected } => {
                write!(f, "tile {tile} has {size} cells, expected {expected}")
            }
            Defect::Disconnected { tile } => write!(f, "tile {tile} is not edge-connected"),
        }
    }
}

/// Checks coverage, part sizes and connectivity (with wrapping on tori).
pub fn validate_tiling(tiling: &Tiling) -> std::result::Result<(), Defect> {
    let topo = tiling.topology();
    let t = tiling.t();
    if t == 0 {
        return Err(Defect::ZeroTileSize);
    }
    if topo.area() % t != 0 {
        return Err(Defect::AreaNotDivisible { area: topo.area(), t });
    }
    for (label, cells) in tiling.tiles().iter().enumerate() {
        if cells.len() != t {
            return Err(Defect::TileSize { tile: label as u32, size: cells.len(), expected: t });
        }
        if !board_connected(topo, cells) {
            return Err(Defect::Disconnected { tile: label as u32 });
        }
    }
    Ok(())
}

fn board_connected(topo: &Topology, cells: &[usize]) -> bool {
    let Some(&start) = cells.first() else { return true };
    let mut seen = vec![start];
    let mut stack = vec![start];
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

fn require_valid(tiling: &Tiling, what: &str) -> Result<()> {
    validate_tiling(tiling).map_err(|d| Error::ContractViolation(format!("{what} requires a valid tiling: {d}")))
}

/// Unordered pairs of tile labels that share at least one edge, sorted.
pub fn adjacent_tile_pairs(tiling: &Tiling) -> Result<Vec<(u32, u32)>> {
    require_valid(tiling, "adjacent_tile_pairs")?;
    Ok(adjacent_pairs_unchecked(tiling))
}

pub(crate) fn adjacent_pairs_unchecked(tiling: &Tiling) -> Vec<(u32, u32)> {
    let topo = tiling.topology();
    let mut pairs = BTreeSet::new();
    for cell in 0..topo.area() {
        let a = tiling.label(cell);
        for n in topo.neighbors(cell) {
            let b = tiling.label(n);
            if a != b {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    pairs.into_iter().collect()
}

/// Every way to split `region` (board cells) into two edge-connected parts of
/// `t` cells each. Each unordered split is reported once, as the part that
/// contains the smallest cell of the region.
///
/// Regions are limited to 128 cells.
pub fn connected_splits(topo: &Topology, region: &[usize], t: usize) -> Result<Vec<Vec<usize>>> {
    let mut region = region.to_vec();
    region.sort_unstable();
    region.dedup();
    if region.len() != 2 * t {
        return Err(Error::InvalidParameter(format!(
            "a split region must have 2t = {} cells, got {}",
            2 * t,
            region.len()
        )));
    }
    if region.len() > 128 {
        return Err(Error::Unsupported(format!("split regions above 128 cells ({} given)", region.len())));
    }
    let adj: Vec<u128> = region
        .iter()
        .map(|&c| {
            topo.neighbors(c)
                .filter_map(|n| region.binary_search(&n).ok())
                .fold(0u128, |m, j| m | (1u128 << j))
        })
        .collect();
    let full: u128 = if region.len() == 128 { u128::MAX } else { (1u128 << region.len()) - 1 };

    let mut found = Vec::new();
    let mut splitter = Splitter { adj: &adj, t, full, found: &mut found };
    splitter.extend(1, adj[0], 1);
    Ok(found
        .into_iter()
        .map(|mask| (0..region.len()).filter(|&j| mask >> j & 1 == 1).map(|j| region[j]).collect())
        .collect())
}

struct Splitter<'a> {
    adj: &'a [u128],
    t: usize,
    full: u128,
    found: &'a mut Vec<u128>,
}

impl Splitter<'_> {
    // Enumerates connected sets containing vertex 0 exactly once: each branch
    // either takes a frontier vertex or excludes it for all later siblings.
    fn extend(&mut self, set: u128, frontier: u128, excluded: u128) {
        if set.count_ones() as usize == self.t {
            if mask_connected(self.adj, self.full & !set) {
                self.found.push(set);
            }
            return;
        }
        // Excluded cells end up in the complement, which must stay connected.
        let banned = excluded & !set;
        if banned.count_ones() > 1 && !reaches_all(self.adj, self.full & !set, banned) {
            return;
        }
        let mut frontier = frontier;
        let mut excluded = excluded;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let bit = 1u128 << v;
            let grown = set | bit;
            let next = (frontier | self.adj[v]) & !grown & !excluded;
            self.extend(grown, next, excluded);
            excluded |= bit;
        }
    }
}

/// Whether every cell of `targets` lies in one component of `mask`.
fn reaches_all(adj: &[u128], mask: u128, targets: u128) -> bool {
    let mut seen = 1u128 << targets.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        if seen & targets == targets {
            return true;
        }
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen & targets == targets
}

fn mask_connected(adj: &[u128], mask: u128) -> bool {
    if mask == 0 {
        return true;
    }
    let mut seen = 1u128 << mask.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Locked,
    Recombinable,
    Degenerate,
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Evidence attached to a non-locked verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two adjacent tiles and a different split of their union.
    Recombination { tiles: (u32, u32), split: (Vec<usize>, Vec<usize>) },
    Defect(Defect),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LockReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl LockReport {
    pub fn is_locked(&self) -> bool {
        self.verdict == Verdict::Locked
    }
}

/// First recombination move available in the tiling, if any.
pub fn find_recombination(tiling: &Tiling) -> Result<Option<Witness>> {
    require_valid(tiling, "find_recombination")?;
    let topo = tiling.topology();
    let tiles = tiling.tiles();
    for (a, b) in adjacent_pairs_unchecked(tiling) {
        let mut union = tiles[a as usize].clone();
        union.extend_from_slice(&tiles[b as usize]);
        union.sort_unstable();
        let root = union[0];
        let current = &tiles[tiling.label(root) as usize];
        for part in connected_splits(topo, &union, tiling.t())? {
            if part != *current {
                let rest: Vec<usize> = union.iter().copied().filter(|c| part.binary_search(c).is_err()).collect();
                return Ok(Some(Witness::Recombination { tiles: (a, b), split: (part, rest) }));
            }
        }
    }
    Ok(None)
}

/// Full lockedness verdict: invalid, recombinable (with a move), degenerate
/// (the board has no other tiling), or locked.
pub fn is_locked(tiling: &Tiling) -> LockReport {
    if let Err(defect) = validate_tiling(tiling) {
        return LockReport { verdict: Verdict::Invalid, witness: Some(Witness::Defect(defect)) };
    }
    match find_recombination(tiling) {
        Ok(Some(w)) => return LockReport { verdict: Verdict::Recombinable, witness: Some(w) },
        Ok(None) => {}
        Err(e) => panic!("split enumeration failed on a validated tiling: {e}"),
    }
    if other_tiling(tiling).is_some() {
        LockReport { verdict: Verdict::Locked, witness: None }
    } else {
        LockReport { verdict: Verdict::Degenerate, witness: None }
    }
}

/// Re-checks a recombination witness: the split must be two connected
/// t-cell parts covering exactly the two named tiles and differ from them.
pub fn check_witness(tiling: &Tiling, witness: &Witness) -> bool {
    let Witness::Recombination { tiles: (a, b), split: (p, q) } = witness else { return false };
    let topo = tiling.topology();
    let t = tiling.t();
    let tiles = tiling.tiles();
    let (Some(ta), Some(tb)) = (tiles.get(*a as usize), tiles.get(*b as usize)) else { return false };
    let mut union: Vec<usize> = ta.iter().chain(tb).copied().collect();
    union.sort_unstable();
    let mut split: Vec<usize> = p.iter().chain(q).copied().collect();
    split.sort_unstable();
    let mut p_sorted = p.clone();
    p_sorted.sort_unstable();
    p.len() == t
        && q.len() == t
        && union == split
        && board_connected(topo, p)
        && board_connected(topo, q)
        && p_sorted != *ta
        && p_sorted != *tb
        && adjacent_pairs_unchecked(tiling).contains(&(*a.min(b), *a.max(b)))
}

/// Some tiling of the same board other than `tiling`, found without tables:
/// the row-wise and column-wise boustrophedon cuts first, then exhaustive
/// placement backtracking for the few boards where both coincide.
pub fn other_tiling(tiling: &Tiling) -> Option<Tiling> {
    let topo = *tiling.topology();
    let t = tiling.t();
    for transpose in [false, true] {
        let snake = snake_tiling(&topo, t, transpose);
        if snake.labels() != tiling.labels() {
            return Some(snake);
        }
    }
    let mut search = PlacementSearch {
        topo,
        t,
        owner: vec![u32::MAX; topo.area()],
        next: 0,
        exclude: tiling.labels(),
        found: None,
    };
    search.run();
    search.found
}

/// Cuts a boustrophedon Hamiltonian path of the board into consecutive
/// t-cell segments.
pub fn snake_tiling(topo: &Topology, t: usize, column_wise: bool) -> Tiling {
    let (outer, inner) = if column_wise { (topo.width, topo.height) } else { (topo.height, topo.width) };
    let mut labels = vec![0u32; topo.area()];
    let mut k = 0usize;
    for o in 0..outer {
        for i in 0..inner {
            let i = if o % 2 == 0 { i } else { inner - 1 - i };
            let cell = if column_wise { topo.index(o, i) } else { topo.index(i, o) };
            labels[cell] = (k / t) as u32;
            k += 1;
        }
    }
    Tiling::from_labels(*topo, t, labels)
}

struct PlacementSearch<'a> {
    topo: Topology,
    t: usize,
    owner: Vec<u32>,
    next: u32,
    exclude: &'a [u32],
    found: Option<Tiling>,
}

impl PlacementSearch<'_> {
    fn run(&mut self) {
        if self.found.is_some() {
            return;
        }
        let Some(first) = self.owner.iter().position(|&o| o == u32::MAX) else {
            let candidate = Tiling::from_labels(self.topo, self.t, self.owner.clone());
            if candidate.labels() != self.exclude {
                self.found = Some(candidate);
            }
            return;
        };
        let mut shapes = Vec::new();
        let mut current = vec![first];
        self.grow(&mut current, &mut Vec::new(), &mut shapes);
        for shape in shapes {
            for &c in &shape {
                self.owner[c] = self.next;
            }
            self.next += 1;
            self.run();
            self.next -= 1;
            for &c in &shape {
                self.owner[c] = u32::MAX;
            }
            if self.found.is_some() {
                return;
            }
        }
    }

    fn grow(&self, current: &mut Vec<usize>, excluded: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == self.t {
            out.push(current.clone());
            return;
        }
        let mut frontier: Vec<usize> = Vec::new();
        for &c in current.iter() {
            for n in self.topo.neighbors(c) {
                if self.owner[n] == u32::MAX && !current.contains(&n) && !excluded.contains(&n) && !frontier.contains(&n) {
                    frontier.push(n);
                }
            }
        }
        frontier.sort_unstable();
        let mark = excluded.len();
        for v in frontier {
            current.push(v);
            self.grow(current, excluded, out);
            current.pop();
            excluded.push(v);
        }
        excluded.truncate(mark);
    }
}
