//! Exhaustive backtracking search over per-cell type domains.
//!
//! Every cell holds a bitset of the types it may still take. Assigning a type
//! removes, from every cell within the interaction radius, the types the pair
//! table forbids against it; cells left with a single type are assigned in
//! turn. Branching picks the unassigned cell with the fewest remaining types.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonical_form, type_footprint, Topology, TransformKind};
use crate::tables::{full_row, BitMatrix, OffsetKey, PairTable, TableKind, TableStore};
use crate::tiling::Tiling;
use crate::verify::{is_locked, Verdict};

const UNASSIGNED: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryMode {
    #[default]
    None,
    /// Only tilings invariant under a quarter turn of a square board.
    Rot4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub symmetry: SymmetryMode,
    /// Keep one tiling per symmetry orbit.
    pub dedup: bool,
    pub limit: Option<usize>,
    pub table_kind: TableKind,
    /// Threads used for the first decision level; 1 searches inline.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            symmetry: SymmetryMode::None,
            dedup: false,
            limit: None,
            table_kind: TableKind::LockedAugmented,
            workers: 1,
        }
    }
}

/// Constraint network of one board under one pair table.
pub struct Engine {
    topo: Topology,
    t: usize,
    n_types: usize,
    words: usize,
    mats: Vec<BitMatrix>,
    nbr_start: Vec<usize>,
    nbrs: Vec<(u32, u32)>,
    base_domains: Vec<u64>,
    footprints: Vec<Vec<Option<Vec<usize>>>>,
    /// Per cell and type, the lowest type covering the same board cells from
    /// that cell. Only representatives stay in the domains, so a tile that
    /// wraps around a torus is not enumerated once per lift.
    canon: Vec<u16>,
    rot: Option<Rotation>,
}

struct Rotation {
    cell: Vec<usize>,
    ty: Vec<Option<u16>>,
}

/// Per-cell domains plus an undo trail.
#[derive(Clone)]
pub struct DomainState {
    words: usize,
    doms: Vec<u64>,
    assigned: Vec<u16>,
    trail_cells: Vec<u32>,
    trail_words: Vec<u64>,
    assign_trail: Vec<u32>,
    unsat: bool,
    queue: Vec<(usize, u16)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Ok,
    DeadEnd,
}

/// Undo point returned by [`DomainState::mark`].
#[derive(Debug, Clone, Copy)]
pub struct Mark {
    trail: usize,
    assigns: usize,
}

impl DomainState {
    pub fn is_unsat(&self) -> bool {
        self.unsat
    }

    pub fn domain(&self, cell: usize) -> &[u64] {
        &self.doms[cell * self.words..(cell + 1) * self.words]
    }

    pub fn domain_size(&self, cell: usize) -> usize {
        self.domain(cell).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, cell: usize, ty: usize) -> bool {
        self.doms[cell * self.words + ty / 64] >> (ty % 64) & 1 == 1
    }

    pub fn domain_types(&self, cell: usize) -> Vec<usize> {
        bits(self.domain(cell)).collect()
    }

    pub fn assigned(&self, cell: usize) -> Option<usize> {
        let a = self.assigned[cell];
        (a != UNASSIGNED).then_some(a as usize)
    }

    pub fn is_complete(&self) -> bool {
        self.assigned.iter().all(|&a| a != UNASSIGNED)
    }

    pub fn mark(&self) -> Mark {
        Mark { trail: self.trail_cells.len(), assigns: self.assign_trail.len() }
    }

    pub fn undo(&mut self, mark: Mark) {
        while self.trail_cells.len() > mark.trail {
            let cell = self.trail_cells.pop().expect("nonempty trail") as usize;
            let start = self.trail_words.len() - self.words;
            self.doms[cell * self.words..(cell + 1) * self.words].copy_from_slice(&self.trail_words[start..]);
            self.trail_words.truncate(start);
        }
        while self.assign_trail.len() > mark.assigns {
            let cell = self.assign_trail.pop().expect("nonempty trail") as usize;
            self.assigned[cell] = UNASSIGNED;
        }
        self.unsat = false;
    }

    fn save(&mut self, cell: usize) {
        self.trail_cells.push(cell as u32);
        let w = self.words;
        self.trail_words.extend_from_slice(&self.doms[cell * w..(cell + 1) * w]);
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut b = word;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(w * 64 + i)
        })
    })
}

impl Engine {
    pub fn new(topo: Topology, table: &PairTable, symmetry: SymmetryMode) -> Result<Self> {
        let t = table.t();
        if topo.area() % t != 0 {
            return Err(Error::NoTilingPossible(format!("board area {} is not divisible by t = {t}", topo.area())));
        }
        if symmetry == SymmetryMode::Rot4 && !topo.is_square() {
            return Err(Error::InvalidParameter("rot4 symmetry requires a square board".into()));
        }
        let n_types = table.num_types();
        if n_types >= UNASSIGNED as usize {
            return Err(Error::Unsupported(format!("{n_types} cell types")));
        }
        let full = full_row(n_types);
        let words = full.len();
        let area = topo.area();

        // Offsets become (board displacement, matrix) pairs. On a torus every
        // plane offset congruent to the same displacement shares one merged
        // matrix.
        let mut mats: Vec<BitMatrix> = Vec::new();
        let mut displacements: Vec<(i64, i64)> = Vec::new();
        let mut self_matrix: Option<usize> = None;
        if topo.wrap {
            let mut class_of: HashMap<(i64, i64), usize> = HashMap::new();
            for (&d, m) in table.keys().iter().zip(table.matrices()) {
                let class = ((d.dx as i64).rem_euclid(topo.width as i64), (d.dy as i64).rem_euclid(topo.height as i64));
                match class_of.get(&class) {
                    Some(&i) => mats[i].union_with(m),
                    None => {
                        class_of.insert(class, mats.len());
                        mats.push(m.clone());
                        displacements.push(class);
                    }
                }
            }
            // A tile and one of its own periodic copies are not two tiles:
            // pairs naming the same board cells stay compatible.
            let mut by_cells: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            let home: Vec<Option<Vec<usize>>> = table
                .types()
                .iter()
                .map(|ty| {
                    type_footprint(ty, 0, &topo).map(|mut fp| {
                        fp.sort_unstable();
                        fp
                    })
                })
                .collect();
            for (b, fp) in home.iter().enumerate() {
                if let Some(fp) = fp {
                    by_cells.entry(fp.clone()).or_default().push(b);
                }
            }
            for (a, fp) in home.iter().enumerate() {
                let Some(fp) = fp else { continue };
                for &e in fp {
                    let (ex, ey) = topo.coords(e);
                    let mut shifted: Vec<usize> = fp
                        .iter()
                        .map(|&c| {
                            let (x, y) = topo.coords(c);
                            topo.resolve(x as i64 - ex as i64, y as i64 - ey as i64).expect("torus")
                        })
                        .collect();
                    shifted.sort_unstable();
                    let class = class_of[&(ex as i64, ey as i64)];
                    for &b in by_cells.get(&shifted).into_iter().flatten() {
                        mats[class].clear(a, b);
                    }
                }
            }
            self_matrix = class_of.get(&(0, 0)).copied();
        } else {
            for (&d, m) in table.keys().iter().zip(table.matrices()) {
                if d == OffsetKey::new(0, 0) {
                    continue;
                }
                mats.push(m.clone());
                displacements.push((d.dx as i64, d.dy as i64));
            }
        }

        let mut nbr_start = Vec::with_capacity(area + 1);
        let mut nbrs = Vec::new();
        for cell in 0..area {
            nbr_start.push(nbrs.len());
            let (x, y) = topo.coords(cell);
            for (i, &(dx, dy)) in displacements.iter().enumerate() {
                if Some(i) == self_matrix {
                    continue;
                }
                if let Some(other) = topo.resolve(x as i64 + dx, y as i64 + dy) {
                    if other != cell {
                        nbrs.push((other as u32, i as u32));
                    }
                }
            }
        }
        nbr_start.push(nbrs.len());

        let dead = table.dead_types();
        let mut footprints = vec![Vec::with_capacity(n_types); area];
        let mut base_domains = vec![0u64; area * words];
        let mut canon = vec![UNASSIGNED; area * n_types];
        for (cell, fps) in footprints.iter_mut().enumerate() {
            let mut rep: HashMap<Vec<usize>, u16> = HashMap::new();
            for (a, ty) in table.types().iter().enumerate() {
                let fp = type_footprint(ty, cell, &topo);
                let self_conflict = self_matrix.is_some_and(|i| mats[i].get(a, a));
                if let Some(fp) = fp.as_ref().filter(|_| !self_conflict && !dead.contains(&a)) {
                    let mut key = fp.clone();
                    key.sort_unstable();
                    let r = *rep.entry(key).or_insert(a as u16);
                    canon[cell * n_types + a] = r;
                    if r as usize == a {
                        base_domains[cell * words + a / 64] |= 1 << (a % 64);
                    }
                }
                fps.push(fp);
            }
        }

        let rot = (symmetry == SymmetryMode::Rot4).then(|| {
            let g = crate::geometry::Transform::new(TransformKind::Rot90);
            let m = TransformKind::Rot90.matrix();
            Rotation {
                cell: (0..area).map(|c| g.apply(&topo, c)).collect(),
                ty: table
                    .types()
                    .iter()
                    .map(|ty| table.type_index(&ty.map_linear(m)).map(|i| i as u16))
                    .collect(),
            }
        });

        Ok(Self { topo, t, n_types, words, mats, nbr_start, nbrs, base_domains, footprints, canon, rot })
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_types(&self) -> usize {
        self.n_types
    }

    /// Initial domains: types whose tile fits at the cell, followed by one
    /// round of pruning against neighbors left without a compatible type.
    pub fn init_domains(&self) -> DomainState {
        let area = self.topo.area();
        let w = self.words;
        let mut doms = self.base_domains.clone();
        let mut pruned = doms.clone();
        let mut compat = vec![0u64; w];
        for cell in 0..area {
            for a in bits(&doms[cell * w..(cell + 1) * w]).collect::<Vec<_>>() {
                let supported = self.neighbors(cell).all(|(other, m)| {
                    let row = self.mats[m].row(a);
                    for k in 0..w {
                        compat[k] = doms[other * w + k] & !row[k];
                    }
                    compat.iter().any(|&x| x != 0)
                });
                if !supported {
                    pruned[cell * w + a / 64] &= !(1 << (a % 64));
                }
            }
        }
        doms = pruned;
        let unsat = (0..area).any(|c| doms[c * w..(c + 1) * w].iter().all(|&x| x == 0));
        DomainState {
            words: w,
            doms,
            assigned: vec![UNASSIGNED; area],
            trail_cells: Vec::new(),
            trail_words: Vec::new(),
            assign_trail: Vec::new(),
            unsat,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn neighbors(&self, cell: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nbrs[self.nbr_start[cell]..self.nbr_start[cell + 1]].iter().map(|&(c, m)| (c as usize, m as usize))
    }

    /// Assigns `ty` to `cell` and propagates, cascading through cells whose
    /// domains shrink to one type. On a dead end the state must be rolled
    /// back with [`DomainState::undo`].
    pub fn propagate(&self, state: &mut DomainState, cell: usize, ty: usize) -> Result<Propagation> {
        if cell >= self.topo.area() || ty >= self.n_types || !state.contains(cell, ty) {
            return Err(Error::ContractViolation(format!("type {ty} is not in the domain of cell {cell}")));
        }
        Ok(self.assign(state, cell, ty as u16))
    }

    fn assign(&self, state: &mut DomainState, cell: usize, ty: u16) -> Propagation {
        let w = self.words;
        state.queue.clear();
        state.queue.push((cell, ty));
        while let Some((c, a)) = state.queue.pop() {
            let current = state.assigned[c];
            if current == a {
                continue;
            }
            if current != UNASSIGNED || !state.contains(c, a as usize) {
                state.unsat = true;
                return Propagation::DeadEnd;
            }
            state.assigned[c] = a;
            state.assign_trail.push(c as u32);
            if state.domain_size(c) != 1 {
                state.save(c);
                let dom = &mut state.doms[c * w..(c + 1) * w];
                dom.fill(0);
                dom[a as usize / 64] = 1 << (a % 64);
            }
            for (other, m) in self.neighbors(c) {
                let row = self.mats[m].row(a as usize);
                let base = other * w;
                let mut changed = false;
                for k in 0..w {
                    if state.doms[base + k] & row[k] != 0 {
                        changed = true;
                        break;
                    }
                }
                if !changed {
                    continue;
                }
                state.save(other);
                let mut count = 0;
                for k in 0..w {
                    state.doms[base + k] &= !row[k];
                    count += state.doms[base + k].count_ones();
                }
                if count == 0 {
                    state.unsat = true;
                    return Propagation::DeadEnd;
                }
                if count == 1 && state.assigned[other] == UNASSIGNED {
                    let only = bits(&state.doms[base..base + w]).next().expect("one type left");
                    state.queue.push((other, only as u16));
                }
            }
            if let Some(rot) = &self.rot {
                let rc = rot.cell[c];
                match rot.ty[a as usize].map(|r| self.canon[rc * self.n_types + r as usize]) {
                    Some(r) if r != UNASSIGNED => state.queue.push((rc, r)),
                    _ => {
                        state.unsat = true;
                        return Propagation::DeadEnd;
                    }
                }
            }
        }
        Propagation::Ok
    }

    fn choose_cell(&self, state: &DomainState) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for cell in 0..self.topo.area() {
            if state.assigned[cell] != UNASSIGNED {
                continue;
            }
            let size = state.domain_size(cell);
            if best.map_or(true, |(s, _)| size < s) {
                best = Some((size, cell));
                if size <= 1 {
                    break;
                }
            }
        }
        best.map(|(_, c)| c)
    }

    /// The tiling described by a complete assignment.
    pub fn tiling_of(&self, state: &DomainState) -> Tiling {
        let area = self.topo.area();
        let mut labels = vec![0u32; area];
        for (cell, label) in labels.iter_mut().enumerate() {
            let a = state.assigned[cell] as usize;
            let fp = self.footprints[cell][a].as_ref().expect("assigned types fit the board");
            *label = *fp.iter().min().expect("nonempty footprint") as u32;
        }
        Tiling::from_labels(self.topo, self.t, labels)
    }

    /// Depth-first search below `state`, calling `visit` on every complete
    /// assignment until it returns `false`. Returns `false` if stopped early.
    pub fn solve<R: Rng>(
        &self,
        state: &mut DomainState,
        rng: Option<&mut R>,
        stats: &mut SearchStats,
        visit: &mut dyn FnMut(&Engine, &DomainState) -> bool,
    ) -> bool {
        let mut rng = rng;
        self.solve_inner(state, &mut rng, stats, visit)
    }

    fn solve_inner<R: Rng>(
        &self,
        state: &mut DomainState,
        rng: &mut Option<&mut R>,
        stats: &mut SearchStats,
        visit: &mut dyn FnMut(&Engine, &DomainState) -> bool,
    ) -> bool {
        if state.unsat {
            return true;
        }
        stats.nodes += 1;
        let Some(cell) = self.choose_cell(state) else {
            stats.leaves += 1;
            return visit(self, state);
        };
        let mut values = state.domain_types(cell);
        if let Some(r) = rng.as_deref_mut() {
            values.shuffle(r);
        }
        for a in values {
            let mark = state.mark();
            if self.assign(state, cell, a as u16) == Propagation::Ok && !self.solve_inner(state, rng, stats, visit) {
                state.undo(mark);
                return false;
            }
            state.undo(mark);
        }
        true
    }

    /// First-level branches: the MRV cell and each value that survives
    /// propagation, as independent states.
    fn split_first_level(&self, state: &DomainState) -> Vec<DomainState> {
        let Some(cell) = self.choose_cell(state) else { return vec![state.clone()] };
        let mut out = Vec::new();
        for a in state.domain_types(cell) {
            let mut child = state.clone();
            if self.assign(&mut child, cell, a as u16) == Propagation::Ok {
                out.push(child);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
}

impl SearchStats {
    fn add(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Sorted by canonical form, then by raw labels.
    pub tilings: Vec<Tiling>,
    pub canonical_forms: Vec<Vec<u8>>,
    pub truncated: bool,
    /// Complete assignments that failed the independent lockedness check.
    pub rejected: usize,
    /// Complete assignments discarded because the board has only one tiling.
    pub degenerate: usize,
    pub stats: SearchStats,
    pub seconds: f64,
}

impl SearchOutcome {
    pub fn count(&self) -> usize {
        self.tilings.len()
    }
}

#[derive(Default)]
struct Collector {
    seen: HashSet<Vec<u32>>,
    kept: HashMap<Vec<u8>, Tiling>,
    raw: Vec<(Vec<u8>, Tiling)>,
    rejected: usize,
    degenerate: usize,
}

impl Collector {
    fn len(&self, dedup: bool) -> usize {
        if dedup {
            self.kept.len()
        } else {
            self.raw.len()
        }
    }

    fn offer(&mut self, tiling: Tiling, dedup: bool) {
        if !self.seen.insert(tiling.labels().to_vec()) {
            return;
        }
        match is_locked(&tiling).verdict {
            Verdict::Locked => {}
            Verdict::Degenerate => {
                self.degenerate += 1;
                return;
            }
            _ => {
                self.rejected += 1;
                return;
            }
        }
        let form = canonical_form(&tiling).expect("search emits valid tilings");
        if dedup {
            match self.kept.get(&form) {
                Some(existing) if existing.labels() <= tiling.labels() => {}
                _ => {
                    self.kept.insert(form, tiling);
                }
            }
        } else {
            self.raw.push((form, tiling));
        }
    }

    fn merge(&mut self, other: Collector, dedup: bool) {
        self.rejected += other.rejected;
        self.degenerate += other.degenerate;
        for (_, tiling) in other.raw {
            self.offer_checked(tiling, dedup);
        }
        for (_, tiling) in other.kept {
            self.offer_checked(tiling, dedup);
        }
    }

    // Already verified by the worker that found it.
    fn offer_checked(&mut self, tiling: Tiling, dedup: bool) {
        if !self.seen.insert(tiling.labels().to_vec()) && !dedup {
            return;
        }
        let form = canonical_form(&tiling).expect("valid");
        if dedup {
            match self.kept.get(&form) {
                Some(existing) if existing.labels() <= tiling.labels() => {}
                _ => {
                    self.kept.insert(form, tiling);
                }
            }
        } else {
            self.raw.push((form, tiling));
        }
    }

    fn finish(self, dedup: bool, limit: Option<usize>) -> (Vec<Vec<u8>>, Vec<Tiling>, bool) {
        let mut items: Vec<(Vec<u8>, Tiling)> = if dedup { self.kept.into_iter().collect() } else { self.raw };
        items.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.labels().cmp(b.1.labels())));
        let mut truncated = false;
        if let Some(l) = limit {
            if items.len() > l {
                items.truncate(l);
                truncated = true;
            }
        }
        let (forms, tilings) = items.into_iter().unzip();
        (forms, tilings, truncated)
    }
}

/// All locked tilings of the board, checked one by one against the
/// table-free verifier.
pub fn search_locked(topo: &Topology, table: &PairTable, options: &SearchOptions) -> Result<SearchOutcome> {
    if table.kind() == TableKind::Basic {
        return Err(Error::InvalidParameter("locked search needs a locked or locked_augmented table".into()));
    }
    let start = Instant::now();
    let engine = Engine::new(*topo, table, options.symmetry)?;
    let root = engine.init_domains();
    let dedup = options.dedup;
    let limit = options.limit;
    let mut stats = SearchStats::default();
    let mut hit_limit = false;

    let run = |state: &mut DomainState, stats: &mut SearchStats| -> (Collector, bool) {
        let mut collector = Collector::default();
        let complete = engine.solve::<rand::rngs::StdRng>(state, None, stats, &mut |eng, st| {
            collector.offer(eng.tiling_of(st), dedup);
            limit.map_or(true, |l| collector.len(dedup) <= l)
        });
        (collector, !complete)
    };

    let collector = if options.workers > 1 && !root.unsat {
        let branches = engine.split_first_level(&root);
        let workers = options.workers.min(branches.len().max(1));
        let mut buckets: Vec<Vec<DomainState>> = (0..workers).map(|_| Vec::new()).collect();
        for (i, b) in branches.into_iter().enumerate() {
            buckets[i % workers].push(b);
        }
        let results: Vec<(Collector, bool, SearchStats)> = std::thread::scope(|scope| {
            let handles: Vec<_> = buckets
                .into_iter()
                .map(|bucket| {
                    let run = &run;
                    scope.spawn(move || {
                        let mut merged = Collector::default();
                        let mut stats = SearchStats::default();
                        let mut stopped = false;
                        for mut state in bucket {
                            let (c, s) = run(&mut state, &mut stats);
                            merged.merge(c, dedup);
                            stopped |= s;
                        }
                        (merged, stopped, stats)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        });
        let mut all = Collector::default();
        for (c, stopped, s) in results {
            all.merge(c, dedup);
            hit_limit |= stopped;
            stats.add(&s);
        }
        all
    } else {
        let mut state = root;
        let (c, stopped) = run(&mut state, &mut stats);
        hit_limit = stopped;
        c
    };

    let (rejected, degenerate) = (collector.rejected, collector.degenerate);
    let (canonical_forms, tilings, over) = collector.finish(dedup, limit);
    Ok(SearchOutcome {
        tilings,
        canonical_forms,
        truncated: hit_limit || over,
        rejected,
        degenerate,
        stats,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Table kind actually used for `requested` on `topo`. On a torus with a side
/// of at most `t` a tile can touch its own periodic copy, where the witness
/// argument behind augmentation no longer applies, so the plain locked table
/// is used instead.
pub fn effective_table_kind(topo: &Topology, t: usize, requested: TableKind) -> TableKind {
    if requested == TableKind::LockedAugmented && topo.wrap && topo.width.min(topo.height) <= t {
        TableKind::Locked
    } else {
        requested
    }
}

/// [`search_locked`] with the table of `options.table_kind` taken from
/// `store`, subject to [`effective_table_kind`].
pub fn search_locked_with_store(
    store: &TableStore,
    topo: &Topology,
    t: usize,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let kind = effective_table_kind(topo, t, options.table_kind);
    if kind != options.table_kind {
        log::info!("using the {} table on {topo}", kind.name());
    }
    let table = store.get(t, kind)?;
    search_locked(topo, &table, &SearchOptions { table_kind: kind, ..options.clone() })
}

fn require_basic(table: &PairTable) -> Result<()> {
    if table.kind() != TableKind::Basic {
        return Err(Error::InvalidParameter("tiling enumeration needs the basic table".into()));
    }
    Ok(())
}

/// Any valid tiling of the board other than `exclude`, found with the basic
/// table (no lockedness constraint).
pub fn search_any_tiling(topo: &Topology, table: &PairTable, exclude: Option<&Tiling>) -> Result<Option<Tiling>> {
    require_basic(table)?;
    let engine = match Engine::new(*topo, table, SymmetryMode::None) {
        Ok(e) => e,
        Err(Error::NoTilingPossible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut state = engine.init_domains();
    let mut found = None;
    engine.solve::<rand::rngs::StdRng>(&mut state, None, &mut SearchStats::default(), &mut |eng, st| {
        let tiling = eng.tiling_of(st);
        if exclude.is_some_and(|x| x.labels() == tiling.labels()) {
            return true;
        }
        found = Some(tiling);
        false
    });
    Ok(found)
}

/// A tiling found with a shuffled value order; `None` if the board has none.
pub fn random_tiling<R: Rng>(topo: &Topology, table: &PairTable, rng: &mut R) -> Result<Option<Tiling>> {
    require_basic(table)?;
    let engine = Engine::new(*topo, table, SymmetryMode::None)?;
    let mut state = engine.init_domains();
    let mut found = None;
    engine.solve(&mut state, Some(rng), &mut SearchStats::default(), &mut |eng, st| {
        found = Some(eng.tiling_of(st));
        false
    });
    Ok(found)
}

/// Every tiling of the board exactly once (raw partitions, no symmetry
/// reduction), in discovery order.
pub fn enumerate_all_tilings(topo: &Topology, table: &PairTable) -> Result<Vec<Tiling>> {
    require_basic(table)?;
    let engine = Engine::new(*topo, table, SymmetryMode::None)?;
    let mut state = engine.init_domains();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    engine.solve::<rand::rngs::StdRng>(&mut state, None, &mut SearchStats::default(), &mut |eng, st| {
        let tiling = eng.tiling_of(st);
        if seen.insert(tiling.labels().to_vec()) {
            out.push(tiling);
        }
        true
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CellType;
    use crate::tables::build_table;

    fn index(table: &PairTable, offsets: &[(i32, i32)]) -> usize {
        table.type_index(&CellType::from_offsets(offsets).unwrap()).unwrap()
    }

    #[test]
    fn corner_domain_for_dominoes() {
        let table = build_table(2, TableKind::Basic).unwrap();
        let engine = Engine::new(Topology::grid(4, 4), &table, SymmetryMode::None).unwrap();
        let state = engine.init_domains();
        let mut corner = state.domain_types(0);
        corner.sort_unstable();
        let mut expected = vec![index(&table, &[(0, 0), (1, 0)]), index(&table, &[(0, 0), (0, 1)])];
        expected.sort_unstable();
        assert_eq!(corner, expected);
    }

    #[test]
    fn assignment_forces_partner() {
        let table = build_table(2, TableKind::Basic).unwrap();
        let engine = Engine::new(Topology::grid(4, 4), &table, SymmetryMode::None).unwrap();
        let mut state = engine.init_domains();
        let left = index(&table, &[(0, 0), (1, 0)]);
        let right = index(&table, &[(-1, 0), (0, 0)]);
        assert_eq!(engine.propagate(&mut state, 5, left).unwrap(), Propagation::Ok);
        assert_eq!(state.assigned(6), Some(right));
    }

    #[test]
    fn two_by_two_dominoes_have_no_locked_assignment() {
        let table = build_table(2, TableKind::Locked).unwrap();
        let engine = Engine::new(Topology::grid(2, 2), &table, SymmetryMode::None).unwrap();
        let state = engine.init_domains();
        for ty in state.domain_types(0) {
            let mut s = state.clone();
            assert_eq!(engine.propagate(&mut s, 0, ty).unwrap(), Propagation::DeadEnd);
        }
    }

    #[test]
    fn propagate_outside_domain_is_rejected() {
        let table = build_table(2, TableKind::Basic).unwrap();
        let engine = Engine::new(Topology::grid(2, 2), &table, SymmetryMode::None).unwrap();
        let mut state = engine.init_domains();
        let right = index(&table, &[(-1, 0), (0, 0)]);
        assert!(matches!(engine.propagate(&mut state, 0, right), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn undo_restores_domains() {
        let table = build_table(3, TableKind::Locked).unwrap();
        let engine = Engine::new(Topology::grid(6, 6), &table, SymmetryMode::None).unwrap();
        let mut state = engine.init_domains();
        let before: Vec<Vec<usize>> = (0..36).map(|c| state.domain_types(c)).collect();
        let mark = state.mark();
        let ty = state.domain_types(14)[0];
        let _ = engine.propagate(&mut state, 14, ty).unwrap();
        state.undo(mark);
        let after: Vec<Vec<usize>> = (0..36).map(|c| state.domain_types(c)).collect();
        assert_eq!(before, after);
        assert!((0..36).all(|c| state.assigned(c).is_none()));
    }

    #[test]
    fn indivisible_area() {
        let table = build_table(3, TableKind::Basic).unwrap();
        assert!(matches!(
            Engine::new(Topology::grid(4, 4), &table, SymmetryMode::None),
            Err(Error::NoTilingPossible(_))
        ));
    }

    #[test]
    fn any_tiling_examples() {
        let table = build_table(2, TableKind::Basic).unwrap();
        let topo = Topology::grid(2, 2);
        let horizontal = Tiling::from_labels(topo, 2, vec![0, 0, 1, 1]);
        let other = search_any_tiling(&topo, &table, Some(&horizontal)).unwrap().unwrap();
        assert_eq!(other.labels(), &[0, 1, 0, 1]);

        let table3 = build_table(3, TableKind::Basic).unwrap();
        let line = Topology::grid(3, 1);
        let only = Tiling::from_labels(line, 3, vec![0, 0, 0]);
        assert_eq!(search_any_tiling(&line, &table3, Some(&only)).unwrap(), None);
    }
}
