//! Pairwise compatibility of cell types at relative offsets.
//!
//! For every offset `d` within the interaction radius, a [`PairTable`] holds a
//! dense bit matrix whose entry `(a, b)` is set when a cell with type `a` and
//! the cell at `+d` with type `b` cannot coexist. Tables are built once per
//! tile size in the infinite plane and shared by every board.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{enumerate_cell_types, normalize, CellType, Vec2, NEIGHBOR_STEPS};

pub const MAX_TABLE_T: usize = 5;
const MAGIC: &[u8; 4] = b"PLKT";
const FORMAT_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    /// Overlap and consistency only: the tiling constraint.
    Basic,
    /// Additionally forbids adjacent tile pairs that can be recombined.
    Locked,
    /// The locked table closed under the third-cell rule.
    LockedAugmented,
}

impl TableKind {
    fn tag(self) -> u8 {
        match self {
            TableKind::Basic => 0,
            TableKind::Locked => 1,
            TableKind::LockedAugmented => 2,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        [TableKind::Basic, TableKind::Locked, TableKind::LockedAugmented].into_iter().find(|k| k.tag() == tag)
    }

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Basic => "basic",
            TableKind::Locked => "locked",
            TableKind::LockedAugmented => "locked_augmented",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OffsetKey {
    pub dx: i32,
    pub dy: i32,
}

impl OffsetKey {
    pub fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    pub fn norm(self) -> i32 {
        self.dx.abs() + self.dy.abs()
    }

    pub fn neg(self) -> Self {
        Self { dx: -self.dx, dy: -self.dy }
    }

    pub fn as_vec(self) -> Vec2 {
        (self.dx, self.dy)
    }
}

/// Two cells in edge-adjacent t-tiles are at Manhattan distance at most
/// `(t - 1) + 1 + (t - 1)`.
pub fn interaction_radius(t: usize) -> i32 {
    2 * t as i32 - 1
}

/// All offsets within the interaction radius, ordered by `(dy, dx)`.
pub fn offset_keys(t: usize) -> Vec<OffsetKey> {
    let r = interaction_radius(t);
    let mut out = Vec::new();
    for dy in -r..=r {
        let span = r - dy.abs();
        for dx in -span..=span {
            out.push(OffsetKey { dx, dy });
        }
    }
    out
}

/// Square bit matrix over type indices, one `u64` run per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, data: vec![0; n * words] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.data[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize) {
        self.data[a * self.words + b / 64] |= 1 << (b % 64);
    }

    #[inline]
    pub fn clear(&mut self, a: usize, b: usize) {
        self.data[a * self.words + b / 64] &= !(1 << (b % 64));
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.data[a * self.words..(a + 1) * self.words]
    }

    #[inline]
    pub fn row_mut(&mut self, a: usize) -> &mut [u64] {
        &mut self.data[a * self.words..(a + 1) * self.words]
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a |= b;
        }
    }

    pub fn raw(&self) -> &[u64] {
        &self.data
    }
}

/// Mask of the valid bits in a row of `n` type indices.
pub fn full_row(n: usize) -> Vec<u64> {
    let words = n.div_ceil(64).max(1);
    let mut row = vec![u64::MAX; words];
    let rem = n % 64;
    if rem != 0 {
        row[words - 1] = (1u64 << rem) - 1;
    }
    if n == 0 {
        row[0] = 0;
    }
    row
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    t: usize,
    kind: TableKind,
    types: Vec<CellType>,
    keys: Vec<OffsetKey>,
    matrices: Vec<BitMatrix>,
}

impl PairTable {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn types(&self) -> &[CellType] {
        &self.types
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn keys(&self) -> &[OffsetKey] {
        &self.keys
    }

    pub fn radius(&self) -> i32 {
        interaction_radius(self.t)
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn key_index(&self, d: OffsetKey) -> Option<usize> {
        let r = self.radius();
        if d.norm() > r {
            return None;
        }
        // Rows of the diamond before row dy, then position within the row.
        let dy = d.dy;
        let before: i32 = (-r..dy).map(|y| 2 * (r - y.abs()) + 1).sum();
        Some((before + d.dx + (r - dy.abs())) as usize)
    }

    pub fn matrix(&self, d: OffsetKey) -> Option<&BitMatrix> {
        self.key_index(d).map(|i| &self.matrices[i])
    }

    /// Whether type `a` at the origin and type `b` at `d` are forbidden.
    /// Offsets beyond the radius never interact.
    pub fn forbidden(&self, a: usize, b: usize, d: OffsetKey) -> bool {
        self.matrix(d).is_some_and(|m| m.get(a, b))
    }

    pub fn total_forbidden(&self) -> usize {
        self.matrices.iter().map(BitMatrix::count_ones).sum()
    }

    pub fn type_index(&self, ty: &CellType) -> Option<usize> {
        self.types.binary_search(ty).ok()
    }

    /// Types that are incompatible with themselves at offset zero: no cell
    /// can take them.
    pub fn dead_types(&self) -> Vec<usize> {
        let zero = &self.matrices[self.key_index(OffsetKey::new(0, 0)).expect("origin key")];
        (0..self.num_types()).filter(|&a| zero.get(a, a)).collect()
    }

    pub fn fingerprint(&self) -> u64 {
        type_fingerprint(self.t, &self.types)
    }

    /// Whether `(a, b)` at `d` agrees with `(b, a)` at `-d` everywhere.
    pub fn is_symmetric(&self) -> bool {
        let n = self.num_types();
        self.keys.iter().zip(&self.matrices).all(|(&d, m)| {
            let mirror = self.matrix(d.neg()).expect("radius is symmetric");
            (0..n).all(|a| (0..n).all(|b| m.get(a, b) == mirror.get(b, a)))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Compatible,
    Incompatible,
}

/// Number of unordered splits of a plane region of `2t` cells into two
/// edge-connected `t`-cell parts, by exhaustive enumeration of subsets.
pub fn resplit_count(region: &[Vec2], t: usize) -> Result<usize> {
    let mut cells = region.to_vec();
    cells.sort_unstable();
    cells.dedup();
    if t == 0 || cells.len() != 2 * t || region.len() != 2 * t {
        return Err(Error::InvalidParameter(format!(
            "resplit region must hold 2t = {} distinct cells, got {}",
            2 * t,
            region.len()
        )));
    }
    if t > 16 {
        return Err(Error::Unsupported(format!("exhaustive resplit for t = {t}")));
    }
    let n = cells.len();
    let adj: Vec<u32> = cells
        .iter()
        .map(|&(x, y)| {
            NEIGHBOR_STEPS
                .iter()
                .filter_map(|&(dx, dy)| cells.binary_search(&(x + dx, y + dy)).ok())
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let connected = |mask: u32| -> bool {
        let mut seen = 1u32 << mask.trailing_zeros();
        loop {
            let mut grown = seen;
            let mut s = seen;
            while s != 0 {
                let v = s.trailing_zeros();
                s &= s - 1;
                grown |= adj[v as usize] & mask;
            }
            if grown == seen {
                return seen == mask;
            }
            seen = grown;
        }
    };
    // Subsets of size t containing cell 0: choose t - 1 of the other n - 1
    // cells, walking them in Gosper order.
    let k = t - 1;
    let mut count = 0;
    if k == 0 {
        let part = 1u32;
        return Ok(usize::from(connected(part) && connected(full & !part)));
    }
    let limit = 1u64 << (n - 1);
    let mut comb: u64 = (1u64 << k) - 1;
    while comb < limit {
        let part = ((comb as u32) << 1) | 1;
        if connected(part) && connected(full & !part) {
            count += 1;
        }
        let c = comb & comb.wrapping_neg();
        let r = comb + c;
        comb = (((r ^ comb) >> 2) / c) | r;
    }
    Ok(count)
}

struct RelationCache {
    resplits: HashMap<Vec<Vec2>, bool>,
}

impl RelationCache {
    fn new() -> Self {
        Self { resplits: HashMap::new() }
    }

    fn relation(&mut self, a: &[Vec2], b: &[Vec2], d: Vec2, kind: TableKind) -> Relation {
        let t = a.len();
        if d == (0, 0) {
            return if a == b { Relation::Compatible } else { Relation::Incompatible };
        }
        let shifted: Vec<Vec2> = b.iter().map(|&(x, y)| (x + d.0, y + d.1)).collect();
        if shifted == a {
            return Relation::Compatible;
        }
        let claims = a.binary_search(&d).is_ok() || b.binary_search(&(-d.0, -d.1)).is_ok();
        let overlap = shifted.iter().any(|c| a.binary_search(c).is_ok());
        if claims || overlap {
            return Relation::Incompatible;
        }
        if kind == TableKind::Basic {
            return Relation::Compatible;
        }
        let touching = shifted.iter().any(|&(x, y)| {
            NEIGHBOR_STEPS.iter().any(|&(dx, dy)| a.binary_search(&(x + dx, y + dy)).is_ok())
        });
        if !touching {
            return Relation::Compatible;
        }
        let mut union: Vec<Vec2> = a.iter().chain(&shifted).copied().collect();
        union = normalize(&union);
        let recombinable = *self
            .resplits
            .entry(union)
            .or_insert_with_key(|u| resplit_count(u, t).expect("union of two disjoint t-tiles") > 1);
        if recombinable {
            Relation::Incompatible
        } else {
            Relation::Compatible
        }
    }
}

/// The compatibility of type `a` at the origin with type `b` at `d`, computed
/// directly from the shapes.
pub fn pair_relation(a: &CellType, b: &CellType, d: OffsetKey, kind: TableKind) -> Result<Relation> {
    if a.size() != b.size() {
        return Err(Error::InvalidParameter(format!(
            "cell types of different sizes ({} and {})",
            a.size(),
            b.size()
        )));
    }
    let r = interaction_radius(a.size());
    if d.norm() > r {
        return Err(Error::InvalidParameter(format!("offset ({}, {}) beyond interaction radius {r}", d.dx, d.dy)));
    }
    Ok(RelationCache::new().relation(a.offsets(), b.offsets(), d.as_vec(), kind))
}

fn check_table_t(t: usize) -> Result<()> {
    if t == 0 || t > MAX_TABLE_T {
        return Err(Error::InvalidParameter(format!("pair tables are supported for 1 <= t <= {MAX_TABLE_T}, got {t}")));
    }
    Ok(())
}

/// Builds the table of the given kind; the augmented kind is built from the
/// locked table.
pub fn build_table(t: usize, kind: TableKind) -> Result<PairTable> {
    check_table_t(t)?;
    if kind == TableKind::LockedAugmented {
        return augment_table(&build_table(t, TableKind::Locked)?);
    }
    let types = enumerate_cell_types(t)?;
    let keys = offset_keys(t);
    let n = types.len();
    let mut cache = RelationCache::new();
    let mut matrices = Vec::with_capacity(keys.len());
    for &d in &keys {
        let mut m = BitMatrix::new(n);
        for (ia, a) in types.iter().enumerate() {
            for (ib, b) in types.iter().enumerate() {
                if cache.relation(a.offsets(), b.offsets(), d.as_vec(), kind) == Relation::Incompatible {
                    m.set(ia, ib);
                }
            }
        }
        matrices.push(m);
    }
    log::debug!("built {} table for t = {t}: {} offsets, {n} types", kind.name(), keys.len());
    Ok(PairTable { t, kind, types, keys, matrices })
}

/// Closes a locked table under the third-cell rule: `a` at the origin and
/// `b` at `d` are forbidden when some cell `e` has no type compatible with
/// both. Rounds read the previous table and write a fresh one until nothing
/// changes.
pub fn augment_table(table: &PairTable) -> Result<PairTable> {
    if table.kind == TableKind::Basic {
        return Err(Error::InvalidParameter("augmentation applies to locked tables, not basic ones".into()));
    }
    let n = table.num_types();
    let full = full_row(n);
    let words = full.len();
    let radius = table.radius();
    let origin = table.key_index(OffsetKey::new(0, 0)).expect("origin key");
    let mut current = table.clone();
    current.kind = TableKind::LockedAugmented;
    let mut round = 0;
    loop {
        round += 1;
        let prev = current.clone();
        let mut compat = vec![0u64; words];
        let mut kill = vec![0u64; words];

        let mut dead = prev.dead_types();
        for a in 0..n {
            if dead.contains(&a) {
                continue;
            }
            let starved = prev.keys.iter().zip(&prev.matrices).enumerate().any(|(i, (_, m))| {
                i != origin && m.row(a).iter().zip(&full).all(|(f, v)| !f & v == 0)
            });
            if starved {
                dead.push(a);
            }
        }

        for (di, &d) in prev.keys.iter().enumerate() {
            if di == origin {
                continue;
            }
            for a in 0..n {
                if current.matrices[di].row(a) == full.as_slice() {
                    continue;
                }
                for (ei, &e) in prev.keys.iter().enumerate() {
                    if ei == origin || ei == di {
                        continue;
                    }
                    let back = OffsetKey::new(d.dx - e.dx, d.dy - e.dy);
                    if back.norm() > radius {
                        continue;
                    }
                    let back_m = &prev.matrices[prev.key_index(back).expect("within radius")];
                    for w in 0..words {
                        compat[w] = !prev.matrices[ei].row(a)[w] & full[w];
                    }
                    kill.copy_from_slice(&full);
                    let mut any = true;
                    'outer: for (w, &word) in compat.iter().enumerate() {
                        let mut bits = word;
                        while bits != 0 {
                            let c = w * 64 + bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            let row = back_m.row(c);
                            any = false;
                            for k in 0..words {
                                kill[k] &= row[k];
                                any |= kill[k] != 0;
                            }
                            if !any {
                                break 'outer;
                            }
                        }
                    }
                    if any {
                        let target = current.matrices[di].row_mut(a);
                        for k in 0..words {
                            target[k] |= kill[k];
                        }
                    }
                }
            }
        }

        for &a in &dead {
            for m in current.matrices.iter_mut() {
                m.row_mut(a).copy_from_slice(&full);
                for b in 0..n {
                    m.set(b, a);
                }
            }
        }
        symmetrize(&mut current);
        let added = current.total_forbidden() - prev.total_forbidden();
        log::debug!("augmentation round {round}: {added} pairs added, {} dead types", dead.len());
        if added == 0 {
            break;
        }
    }
    Ok(current)
}

fn symmetrize(table: &mut PairTable) {
    let n = table.num_types();
    for i in 0..table.keys.len() {
        let j = table.key_index(table.keys[i].neg()).expect("radius is symmetric");
        if j <= i {
            continue;
        }
        let (lo, hi) = table.matrices.split_at_mut(j);
        let (m, mirror) = (&mut lo[i], &mut hi[0]);
        for a in 0..n {
            for b in 0..n {
                if m.get(a, b) || mirror.get(b, a) {
                    m.set(a, b);
                    mirror.set(b, a);
                }
            }
        }
    }
}

fn fnv1a(bytes: &[u8], mut hash: u64) -> u64 {
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

/// 64-bit FNV-1a hash of the canonical type list.
pub fn type_fingerprint(t: usize, types: &[CellType]) -> u64 {
    let mut h = fnv1a(&(t as u32).to_le_bytes(), FNV_OFFSET);
    for ty in types {
        h = fnv1a(&(ty.size() as u32).to_le_bytes(), h);
        for &(x, y) in ty.offsets() {
            h = fnv1a(&x.to_le_bytes(), h);
            h = fnv1a(&y.to_le_bytes(), h);
        }
    }
    h
}

/// Serializes a table: magic, version, t, kind, type fingerprint, the
/// per-offset bitmaps (little-endian words) and a trailing checksum.
pub fn encode_table(table: &PairTable) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(table.t as u16).to_le_bytes());
    out.push(table.kind.tag());
    out.extend_from_slice(&table.fingerprint().to_le_bytes());
    for m in &table.matrices {
        for w in m.raw() {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    let checksum = fnv1a(&out, FNV_OFFSET);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

pub fn decode_table(bytes: &[u8]) -> Result<PairTable> {
    let corrupt = |msg: &str| Error::CorruptCache(msg.to_string());
    const HEADER: usize = 4 + 2 + 2 + 1 + 8;
    if bytes.len() < HEADER + 8 {
        return Err(corrupt("file too short"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().expect("8 bytes"));
    if fnv1a(body, FNV_OFFSET) != stored {
        return Err(corrupt("checksum mismatch"));
    }
    if &body[0..4] != MAGIC {
        return Err(corrupt("bad magic bytes"));
    }
    let version = u16::from_le_bytes([body[4], body[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::CorruptCache(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let t = u16::from_le_bytes([body[6], body[7]]) as usize;
    check_table_t(t).map_err(|_| Error::CorruptCache(format!("unsupported t = {t} in cache file")))?;
    let kind = TableKind::from_tag(body[8]).ok_or_else(|| corrupt("unknown table kind"))?;
    let fingerprint = u64::from_le_bytes(body[9..17].try_into().expect("8 bytes"));
    let types = enumerate_cell_types(t)?;
    if fingerprint != type_fingerprint(t, &types) {
        return Err(corrupt("type-order fingerprint mismatch"));
    }
    let keys = offset_keys(t);
    let n = types.len();
    let mut matrices = Vec::with_capacity(keys.len());
    let words = n.div_ceil(64).max(1);
    let per_matrix = n * words * 8;
    let payload = &body[HEADER..];
    if payload.len() != per_matrix * keys.len() {
        return Err(corrupt("bitmap payload has the wrong length"));
    }
    for chunk in payload.chunks_exact(per_matrix) {
        let mut m = BitMatrix::new(n);
        for (w, bytes) in m.data.iter_mut().zip(chunk.chunks_exact(8)) {
            *w = u64::from_le_bytes(bytes.try_into().expect("8 bytes"));
        }
        matrices.push(m);
    }
    Ok(PairTable { t, kind, types, keys, matrices })
}

pub fn save_table(table: &PairTable, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("plkt.tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&encode_table(table))?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<PairTable> {
    decode_table(&fs::read(path)?)
}

/// File name of a cached table inside a tables directory.
pub fn table_file_name(t: usize, kind: TableKind) -> String {
    format!("t{t}-{}.plkt", kind.name())
}

/// Builds tables on demand, reusing in-memory copies and, when a directory
/// is configured, cache files. A corrupt cache file is an error, never
/// silently rebuilt.
#[derive(Debug, Default)]
pub struct TableStore {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<(usize, TableKind), Arc<PairTable>>>,
}

impl TableStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()), memory: Mutex::default() }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn get(&self, t: usize, kind: TableKind) -> Result<Arc<PairTable>> {
        check_table_t(t)?;
        if let Some(table) = self.memory.lock().expect("table store lock").get(&(t, kind)) {
            return Ok(Arc::clone(table));
        }
        let path = self.dir.as_ref().map(|d| d.join(table_file_name(t, kind)));
        let table = match &path {
            Some(p) if p.exists() => {
                let table = load_table(p)?;
                if table.t != t || table.kind != kind {
                    return Err(Error::CorruptCache(format!("{} holds a different table", p.display())));
                }
                log::info!("loaded {} table for t = {t} from {}", kind.name(), p.display());
                table
            }
            _ => {
                let table = match kind {
                    TableKind::LockedAugmented => {
                        let locked = self.get(t, TableKind::Locked)?;
                        augment_table(locked.as_ref())?
                    }
                    _ => build_table(t, kind)?,
                };
                if let Some(p) = &path {
                    save_table(&table, p)?;
                }
                table
            }
        };
        let table = Arc::new(table);
        self.memory.lock().expect("table store lock").insert((t, kind), Arc::clone(&table));
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(offsets: &[Vec2]) -> CellType {
        CellType::from_offsets(offsets).unwrap()
    }

    #[test]
    fn resplit_examples() {
        assert_eq!(resplit_count(&[(0, 0), (1, 0), (0, 1), (1, 1)], 2).unwrap(), 2);
        assert_eq!(resplit_count(&[(0, 0), (1, 0), (2, 0), (3, 0)], 2).unwrap(), 1);
        let rect: Vec<Vec2> = (0..3).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        assert_eq!(resplit_count(&rect, 3).unwrap(), 3);
        assert!(resplit_count(&rect, 2).is_err());
    }

    #[test]
    fn domino_relations() {
        let left = ty(&[(0, 0), (1, 0)]);
        let right = ty(&[(-1, 0), (0, 0)]);
        let top = ty(&[(0, 0), (0, 1)]);
        let d = OffsetKey::new(1, 0);
        assert_eq!(pair_relation(&left, &right, d, TableKind::Basic).unwrap(), Relation::Compatible);
        assert_eq!(pair_relation(&top, &top, d, TableKind::Locked).unwrap(), Relation::Incompatible);
        assert_eq!(pair_relation(&top, &top, d, TableKind::Basic).unwrap(), Relation::Compatible);
        assert!(pair_relation(&left, &ty(&[(0, 0), (1, 0), (2, 0)]), d, TableKind::Basic).is_err());
    }

    #[test]
    fn key_index_matches_order() {
        for t in 1..=5 {
            let keys = offset_keys(t);
            let table = PairTable {
                t,
                kind: TableKind::Basic,
                types: vec![],
                keys: keys.clone(),
                matrices: vec![],
            };
            for (i, &k) in keys.iter().enumerate() {
                assert_eq!(table.key_index(k), Some(i));
            }
            assert_eq!(keys.len() as i32, 2 * (2 * t as i32 - 1) * (2 * t as i32) + 1);
        }
    }

    #[test]
    fn zero_offset_forbids_unequal_types() {
        let table = build_table(2, TableKind::Locked).unwrap();
        let zero = table.matrix(OffsetKey::new(0, 0)).unwrap();
        assert_eq!(zero.count_ones(), 4 * 4 - 4);
        let top = table.type_index(&ty(&[(0, 0), (0, 1)])).unwrap();
        assert!(table.forbidden(top, top, OffsetKey::new(0, 1)));
        assert!(table.forbidden(top, top, OffsetKey::new(1, 0)));
    }

    #[test]
    fn unsupported_sizes() {
        assert!(matches!(build_table(0, TableKind::Basic), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_table(6, TableKind::Basic), Err(Error::InvalidParameter(_))));
        let basic = build_table(2, TableKind::Basic).unwrap();
        assert!(matches!(augment_table(&basic), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cache_detects_corruption() {
        let table = build_table(2, TableKind::Locked).unwrap();
        let mut bytes = encode_table(&table);
        assert_eq!(decode_table(&bytes).unwrap(), table);
        let mid = bytes.len() / 2;
        bytes[mid] ^= 1;
        assert!(matches!(decode_table(&bytes), Err(Error::CorruptCache(_))));
    }
}
