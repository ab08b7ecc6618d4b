//! Boards, fixed polyominoes, cell types and board symmetries.
//!
//! Coordinates are `(x, y)` with `x` growing rightward and `y` growing
//! downward. Cells are serialized row-major: index `y * width + x`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tiling::Tiling;

/// A relative or absolute lattice point `(x, y)`.
pub type Vec2 = (i32, i32);

pub const NEIGHBOR_STEPS: [Vec2; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// A finite grid `G(m, n)` or, with `wrap`, a torus of the same dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    pub width: usize,
    pub height: usize,
    pub wrap: bool,
}

impl Topology {
    pub fn new(width: usize, height: usize, wrap: bool) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "board dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(Self { width, height, wrap })
    }

    pub fn grid(width: usize, height: usize) -> Self {
        Self::new(width, height, false).expect("positive grid dimensions")
    }

    pub fn torus(width: usize, height: usize) -> Self {
        Self::new(width, height, true).expect("positive torus dimensions")
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    /// Resolves a possibly out-of-range point to a cell index, wrapping on a
    /// torus and returning `None` off the edge of a grid.
    #[inline]
    pub fn resolve(&self, x: i64, y: i64) -> Option<usize> {
        let (w, h) = (self.width as i64, self.height as i64);
        if self.wrap {
            Some(self.index(x.rem_euclid(w) as usize, y.rem_euclid(h) as usize))
        } else if (0..w).contains(&x) && (0..h).contains(&y) {
            Some(self.index(x as usize, y as usize))
        } else {
            None
        }
    }

    #[inline]
    pub fn offset(&self, cell: usize, d: Vec2) -> Option<usize> {
        let (x, y) = self.coords(cell);
        self.resolve(x as i64 + d.0 as i64, y as i64 + d.1 as i64)
    }

    /// Distinct edge-neighbors of `cell`, excluding `cell` itself (which can
    /// only happen on a torus of width or height 1).
    pub fn neighbors(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let mut out = [usize::MAX; 4];
        let mut n = 0;
        for d in NEIGHBOR_STEPS {
            if let Some(c) = self.offset(cell, d) {
                if c != cell && !out[..n].contains(&c) {
                    out[n] = c;
                    n += 1;
                }
            }
        }
        out.into_iter().take(n)
    }

    /// Whether two cells share an edge.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).any(|c| c == b)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.wrap { "torus" } else { "grid" };
        write!(f, "{}x{} {}", self.width, self.height, kind)
    }
}

/// Edge-connectivity of a set of plane points.
pub fn is_plane_connected(cells: &[Vec2]) -> bool {
    if cells.is_empty() {
        return true;
    }
    let set: HashSet<Vec2> = cells.iter().copied().collect();
    let mut seen = HashSet::with_capacity(set.len());
    let mut stack = vec![cells[0]];
    seen.insert(cells[0]);
    while let Some((x, y)) = stack.pop() {
        for (dx, dy) in NEIGHBOR_STEPS {
            let q = (x + dx, y + dy);
            if set.contains(&q) && seen.insert(q) {
                stack.push(q);
            }
        }
    }
    seen.len() == set.len()
}

/// Translates so that min x and min y are zero, then sorts.
pub fn normalize(cells: &[Vec2]) -> Vec<Vec2> {
    let mx = cells.iter().map(|c| c.0).min().unwrap_or(0);
    let my = cells.iter().map(|c| c.1).min().unwrap_or(0);
    let mut out: Vec<Vec2> = cells.iter().map(|&(x, y)| (x - mx, y - my)).collect();
    out.sort_unstable();
    out
}

/// A fixed polyomino: distinct under translation only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    cells: Vec<Vec2>,
}

impl Polyomino {
    pub fn from_cells(cells: &[Vec2]) -> Result<Self> {
        let cells = normalize(cells);
        if cells.is_empty() || cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("polyomino cells must be distinct and nonempty".into()));
        }
        if !is_plane_connected(&cells) {
            return Err(Error::InvalidParameter("polyomino cells must be edge-connected".into()));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Vec2] {
        &self.cells
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }
}

/// A t-omino seen from one of its cells: the offsets of its cells relative to
/// the anchor, always containing `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellType {
    offsets: Vec<Vec2>,
}

impl CellType {
    pub fn from_offsets(offsets: &[Vec2]) -> Result<Self> {
        let mut offsets = offsets.to_vec();
        let n = offsets.len();
        offsets.sort_unstable();
        offsets.dedup();
        if offsets.len() != n {
            return Err(Error::InvalidParameter("cell type offsets must be distinct".into()));
        }
        if offsets.binary_search(&(0, 0)).is_err() {
            return Err(Error::InvalidParameter("cell type offsets must contain (0, 0)".into()));
        }
        if !is_plane_connected(&offsets) {
            return Err(Error::InvalidParameter("cell type offsets must be edge-connected".into()));
        }
        Ok(Self { offsets })
    }

    pub fn offsets(&self) -> &[Vec2] {
        &self.offsets
    }

    pub fn size(&self) -> usize {
        self.offsets.len()
    }

    pub fn contains(&self, d: Vec2) -> bool {
        self.offsets.binary_search(&d).is_ok()
    }

    /// The shape with the anchor moved to the cell at `d` (which must belong
    /// to the shape).
    pub fn reanchor(&self, d: Vec2) -> CellType {
        let mut offsets: Vec<Vec2> = self.offsets.iter().map(|&(x, y)| (x - d.0, y - d.1)).collect();
        offsets.sort_unstable();
        CellType { offsets }
    }

    /// Applies a linear map `(x, y) -> (a x + b y, c x + d y)` to the offsets.
    pub fn map_linear(&self, m: [i32; 4]) -> CellType {
        let mut offsets: Vec<Vec2> =
            self.offsets.iter().map(|&(x, y)| (m[0] * x + m[1] * y, m[2] * x + m[3] * y)).collect();
        offsets.sort_unstable();
        CellType { offsets }
    }
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParameter("polyomino size t must be at least 1".into()));
    }
    if t > 8 {
        log::warn!("enumerating fixed {t}-ominoes; sizes above 8 are unsupported and slow");
    }
    Ok(())
}

/// All fixed t-ominoes in canonical (lexicographic) order.
pub fn enumerate_fixed_polyominoes(t: usize) -> Result<Vec<Polyomino>> {
    check_t(t)?;
    let mut current: HashSet<Vec<Vec2>> = HashSet::new();
    current.insert(vec![(0, 0)]);
    for _ in 1..t {
        let mut next = HashSet::with_capacity(current.len() * 4);
        for shape in &current {
            for &(x, y) in shape {
                for (dx, dy) in NEIGHBOR_STEPS {
                    let q = (x + dx, y + dy);
                    if shape.binary_search(&q).is_err() {
                        let mut grown = shape.clone();
                        grown.push(q);
                        next.insert(normalize(&grown));
                    }
                }
            }
        }
        current = next;
    }
    let mut out: Vec<Polyomino> = current.into_iter().map(|cells| Polyomino { cells }).collect();
    out.sort_unstable();
    Ok(out)
}

/// All cell types for t-ominoes in canonical order. The position of a type in
/// this list is its index in every pair table.
pub fn enumerate_cell_types(t: usize) -> Result<Vec<CellType>> {
    let shapes = enumerate_fixed_polyominoes(t)?;
    let mut out = Vec::with_capacity(shapes.len() * t);
    for shape in &shapes {
        for &(ax, ay) in shape.cells() {
            let mut offsets: Vec<Vec2> = shape.cells().iter().map(|&(x, y)| (x - ax, y - ay)).collect();
            offsets.sort_unstable();
            out.push(CellType { offsets });
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The board cells covered by placing `ty` with its anchor at `cell`, or
/// `None` if the tile leaves a grid or overlaps itself on a torus.
pub fn type_footprint(ty: &CellType, cell: usize, topo: &Topology) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(ty.size());
    for &d in ty.offsets() {
        let c = topo.offset(cell, d)?;
        if out.contains(&c) {
            return None;
        }
        out.push(c);
    }
    Some(out)
}

/// The eight point symmetries of the square, as used on boards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    ReflectH,
    ReflectV,
    ReflectDiag,
    ReflectAntidiag,
}

impl TransformKind {
    pub const ALL: [TransformKind; 8] = [
        TransformKind::Identity,
        TransformKind::Rot90,
        TransformKind::Rot180,
        TransformKind::Rot270,
        TransformKind::ReflectH,
        TransformKind::ReflectV,
        TransformKind::ReflectDiag,
        TransformKind::ReflectAntidiag,
    ];

    /// Linear part acting on offsets, row-major `[a, b, c, d]` for
    /// `(x, y) -> (a x + b y, c x + d y)`. Rot90 is clockwise on screen.
    pub fn matrix(self) -> [i32; 4] {
        match self {
            TransformKind::Identity => [1, 0, 0, 1],
            TransformKind::Rot90 => [0, -1, 1, 0],
            TransformKind::Rot180 => [-1, 0, 0, -1],
            TransformKind::Rot270 => [0, 1, -1, 0],
            TransformKind::ReflectH => [-1, 0, 0, 1],
            TransformKind::ReflectV => [1, 0, 0, -1],
            TransformKind::ReflectDiag => [0, 1, 1, 0],
            TransformKind::ReflectAntidiag => [0, -1, -1, 0],
        }
    }

    pub fn from_matrix(m: [i32; 4]) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.matrix() == m)
    }

    /// Whether this symmetry swaps the axes (needs a square board).
    pub fn swaps_axes(self) -> bool {
        self.matrix()[0] == 0
    }
}

fn mat_mul(a: [i32; 4], b: [i32; 4]) -> [i32; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// A board symmetry: a point symmetry about the board center followed by a
/// translation (nonzero only on tori).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transform {
    pub kind: TransformKind,
    pub translation: Vec2,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { kind: TransformKind::Identity, translation: (0, 0) };

    pub fn new(kind: TransformKind) -> Self {
        Self { kind, translation: (0, 0) }
    }

    pub fn is_valid_for(&self, topo: &Topology) -> bool {
        (!self.kind.swaps_axes() || topo.is_square()) && (topo.wrap || self.translation == (0, 0))
    }

    /// Image of a cell. The point part fixes the board center, computed in
    /// doubled coordinates so odd and even sides are handled alike.
    pub fn apply(&self, topo: &Topology, cell: usize) -> usize {
        let (x, y) = topo.coords(cell);
        let (w, h) = (topo.width as i64, topo.height as i64);
        let px = 2 * x as i64 - (w - 1);
        let py = 2 * y as i64 - (h - 1);
        let m = self.kind.matrix();
        let qx = m[0] as i64 * px + m[1] as i64 * py;
        let qy = m[2] as i64 * px + m[3] as i64 * py;
        let nx = (qx + (w - 1)) / 2 + self.translation.0 as i64;
        let ny = (qy + (h - 1)) / 2 + self.translation.1 as i64;
        topo.resolve(nx, ny).expect("transform maps the board onto itself")
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Transform, topo: &Topology) -> Transform {
        let m2 = self.kind.matrix();
        let s1 = first.translation;
        let (w, h) = (topo.width as i32, topo.height as i32);
        let sx = m2[0] * s1.0 + m2[1] * s1.1 + self.translation.0;
        let sy = m2[2] * s1.0 + m2[3] * s1.1 + self.translation.1;
        let translation = if topo.wrap { (sx.rem_euclid(w), sy.rem_euclid(h)) } else { (0, 0) };
        Transform {
            kind: TransformKind::from_matrix(mat_mul(m2, first.kind.matrix())).expect("D4 is closed"),
            translation,
        }
    }
}

/// The full symmetry group of a board: the rectangle or square point group,
/// extended by every translation on a torus.
pub fn symmetry_group(topo: &Topology) -> Vec<Transform> {
    let kinds: Vec<TransformKind> = TransformKind::ALL
        .into_iter()
        .filter(|k| topo.is_square() || !k.swaps_axes())
        .collect();
    if !topo.wrap {
        return kinds.into_iter().map(Transform::new).collect();
    }
    let mut out = Vec::with_capacity(kinds.len() * topo.area());
    for kind in kinds {
        for ty in 0..topo.height as i32 {
            for tx in 0..topo.width as i32 {
                out.push(Transform { kind, translation: (tx, ty) });
            }
        }
    }
    out
}

/// Encodes tile labels as big-endian u32s so byte order matches label order.
pub(crate) fn encode_labels(labels: &[u32]) -> Vec<u8> {
    labels.iter().flat_map(|l| l.to_be_bytes()).collect()
}

/// Relabels so tiles are numbered in order of first appearance.
pub(crate) fn first_visit_normalize(labels: &mut [u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let max = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
    scratch.resize(max, u32::MAX);
    let mut next = 0;
    for l in labels.iter_mut() {
        let slot = &mut scratch[*l as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *l = *slot;
    }
}

/// Image of a tiling under a board symmetry, with labels renormalized.
pub fn transform_tiling(tiling: &Tiling, g: &Transform) -> Tiling {
    let topo = tiling.topology();
    let mut labels = vec![0u32; topo.area()];
    for (cell, &l) in tiling.labels().iter().enumerate() {
        labels[g.apply(topo, cell)] = l;
    }
    Tiling::from_labels(*topo, tiling.t(), labels)
}

/// The lexicographically smallest encoding over the board's symmetry group;
/// equal exactly for tilings in the same symmetry orbit.
pub fn canonical_form(tiling: &Tiling) -> Result<Vec<u8>> {
    if let Err(defect) = crate::verify::validate_tiling(tiling) {
        return Err(Error::ContractViolation(format!("canonical_form of an invalid tiling: {defect}")));
    }
    let topo = tiling.topology();
    let mut best: Option<Vec<u32>> = None;
    let mut labels = vec![0u32; topo.area()];
    let mut scratch = Vec::new();
    for g in symmetry_group(topo) {
        for (cell, &l) in tiling.labels().iter().enumerate() {
            labels[g.apply(topo, cell)] = l;
        }
        first_visit_normalize(&mut labels, &mut scratch);
        if best.as_ref().map_or(true, |b| labels < *b) {
            best = Some(labels.clone());
        }
    }
    Ok(encode_labels(&best.expect("symmetry group contains the identity")))
}
