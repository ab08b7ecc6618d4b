//! The recombination metagraph of a small board: every tiling is a vertex,
//! and two tilings are joined when they differ on exactly two tiles.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Topology;
use crate::search::enumerate_all_tilings;
use crate::tables::PairTable;
use crate::tiling::Tiling;
use crate::verify::{adjacent_pairs_unchecked, connected_splits};

/// Largest board area enumerated without an explicit override.
pub const DEFAULT_ENUMERATION_CAP: usize = 36;

/// All tilings of the board, each once, sorted by label vector. Boards larger
/// than `cap` cells are refused; pass `usize::MAX` to override.
pub fn enumerate_tilings(topo: &Topology, table: &PairTable, cap: usize) -> Result<Vec<Tiling>> {
    if topo.area() > cap {
        return Err(Error::CapExceeded { area: topo.area(), cap });
    }
    if topo.area() % table.t() != 0 {
        return Err(Error::NoTilingPossible(format!(
            "board area {} is not divisible by t = {}",
            topo.area(),
            table.t()
        )));
    }
    let mut tilings = enumerate_all_tilings(topo, table)?;
    tilings.sort_by(|a, b| a.labels().cmp(b.labels()));
    Ok(tilings)
}

pub struct Metagraph {
    topo: Topology,
    t: usize,
    vertices: Vec<Tiling>,
    index: HashMap<Vec<u32>, usize>,
    adjacency: Vec<Vec<u32>>,
}

impl Metagraph {
    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertex(&self, v: usize) -> &Tiling {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Tiling] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&u| u as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn find(&self, tiling: &Tiling) -> Option<usize> {
        self.index.get(tiling.labels()).copied()
    }

    /// Each edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v as usize)).filter(|&(u, v)| u < v))
    }

    /// Vertices with no neighbor on a board that has more than one tiling.
    pub fn locked_vertices(&self) -> Vec<usize> {
        if self.vertices.len() < 2 {
            return Vec::new();
        }
        (0..self.vertices.len()).filter(|&v| self.adjacency[v].is_empty()).collect()
    }
}

/// Builds the metagraph by generating every resplit of every adjacent tile
/// pair and looking the result up in the vertex index.
pub fn build_metagraph(tilings: Vec<Tiling>) -> Result<Metagraph> {
    let Some(first) = tilings.first() else {
        return Err(Error::InvalidParameter("metagraph of an empty tiling list".into()));
    };
    let topo = *first.topology();
    let t = first.t();
    let mut index = HashMap::with_capacity(tilings.len());
    for (v, tiling) in tilings.iter().enumerate() {
        if *tiling.topology() != topo || tiling.t() != t {
            return Err(Error::InvalidParameter("tilings belong to different boards".into()));
        }
        if index.insert(tiling.labels().to_vec(), v).is_some() {
            return Err(Error::InvalidParameter(format!("tiling {v} is listed twice")));
        }
    }

    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); tilings.len()];
    for (v, tiling) in tilings.iter().enumerate() {
        let tiles = tiling.tiles();
        for (a, b) in adjacent_pairs_unchecked(tiling) {
            let mut union: Vec<usize> = tiles[a as usize].iter().chain(&tiles[b as usize]).copied().collect();
            union.sort_unstable();
            for part in connected_splits(&topo, &union, t)? {
                if part == tiles[a as usize] || part == tiles[b as usize] {
                    continue;
                }
                let rest: Vec<usize> = union.iter().copied().filter(|c| part.binary_search(c).is_err()).collect();
                let neighbor = tiling.with_resplit(a, b, &part, &rest);
                let &u = index.get(neighbor.labels()).ok_or_else(|| {
                    Error::Internal(format!("resplit of vertex {v} is missing from the enumeration"))
                })?;
                if u != v {
                    adjacency[v].push(u as u32);
                }
            }
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
        adj.dedup();
    }
    Ok(Metagraph { topo, t, vertices: tilings, index, adjacency })
}

struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
    }
}

/// Connected components, numbered by decreasing size and then by smallest
/// member vertex.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentStats {
    /// `(component size, number of components of that size)`, by size descending.
    pub histogram: Vec<(usize, usize)>,
    pub sizes: Vec<usize>,
    #[serde(skip)]
    pub component_of: Vec<u32>,
}

impl ComponentStats {
    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    pub fn members(&self, component: usize) -> Vec<usize> {
        self.component_of.iter().enumerate().filter(|&(_, &c)| c as usize == component).map(|(v, _)| v).collect()
    }
}

pub fn components(mg: &Metagraph) -> ComponentStats {
    let n = mg.num_vertices();
    let mut dsu = DisjointSets::new(n);
    for (u, v) in mg.edges() {
        dsu.union(u, v);
    }
    let mut first_seen: HashMap<usize, usize> = HashMap::new();
    let mut roots = Vec::new();
    for v in 0..n {
        let r = dsu.find(v);
        if !first_seen.contains_key(&r) {
            first_seen.insert(r, roots.len());
            roots.push(r);
        }
    }
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(dsu.size[roots[i]]));
    let mut renumber = vec![0u32; roots.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new as u32;
    }
    let component_of: Vec<u32> = (0..n).map(|v| renumber[first_seen[&dsu.find(v)]]).collect();
    let sizes: Vec<usize> = order.iter().map(|&i| dsu.size[roots[i]] as usize).collect();
    let mut histogram: Vec<(usize, usize)> = Vec::new();
    for &s in &sizes {
        match histogram.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => histogram.push((s, 1)),
        }
    }
    ComponentStats { histogram, sizes, component_of }
}

/// Unordered cell pairs `(i, j)`, `i < j`, lying in a common tile in every
/// tiling of the component.
pub fn always_together_pairs(mg: &Metagraph, stats: &ComponentStats, component: usize) -> Vec<(usize, usize)> {
    let area = mg.topology().area();
    let mut together: Option<Vec<bool>> = None;
    for (v, &c) in stats.component_of.iter().enumerate() {
        if c as usize != component {
            continue;
        }
        let tiling = mg.vertex(v);
        match &mut together {
            None => {
                let mut m = vec![false; area * area];
                for i in 0..area {
                    for j in i + 1..area {
                        m[i * area + j] = tiling.same_tile(i, j);
                    }
                }
                together = Some(m);
            }
            Some(m) => {
                for i in 0..area {
                    for j in i + 1..area {
                        if m[i * area + j] && !tiling.same_tile(i, j) {
                            m[i * area + j] = false;
                        }
                    }
                }
            }
        }
    }
    let Some(m) = together else { return Vec::new() };
    let mut out = Vec::new();
    for i in 0..area {
        for j in i + 1..area {
            if m[i * area + j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Whether the metagraph of the board has at most one component.
pub fn is_connected(topo: &Topology, table: &PairTable, cap: usize) -> Result<bool> {
    let tilings = enumerate_tilings(topo, table, cap)?;
    if tilings.len() <= 1 {
        return Ok(true);
    }
    Ok(components(&build_metagraph(tilings)?).num_components() <= 1)
}
