//! Property checks shared by the proptest suite and the acceptance runner.
//! Each check takes plain values so both callers can drive it.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use polylock::constructions::domino_canonicalize;
use polylock::document::TilingDocument;
use polylock::geometry::{canonical_form, symmetry_group, transform_tiling, CellType};
use polylock::search::random_tiling;
use polylock::tables::{build_table, OffsetKey};
use polylock::verify::{adjacent_tile_pairs, validate_tiling};
use polylock::{PairTable, TableKind, Tiling, Topology};

use super::recombinable;

/// Boards for random tilings: `(width, height, wrap, t)`.
pub const BOARDS: [(usize, usize, bool, usize); 9] = [
    (6, 6, false, 2),
    (5, 4, true, 2),
    (6, 6, false, 3),
    (6, 5, false, 3),
    (6, 6, true, 3),
    (9, 4, false, 3),
    (8, 5, false, 4),
    (8, 8, true, 4),
    (10, 5, false, 5),
];

pub fn board_strategy() -> impl Strategy<Value = (Topology, usize)> {
    (0..BOARDS.len()).prop_map(|i| {
        let (w, h, wrap, t) = BOARDS[i];
        (Topology::new(w, h, wrap).unwrap(), t)
    })
}

fn basic_table(t: usize) -> &'static PairTable {
    static TABLES: OnceLock<Vec<PairTable>> = OnceLock::new();
    &TABLES.get_or_init(|| (1..=5).map(|t| build_table(t, TableKind::Basic).unwrap()).collect())[t - 1]
}

pub fn random_board_tiling(topo: &Topology, t: usize, seed: u64) -> Tiling {
    random_tiling(topo, basic_table(t), &mut StdRng::seed_from_u64(seed)).unwrap().expect("board admits a tiling")
}

fn type_at(tile: &[usize], anchor: usize, topo: &Topology) -> CellType {
    let (ax, ay) = topo.coords(anchor);
    let offsets: Vec<(i32, i32)> = tile
        .iter()
        .map(|&c| {
            let (x, y) = topo.coords(c);
            (x as i32 - ax as i32, y as i32 - ay as i32)
        })
        .collect();
    CellType::from_offsets(&offsets).unwrap()
}

/// The locked table forbids two adjacent tiles of a grid tiling, seen from
/// any cell of each, exactly when their union can be split another way.
pub fn check_resplit_agreement(table: &PairTable, topo: &Topology, seed: u64) -> Result<(), TestCaseError> {
    let tiling = random_board_tiling(topo, table.t(), seed);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9);
    let pairs = adjacent_tile_pairs(&tiling).unwrap();
    let (la, lb) = pairs[rng.gen_range(0..pairs.len())];
    let tiles = tiling.tiles();
    let (a, b) = (&tiles[la as usize], &tiles[lb as usize]);
    let (ca, cb) = (a[rng.gen_range(0..a.len())], b[rng.gen_range(0..b.len())]);
    let (ta, tb) = (table.type_index(&type_at(a, ca, topo)).unwrap(), table.type_index(&type_at(b, cb, topo)).unwrap());
    let ((ax, ay), (bx, by)) = (topo.coords(ca), topo.coords(cb));
    let d = OffsetKey::new(bx as i32 - ax as i32, by as i32 - ay as i32);
    prop_assert_eq!(table.forbidden(ta, tb, d), recombinable(topo, table.t(), a, b));
    Ok(())
}

pub fn check_orbit_invariance(tiling: &Tiling) -> Result<(), TestCaseError> {
    let form = canonical_form(tiling).unwrap();
    for g in symmetry_group(tiling.topology()) {
        let image = transform_tiling(tiling, &g);
        prop_assert!(validate_tiling(&image).is_ok());
        prop_assert_eq!(&canonical_form(&image).unwrap(), &form);
    }
    Ok(())
}

pub fn all_horizontal(topo: &Topology) -> Tiling {
    Tiling::from_labels(*topo, 2, (0..topo.area() as u32).map(|c| c / 2).collect())
}

pub fn check_domino_canonicalize(tiling: &Tiling) -> Result<(), TestCaseError> {
    let moves = domino_canonicalize(tiling).unwrap();
    let trajectory = moves.trajectory(tiling).unwrap();
    for step in &trajectory {
        prop_assert!(validate_tiling(step).is_ok());
    }
    prop_assert_eq!(trajectory.last().unwrap_or(tiling), &all_horizontal(tiling.topology()));
    Ok(())
}

pub fn check_document_round_trip(tiling: &Tiling) -> Result<(), TestCaseError> {
    let doc = TilingDocument::from_tiling(tiling).with_metadata("seed", 1);
    let back = TilingDocument::from_json(&doc.to_json()).unwrap();
    prop_assert_eq!(&back, &doc);
    prop_assert_eq!(&back.to_tiling().unwrap(), tiling);
    Ok(())
}
