mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use common::props::{self, board_strategy, random_board_tiling};
use polylock::constructions::{domino_canonicalize, narrow_triomino_canonicalize, torus_spiral};
use polylock::geometry::{
    canonical_form, enumerate_cell_types, enumerate_fixed_polyominoes, is_plane_connected, symmetry_group,
    transform_tiling, type_footprint, Transform, TransformKind,
};
use polylock::metagraph::{build_metagraph, components, enumerate_tilings, Metagraph, DEFAULT_ENUMERATION_CAP};
use polylock::search::{search_locked, SearchOptions, SymmetryMode};
use polylock::tables::{augment_table, build_table, interaction_radius, pair_relation, OffsetKey};
use polylock::verify::{check_witness, connected_splits, is_locked, Verdict, Witness};
use polylock::{PairTable, TableKind, Tiling, Topology};

fn locked_table(t: usize) -> &'static PairTable {
    static TABLES: OnceLock<Vec<PairTable>> = OnceLock::new();
    &TABLES.get_or_init(|| (1..=4).map(|t| build_table(t, TableKind::Locked).unwrap()).collect())[t - 1]
}

/// Small boards whose full metagraph is cheap: `(width, height, wrap, t)`.
const SMALL: [(usize, usize, bool, usize); 6] =
    [(4, 4, false, 2), (4, 4, true, 2), (6, 4, false, 3), (6, 3, true, 3), (4, 4, false, 4), (8, 3, false, 4)];

fn small_graph(i: usize) -> &'static Metagraph {
    static GRAPHS: OnceLock<Vec<Metagraph>> = OnceLock::new();
    &GRAPHS.get_or_init(|| {
        SMALL
            .iter()
            .map(|&(w, h, wrap, t)| {
                let basic = build_table(t, TableKind::Basic).unwrap();
                let topo = Topology::new(w, h, wrap).unwrap();
                build_metagraph(enumerate_tilings(&topo, &basic, DEFAULT_ENUMERATION_CAP).unwrap()).unwrap()
            })
            .collect()
    })[i]
}

#[test]
fn cell_types_are_marked_polyominoes() {
    for t in 1..=6 {
        let types = enumerate_cell_types(t).unwrap();
        assert_eq!(types.len(), t * enumerate_fixed_polyominoes(t).unwrap().len());
        for ty in &types {
            assert!(ty.contains((0, 0)));
            assert!(is_plane_connected(ty.offsets()));
        }
    }
}

#[test]
fn rot4_outputs_are_the_symmetric_subset() {
    let topo = Topology::grid(6, 6);
    let table = build_table(3, TableKind::LockedAugmented).unwrap();
    let all = search_locked(&topo, &table, &SearchOptions::default()).unwrap();
    let rot = search_locked(&topo, &table, &SearchOptions { symmetry: SymmetryMode::Rot4, ..Default::default() }).unwrap();
    let quarter = Transform::new(TransformKind::Rot90);
    let symmetric: BTreeSet<Vec<u32>> = all
        .tilings
        .iter()
        .filter(|x| transform_tiling(x, &quarter) == **x)
        .map(|x| x.labels().to_vec())
        .collect();
    let found: BTreeSet<Vec<u32>> = rot.tilings.iter().map(|x| x.labels().to_vec()).collect();
    assert_eq!(found, symmetric);
    for x in &rot.tilings {
        assert_eq!(&transform_tiling(x, &quarter), x);
    }
}

#[test]
fn parallel_search_is_deterministic() {
    let table = build_table(3, TableKind::LockedAugmented).unwrap();
    for topo in [Topology::grid(6, 6), Topology::torus(6, 5)] {
        let one = search_locked(&topo, &table, &SearchOptions::default()).unwrap();
        let again = search_locked(&topo, &table, &SearchOptions::default()).unwrap();
        let many = search_locked(&topo, &table, &SearchOptions { workers: 3, ..Default::default() }).unwrap();
        assert_eq!(one.canonical_forms, again.canonical_forms);
        assert_eq!(one.canonical_forms, many.canonical_forms);
        assert_eq!(one.tilings, many.tilings);
    }
}

#[test]
fn unique_tilings_are_never_locked() {
    for (w, h, t) in [(1, 4, 2), (2, 1, 2), (3, 1, 3), (1, 5, 5)] {
        let tiling = Tiling::from_labels(Topology::grid(w, h), t, (0..(w * h) as u32).map(|c| c / t as u32).collect());
        assert_eq!(is_locked(&tiling).verdict, Verdict::Degenerate);
    }
}

#[test]
fn metagraph_edges_are_single_moves() {
    for i in 0..SMALL.len() {
        let mg = small_graph(i);
        let stats = components(mg);
        assert_eq!(stats.sizes.iter().sum::<usize>(), mg.num_vertices());
        for (u, v) in mg.edges() {
            let (a, b) = (mg.vertex(u), mg.vertex(v));
            let (ta, tb): (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>) =
                (a.tiles().into_iter().collect(), b.tiles().into_iter().collect());
            let gone: Vec<_> = ta.difference(&tb).collect();
            let came: Vec<_> = tb.difference(&ta).collect();
            assert_eq!((gone.len(), came.len()), (2, 2));
            let union = |parts: &[&Vec<usize>]| parts.iter().flat_map(|p| p.iter().copied()).collect::<BTreeSet<_>>();
            assert_eq!(union(&gone), union(&came));
            assert!(mg.neighbors(v).any(|w| w == u));
        }
    }
}

#[test]
fn canonicalizer_moves_are_metagraph_edges() {
    let basic2 = build_table(2, TableKind::Basic).unwrap();
    let basic3 = build_table(3, TableKind::Basic).unwrap();
    let cases = [(Topology::grid(4, 4), &basic2), (Topology::grid(6, 3), &basic3)];
    for (topo, basic) in cases {
        let mg = build_metagraph(enumerate_tilings(&topo, basic, DEFAULT_ENUMERATION_CAP).unwrap()).unwrap();
        for tiling in mg.vertices() {
            let moves = if basic.t() == 2 {
                domino_canonicalize(tiling).unwrap()
            } else {
                narrow_triomino_canonicalize(tiling).unwrap().moves
            };
            let path = moves.trajectory(tiling).unwrap();
            for step in path.windows(2) {
                let (u, v) = (mg.find(&step[0]).unwrap(), mg.find(&step[1]).unwrap());
                assert!(mg.neighbors(u).any(|w| w == v), "move is not an edge on {topo}");
            }
        }
    }
}

#[test]
fn spiral_pairs_admit_one_split() {
    for n in 1..=2 {
        let tiling = torus_spiral(n).unwrap();
        let t = tiling.t();
        assert_eq!(tiling.num_tiles(), 4 * t);
        assert_eq!(tiling.topology().width, 2 * t);
        let tiles = tiling.tiles();
        for (a, b) in polylock::verify::adjacent_tile_pairs(&tiling).unwrap() {
            let union: Vec<usize> = tiles[a as usize].iter().chain(&tiles[b as usize]).copied().collect();
            assert_eq!(connected_splits(tiling.topology(), &union, t).unwrap().len(), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn footprints_have_t_cells(t in 1usize..=5, pick in any::<prop::sample::Index>(), cell in 0usize..48, wrap in any::<bool>()) {
        let types = enumerate_cell_types(t).unwrap();
        let topo = Topology::new(8, 6, wrap).unwrap();
        if let Some(fp) = type_footprint(pick.get(&types), cell, &topo) {
            let distinct: BTreeSet<usize> = fp.iter().copied().collect();
            prop_assert_eq!(distinct.len(), t);
            prop_assert!(distinct.contains(&cell));
        }
    }

    #[test]
    fn relation_is_offset_symmetric(t in 2usize..=4, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(),
                                    dx in -7i32..=7, dy in -7i32..=7, kind_pick in 0usize..2) {
        let r = interaction_radius(t);
        prop_assume!(dx.abs() + dy.abs() <= r);
        let types = enumerate_cell_types(t).unwrap();
        let (a, b) = (a.get(&types), b.get(&types));
        let kind = [TableKind::Basic, TableKind::Locked][kind_pick];
        let d = OffsetKey::new(dx, dy);
        prop_assert_eq!(pair_relation(a, b, d, kind).unwrap(), pair_relation(b, a, d.neg(), kind).unwrap());
    }

    #[test]
    fn resplit_agreement((topo, t) in board_strategy().prop_filter("grids up to t = 4", |(b, t)| !b.wrap && *t <= 4),
                         seed in any::<u64>()) {
        props::check_resplit_agreement(locked_table(t), &topo, seed)?;
    }

    #[test]
    fn canonical_form_is_orbit_invariant((topo, t) in board_strategy(), seed in any::<u64>()) {
        props::check_orbit_invariance(&random_board_tiling(&topo, t, seed))?;
    }

    #[test]
    fn canonical_form_separates_orbits((topo, t) in board_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (random_board_tiling(&topo, t, s1), random_board_tiling(&topo, t, s2));
        let same_orbit = symmetry_group(&topo).iter().any(|g| transform_tiling(&x, g) == y);
        prop_assert_eq!(canonical_form(&x).unwrap() == canonical_form(&y).unwrap(), same_orbit);
    }

    #[test]
    fn domino_canonicalization_reaches_all_horizontal(w in 1usize..=4, h in 1usize..=7, seed in any::<u64>()) {
        let topo = Topology::grid(2 * w, h);
        props::check_domino_canonicalize(&random_board_tiling(&topo, 2, seed))?;
    }

    #[test]
    fn documents_round_trip((topo, t) in board_strategy(), seed in any::<u64>()) {
        props::check_document_round_trip(&random_board_tiling(&topo, t, seed))?;
    }

    #[test]
    fn verifier_matches_metagraph_degree(i in 0usize..SMALL.len(), pick in any::<prop::sample::Index>()) {
        let mg = small_graph(i);
        let v = pick.index(mg.num_vertices());
        let report = is_locked(mg.vertex(v));
        prop_assert_eq!(report.is_locked(), mg.degree(v) == 0 && mg.num_vertices() > 1);
        if let Some(w @ Witness::Recombination { .. }) = &report.witness {
            prop_assert!(check_witness(mg.vertex(v), w));
        }
    }

    #[test]
    fn search_results_verify((topo, t) in board_strategy().prop_filter("cheap boards", |(b, t)| b.area() <= 40 && *t <= 4)) {
        let table = build_table(t, TableKind::Locked).unwrap();
        let out = search_locked(&topo, &table, &SearchOptions::default()).unwrap();
        for x in &out.tilings {
            prop_assert!(is_locked(x).is_locked());
        }
    }
}

#[test]
fn augmentation_only_adds() {
    for t in 2..=4 {
        let locked = locked_table(t);
        let augmented = augment_table(locked).unwrap();
        assert!(augmented.total_forbidden() >= locked.total_forbidden());
        for (a, b) in locked.matrices().iter().zip(augmented.matrices()) {
            assert!(a.is_subset_of(b));
        }
    }
}
