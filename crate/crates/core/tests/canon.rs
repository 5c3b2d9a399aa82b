mod common;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tetcensus::canon::{assemble_cells, canonical_data, isometry_signature, retriangulate, EdgeKind, Regime};
use tetcensus::geometry::{regular_shapes, tilts_of, CanonizeOptions, Opacity};
use tetcensus::signature::{automorphism_count, canonical_signature, find_isomorphisms};
use tetcensus::triangulation::LinkSurface;
use tetcensus::{Perm4, Triangulation};

fn opts(seed: u64) -> CanonizeOptions {
    CanonizeOptions {
        seed,
        ..CanonizeOptions::default()
    }
}

/// Cusps and finite vertices (3-cell centers) of a retriangulation.
fn vertex_kinds(t: &Triangulation) -> (usize, usize) {
    let links = t.vertex_links().unwrap();
    let spheres = links.iter().filter(|v| v.surface == LinkSurface::Sphere).count();
    (links.len() - spheres, spheres)
}

fn shuffled(t: &Triangulation, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tets: Vec<usize> = (0..t.num_tets()).collect();
    tets.shuffle(&mut rng);
    let verts: Vec<Perm4> = (0..t.num_tets())
        .map(|_| {
            let mut v = [0u8, 1, 2, 3];
            v.shuffle(&mut rng);
            Perm4::from_images(v).unwrap()
        })
        .collect();
    t.relabel(&tets, &verts)
}

#[test]
fn cube_manifold() {
    let t = common::table_triangulation("otet05_0001");
    let d = canonical_data(&t, &opts(0)).unwrap();
    assert_eq!(d.cells.cell_sizes(), vec![5]);
    let mut sides: Vec<usize> = d.cells.two_cells.iter().map(|c| c.sides).collect();
    sides.sort_unstable();
    assert_eq!(sides, vec![4, 4, 4]);
    assert_eq!(d.signature.regime, Regime::Retriangulated);
    // One tetrahedron per side of every 2-cell.
    assert_eq!(d.canonical.num_tets(), 12);
    assert!(d.canonical.is_closed() && d.canonical.is_connected());
    assert_eq!(vertex_kinds(&d.canonical), (t.num_cusps().unwrap(), 1));
}

#[test]
fn all_opaque_faces_give_six_tetrahedra_each() {
    for name in ["otet02_0000", "otet04_0002", "otet05_0000"] {
        let t = common::table_triangulation(name);
        let mut tilts = tilts_of(&t, &regular_shapes(&t).unwrap()).unwrap();
        tilts.opacity.iter_mut().for_each(|o| *o = Opacity::Opaque);
        let cells = assemble_cells(&t, &tilts).unwrap();
        assert_eq!(cells.num_cells, t.num_tets());
        assert!(cells.edge_kinds.iter().all(|&k| k == EdgeKind::OneCell));
        assert!(cells.is_simplicial());
        let r = retriangulate(&cells).unwrap();
        assert_eq!(r.num_tets(), 6 * t.num_tets(), "{name}");
        assert!(r.is_closed() && r.is_orientable().unwrap());
        assert_eq!(vertex_kinds(&r), (t.num_cusps().unwrap(), t.num_tets()));
        assert!(r.edge_classes().iter().all(|c| c.order >= 3));
    }
}

#[test]
fn simplicial_decomposition_matches_published_signature() {
    let t = common::table_triangulation("otet04_0000");
    let d = canonical_data(&t, &opts(0)).unwrap();
    assert_eq!(d.signature.regime, Regime::Simplicial);
    assert_eq!(d.cells.num_opaque_faces(), 2 * d.canonical.num_tets());
    let published = common::decode_isosig("jLLzzQQccdffihhiiqffofafoaa");
    assert_eq!(d.canonical.num_tets(), 9);
    assert!(!find_isomorphisms(&d.canonical, &published).is_empty());
}

#[test]
fn signature_ignores_labels_and_seed() {
    for (name, _) in common::TABLE.iter().take(10) {
        let t = common::table_triangulation(name);
        let base = isometry_signature(&t, &opts(0)).unwrap();
        for s in 1..3 {
            assert_eq!(isometry_signature(&shuffled(&t, s), &opts(s)).unwrap(), base, "{name}");
        }
    }
}

#[test]
fn canonical_symmetry_contains_ctt_symmetry() {
    for (name, _) in common::TABLE {
        let t = common::table_triangulation(name);
        let d = canonical_data(&t, &opts(0)).unwrap();
        let a = automorphism_count(&d.canonical).unwrap();
        let b = automorphism_count(&t).unwrap();
        assert!(a >= b, "{name}: {a} < {b}");
        assert_eq!(canonical_signature(&d.canonical).unwrap(), d.signature.signature);
    }
}

#[test]
fn distinct_table_entries_are_distinct_manifolds() {
    let mut sigs: Vec<String> = common::TABLE
        .iter()
        .map(|(name, _)| {
            let t = common::table_triangulation(name);
            isometry_signature(&t, &opts(0)).unwrap().to_string()
        })
        .collect();
    sigs.sort();
    sigs.dedup();
    assert_eq!(sigs.len(), common::TABLE.len());
}
