mod common;

use tetcensus::geometry::{
    canonize, certify, cusp_cross_section, normalize_cusps, regular_shapes, tilts_of, verify_logarithmic,
    verify_positive, verify_rectangular, CanonizeOptions, Opacity,
};
use tetcensus::numbers::rat;
use tetcensus::signature::find_isomorphisms;
use tetcensus::{Error, Triangulation};

/// Canonical triangulation of otet07_0000 as computed by SnapPy, relabeled
/// into this crate's text format.
const OTET07_CANONICAL: &str = "12
6:3120 5:0132 1:0132 2:3120
3:1230 8:0132 3:2103 0:0132
0:3120 3:3201 3:0132 8:3120
1:2103 1:3012 2:2310 2:0132
10:3120 9:0132 5:0132 6:3120
7:1230 0:0132 7:2103 4:0132
4:3120 7:3201 7:0132 0:3120
5:2103 5:3012 6:2310 6:0132
2:3120 1:0132 9:0132 10:3120
11:1230 4:0132 11:2103 8:0132
8:3120 11:3201 11:0132 4:3120
9:2103 9:3012 10:2310 10:0132
";

#[test]
fn regular_shapes_certify() {
    for (name, _) in common::TABLE {
        let t = common::table_triangulation(name);
        let z = regular_shapes(&t).unwrap();
        assert!(verify_rectangular(&t, &z).unwrap(), "{name}");
        assert!(verify_positive(&z), "{name}");
        assert!(verify_logarithmic(&t, &z, &rat(1, 10_000_000)).unwrap(), "{name}");
        let report = certify(&t, &z);
        assert_eq!(report.face_tilts.len(), 2 * t.num_tets());
        // Every CTT is proto-canonical except the ones whose canonical
        // decomposition needs moves.
        if report.passed() {
            assert!(tilts_of(&t, &z).unwrap().is_proto_canonical(), "{name}");
        }
    }
}

#[test]
fn tilt_signs_match_the_concavity_oracle() {
    let mut seen = [0usize; 3];
    for (name, _) in common::TABLE {
        let t = common::table_triangulation(name);
        let z = regular_shapes(&t).unwrap();
        let cs = normalize_cusps(&cusp_cross_section(&t, &z).unwrap()).unwrap();
        let tilts = tilts_of(&t, &z).unwrap();
        for (i, fc) in t.face_classes().iter().enumerate() {
            let c = common::concavity(&t, &z, &cs, fc.a.0, fc.a.1);
            let expect = if c.abs() < 1e-9 {
                Opacity::Transparent
            } else if c < 0.0 {
                Opacity::Opaque
            } else {
                Opacity::Positive
            };
            assert_eq!(tilts.opacity[i], expect, "{name} face {i} concavity {c}");
            seen[expect as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn canonized_otet07_matches_reference() {
    let t = common::table_triangulation("otet07_0000");
    let c = canonize(&t, &CanonizeOptions::default()).unwrap();
    assert_eq!(c.triangulation.num_tets(), 12);
    assert!(certify(&c.triangulation, c.shapes()).passed());
    let mut plain = c.triangulation.clone();
    plain.set_shapes(None);
    let reference: Triangulation = OTET07_CANONICAL.parse().unwrap();
    assert!(!find_isomorphisms(&plain, &reference).is_empty());
}

#[test]
fn canonize_needs_a_ctt() {
    let t = common::table_triangulation("otet05_0000");
    let u = t.two_three(0, 0).unwrap();
    assert!(matches!(canonize(&u, &CanonizeOptions::default()), Err(Error::NotCtt)));
}
