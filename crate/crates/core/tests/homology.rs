mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use tetcensus::homology::{cokernel, first_homology, is_homology_link, smith_normal_form};
use tetcensus::Error;

fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[test]
fn figure_eight_knot_complement_is_a_homology_knot() {
    let t = common::decode_isosig("cPcbbbiht");
    assert_eq!(first_homology(&t).unwrap().to_string(), "Z");
    assert!(is_homology_link(&t).unwrap());
}

#[test]
fn sister_has_torsion() {
    let t = common::decode_isosig("cPcbbbdxm");
    let h = first_homology(&t).unwrap();
    assert_eq!(h.rank, 1);
    assert_eq!(h.to_string(), "Z + Z/5");
    assert!(!is_homology_link(&t).unwrap());
}

#[test]
fn two_cusped_links() {
    for name in ["otet04_0000", "otet04_0001"] {
        let t = common::table_triangulation(name);
        assert_eq!(t.num_cusps().unwrap(), 2);
        assert_eq!(first_homology(&t).unwrap().to_string(), "Z^2", "{name}");
    }
}

#[test]
fn invariant_under_two_three_moves() {
    for (name, _) in common::TABLE {
        let t = common::table_triangulation(name);
        let h = first_homology(&t).unwrap();
        let moved = t.two_three(0, 0).unwrap();
        assert_eq!(first_homology(&moved).unwrap(), h, "{name}");
    }
}

#[test]
fn homology_link_needs_orientability() {
    let t = tetcensus::enumerate::enumerate_ctts(&tetcensus::enumerate::SearchConfig::new(1, false));
    let t = tetcensus::signature::decode_signature(&t.signatures[0]).unwrap();
    assert_eq!(is_homology_link(&t), Err(Error::NotOrientable));
    assert!(first_homology(&t).is_ok());
}

#[test]
fn known_diagonal_forms() {
    let d = smith_normal_form(&big(&[vec![2, 0], vec![0, 4]]));
    assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
    let d = smith_normal_form(&big(&[vec![6, 0], vec![0, 4]]));
    assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    let g = cokernel(&big(&[vec![0, 0, 0]]), 3);
    assert_eq!(g.to_string(), "Z^3");
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, 5), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_minor_gcds(m in matrix()) {
        let ours: Vec<i128> = smith_normal_form(&big(&m))
            .iter()
            .map(|d| d.to_string().parse().unwrap())
            .collect();
        prop_assert_eq!(ours, common::invariant_factors_by_minors(&m));
    }
}
