mod common;

use std::collections::{BTreeMap, HashSet};

use tetcensus::enumerate::{enumerate_ctts, SearchConfig};
use tetcensus::signature::{canonical_signature, decode_signature};

fn counts(max: usize, orientable: bool) -> BTreeMap<usize, usize> {
    enumerate_ctts(&SearchConfig::new(max, orientable)).counts()
}

#[test]
fn orientable_counts() {
    let want = BTreeMap::from([(2, 2), (4, 4), (5, 2), (6, 7), (7, 1), (8, 14)]);
    assert_eq!(counts(8, true), want);
}

#[test]
fn non_orientable_counts() {
    let want = BTreeMap::from([(1, 1), (2, 2), (3, 1), (4, 4), (5, 12), (6, 14)]);
    assert_eq!(counts(6, false), want);
}

#[test]
fn tiny_counts_match_exhaustive_search() {
    for n in 1..=2 {
        let mut forms = [HashSet::new(), HashSet::new()];
        for t in common::all_closed(n) {
            if t.is_ctt() {
                let o = t.is_orientable().unwrap() as usize;
                forms[o].insert(common::brute_form(&t));
            }
        }
        for o in [false, true] {
            let e = enumerate_ctts(&SearchConfig::new(n, o));
            assert_eq!(e.of_size(n).len(), forms[o as usize].len(), "n={n} orientable={o}");
        }
    }
}

#[test]
fn face_choice_does_not_change_results() {
    for o in [true, false] {
        let fast = enumerate_ctts(&SearchConfig::new(6, o));
        let mut cfg = SearchConfig::new(6, o);
        cfg.first_open_face = true;
        let slow = enumerate_ctts(&cfg);
        assert_eq!(fast.signatures, slow.signatures);
        assert!(slow.stats.nodes >= fast.stats.nodes);
    }
}

#[test]
fn capped_dedup_gives_the_same_results() {
    let full = enumerate_ctts(&SearchConfig::new(6, true));
    let mut cfg = SearchConfig::new(6, true);
    cfg.dedup_cap = 50;
    let capped = enumerate_ctts(&cfg);
    assert_eq!(full.signatures, capped.signatures);
    assert!(capped.stats.dedup_overflow > 0);
}

#[test]
fn results_are_canonical_ctts() {
    let e = enumerate_ctts(&SearchConfig::new(7, true));
    for s in &e.signatures {
        let t = decode_signature(s).unwrap();
        assert!(t.is_ctt() && t.is_orientable().unwrap());
        assert_eq!(&canonical_signature(&t).unwrap(), s);
    }
    let found: HashSet<&String> = e.signatures.iter().collect();
    for (name, _) in common::TABLE {
        let sig = canonical_signature(&common::table_triangulation(name)).unwrap();
        assert!(found.contains(&sig), "{name} missing");
    }
}
