//! Covering relations between CTTs of a census.

use std::fmt;

use rayon::prelude::*;

use crate::signature::find_homomorphisms;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoveringPair {
    pub src: String,
    pub dst: String,
    pub degree: usize,
}

impl fmt::Display for CoveringPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} degree={}", self.src, self.dst, self.degree)
    }
}

/// Every ordered pair of distinct named CTTs admitting a combinatorial
/// homomorphism, before removing composites.
pub fn homomorphism_relation(ctts: &[(String, Triangulation)]) -> Vec<CoveringPair> {
    let pairs: Vec<(usize, usize)> = (0..ctts.len())
        .flat_map(|i| (0..ctts.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let mut out: Vec<CoveringPair> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (src, dst) = (&ctts[i], &ctts[j]);
            let homs = find_homomorphisms(&src.1, &dst.1);
            homs.first().map(|h| CoveringPair {
                src: src.0.clone(),
                dst: dst.0.clone(),
                degree: h.degree,
            })
        })
        .collect();
    out.sort();
    out
}

/// The covering pairs that do not factor through another listed CTT, sorted.
pub fn covering_pairs(ctts: &[(String, Triangulation)]) -> Vec<CoveringPair> {
    reduce(homomorphism_relation(ctts))
}

/// Drops `(M, N)` when some `K` distinct from both has `M → K → N`.
pub fn reduce(relation: Vec<CoveringPair>) -> Vec<CoveringPair> {
    let has = |a: &str, b: &str| {
        relation
            .binary_search_by(|p| (p.src.as_str(), p.dst.as_str()).cmp(&(a, b)))
            .is_ok()
    };
    let mut out: Vec<CoveringPair> = relation
        .iter()
        .filter(|p| {
            !relation
                .iter()
                .filter(|q| q.src == p.src && q.dst != p.dst)
                .any(|q| has(&q.dst, &p.dst))
        })
        .cloned()
        .collect();
    out.sort();
    out
}
