//! Enumeration of combinatorial tetrahedral tessellations (CTTs).
//!
//! A depth-first search over partial triangulations grown from a single
//! tetrahedron. Each node first closes every open edge of order 6 and is
//! discarded when some closed edge has order other than 6, some open edge
//! has order above 6, or some edge is identified with itself reversed (the
//! midpoint of such an edge has a projective plane as link). Nodes are
//! deduplicated by signature. Otherwise an open face next to an open edge of
//! highest order is paired, either with a new tetrahedron or with another
//! open face in every possible way.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::perm::Perm4;
use crate::signature::signature;
use crate::triangulation::Triangulation;

/// Parameters of a search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_tets: usize,
    pub orientable: bool,
    /// Largest number of partial signatures kept for deduplication; further
    /// nodes are explored without being remembered. Closed results are
    /// always deduplicated exactly.
    pub dedup_cap: usize,
    /// Choose the first open face instead of one next to an open edge of
    /// highest order (slower; for cross-checking).
    pub first_open_face: bool,
}

impl SearchConfig {
    pub fn new(max_tets: usize, orientable: bool) -> Self {
        assert!(max_tets >= 1);
        SearchConfig {
            max_tets,
            orientable,
            dedup_cap: usize::MAX,
            first_open_face: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub dedup_hits: u64,
    pub edge_order_prunes: u64,
    pub rp2_prunes: u64,
    pub self_gluing_prunes: u64,
    pub dedup_overflow: u64,
    pub results_by_size: BTreeMap<usize, usize>,
}

impl fmt::Display for SearchStats {
    /// `key=value` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "dedup_hits={}", self.dedup_hits)?;
        writeln!(f, "edge_order_prunes={}", self.edge_order_prunes)?;
        writeln!(f, "rp2_prunes={}", self.rp2_prunes)?;
        writeln!(f, "self_gluing_prunes={}", self.self_gluing_prunes)?;
        writeln!(f, "dedup_overflow={}", self.dedup_overflow)?;
        for (n, c) in &self.results_by_size {
            writeln!(f, "results_{n}={c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    EdgeOrder,
    ProjectivePlane,
    SelfGluing,
}

/// Closes open edges of order 6 until none remain, then checks that every
/// closed edge has order 6, every open edge order below 6, and no edge is
/// orientation-reversing.
pub fn fix_edges(t: &mut Triangulation) -> Validity {
    loop {
        let classes = t.edge_classes();
        let mut closed_one = false;
        for c in &classes {
            if c.orientation_reversing {
                return Validity::ProjectivePlane;
            }
            if c.open {
                if c.order > 6 {
                    return Validity::EdgeOrder;
                }
            } else if c.order != 6 {
                return Validity::EdgeOrder;
            }
        }
        for c in &classes {
            if c.open && c.order == 6 {
                if t.close_edge(c).is_err() {
                    return Validity::SelfGluing;
                }
                closed_one = true;
                break;
            }
        }
        if !closed_one {
            return Validity::Valid;
        }
    }
}

struct Search<'a> {
    cfg: &'a SearchConfig,
    seen: HashSet<Box<str>>,
    results: HashSet<String>,
    stats: SearchStats,
}

impl Search<'_> {
    fn visit(&mut self, mut t: Triangulation) {
        self.stats.nodes += 1;
        match fix_edges(&mut t) {
            Validity::Valid => {}
            Validity::EdgeOrder => {
                self.stats.edge_order_prunes += 1;
                return;
            }
            Validity::ProjectivePlane => {
                self.stats.rp2_prunes += 1;
                return;
            }
            Validity::SelfGluing => {
                self.stats.self_gluing_prunes += 1;
                return;
            }
        }
        let sig = signature(&t).expect("grown triangulations are connected");
        if t.is_closed() {
            let keep = !self.cfg.orientable ^ t.is_orientable().unwrap();
            if keep && !self.results.contains(&sig) {
                *self.stats.results_by_size.entry(t.num_tets()).or_default() += 1;
                self.results.insert(sig);
            }
            return;
        }
        if self.seen.contains(sig.as_str()) {
            self.stats.dedup_hits += 1;
            return;
        }
        if self.seen.len() < self.cfg.dedup_cap {
            self.seen.insert(sig.into_boxed_str());
        } else {
            self.stats.dedup_overflow += 1;
        }

        let (t1, f1) = self.choose_face(&t);
        let n = t.num_tets();
        if n < self.cfg.max_tets {
            let mut u = t.clone();
            let new = u.add_tet();
            let p = if f1 == 3 {
                Perm4::transposition(0, 1)
            } else {
                Perm4::transposition(f1, 3)
            };
            u.glue(t1, f1, new, p).unwrap();
            self.visit(u);
        }
        for (t2, f2) in t.open_faces() {
            if (t2, f2) == (t1, f1) {
                continue;
            }
            for p in Perm4::all() {
                if p.apply(f1) != f2 || (self.cfg.orientable && !p.is_odd()) {
                    continue;
                }
                let mut u = t.clone();
                if u.glue(t1, f1, t2, p).is_ok() {
                    self.visit(u);
                }
            }
        }
    }

    fn choose_face(&self, t: &Triangulation) -> (usize, usize) {
        if self.cfg.first_open_face {
            return t.open_faces()[0];
        }
        let classes = t.edge_classes();
        let best = classes
            .iter()
            .filter(|c| c.open)
            .map(|c| c.order)
            .max()
            .expect("partial triangulation has an open edge");
        classes
            .iter()
            .filter(|c| c.open && c.order == best)
            .flat_map(|c| {
                let (a, b) = c.open_faces().unwrap();
                [a, b]
            })
            .min()
            .unwrap()
    }
}

/// Output of [`enumerate_ctts`]: signatures sorted by size, then as strings.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub signatures: Vec<String>,
    pub stats: SearchStats,
}

impl Enumeration {
    /// Signatures of CTTs with exactly `n` tetrahedra.
    pub fn of_size(&self, n: usize) -> Vec<&str> {
        let prefix = format!("{n}.");
        self.signatures
            .iter()
            .filter(|s| s.starts_with(&prefix))
            .map(String::as_str)
            .collect()
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.stats.results_by_size.clone()
    }
}

fn size_of(sig: &str) -> usize {
    sig.split('.').next().unwrap().parse().unwrap()
}

/// All CTTs with at most `cfg.max_tets` tetrahedra of the requested
/// orientability, up to combinatorial isomorphism.
pub fn enumerate_ctts(cfg: &SearchConfig) -> Enumeration {
    let mut search = Search {
        cfg,
        seen: HashSet::new(),
        results: HashSet::new(),
        stats: SearchStats::default(),
    };
    search.visit(Triangulation::new(1));
    let mut signatures: Vec<String> = search.results.into_iter().collect();
    signatures.sort_by(|a, b| (size_of(a), a).cmp(&(size_of(b), b)));
    Enumeration {
        signatures,
        stats: search.stats,
    }
}
