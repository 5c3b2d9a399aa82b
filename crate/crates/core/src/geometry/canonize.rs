//! Canonization: from a CTT with regular shapes to a certified geometric
//! proto-canonical triangulation of the same manifold.
//!
//! Moves are chosen from approximate tilts (see [`super::guide`]) and may
//! pass through flat tetrahedra, which the exact tilt formula cannot handle.
//! Shapes are carried along exactly, and a triangulation is only returned
//! once it has no flat or negatively oriented tetrahedron and its exact
//! tilts are all non-positive.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{guide, regular_shapes, tilts_of, TiltTable};
use crate::error::{Error, Result};
use crate::numbers::ShapeNum;
use crate::signature::signature;
use crate::triangulation::{edge_index, Triangulation, EDGE_VERTICES};

/// Approximate tilts within this distance of zero count as zero.
const CONCAVITY_EPSILON: f64 = 1e-7;

/// Attempts at a geometric randomization before starting over.
const RANDOMIZE_TRIES: usize = 50;

/// Budgets and seed for [`canonize`].
#[derive(Clone, Debug)]
pub struct CanonizeOptions {
    pub seed: u64,
    /// Moves allowed per attempt, as a multiple of the tetrahedron count.
    pub steps_per_tet: usize,
    pub retries: usize,
}

impl Default for CanonizeOptions {
    fn default() -> Self {
        CanonizeOptions {
            seed: 0,
            steps_per_tet: 100,
            retries: 25,
        }
    }
}

/// A certified proto-canonical triangulation with exact shapes and tilts.
#[derive(Clone, Debug)]
pub struct Canonized {
    /// Triangulation carrying its shapes.
    pub triangulation: Triangulation,
    pub tilts: TiltTable,
    pub moves: usize,
    pub randomizations: usize,
}

impl Canonized {
    pub fn shapes(&self) -> &[ShapeNum] {
        self.triangulation.shapes().unwrap()
    }
}

fn all_shapes(t: &Triangulation, keep: impl Fn(i32) -> bool) -> bool {
    t.shapes().is_some_and(|s| s.iter().all(|z| keep(z.im_sign())))
}

fn is_geometric(t: &Triangulation) -> bool {
    all_shapes(t, |s| s > 0)
}

fn no_negative(t: &Triangulation) -> bool {
    all_shapes(t, |s| s >= 0)
}

/// One step of the tilt-driven search: cancel a pair of tetrahedra around
/// an edge of order two, else a 3-2 move on an edge of order three whose
/// faces are not convex, else a 2-3 move across a concave face (most concave
/// first). Moves creating negatively oriented tetrahedra are skipped; flat
/// ones are allowed. `None` when stuck.
fn improve(t: &Triangulation) -> Option<Triangulation> {
    let tilts = guide::face_tilts(t)?;
    let index = t.face_class_index();
    let classes = t.edge_classes();
    for c in classes.iter().filter(|c| c.order == 2 && !c.open) {
        let e = c.walk[0];
        if let Ok(u) = t.two_zero(e.tet, e.edge()) {
            return Some(u);
        }
    }
    for c in classes.iter().filter(|c| c.order == 3 && !c.open) {
        let e = c.walk[0];
        if tilts[index[e.tet][e.exit_face()]] > -CONCAVITY_EPSILON {
            if let Some(u) = t.three_two_unchecked(e.tet, e.edge()).ok().filter(no_negative) {
                return Some(u);
            }
        }
    }
    let faces = t.face_classes();
    let mut concave: Vec<usize> = (0..faces.len()).filter(|&i| tilts[i] > CONCAVITY_EPSILON).collect();
    concave.sort_by(|&a, &b| tilts[b].total_cmp(&tilts[a]).then(a.cmp(&b)));
    concave.iter().find_map(|&i| {
        let (tet, face) = faces[i].a;
        t.two_three_unchecked(tet, face).ok().filter(no_negative)
    })
}

/// Order-four edge flip: the octahedron around an edge of order four with
/// distinct tetrahedra is split along another diagonal, the one through the
/// apexes of the tetrahedra on both sides of `first`.
fn flip_octahedron(t: &Triangulation, tet: usize, edge: usize, first: usize) -> Option<Triangulation> {
    let c = t.edge_class_of(tet, edge);
    let mut tets: Vec<usize> = c.walk.iter().map(|e| e.tet).collect();
    tets.sort_unstable();
    tets.dedup();
    if c.open || c.order != 4 || tets.len() != 4 {
        return None;
    }
    let (a, b) = EDGE_VERTICES[edge];
    let mid = t.two_three_unchecked(tet, first).ok()?;
    // The new tetrahedron on edge ab keeps the labels a and b; it replaced
    // the third vertex of the face by the apex.
    let k = (0..4).find(|&x| x != first && x != a && x != b)?;
    let slot = (0..4).filter(|&x| x != first).position(|x| x == k)?;
    let new_tet = mid.num_tets() - 3 + slot;
    let new_edge = edge_index(a, b);
    if mid.edge_class_of(new_tet, new_edge).order != 3 {
        return None;
    }
    mid.three_two_unchecked(new_tet, new_edge).ok()
}

/// Cancels pairs around edges of order two while possible.
fn cancel(t: &mut Triangulation) {
    'again: loop {
        for c in t.edge_classes() {
            if c.order == 2 && !c.open {
                let e = c.walk[0];
                if let Ok(u) = t.two_zero(e.tet, e.edge()) {
                    *t = u;
                    continue 'again;
                }
            }
        }
        return;
    }
}

/// 2-0 and 3-2 moves, regardless of tilts or orientation, while possible.
/// Reports whether anything changed.
fn simplify(t: &mut Triangulation) -> bool {
    let before = t.num_tets();
    'again: loop {
        cancel(t);
        for c in t.edge_classes() {
            if c.order == 3 && !c.open {
                let e = c.walk[0];
                if let Ok(u) = t.three_two_unchecked(e.tet, e.edge()) {
                    *t = u;
                    continue 'again;
                }
            }
        }
        return t.num_tets() < before;
    }
}

/// A random retriangulation: `4n` random 2-3 moves, then 2-0 and 3-2 moves
/// and random octahedron flips to shrink it again. Shapes are carried along
/// exactly and may pass through flat or negatively oriented tetrahedra;
/// only a geometric outcome is returned.
fn randomize(t: &Triangulation, rng: &mut ChaCha8Rng) -> Option<Triangulation> {
    let mut cur = t.clone();
    for _ in 0..4 * t.num_tets() {
        let tet = rng.gen_range(0..cur.num_tets());
        let face = rng.gen_range(0..4);
        if let Ok(u) = cur.two_three_unchecked(tet, face) {
            cur = u;
            cancel(&mut cur);
        }
    }
    simplify(&mut cur);
    let mut quiet = 0;
    while quiet < 6 {
        let mut progress = false;
        let mut i = 0;
        loop {
            let classes = cur.edge_classes();
            let Some(c) = classes.get(i) else { break };
            i += 1;
            if c.order != 4 || !rng.gen_ratio(3, 4) {
                continue;
            }
            let e = c.walk[rng.gen_range(0..4)];
            if let Some(u) = flip_octahedron(&cur, e.tet, e.edge(), e.exit_face()) {
                cur = u;
                if simplify(&mut cur) {
                    progress = true;
                    break;
                }
            }
        }
        quiet = if progress { 0 } else { quiet + 1 };
    }
    is_geometric(&cur).then_some(cur)
}

/// Exact tilts when `t` is a geometric proto-canonical triangulation.
fn certified(t: &Triangulation) -> Result<Option<TiltTable>> {
    if !is_geometric(t) {
        return Ok(None);
    }
    let table = tilts_of(t, t.shapes().unwrap())?;
    Ok(table.is_proto_canonical().then_some(table))
}

/// Turns a CTT into a certified geometric proto-canonical triangulation of
/// the same manifold. Starts from regular shapes and applies [`improve`]
/// until stuck, cycling or out of steps. Unless the result certifies, it is
/// replaced by a random geometric retriangulation and the search resumes.
pub fn canonize(t: &Triangulation, opts: &CanonizeOptions) -> Result<Canonized> {
    let start = t.clone().with_shapes(regular_shapes(t)?);
    let budget = opts.steps_per_tet * start.num_tets().max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cur = start.clone();
    let mut moves = 0;
    for attempt in 0..=opts.retries {
        let mut seen = HashSet::new();
        for _ in 0..budget {
            if !seen.insert(signature(&cur)?) {
                break;
            }
            match improve(&cur) {
                Some(u) => {
                    cur = u;
                    moves += 1;
                }
                None => break,
            }
        }
        if let Some(tilts) = certified(&cur)? {
            return Ok(Canonized {
                triangulation: cur,
                tilts,
                moves,
                randomizations: attempt,
            });
        }
        if attempt == opts.retries {
            break;
        }
        let base = if is_geometric(&cur) { &cur } else { &start };
        cur = (0..RANDOMIZE_TRIES)
            .find_map(|_| randomize(base, &mut rng))
            .unwrap_or_else(|| start.clone());
    }
    Err(Error::CanonizationFailed {
        steps: moves,
        retries: opts.retries,
    })
}
