//! Canonical signatures, isomorphisms and combinatorial homomorphisms.
//!
//! The signature of a connected triangulation is the lexicographically
//! smallest token sequence produced by a breadth-first relabeling, taken over
//! all `24·n` choices of root tetrahedron and root vertex labeling. Relabeling
//! from a root visits faces of tetrahedra in label order; the first time an
//! unlabeled tetrahedron is reached it takes the next label, with vertex
//! labels chosen so that the gluing that reached it reads as the identity.
//! The token for a face is `0` if open, and otherwise `1 + 24·m + p` with `m`
//! the new label of the neighbour and `p` the index of the gluing
//! permutation in new labels. Open faces make the construction apply to
//! partial triangulations as well.
//!
//! Text form: `n.` followed by the tokens in base 62 (`0-9A-Za-z`), each
//! with the fixed width needed for `24·n + 1` values, so that string order
//! agrees with token order.

use std::cmp::Ordering;

use crate::error::{Error, ParseError, Result};
use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

const ALPHABET: &[u8; 62] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

fn token_width(n: usize) -> usize {
    let values = 24 * n + 1;
    if values <= 62 {
        1
    } else if values <= 62 * 62 {
        2
    } else {
        3
    }
}

/// Result of canonicalization: the minimal token sequence and every root
/// achieving it.
struct Canonical {
    tokens: Vec<u32>,
    roots: Vec<(usize, Perm4)>,
}

/// Produces the token sequence for one root, comparing on the fly against
/// `best`. Returns `Ordering::Greater` as soon as the sequence is known to
/// be larger (output then incomplete).
fn run_root(
    t: &Triangulation,
    root: usize,
    root_perm: Perm4,
    best: Option<&[u32]>,
    out: &mut Vec<u32>,
    new_of: &mut [usize],
    tau: &mut Vec<Perm4>,
    order: &mut Vec<usize>,
) -> Ordering {
    let n = t.num_tets();
    out.clear();
    order.clear();
    tau.clear();
    new_of.iter_mut().for_each(|x| *x = usize::MAX);
    new_of[root] = 0;
    order.push(root);
    tau.push(root_perm);
    let mut state = Ordering::Equal;
    let mut k = 0;
    while k < order.len() {
        let old = order[k];
        let tk = tau[k];
        for f in 0..4 {
            let tok = match t.gluing(old, tk.apply(f)) {
                None => 0,
                Some(Gluing { tet, perm }) => {
                    if new_of[tet] == usize::MAX {
                        new_of[tet] = order.len();
                        order.push(tet);
                        tau.push(perm.compose(tk));
                    }
                    let m = new_of[tet];
                    let p = tau[m].inverse().compose(perm).compose(tk);
                    1 + 24 * m as u32 + p.index() as u32
                }
            };
            if state == Ordering::Equal {
                if let Some(b) = best {
                    state = tok.cmp(&b[out.len()]);
                    if state == Ordering::Greater {
                        return state;
                    }
                }
            }
            out.push(tok);
        }
        k += 1;
    }
    debug_assert_eq!(order.len(), n);
    if best.is_none() {
        Ordering::Less
    } else {
        state
    }
}

fn canonicalize(t: &Triangulation) -> Result<Canonical> {
    if !t.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = t.num_tets();
    let mut best: Vec<u32> = Vec::new();
    let mut have_best = false;
    let mut roots = Vec::new();
    let mut buf = Vec::with_capacity(4 * n);
    let mut new_of = vec![usize::MAX; n];
    let mut tau = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        for p in Perm4::all() {
            let best_ref = if have_best { Some(&best[..]) } else { None };
            match run_root(t, root, p, best_ref, &mut buf, &mut new_of, &mut tau, &mut order) {
                Ordering::Less => {
                    std::mem::swap(&mut best, &mut buf);
                    have_best = true;
                    roots.clear();
                    roots.push((root, p));
                }
                Ordering::Equal => roots.push((root, p)),
                Ordering::Greater => {}
            }
        }
    }
    Ok(Canonical { tokens: best, roots })
}

fn encode(n: usize, tokens: &[u32]) -> String {
    let w = token_width(n);
    let mut s = format!("{n}.");
    for &tok in tokens {
        let mut digits = [0u8; 3];
        let mut x = tok as usize;
        for d in (0..w).rev() {
            digits[d] = ALPHABET[x % 62];
            x /= 62;
        }
        s.push_str(std::str::from_utf8(&digits[..w]).unwrap());
    }
    s
}

/// Signature of a connected, possibly partial, triangulation.
pub fn signature(t: &Triangulation) -> Result<String> {
    let c = canonicalize(t)?;
    Ok(encode(t.num_tets(), &c.tokens))
}

/// Signature of a closed connected triangulation.
pub fn canonical_signature(t: &Triangulation) -> Result<String> {
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    signature(t)
}

/// Number of combinatorial automorphisms (roots attaining the minimum).
pub fn automorphism_count(t: &Triangulation) -> Result<usize> {
    Ok(canonicalize(t)?.roots.len())
}

/// Triangulation in canonical labeling (the decoded signature).
pub fn canonical_form(t: &Triangulation) -> Result<Triangulation> {
    decode_signature(&signature(t)?).map_err(Error::from)
}

/// Rebuilds the triangulation a signature was computed from, in canonical
/// labeling.
pub fn decode_signature(sig: &str) -> Result<Triangulation, ParseError> {
    let bad = |m: &str| ParseError::new(format!("bad signature `{sig}`: {m}"));
    let (n, body) = sig.split_once('.').ok_or_else(|| bad("missing `.`"))?;
    let n: usize = n.parse().map_err(|_| bad("bad count"))?;
    if n == 0 {
        return Err(bad("no tetrahedra"));
    }
    let w = token_width(n);
    let body = body.as_bytes();
    if body.len() != 4 * n * w {
        return Err(bad("wrong length"));
    }
    let mut tokens = Vec::with_capacity(4 * n);
    for chunk in body.chunks(w) {
        let mut x = 0usize;
        for &c in chunk {
            let d = ALPHABET
                .iter()
                .position(|&a| a == c)
                .ok_or_else(|| bad("bad character"))?;
            x = 62 * x + d;
        }
        tokens.push(x);
    }
    let mut t = Triangulation::new(n);
    let mut seen = 1;
    for k in 0..n {
        if k >= seen {
            return Err(bad("disconnected"));
        }
        for f in 0..4 {
            let tok = tokens[4 * k + f];
            if tok == 0 {
                if t.gluing(k, f).is_some() {
                    return Err(bad("inconsistent open face"));
                }
                continue;
            }
            let m = (tok - 1) / 24;
            let p = Perm4::from_index((tok - 1) % 24);
            if m > seen || m >= n {
                return Err(bad("label out of order"));
            }
            if m == seen {
                if p != Perm4::IDENTITY {
                    return Err(bad("new tetrahedron not reached by identity"));
                }
                seen += 1;
            }
            match t.gluing(k, f) {
                Some(g) if g.tet == m && g.perm == p => {}
                Some(_) => return Err(bad("inconsistent gluing")),
                None => {
                    let f2 = p.apply(f);
                    if (k, f) == (m, f2) || t.gluing(m, f2).is_some() {
                        return Err(bad("inconsistent gluing"));
                    }
                    t.glue(k, f, m, p).map_err(|_| bad("self-glued face"))?;
                }
            }
        }
    }
    if signature(&t).ok().as_deref() != Some(sig) {
        return Err(bad("not canonical"));
    }
    Ok(t)
}

/// A map from source to destination tetrahedra with vertex permutations,
/// compatible with all gluings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub images: Vec<(usize, Perm4)>,
    pub degree: usize,
}

impl Homomorphism {
    /// Whether every source gluing maps onto the corresponding destination
    /// gluing.
    pub fn verify(&self, src: &Triangulation, dst: &Triangulation) -> bool {
        for t in 0..src.num_tets() {
            let (d, pi) = self.images[t];
            for f in 0..4 {
                let (Some(g), Some(h)) = (src.gluing(t, f), dst.gluing(d, pi.apply(f))) else {
                    return false;
                };
                let (d2, pi2) = self.images[g.tet];
                if h.tet != d2 || h.perm.compose(pi) != pi2.compose(g.perm) {
                    return false;
                }
            }
        }
        true
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            images: self
                .images
                .iter()
                .map(|&(d, pi)| {
                    let (e, rho) = other.images[d];
                    (e, rho.compose(pi))
                })
                .collect(),
            degree: self.degree * other.degree,
        }
    }
}

fn propagate(src: &Triangulation, dst: &Triangulation, d0: usize, p0: Perm4) -> Option<Vec<(usize, Perm4)>> {
    let n = src.num_tets();
    let mut img: Vec<Option<(usize, Perm4)>> = vec![None; n];
    img[0] = Some((d0, p0));
    let mut stack = vec![0];
    while let Some(t) = stack.pop() {
        let (d, pi) = img[t].unwrap();
        for f in 0..4 {
            let g = src.gluing(t, f)?;
            let h = dst.gluing(d, pi.apply(f))?;
            let want = (h.tet, h.perm.compose(pi).compose(g.perm.inverse()));
            match img[g.tet] {
                None => {
                    img[g.tet] = Some(want);
                    stack.push(g.tet);
                }
                Some(x) if x != want => return None,
                _ => {}
            }
        }
    }
    img.into_iter().collect()
}

/// All combinatorial homomorphisms from `src` to `dst` (closed, connected).
pub fn find_homomorphisms(src: &Triangulation, dst: &Triangulation) -> Vec<Homomorphism> {
    let (ns, nd) = (src.num_tets(), dst.num_tets());
    if ns == 0 || nd == 0 || ns % nd != 0 || !src.is_closed() || !dst.is_closed() {
        return Vec::new();
    }
    if !src.is_connected() || !dst.is_connected() {
        return Vec::new();
    }
    if let (Ok(cs), Ok(cd)) = (src.num_cusps(), dst.num_cusps()) {
        if cs < cd {
            return Vec::new();
        }
    }
    if dst.is_orientable().unwrap_or(false) && !src.is_orientable().unwrap_or(false) {
        return Vec::new();
    }
    let orders = |t: &Triangulation| -> Vec<usize> {
        let mut o: Vec<usize> = t.edge_classes().iter().map(|e| e.order).collect();
        o.sort_unstable();
        o
    };
    let (os, od) = (orders(src), orders(dst));
    if !os.iter().all(|a| od.iter().any(|b| a % b == 0)) {
        return Vec::new();
    }
    let degree = ns / nd;
    let mut out = Vec::new();
    for d in 0..nd {
        for p in Perm4::all() {
            if let Some(images) = propagate(src, dst, d, p) {
                out.push(Homomorphism { images, degree });
            }
        }
    }
    out
}

/// All isomorphisms between two closed connected triangulations.
pub fn find_isomorphisms(a: &Triangulation, b: &Triangulation) -> Vec<Homomorphism> {
    if a.num_tets() != b.num_tets() {
        return Vec::new();
    }
    find_homomorphisms(a, b)
}

/// Whether the manifold has isometries not induced by combinatorial
/// automorphisms of the tessellation: the canonical cell decomposition
/// (given by its canonical retriangulation) has more symmetries.
pub fn hides_symmetries(ctt: &Triangulation, canonical: &Triangulation) -> Result<bool> {
    Ok(automorphism_count(canonical)? > automorphism_count(ctt)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_tet() -> Triangulation {
        // Faces 0↔1 and 2↔3 with odd-free gluings; just a closed 1-tet example.
        let mut t = Triangulation::new(1);
        t.glue(0, 0, 0, "1023".parse().unwrap()).unwrap();
        t.glue(0, 2, 0, "0132".parse().unwrap()).unwrap();
        t
    }

    #[test]
    fn token_widths() {
        assert_eq!(token_width(1), 1);
        assert_eq!(token_width(2), 1);
        assert_eq!(token_width(3), 2);
        assert_eq!(token_width(160), 2);
        assert_eq!(token_width(161), 3);
    }

    #[test]
    fn round_trip() {
        let t = one_tet();
        let s = canonical_signature(&t).unwrap();
        let d = decode_signature(&s).unwrap();
        assert_eq!(canonical_signature(&d).unwrap(), s);
        assert!(find_isomorphisms(&t, &d).len() > 0);
    }

    #[test]
    fn partial_signatures() {
        let t = Triangulation::new(1);
        assert_eq!(signature(&t).unwrap(), "1.0000");
        assert_eq!(canonical_signature(&t), Err(Error::NotClosed));
        assert_eq!(automorphism_count(&t).unwrap(), 24);
        assert!(decode_signature("1.000").is_err());
        assert!(decode_signature("x").is_err());
    }
}
