//! Test oracles shared by the integration tests.
#![allow(dead_code)]

use tetcensus::{Perm4, Triangulation};

fn isosig_value(c: char) -> usize {
    match c {
        'a'..='z' => c as usize - 'a' as usize,
        'A'..='Z' => c as usize - 'A' as usize + 26,
        '0'..='9' => c as usize - '0' as usize + 52,
        '+' => 62,
        '-' => 63,
        _ => panic!("bad isosig character {c}"),
    }
}

/// Decodes a Regina isomorphism signature (single-character fields only).
/// Written independently of the library's own signature code.
pub fn decode_isosig(sig: &str) -> Triangulation {
    let chars: Vec<usize> = sig.chars().map(isosig_value).collect();
    let n = chars[0];
    assert!(n < 63);
    let mut pos = 1;
    let mut t = Triangulation::new(n);
    // Facet types, three per character, low bits first. A join uses up two
    // facets and a boundary facet one.
    let mut types = Vec::new();
    let mut used = 0;
    while used < 4 * n {
        let c = chars[pos];
        pos += 1;
        for k in 0..3 {
            if used >= 4 * n {
                break;
            }
            let ty = (c >> (2 * k)) & 3;
            used += if ty == 0 { 1 } else { 2 };
            types.push(ty);
        }
    }
    let joins = types.iter().filter(|&&ty| ty == 2).count();
    let dests: Vec<usize> = chars[pos..pos + joins].to_vec();
    pos += joins;
    let perms: Vec<usize> = chars[pos..pos + joins].to_vec();
    pos += joins;
    assert_eq!(pos, chars.len(), "trailing characters in {sig}");
    let table: Vec<Perm4> = {
        let mut all: Vec<[u8; 4]> = Vec::new();
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let v = [a, b, c, d];
                        let mut seen = [false; 4];
                        if v.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                            all.push(v);
                        }
                    }
                }
            }
        }
        all.into_iter().map(|v| Perm4::from_images(v).unwrap()).collect()
    };
    let mut next_new = 1;
    let (mut ti, mut k) = (0, 0);
    let mut open = vec![[true; 4]; n];
    for s in 0..n {
        for f in 0..4 {
            if !open[s][f] {
                continue;
            }
            let ty = types[ti];
            ti += 1;
            open[s][f] = false;
            match ty {
                0 => {}
                1 => {
                    t.glue(s, f, next_new, Perm4::IDENTITY).unwrap();
                    open[next_new][f] = false;
                    next_new += 1;
                }
                _ => {
                    let p = table[perms[k]];
                    t.glue(s, f, dests[k], p).unwrap();
                    open[dests[k]][p.apply(f)] = false;
                    k += 1;
                }
            }
        }
    }
    t
}

/// The CTT census table: name and Regina isosig.
pub const TABLE: &[(&str, &str)] = &[
    ("otet02_0000", "cPcbbbdxm"),
    ("otet02_0001", "cPcbbbiht"),
    ("otet04_0000", "eLMkbbdddemdxi"),
    ("otet04_0001", "eLMkbcddddedde"),
    ("otet04_0002", "eLMkbcdddhxqdu"),
    ("otet04_0003", "eLMkbcdddhxqlm"),
    ("otet05_0000", "fLLQcbcedeeloxset"),
    ("otet05_0001", "fLLQcbdeedemnamjp"),
    ("otet06_0000", "gLLPQccdfeefqjsqqjj"),
    ("otet06_0001", "gLLPQccdfeffqjsqqsj"),
    ("otet06_0002", "gLLPQceefeffpupuupa"),
    ("otet06_0003", "gLMzQbcdefffhxqqxha"),
    ("otet06_0004", "gLMzQbcdefffhxqqxxq"),
    ("otet06_0005", "gLvQQadfedefjqqasjj"),
    ("otet06_0006", "gLvQQbefeeffedimipt"),
    ("otet07_0000", "hLvAQkadfdgggfjxqnjnbw"),
];

pub fn table_triangulation(name: &str) -> Triangulation {
    decode_isosig(TABLE.iter().find(|e| e.0 == name).unwrap().1)
}

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use tetcensus::geometry::CuspCrossSection;
use tetcensus::numbers::ShapeNum;

pub fn to_c(z: &ShapeNum) -> Complex64 {
    let a = z.a.to_string().parse::<Fraction>().unwrap().0;
    let b = z.b.to_string().parse::<Fraction>().unwrap().0;
    Complex64::new(a, b * 3f64.sqrt())
}

struct Fraction(f64);

impl std::str::FromStr for Fraction {
    type Err = std::num::ParseFloatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.split_once('/') {
            Some((p, q)) => Fraction(p.parse::<f64>()? / q.parse::<f64>()?),
            None => Fraction(s.parse()?),
        })
    }
}

/// A vertex position on the Riemann sphere.
#[derive(Clone, Copy, Debug)]
pub enum Pos {
    Inf,
    At(Complex64),
}

/// Places the vertices of a tetrahedron with shape `z` so that labels
/// `labels[i]` sit at the known positions `known[i]`; returns all four.
fn place(z: Complex64, labels: [usize; 3], known: [Pos; 3]) -> [Pos; 4] {
    // Möbius maps as 2×2 complex matrices.
    let std = [Pos::Inf, Pos::At(0.0.into()), Pos::At(1.0.into()), Pos::At(z)];
    let hom = |p: Pos| match p {
        Pos::Inf => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        Pos::At(c) => (c, Complex64::new(1.0, 0.0)),
    };
    let det = |a: (Complex64, Complex64), b: (Complex64, Complex64)| a.0 * b.1 - b.0 * a.1;
    // Map sending x1, x2, x3 to 0, 1, ∞.
    let to_std = |x1: Pos, x2: Pos, x3: Pos| {
        let (a, b, c) = (hom(x1), hom(x2), hom(x3));
        let d23 = det(b, c);
        let d21 = det(b, a);
        [[d23 * a.1, -d23 * a.0], [d21 * c.1, -d21 * c.0]]
    };
    let f = to_std(std[labels[0]], std[labels[1]], std[labels[2]]);
    let g = to_std(known[0], known[1], known[2]);
    let ginv = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
    let mut out = [Pos::Inf; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let (x, y) = hom(std[k]);
        let (u, v) = (f[0][0] * x + f[0][1] * y, f[1][0] * x + f[1][1] * y);
        let (p, q) = (ginv[0][0] * u + ginv[0][1] * v, ginv[1][0] * u + ginv[1][1] * v);
        *slot = if q.norm() < 1e-12 * p.norm() {
            Pos::Inf
        } else {
            Pos::At(p / q)
        };
    }
    out
}

/// Light-cone vector of the horoball at vertex `k` of a placed tetrahedron,
/// recovered from one cusp-triangle side length.
fn horo_vector(pos: &[Pos; 4], k: usize, cs: &CuspCrossSection, tet: usize) -> Vector4<f64> {
    let others: Vec<usize> = (0..4).filter(|&x| x != k).collect();
    // Side between the geodesics to q and r lies in the face opposite the
    // remaining vertex.
    let (q, r, u) = (others[0], others[1], others[2]);
    let e = cs.length(tet, k, u).to_f64();
    match pos[k] {
        Pos::Inf => {
            let (Pos::At(a), Pos::At(b)) = (pos[q], pos[r]) else {
                unreachable!()
            };
            let h = (a - b).norm() / e;
            Vector4::new(h, h, 0.0, 0.0)
        }
        Pos::At(p) => {
            let d = match (pos[q], pos[r]) {
                (Pos::At(a), Pos::At(b)) => e * (a - p).norm() * (b - p).norm() / (a - b).norm(),
                (Pos::Inf, Pos::At(b)) | (Pos::At(b), Pos::Inf) => e * (b - p).norm(),
                _ => unreachable!(),
            };
            let n2 = p.norm_sqr();
            Vector4::new(n2 + 1.0, n2 - 1.0, 2.0 * p.re, 2.0 * p.im) / d
        }
    }
}

/// `1 − ⟨n, v_w⟩` where `⟨n, ·⟩ = 1` is the Minkowski hyperplane through the
/// lifted vertices of `tet` and `v_w` is the lifted apex of the neighbour
/// across `face`. Positive means the face is concave.
pub fn concavity(t: &Triangulation, shapes: &[ShapeNum], cs: &CuspCrossSection, tet: usize, face: usize) -> f64 {
    let za = to_c(&shapes[tet]);
    let pa = [Pos::Inf, Pos::At(0.0.into()), Pos::At(1.0.into()), Pos::At(za)];
    let g = t.gluing(tet, face).unwrap();
    let zb = to_c(&shapes[g.tet]);
    let zb = if g.perm.is_odd() { zb } else { zb.conj() };
    let fl: Vec<usize> = (0..4).filter(|&j| j != face).collect();
    let pb = place(
        zb,
        [g.perm.apply(fl[0]), g.perm.apply(fl[1]), g.perm.apply(fl[2])],
        [pa[fl[0]], pa[fl[1]], pa[fl[2]]],
    );
    let eta = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
    let mut m = Matrix4::zeros();
    for k in 0..4 {
        let v = eta * horo_vector(&pa, k, cs, tet);
        m.set_row(k, &v.transpose());
    }
    let n = m.lu().solve(&Vector4::repeat(1.0)).unwrap();
    let w = horo_vector(&pb, g.perm.apply(face), cs, g.tet);
    1.0 - (eta * w).dot(&n)
}

/// All connected closed triangulations with `n` tetrahedra, one per choice
/// of face matching and gluing permutations (many are isomorphic).
pub fn all_closed(n: usize) -> Vec<Triangulation> {
    fn rec(t: &mut Triangulation, out: &mut Vec<Triangulation>) {
        let Some(&(a, f)) = t.open_faces().first() else {
            if t.is_connected() {
                out.push(t.clone());
            }
            return;
        };
        for (b, g) in t.open_faces() {
            if (b, g) == (a, f) {
                continue;
            }
            for p in Perm4::all().filter(|p| p.apply(f) == g) {
                t.glue(a, f, b, p).unwrap();
                rec(t, out);
                t.unglue(a, f);
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Triangulation::new(n), &mut out);
    out
}

/// Brute-force canonical form: the smallest gluing table over every
/// relabeling of tetrahedra and vertices.
pub fn brute_form(t: &Triangulation) -> Vec<(usize, usize)> {
    let n = t.num_tets();
    let perms: Vec<Perm4> = Perm4::all().collect();
    let orders: Vec<Vec<usize>> = if n == 1 {
        vec![vec![0]]
    } else {
        vec![vec![0, 1], vec![1, 0]]
    };
    let mut best: Option<Vec<(usize, usize)>> = None;
    for sigma in &orders {
        let mut choice = vec![0usize; n];
        loop {
            let pi: Vec<Perm4> = choice.iter().map(|&i| perms[i]).collect();
            let mut table = vec![(0, 0); 4 * n];
            for old in 0..n {
                for f in 0..4 {
                    let g = t.gluing(old, f).unwrap();
                    let new_perm = pi[g.tet].compose(g.perm).compose(pi[old].inverse());
                    table[4 * sigma[old] + pi[old].apply(f)] = (sigma[g.tet], new_perm.index());
                }
            }
            if best.as_ref().map_or(true, |b| table < *b) {
                best = Some(table);
            }
            let mut k = 0;
            while k < n && choice[k] == 23 {
                choice[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            choice[k] += 1;
        }
    }
    best.unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`
/// with `D_k` the gcd of all `k × k` minors.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                    .collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}
