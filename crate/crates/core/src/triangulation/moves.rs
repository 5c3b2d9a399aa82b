//! 2-3 and 3-2 moves, with exact transport of shapes.
//!
//! Both moves are described by a small configuration of labelled points: the
//! five ideal vertices of a triangular bipyramid. Each removed and each new
//! tetrahedron lists the point at each of its vertex labels; gluings between
//! new tetrahedra and to the rest of the triangulation are read off from
//! shared points. When shapes are present, the points are placed in
//! P¹(Q(√−3)) and new shapes are cross-ratios of their positions.

use std::collections::HashMap;

use super::{Gluing, Triangulation};
use crate::error::{Error, Result};
use crate::numbers::ShapeNum;
use crate::perm::Perm4;

/// A point of the projective line in homogeneous coordinates `(x : y)`.
#[derive(Clone, Debug)]
struct Point(ShapeNum, ShapeNum);

impl Point {
    fn finite(z: ShapeNum) -> Point {
        Point(z, ShapeNum::one())
    }

    fn infinity() -> Point {
        Point(ShapeNum::one(), ShapeNum::zero())
    }
}

/// `D(P, Q) = p₁q₂ − p₂q₁`, proportional to the difference of the points.
fn det(a: &Point, b: &Point) -> ShapeNum {
    &(&a.0 * &b.1) - &(&b.0 * &a.1)
}

/// Shape on edge 01 of a tetrahedron whose vertices sit at `pts`.
fn shape_of(pts: [&Point; 4]) -> Result<ShapeNum> {
    // z₀₁ = D(P3,P1)·D(P2,P0) / (D(P3,P0)·D(P2,P1))
    let num = &det(pts[3], pts[1]) * &det(pts[2], pts[0]);
    let den = &det(pts[3], pts[0]) * &det(pts[2], pts[1]);
    if num.is_zero() || den.is_zero() {
        return Err(Error::FlatOrNegative);
    }
    num.div(&den)
}

/// 2×2 matrix acting on homogeneous coordinates.
#[derive(Clone, Debug)]
struct Mobius([[ShapeNum; 2]; 2]);

impl Mobius {
    /// The map sending `x1, x2, x3` to `0, 1, ∞`.
    fn to_standard(x1: &Point, x2: &Point, x3: &Point) -> Mobius {
        let d23 = det(x2, x3);
        let d21 = det(x2, x1);
        Mobius([[&d23 * &x1.1, -&(&d23 * &x1.0)], [&d21 * &x3.1, -&(&d21 * &x3.0)]])
    }

    fn apply(&self, p: &Point) -> Point {
        let m = &self.0;
        Point(
            &(&m[0][0] * &p.0) + &(&m[0][1] * &p.1),
            &(&m[1][0] * &p.0) + &(&m[1][1] * &p.1),
        )
    }

    /// Projective inverse (the adjugate).
    fn inverse(&self) -> Mobius {
        let m = &self.0;
        Mobius([[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]])
    }

    fn then(&self, other: &Mobius) -> Mobius {
        // other ∘ self
        let a = &other.0;
        let b = &self.0;
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mobius([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Standard positions `∞, 0, 1, z` of a tetrahedron with shape `z`.
fn standard_points(z: &ShapeNum) -> [Point; 4] {
    [
        Point::infinity(),
        Point::finite(ShapeNum::zero()),
        Point::finite(ShapeNum::one()),
        Point::finite(z.clone()),
    ]
}

/// Places a tetrahedron with shape `z` so that its vertices `labels[i]` land
/// on the known points `known[i]` (i = 0, 1, 2), and returns the position of
/// its remaining vertex `free`.
fn place_fourth(z: &ShapeNum, labels: [usize; 3], known: [&Point; 3], free: usize) -> Point {
    let std = standard_points(z);
    let from = Mobius::to_standard(&std[labels[0]], &std[labels[1]], &std[labels[2]]);
    let to = Mobius::to_standard(known[0], known[1], known[2]).inverse();
    from.then(&to).apply(&std[free])
}

/// A local configuration: removed tetrahedra and their replacements, each
/// given as the point at every vertex label.
struct Config {
    removed: Vec<usize>,
    old_points: Vec<[usize; 4]>,
    new_points: Vec<[usize; 4]>,
}

fn perm_between(from: &[usize; 4], to: &[usize; 4], opp_from: usize, opp_to: usize) -> Perm4 {
    // Label i of `from` maps to the label of `to` holding the same point; the
    // unmatched vertex opposite the shared face maps to the opposite one.
    let mut img = [0u8; 4];
    for i in 0..4 {
        img[i] = if i == opp_from {
            opp_to as u8
        } else {
            to.iter().position(|&p| p == from[i]).unwrap() as u8
        };
    }
    Perm4::from_images(img).expect("consistent configuration")
}

impl Triangulation {
    fn apply_config(&self, cfg: &Config, new_shapes: Option<Vec<ShapeNum>>) -> Triangulation {
        let n = self.num_tets();
        let mut new_index = vec![usize::MAX; n];
        let mut k = 0;
        for (t, slot) in new_index.iter_mut().enumerate() {
            if !cfg.removed.contains(&t) {
                *slot = k;
                k += 1;
            }
        }
        let base = k;
        let total = base + cfg.new_points.len();
        let mut adj = vec![[None; 4]; total];

        // Old boundary faces of removed tetrahedra → (new tet, face, φ) with
        // φ sending new labels to old labels.
        let mut boundary: HashMap<(usize, usize), (usize, usize, Perm4)> = HashMap::new();
        for (ni, np) in cfg.new_points.iter().enumerate() {
            for f in 0..4 {
                let face_pts: Vec<usize> = (0..4).filter(|&i| i != f).map(|i| np[i]).collect();
                // Internal gluing to another new tetrahedron?
                let mut internal = None;
                for (nj, mp) in cfg.new_points.iter().enumerate() {
                    if nj == ni {
                        continue;
                    }
                    if face_pts.iter().all(|p| mp.contains(p)) {
                        let g = (0..4).find(|&i| !face_pts.contains(&mp[i])).unwrap();
                        internal = Some((nj, g));
                    }
                }
                if let Some((nj, g)) = internal {
                    let perm = perm_between(np, &cfg.new_points[nj], f, g);
                    adj[base + ni][f] = Some(Gluing { tet: base + nj, perm });
                    continue;
                }
                let (oi, g) = cfg
                    .old_points
                    .iter()
                    .enumerate()
                    .find_map(|(oi, op)| {
                        if face_pts.iter().all(|p| op.contains(p)) {
                            Some((oi, (0..4).find(|&i| !face_pts.contains(&op[i])).unwrap()))
                        } else {
                            None
                        }
                    })
                    .expect("every new face is internal or old");
                let phi = perm_between(np, &cfg.old_points[oi], f, g);
                boundary.insert((cfg.removed[oi], g), (base + ni, f, phi));
            }
        }

        for t in 0..n {
            if cfg.removed.contains(&t) {
                continue;
            }
            for f in 0..4 {
                if let Some(g) = self.gluing(t, f) {
                    let h = g.perm.apply(f);
                    adj[new_index[t]][f] = Some(match boundary.get(&(g.tet, h)) {
                        Some(&(nt, _, phi)) => Gluing {
                            tet: nt,
                            perm: phi.inverse().compose(g.perm),
                        },
                        None => Gluing {
                            tet: new_index[g.tet],
                            perm: g.perm,
                        },
                    });
                }
            }
        }
        for (&(u, h), &(nt, nf, phi)) in &boundary {
            let Some(g) = self.gluing(u, h) else { continue };
            let h2 = g.perm.apply(h);
            adj[nt][nf] = Some(match boundary.get(&(g.tet, h2)) {
                Some(&(nt2, _, phi2)) => Gluing {
                    tet: nt2,
                    perm: phi2.inverse().compose(g.perm).compose(phi),
                },
                None => Gluing {
                    tet: new_index[g.tet],
                    perm: g.perm.compose(phi),
                },
            });
        }

        let shapes = new_shapes.map(|ns| {
            let old = self.shapes().unwrap();
            let mut out: Vec<ShapeNum> = (0..n)
                .filter(|t| !cfg.removed.contains(t))
                .map(|t| old[t].clone())
                .collect();
            out.extend(ns);
            out
        });
        Triangulation { adj, shapes }
    }

    /// 2-3 move across face `face` of tetrahedron `tet`: the two tetrahedra
    /// sharing the face are replaced by three around a new edge. The new
    /// tetrahedra are appended after the surviving old ones.
    pub fn two_three(&self, tet: usize, face: usize) -> Result<Triangulation> {
        self.two_three_impl(tet, face, true)
    }

    /// 2-3 move that admits flat or negatively oriented new tetrahedra, as
    /// an intermediate step of a larger move.
    pub(crate) fn two_three_unchecked(&self, tet: usize, face: usize) -> Result<Triangulation> {
        self.two_three_impl(tet, face, false)
    }

    fn two_three_impl(&self, tet: usize, face: usize, positive: bool) -> Result<Triangulation> {
        let g = self.gluing(tet, face).ok_or(Error::InvalidFace { tet, face })?;
        if g.tet == tet {
            return Err(Error::InvalidFace { tet, face });
        }
        let alpha = face;
        let p = g.perm;
        // Points 0..3: vertices of A by label; point 4: apex of B.
        let a_pts = [0, 1, 2, 3];
        let mut b_pts = [0usize; 4];
        for j in 0..4 {
            b_pts[p.apply(j)] = if j == alpha { 4 } else { j };
        }
        let mut new_points = Vec::new();
        for k in (0..4).filter(|&k| k != alpha) {
            let mut np = a_pts;
            np[k] = 4;
            new_points.push(np);
        }
        let cfg = Config {
            removed: vec![tet, g.tet],
            old_points: vec![a_pts, b_pts],
            new_points,
        };
        let shapes = match self.shapes() {
            None => None,
            Some(s) => {
                let mut pos: Vec<Point> = standard_points(&s[tet]).to_vec();
                let face_labels: Vec<usize> = (0..4).filter(|&j| j != alpha).collect();
                // An orientation-reversing gluing shows B mirrored in A's frame.
                let zb = if p.is_odd() { s[g.tet].clone() } else { s[g.tet].conj() };
                let apex = place_fourth(
                    &zb,
                    [
                        p.apply(face_labels[0]),
                        p.apply(face_labels[1]),
                        p.apply(face_labels[2]),
                    ],
                    [&pos[face_labels[0]], &pos[face_labels[1]], &pos[face_labels[2]]],
                    p.apply(alpha),
                );
                pos.push(apex);
                Some(new_shapes(&cfg.new_points, &pos, positive)?)
            }
        };
        Ok(self.apply_config(&cfg, shapes))
    }

    /// 3-2 move around an order-3 edge class with three distinct tetrahedra,
    /// given by one of its incidences `(tet, edge)`. The two new tetrahedra
    /// are appended after the surviving old ones.
    pub fn three_two(&self, tet: usize, edge: usize) -> Result<Triangulation> {
        self.three_two_impl(tet, edge, true)
    }

    /// 3-2 move that admits flat or negatively oriented new tetrahedra.
    pub(crate) fn three_two_unchecked(&self, tet: usize, edge: usize) -> Result<Triangulation> {
        self.three_two_impl(tet, edge, false)
    }

    fn three_two_impl(&self, tet: usize, edge: usize, positive: bool) -> Result<Triangulation> {
        let (classes, index) = self.edge_classes_indexed();
        let ci = index[tet][edge];
        let class = &classes[ci];
        let walk = &class.walk;
        if class.open
            || class.order != 3
            || walk.len() != 3
            || walk[0].tet == walk[1].tet
            || walk[1].tet == walk[2].tet
            || walk[0].tet == walk[2].tet
        {
            return Err(Error::InvalidEdge { edge: ci });
        }
        // Start from an even state so that the new labels keep orientations.
        let start = if walk[0].perm.is_odd() {
            walk[0].reversed()
        } else {
            walk[0]
        };
        let mut states = vec![start];
        for _ in 0..2 {
            states.push(states.last().unwrap().step(self).unwrap());
        }
        // Points: 0 top, 1 bottom, 2 + i equator vertex e_i = σ_i(2).
        let eq = |i: usize| 2 + (i % 3);
        let old_points: Vec<[usize; 4]> = states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut pts = [0usize; 4];
                pts[s.perm.apply(0)] = 0;
                pts[s.perm.apply(1)] = 1;
                pts[s.perm.apply(2)] = eq(i);
                pts[s.perm.apply(3)] = eq(i + 2);
                pts
            })
            .collect();
        let new_points = vec![[2, 3, 4, 0], [3, 2, 4, 1]];
        let cfg = Config {
            removed: states.iter().map(|s| s.tet).collect(),
            old_points,
            new_points,
        };
        let shapes = match self.shapes() {
            None => None,
            Some(s) => {
                let s0 = states[0];
                let std = standard_points(&s[s0.tet]);
                let mut pos: Vec<Option<Point>> = vec![None; 5];
                for i in 0..4 {
                    pos[cfg.old_points[0][i]] = Some(std[i].clone());
                }
                // Tetrahedron 1 holds top, bottom, e_1 and e_0; e_1 is new.
                let s1 = states[1];
                let op = &cfg.old_points[1];
                let lab = |pt: usize| op.iter().position(|&x| x == pt).unwrap();
                let z1 = if s1.perm.is_odd() {
                    s[s1.tet].conj()
                } else {
                    s[s1.tet].clone()
                };
                let e1 = place_fourth(
                    &z1,
                    [lab(0), lab(1), lab(2)],
                    [
                        pos[0].as_ref().unwrap(),
                        pos[1].as_ref().unwrap(),
                        pos[2].as_ref().unwrap(),
                    ],
                    lab(3),
                );
                pos[3] = Some(e1);
                let pos: Vec<Point> = pos.into_iter().map(Option::unwrap).collect();
                Some(new_shapes(&cfg.new_points, &pos, positive)?)
            }
        };
        Ok(self.apply_config(&cfg, shapes))
    }
}

fn new_shapes(new_points: &[[usize; 4]], pos: &[Point], positive: bool) -> Result<Vec<ShapeNum>> {
    new_points
        .iter()
        .map(|np| {
            let z = shape_of([&pos[np[0]], &pos[np[1]], &pos[np[2]], &pos[np[3]]])?;
            if z.is_one() {
                return Err(Error::DegenerateShape);
            }
            if positive && z.im_sign() <= 0 {
                return Err(Error::FlatOrNegative);
            }
            Ok(z)
        })
        .collect()
}

impl Triangulation {
    /// 2-0 move: the two distinct tetrahedra around an edge of order two
    /// are removed and their outer faces glued to each other. Both are flat
    /// in any solution of the gluing equations, so the other shapes stay.
    pub fn two_zero(&self, tet: usize, edge: usize) -> Result<Triangulation> {
        let (classes, index) = self.edge_classes_indexed();
        let ci = index[tet][edge];
        let class = &classes[ci];
        let bad = Err(Error::InvalidEdge { edge: ci });
        if class.open || class.order != 2 || class.walk[0].tet == class.walk[1].tet {
            return bad;
        }
        let (ea, eb) = (class.walk[0], class.walk[1]);
        let (a, b) = (ea.tet, eb.tet);
        let s = ea.perm;
        let phi = self.gluing(a, s.apply(3)).unwrap().perm;
        let psi = self.gluing(a, s.apply(2)).unwrap().perm;
        // Flattening A onto B: the edge ends stay, the other two vertices
        // follow the face gluings.
        let m = match Perm4::from_images([
            eb.perm.apply(0) as u8,
            eb.perm.apply(1) as u8,
            phi.apply(s.apply(2)) as u8,
            psi.apply(s.apply(3)) as u8,
        ]) {
            Some(p) => p.compose(s.inverse()),
            None => return bad,
        };
        if m.apply(s.apply(0)) != eb.perm.apply(0) || m.apply(s.apply(1)) != eb.perm.apply(1) {
            return bad;
        }
        let mut pairs = Vec::new();
        for k in 0..2 {
            let fa = s.apply(k);
            let fb = m.apply(fa);
            let (Some(ga), Some(gb)) = (self.gluing(a, fa), self.gluing(b, fb)) else {
                return bad;
            };
            if ga.tet == a || ga.tet == b || gb.tet == a || gb.tet == b {
                return bad;
            }
            // X → A → B → Y.
            let x = (ga.tet, ga.perm.apply(fa));
            pairs.push((x, gb.tet, gb.perm.compose(m).compose(ga.perm.inverse())));
        }
        let n = self.num_tets();
        let keep: Vec<usize> = (0..n).filter(|&t| t != a && t != b).collect();
        let mut new_index = vec![usize::MAX; n];
        for (k, &t) in keep.iter().enumerate() {
            new_index[t] = k;
        }
        let mut out = Triangulation::new(keep.len());
        for &t in &keep {
            for f in 0..4 {
                let g = self.gluing(t, f).unwrap();
                if g.tet != a && g.tet != b {
                    out.adj[new_index[t]][f] = Some(Gluing {
                        tet: new_index[g.tet],
                        perm: g.perm,
                    });
                }
            }
        }
        for ((xt, xf), yt, p) in pairs {
            out.adj[new_index[xt]][xf] = Some(Gluing {
                tet: new_index[yt],
                perm: p,
            });
            out.adj[new_index[yt]][p.apply(xf)] = Some(Gluing {
                tet: new_index[xt],
                perm: p.inverse(),
            });
        }
        if !out.is_closed() {
            return bad;
        }
        out.shapes = self.shapes().map(|s| keep.iter().map(|&t| s[t].clone()).collect());
        Ok(out)
    }
}
