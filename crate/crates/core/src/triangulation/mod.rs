//! Ideal triangulations: tetrahedra glued along faces by vertex permutations.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of
//! face `(t₁, f₁)` to `(t₂, f₂)` is a permutation `p` with `p(f₁) = f₂`
//! that sends the vertex labels of `t₁` to those of `t₂`. Odd gluing
//! permutations are the orientation-compatible ones: a triangulation is
//! orientable exactly when the tetrahedra can be signed so that odd gluings
//! join equal signs and even gluings join opposite signs.
//!
//! Triangulations may be partial (open faces allowed). Shapes are an optional
//! decoration: when present, `shapes[t]` is the shape parameter of
//! tetrahedron `t` on its edges 01 and 23.

mod moves;
mod skeleton;

pub use skeleton::{
    edge_index, EdgeClass, EdgeEnd, FaceClass, FacePairingGraph, LinkSurface, VertexClass, EDGE_VERTICES,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::numbers::ShapeNum;
use crate::perm::Perm4;

/// Gluing of a face: target tetrahedron and vertex permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    adj: Vec<[Option<Gluing>; 4]>,
    shapes: Option<Vec<ShapeNum>>,
}

impl Triangulation {
    /// `n` tetrahedra, all faces open.
    pub fn new(n: usize) -> Self {
        Triangulation {
            adj: vec![[None; 4]; n],
            shapes: None,
        }
    }

    pub fn num_tets(&self) -> usize {
        self.adj.len()
    }

    pub fn add_tet(&mut self) -> usize {
        self.adj.push([None; 4]);
        if let Some(s) = &mut self.shapes {
            s.push(ShapeNum::regular());
        }
        self.adj.len() - 1
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.adj[tet][face]
    }

    /// Glues face `(t1, f1)` to face `(t2, perm(f1))` of `t2`. Both faces must
    /// be open; a face cannot be glued to itself.
    pub fn glue(&mut self, t1: usize, f1: usize, t2: usize, perm: Perm4) -> Result<()> {
        let f2 = perm.apply(f1);
        if t1 == t2 && f1 == f2 {
            return Err(Error::SelfGluingForbidden { tet: t1, face: f1 });
        }
        assert!(
            self.adj[t1][f1].is_none() && self.adj[t2][f2].is_none(),
            "gluing an already glued face"
        );
        self.adj[t1][f1] = Some(Gluing { tet: t2, perm });
        self.adj[t2][f2] = Some(Gluing {
            tet: t1,
            perm: perm.inverse(),
        });
        Ok(())
    }

    /// Removes the gluing of `(tet, face)` (and its partner).
    pub fn unglue(&mut self, tet: usize, face: usize) {
        if let Some(g) = self.adj[tet][face].take() {
            self.adj[g.tet][g.perm.apply(face)] = None;
        }
    }

    pub fn is_closed(&self) -> bool {
        self.adj.iter().all(|a| a.iter().all(|g| g.is_some()))
    }

    /// Open faces as `(tet, face)`, in index order.
    pub fn open_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, a) in self.adj.iter().enumerate() {
            for (f, g) in a.iter().enumerate() {
                if g.is_none() {
                    out.push((t, f));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_tets();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in self.adj[t].iter().flatten() {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn shapes(&self) -> Option<&[ShapeNum]> {
        self.shapes.as_deref()
    }

    pub fn set_shapes(&mut self, shapes: Option<Vec<ShapeNum>>) {
        if let Some(s) = &shapes {
            assert_eq!(s.len(), self.num_tets());
        }
        self.shapes = shapes;
    }

    pub fn with_shapes(mut self, shapes: Vec<ShapeNum>) -> Self {
        self.set_shapes(Some(shapes));
        self
    }

    /// Renumbers tetrahedra and vertex labels: old tetrahedron `t` becomes
    /// `tet_map[t]`, and its vertex `v` becomes vertex `vert_map[t](v)` there.
    /// Shapes are carried along when every vertex map is even (odd relabelings
    /// conjugate the shape, so they are only allowed without shapes).
    pub fn relabel(&self, tet_map: &[usize], vert_map: &[Perm4]) -> Triangulation {
        let n = self.num_tets();
        let mut adj = vec![[None; 4]; n];
        for t in 0..n {
            let nt = tet_map[t];
            let vm = vert_map[t];
            for f in 0..4 {
                if let Some(g) = self.adj[t][f] {
                    let perm = vert_map[g.tet].compose(g.perm).compose(vm.inverse());
                    adj[nt][vm.apply(f)] = Some(Gluing {
                        tet: tet_map[g.tet],
                        perm,
                    });
                }
            }
        }
        let shapes = self.shapes.as_ref().map(|s| {
            let mut out = vec![ShapeNum::zero(); n];
            for t in 0..n {
                out[tet_map[t]] = relabel_shape(&s[t], vert_map[t]);
            }
            out
        });
        Triangulation { adj, shapes }
    }
}

/// Shape of a tetrahedron after renaming its vertices by `vm`. Even
/// permutations cycle the three edge parameters. Odd ones reverse the
/// labeling's orientation, and since shapes are measured against each
/// tetrahedron's own labeling the mirror `conj(1/z)` is returned.
pub fn relabel_shape(z: &ShapeNum, vm: Perm4) -> ShapeNum {
    let params = z.params().expect("nondegenerate shape");
    // New edge 01 is old edge {vm⁻¹(0), vm⁻¹(1)}.
    let inv = vm.inverse();
    let (a, b) = (inv.apply(0), inv.apply(1));
    let k = skeleton::edge_param_index(a, b);
    if vm.is_odd() {
        params[k].inv().expect("nonzero").conj()
    } else {
        params[k].clone()
    }
}

impl fmt::Display for Triangulation {
    /// First line: number of tetrahedra; then one line per tetrahedron with
    /// four entries `target:perm` or `-` for open faces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.num_tets())?;
        for a in &self.adj {
            let parts: Vec<String> = a
                .iter()
                .map(|g| match g {
                    Some(g) => format!("{}:{}", g.tet, g.perm),
                    None => "-".to_string(),
                })
                .collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Triangulation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| ParseError::new("empty triangulation"))?
            .parse()
            .map_err(|_| ParseError::new("bad tetrahedron count"))?;
        let mut adj = vec![[None; 4]; n];
        for (t, row) in adj.iter_mut().enumerate() {
            let line = lines
                .next()
                .ok_or_else(|| ParseError::new(format!("missing line for tetrahedron {t}")))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != 4 {
                return Err(ParseError::new(format!("tetrahedron {t}: expected 4 entries")));
            }
            for (f, e) in entries.iter().enumerate() {
                if *e == "-" {
                    continue;
                }
                let (target, perm) = e
                    .split_once(':')
                    .ok_or_else(|| ParseError::new(format!("bad entry `{e}`")))?;
                let target: usize = target
                    .parse()
                    .map_err(|_| ParseError::new(format!("bad entry `{e}`")))?;
                if target >= n {
                    return Err(ParseError::new(format!("target {target} out of range")));
                }
                row[f] = Some(Gluing {
                    tet: target,
                    perm: perm.parse()?,
                });
            }
        }
        if lines.next().is_some() {
            return Err(ParseError::new("trailing lines"));
        }
        for (t, row) in adj.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                let f2 = g.perm.apply(f);
                if g.tet == t && f2 == f {
                    return Err(ParseError::new(format!("face ({t}, {f}) glued to itself")));
                }
                let back = adj[g.tet][f2];
                if back
                    != Some(Gluing {
                        tet: t,
                        perm: g.perm.inverse(),
                    })
                {
                    return Err(ParseError::new(format!("gluing of ({t}, {f}) is not symmetric")));
                }
            }
        }
        Ok(Triangulation { adj, shapes: None })
    }
}
