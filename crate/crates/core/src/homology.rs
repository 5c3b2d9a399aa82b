//! First homology from the dual presentation, via Smith normal form.
//!
//! The dual 2-complex of an ideal triangulation is a spine of the manifold:
//! one vertex per tetrahedron, one edge per face class (oriented from its
//! smaller side to its larger side) and one 2-cell per edge class. Its
//! fundamental group is generated by the face classes, with one relator per
//! edge class (the faces crossed by a small loop around the edge) and the
//! edges of a spanning tree killed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// A finitely generated abelian group `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with
/// `d₁ | d₂ | … | d_k` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for AbelianGroup {
    /// `Z^r + Z/d1 + ...`; `Z` for rank one and `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix: the nonzero
/// invariant factors `d₁ | d₂ | …`, all positive.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && pivot.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for i in t..rows {
                    let v = &q * &m[i][t];
                    m[i][j] -= v;
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // The pivot must divide the rest of the block.
                let bad = (t + 1..rows).find_map(|i| {
                    (t + 1..cols)
                        .find(|&j| !(&m[i][j] % &m[t][t]).is_zero())
                        .map(|j| (i, j))
                });
                match bad {
                    None => break,
                    Some((i, _)) => {
                        // Add row i to row t and continue reducing.
                        for j in t..cols {
                            let v = m[i][j].clone();
                            m[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Cokernel of the map `Z^rows → Z^cols` given by the matrix rows.
pub fn cokernel(matrix: &[Vec<BigInt>], cols: usize) -> AbelianGroup {
    let diag = smith_normal_form(matrix);
    AbelianGroup {
        rank: cols - diag.len(),
        torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// H₁ of a closed connected triangulation.
pub fn first_homology(t: &Triangulation) -> Result<AbelianGroup> {
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    if !t.is_connected() {
        return Err(Error::NotConnected);
    }
    let faces = t.face_classes();
    let index = t.face_class_index();
    let nf = faces.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for class in t.edge_classes() {
        let mut row = vec![BigInt::zero(); nf];
        for e in &class.walk {
            let f = e.exit_face();
            let k = index[e.tet][f];
            if faces[k].a == (e.tet, f) {
                row[k] += 1;
            } else {
                row[k] -= 1;
            }
        }
        rows.push(row);
    }
    // Spanning tree of the face-pairing graph.
    let n = t.num_tets();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for f in 0..4 {
            let g = t.gluing(x, f).unwrap();
            if !seen[g.tet] {
                seen[g.tet] = true;
                stack.push(g.tet);
                let mut row = vec![BigInt::zero(); nf];
                row[index[x][f]] = BigInt::one();
                rows.push(row);
            }
        }
    }
    Ok(cokernel(&rows, nf))
}

/// Whether H₁ is free abelian of rank equal to the number of cusps. Only
/// defined for orientable triangulations.
pub fn is_homology_link(t: &Triangulation) -> Result<bool> {
    if !t.is_orientable()? {
        return Err(Error::NotOrientable);
    }
    let h = first_homology(t)?;
    Ok(h.torsion.is_empty() && h.rank == t.num_cusps()?)
}
