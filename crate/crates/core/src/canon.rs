//! The canonical cell decomposition read off a proto-canonical triangulation,
//! its canonical retriangulation, and isometry signatures.
//!
//! Faces with negative tilt are opaque (they lie in 2-cells), faces with
//! zero tilt are transparent (interior to 3-cells). Everything here is
//! combinatorial; the geometry only enters through the opacities.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::geometry::{canonize, CanonizeOptions, Canonized, Opacity, TiltTable};
use crate::perm::Perm4;
use crate::signature::canonical_signature;
use crate::triangulation::{edge_index, EdgeEnd, Triangulation};

/// Role of an edge class in the cell decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// No incident opaque face.
    InsideCell,
    /// Exactly two incident opaque faces, belonging to one 2-cell.
    InsideFace,
    /// An edge of the decomposition.
    OneCell,
}

/// A polygonal 2-cell, triangulated by opaque faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    /// Face classes making up the polygon.
    pub faces: Vec<usize>,
    /// Number of boundary sides.
    pub sides: usize,
    /// The 3-cells on either side (possibly equal).
    pub cells: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct CellDecomposition {
    triangulation: Triangulation,
    /// 3-cell of every tetrahedron.
    pub cell_of_tet: Vec<usize>,
    pub num_cells: usize,
    pub two_cells: Vec<TwoCell>,
    /// Indexed as [`Triangulation::edge_classes`].
    pub edge_kinds: Vec<EdgeKind>,
    opaque: Vec<bool>,
    /// For each opaque face class, its side lying in the first side
    /// component of its 2-cell.
    a_side: Vec<(usize, usize)>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

fn face_edges(face: usize) -> [(usize, usize); 3] {
    let v: Vec<usize> = (0..4).filter(|&x| x != face).collect();
    [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
}

fn third_of_face(face: usize, a: usize, b: usize) -> usize {
    (0..4).find(|&x| x != face && x != a && x != b).unwrap()
}

fn perm(images: [usize; 4]) -> Perm4 {
    Perm4::from_images(images.map(|x| x as u8)).unwrap()
}

impl CellDecomposition {
    /// The proto-canonical triangulation the cells were read from.
    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn num_opaque_faces(&self) -> usize {
        self.opaque.iter().filter(|&&o| o).count()
    }

    /// Every 3-cell is a tetrahedron and every 2-cell a triangle.
    pub fn is_simplicial(&self) -> bool {
        self.num_cells == self.triangulation.num_tets() && self.two_cells.iter().all(|c| c.sides == 3)
    }

    /// Number of tetrahedra in every 3-cell.
    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_cells];
        for &c in &self.cell_of_tet {
            sizes[c] += 1;
        }
        sizes
    }

    fn opaque_at(&self, index: &[[usize; 4]], e: &EdgeEnd) -> bool {
        self.opaque[index[e.tet][e.exit_face()]]
    }

    /// Walks around the edge of `start` until the exit face is opaque.
    fn next_opaque(&self, index: &[[usize; 4]], start: EdgeEnd) -> Result<EdgeEnd> {
        let t = &self.triangulation;
        let mut e = start;
        for _ in 0..=4 * t.num_tets() {
            if self.opaque_at(index, &e) {
                return Ok(e);
            }
            e = e.step(t).ok_or(Error::NotClosed)?;
        }
        Err(Error::InconsistentCells { edge: start.edge() })
    }
}

/// Reads the canonical cell decomposition off a proto-canonical
/// triangulation with its tilts.
pub fn assemble_cells(t: &Triangulation, tilts: &TiltTable) -> Result<CellDecomposition> {
    if !t.is_closed() {
        return Err(Error::NotClosed);
    }
    if let Some(i) = tilts.opacity.iter().position(|&o| o == Opacity::Positive) {
        return Err(Error::NotProtoCanonical {
            face: i,
            tilt: tilts.face_tilts[i].to_string(),
        });
    }
    let n = t.num_tets();
    let faces = t.face_classes();
    let index = t.face_class_index();
    let opaque: Vec<bool> = tilts.opacity.iter().map(|&o| o == Opacity::Opaque).collect();

    let mut cells = Dsu::new(n);
    for (i, f) in faces.iter().enumerate() {
        if !opaque[i] {
            cells.union(f.a.0, f.b.0);
        }
    }
    let mut cell_id = HashMap::new();
    let cell_of_tet: Vec<usize> = (0..n)
        .map(|x| {
            let r = cells.find(x);
            let next = cell_id.len();
            *cell_id.entry(r).or_insert(next)
        })
        .collect();

    // Sides of opaque faces, merged across edges inside 2-cells.
    let side = |tet: usize, face: usize| 4 * tet + face;
    let mut sides = Dsu::new(4 * n);
    let classes = t.edge_classes();
    let mut edge_kinds = Vec::with_capacity(classes.len());
    for (ci, c) in classes.iter().enumerate() {
        let k = c.walk.len();
        let hits: Vec<usize> = (0..k)
            .filter(|&i| opaque[index[c.walk[i].tet][c.walk[i].exit_face()]])
            .collect();
        edge_kinds.push(match hits.len() {
            0 => EdgeKind::InsideCell,
            1 => return Err(Error::InconsistentCells { edge: ci }),
            2 => {
                for (i, j) in [(hits[0], hits[1]), (hits[1], hits[0])] {
                    let entry = c.walk[(i + 1) % k];
                    let exit = c.walk[j];
                    sides.union(side(entry.tet, entry.perm.apply(2)), side(exit.tet, exit.exit_face()));
                }
                EdgeKind::InsideFace
            }
            _ => EdgeKind::OneCell,
        });
    }

    let (_, edge_index_of) = t.edge_classes_indexed();
    let mut groups: HashMap<(usize, usize), usize> = HashMap::new();
    let mut two_cells: Vec<TwoCell> = Vec::new();
    let mut a_side = vec![(usize::MAX, usize::MAX); faces.len()];
    for (i, f) in faces.iter().enumerate() {
        if !opaque[i] {
            continue;
        }
        let (ra, rb) = (sides.find(side(f.a.0, f.a.1)), sides.find(side(f.b.0, f.b.1)));
        if ra == rb {
            let (x, y) = face_edges(f.a.1)[0];
            return Err(Error::InconsistentCells {
                edge: edge_index_of[f.a.0][edge_index(x, y)],
            });
        }
        let key = (ra.min(rb), ra.max(rb));
        a_side[i] = if ra == key.0 { f.a } else { f.b };
        let b = if ra == key.0 { f.b } else { f.a };
        let g = *groups.entry(key).or_insert_with(|| {
            two_cells.push(TwoCell {
                faces: Vec::new(),
                sides: 0,
                cells: [cell_of_tet[a_side[i].0], cell_of_tet[b.0]],
            });
            two_cells.len() - 1
        });
        let (tet, face) = a_side[i];
        let boundary = face_edges(face)
            .iter()
            .filter(|&&(x, y)| edge_kinds[edge_index_of[tet][edge_index(x, y)]] == EdgeKind::OneCell)
            .count();
        two_cells[g].faces.push(i);
        two_cells[g].sides += boundary;
    }
    if let Some(ci) = two_cells.iter().position(|c| c.sides < 3) {
        let f = faces[two_cells[ci].faces[0]].a;
        let (x, y) = face_edges(f.1)[0];
        return Err(Error::InconsistentCells {
            edge: edge_index_of[f.0][edge_index(x, y)],
        });
    }
    Ok(CellDecomposition {
        triangulation: t.clone(),
        cell_of_tet,
        num_cells: cell_id.len(),
        two_cells,
        edge_kinds,
        opaque,
        a_side,
    })
}

/// One tetrahedron of the retriangulation: a boundary side `(p, q)` of an
/// opaque face, in the labels of its first side `(tet, face)`. Its vertices
/// are 0 = `p`, 1 = `q`, 2 = the center of the 3-cell on the first side,
/// 3 = the center on the second side.
#[derive(Clone, Copy, Debug)]
struct Side {
    tet: usize,
    face: usize,
    p: usize,
    q: usize,
}

struct Retriangulator<'a> {
    cells: &'a CellDecomposition,
    index: Vec<[usize; 4]>,
    edge_class: Vec<[usize; 6]>,
    sides: Vec<Side>,
    lookup: HashMap<(usize, usize), usize>,
}

impl Retriangulator<'_> {
    /// The retriangulation tetrahedron of boundary edge `(x, y)` of the
    /// opaque face side `(tet, face)`, where `x` lands among its vertices 0
    /// and 1, and whether `(tet, face)` is the first side.
    fn locate(&self, tet: usize, face: usize, x: usize, y: usize) -> Result<(usize, usize, bool)> {
        let t = &self.cells.triangulation;
        let f = self.index[tet][face];
        let first = self.cells.a_side[f] == (tet, face);
        let (x, y) = if first {
            (x, y)
        } else {
            let g = t.gluing(tet, face).ok_or(Error::NotClosed)?.perm;
            (g.apply(x), g.apply(y))
        };
        let id = *self
            .lookup
            .get(&(f, edge_index(x, y)))
            .ok_or(Error::InconsistentCells { edge: edge_index(x, y) })?;
        Ok((id, usize::from(x > y), first))
    }

    /// Gluing of the axial face of `id` opposite vertex `1 - end`: rotate
    /// about the ideal vertex at `end` through the polygon to the next
    /// boundary side.
    fn axial(&self, id: usize, end: usize) -> Result<(usize, Perm4)> {
        let s = self.sides[id];
        let (mut tet, mut face) = (s.tet, s.face);
        let (mut pivot, mut other) = if end == 0 { (s.p, s.q) } else { (s.q, s.p) };
        for _ in 0..=4 * self.sides.len() {
            let w = third_of_face(face, pivot, other);
            if self.cells.edge_kinds[self.edge_class[tet][edge_index(pivot, w)]] == EdgeKind::OneCell {
                let (y, xv, first) = self.locate(tet, face, pivot, w)?;
                if !first {
                    return Err(Error::InconsistentCells {
                        edge: edge_index(pivot, w),
                    });
                }
                let mut img = [0, 0, 2, 3];
                img[end] = xv;
                img[1 - end] = 1 - xv;
                return Ok((y, perm(img)));
            }
            let start = EdgeEnd {
                tet,
                perm: perm([pivot, w, face, other]),
            };
            let e = self.cells.next_opaque(&self.index, start)?;
            tet = e.tet;
            face = e.exit_face();
            pivot = e.perm.apply(0);
            other = e.perm.apply(1);
        }
        Err(Error::InconsistentCells {
            edge: edge_index(s.p, s.q),
        })
    }

    /// Gluing of the lateral face of `id` on side `k` (0 = first side, the
    /// face opposite vertex 3; 1 = second side, opposite vertex 2): the next
    /// 2-cell around the boundary edge within that 3-cell.
    fn lateral(&self, id: usize, k: usize) -> Result<(usize, Perm4)> {
        let t = &self.cells.triangulation;
        let s = self.sides[id];
        let (tet, face, p, q) = if k == 0 {
            (s.tet, s.face, s.p, s.q)
        } else {
            let g = t.gluing(s.tet, s.face).ok_or(Error::NotClosed)?;
            (g.tet, g.perm.apply(s.face), g.perm.apply(s.p), g.perm.apply(s.q))
        };
        let w = third_of_face(face, p, q);
        let start = EdgeEnd {
            tet,
            perm: perm([p, q, face, w]),
        };
        let e = self.cells.next_opaque(&self.index, start)?;
        let (y, xv, first) = self.locate(e.tet, e.exit_face(), e.perm.apply(0), e.perm.apply(1))?;
        let here = 2 + k;
        let there = if first { 2 } else { 3 };
        let mut img = [xv, 1 - xv, 0, 0];
        img[here] = there;
        img[5 - here] = 5 - there;
        Ok((y, perm(img)))
    }
}

/// The canonical retriangulation: the suspension of every 2-cell between
/// the centers of the 3-cells on its two sides, split along the axis into one
/// tetrahedron per side of the polygon.
pub fn retriangulate(cells: &CellDecomposition) -> Result<Triangulation> {
    let t = &cells.triangulation;
    let (_, eidx) = t.edge_classes_indexed();
    let mut sides = Vec::new();
    let mut lookup = HashMap::new();
    for cell in &cells.two_cells {
        for &f in &cell.faces {
            let (tet, face) = cells.a_side[f];
            for (p, q) in face_edges(face) {
                if cells.edge_kinds[eidx[tet][edge_index(p, q)]] == EdgeKind::OneCell {
                    lookup.insert((f, edge_index(p, q)), sides.len());
                    sides.push(Side { tet, face, p, q });
                }
            }
        }
    }
    let r = Retriangulator {
        cells,
        index: t.face_class_index(),
        edge_class: eidx,
        sides,
        lookup,
    };
    let mut out = Triangulation::new(r.sides.len());
    for id in 0..r.sides.len() {
        let wanted = [
            (1, r.axial(id, 0)?),
            (0, r.axial(id, 1)?),
            (3, r.lateral(id, 0)?),
            (2, r.lateral(id, 1)?),
        ];
        for (face, (y, pi)) in wanted {
            let bad = Error::InconsistentCells {
                edge: edge_index(r.sides[id].p, r.sides[id].q),
            };
            match out.gluing(id, face) {
                Some(g) if g.tet == y && g.perm == pi => {}
                Some(_) => return Err(bad),
                None if out.gluing(y, pi.apply(face)).is_some() => return Err(bad),
                None => out.glue(id, face, y, pi).map_err(|_| bad)?,
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// The canonical decomposition is a triangulation.
    Simplicial,
    Retriangulated,
}

/// Complete isometry invariant of a tetrahedral manifold, written
/// `S:<signature>` or `R:<signature>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsometrySignature {
    pub regime: Regime,
    pub signature: String,
}

impl fmt::Display for IsometrySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.regime {
            Regime::Simplicial => "S",
            Regime::Retriangulated => "R",
        };
        write!(f, "{tag}:{}", self.signature)
    }
}

impl FromStr for IsometrySignature {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let regime = match s.get(..2) {
            Some("S:") => Regime::Simplicial,
            Some("R:") => Regime::Retriangulated,
            _ => return Err(ParseError::new(format!("bad isometry signature `{s}`"))),
        };
        Ok(IsometrySignature {
            regime,
            signature: s[2..].to_string(),
        })
    }
}

/// Everything computed on the way from a CTT to its isometry signature.
#[derive(Clone, Debug)]
pub struct CanonicalData {
    pub canonized: Canonized,
    pub cells: CellDecomposition,
    /// The triangulation whose signature is the isometry signature.
    pub canonical: Triangulation,
    pub signature: IsometrySignature,
}

/// Canonizes a CTT and builds its canonical decomposition.
pub fn canonical_data(t: &Triangulation, opts: &CanonizeOptions) -> Result<CanonicalData> {
    let canonized = canonize(t, opts)?;
    let cells = assemble_cells(&canonized.triangulation, &canonized.tilts)?;
    let (regime, canonical) = if cells.is_simplicial() {
        let mut plain = canonized.triangulation.clone();
        plain.set_shapes(None);
        (Regime::Simplicial, plain)
    } else {
        (Regime::Retriangulated, retriangulate(&cells)?)
    };
    let signature = IsometrySignature {
        regime,
        signature: canonical_signature(&canonical)?,
    };
    Ok(CanonicalData {
        canonized,
        cells,
        canonical,
        signature,
    })
}

pub fn isometry_signature(t: &Triangulation, opts: &CanonizeOptions) -> Result<IsometrySignature> {
    Ok(canonical_data(t, opts)?.signature)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_text_round_trip() {
        for s in ["S:2.abc", "R:10.xyz"] {
            let sig: IsometrySignature = s.parse().unwrap();
            assert_eq!(sig.to_string(), s);
        }
        assert!("X:1.a".parse::<IsometrySignature>().is_err());
    }

    #[test]
    fn dsu_merges() {
        let mut d = Dsu::new(5);
        d.union(3, 1);
        d.union(4, 3);
        assert_eq!(d.find(4), d.find(1));
        assert_ne!(d.find(0), d.find(1));
    }
}
