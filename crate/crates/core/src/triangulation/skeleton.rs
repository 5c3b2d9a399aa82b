//! Edge, face and vertex classes; orientability; the face-pairing graph.

use super::{Gluing, Triangulation};
use crate::error::{Error, Result};
use crate::perm::Perm4;

/// Vertex pairs of the six edges of a tetrahedron, by edge index.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edge index of the edge joining vertices `a != b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// Which of `(z, z′, z″)` sits on the edge joining `a` and `b`.
pub fn edge_param_index(a: usize, b: usize) -> usize {
    match edge_index(a, b) {
        0 | 5 => 0,
        1 | 4 => 1,
        _ => 2,
    }
}

/// One step of a walk around an edge: tetrahedron `tet` and a permutation
/// `perm` with `perm(0), perm(1)` the edge's endpoints; the walk leaves the
/// tetrahedron through face `perm(3)` and arrived through face `perm(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeEnd {
    pub tet: usize,
    pub perm: Perm4,
}

impl EdgeEnd {
    pub fn edge(&self) -> usize {
        edge_index(self.perm.apply(0), self.perm.apply(1))
    }

    pub fn exit_face(&self) -> usize {
        self.perm.apply(3)
    }

    /// The same incidence walked the other way round.
    pub fn reversed(&self) -> EdgeEnd {
        EdgeEnd {
            tet: self.tet,
            perm: self.perm.compose(Perm4::transposition(2, 3)),
        }
    }

    /// Crosses the exit face, if it is glued.
    pub fn step(&self, t: &Triangulation) -> Option<EdgeEnd> {
        let g = t.gluing(self.tet, self.exit_face())?;
        Some(self.cross(g))
    }

    pub(crate) fn cross(&self, g: Gluing) -> EdgeEnd {
        let s = self.perm;
        let p = g.perm;
        let img = [
            p.apply(s.apply(0)) as u8,
            p.apply(s.apply(1)) as u8,
            p.apply(s.apply(3)) as u8,
            p.apply(s.apply(2)) as u8,
        ];
        EdgeEnd {
            tet: g.tet,
            perm: Perm4::from_images(img).unwrap(),
        }
    }
}

/// An equivalence class of tetrahedron edges.
#[derive(Clone, Debug)]
pub struct EdgeClass {
    /// Incidences in walk order. For an open class the walk starts just
    /// inside one open face and ends at the other; for a closed class it is a
    /// full cycle (which passes every incidence twice when the class is
    /// orientation-reversing).
    pub walk: Vec<EdgeEnd>,
    /// Number of distinct tetrahedron edges in the class.
    pub order: usize,
    pub open: bool,
    /// The class identifies some tetrahedron edge with itself reversed.
    pub orientation_reversing: bool,
}

impl EdgeClass {
    /// For an open class, the two open faces at its ends as `(tet, face)`.
    pub fn open_faces(&self) -> Option<((usize, usize), (usize, usize))> {
        if !self.open {
            return None;
        }
        let last = self.walk.last().unwrap();
        let first = self.walk[0].reversed();
        Some(((last.tet, last.exit_face()), (first.tet, first.exit_face())))
    }

    /// Distinct `(tet, edge)` incidences, in walk order of first visit.
    pub fn incidences(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(self.order);
        for e in &self.walk {
            let k = (e.tet, e.edge());
            if !out.contains(&k) {
                out.push(k);
            }
        }
        out
    }
}

/// A pair of glued faces (`a < b` lexicographically, or equal for a face
/// glued to itself, which never happens in valid triangulations).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceClass {
    pub a: (usize, usize),
    pub b: (usize, usize),
    /// Gluing permutation from the `a` side to the `b` side.
    pub perm: Perm4,
}

/// Classification of a closed surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkSurface {
    Sphere,
    Torus,
    KleinBottle,
    ProjectivePlane,
    Other { euler: i64, orientable: bool },
}

/// An ideal vertex: the set of tetrahedron corners identified by gluings.
#[derive(Clone, Debug)]
pub struct VertexClass {
    pub corners: Vec<(usize, usize)>,
    pub euler: i64,
    pub orientable: bool,
    pub surface: LinkSurface,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// A 4-regular multigraph with a node per tetrahedron and an edge per glued
/// face pair (loops allowed).
#[derive(Clone, Debug)]
pub struct FacePairingGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl FacePairingGraph {
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.nodes];
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            if a == b {
                return false;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for s in 0..self.nodes {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let c = color[x].unwrap();
                for &y in &adj[x] {
                    match color[y] {
                        None => {
                            color[y] = Some(!c);
                            stack.push(y);
                        }
                        Some(d) if d == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

impl Triangulation {
    /// Walks around the edge starting at `start` until it returns (closed
    /// class) or reaches an open face. Returns the states visited and whether
    /// the walk closed up.
    fn walk_forward(&self, start: EdgeEnd) -> (Vec<EdgeEnd>, bool) {
        let mut out = vec![start];
        let mut cur = start;
        loop {
            match cur.step(self) {
                None => return (out, false),
                Some(next) if next == start => return (out, true),
                Some(next) => {
                    out.push(next);
                    cur = next;
                }
            }
        }
    }

    /// The edge class through edge `edge` of tetrahedron `tet`.
    pub fn edge_class_of(&self, tet: usize, edge: usize) -> EdgeClass {
        let (a, b) = EDGE_VERTICES[edge];
        let (c, d) = other_two(a, b);
        let start = EdgeEnd {
            tet,
            perm: Perm4::from_images([a as u8, b as u8, c as u8, d as u8]).unwrap(),
        };
        let (fwd, closed) = self.walk_forward(start);
        let walk = if closed {
            fwd
        } else {
            let (back, _) = self.walk_forward(start.reversed());
            let mut walk: Vec<EdgeEnd> = back[1..].iter().rev().map(|e| e.reversed()).collect();
            walk.extend(fwd);
            walk
        };
        let mut seen: Vec<(usize, usize, usize)> = Vec::with_capacity(walk.len());
        let mut reversing = false;
        let mut order = 0;
        for e in &walk {
            let (x, y) = (e.perm.apply(0), e.perm.apply(1));
            if let Some(&(_, sx, _)) = seen
                .iter()
                .find(|(t, u, v)| *t == e.tet && edge_index(*u, *v) == edge_index(x, y))
            {
                if sx != x {
                    reversing = true;
                }
            } else {
                seen.push((e.tet, x, y));
                order += 1;
            }
        }
        EdgeClass {
            walk,
            order,
            open: !closed,
            orientation_reversing: reversing,
        }
    }

    /// All edge classes, ordered by their first `(tet, edge)` incidence.
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        self.edge_classes_indexed().0
    }

    /// Edge classes together with the class index of every `(tet, edge)`.
    pub fn edge_classes_indexed(&self) -> (Vec<EdgeClass>, Vec<[usize; 6]>) {
        let n = self.num_tets();
        let mut index = vec![[usize::MAX; 6]; n];
        let mut classes = Vec::new();
        for t in 0..n {
            for e in 0..6 {
                if index[t][e] != usize::MAX {
                    continue;
                }
                let c = self.edge_class_of(t, e);
                for (tt, ee) in c.incidences() {
                    index[tt][ee] = classes.len();
                }
                classes.push(c);
            }
        }
        (classes, index)
    }

    /// Glued face pairs, ordered by their smaller side.
    pub fn face_classes(&self) -> Vec<FaceClass> {
        let mut out = Vec::new();
        for t in 0..self.num_tets() {
            for f in 0..4 {
                if let Some(g) = self.gluing(t, f) {
                    let other = (g.tet, g.perm.apply(f));
                    if (t, f) <= other {
                        out.push(FaceClass {
                            a: (t, f),
                            b: other,
                            perm: g.perm,
                        });
                    }
                }
            }
        }
        out
    }

    /// Face class index of every `(tet, face)` (`usize::MAX` for open faces).
    pub fn face_class_index(&self) -> Vec<[usize; 4]> {
        let mut index = vec![[usize::MAX; 4]; self.num_tets()];
        for (i, fc) in self.face_classes().iter().enumerate() {
            index[fc.a.0][fc.a.1] = i;
            index[fc.b.0][fc.b.1] = i;
        }
        index
    }

    /// Ideal vertex classes with their link surfaces. Requires a closed
    /// triangulation.
    pub fn vertex_links(&self) -> Result<Vec<VertexClass>> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        let n = self.num_tets();
        let corner = |t: usize, v: usize| 4 * t + v;
        let mut uf = UnionFind::new(4 * n);
        // Link vertices: (tet, corner v, edge towards w), indexed 16t + 4v + w.
        let mut luf = UnionFind::new(16 * n);
        for t in 0..n {
            for f in 0..4 {
                let g = self.gluing(t, f).unwrap();
                for v in (0..4).filter(|&v| v != f) {
                    uf.union(corner(t, v), corner(g.tet, g.perm.apply(v)));
                    for w in (0..4).filter(|&w| w != f && w != v) {
                        luf.union(16 * t + 4 * v + w, 16 * g.tet + 4 * g.perm.apply(v) + g.perm.apply(w));
                    }
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
        for t in 0..n {
            for v in 0..4 {
                let r = uf.find(corner(t, v));
                let k = match roots.iter().position(|&x| x == r) {
                    Some(k) => k,
                    None => {
                        roots.push(r);
                        members.push(Vec::new());
                        roots.len() - 1
                    }
                };
                members[k].push((t, v));
            }
        }
        let mut out = Vec::new();
        for corners in members {
            let faces = corners.len() as i64;
            let edges = 3 * faces / 2;
            let mut lverts: Vec<usize> = Vec::new();
            for &(t, v) in &corners {
                for w in (0..4).filter(|&w| w != v) {
                    let r = luf.find(16 * t + 4 * v + w);
                    if !lverts.contains(&r) {
                        lverts.push(r);
                    }
                }
            }
            let euler = lverts.len() as i64 - edges + faces;
            let orientable = self.corners_orientable(&corners);
            let surface = match (euler, orientable) {
                (2, true) => LinkSurface::Sphere,
                (0, true) => LinkSurface::Torus,
                (0, false) => LinkSurface::KleinBottle,
                (1, false) => LinkSurface::ProjectivePlane,
                (euler, orientable) => LinkSurface::Other { euler, orientable },
            };
            out.push(VertexClass {
                corners,
                euler,
                orientable,
                surface,
            });
        }
        Ok(out)
    }

    fn corners_orientable(&self, corners: &[(usize, usize)]) -> bool {
        let mut sign: std::collections::HashMap<(usize, usize), bool> = Default::default();
        let mut stack = vec![corners[0]];
        sign.insert(corners[0], true);
        while let Some((t, v)) = stack.pop() {
            let s = sign[&(t, v)];
            for f in (0..4).filter(|&f| f != v) {
                let g = self.gluing(t, f).unwrap();
                let other = (g.tet, g.perm.apply(v));
                let want = if g.perm.is_odd() { s } else { !s };
                match sign.get(&other) {
                    None => {
                        sign.insert(other, want);
                        stack.push(other);
                    }
                    Some(&x) if x != want => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Number of ideal vertices (cusps).
    pub fn num_cusps(&self) -> Result<usize> {
        Ok(self.vertex_links()?.len())
    }

    /// A sign per tetrahedron making every gluing parity-consistent, if one
    /// exists. Requires a connected triangulation; open faces are ignored.
    pub fn orientation(&self) -> Result<Option<Vec<bool>>> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let n = self.num_tets();
        let mut sign = vec![None; n];
        if n == 0 {
            return Ok(Some(Vec::new()));
        }
        sign[0] = Some(true);
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            let s = sign[t].unwrap();
            for g in (0..4).filter_map(|f| self.gluing(t, f)) {
                let want = if g.perm.is_odd() { s } else { !s };
                match sign[g.tet] {
                    None => {
                        sign[g.tet] = Some(want);
                        stack.push(g.tet);
                    }
                    Some(x) if x != want => return Ok(None),
                    _ => {}
                }
            }
        }
        Ok(Some(sign.into_iter().map(Option::unwrap).collect()))
    }

    pub fn is_orientable(&self) -> Result<bool> {
        Ok(self.orientation()?.is_some())
    }

    pub fn face_pairing_graph(&self) -> FacePairingGraph {
        FacePairingGraph {
            nodes: self.num_tets(),
            edges: self.face_classes().iter().map(|fc| (fc.a.0, fc.b.0)).collect(),
        }
    }

    pub fn is_two_colorable(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(self.face_pairing_graph().is_bipartite())
    }

    /// Whether this is a combinatorial tetrahedral tessellation: closed,
    /// connected, every edge of order 6 and no edge identified with itself
    /// reversed.
    pub fn is_ctt(&self) -> bool {
        self.num_tets() > 0
            && self.is_closed()
            && self.is_connected()
            && self
                .edge_classes()
                .iter()
                .all(|e| e.order == 6 && !e.orientation_reversing)
    }

    /// Glues the two open faces at the ends of an open edge class so that
    /// the edge closes up.
    pub fn close_edge(&mut self, class: &EdgeClass) -> Result<()> {
        let Some(((t1, f1), (t2, f2))) = class.open_faces() else {
            panic!("close_edge on a closed edge class");
        };
        if (t1, f1) == (t2, f2) {
            return Err(Error::SelfGluingForbidden { tet: t1, face: f1 });
        }
        let s1 = class.walk.last().unwrap().perm;
        let s2 = class.walk[0].reversed().perm;
        let p = s2.compose(s1.inverse());
        debug_assert_eq!(p.apply(f1), f2);
        self.glue(t1, f1, t2, p)
    }
}

pub(crate) fn other_two(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    (rest.next().unwrap(), rest.next().unwrap())
}
