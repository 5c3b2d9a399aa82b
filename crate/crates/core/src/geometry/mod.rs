//! Shapes, gluing equations, cusp cross sections, tilts and canonization.
//!
//! Shape conventions: a tetrahedron with shape `z` has parameter `z` on edges
//! 01 and 23, `z′ = 1/(1−z)` on edges 02 and 13 and `z″ = 1 − 1/z` on edges
//! 03 and 12. Every shape handled here lies in Q(√−3); lengths, areas,
//! circumradii and tilts lie in Q(√Q⁺) and are computed exactly.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numbers::{rat, ComplexInterval, Interval, Rational, ShapeNum, SqrtSum, DEFAULT_PRECISION, MAX_PRECISION};
use crate::perm::Perm4;
use crate::triangulation::{EdgeClass, Triangulation};

mod canonize;
mod guide;

pub use canonize::{canonize, CanonizeOptions, Canonized};

/// Which of `(z, z′, z″)` sits on the edge joining `a` and `b`.
fn param_index(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    }
}

fn all_params(shapes: &[ShapeNum]) -> Result<Vec<[ShapeNum; 3]>> {
    shapes.iter().map(|z| z.params()).collect()
}

/// The regular shape ζ = (1 + √−3)/2 on every tetrahedron of a CTT.
pub fn regular_shapes(t: &Triangulation) -> Result<Vec<ShapeNum>> {
    if !t.is_ctt() {
        return Err(Error::NotCtt);
    }
    Ok(vec![ShapeNum::regular(); t.num_tets()])
}

/// Exact check of the rectangular edge equations: around every edge class
/// the product of edge parameters is 1, where a tetrahedron traversed with
/// the opposite orientation to the first one contributes `1/z̄`.
pub fn verify_rectangular(t: &Triangulation, shapes: &[ShapeNum]) -> Result<bool> {
    Ok(rectangular_failures(t, shapes)?.is_empty())
}

fn rectangular_failures(t: &Triangulation, shapes: &[ShapeNum]) -> Result<Vec<usize>> {
    let params = all_params(shapes)?;
    let mut bad = Vec::new();
    for (i, class) in t.edge_classes().iter().enumerate() {
        if class.open {
            continue;
        }
        if !edge_product(class, &params)?.is_one() {
            bad.push(i);
        }
    }
    Ok(bad)
}

fn edge_product(class: &EdgeClass, params: &[[ShapeNum; 3]]) -> Result<ShapeNum> {
    let parity = class.walk[0].perm.is_odd();
    let mut prod = ShapeNum::one();
    for e in &class.walk {
        let z = &params[e.tet][param_index(e.perm.apply(0), e.perm.apply(1))];
        prod = if e.perm.is_odd() == parity {
            &prod * z
        } else {
            prod.div(&z.conj())?
        };
    }
    Ok(prod)
}

/// Whether every shape has positive imaginary part, certified by an interval
/// enclosure.
pub fn verify_positive(shapes: &[ShapeNum]) -> bool {
    shapes
        .iter()
        .all(|z| ComplexInterval::from_shape(z, DEFAULT_PRECISION).im.is_positive())
}

/// Checks that around every edge the enclosure of `Σ arg(zᵢ) − 2π` lies in
/// `(−tol, tol)`. Requires positively oriented shapes.
pub fn verify_logarithmic(t: &Triangulation, shapes: &[ShapeNum], tol: &Rational) -> Result<bool> {
    Ok(logarithmic_failures(t, shapes, tol)?.is_empty())
}

fn logarithmic_failures(t: &Triangulation, shapes: &[ShapeNum], tol: &Rational) -> Result<Vec<usize>> {
    let params = all_params(shapes)?;
    let mut bad = Vec::new();
    for (i, class) in t.edge_classes().iter().enumerate() {
        if class.open {
            continue;
        }
        let mut prec = DEFAULT_PRECISION;
        loop {
            let two_pi = Interval::pi(prec).mul(&Interval::from_int(2, prec));
            let mut sum = two_pi.neg();
            for e in &class.walk {
                let z = &params[e.tet][param_index(e.perm.apply(0), e.perm.apply(1))];
                sum = sum.add(&ComplexInterval::from_shape(z, prec).arg()?);
            }
            let (lo, hi) = (sum.lo.to_rational(), sum.hi.to_rational());
            let neg_tol = -tol.clone();
            if lo > neg_tol && &hi < tol {
                break;
            }
            if &lo >= tol || hi <= neg_tol {
                bad.push(i);
                break;
            }
            prec *= 2;
            if prec > MAX_PRECISION {
                return Err(Error::PrecisionExhausted);
            }
        }
    }
    Ok(bad)
}

/// Lengths of the sides of every cusp triangle, and cusp areas.
///
/// The cusp triangle of tetrahedron `i` at vertex `v` has one side in each
/// face through `v`; `length(i, v, u)` is the side lying in the face opposite
/// `u`.
#[derive(Clone, Debug)]
pub struct CuspCrossSection {
    lengths: Vec<[[SqrtSum; 4]; 4]>,
    /// Cusp index of every `(tet, vertex)`.
    pub cusp_of: Vec<[usize; 4]>,
    /// Area of every cusp triangle.
    pub triangle_areas: Vec<[SqrtSum; 4]>,
    /// Total area per cusp.
    pub areas: Vec<SqrtSum>,
}

impl CuspCrossSection {
    pub fn length(&self, tet: usize, v: usize, u: usize) -> &SqrtSum {
        &self.lengths[tet][v][u]
    }

    pub fn num_cusps(&self) -> usize {
        self.areas.len()
    }
}

fn is_even(a: usize, b: usize, c: usize, d: usize) -> bool {
    !Perm4::from_images([a as u8, b as u8, c as u8, d as u8])
        .unwrap()
        .is_odd()
}

fn third(v: usize, a: usize, b: usize) -> usize {
    (0..4).find(|&x| x != v && x != a && x != b).unwrap()
}

/// Builds a cusp cross section by fixing one side length per cusp to 1 and
/// propagating with the edge-ratio rule inside triangles and across faces.
/// Every relation is then checked exactly.
pub fn cusp_cross_section(t: &Triangulation, shapes: &[ShapeNum]) -> Result<CuspCrossSection> {
    let links = t.vertex_links()?;
    let params = all_params(shapes)?;
    let abs: Vec<[SqrtSum; 3]> = params.iter().map(|p| [p[0].abs(), p[1].abs(), p[2].abs()]).collect();
    let n = t.num_tets();
    let mut cusp_of = vec![[0usize; 4]; n];
    for (c, link) in links.iter().enumerate() {
        for &(tet, v) in &link.corners {
            cusp_of[tet][v] = c;
        }
    }
    let mut lengths: Vec<[[Option<SqrtSum>; 4]; 4]> = vec![Default::default(); n];
    // Ratio inside a triangle: for (v, w, u1, u2) even, e(u1) = e(u2)·|z_vw|.
    let sibling = |tet: usize, v: usize, u: usize, u1: usize, e: &SqrtSum| -> Result<SqrtSum> {
        let w = third(v, u, u1);
        let r = &abs[tet][param_index(v, w)];
        if is_even(v, w, u1, u) {
            Ok(e * r)
        } else {
            e.div(r)
        }
    };
    for (c, link) in links.iter().enumerate() {
        let (t0, v0) = link.corners[0];
        let u0 = (0..4).find(|&u| u != v0).unwrap();
        lengths[t0][v0][u0] = Some(SqrtSum::one());
        let mut stack = vec![(t0, v0, u0)];
        while let Some((tet, v, u)) = stack.pop() {
            let e = lengths[tet][v][u].clone().unwrap();
            let mut next = Vec::new();
            for u1 in (0..4).filter(|&x| x != v && x != u) {
                next.push(((tet, v, u1), sibling(tet, v, u, u1, &e)?));
            }
            let g = t.gluing(tet, u).ok_or(Error::NotClosed)?;
            next.push(((g.tet, g.perm.apply(v), g.perm.apply(u)), e.clone()));
            for ((a, b, d), val) in next {
                match &lengths[a][b][d] {
                    None => {
                        lengths[a][b][d] = Some(val);
                        stack.push((a, b, d));
                    }
                    Some(old) if *old != val => return Err(Error::InconsistentHolonomy { cusp: c }),
                    _ => {}
                }
            }
        }
    }
    let lengths: Vec<[[SqrtSum; 4]; 4]> = lengths
        .into_iter()
        .map(|a| a.map(|row| row.map(|x| x.unwrap_or_default())))
        .collect();
    // Exact re-check of every relation.
    for tet in 0..n {
        for v in 0..4 {
            let c = cusp_of[tet][v];
            for u in (0..4).filter(|&u| u != v) {
                let e = &lengths[tet][v][u];
                if e.sign() <= 0 {
                    return Err(Error::InconsistentHolonomy { cusp: c });
                }
                for u1 in (0..4).filter(|&x| x != v && x != u) {
                    if sibling(tet, v, u, u1, e)? != lengths[tet][v][u1] {
                        return Err(Error::InconsistentHolonomy { cusp: c });
                    }
                }
                let g = t.gluing(tet, u).unwrap();
                if lengths[g.tet][g.perm.apply(v)][g.perm.apply(u)] != *e {
                    return Err(Error::InconsistentHolonomy { cusp: c });
                }
            }
        }
    }
    let mut triangle_areas = vec![Default::default(); n];
    let mut areas = vec![SqrtSum::zero(); links.len()];
    for tet in 0..n {
        let mut row: [SqrtSum; 4] = Default::default();
        for (v, slot) in row.iter_mut().enumerate() {
            *slot = triangle_area(&lengths[tet], &params[tet], v);
            let c = cusp_of[tet][v];
            areas[c] = &areas[c] + slot;
        }
        triangle_areas[tet] = row;
    }
    Ok(CuspCrossSection {
        lengths,
        cusp_of,
        triangle_areas,
        areas,
    })
}

/// ½·e(u2)²·Im(z_vw) for any (v, w, u1, u2) even.
fn triangle_area(lengths: &[[SqrtSum; 4]; 4], params: &[ShapeNum; 3], v: usize) -> SqrtSum {
    let w = (v + 1) % 4;
    let rest: Vec<usize> = (0..4).filter(|&x| x != v && x != w).collect();
    let u2 = if is_even(v, w, rest[0], rest[1]) {
        rest[1]
    } else {
        rest[0]
    };
    let e = &lengths[v][u2];
    (&e.square() * &params[param_index(v, w)].im()).scale(&rat(1, 2))
}

/// Rescales every cusp to area √3. Areas must be positive rational
/// multiples of √3.
pub fn normalize_cusps(cs: &CuspCrossSection) -> Result<CuspCrossSection> {
    let mut factors = Vec::new();
    let mut ratios = Vec::new();
    for a in &cs.areas {
        let q = match a.terms() {
            [(n, q)] if *n == 3u32.into() && q.is_positive() => q.clone(),
            _ => return Err(Error::FieldViolation { area: a.to_string() }),
        };
        factors.push(SqrtSum::sqrt_of(&q.recip()));
        ratios.push(q.recip());
    }
    let n = cs.lengths.len();
    let mut out = cs.clone();
    for tet in 0..n {
        for v in 0..4 {
            let c = cs.cusp_of[tet][v];
            for u in 0..4 {
                out.lengths[tet][v][u] = &cs.lengths[tet][v][u] * &factors[c];
            }
            out.triangle_areas[tet][v] = cs.triangle_areas[tet][v].scale(&ratios[c]);
        }
    }
    out.areas = cs.areas.iter().zip(&ratios).map(|(a, r)| a.scale(r)).collect();
    Ok(out)
}

/// Sign class of a face tilt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Opacity {
    /// Negative tilt: the face lies in a 2-cell of the canonical decomposition.
    Opaque,
    /// Zero tilt: the face is interior to a 3-cell.
    Transparent,
    /// Positive tilt: the triangulation is not proto-canonical.
    Positive,
}

/// Exact tilts of every vertex of every tetrahedron and of every face class
/// (indexed as [`Triangulation::face_classes`]).
#[derive(Clone, Debug)]
pub struct TiltTable {
    pub circumradii: Vec<[SqrtSum; 4]>,
    pub vertex_tilts: Vec<[SqrtSum; 4]>,
    pub face_tilts: Vec<SqrtSum>,
    pub opacity: Vec<Opacity>,
}

impl TiltTable {
    pub fn is_proto_canonical(&self) -> bool {
        !self.opacity.contains(&Opacity::Positive)
    }

    pub fn transparent_faces(&self) -> Vec<usize> {
        (0..self.opacity.len())
            .filter(|&i| self.opacity[i] == Opacity::Transparent)
            .collect()
    }
}

/// Tilts from a normalized cusp cross section, without rejecting positive
/// tilts.
pub fn compute_tilts(t: &Triangulation, shapes: &[ShapeNum], cs: &CuspCrossSection) -> Result<TiltTable> {
    let params = all_params(shapes)?;
    let n = t.num_tets();
    let mut circumradii: Vec<[SqrtSum; 4]> = Vec::with_capacity(n);
    for tet in 0..n {
        let mut row: [SqrtSum; 4] = Default::default();
        for (v, slot) in row.iter_mut().enumerate() {
            let mut prod = SqrtSum::one();
            for u in (0..4).filter(|&u| u != v) {
                prod = &prod * cs.length(tet, v, u);
            }
            *slot = prod.div(&cs.triangle_areas[tet][v].scale(&Rational::from_integer(4.into())))?;
        }
        circumradii.push(row);
    }
    let mut vertex_tilts = Vec::with_capacity(n);
    for tet in 0..n {
        let mut row: [SqrtSum; 4] = Default::default();
        for (v, slot) in row.iter_mut().enumerate() {
            let mut tilt = circumradii[tet][v].clone();
            for u in (0..4).filter(|&u| u != v) {
                let z = &params[tet][param_index(u, v)];
                let cos = SqrtSum::from_rational(z.re().clone()).div(&z.abs())?;
                tilt = &tilt - &(&circumradii[tet][u] * &cos);
            }
            *slot = tilt;
        }
        vertex_tilts.push(row);
    }
    let mut face_tilts = Vec::new();
    let mut opacity = Vec::new();
    for fc in t.face_classes() {
        let tilt = &vertex_tilts[fc.a.0][fc.a.1] + &vertex_tilts[fc.b.0][fc.b.1];
        opacity.push(match tilt.sign() {
            -1 => Opacity::Opaque,
            0 => Opacity::Transparent,
            _ => Opacity::Positive,
        });
        face_tilts.push(tilt);
    }
    Ok(TiltTable {
        circumradii,
        vertex_tilts,
        face_tilts,
        opacity,
    })
}

/// Tilts of a proto-canonical triangulation; a positive tilt is an error.
pub fn tilts(t: &Triangulation, shapes: &[ShapeNum], cs: &CuspCrossSection) -> Result<TiltTable> {
    let table = compute_tilts(t, shapes, cs)?;
    if let Some(i) = table.opacity.iter().position(|&o| o == Opacity::Positive) {
        return Err(Error::NotProtoCanonical {
            face: i,
            tilt: table.face_tilts[i].to_string(),
        });
    }
    Ok(table)
}

/// Tilt table straight from shapes (cross section built and normalized).
pub fn tilts_of(t: &Triangulation, shapes: &[ShapeNum]) -> Result<TiltTable> {
    let cs = normalize_cusps(&cusp_cross_section(t, shapes)?)?;
    compute_tilts(t, shapes, &cs)
}

/// Whether every face tilt is certified strictly negative, i.e. the
/// triangulation is itself the canonical cell decomposition. An exactly
/// zero tilt answers `false`.
pub fn certify_canonical_simplicial(t: &Triangulation, shapes: &[ShapeNum]) -> Result<bool> {
    let table = tilts_of(t, shapes)?;
    for (i, tilt) in table.face_tilts.iter().enumerate() {
        if tilt.is_zero() {
            return Ok(false);
        }
        let mut prec = DEFAULT_PRECISION;
        loop {
            let iv = tilt.to_interval(prec);
            if iv.is_negative() {
                break;
            }
            if iv.is_positive() {
                return Ok(false);
            }
            prec *= 2;
            if prec > MAX_PRECISION {
                return Err(Error::Indeterminate { face: i });
            }
        }
    }
    Ok(true)
}

/// Outcome of one certification check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

/// Results of the five certification checks for a proto-canonical
/// triangulation with exact shapes.
#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub checks: Vec<CheckResult>,
    /// Exact face tilts (empty when the cusp checks failed).
    pub face_tilts: Vec<SqrtSum>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CertificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.witnesses.is_empty() {
                writeln!(f, "{} {}", c.name, status)?;
            } else {
                writeln!(f, "{} {} {}", c.name, status, c.witnesses.join(","))?;
            }
        }
        for (i, tilt) in self.face_tilts.iter().enumerate() {
            writeln!(f, "tilt {i} {tilt}")?;
        }
        Ok(())
    }
}

/// Runs the checks: (1) rectangular edge equations exactly, (2) Im z > 0 by
/// intervals, (3) logarithmic edge equations within 10⁻⁷, (4) cusp
/// cross-section equations exactly, (5) every face tilt ≤ 0 exactly.
pub fn certify(t: &Triangulation, shapes: &[ShapeNum]) -> CertificationReport {
    let mut checks = Vec::new();
    let rect = rectangular_failures(t, shapes);
    checks.push(CheckResult {
        name: "rectangular",
        passed: matches!(&rect, Ok(v) if v.is_empty()),
        witnesses: witness_list(rect, "edge"),
    });
    let bad_shapes: Vec<String> = shapes
        .iter()
        .enumerate()
        .filter(|(_, z)| !ComplexInterval::from_shape(z, DEFAULT_PRECISION).im.is_positive())
        .map(|(i, _)| format!("tet{i}"))
        .collect();
    let positive = bad_shapes.is_empty();
    checks.push(CheckResult {
        name: "positive",
        passed: positive,
        witnesses: bad_shapes,
    });
    let log = if positive {
        logarithmic_failures(t, shapes, &rat(1, 10_000_000))
    } else {
        Err(Error::FlatOrNegative)
    };
    checks.push(CheckResult {
        name: "logarithmic",
        passed: matches!(&log, Ok(v) if v.is_empty()),
        witnesses: witness_list(log, "edge"),
    });
    let cs = cusp_cross_section(t, shapes).and_then(|cs| normalize_cusps(&cs));
    let mut face_tilts = Vec::new();
    match cs {
        Ok(cs) => {
            checks.push(CheckResult {
                name: "cusp",
                passed: true,
                witnesses: Vec::new(),
            });
            match compute_tilts(t, shapes, &cs) {
                Ok(table) => {
                    let bad: Vec<String> = table
                        .opacity
                        .iter()
                        .enumerate()
                        .filter(|(_, o)| **o == Opacity::Positive)
                        .map(|(i, _)| format!("face{i}"))
                        .collect();
                    checks.push(CheckResult {
                        name: "tilt",
                        passed: bad.is_empty(),
                        witnesses: bad,
                    });
                    face_tilts = table.face_tilts;
                }
                Err(e) => checks.push(CheckResult {
                    name: "tilt",
                    passed: false,
                    witnesses: vec![e.to_string()],
                }),
            }
        }
        Err(e) => {
            checks.push(CheckResult {
                name: "cusp",
                passed: false,
                witnesses: vec![e.to_string()],
            });
            checks.push(CheckResult {
                name: "tilt",
                passed: false,
                witnesses: vec!["skipped".to_string()],
            });
        }
    }
    CertificationReport { checks, face_tilts }
}

fn witness_list(r: Result<Vec<usize>>, what: &str) -> Vec<String> {
    match r {
        Ok(v) => v.iter().map(|i| format!("{what}{i}")).collect(),
        Err(e) => vec![e.to_string()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_positions() {
        assert_eq!(param_index(0, 1), 0);
        assert_eq!(param_index(3, 2), 0);
        assert_eq!(param_index(1, 3), 1);
        assert_eq!(param_index(2, 1), 2);
    }

    #[test]
    fn empty_triangulation_is_vacuously_fine() {
        let t = Triangulation::new(0);
        assert!(verify_rectangular(&t, &[]).unwrap());
        assert!(verify_logarithmic(&t, &[], &rat(1, 10_000_000)).unwrap());
    }

    #[test]
    fn regular_area() {
        let z = ShapeNum::regular();
        let mut l: [[SqrtSum; 4]; 4] = Default::default();
        for row in l.iter_mut() {
            for x in row.iter_mut() {
                *x = SqrtSum::one();
            }
        }
        let a = triangle_area(&l, &z.params().unwrap(), 0);
        assert_eq!(a, SqrtSum::term(rat(1, 4), 3));
    }
}
