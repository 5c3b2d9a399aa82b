//! Floating-point tilts for steering canonization through states the exact
//! tilt formula cannot handle (flat tetrahedra have no circumcircle). Nothing
//! here is certified; the result of canonization is re-checked exactly.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{is_even, param_index, third};
use crate::numbers::ShapeNum;
use crate::triangulation::Triangulation;

/// Stand-in for `2 sin C` of a degenerate cusp triangle, so that a flat
/// tetrahedron gets a huge but finite circumradius.
const CIRCUMRADIUS_EPSILON: f64 = 1e-10;

fn to_c(z: &ShapeNum) -> Complex64 {
    Complex64::new(z.re().to_f64().unwrap_or(f64::NAN), z.im().to_f64())
}

/// Approximate face tilts, indexed as [`Triangulation::face_classes`], with
/// every cusp scaled to the same area. `None` when a cusp area is not
/// positive.
pub(super) fn face_tilts(t: &Triangulation) -> Option<Vec<f64>> {
    let shapes = t.shapes()?;
    let links = t.vertex_links().ok()?;
    let n = t.num_tets();
    let params: Vec<[Complex64; 3]> = shapes
        .iter()
        .map(|z| {
            let z = to_c(z);
            [z, 1.0 / (1.0 - z), 1.0 - 1.0 / z]
        })
        .collect();
    let mut len = vec![[[f64::NAN; 4]; 4]; n];
    let mut cusp_of = vec![[0usize; 4]; n];
    for (c, link) in links.iter().enumerate() {
        for &(tet, v) in &link.corners {
            cusp_of[tet][v] = c;
        }
        let (t0, v0) = link.corners[0];
        let u0 = (v0 + 1) % 4;
        len[t0][v0][u0] = 1.0;
        let mut stack = vec![(t0, v0, u0)];
        while let Some((tet, v, u)) = stack.pop() {
            let e = len[tet][v][u];
            let mut next = Vec::with_capacity(3);
            for u1 in (0..4).filter(|&x| x != v && x != u) {
                let r = params[tet][param_index(v, third(v, u, u1))].norm();
                let val = if is_even(v, third(v, u, u1), u1, u) {
                    e * r
                } else {
                    e / r
                };
                next.push(((tet, v, u1), val));
            }
            let g = t.gluing(tet, u)?;
            next.push(((g.tet, g.perm.apply(v), g.perm.apply(u)), e));
            for ((a, b, d), val) in next {
                if len[a][b][d].is_nan() {
                    len[a][b][d] = val;
                    stack.push((a, b, d));
                }
            }
        }
    }
    let mut area = vec![[0.0; 4]; n];
    let mut cusp_area = vec![0.0; links.len()];
    for tet in 0..n {
        for v in 0..4 {
            let w = (v + 1) % 4;
            let rest: Vec<usize> = (0..4).filter(|&x| x != v && x != w).collect();
            let u2 = if is_even(v, w, rest[0], rest[1]) {
                rest[1]
            } else {
                rest[0]
            };
            let e = len[tet][v][u2];
            area[tet][v] = 0.5 * e * e * params[tet][param_index(v, w)].im;
            cusp_area[cusp_of[tet][v]] += area[tet][v];
        }
    }
    if cusp_area.iter().any(|&a| !(a > 0.0)) {
        return None;
    }
    let scale: Vec<f64> = cusp_area.iter().map(|a| a.recip().sqrt()).collect();
    let mut radius = vec![[0.0; 4]; n];
    for tet in 0..n {
        for v in 0..4 {
            let s = scale[cusp_of[tet][v]];
            let sides: Vec<f64> = (0..4).filter(|&u| u != v).map(|u| len[tet][v][u] * s).collect();
            // R = c / (2 sin C) with 2 sin C = 4A / (ab).
            let a = area[tet][v] * s * s;
            let factor = (4.0 * a / (sides[0] * sides[1])).max(CIRCUMRADIUS_EPSILON);
            radius[tet][v] = sides[2] / factor;
        }
    }
    let mut vertex_tilt = vec![[0.0; 4]; n];
    for tet in 0..n {
        for v in 0..4 {
            let mut tilt = radius[tet][v];
            for u in (0..4).filter(|&u| u != v) {
                let z = params[tet][param_index(u, v)];
                tilt -= radius[tet][u] * z.re / z.norm();
            }
            vertex_tilt[tet][v] = tilt;
        }
    }
    Some(
        t.face_classes()
            .iter()
            .map(|f| vertex_tilt[f.a.0][f.a.1] + vertex_tilt[f.b.0][f.b.1])
            .collect(),
    )
}
