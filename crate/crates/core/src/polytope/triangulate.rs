use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::SimplePolytope;
use crate::exactnum::{IntMatrix, Rational};

/// `n + 1` vertex ids of the polytope; `sign` is the orientation of
/// `(v_1 - v_0, ..., v_n - v_0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub sign: i32,
}

/// Pulling triangulation: each face is coned from its lexicographically
/// smallest vertex over the facets of the face that miss it.
///
/// Only the face lattice is used, so the same index sets triangulate every
/// small dilation `Δ(h)` once the vertices are moved.
pub fn triangulate(p: &SimplePolytope) -> Vec<Simplex> {
    let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    let cells = pull(p, 0, &mut memo);
    cells
        .into_iter()
        .map(|vertices| {
            let sign = orientation(p, &vertices);
            Simplex { vertices, sign }
        })
        .collect()
}

fn pull(
    p: &SimplePolytope,
    face: usize,
    memo: &mut HashMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(c) = memo.get(&face) {
        return c.clone();
    }
    let lattice = p.face_lattice();
    let f = lattice.face(face);
    let out = if f.vertices.len() == 1 {
        vec![vec![f.vertices[0]]]
    } else {
        let apex = *f
            .vertices
            .iter()
            .min_by_key(|&&v| &p.vertex(v).coords)
            .unwrap();
        let mut out = Vec::new();
        for g in lattice.facets_of(f) {
            if g.contains_vertex(apex) {
                continue;
            }
            for mut cell in pull(p, g.id, memo) {
                cell.insert(0, apex);
                out.push(cell);
            }
        }
        out
    };
    memo.insert(face, out.clone());
    out
}

fn orientation(p: &SimplePolytope, verts: &[usize]) -> i32 {
    let v0 = &p.vertex(verts[0]).coords;
    let rows: Vec<Vec<i64>> = verts[1..]
        .iter()
        .map(|&v| {
            p.vertex(v)
                .coords
                .iter()
                .zip(v0)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    let d = IntMatrix::from_rows(&rows).det();
    if d.is_positive() {
        1
    } else if d.is_zero() {
        0
    } else {
        -1
    }
}

/// Unsigned volume of the polytope from the triangulation.
pub fn volume(p: &SimplePolytope) -> Rational {
    let n = p.dim();
    let mut fact = num_bigint::BigInt::from(1);
    for k in 2..=n {
        fact *= k;
    }
    triangulate(p).iter().fold(Rational::zero(), |acc, s| {
        let v0 = &p.vertex(s.vertices[0]).coords;
        let rows: Vec<Vec<i64>> = s.vertices[1..]
            .iter()
            .map(|&v| {
                p.vertex(v)
                    .coords
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        acc + Rational::new(IntMatrix::from_rows(&rows).det().abs(), fact.clone())
    })
}
