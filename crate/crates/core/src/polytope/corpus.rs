//! Small named polytopes used throughout the tests, benches, and CLI.

use super::HPolytope;

/// `[a, b]` as `x - a ≥ 0`, `b - x ≥ 0`.
pub fn interval(a: i64, b: i64) -> HPolytope {
    HPolytope::new(1, vec![vec![1], vec![-1]], vec![-a, b]).unwrap()
}

/// Normals ordered `(1,0), (0,1), (-1,0), (0,-1)`.
pub fn unit_square() -> HPolytope {
    cube(2)
}

/// `[0,1]^n` with normals `e_1..e_n` followed by `-e_1..-e_n`.
pub fn cube(n: usize) -> HPolytope {
    let mut normals = Vec::with_capacity(2 * n);
    let mut offsets = Vec::with_capacity(2 * n);
    for sign in [1, -1] {
        for i in 0..n {
            let mut u = vec![0; n];
            u[i] = sign;
            normals.push(u);
            offsets.push(if sign == 1 { 0 } else { 1 });
        }
    }
    HPolytope::new(n, normals, offsets).unwrap()
}

/// `scale` times the standard `n`-simplex: `x_i ≥ 0`, `Σ x_i ≤ scale`.
pub fn simplex(n: usize, scale: i64) -> HPolytope {
    let mut normals: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut u = vec![0; n];
            u[i] = 1;
            u
        })
        .collect();
    normals.push(vec![-1; n]);
    let mut offsets = vec![0; n];
    offsets.push(scale);
    HPolytope::new(n, normals, offsets).unwrap()
}

/// Triangle with vertices `(0,0), (1,0), (0,2)`; the vertex `(1,0)` is
/// singular with group of order 2.
pub fn nonregular_triangle() -> HPolytope {
    HPolytope::new(2, vec![vec![1, 0], vec![0, 1], vec![-2, -1]], vec![0, 0, 2]).unwrap()
}

/// `scale` times [`nonregular_triangle`].
pub fn nonregular_triangle_scaled(scale: i64) -> HPolytope {
    HPolytope::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-2, -1]],
        vec![0, 0, 2 * scale],
    )
    .unwrap()
}

/// Tetrahedron with vertices `(0,0,0), (1,0,0), (0,1,0), (1,1,2)`.
pub fn nonregular_tetrahedron() -> HPolytope {
    HPolytope::new(
        3,
        vec![
            vec![0, 0, 1],
            vec![-2, -2, 1],
            vec![2, 0, -1],
            vec![0, 2, -1],
        ],
        vec![0, 2, 0, 0],
    )
    .unwrap()
}

/// The exactness-sweep corpus: unit square; 1×–4× standard triangles; unit
/// cube; the nonregular triangle and tetrahedron.
pub fn all() -> Vec<HPolytope> {
    named().into_iter().map(|(_, h)| h).collect()
}

pub fn named() -> Vec<(&'static str, HPolytope)> {
    vec![
        ("unit-square", unit_square()),
        ("simplex2", simplex(2, 1)),
        ("simplex2x2", simplex(2, 2)),
        ("simplex2x3", simplex(2, 3)),
        ("simplex2x4", simplex(2, 4)),
        ("cube3", cube(3)),
        ("nonregular-triangle", nonregular_triangle()),
        ("nonregular-tetrahedron", nonregular_tetrahedron()),
    ]
}
