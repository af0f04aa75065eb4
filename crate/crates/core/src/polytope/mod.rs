//! Simple integral polytopes in H-form.
//!
//! A polytope is the intersection of half-spaces `⟨u_i, x⟩ + μ_i ≥ 0` with
//! primitive integer normals `u_i`. [`SimplePolytope`] bundles a validated
//! H-form with the data every later stage needs: vertices with their tight
//! facet sets, the face lattice, and the dual-basis edge vectors at each
//! vertex.

mod cones;
pub mod corpus;
mod faces;
mod json;
mod lattice;
mod triangulate;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub use cones::{
    choose_polarizing_vector, polar_decomposition_check, polarize, PolarizedCone, PolarizingVector,
    WeightedRegion,
};
pub use faces::{Face, FaceLattice};
pub use json::PolytopeJson;
pub use lattice::{
    enumerate_lattice_points, weighted_sum_bruteforce, weighted_sum_bruteforce_f64, LatticePoint,
};
pub use triangulate::{triangulate, volume, Simplex};

use crate::error::{Error, Result};
use crate::exactnum::{gcd_slice, solve_rational_system, IntMatrix, Rational};

/// `Δ = { x : ⟨u_i, x⟩ + μ_i ≥ 0, i = 1..d }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Vec<i64>>,
    offsets: Vec<i64>,
}

impl HPolytope {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>, offsets: Vec<i64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        if normals.len() != offsets.len() {
            return Err(Error::Dimension(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            )));
        }
        if let Some((i, _)) = normals.iter().find_position(|u| u.len() != dim) {
            return Err(Error::Dimension(format!(
                "normal {i} does not have length {dim}"
            )));
        }
        Ok(HPolytope {
            dim,
            normals,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn normal(&self, i: usize) -> &[i64] {
        &self.normals[i]
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// `⟨u_i, x⟩ + μ_i`.
    pub fn slack(&self, i: usize, x: &[Rational]) -> Rational {
        let mut s = Rational::from_integer(BigInt::from(self.offsets[i]));
        for (u, xi) in self.normals[i].iter().zip(x) {
            if *u != 0 {
                s += xi * Rational::from_integer(BigInt::from(*u));
            }
        }
        s
    }

    pub fn slack_f64(&self, i: usize, x: &[f64]) -> f64 {
        self.offsets[i] as f64
            + self.normals[i]
                .iter()
                .zip(x)
                .map(|(&u, &xi)| u as f64 * xi)
                .sum::<f64>()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (0..self.num_facets()).all(|i| !self.slack(i, x).is_negative())
    }

    pub(crate) fn normal_matrix(&self, facets: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = facets.iter().map(|&i| self.normals[i].clone()).collect();
        IntMatrix::from_rows(&rows)
    }

    /// Every validation check, in a fixed order; the first failure wins.
    pub fn validate(&self) -> Result<ValidationReport> {
        let not_primitive: Vec<usize> = (0..self.num_facets())
            .filter(|&i| gcd_slice(&self.normals[i]) != 1)
            .collect();
        if !not_primitive.is_empty() {
            return Err(Error::NotPrimitive(not_primitive));
        }
        self.check_duplicates()?;

        let candidates = self.candidate_vertices();
        if candidates.is_empty() {
            let rank_full = self.normals.iter().combinations(self.dim).any(|rows| {
                !IntMatrix::from_rows(&rows.into_iter().cloned().collect::<Vec<_>>())
                    .det()
                    .is_zero()
            });
            return Err(if rank_full {
                Error::Empty
            } else {
                Error::Unbounded
            });
        }

        let mut touched = vec![false; self.num_facets()];
        for tight in candidates.values() {
            for &i in tight {
                touched[i] = true;
            }
        }
        let redundant: Vec<usize> = (0..self.num_facets()).filter(|&i| !touched[i]).collect();
        if !redundant.is_empty() {
            return Err(Error::Redundant(redundant));
        }

        for (pt, tight) in &candidates {
            if tight.len() > self.dim {
                return Err(Error::NotSimple {
                    point: fmt_point(pt),
                    facets: tight.clone(),
                });
            }
        }

        // Bounded iff every edge leaving every vertex is cut off by some facet.
        for (pt, tight) in &candidates {
            let alphas = dual_basis(self, tight)?;
            for alpha in &alphas {
                let blocked = (0..self.num_facets())
                    .filter(|j| !tight.contains(j))
                    .any(|j| dot_int(&self.normals[j], alpha).is_negative());
                if !blocked {
                    let _ = pt;
                    return Err(Error::Unbounded);
                }
            }
        }

        let mut vertices = Vec::with_capacity(candidates.len());
        for (id, (pt, tight)) in candidates.into_iter().enumerate() {
            if !pt.iter().all(|c| c.is_integer()) {
                return Err(Error::NotIntegral {
                    point: fmt_point(&pt),
                    facets: tight,
                });
            }
            let coords = pt
                .iter()
                .map(|c| {
                    c.to_integer()
                        .to_i64()
                        .expect("vertex coordinate fits in i64")
                })
                .collect();
            vertices.push(Vertex { id, coords, tight });
        }
        Ok(ValidationReport {
            dim: self.dim,
            num_facets: self.num_facets(),
            vertices,
        })
    }

    fn check_duplicates(&self) -> Result<()> {
        for (i, j) in (0..self.num_facets()).tuple_combinations() {
            if self.normals[i] == self.normals[j] {
                // Same half-space direction: the looser one is redundant.
                let loose = if self.offsets[i] >= self.offsets[j] {
                    i
                } else {
                    j
                };
                return Err(Error::Redundant(vec![loose]));
            }
        }
        Ok(())
    }

    /// Feasible solutions of every nonsingular `n`-subset of facet equations,
    /// keyed by point, with the full set of facets tight there.
    fn candidate_vertices(&self) -> BTreeMap<Vec<Rational>, Vec<usize>> {
        let mut out = BTreeMap::new();
        for subset in (0..self.num_facets()).combinations(self.dim) {
            let a = self.normal_matrix(&subset);
            let b: Vec<Rational> = subset
                .iter()
                .map(|&i| Rational::from_integer(BigInt::from(-self.offsets[i])))
                .collect();
            let Ok(x) = solve_rational_system(&a, &b) else {
                continue;
            };
            if out.contains_key(&x) || !self.contains(&x) {
                continue;
            }
            let tight: Vec<usize> = (0..self.num_facets())
                .filter(|&i| self.slack(i, &x).is_zero())
                .collect();
            out.insert(x, tight);
        }
        out
    }
}

/// Result of a successful [`HPolytope::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub num_facets: usize,
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub coords: Vec<i64>,
    /// `I_v`: the `n` facets through the vertex, sorted.
    pub tight: Vec<usize>,
}

impl Vertex {
    pub fn coords_rational(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect()
    }
}

/// Vertices of `H` with simplicity enforced. Runs the full validation.
pub fn compute_vertices(h: &HPolytope) -> Result<Vec<Vertex>> {
    Ok(h.validate()?.vertices)
}

/// A validated simple integral polytope with its derived combinatorics.
#[derive(Debug, Clone)]
pub struct SimplePolytope {
    h: HPolytope,
    vertices: Vec<Vertex>,
    /// `alphas[v][k]` is `α_{i,v}` for `i = vertices[v].tight[k]`.
    alphas: Vec<Vec<Vec<Rational>>>,
    faces: FaceLattice,
}

impl SimplePolytope {
    pub fn new(h: HPolytope) -> Result<Self> {
        let report = h.validate()?;
        let alphas = report
            .vertices
            .iter()
            .map(|v| dual_basis(&h, &v.tight))
            .collect::<Result<Vec<_>>>()?;
        let faces = FaceLattice::build(&report.vertices);
        Ok(SimplePolytope {
            h,
            vertices: report.vertices,
            alphas,
            faces,
        })
    }

    /// Validates and additionally checks a supplied vertex list (any order).
    pub fn with_vertices(h: HPolytope, expected: &[Vec<i64>]) -> Result<Self> {
        let p = Self::new(h)?;
        let mut got: Vec<&Vec<i64>> = p.vertices.iter().map(|v| &v.coords).collect();
        let mut want: Vec<&Vec<i64>> = expected.iter().collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(Error::VertexMismatch);
        }
        Ok(p)
    }

    pub fn h(&self) -> &HPolytope {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim
    }

    pub fn num_facets(&self) -> usize {
        self.h.num_facets()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.faces
    }

    /// Dual basis at `v`: `⟨u_j, α_{i,v}⟩ = δ_ij` for `i, j ∈ I_v`.
    pub fn edge_vectors(&self, v: usize) -> BTreeMap<usize, Vec<Rational>> {
        self.vertices[v]
            .tight
            .iter()
            .copied()
            .zip(self.alphas[v].iter().cloned())
            .collect()
    }

    pub(crate) fn alphas(&self, v: usize) -> &[Vec<Rational>] {
        &self.alphas[v]
    }

    /// `|det(u_i, i ∈ I_v)|`.
    pub fn vertex_determinant(&self, v: usize) -> BigInt {
        self.h.normal_matrix(&self.vertices[v].tight).det().abs()
    }

    pub fn is_regular(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.vertex_determinant(v) == BigInt::from(1))
    }

    pub fn weighted_indicator(&self, x: &[Rational]) -> Rational {
        self.h.weighted_indicator(x)
    }
}

fn dot_int(u: &[i64], x: &[Rational]) -> Rational {
    u.iter()
        .zip(x)
        .filter(|(a, _)| **a != 0)
        .map(|(a, b)| b * Rational::from_integer(BigInt::from(*a)))
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// Columns of the inverse of the normal matrix on `facets`.
pub(crate) fn dual_basis(h: &HPolytope, facets: &[usize]) -> Result<Vec<Vec<Rational>>> {
    let a = h.normal_matrix(facets);
    (0..facets.len())
        .map(|k| {
            let e: Vec<Rational> = (0..facets.len())
                .map(|j| {
                    if j == k {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            solve_rational_system(&a, &e)
        })
        .collect()
}

pub(crate) fn fmt_point(p: &[Rational]) -> String {
    struct P<'a>(&'a [Rational]);
    impl fmt::Display for P<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "(")?;
            for (i, c) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
    P(p).to_string()
}
