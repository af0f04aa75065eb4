use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fmt_point, HPolytope, SimplePolytope};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

const MAX_POLARIZING_ATTEMPTS: usize = 1000;

/// A covector `ξ` pairing nonzero with every edge vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizingVector(pub Vec<Rational>);

impl PolarizingVector {
    pub fn from_ints(xs: &[i64]) -> Self {
        PolarizingVector(
            xs.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn pairing(&self, x: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `NonGeneric` names the first vertex/edge with a zero pairing.
    pub fn check(&self, p: &SimplePolytope) -> Result<()> {
        for v in p.vertices() {
            for (k, alpha) in p.alphas(v.id).iter().enumerate() {
                if self.pairing(alpha).is_zero() {
                    return Err(Error::NonGeneric {
                        vertex: v.id,
                        edge: v.tight[k],
                    });
                }
            }
        }
        Ok(())
    }
}

/// Seeded draw of small integer covectors until one is generic. The bound on
/// the entries grows with the attempt count.
pub fn choose_polarizing_vector(p: &SimplePolytope, seed: u64) -> Result<PolarizingVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_POLARIZING_ATTEMPTS {
        let bound = 8 + attempt as i64;
        let xs: Vec<i64> = (0..p.dim())
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        let xi = PolarizingVector::from_ints(&xs);
        if xi.check(p).is_ok() {
            return Ok(xi);
        }
    }
    Err(Error::InternalError(MAX_POLARIZING_ATTEMPTS))
}

/// Tangent cone at a vertex with every edge flipped to pair negatively with `ξ`.
///
/// Facet `k` of the cone is `⟨u♯_k, x - v⟩ ≥ 0` with `u♯_k = flip_k · u_{i_k}`,
/// and `α♯_k = flip_k · α_{i_k,v}` is the dual basis to the `u♯`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedCone {
    pub vertex: usize,
    pub apex: Vec<i64>,
    /// `I_v`, sorted; position `k` in the vectors below refers to `facets[k]`.
    pub facets: Vec<usize>,
    pub flips: Vec<i8>,
    pub normals: Vec<Vec<i64>>,
    pub normals_sharp: Vec<Vec<i64>>,
    pub alphas: Vec<Vec<Rational>>,
    pub alphas_sharp: Vec<Vec<Rational>>,
    /// `#v`.
    pub flip_count: usize,
}

impl PolarizedCone {
    pub fn sign(&self) -> i32 {
        if self.flip_count.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `⟨u♯_k, x - v⟩`.
    pub fn cone_coordinate(&self, k: usize, x: &[Rational]) -> Rational {
        self.normals_sharp[k]
            .iter()
            .zip(x.iter().zip(&self.apex))
            .fold(Rational::zero(), |acc, (&u, (xi, &vi))| {
                acc + (xi - Rational::from_integer(BigInt::from(vi)))
                    * Rational::from_integer(BigInt::from(u))
            })
    }
}

pub fn polarize(p: &SimplePolytope, xi: &PolarizingVector) -> Result<Vec<PolarizedCone>> {
    xi.check(p)?;
    Ok(p.vertices()
        .iter()
        .map(|v| {
            let alphas = p.alphas(v.id).to_vec();
            let flips: Vec<i8> = alphas
                .iter()
                .map(|a| if xi.pairing(a).is_positive() { -1 } else { 1 })
                .collect();
            let normals: Vec<Vec<i64>> =
                v.tight.iter().map(|&i| p.h().normal(i).to_vec()).collect();
            let normals_sharp = normals
                .iter()
                .zip(&flips)
                .map(|(u, &s)| u.iter().map(|&c| c * s as i64).collect())
                .collect();
            let alphas_sharp = alphas
                .iter()
                .zip(&flips)
                .map(|(a, &s)| {
                    a.iter()
                        .map(|c| if s < 0 { -c } else { c.clone() })
                        .collect()
                })
                .collect();
            PolarizedCone {
                vertex: v.id,
                apex: v.coords.clone(),
                facets: v.tight.clone(),
                flip_count: flips.iter().filter(|&&s| s < 0).count(),
                flips,
                normals,
                normals_sharp,
                alphas,
                alphas_sharp,
            }
        })
        .collect())
}

/// The weighted characteristic function: 0 outside, `2^{-k}` on the relative
/// interior of a codimension-`k` face (for simple regions `k` is the number
/// of tight constraints).
pub trait WeightedRegion {
    fn weighted_indicator(&self, x: &[Rational]) -> Rational;
}

fn weight_for(tight: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << tight)
}

impl WeightedRegion for HPolytope {
    fn weighted_indicator(&self, x: &[Rational]) -> Rational {
        let mut tight = 0;
        for i in 0..self.num_facets() {
            let s = self.slack(i, x);
            if s.is_negative() {
                return Rational::zero();
            }
            if s.is_zero() {
                tight += 1;
            }
        }
        weight_for(tight)
    }
}

impl WeightedRegion for PolarizedCone {
    fn weighted_indicator(&self, x: &[Rational]) -> Rational {
        let mut tight = 0;
        for k in 0..self.facets.len() {
            let t = self.cone_coordinate(k, x);
            if t.is_negative() {
                return Rational::zero();
            }
            if t.is_zero() {
                tight += 1;
            }
        }
        weight_for(tight)
    }
}

/// `1^w_Δ(x) = Σ_v (-1)^{#v} 1^w_{C♯_v}(x)` at every sample point.
pub fn polar_decomposition_check(
    p: &SimplePolytope,
    cones: &[PolarizedCone],
    points: &[Vec<Rational>],
) -> Result<()> {
    for x in points {
        let lhs = p.h().weighted_indicator(x);
        let rhs = cones.iter().fold(Rational::zero(), |acc, c| {
            let w = c.weighted_indicator(x);
            if c.sign() > 0 {
                acc + w
            } else {
                acc - w
            }
        });
        if lhs != rhs {
            return Err(Error::DecompositionViolated(format!(
                "{} (lhs {lhs}, rhs {rhs})",
                fmt_point(x)
            )));
        }
    }
    Ok(())
}
