use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::SimplePolytope;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::limits::Limits;
use crate::poly::MPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    /// Number of facets through the point.
    pub codim: usize,
}

impl LatticePoint {
    pub fn weight(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << self.codim)
    }

    pub fn coords_rational(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect()
    }
}

/// All of `Δ ∩ ℤⁿ` by scanning the vertex bounding box.
pub fn enumerate_lattice_points(p: &SimplePolytope, limits: &Limits) -> Result<Vec<LatticePoint>> {
    let n = p.dim();
    let lo: Vec<i64> = (0..n)
        .map(|k| p.vertices().iter().map(|v| v.coords[k]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|k| p.vertices().iter().map(|v| v.coords[k]).max().unwrap())
        .collect();
    let count: u128 = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (b - a + 1) as u128)
        .product();
    if count > limits.max_lattice_points {
        return Err(Error::TooLarge {
            count,
            cap: limits.max_lattice_points,
        });
    }
    let h = p.h();
    let mut out = Vec::new();
    let mut x = lo.clone();
    'scan: loop {
        let mut codim = 0;
        let mut inside = true;
        for i in 0..h.num_facets() {
            let s: i64 =
                h.offsets()[i] + h.normal(i).iter().zip(&x).map(|(u, c)| u * c).sum::<i64>();
            if s < 0 {
                inside = false;
                break;
            }
            if s == 0 {
                codim += 1;
            }
        }
        if inside {
            out.push(LatticePoint {
                coords: x.clone(),
                codim,
            });
        }
        for k in (0..n).rev() {
            if x[k] < hi[k] {
                x[k] += 1;
                continue 'scan;
            }
            x[k] = lo[k];
        }
        break;
    }
    Ok(out)
}

/// `Σ′ p = Σ_{x ∈ Δ ∩ ℤⁿ} 2^{-codim x} p(x)`, exact.
pub fn weighted_sum_bruteforce(p: &SimplePolytope, f: &MPoly, limits: &Limits) -> Result<Rational> {
    let pts = enumerate_lattice_points(p, limits)?;
    Ok(pts.iter().fold(Rational::zero(), |acc, pt| {
        acc + pt.weight() * f.eval(&pt.coords_rational())
    }))
}

/// Floating-point variant for arbitrary `f`.
pub fn weighted_sum_bruteforce_f64(
    p: &SimplePolytope,
    f: impl Fn(&[f64]) -> f64,
    limits: &Limits,
) -> Result<f64> {
    let pts = enumerate_lattice_points(p, limits)?;
    Ok(pts
        .iter()
        .map(|pt| {
            let x: Vec<f64> = pt.coords.iter().map(|&c| c as f64).collect();
            f(&x) / (1u64 << pt.codim) as f64
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polytope::corpus;

    fn pts(h: crate::polytope::HPolytope) -> Vec<(Vec<i64>, usize)> {
        let p = SimplePolytope::new(h).unwrap();
        let mut v: Vec<_> = enumerate_lattice_points(&p, &Limits::default())
            .unwrap()
            .into_iter()
            .map(|lp| (lp.coords, lp.codim))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn square_points() {
        let v = pts(corpus::unit_square());
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|(_, c)| *c == 2));
    }

    #[test]
    fn triangle_points() {
        assert_eq!(
            pts(corpus::nonregular_triangle()),
            vec![
                (vec![0, 0], 2),
                (vec![0, 1], 1),
                (vec![0, 2], 2),
                (vec![1, 0], 2)
            ]
        );
    }

    #[test]
    fn dilated_simplex_points() {
        let v = pts(corpus::simplex(2, 2));
        assert_eq!(v.len(), 6);
        assert_eq!(v.iter().filter(|(_, c)| *c == 2).count(), 3);
        assert_eq!(v.iter().filter(|(_, c)| *c == 1).count(), 3);
    }

    #[test]
    fn brute_force_sums() {
        let lim = Limits::default();
        let sq = SimplePolytope::new(corpus::unit_square()).unwrap();
        assert_eq!(
            weighted_sum_bruteforce(&sq, &MPoly::one(2), &lim).unwrap(),
            rat(1, 1)
        );
        let tri = SimplePolytope::new(corpus::nonregular_triangle()).unwrap();
        assert_eq!(
            weighted_sum_bruteforce(&tri, &MPoly::one(2), &lim).unwrap(),
            rat(5, 4)
        );
        let seg = SimplePolytope::new(corpus::interval(0, 5)).unwrap();
        let cube = MPoly::parse("x1^3", 1).unwrap();
        assert_eq!(
            weighted_sum_bruteforce(&seg, &cube, &lim).unwrap(),
            rat(325, 2)
        );
        let f = weighted_sum_bruteforce_f64(&seg, |x| x[0].powi(3), &lim).unwrap();
        assert_eq!(f, 162.5);
    }

    #[test]
    fn cap_enforced() {
        let big = SimplePolytope::new(corpus::simplex(3, 300)).unwrap();
        let lim = Limits {
            max_lattice_points: 1000,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_lattice_points(&big, &lim),
            Err(Error::TooLarge { .. })
        ));
    }
}
