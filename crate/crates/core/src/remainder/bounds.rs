//! Empirical check of the remainder bound `|R_k^Δ(f)| ≤ K · max_{k ≤ |a| ≤ nk} ‖∂^a f‖_{L¹}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cones::polytope_remainder;
use super::functions::{Gaussian, SmoothFunction};
use crate::error::Result;
use crate::polytope::{PolarizingVector, SimplePolytope};
use crate::quadrature::integrate_box;

/// `∫ |∂^a f|` over the support box.
pub fn derivative_l1_norm(f: &dyn SmoothFunction, a: &[usize], tol: f64) -> Result<f64> {
    let support = f.support();
    let breaks = vec![Vec::new(); support.len()];
    Ok(integrate_box(&|x: &[f64]| f.partial(a, x).abs(), &support, &breaks, tol)?.value)
}

fn multi_indices(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            multi_indices(n - 1, total - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// `max_{k ≤ |a| ≤ nk} ‖∂^a f‖_{L¹}`.
pub fn derivative_norm(f: &dyn SmoothFunction, k: usize, tol: f64) -> Result<f64> {
    let n = f.dim();
    let mut best: f64 = 0.0;
    for total in k..=n * k {
        for a in multi_indices(n, total) {
            best = best.max(derivative_l1_norm(f, &a, tol)?);
        }
    }
    Ok(best)
}

/// Seeded Gaussians with centers in `region` and widths in `sigma`.
pub fn gaussian_family(
    seed: u64,
    count: usize,
    region: &[(f64, f64)],
    sigma: (f64, f64),
) -> Vec<Gaussian> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Gaussian {
            center: region.iter().map(|&(a, b)| rng.gen_range(a..b)).collect(),
            sigma: rng.gen_range(sigma.0..sigma.1),
            amplitude: 1.0,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundFit {
    /// `K` fitted on the first function.
    pub constant: f64,
    /// `|R| / norm` for every function.
    pub ratios: Vec<f64>,
    /// Indices whose ratio exceeds `constant`.
    pub violations: Vec<usize>,
}

/// Fits `K = margin · |R(f_0)| / norm(f_0)` and checks the rest against it.
pub fn fit_remainder_bound(
    p: &SimplePolytope,
    xi: &PolarizingVector,
    fs: &[&dyn SmoothFunction],
    k: usize,
    margin: f64,
    tol: f64,
) -> Result<BoundFit> {
    let mut ratios = Vec::with_capacity(fs.len());
    for f in fs {
        let r = polytope_remainder(p, xi, *f, k, tol)?;
        let norm = derivative_norm(*f, k, 1e-6)?;
        ratios.push(r.re.abs() / norm);
    }
    let constant = margin * ratios.first().copied().unwrap_or(0.0);
    let violations = ratios
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &r)| r > constant)
        .map(|(i, _)| i)
        .collect();
    Ok(BoundFit {
        constant,
        ratios,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_l1_norms() {
        let g = Gaussian {
            center: vec![0.3],
            sigma: 0.5,
            amplitude: 1.0,
        };
        let tau = std::f64::consts::TAU;
        // ∫ e^{-u²/2σ²} = σ√(2π); ∫ |g'| = 2 g(0).
        assert!((derivative_l1_norm(&g, &[0], 1e-10).unwrap() - 0.5 * tau.sqrt()).abs() < 1e-8);
        assert!((derivative_l1_norm(&g, &[1], 1e-10).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn index_enumeration() {
        assert_eq!(
            multi_indices(2, 2),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(multi_indices(3, 2).len(), 6);
    }

    #[test]
    fn family_is_seeded() {
        let a = gaussian_family(4, 3, &[(0.0, 1.0), (0.0, 1.0)], (0.5, 1.0));
        assert_eq!(
            a,
            gaussian_family(4, 3, &[(0.0, 1.0), (0.0, 1.0)], (0.5, 1.0))
        );
        assert!(a.iter().all(|g| g.sigma >= 0.5 && g.sigma < 1.0));
    }
}
