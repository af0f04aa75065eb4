//! Operator parts and remainders over polarized tangent cones.
//!
//! In cone coordinates `t_i = ⟨u♯_i, x - v⟩` a cone becomes the orthant and
//! `x = v + Σ t_i α♯_i`, with `dx = dt / |Γ_v|`. Each character `γ` of `Γ_v`
//! turns the lattice sum into a product of twisted one-dimensional sums, so
//! the cone identity is a sum over `I ⊆ {1..n}` of terms that apply
//! `M^{k,λ_i}(-∂_i)` on `I` and `(-1)^{k-1} Q_{k,λ_i}(t_i) ∂_i^k` off `I`.
//! Operator monomials `(-∂_i)^a` with `a ≥ 1` are integrated out exactly,
//! leaving `(-1)^{a-1} ∂_i^{a-1}` on the facet `t_i = 0`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::functions::{DirectionalExpansion, SmoothFunction};
use crate::bernoulli1d::{
    bernoulli_polynomial_scaled, m_poly, periodic_p_f64, twisted_q, TwistedQ,
};
use crate::emcore::face_group;
use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, Rational, RationalAngle};
use crate::limits::Limits;
use crate::polytope::{
    polarize, weighted_sum_bruteforce_f64, PolarizedCone, PolarizingVector, SimplePolytope,
};
use crate::quadrature::integrate_box;

pub const MAX_HARNESS_DIM: usize = 3;
pub const MAX_HARNESS_K: usize = 8;

/// A possibly complex quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Estimate {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl Estimate {
    fn add(&mut self, other: Estimate) {
        self.re += other.re;
        self.im += other.im;
        self.error += other.error;
    }

    fn scaled(self, s: f64) -> Estimate {
        Estimate {
            re: s * self.re,
            im: s * self.im,
            error: s.abs() * self.error,
        }
    }
}

/// `P_k` when `λ = 1`, `Q_{k,λ}` otherwise.
#[derive(Debug, Clone)]
enum Kernel {
    Periodic(Vec<f64>),
    Twisted(TwistedQ),
}

impl Kernel {
    fn new(k: usize, lambda: &RationalAngle) -> Result<Self> {
        if lambda.is_one() {
            Ok(Kernel::Periodic(
                bernoulli_polynomial_scaled(k)
                    .iter()
                    .map(rational_to_f64)
                    .collect(),
            ))
        } else {
            Ok(Kernel::Twisted(twisted_q(k, lambda)?))
        }
    }

    fn eval(&self, t: f64) -> Complex64 {
        match self {
            Kernel::Periodic(c) => Complex64::new(periodic_p_f64(c, t), 0.0),
            Kernel::Twisted(q) => q.eval_complex(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Slot {
    /// Remainder factor `Q_k(t_i) ∂_i^k`, integrated over `t_i`.
    Kernel,
    /// Constant operator term, integrated over `t_i`.
    Plain,
    /// Reduced operator term, evaluated at `t_i = 0`.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Operator,
    Remainder,
}

/// Angles `⟨γ̃, α♯_k⟩ mod 1` for every element of `Γ_v`, by cone position.
pub fn cone_characters(
    p: &SimplePolytope,
    cone: &PolarizedCone,
) -> Result<Vec<Vec<RationalAngle>>> {
    let face = p
        .face_lattice()
        .find(&cone.facets)
        .ok_or_else(|| Error::Dimension(format!("no face with facets {:?}", cone.facets)))?;
    let group = face_group(p, face)?;
    Ok(group
        .reps
        .iter()
        .map(|rep| {
            cone.alphas_sharp
                .iter()
                .map(|alpha| {
                    let b = rep.iter().zip(alpha).fold(Rational::zero(), |acc, (x, a)| {
                        acc + Rational::from_integer(x.clone()) * a
                    });
                    RationalAngle::new(b)
                })
                .collect()
        })
        .collect())
}

/// The box in cone coordinates covering `supp f ∩ C`, clipped to the orthant;
/// `None` when the support misses the cone.
pub fn cone_box(cone: &PolarizedCone, support: &[(f64, f64)]) -> Option<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(cone.normals_sharp.len());
    for u in &cone.normals_sharp {
        let (mut lo, mut hi) = (0.0, 0.0);
        for ((&uj, &(a, b)), &vj) in u.iter().zip(support).zip(&cone.apex) {
            let (x, y) = (uj as f64 * (a - vj as f64), uj as f64 * (b - vj as f64));
            lo += x.min(y);
            hi += x.max(y);
        }
        if hi <= 0.0 {
            return None;
        }
        out.push((lo.max(0.0), hi));
    }
    Some(out)
}

fn check_harness(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > MAX_HARNESS_DIM {
        return Err(Error::Dimension(format!(
            "harness supports 1 ≤ n ≤ {MAX_HARNESS_DIM}, got {n}"
        )));
    }
    if k == 0 || k > MAX_HARNESS_K {
        return Err(Error::Dimension(format!(
            "harness supports 1 ≤ k ≤ {MAX_HARNESS_K}, got {k}"
        )));
    }
    Ok(())
}

/// `Σ_{x ∈ ℤⁿ ∩ C} 2^{-#{i : t_i = 0}} f(x)` over the support box.
pub fn cone_weighted_sum(
    cone: &PolarizedCone,
    f: &dyn SmoothFunction,
    limits: &Limits,
) -> Result<f64> {
    let support = f.support();
    let lo: Vec<i64> = support.iter().map(|&(a, _)| a.ceil() as i64).collect();
    let hi: Vec<i64> = support.iter().map(|&(_, b)| b.floor() as i64).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(0.0);
    }
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
    let mut x = lo.clone();
    let mut total = 0.0;
    'outer: loop {
        let mut zeros = 0;
        let mut inside = true;
        for u in &cone.normals_sharp {
            let t: i64 = u
                .iter()
                .zip(&x)
                .zip(&cone.apex)
                .map(|((&ui, &xi), &vi)| ui * (xi - vi))
                .sum();
            if t < 0 {
                inside = false;
                break;
            }
            if t == 0 {
                zeros += 1;
            }
        }
        if inside {
            let xf: Vec<f64> = x.iter().map(|&c| c as f64).collect();
            total += f.value(&xf) / (1u64 << zeros) as f64;
        }
        for i in 0..x.len() {
            if x[i] < hi[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = lo[i];
        }
        break;
    }
    Ok(total)
}

type TermMap = BTreeMap<(Vec<Slot>, Vec<usize>), Vec<(usize, Complex64)>>;

/// All terms of one part of the cone identity for the chosen characters,
/// merged by `(slots, β)`; each carries `(γ, coefficient)` pairs.
fn collect_terms(angles: &[Vec<RationalAngle>], gammas: &[usize], k: usize, part: Part) -> TermMap {
    let kernel_sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut out: TermMap = BTreeMap::new();
    for &g in gammas {
        let a = &angles[g];
        let n = a.len();
        // Per position: (slot, β, factor).
        let choices: Vec<Vec<(Slot, usize, Complex64)>> = a
            .iter()
            .map(|lambda| {
                let c = m_poly(k, lambda).coeffs_complex();
                let mut v = Vec::new();
                for (m, cm) in c.iter().enumerate() {
                    if cm.norm() == 0.0 {
                        continue;
                    }
                    if m == 0 {
                        v.push((Slot::Plain, 0, *cm));
                    } else {
                        let s = if m % 2 == 1 { 1.0 } else { -1.0 };
                        v.push((Slot::Fixed, m - 1, cm * s));
                    }
                }
                v
            })
            .collect();
        let mut idx = vec![0usize; n];
        // Position i uses `choices[i][idx[i] - 1]`, or the kernel when idx[i] = 0.
        'odometer: loop {
            let kernel_count = idx.iter().filter(|&&j| j == 0).count();
            let wanted = match part {
                Part::Operator => kernel_count == 0,
                Part::Remainder => kernel_count > 0,
            };
            if wanted {
                let mut slots = Vec::with_capacity(n);
                let mut beta = Vec::with_capacity(n);
                let mut coef = Complex64::new(1.0, 0.0);
                for i in 0..n {
                    if idx[i] == 0 {
                        slots.push(Slot::Kernel);
                        beta.push(k);
                        coef *= kernel_sign;
                    } else {
                        let (s, b, c) = choices[i][idx[i] - 1];
                        slots.push(s);
                        beta.push(b);
                        coef *= c;
                    }
                }
                out.entry((slots, beta)).or_default().push((g, coef));
            }
            let mut i = 0;
            loop {
                if i == n {
                    break 'odometer;
                }
                if idx[i] < choices[i].len() {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
    out
}

struct ConeEval {
    angles: Vec<Vec<RationalAngle>>,
    alphas: Vec<Vec<f64>>,
    apex: Vec<f64>,
    tbox: Option<Vec<(f64, f64)>>,
    k: usize,
    kernels: HashMap<RationalAngle, Kernel>,
}

impl ConeEval {
    fn new(
        p: &SimplePolytope,
        cone: &PolarizedCone,
        f: &dyn SmoothFunction,
        k: usize,
    ) -> Result<Self> {
        check_harness(p.dim(), k)?;
        if f.dim() != p.dim() {
            return Err(Error::Dimension(format!(
                "function dimension {} vs polytope {}",
                f.dim(),
                p.dim()
            )));
        }
        let angles = cone_characters(p, cone)?;
        let mut kernels = HashMap::new();
        for a in angles.iter().flatten() {
            if !kernels.contains_key(a) {
                kernels.insert(a.clone(), Kernel::new(k, a)?);
            }
        }
        Ok(ConeEval {
            alphas: cone
                .alphas_sharp
                .iter()
                .map(|a| a.iter().map(rational_to_f64).collect())
                .collect(),
            apex: cone.apex.iter().map(|&c| c as f64).collect(),
            tbox: cone_box(cone, &f.support()),
            angles,
            k,
            kernels,
        })
    }

    fn group_order(&self) -> usize {
        self.angles.len()
    }

    /// `(1/|Γ|) Σ_{γ ∈ gammas}` of one part. When `real_only`, the imaginary
    /// part is skipped (it cancels over a full group).
    fn part(
        &self,
        f: &dyn SmoothFunction,
        gammas: &[usize],
        part: Part,
        tol: f64,
        real_only: bool,
    ) -> Result<Estimate> {
        let Some(tbox) = &self.tbox else {
            return Ok(Estimate::default());
        };
        let mut total = Estimate::default();
        for ((slots, beta), weights) in collect_terms(&self.angles, gammas, self.k, part) {
            let q = self.term(f, tbox, &slots, &beta, &weights, tol, real_only)?;
            total.add(q);
        }
        Ok(total.scaled(1.0 / self.group_order() as f64))
    }

    #[allow(clippy::too_many_arguments)]
    fn term(
        &self,
        f: &dyn SmoothFunction,
        tbox: &[(f64, f64)],
        slots: &[Slot],
        beta: &[usize],
        weights: &[(usize, Complex64)],
        tol: f64,
        real_only: bool,
    ) -> Result<Estimate> {
        let n = slots.len();
        let mut dims = Vec::new();
        for i in 0..n {
            match slots[i] {
                Slot::Fixed if tbox[i].0 > 0.0 => return Ok(Estimate::default()),
                Slot::Fixed => {}
                _ if tbox[i].0 >= tbox[i].1 => return Ok(Estimate::default()),
                _ => dims.push(i),
            }
        }
        let expansion = DirectionalExpansion::new(&self.alphas, beta);
        let kernel_dims: Vec<usize> = (0..n).filter(|&i| slots[i] == Slot::Kernel).collect();
        let kernels: Vec<(Complex64, Vec<&Kernel>)> = weights
            .iter()
            .map(|(g, c)| {
                (
                    *c,
                    kernel_dims
                        .iter()
                        .map(|&i| &self.kernels[&self.angles[*g][i]])
                        .collect(),
                )
            })
            .collect();
        let weight = |t: &[f64]| -> Complex64 {
            kernels
                .iter()
                .map(|(c, ks)| {
                    ks.iter()
                        .zip(&kernel_dims)
                        .fold(*c, |acc, (kq, &i)| acc * kq.eval(t[i]))
                })
                .sum()
        };
        let point = |s: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let mut t = vec![0.0; n];
            for (&i, &si) in dims.iter().zip(s) {
                t[i] = si;
            }
            let mut x = self.apex.clone();
            for (ti, alpha) in t.iter().zip(&self.alphas) {
                for (xj, aj) in x.iter_mut().zip(alpha) {
                    *xj += ti * aj;
                }
            }
            (t, x)
        };
        let bounds: Vec<(f64, f64)> = dims.iter().map(|&i| tbox[i]).collect();
        let breaks: Vec<Vec<f64>> = dims
            .iter()
            .map(|&i| {
                if slots[i] == Slot::Kernel {
                    let (a, b) = tbox[i];
                    (a.floor() as i64 + 1..=b.ceil() as i64 - 1)
                        .map(|m| m as f64)
                        .filter(|&m| m > a && m < b)
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let re = integrate_box(
            &|s: &[f64]| {
                let (t, x) = point(s);
                let d = expansion.apply(f, &x);
                if d == 0.0 {
                    0.0
                } else {
                    (weight(&t) * d).re
                }
            },
            &bounds,
            &breaks,
            tol,
        )?;
        let needs_im = !real_only
            && weights
                .iter()
                .any(|(g, _)| self.angles[*g].iter().any(|a| !a.is_one()));
        let im = if needs_im {
            integrate_box(
                &|s: &[f64]| {
                    let (t, x) = point(s);
                    let d = expansion.apply(f, &x);
                    if d == 0.0 {
                        0.0
                    } else {
                        (weight(&t) * d).im
                    }
                },
                &bounds,
                &breaks,
                tol,
            )?
        } else {
            crate::quadrature::Quad {
                value: 0.0,
                error: 0.0,
            }
        };
        Ok(Estimate {
            re: re.value,
            im: im.value,
            error: re.error + im.error,
        })
    }
}

/// `Π_j M^{k,λ_{γ,j}}(∂/∂h_j) ∫_{C(h)} f dx` at `h = 0` for one character.
pub fn cone_operator_part(
    p: &SimplePolytope,
    cone: &PolarizedCone,
    gamma: usize,
    f: &dyn SmoothFunction,
    k: usize,
    tol: f64,
) -> Result<Estimate> {
    let e = ConeEval::new(p, cone, f, k)?;
    check_gamma(&e, gamma)?;
    e.part(f, &[gamma], Part::Operator, tol, false)
}

/// The share of character `γ` in the cone remainder, already divided by `|Γ|`.
pub fn cone_remainder(
    p: &SimplePolytope,
    cone: &PolarizedCone,
    gamma: usize,
    f: &dyn SmoothFunction,
    k: usize,
    tol: f64,
) -> Result<Estimate> {
    let e = ConeEval::new(p, cone, f, k)?;
    check_gamma(&e, gamma)?;
    e.part(f, &[gamma], Part::Remainder, tol, false)
}

fn check_gamma(e: &ConeEval, gamma: usize) -> Result<()> {
    if gamma >= e.group_order() {
        return Err(Error::Dimension(format!(
            "character {gamma} out of range for |Γ| = {}",
            e.group_order()
        )));
    }
    Ok(())
}

/// Both parts of the cone identity summed over the whole group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeTotals {
    pub operator: Estimate,
    pub remainder: Estimate,
}

pub fn cone_totals(
    p: &SimplePolytope,
    cone: &PolarizedCone,
    f: &dyn SmoothFunction,
    k: usize,
    tol: f64,
) -> Result<ConeTotals> {
    let e = ConeEval::new(p, cone, f, k)?;
    let all: Vec<usize> = (0..e.group_order()).collect();
    Ok(ConeTotals {
        operator: e.part(f, &all, Part::Operator, tol, true)?,
        remainder: e.part(f, &all, Part::Remainder, tol, true)?,
    })
}

/// Main term and remainder of the whole polytope from the signed cone sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolytopeTotals {
    pub main_term: Estimate,
    pub remainder: Estimate,
}

pub fn polytope_totals(
    p: &SimplePolytope,
    xi: &PolarizingVector,
    f: &dyn SmoothFunction,
    k: usize,
    tol: f64,
) -> Result<PolytopeTotals> {
    let cones = polarize(p, xi)?;
    let mut main_term = Estimate::default();
    let mut remainder = Estimate::default();
    for cone in &cones {
        let t = cone_totals(p, cone, f, k, tol)?;
        let s = cone.sign() as f64;
        main_term.add(t.operator.scaled(s));
        remainder.add(t.remainder.scaled(s));
    }
    Ok(PolytopeTotals {
        main_term,
        remainder,
    })
}

/// `R_k^Δ(f) = Σ_v (-1)^{#v} R_k^{C_v♯}(f)`.
pub fn polytope_remainder(
    p: &SimplePolytope,
    xi: &PolarizingVector,
    f: &dyn SmoothFunction,
    k: usize,
    tol: f64,
) -> Result<Estimate> {
    let cones = polarize(p, xi)?;
    let mut total = Estimate::default();
    for cone in &cones {
        let e = ConeEval::new(p, cone, f, k)?;
        let all: Vec<usize> = (0..e.group_order()).collect();
        total.add(
            e.part(f, &all, Part::Remainder, tol, true)?
                .scaled(cone.sign() as f64),
        );
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub lhs: f64,
    pub main_term: f64,
    pub remainder: f64,
    pub defect: f64,
    pub quad_error_estimate: f64,
    pub seed: u64,
    pub k: usize,
}

/// `Σ′ f` by enumeration against main term plus remainder, once per seed.
pub fn verify_main_theorem(
    p: &SimplePolytope,
    f: &dyn SmoothFunction,
    k: usize,
    seeds: &[u64],
    tol: f64,
    limits: &Limits,
) -> Result<Vec<Report>> {
    check_harness(p.dim(), k)?;
    let lhs = weighted_sum_bruteforce_f64(p, |x| f.value(x), limits)?;
    seeds
        .iter()
        .map(|&seed| {
            let xi = crate::polytope::choose_polarizing_vector(p, seed)?;
            let t = polytope_totals(p, &xi, f, k, tol)?;
            let (main_term, remainder) = (t.main_term.re, t.remainder.re);
            Ok(Report {
                lhs,
                main_term,
                remainder,
                defect: (lhs - main_term - remainder).abs(),
                quad_error_estimate: t.main_term.error + t.remainder.error,
                seed,
                k,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{choose_polarizing_vector, corpus, HPolytope};
    use crate::remainder::{Gaussian, Zero};

    fn triangle3() -> SimplePolytope {
        // Vertex (1,0) has |Γ| = 3.
        SimplePolytope::new(
            HPolytope::new(2, vec![vec![1, 0], vec![0, 1], vec![-3, -1]], vec![0, 0, 3]).unwrap(),
        )
        .unwrap()
    }

    fn gaussian(c: &[f64], sigma: f64) -> Gaussian {
        Gaussian {
            center: c.to_vec(),
            sigma,
            amplitude: 1.0,
        }
    }

    #[test]
    fn characters_of_singular_vertex() {
        let p = triangle3();
        let xi = choose_polarizing_vector(&p, 1).unwrap();
        let cones = polarize(&p, &xi).unwrap();
        let orders: Vec<usize> = cones
            .iter()
            .map(|c| cone_characters(&p, c).unwrap().len())
            .collect();
        let mut sorted = orders.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 1, 3]);
    }

    #[test]
    fn single_cone_identity() {
        let limits = Limits::default();
        for (p, seed) in [
            (triangle3(), 3),
            (
                SimplePolytope::new(corpus::nonregular_triangle()).unwrap(),
                5,
            ),
        ] {
            let xi = choose_polarizing_vector(&p, seed).unwrap();
            for cone in polarize(&p, &xi).unwrap() {
                let c: Vec<f64> = cone.apex.iter().map(|&x| x as f64 + 0.3).collect();
                let f = gaussian(&c, 0.8);
                for k in [2, 3] {
                    let lhs = cone_weighted_sum(&cone, &f, &limits).unwrap();
                    let t = cone_totals(&p, &cone, &f, k, 1e-9).unwrap();
                    let defect = (lhs - t.operator.re - t.remainder.re).abs();
                    assert!(
                        defect < 1e-7,
                        "vertex {} k={k}: defect {defect:e}",
                        cone.vertex
                    );
                    // Per-character pieces add up to the totals.
                    let n = cone_characters(&p, &cone).unwrap().len();
                    let mut sum = Estimate::default();
                    for g in 0..n {
                        sum.add(cone_operator_part(&p, &cone, g, &f, k, 1e-9).unwrap());
                        sum.add(cone_remainder(&p, &cone, g, &f, k, 1e-9).unwrap());
                    }
                    assert!((sum.re - t.operator.re - t.remainder.re).abs() < 1e-7);
                    assert!(sum.im.abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn zero_function() {
        let p = SimplePolytope::new(corpus::unit_square()).unwrap();
        let r = verify_main_theorem(&p, &Zero(2), 2, &[1], 1e-8, &Limits::default()).unwrap();
        assert_eq!((r[0].lhs, r[0].main_term, r[0].remainder), (0.0, 0.0, 0.0));
    }

    #[test]
    fn support_missing_cone() {
        let p = SimplePolytope::new(corpus::unit_square()).unwrap();
        let xi = PolarizingVector::from_ints(&[1, 2]);
        let f = gaussian(&[40.0, -40.0], 0.5);
        for cone in polarize(&p, &xi).unwrap() {
            let t = cone_totals(&p, &cone, &f, 2, 1e-9).unwrap();
            assert_eq!(t.operator, Estimate::default());
            assert_eq!(
                cone_weighted_sum(&cone, &f, &Limits::default()).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn harness_limits() {
        let p = SimplePolytope::new(corpus::unit_square()).unwrap();
        let f = gaussian(&[0.0, 0.0], 1.0);
        assert!(matches!(
            verify_main_theorem(&p, &f, 0, &[1], 1e-8, &Limits::default()),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            verify_main_theorem(&p, &f, MAX_HARNESS_K + 1, &[1], 1e-8, &Limits::default()),
            Err(Error::Dimension(_))
        ));
    }
}
