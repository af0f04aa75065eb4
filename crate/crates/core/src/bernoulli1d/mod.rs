//! One-dimensional Euler-Maclaurin machinery: Bernoulli numbers, periodic
//! Bernoulli functions, the truncated operators `L^{2k}`, their twisted
//! versions `M^{k,λ}` for roots of unity, and the interval and ray formulas.

mod em1d;
mod twisted;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

pub use em1d::{
    em_interval, em_interval_poly, twisted_ray_sum, EmInterval, EmIntervalExact, RaySum,
};
pub use twisted::{twisted_q, TwistedQ};

use crate::error::{Error, Result};
use crate::exactnum::{
    factorial, frac, rational_to_f64, CyclotomicNumber, Rational, RationalAngle,
};

/// `b_0..b_max` with `S/(e^S - 1) = Σ b_k S^k / k!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    pub b: Vec<Rational>,
}

impl BernoulliTable {
    pub fn get(&self, k: usize) -> &Rational {
        &self.b[k]
    }

    pub fn max(&self) -> usize {
        self.b.len() - 1
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn bernoulli_cache() -> &'static RwLock<Arc<Vec<Rational>>> {
    static CACHE: OnceLock<RwLock<Arc<Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Arc::new(vec![Rational::one()])))
}

/// Series inversion of `(e^S - 1)/S = Σ S^j/(j+1)!`, i.e.
/// `Σ_{j=0}^{m} C(m+1, j) b_j = 0` for `m ≥ 1`.
pub fn bernoulli_numbers(max: usize) -> BernoulliTable {
    {
        let cached = bernoulli_cache().read().unwrap();
        if cached.len() > max {
            return BernoulliTable {
                b: cached[..=max].to_vec(),
            };
        }
    }
    let mut guard = bernoulli_cache().write().unwrap();
    let mut b = guard.as_ref().clone();
    for m in b.len()..=max {
        let s = (0..m).fold(Rational::zero(), |acc, j| {
            acc + &b[j] * Rational::from_integer(binomial(m + 1, j))
        });
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    *guard = Arc::new(b.clone());
    BernoulliTable {
        b: b[..=max].to_vec(),
    }
}

/// Coefficients of `B_m(x)/m!` in powers of `x`.
pub fn bernoulli_polynomial_scaled(m: usize) -> Vec<Rational> {
    let b = bernoulli_numbers(m);
    (0..=m)
        .map(|i| b.get(m - i) / Rational::from_integer(factorial(m - i) * factorial(i)))
        .collect()
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// `P_m(x) = B_m({x})/m!`; `P_1` is undefined at integers.
pub fn periodic_p(m: usize, x: &Rational) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Dimension(
            "periodic Bernoulli order must be at least 1".into(),
        ));
    }
    if m == 1 && x.is_integer() {
        return Err(Error::JumpPoint(x.to_string()));
    }
    Ok(horner(&bernoulli_polynomial_scaled(m), &frac(x)))
}

/// Float evaluation from precomputed coefficients of `B_m/m!`. At integers
/// `P_1` takes the midpoint value 0.
pub fn periodic_p_f64(coeffs: &[f64], x: f64) -> f64 {
    let t = x - x.floor();
    if coeffs.len() == 2 && t == 0.0 {
        return 0.0;
    }
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// A polynomial `Σ c_m S^m` in a derivative symbol, attached to the root of
/// unity `λ`. Coefficients live in `Q(ζ_N)` with `N` the order of `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorPoly {
    pub lambda: RationalAngle,
    pub k: usize,
    pub coeffs: Vec<CyclotomicNumber>,
}

impl OperatorPoly {
    pub fn coeff(&self, m: usize) -> CyclotomicNumber {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(self.lambda.order()))
    }

    /// `M(-S)`.
    pub fn reflect(&self) -> OperatorPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if m % 2 == 1 { -c } else { c.clone() })
            .collect();
        OperatorPoly {
            lambda: self.lambda.clone(),
            k: self.k,
            coeffs,
        }
    }

    pub fn coeffs_complex(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(CyclotomicNumber::to_complex)
            .collect()
    }
}

/// `L^{2k}(S) = 1 + Σ_{j=1}^{k} b_{2j}/(2j)! S^{2j}`.
pub fn l_truncated(k: usize) -> OperatorPoly {
    let b = bernoulli_numbers(2 * k);
    let coeffs = (0..=2 * k)
        .map(|m| {
            let c = if m == 0 {
                Rational::one()
            } else if m % 2 == 0 {
                b.get(m) / Rational::from_integer(factorial(m))
            } else {
                Rational::zero()
            };
            CyclotomicNumber::from_rational(1, c)
        })
        .collect();
    OperatorPoly {
        lambda: RationalAngle::one(),
        k: 2 * k,
        coeffs,
    }
}

fn q_cache() -> &'static RwLock<HashMap<Rational, Arc<Vec<CyclotomicNumber>>>> {
    static CACHE: OnceLock<RwLock<HashMap<Rational, Arc<Vec<CyclotomicNumber>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `[S^0..S^{len-1}]` of `λ/(e^S - λ)`, in `Q(ζ_N)`.
fn twisted_series(lambda: &RationalAngle, len: usize) -> Arc<Vec<CyclotomicNumber>> {
    if let Some(hit) = q_cache().read().unwrap().get(lambda.value()) {
        if hit.len() >= len {
            return hit.clone();
        }
    }
    let n = lambda.order();
    let lam = CyclotomicNumber::from_angle(lambda, n);
    // e^S - λ = (1 - λ) + Σ_{j≥1} S^j/j!
    let a0_inv = (&CyclotomicNumber::one(n) - &lam).inverse().expect("λ ≠ 1");
    let mut inv: Vec<CyclotomicNumber> = Vec::with_capacity(len);
    for m in 0..len {
        if m == 0 {
            inv.push(a0_inv.clone());
            continue;
        }
        let mut s = CyclotomicNumber::zero(n);
        for j in 1..=m {
            let a_j = Rational::new(BigInt::one(), factorial(j));
            s = &s + &inv[m - j].scale(&a_j);
        }
        inv.push(-&(&s * &a0_inv));
    }
    let series: Vec<CyclotomicNumber> = inv.iter().map(|c| c * &lam).collect();
    let series = Arc::new(series);
    q_cache()
        .write()
        .unwrap()
        .insert(lambda.value().clone(), series.clone());
    series
}

/// `Q_{m,λ}(0)` for `m ≥ 2` via `[S^{m-1}] λ/(e^S - λ)`. For `m = 1` this is
/// the right limit `λ/(1-λ)`.
pub fn twisted_q_zero(m: usize, lambda: &RationalAngle) -> Result<CyclotomicNumber> {
    if lambda.is_one() {
        return Err(Error::LambdaOne);
    }
    if m == 0 {
        return Err(Error::Dimension("twisted order must be at least 1".into()));
    }
    Ok(twisted_series(lambda, m)[m - 1].clone())
}

/// Truncated Fourier series `-Σ_{|r|≤R} (2πi(q + r))^{-m}` for `λ = e^{2πiq}`.
pub fn twisted_q_zero_fourier(m: usize, lambda: &RationalAngle, terms: usize) -> Complex64 {
    let q = rational_to_f64(lambda.value());
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let term = |s: i64| (two_pi_i * (q + s as f64)).powi(-(m as i32));
    // Smallest terms first.
    let mut acc = Complex64::new(0.0, 0.0);
    for s in (1..=terms as i64).rev() {
        acc += term(s) + term(-s);
    }
    acc += term(0);
    -acc
}

/// `M^{k,λ}(S)`. For `λ = 1` this is `L^{2⌊k/2⌋}`, padded to degree `k`.
pub fn m_poly(k: usize, lambda: &RationalAngle) -> OperatorPoly {
    if lambda.is_one() {
        let mut l = l_truncated(k / 2);
        l.coeffs.resize(k + 1, CyclotomicNumber::zero(1));
        l.k = k;
        return l;
    }
    let n = lambda.order();
    let series = twisted_series(lambda, k.max(1));
    let mut coeffs = vec![CyclotomicNumber::zero(n); k + 1];
    if k >= 1 {
        coeffs[1] =
            &series[0] + &CyclotomicNumber::from_rational(n, Rational::new(1.into(), 2.into()));
    }
    for m in 2..=k {
        coeffs[m] = series[m - 1].clone();
    }
    OperatorPoly {
        lambda: lambda.clone(),
        k,
        coeffs,
    }
}

/// `Σ_{n=1}^{terms} n^{-s}`, smallest terms first.
pub fn zeta_partial_sum(s: u32, terms: u64) -> f64 {
    (1..=terms)
        .rev()
        .map(|n| (n as f64).powi(-(s as i32)))
        .sum()
}

/// `|ζ(2k) + (-1)^k (2π)^{2k} b_{2k} / (2·(2k)!)|` with `ζ` from a partial sum.
pub fn zeta_identity_defect(k: usize, terms: u64) -> f64 {
    let b = rational_to_f64(bernoulli_numbers(2 * k).get(2 * k));
    let fact = rational_to_f64(&Rational::from_integer(factorial(2 * k)));
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let closed = sign * std::f64::consts::TAU.powi(2 * k as i32) * b / (2.0 * fact);
    (zeta_partial_sum(2 * k as u32, terms) + closed).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn cy(r: Rational) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(1, r)
    }

    #[test]
    fn zeta_two() {
        assert!(zeta_identity_defect(1, 100_000) < 2e-5);
        assert!((zeta_partial_sum(4, 10_000) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-11);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b.get(0), &rat(1, 1));
        assert_eq!(b.get(1), &rat(-1, 2));
        assert_eq!(b.get(2), &rat(1, 6));
        assert_eq!(b.get(3), &rat(0, 1));
        assert_eq!(b.get(4), &rat(-1, 30));
        assert_eq!(b.get(12), &rat(-691, 2730));
        for k in 1..6 {
            assert!(b.get(2 * k + 1).is_zero());
        }
        assert_eq!(bernoulli_numbers(3).b.len(), 4);
    }

    #[test]
    fn periodic_values() {
        assert_eq!(periodic_p(1, &rat(1, 4)).unwrap(), rat(-1, 4));
        assert_eq!(periodic_p(1, &rat(5, 4)).unwrap(), rat(-1, 4));
        assert_eq!(periodic_p(2, &rat(0, 1)).unwrap(), rat(1, 12));
        assert_eq!(periodic_p(3, &rat(0, 1)).unwrap(), rat(0, 1));
        assert!(matches!(
            periodic_p(1, &rat(3, 1)),
            Err(Error::JumpPoint(_))
        ));
        // P_m(-x) = (-1)^m P_m(x)
        for m in 1..7 {
            let x = rat(2, 7);
            let s = if m % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(
                periodic_p(m, &-x.clone()).unwrap(),
                s * periodic_p(m, &x).unwrap()
            );
        }
    }

    #[test]
    fn periodic_mean_zero() {
        for m in 1..8 {
            let c = bernoulli_polynomial_scaled(m);
            let mean = c.iter().enumerate().fold(Rational::zero(), |acc, (i, ci)| {
                acc + ci / rat(i as i64 + 1, 1)
            });
            assert!(mean.is_zero());
        }
    }

    #[test]
    fn l_operators() {
        assert_eq!(l_truncated(0).coeffs, vec![cy(rat(1, 1))]);
        let l1 = l_truncated(1);
        assert_eq!(
            l1.coeffs,
            vec![cy(rat(1, 1)), cy(rat(0, 1)), cy(rat(1, 12))]
        );
        assert_eq!(
            l1.coeffs[2].rational_part().unwrap(),
            periodic_p(2, &rat(0, 1)).unwrap()
        );
        let l2 = l_truncated(2);
        assert_eq!(l2.coeffs[4], cy(rat(-1, 720)));
    }

    #[test]
    fn m_for_minus_one() {
        let half = RationalAngle::from_ratio(1, 2);
        let m = m_poly(4, &half);
        let vals: Vec<Rational> = m
            .coeffs
            .iter()
            .map(|c| c.rational_part().unwrap())
            .collect();
        assert_eq!(
            vals,
            vec![rat(0, 1), rat(0, 1), rat(1, 4), rat(0, 1), rat(-1, 48)]
        );
    }

    #[test]
    fn m_for_one() {
        let m = m_poly(3, &RationalAngle::one());
        assert_eq!(
            m.coeffs,
            vec![cy(rat(1, 1)), cy(rat(0, 1)), cy(rat(1, 12)), cy(rat(0, 1))]
        );
    }

    #[test]
    fn m_linear_coefficient() {
        let lam = RationalAngle::from_ratio(1, 3);
        let m = m_poly(2, &lam);
        let l = CyclotomicNumber::from_angle(&lam, 3);
        let one = CyclotomicNumber::one(3);
        let expect = &CyclotomicNumber::from_rational(3, rat(1, 2))
            + &(&l * &(&one - &l).inverse().unwrap());
        assert_eq!(m.coeffs[1], expect);
        assert!(m.coeffs[0].is_zero());
    }

    #[test]
    fn inverse_symmetry() {
        for n in 2..=8i64 {
            for j in 1..n {
                let lam = RationalAngle::from_ratio(j, n);
                assert_eq!(m_poly(6, &lam.inverse()), {
                    let mut r = m_poly(6, &lam).reflect();
                    r.lambda = lam.inverse();
                    r
                });
            }
        }
    }

    #[test]
    fn fourier_matches_closed_form() {
        let lam = RationalAngle::from_ratio(1, 2);
        let f = twisted_q_zero_fourier(2, &lam, 100_000);
        assert!((f.re - 0.25).abs() < 1e-5 && f.im.abs() < 1e-9);
        let lam = RationalAngle::from_ratio(2, 5);
        for m in 2..6 {
            let exact = twisted_q_zero(m, &lam).unwrap().to_complex();
            let f = twisted_q_zero_fourier(m, &lam, 100_000);
            assert!((exact - f).norm() < 1e-5, "m={m} {exact} {f}");
        }
    }

    #[test]
    fn lambda_one_rejected() {
        assert_eq!(
            twisted_q_zero(2, &RationalAngle::one()).unwrap_err(),
            Error::LambdaOne
        );
    }
}
