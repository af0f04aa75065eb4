use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use super::{bernoulli_polynomial_scaled, l_truncated, m_poly, periodic_p_f64, twisted_q};
use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, Rational, RationalAngle};
use crate::poly::MPoly;
use crate::quadrature::integrate;

/// The three sides of the interval formula, in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmInterval {
    pub operator_term: f64,
    pub remainder: f64,
    pub weighted_sum: f64,
    pub quad_error: f64,
}

impl EmInterval {
    pub fn defect(&self) -> f64 {
        (self.weighted_sum - self.operator_term - self.remainder).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmIntervalExact {
    pub operator_term: Rational,
    pub remainder: Rational,
    pub weighted_sum: Rational,
}

fn check_interval(a: i64, b: i64, m: usize) -> Result<()> {
    if a >= b {
        return Err(Error::Dimension(format!("empty interval [{a}, {b}]")));
    }
    if m == 0 {
        return Err(Error::Dimension(
            "remainder order must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `f(k, x) = f^{(k)}(x)`. Returns `Σ′_{[a,b]} f`, `L^{2⌊m/2⌋}(∂_{h_1}) L^{2⌊m/2⌋}(∂_{h_2})
/// ∫_{a-h_1}^{b+h_2} f` at `h = 0`, and `(-1)^{m-1} ∫_a^b P_m f^{(m)}`.
pub fn em_interval(
    f: &dyn Fn(usize, f64) -> f64,
    a: i64,
    b: i64,
    m: usize,
    tol: f64,
) -> Result<EmInterval> {
    check_interval(a, b, m)?;
    let (af, bf) = (a as f64, b as f64);
    let weighted_sum =
        0.5 * (f(0, af) + f(0, bf)) + (a + 1..b).map(|n| f(0, n as f64)).sum::<f64>();
    let breaks: Vec<f64> = (a + 1..b).map(|n| n as f64).collect();

    let integral = integrate(|x| f(0, x), af, bf, &[], 0.5 * tol)?;
    let l = l_truncated(m / 2);
    let mut operator_term = integral.value;
    for (j, c) in l.coeffs.iter().enumerate().skip(1) {
        let c = rational_to_f64(&c.rational_part()?);
        if c != 0.0 {
            operator_term += c * (f(j - 1, bf) - f(j - 1, af));
        }
    }

    let p: Vec<f64> = bernoulli_polynomial_scaled(m)
        .iter()
        .map(rational_to_f64)
        .collect();
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let r = integrate(
        |x| periodic_p_f64(&p, x) * f(m, x),
        af,
        bf,
        &breaks,
        0.5 * tol,
    )?;
    Ok(EmInterval {
        operator_term,
        remainder: sign * r.value,
        weighted_sum,
        quad_error: integral.error + r.error,
    })
}

/// `∫_0^1 Σ c_i s^i ds`.
fn unit_integral(p: &MPoly) -> Rational {
    p.terms().fold(Rational::zero(), |acc, (e, c)| {
        acc + c / Rational::from_integer(BigInt::from(e[0] + 1))
    })
}

/// Exact version of [`em_interval`] for a one-variable polynomial; the
/// remainder is integrated in closed form on each unit interval.
pub fn em_interval_poly(f: &MPoly, a: i64, b: i64, m: usize) -> Result<EmIntervalExact> {
    check_interval(a, b, m)?;
    if f.nvars() != 1 {
        return Err(Error::Dimension(
            "interval formula needs a one-variable polynomial".into(),
        ));
    }
    let at = |x: i64| f.eval(&[Rational::from_integer(x.into())]);
    let half = Rational::new(1.into(), 2.into());
    let weighted_sum =
        (at(a) + at(b)) * &half + (a + 1..b).fold(Rational::zero(), |acc, n| acc + at(n));

    let shift = |x0: i64| {
        MPoly::affine(
            Rational::from_integer(x0.into()),
            &[Rational::from_integer(1.into())],
        )
    };
    let antiderivative_at = |x: i64| {
        // ∫_0^x f = x ∫_0^1 f(x s) ds
        let xs = MPoly::affine(Rational::zero(), &[Rational::from_integer(x.into())]);
        unit_integral(&f.compose(&[xs])) * Rational::from_integer(x.into())
    };
    let mut operator_term = antiderivative_at(b) - antiderivative_at(a);
    let l = l_truncated(m / 2);
    // Coefficient j pairs with f^{(j-1)}.
    let mut d = f.clone();
    for c in l.coeffs.iter().skip(1) {
        let c = c.rational_part()?;
        if !c.is_zero() {
            let end = |x: i64| d.eval(&[Rational::from_integer(x.into())]);
            operator_term += c * (end(b) - end(a));
        }
        d = d.derivative(0);
    }

    let fm = f.partial(&[m]);
    let pm = bernoulli_polynomial_scaled(m);
    let mut pm_poly = MPoly::zero(1);
    for (i, c) in pm.into_iter().enumerate() {
        pm_poly.add_term(vec![i as u32], c);
    }
    let mut remainder = Rational::zero();
    if !fm.is_zero() {
        for j in a..b {
            remainder += unit_integral(&(&pm_poly * &fm.compose(&[shift(j)])));
        }
        if m.is_multiple_of(2) {
            remainder = -remainder;
        }
    }
    Ok(EmIntervalExact {
        operator_term,
        remainder,
        weighted_sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySum {
    pub lhs: Complex64,
    pub operator_term: Complex64,
    pub remainder: Complex64,
    pub quad_error: f64,
}

impl RaySum {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.operator_term - self.remainder).norm()
    }
}

/// `½ f(0) + Σ_{n≥1} λⁿ f(n)` against `M^{k,λ}(∂_h) ∫_{-h}^∞ f |_{h=0}` plus
/// `(-1)^{k-1} ∫_0^∞ Q_{k,λ} f^{(k)}`, for `f` vanishing outside `[lo, hi]`.
pub fn twisted_ray_sum(
    f: &dyn Fn(usize, f64) -> f64,
    support: (f64, f64),
    lambda: &RationalAngle,
    k: usize,
    tol: f64,
) -> Result<RaySum> {
    if k == 0 {
        return Err(Error::Dimension(
            "remainder order must be at least 1".into(),
        ));
    }
    let q = twisted_q(k, lambda)?;
    let hi = support.1.max(0.0);
    let lam = lambda.to_complex();
    let mut lhs = Complex64::new(0.5 * f(0, 0.0), 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 1..=hi.floor() as i64 {
        pow *= lam;
        lhs += pow * f(0, n as f64);
    }

    let mut operator_term = Complex64::zero();
    for (m, c) in m_poly(k, lambda)
        .coeffs_complex()
        .into_iter()
        .enumerate()
        .skip(1)
    {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        operator_term += c * sign * f(m - 1, 0.0);
    }

    let lo = support.0.max(0.0);
    let breaks: Vec<f64> = (lo.ceil() as i64..=hi.floor() as i64)
        .map(|n| n as f64)
        .collect();
    let re = integrate(
        |x| q.eval_complex(x).re * f(k, x),
        lo,
        hi,
        &breaks,
        0.5 * tol,
    )?;
    let im = integrate(
        |x| q.eval_complex(x).im * f(k, x),
        lo,
        hi,
        &breaks,
        0.5 * tol,
    )?;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(RaySum {
        lhs,
        operator_term,
        remainder: Complex64::new(re.value, im.value) * sign,
        quad_error: re.error + im.error,
    })
}
