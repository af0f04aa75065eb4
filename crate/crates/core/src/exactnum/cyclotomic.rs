use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::upoly;
use super::{rational_to_f64, Rational, RationalAngle};
use crate::error::{Error, Result};
use crate::limits::Limits;

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

type PolyCache = RwLock<HashMap<u64, Arc<Vec<Rational>>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, ascending coefficients, computed as
/// `(x^n - 1) / Π_{d | n, d < n} Φ_d` and memoized.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<Rational>> {
    assert!(n >= 1);
    if let Some(p) = cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![Rational::zero(); n as usize + 1];
    num[0] = -Rational::one();
    num[n as usize] = Rational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = upoly::divrem(&num, &cyclotomic_polynomial(d));
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    let p = Arc::new(num);
    cache().write().unwrap().entry(n).or_insert(p).clone()
}

/// An element of `Q(ζ_N)`, `ζ_N = e^{2πi/N}`, in the power basis
/// `1, ζ, …, ζ^{φ(N)-1}`.
///
/// Elements are always reduced modulo `Φ_N`, so two elements of the same order
/// are equal exactly when their coordinate vectors are. Elements of different
/// orders compare by lifting to the least common multiple.
#[derive(Clone)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        let phi = euler_phi(order) as usize;
        CyclotomicNumber {
            order,
            coeffs: vec![Rational::zero(); phi],
        }
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// `ζ_order^e`.
    pub fn zeta_pow(order: u64, e: u64) -> Self {
        let mut mono = vec![Rational::zero(); (e % order) as usize + 1];
        *mono.last_mut().unwrap() = Rational::one();
        Self::reduce(order, mono)
    }

    /// The root of unity `e^{2πi q}` inside `Q(ζ_order)`.
    pub fn from_angle(angle: &RationalAngle, order: u64) -> Self {
        Self::zeta_pow(order, angle.exponent_in(order))
    }

    /// Builds from an arbitrary (unreduced) polynomial in `ζ_order`.
    pub fn from_poly(order: u64, poly: Vec<Rational>) -> Self {
        Self::reduce(order, poly)
    }

    fn reduce(order: u64, poly: Vec<Rational>) -> Self {
        let phi = euler_phi(order) as usize;
        let (_, mut rem) = upoly::divrem(&poly, &cyclotomic_polynomial(order));
        rem.resize(phi, Rational::zero());
        CyclotomicNumber { order, coeffs: rem }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a multiple of
    /// the current order.
    pub fn lift(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift order {} to {target}",
            self.order
        );
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::reduce(target, poly)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi_poly = cyclotomic_polynomial(self.order);
        let inv = upoly::inverse_mod(&self.coeffs, &phi_poly).ok_or(Error::DivisionByZero)?;
        Ok(Self::reduce(self.order, inv))
    }

    /// The rational value, or `NotRational` when the element has an irrational
    /// component.
    pub fn rational_part(&self) -> Result<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Ok(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            Err(Error::NotRational)
        }
    }

    /// Embedding at `ζ_N = e^{2πi/N}`.
    pub fn to_complex(&self) -> Complex64 {
        let step = 2.0 * std::f64::consts::PI / self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Complex64::from_polar(rational_to_f64(c), step * i as f64))
            .sum()
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})·ζ{}", self.order),
                _ => format!("({c})·ζ{}^{i}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order != rhs.order {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicNumber {
            order: self.order,
            coeffs,
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order != rhs.order {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        CyclotomicNumber::reduce(self.order, upoly::mul(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Mul,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycloValue {
    Number(CyclotomicNumber),
    Bool(bool),
}

/// Checked binary operation: both operands are embedded into the order
/// `lcm(N_a, N_b)`, which must not exceed the configured cap.
pub fn cyclo_arith(
    a: &CyclotomicNumber,
    b: &CyclotomicNumber,
    op: CycloOp,
    limits: &Limits,
) -> Result<CycloValue> {
    let order = a.order.lcm(&b.order);
    if order > limits.max_cyclo_order {
        return Err(Error::OrderTooLarge {
            order,
            cap: limits.max_cyclo_order,
        });
    }
    Ok(match op {
        CycloOp::Add => CycloValue::Number(a + b),
        CycloOp::Mul => CycloValue::Number(a * b),
        CycloOp::Eq => CycloValue::Bool(a == b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rint;

    fn z(order: u64, e: u64) -> CyclotomicNumber {
        CyclotomicNumber::zeta_pow(order, e)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |n: u64| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect()
        };
        assert_eq!(ints(1), vec![-1, 1]);
        assert_eq!(ints(4), vec![1, 0, 1]);
        assert_eq!(ints(6), vec![1, -1, 1]);
        assert_eq!(ints(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(
            &z(4, 1) * &z(4, 1),
            CyclotomicNumber::from_rational(4, rint(-1))
        );
    }

    #[test]
    fn cube_root_minimal_polynomial() {
        let s = &(&(&z(3, 1) * &z(3, 1)) + &z(3, 1)) + &CyclotomicNumber::one(3);
        assert!(s.is_zero());
    }

    #[test]
    fn sixth_root_product() {
        let one = CyclotomicNumber::one(6);
        let lhs = &(&one + &z(6, 1)) * &(&one - &z(6, 1));
        let rhs = &one - &z(6, 2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_part_cases() {
        assert_eq!(CyclotomicNumber::zero(5).rational_part().unwrap(), rint(0));
        assert_eq!((&z(3, 1) + &z(3, 2)).rational_part().unwrap(), rint(-1));
        assert_eq!(z(5, 1).rational_part(), Err(Error::NotRational));
    }

    #[test]
    fn mixed_orders_lift() {
        // ζ_4 = ζ_12^3
        assert_eq!(z(4, 1), z(12, 3));
        assert_eq!((&z(4, 1) * &z(3, 1)), z(12, 7));
        assert_ne!(z(4, 1), z(12, 9));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = &CyclotomicNumber::one(5) - &z(5, 2);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, CyclotomicNumber::one(5));
        assert_eq!(
            CyclotomicNumber::zero(7).inverse(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let limits = Limits {
            max_cyclo_order: 10,
            ..Limits::default()
        };
        let err = cyclo_arith(&z(4, 1), &z(3, 1), CycloOp::Add, &limits).unwrap_err();
        assert_eq!(err, Error::OrderTooLarge { order: 12, cap: 10 });
        let ok = cyclo_arith(&z(4, 1), &z(4, 3), CycloOp::Eq, &Limits::default()).unwrap();
        assert_eq!(ok, CycloValue::Bool(false));
    }

    #[test]
    fn embedding_matches_float() {
        let a = &z(5, 1) + &z(5, 3).scale(&Rational::new(2.into(), 3.into()));
        let w = |e: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / 5.0);
        let expect = w(1.0) + w(3.0) * (2.0 / 3.0);
        assert!((a.to_complex() - expect).norm() < 1e-12);
    }
}
