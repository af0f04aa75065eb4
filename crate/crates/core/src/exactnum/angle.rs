use std::fmt;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{frac, Rational};

/// The root of unity `e^{2πi q}` stored as `q` reduced into `[0, 1)`.
///
/// Angles compose additively, so products and inverses of roots of unity never
/// touch the cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle(Rational);

impl RationalAngle {
    pub fn new(q: Rational) -> Self {
        RationalAngle(frac(&q))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn one() -> Self {
        RationalAngle(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        self.0
            .denom()
            .to_u64()
            .expect("root of unity order fits in u64")
    }

    pub fn inverse(&self) -> Self {
        -self.clone()
    }

    pub fn pow(&self, e: i64) -> Self {
        RationalAngle::new(&self.0 * Rational::from_integer(BigInt::from(e)))
    }

    /// Exponent `e` with `self = ζ_order^e`; `order` must be a multiple of
    /// `self.order()`.
    pub fn exponent_in(&self, order: u64) -> u64 {
        let e = &self.0 * Rational::from_integer(BigInt::from(order));
        assert!(
            e.is_integer(),
            "order {order} is not a multiple of {}",
            self.order()
        );
        e.to_integer().to_u64().unwrap()
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let q = super::rational_to_f64(&self.0);
        num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * q)
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: RationalAngle) -> RationalAngle {
        RationalAngle::new(self.0 + rhs.0)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> RationalAngle {
        RationalAngle::new(-self.0)
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2πi·{})", self.0)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_mod_one() {
        let a = RationalAngle::from_ratio(7, 4);
        assert_eq!(a.value(), &Rational::new(3.into(), 4.into()));
        assert_eq!(a.order(), 4);
        assert_eq!(
            RationalAngle::from_ratio(-1, 3).value(),
            &Rational::new(2.into(), 3.into())
        );
        assert!(RationalAngle::from_ratio(5, 5).is_one());
        assert_eq!(RationalAngle::one().order(), 1);
    }

    #[test]
    fn composes_additively() {
        let a = RationalAngle::from_ratio(1, 6);
        assert_eq!(a.clone() + a.inverse(), RationalAngle::one());
        assert_eq!(a.pow(3), RationalAngle::from_ratio(1, 2));
        assert_eq!(a.exponent_in(12), 2);
    }
}
