use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::dilation::DilationPolynomial;
use crate::bernoulli1d::{m_poly, OperatorPoly};
use crate::exactnum::{factorial, CyclotomicNumber, Rational, RationalAngle};

/// `Π_j M^{k,λ_j}(∂/∂h_j)`, kept as its factors; all coefficients are lifted
/// to a common `Q(ζ_N)`.
#[derive(Debug, Clone)]
pub struct AssembledOperator {
    pub k: usize,
    pub order: u64,
    pub factors: Vec<OperatorPoly>,
    lifted: Vec<Vec<CyclotomicNumber>>,
}

pub fn assemble_operator(angles: &[RationalAngle], k: usize) -> AssembledOperator {
    let order = angles.iter().fold(1u64, |acc, a| acc.lcm(&a.order()));
    let factors: Vec<OperatorPoly> = angles.iter().map(|a| m_poly(k, a)).collect();
    let lifted = factors
        .iter()
        .map(|f| f.coeffs.iter().map(|c| c.lift(order)).collect())
        .collect();
    AssembledOperator {
        k,
        order,
        factors,
        lifted,
    }
}

impl AssembledOperator {
    pub fn coeff(&self, a: &[u32]) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::one(self.order);
        for (f, &m) in self.lifted.iter().zip(a) {
            match f.get(m as usize) {
                Some(c) if !c.is_zero() => acc = &acc * c,
                _ => return CyclotomicNumber::zero(self.order),
            }
        }
        acc
    }

    /// Dense expansion over exponent vectors of total degree `≤ max_degree`,
    /// zero coefficients dropped.
    pub fn expand(&self, max_degree: u32) -> BTreeMap<Vec<u32>, CyclotomicNumber> {
        let mut acc: BTreeMap<Vec<u32>, CyclotomicNumber> = BTreeMap::new();
        acc.insert(vec![], CyclotomicNumber::one(self.order));
        for f in &self.lifted {
            let mut next = BTreeMap::new();
            for (e, c) in &acc {
                let used: u32 = e.iter().sum();
                for (m, fc) in f.iter().enumerate() {
                    if used + m as u32 > max_degree {
                        break;
                    }
                    if fc.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2.push(m as u32);
                    next.insert(e2, c * fc);
                }
            }
            acc = next;
        }
        acc
    }
}

/// `Σ_a coeff(a) · Π a_j! · [h^a] I(h)`, driven by the monomials of `I`.
pub fn apply_operator(op: &AssembledOperator, i: &DilationPolynomial) -> CyclotomicNumber {
    let mut total = CyclotomicNumber::zero(op.order);
    for (e, c) in i.poly.terms() {
        let c_op = op.coeff(e);
        if c_op.is_zero() {
            continue;
        }
        let fact = e
            .iter()
            .fold(BigInt::one(), |acc, &m| acc * factorial(m as usize));
        total = &total + &c_op.scale(&(c * Rational::from_integer(fact)));
    }
    total
}

/// `Π_j L(∂/∂h_j) I |_{h=0}` with `L = L^{2⌊k/2⌋}`, applied by differentiation.
pub(crate) fn apply_todd(k: usize, i: &DilationPolynomial) -> Rational {
    let l = crate::bernoulli1d::l_truncated(k / 2);
    let coeffs: Vec<Rational> = l
        .coeffs
        .iter()
        .map(|c| c.rational_part().expect("rational"))
        .collect();
    let mut current = vec![i.poly.clone()];
    let d = i.poly.nvars();
    for j in 0..d {
        let mut next = Vec::new();
        for p in &current {
            let mut acc = crate::poly::MPoly::zero(d);
            let mut deriv = p.clone();
            for c in &coeffs {
                if deriv.is_zero() {
                    break;
                }
                acc = &acc + &deriv.scale(c);
                deriv = deriv.derivative(j);
            }
            next.push(acc);
        }
        current = next;
    }
    current[0].eval(&vec![Rational::zero(); d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::poly::MPoly;

    fn cy(r: Rational) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(1, r)
    }

    #[test]
    fn trivial_face_k3() {
        let op = assemble_operator(&[RationalAngle::one(), RationalAngle::one()], 3);
        let terms = op.expand(10);
        let expect: BTreeMap<Vec<u32>, CyclotomicNumber> = [
            (vec![0, 0], cy(rat(1, 1))),
            (vec![2, 0], cy(rat(1, 12))),
            (vec![0, 2], cy(rat(1, 12))),
            (vec![2, 2], cy(rat(1, 144))),
        ]
        .into_iter()
        .collect();
        assert_eq!(terms, expect);
        assert_eq!(op.expand(3).len(), 3);
    }

    #[test]
    fn nontrivial_factor_kills_constant() {
        let half = RationalAngle::from_ratio(1, 2);
        let op = assemble_operator(&[RationalAngle::one(), half.clone(), half], 4);
        for e in op.expand(12).keys() {
            assert!(e[1] >= 1 && e[2] >= 1);
        }
        let k1 = assemble_operator(&[RationalAngle::from_ratio(1, 2)], 1);
        assert!(k1.expand(5).is_empty());
    }

    #[test]
    fn apply_identity_and_vanishing() {
        let i = DilationPolynomial {
            poly: MPoly::parse("1 + x1 + x3 + x2 + x4 + x1*x2 + x1*x4 + x3*x2 + x3*x4", 4).unwrap(),
        };
        let id = assemble_operator(&vec![RationalAngle::one(); 4], 1);
        assert_eq!(apply_operator(&id, &i).rational_part().unwrap(), rat(1, 1));
        let todd = assemble_operator(&vec![RationalAngle::one(); 4], 2);
        assert_eq!(
            apply_operator(&todd, &i).rational_part().unwrap(),
            rat(1, 1)
        );
        assert_eq!(apply_todd(2, &i), rat(1, 1));
    }

    #[test]
    fn coefficient_lookup_matches_expansion() {
        let op = assemble_operator(
            &[
                RationalAngle::from_ratio(1, 3),
                RationalAngle::from_ratio(2, 3),
                RationalAngle::one(),
            ],
            5,
        );
        for (e, c) in op.expand(15) {
            assert_eq!(op.coeff(&e), c);
        }
        assert!(op.coeff(&[0, 1, 0]).is_zero());
        assert!(Rational::zero().is_zero());
    }
}
