//! Exact weighted lattice sums of polynomials: the face/group sum of
//! differential operators applied to the dilation integral `I(h)`.

mod dilation;
mod groups;
mod operator;

use serde::Serialize;

pub use dilation::{dilation_integral_poly, DilationPolynomial};
pub use groups::{
    character_angles, face_group, flat_subsets, group_order, inclusion_map, FaceGroup, FlatSubset,
    GroupTable,
};
pub use operator::{apply_operator, assemble_operator, AssembledOperator};

use crate::error::{Error, Result};
use crate::exactnum::{CyclotomicNumber, Rational};
use crate::limits::Limits;
use crate::poly::MPoly;
use crate::polytope::SimplePolytope;

/// `deg p + n + 1`.
pub fn default_k(p: &SimplePolytope, f: &MPoly) -> usize {
    f.total_degree() as usize + p.dim() + 1
}

/// Contribution of one face: `Σ_{γ ∈ Γ_F^♭} M_{γ,F} I`.
#[derive(Debug, Clone, Serialize)]
pub struct FaceContribution {
    pub face: usize,
    pub facets: Vec<usize>,
    pub group_order: usize,
    pub flat_size: usize,
    #[serde(serialize_with = "crate::exactnum::serialize_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct Breakdown {
    pub k: usize,
    pub cyclotomic_order: u64,
    pub faces: Vec<FaceContribution>,
    #[serde(serialize_with = "crate::exactnum::serialize_rational")]
    pub total: Rational,
}

/// The face sum with every nonzero face contribution kept separately.
pub fn weighted_sum_breakdown(
    p: &SimplePolytope,
    f: &MPoly,
    k: Option<usize>,
    limits: &Limits,
) -> Result<Breakdown> {
    let k = k.unwrap_or_else(|| default_k(p, f));
    if k == 0 {
        return Err(Error::Dimension("k must be at least 1".into()));
    }
    let table = GroupTable::build(p)?;
    let order = table.cyclotomic_order();
    if order > limits.max_cyclo_order {
        return Err(Error::OrderTooLarge {
            order,
            cap: limits.max_cyclo_order,
        });
    }
    let i = dilation_integral_poly(p, f)?;
    let mut faces = Vec::new();
    let mut total = Rational::from_integer(0.into());
    for (flat, angles) in table.flats.iter().zip(&table.angles) {
        if flat.members.is_empty() {
            continue;
        }
        let mut acc = CyclotomicNumber::zero(order);
        for a in angles {
            let op = assemble_operator(a, k);
            acc = &acc + &apply_operator(&op, &i).lift(order);
        }
        let value = acc.rational_part()?;
        total += &value;
        let g = &table.groups[flat.face];
        faces.push(FaceContribution {
            face: flat.face,
            facets: g.facets.clone(),
            group_order: g.order(),
            flat_size: flat.members.len(),
            value,
        });
    }
    Ok(Breakdown {
        k,
        cyclotomic_order: order,
        faces,
        total,
    })
}

/// `Σ′_{Δ ∩ ℤⁿ} p` exactly. `k` defaults to `deg p + n + 1`.
pub fn weighted_sum_polynomial(
    p: &SimplePolytope,
    f: &MPoly,
    k: Option<usize>,
    limits: &Limits,
) -> Result<Rational> {
    weighted_sum_breakdown(p, f, k, limits).map(|b| b.total)
}

/// Regular polytopes only: `Π_i L(∂/∂h_i) I(h)|_{h=0}`, applied by repeated
/// differentiation rather than through the group machinery.
pub fn weighted_sum_regular(p: &SimplePolytope, f: &MPoly) -> Result<Rational> {
    if let Some(v) = p
        .vertices()
        .iter()
        .find(|v| p.vertex_determinant(v.id) != 1.into())
    {
        return Err(Error::NotRegular(v.id));
    }
    let i = dilation_integral_poly(p, f)?;
    Ok(operator::apply_todd(default_k(p, f), &i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polytope::{corpus, weighted_sum_bruteforce, HPolytope};

    fn sum(h: HPolytope, p: &str) -> Rational {
        let s = SimplePolytope::new(h).unwrap();
        let f = MPoly::parse(p, s.dim()).unwrap();
        weighted_sum_polynomial(&s, &f, None, &Limits::default()).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(sum(corpus::unit_square(), "1"), rat(1, 1));
        assert_eq!(sum(corpus::nonregular_triangle(), "1"), rat(5, 4));
        assert_eq!(sum(corpus::interval(0, 5), "x1^3"), rat(325, 2));
        assert_eq!(sum(corpus::simplex(2, 1), "1"), rat(3, 4));
        assert_eq!(sum(corpus::simplex(2, 2), "1"), rat(9, 4));
    }

    #[test]
    fn regular_path() {
        let cube = SimplePolytope::new(corpus::cube(3)).unwrap();
        assert_eq!(
            weighted_sum_regular(&cube, &MPoly::one(3)).unwrap(),
            rat(1, 1)
        );
        for n in 1..=6 {
            let p = SimplePolytope::new(corpus::interval(0, n)).unwrap();
            let x = MPoly::parse("x1", 1).unwrap();
            assert_eq!(weighted_sum_regular(&p, &x).unwrap(), rat(n * n, 2));
        }
        let tri = SimplePolytope::new(corpus::nonregular_triangle()).unwrap();
        assert!(matches!(
            weighted_sum_regular(&tri, &MPoly::one(2)),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn agrees_with_enumeration() {
        let limits = Limits::default();
        for h in corpus::all() {
            let p = SimplePolytope::new(h).unwrap();
            let n = p.dim();
            let f = match n {
                2 => MPoly::parse("3*x1^2*x2 - x2^3 + 1/2*x1 + 2", 2).unwrap(),
                _ => MPoly::parse("x1*x2*x3 - 2*x3^2 + x1 + 1", 3).unwrap(),
            };
            let exact = weighted_sum_bruteforce(&p, &f, &limits).unwrap();
            for k in 0..3 {
                let kk = default_k(&p, &f) + k;
                assert_eq!(
                    weighted_sum_polynomial(&p, &f, Some(kk), &limits).unwrap(),
                    exact
                );
            }
            if p.is_regular() {
                assert_eq!(weighted_sum_regular(&p, &f).unwrap(), exact);
            }
        }
    }

    #[test]
    fn breakdown_lists_singular_vertex() {
        let p = SimplePolytope::new(corpus::nonregular_triangle()).unwrap();
        let b = weighted_sum_breakdown(&p, &MPoly::one(2), None, &Limits::default()).unwrap();
        assert_eq!(b.faces.len(), 2);
        assert_eq!(b.faces[1].facets, vec![1, 2]);
        assert_eq!(b.cyclotomic_order, 2);
        assert_eq!(b.total, rat(5, 4));
    }

    #[test]
    fn cyclotomic_cap() {
        let p = SimplePolytope::new(corpus::nonregular_triangle()).unwrap();
        let limits = Limits {
            max_cyclo_order: 1,
            ..Limits::default()
        };
        assert_eq!(
            weighted_sum_polynomial(&p, &MPoly::one(2), None, &limits),
            Err(Error::OrderTooLarge { order: 2, cap: 1 })
        );
    }
}
