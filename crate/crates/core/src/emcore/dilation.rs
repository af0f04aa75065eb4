use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, Rational};
use crate::poly::MPoly;
use crate::polytope::{triangulate, SimplePolytope};

/// `I(h) = ∫_{Δ(h)} p(x) dx` as a polynomial in the facet shifts `h_1..h_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationPolynomial {
    pub poly: MPoly,
}

impl DilationPolynomial {
    pub fn eval(&self, h: &[Rational]) -> Rational {
        self.poly.eval(h)
    }

    /// `∂^a I(0)`.
    pub fn derivative_at_zero(&self, a: &[u32]) -> Rational {
        let fact = a
            .iter()
            .fold(BigInt::one(), |acc, &k| acc * factorial(k as usize));
        self.poly.coeff(a) * Rational::from_integer(fact)
    }
}

/// Appends `extra` unused variables.
fn embed(p: &MPoly, extra: usize) -> MPoly {
    let mut out = MPoly::zero(p.nvars() + extra);
    for (e, c) in p.terms() {
        let mut ext = e.clone();
        ext.resize(e.len() + extra, 0);
        out.add_term(ext, c.clone());
    }
    out
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn det(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    let mut out = MPoly::zero(nvars);
    for perm in (0..n).permutations(n) {
        let mut term = MPoly::constant(
            nvars,
            Rational::from_integer(permutation_sign(&perm).into()),
        );
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
        }
        out = &out + &term;
    }
    out
}

/// Moving vertex `w(h) = w - Σ_{i ∈ I_w} h_i α_{i,w}`, coordinate by coordinate.
fn moving_vertex(p: &SimplePolytope, v: usize) -> Vec<MPoly> {
    let d = p.num_facets();
    let vert = p.vertex(v);
    let edges = p.edge_vectors(v);
    (0..p.dim())
        .map(|coord| {
            let mut lin = vec![Rational::zero(); d];
            for (&i, alpha) in &edges {
                lin[i] = -alpha[coord].clone();
            }
            MPoly::affine(Rational::from_integer(vert.coords[coord].into()), &lin)
        })
        .collect()
}

/// Integrates `f` over every cell of the pulling triangulation with moving
/// vertices. Each cell is parametrized by the standard simplex and the `t`
/// variables are integrated out with `∫ t^b = Π b_r! / (n + |b|)!`.
pub fn dilation_integral_poly(p: &SimplePolytope, f: &MPoly) -> Result<DilationPolynomial> {
    let n = p.dim();
    let d = p.num_facets();
    if f.nvars() != n {
        return Err(Error::Dimension(format!(
            "polynomial has {} variables, polytope dimension {n}",
            f.nvars()
        )));
    }
    let moving: Vec<Vec<MPoly>> = (0..p.vertices().len())
        .map(|v| moving_vertex(p, v))
        .collect();
    let mut total = MPoly::zero(d);
    for cell in triangulate(p) {
        if cell.sign == 0 {
            continue;
        }
        let w0 = &moving[cell.vertices[0]];
        let edges: Vec<Vec<MPoly>> = cell.vertices[1..]
            .iter()
            .map(|&v| (0..n).map(|c| &moving[v][c] - &w0[c]).collect())
            .collect();
        let subs: Vec<MPoly> = (0..n)
            .map(|c| {
                let mut s = embed(&w0[c], n);
                for (r, e) in edges.iter().enumerate() {
                    s = &s + &(&embed(&e[c], n) * &MPoly::var(d + n, d + r));
                }
                s
            })
            .collect();
        let composed = f.compose(&subs);
        let mut integrated = MPoly::zero(d);
        for (e, c) in composed.terms() {
            let b = &e[d..];
            let num = b
                .iter()
                .fold(BigInt::one(), |acc, &k| acc * factorial(k as usize));
            let den = factorial(n + b.iter().map(|&k| k as usize).sum::<usize>());
            integrated.add_term(e[..d].to_vec(), c * Rational::new(num, den));
        }
        let jac = det(&edges, d).scale(&Rational::from_integer(cell.sign.into()));
        total = &total + &(&integrated * &jac);
    }
    Ok(DilationPolynomial { poly: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polytope::corpus;

    fn h(d: usize, i: usize) -> MPoly {
        MPoly::var(d, i)
    }

    #[test]
    fn unit_square_area() {
        let p = SimplePolytope::new(corpus::unit_square()).unwrap();
        let i = dilation_integral_poly(&p, &MPoly::one(2)).unwrap();
        let one = MPoly::one(4);
        let expect = &(&(&one + &h(4, 0)) + &h(4, 2)) * &(&(&one + &h(4, 1)) + &h(4, 3));
        assert_eq!(i.poly, expect);
    }

    #[test]
    fn simplex_area() {
        let p = SimplePolytope::new(corpus::simplex(2, 1)).unwrap();
        let i = dilation_integral_poly(&p, &MPoly::one(2)).unwrap();
        let s = &(&(&MPoly::one(3) + &h(3, 0)) + &h(3, 1)) + &h(3, 2);
        assert_eq!(i.poly, s.pow(2).scale(&rat(1, 2)));
    }

    #[test]
    fn interval_moments() {
        let p = SimplePolytope::new(corpus::interval(0, 5)).unwrap();
        let x3 = MPoly::parse("x1^3", 1).unwrap();
        let i = dilation_integral_poly(&p, &x3).unwrap();
        assert_eq!(i.eval(&[rat(0, 1), rat(0, 1)]), rat(625, 4));
        // ∫_{-1}^{7} x^3 = (7^4 - 1)/4
        assert_eq!(i.eval(&[rat(1, 1), rat(2, 1)]), rat(600, 1));
    }

    #[test]
    fn nonregular_triangle_moves() {
        let p = SimplePolytope::new(corpus::nonregular_triangle()).unwrap();
        let i = dilation_integral_poly(&p, &MPoly::one(2)).unwrap();
        assert_eq!(i.eval(&vec![rat(0, 1); 3]), rat(1, 1));
        // h_3 = 2 doubles the triangle.
        assert_eq!(i.eval(&[rat(0, 1), rat(0, 1), rat(2, 1)]), rat(4, 1));
        let x = MPoly::parse("x1", 2).unwrap();
        let ix = dilation_integral_poly(&p, &x).unwrap();
        assert_eq!(ix.eval(&vec![rat(0, 1); 3]), rat(1, 3));
    }

    #[test]
    fn derivative_at_zero_uses_factorials() {
        let p = SimplePolytope::new(corpus::simplex(2, 1)).unwrap();
        let i = dilation_integral_poly(&p, &MPoly::one(2)).unwrap();
        assert_eq!(i.derivative_at_zero(&[2, 0, 0]), rat(1, 1));
        assert_eq!(i.derivative_at_zero(&[1, 1, 0]), rat(1, 1));
    }
}
