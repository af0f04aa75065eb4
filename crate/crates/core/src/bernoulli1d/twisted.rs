use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{frac, CyclotomicNumber, Rational, RationalAngle};

/// `Q_{m,λ}`: `N`-periodic, piecewise polynomial with integer breakpoints.
///
/// `pieces[j]` holds the coefficients of `Q_{m,λ}(j + s)` in powers of
/// `s ∈ [0, 1)`.
#[derive(Debug, Clone)]
pub struct TwistedQ {
    pub lambda: RationalAngle,
    pub m: usize,
    pieces: Vec<Vec<CyclotomicNumber>>,
    pieces_c: Vec<Vec<Complex64>>,
}

fn integrate_piece(p: &[CyclotomicNumber], constant: CyclotomicNumber) -> Vec<CyclotomicNumber> {
    let mut out = vec![constant];
    for (i, c) in p.iter().enumerate() {
        out.push(c.scale(&Rational::new(1.into(), BigInt::from(i + 1))));
    }
    out
}

fn value_at_one(p: &[CyclotomicNumber], order: u64) -> CyclotomicNumber {
    p.iter()
        .fold(CyclotomicNumber::zero(order), |acc, c| &acc + c)
}

fn mean_over_unit(p: &[CyclotomicNumber], order: u64) -> CyclotomicNumber {
    p.iter()
        .enumerate()
        .fold(CyclotomicNumber::zero(order), |acc, (i, c)| {
            &acc + &c.scale(&Rational::new(1.into(), BigInt::from(i + 1)))
        })
}

/// `Q_{1,λ} = λ^{j+1}/(1-λ)` on `[j, j+1)`; higher orders by continuous
/// antiderivative with the constant fixed by `∫_0^N Q = 0`.
pub fn twisted_q(m: usize, lambda: &RationalAngle) -> Result<TwistedQ> {
    if lambda.is_one() {
        return Err(Error::LambdaOne);
    }
    if m == 0 {
        return Err(Error::Dimension("twisted order must be at least 1".into()));
    }
    let n = lambda.order();
    let lam = CyclotomicNumber::from_angle(lambda, n);
    let denom = (&CyclotomicNumber::one(n) - &lam).inverse()?;
    let mut pieces: Vec<Vec<CyclotomicNumber>> = (0..n)
        .map(|j| vec![&CyclotomicNumber::from_angle(&lambda.pow(j as i64 + 1), n) * &denom])
        .collect();
    let inv_n = Rational::new(1.into(), BigInt::from(n));
    for _ in 2..=m {
        let mut next = Vec::with_capacity(n as usize);
        let mut start = CyclotomicNumber::zero(n);
        for prev in &pieces {
            let raw = integrate_piece(prev, start);
            start = value_at_one(&raw, n);
            next.push(raw);
        }
        let total = next.iter().fold(CyclotomicNumber::zero(n), |acc, p| {
            &acc + &mean_over_unit(p, n)
        });
        let shift = total.scale(&inv_n);
        for p in &mut next {
            p[0] = &p[0] - &shift;
        }
        pieces = next;
    }
    let pieces_c = pieces
        .iter()
        .map(|p| p.iter().map(CyclotomicNumber::to_complex).collect())
        .collect();
    Ok(TwistedQ {
        lambda: lambda.clone(),
        m,
        pieces,
        pieces_c,
    })
}

impl TwistedQ {
    pub fn order(&self) -> u64 {
        self.lambda.order()
    }

    pub fn pieces(&self) -> &[Vec<CyclotomicNumber>] {
        &self.pieces
    }

    fn locate(&self, x: &Rational) -> (usize, Rational) {
        let j = x
            .floor()
            .to_integer()
            .mod_floor(&BigInt::from(self.order()));
        (j.to_usize().unwrap(), frac(x))
    }

    /// Exact value; at integers the right-hand piece is used.
    pub fn eval(&self, x: &Rational) -> CyclotomicNumber {
        let (j, s) = self.locate(x);
        let mut acc = CyclotomicNumber::zero(self.order());
        for c in self.pieces[j].iter().rev() {
            acc = &acc.scale(&s) + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: f64) -> Complex64 {
        let n = self.order() as f64;
        let fl = x.floor();
        let j = fl.rem_euclid(n) as usize;
        let s = x - fl;
        self.pieces_c[j]
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * s + c)
    }

    pub fn period_integral(&self) -> CyclotomicNumber {
        let n = self.order();
        self.pieces
            .iter()
            .fold(CyclotomicNumber::zero(n), |acc, p| {
                &acc + &mean_over_unit(p, n)
            })
    }
}
