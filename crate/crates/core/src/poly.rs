//! Sparse multivariate polynomials with rational coefficients.
//!
//! The textual form is a sum of terms `c*x1^a1*...*xn^an`, where `c` is an
//! integer or `p/q` rational and any factor may be omitted.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, Rational};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `c + Σ coeffs[i]·x_i`.
    pub fn affine(c: Rational, coeffs: &[Rational]) -> Self {
        let mut p = Self::constant(coeffs.len(), c);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; coeffs.len()];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Mixed partial `∂^orders`.
    pub fn partial(&self, orders: &[usize]) -> Self {
        let mut p = self.clone();
        for (var, &k) in orders.iter().enumerate() {
            for _ in 0..k {
                p = p.derivative(var);
            }
        }
        p
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            sum += t;
        }
        sum
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rational_to_f64(c)
                    * x.iter()
                        .zip(e)
                        .map(|(xi, &k)| xi.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Substitutes `x_i := subs[i]`; all substitutes share one variable space.
    pub fn compose(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map_or(0, |s| s.nvars);
        let max_deg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        // powers[i][k] = subs[i]^k
        let powers: Vec<Vec<MPoly>> = subs
            .iter()
            .zip(&max_deg)
            .map(|(s, &d)| {
                let mut v = vec![MPoly::one(target)];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * s;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Seeded polynomial of total degree at most `max_degree`: every monomial
    /// is kept with probability 1/2, with a coefficient `a/b`, `|a| ≤ 9`,
    /// `1 ≤ b ≤ 4`.
    pub fn random(seed: u64, nvars: usize, max_degree: u32) -> MPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = MPoly::zero(nvars);
        let mut e = vec![0u32; nvars];
        loop {
            if e.iter().sum::<u32>() <= max_degree && rng.gen_bool(0.5) {
                let c = Rational::new(
                    rng.gen_range(-9i64..=9).into(),
                    rng.gen_range(1i64..=4).into(),
                );
                out.add_term(e.clone(), c);
            }
            let mut i = 0;
            loop {
                if i == nvars {
                    return out;
                }
                if e[i] < max_degree {
                    e[i] += 1;
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    pub fn parse(s: &str, nvars: usize) -> Result<MPoly> {
        Parser::new(s, nvars).parse()
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first reads naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{k}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({self})", self.nvars)
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, nvars: usize) -> Self {
        Parser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            nvars,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "polynomial `{}`: {msg} at offset {}",
            self.src, self.pos
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad number"))
    }

    fn parse(mut self) -> Result<MPoly> {
        let mut poly = MPoly::zero(self.nvars);
        if self.chars.is_empty() {
            return Err(self.err("empty input"));
        }
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut sign = Rational::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if !first => return Err(self.err("expected `+` or `-`")),
                _ => {}
            }
            first = false;
            let (exps, c) = self.term()?;
            poly.add_term(exps, sign * c);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(Exponents, Rational)> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.nvars];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    let mut r = Rational::from_integer(n);
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let d = self.number()?;
                        if d.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        r /= Rational::from_integer(d);
                    }
                    coeff *= r;
                }
                Some('x') => {
                    self.pos += 1;
                    let idx = self.number()?;
                    let idx: usize = idx.try_into().map_err(|_| self.err("bad variable index"))?;
                    if idx == 0 || idx > self.nvars {
                        return Err(
                            self.err(&format!("variable x{idx} outside x1..x{}", self.nvars))
                        );
                    }
                    let mut k = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let e = self.number()?;
                        k = e.try_into().map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx - 1] += k;
                }
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            factors += 1;
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        debug_assert!(factors > 0);
        Ok((exps, coeff))
    }
}
