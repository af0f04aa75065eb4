use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().cloned().map(Into::into))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for k in 0..self.cols {
            let v = &self[(src, k)] * c;
            self[(dst, k)] += v;
        }
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for k in 0..self.rows {
            let v = &self[(k, src)] * c;
            self[(k, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -&self[(i, k)];
            self[(i, k)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = -&self[(k, j)];
            self[(k, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// `M = P · D · Q` with `P`, `Q` unimodular and `D` diagonal, `d_1 | d_2 | …`.
///
/// The inverses of the transforms are kept as well: `P_inv · M · Q_inv = D`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub p: IntMatrix,
    pub d: IntMatrix,
    pub q: IntMatrix,
    pub p_inv: IntMatrix,
    pub q_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 … d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut p = IntMatrix::identity(r);
    let mut p_inv = IntMatrix::identity(r);
    let mut q = IntMatrix::identity(c);
    let mut q_inv = IntMatrix::identity(c);

    // Every row op E applied as D <- E·D updates P_inv <- E·P_inv and
    // P <- P·E^{-1}; column ops mirror this on Q.
    let swap_r = |d: &mut IntMatrix, p: &mut IntMatrix, pi: &mut IntMatrix, i: usize, j: usize| {
        d.swap_rows(i, j);
        pi.swap_rows(i, j);
        p.swap_cols(i, j);
    };
    let swap_c = |d: &mut IntMatrix, q: &mut IntMatrix, qi: &mut IntMatrix, i: usize, j: usize| {
        d.swap_cols(i, j);
        qi.swap_cols(i, j);
        q.swap_rows(i, j);
    };
    // row[dst] += k · row[src]
    let add_r = |d: &mut IntMatrix,
                 p: &mut IntMatrix,
                 pi: &mut IntMatrix,
                 dst: usize,
                 src: usize,
                 k: &BigInt| {
        d.add_row(dst, src, k);
        pi.add_row(dst, src, k);
        p.add_col(src, dst, &-k);
    };
    // col[dst] += k · col[src]
    let add_c = |d: &mut IntMatrix,
                 q: &mut IntMatrix,
                 qi: &mut IntMatrix,
                 dst: usize,
                 src: usize,
                 k: &BigInt| {
        d.add_col(dst, src, k);
        qi.add_col(dst, src, k);
        q.add_row(src, dst, &-k);
    };

    for t in 0..r.min(c) {
        loop {
            // Pivot: smallest nonzero magnitude in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !d[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi_, pj)) = best else { break };
            swap_r(&mut d, &mut p, &mut p_inv, t, pi_);
            swap_c(&mut d, &mut q, &mut q_inv, t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                if !d[(i, t)].is_zero() {
                    let k = -d[(i, t)].div_floor(&d[(t, t)]);
                    add_r(&mut d, &mut p, &mut p_inv, i, t, &k);
                    dirty |= !d[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !d[(t, j)].is_zero() {
                    let k = -d[(t, j)].div_floor(&d[(t, t)]);
                    add_c(&mut d, &mut q, &mut q_inv, j, t, &k);
                    dirty |= !d[(t, j)].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let offending =
                (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offending {
                Some(i) => add_r(&mut d, &mut p, &mut p_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p_inv.negate_row(t);
            p.negate_col(t);
        }
    }

    SmithForm {
        p,
        d,
        q,
        p_inv,
        q_inv,
    }
}

/// Exact solution of `A·x = b` for square nonsingular `A`.
pub fn solve_rational_system(a: &IntMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::Dimension(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = a
                .row(i)
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !m[i][col].is_zero())
            .ok_or(Error::Singular)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let v = &f * &m[col][j];
                    m[i][j] -= v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}
