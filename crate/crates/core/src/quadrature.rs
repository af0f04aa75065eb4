//! Adaptive Gauss-Kronrod (7/15) quadrature with caller-supplied breakpoints,
//! and a nested tensor version for low-dimensional boxes.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Quad {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    Quad {
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

struct Piece {
    a: f64,
    b: f64,
    q: Quad,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.q.error == other.q.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q.error.total_cmp(&other.q.error)
    }
}

/// `∫_a^b f` to absolute tolerance `tol`. Interior `breakpoints` (e.g. jumps
/// of a derivative) are always interval endpoints.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<Quad> {
    if a >= b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let q = gk15(&f, w[0], w[1]);
        error += q.error;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            q,
        });
    }
    let mut steps = 0;
    while error > tol {
        if steps >= MAX_SUBDIVISIONS {
            return Err(Error::QuadratureFailure {
                tol,
                estimate: error,
            });
        }
        steps += 1;
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::QuadratureFailure {
                tol,
                estimate: error,
            });
        }
        let l = gk15(&f, worst.a, m);
        let r = gk15(&f, m, worst.b);
        error += l.error + r.error - worst.q.error;
        heap.push(Piece {
            a: worst.a,
            b: m,
            q: l,
        });
        heap.push(Piece {
            a: m,
            b: worst.b,
            q: r,
        });
    }
    // Summed afresh so the running error total's drift does not leak in.
    let (v, e) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.q.value, e + p.q.error));
    Ok(Quad { value: v, error: e })
}

/// Iterated integral of `f` over the box `Π [lo_i, hi_i]`, innermost variable
/// last. `breakpoints[i]` applies to coordinate `i`.
pub fn integrate_box(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    breakpoints: &[Vec<f64>],
    tol: f64,
) -> Result<Quad> {
    if bounds.is_empty() {
        return Ok(Quad {
            value: f(&[]),
            error: 0.0,
        });
    }
    nested(f, bounds, breakpoints, tol, &vec![0.0; bounds.len()], 0)
}

fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    breakpoints: &[Vec<f64>],
    tol: f64,
    prefix: &[f64],
    depth: usize,
) -> Result<Quad> {
    let (a, b) = bounds[depth];
    let at = |t: f64| {
        let mut y = prefix.to_vec();
        y[depth] = t;
        y
    };
    if depth + 1 == bounds.len() {
        return integrate(|t| f(&at(t)), a, b, &breakpoints[depth], tol);
    }
    // Half the budget goes to this level, half to the inner integrals.
    let len = (b - a).max(f64::MIN_POSITIVE);
    let inner_tol = 0.5 * tol / len;
    let inner_err = Cell::new(0.0f64);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = integrate(
        |t| match nested(f, bounds, breakpoints, inner_tol, &at(t), depth + 1) {
            Ok(q) => {
                inner_err.set(inner_err.get().max(q.error));
                q.value
            }
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        a,
        b,
        &breakpoints[depth],
        0.5 * tol,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(Quad {
        value: outer.value,
        error: outer.error + inner_err.get() * len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomials_exact() {
        let q = integrate(|x| x.powi(10), 0.0, 1.0, &[], 1e-12).unwrap();
        assert!((q.value - 1.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn kink_at_breakpoint() {
        let q = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((q.value - (0.045 + 0.245)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_tail() {
        let q = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, &[], 1e-12).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nested_box() {
        let f = |x: &[f64]| x[0] * x[1].sin() + x[2] * x[2];
        let q = integrate_box(
            &f,
            &[(0.0, 1.0), (0.0, 2.0), (-1.0, 1.0)],
            &[vec![], vec![], vec![]],
            1e-10,
        )
        .unwrap();
        let exact = 0.5 * (1.0 - 2.0f64.cos()) * 2.0 + 2.0 * (2.0 / 3.0);
        assert!((q.value - exact).abs() < 1e-10, "{}", q.value);
    }

    #[test]
    fn impossible_tolerance_fails() {
        let r = integrate(
            |x: f64| if x < 0.123_456 { 0.0 } else { 1.0 },
            0.0,
            1.0,
            &[],
            1e-300,
        );
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
