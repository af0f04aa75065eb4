//! Built-in compactly supported test functions with closed-form partials.

use std::fmt;

use crate::exactnum::rational_to_f64;
use crate::poly::MPoly;

/// Decay radius in units of `σ`: `e^{-u²/2}` times any Hermite factor used
/// here is below `1e-20` beyond it.
pub const GAUSSIAN_RADIUS: f64 = 11.75;

/// Probabilists' Hermite polynomial `He_k(u)`.
pub fn hermite_he(k: usize, u: f64) -> f64 {
    let (mut a, mut b) = (1.0, u);
    if k == 0 {
        return a;
    }
    for j in 1..k {
        let c = u * b - j as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// `d^k/dx^k exp(-(x-c)²/(2σ²))`.
pub fn gaussian_1d(k: usize, x: f64, c: f64, sigma: f64) -> f64 {
    let u = (x - c) / sigma;
    if u.abs() > GAUSSIAN_RADIUS + 4.0 {
        return 0.0;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite_he(k, u) * (-0.5 * u * u).exp() / sigma.powi(k as i32)
}

/// A function on `ℝⁿ` with all mixed partials available and an axis box
/// outside which it vanishes (to double precision).
pub trait SmoothFunction: fmt::Debug + Send + Sync {
    fn dim(&self) -> usize;

    /// `∂^a f(x)` for a multi-index `a`.
    fn partial(&self, a: &[usize], x: &[f64]) -> f64;

    fn support(&self) -> Vec<(f64, f64)>;

    fn value(&self, x: &[f64]) -> f64 {
        self.partial(&vec![0; self.dim()], x)
    }
}

/// `A Π exp(-(x_i-c_i)²/(2σ²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub amplitude: f64,
}

impl SmoothFunction for Gaussian {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn partial(&self, a: &[usize], x: &[f64]) -> f64 {
        let mut v = self.amplitude;
        for i in 0..self.center.len() {
            v *= gaussian_1d(a[i], x[i], self.center[i], self.sigma);
            if v == 0.0 {
                break;
            }
        }
        v
    }

    fn support(&self) -> Vec<(f64, f64)> {
        let r = GAUSSIAN_RADIUS * self.sigma;
        self.center.iter().map(|&c| (c - r, c + r)).collect()
    }
}

/// `Π cos(ω_i x_i + φ_i)` times a [`Gaussian`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrigGaussian {
    pub envelope: Gaussian,
    pub freq: Vec<f64>,
    pub phase: Vec<f64>,
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

impl SmoothFunction for TrigGaussian {
    fn dim(&self) -> usize {
        self.envelope.dim()
    }

    fn partial(&self, a: &[usize], x: &[f64]) -> f64 {
        let g = &self.envelope;
        let mut v = g.amplitude;
        for i in 0..self.dim() {
            let (w, p) = (self.freq[i], self.phase[i]);
            let mut s = 0.0;
            for j in 0..=a[i] {
                let trig = (w * x[i] + p + j as f64 * std::f64::consts::FRAC_PI_2).cos()
                    * w.powi(j as i32);
                s += binom(a[i], j) * trig * gaussian_1d(a[i] - j, x[i], g.center[i], g.sigma);
            }
            v *= s;
            if v == 0.0 {
                break;
            }
        }
        v
    }

    fn support(&self) -> Vec<(f64, f64)> {
        self.envelope.support()
    }
}

/// `C^r` step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, with `S'(t) ∝ t^r (1-t)^r`.
#[derive(Debug, Clone, PartialEq)]
struct SmoothStep {
    r: usize,
    norm: f64,
}

impl SmoothStep {
    fn new(r: usize) -> Self {
        // 1/B(r+1, r+1) = (2r+1)!/(r!)²
        let norm = (1..=r).fold(2.0 * r as f64 + 1.0, |acc, j| {
            acc * (r + j) as f64 / j as f64
        });
        SmoothStep { r, norm }
    }

    fn derivative(&self, j: usize, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return if j == 0 { 1.0 } else { 0.0 };
        }
        let r = self.r;
        let n = 2 * r + 1;
        if j == 0 {
            // Binomial tail: P(Bin(2r+1, t) ≥ r+1).
            return (r + 1..=n)
                .map(|i| binom(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
                .sum();
        }
        // d^{j-1}/dt^{j-1} of t^r (1-t)^r by Leibniz.
        let m = j - 1;
        let mut s = 0.0;
        for i in 0..=m.min(r) {
            let rest = m - i;
            if rest > r {
                continue;
            }
            let left = falling(r, i) * t.powi((r - i) as i32);
            let right = falling(r, rest)
                * (1.0 - t).powi((r - rest) as i32)
                * if rest.is_multiple_of(2) { 1.0 } else { -1.0 };
            s += binom(m, i) * left * right;
        }
        self.norm * s
    }
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64)
}

/// A polynomial times a separable `C^r` cutoff equal to 1 on the box
/// `Π [lo_i, hi_i]` and 0 outside the box widened by `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBump {
    terms: Vec<(Vec<u32>, f64)>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    width: f64,
    step: SmoothStep,
}

impl PolyBump {
    pub fn new(p: &MPoly, lo: Vec<f64>, hi: Vec<f64>, width: f64, smoothness: usize) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| (e.clone(), rational_to_f64(c)))
            .collect();
        PolyBump {
            terms,
            lo,
            hi,
            width,
            step: SmoothStep::new(smoothness),
        }
    }

    fn cutoff(&self, i: usize, j: usize, x: f64) -> f64 {
        let w = self.width;
        if x >= self.lo[i] && x <= self.hi[i] {
            return if j == 0 { 1.0 } else { 0.0 };
        }
        if x > self.hi[i] {
            let t = 1.0 - (x - self.hi[i]) / w;
            let s = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            s * self.step.derivative(j, t) / w.powi(j as i32)
        } else {
            let t = (x - (self.lo[i] - w)) / w;
            self.step.derivative(j, t) / w.powi(j as i32)
        }
    }

    fn poly_partial(&self, b: &[usize], x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (e, c) in &self.terms {
            let mut v = *c;
            for i in 0..x.len() {
                let (ei, bi) = (e[i] as usize, b[i]);
                if bi > ei {
                    v = 0.0;
                    break;
                }
                v *= falling(ei, bi) * x[i].powi((ei - bi) as i32);
            }
            s += v;
        }
        s
    }
}

impl SmoothFunction for PolyBump {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn partial(&self, a: &[usize], x: &[f64]) -> f64 {
        let n = self.dim();
        if (0..n).any(|i| x[i] <= self.lo[i] - self.width || x[i] >= self.hi[i] + self.width) {
            return 0.0;
        }
        // Leibniz over every split b ≤ a.
        let mut total = 0.0;
        let mut b = vec![0usize; n];
        loop {
            let mut coeff = 1.0;
            for i in 0..n {
                coeff *= binom(a[i], b[i]) * self.cutoff(i, a[i] - b[i], x[i]);
                if coeff == 0.0 {
                    break;
                }
            }
            if coeff != 0.0 {
                total += coeff * self.poly_partial(&b, x);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                if b[i] < a[i] {
                    b[i] += 1;
                    break;
                }
                b[i] = 0;
                i += 1;
            }
        }
    }

    fn support(&self) -> Vec<(f64, f64)> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (l - self.width, h + self.width))
            .collect()
    }
}

/// The zero function, for the trivial cases of the harness.
#[derive(Debug, Clone, PartialEq)]
pub struct Zero(pub usize);

impl SmoothFunction for Zero {
    fn dim(&self) -> usize {
        self.0
    }

    fn partial(&self, _: &[usize], _: &[f64]) -> f64 {
        0.0
    }

    fn support(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 0.0); self.0]
    }
}

/// `∂_t^β` of `g(t) = f(v + Σ t_i α_i)` as a combination of partials of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalExpansion {
    pub terms: Vec<(f64, Vec<usize>)>,
}

impl DirectionalExpansion {
    /// `Π_i (α_i · ∇)^{β_i}`, expanded.
    pub fn new(alphas: &[Vec<f64>], beta: &[usize]) -> Self {
        let n = alphas.first().map_or(0, Vec::len);
        let mut acc: Vec<(f64, Vec<usize>)> = vec![(1.0, vec![0; n])];
        for (alpha, &b) in alphas.iter().zip(beta) {
            for _ in 0..b {
                let mut next: Vec<(f64, Vec<usize>)> = Vec::new();
                for (c, a) in &acc {
                    for (j, &aj) in alpha.iter().enumerate() {
                        if aj == 0.0 {
                            continue;
                        }
                        let mut e = a.clone();
                        e[j] += 1;
                        match next.iter_mut().find(|(_, x)| *x == e) {
                            Some(slot) => slot.0 += c * aj,
                            None => next.push((c * aj, e)),
                        }
                    }
                }
                acc = next;
            }
        }
        DirectionalExpansion { terms: acc }
    }

    pub fn apply(&self, f: &dyn SmoothFunction, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, a)| c * f.partial(a, x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &dyn SmoothFunction, x: &[f64], max_order: usize) {
        let h = 1e-4;
        let n = f.dim();
        let mut orders: Vec<Vec<usize>> = vec![vec![0; n]];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for a in &orders {
                for i in 0..n {
                    let mut b = a.clone();
                    b[i] += 1;
                    next.push(b);
                }
            }
            orders.extend(next);
        }
        orders.sort();
        orders.dedup();
        for a in orders
            .iter()
            .filter(|a| a.iter().sum::<usize>() < max_order)
        {
            for i in 0..n {
                let mut b = a.clone();
                b[i] += 1;
                let at = |s: f64| {
                    let mut y = x.to_vec();
                    y[i] += s * h;
                    f.partial(a, &y)
                };
                let fd = (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * h);
                let exact = f.partial(&b, x);
                let scale = exact.abs().max(1e-3);
                assert!(
                    (fd - exact).abs() / scale < 1e-6,
                    "{a:?}+e{i}: fd {fd} exact {exact}"
                );
            }
        }
    }

    #[test]
    fn hermite_recurrence() {
        assert_eq!(hermite_he(0, 2.0), 1.0);
        assert_eq!(hermite_he(2, 2.0), 3.0);
        assert_eq!(hermite_he(3, 2.0), 2.0);
    }

    #[test]
    fn gaussian_derivatives() {
        let g = Gaussian {
            center: vec![0.3, -0.2],
            sigma: 0.7,
            amplitude: 2.0,
        };
        fd_check(&g, &[0.5, 0.1], 4);
    }

    #[test]
    fn trig_derivatives() {
        let g = TrigGaussian {
            envelope: Gaussian {
                center: vec![1.0, 0.0],
                sigma: 1.3,
                amplitude: 1.0,
            },
            freq: vec![1.7, 0.4],
            phase: vec![0.2, -1.0],
        };
        fd_check(&g, &[0.8, 0.6], 4);
    }

    #[test]
    fn bump_derivatives_and_flat_top() {
        let p = MPoly::parse("x1^2 - 3*x1*x2 + 1", 2).unwrap();
        let f = PolyBump::new(&p, vec![0.0, 0.0], vec![1.0, 1.0], 2.0, 8);
        assert_eq!(f.value(&[0.5, 0.5]), p.eval_f64(&[0.5, 0.5]));
        assert_eq!(f.value(&[3.5, 0.5]), 0.0);
        // Inside the ramp on both axes.
        fd_check(&f, &[1.7, -0.6], 4);
        let s = SmoothStep::new(3);
        assert!((s.derivative(0, 0.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn directional_expansion_matches_chain_rule() {
        let g = Gaussian {
            center: vec![0.0, 0.0],
            sigma: 1.0,
            amplitude: 1.0,
        };
        let alphas = vec![vec![1.0, 2.0], vec![-0.5, 0.0]];
        let e = DirectionalExpansion::new(&alphas, &[1, 1]);
        let x = [0.3, 0.4];
        let h = 1e-4;
        let g_t = |t0: f64, t1: f64| {
            g.value(&[
                x[0] + t0 * alphas[0][0] + t1 * alphas[1][0],
                x[1] + t0 * alphas[0][1] + t1 * alphas[1][1],
            ])
        };
        let fd = (g_t(h, h) - g_t(h, -h) - g_t(-h, h) + g_t(-h, -h)) / (4.0 * h * h);
        assert!((e.apply(&g, &x) - fd).abs() < 1e-6);
    }
}
