//! Piecewise-polynomial kernel representation with exact exponential moments.
//!
//! Distributed-delay kernels enter every characteristic function through
//! W(λ) = ∫ w(θ) e^{λθ} dθ. Storing the kernel as a piecewise cubic
//! interpolant lets that integral be evaluated panel by panel from the
//! closed-form moments ∫ uᵖ e^{λu} du, which stays accurate for arbitrarily
//! large |Im λ| where ordinary quadrature would have to chase oscillations.

use num_complex::Complex64;

use crate::linalg::{CMat, RMat};
use crate::{Error, Result};

/// Interpolation degree of each panel.
pub const INTERP_ORDER: usize = 3;

/// One smooth piece of the kernel: uniform samples between two breakpoints.
#[derive(Debug, Clone)]
struct Piece {
    start: f64,
    end: f64,
    /// ℓ×ℓ values at the uniform nodes; length ≡ 1 (mod 3), ≥ 4.
    samples: Vec<RMat>,
}

/// A cubic panel in local coordinates u ∈ [0, width]:
/// P(u) = c₀ + c₁ u + c₂ u² + c₃ u³ with matrix coefficients.
#[derive(Debug, Clone)]
struct Panel {
    start: f64,
    width: f64,
    coef: [RMat; 4],
}

/// Matrix-valued kernel on an interval [a, b], stored as piecewise cubic
/// interpolants on per-piece uniform grids.
#[derive(Debug, Clone)]
pub struct SampledKernel {
    ell: usize,
    pieces: Vec<Piece>,
    panels: Vec<Panel>,
}

/// Round a node-count request up to the next valid value (≥ 4, ≡ 1 mod 3).
fn valid_node_count(n: usize) -> usize {
    let n = n.max(4);
    match (n - 1) % 3 {
        0 => n,
        r => n + (3 - r),
    }
}

/// Monomial coefficients of the cubic through values y₀..y₃ at
/// u = 0, w/3, 2w/3, w. Closed-form inverse of the uniform Vandermonde.
fn cubic_coefficients(y: &[RMat], w: f64) -> [RMat; 4] {
    let h = w / 3.0;
    let c0 = y[0].clone();
    // divided differences on the uniform grid
    let d1 = (&y[1] - &y[0]) / h;
    let d2 = (&y[2] - &y[1]) / h;
    let d3 = (&y[3] - &y[2]) / h;
    let dd1 = (&d2 - &d1) / (2.0 * h);
    let dd2 = (&d3 - &d2) / (2.0 * h);
    let ddd = (&dd2 - &dd1) / (3.0 * h);
    // Newton form -> monomials with nodes 0, h, 2h
    // P(u) = c0 + d1 u + dd1 u(u-h) + ddd u(u-h)(u-2h)
    let c1 = &d1 - &(&dd1 * h) + &(&ddd * (2.0 * h * h));
    let c2 = &dd1 - &(&ddd * (3.0 * h));
    let c3 = ddd;
    [c0, c1, c2, c3]
}

impl SampledKernel {
    /// Sample a matrix-valued function. `breakpoints` delimit the smooth
    /// pieces (strictly increasing, first = domain start, last = domain end);
    /// `nodes_per_piece` is rounded up so each piece carries whole cubic
    /// panels.
    pub fn from_fn<F>(breakpoints: &[f64], nodes_per_piece: usize, ell: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> RMat,
    {
        if breakpoints.len() < 2 {
            return Err(Error::Structural(
                "kernel needs at least two breakpoints".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Structural(
                "kernel breakpoints must be strictly increasing".into(),
            ));
        }
        let n = valid_node_count(nodes_per_piece);
        let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
        for w in breakpoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            let samples: Vec<RMat> = (0..n)
                .map(|i| {
                    let t = a + (b - a) * (i as f64) / ((n - 1) as f64);
                    f(t)
                })
                .collect();
            pieces.push(Piece {
                start: a,
                end: b,
                samples,
            });
        }
        Self::build(ell, pieces)
    }

    /// Construct from explicit per-piece sample tables (uniform within each
    /// piece, endpoints included).
    pub fn from_samples(breakpoints: &[f64], ell: usize, samples: Vec<Vec<RMat>>) -> Result<Self> {
        if breakpoints.len() < 2 || samples.len() != breakpoints.len() - 1 {
            return Err(Error::Structural(
                "sample tables must cover every breakpoint interval".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Structural(
                "kernel breakpoints must be strictly increasing".into(),
            ));
        }
        let mut pieces = Vec::new();
        for (w, s) in breakpoints.windows(2).zip(samples) {
            if s.len() < INTERP_ORDER + 1 || (s.len() - 1) % INTERP_ORDER != 0 {
                return Err(Error::Structural(format!(
                    "piece [{}, {}] needs 3m+1 >= 4 samples, got {}",
                    w[0],
                    w[1],
                    s.len()
                )));
            }
            pieces.push(Piece {
                start: w[0],
                end: w[1],
                samples: s,
            });
        }
        Self::build(ell, pieces)
    }

    /// Zero kernel on [a, b].
    pub fn zero(a: f64, b: f64, ell: usize) -> Result<Self> {
        Self::from_fn(&[a, b], 4, ell, |_| RMat::zeros(ell, ell))
    }

    /// Constant scalar kernel on [a, b].
    pub fn constant(a: f64, b: f64, value: f64) -> Result<Self> {
        Self::from_fn(&[a, b], 4, 1, |_| RMat::from_element(1, 1, value))
    }

    fn build(ell: usize, pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            for s in &p.samples {
                if s.nrows() != ell || s.ncols() != ell {
                    return Err(Error::Structural(format!(
                        "kernel sample is {}x{}, expected {}x{}",
                        s.nrows(),
                        s.ncols(),
                        ell,
                        ell
                    )));
                }
            }
        }
        let mut panels = Vec::new();
        for p in &pieces {
            let m = (p.samples.len() - 1) / 3;
            let dx = (p.end - p.start) / ((p.samples.len() - 1) as f64);
            let w = 3.0 * dx;
            for j in 0..m {
                let coef = cubic_coefficients(&p.samples[3 * j..3 * j + 4], w);
                panels.push(Panel {
                    start: p.start + (3 * j) as f64 * dx,
                    width: w,
                    coef,
                });
            }
        }
        Ok(Self { ell, pieces, panels })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Domain (first breakpoint, last breakpoint).
    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces.first().map(|p| p.start).unwrap_or(0.0),
            self.pieces.last().map(|p| p.end).unwrap_or(0.0),
        )
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().map(|p| p.start).collect();
        if let Some(p) = self.pieces.last() {
            b.push(p.end);
        }
        b
    }

    /// Largest node count over the pieces.
    pub fn max_nodes_per_piece(&self) -> usize {
        self.pieces.iter().map(|p| p.samples.len()).max().unwrap_or(0)
    }

    /// Evaluate the interpolant at θ (must lie inside the domain).
    pub fn eval(&self, theta: f64) -> Result<RMat> {
        let (a, b) = self.domain();
        let tol = 1e-12 * (1.0 + b.abs().max(a.abs()));
        if theta < a - tol || theta > b + tol {
            return Err(Error::Range(format!(
                "kernel evaluated at {theta}, outside domain [{a}, {b}]"
            )));
        }
        let theta = theta.clamp(a, b);
        let panel = match self
            .panels
            .binary_search_by(|p| p.start.partial_cmp(&theta).unwrap())
        {
            Ok(i) => &self.panels[i],
            Err(0) => &self.panels[0],
            Err(i) => &self.panels[i - 1],
        };
        let u = (theta - panel.start).clamp(0.0, panel.width);
        let mut acc = panel.coef[3].clone();
        for p in (0..3).rev() {
            acc = acc * u + &panel.coef[p];
        }
        Ok(acc)
    }

    /// W(λ) = ∫ w(θ) e^{λθ} dθ over the whole domain, computed panel by
    /// panel from closed-form exponential moments.
    pub fn transform(&self, lambda: Complex64) -> CMat {
        let mut acc = CMat::zeros(self.ell, self.ell);
        for panel in &self.panels {
            let m = exp_moments(lambda, panel.width);
            let shift = (lambda * panel.start).exp();
            for (p, c) in panel.coef.iter().enumerate() {
                let factor = shift * m[p];
                for i in 0..self.ell {
                    for j in 0..self.ell {
                        acc[(i, j)] += factor * c[(i, j)];
                    }
                }
            }
        }
        acc
    }

    /// Sup of the Frobenius norms over the sample nodes.
    pub fn sup_norm(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| p.samples.iter())
            .map(|s| s.norm())
            .fold(0.0, f64::max)
    }

    /// L¹ norm of the interpolant, from the degree-0 exponential moments.
    pub fn l1_norm(&self) -> f64 {
        // crude but sufficient: trapezoid over the sample nodes
        let mut acc = 0.0;
        for p in &self.pieces {
            let dx = (p.end - p.start) / ((p.samples.len() - 1) as f64);
            for w in p.samples.windows(2) {
                acc += 0.5 * dx * (w[0].norm() + w[1].norm());
            }
        }
        acc
    }
}

/// Closed-form moments mₚ = ∫₀ʰ uᵖ e^{λu} du for p = 0..3.
///
/// Upward recurrence for |λh| > 1; Taylor series otherwise (the recurrence
/// cancels catastrophically near λ = 0).
pub fn exp_moments(lambda: Complex64, h: f64) -> [Complex64; 4] {
    let x = lambda * h;
    let mut m = [Complex64::new(0.0, 0.0); 4];
    if x.norm() <= 1.0 {
        for (p, slot) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(h.powi(p as i32 + 1) / (p as f64 + 1.0), 0.0);
            let mut sum = term;
            let mut q = 1.0;
            loop {
                term = term * x * (p as f64 + q) / (q * (p as f64 + q + 1.0));
                sum += term;
                if term.norm() <= 1e-18 * sum.norm() || q > 40.0 {
                    break;
                }
                q += 1.0;
            }
            *slot = sum;
        }
    } else {
        let e = x.exp();
        m[0] = (e - 1.0) / lambda;
        for p in 1..4 {
            m[p] = (h.powi(p as i32) * e - (p as f64) * m[p - 1]) / lambda;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use approx::assert_relative_eq;

    fn scalar(v: f64) -> RMat {
        RMat::from_element(1, 1, v)
    }

    #[test]
    fn node_count_rounding() {
        assert_eq!(valid_node_count(2), 4);
        assert_eq!(valid_node_count(4), 4);
        assert_eq!(valid_node_count(5), 7);
        assert_eq!(valid_node_count(256), 256);
    }

    #[test]
    fn rejects_malformed_breakpoints() {
        assert!(SampledKernel::from_fn(&[0.0], 8, 1, |_| scalar(1.0)).is_err());
        assert!(SampledKernel::from_fn(&[0.0, -1.0], 8, 1, |_| scalar(1.0)).is_err());
        assert!(SampledKernel::from_samples(&[-1.0, 0.0], 1, vec![vec![scalar(0.0); 3]]).is_err());
    }

    #[test]
    fn reproduces_samples_at_nodes() {
        let tau = 1.7;
        let f = |t: f64| scalar((2.3 * t).sin() + 0.4 * t * t);
        let k = SampledKernel::from_fn(&[-tau, 0.0], 31, 1, f).unwrap();
        for i in 0..31 {
            let t = -tau + tau * (i as f64) / 30.0;
            assert_relative_eq!(k.eval(t).unwrap()[(0, 0)], f(t)[(0, 0)], max_relative = 1e-12, epsilon = 1e-13);
        }
        assert!(k.eval(0.2).is_err());
        assert!(k.eval(-2.0).is_err());
    }

    #[test]
    fn cubic_is_reproduced_exactly_between_nodes() {
        let poly = |t: f64| scalar(1.0 - 0.7 * t + 0.3 * t * t + 0.11 * t * t * t);
        let k = SampledKernel::from_fn(&[-2.0, 0.5], 10, 1, poly).unwrap();
        for i in 0..57 {
            let t = -2.0 + 2.5 * (i as f64) / 56.0;
            assert_relative_eq!(k.eval(t).unwrap()[(0, 0)], poly(t)[(0, 0)], epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_kernel_transform_closed_forms() {
        let tau = 0.5 + std::f64::consts::SQRT_2;
        let c = 1.3;
        let k = SampledKernel::constant(-tau, 0.0, c).unwrap();
        // λ = 0 → c·τ
        let w0 = k.transform(c64(0.0, 0.0));
        assert_relative_eq!(w0[(0, 0)].re, c * tau, epsilon = 1e-12);
        assert!(w0[(0, 0)].im.abs() < 1e-14);
        // λ = iω → c (1 − e^{−iωτ})/(iω)
        for &om in &[0.3, 2.0, 17.0, 400.0] {
            let lam = c64(0.0, om);
            let expect = c * (1.0 - (-lam * tau).exp()) / lam;
            let got = k.transform(lam)[(0, 0)];
            assert!((got - expect).norm() < 1e-12 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn moments_series_and_recurrence_agree_at_crossover() {
        let h = 0.37;
        for &(re, im) in &[(0.9 / h, 0.6 / h), (-1.1 / h, 0.2 / h), (0.0, 1.00001 / h)] {
            let lam = c64(re, im);
            let a = exp_moments(lam, h);
            // force the other branch by scaling λ slightly across |x| = 1
            let scale = if (lam * h).norm() > 1.0 { 0.999 } else { 1.001 };
            let b = exp_moments(lam * scale, h);
            for p in 0..4 {
                assert!((a[p] - b[p]).norm() < 2e-3 * (a[p].norm() + 1e-12));
            }
            // exactness against simpson on a fine grid
            for (p, got) in a.iter().enumerate() {
                let n = 4000;
                let mut s = c64(0.0, 0.0);
                for i in 0..=n {
                    let u = h * (i as f64) / (n as f64);
                    let f = u.powi(p as i32) * (lam * u).exp();
                    let w = if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    s += f * w;
                }
                s *= h / (n as f64) / 3.0;
                assert!((got - s).norm() < 1e-10 * (1.0 + s.norm()));
            }
        }
    }

    #[test]
    fn transform_linear_in_kernel() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let bp = [-1.4, -0.5, 0.0];
        for _ in 0..20 {
            let (p1, p2, p3, p4): (f64, f64, f64, f64) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let f1 = move |t: f64| scalar((p1 * t).cos() + p2 * t);
            let f2 = move |t: f64| scalar(p3 * t * t + (p4 * t).sin());
            let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let k1 = SampledKernel::from_fn(&bp, 16, 1, f1).unwrap();
            let k2 = SampledKernel::from_fn(&bp, 16, 1, f2).unwrap();
            let kc = SampledKernel::from_fn(&bp, 16, 1, move |t| &f1(t) * a + &f2(t) * b).unwrap();
            let lam = c64(rng.gen_range(-3.0..3.0), rng.gen_range(-30.0..30.0));
            let lhs = kc.transform(lam)[(0, 0)];
            let rhs = a * k1.transform(lam)[(0, 0)] + b * k2.transform(lam)[(0, 0)];
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
