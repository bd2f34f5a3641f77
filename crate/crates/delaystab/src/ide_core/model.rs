//! Plant and controller data models.

use num_complex::Complex64;

use super::SampledKernel;
use crate::linalg::{CMat, RMat};
use crate::{Error, Result};

/// The integral-difference plant
/// x(t) = Σᵢⱼ H_ij x(t−(rᵢ+sⱼ)) + ∫_{−τ}^{0} w₁(θ) x(t+θ) dθ + u(t).
#[derive(Debug, Clone)]
pub struct IdeModel {
    k: usize,
    ell: usize,
    /// k×ℓ table of ℓ×ℓ blocks, row-major.
    h: Vec<RMat>,
    r: Vec<f64>,
    s: Vec<f64>,
    tau: f64,
    w1: SampledKernel,
}

fn check_delays(name: &str, d: &[f64]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::Structural(format!("{name} must be nonempty")));
    }
    if d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Structural(format!("{name} entries must be positive")));
    }
    if d.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Structural(format!(
            "{name} must be strictly decreasing (velocity ordering)"
        )));
    }
    Ok(())
}

impl IdeModel {
    /// `h` is indexed `h[i * ell + j]` for delay rᵢ + sⱼ.
    pub fn new(h: Vec<RMat>, r: Vec<f64>, s: Vec<f64>, w1: SampledKernel) -> Result<Self> {
        check_delays("r", &r)?;
        check_delays("s", &s)?;
        let (k, ell_from_w1) = (r.len(), w1.ell());
        let ell = s.len();
        if ell_from_w1 != ell {
            return Err(Error::Structural(format!(
                "kernel blocks are {ell_from_w1}x{ell_from_w1} but s has length {ell}"
            )));
        }
        if h.len() != k * ell {
            return Err(Error::Structural(format!(
                "H table has {} blocks, expected k*ell = {}",
                h.len(),
                k * ell
            )));
        }
        if h.iter().any(|m| m.nrows() != ell || m.ncols() != ell) {
            return Err(Error::Structural(format!("H blocks must be {ell}x{ell}")));
        }
        let tau = r[0] + s[0];
        if !(tau > 0.0) {
            return Err(Error::Structural("tau = r1 + s1 must be positive".into()));
        }
        let (a, b) = w1.domain();
        let tol = 1e-10 * tau;
        if (a + tau).abs() > tol || b.abs() > tol {
            return Err(Error::Structural(format!(
                "kernel domain [{a}, {b}] must equal [-tau, 0] = [{}, 0]",
                -tau
            )));
        }
        Ok(Self { k, ell, h, r, s, tau, w1 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn h(&self, i: usize, j: usize) -> &RMat {
        &self.h[i * self.ell + j]
    }

    pub fn h_blocks(&self) -> &[RMat] {
        &self.h
    }

    pub fn w1(&self) -> &SampledKernel {
        &self.w1
    }

    /// Smallest discrete delay rᵢ + sⱼ.
    pub fn min_delay(&self) -> f64 {
        self.r[self.k - 1] + self.s[self.ell - 1]
    }

    /// Σᵢⱼ H_ij e^{−λ(rᵢ+sⱼ)}.
    pub fn difference_transform(&self, lambda: Complex64) -> CMat {
        let mut acc = CMat::zeros(self.ell, self.ell);
        for i in 0..self.k {
            for j in 0..self.ell {
                let f = (-lambda * (self.r[i] + self.s[j])).exp();
                let hij = self.h(i, j);
                for p in 0..self.ell {
                    for q in 0..self.ell {
                        acc[(p, q)] += f * hij[(p, q)];
                    }
                }
            }
        }
        acc
    }

    /// Σᵢⱼ ‖H_ij‖₂, a bound used when picking root-search regions.
    pub fn h_norm_sum(&self) -> f64 {
        self.h.iter().map(|m| crate::linalg::norm2(&crate::linalg::complexify(m))).sum()
    }
}

/// Low-pass-filtered feedback law built from assumed plant data.
///
/// The implemented distributed kernel is
/// w₂(θ) = ŵ₁(θ) − (1/τ̂) w_des(θ/τ̂) on [−τ̂, 0],
/// and the control signal obeys T u̇ + u = −Σ Ĥᵢⱼ x(t−(r̂ᵢ+ŝⱼ)) − ∫ w₂ x.
#[derive(Debug, Clone)]
pub struct FilteredController {
    t_filter: f64,
    khat: usize,
    ell: usize,
    hhat: Vec<RMat>,
    rhat: Vec<f64>,
    shat: Vec<f64>,
    tauhat: f64,
    w1hat: SampledKernel,
    wdes: SampledKernel,
    /// Cached implemented kernel w₂ on [−τ̂, 0].
    w2: SampledKernel,
}

impl FilteredController {
    /// `wdes` is the desired target shape on [−1, 0].
    pub fn new(
        t_filter: f64,
        hhat: Vec<RMat>,
        rhat: Vec<f64>,
        shat: Vec<f64>,
        w1hat: SampledKernel,
        wdes: SampledKernel,
    ) -> Result<Self> {
        if !(t_filter >= 0.0) {
            return Err(Error::Structural("filter constant T must be >= 0".into()));
        }
        check_delays("rhat", &rhat)?;
        check_delays("shat", &shat)?;
        let (khat, ell) = (rhat.len(), shat.len());
        if hhat.len() != khat * ell || hhat.iter().any(|m| m.nrows() != ell || m.ncols() != ell) {
            return Err(Error::Structural(
                "assumed H table must be k x ell of ell x ell blocks".into(),
            ));
        }
        let tauhat = rhat[0] + shat[0];
        let (a, b) = w1hat.domain();
        if (a + tauhat).abs() > 1e-10 * tauhat || b.abs() > 1e-10 * tauhat {
            return Err(Error::Structural(
                "assumed kernel domain must be [-tauhat, 0]".into(),
            ));
        }
        let (wa, wb) = wdes.domain();
        if (wa + 1.0).abs() > 1e-12 || wb.abs() > 1e-12 {
            return Err(Error::Structural("wdes must live on [-1, 0]".into()));
        }
        if wdes.ell() != ell || w1hat.ell() != ell {
            return Err(Error::Dimension(
                "kernel block order must match shat length".into(),
            ));
        }
        let w2 = implemented_kernel(&w1hat, &wdes, tauhat)?;
        Ok(Self {
            t_filter,
            khat,
            ell,
            hhat,
            rhat,
            shat,
            tauhat,
            w1hat,
            wdes,
            w2,
        })
    }

    /// Same controller with a different filter constant (seconds).
    pub fn with_filter_constant(&self, t_filter: f64) -> Result<Self> {
        if !(t_filter >= 0.0) {
            return Err(Error::Structural("filter constant T must be >= 0".into()));
        }
        let mut c = self.clone();
        c.t_filter = t_filter;
        Ok(c)
    }

    pub fn t_filter(&self) -> f64 {
        self.t_filter
    }

    pub fn khat(&self) -> usize {
        self.khat
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn tauhat(&self) -> f64 {
        self.tauhat
    }

    pub fn rhat(&self) -> &[f64] {
        &self.rhat
    }

    pub fn shat(&self) -> &[f64] {
        &self.shat
    }

    pub fn hhat(&self, i: usize, j: usize) -> &RMat {
        &self.hhat[i * self.ell + j]
    }

    pub fn w1hat(&self) -> &SampledKernel {
        &self.w1hat
    }

    pub fn wdes(&self) -> &SampledKernel {
        &self.wdes
    }

    /// The kernel w₂ the control law actually applies.
    pub fn implemented_kernel(&self) -> &SampledKernel {
        &self.w2
    }

    /// Σᵢⱼ Ĥᵢⱼ e^{−λ(r̂ᵢ+ŝⱼ)}.
    pub fn difference_transform(&self, lambda: Complex64) -> CMat {
        let mut acc = CMat::zeros(self.ell, self.ell);
        for i in 0..self.khat {
            for j in 0..self.ell {
                let f = (-lambda * (self.rhat[i] + self.shat[j])).exp();
                let hij = self.hhat(i, j);
                for p in 0..self.ell {
                    for q in 0..self.ell {
                        acc[(p, q)] += f * hij[(p, q)];
                    }
                }
            }
        }
        acc
    }

    /// True when the assumed data coincide with the model's (nominal law).
    pub fn is_nominal_for(&self, model: &IdeModel) -> bool {
        let tol = 1e-12;
        self.khat == model.k()
            && self.ell == model.ell()
            && self
                .rhat
                .iter()
                .zip(model.r())
                .all(|(a, b)| (a - b).abs() <= tol * (1.0 + b.abs()))
            && self
                .shat
                .iter()
                .zip(model.s())
                .all(|(a, b)| (a - b).abs() <= tol * (1.0 + b.abs()))
            && self
                .hhat
                .iter()
                .zip(model.h_blocks())
                .all(|(a, b)| (a - b).norm() <= tol * (1.0 + b.norm()))
    }
}

fn implemented_kernel(
    w1hat: &SampledKernel,
    wdes: &SampledKernel,
    tauhat: f64,
) -> Result<SampledKernel> {
    // merged breakpoints of w1hat and the rescaled wdes
    let mut bps: Vec<f64> = w1hat.breakpoints();
    for b in wdes.breakpoints() {
        bps.push(b * tauhat);
    }
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * tauhat);
    let nodes = w1hat.max_nodes_per_piece().max(wdes.max_nodes_per_piece()).max(64);
    let ell = w1hat.ell();
    let w1c = w1hat.clone();
    let wdc = wdes.clone();
    SampledKernel::from_fn(&bps, nodes, ell, move |theta| {
        let a = w1c.eval(theta).unwrap_or_else(|_| RMat::zeros(ell, ell));
        let b = wdc
            .eval((theta / tauhat).clamp(-1.0, 0.0))
            .unwrap_or_else(|_| RMat::zeros(ell, ell));
        a - b / tauhat
    })
}

/// How fragile the stabilized loop is with respect to small delay errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragility {
    /// γ₁ < 1: the unfiltered cancellation law is already strongly stable.
    RobustUnfiltered,
    /// γ₀ < 1 ≤ γ₁: cancellation is fragile, a low-pass filter restores margins.
    FilterRequired,
    /// γ₀ ≥ 1: no strong stabilization possible.
    NotStronglyStabilizable,
}

impl std::fmt::Display for Fragility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fragility::RobustUnfiltered => write!(f, "robust-unfiltered"),
            Fragility::FilterRequired => write!(f, "filter-required"),
            Fragility::NotStronglyStabilizable => write!(f, "not-strongly-stabilizable"),
        }
    }
}

/// Aggregate classification record.
#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    /// Spectral abscissa; `None` when the scan found no roots (empty spectrum).
    pub abscissa: Option<f64>,
    pub gamma0: f64,
    pub gamma1: f64,
    pub fragility: Fragility,
}
