//! One-dimensional smoothness indicators on five-point stencils (r = 2).

use crate::error::{Error, Result};
use crate::grid::Field1D;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant1D {
    Raw,
    MappedG,
    WenoZ,
    WenoZNew,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Indicator1DConfig {
    pub sigma: f64,
    /// Detection threshold M.
    pub threshold: f64,
    pub variant: Variant1D,
}

impl Default for Indicator1DConfig {
    fn default() -> Self {
        Self { sigma: 1.0, threshold: 0.2, variant: Variant1D::MappedG }
    }
}

impl Indicator1DConfig {
    pub fn validate(&self) -> Result<()> {
        validate_sigma_threshold(self.sigma, self.threshold)
    }
}

pub(crate) fn validate_sigma_threshold(sigma: f64, threshold: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
    }
    if !(threshold > 0.0 && threshold < 0.5) {
        return Err(Error::Config(format!("threshold must lie in (0, 1/2), got {threshold}")));
    }
    Ok(())
}

/// Smoothness coefficients left (`minus`) and right (`plus`) of a node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Betas1D {
    pub minus: [f64; 2],
    pub plus: [f64; 2],
}

impl Betas1D {
    /// `f[m]` is the sample at node `j + m - 2`.
    pub fn from_stencil(f: &[f64; 5], dx: f64) -> Self {
        let b = |m: usize| {
            let d = (f[m] - 2.0 * f[m + 1] + f[m + 2]) / dx;
            d * d
        };
        Self { minus: [b(0), b(1)], plus: [b(1), b(2)] }
    }
}

/// `w0 / (w0 + w1)` with `w = 1 / (β + σ_h)²`, written so that σ_h = 0 is
/// allowed; a 0/0 tie resolves to 1/2.
#[inline]
pub(crate) fn weight_ratio(beta_own: f64, beta_other: f64, sigma_h: f64) -> f64 {
    let a = (beta_other + sigma_h).powi(2);
    let b = (beta_own + sigma_h).powi(2);
    if a + b == 0.0 {
        0.5
    } else {
        a / (a + b)
    }
}

/// WENO-Z ratio `α_own / (α_own + α_other)` with p = 2.
#[inline]
pub(crate) fn weno_z_ratio(beta_own: f64, beta_other: f64, tau: f64, sigma_h: f64) -> f64 {
    let o = (beta_own + sigma_h).powi(2);
    let t = (beta_other + sigma_h).powi(2);
    let tau2 = tau * tau;
    let num = (o + tau2) * t;
    let den = num + (t + tau2) * o;
    if den == 0.0 {
        0.5
    } else {
        num / den
    }
}

/// Accuracy mapping g(ω) = 4ω(3/4 − 3ω/2 + ω²); input clamped to [0, 1].
pub fn map_g(w: f64) -> f64 {
    let w = w.clamp(0.0, 1.0);
    4.0 * w * (0.75 - 1.5 * w + w * w)
}

pub fn omega_from_betas(b: &Betas1D, sigma_h: f64, variant: Variant1D) -> f64 {
    // ω₊ favours the reference stencil β⁺₀, ω₋ favours β⁻₁.
    let (plus, minus) = match variant {
        Variant1D::Raw | Variant1D::MappedG => (
            weight_ratio(b.plus[0], b.plus[1], sigma_h),
            weight_ratio(b.minus[1], b.minus[0], sigma_h),
        ),
        Variant1D::WenoZ => {
            let tp = (b.plus[0] - b.plus[1]).abs();
            let tm = (b.minus[0] - b.minus[1]).abs();
            (
                weno_z_ratio(b.plus[0], b.plus[1], tp, sigma_h),
                weno_z_ratio(b.minus[1], b.minus[0], tm, sigma_h),
            )
        }
        Variant1D::WenoZNew => {
            let tau = (b.minus[0] - 2.0 * b.minus[1] + b.plus[1]).abs();
            (
                weno_z_ratio(b.plus[0], b.plus[1], tau, sigma_h),
                weno_z_ratio(b.minus[1], b.minus[0], tau, sigma_h),
            )
        }
    };
    if variant == Variant1D::MappedG {
        map_g(minus).min(map_g(plus))
    } else {
        minus.min(plus)
    }
}

pub fn omega_from_stencil(f: &[f64; 5], dx: f64, sigma: f64, variant: Variant1D) -> f64 {
    omega_from_betas(&Betas1D::from_stencil(f, dx), sigma * dx * dx, variant)
}

fn stencil(field: &Field1D, j: usize) -> [f64; 5] {
    std::array::from_fn(|m| field.at(j as isize + m as isize - 2))
}

pub fn beta_pm_1d(field: &Field1D, j: usize) -> Betas1D {
    Betas1D::from_stencil(&stencil(field, j), field.grid.dx)
}

pub fn omega_1d(field: &Field1D, j: usize, cfg: &Indicator1DConfig) -> f64 {
    omega_from_stencil(&stencil(field, j), field.grid.dx, cfg.sigma, cfg.variant)
}

/// φ = 1 where ω ≥ M, else 0.
pub fn phi_threshold(omega: &[f64], threshold: f64) -> Vec<f64> {
    omega.iter().map(|&w| if w >= threshold { 1.0 } else { 0.0 }).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Smoothness1D {
    pub omega: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Smoothness1D {
    /// Cell `(x_j, x_{j+1})` is flagged when either endpoint has φ = 0.
    pub fn flagged_cells(&self) -> Vec<bool> {
        self.phi.windows(2).map(|w| w[0] == 0.0 || w[1] == 0.0).collect()
    }
}

pub fn smoothness_1d(field: &Field1D, cfg: &Indicator1DConfig) -> Result<Smoothness1D> {
    cfg.validate()?;
    let omega: Vec<f64> = (0..field.grid.n).map(|j| omega_1d(field, j, cfg)).collect();
    let phi = phi_threshold(&omega, cfg.threshold);
    Ok(Smoothness1D { omega, phi })
}
