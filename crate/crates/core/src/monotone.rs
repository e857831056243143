//! Monotone schemes in differenced form and the CFL test.

use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D};
use crate::hamiltonian::Hamiltonian;
use crate::par;

/// One-sided difference quotients at a node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slopes {
    pub pm: f64,
    pub pp: f64,
    pub qm: f64,
    pub qp: f64,
}

impl Slopes {
    pub fn matched(p: f64, q: f64) -> Self {
        Self { pm: p, pp: p, qm: q, qp: q }
    }

    pub fn at(field: &Field2D, j: usize, i: usize) -> Self {
        let (j, i) = (j as isize, i as isize);
        let u = field.at(j, i);
        let g = &field.grid;
        Self {
            pm: (u - field.at(j - 1, i)) / g.dx,
            pp: (field.at(j + 1, i) - u) / g.dx,
            qm: (u - field.at(j, i - 1)) / g.dy,
            qp: (field.at(j, i + 1) - u) / g.dy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneScheme {
    /// Only valid for H = √(p² + q²).
    Eikonal,
    LocalLaxFriedrichs,
}

/// √(max{p⁻, −p⁺, 0}² + max{q⁻, −q⁺, 0}²).
pub fn h_eikonal(s: Slopes) -> f64 {
    let a = s.pm.max(-s.pp).max(0.0);
    let b = s.qm.max(-s.qp).max(0.0);
    a.hypot(b)
}

/// Dissipation speeds (α_x, α_y): max of |H_p| over I(p⁻, p⁺) with q
/// frozen at its centered value, and likewise for |H_q|.
pub fn llf_speeds(h: &dyn Hamiltonian, x: f64, y: f64, s: Slopes) -> (f64, f64) {
    let pc = 0.5 * (s.pm + s.pp);
    let qc = 0.5 * (s.qm + s.qp);
    (h.max_abs_dp(x, y, s.pm, s.pp, qc), h.max_abs_dq(x, y, pc, s.qm, s.qp))
}

pub fn h_llf(h: &dyn Hamiltonian, x: f64, y: f64, s: Slopes) -> f64 {
    let (ax, ay) = llf_speeds(h, x, y, s);
    h.eval(x, y, 0.5 * (s.pm + s.pp), 0.5 * (s.qm + s.qp))
        - 0.5 * ax * (s.pp - s.pm)
        - 0.5 * ay * (s.qp - s.qm)
}

impl MonotoneScheme {
    pub fn flux(self, h: &dyn Hamiltonian, x: f64, y: f64, s: Slopes) -> f64 {
        match self {
            MonotoneScheme::Eikonal => h_eikonal(s),
            MonotoneScheme::LocalLaxFriedrichs => h_llf(h, x, y, s),
        }
    }

    pub fn check(self, h: &dyn Hamiltonian) -> Result<()> {
        if self == MonotoneScheme::Eikonal && !h.is_eikonal() {
            return Err(Error::Config(
                "the eikonal flux requires H = sqrt(p^2 + q^2)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CflReport {
    /// max(λ_x·vmax_p, λ_y·vmax_q).
    pub ratio: f64,
    pub bound: f64,
}

impl CflReport {
    pub const BOUND: f64 = 0.5;

    pub fn passes(&self) -> bool {
        // Slack for λ values such as π/16 that are only representable approximately.
        self.ratio <= self.bound * (1.0 + 1e-12)
    }

    pub fn margin(&self) -> f64 {
        self.bound - self.ratio
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passes() {
            Ok(self)
        } else {
            Err(Error::Cfl { ratio: self.ratio, bound: self.bound })
        }
    }
}

pub fn cfl_check(h: &dyn Hamiltonian, dt: f64, grid: &Grid2D) -> CflReport {
    let (vp, vq) = h.vmax();
    let ratio = (dt / grid.dx * vp).max(dt / grid.dy * vq);
    CflReport { ratio, bound: CflReport::BOUND }
}

/// S^M(u) as a flat vector; no CFL check.
pub(crate) fn monotone_values(field: &Field2D, scheme: MonotoneScheme, h: &dyn Hamiltonian, dt: f64) -> Vec<f64> {
    let g = field.grid;
    let u = field.values();
    par::map_nodes(g.len(), |k| {
        let (j, i) = g.split(k);
        u[k] - dt * scheme.flux(h, g.x(j), g.y(i), Slopes::at(field, j, i))
    })
}

pub fn monotone_step(field: &Field2D, scheme: MonotoneScheme, h: &dyn Hamiltonian, dt: f64) -> Result<Field2D> {
    scheme.check(h)?;
    cfl_check(h, dt, &field.grid).into_result()?;
    Ok(field.with_values(monotone_values(field, scheme, h, dt)))
}
