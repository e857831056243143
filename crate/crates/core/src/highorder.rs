//! High-order candidate schemes S^A. None of them is stable on its own;
//! they are meant to be filtered.

use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::hamiltonian::Hamiltonian;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HighOrderScheme {
    /// Centered slopes with Heun time stepping.
    Hc,
    Lw,
    Lw2,
    Richtmyer,
    /// Fourth-order central slopes with classical RK4.
    Rkc4,
}

/// Which q-argument (resp. p-argument) the staggered secants H*_x, H*_y use
/// on their backward half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StaggeredForm {
    /// Mirror image of the forward half.
    #[default]
    Symmetric,
    /// Drops one term of the transverse average in H*_x and flips the
    /// backward slope in H*_y. Not consistent on affine data.
    Skewed,
}

impl HighOrderScheme {
    pub fn order(self) -> usize {
        match self {
            HighOrderScheme::Rkc4 => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HighOrderScheme::Hc => "hc",
            HighOrderScheme::Lw => "lw",
            HighOrderScheme::Lw2 => "lw2",
            HighOrderScheme::Richtmyer => "richtmyer",
            HighOrderScheme::Rkc4 => "rkc4",
        }
    }

    pub fn check(self, h: &dyn Hamiltonian) -> Result<()> {
        if self == HighOrderScheme::Richtmyer && !h.space_independent() {
            return Err(Error::Config("the Richtmyer scheme needs H independent of (x, y)".into()));
        }
        Ok(())
    }

    pub fn step(self, field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Result<Field2D> {
        self.step_with(field, h, dt, StaggeredForm::default())
    }

    pub fn step_with(self, field: &Field2D, h: &dyn Hamiltonian, dt: f64, form: StaggeredForm) -> Result<Field2D> {
        self.check(h)?;
        Ok(field.with_values(self.values(field, h, dt, form)))
    }

    /// S^A(u) as a flat vector; assumes [`check`](Self::check) passed.
    pub(crate) fn values(self, field: &Field2D, h: &dyn Hamiltonian, dt: f64, form: StaggeredForm) -> Vec<f64> {
        match self {
            HighOrderScheme::Hc => heun(field, h, dt),
            HighOrderScheme::Lw => one_step(field, dt, |k| lw_flux(field, h, dt, k)),
            HighOrderScheme::Lw2 => one_step(field, dt, |k| lw2_flux(field, h, dt, k, form)),
            HighOrderScheme::Richtmyer => one_step(field, dt, |k| richtmyer_flux(field, h, dt, k, form)),
            HighOrderScheme::Rkc4 => rk4(field, h, dt),
        }
    }
}

pub fn hc_step(field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Result<Field2D> {
    HighOrderScheme::Hc.step(field, h, dt)
}

pub fn lw_step(field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Result<Field2D> {
    HighOrderScheme::Lw.step(field, h, dt)
}

pub fn lw2_step(field: &Field2D, h: &dyn Hamiltonian, dt: f64, form: StaggeredForm) -> Result<Field2D> {
    HighOrderScheme::Lw2.step_with(field, h, dt, form)
}

pub fn richtmyer_step(field: &Field2D, h: &dyn Hamiltonian, dt: f64, form: StaggeredForm) -> Result<Field2D> {
    HighOrderScheme::Richtmyer.step_with(field, h, dt, form)
}

pub fn rkc4_step(field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Result<Field2D> {
    HighOrderScheme::Rkc4.step(field, h, dt)
}

fn one_step(field: &Field2D, dt: f64, flux: impl Fn(usize) -> f64 + Sync + Send) -> Vec<f64> {
    let u = field.values();
    par::map_nodes(u.len(), |k| u[k] - dt * flux(k))
}

/// Centered second-order slopes (D_x u, D_y u).
#[inline]
pub(crate) fn centered(field: &Field2D, j: isize, i: isize) -> (f64, f64) {
    let g = &field.grid;
    (
        (field.at(j + 1, i) - field.at(j - 1, i)) / (2.0 * g.dx),
        (field.at(j, i + 1) - field.at(j, i - 1)) / (2.0 * g.dy),
    )
}

/// Fourth-order central slopes (D*_x u, D*_y u).
#[inline]
fn central4(field: &Field2D, j: isize, i: isize) -> (f64, f64) {
    let g = &field.grid;
    let d = |m2: f64, m1: f64, p1: f64, p2: f64| m2 - 8.0 * m1 + 8.0 * p1 - p2;
    (
        d(field.at(j - 2, i), field.at(j - 1, i), field.at(j + 1, i), field.at(j + 2, i)) / (12.0 * g.dx),
        d(field.at(j, i - 2), field.at(j, i - 1), field.at(j, i + 1), field.at(j, i + 2)) / (12.0 * g.dy),
    )
}

fn centered_flux(field: &Field2D, h: &dyn Hamiltonian) -> Vec<f64> {
    let g = field.grid;
    par::map_nodes(g.len(), |k| {
        let (j, i) = g.split(k);
        let (p, q) = centered(field, j as isize, i as isize);
        h.eval(g.x(j), g.y(i), p, q)
    })
}

fn central4_flux(field: &Field2D, h: &dyn Hamiltonian) -> Vec<f64> {
    let g = field.grid;
    par::map_nodes(g.len(), |k| {
        let (j, i) = g.split(k);
        let (p, q) = central4(field, j as isize, i as isize);
        h.eval(g.x(j), g.y(i), p, q)
    })
}

fn axpy(u: &[f64], a: f64, f: &[f64]) -> Vec<f64> {
    u.iter().zip(f).map(|(u, f)| u + a * f).collect()
}

fn heun(field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Vec<f64> {
    let u = field.values();
    let star = field.with_values(axpy(u, -dt, &centered_flux(field, h)));
    let f1 = centered_flux(&star, h);
    u.iter()
        .zip(star.values())
        .zip(&f1)
        .map(|((u, s), f)| 0.5 * u + 0.5 * s - 0.5 * dt * f)
        .collect()
}

fn rk4(field: &Field2D, h: &dyn Hamiltonian, dt: f64) -> Vec<f64> {
    let u = field.values();
    let h0 = central4_flux(field, h);
    let u1 = field.with_values(axpy(u, -0.5 * dt, &h0));
    let u2 = field.with_values(axpy(u, -0.5 * dt, &central4_flux(&u1, h)));
    let u3 = field.with_values(axpy(u, -dt, &central4_flux(&u2, h)));
    let h3 = central4_flux(&u3, h);
    (0..u.len())
        .map(|k| (2.0 * u2.values()[k] + u3.values()[k] - 0.5 * dt * (h0[k] + h3[k])) / 3.0)
        .collect()
}

/// Local quantities shared by the Lax-Wendroff family and the ε estimate.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Local {
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub q: f64,
    pub h: f64,
    pub hp: f64,
    pub hq: f64,
    /// Centered secants of H in x and y at frozen slopes.
    pub hx: f64,
    pub hy: f64,
}

impl Local {
    pub fn new(field: &Field2D, h: &dyn Hamiltonian, k: usize) -> Self {
        let g = &field.grid;
        let (j, i) = g.split(k);
        let (x, y) = (g.x(j), g.y(i));
        let (p, q) = centered(field, j as isize, i as isize);
        let (hx, hy) = if h.space_independent() {
            (0.0, 0.0)
        } else {
            (
                (h.eval(x + g.dx, y, p, q) - h.eval(x - g.dx, y, p, q)) / (2.0 * g.dx),
                (h.eval(x, y + g.dy, p, q) - h.eval(x, y - g.dy, p, q)) / (2.0 * g.dy),
            )
        };
        Self { x, y, p, q, h: h.eval(x, y, p, q), hp: h.dp(x, y, p, q), hq: h.dq(x, y, p, q), hx, hy }
    }
}

/// Second differences D²_x u, D²_y u and the four-point D²_xy u.
#[inline]
pub(crate) fn second_differences(field: &Field2D, k: usize) -> (f64, f64, f64) {
    let g = &field.grid;
    let (j, i) = g.split(k);
    let (j, i) = (j as isize, i as isize);
    let u = field.at(j, i);
    let dxx = (field.at(j + 1, i) - 2.0 * u + field.at(j - 1, i)) / (g.dx * g.dx);
    let dyy = (field.at(j, i + 1) - 2.0 * u + field.at(j, i - 1)) / (g.dy * g.dy);
    let dxy = (field.at(j + 1, i + 1) - field.at(j - 1, i + 1) - field.at(j + 1, i - 1)
        + field.at(j - 1, i - 1))
        / (4.0 * g.dx * g.dy);
    (dxx, dyy, dxy)
}

/// H_p(H_x + H_p D²_x u) + H_q(H_y + H_q D²_y u) + 2 H_p H_q D²_xy u.
pub(crate) fn lw_correction(field: &Field2D, l: &Local, k: usize) -> f64 {
    let (dxx, dyy, dxy) = second_differences(field, k);
    l.hp * (l.hx + l.hp * dxx) + l.hq * (l.hy + l.hq * dyy) + 2.0 * l.hp * l.hq * dxy
}

fn lw_flux(field: &Field2D, h: &dyn Hamiltonian, dt: f64, k: usize) -> f64 {
    let l = Local::new(field, h, k);
    l.h - 0.5 * dt * lw_correction(field, &l, k)
}

/// Staggered secants (H*_x, H*_y) of H in the slope arguments, evaluated
/// at `(x, y)`.
pub(crate) fn staggered(field: &Field2D, h: &dyn Hamiltonian, x: f64, y: f64, k: usize, form: StaggeredForm) -> (f64, f64) {
    let g = &field.grid;
    let (j, i) = g.split(k);
    let (j, i) = (j as isize, i as isize);
    let u = |a: isize, b: isize| field.at(j + a, i + b);
    let (dx, dy) = (g.dx, g.dy);

    let px_fwd = (u(1, 0) - u(0, 0)) / dx;
    let px_bwd = (u(0, 0) - u(-1, 0)) / dx;
    let qx_fwd = (u(1, 1) - u(1, -1) + u(0, 1) - u(0, -1)) / (4.0 * dy);
    let qx_bwd = match form {
        StaggeredForm::Symmetric => (u(0, 1) - u(0, -1) + u(-1, 1) - u(-1, -1)) / (4.0 * dy),
        StaggeredForm::Skewed => (u(-1, 1) - u(-1, -1)) / (4.0 * dy),
    };
    let hx_star = (h.eval(x, y, px_fwd, qx_fwd) - h.eval(x, y, px_bwd, qx_bwd)) / dx;

    let qy_fwd = (u(0, 1) - u(0, 0)) / dy;
    let qy_bwd = match form {
        StaggeredForm::Symmetric => (u(0, 0) - u(0, -1)) / dy,
        StaggeredForm::Skewed => (u(0, -1) - u(0, 0)) / dy,
    };
    let py_fwd = (u(1, 1) - u(-1, 1) + u(1, 0) - u(-1, 0)) / (4.0 * dx);
    let py_bwd = (u(1, 0) - u(-1, 0) + u(1, -1) - u(-1, -1)) / (4.0 * dx);
    let hy_star = (h.eval(x, y, py_fwd, qy_fwd) - h.eval(x, y, py_bwd, qy_bwd)) / dy;

    (hx_star, hy_star)
}

fn lw2_flux(field: &Field2D, h: &dyn Hamiltonian, dt: f64, k: usize, form: StaggeredForm) -> f64 {
    let l = Local::new(field, h, k);
    let (sx, sy) = staggered(field, h, l.x, l.y, k, form);
    l.h - 0.5 * dt * l.hp * (sx + l.hx) - 0.5 * dt * l.hq * (sy + l.hy)
}

fn richtmyer_flux(field: &Field2D, h: &dyn Hamiltonian, dt: f64, k: usize, form: StaggeredForm) -> f64 {
    let g = &field.grid;
    let (j, i) = g.split(k);
    let (x, y) = (g.x(j), g.y(i));
    let (p, q) = centered(field, j as isize, i as isize);
    let (sx, sy) = staggered(field, h, x, y, k, form);
    h.eval(x, y, p - 0.5 * dt * sx, q - 0.5 * dt * sy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundaryCondition, Grid2D};
    use crate::hamiltonian::{Eikonal, FnHamiltonian, Rotation, Transport};

    const ALL: [HighOrderScheme; 5] = [
        HighOrderScheme::Hc,
        HighOrderScheme::Lw,
        HighOrderScheme::Lw2,
        HighOrderScheme::Richtmyer,
        HighOrderScheme::Rkc4,
    ];

    fn field(h: f64, n: usize, bc: BoundaryCondition, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Field2D {
        let g = Grid2D::new(-1.0, -1.0, h, h, n, n).unwrap();
        Field2D::from_fn(g, bc, f).unwrap()
    }

    #[test]
    fn constants_are_fixed_points() {
        let f = field(0.1, 16, BoundaryCondition::NeumannZero, |_, _| -0.3);
        let t = Transport { a: 1.0, b: 1.0 };
        for s in ALL {
            assert_eq!(s.step(&f, &Eikonal, 0.02).unwrap().values(), f.values(), "{s:?}");
            assert_eq!(s.step(&f, &t, 0.02).unwrap().values(), f.values(), "{s:?}");
        }
    }

    #[test]
    fn exact_on_affine_transport() {
        let (a, b) = (0.7, -1.3);
        let f = field(0.1, 24, BoundaryCondition::NeumannZero, |x, y| a * x + b * y);
        let t = Transport { a: 1.0, b: 1.0 };
        let dt = 0.02;
        for s in ALL {
            let out = s.step(&f, &t, dt).unwrap();
            // Interior nodes beyond the widest stencil reach see only affine data.
            for i in 9..15 {
                for j in 9..15 {
                    let k = i * 24 + j;
                    let want = f.values()[k] - dt * (a + b);
                    assert!((out.values()[k] - want).abs() < 1e-13, "{s:?}");
                }
            }
        }
    }

    #[test]
    fn lw_on_quadratic_matches_taylor() {
        // u = x²/2, H = p: centered slope is x_j, D²_x u = 1, so h^A = x_j − dt/2.
        let h = 0.1;
        let f = field(h, 21, BoundaryCondition::NeumannZero, |x, _| 0.5 * x * x);
        let t = Transport { a: 1.0, b: 0.0 };
        let dt = 0.03;
        let out = lw_step(&f, &t, dt).unwrap();
        for k in [5 * 21 + 5, 10 * 21 + 10, 12 * 21 + 7] {
            let (j, _) = f.grid.split(k);
            let want = f.values()[k] - dt * (f.grid.x(j) - 0.5 * dt);
            assert!((out.values()[k] - want).abs() < 1e-14);
        }
    }

    #[test]
    fn rkc4_exact_slopes_on_cubics() {
        // D* is exact on cubics, so for H = p the step is the RK4 map of u' = −u_x.
        let h = 0.1;
        let f = field(h, 30, BoundaryCondition::NeumannZero, |x, _| x * x * x - x);
        let t = Transport { a: 1.0, b: 0.0 };
        let dt = 0.02;
        let out = rkc4_step(&f, &t, dt).unwrap();
        for j in 10..20 {
            let k = 15 * 30 + j;
            let x = f.grid.x(j);
            let exact = (x - dt).powi(3) - (x - dt);
            assert!((out.values()[k] - exact).abs() < 1e-12, "{}", out.values()[k] - exact);
        }
    }

    #[test]
    fn richtmyer_requires_space_independent_h() {
        let f = field(0.1, 10, BoundaryCondition::Periodic, |x, _| x);
        assert!(richtmyer_step(&f, &Rotation { extent: 1.0 }, 0.01, StaggeredForm::Symmetric).is_err());
        assert!(richtmyer_step(&f, &Eikonal, 0.01, StaggeredForm::Symmetric).is_ok());
    }

    #[test]
    fn staggered_secants_vanish_on_affine_data() {
        let f = field(0.1, 12, BoundaryCondition::NeumannZero, |x, y| 2.0 * x - y);
        let q = FnHamiltonian::new(|_, _, p: f64, q: f64| p * p + p * q, (1.0, 1.0));
        let (sx, sy) = staggered(&f, &q, 0.0, 0.0, 6 * 12 + 6, StaggeredForm::Symmetric);
        assert!(sx.abs() < 1e-12 && sy.abs() < 1e-12);
        let (sx, sy) = staggered(&f, &q, 0.0, 0.0, 6 * 12 + 6, StaggeredForm::Skewed);
        assert!(sx.abs() > 1e-3 && sy.abs() > 1e-3);
    }

    /// Residual of the second-order consistency relation at one node for
    /// v = sin(x)cos(y), H = p + q; should shrink with the grid.
    fn residual(s: HighOrderScheme, h: f64) -> f64 {
        let n = (2.0 / h).round() as usize + 1;
        let f = field(h, n, BoundaryCondition::NeumannZero, |x, y| x.sin() * y.cos());
        let t = Transport { a: 1.0, b: 1.0 };
        let dt = 0.2 * h;
        let out = s.step(&f, &t, dt).unwrap();
        let c = n / 2;
        let k = c * n + c;
        let (x, y) = (f.grid.x(c), f.grid.y(c));
        let exact = (x - dt).sin() * (y - dt).cos();
        ((out.values()[k] - exact) / dt).abs()
    }

    #[test]
    fn consistency_orders() {
        for s in ALL {
            let e1 = residual(s, 0.1);
            let e2 = residual(s, 0.05);
            let order = (e1 / e2).log2();
            assert!(order >= s.order() as f64 - 0.2, "{s:?}: {order}");
        }
    }
}
