//! Test problems: indicator cases 1–4 and evolution problems 5–8, with
//! exact solutions where one is known.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filter::TimeGrid;
use crate::grid::{BoundaryCondition, Field1D, Field2D, Grid1D, Grid2D};
use crate::hamiltonian::{Eikonal, Hamiltonian, Rotation, ShiftedQuadratic, Transport};
use crate::monotone::MonotoneScheme;

pub type Initial = fn(f64, f64) -> f64;
/// Exact solution as a function of (t, x, y).
pub type Exact = fn(f64, f64, f64) -> f64;

#[derive(Clone)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub name: &'static str,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub hamiltonian: Arc<dyn Hamiltonian>,
    pub monotone: MonotoneScheme,
    pub initial: Initial,
    pub bc: BoundaryCondition,
    pub t_final: f64,
    /// Δt/Δx on the uniform square grids used here.
    pub lambda_cfl: f64,
    /// Cells per side on the coarsest grid.
    pub base_cells: usize,
    pub exact: Option<Exact>,
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("x_range", &self.x_range)
            .field("y_range", &self.y_range)
            .field("bc", &self.bc)
            .field("t_final", &self.t_final)
            .field("lambda_cfl", &self.lambda_cfl)
            .field("base_cells", &self.base_cells)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Cells per side at refinement level `k` (0 is the coarsest).
    pub fn cells(&self, k: usize) -> usize {
        self.base_cells << k
    }

    /// Grid at level `k`. Neumann grids include both end points; periodic
    /// grids drop the right end, which duplicates the left.
    pub fn grid(&self, k: usize) -> Result<Grid2D> {
        let n = self.cells(k);
        let dx = (self.x_range.1 - self.x_range.0) / n as f64;
        let dy = (self.y_range.1 - self.y_range.0) / n as f64;
        let nodes = match self.bc {
            BoundaryCondition::NeumannZero => n + 1,
            BoundaryCondition::Periodic => n,
        };
        Grid2D::new(self.x_range.0, self.y_range.0, dx, dy, nodes, nodes)
    }

    pub fn time_grid(&self, k: usize) -> Result<TimeGrid> {
        let g = self.grid(k)?;
        TimeGrid::covering(self.t_final, self.lambda_cfl * g.dx.min(g.dy))
    }

    pub fn initial_field(&self, k: usize) -> Result<Field2D> {
        Field2D::from_fn(self.grid(k)?, self.bc, self.initial)
    }

    /// Exact solution at `t` sampled on `grid`.
    pub fn exact_field(&self, t: f64, grid: Grid2D) -> Result<Field2D> {
        let exact = self.exact.ok_or_else(|| Error::NoOracle(self.id.to_string()))?;
        Field2D::from_fn(grid, self.bc, move |x, y| exact(t, x, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Singularities fall on grid nodes.
    OnNode,
    /// Nodes shifted by −0.3Δ so singularities sit inside a cell, left of
    /// (south-west of) its centre.
    InCell,
}

impl Placement {
    pub const IN_CELL_SHIFT: f64 = -0.3;

    pub fn offset(self, delta: f64) -> f64 {
        match self {
            Placement::OnNode => 0.0,
            Placement::InCell => Self::IN_CELL_SHIFT * delta,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum CaseFn {
    OneD(fn(f64) -> f64),
    TwoD(fn(f64, f64) -> f64),
}

#[derive(Clone, Copy, Debug)]
pub struct IndicatorCase {
    pub id: &'static str,
    pub name: &'static str,
    pub function: CaseFn,
    /// Interval per axis; 2D cases use it for both.
    pub domain: (f64, f64),
}

impl IndicatorCase {
    fn nodes(&self, delta: f64) -> Result<usize> {
        let n = ((self.domain.1 - self.domain.0) / delta).round();
        if !(delta > 0.0) || n < 5.0 || ((n * delta) - (self.domain.1 - self.domain.0)).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!("spacing {delta} does not divide the domain")));
        }
        Ok(n as usize)
    }

    /// Periodic 1D samples at spacing `dx`.
    pub fn field_1d(&self, dx: f64, placement: Placement) -> Result<Field1D> {
        let CaseFn::OneD(f) = self.function else {
            return Err(Error::Config(format!("test {} is two-dimensional", self.id)));
        };
        let g = Grid1D::new(self.domain.0 + placement.offset(dx), dx, self.nodes(dx)?)?;
        Field1D::from_fn(g, BoundaryCondition::Periodic, f)
    }

    /// Periodic 2D samples at spacing `delta` in both directions.
    pub fn field_2d(&self, delta: f64, placement: Placement) -> Result<Field2D> {
        let CaseFn::TwoD(f) = self.function else {
            return Err(Error::Config(format!("test {} is one-dimensional", self.id)));
        };
        let n = self.nodes(delta)?;
        let o = self.domain.0 + placement.offset(delta);
        Field2D::from_fn(Grid2D::new(o, o, delta, delta, n, n)?, BoundaryCondition::Periodic, f)
    }
}

#[derive(Clone, Debug)]
pub enum TestCase {
    Indicator(IndicatorCase),
    Evolution(ProblemSpec),
}

pub const TEST_IDS: [&str; 10] = ["1", "2", "3", "4", "5", "6", "7a", "7b", "8", "8s"];

/// Looks a test up by id. "8" is the regular-time Test 8, "8s" the
/// singular-time one.
pub fn make_test(id: &str) -> Result<TestCase> {
    let ind = |id, name, function, domain| TestCase::Indicator(IndicatorCase { id, name, function, domain });
    Ok(match id {
        "1" => ind("1", "kink and jumps (1D)", CaseFn::OneD(test1), (-1.5, 4.5)),
        "2" => ind("2", "cone", CaseFn::TwoD(test2), (-2.0, 2.0)),
        "3" => ind("3", "damped radial sine", CaseFn::TwoD(test3), (-2.0, 2.0)),
        "4" => ind("4", "y x^2/(x^2+y^2)", CaseFn::TwoD(test4), (-2.0, 2.0)),
        "5" | "6" | "7a" | "7b" | "8" | "8s" => TestCase::Evolution(make_problem(id)?),
        other => return Err(Error::UnknownTest(other.to_string())),
    })
}

pub fn make_problem(id: &str) -> Result<ProblemSpec> {
    let spec = match id {
        "5" => ProblemSpec {
            id: "5",
            name: "transport of a smooth bump",
            x_range: (-2.0, 2.0),
            y_range: (-2.0, 2.0),
            hamiltonian: Arc::new(Transport { a: 1.0, b: 1.0 }),
            monotone: MonotoneScheme::LocalLaxFriedrichs,
            initial: test5_initial,
            bc: BoundaryCondition::NeumannZero,
            t_final: 0.9,
            lambda_cfl: TEST5_LAMBDA,
            base_cells: 40,
            exact: Some(test5_exact),
        },
        "6" => ProblemSpec {
            id: "6",
            name: "rigid rotation",
            x_range: (-2.5, 2.5),
            y_range: (-2.5, 2.5),
            hamiltonian: Arc::new(Rotation { extent: 2.5 }),
            monotone: MonotoneScheme::LocalLaxFriedrichs,
            initial: test6_initial,
            bc: BoundaryCondition::NeumannZero,
            t_final: 2.0 * PI,
            lambda_cfl: PI / 16.0,
            base_cells: 20,
            exact: Some(test6_exact),
        },
        "7a" | "7b" => ProblemSpec {
            id: if id == "7a" { "7a" } else { "7b" },
            name: if id == "7a" { "merging circles" } else { "merging squares" },
            x_range: (-3.0, 3.0),
            y_range: (-3.0, 3.0),
            hamiltonian: Arc::new(Eikonal),
            monotone: MonotoneScheme::Eikonal,
            initial: if id == "7a" { test7a_initial } else { test7b_initial },
            bc: BoundaryCondition::NeumannZero,
            t_final: if id == "7a" { 0.6 } else { 0.7 },
            lambda_cfl: 0.25,
            base_cells: 30,
            exact: Some(if id == "7a" { test7a_exact } else { test7b_exact }),
        },
        "8" | "8s" => ProblemSpec {
            id: if id == "8" { "8" } else { "8s" },
            name: if id == "8" { "periodic quadratic, smooth time" } else { "periodic quadratic, singular time" },
            x_range: (0.0, 2.0),
            y_range: (0.0, 2.0),
            hamiltonian: Arc::new(ShiftedQuadratic { slope_bound: PI / 2.0 }),
            monotone: MonotoneScheme::LocalLaxFriedrichs,
            initial: test8_initial,
            bc: BoundaryCondition::Periodic,
            t_final: if id == "8" { 3.0 / (4.0 * PI * PI) } else { 3.0 / (2.0 * PI * PI) },
            lambda_cfl: 3.0 / (4.0 * PI * PI),
            base_cells: 20,
            exact: Some(test8_exact),
        },
        other => return Err(Error::UnknownTest(other.to_string())),
    };
    Ok(spec)
}

/// Δt/Δx for Test 5. The step counts of the published tables (30 steps at
/// 40 cells, T = 0.9) correspond to 0.3.
pub const TEST5_LAMBDA: f64 = 0.3;

pub fn test1(x: f64) -> f64 {
    if (-1.0..=1.0).contains(&x) {
        ((1.0 - x).powi(2)).min((1.0 + x).powi(2)).powi(2)
    } else if (2.0..=4.0).contains(&x) {
        (0.5 * PI * (x - 3.0)).sin()
    } else {
        0.0
    }
}

pub fn test2(x: f64, y: f64) -> f64 {
    let r = x.hypot(y);
    if r <= 1.0 {
        1.0 - r
    } else {
        0.0
    }
}

pub fn test3(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    -(-r2).exp() * r2.sqrt().sin()
}

pub fn test4(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        0.0
    } else {
        y * x * x / r2
    }
}

pub fn test5_initial(x: f64, y: f64) -> f64 {
    (1.0 - x * x - y * y).max(0.0).powi(5)
}

pub fn test5_exact(t: f64, x: f64, y: f64) -> f64 {
    test5_initial(x - t, y - t)
}

const R0: f64 = 0.5;

pub fn test6_initial(x: f64, y: f64) -> f64 {
    ((R0 - (x + 1.0).powi(2) - y * y) / R0).max(0.0).powi(4)
}

pub fn test6_exact(t: f64, x: f64, y: f64) -> f64 {
    let (s, c) = t.sin_cos();
    test6_initial(x * c + y * s, -x * s + y * c)
}

const C7: f64 = FRAC_1_SQRT_2;

/// Value of the Test 7a profile at distance `d` from a circle centre.
fn test7a_profile(d: f64) -> f64 {
    ((1.0 - d * d) / (1.0 - R0 * R0)).max(0.0).powi(4)
}

pub fn test7a_initial(x: f64, y: f64) -> f64 {
    let minus = test7a_profile((x - C7).hypot(y - C7));
    let plus = test7a_profile((x + C7).hypot(y + C7));
    0.5 - 0.5 * minus.max(plus)
}

/// The profile is decreasing in distance, so the minimum over a disc of
/// radius t is attained at the point closest to each centre.
pub fn test7a_exact(t: f64, x: f64, y: f64) -> f64 {
    let minus = test7a_profile(((x - C7).hypot(y - C7) - t).max(0.0));
    let plus = test7a_profile(((x + C7).hypot(y + C7) - t).max(0.0));
    0.5 - 0.5 * minus.max(plus)
}

fn test7b_f1(x: f64, y: f64) -> f64 {
    (x - C7).abs().max((y - C7).abs())
}

fn test7b_f2(x: f64, y: f64) -> f64 {
    let s = R0.sqrt();
    let (a, b) = (s * x + C7, s * y + C7);
    (a + b).abs().max((a - b).abs())
}

pub fn test7b_initial(x: f64, y: f64) -> f64 {
    (test7b_f1(x, y) - R0).min(test7b_f2(x, y) - R0).min(0.5 * R0 * R0)
}

/// min over |d| ≤ t of max(|w_x + d_x|, |w_y + d_y|).
pub fn linf_disc_min(wx: f64, wy: f64, t: f64) -> f64 {
    if wx.hypot(wy) <= t {
        return 0.0;
    }
    let (a, b) = (wx.abs().max(wy.abs()), wx.abs().min(wy.abs()));
    if a - t >= b {
        a - t
    } else {
        0.5 * ((a + b) - (2.0 * t * t - (a - b) * (a - b)).sqrt())
    }
}

/// f2 is a scaled max-norm in coordinates rotated by 45°:
/// f2 = k·max(|ξ + √2/(k)|, |η|) with ξ, η = (x ± y)/√2 and k = √(2 r0).
pub fn test7b_exact(t: f64, x: f64, y: f64) -> f64 {
    let m1 = linf_disc_min(x - C7, y - C7, t);
    let k = (2.0 * R0).sqrt();
    let (xi, eta) = ((x + y) * FRAC_1_SQRT_2, (x - y) * FRAC_1_SQRT_2);
    let m2 = k * linf_disc_min(xi + SQRT_2 / k, eta, t);
    (m1 - R0).min(m2 - R0).min(0.5 * R0 * R0)
}

/// min of `v0` over the closed disc of radius `t` around (x, y), by polar
/// sampling (64 radii × 128 angles) and local refinement around the best
/// sample. Exact viscosity solution of v_t + |∇v| = 0 at time `t`.
pub fn disc_min(v0: impl Fn(f64, f64) -> f64, t: f64, x: f64, y: f64) -> f64 {
    if t <= 0.0 {
        return v0(x, y);
    }
    let (nr, na) = (64usize, 128usize);
    let mut best = (v0(x, y), x, y);
    for ir in 1..=nr {
        let r = t * ir as f64 / nr as f64;
        for ia in 0..na {
            let (s, c) = (2.0 * PI * ia as f64 / na as f64).sin_cos();
            let (px, py) = (x + r * c, y + r * s);
            let v = v0(px, py);
            if v < best.0 {
                best = (v, px, py);
            }
        }
    }
    let project = |px: f64, py: f64| {
        let (dx, dy) = (px - x, py - y);
        let d = dx.hypot(dy);
        if d <= t {
            (px, py)
        } else {
            (x + dx * t / d, y + dy * t / d)
        }
    };
    let mut h = (t / nr as f64).max(2.0 * PI * t / na as f64);
    for _ in 0..40 {
        let (_, cx, cy) = best;
        for a in -4i32..=4 {
            for b in -4i32..=4 {
                let (px, py) = project(cx + h * a as f64 / 4.0, cy + h * b as f64 / 4.0);
                let v = v0(px, py);
                if v < best.0 {
                    best = (v, px, py);
                }
            }
        }
        h *= 0.5;
    }
    best.0
}

pub fn test8_initial(x: f64, y: f64) -> f64 {
    -0.5 * ((PI * x).cos() + (PI * y).cos())
}

pub const HOPF_LAX_RANGE: (f64, f64) = (-6.0, 6.0);
pub const HOPF_LAX_SCAN: usize = 2401;

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Minimiser a* and value of the 1D Hopf-Lax objective
/// −½cos(π(x − a t)) + t(a²/4 − a) over a ∈ [−6, 6].
pub fn hopf_lax_1d(t: f64, x: f64) -> (f64, f64) {
    let obj = |a: f64| -0.5 * (PI * (x - a * t)).cos() + t * (0.25 * a * a - a);
    let (lo, hi) = HOPF_LAX_RANGE;
    let step = (hi - lo) / (HOPF_LAX_SCAN - 1) as f64;
    let mut best = (lo, obj(lo));
    for k in 1..HOPF_LAX_SCAN {
        let a = lo + k as f64 * step;
        let v = obj(a);
        if v < best.1 {
            best = (a, v);
        }
    }
    let a = golden_section(obj, (best.0 - step).max(lo), (best.0 + step).min(hi), 1e-10);
    let v = obj(a);
    if v < best.1 {
        (a, v)
    } else {
        best
    }
}

/// v(t, x, y) by the Hopf-Lax formula, separately in x and y.
pub fn test8_exact(t: f64, x: f64, y: f64) -> f64 {
    if t <= 0.0 {
        return test8_initial(x, y);
    }
    hopf_lax_1d(t, x).1 + hopf_lax_1d(t, y).1
}
