//! Hamiltonians H(x, y, p, q) with partial derivatives and speed bounds.

/// Relative step of the centered-difference fallback for partials.
pub const FD_STEP: f64 = 1e-6;

/// Samples per interval for the default speed bounds.
pub const SPEED_SAMPLES: usize = 33;

fn sampled_max(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    (0..SPEED_SAMPLES)
        .map(|k| f(lo + (hi - lo) * k as f64 / (SPEED_SAMPLES - 1) as f64).abs())
        .fold(0.0, f64::max)
}

#[inline]
fn fd_step(v: f64) -> f64 {
    FD_STEP * v.abs().max(1.0)
}

pub trait Hamiltonian: Send + Sync {
    fn eval(&self, x: f64, y: f64, p: f64, q: f64) -> f64;

    /// Bounds on max|H_p| and max|H_q| over the states a problem visits.
    fn vmax(&self) -> (f64, f64);

    fn dp(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        let h = fd_step(p);
        (self.eval(x, y, p + h, q) - self.eval(x, y, p - h, q)) / (2.0 * h)
    }

    fn dq(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        let h = fd_step(q);
        (self.eval(x, y, p, q + h) - self.eval(x, y, p, q - h)) / (2.0 * h)
    }

    fn dx(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        let h = fd_step(x);
        (self.eval(x + h, y, p, q) - self.eval(x - h, y, p, q)) / (2.0 * h)
    }

    fn dy(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        let h = fd_step(y);
        (self.eval(x, y + h, p, q) - self.eval(x, y - h, p, q)) / (2.0 * h)
    }

    /// max |H_p| for p between `pa` and `pb`, q fixed. The default samples
    /// the interval at [`SPEED_SAMPLES`] evenly spaced points, end points
    /// included.
    fn max_abs_dp(&self, x: f64, y: f64, pa: f64, pb: f64, q: f64) -> f64 {
        sampled_max(pa, pb, |p| self.dp(x, y, p, q))
    }

    /// max |H_q| for q between `qa` and `qb`, p fixed.
    fn max_abs_dq(&self, x: f64, y: f64, p: f64, qa: f64, qb: f64) -> f64 {
        sampled_max(qa, qb, |q| self.dq(x, y, p, q))
    }

    /// True when H does not depend on (x, y).
    fn space_independent(&self) -> bool {
        false
    }

    /// True only for H = √(p² + q²), the one Hamiltonian the dedicated
    /// eikonal flux is valid for.
    fn is_eikonal(&self) -> bool {
        false
    }
}

/// H = √(p² + q²).
#[derive(Clone, Copy, Debug, Default)]
pub struct Eikonal;

impl Hamiltonian for Eikonal {
    fn eval(&self, _x: f64, _y: f64, p: f64, q: f64) -> f64 {
        p.hypot(q)
    }
    fn vmax(&self) -> (f64, f64) {
        (1.0, 1.0)
    }
    fn dp(&self, _x: f64, _y: f64, p: f64, q: f64) -> f64 {
        let n = p.hypot(q);
        if n == 0.0 {
            0.0
        } else {
            p / n
        }
    }
    fn dq(&self, _x: f64, _y: f64, p: f64, q: f64) -> f64 {
        let n = p.hypot(q);
        if n == 0.0 {
            0.0
        } else {
            q / n
        }
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dy(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn space_independent(&self) -> bool {
        true
    }
    fn is_eikonal(&self) -> bool {
        true
    }
}

/// Constant-velocity transport H = a·p + b·q.
#[derive(Clone, Copy, Debug)]
pub struct Transport {
    pub a: f64,
    pub b: f64,
}

impl Hamiltonian for Transport {
    fn eval(&self, _x: f64, _y: f64, p: f64, q: f64) -> f64 {
        self.a * p + self.b * q
    }
    fn vmax(&self) -> (f64, f64) {
        (self.a.abs(), self.b.abs())
    }
    fn dp(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        self.a
    }
    fn dq(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        self.b
    }
    fn max_abs_dp(&self, _: f64, _: f64, _: f64, _: f64, _: f64) -> f64 {
        self.a.abs()
    }
    fn max_abs_dq(&self, _: f64, _: f64, _: f64, _: f64, _: f64) -> f64 {
        self.b.abs()
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dy(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn space_independent(&self) -> bool {
        true
    }
}

/// Rigid rotation H = −y·p + x·q on a domain with |x|, |y| ≤ `extent`.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    pub extent: f64,
}

impl Hamiltonian for Rotation {
    fn eval(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        -y * p + x * q
    }
    fn vmax(&self) -> (f64, f64) {
        (self.extent, self.extent)
    }
    fn dp(&self, _x: f64, y: f64, _: f64, _: f64) -> f64 {
        -y
    }
    fn dq(&self, x: f64, _y: f64, _: f64, _: f64) -> f64 {
        x
    }
    fn max_abs_dp(&self, _x: f64, y: f64, _: f64, _: f64, _: f64) -> f64 {
        y.abs()
    }
    fn max_abs_dq(&self, x: f64, _y: f64, _: f64, _: f64, _: f64) -> f64 {
        x.abs()
    }
    fn dx(&self, _: f64, _: f64, _: f64, q: f64) -> f64 {
        q
    }
    fn dy(&self, _: f64, _: f64, p: f64, _: f64) -> f64 {
        -p
    }
}

/// H = (p + 1)² + (q + 1)², for slopes bounded by `slope_bound`.
#[derive(Clone, Copy, Debug)]
pub struct ShiftedQuadratic {
    pub slope_bound: f64,
}

impl Hamiltonian for ShiftedQuadratic {
    fn eval(&self, _x: f64, _y: f64, p: f64, q: f64) -> f64 {
        (p + 1.0).powi(2) + (q + 1.0).powi(2)
    }
    fn vmax(&self) -> (f64, f64) {
        let v = 2.0 * (1.0 + self.slope_bound);
        (v, v)
    }
    fn dp(&self, _: f64, _: f64, p: f64, _: f64) -> f64 {
        2.0 * (p + 1.0)
    }
    fn dq(&self, _: f64, _: f64, _: f64, q: f64) -> f64 {
        2.0 * (q + 1.0)
    }
    // |H_p| is convex in p, so the end points carry the maximum.
    fn max_abs_dp(&self, _: f64, _: f64, pa: f64, pb: f64, _: f64) -> f64 {
        2.0 * (pa + 1.0).abs().max((pb + 1.0).abs())
    }
    fn max_abs_dq(&self, _: f64, _: f64, _: f64, qa: f64, qb: f64) -> f64 {
        2.0 * (qa + 1.0).abs().max((qb + 1.0).abs())
    }
    fn dx(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn dy(&self, _: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
    fn space_independent(&self) -> bool {
        true
    }
}

/// A user-supplied H; every partial falls back to centered differences.
pub struct FnHamiltonian<F> {
    pub f: F,
    pub vmax: (f64, f64),
    pub space_independent: bool,
}

impl<F> FnHamiltonian<F>
where
    F: Fn(f64, f64, f64, f64) -> f64 + Send + Sync,
{
    pub fn new(f: F, vmax: (f64, f64)) -> Self {
        Self { f, vmax, space_independent: false }
    }
}

impl<F> Hamiltonian for FnHamiltonian<F>
where
    F: Fn(f64, f64, f64, f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64, y: f64, p: f64, q: f64) -> f64 {
        (self.f)(x, y, p, q)
    }
    fn vmax(&self) -> (f64, f64) {
        self.vmax
    }
    fn space_independent(&self) -> bool {
        self.space_independent
    }
}
