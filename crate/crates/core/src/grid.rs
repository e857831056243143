//! Uniform grids and nodal fields with boundary-aware ghost access.
//!
//! Ghost nodes are never stored. Out-of-range indices are mapped back into
//! the grid on every access (wrapped for periodic data, clamped for
//! homogeneous Neumann data), up to [`GHOST_REACH`] nodes past either end.

use std::io::Write;

use crate::error::{Error, Result};

/// Widest stencil reach of any scheme: four composed radius-2 stages.
pub const GHOST_REACH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    NeumannZero,
}

impl BoundaryCondition {
    /// Maps a signed index onto `[0, n)` without a reach check.
    #[inline]
    pub fn wrap(self, k: isize, n: usize) -> usize {
        match self {
            BoundaryCondition::Periodic => k.rem_euclid(n as isize) as usize,
            BoundaryCondition::NeumannZero => k.clamp(0, n as isize - 1) as usize,
        }
    }

    pub fn resolve(self, k: isize, n: usize) -> Result<usize> {
        let reach = GHOST_REACH as isize;
        if k < -reach || k >= n as isize + reach {
            return Err(Error::GhostOutOfRange { index: k, n, reach: GHOST_REACH });
        }
        Ok(self.wrap(k, n))
    }
}

fn check_axis(name: &str, d: f64, n: usize) -> Result<()> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidGrid(format!("{name} spacing must be positive, got {d}")));
    }
    if n < 3 {
        return Err(Error::InvalidGrid(format!("{name} axis needs at least 3 nodes, got {n}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        check_axis("x", dx, n)?;
        Ok(Self { x0, dx, n })
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2D {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        check_axis("x", dx, nx)?;
        check_axis("y", dy, ny)?;
        Ok(Self { x0, y0, dx, dy, nx, ny })
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, i: usize) -> f64 {
        self.y0 + i as f64 * self.dy
    }

    /// Δ = max(dx, dy).
    pub fn delta(&self) -> f64 {
        self.dx.max(self.dy)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits a flat row-major index into `(j, i)`.
    #[inline]
    pub fn split(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::NonFinite { node, value: values[node] }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field1D {
    pub grid: Grid1D,
    pub bc: BoundaryCondition,
    values: Vec<f64>,
}

impl Field1D {
    pub fn new(grid: Grid1D, bc: BoundaryCondition, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::ShapeMismatch {
                expected: grid.n.to_string(),
                found: values.len().to_string(),
            });
        }
        check_finite(&values)?;
        Ok(Self { grid, bc, values })
    }

    pub fn from_fn(grid: Grid1D, bc: BoundaryCondition, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.n).map(|j| f(grid.x(j))).collect();
        Self::new(grid, bc, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Unchecked ghost access; callers stay within [`GHOST_REACH`].
    #[inline]
    pub fn at(&self, j: isize) -> f64 {
        self.values[self.bc.wrap(j, self.grid.n)]
    }

    pub fn ghost_value(&self, j: isize) -> Result<f64> {
        Ok(self.values[self.bc.resolve(j, self.grid.n)?])
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,value")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", self.grid.x(j), v)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field2D {
    pub grid: Grid2D,
    pub bc: BoundaryCondition,
    values: Vec<f64>,
}

impl Field2D {
    /// `values` is row-major: node `(j, i)` lives at `i * nx + j`.
    pub fn new(grid: Grid2D, bc: BoundaryCondition, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", grid.nx, grid.ny),
                found: values.len().to_string(),
            });
        }
        check_finite(&values)?;
        Ok(Self { grid, bc, values })
    }

    pub fn from_fn(
        grid: Grid2D,
        bc: BoundaryCondition,
        f: impl Fn(f64, f64) -> f64 + Sync + Send,
    ) -> Result<Self> {
        let values = crate::par::map_nodes(grid.len(), |k| {
            let (j, i) = grid.split(k);
            f(grid.x(j), grid.y(i))
        });
        Self::new(grid, bc, values)
    }

    /// Same grid and boundary rule, new values. Non-finite values are kept;
    /// the time loop checks them once per step.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self { grid: self.grid, bc: self.bc, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Unchecked ghost access at column `j`, row `i`.
    #[inline]
    pub fn at(&self, j: isize, i: isize) -> f64 {
        let jj = self.bc.wrap(j, self.grid.nx);
        let ii = self.bc.wrap(i, self.grid.ny);
        self.values[ii * self.grid.nx + jj]
    }

    pub fn ghost_value(&self, j: isize, i: isize) -> Result<f64> {
        let jj = self.bc.resolve(j, self.grid.nx)?;
        let ii = self.bc.resolve(i, self.grid.ny)?;
        Ok(self.values[ii * self.grid.nx + jj])
    }

    /// 5×5 neighbourhood, `patch[b][a]` = value at `(j + a - 2, i + b - 2)`.
    pub fn patch5(&self, j: usize, i: usize) -> [[f64; 5]; 5] {
        let mut p = [[0.0; 5]; 5];
        for (b, row) in p.iter_mut().enumerate() {
            for (a, v) in row.iter_mut().enumerate() {
                *v = self.at(j as isize + a as isize - 2, i as isize + b as isize - 2);
            }
        }
        p
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_grid_csv(&self.grid, &self.values, "value", w)
    }
}

/// Dumps per-node values as `x,y,<column>` in row-major order.
pub fn write_grid_csv<W: Write>(grid: &Grid2D, values: &[f64], column: &str, mut w: W) -> Result<()> {
    writeln!(w, "x,y,{column}")?;
    for (k, v) in values.iter().enumerate() {
        let (j, i) = grid.split(k);
        writeln!(w, "{:.16e},{:.16e},{:.16e}", grid.x(j), grid.y(i), v)?;
    }
    Ok(())
}

/// k-th forward difference of `k + 1` consecutive samples.
pub fn undivided_difference(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = samples.len() - 1;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for (m, s) in samples.iter().enumerate().rev() {
        // m runs k..0; sign (-1)^(k-m), coefficient binom(k, m)
        let sign = if (k - m) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * s;
        if m > 0 {
            binom = binom * m as f64 / (k - m + 1) as f64;
        }
    }
    Ok(acc)
}

/// Mixed undivided difference of order `t` in x and `s` in y.
///
/// `rows` holds `s + 1` rows (consecutive y nodes) of `t + 1` values
/// (consecutive x nodes).
pub fn undivided_difference_2d<R: AsRef<[f64]>>(rows: &[R], t: usize, s: usize) -> Result<f64> {
    if rows.len() != s + 1 || rows.iter().any(|r| r.as_ref().len() != t + 1) {
        let found = match rows.first() {
            Some(r) => format!("{}x{}", r.as_ref().len(), rows.len()),
            None => "0x0".to_string(),
        };
        return Err(Error::ShapeMismatch { expected: format!("{}x{}", t + 1, s + 1), found });
    }
    let along_x = rows
        .iter()
        .map(|r| undivided_difference(r.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    undivided_difference(&along_x)
}
