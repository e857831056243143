//! Quadrant-based two-dimensional smoothness indicators.
//!
//! Each node has four quadrant cells. For each quadrant the biquadratic
//! interpolants on two ordered 3×3 stencils are compared through their
//! smoothness coefficients; the ordering of the stencil absorbs the sign
//! bookkeeping so one closed form serves all four quadrants.

use crate::error::Result;
use crate::grid::{BoundaryCondition, Field2D, Grid2D};
use crate::indicators1d::{
    map_g, omega_from_stencil, validate_sigma_threshold, weight_ratio, weno_z_ratio, Variant1D,
};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrant {
    MinusMinus,
    PlusMinus,
    MinusPlus,
    PlusPlus,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] =
        [Quadrant::MinusMinus, Quadrant::PlusMinus, Quadrant::MinusPlus, Quadrant::PlusPlus];

    /// Direction of the quadrant cell along x and y.
    pub fn signs(self) -> (isize, isize) {
        match self {
            Quadrant::MinusMinus => (-1, -1),
            Quadrant::PlusMinus => (1, -1),
            Quadrant::MinusPlus => (-1, 1),
            Quadrant::PlusPlus => (1, 1),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn mirror_x(self) -> Quadrant {
        match self {
            Quadrant::MinusMinus => Quadrant::PlusMinus,
            Quadrant::PlusMinus => Quadrant::MinusMinus,
            Quadrant::MinusPlus => Quadrant::PlusPlus,
            Quadrant::PlusPlus => Quadrant::MinusPlus,
        }
    }

    pub fn mirror_y(self) -> Quadrant {
        match self {
            Quadrant::MinusMinus => Quadrant::MinusPlus,
            Quadrant::MinusPlus => Quadrant::MinusMinus,
            Quadrant::PlusMinus => Quadrant::PlusPlus,
            Quadrant::PlusPlus => Quadrant::PlusMinus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaForm {
    Full,
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant2D {
    Full,
    Partial,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostMap {
    None,
    MappedG,
    WenoZ,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Indicator2DConfig {
    pub sigma: f64,
    pub threshold: f64,
    pub variant: Variant2D,
    pub postmap: PostMap,
    pub crossing_fix: bool,
}

impl Default for Indicator2DConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            threshold: 0.2,
            variant: Variant2D::Full,
            postmap: PostMap::MappedG,
            crossing_fix: true,
        }
    }
}

impl Indicator2DConfig {
    pub fn validate(&self) -> Result<()> {
        validate_sigma_threshold(self.sigma, self.threshold)
    }
}

/// 5×5 data around a node; `p[b][a]` sits at offset `(a - 2, b - 2)`.
pub type Patch = [[f64; 5]; 5];

/// Undivided differences `d[t][s]` (order t in x, s in y) on an ordered
/// 3×3 stencil given by its x and y offsets.
fn ordered_differences(p: &Patch, ox: [isize; 3], oy: [isize; 3]) -> [[f64; 3]; 3] {
    const C: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [-1.0, 1.0, 0.0], [1.0, -2.0, 1.0]];
    let g = |a: usize, b: usize| p[(2 + oy[b]) as usize][(2 + ox[a]) as usize];
    let mut d = [[0.0; 3]; 3];
    for (t, ct) in C.iter().enumerate() {
        for (s, cs) in C.iter().enumerate() {
            let mut acc = 0.0;
            for b in 0..=s {
                for a in 0..=t {
                    acc += ct[a] * cs[b] * g(a, b);
                }
            }
            d[t][s] = acc;
        }
    }
    d
}

fn closed_form(d: &[[f64; 3]; 3], form: BetaForm) -> f64 {
    let (f20, f02, f11) = (d[2][0], d[0][2], d[1][1]);
    let (f21, f12, f22) = (d[2][1], d[1][2], d[2][2]);
    let (c3, c22) = match form {
        BetaForm::Full => (17.0 / 12.0, 857.0 / 720.0),
        BetaForm::Partial => (5.0 / 12.0, 17.0 / 720.0),
    };
    f20 * f20 + f02 * f02 + f11 * f11 + c3 * (f21 * f21 + f12 * f12) + c22 * f22 * f22
        + f20 * f21
        + f02 * f12
        - (f20 * f22 + f02 * f22) / 6.0
        - (f21 * f22 + f12 * f22) / 12.0
}

/// (β₀, β₁) of one quadrant from a 5×5 patch.
pub fn quadrant_pair(p: &Patch, dx: f64, dy: f64, q: Quadrant, form: BetaForm) -> [f64; 2] {
    let (sx, sy) = q.signs();
    let s0 = |s: isize| [s, 0, -s];
    let s1 = |s: isize| [0, s, 2 * s];
    let area = dx * dy;
    // Rounding can push a mathematically nonnegative sum a hair below zero.
    let b0 = closed_form(&ordered_differences(p, s0(sx), s0(sy)), form).max(0.0) / area;
    let b1 = closed_form(&ordered_differences(p, s1(sx), s1(sy)), form).max(0.0) / area;
    [b0, b1]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrantBetas {
    /// Indexed by [`Quadrant::index`].
    pub pairs: [[f64; 2]; 4],
}

impl QuadrantBetas {
    pub fn from_patch(p: &Patch, dx: f64, dy: f64, form: BetaForm) -> Self {
        Self { pairs: Quadrant::ALL.map(|q| quadrant_pair(p, dx, dy, q, form)) }
    }

    pub fn get(&self, q: Quadrant) -> [f64; 2] {
        self.pairs[q.index()]
    }
}

pub fn beta_quadrant_full(field: &Field2D, j: usize, i: usize, q: Quadrant) -> [f64; 2] {
    let g = field.grid;
    quadrant_pair(&field.patch5(j, i), g.dx, g.dy, q, BetaForm::Full)
}

pub fn beta_quadrant_partial(field: &Field2D, j: usize, i: usize, q: Quadrant) -> [f64; 2] {
    let g = field.grid;
    quadrant_pair(&field.patch5(j, i), g.dx, g.dy, q, BetaForm::Partial)
}

/// Combined indicator from quadrant coefficients.
pub fn omega_from_quadrants(b: &QuadrantBetas, sigma_h: f64, postmap: PostMap) -> f64 {
    b.pairs
        .iter()
        .map(|&[b0, b1]| match postmap {
            PostMap::None => weight_ratio(b0, b1, sigma_h),
            PostMap::MappedG => map_g(weight_ratio(b0, b1, sigma_h)),
            PostMap::WenoZ => weno_z_ratio(b0, b1, (b0 - b1).abs(), sigma_h),
        })
        .fold(f64::INFINITY, f64::min)
}

fn split_variant(postmap: PostMap) -> Variant1D {
    match postmap {
        PostMap::None => Variant1D::Raw,
        PostMap::MappedG => Variant1D::MappedG,
        PostMap::WenoZ => Variant1D::WenoZ,
    }
}

pub fn omega_patch(p: &Patch, grid: &Grid2D, cfg: &Indicator2DConfig) -> f64 {
    let form = match cfg.variant {
        Variant2D::Full => BetaForm::Full,
        Variant2D::Partial => BetaForm::Partial,
        Variant2D::Split => {
            let v = split_variant(cfg.postmap);
            let wx = omega_from_stencil(&p[2], grid.dx, cfg.sigma, v);
            let col: [f64; 5] = std::array::from_fn(|b| p[b][2]);
            let wy = omega_from_stencil(&col, grid.dy, cfg.sigma, v);
            return wx.min(wy);
        }
    };
    let sigma_h = cfg.sigma * grid.delta().powi(2);
    omega_from_quadrants(&QuadrantBetas::from_patch(p, grid.dx, grid.dy, form), sigma_h, cfg.postmap)
}

pub fn omega_2d(field: &Field2D, j: usize, i: usize, cfg: &Indicator2DConfig) -> f64 {
    omega_patch(&field.patch5(j, i), &field.grid, cfg)
}

/// Dimensional-splitting indicator min(ω_x, ω_y), whatever `cfg.variant` says.
pub fn omega_split(field: &Field2D, j: usize, i: usize, cfg: &Indicator2DConfig) -> f64 {
    let cfg = Indicator2DConfig { variant: Variant2D::Split, ..*cfg };
    omega_2d(field, j, i, &cfg)
}

pub fn omega_field(field: &Field2D, cfg: &Indicator2DConfig) -> Vec<f64> {
    let g = field.grid;
    par::map_nodes(g.len(), |k| {
        let (j, i) = g.split(k);
        omega_2d(field, j, i, cfg)
    })
}

/// Smooth alternative to thresholding: (e^{−Mω} − 1)/(e^{−M} − 1).
pub fn smooth_phi(w: f64, m: f64) -> f64 {
    (-m * w).exp_m1() / (-m).exp_m1()
}

/// The eight neighbours of a node in cyclic order.
const RING: [(isize, isize); 8] =
    [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)];

#[derive(Clone, Debug, PartialEq)]
pub struct PhiMask {
    pub phi: Vec<f64>,
    /// Nodes with φ = 0 whose ring of neighbours has no two consecutive
    /// trusted values: likely crossings of singular curves.
    pub crossing: Vec<bool>,
}

pub fn phi_2d(omega: &[f64], grid: &Grid2D, bc: BoundaryCondition, cfg: &Indicator2DConfig) -> PhiMask {
    let phi: Vec<f64> = omega.iter().map(|&w| if w >= cfg.threshold { 1.0 } else { 0.0 }).collect();
    let crossing = if cfg.crossing_fix {
        par::map_nodes(grid.len(), |k| {
            if phi[k] != 0.0 {
                return false;
            }
            let (j, i) = grid.split(k);
            let ring = RING.map(|(a, b)| {
                let jj = bc.wrap(j as isize + a, grid.nx);
                let ii = bc.wrap(i as isize + b, grid.ny);
                phi[ii * grid.nx + jj] == 1.0
            });
            !(0..8).any(|m| ring[m] && ring[(m + 1) % 8])
        })
    } else {
        vec![false; grid.len()]
    };
    PhiMask { phi, crossing }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Smoothness2D {
    pub omega: Vec<f64>,
    pub phi: Vec<f64>,
    pub crossing: Vec<bool>,
}

impl Smoothness2D {
    pub fn zero_count(&self) -> usize {
        self.phi.iter().filter(|p| **p == 0.0).count()
    }
}

pub fn smoothness_2d(field: &Field2D, cfg: &Indicator2DConfig) -> Result<Smoothness2D> {
    cfg.validate()?;
    let omega = omega_field(field, cfg);
    let PhiMask { phi, crossing } = phi_2d(&omega, &field.grid, field.bc, cfg);
    Ok(Smoothness2D { omega, phi, crossing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn field(f: impl Fn(f64, f64) -> f64 + Sync + Send, h: f64, n: usize) -> Field2D {
        let x0 = -(n as f64 / 2.0).floor() * h;
        let g = Grid2D::new(x0, x0, h, h, n, n).unwrap();
        Field2D::from_fn(g, BoundaryCondition::Periodic, f).unwrap()
    }

    fn random_patch(rng: &mut impl Rng) -> Patch {
        let mut p = [[0.0; 5]; 5];
        p.iter_mut().flatten().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        p
    }

    #[test]
    fn constant_gives_zero_and_one_half() {
        let f = field(|_, _| 2.5, 0.1, 9);
        for q in Quadrant::ALL {
            assert_eq!(beta_quadrant_full(&f, 4, 4, q), [0.0, 0.0]);
            assert_eq!(beta_quadrant_partial(&f, 4, 4, q), [0.0, 0.0]);
        }
        for variant in [Variant2D::Full, Variant2D::Partial, Variant2D::Split] {
            for postmap in [PostMap::None, PostMap::MappedG, PostMap::WenoZ] {
                let cfg = Indicator2DConfig { variant, postmap, ..Default::default() };
                assert_eq!(omega_2d(&f, 4, 4, &cfg), 0.5);
            }
        }
    }

    #[test]
    fn bilinear_and_quadratic_examples() {
        let h = 0.1;
        let f = field(|x, y| x * y, h, 9);
        let g = field(|x, _| x * x, h, 9);
        for q in Quadrant::ALL {
            for b in beta_quadrant_full(&f, 4, 4, q).into_iter().chain(beta_quadrant_partial(&f, 4, 4, q)) {
                assert!((b - 0.01).abs() < 1e-15, "{b}");
            }
            for b in beta_quadrant_full(&g, 4, 4, q) {
                assert!((b - 4.0 * h * h).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_never_exceeds_full() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = random_patch(&mut rng);
            for q in Quadrant::ALL {
                let full = quadrant_pair(&p, 0.1, 0.1, q, BetaForm::Full);
                let part = quadrant_pair(&p, 0.1, 0.1, q, BetaForm::Partial);
                assert!(part[0] <= full[0] * (1.0 + 1e-14) && part[1] <= full[1] * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn reflection_permutes_quadrants() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let p = random_patch(&mut rng);
            let mut px = p;
            let mut py = p;
            for b in 0..5 {
                for a in 0..5 {
                    px[b][a] = p[b][4 - a];
                    py[b][a] = p[4 - b][a];
                }
            }
            for form in [BetaForm::Full, BetaForm::Partial] {
                let base = QuadrantBetas::from_patch(&p, 0.1, 0.2, form);
                let rx = QuadrantBetas::from_patch(&px, 0.1, 0.2, form);
                let ry = QuadrantBetas::from_patch(&py, 0.1, 0.2, form);
                for q in Quadrant::ALL {
                    assert_eq!(base.get(q), rx.get(q.mirror_x()));
                    assert_eq!(base.get(q), ry.get(q.mirror_y()));
                }
            }
        }
    }

    #[test]
    fn affine_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let grid = Grid2D::new(0.0, 0.0, 0.1, 0.1, 5, 5).unwrap();
        for _ in 0..100 {
            let p = random_patch(&mut rng);
            let (a, b, c) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let mut q = p;
            for (bb, row) in q.iter_mut().enumerate() {
                for (aa, v) in row.iter_mut().enumerate() {
                    *v += a + b * 0.1 * aa as f64 + c * 0.1 * bb as f64;
                }
            }
            for variant in [Variant2D::Full, Variant2D::Partial, Variant2D::Split] {
                let cfg = Indicator2DConfig { variant, ..Default::default() };
                let w0 = omega_patch(&p, &grid, &cfg);
                let w1 = omega_patch(&q, &grid, &cfg);
                assert!((w0 - w1).abs() < 1e-9, "{variant:?}: {w0} {w1}");
            }
        }
    }

    #[test]
    fn scale_invariance_without_desingularization() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let p = random_patch(&mut rng);
            let c = rng.gen_range(0.1..10.0) * if rng.gen() { 1.0 } else { -1.0 };
            let q = p.map(|r| r.map(|v| v * c));
            let a = QuadrantBetas::from_patch(&p, 0.1, 0.1, BetaForm::Full);
            let b = QuadrantBetas::from_patch(&q, 0.1, 0.1, BetaForm::Full);
            for postmap in [PostMap::None, PostMap::MappedG, PostMap::WenoZ] {
                let w0 = omega_from_quadrants(&a, 0.0, postmap);
                let w1 = omega_from_quadrants(&b, 0.0, postmap);
                assert!((w0 - w1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kink_along_axis_is_flagged_by_split() {
        let f = field(|x, _| x.abs(), 0.05, 41);
        let cfg = Indicator2DConfig::default();
        let c = 20;
        assert!(f.grid.x(c).abs() < 1e-12);
        for i in 5..35 {
            assert!(omega_split(&f, c, i, &cfg) < 1e-3);
            assert!(omega_2d(&f, c, i, &cfg) < 1e-3);
        }
    }

    #[test]
    fn axis_restricted_function_fools_split() {
        let f = field(|x, y| if x == 0.0 && y == 0.0 { 0.0 } else { y * x * x / (x * x + y * y) }, 0.05, 41);
        let cfg = Indicator2DConfig { variant: Variant2D::Split, ..Default::default() };
        assert_eq!(omega_2d(&f, 20, 20, &cfg), 0.5);
    }

    #[test]
    fn smooth_phi_values() {
        assert_eq!(smooth_phi(0.0, 20.0), 0.0);
        assert!((smooth_phi(1.0, 20.0) - 1.0).abs() < 1e-15);
        let expect = ((-10.0f64).exp() - 1.0) / ((-20.0f64).exp() - 1.0);
        assert!((smooth_phi(0.5, 20.0) - expect).abs() < 1e-15);
        assert!((smooth_phi(0.5, 20.0) - 0.99995).abs() < 1e-5);
        let mut prev = -1.0;
        for k in 0..=100 {
            let v = smooth_phi(k as f64 / 100.0, 20.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn phi_threshold_and_crossing_flags() {
        let grid = Grid2D::new(0.0, 0.0, 1.0, 1.0, 5, 5).unwrap();
        let cfg = Indicator2DConfig::default();
        let m = phi_2d(&[0.5; 25], &grid, BoundaryCondition::NeumannZero, &cfg);
        assert!(m.phi.iter().all(|p| *p == 1.0) && m.crossing.iter().all(|c| !c));

        // A plus-shaped zero set: the centre sees alternating neighbours.
        let mut w = vec![0.5; 25];
        for k in 0..5 {
            w[2 * 5 + k] = 0.0;
            w[k * 5 + 2] = 0.0;
        }
        let m = phi_2d(&w, &grid, BoundaryCondition::NeumannZero, &cfg);
        assert_eq!(m.phi[12], 0.0);
        assert!(m.crossing[12]);
        // A node on a single straight line still has a trusted side.
        assert!(!m.crossing[11]);
        let off = Indicator2DConfig { crossing_fix: false, ..cfg };
        let m2 = phi_2d(&w, &grid, BoundaryCondition::NeumannZero, &off);
        assert_eq!(m.phi, m2.phi);
        assert!(m2.crossing.iter().all(|c| !c));
    }
}
