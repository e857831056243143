//! The adaptive filtered scheme
//!
//! u^{n+1} = S^M(u) + φ·ε·Δt·F((S^A(u) − S^M(u)) / (ε·Δt)),
//!
//! with ε retuned every step from the data in the region where φ = 1.

use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::hamiltonian::Hamiltonian;
use crate::highorder::{lw_correction, staggered, HighOrderScheme, Local, StaggeredForm};
use crate::indicators2d::{smoothness_2d, Indicator2DConfig, Smoothness2D};
use crate::monotone::{cfl_check, monotone_values, MonotoneScheme, Slopes};
use crate::par;

/// Below this ε the blend is a 0/0; the step falls back to S^M.
pub const EPS_FLOOR: f64 = 1e-14;

/// F(ρ) = ρ on [−1, 1], 0 outside.
#[inline]
pub fn filter(rho: f64) -> f64 {
    if rho.abs() <= 1.0 {
        rho
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EpsilonRule {
    /// Uses H_p, H_q and discrete second derivatives.
    #[default]
    DerivativeForm,
    /// Uses staggered secants of H only; needs H independent of (x, y).
    HamiltonianForm,
}

/// Node value of the ε estimate before taking the max, without the factor K.
pub fn epsilon_at(
    field: &Field2D,
    h: &dyn Hamiltonian,
    monotone: MonotoneScheme,
    rule: EpsilonRule,
    dt: f64,
    form: StaggeredForm,
    k: usize,
) -> f64 {
    let l = Local::new(field, h, k);
    let s = Slopes::at(field, field.grid.split(k).0, field.grid.split(k).1);
    let hm = |pm, pp, qm, qp| monotone.flux(h, l.x, l.y, Slopes { pm, pp, qm, qp });
    let (p, q) = (l.p, l.q);
    let p_plus = hm(p, s.pp, q, q) - hm(p, s.pm, q, q);
    let p_minus = hm(s.pp, p, q, q) - hm(s.pm, p, q, q);
    let q_plus = hm(p, p, q, s.qp) - hm(p, p, q, s.qm);
    let q_minus = hm(p, p, s.qp, q) - hm(p, p, s.qm, q);
    let antidiffusion = (p_plus - p_minus) + (q_plus - q_minus);
    let curvature = match rule {
        EpsilonRule::DerivativeForm => 0.5 * dt * lw_correction(field, &l, k),
        EpsilonRule::HamiltonianForm => {
            let (sx, sy) = staggered(field, h, l.x, l.y, k, form);
            l.h - h.eval(l.x, l.y, p - 0.5 * dt * sx, q - 0.5 * dt * sy)
        }
    };
    (curvature + antidiffusion).abs()
}

/// Per-node ε estimate (scaled by K) over the whole grid.
pub fn epsilon_field(
    field: &Field2D,
    h: &dyn Hamiltonian,
    monotone: MonotoneScheme,
    rule: EpsilonRule,
    k_factor: f64,
    dt: f64,
    form: StaggeredForm,
) -> Vec<f64> {
    par::map_nodes(field.grid.len(), |k| k_factor * epsilon_at(field, h, monotone, rule, dt, form, k))
}

/// ε^n = max over the nodes with φ = 1 of K·|…|; 0 when no node is trusted.
pub fn epsilon_n(
    field: &Field2D,
    h: &dyn Hamiltonian,
    monotone: MonotoneScheme,
    rule: EpsilonRule,
    k_factor: f64,
    dt: f64,
    form: StaggeredForm,
    phi: &[f64],
) -> f64 {
    par::max_nodes(field.grid.len(), |k| {
        (phi[k] == 1.0).then(|| k_factor * epsilon_at(field, h, monotone, rule, dt, form, k))
    })
    .unwrap_or(0.0)
}

/// Blends S^M and S^A node by node.
pub fn blend(sm: &[f64], sa: &[f64], phi: &[f64], eps: f64, dt: f64) -> Vec<f64> {
    if eps <= EPS_FLOOR {
        return sm.to_vec();
    }
    let scale = eps * dt;
    par::map_nodes(sm.len(), |k| {
        let (m, a, w) = (sm[k], sa[k], phi[k]);
        if w == 0.0 {
            return m;
        }
        let rho = (a - m) / scale;
        if rho.abs() > 1.0 {
            m
        } else if w == 1.0 {
            // F is the identity here, so the blend is S^A itself.
            a
        } else {
            m + w * scale * filter(rho)
        }
    })
}

/// One AF step for given φ and ε.
#[allow(clippy::too_many_arguments)]
pub fn af_step(
    field: &Field2D,
    monotone: MonotoneScheme,
    scheme: HighOrderScheme,
    h: &dyn Hamiltonian,
    dt: f64,
    phi: &[f64],
    eps: f64,
) -> Result<Field2D> {
    monotone.check(h)?;
    scheme.check(h)?;
    cfl_check(h, dt, &field.grid).into_result()?;
    if phi.len() != field.grid.len() {
        return Err(Error::ShapeMismatch {
            expected: field.grid.len().to_string(),
            found: phi.len().to_string(),
        });
    }
    let sm = monotone_values(field, monotone, h, dt);
    let sa = scheme.values(field, h, dt, StaggeredForm::default());
    Ok(field.with_values(blend(&sm, &sa, phi, eps, dt)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Monotone,
    /// The raw high-order scheme.
    HighOrder(HighOrderScheme),
    /// Adaptive filtering: φ from the indicators, ε^n retuned each step.
    Adaptive(HighOrderScheme),
    /// Non-adaptive filtering with φ ≡ 1 and a fixed ε.
    Filtered { scheme: HighOrderScheme, epsilon: f64 },
}

impl Method {
    pub fn name(&self) -> String {
        match self {
            Method::Monotone => "monotone".into(),
            Method::HighOrder(s) => s.name().into(),
            Method::Adaptive(s) => format!("af-{}", s.name()),
            Method::Filtered { scheme, .. } => format!("f-{}-fixed", scheme.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub monotone: MonotoneScheme,
    pub indicator: Indicator2DConfig,
    /// Safety factor K in the ε estimate.
    pub k_factor: f64,
    pub epsilon_rule: EpsilonRule,
    pub staggered: StaggeredForm,
}

impl SolverConfig {
    pub fn new(method: Method, monotone: MonotoneScheme) -> Self {
        Self {
            method,
            monotone,
            indicator: Indicator2DConfig::default(),
            k_factor: 1.0,
            epsilon_rule: EpsilonRule::default(),
            staggered: StaggeredForm::default(),
        }
    }

    pub fn validate(&self, h: &dyn Hamiltonian) -> Result<()> {
        self.monotone.check(h)?;
        match self.method {
            Method::Monotone => {}
            Method::HighOrder(s) => s.check(h)?,
            Method::Adaptive(s) => {
                s.check(h)?;
                self.indicator.validate()?;
                if !(self.k_factor > 0.5) {
                    return Err(Error::Config(format!("K must exceed 1/2, got {}", self.k_factor)));
                }
                if self.epsilon_rule == EpsilonRule::HamiltonianForm && !h.space_independent() {
                    return Err(Error::Config(
                        "the Hamiltonian-form epsilon needs H independent of (x, y)".into(),
                    ));
                }
            }
            Method::Filtered { scheme, epsilon } => {
                scheme.check(h)?;
                if !(epsilon >= 0.0) {
                    return Err(Error::Config(format!("epsilon must be nonnegative, got {epsilon}")));
                }
            }
        }
        Ok(())
    }
}

/// Everything one step produced.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub next: Field2D,
    /// S^M of the input, for checks against the blended result.
    pub monotone: Vec<f64>,
    /// ε used in the blend (0 for unfiltered methods).
    pub epsilon: f64,
    pub smoothness: Option<Smoothness2D>,
}

/// Advances one step; the caller guarantees CFL and a valid config.
pub fn advance(field: &Field2D, h: &dyn Hamiltonian, cfg: &SolverConfig, dt: f64) -> Result<StepOutcome> {
    let sm = monotone_values(field, cfg.monotone, h, dt);
    let (values, epsilon, smoothness) = match cfg.method {
        Method::Monotone => (sm.clone(), 0.0, None),
        Method::HighOrder(s) => (s.values(field, h, dt, cfg.staggered), 0.0, None),
        Method::Adaptive(s) => {
            let sm2 = smoothness_2d(field, &cfg.indicator)?;
            let eps = epsilon_n(field, h, cfg.monotone, cfg.epsilon_rule, cfg.k_factor, dt, cfg.staggered, &sm2.phi);
            let sa = s.values(field, h, dt, cfg.staggered);
            (blend(&sm, &sa, &sm2.phi, eps, dt), eps, Some(sm2))
        }
        Method::Filtered { scheme, epsilon } => {
            let sa = scheme.values(field, h, dt, cfg.staggered);
            let ones = vec![1.0; sm.len()];
            (blend(&sm, &sa, &ones, epsilon, dt), epsilon, None)
        }
    };
    Ok(StepOutcome { next: field.with_values(values), monotone: sm, epsilon, smoothness })
}

/// Uniform time steps covering [0, T]: (N−1)·Δt < T ≤ N·Δt with Δt ≤ `dt_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn covering(t_final: f64, dt_max: f64) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::Config(format!("final time must be positive, got {t_final}")));
        }
        if !(dt_max > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt_max}")));
        }
        // Tolerance keeps T/Δt = 30.000000000000004 from becoming 31 steps.
        let steps = ((t_final / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok(Self { dt: t_final / steps as f64, steps })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub epsilon: f64,
    pub phi_zero_count: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub steps: Vec<StepRecord>,
    /// Indicator state at the last step that computed one.
    pub last_smoothness: Option<Smoothness2D>,
}

impl Diagnostics {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["step", "t", "epsilon_n", "phi_zero_count"])?;
        for r in &self.steps {
            out.write_record([
                r.step.to_string(),
                format!("{:.16e}", r.t),
                format!("{:.16e}", r.epsilon),
                r.phi_zero_count.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Runs the configured method over `time`, failing on CFL violation or on
/// the first non-finite value.
pub fn evolve(
    initial: &Field2D,
    h: &dyn Hamiltonian,
    cfg: &SolverConfig,
    time: TimeGrid,
) -> Result<(Field2D, Diagnostics)> {
    cfg.validate(h)?;
    cfl_check(h, time.dt, &initial.grid).into_result()?;
    let mut u = initial.clone();
    let mut diag = Diagnostics::default();
    for n in 0..time.steps {
        let out = advance(&u, h, cfg, time.dt)?;
        if out.next.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { step: n + 1 });
        }
        diag.steps.push(StepRecord {
            step: n + 1,
            t: (n + 1) as f64 * time.dt,
            epsilon: out.epsilon,
            phi_zero_count: out.smoothness.as_ref().map_or(0, |s| s.zero_count()),
        });
        if out.smoothness.is_some() {
            diag.last_smoothness = out.smoothness;
        }
        u = out.next;
    }
    Ok((u, diag))
}

/// [`evolve`] to time `t_final` with steps no larger than `dt_max`.
pub fn af_evolve(
    initial: &Field2D,
    h: &dyn Hamiltonian,
    cfg: &SolverConfig,
    t_final: f64,
    dt_max: f64,
) -> Result<(Field2D, Diagnostics)> {
    evolve(initial, h, cfg, TimeGrid::covering(t_final, dt_max)?)
}
