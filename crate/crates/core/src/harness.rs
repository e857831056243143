//! Convergence studies and indicator dumps, with their CSV outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{evolve, Diagnostics, Method, SolverConfig};
use crate::grid::{write_grid_csv, Field2D, Grid2D};
use crate::highorder::HighOrderScheme;
use crate::indicators1d::{smoothness_1d, Indicator1DConfig, Variant1D};
use crate::indicators2d::{smoothness_2d, Indicator2DConfig, PostMap, Variant2D};
use crate::par;
use crate::problems::{make_problem, make_test, CaseFn, Placement, ProblemSpec, TestCase};

/// (L∞, L1) of `u − exact`, L1 weighted by the cell area.
pub fn error_norms(u: &Field2D, exact: &[f64]) -> Result<(f64, f64)> {
    if exact.len() != u.values().len() {
        return Err(Error::ShapeMismatch {
            expected: u.values().len().to_string(),
            found: exact.len().to_string(),
        });
    }
    let mut linf = 0.0f64;
    let mut sum = 0.0;
    for (a, b) in u.values().iter().zip(exact) {
        let e = (a - b).abs();
        linf = linf.max(e);
        sum += e;
    }
    Ok((linf, u.grid.dx * u.grid.dy * sum))
}

/// log2 of the error ratio between consecutive halvings.
pub fn observed_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse / err_fine).log2()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub n_x: usize,
    pub n_t: usize,
    pub err_linf: f64,
    pub ord_linf: Option<f64>,
    pub err_l1: f64,
    pub ord_l1: Option<f64>,
    pub cpu_seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
    /// Errors are measured against the finest computed solution, not an
    /// exact one.
    pub reference_based: bool,
}

impl RunReport {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        if self.rows.is_empty() {
            out.write_record(["n_x", "n_t", "err_linf", "ord_linf", "err_l1", "ord_l1", "cpu_seconds"])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<RunRow>, _>>()?;
        Ok(Self { rows, reference_based: false })
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn last(&self) -> Option<&RunRow> {
        self.rows.last()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeName {
    Monotone,
    Hc,
    Lw,
    Lw2,
    Richtmyer,
    Rkc4,
    AfHc,
    AfRkc4,
    FHcFixed,
}

impl SchemeName {
    pub const ALL: [SchemeName; 9] = [
        SchemeName::Monotone,
        SchemeName::Hc,
        SchemeName::Lw,
        SchemeName::Lw2,
        SchemeName::Richtmyer,
        SchemeName::Rkc4,
        SchemeName::AfHc,
        SchemeName::AfRkc4,
        SchemeName::FHcFixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeName::Monotone => "monotone",
            SchemeName::Hc => "hc",
            SchemeName::Lw => "lw",
            SchemeName::Lw2 => "lw2",
            SchemeName::Richtmyer => "richtmyer",
            SchemeName::Rkc4 => "rkc4",
            SchemeName::AfHc => "af-hc",
            SchemeName::AfRkc4 => "af-rkc4",
            SchemeName::FHcFixed => "f-hc-fixed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme {s:?}")))
    }

    /// The method at grid spacing `dx`; F-HC uses ε = `eps_factor`·Δx.
    pub fn method(self, dx: f64, eps_factor: f64) -> Method {
        match self {
            SchemeName::Monotone => Method::Monotone,
            SchemeName::Hc => Method::HighOrder(HighOrderScheme::Hc),
            SchemeName::Lw => Method::HighOrder(HighOrderScheme::Lw),
            SchemeName::Lw2 => Method::HighOrder(HighOrderScheme::Lw2),
            SchemeName::Richtmyer => Method::HighOrder(HighOrderScheme::Richtmyer),
            SchemeName::Rkc4 => Method::HighOrder(HighOrderScheme::Rkc4),
            SchemeName::AfHc => Method::Adaptive(HighOrderScheme::Hc),
            SchemeName::AfRkc4 => Method::Adaptive(HighOrderScheme::Rkc4),
            SchemeName::FHcFixed => Method::Filtered { scheme: HighOrderScheme::Hc, epsilon: eps_factor * dx },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceConfig {
    pub test: String,
    pub scheme: SchemeName,
    /// Number of grids, each halving Δx and Δt of the previous one.
    pub refinements: usize,
    pub k_factor: f64,
    pub indicator: Indicator2DConfig,
    /// ε = factor·Δx for the fixed-ε filtered scheme.
    pub epsilon_fixed_factor: f64,
}

impl ConvergenceConfig {
    pub fn new(test: &str, scheme: SchemeName, refinements: usize) -> Self {
        Self {
            test: test.to_string(),
            scheme,
            refinements,
            k_factor: 1.0,
            indicator: Indicator2DConfig::default(),
            epsilon_fixed_factor: 20.0,
        }
    }

    pub fn solver(&self, problem: &ProblemSpec, dx: f64) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.scheme.method(dx, self.epsilon_fixed_factor), problem.monotone);
        cfg.k_factor = self.k_factor;
        cfg.indicator = self.indicator;
        cfg
    }
}

/// Everything a convergence study produced.
#[derive(Clone, Debug)]
pub struct ConvergenceRun {
    pub report: RunReport,
    pub problem: ProblemSpec,
    /// Final solution on the finest grid.
    pub final_field: Field2D,
    pub diagnostics: Diagnostics,
}

/// Solves the problem on `refinements` successively halved grids and
/// tabulates errors and orders.
pub fn run_convergence(cfg: &ConvergenceConfig) -> Result<ConvergenceRun> {
    if cfg.refinements == 0 {
        return Err(Error::Config("at least one refinement is required".into()));
    }
    let problem = make_problem(&cfg.test)?;
    let mut solutions = Vec::with_capacity(cfg.refinements);
    let mut timings = Vec::with_capacity(cfg.refinements);
    let mut diagnostics = Diagnostics::default();
    for k in 0..cfg.refinements {
        let u0 = problem.initial_field(k)?;
        let time = problem.time_grid(k)?;
        let solver = cfg.solver(&problem, u0.grid.dx);
        let start = Instant::now();
        let (u, diag) = evolve(&u0, problem.hamiltonian.as_ref(), &solver, time)?;
        timings.push((time.steps, start.elapsed().as_secs_f64()));
        solutions.push(u);
        diagnostics = diag;
    }

    let mut report = RunReport { rows: Vec::new(), reference_based: problem.exact.is_none() };
    let finest = solutions.last().expect("at least one level").clone();
    let mut prev: Option<(f64, f64)> = None;
    for (k, u) in solutions.iter().enumerate() {
        let exact = match problem.exact {
            Some(_) => problem.exact_field(problem.t_final, u.grid)?.into_values(),
            None => restrict(&finest, &u.grid, cfg.refinements - 1 - k)?,
        };
        let (linf, l1) = error_norms(u, &exact)?;
        report.rows.push(RunRow {
            n_x: problem.cells(k),
            n_t: timings[k].0,
            err_linf: linf,
            ord_linf: prev.map(|(p, _)| observed_order(p, linf)),
            err_l1: l1,
            ord_l1: prev.map(|(_, p)| observed_order(p, l1)),
            cpu_seconds: timings[k].1,
        });
        prev = Some((linf, l1));
    }
    Ok(ConvergenceRun { report, problem, final_field: finest, diagnostics })
}

/// Injects a fine-grid solution onto the coarse grid `levels` halvings up.
fn restrict(fine: &Field2D, coarse: &Grid2D, levels: usize) -> Result<Vec<f64>> {
    let s = 1usize << levels;
    let g = &fine.grid;
    if !(g.nx == (coarse.nx - 1) * s + 1 || g.nx == coarse.nx * s) {
        return Err(Error::ShapeMismatch { expected: format!("{}", coarse.nx * s), found: g.nx.to_string() });
    }
    Ok((0..coarse.len())
        .map(|k| {
            let (j, i) = coarse.split(k);
            fine.values()[i * s * g.nx + j * s]
        })
        .collect())
}

/// Writes `table.csv`, `field_final.csv`, `omega.csv`, `phi.csv`,
/// `epsilon.csv` and `meta` into `dir`.
pub fn write_convergence_outputs(run: &ConvergenceRun, cfg: &ConvergenceConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    run.report.write_csv(fs::File::create(dir.join("table.csv"))?)?;
    run.final_field.write_csv(fs::File::create(dir.join("field_final.csv"))?)?;
    let s = match &run.diagnostics.last_smoothness {
        Some(s) => s.clone(),
        None => smoothness_2d(&run.final_field, &cfg.indicator)?,
    };
    let g = &run.final_field.grid;
    write_grid_csv(g, &s.omega, "omega", fs::File::create(dir.join("omega.csv"))?)?;
    write_grid_csv(g, &s.phi, "phi", fs::File::create(dir.join("phi.csv"))?)?;
    run.diagnostics.write_csv(fs::File::create(dir.join("epsilon.csv"))?)?;

    let mut meta = String::new();
    let p = &run.problem;
    let _ = writeln!(meta, "test = {} ({})", p.id, p.name);
    let _ = writeln!(meta, "scheme = {}", cfg.scheme.as_str());
    let _ = writeln!(meta, "monotone = {:?}", p.monotone);
    let _ = writeln!(meta, "refinements = {}", cfg.refinements);
    let _ = writeln!(meta, "t_final = {}", p.t_final);
    let _ = writeln!(meta, "lambda = {}", p.lambda_cfl);
    let _ = writeln!(meta, "K = {}", cfg.k_factor);
    let _ = writeln!(meta, "M = {}", cfg.indicator.threshold);
    let _ = writeln!(meta, "sigma = {}", cfg.indicator.sigma);
    let _ = writeln!(meta, "indicator = {:?}/{:?}", cfg.indicator.variant, cfg.indicator.postmap);
    let _ = writeln!(meta, "crossing_fix = {}", cfg.indicator.crossing_fix);
    let _ = writeln!(meta, "epsilon_fixed = {} dx", cfg.epsilon_fixed_factor);
    let _ = writeln!(meta, "reference_based = {}", run.report.reference_based);
    let _ = writeln!(meta, "execution = {:?}", par::execution());
    fs::write(dir.join("meta"), meta)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicatorVariant {
    OneD(Variant1D),
    TwoD(Variant2D, PostMap),
}

impl IndicatorVariant {
    /// 1D: raw, mapped-g, weno-z, weno-z-new. 2D: full, partial, split,
    /// optionally suffixed with -raw or -weno-z (default mapping is g).
    pub fn parse(s: &str) -> Result<Self> {
        let v = match s {
            "raw" => Self::OneD(Variant1D::Raw),
            "mapped-g" => Self::OneD(Variant1D::MappedG),
            "weno-z" => Self::OneD(Variant1D::WenoZ),
            "weno-z-new" => Self::OneD(Variant1D::WenoZNew),
            _ => {
                let (base, post) = match s.split_once('-') {
                    None => (s, PostMap::MappedG),
                    Some((b, "raw")) => (b, PostMap::None),
                    Some((b, "weno-z")) => (b, PostMap::WenoZ),
                    Some((b, "mapped-g")) => (b, PostMap::MappedG),
                    Some(_) => return Err(Error::Config(format!("unknown indicator variant {s:?}"))),
                };
                let v = match base {
                    "full" => Variant2D::Full,
                    "partial" => Variant2D::Partial,
                    "split" => Variant2D::Split,
                    _ => return Err(Error::Config(format!("unknown indicator variant {s:?}"))),
                };
                Self::TwoD(v, post)
            }
        };
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorConfig {
    pub test: String,
    pub dx: f64,
    pub placement: Placement,
    pub variant: IndicatorVariant,
    pub threshold: f64,
    /// None picks the dimension's default.
    pub sigma: Option<f64>,
}

/// ω and φ at every node, with node coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorRun {
    pub x: Vec<f64>,
    /// Empty for 1D tests.
    pub y: Vec<f64>,
    pub omega: Vec<f64>,
    pub phi: Vec<f64>,
}

impl IndicatorRun {
    fn write(&self, column: &str, values: &[f64], path: &Path) -> Result<()> {
        let mut out = csv::Writer::from_path(path)?;
        if self.y.is_empty() {
            out.write_record(["x", column])?;
            for (x, v) in self.x.iter().zip(values) {
                out.write_record([format!("{x:.16e}"), format!("{v:.16e}")])?;
            }
        } else {
            out.write_record(["x", "y", column])?;
            for ((x, y), v) in self.x.iter().zip(&self.y).zip(values) {
                out.write_record([format!("{x:.16e}"), format!("{y:.16e}"), format!("{v:.16e}")])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Writes `omega.csv` and `phi.csv` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write("omega", &self.omega, &dir.join("omega.csv"))?;
        self.write("phi", &self.phi, &dir.join("phi.csv"))
    }
}

pub fn run_indicators(cfg: &IndicatorConfig) -> Result<IndicatorRun> {
    let TestCase::Indicator(case) = make_test(&cfg.test)? else {
        return Err(Error::Config(format!("test {} is not an indicator test", cfg.test)));
    };
    match (case.function, cfg.variant) {
        (CaseFn::OneD(_), IndicatorVariant::OneD(variant)) => {
            let f = case.field_1d(cfg.dx, cfg.placement)?;
            let ic = Indicator1DConfig {
                sigma: cfg.sigma.unwrap_or(Indicator1DConfig::default().sigma),
                threshold: cfg.threshold,
                variant,
            };
            let s = smoothness_1d(&f, &ic)?;
            let x = (0..f.grid.n).map(|j| f.grid.x(j)).collect();
            Ok(IndicatorRun { x, y: Vec::new(), omega: s.omega, phi: s.phi })
        }
        (CaseFn::TwoD(_), IndicatorVariant::TwoD(variant, postmap)) => {
            let f = case.field_2d(cfg.dx, cfg.placement)?;
            let ic = Indicator2DConfig {
                sigma: cfg.sigma.unwrap_or(Indicator2DConfig::default().sigma),
                threshold: cfg.threshold,
                variant,
                postmap,
                crossing_fix: true,
            };
            let s = smoothness_2d(&f, &ic)?;
            let g = f.grid;
            let (x, y) = (0..g.len()).map(|k| g.split(k)).map(|(j, i)| (g.x(j), g.y(i))).unzip();
            Ok(IndicatorRun { x, y, omega: s.omega, phi: s.phi })
        }
        _ => Err(Error::Config(format!("variant {:?} does not fit test {}", cfg.variant, cfg.test))),
    }
}
