//! Axisymmetric relaxation for `u = w − w^(m)`:
//!
//! `−(∂²_t + ∂²_ρ + ρ⁻¹∂_ρ)u + (e^{4u} − 1)|φ^(m)|² + 4s = 0`
//!
//! with `u = 0` on `t = t_min`, `t = t_max` and `ρ = ρ_max`, and even
//! reflection across the axis `ρ = 0`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sinh_ratio, theta_x, PointTZ};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid2D {
    pub t_min: f64,
    pub t_max: f64,
    pub rho_max: f64,
    pub n_t: usize,
    pub n_rho: usize,
    /// Row-major in `t`: value at `(i, j)` is `data[i·n_rho + j]`.
    pub data: Vec<f64>,
}

impl ScalarGrid2D {
    pub fn zeros(t_min: f64, t_max: f64, rho_max: f64, n_t: usize, n_rho: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && rho_max > 0.0) {
            return Err(Error::BadParam("invalid (t, rho) box".into()));
        }
        for (axis, n) in [("t", n_t), ("rho", n_rho)] {
            if n < 3 {
                return Err(Error::GridTooSmall { axis, n, min: 3 });
            }
        }
        Ok(ScalarGrid2D { t_min, t_max, rho_max, n_t, n_rho, data: vec![0.0; n_t * n_rho] })
    }

    /// The default box `t ∈ [0.2, 5]`, `ρ ∈ [0, 10]` with `n × n` nodes.
    pub fn default_box(n: usize) -> Result<Self> {
        Self::zeros(0.2, 5.0, 10.0, n, n)
    }

    pub fn h_t(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn h_rho(&self) -> f64 {
        self.rho_max / (self.n_rho - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.h_t()
    }

    pub fn rho(&self, j: usize) -> f64 {
        j as f64 * self.h_rho()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_rho + j]
    }

    pub fn same_shape(&self, o: &ScalarGrid2D) -> bool {
        self.n_t == o.n_t
            && self.n_rho == o.n_rho
            && self.t_min == o.t_min
            && self.t_max == o.t_max
            && self.rho_max == o.rho_max
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> ScalarGrid2D {
        let mut g = self.clone();
        for i in 0..self.n_t {
            for j in 0..self.n_rho {
                g.data[i * self.n_rho + j] = f(self.t(i), self.rho(j));
            }
        }
        g
    }

    /// Dirichlet nodes: the two `t` edges and the outer `ρ` edge.
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || i + 1 == self.n_t || j + 1 == self.n_rho
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Value at `(t, ρ)` by bilinear interpolation.
    pub fn sample(&self, t: f64, rho: f64) -> f64 {
        let u = ((t - self.t_min) / self.h_t()).clamp(0.0, (self.n_t - 1) as f64);
        let v = (rho / self.h_rho()).clamp(0.0, (self.n_rho - 1) as f64);
        let i = (u.floor() as usize).min(self.n_t - 2);
        let j = (v.floor() as usize).min(self.n_rho - 2);
        let (a, b) = (u - i as f64, v - j as f64);
        self.at(i, j) * (1.0 - a) * (1.0 - b)
            + self.at(i + 1, j) * a * (1.0 - b)
            + self.at(i, j + 1) * (1.0 - a) * b
            + self.at(i + 1, j + 1) * a * b
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "t,rho,u")?;
        for i in 0..self.n_t {
            for j in 0..self.n_rho {
                writeln!(out, "{},{},{:e}", self.t(i), self.rho(j), self.at(i, j))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    GaussSeidelNewton,
    JacobiNewton,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub damping: f64,
    pub scheme: Scheme,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_sweeps: 200_000,
            damping: 0.8,
            scheme: Scheme::GaussSeidelNewton,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::BadParam("tolerance must be > 0".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::BadParam("damping must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// `|φ^(m)|² = sinh_ratio(m, Θ)² / (2t²)`.
pub fn phi_model_sq(m: u32, t: f64, rho: f64) -> f64 {
    let (theta, _) = theta_x(&PointTZ::new(t, rho, 0.0));
    let r = sinh_ratio(m, theta);
    r * r / (2.0 * t * t)
}

/// Stencil weights shared by the residual and the sweeps.
struct Stencil {
    ct: f64,
    cr: f64,
    /// `1/(2ρ_j h_ρ)` for `j ≥ 1`.
    radial: Vec<f64>,
    weight: Vec<f64>,
}

impl Stencil {
    fn new(u: &ScalarGrid2D, m: u32) -> Self {
        let hr = u.h_rho();
        let mut weight = vec![0.0; u.data.len()];
        for i in 0..u.n_t {
            for j in 0..u.n_rho {
                weight[i * u.n_rho + j] = phi_model_sq(m, u.t(i), u.rho(j));
            }
        }
        Stencil {
            ct: 1.0 / (u.h_t() * u.h_t()),
            cr: 1.0 / (hr * hr),
            radial: (0..u.n_rho).map(|j| if j == 0 { 0.0 } else { 0.5 / (u.rho(j) * hr) }).collect(),
            weight,
        }
    }

    /// `(−Δu, diagonal of −Δ)` at an interior or axis node.
    #[inline]
    fn neg_laplacian(&self, d: &[f64], nr: usize, i: usize, j: usize) -> (f64, f64) {
        let k = i * nr + j;
        let c = d[k];
        let tt = d[k + nr] + d[k - nr] - 2.0 * c;
        if j == 0 {
            let rr = 4.0 * (d[k + 1] - c);
            (-(self.ct * tt + self.cr * rr), 2.0 * self.ct + 4.0 * self.cr)
        } else {
            let rr = d[k + 1] + d[k - 1] - 2.0 * c;
            let first = (d[k + 1] - d[k - 1]) * self.radial[j];
            (-(self.ct * tt + self.cr * rr + first), 2.0 * (self.ct + self.cr))
        }
    }
}

fn check_shapes(u: &ScalarGrid2D, s: &ScalarGrid2D) -> Result<()> {
    if u.same_shape(s) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch)
    }
}

/// Residual of the `u`-equation; zero on Dirichlet nodes.
pub fn u_residual(u: &ScalarGrid2D, m: u32, s: &ScalarGrid2D) -> Result<ScalarGrid2D> {
    check_shapes(u, s)?;
    let st = Stencil::new(u, m);
    let nr = u.n_rho;
    let mut out = u.clone();
    for i in 0..u.n_t {
        for j in 0..nr {
            let k = i * nr + j;
            out.data[k] = if u.is_boundary(i, j) {
                0.0
            } else {
                let (lap, _) = st.neg_laplacian(&u.data, nr, i, j);
                lap + (4.0 * u.data[k]).exp_m1() * st.weight[k] + 4.0 * s.data[k]
            };
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub u: ScalarGrid2D,
    pub sweeps: usize,
    pub update: f64,
    /// `(sweep, update max-norm, residual max-norm)` at logged sweeps.
    pub log: Vec<(usize, f64, f64)>,
}

impl SolveOutcome {
    pub fn write_log_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "sweep,update_maxnorm,residual_maxnorm")?;
        for (k, up, r) in &self.log {
            writeln!(out, "{k},{up:e},{r:e}")?;
        }
        Ok(())
    }
}

/// Sweeps between convergence-log entries.
const LOG_EVERY: usize = 1000;

/// Damped pointwise-Newton relaxation from `init`; Dirichlet nodes of `init`
/// are reset to zero.
pub fn solve_u(m: u32, s: &ScalarGrid2D, init: &ScalarGrid2D, cfg: &SolverConfig) -> Result<SolveOutcome> {
    cfg.validate()?;
    check_shapes(init, s)?;
    let mut u = init.clone();
    let nr = u.n_rho;
    for i in 0..u.n_t {
        for j in 0..nr {
            if u.is_boundary(i, j) {
                u.data[i * nr + j] = 0.0;
            }
        }
    }
    let st = Stencil::new(&u, m);
    let source: Vec<f64> = s.data.iter().map(|v| 4.0 * v).collect();
    let mut log = Vec::new();
    let mut scratch = u.data.clone();
    let residual_norm = |u: &ScalarGrid2D| u_residual(u, m, s).map(|r| r.max_abs()).unwrap_or(f64::NAN);
    for sweep in 1..=cfg.max_sweeps {
        let mut update: f64 = 0.0;
        let mut step = |d: &[f64], i: usize, j: usize| -> f64 {
            let k = i * nr + j;
            let (lap, diag) = st.neg_laplacian(d, nr, i, j);
            let e = (4.0 * d[k]).exp();
            let f = lap + (e - 1.0) * st.weight[k] + source[k];
            let delta = -cfg.damping * f / (diag + 4.0 * e * st.weight[k]);
            update = update.max(delta.abs());
            delta
        };
        match cfg.scheme {
            Scheme::GaussSeidelNewton => {
                for colour in 0..2 {
                    for i in 1..u.n_t - 1 {
                        let start = (i + colour) % 2;
                        for j in (start..nr - 1).step_by(2) {
                            let delta = step(&u.data, i, j);
                            u.data[i * nr + j] += delta;
                        }
                    }
                }
            }
            Scheme::JacobiNewton => {
                scratch.copy_from_slice(&u.data);
                for i in 1..u.n_t - 1 {
                    for j in 0..nr - 1 {
                        scratch[i * nr + j] += step(&u.data, i, j);
                    }
                }
                std::mem::swap(&mut u.data, &mut scratch);
            }
        }
        if !update.is_finite() {
            return Err(Error::NoConvergence { sweeps: sweep, update, last: Box::new(u) });
        }
        let done = update < cfg.tolerance;
        if done || sweep % LOG_EVERY == 0 || sweep == 1 {
            log.push((sweep, update, residual_norm(&u)));
        }
        if done {
            return Ok(SolveOutcome { u, sweeps: sweep, update, log });
        }
        if sweep == cfg.max_sweeps {
            return Err(Error::NoConvergence { sweeps: sweep, update, last: Box::new(u) });
        }
    }
    unreachable!("max_sweeps is at least one iteration")
}

/// Uniform random values in `[−amplitude, amplitude]` on non-Dirichlet nodes.
pub fn random_init(grid: &ScalarGrid2D, amplitude: f64, seed: u64) -> ScalarGrid2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = grid.clone();
    for i in 0..g.n_t {
        for j in 0..g.n_rho {
            let v = rng.gen_range(-amplitude..=amplitude);
            g.data[i * g.n_rho + j] = if g.is_boundary(i, j) { 0.0 } else { v };
        }
    }
    g
}

/// Gaussian bump of height `a` and unit width centred on the axis at mid-t.
pub fn centred_bump(grid: &ScalarGrid2D, a: f64) -> ScalarGrid2D {
    let tc = 0.5 * (grid.t_min + grid.t_max);
    grid.map(|t, rho| a * (-((t - tc).powi(2) + rho * rho)).exp())
}

/// Relax from a seeded random start with amplitude 0.5 and no source; returns
/// `sup|u|` of the converged field.
pub fn uniqueness_experiment(m: u32, grid: &ScalarGrid2D, seed: u64, cfg: &SolverConfig) -> Result<f64> {
    let init = random_init(grid, 0.5, seed);
    let zero = grid.map(|_, _| 0.0);
    Ok(solve_u(m, &zero, &init, cfg)?.u.max_abs())
}

/// Relax with source `a · bump` from zero; returns `(max u, min u)`.
pub fn comparison_experiment(m: u32, grid: &ScalarGrid2D, a: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let u = comparison_solution(m, grid, a, cfg)?;
    Ok((u.max(), u.min()))
}

pub fn comparison_solution(m: u32, grid: &ScalarGrid2D, a: f64, cfg: &SolverConfig) -> Result<ScalarGrid2D> {
    if !(a >= 0.0) {
        return Err(Error::BadParam("source amplitude must be >= 0".into()));
    }
    let zero = grid.map(|_, _| 0.0);
    Ok(solve_u(m, &centred_bump(grid, a), &zero, cfg)?.u)
}
