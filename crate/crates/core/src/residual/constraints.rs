//! Growth and curvature-flux constraints measured on continuously sampled
//! families.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::calculus::sampled_curvature;
use crate::model::{Family, FieldSample, PointTZ};
use crate::quad::{gl16, log_panels};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxTruncation {
    pub t_min: f64,
    pub t_max: f64,
    /// Outer radius of the annulus as a multiple of `R`.
    pub outer_factor: f64,
}

impl Default for FluxTruncation {
    fn default() -> Self {
        FluxTruncation { t_min: 0.05, t_max: 20.0, outer_factor: 8.0 }
    }
}

impl FluxTruncation {
    /// Window wide enough that scale-invariant solutions show `R·f(R)` flat
    /// for `R` up to a few tens.
    pub fn wide() -> Self {
        FluxTruncation { t_min: 1e-4, t_max: 1e4, outer_factor: 64.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxCurve {
    pub truncation: FluxTruncation,
    /// `(R, f(R))`.
    pub points: Vec<(f64, f64)>,
}

impl FluxCurve {
    /// `R·f(R)` at each radius.
    pub fn scaled(&self) -> Vec<f64> {
        self.points.iter().map(|(r, f)| r * f).collect()
    }

    /// `max R·f / min R·f`; a vanishing curve counts as flat.
    pub fn spread(&self) -> f64 {
        let s = self.scaled();
        let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
        if hi == 0.0 {
            1.0
        } else {
            hi / lo
        }
    }

    /// Ratios of `R·f` between consecutive radii.
    pub fn growth(&self) -> Vec<f64> {
        self.scaled().windows(2).map(|w| w[1] / w[0]).collect()
    }
}

/// Angular samples for the periodic trapezoid rule.
const ANGLES: usize = 16;

/// `∫_{t_min}^{t_max} ∫_{R ≤ |z| ≤ kR} (|B₃|² + |E₁|² + |E₂|²)` for each `R`.
pub fn constraint_flux(
    sample: &dyn Fn(&PointTZ) -> FieldSample,
    radii: &[f64],
    truncation: FluxTruncation,
) -> Result<FluxCurve> {
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::BadParam("radii must be positive and strictly increasing".into()));
    }
    let tr = truncation;
    if !(tr.t_min > 0.0 && tr.t_max > tr.t_min && tr.outer_factor > 1.0) {
        return Err(Error::BadParam(format!("invalid flux truncation {tr:?}")));
    }
    let t_panels = log_panels(tr.t_min, tr.t_max, 2.0);
    let points = radii
        .iter()
        .map(|&r| {
            let rho_panels = log_panels(r, tr.outer_factor * r, 2.0);
            let ring = |t: f64, rho: f64| -> f64 {
                let h = 1e-3 * t.min(rho);
                let s: f64 = (0..ANGLES)
                    .map(|k| {
                        let th = TAU * k as f64 / ANGLES as f64;
                        let p = PointTZ::new(t, rho * th.cos(), rho * th.sin());
                        sampled_curvature(sample, &p, h).norm_sq()
                    })
                    .sum();
                s * TAU / ANGLES as f64 * rho
            };
            let at_t = |t: f64| -> f64 {
                rho_panels.windows(2).map(|w| gl16(w[0], w[1], |rho| ring(t, rho))).sum()
            };
            let f: f64 = t_panels.windows(2).map(|w| gl16(w[0], w[1], at_t)).sum();
            (r, f)
        })
        .collect();
    Ok(FluxCurve { truncation, points })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BulletCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// Empirical `max t|a|` over the sample.
    pub zeta: f64,
    /// `max t|a|` over the last sampled decade of `t` divided by its value
    /// over the earlier decades.
    pub zeta_growth: f64,
    /// `min t|a₃|` for `t < t₀`.
    pub eps_a3: f64,
    /// `min t|a|` for `t < t₀`, `|z| ≥ t`.
    pub eps_a: f64,
    pub max_t_phi: f64,
    pub max_t2_a3_phi: f64,
    pub flux: FluxCurve,
    pub bullets: Vec<BulletCheck>,
}

impl ConstraintReport {
    pub fn bullet(&self, name: &str) -> Option<&BulletCheck> {
        self.bullets.iter().find(|b| b.name == name)
    }
}

/// Time below which the lower growth bounds are tested.
const T0: f64 = 1.0;
const EPS_FLOOR: f64 = 1e-2;
const ZETA_GROWTH_MAX: f64 = 1.5;
const FLUX_SPREAD_MAX: f64 = 1.5;

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Measured constants and pass/fail for each bullet of both constraint sets.
pub fn constraint_diagnostics(family: &Family) -> Result<ConstraintReport> {
    family.validate()?;
    let ts = logspace(1e-3, 1e3, 25);
    let mut ratios = vec![0.0];
    ratios.extend(logspace(1e-2, 1e4, 25));
    let mut zeta_early: f64 = 0.0;
    let mut zeta_late: f64 = 0.0;
    let mut eps_a3 = f64::INFINITY;
    let mut eps_a = f64::INFINITY;
    let mut max_t_phi: f64 = 0.0;
    let mut max_a3_phi: f64 = 0.0;
    for &t in &ts {
        for &q in &ratios {
            for k in 0..4 {
                let th = 0.4 + TAU * k as f64 / 4.0;
                let rho = q * t;
                let s = family.sample(&PointTZ::new(t, rho * th.cos(), rho * th.sin()));
                let ta = t * s.higgs_norm();
                if t > 1e2 {
                    zeta_late = zeta_late.max(ta);
                } else {
                    zeta_early = zeta_early.max(ta);
                }
                if t < T0 {
                    eps_a3 = eps_a3.min(t * s.higgs[2].norm());
                    if q >= 1.0 {
                        eps_a = eps_a.min(ta);
                    }
                }
                let phi = s.phi();
                max_t_phi = max_t_phi.max(t * phi.norm());
                max_a3_phi = max_a3_phi.max(t * t * s.higgs[2].complexify().inner(&phi).norm());
            }
        }
    }
    let flux = constraint_flux(&|p| family.sample(p), &[4.0, 8.0, 16.0], FluxTruncation::wide())?;
    let zeta_growth = zeta_late / zeta_early;
    let spread = flux.spread();
    let bullet = |name: &str, value: f64, threshold: f64, pass: bool| BulletCheck {
        name: name.into(),
        value,
        threshold,
        pass,
    };
    let bounded = bullet("t|a| bounded", zeta_growth, ZETA_GROWTH_MAX, zeta_growth <= ZETA_GROWTH_MAX);
    let bullets = vec![
        BulletCheck { name: "set1.t|a| bounded".into(), ..bounded.clone() },
        bullet("set1.t|a3| > eps for t < t0", eps_a3, EPS_FLOOR, eps_a3 > EPS_FLOOR),
        bullet("set1.phi not identically zero", max_t_phi, 1e-8, max_t_phi > 1e-8),
        bullet("set1.<a3 phi> = 0", max_a3_phi, 1e-10, max_a3_phi <= 1e-10),
        BulletCheck { name: "set2.t|a| bounded".into(), ..bounded },
        bullet("set2.t|a| > eps for t < t0, |z| >= t", eps_a, EPS_FLOOR, eps_a > EPS_FLOOR),
        bullet("set2.R f(R) bounded", spread, FLUX_SPREAD_MAX, spread <= FLUX_SPREAD_MAX),
    ];
    Ok(ConstraintReport {
        zeta: zeta_early.max(zeta_late),
        zeta_growth,
        eps_a3,
        eps_a,
        max_t_phi,
        max_t2_a3_phi: max_a3_phi,
        flux,
        bullets,
    })
}
