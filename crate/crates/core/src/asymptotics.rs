//! Small-t scalar asymptotics: the Riccati equations for `α` and its rescaled
//! form `y = tα`, leading-order profiles near the turning time `t_z`, and the
//! instanton scaling exponent.

use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::C64;

/// Escape threshold for `|y|`; for `α` the threshold is this over `t`.
pub const BLOW_UP: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    /// Local error allowed per unit of the independent variable.
    pub tolerance: f64,
    pub initial_step: f64,
    pub max_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { tolerance: 1e-10, initial_step: 1e-3, max_step: 0.05 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    BlowUp { at: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `(τ, y)` or `(t, α)` with strictly increasing first entry.
    pub samples: Vec<(f64, f64)>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("trajectory has its initial sample")
    }

    pub fn blew_up(&self) -> bool {
        matches!(self.termination, Termination::BlowUp { .. })
    }

    /// Value at `x` by cubic interpolation through the nearest samples.
    pub fn interpolate(&self, x: f64) -> f64 {
        let s = &self.samples;
        let j = s.partition_point(|&(a, _)| a <= x).clamp(1, s.len() - 1);
        let lo = j.saturating_sub(2).min(s.len().saturating_sub(4));
        let hi = (lo + 4).min(s.len());
        lagrange(&s[lo..hi], x)
    }

    pub fn write_csv(&self, out: &mut impl Write, columns: [&str; 2]) -> Result<()> {
        writeln!(out, "{},{}", columns[0], columns[1])?;
        for (a, b) in &self.samples {
            writeln!(out, "{a:.17e},{b:.17e}")?;
        }
        Ok(())
    }
}

fn lagrange(pts: &[(f64, f64)], x: f64) -> f64 {
    pts.iter()
        .enumerate()
        .map(|(i, &(xi, yi))| {
            let w: f64 = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(xj, _))| (x - xj) / (xi - xj))
                .product();
            w * yi
        })
        .sum()
}

fn rk4(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    let k1 = f(x, y);
    let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
    let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
    let k4 = f(x + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Step-doubling RK4 from `x0` to `x_end`; stops early once `escaped` fires.
fn integrate(
    f: &dyn Fn(f64, f64) -> f64,
    x0: f64,
    y0: f64,
    x_end: f64,
    ctl: StepControl,
    escaped: &dyn Fn(f64, f64) -> bool,
) -> Trajectory {
    let mut samples = vec![(x0, y0)];
    let (mut x, mut y) = (x0, y0);
    let mut h = ctl.initial_step.min(ctl.max_step);
    while x < x_end {
        let step = h.min(x_end - x);
        let full = rk4(f, x, y, step);
        let half = rk4(f, x, y, 0.5 * step);
        let two = rk4(f, x + 0.5 * step, half, 0.5 * step);
        let err = (two - full).abs() / 15.0;
        let allowed = ctl.tolerance * step;
        if !two.is_finite() || !(err <= allowed) {
            if step < 1e-14 * x.abs().max(1.0) || !y.is_finite() {
                return Trajectory { samples, termination: Termination::BlowUp { at: x } };
            }
            h = 0.5 * step;
            continue;
        }
        x = if step == x_end - x { x_end } else { x + step };
        y = two + (two - full) / 15.0;
        samples.push((x, y));
        if escaped(x, y) {
            return Trajectory { samples, termination: Termination::BlowUp { at: x } };
        }
        let grow = if err == 0.0 { 2.0 } else { (0.9 * (allowed / err).powf(0.25)).min(2.0) };
        h = (step * grow).min(ctl.max_step);
    }
    Trajectory { samples, termination: Termination::Completed }
}

/// `∂_t α − 2α² = z` with `z` constant, from `α(t₀) = α₀`.
pub fn riccati_alpha(zconst: f64, alpha0: f64, t0: f64, t_end: f64, ctl: StepControl) -> Result<Trajectory> {
    if !(t0 > 0.0) || !(t_end > t0) {
        return Err(Error::BadParam(format!("need 0 < t0 < t_end, got {t0}, {t_end}")));
    }
    let f = move |_t: f64, a: f64| 2.0 * a * a + zconst;
    Ok(integrate(&f, t0, alpha0, t_end, ctl, &|t, a| a.abs() > BLOW_UP / t))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiSpec {
    pub k: u32,
    /// Bound on `|ε₄|`.
    pub mu: f64,
    pub y0: f64,
    pub tau0: f64,
}

impl RiccatiSpec {
    /// `(k+1)/2`, the attracting fixed point when `ε₄ ≡ 0`.
    pub fn lambda(&self) -> f64 {
        0.5 * (self.k as f64 + 1.0)
    }
}

/// `∂_τ y + 2y² − (k+1)²/2 = ε₄(τ)`.
///
/// Every evaluation of the forcing is checked against the budget `μ`.
pub fn riccati_y(spec: RiccatiSpec, eps4: &dyn Fn(f64) -> f64, tau_end: f64, ctl: StepControl) -> Result<Trajectory> {
    if !(spec.mu >= 0.0) {
        return Err(Error::BadParam(format!("mu = {} must be non-negative", spec.mu)));
    }
    if !(tau_end > spec.tau0) {
        return Err(Error::BadParam(format!("tau_end = {tau_end} must exceed tau0 = {}", spec.tau0)));
    }
    let kk = (spec.k as f64 + 1.0).powi(2) / 2.0;
    let worst = std::cell::Cell::new(0.0f64);
    let f = |tau: f64, y: f64| {
        let e = eps4(tau);
        worst.set(worst.get().max(e.abs()));
        kk - 2.0 * y * y + e
    };
    let tr = integrate(&f, spec.tau0, spec.y0, tau_end, ctl, &|_, y| y.abs() > BLOW_UP);
    if worst.get() > spec.mu * (1.0 + 1e-12) {
        return Err(Error::BadParam(format!("forcing reached {} above the budget mu = {}", worst.get(), spec.mu)));
    }
    Ok(tr)
}

/// `λ` with `λ² = (k+1)²/4 − μ`.
pub fn tanh_lambda(k: u32, mu: f64) -> Result<f64> {
    let l2 = (k as f64 + 1.0).powi(2) / 4.0 - mu;
    if !(l2 > 0.0) {
        return Err(Error::BadParam(format!("mu = {mu} leaves no positive lambda for k = {k}")));
    }
    Ok(l2.sqrt())
}

/// Largest amount by which the trajectory dips below the lower bound
/// `λ(c e^{4λτ} − 1)/(c e^{4λτ} + 1)`, with `c` fixed by the first sample.
pub fn tanh_bound_check(k: u32, mu: f64, trajectory: &Trajectory) -> Result<f64> {
    let lam = tanh_lambda(k, mu)?;
    let (tau0, y0) = trajectory.samples[0];
    if !(y0 * y0 < lam * lam) {
        return Err(Error::BadParam(format!("need y0^2 < lambda^2, got y0 = {y0}, lambda = {lam}")));
    }
    // c e^{4λτ₀} = (λ + y₀)/(λ − y₀), so the bound is λ tanh(2λ(τ − τ₀) + s₀)
    let s0 = 0.5 * ((lam + y0) / (lam - y0)).ln();
    Ok(trajectory
        .samples
        .iter()
        .map(|&(tau, y)| lam * (2.0 * lam * (tau - tau0) + s0).tanh() - y)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Closed-form solution of the unforced rescaled equation for `|y₀| < λ`.
pub fn tanh_solution(k: u32, y0: f64, tau: f64) -> f64 {
    let lam = 0.5 * (k as f64 + 1.0);
    lam * (2.0 * lam * tau + (y0 / lam).atanh()).tanh()
}

fn ratio_power(t: f64, tz: f64, e: f64) -> f64 {
    (e * (t / tz).ln()).exp()
}

/// Leading term of `α` near the turning time.
pub fn alpha_profile(k: u32, t: f64, t_z: f64) -> f64 {
    let e = 2.0 * (k as f64 + 1.0);
    // (r − 1/r)/(r + 1/r) with r = (t/t_z)^{k+1} is tanh((k+1) ln(t/t_z))
    (k as f64 + 1.0) / (2.0 * t) * (0.5 * e * (t / t_z).ln()).tanh()
}

/// Leading term of `|β|`.
pub fn beta_profile(k: u32, t: f64, t_z: f64) -> f64 {
    let e = 2.0 * (k as f64 + 1.0);
    (k as f64 + 1.0) / t / (1.0 + ratio_power(t, t_z, e))
}

/// Leading term of `|φ|` with `|φ|(t_*, z) = κ|z|^m`.
pub fn phi_profile(k: u32, m: u32, kappa: f64, t: f64, t_z: f64, t_star: f64, z: f64) -> f64 {
    let e = k as f64 + 1.0;
    kappa * z.abs().powi(m as i32) * ratio_power(t_z, t_star, e) * (ratio_power(t_z, t, e) + ratio_power(t, t_z, e))
}

/// Leading term of `|b̂|` given its value at the turning time.
pub fn bhat_profile(k: u32, t: f64, t_z: f64, bhat_at_tz: f64) -> f64 {
    let e = k as f64 + 1.0;
    bhat_at_tz * (ratio_power(t_z, t, e) + ratio_power(t, t_z, e - 1.0))
}

fn half_index(k: u32, m: u32) -> Result<u32> {
    let d = k as i64 - m as i64;
    if d <= 0 || d % 2 != 0 {
        return Err(Error::BadParity(d));
    }
    Ok((d / 2) as u32)
}

/// Conjectural very-small-t profile
/// `b̂ = t^{−(k+1)} z̄^{p−1} / (√2 (1 + t^{−2(k+1)}|z|^{2p}))`, `p = (k−m)/2`.
pub fn synthetic_bhat(k: u32, m: u32, t: f64, z: C64) -> Result<C64> {
    let p = half_index(k, m)?;
    if !(t > 0.0) {
        return Err(Error::BadParam(format!("t = {t} must be positive")));
    }
    let r = z.norm();
    if r == 0.0 {
        let v = if p == 1 { t.powi(-(k as i32 + 1)) / 2f64.sqrt() } else { 0.0 };
        return Ok(C64::new(v, 0.0));
    }
    let (lt, lr) = (t.ln(), r.ln());
    let kk = k as f64 + 1.0;
    let x = 2.0 * p as f64 * lr - 2.0 * kk * lt;
    // ln(1 + eˣ) without overflow
    let softplus = if x > 0.0 { x + (-x).exp().ln_1p() } else { x.exp().ln_1p() };
    let log_mag = -0.5 * 2f64.ln() - kk * lt + (p as f64 - 1.0) * lr - softplus;
    Ok(C64::from_polar(log_mag.exp(), -(p as f64 - 1.0) * z.arg()))
}

/// Radius of the maximum of `|synthetic_bhat|` at fixed `t`, by golden-section
/// search in `ln|z|`; `None` when `p = 1` and the profile is monotone.
pub fn synthetic_bhat_peak(k: u32, m: u32, t: f64) -> Result<Option<f64>> {
    let p = half_index(k, m)?;
    if p == 1 {
        return Ok(None);
    }
    let centre = (k as f64 + 1.0) / p as f64 * t.ln();
    let f = |s: f64| -> f64 {
        synthetic_bhat(k, m, t, C64::new(s.exp(), 0.0)).map(|b| b.norm().ln()).unwrap_or(f64::NEG_INFINITY)
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (centre - 5.0, centre + 5.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc > fd {
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
    Ok(Some((0.5 * (a + b)).exp()))
}

/// `p/(m + 2p + 1)`, the exponent in `t_z ∼ |z|^{…}`.
pub fn tz_exponent(m: u32, p: u32) -> Result<Ratio<i64>> {
    if p == 0 {
        return Err(Error::BadParam("p must be at least 1".into()));
    }
    let (m, p) = (m as i64, p as i64);
    let r = Ratio::new(p, m + 2 * p + 1);
    let k = m + 2 * p;
    debug_assert_eq!(r, Ratio::new(k - m, 2 * (k + 1)));
    Ok(r)
}

/// The unique zero of `α` along a sampled trajectory, located by bisection on
/// the cubic interpolant; errors when `α` changes sign more than once or
/// crosses with non-positive slope.
pub fn turning_time(trajectory: &Trajectory) -> Result<Option<f64>> {
    let s = &trajectory.samples;
    let brackets: Vec<usize> = (1..s.len()).filter(|&i| (s[i - 1].1 < 0.0) != (s[i].1 < 0.0)).collect();
    match brackets.len() {
        0 => return Ok(None),
        1 => {}
        n => return Err(Error::MultipleZeros(n)),
    }
    let i = brackets[0];
    if s[i].1 < s[i - 1].1 {
        return Err(Error::BadParam(format!("alpha decreases through zero near t = {}", s[i].0)));
    }
    let (mut a, mut b) = (s[i - 1].0, s[i].0);
    if s[i - 1].1 == 0.0 {
        return Ok(Some(a));
    }
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if c <= a || c >= b {
            break;
        }
        if trajectory.interpolate(c) < 0.0 {
            a = c;
        } else {
            b = c;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Samples a profile on a log-spaced grid of `t`.
pub fn sample_profile(f: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, n: usize) -> Trajectory {
    let samples = (0..n)
        .map(|i| {
            let t = t_lo * (t_hi / t_lo).powf(i as f64 / (n - 1) as f64);
            (t, f(t))
        })
        .collect();
    Trajectory { samples, termination: Termination::Completed }
}

/// Profile table with columns `t,z,value`.
pub fn write_profile_csv(out: &mut impl Write, rows: &[(f64, f64, f64)]) -> Result<()> {
    writeln!(out, "t,z,value")?;
    for (t, z, v) in rows {
        writeln!(out, "{t:.17e},{z:.17e},{v:.17e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_err(tr: &Trajectory, exact: impl Fn(f64) -> f64) -> f64 {
        tr.samples.iter().map(|&(x, y)| (y - exact(x)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn alpha_riccati_matches_closed_forms() {
        let ctl = StepControl::default();
        let tr = riccati_alpha(0.0, -0.5, 1.0, 10.0, ctl).unwrap();
        assert_eq!(tr.termination, Termination::Completed);
        assert!(max_err(&tr, |t| -0.5 / t) < 1e-8);
        let tr = riccati_alpha(0.0, -0.25, 1.0, 10.0, ctl).unwrap();
        assert!(max_err(&tr, |t| -0.5 / (t + 1.0)) < 1e-8);
        let tr = riccati_alpha(-2.0, -1.0, 1.0, 10.0, ctl).unwrap();
        assert!(tr.samples.iter().all(|&(_, a)| (a + 1.0).abs() < 1e-12));
        let tr = riccati_alpha(-2.0, -0.3, 1.0, 10.0, ctl).unwrap();
        assert!((tr.last().1 + 1.0).abs() < 1e-8);
        assert!(riccati_alpha(0.0, 1.0, 0.0, 1.0, ctl).is_err());
    }

    #[test]
    fn alpha_riccati_blows_up_in_finite_time() {
        // α = 1/(2(2 − t)) escapes at t = 2
        let tr = riccati_alpha(0.0, 0.5, 1.0, 5.0, StepControl::default()).unwrap();
        match tr.termination {
            Termination::BlowUp { at } => assert!((at - 2.0).abs() < 1e-5, "{at}"),
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn unforced_y_matches_tanh() {
        for k in 0..=4 {
            for y0 in [0.0, -0.3, 0.2] {
                let spec = RiccatiSpec { k, mu: 0.0, y0, tau0: 0.0 };
                let tr = riccati_y(spec, &|_| 0.0, 5.0, StepControl::default()).unwrap();
                let e = max_err(&tr, |tau| tanh_solution(k, y0, tau));
                assert!(e < 1e-8, "k={k} y0={y0}: {e}");
            }
        }
        let spec = RiccatiSpec { k: 1, mu: 0.0, y0: 0.0, tau0: 0.0 };
        let tr = riccati_y(spec, &|_| 0.0, 5.0, StepControl::default()).unwrap();
        assert!(max_err(&tr, |tau| (2.0 * tau).tanh()) < 1e-8);
    }

    #[test]
    fn y_below_minus_lambda_blows_up_and_above_lambda_decays() {
        let ctl = StepControl::default();
        let tr = riccati_y(RiccatiSpec { k: 1, mu: 0.0, y0: -1.5, tau0: 0.0 }, &|_| 0.0, 5.0, ctl).unwrap();
        assert!(tr.blew_up());
        let tr = riccati_y(RiccatiSpec { k: 2, mu: 0.0, y0: 2.0, tau0: 0.0 }, &|_| 0.0, 5.0, ctl).unwrap();
        assert!(tr.samples.windows(2).all(|w| w[1].1 < w[0].1));
        assert!((tr.last().1 - 1.5).abs() < 1e-8);
    }

    #[test]
    fn forcing_budget_is_enforced() {
        let spec = RiccatiSpec { k: 1, mu: 0.01, y0: 0.0, tau0: 0.0 };
        assert!(riccati_y(spec, &|t| 0.05 * t.sin(), 2.0, StepControl::default()).is_err());
    }

    #[test]
    fn tanh_lower_bound_holds() {
        let ctl = StepControl::default();
        let tr = riccati_y(RiccatiSpec { k: 1, mu: 0.0, y0: 0.0, tau0: 0.0 }, &|_| 0.0, 5.0, ctl).unwrap();
        assert!(tanh_bound_check(1, 0.0, &tr).unwrap() <= 1e-8);
        for k in 0..3 {
            let spec = RiccatiSpec { k, mu: 0.05, y0: 0.1, tau0: 0.0 };
            let tr = riccati_y(spec, &|t| 0.05 * t.sin(), 5.0, ctl).unwrap();
            assert!(tanh_bound_check(k, 0.05, &tr).unwrap() <= 1e-8);
        }
        assert!((tanh_lambda(0, 0.05).unwrap() - 0.5 * (1.0f64 - 0.2).sqrt()).abs() < 1e-15);
        assert!(tanh_lambda(0, 0.3).is_err());
    }

    #[test]
    fn profile_limits() {
        for k in 0..4 {
            let kk = k as f64 + 1.0;
            assert_eq!(alpha_profile(k, 0.3, 0.3), 0.0);
            assert!((alpha_profile(k, 1e6, 1.0) * 2e6 / kk - 1.0).abs() < 1e-10);
            assert!((alpha_profile(k, 1e-6, 1.0) * 2e-6 / kk + 1.0).abs() < 1e-10);
            for s in [0.1, 0.7, 2.0] {
                let tz = 0.4;
                let a = alpha_profile(k, tz * f64::exp(s), tz) * tz * f64::exp(s);
                let b = alpha_profile(k, tz * f64::exp(-s), tz) * tz * f64::exp(-s);
                assert!((a + b).abs() < 1e-15);
            }
            assert!((beta_profile(k, 0.2, 0.2) - kk / 0.4).abs() < 1e-12);
            let (t, tz) = (5000.0f64, 0.5f64);
            let lead = kk * tz.powf(2.0 * kk) / t.powf(2.0 * kk + 1.0);
            assert!((beta_profile(k, t, tz) / lead - 1.0).abs() < 1e-6);
            let v = phi_profile(k, 2, 1.5, 0.1, 0.1, 1.0, 0.3);
            assert!((v - 2.0 * 1.5 * 0.09 * 0.1f64.powf(kk)).abs() < 1e-15);
        }
    }

    #[test]
    fn phi_profile_is_smallest_at_turning_time() {
        let f = |t: f64| phi_profile(2, 1, 1.0, t, 0.2, 1.0, 0.1);
        let h = 1e-4;
        assert!(f(0.2 - h) > f(0.2) && f(0.2 + h) > f(0.2));
        assert!(f(0.2 - h) - f(0.2 - 2.0 * h) < 0.0 && f(0.2 + 2.0 * h) - f(0.2 + h) > 0.0);
    }

    #[test]
    fn synthetic_bhat_examples() {
        assert!(matches!(synthetic_bhat(3, 0, 0.1, C64::new(0.1, 0.0)), Err(Error::BadParity(3))));
        assert!(matches!(synthetic_bhat(1, 1, 0.1, C64::new(0.1, 0.0)), Err(Error::BadParity(0))));
        // t → 0 at fixed z
        let (k, m) = (4, 0);
        let z = C64::new(0.3, 0.4);
        for t in [1e-3, 1e-6, 1e-12] {
            let b = synthetic_bhat(k, m, t, z).unwrap().norm();
            let lead = t.powi(5) * 0.5f64.powi(-3) / 2f64.sqrt();
            assert!((b / lead - 1.0).abs() < 1e-9);
        }
        let tiny = synthetic_bhat(4, 0, 1e-80, z).unwrap();
        assert!(tiny.norm().is_finite());
        // phase follows z̄^{p−1}
        let b = synthetic_bhat(4, 0, 0.5, C64::from_polar(0.2, 0.7)).unwrap();
        assert!((b.arg() + 0.7).abs() < 1e-12);
    }

    #[test]
    fn synthetic_bhat_peak_scaling() {
        assert_eq!(synthetic_bhat_peak(3, 1, 0.1).unwrap(), None);
        for (k, m) in [(4, 0), (5, 1), (6, 0)] {
            let p = (k - m) / 2;
            let r = synthetic_bhat_peak(k, m, 0.2).unwrap().unwrap();
            let expect = 0.2f64.powf((k as f64 + 1.0) / p as f64) * ((p as f64 - 1.0) / (p as f64 + 1.0)).powf(0.5 / p as f64);
            assert!((r / expect - 1.0).abs() < 1e-6, "{r} {expect}");
        }
    }

    #[test]
    fn tz_exponent_examples() {
        assert_eq!(tz_exponent(0, 1).unwrap(), Ratio::new(1, 3));
        assert_eq!(tz_exponent(1, 1).unwrap(), Ratio::new(1, 4));
        assert_eq!(tz_exponent(0, 2).unwrap(), Ratio::new(2, 5));
        assert!(tz_exponent(0, 0).is_err());
    }

    #[test]
    fn turning_time_examples() {
        let tr = sample_profile(|t| alpha_profile(2, t, 0.1), 0.01, 1.0, 400);
        assert!((turning_time(&tr).unwrap().unwrap() - 0.1).abs() < 1e-6);
        let tr = sample_profile(|t| -0.5 / t, 0.01, 1.0, 50);
        assert_eq!(turning_time(&tr).unwrap(), None);
        let tr = sample_profile(|t| (10.0 * t).sin(), 0.1, 1.0, 200);
        assert!(matches!(turning_time(&tr), Err(Error::MultipleZeros(3))));
        // α = tan(2(t − t_z)) solves α′ = 2α² + 2
        let tr = riccati_alpha(-2.0 * -1.0, -0.5, 1.0, 1.5, StepControl::default()).unwrap();
        let tz = turning_time(&tr).unwrap().unwrap();
        let exact = 1.0 + (0.5f64).atan() / 2.0;
        assert!((tz - exact).abs() < 1e-8, "{tz} {exact}");
    }

    #[test]
    fn csv_headers() {
        let tr = sample_profile(|t| t, 1.0, 2.0, 3);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, ["t", "alpha"]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("t,alpha\n"));
        assert_eq!(s.lines().count(), 4);
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &[(1.0, 0.0, 2.0)]).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,z,value\n"));
    }
}
