//! Closed-form solution families and their scalar profiles.
//!
//! Everything is expressed through `q = e^{−2Θ} = (|z|/(t+x))²`, which lies in
//! `[0, 1)` and turns the hyperbolic ratios into finite geometric sums. This
//! keeps the formulas smooth across `z = 0` (where `q = 0`) and free of
//! cancellation as `Θ → 0` (where `q → 1`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::su2::{CLieElement, LieElement, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImposterParams {
    pub w: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointTZ {
    pub t: f64,
    pub z: C64,
}

impl PointTZ {
    pub fn new(t: f64, x1: f64, x2: f64) -> Self {
        PointTZ {
            t,
            z: C64::new(x1, x2),
        }
    }
}

/// Connection components `(A_t, A_1, A_2)` and Higgs components `(a_1, a_2, a_3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldSample {
    pub conn: [LieElement; 3],
    pub higgs: [LieElement; 3],
}

impl FieldSample {
    /// `φ = a_1 − i a_2`.
    pub fn phi(&self) -> CLieElement {
        CLieElement::from_parts(&self.higgs[0], &(-self.higgs[1]))
    }

    pub fn scaled(&self, s: f64) -> FieldSample {
        FieldSample {
            conn: self.conn.map(|a| a.scale(s)),
            higgs: self.higgs.map(|a| a.scale(s)),
        }
    }

    /// `|a|` as the Euclidean norm over the three Higgs components.
    pub fn higgs_norm(&self) -> f64 {
        self.higgs.iter().map(|a| a.norm_sq()).sum::<f64>().sqrt()
    }
}

/// Splits a complex coefficient `g` of `(σ₁ − iσ₂)` into real `(a_1, a_2)`
/// with `a_1 − i a_2 = g (σ₁ − iσ₂)`.
fn lowering_pair(g: C64) -> (LieElement, LieElement) {
    (
        LieElement::new(g.re, g.im, 0.0),
        LieElement::new(-g.im, g.re, 0.0),
    )
}

/// `(Θ, x)` with `sinh Θ = t/|z|`, `x = (t² + |z|²)^{1/2}`; `Θ = +∞` at `z = 0`.
pub fn theta_x(p: &PointTZ) -> (f64, f64) {
    let rho = p.z.norm();
    let x = p.t.hypot(rho);
    let theta = if rho == 0.0 {
        f64::INFINITY
    } else {
        (p.t / rho).asinh()
    };
    (theta, x)
}

/// Geometric sum `Σ_{j=0}^{n-1} q^j`.
fn geom(q: f64, n: u32) -> f64 {
    let mut s = 0.0;
    let mut p = 1.0;
    for _ in 0..n {
        s += p;
        p *= q;
    }
    s
}

/// Below this value of `(m+1)Θ` the logarithm of the ratio is taken from its
/// Taylor series.
const SERIES_CUTOFF: f64 = 0.05;

/// `ln(sinh y / y)` for small `y`.
fn ln_sinhc(y: f64) -> f64 {
    let y2 = y * y;
    y2 * (1.0 / 6.0
        + y2 * (-1.0 / 180.0 + y2 * (1.0 / 2835.0 + y2 * (-1.0 / 37800.0 + y2 / 467775.0))))
}

/// `ln((m+1) sinh Θ / sinh((m+1)Θ))`.
fn ln_sinh_ratio(m: u32, theta: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if theta.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let n = (m + 1) as f64;
    if n * theta < SERIES_CUTOFF {
        ln_sinhc(theta) - ln_sinhc(n * theta)
    } else {
        let q = (-2.0 * theta).exp();
        n.ln() - m as f64 * theta - geom(q, m + 1).ln()
    }
}

/// `(m+1) sinh Θ / sinh((m+1)Θ)`, equal to 1 at `Θ = 0` and 0 at `Θ = ∞`.
pub fn sinh_ratio(m: u32, theta: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    if theta.is_infinite() {
        return 0.0;
    }
    let n = (m + 1) as f64;
    if n * theta < SERIES_CUTOFF {
        ln_sinh_ratio(m, theta).exp()
    } else {
        let q = (-2.0 * theta).exp();
        n * (-(m as f64) * theta).exp() / geom(q, m + 1)
    }
}

/// `w^(m) = ½ ln sinh_ratio(m, Θ)`.
pub fn w_model(m: u32, theta: f64) -> f64 {
    0.5 * ln_sinh_ratio(m, theta)
}

/// Shared pieces of the model formulas at one point.
struct ModelGeometry {
    n: f64,
    x: f64,
    /// `t + x`
    s: f64,
    q: f64,
    /// `Σ_{j=0}^{m} q^j`
    g: f64,
    /// `tanh Θ · coth((m+1)Θ)`
    tc: f64,
}

impl ModelGeometry {
    fn new(m: u32, p: &PointTZ) -> Self {
        let rho = p.z.norm();
        let x = p.t.hypot(rho);
        let s = p.t + x;
        let q = (rho / s).powi(2);
        let g = geom(q, m + 1);
        let tc = (1.0 + q.powi(m as i32 + 1)) / ((1.0 + q) * g);
        ModelGeometry {
            n: (m + 1) as f64,
            x,
            s,
            q,
            g,
            tc,
        }
    }

    /// `1 − (m+1) sinh 2Θ / sinh(2(m+1)Θ)` as a sum of squares.
    fn one_minus_double_ratio(&self, m: u32) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..=m {
            let a = self.q.powi(j as i32);
            let b = self.q.powi((m - j) as i32);
            num += (a - b) * (a - b);
            den += a * a;
        }
        0.5 * num / den
    }
}

/// The degree-`m` model pair at `p`, smooth across `z = 0`.
pub fn model_fields(params: ModelParams, p: &PointTZ) -> FieldSample {
    let m = params.m;
    let t = p.t;
    let geo = ModelGeometry::new(m, p);
    let a3 = LieElement::new(0.0, 0.0, -geo.n * geo.tc / (2.0 * t));
    let g = (p.z / geo.s).powi(m as i32) * (-geo.n / (2.0 * t * geo.g));
    let (a1, a2) = lowering_pair(g);
    // Â = K dθ σ₃ with K/|z|² = (m+1) Σ_{j<m} q^j / ((t+x)² (1+q) Σ_{j≤m} q^j)
    let k_over_rho2 = geo.n * geom(geo.q, m) / (geo.s * geo.s * (1.0 + geo.q) * geo.g);
    let a_1 = LieElement::new(0.0, 0.0, -k_over_rho2 * p.z.im);
    let a_2 = LieElement::new(0.0, 0.0, k_over_rho2 * p.z.re);
    FieldSample {
        conn: [LieElement::ZERO, a_1, a_2],
        higgs: [a1, a2, a3],
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Curvature {
    pub b3: LieElement,
    pub e1: LieElement,
    pub e2: LieElement,
}

impl Curvature {
    pub fn norm_sq(&self) -> f64 {
        self.b3.norm_sq() + self.e1.norm_sq() + self.e2.norm_sq()
    }
}

/// Closed-form curvature of the model connection.
pub fn model_curvature(params: ModelParams, p: &PointTZ) -> Curvature {
    let m = params.m;
    let geo = ModelGeometry::new(m, p);
    let d = geo.one_minus_double_ratio(m);
    let b = geo.n / (2.0 * geo.x * geo.x) * geo.tc * d;
    // coth((m+1)Θ) = (1 + q^{m+1})(t+x) / (2t Σ q^j)
    let coth = (1.0 + geo.q.powi(m as i32 + 1)) * geo.s / (2.0 * p.t * geo.g);
    let f = geo.n / (2.0 * geo.x.powi(3)) * coth * d;
    Curvature {
        b3: LieElement::new(0.0, 0.0, b),
        e1: LieElement::new(0.0, 0.0, f * p.z.im),
        e2: LieElement::new(0.0, 0.0, -f * p.z.re),
    }
}

/// The Nahm-pole imposter with parameter `w`; it depends on `t` only.
///
/// The connection has `b_t = b_3 = 0` and `b_1 + i b_2 = −(w/2t)(σ₁ − iσ₂)`.
pub fn imposter_fields(params: ImposterParams, t: f64) -> Result<FieldSample> {
    let w = params.w;
    if w.norm() > 1.0 {
        return Err(Error::BadParam(format!("imposter |w| = {} > 1", w.norm())));
    }
    let amp = -(1.0 - w.norm_sqr()).max(0.0).sqrt() / (2.0 * t);
    let (a1, a2) = lowering_pair(C64::new(amp, 0.0));
    let k = w * (-1.0 / (2.0 * t));
    // b_1 + i b_2 = k(σ₁ − iσ₂)
    let b1 = LieElement::new(k.re, k.im, 0.0);
    let b2 = LieElement::new(k.im, -k.re, 0.0);
    Ok(FieldSample {
        conn: [LieElement::ZERO, b1, b2],
        higgs: [a1, a2, LieElement::new(0.0, 0.0, -1.0 / (2.0 * t))],
    })
}

/// The Abelian family: `a_3 = −(r/x)σ₃`, `φ = 0`, `A = r(1 − t/x) dθ σ₃`.
pub fn abelian_fields(r: f64, p: &PointTZ) -> FieldSample {
    let x = p.t.hypot(p.z.norm());
    // (1 − t/x)/|z|² = 1/(x(x+t))
    let k = r / (x * (x + p.t));
    FieldSample {
        conn: [
            LieElement::ZERO,
            LieElement::new(0.0, 0.0, -k * p.z.im),
            LieElement::new(0.0, 0.0, k * p.z.re),
        ],
        higgs: [
            LieElement::ZERO,
            LieElement::ZERO,
            LieElement::new(0.0, 0.0, -r / x),
        ],
    }
}

/// The Nahm-pole-like family with `|a_3| → c/4` as `t → ∞`.
///
/// `a_3 = −(c/4) coth(ct/2) σ₃`, `φ = c/(4 sinh(ct/2)) (σ₁ − iσ₂)`, `A = 0`.
pub fn c_family_fields(c: f64, t: f64) -> FieldSample {
    let h = 0.5 * c * t;
    let e = (-2.0 * h).exp();
    let coth = (1.0 + e) / (-(-2.0 * h).exp_m1());
    let amp = 0.5 * c * (-h).exp() / (-(-2.0 * h).exp_m1());
    let (a1, a2) = lowering_pair(C64::new(amp, 0.0));
    FieldSample {
        conn: [LieElement::ZERO; 3],
        higgs: [a1, a2, LieElement::new(0.0, 0.0, -0.25 * c * coth)],
    }
}

/// `⟨a_3 [a_1, a_2]⟩` computed from [`model_fields`] by bracket arithmetic.
pub fn triple_product_model(params: ModelParams, p: &PointTZ) -> f64 {
    let f = model_fields(params, p);
    f.higgs[2].inner(&f.higgs[0].bracket(&f.higgs[1]))
}

/// The quoted closed form `(1/2t³) S² cosh((m+1)Θ)/cosh Θ` with
/// `S = sinh_ratio(m, Θ)`. It equals `2/S` times the bracket value.
pub fn triple_product_closed_form(params: ModelParams, p: &PointTZ) -> f64 {
    let geo = ModelGeometry::new(params.m, p);
    let (theta, _) = theta_x(p);
    let s = sinh_ratio(params.m, theta);
    // S·cosh((m+1)Θ)/cosh Θ = (m+1) tanh Θ coth((m+1)Θ)
    s * geo.n * geo.tc / (2.0 * p.t.powi(3))
}

/// `∫_{|z| ≤ R} w^(m)(t, z) d²z` by adaptive polar quadrature.
pub fn w_model_disk_integral(m: u32, t: f64, r: f64) -> Result<f64> {
    if !(r > t && t > 0.0) {
        return Err(Error::BadParam(format!("need R > t > 0, got R={r}, t={t}")));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let radial = |rho: f64| {
        let theta = if rho == 0.0 { f64::INFINITY } else { (t / rho).asinh() };
        2.0 * PI * rho * w_model(m, theta)
    };
    let mut total = quad::adaptive(0.0, t, 1e-14 * t * t, 1e-12, radial)?;
    let edges = quad::log_panels(t, r, 2.0);
    for w in edges.windows(2) {
        total += quad::adaptive(w[0], w[1], 1e-14 * t * t, 1e-12, radial)?;
    }
    Ok(total)
}

/// Least-squares slope of the disk integral against `ln(R/t)` over
/// `count` log-spaced radii in `[r_lo, r_hi]`.
pub fn disk_integral_slope(m: u32, t: f64, r_lo: f64, r_hi: f64, count: usize) -> Result<f64> {
    if count < 2 || r_hi <= r_lo {
        return Err(Error::BadParam("need at least two distinct radii".into()));
    }
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / (count - 1) as f64);
        xs.push((r / t).ln());
        ys.push(w_model_disk_integral(m, t, r)?);
    }
    Ok(linear_fit(&xs, &ys).0)
}

/// Least-squares `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Every closed-form family that can be sampled on a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Model { m: u32 },
    Imposter { w: C64 },
    Abelian { r: f64 },
    CFamily { c: f64 },
    /// Nahm pole with `a_3` multiplied by `factor`; not a solution unless 1.
    ScaledNahm { factor: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Imposter { w } if w.norm() > 1.0 => {
                Err(Error::BadParam(format!("imposter |w| = {} > 1", w.norm())))
            }
            Family::Abelian { r } if !(r > 0.0) => Err(Error::BadParam("abelian r must be > 0".into())),
            Family::CFamily { c } if !(c > 0.0) => Err(Error::BadParam("c-family c must be > 0".into())),
            _ => Ok(()),
        }
    }

    /// Sample at one point; callers validate once with [`Family::validate`].
    pub fn sample(&self, p: &PointTZ) -> FieldSample {
        match *self {
            Family::Model { m } => model_fields(ModelParams { m }, p),
            Family::Imposter { w } => imposter_fields(ImposterParams { w }, p.t)
                .unwrap_or_else(|_| FieldSample::default()),
            Family::Abelian { r } => abelian_fields(r, p),
            Family::CFamily { c } => c_family_fields(c, p.t),
            Family::ScaledNahm { factor } => {
                let mut f = model_fields(ModelParams { m: 0 }, p);
                f.higgs[2] = f.higgs[2].scale(factor);
                f
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Family::Model { m } => format!("model m={m}"),
            Family::Imposter { w } => format!("imposter w={}{:+}i", w.re, w.im),
            Family::Abelian { r } => format!("abelian r={r}"),
            Family::CFamily { c } => format!("c-family c={c}"),
            Family::ScaledNahm { factor } => format!("scaled nahm factor={factor}"),
        }
    }

    /// Vanishing degree of φ at `z = 0`, when φ is not identically zero.
    pub fn vanishing_degree(&self) -> Option<u32> {
        match *self {
            Family::Model { m } => Some(m),
            Family::Imposter { w } if w.norm() < 1.0 => Some(0),
            Family::CFamily { .. } | Family::ScaledNahm { .. } => Some(0),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// `(m+1)/U_m(cosh Θ)` with the Chebyshev recurrence, as an independent
    /// oracle for the ratio.
    fn chebyshev_ratio(m: u32, theta: f64) -> f64 {
        let x = 1.0 + 2.0 * (0.5 * theta).sinh().powi(2);
        let (mut u0, mut u1) = (1.0, 2.0 * x);
        if m == 0 {
            return 1.0;
        }
        for _ in 1..m {
            let u2 = 2.0 * x * u1 - u0;
            u0 = u1;
            u1 = u2;
        }
        (m + 1) as f64 / u1
    }

    #[test]
    fn theta_x_examples() {
        let (th, x) = theta_x(&PointTZ::new(1.0, 1.0, 0.0));
        assert!((th - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
        assert!((x - 2f64.sqrt()).abs() < 1e-15);
        let (_, x) = theta_x(&PointTZ::new(3.0, 0.0, 4.0));
        assert_eq!(x, 5.0);
        let (th, _) = theta_x(&PointTZ::new(1e-6, 1.0, 0.0));
        assert!(rel(th, 1e-6) < 1e-12);
        assert!(theta_x(&PointTZ::new(1.0, 0.0, 0.0)).0.is_infinite());
    }

    #[test]
    fn sinh_ratio_examples() {
        for th in [0.0, 0.3, 7.0, 50.0, f64::INFINITY] {
            assert_eq!(sinh_ratio(0, th), 1.0);
        }
        let th = (1.0 + 2f64.sqrt()).ln();
        assert!((sinh_ratio(1, th) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(sinh_ratio(3, 0.0), 1.0);
        assert!((sinh_ratio(3, 1e-9) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sinh_ratio_matches_chebyshev_oracle() {
        for m in 0..=6 {
            let mut th = 1e-12;
            while th <= 50.0 {
                let got = sinh_ratio(m, th);
                let want = chebyshev_ratio(m, th);
                assert!(rel(got, want) < 1e-12, "m={m} th={th} got={got} want={want}");
                th *= 1.37;
            }
        }
    }

    #[test]
    fn w_model_examples() {
        for th in [0.0, 0.5, 40.0] {
            assert_eq!(w_model(0, th), 0.0);
        }
        let th = (1.0 + 2f64.sqrt()).ln();
        assert!((w_model(1, th) + 0.25 * 2f64.ln()).abs() < 1e-15);
        // w ≈ −Θ + ½ ln 3 for m = 2 at large Θ
        let th = 30.0;
        assert!((w_model(2, th) - (-th + 0.5 * 3f64.ln())).abs() < 1e-12);
        assert_eq!(w_model(2, 0.0), 0.0);
    }

    #[test]
    fn w_model_strictly_negative_and_vanishing_at_zero() {
        for m in 1..=4 {
            let mut th = 1e-8;
            while th < 60.0 {
                let w = w_model(m, th);
                assert!(w < 0.0, "m={m} th={th} w={w}");
                th *= 1.5;
            }
            assert!(w_model(m, 1e-8).abs() < 1e-14);
            // series and geometric branches agree near the switch
            let n = (m + 1) as f64;
            let a = SERIES_CUTOFF / n;
            let below = w_model(m, a * (1.0 - 1e-9));
            let above = w_model(m, a * (1.0 + 1e-9));
            assert!(rel(below, above) < 1e-7);
        }
    }

    #[test]
    fn nahm_pole_is_m0_model() {
        let p = PointTZ::new(0.7, 0.3, -1.1);
        let f = model_fields(ModelParams { m: 0 }, &p);
        let h = 1.0 / (2.0 * 0.7);
        assert!((f.higgs[2] - LieElement::new(0.0, 0.0, -h)).norm() < 1e-15);
        assert!((f.higgs[0] - LieElement::new(-h, 0.0, 0.0)).norm() < 1e-15);
        assert!((f.higgs[1] - LieElement::new(0.0, -h, 0.0)).norm() < 1e-15);
        assert!(f.conn.iter().all(|a| a.norm() == 0.0));
        let c = model_curvature(ModelParams { m: 0 }, &p);
        assert_eq!(c.norm_sq(), 0.0);
    }

    #[test]
    fn model_limits_at_origin_and_far_field() {
        let t = 1.3;
        let f = model_fields(ModelParams { m: 1 }, &PointTZ::new(t, 0.0, 0.0));
        assert!(rel(f.higgs[2].norm(), 1.0 / t) < 1e-15);
        assert!(f.phi().norm() == 0.0);
        let f = model_fields(ModelParams { m: 2 }, &PointTZ::new(t, 1e7, 0.0));
        assert!(rel(f.phi().norm(), 1.0 / (2f64.sqrt() * t)) < 1e-6);
        for m in 0..=4 {
            let a0 = model_fields(ModelParams { m }, &PointTZ::new(t, 0.0, 0.0)).higgs[2].c[2];
            assert!(rel(a0, -((m + 1) as f64) / (2.0 * t)) < 1e-14);
            let far = model_fields(ModelParams { m }, &PointTZ::new(t, 1e6 * t, 0.0)).higgs[2].c[2];
            assert!(rel(far, -1.0 / (2.0 * t)) < 1e-6);
        }
    }

    #[test]
    fn model_matches_hyperbolic_formulas_away_from_axis() {
        for m in 0..=4u32 {
            for &(t, x1, x2) in &[(0.5, 0.3, 0.4), (2.0, -1.0, 0.2), (0.1, 3.0, -2.0)] {
                let p = PointTZ::new(t, x1, x2);
                let (th, _) = theta_x(&p);
                let n = (m + 1) as f64;
                let s = n * th.sinh() / (n * th).sinh();
                let c = (n * th).cosh() / th.cosh();
                let f = model_fields(ModelParams { m }, &p);
                assert!(rel(f.higgs[2].c[2], -s * c / (2.0 * t)) < 1e-12);
                let rho = p.z.norm();
                let want = (p.z / rho).powi(m as i32) * (-s / (2.0 * t));
                let (a1, a2) = lowering_pair(want);
                assert!((f.higgs[0] - a1).norm() < 1e-12 && (f.higgs[1] - a2).norm() < 1e-12);
                let k = 0.5 * n * (1.0 - th.tanh() / (n * th).tanh());
                assert!((f.conn[1].c[2] + k * x2 / (rho * rho)).abs() < 1e-12);
                assert!((f.conn[2].c[2] - k * x1 / (rho * rho)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn model_scale_invariance() {
        for m in 0..=3 {
            let p = PointTZ::new(0.8, 0.5, -0.3);
            let lam = 3.7;
            let a = model_fields(ModelParams { m }, &PointTZ::new(lam * 0.8, lam * 0.5, lam * -0.3));
            let b = model_fields(ModelParams { m }, &p).scaled(1.0 / lam);
            for k in 0..3 {
                assert!((a.higgs[k] - b.higgs[k]).norm() < 1e-15);
                assert!((a.conn[k] - b.conn[k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn orthogonality_of_higgs_pair() {
        for m in 0..=3 {
            for &(t, x1, x2) in &[(0.5, 0.0, 0.0), (1.0, 0.4, -0.9), (2.0, 5.0, 1.0)] {
                let f = model_fields(ModelParams { m }, &PointTZ::new(t, x1, x2));
                let phi = f.phi();
                assert!(phi.inner(&phi).norm() < 1e-15);
                assert!((f.higgs[0].norm() - f.higgs[1].norm()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn imposter_examples() {
        let f = imposter_fields(ImposterParams { w: C64::new(0.0, 0.0) }, 0.9).unwrap();
        let g = model_fields(ModelParams { m: 0 }, &PointTZ::new(0.9, 0.0, 0.0));
        assert_eq!(f, g);
        let f = imposter_fields(ImposterParams { w: C64::new(0.6, 0.8) }, 1.0).unwrap();
        assert_eq!(f.phi().norm(), 0.0);
        let e = imposter_fields(ImposterParams { w: C64::new(1.0, 0.1) }, 1.0);
        assert!(matches!(e, Err(Error::BadParam(_))));
        // b_1 + i b_2 reproduces −(w/2t)(σ₁ − iσ₂)
        let w = C64::new(0.3, -0.4);
        let f = imposter_fields(ImposterParams { w }, 2.0).unwrap();
        let b = CLieElement::from_parts(&f.conn[1], &f.conn[2]);
        let lower = CLieElement::new(C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 0.0));
        assert!((b - lower.scale(-w / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn abelian_examples() {
        let f = abelian_fields(1.0, &PointTZ::new(1.0, 1e8, 0.0));
        assert!(f.higgs[2].norm() < 1e-7);
        let p = PointTZ::new(0.7, 0.2, 0.9);
        let f = abelian_fields(1.0, &p);
        let x = theta_x(&p).1;
        assert!(rel(f.higgs[2].norm(), 1.0 / x) < 1e-15);
        assert_eq!(f.phi().norm(), 0.0);
    }

    #[test]
    fn c_family_examples() {
        let f = c_family_fields(1.0, 1e-6);
        assert!((1e-6 * f.higgs[2].norm() - 0.5).abs() < 1e-6);
        let f = c_family_fields(1.0, 60.0);
        assert!((f.higgs[2].norm() - 0.25).abs() < 1e-12);
        // the Higgs amplitude is c/(4 sinh(ct/2))
        let f = c_family_fields(2.0, 0.7);
        assert!(rel(f.higgs[0].c[0], 2.0 / (4.0 * 0.7f64.sinh())) < 1e-14);
    }

    #[test]
    fn triple_product_examples() {
        let v = triple_product_model(ModelParams { m: 0 }, &PointTZ::new(1.0, 0.3, 0.2));
        assert!((v - 0.25).abs() < 1e-15);
        let v = triple_product_model(ModelParams { m: 1 }, &PointTZ::new(1.0, 0.0, 0.0));
        assert_eq!(v, 0.0);
    }

    #[test]
    fn triple_product_against_closed_form() {
        for m in 0..=3 {
            for &(t, x1, x2) in &[(0.5, 0.1, 0.0), (1.0, 1.0, 1.0), (2.0, -3.0, 0.5)] {
                let p = PointTZ::new(t, x1, x2);
                let (th, _) = theta_x(&p);
                let s = sinh_ratio(m, th);
                let direct = triple_product_model(ModelParams { m }, &p);
                let closed = triple_product_closed_form(ModelParams { m }, &p);
                assert!(direct >= 0.0 && closed >= 0.0);
                assert!(rel(direct, 0.5 * s * closed) < 1e-12);
            }
        }
    }

    #[test]
    fn disk_integral_slopes() {
        assert_eq!(w_model_disk_integral(0, 1.0, 100.0).unwrap(), 0.0);
        for m in 1..=2u32 {
            let want = -PI * (m * (m + 2)) as f64 / 6.0;
            let got = disk_integral_slope(m, 1.0, 1e3, 1e4, 5).unwrap();
            assert!(rel(got, want) < 0.02, "m={m} slope {got} vs {want}");
        }
        assert!(w_model_disk_integral(1, 2.0, 1.0).is_err());
    }
}
