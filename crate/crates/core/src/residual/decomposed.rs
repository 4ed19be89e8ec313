//! Checks built on the σ-decomposition: projected equations, curvature
//! splittings, pairing flows, balance, Bochner formulas and the w-calculus.

use super::{cnorm, cplx, tabulate, Equation, ResidualReport};
use crate::lattice::calculus::{cov, curvature_at, diff, Adjoint};
use crate::lattice::{Decomposition, Dir, Node, Sampling};
use crate::model::Curvature;
use crate::su2::{plus_part, CLieElement, LieElement, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Node-local accessors and derivatives on a decomposition.
struct View<'a> {
    d: &'a Decomposition,
}

impl<'a> View<'a> {
    fn alpha(&self, k: usize) -> f64 {
        self.d.nodes[k].alpha
    }

    fn covh<T: Adjoint>(&self, idx: usize, dir: Dir, f: impl Fn(usize) -> T) -> T {
        let n = &self.d.nodes;
        cov(&self.d.spec, idx, dir, |k| n[k].ahat[dir.index()], f)
    }

    /// Second covariant derivative `∇_Â,dir ∇_Â,dir f`.
    fn covh2<T: Adjoint>(&self, idx: usize, dir: Dir, f: impl Fn(usize) -> T + Copy) -> T {
        self.covh(idx, dir, |j| self.covh(j, dir, f))
    }

    fn d<T: crate::lattice::Vector>(&self, idx: usize, dir: Dir, f: impl Fn(usize) -> T) -> T {
        diff(&self.d.spec, idx, dir, f)
    }

    fn curv_hat(&self, idx: usize) -> Curvature {
        curvature_at(&self.d.spec, idx, |k| self.d.nodes[k].ahat)
    }

    fn curv_full(&self, idx: usize) -> Curvature {
        let n = &self.d.nodes;
        curvature_at(&self.d.spec, idx, |k| [0, 1, 2].map(|j| n[k].ahat[j] + n[k].b[j]))
    }

    fn skip_flagged(&self) -> impl Fn(usize) -> bool + '_ {
        |k| self.d.nodes[k].flagged
    }

    fn report(&self, eq: Equation, sampling: Sampling, value: impl Fn(usize) -> f64) -> ResidualReport {
        tabulate(eq, &self.d.spec, sampling, self.skip_flagged(), value)
    }
}

/// `⟨σ(X + iY)⟩` for real `X`, `Y`.
fn sigma_pair(s: &LieElement, x: &LieElement, y: &LieElement) -> C64 {
    C64::new(s.inner(x), s.inner(y))
}

/// `⟨η*ζ⟩ = Σ conj(η_i) ζ_i`.
fn pair(eta: &CLieElement, zeta: &CLieElement) -> C64 {
    eta.star().inner(zeta)
}

/// Residuals of the `L⁺` and σ projections of the reduced system.
pub fn projected_residuals(d: &Decomposition, sampling: Sampling) -> Vec<ResidualReport> {
    let v = View { d };
    let n = &d.nodes;
    let phi = |k: usize| n[k].phi;
    let beta = |k: usize| n[k].beta;
    let bhat = |k: usize| n[k].bhat;
    vec![
        v.report(Equation::ProjPhiT, sampling, |i| {
            (v.covh(i, Dir::T, phi) - n[i].phi.scale_re(2.0 * n[i].alpha)).norm()
        }),
        v.report(Equation::ProjPhiPlane, sampling, |i| {
            (v.covh(i, Dir::X1, phi) + v.covh(i, Dir::X2, phi) * I).norm()
        }),
        v.report(Equation::ProjBSigma, sampling, |i| {
            let x = &n[i];
            let bs = x.sigma.inner(&v.curv_hat(i).b3);
            let dt_alpha = v.d(i, Dir::T, |k| v.alpha(k));
            (bs - dt_alpha + x.phi.norm_sq() + 4.0 * x.bhat.norm_sq() + 4.0 * x.beta.norm_sq()).abs()
        }),
        v.report(Equation::ProjESigma, sampling, |i| {
            let c = v.curv_hat(i);
            let es = sigma_pair(&n[i].sigma, &c.e1, &c.e2);
            let grad = C64::new(v.d(i, Dir::X1, |k| v.alpha(k)), v.d(i, Dir::X2, |k| v.alpha(k)));
            // i(∂₁ + i∂₂)α = i∂₁α − ∂₂α
            cnorm(es + C64::new(-grad.im, grad.re))
        }),
        v.report(Equation::ProjBeta, sampling, |i| {
            let r = v.covh(i, Dir::T, beta) + n[i].beta.scale_re(2.0 * n[i].alpha)
                + v.covh(i, Dir::X1, bhat) * I
                + v.covh(i, Dir::X2, bhat);
            r.norm()
        }),
        v.report(Equation::ProjBhat, sampling, |i| {
            let r = v.covh(i, Dir::T, bhat) - n[i].bhat.scale_re(2.0 * n[i].alpha)
                + v.covh(i, Dir::X1, beta) * I
                - v.covh(i, Dir::X2, beta);
            r.norm()
        }),
    ]
}

/// σ and `L⁺` parts of the curvature of `A = Â + b`; these hold for every
/// decomposable pair.
pub fn curvature_projection_residuals(d: &Decomposition, sampling: Sampling) -> Vec<ResidualReport> {
    let v = View { d };
    let n = &d.nodes;
    let beta = |k: usize| n[k].beta;
    let bhat = |k: usize| n[k].bhat;
    let plus = |i: usize, x: &LieElement| plus_part(&n[i].sigma, &x.complexify());
    vec![
        v.report(Equation::CurvBSigma, sampling, |i| {
            let s = &n[i].sigma;
            (s.inner(&v.curv_full(i).b3) - s.inner(&v.curv_hat(i).b3) - 4.0 * n[i].bhat.norm_sq()).abs()
        }),
        v.report(Equation::CurvESigma, sampling, |i| {
            let s = &n[i].sigma;
            let (a, h) = (v.curv_full(i), v.curv_hat(i));
            cnorm(sigma_pair(s, &a.e1, &a.e2) - sigma_pair(s, &h.e1, &h.e2) + pair(&n[i].beta, &n[i].bhat) * 4.0)
        }),
        v.report(Equation::CurvBPlus, sampling, |i| {
            let r = plus(i, &v.curv_full(i).b3) + v.covh(i, Dir::X1, bhat) * I + v.covh(i, Dir::X2, bhat);
            r.norm()
        }),
        v.report(Equation::CurvE1Plus, sampling, |i| {
            let r = plus(i, &v.curv_full(i).e1) - v.covh(i, Dir::X1, beta) * I - v.covh(i, Dir::T, bhat);
            r.norm()
        }),
        v.report(Equation::CurvE2Plus, sampling, |i| {
            let r = plus(i, &v.curv_full(i).e2) - v.covh(i, Dir::X2, beta) * I + v.covh(i, Dir::T, bhat) * I;
            r.norm()
        }),
    ]
}

/// Time derivatives of `⟨φ*b̂⟩` and `⟨φ*β⟩` against curvature pairings.
pub fn pairing_flow_residuals(d: &Decomposition, sampling: Sampling) -> Vec<ResidualReport> {
    let v = View { d };
    let n = &d.nodes;
    vec![
        v.report(Equation::PairingBhat, sampling, |i| {
            let c = v.curv_full(i);
            let e = cplx(&c.e1, &c.e2);
            let lhs = v.d(i, Dir::T, |k| pair(&n[k].phi, &n[k].bhat));
            cnorm(lhs - pair(&n[i].phi, &e))
        }),
        v.report(Equation::PairingBeta, sampling, |i| {
            let b = v.curv_full(i).b3.complexify();
            let lhs = v.d(i, Dir::T, |k| pair(&n[k].phi, &n[k].beta));
            cnorm(lhs - pair(&n[i].phi, &b))
        }),
    ]
}

/// `∂_t(|β|² − |b̂|²)` balance against planar fluxes and `4α(|β|² + |b̂|²)`.
pub fn balance_residual(d: &Decomposition, sampling: Sampling) -> ResidualReport {
    let v = View { d };
    let n = &d.nodes;
    let x = |k: usize| pair(&n[k].beta, &n[k].bhat);
    let y = |k: usize| pair(&n[k].bhat, &n[k].beta);
    v.report(Equation::Balance, sampling, |i| {
        let dt = v.d(i, Dir::T, |k| n[k].beta.norm_sq() - n[k].bhat.norm_sq());
        let flux = I * (v.d(i, Dir::X1, x) - I * v.d(i, Dir::X2, x)) - I * (v.d(i, Dir::X1, y) + I * v.d(i, Dir::X2, y));
        let sink = 4.0 * n[i].alpha * (n[i].beta.norm_sq() + n[i].bhat.norm_sq());
        cnorm(flux + dt + sink)
    })
}

/// Second-order Bochner formulas for `β` and `b̂`.
pub fn bochner_residuals(d: &Decomposition, sampling: Sampling) -> Vec<ResidualReport> {
    let v = View { d };
    let n = &d.nodes;
    let beta = |k: usize| n[k].beta;
    let bhat = |k: usize| n[k].bhat;
    let lap = |i: usize, f: &dyn Fn(usize) -> CLieElement| {
        Dir::ALL.iter().fold(CLieElement::ZERO, |acc, &dir| acc + v.covh2(i, dir, f))
    };
    let scalars = |i: usize| {
        let bs = n[i].sigma.inner(&v.curv_hat(i).b3);
        let dt = v.d(i, Dir::T, |k| v.alpha(k));
        let grad = C64::new(v.d(i, Dir::X1, |k| v.alpha(k)), v.d(i, Dir::X2, |k| v.alpha(k)));
        (bs, dt, grad)
    };
    vec![
        v.report(Equation::BochnerBeta, sampling, |i| {
            let (bs, dt, g) = scalars(i);
            let a = n[i].alpha;
            let coef = -2.0 * bs - 2.0 * dt + 4.0 * a * a;
            // (∂₁ − i∂₂)α
            let dbar = g.conj();
            let r = lap(i, &beta) - n[i].beta.scale_re(coef) + n[i].bhat.scale(I * dbar * 4.0);
            r.norm()
        }),
        v.report(Equation::BochnerBhat, sampling, |i| {
            let (bs, dt, g) = scalars(i);
            let a = n[i].alpha;
            let coef = 2.0 * bs + 2.0 * dt + 4.0 * a * a;
            let r = lap(i, &bhat) - n[i].bhat.scale_re(coef) - n[i].beta.scale(I * g * 4.0);
            r.norm()
        }),
    ]
}

/// `𝔴 = ½ ln(√2 t^{m+1}|φ|/|z|^m)` on every node.
///
/// Nodes at `z = 0` or with `|φ|` below tolerance are filled by fourth-order
/// extrapolation from their in-plane neighbours.
pub fn frak_w(d: &Decomposition, m: u32) -> Vec<f64> {
    let spec = d.spec;
    let mf = m as f64;
    let raw = |k: usize| -> Option<f64> {
        let p = spec.point(k);
        let rho = p.z.norm();
        let ph = d.nodes[k].phi.norm();
        if d.nodes[k].flagged || (m > 0 && rho == 0.0) || ph == 0.0 {
            return None;
        }
        let pole = if m == 0 { 0.0 } else { mf * rho.ln() };
        Some(0.5 * (0.5 * 2f64.ln() + (mf + 1.0) * p.t.ln() + ph.ln() - pole))
    };
    let mut w: Vec<Option<f64>> = (0..spec.len()).map(raw).collect();
    for k in 0..spec.len() {
        if w[k].is_none() {
            w[k] = Some(fill(&spec, k, &w));
        }
    }
    w.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect()
}

fn fill(spec: &crate::lattice::GridSpec, k: usize, w: &[Option<f64>]) -> f64 {
    let n = spec.node(k);
    let get = |i1: isize, i2: isize| -> Option<f64> {
        if i1 < 0 || i2 < 0 || i1 >= spec.n_x as isize || i2 >= spec.n_x as isize {
            return None;
        }
        w[spec.index(Node { it: n.it, i1: i1 as usize, i2: i2 as usize })]
    };
    let (a, b) = (n.i1 as isize, n.i2 as isize);
    let mut est = Vec::new();
    for (d1, d2) in [(1, 0), (0, 1)] {
        let f = |s: isize| get(a + s * d1, b + s * d2);
        match (f(1), f(-1), f(2), f(-2)) {
            (Some(p1), Some(m1), Some(p2), Some(m2)) => est.push((4.0 * (p1 + m1) - (p2 + m2)) / 6.0),
            (Some(p1), Some(m1), _, _) => est.push(0.5 * (p1 + m1)),
            _ => {}
        }
    }
    if est.is_empty() {
        f64::NAN
    } else {
        est.iter().sum::<f64>() / est.len() as f64
    }
}

/// The scalar equation for `w` and its two ingredients, written through `𝔴`.
pub fn w_equation_residuals(d: &Decomposition, m: u32, sampling: Sampling) -> Vec<ResidualReport> {
    let v = View { d };
    let spec = d.spec;
    let n = &d.nodes;
    let w = frak_w(d, m);
    let wf = |k: usize| w[k];
    let mf = m as f64;
    let planar = |i: usize| v.d(i, Dir::X1, |j| v.d(j, Dir::X1, wf)) + v.d(i, Dir::X2, |j| v.d(j, Dir::X2, wf));
    vec![
        v.report(Equation::WLaplace, sampling, |i| {
            let t = spec.point(i).t;
            let wtt = v.d(i, Dir::T, |j| v.d(j, Dir::T, wf));
            let x = &n[i];
            (-(wtt + mf / (2.0 * t * t)) - planar(i) + x.phi.norm_sq() - 0.5 / (t * t)
                + 4.0 * (x.beta.norm_sq() + x.bhat.norm_sq()))
            .abs()
        }),
        v.report(Equation::WAlpha, sampling, |i| {
            let t = spec.point(i).t;
            (n[i].alpha + (mf + 1.0) / (2.0 * t) - v.d(i, Dir::T, wf)).abs()
        }),
        v.report(Equation::WCurvature, sampling, |i| {
            (n[i].sigma.inner(&v.curv_hat(i).b3) + planar(i)).abs()
        }),
    ]
}

/// The divergence identity with `∂_t w = ∂_t𝔴 − m/2t` and `e^{4w} = 2t²|φ|²`;
/// evaluated on every sampled node including `z = 0`.
pub fn divergence_identity_residual(d: &Decomposition, m: u32, sampling: Sampling) -> ResidualReport {
    let v = View { d };
    let spec = d.spec;
    let n = &d.nodes;
    let w = frak_w(d, m);
    let wf = |k: usize| w[k];
    let mf = m as f64;
    let density = |k: usize| {
        let t = spec.point(k).t;
        let x = &n[k];
        let wt = v.d(k, Dir::T, wf) - mf / (2.0 * t);
        let (w1, w2) = (v.d(k, Dir::X1, wf), v.d(k, Dir::X2, wf));
        -wt / (2.0 * t) + 0.5 * wt * wt - 0.5 * (w1 * w1 + w2 * w2)
            - (2.0 * t * t * x.phi.norm_sq() - 1.0) / (8.0 * t * t)
            + x.beta.norm_sq()
            - x.bhat.norm_sq()
    };
    let x = |k: usize| pair(&n[k].beta, &n[k].bhat);
    let y = |k: usize| pair(&n[k].bhat, &n[k].beta);
    let flux = |i: usize, dir: Dir| v.d(i, dir, |k| v.d(k, Dir::T, wf) * v.d(k, dir, wf));
    tabulate(Equation::Divergence, &spec, sampling, |_| false, |i| {
        let t = spec.point(i).t;
        let lhs = v.d(i, Dir::T, density);
        let lap = v.d(i, Dir::X1, |j| v.d(j, Dir::X1, wf)) + v.d(i, Dir::X2, |j| v.d(j, Dir::X2, wf));
        let rhs = (mf + 1.0) / (2.0 * t) * lap - flux(i, Dir::X1) - flux(i, Dir::X2);
        let cross = -I * (v.d(i, Dir::X1, x) - I * v.d(i, Dir::X2, x)) + I * (v.d(i, Dir::X1, y) + I * v.d(i, Dir::X2, y));
        cnorm(C64::new(lhs - rhs, 0.0) - cross)
    })
}
