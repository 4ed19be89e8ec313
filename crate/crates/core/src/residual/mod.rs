//! Node-wise residuals of the reduced equations and of the identities derived
//! from the σ-decomposition, with max and L² statistics over interior nodes.

pub mod constraints;
pub mod decomposed;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::calculus::{cov, curvature_at, sampled_curvature};
use crate::lattice::{decompose, Dir, GaugeConfig, GridSpec, Sampling};
use crate::model::{FieldSample, PointTZ};
use crate::su2::{CLieElement, LieElement, C64};

pub use constraints::{constraint_diagnostics, constraint_flux, ConstraintReport, FluxCurve, FluxTruncation};
pub use decomposed::{
    balance_residual, bochner_residuals, curvature_projection_residuals, divergence_identity_residual,
    frak_w, pairing_flow_residuals, projected_residuals, w_equation_residuals,
};

/// Whether a check holds for every decomposable pair or only for solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckClass {
    SolutionOnly,
    DecompositionIdentity,
}

macro_rules! equations {
    ($($v:ident => $id:literal, $class:ident, $what:literal;)*) => {
        /// Every residual the suite evaluates.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Equation { $($v),* }

        impl Equation {
            pub const ALL: &'static [Equation] = &[$(Equation::$v),*];

            pub fn id(self) -> &'static str {
                match self { $(Equation::$v => $id),* }
            }

            pub fn class(self) -> CheckClass {
                match self { $(Equation::$v => CheckClass::$class),* }
            }

            pub fn describe(self) -> &'static str {
                match self { $(Equation::$v => $what),* }
            }
        }
    };
}

equations! {
    KwPhiT => "kw.phi_t", SolutionOnly, "∇_t φ − i[a₃, φ]";
    KwPhiPlane => "kw.phi_plane", SolutionOnly, "(∇₁ + i∇₂)φ";
    KwB3 => "kw.b3", SolutionOnly, "∇_t a₃ − B₃ + [a₁, a₂]";
    KwE1 => "kw.e1", SolutionOnly, "E₁ − ∇₂ a₃";
    KwE2 => "kw.e2", SolutionOnly, "E₂ + ∇₁ a₃";
    SecondOrder => "second_order", SolutionOnly, "−Σ∇_j∇_j a_k + Σ[a_j, [a_k, a_j]]";
    ProjPhiT => "projected.phi_t", SolutionOnly, "∇_Ât φ − 2αφ";
    ProjPhiPlane => "projected.phi_plane", SolutionOnly, "(∇_Â₁ + i∇_Â₂)φ";
    ProjBSigma => "projected.b_sigma", SolutionOnly, "⟨σB_Â⟩ − ∂_tα + |φ|² + 4|b̂|² + 4|β|²";
    ProjESigma => "projected.e_sigma", SolutionOnly, "⟨σ(E_Â₁ + iE_Â₂)⟩ + i(∂₁ + i∂₂)α";
    ProjBeta => "projected.beta", SolutionOnly, "∇_Ât β + 2αβ + i(∇_Â₁ − i∇_Â₂)b̂";
    ProjBhat => "projected.bhat", SolutionOnly, "∇_Ât b̂ − 2αb̂ + i(∇_Â₁ + i∇_Â₂)β";
    CurvBSigma => "curvature.b_sigma", DecompositionIdentity, "⟨σB_A⟩ − ⟨σB_Â⟩ − 4|b̂|²";
    CurvESigma => "curvature.e_sigma", DecompositionIdentity, "⟨σ(E_A₁ + iE_A₂)⟩ − ⟨σ(E_Â₁ + iE_Â₂)⟩ + 4⟨β*b̂⟩";
    CurvBPlus => "curvature.b_plus", DecompositionIdentity, "B⁺_A + i(∇_Â₁ − i∇_Â₂)b̂";
    CurvE1Plus => "curvature.e1_plus", DecompositionIdentity, "E⁺_A₁ − i∇_Â₁β − ∇_Ât b̂";
    CurvE2Plus => "curvature.e2_plus", DecompositionIdentity, "E⁺_A₂ − i∇_Â₂β + i∇_Ât b̂";
    PairingBhat => "pairing.bhat", SolutionOnly, "∂_t⟨φ*b̂⟩ − ⟨φ*(E_A₁ + iE_A₂)⟩";
    PairingBeta => "pairing.beta", SolutionOnly, "∂_t⟨φ*β⟩ − ⟨φ*B_A⟩";
    Balance => "balance", SolutionOnly, "∂_t(|β|² − |b̂|²) + i(∂₁ − i∂₂)⟨β*b̂⟩ − i(∂₁ + i∂₂)⟨b̂*β⟩ + 4α(|β|² + |b̂|²)";
    BochnerBeta => "bochner.beta", SolutionOnly, "∇_Â²β − (−2⟨σB_Â⟩ − 2∂_tα + 4α²)β + 4i(∂₁ − i∂₂)α b̂";
    BochnerBhat => "bochner.bhat", SolutionOnly, "∇_Â²b̂ − (2⟨σB_Â⟩ + 2∂_tα + 4α²)b̂ − 4i(∂₁ + i∂₂)α β";
    WLaplace => "w.laplace", SolutionOnly, "−Δw + |φ|² − 1/2t² + 4(|β|² + |b̂|²)";
    WAlpha => "w.alpha", SolutionOnly, "α + 1/2t − ∂_t w";
    WCurvature => "w.curvature", SolutionOnly, "⟨σB_Â⟩ + Δ⊥w";
    Divergence => "divergence", SolutionOnly, "divergence identity for 𝔴";
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Equation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Equation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Equation::ALL
            .iter()
            .copied()
            .find(|e| e.id() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown equation {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: Equation,
    pub max_abs: f64,
    pub l2: f64,
    /// Nodes left out: boundary margin plus flagged `φ ≈ 0` nodes.
    pub excluded: usize,
    pub evaluated: usize,
    pub grid: GridSpec,
}

/// Sum in a fixed pairwise order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Residual statistics over the sampled nodes; `skip` removes further nodes.
pub(crate) fn tabulate(
    equation: Equation,
    spec: &GridSpec,
    sampling: Sampling,
    skip: impl Fn(usize) -> bool,
    value: impl Fn(usize) -> f64,
) -> ResidualReport {
    let (nodes, dropped) = sampling.nodes(spec);
    let mut sq = Vec::with_capacity(nodes.len());
    let mut max_abs: f64 = 0.0;
    let mut skipped = 0;
    for idx in nodes {
        if skip(idx) {
            skipped += 1;
            continue;
        }
        let r = value(idx);
        // NaN must not hide behind max()
        max_abs = if r.is_nan() || max_abs.is_nan() { f64::NAN } else { max_abs.max(r) };
        sq.push(r * r);
    }
    let weight = spec.cell_volume() * (sampling.stride as f64).powi(3);
    ResidualReport {
        equation,
        max_abs,
        l2: (pairwise_sum(&sq) * weight).sqrt(),
        excluded: dropped + skipped,
        evaluated: sq.len(),
        grid: *spec,
    }
}

pub(crate) fn cnorm(z: C64) -> f64 {
    z.norm()
}

/// The five bullets of the reduced first-order system.
pub fn kw_residual(cfg: &GaugeConfig) -> Result<Vec<ResidualReport>> {
    kw_residual_with(cfg, Sampling::default())
}

pub fn kw_residual_with(cfg: &GaugeConfig, sampling: Sampling) -> Result<Vec<ResidualReport>> {
    check_axes(&cfg.spec)?;
    let spec = cfg.spec;
    let n = &cfg.nodes;
    let conn = |d: Dir| move |k: usize| n[k].conn[d.index()];
    let higgs = |j: usize| move |k: usize| n[k].higgs[j];
    let phi = |k: usize| n[k].phi();
    let none = |_| false;
    let mut out = Vec::new();
    out.push(tabulate(Equation::KwPhiT, &spec, sampling, none, |idx| {
        let a3 = n[idx].higgs[2].complexify();
        let r = cov(&spec, idx, Dir::T, conn(Dir::T), phi) - a3.bracket(&n[idx].phi()) * C64::i();
        r.norm()
    }));
    out.push(tabulate(Equation::KwPhiPlane, &spec, sampling, none, |idx| {
        let r = cov(&spec, idx, Dir::X1, conn(Dir::X1), phi) + cov(&spec, idx, Dir::X2, conn(Dir::X2), phi) * C64::i();
        r.norm()
    }));
    let curv = |idx: usize| curvature_at(&spec, idx, |k| n[k].conn);
    out.push(tabulate(Equation::KwB3, &spec, sampling, none, |idx| {
        let s = &n[idx];
        let r = cov(&spec, idx, Dir::T, conn(Dir::T), higgs(2)) - curv(idx).b3 + s.higgs[0].bracket(&s.higgs[1]);
        r.norm()
    }));
    out.push(tabulate(Equation::KwE1, &spec, sampling, none, |idx| {
        (curv(idx).e1 - cov(&spec, idx, Dir::X2, conn(Dir::X2), higgs(2))).norm()
    }));
    out.push(tabulate(Equation::KwE2, &spec, sampling, none, |idx| {
        (curv(idx).e2 + cov(&spec, idx, Dir::X1, conn(Dir::X1), higgs(2))).norm()
    }));
    Ok(out)
}

pub(crate) fn check_axes(spec: &GridSpec) -> Result<()> {
    for d in Dir::ALL {
        if spec.count(d) < 3 {
            return Err(crate::error::Error::GridTooSmall { axis: d.name(), n: spec.count(d), min: 3 });
        }
    }
    Ok(())
}

/// The second-order equation for the Higgs components, normed over `k = 1, 2, 3`.
pub fn second_order_residual(cfg: &GaugeConfig) -> Result<ResidualReport> {
    second_order_residual_with(cfg, Sampling::default())
}

pub fn second_order_residual_with(cfg: &GaugeConfig, sampling: Sampling) -> Result<ResidualReport> {
    check_axes(&cfg.spec)?;
    let spec = cfg.spec;
    let n = &cfg.nodes;
    Ok(tabulate(Equation::SecondOrder, &spec, sampling, |_| false, |idx| {
        let a = n[idx].higgs;
        let mut total = 0.0;
        for k in 0..3 {
            let mut r = LieElement::ZERO;
            for d in Dir::ALL {
                let conn = |j: usize| n[j].conn[d.index()];
                let inner = |j: usize| cov(&spec, j, d, conn, |i| n[i].higgs[k]);
                r -= cov(&spec, idx, d, conn, inner);
            }
            for j in 0..3 {
                r += a[j].bracket(&a[k].bracket(&a[j]));
            }
            total += r.norm_sq();
        }
        total.sqrt()
    }))
}

/// Norms of the five first-order residuals at one point of a continuously
/// sampled pair, by fourth-order central differences with step `h`.
pub fn kw_residual_at(f: &dyn Fn(&PointTZ) -> FieldSample, p: &PointTZ, h: f64) -> [f64; 5] {
    let s = f(p);
    let shifted = |d: Dir, k: f64| {
        let mut q = *p;
        match d {
            Dir::T => q.t += k * h,
            Dir::X1 => q.z.re += k * h,
            Dir::X2 => q.z.im += k * h,
        }
        f(&q)
    };
    // ∇_d of the Higgs components
    let nabla = |d: Dir| -> [LieElement; 3] {
        let (m2, m1, p1, p2) = (shifted(d, -2.0), shifted(d, -1.0), shifted(d, 1.0), shifted(d, 2.0));
        [0, 1, 2].map(|j| {
            let dd = (m2.higgs[j] - p2.higgs[j] + (p1.higgs[j] - m1.higgs[j]) * 8.0) * (1.0 / (12.0 * h));
            dd + s.conn[d.index()].bracket(&s.higgs[j])
        })
    };
    let (nt, n1, n2) = (nabla(Dir::T), nabla(Dir::X1), nabla(Dir::X2));
    let phi_of = |a: &[LieElement; 3]| cplx(&a[0], &(-a[1]));
    let c = sampled_curvature(f, p, h);
    let a3 = s.higgs[2].complexify();
    [
        (phi_of(&nt) - a3.bracket(&s.phi()) * C64::i()).norm(),
        (phi_of(&n1) + phi_of(&n2) * C64::i()).norm(),
        (nt[2] - c.b3 + s.higgs[0].bracket(&s.higgs[1])).norm(),
        (c.e1 - n2[2]).norm(),
        (c.e2 + n1[2]).norm(),
    ]
}

/// A family of residual checks evaluated together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Kw,
    SecondOrder,
    Projected,
    CurvatureProjection,
    PairingFlow,
    Balance,
    Bochner,
    WEquation { m: u32 },
    Divergence { m: u32 },
}

impl Check {
    pub fn needs_decomposition(self) -> bool {
        !matches!(self, Check::Kw | Check::SecondOrder)
    }

    pub fn name(self) -> String {
        match self {
            Check::Kw => "kw".into(),
            Check::SecondOrder => "second_order".into(),
            Check::Projected => "projected".into(),
            Check::CurvatureProjection => "curvature_projection".into(),
            Check::PairingFlow => "pairing_flow".into(),
            Check::Balance => "balance".into(),
            Check::Bochner => "bochner".into(),
            Check::WEquation { m } => format!("w_equation(m={m})"),
            Check::Divergence { m } => format!("divergence(m={m})"),
        }
    }
}

/// Run several checks on one configuration, decomposing at most once.
pub fn run_checks(cfg: &GaugeConfig, checks: &[Check], sampling: Sampling) -> Result<Vec<ResidualReport>> {
    let d = if checks.iter().any(|c| c.needs_decomposition()) {
        Some(decompose(cfg)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for &c in checks {
        let d = d.as_ref();
        match c {
            Check::Kw => out.extend(kw_residual_with(cfg, sampling)?),
            Check::SecondOrder => out.push(second_order_residual_with(cfg, sampling)?),
            Check::Projected => out.extend(projected_residuals(d.unwrap(), sampling)),
            Check::CurvatureProjection => out.extend(curvature_projection_residuals(d.unwrap(), sampling)),
            Check::PairingFlow => out.extend(pairing_flow_residuals(d.unwrap(), sampling)),
            Check::Balance => out.push(balance_residual(d.unwrap(), sampling)),
            Check::Bochner => out.extend(bochner_residuals(d.unwrap(), sampling)),
            Check::WEquation { m } => out.extend(w_equation_residuals(d.unwrap(), m, sampling)),
            Check::Divergence { m } => out.push(divergence_identity_residual(d.unwrap(), m, sampling)),
        }
    }
    Ok(out)
}

/// Complex element from two real components `x + i y`.
pub(crate) fn cplx(x: &LieElement, y: &LieElement) -> CLieElement {
    CLieElement::from_parts(x, y)
}
