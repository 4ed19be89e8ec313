//! Gauge transformations by `g = exp(X)`, acting by push-forward:
//! `a ↦ Ad_g a`, `A ↦ Ad_g A − (dg)g⁻¹`.

use super::calculus::diff;
use super::{Dir, GaugeConfig, Grid};
use crate::error::{Error, Result};
use crate::model::FieldSample;
use crate::su2::{cross, LieElement};

/// `(∂g)g⁻¹` for `g = exp(X)` given `∂X`, i.e. `((e^{ad X} − 1)/ad X) ∂X`.
pub fn right_log_derivative(x: &LieElement, dx: &LieElement) -> LieElement {
    let theta = x.norm();
    // ad_X = φK with K = n̂× and φ = −2|X|
    let phi = -2.0 * theta;
    if phi.abs() < 1e-4 {
        // series through third order in ad_X
        let ad = |v: &LieElement| x.bracket(v);
        let a1 = ad(dx);
        let a2 = ad(&a1);
        let a3 = ad(&a2);
        return *dx + a1 * 0.5 + a2 * (1.0 / 6.0) + a3 * (1.0 / 24.0);
    }
    let n = x.scale(1.0 / theta);
    let k1 = cross(&n, dx);
    let k2 = cross(&n, &k1);
    *dx + k1 * ((1.0 - phi.cos()) / phi) + k2 * ((phi - phi.sin()) / phi)
}

/// Transform one sample given `X` and its derivatives `(∂_t X, ∂_1 X, ∂_2 X)`.
pub fn transform_sample(s: &FieldSample, x: &LieElement, dx: &[LieElement; 3]) -> FieldSample {
    FieldSample {
        conn: [0, 1, 2].map(|j| x.adjoint_exp(&s.conn[j]) - right_log_derivative(x, &dx[j])),
        higgs: s.higgs.map(|a| x.adjoint_exp(&a)),
    }
}

/// Transform a grid configuration; derivatives of the generator are taken by
/// the same finite differences as everything else.
pub fn gauge_transform(cfg: &GaugeConfig, generator: &Grid<LieElement>) -> Result<GaugeConfig> {
    if generator.spec != cfg.spec {
        return Err(Error::ShapeMismatch);
    }
    let spec = cfg.spec;
    let nodes = (0..spec.len())
        .map(|idx| {
            let x = generator.data[idx];
            let dx = Dir::ALL.map(|d| diff(&spec, idx, d, |k| generator.data[k]));
            transform_sample(&cfg.nodes[idx], &x, &dx)
        })
        .collect();
    Ok(GaugeConfig { spec, nodes })
}

/// Transform a configuration with a generator known in closed form:
/// `gen(idx)` returns `X` and its exact derivatives at node `idx`.
pub fn gauge_transform_analytic(
    cfg: &GaugeConfig,
    gen: impl Fn(usize) -> (LieElement, [LieElement; 3]),
) -> GaugeConfig {
    let nodes = cfg
        .nodes
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            let (x, dx) = gen(idx);
            transform_sample(s, &x, &dx)
        })
        .collect();
    GaugeConfig { spec: cfg.spec, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::calculus::sampled_curvature;
    use crate::lattice::{sample_family, GridSpec};
    use crate::model::{Family, PointTZ};

    fn smooth_generator(p: &PointTZ) -> (LieElement, [LieElement; 3]) {
        let (t, x1, x2) = (p.t, p.z.re, p.z.im);
        let x = LieElement::new((0.7 * x1 + 0.3 * t).sin(), 0.5 * (x2 * t).cos(), 0.4 * x1 * x2);
        let dt = LieElement::new(0.3 * (0.7 * x1 + 0.3 * t).cos(), -0.5 * x2 * (x2 * t).sin(), 0.0);
        let d1 = LieElement::new(0.7 * (0.7 * x1 + 0.3 * t).cos(), 0.0, 0.4 * x2);
        let d2 = LieElement::new(0.0, -0.5 * t * (x2 * t).sin(), 0.4 * x1);
        (x, [dt, d1, d2])
    }

    #[test]
    fn zero_generator_is_identity() {
        let spec = GridSpec::default_box(9);
        let cfg = sample_family(&Family::Model { m: 1 }, spec).unwrap();
        let out = gauge_transform(&cfg, &Grid::from_fn(spec, |_| LieElement::ZERO)).unwrap();
        assert_eq!(out, cfg);
    }

    #[test]
    fn constant_sigma3_rotation_of_nahm_pole() {
        let spec = GridSpec::default_box(9);
        let cfg = sample_family(&Family::Model { m: 0 }, spec).unwrap();
        let th = 0.3;
        let out = gauge_transform(&cfg, &Grid::from_fn(spec, |_| LieElement::sigma(3).scale(th))).unwrap();
        for (a, b) in out.nodes.iter().zip(&cfg.nodes) {
            assert!((a.phi().norm() - b.phi().norm()).abs() < 1e-14);
            assert!((a.higgs[2] - b.higgs[2]).norm() < 1e-15);
            assert!(a.conn.iter().all(|c| c.norm() < 1e-15));
            // a₁ ∝ σ₁ rotated by −2θ within the σ₁σ₂ plane
            let ang = a.higgs[0].c[1].atan2(a.higgs[0].c[0]);
            let ang0 = b.higgs[0].c[1].atan2(b.higgs[0].c[0]);
            let turn = (ang - ang0 + 2.0 * th).rem_euclid(std::f64::consts::TAU);
            assert!(turn.min(std::f64::consts::TAU - turn) < 1e-12);
        }
    }

    #[test]
    fn gauge_invariant_scalars() {
        let spec = GridSpec::default_box(9);
        let fam = Family::Model { m: 2 };
        let cfg = sample_family(&fam, spec).unwrap();
        let out = gauge_transform_analytic(&cfg, |i| smooth_generator(&spec.point(i)));
        for (a, b) in out.nodes.iter().zip(&cfg.nodes) {
            assert!((a.phi().norm() - b.phi().norm()).abs() < 1e-10);
            assert!((a.higgs[2].norm() - b.higgs[2].norm()).abs() < 1e-10);
            let tp = |s: &FieldSample| s.higgs[2].inner(&s.higgs[0].bracket(&s.higgs[1]));
            assert!((tp(a) - tp(b)).abs() < 1e-10);
        }
    }

    #[test]
    fn curvature_transforms_covariantly() {
        let fam = Family::Model { m: 1 };
        let g = |p: &PointTZ| transform_sample(&fam.sample(p), &smooth_generator(p).0, &smooth_generator(p).1);
        let f = |p: &PointTZ| fam.sample(p);
        for &(t, x1, x2) in &[(0.8, 0.3, -0.2), (1.4, -1.0, 0.5)] {
            let p = PointTZ::new(t, x1, x2);
            let c0 = sampled_curvature(&f, &p, 1e-3);
            let c1 = sampled_curvature(&g, &p, 1e-3);
            let x = smooth_generator(&p).0;
            for (a, b) in [(c1.b3, c0.b3), (c1.e1, c0.e1), (c1.e2, c0.e2)] {
                assert!((a - x.adjoint_exp(&b)).norm() < 1e-8, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn series_branch_agrees_with_closed_form() {
        let dx = LieElement::new(0.3, -0.7, 1.1);
        let n = LieElement::new(0.6, 0.0, 0.8);
        for s in [0.9e-4 / 2.0, 1.1e-4 / 2.0] {
            let a = right_log_derivative(&n.scale(s), &dx);
            let b = right_log_derivative(&n.scale(s * 1.0000001), &dx);
            assert!((a - b).norm() < 1e-9);
        }
    }
}
