//! Splitting of a gauge pair along the unit section `σ` built from `φ`.

use super::calculus::{cov, diff};
use super::{Dir, GaugeConfig, GridSpec, Node};
use crate::error::{Error, Result};
use crate::model::FieldSample;
use crate::su2::{plus_part, CLieElement, LieElement, C64};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecompositionNode {
    pub sigma: LieElement,
    pub alpha: f64,
    pub beta: CLieElement,
    pub bhat: CLieElement,
    pub phi: CLieElement,
    /// `Â = A − b` by direction `(t, x₁, x₂)`.
    pub ahat: [LieElement; 3],
    /// `b = ¼[σ, ∇_A σ]` by direction.
    pub b: [LieElement; 3],
    /// `|φ|` below tolerance; `σ` was filled from neighbours.
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub spec: GridSpec,
    pub nodes: Vec<DecompositionNode>,
    pub phi_tol: f64,
}

impl Decomposition {
    pub fn flagged_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.flagged).count()
    }

    /// Rebuild `(A, a)` from `A = Â + b`, `a_3 = ασ + β + β*`, `a_1 − i a_2 = φ`.
    pub fn recompose(&self) -> GaugeConfig {
        let nodes = self
            .nodes
            .iter()
            .map(|d| {
                let a3 = d.sigma.scale(d.alpha) + (d.beta + d.beta.star()).re();
                FieldSample {
                    conn: [0, 1, 2].map(|j| d.ahat[j] + d.b[j]),
                    higgs: [d.phi.re(), -d.phi.im(), a3],
                }
            })
            .collect();
        GaugeConfig { spec: self.spec, nodes }
    }
}

/// `σ = (i/2|φ|²)[φ, φ*] = −[a_1, a_2]/|φ|²`, normalized.
fn sigma_from(s: &FieldSample) -> LieElement {
    let v = -s.higgs[0].bracket(&s.higgs[1]);
    v.scale(1.0 / v.norm())
}

pub fn decompose(cfg: &GaugeConfig) -> Result<Decomposition> {
    let spec = cfg.spec;
    spec.validate()?;
    let phi_tol = 1e-8 / spec.t_min;
    let phis: Vec<CLieElement> = cfg.nodes.iter().map(|s| s.phi()).collect();
    let flagged: Vec<bool> = phis.iter().map(|p| !(p.norm() >= phi_tol)).collect();
    if flagged.iter().all(|&f| f) {
        return Err(Error::PhiZeroEverywhere);
    }
    let mut sigma: Vec<LieElement> = cfg
        .nodes
        .iter()
        .zip(&flagged)
        .map(|(s, &f)| if f { LieElement::ZERO } else { sigma_from(s) })
        .collect();
    for idx in 0..spec.len() {
        if flagged[idx] {
            sigma[idx] = fill_sigma(&spec, idx, &flagged, &sigma);
        }
    }

    let nodes = (0..spec.len())
        .map(|idx| {
            let s = &cfg.nodes[idx];
            let sg = sigma[idx];
            let a3 = s.higgs[2];
            let alpha = sg.inner(&a3);
            let beta = plus_part(&sg, &a3.complexify());
            let b = Dir::ALL.map(|d| {
                let nabla = cov(&spec, idx, d, |k| cfg.nodes[k].conn[d.index()], |k| sigma[k]);
                sg.bracket(&nabla).scale(0.25)
            });
            let bhat = CLieElement::from_parts(&b[1], &b[2]).scale_re(0.5);
            DecompositionNode {
                sigma: sg,
                alpha,
                beta,
                bhat,
                phi: phis[idx],
                ahat: [0, 1, 2].map(|j| s.conn[j] - b[j]),
                b,
                flagged: flagged[idx],
            }
        })
        .collect();
    Ok(Decomposition { spec, nodes, phi_tol })
}

/// Average of `σ` at the nearest unflagged node in each of the four in-plane
/// directions, renormalized.
fn fill_sigma(spec: &GridSpec, idx: usize, flagged: &[bool], sigma: &[LieElement]) -> LieElement {
    let n = spec.node(idx);
    let mut acc = LieElement::ZERO;
    let steps: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    for (d1, d2) in steps {
        let (mut i1, mut i2) = (n.i1 as isize, n.i2 as isize);
        loop {
            i1 += d1;
            i2 += d2;
            if i1 < 0 || i2 < 0 || i1 >= spec.n_x as isize || i2 >= spec.n_x as isize {
                break;
            }
            let k = spec.index(Node { it: n.it, i1: i1 as usize, i2: i2 as usize });
            if !flagged[k] {
                acc += sigma[k];
                break;
            }
        }
    }
    let norm = acc.norm();
    if norm > 0.0 {
        acc.scale(1.0 / norm)
    } else {
        LieElement::sigma(3)
    }
}

/// `⟨σ X⟩` for a complex element.
pub fn along_sigma(sigma: &LieElement, x: &CLieElement) -> C64 {
    sigma.complexify().inner(x)
}

/// Node-local derivative helpers for decomposition fields.
impl Decomposition {
    pub fn node(&self, idx: usize) -> &DecompositionNode {
        &self.nodes[idx]
    }

    /// `∇_Â,d` of a complex field given by index.
    pub fn cov_hat(&self, idx: usize, d: Dir, f: impl Fn(usize) -> CLieElement) -> CLieElement {
        cov(&self.spec, idx, d, |k| self.nodes[k].ahat[d.index()], f)
    }

    pub fn d_scalar(&self, idx: usize, d: Dir, f: impl Fn(usize) -> f64) -> f64 {
        diff(&self.spec, idx, d, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_family, synthetic};
    use crate::model::Family;
    use crate::su2::eigen_split;

    #[test]
    fn nahm_pole_decomposition() {
        let spec = GridSpec::default_box(9);
        let d = decompose(&sample_family(&Family::Model { m: 0 }, spec).unwrap()).unwrap();
        for (i, n) in d.nodes.iter().enumerate() {
            let t = spec.point(i).t;
            assert!((n.sigma - LieElement::sigma(3)).norm() < 1e-15);
            assert!((n.alpha + 0.5 / t).abs() < 1e-14);
            assert!(n.beta.norm() < 1e-15);
            assert!(n.bhat.norm() < 1e-15);
        }
    }

    #[test]
    fn imposter_bhat_scales_as_one_over_t() {
        let spec = GridSpec::default_box(9);
        let w = C64::new(0.5, 0.0);
        let d = decompose(&sample_family(&Family::Imposter { w }, spec).unwrap()).unwrap();
        let want = w.norm() * 2f64.sqrt() / 4.0;
        for (i, n) in d.nodes.iter().enumerate() {
            let t = spec.point(i).t;
            assert!(n.beta.norm() < 1e-15);
            assert!((t * n.bhat.norm() - want).abs() < 1e-14);
            assert!(n.ahat.iter().all(|a| a.norm() < 1e-15));
        }
    }

    #[test]
    fn zero_of_phi_is_flagged_and_filled() {
        let spec = GridSpec::default_box(9);
        let d = decompose(&sample_family(&Family::Model { m: 2 }, spec).unwrap()).unwrap();
        assert_eq!(d.flagged_count(), spec.n_t);
        assert!(d.nodes.iter().all(|n| (n.sigma - LieElement::sigma(3)).norm() < 1e-15));
    }

    #[test]
    fn phi_zero_everywhere_is_an_error() {
        let spec = GridSpec::default_box(9);
        let cfg = sample_family(&Family::Abelian { r: 1.0 }, spec).unwrap();
        assert!(matches!(decompose(&cfg), Err(Error::PhiZeroEverywhere)));
    }

    #[test]
    fn invariants_and_roundtrip_on_synthetic_configs() {
        let spec = GridSpec::default_box(9);
        for seed in 0..5 {
            let cfg = synthetic::random_config(spec, seed);
            let d = decompose(&cfg).unwrap();
            for n in &d.nodes {
                assert!((n.sigma.norm() - 1.0).abs() < 1e-12);
                let parts = eigen_split(&n.sigma, &n.beta).unwrap();
                assert!((parts.p_plus - n.beta).norm() < 1e-12);
                assert!(along_sigma(&n.sigma, &n.bhat).norm() < 1e-12);
            }
            let back = d.recompose();
            for (a, b) in back.nodes.iter().zip(&cfg.nodes) {
                for k in 0..3 {
                    assert!((a.conn[k] - b.conn[k]).norm() < 1e-10);
                }
                assert!((a.higgs[2] - b.higgs[2]).norm() < 1e-10);
            }
            let dd = decompose(&synthetic::decomposable_config(spec, seed)).unwrap();
            for n in &dd.nodes {
                assert!(along_sigma(&n.sigma, &n.phi).norm() < 1e-12);
                let parts = eigen_split(&n.sigma, &n.phi).unwrap();
                assert!((parts.p_plus - n.phi).norm() < 1e-12);
            }
        }
    }
}
