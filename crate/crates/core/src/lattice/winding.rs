//! Winding of `φ` around circles in a constant-t slice.

use std::f64::consts::TAU;

use super::{GaugeConfig, GridSpec, Node};
use crate::error::{Error, Result};
use crate::su2::{CLieElement, LieElement, C64};

/// Samples taken on each circle.
pub const CIRCLE_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub degree: i64,
    pub radius: f64,
    /// Accumulated phase over `2π` before rounding.
    pub turns: f64,
}

/// Coefficient `c` in `φ = c(σ₁ − iσ₂) + …`, i.e. `½⟨σ₁ + iσ₂, φ⟩`.
pub fn lowering_coefficient(phi: &CLieElement) -> C64 {
    let up = CLieElement::from_parts(&LieElement::sigma(1), &LieElement::sigma(2));
    up.inner(phi) * 0.5
}

/// Total phase change over `2π` of a closed sequence of nonzero samples.
pub fn turns(samples: &[C64]) -> f64 {
    let n = samples.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = samples[i];
        let b = samples[(i + 1) % n];
        acc += (b * a.conj()).arg();
    }
    acc / TAU
}

/// Bilinear interpolation of a slice field at `(x₁, x₂)`.
fn interpolate(spec: &GridSpec, it: usize, x1: f64, x2: f64, f: impl Fn(usize) -> C64) -> C64 {
    let h = spec.h_x();
    let c = (spec.n_x - 1) as f64 / 2.0;
    let u = x1 / h + c;
    let v = x2 / h + c;
    let i = (u.floor() as usize).min(spec.n_x - 2);
    let j = (v.floor() as usize).min(spec.n_x - 2);
    let (fu, fv) = (u - i as f64, v - j as f64);
    let at = |a: usize, b: usize| f(spec.index(Node { it, i1: a, i2: b }));
    at(i, j) * ((1.0 - fu) * (1.0 - fv))
        + at(i + 1, j) * (fu * (1.0 - fv))
        + at(i, j + 1) * ((1.0 - fu) * fv)
        + at(i + 1, j + 1) * (fu * fv)
}

/// Degree of `φ` on the slice `it` around the circle `|z| = r`.
pub fn vanishing_degree(cfg: &GaugeConfig, it: usize, r: f64) -> Result<Winding> {
    let spec = cfg.spec;
    if !(r > 0.0 && r < spec.x_half) || it >= spec.n_t {
        return Err(Error::BadParam(format!("circle r = {r} on slice {it} is outside the grid")));
    }
    let tol = 1e-8 / spec.t_min;
    let coeff = |k: usize| lowering_coefficient(&cfg.nodes[k].phi());
    let samples: Vec<C64> = (0..CIRCLE_SAMPLES)
        .map(|s| {
            let th = TAU * s as f64 / CIRCLE_SAMPLES as f64;
            interpolate(&spec, it, r * th.cos(), r * th.sin(), coeff)
        })
        .collect();
    let min = samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if !(min >= tol) {
        return Err(Error::ZeroOnCircle { min });
    }
    let w = turns(&samples);
    let degree = w.round();
    if (w - degree).abs() > 0.25 {
        return Err(Error::BadParam(format!("winding {w} is not resolved on r = {r}")));
    }
    Ok(Winding { degree: degree as i64, radius: r, turns: w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::sample_family;
    use crate::model::{Family, FieldSample};

    #[test]
    fn explicit_power_of_z() {
        let spec = GridSpec::default_box(33);
        for m in 0..4 {
            let cfg = GaugeConfig::from_fn(spec, |p| {
                let g = p.z.powu(m);
                FieldSample {
                    higgs: [LieElement::new(g.re, g.im, 0.0), LieElement::new(-g.im, g.re, 0.0), LieElement::ZERO],
                    ..Default::default()
                }
            })
            .unwrap();
            assert_eq!(vanishing_degree(&cfg, 3, 1.0).unwrap().degree, m as i64);
        }
    }

    #[test]
    fn model_and_nahm_pole_degrees() {
        let spec = GridSpec::default_box(33);
        let cfg = sample_family(&Family::Model { m: 2 }, spec).unwrap();
        let it = 16;
        assert_eq!(vanishing_degree(&cfg, it, spec.t(it)).unwrap().degree, 2);
        let cfg = sample_family(&Family::Model { m: 0 }, spec).unwrap();
        assert_eq!(vanishing_degree(&cfg, 0, 1.0).unwrap().degree, 0);
    }

    #[test]
    fn zero_on_circle_is_an_error() {
        let spec = GridSpec::default_box(9);
        let cfg = sample_family(&Family::Abelian { r: 1.0 }, spec).unwrap();
        assert!(matches!(vanishing_degree(&cfg, 0, 1.0), Err(Error::ZeroOnCircle { .. })));
    }
}
