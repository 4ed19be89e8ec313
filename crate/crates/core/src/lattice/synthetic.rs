//! Seeded random smooth configurations for identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gauge::transform_sample;
use super::{GaugeConfig, GridSpec};
use crate::model::{FieldSample, PointTZ};
use crate::su2::{LieElement, C64};

/// A short sum of plane sinusoids in `(t, x₁, x₂)` with its exact gradient.
#[derive(Clone, Debug)]
pub struct SmoothField {
    terms: Vec<(f64, [f64; 3], f64)>,
    offset: f64,
}

impl SmoothField {
    pub fn random(rng: &mut impl Rng, amplitude: f64, offset: f64) -> Self {
        let terms = (0..3)
            .map(|_| {
                let k = [0, 1, 2].map(|_| rng.gen_range(-1.5..1.5));
                (amplitude * rng.gen_range(0.3..1.0), k, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        SmoothField { terms, offset }
    }

    fn phase(k: &[f64; 3], p: &PointTZ) -> f64 {
        k[0] * p.t + k[1] * p.z.re + k[2] * p.z.im
    }

    pub fn value(&self, p: &PointTZ) -> f64 {
        self.offset
            + self
                .terms
                .iter()
                .map(|(a, k, ph)| a * (Self::phase(k, p) + ph).sin())
                .sum::<f64>()
    }

    /// `(∂_t, ∂_1, ∂_2)`.
    pub fn grad(&self, p: &PointTZ) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (a, k, ph) in &self.terms {
            let c = a * (Self::phase(k, p) + ph).cos();
            for j in 0..3 {
                g[j] += c * k[j];
            }
        }
        g
    }
}

fn lie_field(rng: &mut impl Rng, amplitude: f64, offset: [f64; 3]) -> [SmoothField; 3] {
    offset.map(|o| SmoothField::random(rng, amplitude, o))
}

fn eval3(f: &[SmoothField; 3], p: &PointTZ) -> LieElement {
    LieElement { c: [0, 1, 2].map(|k| f[k].value(p)) }
}

fn grad3(f: &[SmoothField; 3], p: &PointTZ) -> [LieElement; 3] {
    let g = [0, 1, 2].map(|k| f[k].grad(p));
    [0, 1, 2].map(|d| LieElement::new(g[0][d], g[1][d], g[2][d]))
}

/// Generic smooth pair with every component random; `φ` stays close to the
/// Nahm-pole direction so that `σ` is well defined.
pub fn random_config(spec: GridSpec, seed: u64) -> GaugeConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conn: Vec<[SmoothField; 3]> = (0..3).map(|_| lie_field(&mut rng, 0.5, [0.0; 3])).collect();
    let a1 = lie_field(&mut rng, 0.25, [1.0, 0.0, 0.0]);
    let a2 = lie_field(&mut rng, 0.25, [0.0, 1.0, 0.0]);
    let a3 = lie_field(&mut rng, 0.5, [0.0, 0.0, -1.0]);
    GaugeConfig {
        spec,
        nodes: (0..spec.len())
            .map(|i| {
                let p = spec.point(i);
                FieldSample {
                    conn: [0, 1, 2].map(|j| eval3(&conn[j], &p)),
                    higgs: [eval3(&a1, &p), eval3(&a2, &p), eval3(&a3, &p)],
                }
            })
            .collect(),
    }
}

/// Random smooth gauge generator `X` with its derivatives `(∂_t X, ∂_1 X, ∂_2 X)`.
pub fn random_generator(seed: u64) -> impl Fn(&PointTZ) -> (LieElement, [LieElement; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let gen = lie_field(&mut rng, 0.6, [0.0; 3]);
    move |p: &PointTZ| (eval3(&gen, p), grad3(&gen, p))
}

/// Random decomposable pair as a continuous function of the point.
///
/// Built in the gauge `σ = σ₃` with `φ`, `β`, `b̂` in `L⁺`, `b_t = −i(β − β*)`
/// and `Â` along `σ₃`, then moved by a random smooth gauge transformation.
pub fn decomposable_sampler(seed: u64) -> impl Fn(&PointTZ) -> FieldSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_dec0);
    let alpha = SmoothField::random(&mut rng, 0.6, -0.8);
    let beta = [SmoothField::random(&mut rng, 0.3, 0.0), SmoothField::random(&mut rng, 0.3, 0.0)];
    let bhat = [SmoothField::random(&mut rng, 0.3, 0.0), SmoothField::random(&mut rng, 0.3, 0.0)];
    let log_mod = SmoothField::random(&mut rng, 0.3, -0.5);
    let arg = SmoothField::random(&mut rng, 1.0, 0.0);
    let ahat: Vec<SmoothField> = (0..3).map(|_| SmoothField::random(&mut rng, 0.5, 0.0)).collect();
    let gen = random_generator(seed);
    move |p: &PointTZ| {
        let s3 = LieElement::sigma(3);
        let (br, bi) = (beta[0].value(p), beta[1].value(p));
        let (kr, ki) = (bhat[0].value(p), bhat[1].value(p));
        let ph = C64::from_polar(log_mod.value(p).exp(), arg.value(p));
        let a3 = s3.scale(alpha.value(p)) + LieElement::new(2.0 * br, 2.0 * bi, 0.0);
        let bt = LieElement::new(2.0 * bi, -2.0 * br, 0.0);
        let b1 = LieElement::new(2.0 * kr, 2.0 * ki, 0.0);
        let b2 = LieElement::new(2.0 * ki, -2.0 * kr, 0.0);
        let s = FieldSample {
            conn: [
                s3.scale(ahat[0].value(p)) + bt,
                s3.scale(ahat[1].value(p)) + b1,
                s3.scale(ahat[2].value(p)) + b2,
            ],
            // φ = ph (σ₁ − iσ₂)
            higgs: [LieElement::new(ph.re, ph.im, 0.0), LieElement::new(-ph.im, ph.re, 0.0), a3],
        };
        let (x, dx) = gen(p);
        transform_sample(&s, &x, &dx)
    }
}

pub fn decomposable_config(spec: GridSpec, seed: u64) -> GaugeConfig {
    let f = decomposable_sampler(seed);
    GaugeConfig {
        spec,
        nodes: (0..spec.len()).map(|i| f(&spec.point(i))).collect(),
    }
}
