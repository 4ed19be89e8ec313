//! Second-order finite differences, covariant derivatives and curvature.

use super::{Dir, GaugeConfig, Grid, GridSpec, Vector};
use crate::error::{Error, Result};
use crate::model::{Curvature, FieldSample, PointTZ};
use crate::su2::{CLieElement, LieElement};

/// Values that the connection acts on by the adjoint action.
pub trait Adjoint: Vector {
    fn ad(a: &LieElement, x: &Self) -> Self;
}

impl Adjoint for LieElement {
    fn ad(a: &LieElement, x: &Self) -> Self {
        a.bracket(x)
    }
}

impl Adjoint for CLieElement {
    fn ad(a: &LieElement, x: &Self) -> Self {
        a.complexify().bracket(x)
    }
}

/// `∂_d f` at node `idx`: central in the interior, one-sided second order on
/// the faces.
#[inline]
pub fn diff<T: Vector>(spec: &GridSpec, idx: usize, d: Dir, f: impl Fn(usize) -> T) -> T {
    let i = spec.axis_index(spec.node(idx), d);
    let n = spec.count(d);
    let s = spec.stride(d);
    let inv = 0.5 / spec.h(d);
    if i == 0 {
        (f(idx + s) * 4.0 - f(idx) * 3.0 - f(idx + 2 * s)) * inv
    } else if i + 1 == n {
        (f(idx) * 3.0 - f(idx - s) * 4.0 + f(idx - 2 * s)) * inv
    } else {
        (f(idx + s) - f(idx - s)) * inv
    }
}

/// `∂_d ∂_d f` by composing [`diff`] with itself.
pub fn diff2<T: Vector>(spec: &GridSpec, idx: usize, d: Dir, f: impl Fn(usize) -> T + Copy) -> T {
    diff(spec, idx, d, |j| diff(spec, j, d, f))
}

/// `∇_d f = ∂_d f + [A_d, f]` with the connection read from `conn`.
#[inline]
pub fn cov<T: Adjoint>(
    spec: &GridSpec,
    idx: usize,
    d: Dir,
    conn: impl Fn(usize) -> LieElement,
    f: impl Fn(usize) -> T,
) -> T {
    let v = f(idx);
    diff(spec, idx, d, f) + T::ad(&conn(idx), &v)
}

/// Curvature of the connection `conn(idx)[dir]` at one node.
pub fn curvature_at(spec: &GridSpec, idx: usize, conn: impl Fn(usize) -> [LieElement; 3]) -> Curvature {
    let c = conn(idx);
    let d = |j: usize, dir: Dir| diff(spec, idx, dir, |k| conn(k)[j]);
    let e1 = d(1, Dir::T) - d(0, Dir::X1) + c[0].bracket(&c[1]);
    let e2 = d(2, Dir::T) - d(0, Dir::X2) + c[0].bracket(&c[2]);
    let b3 = d(2, Dir::X1) - d(1, Dir::X2) + c[1].bracket(&c[2]);
    Curvature { b3, e1, e2 }
}

fn check_axes(spec: &GridSpec) -> Result<()> {
    for d in Dir::ALL {
        if spec.count(d) < 3 {
            return Err(Error::GridTooSmall { axis: d.name(), n: spec.count(d), min: 3 });
        }
    }
    Ok(())
}

/// `∇_{A,dir}` of a Lie-valued grid.
pub fn covariant_derivative(
    cfg: &GaugeConfig,
    field: &Grid<LieElement>,
    dir: Dir,
) -> Result<Grid<LieElement>> {
    check_axes(&cfg.spec)?;
    if field.spec != cfg.spec {
        return Err(Error::ShapeMismatch);
    }
    let spec = cfg.spec;
    let di = dir.index();
    Ok(Grid::from_fn(spec, |idx| {
        cov(&spec, idx, dir, |k| cfg.nodes[k].conn[di], |k| field.data[k])
    }))
}

#[derive(Clone, Debug)]
pub struct CurvatureGrids {
    pub e1: Grid<LieElement>,
    pub e2: Grid<LieElement>,
    pub b3: Grid<LieElement>,
}

pub fn curvature(cfg: &GaugeConfig) -> Result<CurvatureGrids> {
    check_axes(&cfg.spec)?;
    let spec = cfg.spec;
    let all: Vec<Curvature> = (0..spec.len())
        .map(|idx| curvature_at(&spec, idx, |k| cfg.nodes[k].conn))
        .collect();
    Ok(CurvatureGrids {
        e1: Grid { spec, data: all.iter().map(|c| c.e1).collect() },
        e2: Grid { spec, data: all.iter().map(|c| c.e2).collect() },
        b3: Grid { spec, data: all.iter().map(|c| c.b3).collect() },
    })
}

/// Curvature of a continuously sampled connection by fourth-order central
/// differences with step `h`.
pub fn sampled_curvature(f: &dyn Fn(&PointTZ) -> FieldSample, p: &PointTZ, h: f64) -> Curvature {
    let shift = |d: Dir, k: f64| {
        let mut q = *p;
        match d {
            Dir::T => q.t += k * h,
            Dir::X1 => q.z.re += k * h,
            Dir::X2 => q.z.im += k * h,
        }
        f(&q).conn
    };
    let deriv = |d: Dir| -> [LieElement; 3] {
        let (m2, m1, p1, p2) = (shift(d, -2.0), shift(d, -1.0), shift(d, 1.0), shift(d, 2.0));
        [0, 1, 2].map(|j| (m2[j] - p2[j] + (p1[j] - m1[j]) * 8.0) * (1.0 / (12.0 * h)))
    };
    let c = f(p).conn;
    let (dt, d1, d2) = (deriv(Dir::T), deriv(Dir::X1), deriv(Dir::X2));
    Curvature {
        e1: dt[1] - d1[0] + c[0].bracket(&c[1]),
        e2: dt[2] - d2[0] + c[0].bracket(&c[2]),
        b3: d1[2] - d2[1] + c[1].bracket(&c[2]),
    }
}
