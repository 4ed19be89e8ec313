//! Gauge pairs sampled on truncated `(t, x₁, x₂)` boxes.
//!
//! Node `(it, i1, i2)` is stored at `it·n_x² + i1·n_x + i2`, so each constant-t
//! slice is contiguous. Finite differences are evaluated per node through
//! closures that read neighbouring values, which lets composite quantities be
//! differentiated without materializing intermediate grids.

pub mod calculus;
pub mod decompose;
pub mod dump;
pub mod gauge;
pub mod synthetic;
pub mod winding;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Family, FieldSample, PointTZ};

pub use calculus::{covariant_derivative, curvature, CurvatureGrids};
pub use decompose::{decompose, Decomposition, DecompositionNode};
pub use gauge::{gauge_transform, gauge_transform_analytic};
pub use winding::{vanishing_degree, Winding};

/// Minimum node count per axis.
pub const MIN_NODES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub x_half: f64,
    pub n_t: usize,
    pub n_x: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    T,
    X1,
    X2,
}

impl Dir {
    pub const ALL: [Dir; 3] = [Dir::T, Dir::X1, Dir::X2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::T => "t",
            Dir::X1 => "x1",
            Dir::X2 => "x2",
        }
    }
}

/// Grid node as axis indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub it: usize,
    pub i1: usize,
    pub i2: usize,
}

impl GridSpec {
    /// The default refinement box `t ∈ [0.5, 2]`, `|x| ≤ 2` with `n` nodes per axis.
    pub fn default_box(n: usize) -> Self {
        GridSpec {
            t_min: 0.5,
            t_max: 2.0,
            x_half: 2.0,
            n_t: n,
            n_x: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.x_half > 0.0) {
            return Err(Error::BadParam(format!("invalid grid box {self:?}")));
        }
        if self.n_t < MIN_NODES {
            return Err(Error::GridTooSmall { axis: "t", n: self.n_t, min: MIN_NODES });
        }
        if self.n_x < MIN_NODES {
            return Err(Error::GridTooSmall { axis: "x", n: self.n_x, min: MIN_NODES });
        }
        Ok(())
    }

    /// Same box with spacing halved.
    pub fn refined(&self) -> Self {
        GridSpec {
            n_t: 2 * self.n_t - 1,
            n_x: 2 * self.n_x - 1,
            ..*self
        }
    }

    pub fn h_t(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn h_x(&self) -> f64 {
        2.0 * self.x_half / (self.n_x - 1) as f64
    }

    pub fn h(&self, d: Dir) -> f64 {
        match d {
            Dir::T => self.h_t(),
            _ => self.h_x(),
        }
    }

    pub fn len(&self) -> usize {
        self.n_t * self.n_x * self.n_x
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, d: Dir) -> usize {
        match d {
            Dir::T => self.n_t,
            _ => self.n_x,
        }
    }

    pub fn stride(&self, d: Dir) -> usize {
        match d {
            Dir::T => self.n_x * self.n_x,
            Dir::X1 => self.n_x,
            Dir::X2 => 1,
        }
    }

    pub fn t(&self, it: usize) -> f64 {
        if it + 1 == self.n_t {
            self.t_max
        } else {
            self.t_min + it as f64 * self.h_t()
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        // symmetric about the centre so that z = 0 is hit exactly for odd n
        let c = (self.n_x - 1) as f64 / 2.0;
        (i as f64 - c) * self.h_x()
    }

    pub fn index(&self, n: Node) -> usize {
        (n.it * self.n_x + n.i1) * self.n_x + n.i2
    }

    pub fn node(&self, idx: usize) -> Node {
        let i2 = idx % self.n_x;
        let rest = idx / self.n_x;
        Node {
            it: rest / self.n_x,
            i1: rest % self.n_x,
            i2,
        }
    }

    pub fn axis_index(&self, n: Node, d: Dir) -> usize {
        match d {
            Dir::T => n.it,
            Dir::X1 => n.i1,
            Dir::X2 => n.i2,
        }
    }

    pub fn point(&self, idx: usize) -> PointTZ {
        let n = self.node(idx);
        PointTZ::new(self.t(n.it), self.x(n.i1), self.x(n.i2))
    }

    /// Volume weight of one node for discrete L² norms.
    pub fn cell_volume(&self) -> f64 {
        self.h_t() * self.h_x() * self.h_x()
    }
}

/// Arithmetic needed by difference stencils.
pub trait Vector: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Vector for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Node-valued field on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub spec: GridSpec,
    pub data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn from_fn(spec: GridSpec, f: impl Fn(usize) -> T) -> Self {
        Grid {
            spec,
            data: (0..spec.len()).map(f).collect(),
        }
    }

    pub fn get(&self, idx: usize) -> T {
        self.data[idx]
    }
}

/// A gauge pair sampled node-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeConfig {
    pub spec: GridSpec,
    pub nodes: Vec<FieldSample>,
}

impl GaugeConfig {
    pub fn from_fn(spec: GridSpec, f: impl Fn(&PointTZ) -> FieldSample) -> Result<Self> {
        spec.validate()?;
        Ok(GaugeConfig {
            spec,
            nodes: (0..spec.len()).map(|i| f(&spec.point(i))).collect(),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.nodes
            .iter()
            .all(|s| s.conn.iter().chain(s.higgs.iter()).all(|a| a.is_finite()))
    }
}

/// Exact node-wise sampling of a closed-form family.
pub fn sample_family(family: &Family, spec: GridSpec) -> Result<GaugeConfig> {
    family.validate()?;
    GaugeConfig::from_fn(spec, |p| family.sample(p))
}

/// Which nodes enter residual statistics.
///
/// With `stride = 2^ℓ` on the ℓ-th refinement of a base grid, the selected
/// nodes coincide with base-grid nodes, so errors on nested grids are compared
/// at the same physical points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub margin: usize,
    pub stride: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { margin: 2, stride: 1 }
    }
}

impl Sampling {
    /// Sampling for refinement level `level` of a nested study whose coarse
    /// grid keeps a 2-node margin.
    pub fn nested(level: u32) -> Self {
        let stride = 1usize << level;
        Sampling {
            margin: 2 * stride,
            stride,
        }
    }

    /// Stride-aligned nodes, split into interior nodes and the count of
    /// aligned nodes dropped by the margin.
    pub fn nodes(&self, spec: &GridSpec) -> (Vec<usize>, usize) {
        let axis = |n: usize| -> (Vec<usize>, usize) {
            let all: Vec<usize> = (0..n).step_by(self.stride).collect();
            let keep: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&i| i >= self.margin && i + self.margin < n)
                .collect();
            let dropped = all.len() - keep.len();
            (keep, dropped)
        };
        let (ts, _) = axis(spec.n_t);
        let (xs, _) = axis(spec.n_x);
        let total_aligned =
            spec.n_t.div_ceil(self.stride) * spec.n_x.div_ceil(self.stride).pow(2);
        let mut out = Vec::with_capacity(ts.len() * xs.len() * xs.len());
        for &it in &ts {
            for &i1 in &xs {
                for &i2 in &xs {
                    out.push(spec.index(Node { it, i1, i2 }));
                }
            }
        }
        let dropped = total_aligned - out.len();
        (out, dropped)
    }
}
