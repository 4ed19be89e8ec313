use thiserror::Error;

use crate::relax::ScalarGrid2D;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sigma has norm {0}, expected 1")]
    NonUnitSigma(f64),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("grid has {n} nodes along {axis}, need at least {min}")]
    GridTooSmall { axis: &'static str, n: usize, min: usize },
    #[error("|phi| is below tolerance on every node")]
    PhiZeroEverywhere,
    #[error("|phi| = {min:e} on the sampling circle")]
    ZeroOnCircle { min: f64 },
    #[error("grid shapes do not match")]
    ShapeMismatch,
    #[error("no convergence after {sweeps} sweeps (last update {update:e})")]
    NoConvergence {
        sweeps: usize,
        update: f64,
        last: Box<ScalarGrid2D>,
    },
    #[error("k - m = {0} must be a positive even integer")]
    BadParity(i64),
    #[error("{0} sign changes found, expected at most one")]
    MultipleZeros(usize),
    #[error("parse error on line {line}: {text}")]
    ParseError { line: usize, text: String },
    #[error("unknown key {0}")]
    UnknownKey(String),
    #[error("bad value for {0}")]
    BadValue(String),
    #[error("a convergence study needs three nested grids, got {0}")]
    DegenerateStudy(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
