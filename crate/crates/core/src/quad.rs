//! Adaptive Gauss–Legendre integration on intervals.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

const ORDER: usize = 16;
const MAX_DEPTH: usize = 40;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(ORDER).unwrap()))
}

/// Fixed 16-point rule on `[a, b]`.
pub fn gl16<F: FnMut(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    rule().integrate(a, b, f)
}

/// Bisects until the halves agree with the parent to `abs_tol + rel_tol·|I|`.
pub fn adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    mut f: F,
) -> Result<f64> {
    let whole = gl16(a, b, &mut f);
    recurse(a, b, whole, abs_tol, rel_tol, 0, &mut f)
}

fn recurse<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    whole: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: usize,
    f: &mut F,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gl16(a, mid, &mut *f);
    let right = gl16(mid, b, &mut *f);
    let sum = left + right;
    if !sum.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (sum - whole).abs() <= abs_tol.max(rel_tol * sum.abs()) {
        return Ok(sum);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure(format!(
            "bisection depth exceeded on [{a}, {b}]"
        )));
    }
    let l = recurse(a, mid, left, 0.5 * abs_tol, rel_tol, depth + 1, f)?;
    let r = recurse(mid, b, right, 0.5 * abs_tol, rel_tol, depth + 1, f)?;
    Ok(l + r)
}

/// Panel edges `a·rⁱ` covering `[a, b]` geometrically with ratio at most `r`.
pub fn log_panels(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let n = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| if i == n { b } else { a * (b / a).powf(i as f64 / n as f64) })
        .collect()
}
