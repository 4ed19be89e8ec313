//! Real and complexified su(2) in the fixed basis (σ₁, σ₂, σ₃).
//!
//! Elements are stored as coefficient triples. The bracket obeys
//! `[σ₁, σ₂] = −2σ₃` cyclically, so `[a, b] = −2 a × b` on coefficients, and
//! the inner product `⟨a b⟩ = −½ tr(ab)` is the Euclidean dot product of the
//! coefficients, extended bilinearly to complex elements.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `| |σ| − 1 |` accepted by [`eigen_split`].
pub const UNIT_TOL: f64 = 1e-9;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LieElement {
    pub c: [f64; 3],
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CLieElement {
    pub c: [C64; 3],
}

impl LieElement {
    pub const ZERO: LieElement = LieElement { c: [0.0; 3] };

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        LieElement { c: [c1, c2, c3] }
    }

    /// Basis element σ_k for k ∈ {1, 2, 3}.
    pub fn sigma(k: usize) -> Self {
        let mut c = [0.0; 3];
        c[k - 1] = 1.0;
        LieElement { c }
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        let [a1, a2, a3] = self.c;
        let [b1, b2, b3] = other.c;
        LieElement::new(
            -2.0 * (a2 * b3 - a3 * b2),
            -2.0 * (a3 * b1 - a1 * b3),
            -2.0 * (a1 * b2 - a2 * b1),
        )
    }

    pub fn inner(&self, other: &LieElement) -> f64 {
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> LieElement {
        LieElement::new(s * self.c[0], s * self.c[1], s * self.c[2])
    }

    pub fn complexify(&self) -> CLieElement {
        CLieElement {
            c: self.c.map(|x| C64::new(x, 0.0)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// `Ad_{exp(self)} v`: conjugation of `v` by the group element `exp(self)`.
    ///
    /// With `self = θ n̂` this is the rotation of the coefficient vector by the
    /// angle `−2θ` about `n̂`.
    pub fn adjoint_exp(&self, v: &LieElement) -> LieElement {
        let theta = self.norm();
        if theta == 0.0 {
            return *v;
        }
        let n = self.scale(1.0 / theta);
        let angle = -2.0 * theta;
        let (s, c) = angle.sin_cos();
        let cross = cross(&n, v);
        let dot = n.inner(v);
        *v * c + cross * s + n * (dot * (1.0 - c))
    }
}

pub(crate) fn cross(a: &LieElement, b: &LieElement) -> LieElement {
    let [a1, a2, a3] = a.c;
    let [b1, b2, b3] = b.c;
    LieElement::new(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
}

impl CLieElement {
    pub const ZERO: CLieElement = CLieElement {
        c: [C64 { re: 0.0, im: 0.0 }; 3],
    };

    pub const fn new(c1: C64, c2: C64, c3: C64) -> Self {
        CLieElement { c: [c1, c2, c3] }
    }

    /// Combine real and imaginary parts `re + i·im`.
    pub fn from_parts(re: &LieElement, im: &LieElement) -> Self {
        CLieElement {
            c: [0, 1, 2].map(|k| C64::new(re.c[k], im.c[k])),
        }
    }

    pub fn re(&self) -> LieElement {
        LieElement {
            c: self.c.map(|z| z.re),
        }
    }

    pub fn im(&self) -> LieElement {
        LieElement {
            c: self.c.map(|z| z.im),
        }
    }

    pub fn bracket(&self, other: &CLieElement) -> CLieElement {
        let [a1, a2, a3] = self.c;
        let [b1, b2, b3] = other.c;
        CLieElement::new(
            -2.0 * (a2 * b3 - a3 * b2),
            -2.0 * (a3 * b1 - a1 * b3),
            -2.0 * (a1 * b2 - a2 * b1),
        )
    }

    /// Bilinear pairing (no conjugation).
    pub fn inner(&self, other: &CLieElement) -> C64 {
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    /// Minus the Hermitian conjugate, which is coefficient-wise conjugation.
    pub fn star(&self) -> CLieElement {
        CLieElement {
            c: self.c.map(|z| z.conj()),
        }
    }

    /// `|η|² = ⟨η* η⟩`.
    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: C64) -> CLieElement {
        CLieElement {
            c: self.c.map(|z| s * z),
        }
    }

    pub fn scale_re(&self, s: f64) -> CLieElement {
        CLieElement {
            c: self.c.map(|z| s * z),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Apply `Ad_{exp(x)}` separately to the real and imaginary parts.
    pub fn adjoint_exp(&self, x: &LieElement) -> CLieElement {
        CLieElement::from_parts(&x.adjoint_exp(&self.re()), &x.adjoint_exp(&self.im()))
    }
}

pub fn bracket(a: &CLieElement, b: &CLieElement) -> CLieElement {
    a.bracket(b)
}

pub fn inner(a: &CLieElement, b: &CLieElement) -> C64 {
    a.inner(b)
}

pub fn star(eta: &CLieElement) -> CLieElement {
    eta.star()
}

/// The ad(iσ/2) action `η ↦ [iσ/2, η] = −i σ × η`.
pub fn half_i_ad(sigma: &LieElement, eta: &CLieElement) -> CLieElement {
    let s = sigma.complexify();
    let [s1, s2, s3] = s.c;
    let [e1, e2, e3] = eta.c;
    CLieElement::new(
        -I * (s2 * e3 - s3 * e2),
        -I * (s3 * e1 - s1 * e3),
        -I * (s1 * e2 - s2 * e1),
    )
}

/// Parts of an element in the 0, +1 and −1 eigenspaces of `[iσ/2, ·]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenParts {
    pub p0: CLieElement,
    pub p_plus: CLieElement,
    pub p_minus: CLieElement,
}

pub fn eigen_split(sigma: &LieElement, eta: &CLieElement) -> Result<EigenParts> {
    let n = sigma.norm();
    if (n - 1.0).abs() > UNIT_TOL || !n.is_finite() {
        return Err(Error::NonUnitSigma(n));
    }
    Ok(eigen_split_unchecked(sigma, eta))
}

/// [`eigen_split`] without the unit-norm check, for inner loops over
/// fields whose σ is normalized by construction.
pub fn eigen_split_unchecked(sigma: &LieElement, eta: &CLieElement) -> EigenParts {
    let s = sigma.complexify();
    let p0 = s.scale(s.inner(eta));
    let perp = *eta - p0;
    let l = half_i_ad(sigma, &perp);
    EigenParts {
        p0,
        p_plus: (perp + l).scale_re(0.5),
        p_minus: (perp - l).scale_re(0.5),
    }
}

/// The +1 eigenspace part only.
pub fn plus_part(sigma: &LieElement, eta: &CLieElement) -> CLieElement {
    eigen_split_unchecked(sigma, eta).p_plus
}

macro_rules! linear_ops {
    ($t:ty, $s:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                let mut r = self;
                r += o;
                r
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                let mut r = self;
                r -= o;
                r
            }
        }
        impl AddAssign for $t {
            fn add_assign(&mut self, o: $t) {
                for k in 0..3 {
                    self.c[k] += o.c[k];
                }
            }
        }
        impl SubAssign for $t {
            fn sub_assign(&mut self, o: $t) {
                for k in 0..3 {
                    self.c[k] -= o.c[k];
                }
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                let mut r = self;
                for k in 0..3 {
                    r.c[k] = -r.c[k];
                }
                r
            }
        }
        impl Mul<$s> for $t {
            type Output = $t;
            fn mul(self, s: $s) -> $t {
                let mut r = self;
                for k in 0..3 {
                    r.c[k] = r.c[k] * s;
                }
                r
            }
        }
    };
}

linear_ops!(LieElement, f64);
linear_ops!(CLieElement, C64);

impl Mul<f64> for CLieElement {
    type Output = CLieElement;
    fn mul(self, s: f64) -> CLieElement {
        self.scale_re(s)
    }
}

impl From<LieElement> for CLieElement {
    fn from(a: LieElement) -> Self {
        a.complexify()
    }
}
