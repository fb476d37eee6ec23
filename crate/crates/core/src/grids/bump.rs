//! Smooth compactly supported bump functions and their quadrature.

use crate::{Error, Result};

/// `amp · exp(1 − 1/(1−u²))` on `(lo, hi)` with `u` the affinely rescaled
/// coordinate; identically zero outside. All derivatives vanish at the
/// endpoints, so sampled copies are spectrally smooth on periodic grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
    pub amp: f64,
}

impl Bump {
    pub fn new(lo: f64, hi: f64, amp: f64) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() || !amp.is_finite() {
            return Err(Error::Argument(format!(
                "invalid bump support ({lo}, {hi})"
            )));
        }
        Ok(Self { lo, hi, amp })
    }

    /// Unit-amplitude bump on `(lo, hi)`.
    pub fn unit(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, 1.0)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        if u.abs() >= 1.0 {
            0.0
        } else {
            self.amp * (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }

    /// Rescale the support about the origin by `1/c` and the amplitude by
    /// `amp_scale`: `x ↦ c·x` composed with the amplitude factor.
    pub fn rescale(&self, c: f64, amp_scale: f64) -> Self {
        Self {
            lo: self.lo / c,
            hi: self.hi / c,
            amp: self.amp * amp_scale,
        }
    }

    /// `∫ f(x) dx` over the full support.
    pub fn integral(&self) -> f64 {
        self.integral_between(self.lo, self.hi)
    }

    /// `∫_a^b f(x) dx` with the integrand zero outside the support.
    pub fn integral_between(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if b < a {
            return -self.integral_between(b, a);
        }
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if hi <= lo {
            return 0.0;
        }
        composite_gl8(lo, hi, 96, |x| self.eval(x))
    }

    /// Cumulative integral from 0: `∫_0^x f`.
    pub fn cumulative_from_zero(&self, x: f64) -> f64 {
        self.integral_between(0.0, x)
    }

    /// `(∫ f², ∫ f′²)` over the support; the derivative is evaluated
    /// analytically.
    pub fn l2_norms(&self) -> (f64, f64) {
        let f2 = composite_gl8(self.lo, self.hi, 96, |x| self.eval(x).powi(2));
        let d2 = composite_gl8(self.lo, self.hi, 192, |x| self.deriv(x).powi(2));
        (f2, d2)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let w = self.hi - self.lo;
        let u = (2.0 * x - self.lo - self.hi) / w;
        if u.abs() >= 1.0 {
            0.0
        } else {
            let s = 1.0 - u * u;
            // d/du exp(1 − 1/s) = exp(1 − 1/s) · (−2u/s²)
            self.amp * (1.0 - 1.0 / s).exp() * (-2.0 * u / (s * s)) * (2.0 / w)
        }
    }
}

/// 8-point Gauss-Legendre nodes/weights on [−1, 1].
const GL8_X: [f64; 8] = [
    -0.9602898564975363,
    -0.7966664774136267,
    -0.525532409916329,
    -0.1834346424956498,
    0.1834346424956498,
    0.525532409916329,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 8] = [
    0.10122853629037626,
    0.22238103445337448,
    0.31370664587788727,
    0.362683783378362,
    0.362683783378362,
    0.31370664587788727,
    0.22238103445337448,
    0.10122853629037626,
];

/// Composite 8-point Gauss-Legendre quadrature with `panels` subintervals.
pub fn composite_gl8(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for i in 0..8 {
            acc += GL8_W[i] * f(mid + half * GL8_X[i]);
        }
    }
    acc * 0.5 * h
}
