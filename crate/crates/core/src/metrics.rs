//! Distances, fluctuations, and speed-limit quantities.
//!
//! Conventions that differ from common textbook choices:
//!
//! * [`trace_distance_sup`] is the sup over unit-operator-norm
//!   observables of the expectation gap, i.e. the full trace norm
//!   `‖ρ0 − ρ1‖₁` with **no** factor ½.
//! * [`mt_overlap_bound`] returns 0 outside its validity window
//!   `ΔH·t ≤ π/2` instead of raising; callers treat that as "vacuous".

use num_complex::Complex64 as C64;

use crate::linalg::{self, CMat};
use crate::states::{QuantumState, StateKind};
use crate::{Error, Result};

/// Uhlmann fidelity `F(ρ0,ρ1) = tr√(ρ0^{1/2} ρ1 ρ0^{1/2})`, in `[0,1]`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::Argument(
            "fidelity requires states on the same space".into(),
        ));
    }
    let f = match (&a.kind, &b.kind) {
        (StateKind::Pure(u), StateKind::Pure(v)) => u
            .iter()
            .zip(v.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            .norm(),
        (StateKind::Pure(u), StateKind::Mixed(rho))
        | (StateKind::Mixed(rho), StateKind::Pure(u)) => {
            // F(ρ, |ψ⟩⟨ψ|) = √⟨ψ|ρ|ψ⟩
            let rv = rho.dot(u);
            u.iter()
                .zip(rv.iter())
                .map(|(x, y)| x.conj() * y)
                .sum::<C64>()
                .re
                .max(0.0)
                .sqrt()
        }
        (StateKind::Mixed(r0), StateKind::Mixed(r1)) => {
            let s = linalg::sqrt_psd(r0)?;
            let m = s.dot(r1).dot(&s);
            let m = (&m + &linalg::dagger(&m)) * C64::new(0.5, 0.0);
            linalg::eigh(&m)?
                .eigenvalues
                .iter()
                .map(|&lam| lam.max(0.0).sqrt())
                .sum()
        }
    };
    Ok(f.min(1.0))
}

/// Trace distance in the sup-over-observables convention:
/// `D(ρ0,ρ1) = sup_{‖A‖=1} |tr[(ρ0−ρ1)A]| = Σ |λ_i(ρ0−ρ1)|`.
pub fn trace_distance_sup(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::Argument(
            "trace distance requires states on the same space".into(),
        ));
    }
    let diff = a.density() - b.density();
    Ok(linalg::eigh(&diff)?
        .eigenvalues
        .iter()
        .map(|lam| lam.abs())
        .sum())
}

/// Bures angle `arccos F(ρ0,ρ1)` in `[0, π/2]`.
pub fn bures_angle(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    Ok(fidelity(a, b)?.clamp(0.0, 1.0).acos())
}

/// Standard deviation `√(⟨H²⟩ − ⟨H⟩²)` of a Hermitian observable,
/// clamped at 0 against rounding.
pub fn energy_fluctuation(h: &CMat, s: &QuantumState) -> Result<f64> {
    if h.nrows() != s.total_dim() || h.ncols() != s.total_dim() {
        return Err(Error::Argument("dimension mismatch".into()));
    }
    if linalg::hermiticity_residual(h) > 1e-9 {
        return Err(Error::Validation(
            "energy fluctuation requires a Hermitian operator".into(),
        ));
    }
    let mean = s.expectation(h).re;
    let second = match &s.kind {
        StateKind::Pure(v) => {
            let hv = h.dot(v);
            hv.iter().map(|z| z.norm_sqr()).sum::<f64>()
        }
        StateKind::Mixed(rho) => linalg::trace(&h.dot(h).dot(rho)).re,
    };
    Ok((second - mean * mean).max(0.0).sqrt())
}

/// Mandelstam-Tamm overlap lower bound `cos(ΔH·t)`, valid for
/// `ΔH·t ≤ π/2`; 0 (vacuous) outside the window.
pub fn mt_overlap_bound(delta_h: f64, t: f64) -> f64 {
    let x = delta_h * t;
    if x.abs() <= std::f64::consts::FRAC_PI_2 {
        x.cos()
    } else {
        0.0
    }
}

/// A normalized discrete energy distribution: `(energy, weight)` pairs.
#[derive(Debug, Clone)]
pub struct SpectralDistribution {
    points: Vec<(f64, f64)>,
}

impl SpectralDistribution {
    /// Weights must be nonnegative and sum to 1 within `1e−10`.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("empty spectral distribution".into()));
        }
        if points.iter().any(|&(e, w)| !e.is_finite() || w < 0.0) {
            return Err(Error::Validation(
                "spectral points must be finite with nonnegative weights".into(),
            ));
        }
        let total: f64 = points.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "spectral weights sum to {total}, expected 1"
            )));
        }
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // merge exactly coincident energies
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for (e, w) in points {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += w,
                _ => merged.push((e, w)),
            }
        }
        Ok(Self { points: merged })
    }

    /// Energy distribution of a Hamiltonian in a state.
    pub fn from_hamiltonian_state(h: &CMat, s: &QuantumState) -> Result<Self> {
        let dec = linalg::eigh(h)?;
        let rho = s.density();
        let mut points = Vec::with_capacity(dec.eigenvalues.len());
        for (k, &e) in dec.eigenvalues.iter().enumerate() {
            let u = dec.eigenvectors.column(k);
            let mut w = C64::ZERO;
            for i in 0..rho.nrows() {
                for j in 0..rho.ncols() {
                    w += u[i].conj() * rho[[i, j]] * u[j];
                }
            }
            points.push((e, w.re.max(0.0)));
        }
        // renormalize rounding noise
        let total: f64 = points.iter().map(|&(_, w)| w).sum();
        for p in &mut points {
            p.1 /= total;
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Overall width `Δ_α`: length of the smallest closed interval carrying
/// weight `≥ α`, minimized over intervals with spectral-point endpoints.
pub fn overall_width(d: &SpectralDistribution, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Argument(format!("α = {alpha} outside (0, 1]")));
    }
    let pts = &d.points;
    let n = pts.len();
    let target = alpha - 1e-12;
    let mut best = f64::INFINITY;
    let mut j = 0usize;
    let mut window = pts[0].1;
    for i in 0..n {
        while window < target && j + 1 < n {
            j += 1;
            window += pts[j].1;
        }
        if window >= target {
            best = best.min(pts[j].0 - pts[i].0);
        } else {
            break; // even the full tail is short of α
        }
        window -= pts[i].1;
    }
    if best.is_infinite() {
        // distribution is normalized, so α ≤ 1 is always attainable
        best = pts[n - 1].0 - pts[0].0;
    }
    Ok(best.max(0.0))
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn overall_width_monotone(
            raw in proptest::collection::vec((-10.0f64..10.0, 0.01f64..1.0), 1..12),
            a1 in 0.01f64..1.0,
            a2 in 0.01f64..1.0,
        ) {
            let total: f64 = raw.iter().map(|p| p.1).sum();
            let pts: Vec<(f64, f64)> = raw.iter().map(|&(e, w)| (e, w / total)).collect();
            let dist = SpectralDistribution::new(pts).unwrap();
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            let w_lo = overall_width(&dist, lo).unwrap();
            let w_hi = overall_width(&dist, hi).unwrap();
            prop_assert!(w_lo <= w_hi + 1e-12);
        }

        #[test]
        fn mt_bound_in_unit_interval(dh in 0.0f64..20.0, t in 0.0f64..20.0) {
            let b = mt_overlap_bound(dh, t);
            prop_assert!((0.0..=1.0).contains(&b));
        }
    }
}
