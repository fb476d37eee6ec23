//! Planar deflection measurement: `H_A = p_x`,
//! `V = σ_z ⊗ g(q_x) p_z` on `C² ⊗ L²(ℝ²)`.
//!
//! The `x` drift carries the packet `ξ(x)η(z)` through the coupling
//! window `(0, δ)`; each σ_z branch is sheared in `z` by
//! `±∫_{x−t}^{x} g`, so after `τ = δ + Δ` the branches sit at
//! `z ≈ ±∫₀^δ g` and the sign of `q_z` reads the spin out. Requires
//! `ε < ∫₀^δ g` so the branch displacement clears the packet's `z`
//! width; the device rescaling `ξ_C(x) = √C·ξ(Cx)` trades measurement
//! time against apparatus energy fluctuation at a fixed product.

use num_complex::Complex64 as C64;

use super::{
    ApparatusFactor, FreeProfile, GridExtras, GridInteraction, GridModel, GridOptions, Meter,
    Model, ModelKind, Pvm,
};
use crate::grids::{Bump, GridHamiltonian, GridSpec, WaveFunction};
use crate::linalg::pauli_z;
use crate::{Error, Result};

/// Device geometry: coupling profile `g` on `(0, δ)`, longitudinal
/// packet `ξ` on `(−Δ, 0)`, transverse packet `η` on `(−ε, ε)` (even).
#[derive(Debug, Clone, Copy)]
pub struct SternGerlachParams {
    pub g: Bump,
    pub xi: Bump,
    pub eta: Bump,
}

impl Default for SternGerlachParams {
    /// Default geometry: `δ = Δ = 1`, coupling amplitude `0.6`, and the
    /// transverse width set to a quarter of the total displacement
    /// (safety factor 4 over the strict inequality).
    fn default() -> Self {
        let g = Bump::new(0.0, 1.0, 0.6).unwrap();
        let eps = g.integral() / 4.0;
        Self {
            g,
            xi: Bump::unit(-1.0, 0.0).unwrap(),
            eta: Bump::unit(-eps, eps).unwrap(),
        }
    }
}

impl SternGerlachParams {
    /// Device rescaling by `C`: `ξ_C(x) = √C·ξ(Cx)`, coupling window
    /// compressed with amplitude compensation (`∫g` preserved), `η`
    /// untouched. Durations scale as `1/C`, the packet's momentum
    /// content as `C`.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::Argument("rescaling factor must be positive".into()));
        }
        Ok(Self {
            g: self.g.rescale(c, c),
            xi: self.xi.rescale(c, c.sqrt()),
            eta: self.eta,
        })
    }

    pub fn tau(&self) -> f64 {
        self.g.hi - self.xi.lo
    }
}

pub fn stern_gerlach_2d(params: &SternGerlachParams, opts: &GridOptions) -> Result<Model> {
    let SternGerlachParams { g, xi, eta } = *params;
    if g.lo < 0.0 {
        return Err(Error::Config("coupling support must start at or after 0".into()));
    }
    if xi.hi > 0.0 {
        return Err(Error::Config("longitudinal packet must end at or before 0".into()));
    }
    if (eta.lo + eta.hi).abs() > 1e-12 * eta.width() {
        return Err(Error::Config("transverse packet must be even about 0".into()));
    }
    let eps = eta.hi;
    let displacement = g.integral();
    if !(eps < displacement) {
        return Err(Error::Config(format!(
            "ε-condition violated: transverse width ε = {eps:.6} must be smaller than the \
             branch displacement ∫g = {displacement:.6}; the device would mismeasure"
        )));
    }

    let delta_small = g.hi; // δ
    let delta_big = -xi.lo; // Δ
    let tau = delta_small + delta_big;
    let horizon = 2.0 * tau;
    let margin = tau / 2.0;

    let n_x = opts.n_x.unwrap_or(2048);
    let x_min = xi.lo - margin;
    let x_max = delta_small.max(xi.hi + horizon) + 3.0 * horizon + margin;
    let gx = GridSpec::new(n_x, x_min, x_max)?;

    let n_z = opts.n_z.unwrap_or(512);
    let z_extent = (eps + 4.0 * displacement) * 1.05;
    let gz = GridSpec::new(n_z, -z_extent, z_extent)?;

    let sigma0 = WaveFunction::scalar_2d(gx, gz, |x, z| C64::new(xi.eval(x) * eta.eval(z), 0.0))?;

    // apparatus energy fluctuation Δp_x of ξ, by momentum-space quadrature
    let xi_wave = WaveFunction::scalar_1d(gx, |x| C64::new(xi.eval(x), 0.0))?;
    let (m1, m2) = xi_wave.momentum_moments(0)?;
    let delta_h_a = (m2 - m1 * m1).max(0.0).sqrt();

    let dt_default = opts.dt.unwrap_or(gx.dx() / (4.0 * g.amp.max(1.0)));
    let grid_model = GridModel {
        ham: Some(GridHamiltonian::ConditionalShear { g }),
        axes: vec![gx, gz],
        sigma0,
        free_profile: FreeProfile::DriftProduct { xi, eta },
        interaction: GridInteraction {
            system_op: pauli_z(),
            apparatus: ApparatusFactor::ShearMomentum(g),
            x_support: Some((g.lo, g.hi)),
        },
        dt_default,
        boundary_margin: (delta_big).min(2.0 * eps),
        extras: GridExtras::SternGerlach {
            params: *params,
            delta_h_a,
        },
    };
    let model = Model {
        name: "stern-gerlach-2d".into(),
        tau,
        t0: 0.0,
        kind: ModelKind::Grid(grid_model),
        pvm: Some(Pvm::computational(2)),
        meter: Some(Meter::half_line(1, 0.0)),
        notes: vec![
            "ΔH_A uses √(∫|ξ′|²): the variance-form expression is read as (ΔH_A)²".into(),
        ],
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::split_step_evolve;

    #[test]
    fn default_geometry_is_valid() {
        let m = stern_gerlach_2d(&SternGerlachParams::default(), &GridOptions::default()).unwrap();
        assert!((m.tau - 2.0).abs() < 1e-15);
        let g = m.as_grid().unwrap();
        match &g.extras {
            GridExtras::SternGerlach { delta_h_a, .. } => {
                assert!(*delta_h_a > 0.0);
            }
            _ => panic!("wrong extras"),
        }
    }

    #[test]
    fn spin_up_lands_on_positive_z() {
        let m = stern_gerlach_2d(&SternGerlachParams::default(), &GridOptions::default()).unwrap();
        let g = m.as_grid().unwrap();
        let up = g.branch_wave(1, m.tau).unwrap();
        let p_pos = up.region_probability(|c| c[1] >= 0.0);
        assert!(p_pos >= 1.0 - 1e-6, "P(q_z>0 | spin up) = {p_pos}");
        let dn = g.branch_wave(0, m.tau).unwrap();
        let p_neg = dn.region_probability(|c| c[1] < 0.0);
        assert!(p_neg >= 1.0 - 1e-6, "P(q_z<0 | spin down) = {p_neg}");
    }

    #[test]
    fn rescaling_trades_time_for_energy_fluctuation() {
        let base = SternGerlachParams::default();
        let m1 = stern_gerlach_2d(&base, &GridOptions::default()).unwrap();
        let d1 = match &m1.as_grid().unwrap().extras {
            GridExtras::SternGerlach { delta_h_a, .. } => *delta_h_a,
            _ => unreachable!(),
        };
        let m2 = stern_gerlach_2d(&base.rescaled(2.0).unwrap(), &GridOptions::default()).unwrap();
        let d2 = match &m2.as_grid().unwrap().extras {
            GridExtras::SternGerlach { delta_h_a, .. } => *delta_h_a,
            _ => unreachable!(),
        };
        assert!((m2.tau - m1.tau / 2.0).abs() < 1e-12);
        assert!((d2 - 2.0 * d1).abs() < 1e-6 * d1.abs());
        let p1 = m1.tau * d1;
        let p2 = m2.tau * d2;
        assert!((p2 - p1).abs() < 1e-6 * p1, "products {p1} vs {p2}");
    }

    #[test]
    fn rejects_epsilon_condition_violation() {
        let g = Bump::new(0.0, 1.0, 0.1).unwrap(); // ∫g too small
        let params = SternGerlachParams {
            g,
            xi: Bump::unit(-1.0, 0.0).unwrap(),
            eta: Bump::unit(-0.2, 0.2).unwrap(),
        };
        let err = stern_gerlach_2d(&params, &GridOptions::default()).unwrap_err();
        match err {
            Error::Config(msg) => assert!(msg.contains("ε-condition")),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn split_step_agrees_with_exact_rule() {
        // gentler transverse packet (ε = 0.8·∫g) keeps the momentum
        // content low; the comparison is still against the full device
        let g = Bump::new(0.0, 1.0, 0.6).unwrap();
        let eps = 0.8 * g.integral();
        let params = SternGerlachParams {
            g,
            xi: Bump::unit(-1.0, 0.0).unwrap(),
            eta: Bump::unit(-eps, eps).unwrap(),
        };
        let opts = GridOptions {
            n_z: Some(64),
            ..Default::default()
        };
        let m = stern_gerlach_2d(&params, &opts).unwrap();
        let gm = m.as_grid().unwrap();
        let joint = WaveFunction::with_qubit(&gm.sigma0, C64::ONE, C64::new(0.6, 0.8)).unwrap();
        let ham = gm.ham.as_ref().unwrap();
        for &t in &[m.tau / 2.0, m.tau, 2.0 * m.tau] {
            let exact = ham.exact_evolve(&joint, t).unwrap();
            let split = split_step_evolve(ham, &joint, t, 8e-4).unwrap();
            let mut acc = 0.0;
            for (a, b) in exact.comps.iter().zip(split.comps.iter()) {
                acc += a
                    .iter()
                    .zip(b.iter())
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum::<f64>();
            }
            let d = (acc * exact.dv()).sqrt();
            assert!(d < 1e-6, "t={t}: split vs exact {d:.3e}");
        }
    }
}
