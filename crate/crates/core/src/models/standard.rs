//! Conditional-translation pointer model: `H_S = 0`, `H_A = 0`,
//! `V = σ_z ⊗ p`, meter = sign of the pointer position.
//!
//! The pointer translates by `∓τ` on the σ_z branches, so arbitrarily
//! high readout accuracy is available for any `τ` exceeding the pointer
//! width — the device carries no autonomous switch and serves as the
//! baseline that motivates the switching-device conditions.

use num_complex::Complex64 as C64;

use super::{
    ApparatusFactor, GridExtras, GridInteraction, GridModel, GridOptions, Meter, Model,
    ModelKind, Pvm,
};
use crate::grids::{Bump, GridHamiltonian, GridSpec, WaveFunction};
use crate::linalg::pauli_z;
use crate::{Error, Result};

pub fn standard_model(pointer_width: f64, tau: f64, opts: &GridOptions) -> Result<Model> {
    if !(pointer_width > 0.0) || !(tau > 0.0) {
        return Err(Error::Argument(
            "pointer width and τ must be positive".into(),
        ));
    }
    if tau < pointer_width {
        return Err(Error::Config(format!(
            "pointer too wide for the grid run: width {pointer_width} exceeds the branch \
             separation τ = {tau}"
        )));
    }
    let n = opts.n_x.unwrap_or(1024);
    let half = pointer_width / 2.0;
    // branches travel ±τ; padding of 3× the traversal on each side
    let extent = half + 4.0 * tau + pointer_width;
    let grid = GridSpec::new(n, -extent, extent)?;
    let points_across = pointer_width / grid.dx();
    if points_across < 16.0 {
        return Err(Error::Config(format!(
            "pointer too narrow for the grid: {points_across:.1} points across the packet"
        )));
    }

    let packet = Bump::unit(-half, half)?;
    let sigma0 = WaveFunction::scalar_1d(grid, |x| C64::new(packet.eval(x), 0.0))?;
    let dt_default = opts.dt.unwrap_or(grid.dx() / 4.0);

    let grid_model = GridModel {
        ham: Some(GridHamiltonian::ConditionalDrift),
        axes: vec![grid],
        sigma0,
        free_profile: super::FreeProfile::StaticBump { packet },
        interaction: GridInteraction {
            system_op: pauli_z(),
            apparatus: ApparatusFactor::Momentum,
            x_support: None,
        },
        dt_default,
        boundary_margin: pointer_width,
        extras: GridExtras::Standard { pointer_width },
    };
    let model = Model {
        name: "standard-pointer".into(),
        tau,
        t0: 0.0,
        kind: ModelKind::Grid(grid_model),
        pvm: Some(Pvm::computational(2)),
        meter: Some(Meter::half_line(0, 0.0)),
        notes: vec![],
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_separate_cleanly() {
        let m = standard_model(0.5, 2.0, &GridOptions::default()).unwrap();
        let g = m.as_grid().unwrap();
        // |0⟩ branch ends fully on x<0, |1⟩ branch on x>0
        let w0 = g.branch_wave(0, m.tau).unwrap();
        let w1 = g.branch_wave(1, m.tau).unwrap();
        assert!(w0.region_probability(|c| c[0] < 0.0) > 1.0 - 1e-9);
        assert!(w1.region_probability(|c| c[0] >= 0.0) > 1.0 - 1e-9);
    }

    #[test]
    fn rejects_pointer_wider_than_shift() {
        assert!(matches!(
            standard_model(2.0, 1.0, &GridOptions::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn free_apparatus_is_static() {
        let m = standard_model(0.5, 2.0, &GridOptions::default()).unwrap();
        let g = m.as_grid().unwrap();
        let s0 = g.sigma_free(0.0).unwrap();
        let s1 = g.sigma_free(5.0).unwrap();
        let overlap = s0.inner(&s1).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }
}
