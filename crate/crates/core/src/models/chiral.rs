//! Chiral timing device: `H_S = 0`, `H_A = p`, `V = σ_z ⊗ g(q)` with
//! `supp g ⊂ (0, Δ)` and the packet strictly left of the origin.
//!
//! The drift carries the packet into the interaction region, switching
//! the coupling on autonomously at `t₀ = 0` and off again after
//! `τ = Δ + δ`. The branches pick up only opposite phases
//! `e^{∓i∫₀^Δ g}`, so the device times a perturbation but measures
//! nothing: its pointer distributions are identical.

use num_complex::Complex64 as C64;

use super::{
    ApparatusFactor, FreeProfile, GridExtras, GridInteraction, GridModel, GridOptions, Meter,
    Model, ModelKind, Pvm,
};
use crate::grids::{Bump, GridHamiltonian, GridSpec, WaveFunction};
use crate::linalg::pauli_z;
use crate::{Error, Result};

/// `g`: interaction profile on `(0, Δ)`; `packet`: initial apparatus
/// packet supported in `(−δ, 0)`.
pub fn chiral_model(g: Bump, packet: Bump, opts: &GridOptions) -> Result<Model> {
    if g.lo < 0.0 {
        return Err(Error::Config(format!(
            "interaction support must start at or after 0, got {}",
            g.lo
        )));
    }
    if packet.hi > 0.0 {
        return Err(Error::Config(format!(
            "packet support must end at or before 0, got {}",
            packet.hi
        )));
    }
    if g.amp <= 0.0 {
        return Err(Error::Config("interaction profile must be nonvanishing".into()));
    }
    let delta_small = -packet.lo; // δ
    let delta_big = g.hi; // Δ
    let tau = delta_big + delta_small;

    let n = opts.n_x.unwrap_or(2048);
    let horizon = 2.0 * tau;
    let margin = (delta_small + delta_big) / 2.0;
    let x_min = packet.lo - margin;
    let x_max = delta_big.max(packet.hi + horizon) + 3.0 * horizon + margin;
    let grid = GridSpec::new(n, x_min, x_max)?;

    let sigma0 = WaveFunction::scalar_1d(grid, |x| C64::new(packet.eval(x), 0.0))?;
    // support declaration check: mass outside (−δ, 0) must vanish
    let outside = sigma0.region_probability(|c| c[0] < packet.lo || c[0] > packet.hi);
    if outside > 1e-12 {
        return Err(Error::Config(format!(
            "packet mass {outside:.3e} outside the declared support"
        )));
    }

    let dt_default = opts.dt.unwrap_or(grid.dx() / 4.0);
    let grid_model = GridModel {
        ham: Some(GridHamiltonian::ConditionalPhase { g }),
        axes: vec![grid],
        sigma0,
        free_profile: FreeProfile::DriftBump { packet },
        interaction: GridInteraction {
            system_op: pauli_z(),
            apparatus: ApparatusFactor::Multiply(g),
            x_support: Some((g.lo, g.hi)),
        },
        dt_default,
        boundary_margin: delta_small,
        extras: GridExtras::Chiral { g, packet },
    };
    let model = Model {
        name: "chiral-timer".into(),
        tau,
        t0: 0.0,
        kind: ModelKind::Grid(grid_model),
        pvm: Some(Pvm::computational(2)),
        // half-line split at the drifted packet center: branch
        // distributions are identical, so any readout is a coin flip
        meter: Some(Meter::half_line(0, packet.center() + tau)),
        notes: vec![
            "timing device: pointer branches differ only by a phase, so the meter carries \
             no outcome information"
                .into(),
        ],
    };
    model.validate()?;
    Ok(model)
}
