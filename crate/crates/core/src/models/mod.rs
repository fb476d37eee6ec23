//! Measurement and timing-device models.
//!
//! A [`Model`] bundles dynamics (dense finite-dimensional or qubit⊗grid),
//! an apparatus initial state at the switch-on time `t₀`, the measured
//! sharp observable, the meter POVM read out on the apparatus, and the
//! declared measurement duration `τ`.
//!
//! Concrete constructors:
//! * [`standard_model`] — conditional-translation pointer (`V = σ_z⊗p`),
//!   the textbook device that needs an external switch;
//! * [`chiral_model`] — drift apparatus that switches a phase kick on
//!   autonomously (a timing device, not a measurement);
//! * [`gaussian_model`] — massive Gaussian particle with a lower-bounded
//!   apparatus Hamiltonian and approximate switching;
//! * [`stern_gerlach_2d`] — planar deflection model, the canonical
//!   autonomous measurement specimen;
//! * [`random_finite_model`], [`conditional_rotation_model`],
//!   [`conditional_shift_model`] — dense finite-dimensional specimens.

mod chiral;
mod gaussian;
mod special;
mod standard;
mod stern_gerlach;

pub use chiral::chiral_model;
pub use gaussian::{gaussian_model, GaussianPacketParams};
pub use special::{conditional_rotation_model, conditional_shift_model, random_finite_model};
pub use standard::standard_model;
pub use stern_gerlach::{stern_gerlach_2d, SternGerlachParams};

use std::sync::OnceLock;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::grids::{Bump, FftEngine, GridHamiltonian, GridSpec, WaveFunction};
use crate::linalg::{self, CMat, CVec};
use crate::states::{CompositeSpace, QuantumState};
use crate::{Error, Result};

/// Grid sizing knobs threaded through the model constructors.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridOptions {
    pub n_x: Option<usize>,
    pub n_z: Option<usize>,
    pub dt: Option<f64>,
}

/// A sharp observable: complete family of orthogonal projectors.
#[derive(Debug, Clone)]
pub struct Pvm {
    pub projectors: Vec<CMat>,
}

impl Pvm {
    pub fn computational(d: usize) -> Self {
        let projectors = (0..d)
            .map(|n| {
                let mut p = linalg::zeros(d, d);
                p[[n, n]] = C64::ONE;
                p
            })
            .collect();
        Self { projectors }
    }

    pub fn n_outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.nrows())
    }

    pub fn validate(&self) -> Result<()> {
        if self.projectors.is_empty() {
            return Err(Error::Validation("empty PVM".into()));
        }
        let d = self.dim();
        let mut sum = linalg::zeros(d, d);
        for p in &self.projectors {
            if linalg::hermiticity_residual(p) > 1e-9 {
                return Err(Error::Validation("PVM element not Hermitian".into()));
            }
            let idem = p.dot(p) - p;
            if linalg::frobenius_norm(&idem) > 1e-9 * (d as f64).sqrt() {
                return Err(Error::Validation("PVM element not idempotent".into()));
            }
            sum += p;
        }
        if linalg::max_abs_diff(&sum, &linalg::identity(d)) > 1e-9 {
            return Err(Error::Validation("PVM does not resolve the identity".into()));
        }
        Ok(())
    }

    /// Orthonormal basis of the range of projector `n`.
    pub fn range_basis(&self, n: usize) -> Result<Vec<CVec>> {
        let p = self
            .projectors
            .get(n)
            .ok_or_else(|| Error::Argument(format!("outcome {n} out of range")))?;
        let dec = linalg::eigh(p)?;
        let mut basis = Vec::new();
        for (k, &lam) in dec.eigenvalues.iter().enumerate() {
            if lam > 0.5 {
                basis.push(dec.eigenvectors.column(k).to_owned());
            }
        }
        Ok(basis)
    }
}

/// Half-space region on a grid axis.
#[derive(Debug, Clone, Copy)]
pub struct RegionSpec {
    pub axis: usize,
    pub threshold: f64,
    pub above: bool,
}

impl RegionSpec {
    pub fn contains(&self, coords: &[f64]) -> bool {
        let x = coords[self.axis];
        if self.above {
            x >= self.threshold
        } else {
            x < self.threshold
        }
    }
}

/// Meter observable read out on the apparatus.
#[derive(Debug, Clone)]
pub enum Meter {
    /// Dense POVM elements on the apparatus factor.
    Povm(Vec<CMat>),
    /// One half-space region per outcome.
    Region(Vec<RegionSpec>),
    /// Uniform n-outcome coin `{I/n, ...}`: carries no information.
    Coin(usize),
}

impl Meter {
    /// Two-outcome half-line meter: outcome 0 below the threshold,
    /// outcome 1 at or above it.
    pub fn half_line(axis: usize, threshold: f64) -> Self {
        Meter::Region(vec![
            RegionSpec {
                axis,
                threshold,
                above: false,
            },
            RegionSpec {
                axis,
                threshold,
                above: true,
            },
        ])
    }

    pub fn n_outcomes(&self) -> usize {
        match self {
            Meter::Povm(es) => es.len(),
            Meter::Region(rs) => rs.len(),
            Meter::Coin(n) => *n,
        }
    }

    pub fn validate(&self, apparatus_dim: Option<usize>) -> Result<()> {
        match self {
            Meter::Povm(es) => {
                if es.is_empty() {
                    return Err(Error::Validation("empty meter".into()));
                }
                let d = es[0].nrows();
                if let Some(da) = apparatus_dim {
                    if d != da {
                        return Err(Error::Validation(format!(
                            "meter dimension {d} does not match apparatus {da}"
                        )));
                    }
                }
                let mut sum = linalg::zeros(d, d);
                for e in es {
                    if linalg::hermiticity_residual(e) > 1e-9 {
                        return Err(Error::Validation("meter element not Hermitian".into()));
                    }
                    let min_eig = linalg::eigh(e)?.eigenvalues[0];
                    if min_eig < -1e-9 {
                        return Err(Error::Validation(format!(
                            "meter element not positive: eigenvalue {min_eig:.3e}"
                        )));
                    }
                    sum += e;
                }
                if linalg::max_abs_diff(&sum, &linalg::identity(d)) > 1e-9 {
                    return Err(Error::Validation("meter does not sum to identity".into()));
                }
                Ok(())
            }
            Meter::Region(rs) => {
                if rs.is_empty() {
                    return Err(Error::Validation("empty meter".into()));
                }
                Ok(())
            }
            Meter::Coin(n) => {
                if *n < 2 {
                    return Err(Error::Validation("coin meter needs ≥ 2 outcomes".into()));
                }
                Ok(())
            }
        }
    }
}

/// Dense finite-dimensional dynamics on `system ⊗ apparatus`.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    pub space: CompositeSpace,
    pub h_system: CMat,
    pub h_apparatus: CMat,
    /// Interaction on the joint space.
    pub v: CMat,
    /// Apparatus state at `t₀`, on the apparatus factor alone.
    pub sigma0: QuantumState,
    total_dec: OnceLock<linalg::SpectralDecomposition>,
    free_dec: OnceLock<linalg::SpectralDecomposition>,
}

impl FiniteModel {
    pub fn new(
        h_system: CMat,
        h_apparatus: CMat,
        v: CMat,
        sigma0: QuantumState,
    ) -> Result<Self> {
        let d_s = h_system.nrows();
        let d_a = h_apparatus.nrows();
        let space = CompositeSpace::new(vec![d_s, d_a])?;
        if v.nrows() != d_s * d_a {
            return Err(Error::Argument(format!(
                "interaction dimension {} does not match joint space {}",
                v.nrows(),
                d_s * d_a
            )));
        }
        if sigma0.total_dim() != d_a {
            return Err(Error::Argument(
                "apparatus state dimension mismatch".into(),
            ));
        }
        Ok(Self {
            space,
            h_system,
            h_apparatus,
            v,
            sigma0,
            total_dec: OnceLock::new(),
            free_dec: OnceLock::new(),
        })
    }

    pub fn d_system(&self) -> usize {
        self.h_system.nrows()
    }

    pub fn d_apparatus(&self) -> usize {
        self.h_apparatus.nrows()
    }

    /// `H_S⊗1 + 1⊗H_A` on the joint space.
    pub fn h_free(&self) -> CMat {
        let a = self.space.op_on_leg(&self.h_system, 0).unwrap();
        let b = self.space.op_on_leg(&self.h_apparatus, 1).unwrap();
        a + b
    }

    /// Full Hamiltonian `H_S + H_A + V` on the joint space.
    pub fn h_total(&self) -> CMat {
        self.h_free() + self.v.clone()
    }

    pub fn total_decomposition(&self) -> &linalg::SpectralDecomposition {
        self.total_dec
            .get_or_init(|| linalg::eigh_unchecked(&self.h_total()))
    }

    pub fn free_decomposition(&self) -> &linalg::SpectralDecomposition {
        self.free_dec
            .get_or_init(|| linalg::eigh_unchecked(&self.h_free()))
    }

    /// Joint initial state `ρ ⊗ σ₀` for a system input.
    pub fn joint_state(&self, system_in: &QuantumState) -> Result<QuantumState> {
        if system_in.total_dim() != self.d_system() {
            return Err(Error::Argument("system input dimension mismatch".into()));
        }
        let rho = linalg::tensor(&system_in.density(), &self.sigma0.density())?;
        QuantumState::mixed(self.space.clone(), rho)
    }

    /// Apparatus state under free evolution, `σ(t)`.
    pub fn sigma_free(&self, t: f64) -> Result<QuantumState> {
        self.sigma0.evolve_exact(&self.h_apparatus, t)
    }

    /// Full-dynamics propagation of a joint state by `t − t₀`.
    pub fn propagate(&self, joint: &QuantumState, t: f64) -> Result<QuantumState> {
        let u = self.total_decomposition().propagator(t);
        joint.apply_unitary(&u)
    }

    /// Free-dynamics propagation (interaction dropped).
    pub fn propagate_free(&self, joint: &QuantumState, t: f64) -> Result<QuantumState> {
        let u = self.free_decomposition().propagator(t);
        joint.apply_unitary(&u)
    }
}

/// Apparatus factor of a product-form interaction `V = B ⊗ v`.
#[derive(Debug, Clone)]
pub enum ApparatusFactor {
    /// `v = g(q)`.
    Multiply(Bump),
    /// `v = p`.
    Momentum,
    /// `v = g(q_x) p_z` on 2D grids.
    ShearMomentum(Bump),
}

impl ApparatusFactor {
    /// Apply `v` to a sampled (scalar) amplitude array.
    pub fn apply(&self, axes: &[GridSpec], comp: &Array2<C64>) -> Array2<C64> {
        match self {
            ApparatusFactor::Multiply(g) => {
                let gx = axes[0];
                let mut out = comp.clone();
                for i in 0..out.nrows() {
                    let gv = g.eval(gx.point(i));
                    for j in 0..out.ncols() {
                        out[[i, j]] *= gv;
                    }
                }
                out
            }
            ApparatusFactor::Momentum => {
                let gx = axes[0];
                let mut eng = FftEngine::new();
                let mut out = comp.clone();
                eng.fft_axis(&mut out, 0);
                for i in 0..out.nrows() {
                    let k = C64::new(gx.freq(i), 0.0);
                    for j in 0..out.ncols() {
                        out[[i, j]] *= k;
                    }
                }
                eng.ifft_axis(&mut out, 0);
                out
            }
            ApparatusFactor::ShearMomentum(g) => {
                let gx = axes[0];
                let gz = axes[1];
                let mut eng = FftEngine::new();
                let mut out = comp.clone();
                eng.fft_axis(&mut out, 1);
                for i in 0..out.nrows() {
                    let gv = g.eval(gx.point(i));
                    for j in 0..out.ncols() {
                        out[[i, j]] *= gv * gz.freq(j);
                    }
                }
                eng.ifft_axis(&mut out, 1);
                out
            }
        }
    }
}

/// Product-form interaction descriptor `V = B ⊗ v`.
#[derive(Debug, Clone)]
pub struct GridInteraction {
    /// System-side operator `B` (2×2).
    pub system_op: CMat,
    pub apparatus: ApparatusFactor,
    /// Support of the apparatus factor on the propagation axis, when
    /// compactly supported.
    pub x_support: Option<(f64, f64)>,
}

/// Closed-form free apparatus evolution `σ(t)` (interaction dropped).
#[derive(Debug, Clone)]
pub enum FreeProfile {
    /// `H_A = 0`: static packet.
    StaticBump { packet: Bump },
    /// `H_A = p`: rigid drift.
    DriftBump { packet: Bump },
    /// `H_A = p²/2m`: spreading Gaussian prepared `lead` before `t₀`.
    Gaussian {
        wave_number: f64,
        sigma: f64,
        x0: f64,
        mass: f64,
        lead: f64,
    },
    /// `H_A = p_x` on 2D: rigid drift of a product packet.
    DriftProduct { xi: Bump, eta: Bump },
}

impl FreeProfile {
    /// Amplitude at time `t` (relative to `t₀ = 0`) and position.
    pub fn eval(&self, t: f64, x: f64, z: f64) -> C64 {
        match self {
            FreeProfile::StaticBump { packet } => C64::new(packet.eval(x), 0.0),
            FreeProfile::DriftBump { packet } => C64::new(packet.eval(x - t), 0.0),
            FreeProfile::Gaussian {
                wave_number,
                sigma,
                x0,
                mass,
                lead,
            } => {
                // factored form of the free propagator applied to the
                // packet: envelope follows the moving center, plane-wave
                // phase stays outside the 1/β division (numerically
                // stable in the far tail)
                let s = t + lead;
                let beta = C64::new(1.0, s / (mass * sigma * sigma));
                let xi = x - x0;
                let xi_c = xi - wave_number / mass * s;
                let env = C64::new(-xi_c * xi_c / (2.0 * sigma * sigma), 0.0) / beta;
                let phase =
                    C64::i() * (wave_number * xi - wave_number * wave_number * s / (2.0 * mass));
                let pref = C64::new(std::f64::consts::PI.powf(-0.25) / sigma.sqrt(), 0.0)
                    / beta.sqrt();
                pref * (env + phase).exp()
            }
            FreeProfile::DriftProduct { xi, eta } => {
                C64::new(xi.eval(x - t) * eta.eval(z), 0.0)
            }
        }
    }

    /// Declared support on the propagation axis at time `t`, when compact.
    pub fn x_support(&self, t: f64) -> Option<(f64, f64)> {
        match self {
            FreeProfile::StaticBump { packet } => Some((packet.lo, packet.hi)),
            FreeProfile::DriftBump { packet } => Some((packet.lo + t, packet.hi + t)),
            FreeProfile::Gaussian { .. } => None,
            FreeProfile::DriftProduct { xi, .. } => Some((xi.lo + t, xi.hi + t)),
        }
    }

    /// Sample onto the grid as a normalized scalar wavefunction.
    pub fn sample(&self, axes: &[GridSpec], t: f64) -> Result<WaveFunction> {
        match axes.len() {
            1 => WaveFunction::scalar_1d(axes[0], |x| self.eval(t, x, 0.0)),
            2 => WaveFunction::scalar_2d(axes[0], axes[1], |x, z| self.eval(t, x, z)),
            _ => Err(Error::Argument("1 or 2 axes expected".into())),
        }
    }
}

/// Extra per-model analytic observables.
#[derive(Debug, Clone)]
pub enum GridExtras {
    None,
    Standard {
        pointer_width: f64,
    },
    Chiral {
        g: Bump,
        packet: Bump,
    },
    Gaussian {
        params: GaussianPacketParams,
    },
    SternGerlach {
        params: SternGerlachParams,
        /// Spectrally computed `ΔH_A = √⟨p_x²⟩ − ⟨p_x⟩²` of the packet.
        delta_h_a: f64,
    },
}

/// Qubit ⊗ grid dynamics.
#[derive(Debug, Clone)]
pub struct GridModel {
    /// Declared splitting; `None` means the split stepper must refuse.
    pub ham: Option<GridHamiltonian>,
    pub axes: Vec<GridSpec>,
    /// Apparatus state at `t₀`, sampled.
    pub sigma0: WaveFunction,
    pub free_profile: FreeProfile,
    pub interaction: GridInteraction,
    pub dt_default: f64,
    /// Margin used by the boundary-leakage monitor (one packet width).
    pub boundary_margin: f64,
    pub extras: GridExtras,
}

impl GridModel {
    /// Closed-form rule availability for the full dynamics.
    pub fn has_exact_rule(&self) -> bool {
        self.ham.as_ref().is_some_and(|h| h.has_exact_rule())
    }

    /// Evolve a joint qubit⊗grid state under the full dynamics: exact
    /// rule when declared, split stepping otherwise.
    pub fn evolve_joint(&self, w: &WaveFunction, t: f64) -> Result<WaveFunction> {
        let ham = self.ham.as_ref().ok_or_else(|| {
            Error::Unsupported("model declares no splitting for grid propagation".into())
        })?;
        let out = if ham.has_exact_rule() {
            ham.exact_evolve(w, t)?
        } else {
            crate::grids::split_step_evolve(ham, w, t, self.dt_default)?
        };
        out.check_boundary_leakage(self.boundary_margin)?;
        Ok(out)
    }

    /// Branch wave `φ^s(t)`: apparatus state conditioned on the system
    /// basis state `|s⟩`.
    ///
    /// Drift classes evaluate the characteristics closed form directly
    /// (analytic compact supports, no spectral ringing); others fall
    /// back to the grid evolution.
    pub fn branch_wave(&self, s: usize, t: f64) -> Result<WaveFunction> {
        let sign = if s == 0 { -1.0 } else { 1.0 };
        match (&self.ham, &self.free_profile) {
            (Some(GridHamiltonian::ConditionalDrift), FreeProfile::StaticBump { packet }) => {
                let packet = *packet;
                WaveFunction::scalar_1d(self.axes[0], move |x| {
                    C64::new(packet.eval(x - sign * t), 0.0)
                })
            }
            (Some(GridHamiltonian::ConditionalPhase { g }), FreeProfile::DriftBump { packet }) => {
                let (g, packet) = (*g, *packet);
                WaveFunction::scalar_1d(self.axes[0], move |x| {
                    let amp = packet.eval(x - t);
                    if amp == 0.0 {
                        C64::ZERO
                    } else {
                        C64::from_polar(amp, -sign * g.integral_between(x - t, x))
                    }
                })
            }
            (
                Some(GridHamiltonian::ConditionalShear { g }),
                FreeProfile::DriftProduct { xi, eta },
            ) => {
                let (g, xi, eta) = (*g, *xi, *eta);
                let gx = self.axes[0];
                // z displacement per x column: ∫_{x−t}^{x} g
                let shift: Vec<f64> = (0..gx.n)
                    .map(|i| {
                        let x = gx.point(i);
                        if xi.eval(x - t) == 0.0 {
                            0.0
                        } else {
                            g.integral_between(x - t, x)
                        }
                    })
                    .collect();
                let x_min = gx.x_min;
                let dx = gx.dx();
                WaveFunction::scalar_2d(gx, self.axes[1], move |x, z| {
                    let amp_x = xi.eval(x - t);
                    if amp_x == 0.0 {
                        return C64::ZERO;
                    }
                    let i = ((x - x_min) / dx - 0.5).round() as usize;
                    C64::new(amp_x * eta.eval(z - sign * shift[i]), 0.0)
                })
            }
            _ => {
                let (c0, c1) = if s == 0 {
                    (C64::ONE, C64::ZERO)
                } else {
                    (C64::ZERO, C64::ONE)
                };
                let joint = WaveFunction::with_qubit(&self.sigma0, c0, c1)?;
                let out = self.evolve_joint(&joint, t)?;
                let comp = out.comps[s].clone();
                Ok(WaveFunction {
                    axes: out.axes.clone(),
                    comps: vec![comp],
                })
            }
        }
    }

    /// Freely evolved apparatus state `σ(t)` from the closed form.
    pub fn sigma_free(&self, t: f64) -> Result<WaveFunction> {
        self.free_profile.sample(&self.axes, t)
    }

    /// Energy fluctuation of the apparatus Hamiltonian in `σ₀`, by
    /// momentum-space quadrature.
    pub fn delta_h_a(&self) -> Result<f64> {
        match &self.free_profile {
            FreeProfile::StaticBump { .. } => Ok(0.0),
            FreeProfile::DriftBump { .. } | FreeProfile::DriftProduct { .. } => {
                let (m1, m2) = self.sigma0.momentum_moments(0)?;
                Ok((m2 - m1 * m1).max(0.0).sqrt())
            }
            FreeProfile::Gaussian { mass, .. } => {
                // H_A = p²/2m: fourth-moment quadrature in momentum space
                let grid = self.axes[0];
                let mut eng = crate::grids::FftEngine::new();
                let mut hat = self.sigma0.comps[0].clone();
                eng.fft_axis(&mut hat, 0);
                let mut e1 = 0.0;
                let mut e2 = 0.0;
                let mut total = 0.0;
                for ((i, _), z) in hat.indexed_iter() {
                    let w = z.norm_sqr();
                    let e = grid.freq(i).powi(2) / (2.0 * mass);
                    total += w;
                    e1 += e * w;
                    e2 += e * e * w;
                }
                e1 /= total;
                e2 /= total;
                Ok((e2 - e1 * e1).max(0.0).sqrt())
            }
        }
    }
}

/// Dynamics flavor of a model.
#[derive(Debug, Clone)]
pub enum ModelKind {
    Finite(FiniteModel),
    Grid(GridModel),
}

/// A complete measurement/timing-device bundle.
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    /// Declared measurement duration.
    pub tau: f64,
    /// Switch-on time; 0 for every builtin.
    pub t0: f64,
    pub kind: ModelKind,
    /// Measured sharp observable on the system.
    pub pvm: Option<Pvm>,
    /// Meter POVM on the apparatus.
    pub meter: Option<Meter>,
    /// Convention notes propagated into audit reports.
    pub notes: Vec<String>,
}

impl Model {
    pub fn as_finite(&self) -> Option<&FiniteModel> {
        match &self.kind {
            ModelKind::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridModel> {
        match &self.kind {
            ModelKind::Grid(g) => Some(g),
            _ => None,
        }
    }

    /// Self-validation: hermiticity, meter completeness, PVM
    /// projectivity, support declarations, state normalization.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::Validation("τ must be positive".into()));
        }
        match &self.kind {
            ModelKind::Finite(f) => {
                for (name, h) in [
                    ("H_S", &f.h_system),
                    ("H_A", &f.h_apparatus),
                    ("V", &f.v),
                ] {
                    if linalg::hermiticity_residual(h) > 1e-9 {
                        return Err(Error::Validation(format!("{name} is not Hermitian")));
                    }
                }
                if let Some(pvm) = &self.pvm {
                    pvm.validate()?;
                    if pvm.dim() != f.d_system() {
                        return Err(Error::Validation("PVM dimension mismatch".into()));
                    }
                }
                if let Some(meter) = &self.meter {
                    meter.validate(Some(f.d_apparatus()))?;
                }
            }
            ModelKind::Grid(g) => {
                g.sigma0.validate()?;
                if let Some((lo, hi)) = g.free_profile.x_support(0.0) {
                    let outside = g
                        .sigma0
                        .region_probability(|c| c[0] < lo - 1e-12 || c[0] > hi + 1e-12);
                    if outside > 1e-12 {
                        return Err(Error::Validation(format!(
                            "packet mass {outside:.3e} outside declared support"
                        )));
                    }
                }
                if let Some(pvm) = &self.pvm {
                    pvm.validate()?;
                }
                if let Some(meter) = &self.meter {
                    meter.validate(None)?;
                    if let Meter::Region(rs) = meter {
                        for r in rs {
                            if r.axis >= g.axes.len() {
                                return Err(Error::Validation(
                                    "meter region axis out of range".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pvm_computational_is_valid() {
        let pvm = Pvm::computational(3);
        pvm.validate().unwrap();
        assert_eq!(pvm.n_outcomes(), 3);
        let basis = pvm.range_basis(1).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn meter_validation_rejects_incomplete_povm() {
        let half = linalg::identity(2) * C64::new(0.25, 0.0);
        let meter = Meter::Povm(vec![half.clone(), half]);
        assert!(meter.validate(Some(2)).is_err());
    }

    #[test]
    fn finite_model_embeddings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h_s = linalg::random_hermitian_unit(2, &mut rng);
        let h_a = linalg::random_hermitian_unit(3, &mut rng);
        let v = linalg::random_hermitian_unit(6, &mut rng);
        let sigma0 = QuantumState::pure(
            CompositeSpace::single(3).unwrap(),
            linalg::random_unit_vector(3, &mut rng),
        )
        .unwrap();
        let fm = FiniteModel::new(h_s.clone(), h_a.clone(), v.clone(), sigma0).unwrap();
        let h = fm.h_total();
        let direct = linalg::tensor(&h_s, &linalg::identity(3)).unwrap()
            + linalg::tensor(&linalg::identity(2), &h_a).unwrap()
            + v;
        assert!(linalg::max_abs_diff(&h, &direct) < 1e-14);
    }

    #[test]
    fn gaussian_profile_solves_free_schroedinger() {
        // closed form vs spectral propagation of the sampled state; the
        // right margin leaves room for the fast chirp tail at t=6
        let grid = GridSpec::new(2048, -60.0, 60.0).unwrap();
        let prof = FreeProfile::Gaussian {
            wave_number: 3.0,
            sigma: 1.2,
            x0: -18.0,
            mass: 1.0,
            lead: 0.0,
        };
        let w0 = prof.sample(&[grid], 0.0).unwrap();
        let ham = GridHamiltonian::MassiveParticle {
            mass: 1.0,
            v: None,
            couplings: [0.0, 0.0],
        };
        for &t in &[1.0, 3.0, 6.0] {
            let spectral = ham.exact_evolve(&w0, t).unwrap();
            let closed = prof.sample(&[grid], t).unwrap();
            let mut acc = 0.0;
            for (a, b) in spectral.comps[0].iter().zip(closed.comps[0].iter()) {
                acc += (a - b).norm_sqr();
            }
            let d = (acc * grid.dx()).sqrt();
            assert!(d < 1e-9, "closed form deviates at t={t}: {d:.3e}");
        }
    }

    #[test]
    fn free_profile_supports_translate() {
        let packet = Bump::unit(-1.0, 0.0).unwrap();
        let prof = FreeProfile::DriftBump { packet };
        assert_eq!(prof.x_support(2.5), Some((1.5, 2.5)));
        assert!((prof.eval(2.5, 2.0, 0.0).re - packet.eval(-0.5)).abs() < 1e-15);
    }
}
