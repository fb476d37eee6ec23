//! Numerical checkers for the switching-device conditions and a
//! finite-dimensional no-go probe.
//!
//! The universal quantifier "for every system state ρ" reduces by
//! linearity to a Hermitian operator basis. Time windows are sampled;
//! for grid models with compactly supported packets and interactions the
//! residual is provably zero whenever the supports are disjoint, which
//! is checked by support arithmetic rather than quadrature.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{self, CMat};
use crate::models::{FiniteModel, GridModel, Model, ModelKind};
use crate::states::QuantumState;
use crate::{Error, Result};

/// Max commutator norm `‖[V, ρ⊗σ(t)]‖` over a Hermitian basis of ρ and
/// `samples` times in `[t₀−window, t₀]`. Zero certifies the
/// no-interaction condition on the sample.
pub fn condition1_residual(m: &Model, window: f64, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::Argument("need at least 2 samples".into()));
    }
    if !(window > 0.0) {
        return Err(Error::Argument("window must be positive".into()));
    }
    let times: Vec<f64> = (0..samples)
        .map(|i| m.t0 - window * i as f64 / (samples - 1) as f64)
        .collect();
    let mut worst = 0.0f64;
    for &t in &times {
        worst = worst.max(free_state_commutator_norm(m, t)?);
    }
    Ok(worst)
}

/// Max commutator norm of `[V, e^{−iHt}(ρ⊗σ₀)e^{iHt}]` over the basis
/// and `samples` times in `(t₀, t₀+horizon]`. A strictly positive value
/// certifies non-triviality.
pub fn condition2_strength(m: &Model, horizon: f64, samples: usize) -> Result<f64> {
    if samples < 1 {
        return Err(Error::Argument("need at least 1 sample".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::Argument("horizon must be positive".into()));
    }
    let mut worst = 0.0f64;
    for i in 1..=samples {
        let t = m.t0 + horizon * i as f64 / samples as f64;
        worst = worst.max(evolved_commutator_norm(m, t)?);
    }
    Ok(worst)
}

/// Switching-off check at `t₁`: residual over `[t₁, t₁+horizon]` and the
/// verdict `residual ≤ 1e−8`.
pub fn condition3_check(m: &Model, t1: f64, horizon: f64, samples: usize) -> Result<(bool, f64)> {
    if samples < 2 {
        return Err(Error::Argument("need at least 2 samples".into()));
    }
    let mut worst = 0.0f64;
    for i in 0..samples {
        let t = t1 + horizon * i as f64 / (samples - 1) as f64;
        worst = worst.max(evolved_commutator_norm(m, t)?);
    }
    Ok((worst <= 1e-8, worst))
}

/// `max_ρ ‖[V, ρ⊗σ(t)]‖` with the apparatus freely evolved.
fn free_state_commutator_norm(m: &Model, t: f64) -> Result<f64> {
    match &m.kind {
        ModelKind::Finite(f) => {
            let sigma = f.sigma_free(t - m.t0)?;
            finite_commutator_over_basis(f, &sigma.density())
        }
        ModelKind::Grid(g) => {
            // provably zero when the drifting packet cannot touch the
            // interaction window
            if let (Some((vl, vh)), Some((pl, ph))) =
                (g.interaction.x_support, g.free_profile.x_support(t - m.t0))
            {
                if ph <= vl || pl >= vh {
                    return Ok(0.0);
                }
            }
            let phi = g.sigma_free(t - m.t0)?;
            // free dynamics: every branch shares the same apparatus wave
            let d_s = g.interaction.system_op.nrows();
            let branches = vec![phi.comps[0].clone(); d_s];
            grid_rank_commutator_norm(g, &branches, phi.dv())
        }
    }
}

/// `max_ρ ‖[V, e^{−iH(t−t₀)}(ρ⊗σ₀)e^{iH(t−t₀)}]‖` under the full
/// dynamics.
fn evolved_commutator_norm(m: &Model, t: f64) -> Result<f64> {
    match &m.kind {
        ModelKind::Finite(f) => {
            let u = f.total_decomposition().propagator(t - m.t0);
            let u_dag = linalg::dagger(&u);
            let sigma = f.sigma0.density();
            let v = &f.v;
            let mut worst = 0.0f64;
            for x in linalg::hermitian_basis(f.d_system()) {
                let theta0 = linalg::tensor(&x, &sigma)?;
                let theta = u.dot(&theta0).dot(&u_dag);
                worst = worst.max(linalg::operator_norm(&linalg::commutator(v, &theta)));
            }
            Ok(worst)
        }
        ModelKind::Grid(g) => {
            let b0 = g.branch_wave(0, t - m.t0)?;
            let b1 = g.branch_wave(1, t - m.t0)?;
            let dv = b0.dv();
            grid_rank_commutator_norm(g, &[b0.comps[0].clone(), b1.comps[0].clone()], dv)
        }
    }
}

fn finite_commutator_over_basis(f: &FiniteModel, sigma: &CMat) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in linalg::hermitian_basis(f.d_system()) {
        let theta = linalg::tensor(&x, sigma)?;
        let c = linalg::commutator(&f.v, &theta);
        worst = worst.max(linalg::operator_norm(&c));
    }
    Ok(worst)
}

/// Commutator norm for product-form `V = B⊗v` against branch-resolved
/// pure apparatus waves (one wave per system basis index), computed on
/// the small subspace spanned by the branch waves and their `v`-images.
///
/// The state is `Σ_{ss'} ρ_{ss'} |s⟩⟨s'|⊗|φ^s⟩⟨φ^{s'}|`; under free
/// dynamics all `φ^s` coincide.
fn grid_rank_commutator_norm(g: &GridModel, branches: &[Array2<C64>], dv: f64) -> Result<f64> {
    let b_op = &g.interaction.system_op;
    let d_s = b_op.nrows();
    if branches.len() != d_s {
        return Err(Error::Argument(
            "one branch wave per system basis index required".into(),
        ));
    }

    // span vectors: branch waves and their v-images
    let mut vecs: Vec<Array2<C64>> = branches.to_vec();
    for br in branches {
        vecs.push(g.interaction.apparatus.apply(&g.axes, br));
    }

    // orthonormal coordinates by modified Gram-Schmidt
    let inner = |a: &Array2<C64>, b: &Array2<C64>| -> C64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            * dv
    };
    let mut basis: Vec<Array2<C64>> = Vec::new();
    let mut coords: Vec<Vec<C64>> = Vec::new();
    for v in &vecs {
        let mut residual = v.clone();
        let mut coord: Vec<C64> = Vec::with_capacity(basis.len() + 1);
        for e in basis.iter() {
            let c = inner(e, &residual);
            residual = &residual - &(e * c);
            coord.push(c);
        }
        let norm = inner(&residual, &residual).re.max(0.0).sqrt();
        if norm > 1e-13 {
            basis.push(residual.mapv(|z| z / norm));
            coord.push(C64::new(norm, 0.0));
        }
        coords.push(coord);
    }
    let dim = basis.len();
    if dim == 0 {
        return Ok(0.0);
    }
    let pad = |c: &[C64]| -> Vec<C64> {
        let mut out = c.to_vec();
        out.resize(dim, C64::ZERO);
        out
    };
    let n_br = branches.len();
    let phi_coords: Vec<Vec<C64>> = (0..n_br).map(|s| pad(&coords[s])).collect();
    let img_coords: Vec<Vec<C64>> = (0..n_br).map(|s| pad(&coords[n_br + s])).collect();

    // max over the Hermitian basis of ρ of
    // ‖Σ_{ss'} ρ_{ss'}( B|s⟩⟨s'| ⊗ |u^s⟩⟨φ^{s'}| − |s⟩⟨s'|B ⊗ |φ^s⟩⟨u^{s'}| )‖
    let outer =
        |a: &[C64], b: &[C64]| Array2::from_shape_fn((dim, dim), |(i, j)| a[i] * b[j].conj());
    let mut worst = 0.0f64;
    for x in linalg::hermitian_basis(d_s) {
        let mut op = linalg::zeros(d_s * dim, d_s * dim);
        for s in 0..n_br {
            for sp in 0..n_br {
                let w = x[[s, sp]];
                if w == C64::ZERO {
                    continue;
                }
                let mut sys_left = linalg::zeros(d_s, d_s);
                let mut sys_right = linalg::zeros(d_s, d_s);
                for r in 0..d_s {
                    sys_left[[r, sp]] = b_op[[r, s]] * w; // B|s⟩⟨s'|
                    sys_right[[s, r]] = b_op[[sp, r]] * w; // |s⟩⟨s'|B
                }
                let term1 = linalg::tensor(&sys_left, &outer(&img_coords[s], &phi_coords[sp]))?;
                let term2 = linalg::tensor(&sys_right, &outer(&phi_coords[s], &img_coords[sp]))?;
                op = op + term1 - term2;
            }
        }
        worst = worst.max(linalg::operator_norm(&op));
    }
    Ok(worst)
}

/// One trial of the no-go probe.
#[derive(Debug, Clone, Serialize)]
pub struct NogoTrial {
    pub trial: usize,
    /// Condition-1 residual of the projected interaction on a refined
    /// past sample.
    pub residual: f64,
    /// Condition-2 strength over the future horizon.
    pub strength: f64,
    /// Whether the past samples span the full free orbit of σ, so the
    /// sampled condition extends to all real times.
    pub certified: bool,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct NogoReport {
    pub d_system: usize,
    pub d_apparatus: usize,
    pub seed: u64,
    pub trials: Vec<NogoTrial>,
    /// Certified trials with `residual ≤ 1e−10` and `strength > 1e−8`;
    /// a nonzero count would falsify the bounded-Hamiltonian exclusion.
    pub counterexamples: usize,
}

/// Finite-dimensional falsification probe: per trial, draw random free
/// Hamiltonians and a pure apparatus state, project a random interaction
/// onto the commutant of `{ρ⊗σ(t)}` sampled over a past window, and
/// check whether the surviving interaction can still turn on afterwards.
pub fn nogo_probe(
    d_system: usize,
    d_apparatus: usize,
    trials: usize,
    seed: u64,
) -> Result<NogoReport> {
    if d_system * d_apparatus > 36 {
        return Err(Error::Capacity(format!(
            "probe dimension {} exceeds 36",
            d_system * d_apparatus
        )));
    }
    if d_system < 2 || d_apparatus < 2 {
        return Err(Error::Argument("factor dimensions must be ≥ 2".into()));
    }
    let records: Vec<NogoTrial> = (0..trials)
        .into_par_iter()
        .map(|trial| nogo_trial(d_system, d_apparatus, seed, trial))
        .collect::<Result<Vec<_>>>()?;
    let counterexamples = records
        .iter()
        .filter(|r| r.verdict == "counterexample")
        .count();
    Ok(NogoReport {
        d_system,
        d_apparatus,
        seed,
        trials: records,
        counterexamples,
    })
}

fn nogo_trial(d_s: usize, d_a: usize, seed: u64, trial: usize) -> Result<NogoTrial> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
        seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
    );
    let h_s = linalg::random_hermitian_unit(d_s, &mut rng);
    let h_a = linalg::random_hermitian_unit(d_a, &mut rng);
    let sigma0 = QuantumState::pure(
        crate::states::CompositeSpace::single(d_a)?,
        linalg::random_unit_vector(d_a, &mut rng),
    )?;
    let v0 = linalg::random_hermitian_unit(d_s * d_a, &mut rng);

    let window = 3.0f64;
    let n_t = 8 * d_a * d_a;
    let times: Vec<f64> = (0..n_t)
        .map(|i| -window * (i as f64 + 0.37) / n_t as f64)
        .collect();
    let basis_s = linalg::hermitian_basis(d_s);
    let basis_v = linalg::hermitian_basis(d_s * d_a);
    let a_dec = linalg::eigh(&h_a)?;
    let sigma_at = |t: f64| -> CMat {
        let u = a_dec.propagator(t);
        let s = u.dot(&sigma0.density()).dot(&linalg::dagger(&u));
        (&s + &linalg::dagger(&s)) * C64::new(0.5, 0.0)
    };

    // normal matrix of the linear constraint system over Hermitian V
    let dim_v = basis_v.len();
    let mut normal = vec![0.0f64; dim_v * dim_v];
    for &t in &times {
        let sigma = sigma_at(t);
        for x in &basis_s {
            let theta = linalg::tensor(x, &sigma)?;
            let cols: Vec<CMat> = basis_v
                .iter()
                .map(|b| linalg::commutator(b, &theta))
                .collect();
            for a in 0..dim_v {
                for b in a..dim_v {
                    let dot: C64 = cols[a]
                        .iter()
                        .zip(cols[b].iter())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    normal[a * dim_v + b] += dot.re;
                    if a != b {
                        normal[b * dim_v + a] += dot.re;
                    }
                }
            }
        }
    }
    let normal_mat =
        Array2::from_shape_fn((dim_v, dim_v), |(i, j)| C64::new(normal[i * dim_v + j], 0.0));
    let dec = linalg::eigh(&normal_mat)?;
    let lam_max = dec.eigenvalues.last().copied().unwrap_or(0.0).max(1e-300);

    // project v0 onto the numerical nullspace (the commutant always
    // contains the identity, so the nullspace is never empty)
    let v0_coords: Vec<f64> = basis_v
        .iter()
        .map(|b| {
            b.iter()
                .zip(v0.iter())
                .map(|(x, y)| (x.conj() * y).re)
                .sum()
        })
        .collect();
    let mut v_proj = linalg::zeros(d_s * d_a, d_s * d_a);
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam > 1e-16 * lam_max {
            continue;
        }
        let col = dec.eigenvectors.column(k);
        let overlap: f64 = col
            .iter()
            .zip(v0_coords.iter())
            .map(|(c, &v)| c.re * v)
            .sum();
        for (alpha, b) in basis_v.iter().enumerate() {
            v_proj = v_proj + b * C64::new(overlap * col[alpha].re, 0.0);
        }
    }
    let v_norm = linalg::operator_norm(&v_proj);
    let v_final = if v_norm > 1e-12 {
        v_proj * C64::new(1.0 / v_norm, 0.0)
    } else {
        v_proj
    };

    // certificate: sampled span of σ(t) covers the span of its Bohr
    // components
    let mut span: Vec<CMat> = Vec::new();
    for &t in &times {
        let mut residual = sigma_at(t);
        for e in &span {
            let c: C64 = e
                .iter()
                .zip(residual.iter())
                .map(|(x, y)| x.conj() * y)
                .sum();
            residual = residual - e * c;
        }
        let norm = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 {
            span.push(residual * C64::new(1.0 / norm, 0.0));
        }
    }
    let rank_orbit = bohr_component_count(&a_dec, &sigma0.density());
    let certified = span.len() >= rank_orbit;

    // re-evaluate on fresh, offset samples
    let model = Model {
        name: format!("nogo-{trial}"),
        tau: 1.0,
        t0: 0.0,
        kind: ModelKind::Finite(FiniteModel::new(h_s, h_a, v_final, sigma0)?),
        pvm: None,
        meter: None,
        notes: vec![],
    };
    let residual = condition1_residual(&model, window, 2 * n_t + 1)?;
    let strength = condition2_strength(&model, window, n_t)?;
    let verdict = if residual <= 1e-10 && strength > 1e-8 {
        if certified {
            "counterexample"
        } else {
            "window-limited"
        }
    } else {
        "consistent"
    };
    Ok(NogoTrial {
        trial,
        residual,
        strength,
        certified,
        verdict,
    })
}

/// Number of distinct nonvanishing Bohr components `P_m σ P_n` grouped
/// by frequency `E_m − E_n`: the dimension of the free orbit's span.
fn bohr_component_count(dec: &linalg::SpectralDecomposition, sigma: &CMat) -> usize {
    let d = dec.eigenvalues.len();
    let u = &dec.eigenvectors;
    let udag = linalg::dagger(u);
    let s_eig = udag.dot(sigma).dot(u);
    let mut freqs: Vec<f64> = Vec::new();
    for m in 0..d {
        for n in 0..d {
            if s_eig[[m, n]].norm() < 1e-12 {
                continue;
            }
            let w = dec.eigenvalues[m] - dec.eigenvalues[n];
            if !freqs.iter().any(|f| (f - w).abs() < 1e-10) {
                freqs.push(w);
            }
        }
    }
    freqs.len()
}

/// Finite truncation of the chiral timing device onto an `n`-point
/// periodic grid: spectral drift generator, diagonal coupling window,
/// sampled packet. Demonstrates window-limited probe verdicts.
pub fn truncated_chiral_finite(n: usize, x_min: f64, x_max: f64) -> Result<Model> {
    use crate::grids::Bump;
    let grid = crate::grids::GridSpec::new(n, x_min, x_max)?;
    let packet = Bump::unit(-1.0, 0.0)?;
    let g = Bump::new(0.0, 1.0, 0.8)?;
    // spectral drift generator: F† diag(k) F
    let mut h_a = linalg::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = C64::ZERO;
            for k in 0..n {
                let kk = grid.freq(k);
                let phase =
                    2.0 * std::f64::consts::PI * (k as f64) * (a as f64 - b as f64) / n as f64;
                acc += C64::from_polar(kk / n as f64, phase);
            }
            h_a[[a, b]] = acc;
        }
    }
    let h_a = (&h_a + &linalg::dagger(&h_a)) * C64::new(0.5, 0.0);
    let mut v_app = linalg::zeros(n, n);
    for i in 0..n {
        v_app[[i, i]] = C64::new(g.eval(grid.point(i)), 0.0);
    }
    let v = linalg::tensor(&linalg::pauli_z(), &v_app)?;
    let psi = ndarray::Array1::from_shape_fn(n, |i| C64::new(packet.eval(grid.point(i)), 0.0));
    let sigma0 = QuantumState::pure_normalized(crate::states::CompositeSpace::single(n)?, psi)?;
    let fm = FiniteModel::new(linalg::zeros(2, 2), h_a, v, sigma0)?;
    Ok(Model {
        name: "chiral-truncated".into(),
        tau: 2.0,
        t0: 0.0,
        kind: ModelKind::Finite(fm),
        pvm: None,
        meter: None,
        notes: vec![],
    })
}
