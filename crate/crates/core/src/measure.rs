//! Measurement protocol execution: meter outcome probabilities,
//! worst-case error, conjugate-state disturbance, and the free-vs-full
//! overlap curve `p(t)`.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::{self, CMat, CVec};
use crate::metrics;
use crate::models::{FiniteModel, GridModel, Meter, Model, ModelKind};
use crate::states::{CompositeSpace, QuantumState, StateKind};
use crate::{Error, Result};

/// Born probabilities of the meter outcomes on the evolved joint state.
pub fn outcome_probabilities(m: &Model, rho_in: &QuantumState, tau: f64) -> Result<Vec<f64>> {
    let meter = m
        .meter
        .as_ref()
        .ok_or_else(|| Error::Protocol("model has no meter".into()))?;
    if !(tau > 0.0) {
        return Err(Error::Argument("τ must be positive".into()));
    }
    if let Meter::Coin(n) = meter {
        return Ok(vec![1.0 / *n as f64; *n]);
    }
    match &m.kind {
        ModelKind::Finite(f) => {
            let joint = f.joint_state(rho_in)?;
            let out = f.propagate(&joint, tau)?;
            let rho = out.density();
            match meter {
                Meter::Povm(es) => es
                    .iter()
                    .map(|e| {
                        let emb = f.space.op_on_leg(e, 1)?;
                        Ok(linalg::trace(&emb.dot(&rho)).re.clamp(0.0, 1.0))
                    })
                    .collect(),
                Meter::Region(_) => {
                    Err(Error::Protocol("region meter on a finite model".into()))
                }
                Meter::Coin(_) => unreachable!(),
            }
        }
        ModelKind::Grid(g) => {
            let regions = match meter {
                Meter::Region(rs) => rs,
                _ => return Err(Error::Protocol("grid model needs a region meter".into())),
            };
            // decompose the 2×2 input and mix branch probabilities
            let weights = qubit_population(rho_in)?;
            let mut probs = vec![0.0f64; regions.len()];
            for (s, w) in weights.iter().enumerate() {
                if *w < 1e-15 {
                    continue;
                }
                let wave = g.branch_wave(s, tau)?;
                for (n, region) in regions.iter().enumerate() {
                    probs[n] += w * wave.region_probability(|c| region.contains(c));
                }
            }
            Ok(probs)
        }
    }
}

/// Branch populations `⟨s|ρ|s⟩` of a qubit input.
fn qubit_population(rho_in: &QuantumState) -> Result<Vec<f64>> {
    if rho_in.total_dim() != 2 {
        return Err(Error::Argument("grid models take qubit inputs".into()));
    }
    let rho = rho_in.density();
    Ok(vec![rho[[0, 0]].re, rho[[1, 1]].re])
}

/// Worst-case error over outcomes and input states supported in each
/// outcome's range.
#[derive(Debug, Clone, Serialize)]
pub struct WorstCaseError {
    pub value: f64,
    /// True when every PVM sector has rank 1, so the maximization is
    /// exact; otherwise `value` is a sampled lower bound.
    pub exact: bool,
    /// Random range states drawn per higher-rank sector.
    pub samples: usize,
}

pub fn worst_case_error(m: &Model, tau: f64) -> Result<WorstCaseError> {
    let pvm = m
        .pvm
        .as_ref()
        .ok_or_else(|| Error::Protocol("model has no measured observable".into()))?;
    let mut value = 0.0f64;
    let mut exact = true;
    let mut samples = 0usize;
    let d = pvm.dim();
    let space = CompositeSpace::single(d)?;
    for n in 0..pvm.n_outcomes() {
        let basis = pvm.range_basis(n)?;
        let mut candidates: Vec<CVec> = basis.clone();
        if basis.len() > 1 {
            exact = false;
            let extra = 32;
            samples += extra;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64 + 1);
            for _ in 0..extra {
                let mut v: CVec = Array1::zeros(d);
                for b in &basis {
                    let c = linalg::sample_complex_normal(&mut rng);
                    v = v + b.mapv(|z| z * c);
                }
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    candidates.push(v / C64::new(norm, 0.0));
                }
            }
        }
        for cand in candidates {
            let input = QuantumState::pure(space.clone(), cand)?;
            let probs = outcome_probabilities(m, &input, tau)?;
            value = value.max(1.0 - probs.get(n).copied().unwrap_or(0.0));
        }
    }
    Ok(WorstCaseError {
        value,
        exact,
        samples,
    })
}

/// Conjugate-state disturbance: fidelities of the evolved restrictions
/// against the freely evolved superposition states, and against each
/// other.
#[derive(Debug, Clone, Serialize)]
pub struct Disturbance {
    /// `F(ρ₊(τ), |+'⟩⟨+'|)`.
    pub f_plus: f64,
    /// `F(ρ₋(τ), |−'⟩⟨−'|)`.
    pub f_minus: f64,
    /// `F(ρ₊(τ), ρ₋(τ))`.
    pub f_cross: f64,
}

/// Disturbance of the conjugates of the default outcome pair `(0, 1)`.
pub fn disturbance_profile(m: &Model, tau: f64) -> Result<Disturbance> {
    disturbance_profile_pair(m, tau, 0, 1)
}

/// Disturbance of the conjugates built from a chosen outcome pair.
pub fn disturbance_profile_pair(
    m: &Model,
    tau: f64,
    out_a: usize,
    out_b: usize,
) -> Result<Disturbance> {
    let pvm = m
        .pvm
        .as_ref()
        .ok_or_else(|| Error::Protocol("model has no measured observable".into()))?;
    if pvm.n_outcomes() < 2 {
        return Err(Error::Protocol("need at least two outcomes".into()));
    }
    if out_a == out_b || out_a >= pvm.n_outcomes() || out_b >= pvm.n_outcomes() {
        return Err(Error::Argument(format!(
            "invalid conjugate pair ({out_a}, {out_b})"
        )));
    }
    let v0 = pvm.range_basis(out_a)?[0].clone();
    let v1 = pvm.range_basis(out_b)?[0].clone();
    let d = pvm.dim();
    let space = CompositeSpace::single(d)?;
    let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
    let plus: CVec = (&v0 + &v1).mapv(|z| z * sqrt_half);
    let minus: CVec = (&v0 - &v1).mapv(|z| z * sqrt_half);

    let (rho_p, rho_m, plus_free, minus_free) = match &m.kind {
        ModelKind::Finite(f) => {
            let sp = QuantumState::pure(space.clone(), plus.clone())?;
            let sm = QuantumState::pure(space.clone(), minus.clone())?;
            let rp = f.propagate(&f.joint_state(&sp)?, tau)?.partial_trace(&[0])?;
            let rm = f.propagate(&f.joint_state(&sm)?, tau)?.partial_trace(&[0])?;
            // free system evolution of the conjugate pair
            let u_s = linalg::eigh(&f.h_system)?.propagator(tau);
            let pf = QuantumState::pure_normalized(space.clone(), u_s.dot(&plus))?;
            let mf = QuantumState::pure_normalized(space.clone(), u_s.dot(&minus))?;
            (rp, rm, pf, mf)
        }
        ModelKind::Grid(g) => {
            let rp = restricted_system_state(g, &plus, tau)?;
            let rm = restricted_system_state(g, &minus, tau)?;
            // grid models carry H_S = 0: the conjugate pair is static
            let pf = QuantumState::pure(space.clone(), plus.clone())?;
            let mf = QuantumState::pure(space.clone(), minus.clone())?;
            (rp, rm, pf, mf)
        }
    };
    Ok(Disturbance {
        f_plus: metrics::fidelity(&rho_p, &plus_free)?,
        f_minus: metrics::fidelity(&rho_m, &minus_free)?,
        f_cross: metrics::fidelity(&rho_p, &rho_m)?,
    })
}

/// Restricted system state after evolving a pure qubit input, built from
/// branch overlaps: `ρ_{ss'} = c_s c̄_{s'} ⟨φ^{s'}(t)|φ^s(t)⟩` without
/// forming the joint density operator.
pub fn restricted_system_state(g: &GridModel, input: &CVec, t: f64) -> Result<QuantumState> {
    if input.len() != 2 {
        return Err(Error::Argument("grid models take qubit inputs".into()));
    }
    let w0 = g.branch_wave(0, t)?;
    let w1 = g.branch_wave(1, t)?;
    let ov01 = w1.inner(&w0)?; // ⟨φ¹|φ⁰⟩
    let mut rho: CMat = Array2::zeros((2, 2));
    rho[[0, 0]] = C64::new(input[0].norm_sqr(), 0.0);
    rho[[1, 1]] = C64::new(input[1].norm_sqr(), 0.0);
    rho[[0, 1]] = input[0] * input[1].conj() * ov01;
    rho[[1, 0]] = rho[[0, 1]].conj();
    let tr = linalg::trace(&rho).re;
    QuantumState::mixed(CompositeSpace::single(2)?, rho * C64::new(1.0 / tr, 0.0))
}

/// Overlap curve `p(t) = |⟨Φ₀(t)|Φ(t)⟩|²` between the fully and freely
/// evolved joint states, from a pure system input.
pub fn p_curve(
    m: &Model,
    input: &QuantumState,
    t_max: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::Argument("need at least 2 samples".into()));
    }
    if !input.is_pure() {
        return Err(Error::Argument("p-curve needs a pure system input".into()));
    }
    let times: Vec<f64> = (0..samples)
        .map(|i| t_max * i as f64 / (samples - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(samples);
    for &t in &times {
        out.push((t, p_at(m, input, t)?));
    }
    Ok(out)
}

/// Single point of the overlap curve.
pub fn p_at(m: &Model, input: &QuantumState, t: f64) -> Result<f64> {
    match &m.kind {
        ModelKind::Finite(f) => {
            let joint = joint_pure(f, input)?;
            let full = joint.evolve_exact_with(f.total_decomposition(), t)?;
            let free = joint.evolve_exact_with(f.free_decomposition(), t)?;
            let ov = match (&full.kind, &free.kind) {
                (StateKind::Pure(a), StateKind::Pure(b)) => b
                    .iter()
                    .zip(a.iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum::<C64>(),
                _ => unreachable!("joint states are pure by construction"),
            };
            Ok(ov.norm_sqr().min(1.0))
        }
        ModelKind::Grid(g) => {
            let v = match &input.kind {
                StateKind::Pure(v) => v,
                _ => unreachable!(),
            };
            if v.len() != 2 {
                return Err(Error::Argument("grid models take qubit inputs".into()));
            }
            let free = g.sigma_free(t)?;
            let mut ov = C64::ZERO;
            for s in 0..2 {
                let w = v[s].norm_sqr();
                if w < 1e-15 {
                    continue;
                }
                let branch = g.branch_wave(s, t)?;
                ov += C64::new(w, 0.0) * free.inner(&branch)?;
            }
            Ok(ov.norm_sqr().min(1.0))
        }
    }
}

/// Pure joint state plus the bookkeeping for an optional purification
/// leg on which the dynamics acts trivially.
struct JointPure {
    state: QuantumState,
    aux: bool,
}

impl JointPure {
    fn evolve_exact_with(
        &self,
        dec: &linalg::SpectralDecomposition,
        t: f64,
    ) -> Result<QuantumState> {
        let u = dec.propagator(t);
        let u_full = if self.aux {
            self.state.space.op_on_legs(&u, 0, 2)?
        } else {
            u
        };
        self.state.apply_unitary(&u_full)
    }
}

/// Pure joint state `input ⊗ σ₀`, purifying the apparatus first if it is
/// mixed (the auxiliary leg is appended last and evolves trivially).
fn joint_pure(f: &FiniteModel, input: &QuantumState) -> Result<JointPure> {
    let v_in = match &input.kind {
        StateKind::Pure(v) => v.clone(),
        _ => return Err(Error::Argument("pure input required".into())),
    };
    let (sigma_vec, aux_dim) = match &f.sigma0.kind {
        StateKind::Pure(v) => (v.clone(), None),
        StateKind::Mixed(_) => {
            let purified = f.sigma0.purify()?;
            match purified.kind {
                StateKind::Pure(v) => (v, Some(f.d_apparatus())),
                _ => unreachable!(),
            }
        }
    };
    let mut dims = vec![f.d_system(), f.d_apparatus()];
    if let Some(d) = aux_dim {
        dims.push(d);
    }
    let space = CompositeSpace::new(dims)?;
    let mut vec: CVec = Array1::zeros(space.total_dim());
    let block = sigma_vec.len();
    for (i, a) in v_in.iter().enumerate() {
        for (j, b) in sigma_vec.iter().enumerate() {
            vec[i * block + j] = a * b;
        }
    }
    Ok(JointPure {
        state: QuantumState::pure_normalized(space, vec)?,
        aux: aux_dim.is_some(),
    })
}

/// Fidelities `F(ρ(τ), |k̃'⟩⟨k̃'|)` of the common evolved restriction
/// against the freely evolved conjugate (Fourier) family, plus the
/// pairwise coincidence defect of the restrictions.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugateFamily {
    pub fidelities: Vec<f64>,
    /// `min_k F(ρ_k(τ), ρ_0(τ))`: 1 for a perfect measurement.
    pub coincidence: f64,
}

pub fn conjugate_family_profile(m: &Model, tau: f64) -> Result<ConjugateFamily> {
    let f = m
        .as_finite()
        .ok_or_else(|| Error::Protocol("conjugate family needs a finite model".into()))?;
    let pvm = m
        .pvm
        .as_ref()
        .ok_or_else(|| Error::Protocol("model has no measured observable".into()))?;
    let n = pvm.n_outcomes();
    let d = pvm.dim();
    let space = CompositeSpace::single(d)?;
    let vectors: Vec<CVec> = (0..n)
        .map(|k| pvm.range_basis(k).map(|b| b[0].clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut restrictions = Vec::with_capacity(n);
    let mut tilde_states = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: CVec = Array1::zeros(d);
        for (idx, base) in vectors.iter().enumerate() {
            let phase = 2.0 * std::f64::consts::PI * (k * idx) as f64 / n as f64;
            v = v + base.mapv(|z| z * C64::from_polar(1.0 / (n as f64).sqrt(), phase));
        }
        let tilde = QuantumState::pure_normalized(space.clone(), v)?;
        let joint = f.joint_state(&tilde)?;
        restrictions.push(f.propagate(&joint, tau)?.partial_trace(&[0])?);
        tilde_states.push(tilde);
    }
    let u_s = linalg::eigh(&f.h_system)?.propagator(tau);
    let mut fidelities = Vec::with_capacity(n);
    let mut coincidence = 1.0f64;
    for k in 0..n {
        let tilde_free = tilde_states[k].apply_unitary(&u_s)?;
        fidelities.push(metrics::fidelity(&restrictions[0], &tilde_free)?);
        coincidence = coincidence.min(metrics::fidelity(&restrictions[k], &restrictions[0])?);
    }
    Ok(ConjugateFamily {
        fidelities,
        coincidence,
    })
}

/// Assembled protocol quantities for one model run.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementRun {
    pub model: String,
    pub tau: f64,
    /// One row per prepared input; rows sum to 1.
    pub input_labels: Vec<String>,
    pub probabilities: Vec<Vec<f64>>,
    pub p_error: Option<WorstCaseError>,
    pub disturbance: Option<Disturbance>,
    pub p_curve: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

/// Protocol knobs: overlap-curve sampling and the outcome pair whose
/// conjugates the disturbance profile tracks.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolOptions {
    pub p_samples: usize,
    pub conjugate_pair: (usize, usize),
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self {
            p_samples: 65,
            conjugate_pair: (0, 1),
        }
    }
}

/// Run the full protocol: outcome rows for the PVM basis inputs and the
/// maximally mixed input, worst-case error, disturbance, and the overlap
/// curve on `[0, τ]`.
pub fn run_protocol(m: &Model, p_samples: usize) -> Result<MeasurementRun> {
    run_protocol_with(
        m,
        &ProtocolOptions {
            p_samples,
            ..Default::default()
        },
    )
}

pub fn run_protocol_with(m: &Model, opts: &ProtocolOptions) -> Result<MeasurementRun> {
    let p_samples = opts.p_samples;
    let mut input_labels = Vec::new();
    let mut probabilities = Vec::new();
    if m.meter.is_some() {
        if let Some(pvm) = &m.pvm {
            let d = pvm.dim();
            let space = CompositeSpace::single(d)?;
            for nn in 0..pvm.n_outcomes() {
                let v = pvm.range_basis(nn)?[0].clone();
                let input = QuantumState::pure_normalized(space.clone(), v)?;
                let row = outcome_probabilities(m, &input, m.tau)?;
                input_labels.push(format!("basis-{nn}"));
                probabilities.push(row);
            }
            let mixed = QuantumState::mixed(
                space.clone(),
                linalg::identity(d) * C64::new(1.0 / d as f64, 0.0),
            )?;
            input_labels.push("maximally-mixed".into());
            probabilities.push(outcome_probabilities(m, &mixed, m.tau)?);
        }
    }
    let p_error = match (&m.pvm, &m.meter) {
        (Some(_), Some(_)) => Some(worst_case_error(m, m.tau)?),
        _ => None,
    };
    let disturbance = match &m.pvm {
        Some(p) if p.n_outcomes() >= 2 => Some(disturbance_profile_pair(
            m,
            m.tau,
            opts.conjugate_pair.0,
            opts.conjugate_pair.1,
        )?),
        _ => None,
    };
    let curve = match &m.pvm {
        Some(pvm) => {
            let d = pvm.dim();
            let space = CompositeSpace::single(d)?;
            let v0 = pvm.range_basis(0)?[0].clone();
            let v1 = pvm.range_basis(1)?[0].clone();
            let plus = (&v0 + &v1).mapv(|z| z * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            let input = QuantumState::pure_normalized(space, plus)?;
            p_curve(m, &input, m.tau, p_samples)?
        }
        None => Vec::new(),
    };
    Ok(MeasurementRun {
        model: m.name.clone(),
        tau: m.tau,
        input_labels,
        probabilities,
        p_error,
        disturbance,
        p_curve: curve,
        notes: m.notes.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::Bump;
    use crate::models::{
        chiral_model, conditional_rotation_model, conditional_shift_model, random_finite_model,
        standard_model, stern_gerlach_2d, GridOptions, SternGerlachParams,
    };

    fn qubit_space() -> CompositeSpace {
        CompositeSpace::single(2).unwrap()
    }

    #[test]
    fn stern_gerlach_reads_out_both_spins() {
        let m = stern_gerlach_2d(&SternGerlachParams::default(), &GridOptions::default()).unwrap();
        let up = QuantumState::basis(qubit_space(), 1).unwrap();
        let probs = outcome_probabilities(&m, &up, m.tau).unwrap();
        assert!(probs[1] >= 1.0 - 1e-6, "P(up outcome) = {}", probs[1]);
        let down = QuantumState::basis(qubit_space(), 0).unwrap();
        let probs = outcome_probabilities(&m, &down, m.tau).unwrap();
        assert!(probs[0] >= 1.0 - 1e-6, "P(down outcome) = {}", probs[0]);
        // maximally mixed input: both outcomes 1/2
        let mixed =
            QuantumState::mixed(qubit_space(), linalg::identity(2) * C64::new(0.5, 0.0)).unwrap();
        let probs = outcome_probabilities(&m, &mixed, m.tau).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-6 && (probs[1] - 0.5).abs() < 1e-6);
        assert!((probs[0] + probs[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn standard_model_is_accurate_at_four_widths() {
        let m = standard_model(0.5, 2.0, &GridOptions::default()).unwrap();
        let wce = worst_case_error(&m, m.tau).unwrap();
        assert!(wce.exact);
        assert!(wce.value <= 1e-6, "P_error = {:.3e}", wce.value);
    }

    #[test]
    fn coin_meter_gives_half() {
        let mut m = standard_model(0.5, 2.0, &GridOptions::default()).unwrap();
        m.meter = Some(Meter::Coin(2));
        let wce = worst_case_error(&m, m.tau).unwrap();
        assert!((wce.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chiral_meter_carries_no_information() {
        // branch distributions identical: the half-line readout errs
        // with probability ≈ 1/2
        let m = chiral_model(
            Bump::new(0.0, 1.0, 0.8).unwrap(),
            Bump::unit(-1.0, 0.0).unwrap(),
            &GridOptions::default(),
        )
        .unwrap();
        let wce = worst_case_error(&m, m.tau).unwrap();
        // identical branch distributions force ≥ 1/2; the excess is the
        // half-cell quantization of the threshold against the grid
        assert!(wce.value >= 0.5 - 1e-12, "P_error = {}", wce.value);
        assert!((wce.value - 0.5).abs() < 0.01, "P_error = {}", wce.value);
    }

    #[test]
    fn perfect_measurement_disturbs_conjugates_completely() {
        let m = stern_gerlach_2d(&SternGerlachParams::default(), &GridOptions::default()).unwrap();
        let d = disturbance_profile(&m, m.tau).unwrap();
        assert!(d.f_cross >= 1.0 - 1e-5, "F(ρ₊,ρ₋) = {}", d.f_cross);
        let min_f = d.f_plus.min(d.f_minus);
        assert!(
            min_f <= std::f64::consts::FRAC_1_SQRT_2 + 1e-6,
            "min conjugate fidelity {min_f}"
        );
        // orthogonality bound
        assert!(d.f_plus.powi(2) + d.f_minus.powi(2) <= 1.0 + 1e-6);
    }

    #[test]
    fn free_model_preserves_conjugates() {
        // vanishing interaction amplitude: free evolution matches itself
        let m = chiral_model(
            Bump::new(0.0, 1.0, 1e-12).unwrap(),
            Bump::unit(-1.0, 0.0).unwrap(),
            &GridOptions::default(),
        )
        .unwrap();
        let d = disturbance_profile(&m, m.tau).unwrap();
        assert!(d.f_plus > 1.0 - 1e-9 && d.f_minus > 1.0 - 1e-9);
        assert!(d.f_cross < 1e-6, "conjugates stay orthogonal: {}", d.f_cross);
    }

    #[test]
    fn p_curve_is_one_without_interaction() {
        let m = random_finite_model(2, 3, 5).unwrap();
        let f = m.as_finite().unwrap();
        let free = FiniteModel::new(
            f.h_system.clone(),
            f.h_apparatus.clone(),
            linalg::zeros(6, 6),
            f.sigma0.clone(),
        )
        .unwrap();
        let m_free = Model {
            name: "free".into(),
            kind: ModelKind::Finite(free),
            ..m.clone()
        };
        let input = QuantumState::pure(
            qubit_space(),
            ndarray::array![C64::ONE, C64::ONE] / C64::new(2f64.sqrt(), 0.0),
        )
        .unwrap();
        for (_, p) in p_curve(&m_free, &input, 2.0, 9).unwrap() {
            assert!((p - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn p_curve_obeys_interaction_speed_bound() {
        // p(t) ≥ cos²(‖V‖ t) on the validity window
        for seed in [1u64, 2, 3] {
            let m = random_finite_model(2, 3, seed).unwrap();
            let input = QuantumState::basis(qubit_space(), 0).unwrap();
            let curve = p_curve(&m, &input, std::f64::consts::FRAC_PI_2, 30).unwrap();
            for (t, p) in curve {
                let bound = t.cos().powi(2);
                assert!(p >= bound - 1e-9, "seed {seed}, t={t}: p={p} < {bound}");
            }
        }
    }

    #[test]
    fn p_curve_derivative_obeys_robertson_bound() {
        let m = random_finite_model(3, 3, 11).unwrap();
        let space = CompositeSpace::single(3).unwrap();
        let input = QuantumState::basis(space, 1).unwrap();
        let h = 1e-4;
        for i in 1..12 {
            let t = 0.12 * i as f64;
            let p0 = p_at(&m, &input, t - h).unwrap();
            let p1 = p_at(&m, &input, t + h).unwrap();
            let p = p_at(&m, &input, t).unwrap();
            let deriv = (p1 - p0) / (2.0 * h);
            let rhs = 2.0 * (p - p * p).max(0.0).sqrt();
            assert!(
                deriv.abs() <= rhs + 1e-6,
                "t={t}: |dp/dt|={} vs {}",
                deriv.abs(),
                rhs
            );
        }
    }

    #[test]
    fn p_curve_from_purified_mixed_apparatus() {
        // mixed σ₀: the joint state is purified before comparing
        let base = random_finite_model(2, 2, 9).unwrap();
        let f = base.as_finite().unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mixed_sigma = QuantumState::mixed(
            CompositeSpace::single(2).unwrap(),
            linalg::random_density_matrix(2, &mut rng),
        )
        .unwrap();
        let fm = FiniteModel::new(
            f.h_system.clone(),
            f.h_apparatus.clone(),
            f.v.clone(),
            mixed_sigma,
        )
        .unwrap();
        let m = Model {
            name: "mixed-apparatus".into(),
            kind: ModelKind::Finite(fm),
            ..base.clone()
        };
        let input = QuantumState::basis(qubit_space(), 0).unwrap();
        let curve = p_curve(&m, &input, 1.0, 6).unwrap();
        assert!((curve[0].1 - 1.0).abs() < 1e-10);
        for (t, p) in curve {
            assert!((0.0..=1.0).contains(&p));
            assert!(p >= t.cos().powi(2) - 1e-9);
        }
    }

    #[test]
    fn conditional_rotation_is_perfect_and_conjugate_destroying() {
        let m = conditional_rotation_model(1.0).unwrap();
        let wce = worst_case_error(&m, m.tau).unwrap();
        assert!(wce.exact && wce.value < 1e-12);
        let d = disturbance_profile(&m, m.tau).unwrap();
        assert!(d.f_cross >= 1.0 - 1e-10);
        assert!(d.f_plus.min(d.f_minus) <= std::f64::consts::FRAC_1_SQRT_2 + 1e-9);
    }

    #[test]
    fn conjugate_family_collapses_for_perfect_n_outcome_model() {
        for n in [2usize, 3, 4] {
            let m = conditional_shift_model(n, 1.0).unwrap();
            let fam = conjugate_family_profile(&m, m.tau).unwrap();
            assert!(
                fam.coincidence >= 1.0 - 1e-9,
                "n={n}: restrictions differ ({})",
                fam.coincidence
            );
            let min_f = fam.fidelities.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                min_f <= 1.0 / (n as f64).sqrt() + 1e-6,
                "n={n}: min fidelity {min_f}"
            );
        }
    }

    #[test]
    fn probability_rows_sum_to_one() {
        let m = stern_gerlach_2d(&SternGerlachParams::default(), &GridOptions::default()).unwrap();
        let run = run_protocol(&m, 9).unwrap();
        for row in &run.probabilities {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-8, "row sums to {sum}");
        }
        assert_eq!(run.p_curve.first().map(|&(t, _)| t), Some(0.0));
        assert!((run.p_curve[0].1 - 1.0).abs() < 1e-10);
    }
}
