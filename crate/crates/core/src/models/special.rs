//! Finite-dimensional specimens: random dynamics for property tests and
//! exactly solvable conditional-gate measurement models.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::{FiniteModel, Meter, Model, ModelKind, Pvm};
use crate::linalg::{self, CMat};
use crate::states::{CompositeSpace, QuantumState};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random Hermitian dynamics specimen: `‖V‖ = 1`, random pure apparatus
/// state, no meter (it is not a measurement).
pub fn random_finite_model(d_system: usize, d_apparatus: usize, seed: u64) -> Result<Model> {
    if d_system < 2 || d_apparatus < 2 {
        return Err(Error::Argument("factor dimensions must be ≥ 2".into()));
    }
    if d_system * d_apparatus > 64 {
        return Err(Error::Capacity(format!(
            "random model dimension {} exceeds 64",
            d_system * d_apparatus
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_system = linalg::random_hermitian_unit(d_system, &mut rng);
    let h_apparatus = linalg::random_hermitian_unit(d_apparatus, &mut rng);
    let v = linalg::random_hermitian_unit(d_system * d_apparatus, &mut rng);
    let sigma0 = QuantumState::pure(
        CompositeSpace::single(d_apparatus)?,
        linalg::random_unit_vector(d_apparatus, &mut rng),
    )?;
    let fm = FiniteModel::new(h_system, h_apparatus, v, sigma0)?;
    let model = Model {
        name: format!("random-finite-{d_system}x{d_apparatus}-seed{seed}"),
        tau: 1.0,
        t0: 0.0,
        kind: ModelKind::Finite(fm),
        pvm: None,
        meter: None,
        notes: vec![],
    };
    model.validate()?;
    Ok(model)
}

/// Conditional-rotation measurement (CNOT-style): `H_S = H_A = 0`,
/// `V = (π/2τ)·|1⟩⟨1|⊗σ_y` rotates the apparatus qubit to `|1⟩` exactly
/// when the system is `|1⟩`; computational meter. `P_error = 0` at `τ`.
pub fn conditional_rotation_model(tau: f64) -> Result<Model> {
    if !(tau > 0.0) {
        return Err(Error::Argument("τ must be positive".into()));
    }
    let gamma = std::f64::consts::FRAC_PI_2 / tau;
    let mut proj1 = linalg::zeros(2, 2);
    proj1[[1, 1]] = C64::ONE;
    let v = linalg::tensor(&(proj1 * C64::new(gamma, 0.0)), &linalg::pauli_y())?;
    let sigma0 = QuantumState::basis(CompositeSpace::single(2)?, 0)?;
    let fm = FiniteModel::new(linalg::zeros(2, 2), linalg::zeros(2, 2), v, sigma0)?;
    let meter = Meter::Povm(Pvm::computational(2).projectors);
    let model = Model {
        name: "conditional-rotation".into(),
        tau,
        t0: 0.0,
        kind: ModelKind::Finite(fm),
        pvm: Some(Pvm::computational(2)),
        meter: Some(meter),
        notes: vec![],
    };
    model.validate()?;
    Ok(model)
}

/// Exactly measuring N-outcome model: the joint propagator at `τ` is the
/// conditional shift `Σ_k |k⟩⟨k| ⊗ X^k`; its principal logarithm defines
/// the (time-independent) Hamiltonian, all of it interaction.
pub fn conditional_shift_model(n: usize, tau: f64) -> Result<Model> {
    if n < 2 {
        return Err(Error::Argument("need at least 2 outcomes".into()));
    }
    if n * n > 64 {
        return Err(Error::Capacity(format!("dimension {} exceeds 64", n * n)));
    }
    if !(tau > 0.0) {
        return Err(Error::Argument("τ must be positive".into()));
    }
    // eigenvectors |k⟩ ⊗ |f_j⟩ with f_j the Fourier vectors of the shift;
    // X f_j = e^{−2πij/n} f_j, so U has eigenphase −2πjk/n, wrapped to
    // (−π, π] for the principal log
    let d = n * n;
    let mut h: CMat = Array2::zeros((d, d));
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        for j in 0..n {
            let m = (j * k) % n;
            let wrapped = if 2 * m > n { m as i64 - n as i64 } else { m as i64 };
            let theta = 2.0 * std::f64::consts::PI * wrapped as f64 / n as f64;
            let lambda = theta / tau;
            if lambda == 0.0 {
                continue;
            }
            // |k, f_j⟩
            let mut vec = vec![C64::ZERO; d];
            for a in 0..n {
                let phase = 2.0 * std::f64::consts::PI * (j * a) as f64 / n as f64;
                vec[k * n + a] = C64::from_polar(inv_sqrt_n, phase);
            }
            for r in 0..d {
                for c in 0..d {
                    h[[r, c]] += C64::new(lambda, 0.0) * vec[r] * vec[c].conj();
                }
            }
        }
    }
    let sigma0 = QuantumState::basis(CompositeSpace::single(n)?, 0)?;
    let fm = FiniteModel::new(linalg::zeros(n, n), linalg::zeros(n, n), h, sigma0)?;
    let meter = Meter::Povm(Pvm::computational(n).projectors);
    let model = Model {
        name: format!("conditional-shift-{n}"),
        tau,
        t0: 0.0,
        kind: ModelKind::Finite(fm),
        pvm: Some(Pvm::computational(n)),
        meter: Some(meter),
        notes: vec![],
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, operator_norm};

    #[test]
    fn random_model_is_reproducible_and_normalized() {
        let a = random_finite_model(2, 3, 77).unwrap();
        let b = random_finite_model(2, 3, 77).unwrap();
        let (fa, fb) = (a.as_finite().unwrap(), b.as_finite().unwrap());
        assert_eq!(max_abs_diff(&fa.v, &fb.v), 0.0);
        assert_eq!(max_abs_diff(&fa.h_system, &fb.h_system), 0.0);
        assert!((operator_norm(&fa.v) - 1.0).abs() < 1e-9);
        assert!(linalg::hermiticity_residual(&fa.v) < 1e-12);
    }

    #[test]
    fn random_model_rejects_oversize() {
        assert!(matches!(
            random_finite_model(8, 9, 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn conditional_rotation_measures_perfectly_at_tau() {
        let m = conditional_rotation_model(1.0).unwrap();
        let fm = m.as_finite().unwrap();
        // |1⟩ input: apparatus rotates to |1⟩
        let sys1 = QuantumState::basis(CompositeSpace::single(2).unwrap(), 1).unwrap();
        let joint = fm.joint_state(&sys1).unwrap();
        let out = fm.propagate(&joint, m.tau).unwrap();
        let app = out.partial_trace(&[1]).unwrap();
        let p1 = app.density()[[1, 1]].re;
        assert!((p1 - 1.0).abs() < 1e-12);
        // ‖V‖·τ = π/2 for this device
        assert!((operator_norm(&fm.v) * m.tau - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn conditional_shift_propagator_is_the_shift_gate() {
        let n = 3;
        let m = conditional_shift_model(n, 0.7).unwrap();
        let fm = m.as_finite().unwrap();
        let u = fm.total_decomposition().propagator(m.tau);
        // expected: Σ_k |k⟩⟨k| ⊗ X^k
        let mut expect = linalg::zeros(n * n, n * n);
        for k in 0..n {
            for a in 0..n {
                expect[[k * n + (a + k) % n, k * n + a]] = C64::ONE;
            }
        }
        assert!(max_abs_diff(&u, &expect) < 1e-9);
    }

    #[test]
    fn conditional_shift_measures_every_basis_state() {
        let n = 4;
        let m = conditional_shift_model(n, 1.0).unwrap();
        let fm = m.as_finite().unwrap();
        for k in 0..n {
            let sys = QuantumState::basis(CompositeSpace::single(n).unwrap(), k).unwrap();
            let joint = fm.joint_state(&sys).unwrap();
            let out = fm.propagate(&joint, m.tau).unwrap();
            let app = out.partial_trace(&[1]).unwrap();
            let pk = app.density()[[k, k]].re;
            assert!((pk - 1.0).abs() < 1e-10, "outcome {k}: {pk}");
        }
    }
}
