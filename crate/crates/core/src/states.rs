//! Quantum states on ordered tensor-factor spaces.
//!
//! Leg-order convention: system leg at index 0, apparatus legs after it,
//! purification legs appended last. Row-major index layout, leg 0 slowest,
//! matching [`crate::linalg::tensor`].

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::linalg::{self, CMat, CVec};
use crate::{Error, Result, MAX_TOTAL_DIM};

/// Ordered tensor-factor bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    leg_dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(leg_dims: Vec<usize>) -> Result<Self> {
        if leg_dims.is_empty() || leg_dims.contains(&0) {
            return Err(Error::Argument(
                "leg dimensions must be positive and nonempty".into(),
            ));
        }
        let total: usize = leg_dims.iter().product();
        if total > MAX_TOTAL_DIM {
            return Err(Error::Capacity(format!(
                "total dimension {total} exceeds cap {MAX_TOTAL_DIM}"
            )));
        }
        Ok(Self { leg_dims })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn leg_dims(&self) -> &[usize] {
        &self.leg_dims
    }

    pub fn n_legs(&self) -> usize {
        self.leg_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.leg_dims.iter().product()
    }

    /// Row-major stride of a leg (leg 0 slowest).
    fn stride(&self, leg: usize) -> usize {
        self.leg_dims[leg + 1..].iter().product()
    }

    /// Embed an operator acting on one leg, identity elsewhere.
    pub fn op_on_leg(&self, op: &CMat, leg: usize) -> Result<CMat> {
        if leg >= self.n_legs() {
            return Err(Error::Argument(format!("leg {leg} out of range")));
        }
        if op.nrows() != self.leg_dims[leg] || op.ncols() != self.leg_dims[leg] {
            return Err(Error::Argument(format!(
                "operator is {}x{} but leg {leg} has dimension {}",
                op.nrows(),
                op.ncols(),
                self.leg_dims[leg]
            )));
        }
        let left: usize = self.leg_dims[..leg].iter().product();
        let right: usize = self.leg_dims[leg + 1..].iter().product();
        let a = linalg::tensor(&linalg::identity(left), op)?;
        linalg::tensor(&a, &linalg::identity(right))
    }

    /// Embed an operator on a contiguous run of legs starting at `first`.
    pub fn op_on_legs(&self, op: &CMat, first: usize, count: usize) -> Result<CMat> {
        if first + count > self.n_legs() || count == 0 {
            return Err(Error::Argument("leg range out of bounds".into()));
        }
        let block: usize = self.leg_dims[first..first + count].iter().product();
        if op.nrows() != block || op.ncols() != block {
            return Err(Error::Argument(format!(
                "operator dimension {} does not match leg block {}",
                op.nrows(),
                block
            )));
        }
        let left: usize = self.leg_dims[..first].iter().product();
        let right: usize = self.leg_dims[first + count..].iter().product();
        let a = linalg::tensor(&linalg::identity(left), op)?;
        linalg::tensor(&a, &linalg::identity(right))
    }
}

#[derive(Debug, Clone)]
pub enum StateKind {
    Pure(CVec),
    Mixed(CMat),
}

/// A pure vector or density operator on a [`CompositeSpace`].
#[derive(Debug, Clone)]
pub struct QuantumState {
    pub space: CompositeSpace,
    pub kind: StateKind,
}

impl QuantumState {
    /// Pure state; the vector must be normalized within `1e−12`.
    pub fn pure(space: CompositeSpace, vector: CVec) -> Result<Self> {
        if vector.len() != space.total_dim() {
            return Err(Error::Argument(format!(
                "vector length {} does not match space dimension {}",
                vector.len(),
                space.total_dim()
            )));
        }
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "pure state norm {norm} deviates from 1 beyond 1e-12"
            )));
        }
        Ok(Self {
            space,
            kind: StateKind::Pure(vector),
        })
    }

    /// Pure state from an unnormalized vector.
    pub fn pure_normalized(space: CompositeSpace, vector: CVec) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Argument("cannot normalize the zero vector".into()));
        }
        Self::pure(space, vector / C64::new(norm, 0.0))
    }

    /// Mixed state; Hermitian within `1e−12`, eigenvalues `≥ −1e−12`,
    /// unit trace within `1e−12`.
    pub fn mixed(space: CompositeSpace, rho: CMat) -> Result<Self> {
        let d = space.total_dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Argument(format!(
                "density matrix is {}x{}, space dimension is {d}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        if linalg::hermiticity_residual(&rho) > 1e-12 {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let tr = linalg::trace(&rho).re;
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "density matrix trace {tr} deviates from 1"
            )));
        }
        let min_eig = linalg::eigh(&rho)?
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -1e-12 {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self {
            space,
            kind: StateKind::Mixed(rho),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(space: CompositeSpace, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(Error::Argument(format!("basis index {index} out of range")));
        }
        let mut v: CVec = Array1::zeros(d);
        v[index] = C64::ONE;
        Self::pure(space, v)
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, StateKind::Pure(_))
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Density operator representation.
    pub fn density(&self) -> CMat {
        match &self.kind {
            StateKind::Pure(v) => {
                let n = v.len();
                Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
            }
            StateKind::Mixed(rho) => rho.clone(),
        }
    }

    /// `tr(ρ A)` / `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, op: &CMat) -> C64 {
        match &self.kind {
            StateKind::Pure(v) => {
                let av = op.dot(v);
                v.iter().zip(av.iter()).map(|(x, y)| x.conj() * y).sum()
            }
            StateKind::Mixed(rho) => linalg::trace(&op.dot(rho)),
        }
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        match &self.kind {
            StateKind::Pure(_) => 1.0,
            StateKind::Mixed(rho) => linalg::trace(&rho.dot(rho)).re,
        }
    }

    /// Trace out every leg not listed in `keep`; kept legs stay in their
    /// original relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QuantumState> {
        let n_legs = self.space.n_legs();
        if keep.is_empty() {
            return Err(Error::Argument("keep set must be nonempty".into()));
        }
        let mut keep_sorted: Vec<usize> = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.iter().any(|&l| l >= n_legs) {
            return Err(Error::Argument("keep leg index out of range".into()));
        }
        let traced: Vec<usize> = (0..n_legs).filter(|l| !keep_sorted.contains(l)).collect();
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&l| self.space.leg_dims()[l]).collect();
        let out_space = CompositeSpace::new(kept_dims.clone())?;
        let d_keep = out_space.total_dim();
        let d_traced: usize = traced.iter().map(|&l| self.space.leg_dims()[l]).collect::<Vec<_>>().iter().product();

        // map (kept multi-index, traced multi-index) -> full flat index
        let full_index = |ik: usize, it: usize| -> usize {
            let mut idx = 0usize;
            let mut rk = ik;
            // kept legs, slowest first
            let mut kept_parts = vec![0usize; keep_sorted.len()];
            for (pos, &leg) in keep_sorted.iter().enumerate().rev() {
                let dim = self.space.leg_dims()[leg];
                kept_parts[pos] = rk % dim;
                rk /= dim;
            }
            let mut rt = it;
            let mut traced_parts = vec![0usize; traced.len()];
            for (pos, &leg) in traced.iter().enumerate().rev() {
                let dim = self.space.leg_dims()[leg];
                traced_parts[pos] = rt % dim;
                rt /= dim;
            }
            for (pos, &leg) in keep_sorted.iter().enumerate() {
                idx += kept_parts[pos] * self.space.stride(leg);
            }
            for (pos, &leg) in traced.iter().enumerate() {
                idx += traced_parts[pos] * self.space.stride(leg);
            }
            idx
        };

        let mut out: CMat = Array2::zeros((d_keep, d_keep));
        match &self.kind {
            StateKind::Pure(v) => {
                for i in 0..d_keep {
                    for j in 0..=i {
                        let mut acc = C64::ZERO;
                        for k in 0..d_traced {
                            acc += v[full_index(i, k)] * v[full_index(j, k)].conj();
                        }
                        out[[i, j]] = acc;
                        out[[j, i]] = acc.conj();
                    }
                }
            }
            StateKind::Mixed(rho) => {
                for i in 0..d_keep {
                    for j in 0..=i {
                        let mut acc = C64::ZERO;
                        for k in 0..d_traced {
                            acc += rho[[full_index(i, k), full_index(j, k)]];
                        }
                        out[[i, j]] = acc;
                        out[[j, i]] = acc.conj();
                    }
                }
            }
        }
        // exact hermitization above; renormalize trace rounding
        let tr = linalg::trace(&out).re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Tolerance(format!(
                "partial trace lost normalization: trace {tr}"
            )));
        }
        let out = out * C64::new(1.0 / tr, 0.0);
        QuantumState::mixed(out_space, out)
    }

    /// Standard purification on a doubled space: one auxiliary leg of the
    /// full original dimension is appended last.
    pub fn purify(&self) -> Result<QuantumState> {
        let d = self.total_dim();
        let mut legs = self.space.leg_dims().to_vec();
        legs.push(d);
        let out_space = CompositeSpace::new(legs)?;
        let rho = self.density();
        let dec = linalg::eigh(&rho)?;
        let mut v: CVec = Array1::zeros(d * d);
        for (k, &lam) in dec.eigenvalues.iter().enumerate() {
            let w = lam.max(0.0).sqrt();
            if w == 0.0 {
                continue;
            }
            // |Ψ⟩ += √λ_k |u_k⟩ ⊗ |k⟩
            for i in 0..d {
                v[i * d + k] += dec.eigenvectors[[i, k]] * w;
            }
        }
        QuantumState::pure_normalized(out_space, v)
    }

    /// Unitary evolution `e^{−iHt} ρ e^{iHt}` via the spectral
    /// decomposition of `H`.
    pub fn evolve_exact(&self, h: &CMat, t: f64) -> Result<QuantumState> {
        let d = self.total_dim();
        if h.nrows() != d || h.ncols() != d {
            return Err(Error::Argument(format!(
                "Hamiltonian is {}x{}, state dimension is {d}",
                h.nrows(),
                h.ncols()
            )));
        }
        if linalg::hermiticity_residual(h) > 1e-9 {
            return Err(Error::Validation(
                "Hamiltonian is not Hermitian within 1e-9".into(),
            ));
        }
        let u = linalg::eigh_unchecked(h).propagator(t);
        self.apply_unitary(&u)
    }

    /// Apply a precomputed unitary.
    pub fn apply_unitary(&self, u: &CMat) -> Result<QuantumState> {
        match &self.kind {
            StateKind::Pure(v) => {
                QuantumState::pure_normalized(self.space.clone(), u.dot(v))
            }
            StateKind::Mixed(rho) => {
                let out = u.dot(rho).dot(&linalg::dagger(u));
                // hermitize rounding noise before validation
                let out = (&out + &linalg::dagger(&out)) * C64::new(0.5, 0.0);
                let tr = linalg::trace(&out).re;
                QuantumState::mixed(self.space.clone(), out * C64::new(1.0 / tr, 0.0))
            }
        }
    }
}
