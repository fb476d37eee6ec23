//! Finite spin chains with nearest-neighbor interactions: box
//! Hamiltonians, Heisenberg locality error against the full chain, and
//! box-energy fluctuations.
//!
//! The full finite chain stands in for the infinite volume; every
//! statement here is a finite-size trend, not a limit.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMat, CVec};
use crate::metrics;
use crate::states::{CompositeSpace, QuantumState};
use crate::{Error, Result};

pub const MAX_SITES: usize = 12;

/// Qubit chain with on-site terms and nearest-neighbor bonds.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    /// On-site 2×2 Hermitian terms, one per site.
    pub on_site: Vec<CMat>,
    /// Nearest-neighbor 4×4 Hermitian bonds, `bonds[x]` acting on
    /// `(x, x+1)`.
    pub bonds: Vec<CMat>,
    /// Declared bound `J` on the bond operator norms.
    pub coupling_bound: f64,
}

impl ChainSpec {
    pub fn new(on_site: Vec<CMat>, bonds: Vec<CMat>, coupling_bound: f64) -> Result<Self> {
        let l = on_site.len();
        if l == 0 || l > MAX_SITES {
            return Err(Error::Capacity(format!(
                "chain length {l} outside 1..={MAX_SITES}"
            )));
        }
        if bonds.len() + 1 != l {
            return Err(Error::Argument(format!(
                "{} bonds do not fit {l} sites",
                bonds.len()
            )));
        }
        for h in &on_site {
            if h.nrows() != 2 || linalg::hermiticity_residual(h) > 1e-9 {
                return Err(Error::Validation("on-site term invalid".into()));
            }
        }
        for phi in &bonds {
            if phi.nrows() != 4 || linalg::hermiticity_residual(phi) > 1e-9 {
                return Err(Error::Validation("bond term invalid".into()));
            }
            if linalg::operator_norm(phi) > coupling_bound + 1e-9 {
                return Err(Error::Validation(format!(
                    "bond norm exceeds the declared bound {coupling_bound}"
                )));
            }
        }
        Ok(Self {
            on_site,
            bonds,
            coupling_bound,
        })
    }

    pub fn len(&self) -> usize {
        self.on_site.len()
    }

    pub fn is_empty(&self) -> bool {
        self.on_site.is_empty()
    }

    pub fn space(&self) -> Result<CompositeSpace> {
        CompositeSpace::new(vec![2; self.len()])
    }
}

/// Random chain with unit-norm on-site terms and bond norms ≤ `j`.
pub fn random_chain(l: usize, j: f64, seed: u64) -> Result<ChainSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_site = (0..l)
        .map(|_| linalg::random_hermitian_unit(2, &mut rng))
        .collect();
    let bonds = (0..l.saturating_sub(1))
        .map(|_| linalg::random_hermitian_unit(4, &mut rng) * C64::new(j, 0.0))
        .collect();
    ChainSpec::new(on_site, bonds, j)
}

/// Box Hamiltonian on the block Hilbert space of a contiguous interval
/// `[lo, hi)`: on-site terms plus bonds interior to the interval.
pub fn box_hamiltonian_block(chain: &ChainSpec, lo: usize, hi: usize) -> Result<CMat> {
    if lo >= hi || hi > chain.len() {
        return Err(Error::Argument(format!(
            "invalid interval [{lo}, {hi}) on {} sites",
            chain.len()
        )));
    }
    let width = hi - lo;
    let block = CompositeSpace::new(vec![2; width])?;
    let mut h = linalg::zeros(1 << width, 1 << width);
    for (pos, x) in (lo..hi).enumerate() {
        h = h + block.op_on_leg(&chain.on_site[x], pos)?;
    }
    for (pos, x) in (lo..hi.saturating_sub(1)).enumerate() {
        if x + 1 < hi {
            h = h + block.op_on_legs(&chain.bonds[x], pos, 2)?;
        }
    }
    Ok(h)
}

/// Box Hamiltonian embedded on the full chain space with identities
/// outside the interval.
pub fn box_hamiltonian(chain: &ChainSpec, lo: usize, hi: usize) -> Result<CMat> {
    let block = box_hamiltonian_block(chain, lo, hi)?;
    chain.space()?.op_on_legs(&block, lo, hi - lo)
}

/// `‖α_t(A) − α_t^Λ(A)‖` for an observable `a` at site 0, with
/// `Λ = [0, radius]` (sites `0..=radius`).
pub fn locality_error(chain: &ChainSpec, a: &CMat, t: f64, radius: usize) -> Result<f64> {
    if chain.len() > MAX_SITES {
        return Err(Error::Capacity(format!(
            "chain length {} exceeds {MAX_SITES}",
            chain.len()
        )));
    }
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::Argument("observable must act on one site".into()));
    }
    if radius + 1 > chain.len() {
        return Err(Error::Argument("box radius exceeds the chain".into()));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let space = chain.space()?;
    let l = chain.len();

    // full-chain Heisenberg evolution
    let h_full = box_hamiltonian_block(chain, 0, l)?;
    let full_dec = linalg::eigh_unchecked(&h_full);
    let u_full = full_dec.propagator(t);
    let a_emb = space.op_on_leg(a, 0)?;
    let evolved_full = linalg::dagger(&u_full).dot(&a_emb).dot(&u_full);

    // box evolution inside the block, identity outside
    let width = radius + 1;
    let h_box = box_hamiltonian_block(chain, 0, width)?;
    let box_dec = linalg::eigh_unchecked(&h_box);
    let u_box = box_dec.propagator(t);
    let block = CompositeSpace::new(vec![2; width])?;
    let a_block = block.op_on_leg(a, 0)?;
    let evolved_block = linalg::dagger(&u_box).dot(&a_block).dot(&u_box);
    let evolved_box = space.op_on_legs(&evolved_block, 0, width)?;

    let diff = evolved_full - evolved_box;
    Ok(linalg::operator_norm(&diff))
}

/// `ΔH_Λ` in a product state over the chain, evaluated on the block.
pub fn box_energy_fluctuation(
    chain: &ChainSpec,
    lo: usize,
    hi: usize,
    site_states: &[CVec],
) -> Result<f64> {
    if site_states.len() != chain.len() {
        return Err(Error::Argument("one state per site required".into()));
    }
    let h_block = box_hamiltonian_block(chain, lo, hi)?;
    let mut v: CVec = Array1::from_elem(1, C64::ONE);
    for s in &site_states[lo..hi] {
        if s.len() != 2 {
            return Err(Error::Argument("site states must be qubits".into()));
        }
        let mut out = Array1::zeros(v.len() * 2);
        for (i, a) in v.iter().enumerate() {
            out[i * 2] = a * s[0];
            out[i * 2 + 1] = a * s[1];
        }
        v = out;
    }
    let block = CompositeSpace::new(vec![2; hi - lo])?;
    let state = QuantumState::pure_normalized(block, v)?;
    metrics::energy_fluctuation(&h_block, &state)
}

/// Bures-angle triangle inequality over random state triples.
pub fn rastegin_check(trials: usize, d: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = CompositeSpace::single(d)?;
    for _ in 0..trials {
        let a = QuantumState::mixed(space.clone(), linalg::random_density_matrix(d, &mut rng))?;
        let b = QuantumState::mixed(space.clone(), linalg::random_density_matrix(d, &mut rng))?;
        let s = QuantumState::mixed(space.clone(), linalg::random_density_matrix(d, &mut rng))?;
        let ab = metrics::bures_angle(&a, &b)?;
        let asig = metrics::bures_angle(&a, &s)?;
        let bsig = metrics::bures_angle(&b, &s)?;
        if ab > asig + bsig + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
