//! Dense complex linear algebra: Kronecker products, Hermitian
//! eigendecomposition, operator norms, spectral matrix functions, and
//! seeded random ensembles.
//!
//! Matrices are plain `ndarray::Array2<Complex64>` throughout; everything
//! here is a free function so callers can stay in `ndarray` idiom.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::{Rng, RngExt};

use crate::{Error, Result, MAX_TOTAL_DIM};

pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn zeros(n: usize, m: usize) -> CMat {
    Array2::zeros((n, m))
}

pub fn pauli_x() -> CMat {
    ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]
}

pub fn pauli_y() -> CMat {
    ndarray::array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]
}

/// `σ_z = |1⟩⟨1| − |0⟩⟨0|`: the basis state `|0⟩` carries eigenvalue −1.
pub fn pauli_z() -> CMat {
    ndarray::array![[c(-1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    let mut out = Array2::zeros((a.ncols(), a.nrows()));
    for ((i, j), v) in a.indexed_iter() {
        out[[j, i]] = v.conj();
    }
    out
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Hermiticity residual `‖A − A†‖_F / max(1, ‖A‖_F)`.
pub fn hermiticity_residual(a: &CMat) -> f64 {
    let mut acc = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let d = a[[i, j]] - a[[j, i]].conj();
            acc += d.norm_sqr();
        }
    }
    acc.sqrt() / frobenius_norm(a).max(1.0)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

pub fn trace(a: &CMat) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[[i, i]]).sum()
}

/// Kronecker product with leg order `(a, b)`.
///
/// Index convention: `(a ⊗ b)[i·n+k, j·n+l] = a[i,j]·b[k,l]` for `b`
/// of size `n`.
pub fn tensor(a: &CMat, b: &CMat) -> Result<CMat> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_TOTAL_DIM && c <= MAX_TOTAL_DIM => (r, c),
        _ => {
            return Err(Error::Capacity(format!(
                "tensor product {}x{} ⊗ {}x{} exceeds max dimension {}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                MAX_TOTAL_DIM
            )))
        }
    };
    let mut out = Array2::zeros((rows, cols));
    let (bn, bm) = (b.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let aij = a[[i, j]];
            if aij == C64::ZERO {
                continue;
            }
            for k in 0..bn {
                for l in 0..bm {
                    out[[i * bn + k, j * bm + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a chain of factors, left to right.
pub fn tensor_chain(factors: &[&CMat]) -> Result<CMat> {
    let mut acc = identity(1);
    for f in factors {
        acc = tensor(&acc, f)?;
    }
    Ok(acc)
}

/// Eigenvalue/eigenvector pair set of a Hermitian matrix.
///
/// Eigenvalues ascending; eigenvectors are the matching orthonormal
/// columns. Reconstruction satisfies `‖H − UΛU†‖ ≤ 1e−9·‖H‖`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl SpectralDecomposition {
    /// `U f(Λ) U†` for a complex-valued scalar function of the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMat {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let flam = f(lam);
            for i in 0..n {
                scaled[[i, k]] *= flam;
            }
        }
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::ZERO;
                for k in 0..n {
                    acc += scaled[[i, k]] * u[[j, k]].conj();
                }
                out[[i, j]] = acc;
            }
        }
        out
    }

    /// Unitary `e^{−iHt}`.
    pub fn propagator(&self, t: f64) -> CMat {
        self.map(|lam| (-C64::i() * lam * t).exp())
    }

    pub fn reconstruct(&self) -> CMat {
        self.map(|lam| C64::new(lam, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Errors if the input is not square or not Hermitian within `1e−9`.
pub fn eigh(h: &CMat) -> Result<SpectralDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::Argument(format!(
            "eigh requires a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let res = hermiticity_residual(h);
    if res > 1e-9 {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: residual {res:.3e}"
        )));
    }
    Ok(eigh_unchecked(h))
}

/// Jacobi sweep implementation; assumes hermiticity.
pub(crate) fn eigh_unchecked(h: &CMat) -> SpectralDecomposition {
    let n = h.nrows();
    if n == 0 {
        return SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: Array2::zeros((0, 0)),
        };
    }
    // flat row-major working copies
    let mut a: Vec<C64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // symmetrize away tiny hermiticity noise
            a.push((h[[i, j]] + h[[j, i]].conj()) * 0.5);
        }
    }
    let mut v: Vec<C64> = vec![C64::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = C64::ONE;
    }

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return SpectralDecomposition {
            eigenvalues: vec![0.0; n],
            eigenvectors: Array2::from_shape_vec((n, n), v).unwrap(),
        };
    }
    let tol = 1e-15 * scale;
    let max_sweeps = 64;

    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= tol * 1e-2 / (n as f64) {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                // U restricted to (p,q): [[c, s],[−s·e^{−iφ}, c·e^{−iφ}]]
                let upp = C64::new(cth, 0.0);
                let upq = C64::new(sth, 0.0);
                let uqp = -phase.conj() * sth;
                let uqq = phase.conj() * cth;

                // A ← A·U on columns p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * upp + akq * uqp;
                    a[k * n + q] = akp * upq + akq * uqq;
                }
                // A ← U†·A on rows p, q
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                    a[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                // V ← V·U
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * upp + vkq * uqp;
                    v[k * n + q] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[[row, col]] = v[row * n + src];
        }
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Largest singular value.
///
/// Hermitian inputs take the direct `max |λ|` route; general matrices go
/// through the Gram matrix.
pub fn operator_norm(a: &CMat) -> f64 {
    if a.nrows() == a.ncols() && hermiticity_residual(a) <= 1e-12 {
        return eigh_unchecked(a)
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &l| m.max(l.abs()));
    }
    let (n, m) = (a.nrows(), a.ncols());
    let gram = if m <= n {
        dagger(a).dot(a)
    } else {
        a.dot(&dagger(a))
    };
    eigh_unchecked(&gram)
        .eigenvalues
        .iter()
        .fold(0.0f64, |mx, &l| mx.max(l))
        .max(0.0)
        .sqrt()
}

/// `f(H)` for Hermitian `H` via the spectral decomposition.
pub fn hermitian_map(h: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    Ok(eigh(h)?.map(|lam| C64::new(f(lam), 0.0)))
}

/// Square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[−1e−10, 0)` are clamped to zero; more negative ones
/// are a validation error.
pub fn sqrt_psd(h: &CMat) -> Result<CMat> {
    let dec = eigh(h)?;
    if let Some(&lam) = dec
        .eigenvalues
        .iter()
        .find(|&&lam| lam < -1e-10 * dec.eigenvalues.last().unwrap().abs().max(1.0))
    {
        return Err(Error::Validation(format!(
            "matrix is not positive semidefinite: eigenvalue {lam:.3e}"
        )));
    }
    Ok(dec.map(|lam| C64::new(lam.max(0.0).sqrt(), 0.0)))
}

/// Orthonormal Hermitian basis of `d×d` matrices under `tr(A†B)`:
/// diagonal units, then symmetric and antisymmetric pair combinations.
/// Linearity over this basis replaces "for all states ρ".
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = zeros(d, d);
        m[[i, i]] = C64::ONE;
        out.push(m);
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut m = zeros(d, d);
            m[[i, j]] = C64::new(inv_sqrt2, 0.0);
            m[[j, i]] = C64::new(inv_sqrt2, 0.0);
            out.push(m);
            let mut m = zeros(d, d);
            m[[i, j]] = C64::new(0.0, -inv_sqrt2);
            m[[j, i]] = C64::new(0.0, inv_sqrt2);
            out.push(m);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// seeded random ensembles

/// Standard normal via Box-Muller.
pub fn sample_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn sample_complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(sample_normal(rng), sample_normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix: i.i.d. standard complex normal entries.
pub fn random_matrix<R: Rng>(n: usize, m: usize, rng: &mut R) -> CMat {
    Array2::from_shape_fn((n, m), |_| sample_complex_normal(rng))
}

/// GUE-style random Hermitian matrix, normalized to unit operator norm.
pub fn random_hermitian_unit<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = random_matrix(n, n, rng);
    let h = (&g + &dagger(&g)) * c(0.5, 0.0);
    let norm = operator_norm(&h);
    if norm == 0.0 {
        h
    } else {
        h * c(1.0 / norm, 0.0)
    }
}

/// Haar-distributed unitary via Gram-Schmidt of a Ginibre matrix with
/// phase-fixed diagonal.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = random_matrix(n, n, rng);
    let mut q: Vec<CVec> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col: CVec = g.column(j).to_owned();
        for prev in &q {
            let overlap: C64 = prev.iter().zip(col.iter()).map(|(p, x)| p.conj() * x).sum();
            col = &col - &(prev * overlap);
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let rjj: C64 = g
            .column(j)
            .iter()
            .zip(col.iter())
            .map(|(x, e)| e.conj() * x)
            .sum();
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::ONE
        };
        q.push(col * (phase.conj() / norm));
    }
    let mut out = Array2::zeros((n, n));
    for (j, col) in q.iter().enumerate() {
        for i in 0..n {
            out[[i, j]] = col[i];
        }
    }
    out
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> CVec {
    let v = Array1::from_shape_fn(n, |_| sample_complex_normal(rng));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v / c(norm, 0.0)
}

/// Random full-rank density matrix `GG†/tr`.
pub fn random_density_matrix<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = random_matrix(n, n, rng);
    let m = g.dot(&dagger(&g));
    let tr = trace(&m).re;
    m * c(1.0 / tr, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn tensor_identity_case() {
        let i2 = identity(2);
        let i4 = tensor(&i2, &i2).unwrap();
        assert_eq!(max_abs_diff(&i4, &identity(4)), 0.0);
    }

    #[test]
    fn tensor_sign_bookkeeping() {
        // σ_z ⊗ σ_z on |01⟩ (leg order: first factor is the slow index)
        let zz = tensor(&pauli_z(), &pauli_z()).unwrap();
        let mut ket01: CVec = Array1::zeros(4);
        ket01[1] = C64::ONE; // |0⟩⊗|1⟩ → index 0·2+1
        let out = zz.dot(&ket01);
        assert!((out[1] + C64::ONE).norm() < 1e-15);
        assert!(out.iter().enumerate().all(|(i, z)| i == 1 || z.norm() == 0.0));
    }

    #[test]
    fn tensor_matches_index_formula() {
        // brute-force oracle: (a⊗b)[i·n+k, j·n+l] = a[i,j]·b[k,l]
        let a = pauli_x();
        let b = ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(2., 0.)]];
        let t = tensor(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expect = a[[i, j]] * b[[k, l]];
                        assert_eq!(t[[i * 2 + k, j * 2 + l]], expect);
                    }
                }
            }
        }
        // spot value against the index formula
        assert_eq!(t[[1, 2 + 1]], c(2., 0.));
    }

    #[test]
    fn tensor_capacity_error() {
        let big = identity(100);
        let err = tensor(&big, &identity(64)).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let mut r = rng(7);
        for n in [1usize, 2, 3, 5, 8, 16, 33] {
            let h = random_hermitian_unit(n, &mut r);
            let dec = eigh(&h).unwrap();
            let rec = dec.reconstruct();
            let scale = frobenius_norm(&h).max(1e-30);
            assert!(
                frobenius_norm(&(&rec - &h)) <= 1e-9 * scale,
                "reconstruction failed at n={n}"
            );
            // ascending
            assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            // orthonormal columns
            let gram = dagger(&dec.eigenvectors).dot(&dec.eigenvectors);
            assert!(max_abs_diff(&gram, &identity(n)) < 1e-12);
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut r = rng(3);
        let g = random_matrix(3, 3, &mut r);
        assert!(matches!(eigh(&g), Err(Error::Validation(_))));
    }

    #[test]
    fn operator_norm_cases() {
        assert!((operator_norm(&pauli_z()) - 1.0).abs() < 1e-12);
        assert_eq!(operator_norm(&zeros(3, 3)), 0.0);
        // ‖σ_x + σ_z‖ = √2: eigenvalues ±√2
        let m = pauli_x() + pauli_z();
        assert!((operator_norm(&m) - 2f64.sqrt()).abs() < 1e-9 * 2f64.sqrt());
    }

    #[test]
    fn operator_norm_general_matrix() {
        let mut r = rng(11);
        let a = random_matrix(5, 3, &mut r);
        // oracle: power iteration on A†A
        let g = dagger(&a).dot(&a);
        let mut v = random_unit_vector(3, &mut r);
        for _ in 0..2000 {
            let w = g.dot(&v);
            let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w / c(n, 0.0);
        }
        let lam = v
            .iter()
            .zip(g.dot(&v).iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            .re;
        assert!((operator_norm(&a) - lam.sqrt()).abs() < 1e-8 * lam.sqrt());
    }

    #[test]
    fn propagator_is_unitary() {
        let mut r = rng(5);
        let h = random_hermitian_unit(6, &mut r);
        let u = eigh(&h).unwrap().propagator(0.7);
        assert!(max_abs_diff(&dagger(&u).dot(&u), &identity(6)) < 1e-12);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut r = rng(9);
        let u = random_unitary(7, &mut r);
        assert!(max_abs_diff(&dagger(&u).dot(&u), &identity(7)) < 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut r = rng(13);
        let rho = random_density_matrix(5, &mut r);
        let s = sqrt_psd(&rho).unwrap();
        assert!(frobenius_norm(&(&s.dot(&s) - &rho)) < 1e-10);
    }

    #[test]
    fn seeded_ensembles_reproduce() {
        let a = random_hermitian_unit(4, &mut rng(42));
        let b = random_hermitian_unit(4, &mut rng(42));
        assert_eq!(max_abs_diff(&a, &b), 0.0);
    }
}
