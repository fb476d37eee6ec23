//! Discretized 1D/2D continuum spaces: periodic grids, wavefunctions with
//! an optional qubit leg, spectral translation, and split-operator
//! propagation for the declared Hamiltonian classes.

mod bump;
mod fft;
mod split;

pub use bump::{composite_gl8, Bump};
pub use fft::FftEngine;
pub use split::{split_step_evolve, GridHamiltonian, SplitStepper};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Periodic uniform grid on `[x_min, x_max)` with a power-of-two point
/// count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridSpec {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Argument(format!(
                "grid size {n} must be a power of two ≥ 16"
            )));
        }
        if !(x_max > x_min) {
            return Err(Error::Argument("x_max must exceed x_min".into()));
        }
        Ok(Self { n, x_min, x_max })
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    /// Sample point of bin `i`. Samples sit at cell centers, so a
    /// symmetric domain has no point at the origin and even densities
    /// split exactly across half-lines.
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// FFT angular frequency of bin `i` (negative branch folded).
    pub fn freq(&self, i: usize) -> f64 {
        let n = self.n as i64;
        let f = if (i as i64) < n / 2 {
            i as i64
        } else {
            i as i64 - n
        };
        2.0 * std::f64::consts::PI * f as f64 / self.length()
    }

    /// Largest resolvable |k|.
    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }
}

/// Wavefunction on one or two grid axes, with an optional qubit leg.
///
/// Components are stored as `(n_x, n_z)` arrays (`n_z = 1` for 1D). With a
/// qubit leg, component 0 is the `|0⟩` branch (σ_z eigenvalue −1) and
/// component 1 the `|1⟩` branch (+1).
#[derive(Debug, Clone)]
pub struct WaveFunction {
    pub axes: Vec<GridSpec>,
    pub comps: Vec<Array2<C64>>,
}

impl WaveFunction {
    fn check_shapes(axes: &[GridSpec], comps: &[Array2<C64>]) -> Result<()> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Argument("1 or 2 grid axes required".into()));
        }
        if comps.is_empty() || comps.len() > 2 {
            return Err(Error::Argument("1 or 2 components required".into()));
        }
        let nx = axes[0].n;
        let nz = axes.get(1).map_or(1, |g| g.n);
        for c in comps {
            if c.nrows() != nx || c.ncols() != nz {
                return Err(Error::Argument(format!(
                    "component shape {}x{} does not match grid {}x{}",
                    c.nrows(),
                    c.ncols(),
                    nx,
                    nz
                )));
            }
        }
        Ok(())
    }

    /// Build from raw components and normalize.
    pub fn new(axes: Vec<GridSpec>, comps: Vec<Array2<C64>>) -> Result<Self> {
        Self::check_shapes(&axes, &comps)?;
        let mut wf = Self { axes, comps };
        let n2 = wf.norm_sqr();
        if n2 <= 0.0 {
            return Err(Error::Argument("zero wavefunction".into()));
        }
        wf.scale(1.0 / n2.sqrt());
        Ok(wf)
    }

    /// Scalar 1D wavefunction sampled from a closure, normalized.
    pub fn scalar_1d(grid: GridSpec, f: impl Fn(f64) -> C64) -> Result<Self> {
        let a = Array2::from_shape_fn((grid.n, 1), |(i, _)| f(grid.point(i)));
        Self::new(vec![grid], vec![a])
    }

    /// Scalar 2D wavefunction sampled from a closure, normalized.
    pub fn scalar_2d(gx: GridSpec, gz: GridSpec, f: impl Fn(f64, f64) -> C64) -> Result<Self> {
        let a = Array2::from_shape_fn((gx.n, gz.n), |(i, j)| f(gx.point(i), gz.point(j)));
        Self::new(vec![gx, gz], vec![a])
    }

    /// Qubit ⊗ grid state `c0 |0⟩⊗φ + c1 |1⟩⊗φ` with a shared envelope.
    pub fn with_qubit(envelope: &WaveFunction, c0: C64, c1: C64) -> Result<Self> {
        if envelope.comps.len() != 1 {
            return Err(Error::Argument("envelope must be scalar".into()));
        }
        let w = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if w == 0.0 {
            return Err(Error::Argument("zero qubit amplitudes".into()));
        }
        let base = &envelope.comps[0];
        Self::new(
            envelope.axes.clone(),
            vec![base * (c0 / w), base * (c1 / w)],
        )
    }

    pub fn has_qubit_leg(&self) -> bool {
        self.comps.len() == 2
    }

    pub fn n_axes(&self) -> usize {
        self.axes.len()
    }

    /// Volume element.
    pub fn dv(&self) -> f64 {
        self.axes.iter().map(|g| g.dx()).product()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * self.dv()
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.comps {
            c.mapv_inplace(|z| z * s);
        }
    }

    /// `⟨self|other⟩` including the qubit leg.
    pub fn inner(&self, other: &WaveFunction) -> Result<C64> {
        if self.axes != other.axes || self.comps.len() != other.comps.len() {
            return Err(Error::Argument("wavefunction layout mismatch".into()));
        }
        let mut acc = C64::ZERO;
        for (a, b) in self.comps.iter().zip(other.comps.iter()) {
            acc += a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| x.conj() * y)
                .sum::<C64>();
        }
        Ok(acc * self.dv())
    }

    /// Validate the normalization invariant.
    pub fn validate(&self) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "wavefunction norm² = {n2} deviates from 1 beyond 1e-9"
            )));
        }
        Ok(())
    }

    /// Spectrally exact periodic shift along `axis` by `a`.
    pub fn translate(&self, a: f64, axis: usize) -> Result<WaveFunction> {
        if axis >= self.n_axes() {
            return Err(Error::Argument(format!("axis {axis} out of range")));
        }
        let grid = self.axes[axis];
        let mut eng = FftEngine::new();
        let phases: Vec<C64> = (0..grid.n)
            .map(|i| (-C64::i() * grid.freq(i) * a).exp())
            .collect();
        let mut out = self.clone();
        for comp in &mut out.comps {
            eng.fft_axis(comp, axis);
            match axis {
                0 => {
                    for i in 0..comp.nrows() {
                        for j in 0..comp.ncols() {
                            comp[[i, j]] *= phases[i];
                        }
                    }
                }
                _ => {
                    for i in 0..comp.nrows() {
                        for j in 0..comp.ncols() {
                            comp[[i, j]] *= phases[j];
                        }
                    }
                }
            }
            eng.ifft_axis(comp, axis);
        }
        Ok(out)
    }

    /// Probability carried by grid points whose coordinates satisfy the
    /// predicate. The coordinate slice has one entry per axis.
    pub fn region_probability(&self, pred: impl Fn(&[f64]) -> bool) -> f64 {
        let dv = self.dv();
        let mut acc = 0.0;
        let two_d = self.n_axes() == 2;
        for comp in &self.comps {
            for ((i, j), z) in comp.indexed_iter() {
                let x = self.axes[0].point(i);
                let inside = if two_d {
                    pred(&[x, self.axes[1].point(j)])
                } else {
                    pred(&[x])
                };
                if inside {
                    acc += z.norm_sqr();
                }
            }
        }
        acc * dv
    }

    /// `⟨x_axis^p⟩` quadrature over all components.
    pub fn position_moment(&self, axis: usize, power: i32) -> f64 {
        let dv = self.dv();
        let mut acc = 0.0;
        for comp in &self.comps {
            for ((i, j), z) in comp.indexed_iter() {
                let coord = if axis == 0 {
                    self.axes[0].point(i)
                } else {
                    self.axes[1].point(j)
                };
                acc += coord.powi(power) * z.norm_sqr();
            }
        }
        acc * dv
    }

    /// `(⟨k⟩, ⟨k²⟩)` along `axis`, by momentum-space quadrature.
    pub fn momentum_moments(&self, axis: usize) -> Result<(f64, f64)> {
        if axis >= self.n_axes() {
            return Err(Error::Argument(format!("axis {axis} out of range")));
        }
        let grid = self.axes[axis];
        let mut eng = FftEngine::new();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut total = 0.0;
        for comp in &self.comps {
            let mut hat = comp.clone();
            eng.fft_axis(&mut hat, axis);
            for ((i, j), z) in hat.indexed_iter() {
                let k = grid.freq(if axis == 0 { i } else { j });
                let w = z.norm_sqr();
                total += w;
                m1 += k * w;
                m2 += k * k * w;
            }
        }
        Ok((m1 / total, m2 / total))
    }

    /// Probability mass within `margin` of any grid boundary; the run
    /// monitor that certifies periodic wraparound stayed negligible.
    pub fn boundary_mass(&self, margin: f64) -> f64 {
        self.region_probability(|coords| {
            coords.iter().enumerate().any(|(ax, &x)| {
                let g = &self.axes[ax];
                x < g.x_min + margin || x > g.x_max - margin
            })
        })
    }

    /// Fail with a tolerance error if boundary mass exceeds `1e−6`.
    pub fn check_boundary_leakage(&self, margin: f64) -> Result<f64> {
        let leak = self.boundary_mass(margin);
        if leak > 1e-6 {
            return Err(Error::Tolerance(format!(
                "boundary leakage {leak:.3e} exceeds 1e-6 within margin {margin}"
            )));
        }
        Ok(leak)
    }

    /// CSV snapshot `x[,z],Re,Im` per component, suitable for plotting.
    pub fn csv_snapshot(&self) -> String {
        let mut out = String::new();
        if self.n_axes() == 1 {
            out.push('x');
        } else {
            out.push_str("x,z");
        }
        for c in 0..self.comps.len() {
            out.push_str(&format!(",re{c},im{c}"));
        }
        out.push('\n');
        let nz = self.axes.get(1).map_or(1, |g| g.n);
        for i in 0..self.axes[0].n {
            for j in 0..nz {
                let mut row = format!("{:.16e}", self.axes[0].point(i));
                if self.n_axes() == 2 {
                    row.push_str(&format!(",{:.16e}", self.axes[1].point(j)));
                }
                for comp in &self.comps {
                    let z = comp[[i, j]];
                    row.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
                }
                out.push_str(&row);
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_1d(grid: GridSpec, x0: f64, sigma: f64) -> WaveFunction {
        WaveFunction::scalar_1d(grid, |x| {
            C64::new((-(x - x0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(100, 0.0, 1.0).is_err()); // not a power of two
        assert!(GridSpec::new(8, 0.0, 1.0).is_err()); // too small
        assert!(GridSpec::new(64, 1.0, 0.0).is_err());
    }

    #[test]
    fn freq_layout() {
        let g = GridSpec::new(16, 0.0, 16.0).unwrap();
        assert_eq!(g.freq(0), 0.0);
        assert!((g.freq(1) - 2.0 * std::f64::consts::PI / 16.0).abs() < 1e-15);
        assert!(g.freq(15) < 0.0);
    }

    #[test]
    fn translate_zero_is_identity() {
        let g = GridSpec::new(256, -10.0, 10.0).unwrap();
        let w = gaussian_1d(g, -2.0, 0.5);
        let t = w.translate(0.0, 0).unwrap();
        let err: f64 = w
            .comps[0]
            .iter()
            .zip(t.comps[0].iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn translate_moves_center_by_a() {
        let g = GridSpec::new(512, -20.0, 20.0).unwrap();
        let w = gaussian_1d(g, -5.0, 0.8);
        let a = 2.813; // deliberately not a multiple of dx
        let t = w.translate(a, 0).unwrap();
        let center = t.position_moment(0, 1);
        assert!(
            (center - (-5.0 + a)).abs() < g.dx() / 10.0,
            "center {center}"
        );
        assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translate_composes_additively() {
        let g = GridSpec::new(256, -12.0, 12.0).unwrap();
        let w = gaussian_1d(g, 0.0, 0.7);
        let back = w.translate(2.31, 0).unwrap().translate(-2.31, 0).unwrap();
        let diff: f64 = w
            .comps[0]
            .iter()
            .zip(back.comps[0].iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * g.dx();
        assert!(diff.sqrt() < 1e-12);
    }

    #[test]
    fn region_probability_whole_domain_and_symmetry() {
        let g = GridSpec::new(512, -15.0, 15.0).unwrap();
        let w = gaussian_1d(g, 0.0, 1.0);
        assert!((w.region_probability(|_| true) - 1.0).abs() < 1e-12);
        // cell-centered sampling: the even density splits exactly
        let right = w.region_probability(|c| c[0] >= 0.0);
        assert!((right - 0.5).abs() < 1e-6, "right mass {right}");
    }

    #[test]
    fn symmetric_bump_region_split() {
        let g = GridSpec::new(1024, -8.0, 8.0).unwrap();
        let b = Bump::unit(-1.0, 1.0).unwrap();
        let w = WaveFunction::scalar_1d(g, |x| C64::new(b.eval(x), 0.0)).unwrap();
        let right = w.region_probability(|c| c[0] > 0.0);
        let left = w.region_probability(|c| c[0] < 0.0);
        assert!((right - left).abs() < 1e-12);
        assert!((right + left - 1.0).abs() < 1e-12);
    }

    #[test]
    fn momentum_moments_of_plane_wave_packet() {
        let g = GridSpec::new(1024, -40.0, 40.0).unwrap();
        let k0 = 3.0;
        let sigma = 1.5;
        let w = WaveFunction::scalar_1d(g, |x| {
            (C64::i() * k0 * x).exp() * C64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0)
        })
        .unwrap();
        let (m1, m2) = w.momentum_moments(0).unwrap();
        assert!((m1 - k0).abs() < 1e-9, "⟨k⟩ = {m1}");
        // Gaussian: Var(k) = 1/(2σ²)
        let var = m2 - m1 * m1;
        assert!((var - 1.0 / (2.0 * sigma * sigma)).abs() < 1e-9, "Var = {var}");
    }

    #[test]
    fn boundary_monitor_flags_leaky_packet() {
        let g = GridSpec::new(256, -5.0, 5.0).unwrap();
        let w = gaussian_1d(g, 4.5, 1.0); // piled against the boundary
        assert!(w.check_boundary_leakage(1.0).is_err());
        let centered = gaussian_1d(g, 0.0, 0.4);
        assert!(centered.check_boundary_leakage(1.0).is_ok());
    }

    #[test]
    fn qubit_leg_normalization() {
        let g = GridSpec::new(128, -6.0, 6.0).unwrap();
        let env = gaussian_1d(g, 0.0, 0.5);
        let w = WaveFunction::with_qubit(&env, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert!((w.norm_sqr() - 1.0).abs() < 1e-12);
        let p_up: f64 = w.comps[1].iter().map(|z| z.norm_sqr()).sum::<f64>() * g.dx();
        assert!((p_up - 0.5).abs() < 1e-12);
    }
}
