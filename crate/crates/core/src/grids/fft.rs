//! Thin wrappers around `rustfft` for axis-wise transforms of 2D arrays.
//!
//! Forward transforms are unnormalized; inverse transforms carry the
//! `1/n` factor, so a forward/inverse pair is the identity up to rounding.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rustfft::{Fft as RustFft, FftPlanner};
use std::collections::HashMap;
use std::sync::Arc;

pub struct FftEngine {
    planner: FftPlanner<f64>,
    fwd: HashMap<usize, Arc<dyn RustFft<f64>>>,
    inv: HashMap<usize, Arc<dyn RustFft<f64>>>,
    scratch: Vec<C64>,
}

impl Default for FftEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl FftEngine {
    pub fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
            fwd: HashMap::new(),
            inv: HashMap::new(),
            scratch: Vec::new(),
        }
    }

    fn plan(&mut self, n: usize, inverse: bool) -> Arc<dyn RustFft<f64>> {
        let (map, planner) = if inverse {
            (&mut self.inv, &mut self.planner)
        } else {
            (&mut self.fwd, &mut self.planner)
        };
        map.entry(n)
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    }

    /// In-place transform along `axis` (0 = rows index / x, 1 = columns
    /// index / z) of a standard-layout array.
    pub fn transform_axis(&mut self, a: &mut Array2<C64>, axis: usize, inverse: bool) {
        let (nx, nz) = (a.nrows(), a.ncols());
        let n = if axis == 0 { nx } else { nz };
        if n == 1 {
            return;
        }
        let plan = self.plan(n, inverse);
        let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
        match axis {
            1 => {
                // rows are contiguous in standard layout
                let flat = a.as_slice_mut().expect("standard layout expected");
                for row in flat.chunks_exact_mut(nz) {
                    plan.process(row);
                }
                if inverse {
                    for v in flat.iter_mut() {
                        *v *= scale;
                    }
                }
            }
            0 => {
                self.scratch.resize(nx, C64::ZERO);
                for j in 0..nz {
                    for i in 0..nx {
                        self.scratch[i] = a[[i, j]];
                    }
                    plan.process(&mut self.scratch);
                    for i in 0..nx {
                        a[[i, j]] = self.scratch[i] * scale;
                    }
                }
            }
            _ => panic!("axis out of range"),
        }
    }

    pub fn fft_axis(&mut self, a: &mut Array2<C64>, axis: usize) {
        self.transform_axis(a, axis, false);
    }

    pub fn ifft_axis(&mut self, a: &mut Array2<C64>, axis: usize) {
        self.transform_axis(a, axis, true);
    }
}
