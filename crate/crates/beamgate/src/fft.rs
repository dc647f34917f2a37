//! Unitary FFT helpers over 2D complex grids.
//!
//! All transforms carry the 1/sqrt(n) unitary scaling so that forward and
//! inverse passes preserve the discrete L2 norm exactly.

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

/// Unitary FFT along x (axis 1, the contiguous axis), one row at a time.
pub(crate) fn fft_along_x(arr: &mut Array2<Complex64>, direction: FftDirection) {
    let n = arr.ncols();
    let fft = FftPlanner::new().plan_fft(n, direction);
    let scale = 1.0 / (n as f64).sqrt();
    arr.axis_iter_mut(Axis(0))
        .into_par_iter()
        .for_each(|mut row| {
            let lane = row.as_slice_mut().expect("rows of a standard-layout array");
            fft.process(lane);
            for v in lane {
                *v *= scale;
            }
        });
}

/// Unitary FFT along y (axis 0), one column at a time through a scratch lane.
pub(crate) fn fft_along_y(arr: &mut Array2<Complex64>, direction: FftDirection) {
    let n = arr.nrows();
    let fft = FftPlanner::new().plan_fft(n, direction);
    let scale = 1.0 / (n as f64).sqrt();
    arr.axis_iter_mut(Axis(1))
        .into_par_iter()
        .for_each(|mut col| {
            let mut lane: Vec<Complex64> = col.iter().copied().collect();
            fft.process(&mut lane);
            for (dst, src) in col.iter_mut().zip(lane) {
                *dst = src * scale;
            }
        });
}

/// Rotate columns so the zero-frequency bin lands on column `n/2`.
pub(crate) fn fftshift_x(arr: &Array2<Complex64>) -> Array2<Complex64> {
    let (rows, cols) = arr.dim();
    let half = cols / 2;
    let mut out = Array2::zeros((rows, cols));
    for r in 0..rows {
        for c in 0..cols {
            out[[r, (c + half) % cols]] = arr[[r, c]];
        }
    }
    out
}

/// FFT sample frequencies in cycles per meter, standard (unshifted) order.
pub(crate) fn fft_freqs(n: usize, pitch: f64) -> Vec<f64> {
    let df = 1.0 / (n as f64 * pitch);
    (0..n)
        .map(|i| {
            if i <= (n - 1) / 2 {
                i as f64 * df
            } else {
                (i as f64 - n as f64) * df
            }
        })
        .collect()
}
