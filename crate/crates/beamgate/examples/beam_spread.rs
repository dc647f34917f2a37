//! Gaussian beam spreading under free-space propagation.
//!
//! Propagates an untruncated Gaussian and compares the fitted 1/e^2 radius
//! with the analytic spreading law, then shows how the intensity overlap of
//! two adjacent lattice modes grows with distance — the mechanism that
//! limits fidelity at high dimension.
//!
//! ```text
//! cargo run --example beam_spread
//! ```

use beamgate::experiments::adjacent_mode_overlap;
use beamgate::lattice::{Field, LatticeLayout};
use beamgate::optics::{propagate, DEFAULT_WAVELENGTH};
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

fn gaussian(grid_px: usize, px_pitch: f64, w0: f64) -> Field {
    let amp = Array2::from_shape_fn((grid_px, grid_px), |(r, c)| {
        let x = (c as f64 - (grid_px as f64 - 1.0) / 2.0) * px_pitch;
        let y = (r as f64 - (grid_px as f64 - 1.0) / 2.0) * px_pitch;
        Complex64::new((-(x * x + y * y) / (w0 * w0)).exp(), 0.0)
    });
    Field::new(amp, px_pitch).unwrap()
}

fn fitted_waist(field: &Field) -> f64 {
    let g = field.grid_px();
    let (mut total, mut second) = (0.0, 0.0);
    for r in 0..g {
        for c in 0..g {
            let i = field.amplitude()[[r, c]].norm_sqr();
            let x = (c as f64 - (g as f64 - 1.0) / 2.0) * field.px_pitch();
            total += i;
            second += i * x * x;
        }
    }
    2.0 * (second / total).sqrt()
}

fn main() -> beamgate::Result<()> {
    let w0 = 150e-6;
    let rayleigh = PI * w0 * w0 / DEFAULT_WAVELENGTH;
    let beam = gaussian(512, 6.25e-6, w0);

    println!("w0 = {:.0} um, Rayleigh range = {:.1} mm", w0 * 1e6, rayleigh * 1e3);
    println!("{:>8} {:>14} {:>14} {:>10}", "z / zR", "fitted (um)", "formula (um)", "error");
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let z = frac * rayleigh;
        let spread = propagate(&beam, z, DEFAULT_WAVELENGTH)?;
        let fitted = fitted_waist(&spread);
        let formula = w0 * (1.0 + (DEFAULT_WAVELENGTH * z / (PI * w0 * w0)).powi(2)).sqrt();
        println!(
            "{frac:>8.2} {:>14.3} {:>14.3} {:>9.4}%",
            fitted * 1e6,
            formula * 1e6,
            (fitted - formula).abs() / formula * 100.0
        );
    }

    let layout = LatticeLayout::from_cells_with_margin(4, 400e-6, 64, 2)?;
    println!("\nadjacent-mode intensity overlap (400 um cells, 100 um waists):");
    for z_mm in [0.0, 25.0, 50.0, 100.0, 150.0] {
        let overlap = adjacent_mode_overlap(&layout, z_mm * 1e-3, DEFAULT_WAVELENGTH)?;
        println!("  z = {z_mm:>5.0} mm: {overlap:.6}");
    }
    Ok(())
}
