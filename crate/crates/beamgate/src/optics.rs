//! The optical pipeline: vector encoding on the first modulation plane,
//! matrix modulation on the second, the cylindrical-lens Fourier transform
//! along x, zero-order filtering and row readout.
//!
//! In ideal mode every stage is exact: perfect imaging between planes and an
//! exact 1D unitary DFT for the lens, so the readout probabilities reproduce
//! |M u|^2 up to floating-point error. Physical mode inserts free-space
//! propagation between planes and lets the unfocused y-direction spread after
//! the lens, which is what degrades fidelity as modes shrink.

use crate::error::{Error, Result};
use crate::fft::{fft_along_x, fft_along_y, fft_freqs, fftshift_x};
use crate::gates::{GateMatrix, StateVector};
use crate::lattice::{cell_profile_1d, Field, LatticeLayout};
use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Helium-neon wavelength, the default source.
pub const DEFAULT_WAVELENGTH: f64 = 633e-9;
/// Default stand-in distance for the relay between modulation planes.
pub const DEFAULT_RELAY_DISTANCE: f64 = 0.01;
/// Default distance over which the unfocused y-direction spreads.
pub const DEFAULT_PROPAGATION_DISTANCE: f64 = 0.15;
/// Spectral energy fraction beyond the anti-alias limit that `propagate`
/// tolerates before reporting a Nyquist violation.
pub const NYQUIST_ENERGY_TOLERANCE: f64 = 1e-4;

/// Whether the pipeline stages are exact or diffraction-aware.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    Physical,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Ideal => write!(f, "ideal"),
            Mode::Physical => write!(f, "physical"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "physical" => Ok(Mode::Physical),
            other => Err(Error::Parse(format!(
                "unknown mode '{other}' (expected 'ideal' or 'physical')"
            ))),
        }
    }
}

/// Full configuration of one pipeline invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub layout: LatticeLayout,
    pub mode: Mode,
    /// Source wavelength in meters; used by physical mode only.
    pub wavelength: f64,
    /// Free-space distance standing in for the relay between the two
    /// modulation planes (physical mode).
    pub relay_distance: f64,
    /// Distance over which the unfocused y-direction spreads after the
    /// cylindrical lens (physical mode).
    pub propagation_distance: f64,
    /// Extra columns kept on each side of the zero spatial frequency at
    /// readout. 0 keeps exactly the zero-order column.
    pub zero_order_halfwidth: usize,
}

impl PipelineConfig {
    pub fn ideal(layout: LatticeLayout) -> Self {
        Self {
            layout,
            mode: Mode::Ideal,
            wavelength: DEFAULT_WAVELENGTH,
            relay_distance: DEFAULT_RELAY_DISTANCE,
            propagation_distance: DEFAULT_PROPAGATION_DISTANCE,
            zero_order_halfwidth: 0,
        }
    }

    pub fn physical(layout: LatticeLayout) -> Self {
        Self {
            mode: Mode::Physical,
            ..Self::ideal(layout)
        }
    }

    /// Ideal pipeline on the default exact-fill layout for an N x N lattice.
    pub fn ideal_defaults(n: usize) -> Result<Self> {
        Ok(Self::ideal(LatticeLayout::with_defaults(n)?))
    }

    /// Physical pipeline on a default layout with enough margin around the
    /// lattice that the spreading beams do not wrap around the grid.
    pub fn physical_defaults(n: usize) -> Result<Self> {
        let margin = (n / 2).max(2);
        let layout = LatticeLayout::from_cells_with_margin(
            n,
            crate::lattice::DEFAULT_CELL_PITCH,
            crate::lattice::DEFAULT_PX_PER_CELL,
            margin,
        )?;
        Ok(Self::physical(layout))
    }

    pub fn validate(&self) -> Result<()> {
        if self.wavelength <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if self.relay_distance < 0.0 || self.propagation_distance < 0.0 {
            return Err(Error::InvalidArgument(
                "propagation distances must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Row readout of the filtered interference pattern.
#[derive(Debug, Clone, Serialize)]
pub struct ReadoutResult {
    /// Integrated intensity per lattice row band, arbitrary units.
    pub row_intensities: Vec<f64>,
    /// `row_intensities` normalized to unit sum (all zeros if no light).
    pub probabilities: Vec<f64>,
    /// Complex profile of the exact zero-spatial-frequency column.
    #[serde(skip)]
    pub zero_order_column: Vec<Complex64>,
}

/// Encode a state vector into the lattice: every cell in column k carries
/// the complex weight `u_k`, copied down all rows.
///
/// For a unit-norm input the resulting field has unit power.
pub fn encode_vector(layout: &LatticeLayout, u: &StateVector) -> Result<Field> {
    let n = layout.n();
    if u.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector dim {} vs lattice dim {}",
            u.dim(),
            n
        )));
    }
    let g = layout.grid_px();
    let mut col_amp = vec![Complex64::new(0.0, 0.0); g];
    let mut row_amp = vec![0.0; g];
    for idx in 0..n {
        let profile = cell_profile_1d(layout, idx)?;
        let weight = u.coeffs()[idx];
        for i in layout.cell_block(idx)? {
            col_amp[i] = weight * profile[i];
            row_amp[i] += profile[i];
        }
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut amplitude = Array2::zeros((g, g));
    for (r, &y) in row_amp.iter().enumerate() {
        if y == 0.0 {
            continue;
        }
        for (c, &x) in col_amp.iter().enumerate() {
            amplitude[[r, c]] = x * (y * scale);
        }
    }
    Field::new(amplitude, layout.px_pitch())
}

/// Pointwise cell modulation: cell (k, j) of the input is multiplied by
/// `M_jk`. Pixels outside the lattice region are cleared, since the operator
/// only addresses lattice states.
pub fn encode_matrix(field: &Field, m: &GateMatrix, layout: &LatticeLayout) -> Result<Field> {
    let n = layout.n();
    if m.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix dim {} vs lattice dim {}",
            m.dim(),
            n
        )));
    }
    if field.grid_px() != layout.grid_px() {
        return Err(Error::DimensionMismatch(format!(
            "field grid {} px vs layout grid {} px",
            field.grid_px(),
            layout.grid_px()
        )));
    }
    let cell_px = layout.cell_px();
    let margin = layout.margin_px();
    let lattice_px = n * cell_px;
    let cell_of = |i: usize| -> Option<usize> {
        let rel = i.checked_sub(margin)?;
        (rel < lattice_px).then_some(rel / cell_px)
    };
    let g = layout.grid_px();
    let mut amplitude = Array2::zeros((g, g));
    for r in 0..g {
        let Some(j) = cell_of(r) else { continue };
        for c in 0..g {
            let Some(k) = cell_of(c) else { continue };
            amplitude[[r, c]] = field.amplitude()[[r, c]] * m.get(j, k);
        }
    }
    Field::new(amplitude, field.px_pitch())
}

/// The cylindrical-lens stage: a 1D unitary discrete Fourier transform along
/// x applied independently to each y row, with the zero-frequency column
/// shifted to the grid center. y is untouched.
pub fn cylindrical_transform(field: &Field) -> Field {
    let mut amplitude = field.amplitude().clone();
    fft_along_x(&mut amplitude, FftDirection::Forward);
    let amplitude = fftshift_x(&amplitude);
    Field::new(amplitude, field.px_pitch()).expect("transform of a finite field is finite")
}

/// Keep the `2 * halfwidth + 1` columns centered on zero spatial frequency,
/// integrate |amplitude|^2 over each lattice row band and normalize.
pub fn extract_zero_order(field: &Field, cfg: &PipelineConfig) -> Result<ReadoutResult> {
    let layout = &cfg.layout;
    if field.grid_px() != layout.grid_px() {
        return Err(Error::DimensionMismatch(format!(
            "field grid {} px vs layout grid {} px",
            field.grid_px(),
            layout.grid_px()
        )));
    }
    let g = field.grid_px();
    let center = g / 2;
    let lo = center.saturating_sub(cfg.zero_order_halfwidth);
    let hi = (center + cfg.zero_order_halfwidth + 1).min(g);
    let area = field.px_pitch() * field.px_pitch();

    let n = layout.n();
    let mut row_intensities = vec![0.0; n];
    for (j, acc) in row_intensities.iter_mut().enumerate() {
        let band = layout.cell_block(j)?;
        let mut s = 0.0;
        for r in band {
            for c in lo..hi {
                s += field.amplitude()[[r, c]].norm_sqr();
            }
        }
        *acc = s * area;
    }
    let total: f64 = row_intensities.iter().sum();
    let probabilities = if total > 0.0 {
        row_intensities.iter().map(|i| i / total).collect()
    } else {
        vec![0.0; n]
    };
    let zero_order_column = field.amplitude().column(center).to_vec();
    Ok(ReadoutResult {
        row_intensities,
        probabilities,
        zero_order_column,
    })
}

/// Free-space propagation of the sampled field by the angular-spectrum
/// method over `distance` meters.
///
/// The transfer function is a pure phase for every propagating frequency, so
/// power is conserved to machine precision; evanescent components decay.
/// If more than [`NYQUIST_ENERGY_TOLERANCE`] of the spectral energy lies
/// beyond the anti-aliasing limit (plane-wave components that the periodic
/// grid can no longer track over this distance), the sampling is too coarse
/// and an explicit error is returned.
pub fn propagate(field: &Field, distance: f64, wavelength: f64) -> Result<Field> {
    propagate_impl(field, distance, wavelength, PropagationAxes::Both)
}

/// 1D propagation along y only: each column diffracts independently.
///
/// This is the model for the unfocused direction after the cylindrical lens,
/// where x has already been contracted to spatial frequencies.
pub fn propagate_along_y(field: &Field, distance: f64, wavelength: f64) -> Result<Field> {
    propagate_impl(field, distance, wavelength, PropagationAxes::YOnly)
}

#[derive(Clone, Copy, PartialEq)]
enum PropagationAxes {
    Both,
    YOnly,
}

fn propagate_impl(
    field: &Field,
    distance: f64,
    wavelength: f64,
    axes: PropagationAxes,
) -> Result<Field> {
    if distance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "propagation distance must be non-negative, got {distance}"
        )));
    }
    if wavelength <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    if distance == 0.0 {
        return Ok(field.clone());
    }

    let g = field.grid_px();
    let pitch = field.px_pitch();
    let mut spectrum = field.amplitude().clone();
    fft_along_y(&mut spectrum, FftDirection::Forward);
    if axes == PropagationAxes::Both {
        fft_along_x(&mut spectrum, FftDirection::Forward);
    }

    // Anti-alias limit: plane waves displaced laterally by more than half the
    // grid width wrap around instead of leaving, so their energy must be
    // negligible for the result to be trustworthy.
    let aperture = g as f64 * pitch;
    let half = aperture / 2.0;
    let f_limit = half / (wavelength * (distance * distance + half * half).sqrt());

    let freqs = fft_freqs(g, pitch);
    let k = 2.0 * PI / wavelength;
    use ndarray::Axis;
    use rayon::prelude::*;

    let (total_energy, aliased_energy) = spectrum
        .axis_iter(Axis(0))
        .into_par_iter()
        .enumerate()
        .map(|(r, row)| {
            let fy = freqs[r];
            let mut total = 0.0;
            let mut aliased = 0.0;
            for (c, v) in row.iter().enumerate() {
                let fx = match axes {
                    PropagationAxes::Both => freqs[c],
                    PropagationAxes::YOnly => 0.0,
                };
                let e = v.norm_sqr();
                total += e;
                if fx.abs() > f_limit || fy.abs() > f_limit {
                    aliased += e;
                }
            }
            (total, aliased)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    if total_energy > 0.0 {
        let fraction = aliased_energy / total_energy;
        if fraction > NYQUIST_ENERGY_TOLERANCE {
            return Err(Error::NyquistViolation {
                distance,
                fraction,
                threshold: NYQUIST_ENERGY_TOLERANCE,
            });
        }
    }

    spectrum
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(r, mut row)| {
            let fy = freqs[r];
            for (c, v) in row.iter_mut().enumerate() {
                let fx = match axes {
                    PropagationAxes::Both => freqs[c],
                    PropagationAxes::YOnly => 0.0,
                };
                let transverse = (2.0 * PI * fx).powi(2) + (2.0 * PI * fy).powi(2);
                let arg = k * k - transverse;
                let transfer = if arg >= 0.0 {
                    Complex64::from_polar(1.0, arg.sqrt() * distance)
                } else {
                    // evanescent component
                    Complex64::new((-(-arg).sqrt() * distance).exp(), 0.0)
                };
                *v *= transfer;
            }
        });

    if axes == PropagationAxes::Both {
        fft_along_x(&mut spectrum, FftDirection::Inverse);
    }
    fft_along_y(&mut spectrum, FftDirection::Inverse);
    Field::new(spectrum, pitch)
}

/// Intensity overlap of two fields: the integral of `sqrt(I_a * I_b)`
/// normalized by the geometric mean of the powers (Bhattacharyya
/// coefficient).
///
/// Zero for disjoint supports, one for identical intensity profiles. Unitary
/// propagation keeps orthogonal modes orthogonal in the complex inner
/// product, but their intensities spread into each other, and this is the
/// quantity the region readout responds to.
pub fn intensity_overlap(a: &Field, b: &Field) -> f64 {
    let cross: f64 = a
        .amplitude()
        .iter()
        .zip(b.amplitude().iter())
        .map(|(x, y)| (x.norm_sqr() * y.norm_sqr()).sqrt())
        .sum();
    let norm = (a.amplitude().iter().map(|c| c.norm_sqr()).sum::<f64>()
        * b.amplitude().iter().map(|c| c.norm_sqr()).sum::<f64>())
    .sqrt();
    if norm == 0.0 {
        0.0
    } else {
        cross / norm
    }
}

/// Run the full pipeline on one (vector, matrix) pair.
///
/// Ideal mode composes encode, modulate, transform and readout exactly;
/// physical mode inserts free-space propagation after each modulation plane
/// and lets y spread after the lens.
pub fn run_pipeline(
    u: &StateVector,
    m: &GateMatrix,
    cfg: &PipelineConfig,
) -> Result<ReadoutResult> {
    cfg.validate()?;
    let physical = cfg.mode == Mode::Physical;

    let mut field = encode_vector(&cfg.layout, u)?;
    if physical {
        field = propagate(&field, cfg.relay_distance, cfg.wavelength)?;
    }
    field = encode_matrix(&field, m, &cfg.layout)?;
    if physical {
        field = propagate(&field, cfg.relay_distance, cfg.wavelength)?;
    }
    field = cylindrical_transform(&field);
    if physical {
        field = propagate_along_y(&field, cfg.propagation_distance, cfg.wavelength)?;
    }
    extract_zero_order(&field, cfg)
}

/// Intermediate planes of a pipeline run, for inspection and image export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    /// After the vector encoding on the first modulation plane.
    Input,
    /// After the matrix modulation on the second plane.
    Modulated,
    /// After the cylindrical-lens transform (and y-spread in physical mode).
    Farfield,
    /// Farfield with everything but the kept zero-order columns cleared.
    Filtered,
}

impl std::str::FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "input" => Ok(Plane::Input),
            "modulated" => Ok(Plane::Modulated),
            "farfield" => Ok(Plane::Farfield),
            "filtered" => Ok(Plane::Filtered),
            other => Err(Error::Parse(format!(
                "unknown plane '{other}' (expected input|modulated|farfield|filtered)"
            ))),
        }
    }
}

/// Run the pipeline and return the field at the requested plane.
pub fn pipeline_field_at(
    u: &StateVector,
    m: &GateMatrix,
    cfg: &PipelineConfig,
    plane: Plane,
) -> Result<Field> {
    cfg.validate()?;
    let physical = cfg.mode == Mode::Physical;

    let mut field = encode_vector(&cfg.layout, u)?;
    if plane == Plane::Input {
        return Ok(field);
    }
    if physical {
        field = propagate(&field, cfg.relay_distance, cfg.wavelength)?;
    }
    field = encode_matrix(&field, m, &cfg.layout)?;
    if plane == Plane::Modulated {
        return Ok(field);
    }
    if physical {
        field = propagate(&field, cfg.relay_distance, cfg.wavelength)?;
    }
    field = cylindrical_transform(&field);
    if physical {
        field = propagate_along_y(&field, cfg.propagation_distance, cfg.wavelength)?;
    }
    if plane == Plane::Farfield {
        return Ok(field);
    }
    // Filtered: clear everything outside the kept zero-order columns.
    let g = field.grid_px();
    let center = g / 2;
    let lo = center.saturating_sub(cfg.zero_order_halfwidth);
    let hi = (center + cfg.zero_order_halfwidth + 1).min(g);
    let mut amplitude = field.amplitude().clone();
    for r in 0..g {
        for c in 0..g {
            if c < lo || c >= hi {
                amplitude[[r, c]] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Field::new(amplitude, field.px_pitch())
}
