//! Result suites: Hadamard-basis crosstalk matrices with fidelity, the
//! Deutsch-Jozsa demonstrations, and the fidelity-versus-dimension scaling
//! study at fixed lattice extent.

use crate::error::{Error, Result};
use crate::gates::{
    hadamard_basis_state, hadamard_matrix, oracle_matrix, BooleanFunction, FunctionClass,
};
use crate::lattice::{gaussian_cell_mode, LatticeLayout};
use crate::optics::{
    intensity_overlap, propagate, run_pipeline, Mode, PipelineConfig, DEFAULT_PROPAGATION_DISTANCE,
    DEFAULT_RELAY_DISTANCE, DEFAULT_WAVELENGTH,
};
use rayon::prelude::*;
use serde::Serialize;

/// Default decision threshold on the zero-row probability: a symmetric
/// majority vote between "light present" and "light absent".
pub const DEFAULT_DJ_THRESHOLD: f64 = 0.5;

/// Row-stochastic matrix of readout probabilities per input basis state.
#[derive(Debug, Clone, Serialize)]
pub struct CrosstalkMatrix {
    /// Lattice dimension N.
    pub n: usize,
    /// `entries[j][k]`: probability of reading row k when preparing `u_j`.
    pub entries: Vec<Vec<f64>>,
    /// Mean of the diagonal entries.
    pub fidelity: f64,
    /// Population standard deviation of the diagonal entries. This captures
    /// only the systematic (diffraction) spread across basis states, not
    /// measurement noise.
    pub fidelity_std: f64,
}

impl CrosstalkMatrix {
    fn from_rows(entries: Vec<Vec<f64>>) -> Self {
        let n = entries.len();
        let diag: Vec<f64> = (0..n).map(|j| entries[j][j]).collect();
        let fidelity = diag.iter().sum::<f64>() / n as f64;
        let var = diag.iter().map(|d| (d - fidelity).powi(2)).sum::<f64>() / n as f64;
        Self {
            n,
            entries,
            fidelity,
            fidelity_std: var.sqrt(),
        }
    }

    /// Largest off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, row) in self.entries.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if j != k {
                    worst = worst.max(v);
                }
            }
        }
        worst
    }
}

/// Prepare every Hadamard basis state, apply the Hadamard gate through the
/// pipeline, and stack the readout probability rows.
///
/// In ideal mode the result is the identity matrix; diffraction in physical
/// mode moves mass off the diagonal.
pub fn crosstalk_bench(n_qubits: u32, cfg: &PipelineConfig) -> Result<CrosstalkMatrix> {
    let n = 1usize << n_qubits;
    if cfg.layout.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "layout lattice dim {} vs 2^{n_qubits} = {n}",
            cfg.layout.n()
        )));
    }
    let h = hadamard_matrix(n_qubits);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let u = hadamard_basis_state(n_qubits, j)?;
            Ok(run_pipeline(&u, &h, cfg)?.probabilities)
        })
        .collect::<Result<_>>()?;
    Ok(CrosstalkMatrix::from_rows(rows))
}

/// Outcome of one Deutsch-Jozsa run.
#[derive(Debug, Clone, Serialize)]
pub struct DjVerdict {
    /// True class of the queried function.
    pub function_label: FunctionClass,
    /// Readout probabilities per row.
    pub measured_probabilities: Vec<f64>,
    /// Class decided from the light on row 0.
    pub verdict: FunctionClass,
    /// Whether the verdict matches the true class.
    pub correct: bool,
    /// Probability measured on row 0.
    pub zero_row_probability: f64,
}

/// Execute the Deutsch-Jozsa protocol: prepare the uniform superposition
/// `u_0` on the first plane, apply the compound matrix `H_N * U_F` on the
/// second, and decide from the light on row 0.
pub fn dj_run(f: &BooleanFunction, cfg: &PipelineConfig, threshold: f64) -> Result<DjVerdict> {
    let label = f.classify();
    if label == FunctionClass::Neither {
        return Err(Error::NeitherConstantNorBalanced);
    }
    let n = f.len();
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::DimensionMismatch(format!(
            "truth table length {n} is not a power of two >= 2"
        )));
    }
    if cfg.layout.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "layout lattice dim {} vs truth table length {n}",
            cfg.layout.n()
        )));
    }
    let n_qubits = n.trailing_zeros();
    let u0 = hadamard_basis_state(n_qubits, 0)?;
    let compound = hadamard_matrix(n_qubits).matmul(&oracle_matrix(f))?;
    let out = run_pipeline(&u0, &compound, cfg)?;
    let zero_row_probability = out.probabilities[0];
    let verdict = if zero_row_probability > threshold {
        FunctionClass::Constant
    } else {
        FunctionClass::Balanced
    };
    Ok(DjVerdict {
        function_label: label,
        correct: verdict == label,
        verdict,
        zero_row_probability,
        measured_probabilities: out.probabilities,
    })
}

/// Intensity overlap between two y-adjacent cell modes after free-space
/// propagation over `distance`. Zero at distance zero; grows as the modes
/// spread into each other.
pub fn adjacent_mode_overlap(
    layout: &LatticeLayout,
    distance: f64,
    wavelength: f64,
) -> Result<f64> {
    let j = layout.n() / 2;
    let a = gaussian_cell_mode(layout, j - 1, j)?;
    let b = gaussian_cell_mode(layout, j, j)?;
    let pa = propagate(&a, distance, wavelength)?;
    let pb = propagate(&b, distance, wavelength)?;
    Ok(intensity_overlap(&pa, &pb))
}

/// Template for the scaling study: everything except the per-N lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    /// Total lattice width, held fixed while N grows.
    pub extent: f64,
    /// Samples across the lattice extent (per-N cells get `lattice_px / N`).
    pub lattice_px: usize,
    pub mode: Mode,
    pub wavelength: f64,
    pub relay_distance: f64,
    pub propagation_distance: f64,
    pub zero_order_halfwidth: usize,
}

/// Default extent: sixteen default cells, so N=16 reproduces the default
/// cell geometry.
pub const DEFAULT_SCALING_EXTENT: f64 = 16.0 * crate::lattice::DEFAULT_CELL_PITCH;
/// Default samples across the extent.
pub const DEFAULT_SCALING_LATTICE_PX: usize = 1024;

impl ScalingConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            extent: DEFAULT_SCALING_EXTENT,
            lattice_px: DEFAULT_SCALING_LATTICE_PX,
            mode,
            wavelength: DEFAULT_WAVELENGTH,
            relay_distance: DEFAULT_RELAY_DISTANCE,
            propagation_distance: DEFAULT_PROPAGATION_DISTANCE,
            zero_order_halfwidth: 0,
        }
    }

    /// Pipeline configuration for one lattice dimension in the sweep:
    /// cell pitch `extent / n`, waist a quarter of that, and (in physical
    /// mode) half the extent of empty margin on each side.
    pub fn pipeline_for(&self, n: usize) -> Result<PipelineConfig> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "scaling dimensions must be powers of two >= 2, got {n}"
            )));
        }
        if !self.lattice_px.is_multiple_of(n) {
            return Err(Error::InvalidLayout(format!(
                "lattice_px {} not divisible by dimension {n}",
                self.lattice_px
            )));
        }
        let margin_cells = match self.mode {
            Mode::Ideal => 0,
            Mode::Physical => n / 2,
        };
        let layout = LatticeLayout::from_cells_with_margin(
            n,
            self.extent / n as f64,
            self.lattice_px / n,
            margin_cells,
        )?;
        Ok(PipelineConfig {
            layout,
            mode: self.mode,
            wavelength: self.wavelength,
            relay_distance: self.relay_distance,
            propagation_distance: self.propagation_distance,
            zero_order_halfwidth: self.zero_order_halfwidth,
        })
    }
}

/// One row of the scaling study table.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingEntry {
    pub n: usize,
    /// Mode waist at this dimension: `extent / (4 N)`.
    pub waist: f64,
    pub fidelity: Option<f64>,
    pub fidelity_std: Option<f64>,
    /// Intensity overlap of adjacent modes after the y-spread distance.
    pub adjacent_overlap: Option<f64>,
    /// Reason this dimension could not be simulated, if any.
    pub error: Option<String>,
}

/// Crosstalk fidelity versus lattice dimension at fixed total extent.
///
/// Shrinking cells mean shrinking waists, which diffract faster over the
/// same distances, so physical-mode fidelity decreases with N. Failures
/// (for example Nyquist violations at extreme parameters) are reported
/// per dimension instead of aborting the sweep.
pub fn scaling_study(dimensions: &[usize], cfg: &ScalingConfig) -> Vec<ScalingEntry> {
    dimensions
        .iter()
        .map(|&n| {
            let waist = cfg.extent / (4.0 * n as f64);
            let outcome = (|| -> Result<(CrosstalkMatrix, f64)> {
                let pipeline = cfg.pipeline_for(n)?;
                let bench = crosstalk_bench(n.trailing_zeros(), &pipeline)?;
                let z = match cfg.mode {
                    Mode::Ideal => 0.0,
                    Mode::Physical => cfg.propagation_distance,
                };
                let overlap = adjacent_mode_overlap(&pipeline.layout, z, cfg.wavelength)?;
                Ok((bench, overlap))
            })();
            match outcome {
                Ok((bench, overlap)) => ScalingEntry {
                    n,
                    waist,
                    fidelity: Some(bench.fidelity),
                    fidelity_std: Some(bench.fidelity_std),
                    adjacent_overlap: Some(overlap),
                    error: None,
                },
                Err(e) => ScalingEntry {
                    n,
                    waist,
                    fidelity: None,
                    fidelity_std: None,
                    adjacent_overlap: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
