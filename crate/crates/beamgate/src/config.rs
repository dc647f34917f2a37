//! Layered run configuration: built-in defaults, then an optional config
//! file (JSON or `key = value` lines), then command-line flags.

use crate::error::{Error, Result};
use crate::experiments::{ScalingConfig, DEFAULT_DJ_THRESHOLD};
use crate::lattice::{
    LatticeLayout, DEFAULT_CELL_PITCH, DEFAULT_PX_PER_CELL, DEFAULT_WAIST_FRACTION,
};
use crate::optics::{
    Mode, PipelineConfig, DEFAULT_PROPAGATION_DISTANCE, DEFAULT_RELAY_DISTANCE, DEFAULT_WAVELENGTH,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Every tunable knob of the simulation. The lattice dimension itself comes
/// from the inputs (matrix size, qubit count), not from the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub mode: Mode,
    /// Source wavelength in meters.
    pub wavelength: f64,
    /// Physical cell width in meters.
    pub cell_pitch: f64,
    /// Grid samples per cell.
    pub px_per_cell: usize,
    /// Gaussian waist in meters; `None` means `cell_pitch / 4`.
    pub waist: Option<f64>,
    /// Empty cells around the lattice per side; `None` picks 0 in ideal mode
    /// and enough room for the spreading beams in physical mode.
    pub margin_cells: Option<usize>,
    /// Relay stand-in distance between modulation planes, meters.
    pub relay_distance: f64,
    /// y-spread distance after the cylindrical lens, meters.
    pub propagation_distance: f64,
    /// Columns kept on each side of zero spatial frequency at readout.
    pub zero_order_halfwidth: usize,
    /// Total lattice width for the scaling study, meters.
    pub extent: f64,
    /// Samples across the scaling-study extent.
    pub lattice_px: usize,
    /// Zero-row probability above which a Deutsch-Jozsa verdict is constant.
    pub dj_threshold: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Ideal,
            wavelength: DEFAULT_WAVELENGTH,
            cell_pitch: DEFAULT_CELL_PITCH,
            px_per_cell: DEFAULT_PX_PER_CELL,
            waist: None,
            margin_cells: None,
            relay_distance: DEFAULT_RELAY_DISTANCE,
            propagation_distance: DEFAULT_PROPAGATION_DISTANCE,
            zero_order_halfwidth: 0,
            extent: crate::experiments::DEFAULT_SCALING_EXTENT,
            lattice_px: crate::experiments::DEFAULT_SCALING_LATTICE_PX,
            dj_threshold: DEFAULT_DJ_THRESHOLD,
        }
    }
}

impl SimConfig {
    /// Load from a file: `.json` via serde, anything else as `key = value`
    /// lines with `#` comments.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        } else {
            Self::from_key_values(&text, path)
        }
    }

    fn from_key_values(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    idx + 1
                )));
            };
            cfg.set(key.trim(), value.trim()).map_err(|e| {
                Error::Parse(format!("{}:{}: {e}", path.display(), idx + 1))
            })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num(value: &str) -> Result<f64> {
            value
                .parse()
                .map_err(|_| Error::Parse(format!("'{value}' is not a number")))
        }
        fn int(value: &str) -> Result<usize> {
            value
                .parse()
                .map_err(|_| Error::Parse(format!("'{value}' is not an integer")))
        }
        match key {
            "mode" => self.mode = value.parse()?,
            "wavelength" => self.wavelength = num(value)?,
            "cell_pitch" => self.cell_pitch = num(value)?,
            "px_per_cell" => self.px_per_cell = int(value)?,
            "waist" => self.waist = Some(num(value)?),
            "margin_cells" => self.margin_cells = Some(int(value)?),
            "relay_distance" => self.relay_distance = num(value)?,
            "propagation_distance" => self.propagation_distance = num(value)?,
            "zero_order_halfwidth" => self.zero_order_halfwidth = int(value)?,
            "extent" => self.extent = num(value)?,
            "lattice_px" => self.lattice_px = int(value)?,
            "dj_threshold" => self.dj_threshold = num(value)?,
            other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    fn margin_for(&self, n: usize) -> usize {
        self.margin_cells.unwrap_or(match self.mode {
            Mode::Ideal => 0,
            Mode::Physical => (n / 2).max(2),
        })
    }

    /// Lattice layout for dimension `n` under this configuration.
    pub fn layout_for(&self, n: usize) -> Result<LatticeLayout> {
        let layout = LatticeLayout::from_cells_with_margin(
            n,
            self.cell_pitch,
            self.px_per_cell,
            self.margin_for(n),
        )?;
        match self.waist {
            Some(w) => layout.with_waist(w),
            None => Ok(layout),
        }
    }

    /// Full pipeline configuration for dimension `n`.
    pub fn pipeline_for(&self, n: usize) -> Result<PipelineConfig> {
        Ok(PipelineConfig {
            layout: self.layout_for(n)?,
            mode: self.mode,
            wavelength: self.wavelength,
            relay_distance: self.relay_distance,
            propagation_distance: self.propagation_distance,
            zero_order_halfwidth: self.zero_order_halfwidth,
        })
    }

    /// Scaling-study template under this configuration.
    pub fn scaling(&self) -> ScalingConfig {
        ScalingConfig {
            extent: self.extent,
            lattice_px: self.lattice_px,
            mode: self.mode,
            wavelength: self.wavelength,
            relay_distance: self.relay_distance,
            propagation_distance: self.propagation_distance,
            zero_order_halfwidth: self.zero_order_halfwidth,
        }
    }
}

/// Default waist for a given cell pitch.
pub fn default_waist(cell_pitch: f64) -> f64 {
    DEFAULT_WAIST_FRACTION * cell_pitch
}
