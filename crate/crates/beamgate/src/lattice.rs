//! The discretized transverse field and its partition into an N x N lattice
//! of non-overlapping cells, each hosting a truncated Gaussian mode.
//!
//! Gaussians are hard-truncated at cell boundaries, so distinct cell modes
//! have disjoint support and are orthogonal exactly, not just approximately.
//! Row index j runs along y, column index k along x; cell (k, j) is the
//! intersection of column block k and row block j.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::ops::Range;

/// Geometry binding lattice indices to grid regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeLayout {
    /// Cells per axis.
    n: usize,
    /// Physical cell width and height in meters.
    cell_pitch: f64,
    /// Gaussian 1/e^2 intensity radius in meters.
    waist: f64,
    /// Samples per axis.
    grid_px: usize,
    /// Physical sample spacing in meters.
    px_pitch: f64,
}

/// Default physical cell pitch (meters). The experiment's geometry is not
/// published, so this is a free choice of the simulation.
pub const DEFAULT_CELL_PITCH: f64 = 400e-6;
/// Default samples per cell; resolves the default waist by 16 samples.
pub const DEFAULT_PX_PER_CELL: usize = 64;
/// Default waist as a fraction of the cell pitch. Keeps >99.9% of an
/// untruncated Gaussian's power inside the cell.
pub const DEFAULT_WAIST_FRACTION: f64 = 0.25;

impl LatticeLayout {
    /// Full constructor; validates every layout invariant.
    pub fn new(
        n: usize,
        cell_pitch: f64,
        waist: f64,
        grid_px: usize,
        px_pitch: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLayout(format!("n must be >= 2, got {n}")));
        }
        if !(cell_pitch > 0.0 && waist > 0.0 && px_pitch > 0.0) || grid_px == 0 {
            return Err(Error::InvalidLayout(
                "cell_pitch, waist, px_pitch and grid_px must be positive".into(),
            ));
        }
        if !grid_px.is_multiple_of(n) {
            return Err(Error::InvalidLayout(format!(
                "grid_px {grid_px} not divisible by n {n}"
            )));
        }
        let cell_px_f = cell_pitch / px_pitch;
        let cell_px = cell_px_f.round();
        if (cell_px_f - cell_px).abs() > 1e-9 * cell_px_f || cell_px < 1.0 {
            return Err(Error::InvalidLayout(format!(
                "cell_pitch must be an integer number of pixels, got {cell_px_f}"
            )));
        }
        let cell_px = cell_px as usize;
        if n * cell_px > grid_px {
            return Err(Error::InvalidLayout(format!(
                "lattice of {n} x {cell_px} px exceeds grid of {grid_px} px"
            )));
        }
        if !(grid_px - n * cell_px).is_multiple_of(2) {
            return Err(Error::InvalidLayout(
                "margin around the lattice must be an even number of pixels".into(),
            ));
        }
        if waist >= cell_pitch / 2.0 {
            return Err(Error::InvalidLayout(format!(
                "waist {waist} must be < cell_pitch/2 = {}",
                cell_pitch / 2.0
            )));
        }
        Ok(Self {
            n,
            cell_pitch,
            waist,
            grid_px,
            px_pitch,
        })
    }

    /// Default geometry: 400 um cells, waist = pitch/4, 64 samples per cell,
    /// grid exactly filled by the lattice.
    pub fn with_defaults(n: usize) -> Result<Self> {
        Self::from_cells(n, DEFAULT_CELL_PITCH, DEFAULT_PX_PER_CELL)
    }

    /// Layout from cell pitch and samples per cell, waist = pitch/4.
    pub fn from_cells(n: usize, cell_pitch: f64, px_per_cell: usize) -> Result<Self> {
        Self::from_cells_with_margin(n, cell_pitch, px_per_cell, 0)
    }

    /// Like [`from_cells`](Self::from_cells) but with `margin_cells` empty
    /// cell-widths of grid on each side of the lattice, so diffracted light
    /// has somewhere to go before it wraps around the periodic grid.
    pub fn from_cells_with_margin(
        n: usize,
        cell_pitch: f64,
        px_per_cell: usize,
        margin_cells: usize,
    ) -> Result<Self> {
        let grid_cells = n + 2 * margin_cells;
        // round up to a multiple of n so grid_px stays divisible by n
        let grid_cells = grid_cells.div_ceil(n) * n;
        let mut grid_px = grid_cells * px_per_cell;
        if !(grid_px - n * px_per_cell).is_multiple_of(2) {
            grid_px += n * px_per_cell;
        }
        Self::new(
            n,
            cell_pitch,
            DEFAULT_WAIST_FRACTION * cell_pitch,
            grid_px,
            cell_pitch / px_per_cell as f64,
        )
    }

    /// Replace the waist, re-validating against the cell pitch.
    pub fn with_waist(self, waist: f64) -> Result<Self> {
        Self::new(self.n, self.cell_pitch, waist, self.grid_px, self.px_pitch)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell_pitch(&self) -> f64 {
        self.cell_pitch
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn grid_px(&self) -> usize {
        self.grid_px
    }

    pub fn px_pitch(&self) -> f64 {
        self.px_pitch
    }

    /// Samples per cell along one axis.
    pub fn cell_px(&self) -> usize {
        (self.cell_pitch / self.px_pitch).round() as usize
    }

    /// Pixels of margin between the grid edge and the lattice, per side.
    pub fn margin_px(&self) -> usize {
        (self.grid_px - self.n * self.cell_px()) / 2
    }

    /// Physical coordinate of sample `i` along either axis, measured from
    /// the grid center.
    pub fn px_coord(&self, i: usize) -> f64 {
        (i as f64 - (self.grid_px as f64 - 1.0) / 2.0) * self.px_pitch
    }

    /// Pixel range covered by cell index `idx` along either axis.
    pub fn cell_block(&self, idx: usize) -> Result<Range<usize>> {
        if idx >= self.n {
            return Err(Error::IndexOutOfRange {
                context: "lattice cell",
                index: idx,
                limit: self.n,
            });
        }
        let c = self.cell_px();
        let start = self.margin_px() + idx * c;
        Ok(start..start + c)
    }

    /// Total physical lattice width `n * cell_pitch`.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.cell_pitch
    }
}

/// Physical center of cell (k, j): k indexes x (columns), j indexes y (rows).
///
/// Centers are spaced by `cell_pitch` and symmetric about the grid center.
pub fn cell_center(layout: &LatticeLayout, j: usize, k: usize) -> Result<(f64, f64)> {
    let n = layout.n();
    if j >= n || k >= n {
        return Err(Error::IndexOutOfRange {
            context: "cell center",
            index: j.max(k),
            limit: n,
        });
    }
    let half = (n as f64 - 1.0) / 2.0;
    Ok((
        (k as f64 - half) * layout.cell_pitch(),
        (j as f64 - half) * layout.cell_pitch(),
    ))
}

/// 2D complex amplitude grid with physical pixel pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    amplitude: Array2<Complex64>,
    px_pitch: f64,
}

impl Field {
    pub fn new(amplitude: Array2<Complex64>, px_pitch: f64) -> Result<Self> {
        if amplitude.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidField("non-finite amplitude entries".into()));
        }
        if px_pitch <= 0.0 {
            return Err(Error::InvalidField("px_pitch must be positive".into()));
        }
        Ok(Self {
            amplitude,
            px_pitch,
        })
    }

    pub fn zeros(grid_px: usize, px_pitch: f64) -> Self {
        Self {
            amplitude: Array2::zeros((grid_px, grid_px)),
            px_pitch,
        }
    }

    pub fn amplitude(&self) -> &Array2<Complex64> {
        &self.amplitude
    }

    pub fn amplitude_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.amplitude
    }

    pub fn px_pitch(&self) -> f64 {
        self.px_pitch
    }

    /// Samples per axis (fields are square).
    pub fn grid_px(&self) -> usize {
        self.amplitude.nrows()
    }

    /// Total power: sum of |amplitude|^2 times the pixel area.
    pub fn power(&self) -> f64 {
        let area = self.px_pitch * self.px_pitch;
        self.amplitude.iter().map(|c| c.norm_sqr()).sum::<f64>() * area
    }

    /// Power restricted to a rectangular pixel region.
    pub fn region_power(&self, rows: Range<usize>, cols: Range<usize>) -> f64 {
        let area = self.px_pitch * self.px_pitch;
        let mut acc = 0.0;
        for r in rows {
            for c in cols.clone() {
                acc += self.amplitude[[r, c]].norm_sqr();
            }
        }
        acc * area
    }

    /// |amplitude|^2 per pixel.
    pub fn intensity(&self) -> Array2<f64> {
        self.amplitude.map(|c| c.norm_sqr())
    }

    /// Inner product `<self|other>` with the pixel-area measure.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        if self.amplitude.dim() != other.amplitude.dim() {
            return Err(Error::DimensionMismatch(format!(
                "field grids {:?} vs {:?}",
                self.amplitude.dim(),
                other.amplitude.dim()
            )));
        }
        let area = self.px_pitch * self.px_pitch;
        Ok(self
            .amplitude
            .iter()
            .zip(other.amplitude.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * area)
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.amplitude
            .iter()
            .zip(other.amplitude.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Normalized 1D profile of a cell mode along one axis: a Gaussian centered
/// on cell `idx`, hard-truncated to the cell block, zero elsewhere, with
/// unit 1D power under the pixel-pitch measure.
pub fn cell_profile_1d(layout: &LatticeLayout, idx: usize) -> Result<Vec<f64>> {
    let block = layout.cell_block(idx)?;
    let half = (layout.n() as f64 - 1.0) / 2.0;
    let center = (idx as f64 - half) * layout.cell_pitch();
    let w = layout.waist();
    let mut profile = vec![0.0; layout.grid_px()];
    for i in block {
        let d = layout.px_coord(i) - center;
        profile[i] = (-d * d / (w * w)).exp();
    }
    let norm = (profile.iter().map(|g| g * g).sum::<f64>() * layout.px_pitch()).sqrt();
    for g in &mut profile {
        *g /= norm;
    }
    Ok(profile)
}

/// Unit-power Gaussian mode of cell (k, j): the outer product of the 1D
/// y-profile of row j and the 1D x-profile of column k.
pub fn gaussian_cell_mode(layout: &LatticeLayout, j: usize, k: usize) -> Result<Field> {
    let yprof = cell_profile_1d(layout, j)?;
    let xprof = cell_profile_1d(layout, k)?;
    Ok(outer_field(layout, &yprof, &xprof))
}

/// Equal-amplitude, zero-phase superposition of all N^2 cell modes with unit
/// total power.
pub fn uniform_lattice(layout: &LatticeLayout) -> Result<Field> {
    let n = layout.n();
    let mut ysum = vec![0.0; layout.grid_px()];
    let mut xsum = vec![0.0; layout.grid_px()];
    for idx in 0..n {
        let p = cell_profile_1d(layout, idx)?;
        for (acc, v) in ysum.iter_mut().zip(&p) {
            *acc += v;
        }
    }
    xsum.copy_from_slice(&ysum);
    let scale = 1.0 / n as f64;
    let mut field = outer_field(layout, &ysum, &xsum);
    field.amplitude.map_inplace(|c| *c *= scale);
    Ok(field)
}

/// Real outer product `y x^T` as a complex field on the layout grid.
fn outer_field(layout: &LatticeLayout, yprof: &[f64], xprof: &[f64]) -> Field {
    let g = layout.grid_px();
    let mut amplitude = Array2::zeros((g, g));
    for (r, &y) in yprof.iter().enumerate() {
        if y == 0.0 {
            continue;
        }
        for (c, &x) in xprof.iter().enumerate() {
            amplitude[[r, c]] = Complex64::new(y * x, 0.0);
        }
    }
    Field {
        amplitude,
        px_pitch: layout.px_pitch(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn mm(v: f64) -> f64 {
        v * 1e-3
    }

    #[test]
    fn layout_invariants_are_enforced() {
        assert!(LatticeLayout::new(1, 1e-3, 1e-4, 64, 1e-3 / 64.0).is_err());
        // grid not divisible by n
        assert!(LatticeLayout::new(3, 1e-3, 1e-4, 64, 1e-3 / 32.0).is_err());
        // waist too large
        assert!(LatticeLayout::new(2, 1e-3, 6e-4, 128, 1e-3 / 64.0).is_err());
        // lattice larger than grid
        assert!(LatticeLayout::new(4, 1e-3, 1e-4, 64, 1e-3 / 64.0).is_err());
        assert!(LatticeLayout::with_defaults(4).is_ok());
    }

    #[test]
    fn cell_centers_symmetric_for_n2() {
        let layout = LatticeLayout::from_cells(2, mm(1.0), 64).unwrap();
        let (x, y) = cell_center(&layout, 0, 0).unwrap();
        assert_abs_diff_eq!(x, -mm(0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(y, -mm(0.5), epsilon = 1e-15);
        let (x, y) = cell_center(&layout, 1, 1).unwrap();
        assert_abs_diff_eq!(x, mm(0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(y, mm(0.5), epsilon = 1e-15);
    }

    #[test]
    fn cell_center_matches_pixel_block_midpoint_oracle() {
        // independent oracle: the midpoint of the first and last pixel
        // coordinates of the cell's block
        let layout = LatticeLayout::from_cells(4, mm(1.0), 64).unwrap();
        for (j, k) in [(2usize, 1usize), (0, 3), (3, 0)] {
            let (x, y) = cell_center(&layout, j, k).unwrap();
            let xb = layout.cell_block(k).unwrap();
            let yb = layout.cell_block(j).unwrap();
            let mid = |b: &std::ops::Range<usize>| {
                (layout.px_coord(b.start) + layout.px_coord(b.end - 1)) / 2.0
            };
            assert_abs_diff_eq!(x, mid(&xb), epsilon = 1e-12);
            assert_abs_diff_eq!(y, mid(&yb), epsilon = 1e-12);
        }
    }

    #[test]
    fn cell_center_rejects_out_of_range() {
        let layout = LatticeLayout::with_defaults(2).unwrap();
        assert!(cell_center(&layout, 2, 0).is_err());
        assert!(cell_center(&layout, 0, 2).is_err());
    }

    #[test]
    fn mode_is_separable_and_matches_direct_formula() {
        let layout = LatticeLayout::with_defaults(3).unwrap();
        let mode = gaussian_cell_mode(&layout, 1, 2).unwrap();
        // direct, unfactored 2D evaluation
        let (xc, yc) = cell_center(&layout, 1, 2).unwrap();
        let w = layout.waist();
        let xb = layout.cell_block(2).unwrap();
        let yb = layout.cell_block(1).unwrap();
        let mut direct = Array2::<Complex64>::zeros((layout.grid_px(), layout.grid_px()));
        for r in yb.clone() {
            for c in xb.clone() {
                let dx = layout.px_coord(c) - xc;
                let dy = layout.px_coord(r) - yc;
                direct[[r, c]] =
                    Complex64::new((-(dx * dx + dy * dy) / (w * w)).exp(), 0.0);
            }
        }
        let norm = (direct.iter().map(|c| c.norm_sqr()).sum::<f64>()
            * layout.px_pitch()
            * layout.px_pitch())
        .sqrt();
        direct.map_inplace(|c| *c /= norm);
        let direct = Field::new(direct, layout.px_pitch()).unwrap();
        let peak = mode.amplitude().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(mode.max_abs_diff(&direct) < 1e-12 * peak);
    }

    #[test]
    fn modes_have_unit_power() {
        let layout = LatticeLayout::with_defaults(4).unwrap();
        for (j, k) in [(0, 0), (3, 1), (2, 2)] {
            let mode = gaussian_cell_mode(&layout, j, k).unwrap();
            assert_abs_diff_eq!(mode.power(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn distinct_modes_are_orthogonal_exactly() {
        let layout = LatticeLayout::with_defaults(2).unwrap();
        let a = gaussian_cell_mode(&layout, 0, 0).unwrap();
        let b = gaussian_cell_mode(&layout, 0, 1).unwrap();
        let c = gaussian_cell_mode(&layout, 1, 0).unwrap();
        // disjoint supports: the inner products are exactly zero
        assert_eq!(a.inner(&b).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(a.inner(&c).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(b.inner(&c).unwrap(), Complex64::new(0.0, 0.0));
    }

    /// Simpson quadrature on a uniform grid.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
        let n = intervals + intervals % 2; // even
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn in_cell_power_fraction_matches_quadrature_oracle() {
        // waist = pitch/4: fraction of the untruncated Gaussian's power kept
        // by the hard truncation, checked per axis against Simpson quadrature
        let layout = LatticeLayout::with_defaults(2).unwrap();
        let a = layout.cell_pitch();
        let w = layout.waist();
        let untruncated_1d = w * (PI / 2.0).sqrt(); // integral of exp(-2x^2/w^2) over R
        let truncated_1d = simpson(|x| (-2.0 * x * x / (w * w)).exp(), -a / 2.0, a / 2.0, 4000);
        let oracle_fraction = truncated_1d / untruncated_1d;
        assert!(oracle_fraction > 0.999 && oracle_fraction < 1.0);

        // grid-side: Riemann sum of the sampled truncated Gaussian over one axis
        let block = layout.cell_block(0).unwrap();
        let center = cell_center(&layout, 0, 0).unwrap().0;
        let grid_sum: f64 = block
            .map(|i| {
                let d = layout.px_coord(i) - center;
                (-2.0 * d * d / (w * w)).exp()
            })
            .sum::<f64>()
            * layout.px_pitch();
        let grid_fraction = grid_sum / untruncated_1d;
        assert_abs_diff_eq!(grid_fraction, oracle_fraction, epsilon = 5e-4);
    }

    #[test]
    fn uniform_lattice_has_equal_cell_powers() {
        for n in [2usize, 4, 8] {
            let layout = LatticeLayout::with_defaults(n).unwrap();
            let field = uniform_lattice(&layout).unwrap();
            assert_abs_diff_eq!(field.power(), 1.0, epsilon = 1e-12);
            let expected = 1.0 / (n * n) as f64;
            for j in 0..n {
                for k in 0..n {
                    let p = field.region_power(
                        layout.cell_block(j).unwrap(),
                        layout.cell_block(k).unwrap(),
                    );
                    assert_abs_diff_eq!(p, expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn uniform_lattice_equals_mode_sum() {
        let layout = LatticeLayout::with_defaults(3).unwrap();
        let uniform = uniform_lattice(&layout).unwrap();
        let mut sum = Field::zeros(layout.grid_px(), layout.px_pitch());
        for j in 0..3 {
            for k in 0..3 {
                let mode = gaussian_cell_mode(&layout, j, k).unwrap();
                sum.amplitude_mut().zip_mut_with(mode.amplitude(), |a, b| {
                    *a += b / 3.0;
                });
            }
        }
        assert!(uniform.max_abs_diff(&sum) < 1e-12);
    }

    #[test]
    fn margin_layout_centers_lattice() {
        // 2 cells of 64 px in a 256 px grid: 64 px margin per side
        let layout = LatticeLayout::new(2, mm(1.0), mm(0.25), 256, mm(1.0) / 64.0).unwrap();
        assert_eq!(layout.margin_px(), 64);
        assert_eq!(layout.cell_block(0).unwrap(), 64..128);
        let (x, _) = cell_center(&layout, 0, 0).unwrap();
        assert_abs_diff_eq!(x, -mm(0.5), epsilon = 1e-15);
    }
}
