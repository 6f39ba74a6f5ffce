//! Uniform centered sampling lattices for position and transverse-momentum space.
//!
//! A [`GridSpec`] fixes both lattices at once: position samples sit at
//! `x = (i - n/2) * dx` and the conjugate momentum samples at
//! `q = (m - n/2) * dq` with `dq = 2*pi / (n * dx)`. The zero of either
//! coordinate is the sample at index `n/2`, so the parity map `x -> -x`
//! is an exact permutation of the lattice (index 0, the Nyquist row, is
//! self-paired).

use crate::error::{Error, Result};

/// Sampling lattice shared by a field's position and momentum representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    centered: bool,
}

impl GridSpec {
    /// Minimum samples per axis; parity mapping also requires even counts.
    pub const MIN_SAMPLES: usize = 8;

    /// Build a centered grid. Sample counts must be even and at least 8;
    /// pitches must be positive and finite.
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        if nx < Self::MIN_SAMPLES || ny < Self::MIN_SAMPLES {
            return Err(Error::InvalidGrid {
                reason: format!("nx={nx}, ny={ny}: need at least {} per axis", Self::MIN_SAMPLES),
            });
        }
        if nx % 2 != 0 || ny % 2 != 0 {
            return Err(Error::InvalidGrid {
                reason: format!("nx={nx}, ny={ny}: sample counts must be even"),
            });
        }
        if !(dx.is_finite() && dy.is_finite()) || dx <= 0.0 || dy <= 0.0 {
            return Err(Error::InvalidGrid {
                reason: format!("dx={dx}, dy={dy}: pitches must be positive and finite"),
            });
        }
        Ok(Self { nx, ny, dx, dy, centered: true })
    }

    /// Square grid with equal pitch on both axes.
    pub fn square(n: usize, d: f64) -> Result<Self> {
        Self::new(n, n, d, d)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// True when index (nx/2, ny/2) maps to the coordinate origin.
    pub fn centered(&self) -> bool {
        self.centered
    }

    /// Total sample count.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Momentum pitch conjugate to `dx`.
    pub fn dqx(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.nx as f64 * self.dx)
    }

    /// Momentum pitch conjugate to `dy`.
    pub fn dqy(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.ny as f64 * self.dy)
    }

    /// Position cell area.
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Momentum cell area.
    pub fn momentum_cell_area(&self) -> f64 {
        self.dqx() * self.dqy()
    }

    /// Position coordinate of column `ix`.
    pub fn x(&self, ix: usize) -> f64 {
        (ix as f64 - (self.nx / 2) as f64) * self.dx
    }

    /// Position coordinate of row `iy`.
    pub fn y(&self, iy: usize) -> f64 {
        (iy as f64 - (self.ny / 2) as f64) * self.dy
    }

    /// Momentum coordinate of column `ix`.
    pub fn qx(&self, ix: usize) -> f64 {
        (ix as f64 - (self.nx / 2) as f64) * self.dqx()
    }

    /// Momentum coordinate of row `iy`.
    pub fn qy(&self, iy: usize) -> f64 {
        (iy as f64 - (self.ny / 2) as f64) * self.dqy()
    }

    /// Largest position coordinate magnitude on the lattice.
    pub fn x_max(&self) -> f64 {
        (self.nx / 2) as f64 * self.dx
    }

    /// Largest momentum coordinate magnitude on the x axis.
    pub fn qx_max(&self) -> f64 {
        (self.nx / 2) as f64 * self.dqx()
    }

    /// Row-major flat index.
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Index of the sample at the parity image of (ix, iy). The center is
    /// fixed and index 0 on each axis is self-paired.
    #[inline]
    pub fn mirror_idx(&self, ix: usize, iy: usize) -> usize {
        let mx = if ix == 0 { 0 } else { self.nx - ix };
        let my = if iy == 0 { 0 } else { self.ny - iy };
        my * self.nx + mx
    }

    /// Column index of the sample closest to position `x`, clamped to the lattice.
    pub fn ix_of_x(&self, x: f64) -> usize {
        let i = (x / self.dx).round() + (self.nx / 2) as f64;
        i.clamp(0.0, (self.nx - 1) as f64) as usize
    }

    /// Row index of the sample closest to position `y`, clamped to the lattice.
    pub fn iy_of_y(&self, y: f64) -> usize {
        let i = (y / self.dy).round() + (self.ny / 2) as f64;
        i.clamp(0.0, (self.ny - 1) as f64) as usize
    }

    /// True when `other` samples the same lattice.
    pub fn same_lattice(&self, other: &GridSpec) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.dy - other.dy).abs() <= 1e-12 * self.dy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_grids() {
        assert!(GridSpec::new(7, 8, 1.0, 1.0).is_err());
        assert!(GridSpec::new(8, 9, 1.0, 1.0).is_err());
        assert!(GridSpec::new(4, 4, 1.0, 1.0).is_err());
        assert!(GridSpec::new(8, 8, 0.0, 1.0).is_err());
        assert!(GridSpec::new(8, 8, 1.0, f64::NAN).is_err());
        assert!(GridSpec::new(8, 8, 1.0, 1.0).is_ok());
    }

    #[test]
    fn center_is_origin() {
        let g = GridSpec::square(16, 0.5).unwrap();
        assert_eq!(g.x(8), 0.0);
        assert_eq!(g.y(8), 0.0);
        assert_eq!(g.qx(8), 0.0);
        assert!(g.centered());
    }

    #[test]
    fn conjugate_pitch() {
        let g = GridSpec::new(32, 16, 0.25, 0.5).unwrap();
        assert!((g.dqx() - 2.0 * std::f64::consts::PI / (32.0 * 0.25)).abs() < 1e-15);
        assert!((g.dqy() - 2.0 * std::f64::consts::PI / (16.0 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn mirror_is_involution_with_fixed_center() {
        let g = GridSpec::square(8, 1.0).unwrap();
        // center fixed
        assert_eq!(g.mirror_idx(4, 4), g.idx(4, 4));
        // Nyquist row self-paired
        assert_eq!(g.mirror_idx(0, 0), g.idx(0, 0));
        for iy in 0..8 {
            for ix in 0..8 {
                let m = g.mirror_idx(ix, iy);
                let (mx, my) = (m % 8, m / 8);
                assert_eq!(g.mirror_idx(mx, my), g.idx(ix, iy));
                // coordinates negate exactly (Nyquist aliases to itself)
                if ix != 0 && iy != 0 {
                    assert_eq!(g.x(mx), -g.x(ix));
                    assert_eq!(g.y(my), -g.y(iy));
                }
            }
        }
    }
}
