//! Sampled complex amplitudes and the transforms between position space and
//! the angular-spectrum (transverse-momentum) representation.
//!
//! The angular spectrum of a field E(rho) is
//!
//! `phi(q) = (1/2pi) integral d rho E(rho) exp(-i q . rho)`
//!
//! with the inverse carrying `exp(+i q . rho)` and the same 1/(2 pi). This
//! is the unitary convention in two dimensions: the discrete transforms below
//! preserve the L2 norm exactly up to rounding, with the position measure
//! dx dy on one side and dqx dqy on the other.

use crate::error::{Error, Result};
use crate::fft::centered_fft2;
use crate::grid::GridSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which lattice a field's samples live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Position,
    Momentum,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::Position => "position",
            Domain::Momentum => "momentum",
        }
    }
}

/// A 2D complex amplitude sampled on a uniform centered grid, tagged with its
/// representation and the wavenumber of the light it describes.
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: GridSpec,
    domain: Domain,
    k: f64,
    samples: Vec<Complex64>,
}

impl ComplexField {
    /// Wrap a sample buffer, checking length and finiteness.
    pub fn try_new(grid: GridSpec, domain: Domain, k: f64, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid {
                reason: format!("sample count {} != grid {}", samples.len(), grid.len()),
            });
        }
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("wavenumber must be positive and finite, got {k}"),
            });
        }
        let f = Self { grid, domain, k, samples };
        f.check_finite("ComplexField::try_new")?;
        Ok(f)
    }

    /// All-zero field.
    pub fn zeros(grid: GridSpec, domain: Domain, k: f64) -> Self {
        Self {
            grid,
            domain,
            k,
            samples: vec![Complex64::default(); grid.len()],
        }
    }

    /// Build from a closure over the domain's own coordinates (x, y) or (qx, qy).
    pub fn from_fn(
        grid: GridSpec,
        domain: Domain,
        k: f64,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Self {
        let mut samples = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let (u, v) = match domain {
                    Domain::Position => (grid.x(ix), grid.y(iy)),
                    Domain::Momentum => (grid.qx(ix), grid.qy(iy)),
                };
                samples.push(f(u, v));
            }
        }
        Self { grid, domain, k, samples }
    }

    /// Discrete delta at the lattice point nearest (x0, y0): one sample of
    /// value 1/(cell area), zero elsewhere. Its spectrum has constant modulus
    /// 1/(2 pi).
    pub fn delta_at(grid: GridSpec, k: f64, x0: f64, y0: f64) -> Self {
        let mut f = Self::zeros(grid, Domain::Position, k);
        let ix = grid.ix_of_x(x0);
        let iy = grid.iy_of_y(y0);
        f.samples[grid.idx(ix, iy)] = Complex64::new(1.0 / grid.cell_area(), 0.0);
        f
    }

    /// Gaussian amplitude exp(-rho^2 / w^2) with flat phase, centered at (x0, y0).
    pub fn gaussian(grid: GridSpec, k: f64, waist: f64, x0: f64, y0: f64) -> Self {
        Self::from_fn(grid, Domain::Position, k, |x, y| {
            let r2 = (x - x0).powi(2) + (y - y0).powi(2);
            Complex64::new((-r2 / (waist * waist)).exp(), 0.0)
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// Sample at column ix, row iy.
    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.samples[self.grid.idx(ix, iy)]
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        if self.samples.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { context })
        }
    }

    fn cell_measure(&self) -> f64 {
        match self.domain {
            Domain::Position => self.grid.cell_area(),
            Domain::Momentum => self.grid.momentum_cell_area(),
        }
    }

    /// L2 norm squared: sum |f|^2 times the cell area of the field's own domain.
    pub fn norm2(&self) -> f64 {
        let m = self.cell_measure();
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * m
    }

    /// Inner product sum conj(f) g times cell area. Both fields must share the
    /// grid and domain.
    pub fn overlap(&self, other: &ComplexField) -> Result<Complex64> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch { context: "overlap operands" });
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        let m = self.cell_measure();
        let acc: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(acc * m)
    }

    /// Angular spectrum of a position-space field.
    pub fn to_momentum(&self) -> Result<ComplexField> {
        if self.domain != Domain::Position {
            return Err(Error::DomainMismatch {
                expected: "position",
                found: self.domain.name(),
            });
        }
        let mut samples = self.samples.clone();
        centered_fft2(&mut samples, self.grid.nx(), self.grid.ny(), false);
        let scale = self.grid.cell_area() / (2.0 * PI);
        for c in &mut samples {
            *c *= scale;
        }
        Ok(ComplexField {
            grid: self.grid,
            domain: Domain::Momentum,
            k: self.k,
            samples,
        })
    }

    /// Position-space field of an angular spectrum. Exact inverse of
    /// [`ComplexField::to_momentum`] on the lattice.
    pub fn to_position(&self) -> Result<ComplexField> {
        if self.domain != Domain::Momentum {
            return Err(Error::DomainMismatch {
                expected: "momentum",
                found: self.domain.name(),
            });
        }
        let mut samples = self.samples.clone();
        centered_fft2(&mut samples, self.grid.nx(), self.grid.ny(), true);
        let scale = self.grid.momentum_cell_area() / (2.0 * PI);
        for c in &mut samples {
            *c *= scale;
        }
        Ok(ComplexField {
            grid: self.grid,
            domain: Domain::Position,
            k: self.k,
            samples,
        })
    }

    /// The field in the requested representation (no-op if already there).
    pub fn into_domain(self, domain: Domain) -> Result<ComplexField> {
        if self.domain == domain {
            return Ok(self);
        }
        match domain {
            Domain::Momentum => self.to_momentum(),
            Domain::Position => self.to_position(),
        }
    }

    /// Parity image: sample values at the lattice map of -rho (or -q).
    pub fn mirrored(&self) -> ComplexField {
        let g = &self.grid;
        let mut samples = vec![Complex64::default(); g.len()];
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                samples[g.idx(ix, iy)] = self.samples[g.mirror_idx(ix, iy)];
            }
        }
        ComplexField {
            grid: self.grid,
            domain: self.domain,
            k: self.k,
            samples,
        }
    }

    /// Complex conjugate of every sample (in the current representation).
    pub fn conjugated(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            domain: self.domain,
            k: self.k,
            samples: self.samples.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Copy scaled to unit L2 norm.
    pub fn normalized(&self) -> Result<ComplexField> {
        let n2 = self.norm2();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::ZeroField { context: "normalize" });
        }
        let s = 1.0 / n2.sqrt();
        Ok(ComplexField {
            grid: self.grid,
            domain: self.domain,
            k: self.k,
            samples: self.samples.iter().map(|c| c * s).collect(),
        })
    }

    /// Pointwise product with another field on the same grid and domain.
    pub fn pointwise_mul(&self, other: &ComplexField) -> Result<ComplexField> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch { context: "pointwise product operands" });
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        Ok(ComplexField {
            grid: self.grid,
            domain: self.domain,
            k: self.k,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// a*self + b*other.
    pub fn linear_combination(
        &self,
        a: Complex64,
        other: &ComplexField,
        b: Complex64,
    ) -> Result<ComplexField> {
        if !self.grid.same_lattice(&other.grid) || self.domain != other.domain {
            return Err(Error::GridMismatch { context: "linear combination operands" });
        }
        Ok(ComplexField {
            grid: self.grid,
            domain: self.domain,
            k: self.k,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Squared modulus as a real map.
    pub fn intensity(&self) -> RealField {
        RealField {
            grid: self.grid,
            samples: self.samples.iter().map(|c| c.norm_sqr()).collect(),
        }
    }

    /// Relative L2 distance to another field on the same lattice/domain.
    pub fn rel_l2_distance(&self, other: &ComplexField) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.samples.iter().zip(&other.samples) {
            num += (a - b).norm_sqr();
            den += a.norm_sqr();
        }
        if den == 0.0 {
            return if num == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (num / den).sqrt()
    }
}

/// A real-valued map (intensity, weight) on the same lattices as [`ComplexField`].
#[derive(Debug, Clone)]
pub struct RealField {
    grid: GridSpec,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid {
                reason: format!("sample count {} != grid {}", samples.len(), grid.len()),
            });
        }
        if !samples.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { context: "RealField::new" });
        }
        Ok(Self { grid, samples })
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self { grid, samples: vec![value; grid.len()] }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.samples[self.grid.idx(ix, iy)]
    }

    pub fn total_power(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Scale so the lattice integral (sum times cell area) is one.
    pub fn unit_total_power(mut self) -> Result<Self> {
        let p = self.total_power();
        if p <= 0.0 || !p.is_finite() {
            return Err(Error::ZeroField { context: "unit_total_power" });
        }
        for v in &mut self.samples {
            *v /= p;
        }
        Ok(self)
    }

    /// Scale so the sample mean is one.
    pub fn unit_mean(mut self) -> Result<Self> {
        let m = self.mean();
        if m <= 0.0 || !m.is_finite() {
            return Err(Error::ZeroField { context: "unit_mean" });
        }
        for v in &mut self.samples {
            *v /= m;
        }
        Ok(self)
    }

    /// a*self + b*other on the same lattice.
    pub fn axpy(&self, a: f64, other: &RealField, b: f64) -> Result<RealField> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch { context: "real-field combination" });
        }
        Ok(RealField {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// The row of values at the grid's central y (iy = ny/2).
    pub fn central_row(&self) -> Vec<f64> {
        let iy = self.grid.ny() / 2;
        (0..self.grid.nx()).map(|ix| self.at(ix, iy)).collect()
    }

    /// Relative L2 distance to another map.
    pub fn rel_l2_distance(&self, other: &RealField) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.samples.iter().zip(&other.samples) {
            num += (a - b) * (a - b);
            den += a * a;
        }
        if den == 0.0 {
            return if num == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (num / den).sqrt()
    }

    /// Largest absolute pointwise difference divided by this map's peak.
    pub fn peak_abs_residual(&self, other: &RealField) -> f64 {
        let peak = self.max().max(1e-300);
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / peak
    }

    /// Second central moment of the distribution along x, weighting every row.
    pub fn second_moment_x(&self) -> f64 {
        let mut w = 0.0;
        let mut mx = 0.0;
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                let v = self.at(ix, iy);
                w += v;
                mx += v * self.grid.x(ix);
            }
        }
        if w <= 0.0 {
            return 0.0;
        }
        let cx = mx / w;
        let mut acc = 0.0;
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                let d = self.grid.x(ix) - cx;
                acc += self.at(ix, iy) * d * d;
            }
        }
        acc / w
    }

    /// Spot width along x: twice the root of the second central moment.
    pub fn spot_width_x(&self) -> f64 {
        2.0 * self.second_moment_x().sqrt()
    }

    /// Centroid (x, y) of the distribution.
    pub fn centroid(&self) -> (f64, f64) {
        let mut w = 0.0;
        let mut mx = 0.0;
        let mut my = 0.0;
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                let v = self.at(ix, iy);
                w += v;
                mx += v * self.grid.x(ix);
                my += v * self.grid.y(iy);
            }
        }
        if w <= 0.0 {
            (0.0, 0.0)
        } else {
            (mx / w, my / w)
        }
    }

    /// Index (ix, iy) of the largest sample.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0usize, 0usize);
        let mut bv = f64::NEG_INFINITY;
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                let v = self.at(ix, iy);
                if v > bv {
                    bv = v;
                    best = (ix, iy);
                }
            }
        }
        best
    }

    /// Relative standard deviation over the centered window covering the
    /// given fraction of each axis.
    pub fn rel_std_central_window(&self, fraction: f64) -> f64 {
        let nx = self.grid.nx();
        let ny = self.grid.ny();
        let wx = ((nx as f64 * fraction) as usize).max(1);
        let wy = ((ny as f64 * fraction) as usize).max(1);
        let x0 = (nx - wx) / 2;
        let y0 = (ny - wy) / 2;
        let mut vals = Vec::with_capacity(wx * wy);
        for iy in y0..y0 + wy {
            for ix in x0..x0 + wx {
                vals.push(self.at(ix, iy));
            }
        }
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        if mean == 0.0 {
            return 0.0;
        }
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        var.sqrt() / mean.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_grid() -> GridSpec {
        GridSpec::square(32, 0.5).unwrap()
    }

    #[test]
    fn delta_has_flat_spectrum_of_modulus_one_over_two_pi() {
        let g = test_grid();
        let d = ComplexField::delta_at(g, 1.0, 0.0, 0.0);
        let s = d.to_momentum().unwrap();
        let expect = 1.0 / (2.0 * PI);
        for c in s.samples() {
            assert!((c.norm() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn norm2_of_single_unit_sample() {
        let g = GridSpec::square(8, 1.0).unwrap();
        let mut f = ComplexField::zeros(g, Domain::Position, 1.0);
        f.samples_mut()[g.idx(3, 5)] = Complex64::new(1.0, 0.0);
        assert!((f.norm2() - 1.0).abs() < 1e-15);
        let zero = ComplexField::zeros(g, Domain::Position, 1.0);
        assert_eq!(zero.norm2(), 0.0);
    }

    #[test]
    fn round_trip_is_identity() {
        let g = test_grid();
        let f = ComplexField::from_fn(g, Domain::Position, 1.0, |x, y| {
            Complex64::new((x * 1.3).sin() + 0.2, (y * 0.7).cos())
        });
        let back = f.to_momentum().unwrap().to_position().unwrap();
        assert!(f.rel_l2_distance(&back) < 1e-13);
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let g = test_grid();
        let f = ComplexField::zeros(g, Domain::Momentum, 1.0);
        assert!(matches!(f.to_momentum(), Err(Error::DomainMismatch { .. })));
        let f = ComplexField::zeros(g, Domain::Position, 1.0);
        assert!(matches!(f.to_position(), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn overlap_is_conjugate_symmetric_and_matches_norm2() {
        let g = test_grid();
        let f = ComplexField::from_fn(g, Domain::Position, 1.0, |x, y| {
            Complex64::new(x - 0.1 * y, 0.3 * y)
        });
        let h = ComplexField::from_fn(g, Domain::Position, 1.0, |x, y| {
            Complex64::new((y * 0.9).cos(), (x * 0.4).sin())
        });
        let fg = f.overlap(&h).unwrap();
        let gf = h.overlap(&f).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-12 * fg.norm().max(1.0));
        let ff = f.overlap(&f).unwrap();
        assert!((ff.im).abs() < 1e-12 * ff.re.abs());
        assert!((ff.re - f.norm2()).abs() < 1e-12 * f.norm2());
    }

    #[test]
    fn orthogonal_one_hot_fields_overlap_to_zero() {
        let g = GridSpec::square(8, 1.0).unwrap();
        let mut a = ComplexField::zeros(g, Domain::Position, 1.0);
        let mut b = ComplexField::zeros(g, Domain::Position, 1.0);
        a.samples_mut()[3] = Complex64::new(1.0, 0.0);
        b.samples_mut()[4] = Complex64::new(0.0, 1.0);
        assert_eq!(a.overlap(&b).unwrap(), Complex64::default());
    }

    // Conjugating the spectrum then returning to position space lands on the
    // mirrored conjugate of the position profile; this exact lattice identity
    // is what lets the crystal reflection be written either way.
    #[test]
    fn spectrum_conjugation_is_mirrored_position_conjugation() {
        let g = test_grid();
        let f = ComplexField::from_fn(g, Domain::Position, 1.0, |x, y| {
            Complex64::new((x * 0.9 - 0.2).cos() * (-y * y).exp(), (x * y * 0.3).sin())
        });
        let via_momentum = f
            .to_momentum()
            .unwrap()
            .conjugated()
            .to_position()
            .unwrap();
        let direct = f.conjugated().mirrored();
        assert!(via_momentum.rel_l2_distance(&direct) < 1e-13);
    }
}
