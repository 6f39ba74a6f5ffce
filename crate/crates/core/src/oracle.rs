//! Direct-quadrature evaluation of the projected two-photon amplitude.
//!
//! This path avoids the FFT pipeline entirely: the arm transfer functions
//! are expanded analytically into dense per-axis matrices on the momentum
//! lattice, the mode contraction and the pump cross-correlation are nested
//! Riemann sums with zero extension outside the sampled window, and the
//! return to position space is a dense centered transform. Costs grow as
//! the square of the total cell count, so grids are capped.

use crate::error::{Error, Result};
use crate::field::{ComplexField, Domain};
use crate::grid::GridSpec;
use crate::optics::{OpticalElement, OpticalSystem, PumpSpec};
use crate::pdc::ProjectionMode;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest total cell count the oracle accepts.
pub const ORACLE_MAX_CELLS: usize = 64 * 64;

/// Dense complex matrix, row-major.
struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::default(); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data }
    }

    fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut data = vec![Complex64::default(); n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self { n, data }
    }

    /// self * other.
    fn mul(&self, other: &CMat) -> CMat {
        let n = self.n;
        let mut data = vec![Complex64::default(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        CMat { n, data }
    }

    #[inline]
    fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }
}

/// Centered position-to-momentum kernel per axis: (dx/sqrt(2 pi)) exp(-i q_m x_j).
fn w_forward(n: usize, dx: f64, dq: f64) -> CMat {
    let h = (n / 2) as f64;
    let scale = dx / (2.0 * PI).sqrt();
    let mut data = vec![Complex64::default(); n * n];
    for m in 0..n {
        let q = (m as f64 - h) * dq;
        for j in 0..n {
            let x = (j as f64 - h) * dx;
            data[m * n + j] = Complex64::from_polar(scale, -q * x);
        }
    }
    CMat { n, data }
}

/// Centered momentum-to-position kernel per axis: (dq/sqrt(2 pi)) exp(+i q_m x_j).
fn w_inverse(n: usize, dx: f64, dq: f64) -> CMat {
    let h = (n / 2) as f64;
    let scale = dq / (2.0 * PI).sqrt();
    let mut data = vec![Complex64::default(); n * n];
    for j in 0..n {
        let x = (j as f64 - h) * dx;
        for m in 0..n {
            let q = (m as f64 - h) * dq;
            data[j * n + m] = Complex64::from_polar(scale, q * x);
        }
    }
    CMat { n, data }
}

enum Axis {
    X,
    Y,
}

fn axis_params(grid: &GridSpec, axis: &Axis) -> (usize, f64, f64) {
    match axis {
        Axis::X => (grid.nx(), grid.dx(), grid.dqx()),
        Axis::Y => (grid.ny(), grid.dy(), grid.dqy()),
    }
}

/// Rank-1 factorization T(x, y) = ty(y) * tx(x); errors if the mask does not
/// separate.
fn separate_mask(t: &ComplexField) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let g = t.grid();
    let mut best = (0usize, 0usize);
    let mut best_norm = 0.0;
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            let v = t.at(ix, iy).norm();
            if v > best_norm {
                best_norm = v;
                best = (ix, iy);
            }
        }
    }
    if best_norm == 0.0 {
        return Err(Error::ZeroField { context: "mask transmission" });
    }
    let (px, py) = best;
    let pivot = t.at(px, py);
    let tx: Vec<Complex64> = (0..g.nx()).map(|ix| t.at(ix, py)).collect();
    let ty: Vec<Complex64> = (0..g.ny()).map(|iy| t.at(px, iy) / pivot).collect();
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            let recon = tx[ix] * ty[iy];
            if (recon - t.at(ix, iy)).norm() > 1e-10 * best_norm {
                return Err(Error::NonSeparableMask);
            }
        }
    }
    Ok((tx, ty))
}

/// Momentum-basis matrix of one arm along one axis: the product of the
/// analytically expanded element kernels, first element applied first.
fn arm_axis_matrix(arm: &OpticalSystem, grid: &GridSpec, axis: Axis) -> Result<CMat> {
    let (n, d, dq) = axis_params(grid, &axis);
    let h = (n / 2) as f64;
    let k = arm.k();
    let mut total = CMat::identity(n);
    for element in arm.elements() {
        let m = match element {
            OpticalElement::FreeSpace { z } => {
                let chirp: Vec<Complex64> = (0..n)
                    .map(|i| {
                        let q = (i as f64 - h) * dq;
                        Complex64::from_polar(1.0, -q * q * z / (2.0 * k))
                    })
                    .collect();
                CMat::diag(&chirp)
            }
            OpticalElement::ThinLens { f } => {
                let lens: Vec<Complex64> = (0..n)
                    .map(|i| {
                        let x = (i as f64 - h) * d;
                        Complex64::from_polar(1.0, -k * x * x / (2.0 * f))
                    })
                    .collect();
                w_forward(n, d, dq)
                    .mul(&CMat::diag(&lens))
                    .mul(&w_inverse(n, d, dq))
            }
            OpticalElement::Mask { transmission } => {
                if !transmission.grid().same_lattice(grid) {
                    return Err(Error::GridMismatch { context: "oracle mask grid" });
                }
                let (tx, ty) = separate_mask(transmission)?;
                let factor = match axis {
                    Axis::X => tx,
                    Axis::Y => ty,
                };
                w_forward(n, d, dq)
                    .mul(&CMat::diag(&factor))
                    .mul(&w_inverse(n, d, dq))
            }
        };
        total = m.mul(&total);
    }
    Ok(total)
}

/// Apply a per-axis matrix along x (each row) and another along y (each
/// column) of a row-major nx-by-ny array. `transposed` contracts over the
/// matrix's first index instead of the second.
fn apply_separable(
    data: &[Complex64],
    nx: usize,
    ny: usize,
    mx: &CMat,
    my: &CMat,
    transposed: bool,
) -> Vec<Complex64> {
    let mut tmp = vec![Complex64::default(); nx * ny];
    for iy in 0..ny {
        for out_ix in 0..nx {
            let mut acc = Complex64::default();
            for j in 0..nx {
                let m = if transposed { mx.at(j, out_ix) } else { mx.at(out_ix, j) };
                acc += m * data[iy * nx + j];
            }
            tmp[iy * nx + out_ix] = acc;
        }
    }
    let mut out = vec![Complex64::default(); nx * ny];
    for ix in 0..nx {
        for out_iy in 0..ny {
            let mut acc = Complex64::default();
            for j in 0..ny {
                let m = if transposed { my.at(j, out_iy) } else { my.at(out_iy, j) };
                acc += m * tmp[j * nx + ix];
            }
            out[out_iy * nx + ix] = acc;
        }
    }
    out
}

pub(crate) fn spdc_amplitude_oracle_raw(
    phi: &ProjectionMode,
    h1: &OpticalSystem,
    pump: &PumpSpec,
    h2: &OpticalSystem,
    out_grid: GridSpec,
) -> Result<ComplexField> {
    let grid = *pump.grid();
    if grid.len() > ORACLE_MAX_CELLS {
        return Err(Error::QuadratureTooLarge { cells: grid.len(), max: ORACLE_MAX_CELLS });
    }
    if !phi.field().grid().same_lattice(&grid) {
        return Err(Error::GridMismatch { context: "oracle mode vs pump grid" });
    }
    if out_grid.nx() != grid.nx() || out_grid.ny() != grid.ny() {
        return Err(Error::GridMismatch { context: "oracle output grid shape" });
    }
    let (nx, ny) = (grid.nx(), grid.ny());

    let wx = w_forward(nx, grid.dx(), grid.dqx());
    let wy = w_forward(ny, grid.dy(), grid.dqy());

    // mode spectrum by dense transform, then conjugate
    let mode = phi.field();
    let phi_q: Vec<Complex64> = match mode.domain() {
        Domain::Momentum => mode.samples().to_vec(),
        Domain::Position => apply_separable(mode.samples(), nx, ny, &wx, &wy, false),
    };
    let phi_star: Vec<Complex64> = phi_q.iter().map(|c| c.conj()).collect();

    // contraction over the arm-1 output index: transposed matrices
    let h1x = arm_axis_matrix(h1, &grid, Axis::X)?;
    let h1y = arm_axis_matrix(h1, &grid, Axis::Y)?;
    let g1 = apply_separable(&phi_star, nx, ny, &h1x, &h1y, true);

    // pump angular spectrum by dense transform
    let v = apply_separable(pump.field_at_crystal().samples(), nx, ny, &wx, &wy, false);

    // m(q2) = sum_{q1} v(q1 + q2) g1(q1) dq1, zero outside the sampled window
    let measure = grid.momentum_cell_area();
    let (hx, hy) = (nx / 2, ny / 2);
    let mut m = vec![Complex64::default(); nx * ny];
    for i2y in 0..ny {
        for i2x in 0..nx {
            let mut acc = Complex64::default();
            for i1y in 0..ny {
                let ivy = i1y + i2y;
                if ivy < hy || ivy >= ny + hy {
                    continue;
                }
                let row_v = (ivy - hy) * nx;
                let row_g = i1y * nx;
                for i1x in 0..nx {
                    let ivx = i1x + i2x;
                    if ivx < hx || ivx >= nx + hx {
                        continue;
                    }
                    acc += v[row_v + (ivx - hx)] * g1[row_g + i1x];
                }
            }
            m[i2y * nx + i2x] = acc * measure;
        }
    }

    // arm 2 forward, then dense return to the requested position lattice
    let h2x = arm_axis_matrix(h2, &grid, Axis::X)?;
    let h2y = arm_axis_matrix(h2, &grid, Axis::Y)?;
    let s = apply_separable(&m, nx, ny, &h2x, &h2y, false);

    let ix_out = w_inverse(out_grid.nx(), out_grid.dx(), grid.dqx());
    let iy_out = w_inverse(out_grid.ny(), out_grid.dy(), grid.dqy());
    let out = apply_separable(&s, nx, ny, &ix_out, &iy_out, false);

    ComplexField::try_new(out_grid, Domain::Position, h2.k(), out)
}

/// Projected two-photon amplitude evaluated by literal nested quadrature,
/// normalized to unit L2 norm. Refuses grids above [`ORACLE_MAX_CELLS`] and
/// arm masks that do not separate along the axes.
pub fn spdc_amplitude_oracle(
    phi: &ProjectionMode,
    h1: &OpticalSystem,
    pump: &PumpSpec,
    h2: &OpticalSystem,
    out_grid: GridSpec,
) -> Result<ComplexField> {
    spdc_amplitude_oracle_raw(phi, h1, pump, h2, out_grid)?.normalized()
}
