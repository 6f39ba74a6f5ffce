//! Centered discrete Fourier kernels on even lattices.
//!
//! The engine's transform convention places the coordinate origin at index
//! n/2 on both lattices. With `x_j = (j - n/2) dx`, `q_m = (m - n/2) dq` and
//! `dq dx = 2 pi / n`, the centered sum
//!
//! `out_m = sum_j in_j exp(-i q_m x_j)`
//!
//! factors into pre/post sign twiddles around an ordinary FFT:
//!
//! `out_m = c_n (-1)^m FFT[(-1)^j in_j]_m`,   `c_n = (-1)^(n/2)`.
//!
//! Both directions use the same real constant `c_n` because the grid is even.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn rustfft::Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Unnormalized FFT along each row of a row-major nx-by-ny array, then along
/// each column. `inverse` selects the +i kernel. No scaling is applied.
pub(crate) fn fft2_inplace(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    debug_assert_eq!(data.len(), nx * ny);
    let row_fft = plan(nx, inverse);
    let mut scratch = vec![Complex64::default(); row_fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(nx) {
        row_fft.process_with_scratch(row, &mut scratch);
    }
    let col_fft = plan(ny, inverse);
    let mut col = vec![Complex64::default(); ny];
    let mut scratch = vec![Complex64::default(); col_fft.get_inplace_scratch_len()];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = data[iy * nx + ix];
        }
        col_fft.process_with_scratch(&mut col, &mut scratch);
        for iy in 0..ny {
            data[iy * nx + ix] = col[iy];
        }
    }
}

/// Centered transform kernel `sum_j in_j exp(-+i q_m x_j)` (sign `-` for
/// `inverse = false`). Output is the centered sum without any measure factor;
/// callers multiply by the appropriate cell measure and 1/(2 pi).
pub(crate) fn centered_fft2(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    // (-1)^(jx+jy) pre-twiddle
    for iy in 0..ny {
        for ix in 0..nx {
            if (ix + iy) % 2 == 1 {
                data[iy * nx + ix] = -data[iy * nx + ix];
            }
        }
    }
    fft2_inplace(data, nx, ny, inverse);
    // (-1)^(mx+my) post-twiddle and the real constant c_nx * c_ny
    let c = sign_half(nx) * sign_half(ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let s = if (ix + iy) % 2 == 1 { -c } else { c };
            data[iy * nx + ix] *= s;
        }
    }
}

/// (-1)^(n/2) for even n.
fn sign_half(n: usize) -> f64 {
    if (n / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalized 1D FFT used by the chirp-transform pieces.
pub(crate) fn fft_inplace(data: &mut [Complex64], inverse: bool) {
    let f = plan(data.len(), inverse);
    f.process(data);
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn centered_kernel_matches_direct_sum() {
        let (nx, ny) = (8, 10);
        let mut data: Vec<Complex64> = (0..nx * ny)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let reference = data.clone();
        centered_fft2(&mut data, nx, ny, false);
        // direct centered sum at a few probe points
        for &(mx, my) in &[(0usize, 0usize), (3, 7), (4, 5), (7, 9)] {
            let mut acc = Complex64::default();
            for jy in 0..ny {
                for jx in 0..nx {
                    let ph = -2.0 * std::f64::consts::PI
                        * ((mx as f64 - (nx / 2) as f64) * (jx as f64 - (nx / 2) as f64) / nx as f64
                            + (my as f64 - (ny / 2) as f64) * (jy as f64 - (ny / 2) as f64)
                                / ny as f64);
                    acc += reference[jy * nx + jx] * Complex64::from_polar(1.0, ph);
                }
            }
            let got = data[my * nx + mx];
            assert!((got - acc).norm() < 1e-10 * acc.norm().max(1.0));
        }
    }
}
