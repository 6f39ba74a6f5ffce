//! Fractional Fourier transform: the kernel, its realization by pump phase
//! curvature, and the geometry-to-order mapping.
//!
//! The order-alpha kernel on dimensionless variables is
//!
//! `F_a(u, u') = A_a exp{ (i/2)[cot(a) (u^2 + u'^2) - 2 u u' / sin(a)] }`
//!
//! with the unitary prefactor `A_a = sqrt((1 - i cot a) / 2 pi)` per axis.
//! Order pi/2 is the ordinary Fourier transform, pi is parity, 0 identity.
//! Evaluation factors into chirp multiply, a scaled Fourier sum (Bluestein's
//! chirp-z, exact for any output spacing), and a second chirp multiply.
//!
//! A converging Gaussian pump realizes this kernel in the two-photon
//! geometry: with detection planes at distance z and the pump waist a
//! distance -Z past the crystal, the order satisfies
//! `cos(a) = -(2 z / Z + 1)` and the length scale `s^2 = |Z| sin(a) / K`.
//! The sign convention keeps s^2 positive by taking the negative-order
//! branch and reporting |a|; intensities of the real apertures used here
//! are insensitive to the branch.

use crate::error::{Error, Result};
use crate::fft::fft_inplace;
use crate::field::{ComplexField, Domain, RealField};
use crate::grid::GridSpec;
use crate::pdc::ProjectionMode;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Exactness window for the analytic identity/parity limits.
const EXACT_MULTIPLE_TOL: f64 = 1e-14;
/// Orders closer than this to a multiple of pi (but not exactly on it) are
/// refused: cot and 1/sin lose all precision there.
const DEGENERATE_TOL: f64 = 1e-9;

/// Fractional order plus the length scale that maps physical coordinates to
/// the kernel's dimensionless ones.
#[derive(Debug, Clone, Copy)]
pub struct FrftParams {
    pub alpha: f64,
    pub s: f64,
}

impl FrftParams {
    pub fn new(alpha: f64, s: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "order must be finite".into(),
            });
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "s",
                reason: format!("scale must be positive, got {s}"),
            });
        }
        Ok(Self { alpha, s })
    }
}

/// Lensless-FRFT geometry: detection distance z, pump-waist offset Z
/// (crystal minus waist position, negative for a convergent pump), pump
/// wavenumber K and degenerate down-converted wavenumber k = K/2.
#[derive(Debug, Clone, Copy)]
pub struct FrftGeometry {
    pub z: f64,
    pub z_waist: f64,
    pub k_pump: f64,
    pub k: f64,
}

impl FrftGeometry {
    pub fn new(z: f64, z_waist: f64, k_pump: f64, k: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidGeometry {
                reason: format!("detection distance z must be positive, got {z}"),
            });
        }
        if !(z_waist < 0.0 && z_waist.is_finite()) {
            return Err(Error::InvalidGeometry {
                reason: format!("pump must converge at the crystal: Z < 0, got {z_waist}"),
            });
        }
        if !(k_pump > 0.0 && k > 0.0) {
            return Err(Error::InvalidGeometry { reason: "wavenumbers must be positive".into() });
        }
        if ((k - k_pump / 2.0) / k).abs() > 1e-9 {
            return Err(Error::InvalidGeometry {
                reason: format!("geometry assumes degeneracy k = K/2, got k={k}, K={k_pump}"),
            });
        }
        Ok(Self { z, z_waist, k_pump, k })
    }

    /// Waist offset realizing order `alpha` at detection distance `z`.
    pub fn waist_offset_for_alpha(z: f64, alpha: f64) -> f64 {
        -2.0 * z / (1.0 + alpha.cos())
    }
}

/// Order magnitude from the geometry: cos(alpha) = -(2 z / Z + 1).
pub fn alpha_from_geometry(g: &FrftGeometry) -> Result<f64> {
    let c = -(2.0 * g.z / g.z_waist + 1.0);
    if c.abs() > 1.0 + 1e-12 {
        return Err(Error::NoRealOrder { value: c.abs() });
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Dimensionalizing scale from the geometry: s = sqrt(|Z| sin(alpha) / K).
/// Verifies that the second defining relation holds to 1e-10.
pub fn scale_from_geometry(g: &FrftGeometry) -> Result<f64> {
    let alpha = alpha_from_geometry(g)?;
    let sin_a = alpha.sin();
    if sin_a.abs() < 1e-12 {
        return Err(Error::DegenerateOrder { alpha, tol: 1e-12 });
    }
    let s2 = g.z_waist.abs() * sin_a / g.k_pump;
    let lhs = (g.z / g.k + g.z_waist / g.k_pump) / s2;
    let rhs = alpha.cos() / sin_a;
    let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
    if residual > 1e-10 {
        return Err(Error::GeometryInconsistency { residual });
    }
    Ok(s2.sqrt())
}

/// How the order folds back onto the analytic limits.
enum Reduced {
    Identity,
    Parity,
    General(f64),
}

fn reduce_order(alpha: f64) -> Result<Reduced> {
    let mut r = alpha.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    if r.abs() <= EXACT_MULTIPLE_TOL {
        return Ok(Reduced::Identity);
    }
    if (r.abs() - PI).abs() <= EXACT_MULTIPLE_TOL {
        return Ok(Reduced::Parity);
    }
    if r.sin().abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateOrder { alpha, tol: DEGENERATE_TOL });
    }
    Ok(Reduced::General(r))
}

/// Apply a line operation along one axis of a row-major array.
fn for_each_line(
    data: &mut [Complex64],
    nx: usize,
    ny: usize,
    along_x: bool,
    mut op: impl FnMut(&mut Vec<Complex64>),
) {
    let n = if along_x { nx } else { ny };
    let lanes = if along_x { ny } else { nx };
    let mut line = vec![Complex64::default(); n];
    for lane in 0..lanes {
        for i in 0..n {
            let idx = if along_x { lane * nx + i } else { i * nx + lane };
            line[i] = data[idx];
        }
        op(&mut line);
        debug_assert_eq!(line.len(), n);
        for i in 0..n {
            let idx = if along_x { lane * nx + i } else { i * nx + lane };
            data[idx] = line[i];
        }
    }
}

/// Centered unitary 1D DFT: out_m = n^(-1/2) sum_j f_j exp(-+i 2 pi m'j'/n).
/// On the self-dual lattice this is exactly the order +-pi/2 transform.
fn centered_unitary_dft_line(line: &mut [Complex64], inverse: bool) {
    let n = line.len();
    for (j, v) in line.iter_mut().enumerate() {
        if j % 2 == 1 {
            *v = -*v;
        }
    }
    fft_inplace(line, inverse);
    let c = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let scale = c / (n as f64).sqrt();
    for (m, v) in line.iter_mut().enumerate() {
        *v *= if m % 2 == 1 { -scale } else { scale };
    }
}

/// Band-limited 2x upsample of a centered line (same window, half spacing).
fn upsample2_line(line: &[Complex64]) -> Vec<Complex64> {
    let n = line.len();
    let mut spec = line.to_vec();
    centered_unitary_dft_line(&mut spec, false);
    // embed the n centered bins into 2n centered bins
    let mut big = vec![Complex64::default(); 2 * n];
    big[n / 2..n / 2 + n].copy_from_slice(&spec);
    centered_unitary_dft_line(&mut big, true);
    // unitary scaling: power spreads over 2n samples, amplitude is sqrt(2)
    let s = (2.0f64).sqrt();
    for v in big.iter_mut() {
        *v *= s;
    }
    big
}

/// Kernel quadrature via Bluestein's chirp-z on an input lattice of spacing
/// `delta_in` (n_in points), evaluated on the output lattice of spacing
/// `delta_out` (n_out points). Exact rewrite of the direct sum.
fn bluestein_line(
    input: &[Complex64],
    delta_in: f64,
    n_out: usize,
    delta_out: f64,
    beta: f64,
) -> Vec<Complex64> {
    let n_in = input.len();
    let h_in = (n_in / 2) as f64;
    let h_out = (n_out / 2) as f64;
    let cot = beta.cos() / beta.sin();
    let theta = delta_in * delta_out / beta.sin();
    let prefactor = Complex64::new(1.0, -cot).sqrt() / (2.0 * PI).sqrt() * delta_in;

    let len = (2 * n_in + n_out).next_power_of_two();
    // a_j = f_j exp(i cot u_j^2 / 2) exp(-i theta j'^2 / 2)
    let mut a = vec![Complex64::default(); len];
    for j in 0..n_in {
        let jp = j as f64 - h_in;
        let u = jp * delta_in;
        let ph = 0.5 * cot * u * u - 0.5 * theta * jp * jp;
        a[j] = input[j] * Complex64::from_polar(1.0, ph);
    }
    // b_l = exp(i theta l^2 / 2) stored so that cyclic index (m - j) reads
    // offset l = m' - j' = (m - j) - h_out + h_in
    let shift = h_in as i64 - h_out as i64;
    let mut b = vec![Complex64::default(); len];
    let lo = -(n_in as i64 - 1) - h_out as i64 + h_in as i64;
    let hi = (n_out as i64 - 1) + h_in as i64 - h_out as i64;
    for l in lo..=hi {
        let v = Complex64::from_polar(1.0, 0.5 * theta * (l * l) as f64);
        b[(l - shift).rem_euclid(len as i64) as usize] = v;
    }
    fft_inplace(&mut a, false);
    fft_inplace(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_inplace(&mut a, true);
    let inv_len = 1.0 / len as f64;

    let mut out = vec![Complex64::default(); n_out];
    for (m, o) in out.iter_mut().enumerate() {
        let mp = m as f64 - h_out;
        let u = mp * delta_out;
        let conv = a[m] * inv_len;
        let ph = 0.5 * cot * u * u - 0.5 * theta * mp * mp;
        *o = prefactor * Complex64::from_polar(1.0, ph) * conv;
    }
    out
}

/// In-band single-axis transform: 2x band-limited upsampling keeps the
/// chirped integrand below the lattice bandwidth, then the chirp-z sum.
fn frft_line_in_band(line: &[Complex64], delta: f64, beta: f64, upsample: bool) -> Vec<Complex64> {
    if upsample {
        let fine = upsample2_line(line);
        bluestein_line(&fine, delta / 2.0, line.len(), delta, beta)
    } else {
        bluestein_line(line, delta, line.len(), delta, beta)
    }
}

/// Reference phase calibration: the unit Gaussian exp(-u^2/2) is the
/// invariant eigenfunction of every fractional order, which pins the
/// metaplectic phase branch of the composed pipeline.
fn phase_calibration(n: usize, delta: f64, beta: f64, upsample: bool) -> Complex64 {
    let h = (n / 2) as f64;
    let reference: Vec<Complex64> = (0..n)
        .map(|i| {
            let u = (i as f64 - h) * delta;
            Complex64::new((-0.5 * u * u).exp(), 0.0)
        })
        .collect();
    let transformed = frft_line_in_band(&reference, delta, beta, upsample);
    let overlap: Complex64 = reference
        .iter()
        .zip(&transformed)
        .map(|(r, t)| r.conj() * t)
        .sum();
    if overlap.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, -overlap.arg())
    }
}

fn is_self_dual(n: usize, delta: f64) -> bool {
    (delta * delta * n as f64 / (2.0 * PI) - 1.0).abs() < 1e-9
}

/// One-axis general-order transform with order reduction on self-dual
/// lattices: out-of-band orders split off an exact +-pi/2 factor (the
/// centered unitary DFT) so the chirp-z stage always runs with |cot| <= 1.
fn frft_axis_general(
    data: &mut [Complex64],
    nx: usize,
    ny: usize,
    along_x: bool,
    delta: f64,
    r: f64,
) {
    let n = if along_x { nx } else { ny };
    let in_band = r.sin().abs() >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12;
    let (beta, dft_factor): (f64, i32) = if in_band || !is_self_dual(n, delta) {
        (r, 0)
    } else if r < -3.0 * PI / 4.0 {
        (r + PI / 2.0, -1)
    } else {
        (r - PI / 2.0, 1)
    };
    let calibration = phase_calibration(n, delta, beta, true);
    for_each_line(data, nx, ny, along_x, |line| {
        if dft_factor == 1 {
            centered_unitary_dft_line(line, false);
        } else if dft_factor == -1 {
            centered_unitary_dft_line(line, true);
        }
        let out = frft_line_in_band(line, delta, beta, true);
        for (dst, src) in line.iter_mut().zip(out) {
            *dst = src * calibration;
        }
    });
}

/// Fractional transform of a raw sample array on a dimensionless lattice
/// with per-axis spacings. No normalization.
pub(crate) fn frft2_raw(
    samples: &[Complex64],
    nx: usize,
    ny: usize,
    delta_x: f64,
    delta_y: f64,
    alpha: f64,
) -> Result<Vec<Complex64>> {
    match reduce_order(alpha)? {
        Reduced::Identity => Ok(samples.to_vec()),
        Reduced::Parity => {
            let mut out = vec![Complex64::default(); samples.len()];
            for iy in 0..ny {
                for ix in 0..nx {
                    let mx = if ix == 0 { 0 } else { nx - ix };
                    let my = if iy == 0 { 0 } else { ny - iy };
                    out[iy * nx + ix] = samples[my * nx + mx];
                }
            }
            Ok(out)
        }
        Reduced::General(r) => {
            let mut data = samples.to_vec();
            frft_axis_general(&mut data, nx, ny, true, delta_x, r);
            frft_axis_general(&mut data, nx, ny, false, delta_y, r);
            Ok(data)
        }
    }
}

fn dimensionless_spacing(f: &ComplexField, s: f64) -> (f64, f64) {
    match f.domain() {
        Domain::Position => (f.grid().dx() / s, f.grid().dy() / s),
        Domain::Momentum => (s * f.grid().dqx(), s * f.grid().dqy()),
    }
}

/// Fractional Fourier transform of a field over the dimensionless lattice
/// implied by the scale `s`, without the final normalization. The kernel's
/// unitary prefactor is included, so the norm is preserved up to quadrature
/// error for window-contained fields.
pub fn frft_apply_raw(f: &ComplexField, p: &FrftParams) -> Result<ComplexField> {
    f.check_finite("frft input")?;
    let (dx, dy) = dimensionless_spacing(f, p.s);
    let out = frft2_raw(f.samples(), f.grid().nx(), f.grid().ny(), dx, dy, p.alpha)?;
    ComplexField::try_new(*f.grid(), f.domain(), f.k(), out)
}

/// Fractional Fourier transform, normalized to unit L2 norm.
pub fn frft_apply(f: &ComplexField, p: &FrftParams) -> Result<ComplexField> {
    frft_apply_raw(f, p)?.normalized()
}

/// Direct dense-kernel quadrature of the same transform, for cross-checking
/// the chirp factorization. Refuses more than 128 samples per axis.
pub fn frft_dense_oracle(f: &ComplexField, p: &FrftParams) -> Result<ComplexField> {
    let (nx, ny) = (f.grid().nx(), f.grid().ny());
    if nx > 128 || ny > 128 {
        return Err(Error::QuadratureTooLarge { cells: nx.max(ny), max: 128 });
    }
    let r = match reduce_order(p.alpha)? {
        Reduced::Identity => return f.normalized(),
        Reduced::Parity => return f.mirrored().normalized(),
        Reduced::General(r) => r,
    };
    let (dx, dy) = dimensionless_spacing(f, p.s);
    let cot = r.cos() / r.sin();
    let axis_matrix = |n: usize, delta: f64| -> Vec<Complex64> {
        let h = (n / 2) as f64;
        let pref = Complex64::new(1.0, -cot).sqrt() / (2.0 * PI).sqrt() * delta;
        let mut m = vec![Complex64::default(); n * n];
        for a in 0..n {
            let u = (a as f64 - h) * delta;
            for b in 0..n {
                let v = (b as f64 - h) * delta;
                let phase = 0.5 * cot * (u * u + v * v) - u * v / r.sin();
                m[a * n + b] = pref * Complex64::from_polar(1.0, phase);
            }
        }
        m
    };
    let mx = axis_matrix(nx, dx);
    let my = axis_matrix(ny, dy);
    let mut tmp = vec![Complex64::default(); nx * ny];
    for iy in 0..ny {
        for a in 0..nx {
            let mut acc = Complex64::default();
            for b in 0..nx {
                acc += mx[a * nx + b] * f.samples()[iy * nx + b];
            }
            tmp[iy * nx + a] = acc;
        }
    }
    let mut out = vec![Complex64::default(); nx * ny];
    for ix in 0..nx {
        for a in 0..ny {
            let mut acc = Complex64::default();
            for b in 0..ny {
                acc += my[a * ny + b] * tmp[b * nx + ix];
            }
            out[a * nx + ix] = acc;
        }
    }
    ComplexField::try_new(*f.grid(), f.domain(), f.k(), out)?.normalized()
}

/// Smallest half-width Q such that |q| <= Q holds 95% of the spectral energy
/// along the given axis.
fn spectral_extent_95(spectrum: &crate::field::RealField, along_x: bool) -> f64 {
    let g = spectrum.grid();
    let n = if along_x { g.nx() } else { g.ny() };
    let h = n / 2;
    let marginal: Vec<f64> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            if along_x {
                for iy in 0..g.ny() {
                    acc += spectrum.at(i, iy);
                }
            } else {
                for ix in 0..g.nx() {
                    acc += spectrum.at(ix, i);
                }
            }
            acc
        })
        .collect();
    let total: f64 = marginal.iter().sum();
    let mut acc = marginal[h];
    let mut radius = 0usize;
    while acc < 0.95 * total && radius < h {
        radius += 1;
        if h + radius < n {
            acc += marginal[h + radius];
        }
        if h >= radius {
            acc += marginal[h - radius];
        }
    }
    radius as f64 * if along_x { g.dqx() } else { g.dqy() }
}

/// Ratio of the pump's spectral-envelope width 2/w to the mode's occupied
/// momentum extent. The kernel picture needs this to be at least ten.
pub fn envelope_to_mode_ratio(phi: &ProjectionMode, pump_waist: f64) -> Result<f64> {
    let spectrum_intensity = phi.spectrum()?.intensity();
    let mode_extent = spectral_extent_95(&spectrum_intensity, true)
        .max(spectral_extent_95(&spectrum_intensity, false));
    if mode_extent <= 0.0 {
        return Err(Error::ZeroField { context: "mode spectrum" });
    }
    Ok((2.0 / pump_waist) / mode_extent)
}

/// Predicted idler intensity: |F_alpha of the conjugated mode|^2 on the
/// physical detector lattice (pitch s * sqrt(2 pi / n) per axis). The pump
/// spectral envelope exp(-q^2 w^2/4) must be at least ten times wider in
/// momentum than the mode occupies, or the constant-envelope approximation
/// behind the kernel picture breaks down.
pub fn frft_prediction(
    phi: &ProjectionMode,
    geometry: &FrftGeometry,
    pump_waist: f64,
) -> Result<RealField> {
    let ratio = envelope_to_mode_ratio(phi, pump_waist)?;
    if ratio < 10.0 {
        return Err(Error::EnvelopeTooNarrow {
            envelope_width: 2.0 / pump_waist,
            mode_extent: (2.0 / pump_waist) / ratio,
        });
    }
    frft_prediction_unchecked(phi, geometry)
}

/// The kernel prediction without the envelope precondition; callers that
/// report the envelope ratio as a metric (instead of refusing) use this.
pub fn frft_prediction_unchecked(
    phi: &ProjectionMode,
    geometry: &FrftGeometry,
) -> Result<RealField> {
    let alpha = alpha_from_geometry(geometry)?;
    let profile = phi.position_profile()?;
    let g = *profile.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let delta_x = (2.0 * PI / nx as f64).sqrt();
    let delta_y = (2.0 * PI / ny as f64).sqrt();
    let (out_dx, out_dy);

    if alpha.sin().abs() < 1e-12 {
        // alpha = 0: the prediction is the mode image itself on its own grid
        let image = profile.conjugated().intensity();
        return image.unit_total_power();
    }
    let s = scale_from_geometry(geometry)?;
    out_dx = s * delta_x;
    out_dy = s * delta_y;

    // resample the conjugated mode onto the dimensionless lattice
    let conj = profile.conjugated();
    let re = RealField::new(g, conj.samples().iter().map(|c| c.re).collect())?;
    let im = RealField::new(g, conj.samples().iter().map(|c| c.im).collect())?;
    let mut resampled = vec![Complex64::default(); nx * ny];
    for iy in 0..ny {
        let ybar = (iy as f64 - (ny / 2) as f64) * delta_y;
        for ix in 0..nx {
            let xbar = (ix as f64 - (nx / 2) as f64) * delta_x;
            let (x, y) = (s * xbar, s * ybar);
            resampled[iy * nx + ix] = Complex64::new(
                crate::pdc::sample_bilinear(&re, x, y),
                crate::pdc::sample_bilinear(&im, x, y),
            );
        }
    }
    let transformed = frft2_raw(&resampled, nx, ny, delta_x, delta_y, alpha)?;
    let out_grid = GridSpec::new(nx, ny, out_dx, out_dy)?;
    let intensity: Vec<f64> = transformed.iter().map(|c| c.norm_sqr()).collect();
    RealField::new(out_grid, intensity)?.unit_total_power()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn self_dual_scale(g: &GridSpec) -> f64 {
        g.dx() * (g.nx() as f64 / (2.0 * PI)).sqrt()
    }

    fn test_field(g: GridSpec) -> ComplexField {
        // Gaussian envelope with mild structure, strongly contained both in
        // the window and in bandwidth (quadrature floors sit on the tails)
        let w = 0.12 * g.nx() as f64 * g.dx();
        ComplexField::from_fn(g, Domain::Position, 1.0e6, |x, y| {
            let env = (-(x * x + y * y) / (w * w)).exp();
            Complex64::new(env * (1.0 + 0.4 * (3.0 * x / w).cos()), env * 0.2 * (2.0 * y / w).sin())
        })
    }

    /// rel L2 between sample vectors scaled to unit sample power, ignoring
    /// the lattice measure difference between representations
    fn shape_distance(a: &ComplexField, b: &ComplexField) -> f64 {
        let sa = a.samples().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let sb = b.samples().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut num = 0.0;
        for (x, y) in a.samples().iter().zip(b.samples()) {
            num += (x / sa - y / sb).norm_sqr();
        }
        num.sqrt()
    }

    #[test]
    fn order_half_pi_is_the_fourier_transform() {
        let g = GridSpec::square(128, 0.05).unwrap();
        let f = test_field(g).normalized().unwrap();
        let s = self_dual_scale(&g);
        let frft = frft_apply(&f, &FrftParams::new(PI / 2.0, s).unwrap()).unwrap();
        let ft = f.to_momentum().unwrap();
        let d = shape_distance(&frft, &ft);
        assert!(d < 1e-9, "order pi/2 vs Fourier distance {d}");
    }

    #[test]
    fn order_pi_is_parity_and_zero_is_identity() {
        let g = GridSpec::square(64, 0.1).unwrap();
        let f = test_field(g).normalized().unwrap();
        let s = self_dual_scale(&g);
        let parity = frft_apply(&f, &FrftParams::new(PI, s).unwrap()).unwrap();
        assert!(parity.rel_l2_distance(&f.mirrored()) < 1e-10);
        let ident = frft_apply(&f, &FrftParams::new(0.0, s).unwrap()).unwrap();
        assert!(ident.rel_l2_distance(&f) < 1e-12);
    }

    #[test]
    fn near_degenerate_orders_are_refused() {
        let g = GridSpec::square(32, 0.1).unwrap();
        let f = test_field(g);
        let s = self_dual_scale(&g);
        for alpha in [1e-10, PI - 1e-10, -1e-10, 2.0 * PI + 1e-11] {
            assert!(matches!(
                frft_apply(&f, &FrftParams::new(alpha, s).unwrap()),
                Err(Error::DegenerateOrder { .. })
            ));
        }
    }

    #[test]
    fn additivity_of_orders() {
        let g = GridSpec::square(128, 0.05).unwrap();
        let f = test_field(g).normalized().unwrap();
        let s = self_dual_scale(&g);
        let third = FrftParams::new(PI / 3.0, s).unwrap();
        let two_thirds = FrftParams::new(2.0 * PI / 3.0, s).unwrap();
        let twice = frft_apply(&frft_apply(&f, &third).unwrap(), &third).unwrap();
        let direct = frft_apply(&f, &two_thirds).unwrap();
        let d = twice.rel_l2_distance(&direct);
        assert!(d < 1e-6, "additivity distance {d}");
    }

    #[test]
    fn unitarity_before_normalization() {
        let g = GridSpec::square(128, 0.05).unwrap();
        let f = test_field(g).normalized().unwrap();
        let s = self_dual_scale(&g);
        for alpha in [0.3, PI / 3.0, 1.9, 2.6] {
            let out = frft_apply_raw(&f, &FrftParams::new(alpha, s).unwrap()).unwrap();
            // dimensionless-lattice norm: delta^2 per cell on both sides
            let ratio = out.samples().iter().map(|c| c.norm_sqr()).sum::<f64>()
                / f.samples().iter().map(|c| c.norm_sqr()).sum::<f64>();
            assert!((ratio - 1.0).abs() < 1e-9, "norm ratio {ratio} at alpha {alpha}");
        }
    }

    #[test]
    fn bluestein_rewrite_is_exact() {
        // the chirp-z stage must reproduce the literal kernel sum to
        // rounding on arbitrary samples (no containment assumption)
        let n = 48;
        let delta = 0.31;
        let beta = 1.1;
        let input: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let fast = bluestein_line(&input, delta, n, delta, beta);
        let h = (n / 2) as f64;
        let cot = beta.cos() / beta.sin();
        let pref = Complex64::new(1.0, -cot).sqrt() / (2.0 * PI).sqrt() * delta;
        for m in 0..n {
            let u = (m as f64 - h) * delta;
            let mut acc = Complex64::default();
            for (j, v) in input.iter().enumerate() {
                let up = (j as f64 - h) * delta;
                let ph = 0.5 * cot * (u * u + up * up) - u * up / beta.sin();
                acc += v * Complex64::from_polar(1.0, ph);
            }
            acc *= pref;
            assert!(
                (fast[m] - acc).norm() < 1e-10 * acc.norm().max(1.0),
                "m={m}: {:.3e}",
                (fast[m] - acc).norm()
            );
        }
    }

    #[test]
    fn fast_path_matches_dense_kernel_in_band() {
        // the literal dense quadrature needs strong containment margins, so
        // compare on a tight Gaussian
        let g = GridSpec::square(128, 0.08).unwrap();
        let w = 0.10 * g.nx() as f64 * g.dx();
        let f = ComplexField::from_fn(g, Domain::Position, 1.0e6, |x, y| {
            let env = (-(x * x + y * y) / (w * w)).exp();
            Complex64::new(env, 0.3 * env * (2.0 * x / w).sin())
        })
        .normalized()
        .unwrap();
        let s = self_dual_scale(&g);
        for alpha in [PI / 3.0, 1.2, 1.9, 2.2] {
            let p = FrftParams::new(alpha, s).unwrap();
            let fast = frft_apply(&f, &p).unwrap();
            let dense = frft_dense_oracle(&f, &p).unwrap();
            let d = fast.rel_l2_distance(&dense);
            assert!(d < 1e-6, "alpha {alpha}: fast vs dense {d}");
        }
    }

    #[test]
    fn geometry_spot_values() {
        let k = 2.0 * PI / 810e-9;
        let kp = 2.0 * k;
        let z = 0.1;
        let a0 = alpha_from_geometry(&FrftGeometry::new(z, -z, kp, k).unwrap()).unwrap();
        assert_eq!(a0, 0.0);
        let a90 = alpha_from_geometry(&FrftGeometry::new(z, -2.0 * z, kp, k).unwrap()).unwrap();
        assert!((a90 - PI / 2.0).abs() < 1e-14);
        let a120 = alpha_from_geometry(&FrftGeometry::new(z, -4.0 * z, kp, k).unwrap()).unwrap();
        assert!((a120 - 2.0 * PI / 3.0).abs() < 1e-14);
        // waist between crystal and detection plane: |2z/Z + 1| > 1
        assert!(matches!(
            alpha_from_geometry(&FrftGeometry::new(z, -0.5 * z, kp, k).unwrap()),
            Err(Error::NoRealOrder { .. })
        ));
    }

    #[test]
    fn geometry_scale_relations() {
        let k = 2.0 * PI / 810e-9;
        let kp = 2.0 * k;
        let z = 0.07;
        let g = FrftGeometry::new(z, -2.0 * z, kp, k).unwrap();
        let s = scale_from_geometry(&g).unwrap();
        assert!(((s * s - z / k) / (z / k)).abs() < 1e-12);
        // degenerate at alpha -> 0
        assert!(matches!(
            scale_from_geometry(&FrftGeometry::new(z, -z, kp, k).unwrap()),
            Err(Error::DegenerateOrder { .. })
        ));
        // homogeneity: scaling z and Z together scales s^2
        let lambda = 3.7;
        let gs = FrftGeometry::new(lambda * z, -2.0 * lambda * z, kp, k).unwrap();
        let s2 = scale_from_geometry(&gs).unwrap();
        assert!(((s2 * s2 - lambda * s * s) / (lambda * s * s)).abs() < 1e-12);
    }

    #[test]
    fn reverse_geometry_helper_inverts_alpha() {
        let z = 0.08;
        for alpha in [0.2 * PI, 0.25 * PI, 0.35 * PI] {
            let zw = FrftGeometry::waist_offset_for_alpha(z, alpha);
            let k = 2.0 * PI / 810e-9;
            let g = FrftGeometry::new(z, zw, 2.0 * k, k).unwrap();
            let a = alpha_from_geometry(&g).unwrap();
            assert!((a - alpha).abs() < 1e-12);
        }
    }
}
