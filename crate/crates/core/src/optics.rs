//! Paraxial optical elements and their composition.
//!
//! Free propagation over a distance z multiplies the angular spectrum by
//! `exp(-i q^2 z / 2k)`; a thin lens of focal length f multiplies the
//! position-space amplitude by `exp(-i k rho^2 / 2f)`; a mask multiplies by
//! its sampled transmission T(rho). Backward application models the beam
//! that retraces the system from its output plane to its input plane:
//! propagation and lens phases conjugate, element order reverses, and
//! amplitude masks are applied as-is (absorption has no direction).

use crate::error::{Error, Result};
use crate::field::{ComplexField, Domain};
use crate::grid::GridSpec;
use num_complex::Complex64;

/// Travel direction through an element or system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// One paraxial element.
#[derive(Debug, Clone)]
pub enum OpticalElement {
    /// Free paraxial propagation over `z` meters (negative z is the analytic
    /// counter-propagation).
    FreeSpace { z: f64 },
    /// Thin lens of focal length `f` (f > 0 focuses a forward collimated beam).
    ThinLens { f: f64 },
    /// Sampled amplitude-and-phase transmission applied in position space.
    Mask { transmission: ComplexField },
}

impl OpticalElement {
    pub fn free_space(z: f64) -> Self {
        OpticalElement::FreeSpace { z }
    }

    pub fn thin_lens(f: f64) -> Self {
        OpticalElement::ThinLens { f }
    }

    pub fn mask(transmission: ComplexField) -> Result<Self> {
        if transmission.domain() != Domain::Position {
            return Err(Error::DomainMismatch {
                expected: "position",
                found: transmission.domain().name(),
            });
        }
        transmission.check_finite("mask transmission")?;
        Ok(OpticalElement::Mask { transmission })
    }

    fn validate(&self) -> Result<()> {
        match self {
            OpticalElement::FreeSpace { z } => {
                if !z.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "z",
                        reason: "propagation distance must be finite".into(),
                    });
                }
            }
            OpticalElement::ThinLens { f } => {
                if !f.is_finite() || *f == 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "f",
                        reason: "focal length must be nonzero and finite".into(),
                    });
                }
            }
            OpticalElement::Mask { .. } => {}
        }
        Ok(())
    }

    /// Ratio of the element's worst quadratic-phase step per grid cell (at the
    /// window edge) to pi. Values above 1 mean the chirp aliases there.
    pub fn alias_ratio(&self, grid: &GridSpec, k: f64) -> f64 {
        match self {
            OpticalElement::FreeSpace { z } => {
                // d/dq (q^2 z / 2k) = q z / k, worst at q_max; one cell is dq
                let gx = grid.qx_max() * z.abs() / k * grid.dqx();
                let gy = (grid.ny() / 2) as f64 * grid.dqy() * z.abs() / k * grid.dqy();
                gx.max(gy) / std::f64::consts::PI
            }
            OpticalElement::ThinLens { f } => {
                // d/drho (k rho^2 / 2f) = k rho / f, worst at the window edge
                let gx = k * grid.x_max() / f.abs() * grid.dx();
                let gy = k * (grid.ny() / 2) as f64 * grid.dy() / f.abs() * grid.dy();
                gx.max(gy) / std::f64::consts::PI
            }
            OpticalElement::Mask { .. } => 0.0,
        }
    }
}

/// Apply one element to a field. The output stays in the input's representation.
pub fn apply_element(
    element: &OpticalElement,
    field: &ComplexField,
    direction: Direction,
) -> Result<ComplexField> {
    element.validate()?;
    field.check_finite("apply_element input")?;
    let input_domain = field.domain();
    let k = field.k();
    let out = match element {
        OpticalElement::FreeSpace { z } => {
            let signed_z = match direction {
                Direction::Forward => *z,
                Direction::Backward => -*z,
            };
            let mut f = field.clone().into_domain(Domain::Momentum)?;
            let g = *f.grid();
            for iy in 0..g.ny() {
                for ix in 0..g.nx() {
                    let q2 = g.qx(ix).powi(2) + g.qy(iy).powi(2);
                    let ph = Complex64::from_polar(1.0, -q2 * signed_z / (2.0 * k));
                    f.samples_mut()[g.idx(ix, iy)] *= ph;
                }
            }
            f
        }
        OpticalElement::ThinLens { f: focal } => {
            let sign = match direction {
                Direction::Forward => -1.0,
                Direction::Backward => 1.0,
            };
            let mut f = field.clone().into_domain(Domain::Position)?;
            let g = *f.grid();
            for iy in 0..g.ny() {
                for ix in 0..g.nx() {
                    let r2 = g.x(ix).powi(2) + g.y(iy).powi(2);
                    let ph = Complex64::from_polar(1.0, sign * k * r2 / (2.0 * focal));
                    f.samples_mut()[g.idx(ix, iy)] *= ph;
                }
            }
            f
        }
        OpticalElement::Mask { transmission } => {
            let f = field.clone().into_domain(Domain::Position)?;
            if !f.grid().same_lattice(transmission.grid()) {
                return Err(Error::GridMismatch { context: "mask transmission vs field" });
            }
            f.pointwise_mul(transmission)?
        }
    };
    out.into_domain(input_domain)
}

/// An ordered chain of elements, crystal side first, with its design wavenumber.
#[derive(Debug, Clone)]
pub struct OpticalSystem {
    elements: Vec<OpticalElement>,
    k: f64,
}

impl OpticalSystem {
    pub fn new(elements: Vec<OpticalElement>, k: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("wavenumber must be positive and finite, got {k}"),
            });
        }
        for e in &elements {
            e.validate()?;
        }
        Ok(Self { elements, k })
    }

    /// A system with no elements (the identity).
    pub fn empty(k: f64) -> Self {
        Self { elements: Vec::new(), k }
    }

    /// Single free-space leg.
    pub fn free_space(z: f64, k: f64) -> Result<Self> {
        Self::new(vec![OpticalElement::free_space(z)], k)
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Apply the chain: list order for Forward, reversed order with each
    /// element in Backward mode for Backward.
    pub fn apply(&self, field: &ComplexField, direction: Direction) -> Result<ComplexField> {
        let mut f = field.clone();
        match direction {
            Direction::Forward => {
                for e in &self.elements {
                    f = apply_element(e, &f, Direction::Forward)?;
                }
            }
            Direction::Backward => {
                for e in self.elements.iter().rev() {
                    f = apply_element(e, &f, Direction::Backward)?;
                }
            }
        }
        Ok(f)
    }

    /// Aliasing warnings for chirped elements on this grid, worst first.
    pub fn alias_warnings(&self, grid: &GridSpec) -> Vec<String> {
        let mut out = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            let r = e.alias_ratio(grid, self.k);
            if r > 1.0 {
                out.push(format!(
                    "element {i} ({}) phase step {r:.2} pi per cell at grid edge",
                    match e {
                        OpticalElement::FreeSpace { .. } => "free space",
                        OpticalElement::ThinLens { .. } => "thin lens",
                        OpticalElement::Mask { .. } => "mask",
                    }
                ));
            }
        }
        out
    }
}

/// Pump field at the crystal plane plus the pump wavenumber K. The crystal
/// acts on down-converted light as an optically addressed modulator with this
/// profile.
#[derive(Debug, Clone)]
pub struct PumpSpec {
    field_at_crystal: ComplexField,
    k_pump: f64,
}

impl PumpSpec {
    pub fn new(field_at_crystal: ComplexField, k_pump: f64) -> Result<Self> {
        if field_at_crystal.domain() != Domain::Position {
            return Err(Error::DomainMismatch {
                expected: "position",
                found: field_at_crystal.domain().name(),
            });
        }
        if field_at_crystal.norm2() <= 0.0 {
            return Err(Error::ZeroField { context: "pump field" });
        }
        if !k_pump.is_finite() || k_pump <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "K",
                reason: format!("pump wavenumber must be positive, got {k_pump}"),
            });
        }
        Ok(Self { field_at_crystal, k_pump })
    }

    /// Uniform unit pump: the delta-spectrum limit used for phase conjugation.
    pub fn flat(grid: GridSpec, k_pump: f64) -> Result<Self> {
        let f = ComplexField::from_fn(grid, Domain::Position, k_pump, |_, _| {
            Complex64::new(1.0, 0.0)
        });
        Self::new(f, k_pump)
    }

    pub fn field_at_crystal(&self) -> &ComplexField {
        &self.field_at_crystal
    }

    pub fn k_pump(&self) -> f64 {
        self.k_pump
    }

    pub fn grid(&self) -> &GridSpec {
        self.field_at_crystal.grid()
    }
}

/// Gaussian pump with spectral envelope of waist `w` and quadratic spectral
/// phase `exp(-i Z q^2 / 2K)`. `Z` is the crystal position minus the waist
/// position: negative Z means the pump converges at the crystal toward a
/// waist located after it.
pub fn make_gaussian_pump(w: f64, z_curvature: f64, k_pump: f64, grid: GridSpec) -> Result<PumpSpec> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::InvalidParameter {
            name: "w",
            reason: format!("waist must be positive, got {w}"),
        });
    }
    if w < 4.0 * grid.dx() || w < 4.0 * grid.dy() {
        return Err(Error::Resolution {
            what: "gaussian pump waist",
            cells: w / grid.dx().max(grid.dy()),
            needed: 4.0,
        });
    }
    if !z_curvature.is_finite() {
        return Err(Error::InvalidParameter {
            name: "Z",
            reason: "curvature distance must be finite".into(),
        });
    }
    if z_curvature == 0.0 {
        // waist at the crystal: the position profile is the analytic Gaussian
        // pair of the spectral envelope, with exactly flat phase
        let amp = 2.0 / (w * w);
        let field = ComplexField::from_fn(grid, Domain::Position, k_pump, |x, y| {
            Complex64::new(amp * (-(x * x + y * y) / (w * w)).exp(), 0.0)
        });
        return PumpSpec::new(field, k_pump);
    }
    let spectrum = ComplexField::from_fn(grid, Domain::Momentum, k_pump, |qx, qy| {
        let q2 = qx * qx + qy * qy;
        let envelope = (-q2 * w * w / 4.0).exp();
        Complex64::from_polar(envelope, -z_curvature * q2 / (2.0 * k_pump))
    });
    PumpSpec::new(spectrum.to_position()?, k_pump)
}

/// Double-slit transmission: 1 for (d - delta)/2 < |x| < (d + delta)/2 over
/// all y, 0 elsewhere.
pub fn make_double_slit(d: f64, delta: f64, grid: GridSpec, k: f64) -> Result<ComplexField> {
    if !(delta > 0.0 && d > delta && d.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "d, delta",
            reason: format!("need 0 < delta < d, got d={d}, delta={delta}"),
        });
    }
    let cells = delta / grid.dx();
    if cells < 3.0 {
        return Err(Error::Resolution { what: "slit width", cells, needed: 3.0 });
    }
    if (d - delta) / 2.0 < 3.0 * grid.dx() {
        return Err(Error::Resolution {
            what: "slit separation gap",
            cells: (d - delta) / (2.0 * grid.dx()),
            needed: 3.0,
        });
    }
    let outer = (d + delta) / 2.0;
    if outer >= grid.x_max() {
        return Err(Error::OutOfWindow {
            what: "double slit",
            extent: outer,
            half_window: grid.x_max(),
        });
    }
    let inner = (d - delta) / 2.0;
    Ok(ComplexField::from_fn(grid, Domain::Position, k, |x, _| {
        let ax = x.abs();
        if ax > inner && ax < outer {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    }))
}

/// Orientation of the opaque wire(s) blocking the pump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireOrientation {
    /// Blocks |x| < width/2.
    Vertical,
    /// Blocks |y| < width/2.
    Horizontal,
    /// Both wires.
    Cross,
}

/// Gaussian-envelope pump with an opaque wire shadow, flat phase.
pub fn make_wire_pump(
    orientation: WireOrientation,
    width: f64,
    envelope_w: f64,
    k_pump: f64,
    grid: GridSpec,
) -> Result<PumpSpec> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "width",
            reason: format!("wire width must be positive, got {width}"),
        });
    }
    let cells = width / grid.dx().max(grid.dy());
    if cells < 2.0 {
        return Err(Error::Resolution { what: "wire width", cells, needed: 2.0 });
    }
    if envelope_w < 4.0 * grid.dx() {
        return Err(Error::Resolution {
            what: "wire pump envelope",
            cells: envelope_w / grid.dx(),
            needed: 4.0,
        });
    }
    let half = width / 2.0;
    let field = ComplexField::from_fn(grid, Domain::Position, k_pump, |x, y| {
        let blocked = match orientation {
            WireOrientation::Vertical => x.abs() < half,
            WireOrientation::Horizontal => y.abs() < half,
            WireOrientation::Cross => x.abs() < half || y.abs() < half,
        };
        if blocked {
            Complex64::default()
        } else {
            let r2 = x * x + y * y;
            Complex64::new((-r2 / (envelope_w * envelope_w)).exp(), 0.0)
        }
    });
    PumpSpec::new(field, k_pump)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::square(64, 0.1e-3).unwrap()
    }

    const K: f64 = 2.0 * std::f64::consts::PI / 780e-9;

    #[test]
    fn free_space_zero_distance_is_identity() {
        let g = grid();
        let f = ComplexField::gaussian(g, K, 1e-3, 0.0, 0.0);
        let out = apply_element(&OpticalElement::free_space(0.0), &f, Direction::Forward).unwrap();
        assert!(f.rel_l2_distance(&out) < 1e-14);
    }

    #[test]
    fn free_space_forward_then_negative_is_identity() {
        let g = grid();
        let f = ComplexField::gaussian(g, K, 1e-3, 0.2e-3, 0.0);
        let fwd = apply_element(&OpticalElement::free_space(0.05), &f, Direction::Forward).unwrap();
        let back =
            apply_element(&OpticalElement::free_space(-0.05), &fwd, Direction::Forward).unwrap();
        assert!(f.rel_l2_distance(&back) < 1e-13);
    }

    #[test]
    fn free_space_composes_additively() {
        let g = grid();
        let f = ComplexField::gaussian(g, K, 0.8e-3, 0.0, 0.0);
        let one = apply_element(&OpticalElement::free_space(0.07), &f, Direction::Forward).unwrap();
        let two_a =
            apply_element(&OpticalElement::free_space(0.03), &f, Direction::Forward).unwrap();
        let two =
            apply_element(&OpticalElement::free_space(0.04), &two_a, Direction::Forward).unwrap();
        assert!(one.rel_l2_distance(&two) < 1e-13);
    }

    #[test]
    fn empty_system_is_identity_and_backward_inverts_unitary_chain() {
        let g = grid();
        let f = ComplexField::gaussian(g, K, 0.6e-3, 0.1e-3, -0.2e-3);
        let empty = OpticalSystem::empty(K);
        assert!(f.rel_l2_distance(&empty.apply(&f, Direction::Forward).unwrap()) < 1e-15);

        let sys = OpticalSystem::new(
            vec![
                OpticalElement::free_space(0.04),
                OpticalElement::thin_lens(0.35),
                OpticalElement::free_space(0.06),
            ],
            K,
        )
        .unwrap();
        let fwd = sys.apply(&f, Direction::Forward).unwrap();
        assert!(((fwd.norm2() - f.norm2()) / f.norm2()).abs() < 1e-12);
        let back = sys.apply(&fwd, Direction::Backward).unwrap();
        assert!(f.rel_l2_distance(&back) < 1e-11);
    }

    #[test]
    fn mask_grid_mismatch_is_rejected() {
        let g = grid();
        let other = GridSpec::square(32, 0.1e-3).unwrap();
        let t = ComplexField::gaussian(other, K, 1e-3, 0.0, 0.0);
        let m = OpticalElement::mask(t).unwrap();
        let f = ComplexField::gaussian(g, K, 1e-3, 0.0, 0.0);
        assert!(matches!(
            apply_element(&m, &f, Direction::Forward),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn double_slit_is_even_and_covers_expected_fraction() {
        let g = GridSpec::new(512, 8, 20e-6, 20e-6).unwrap();
        let d = 2.0e-3;
        let delta = 0.8e-3;
        let slit = make_double_slit(d, delta, g, K).unwrap();
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                let m = g.mirror_idx(ix, iy);
                // exact evenness in x (mirror also flips y; slit is y-uniform)
                assert_eq!(slit.samples()[g.idx(ix, iy)], slit.samples()[m]);
            }
        }
        let nonzero = slit.samples().iter().filter(|c| c.norm() > 0.0).count();
        let frac = nonzero as f64 / g.len() as f64;
        let expect = 2.0 * delta / (g.nx() as f64 * g.dx());
        // strict open bounds can drop one boundary cell per slit edge
        assert!((frac - expect).abs() <= 4.0 / g.nx() as f64, "frac={frac}, expect={expect}");
    }

    #[test]
    fn double_slit_resolution_guard() {
        let g = GridSpec::new(32, 8, 0.5e-3, 0.5e-3).unwrap();
        assert!(matches!(
            make_double_slit(2.0e-3, 0.8e-3, g, K),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn wire_pump_vertical_blocks_center_and_cross_is_product() {
        let g = grid();
        let w = 0.4e-3;
        let env = 2.0e-3;
        let v = make_wire_pump(WireOrientation::Vertical, w, env, K, g).unwrap();
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                if g.x(ix).abs() < w / 2.0 {
                    assert_eq!(v.field_at_crystal().at(ix, iy), Complex64::default());
                }
            }
        }
        let h = make_wire_pump(WireOrientation::Horizontal, w, env, K, g).unwrap();
        let c = make_wire_pump(WireOrientation::Cross, w, env, K, g).unwrap();
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                let vv = v.field_at_crystal().at(ix, iy);
                let hh = h.field_at_crystal().at(ix, iy);
                let cc = c.field_at_crystal().at(ix, iy);
                // cross = envelope * (vertical gate) * (horizontal gate); where both
                // gates pass, cross equals either factor
                if vv.norm() > 0.0 && hh.norm() > 0.0 {
                    assert!((cc - vv).norm() < 1e-15);
                } else {
                    assert_eq!(cc, Complex64::default());
                }
            }
        }
    }

    #[test]
    fn gaussian_pump_flat_phase_at_zero_curvature() {
        let g = grid();
        let p = make_gaussian_pump(1.0e-3, 0.0, K, g).unwrap();
        let f = p.field_at_crystal();
        let center = f.at(32, 32);
        for iy in 8..56 {
            for ix in 8..56 {
                let c = f.at(ix, iy);
                if c.norm() > 1e-9 * center.norm() {
                    let rel_phase = (c / center).arg();
                    assert!(rel_phase.abs() < 1e-12, "phase {rel_phase} at ({ix},{iy})");
                }
            }
        }
    }

    #[test]
    fn gaussian_pump_quadratic_spectral_phase_coefficient() {
        let g = grid();
        let z_curv = -0.04;
        let p = make_gaussian_pump(1.0e-3, z_curv, K, g).unwrap();
        let spec = p.field_at_crystal().to_momentum().unwrap();
        // least-squares fit of phase against q^2 along the qx axis, restricted
        // to samples with meaningful modulus (tails carry roundoff phase)
        let iy = 32;
        let peak = spec.at(32, iy).norm();
        let mut num = 0.0;
        let mut den = 0.0;
        for ix in 20..44 {
            if spec.at(ix, iy).norm() < 1e-4 * peak {
                continue;
            }
            let q2 = g.qx(ix).powi(2);
            let ph = spec.at(ix, iy).arg();
            num += ph * q2;
            den += q2 * q2;
        }
        let coeff = num / den;
        let expect = -z_curv / (2.0 * K);
        assert!(
            ((coeff - expect) / expect).abs() < 1e-6,
            "coeff {coeff:.6e} vs {expect:.6e}"
        );
    }

    #[test]
    fn alias_warning_fires_for_aggressive_lens() {
        let g = grid();
        let sys = OpticalSystem::new(vec![OpticalElement::thin_lens(1e-3)], K).unwrap();
        assert!(!sys.alias_warnings(&g).is_empty());
        let tame = OpticalSystem::new(vec![OpticalElement::thin_lens(10.0)], K).unwrap();
        assert!(tame.alias_warnings(&g).is_empty());
    }

    #[test]
    fn under_resolved_pump_waist_is_refused() {
        let g = grid();
        assert!(matches!(
            make_gaussian_pump(0.2e-3, 0.0, K, g),
            Err(Error::Resolution { .. })
        ));
    }
}
