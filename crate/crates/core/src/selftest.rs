//! The invariant suite behind `awp-sim selftest`: transform identities,
//! unitarity, FRFT group structure, and the equivalence matrix between the
//! coincidence and stimulated formulations. Every check is deterministic
//! (fixed-seed randomization) and reports its worst observed deviation.

use crate::field::{ComplexField, Domain};
use crate::frft::{frft_apply, FrftParams};
use crate::grid::GridSpec;
use crate::optics::{
    make_gaussian_pump, make_wire_pump, Direction, OpticalElement, OpticalSystem, PumpSpec,
    WireOrientation,
};
use crate::oracle::spdc_amplitude_oracle;
use crate::pdc::{
    awp_chain, awp_equivalence_report, prepare_aux_from_projection, spont_idler_intensity,
    stim_idler_intensity, ProjectionMode, StimSetup,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

/// One line of the selftest table.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Full suite outcome.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
    pub elapsed_s: f64,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const K1: f64 = 2.0 * PI / 780e-9;
const K2: f64 = 2.0 * PI / 840e-9;
const KP: f64 = 2.0 * PI / 405e-9;

fn random_field(rng: &mut ChaCha8Rng, grid: GridSpec, k: f64) -> ComplexField {
    let samples: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexField::try_new(grid, Domain::Position, k, samples).expect("random field")
}

/// Smooth random field: random low-order spectral content under a Gaussian
/// envelope, contained in both windows.
fn smooth_random_field(rng: &mut ChaCha8Rng, grid: GridSpec, k: f64) -> ComplexField {
    let w = 0.14 * grid.nx() as f64 * grid.dx();
    let wy = 0.14 * grid.ny() as f64 * grid.dy();
    let c1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let c2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let fx = rng.gen_range(0.5..2.5);
    let fy = rng.gen_range(0.5..2.0);
    ComplexField::from_fn(grid, Domain::Position, k, |x, y| {
        let env = (-(x / w).powi(2) - (y / wy).powi(2)).exp();
        env * (Complex64::new(1.0, 0.0)
            + c1 * (fx * x / w).cos()
            + c2 * Complex64::new(0.0, (fy * y / wy).sin()))
    })
}

fn check(name: &'static str, worst: f64, bound: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < bound,
        detail: format!("worst {worst:.3e} (bound {bound:.0e})"),
    }
}

fn parseval_and_roundtrip(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let grid = GridSpec::new(64, 32, 0.7e-4, 0.9e-4).unwrap();
    let mut worst_parseval: f64 = 0.0;
    let mut worst_roundtrip: f64 = 0.0;
    let mut worst_linearity: f64 = 0.0;
    for _ in 0..trials {
        let f = random_field(rng, grid, K1);
        let g = random_field(rng, grid, K1);
        let fm = f.to_momentum().unwrap();
        worst_parseval = worst_parseval.max(((fm.norm2() - f.norm2()) / f.norm2()).abs());
        worst_roundtrip = worst_roundtrip.max(f.rel_l2_distance(&fm.to_position().unwrap()));
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let combo = f.linear_combination(a, &g, b).unwrap().to_momentum().unwrap();
        let separate = fm
            .linear_combination(a, &g.to_momentum().unwrap(), b)
            .unwrap();
        worst_linearity = worst_linearity.max(combo.rel_l2_distance(&separate));
    }
    vec![
        check("parseval", worst_parseval, 1e-12),
        check("round_trip", worst_roundtrip, 1e-12),
        check("transform_linearity", worst_linearity, 1e-12),
    ]
}

fn shift_theorem(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let grid = GridSpec::new(32, 16, 1.1e-4, 0.8e-4).unwrap();
    let f = random_field(rng, grid, K1);
    let spectrum = f.to_momentum().unwrap();
    let (mx, my) = (5usize, 3usize);
    // circular shift by (mx, my) cells
    let mut shifted = ComplexField::zeros(grid, Domain::Position, K1);
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let sx = (ix + mx) % grid.nx();
            let sy = (iy + my) % grid.ny();
            shifted.samples_mut()[grid.idx(sx, sy)] = f.samples()[grid.idx(ix, iy)];
        }
    }
    let shifted_spectrum = shifted.to_momentum().unwrap();
    let mut worst: f64 = 0.0;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let phase = Complex64::from_polar(
                1.0,
                -(grid.qx(ix) * mx as f64 * grid.dx() + grid.qy(iy) * my as f64 * grid.dy()),
            );
            let expect = spectrum.at(ix, iy) * phase;
            let got = shifted_spectrum.at(ix, iy);
            worst = worst.max((got - expect).norm());
        }
    }
    let scale = spectrum.samples().iter().map(|c| c.norm()).fold(0.0, f64::max);
    check("shift_theorem", worst / scale, 1e-10)
}

fn unitary_systems(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let grid = GridSpec::square(64, 0.8e-4).unwrap();
    let mut worst_norm: f64 = 0.0;
    let mut worst_inverse: f64 = 0.0;
    let mut worst_compose: f64 = 0.0;
    for _ in 0..trials {
        let f = smooth_random_field(rng, grid, K1);
        let sys = OpticalSystem::new(
            vec![
                OpticalElement::free_space(rng.gen_range(-0.05..0.05)),
                OpticalElement::thin_lens(rng.gen_range(0.3..0.8) * if rng.gen() { 1.0 } else { -1.0 }),
                OpticalElement::free_space(rng.gen_range(-0.05..0.05)),
            ],
            K1,
        )
        .unwrap();
        let fwd = sys.apply(&f, Direction::Forward).unwrap();
        worst_norm = worst_norm.max(((fwd.norm2() - f.norm2()) / f.norm2()).abs());
        let back = sys.apply(&fwd, Direction::Backward).unwrap();
        worst_inverse = worst_inverse.max(f.rel_l2_distance(&back));

        let z1 = rng.gen_range(-0.03..0.03);
        let z2 = rng.gen_range(-0.03..0.03);
        let joint = OpticalSystem::free_space(z1 + z2, K1)
            .unwrap()
            .apply(&f, Direction::Forward)
            .unwrap();
        let staged = OpticalSystem::free_space(z2, K1)
            .unwrap()
            .apply(
                &OpticalSystem::free_space(z1, K1)
                    .unwrap()
                    .apply(&f, Direction::Forward)
                    .unwrap(),
                Direction::Forward,
            )
            .unwrap();
        worst_compose = worst_compose.max(joint.rel_l2_distance(&staged));
    }
    vec![
        check("unitary_norm_preservation", worst_norm, 1e-10),
        check("backward_inverts_unitary", worst_inverse, 1e-10),
        check("free_space_composition", worst_compose, 1e-12),
    ]
}

fn frft_group() -> Vec<CheckOutcome> {
    let grid = GridSpec::square(128, 0.05).unwrap();
    let w = 0.12 * grid.nx() as f64 * grid.dx();
    let f = ComplexField::from_fn(grid, Domain::Position, 1e6, |x, y| {
        let env = (-(x * x + y * y) / (w * w)).exp();
        Complex64::new(env * (1.0 + 0.4 * (3.0 * x / w).cos()), 0.2 * env * (2.0 * y / w).sin())
    })
    .normalized()
    .unwrap();
    let s = grid.dx() * (grid.nx() as f64 / (2.0 * PI)).sqrt();

    let ft = f.to_momentum().unwrap();
    let quarter = frft_apply(&f, &FrftParams::new(PI / 2.0, s).unwrap()).unwrap();
    let sa: f64 = quarter.samples().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let sb: f64 = ft.samples().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut num = 0.0;
    for (a, b) in quarter.samples().iter().zip(ft.samples()) {
        num += (a / sa - b / sb).norm_sqr();
    }
    let fourier_dist = num.sqrt();

    let parity = frft_apply(&f, &FrftParams::new(PI, s).unwrap()).unwrap();
    let parity_dist = parity.rel_l2_distance(&f.mirrored());

    let third = FrftParams::new(PI / 3.0, s).unwrap();
    let twice = frft_apply(&frft_apply(&f, &third).unwrap(), &third).unwrap();
    let direct = frft_apply(&f, &FrftParams::new(2.0 * PI / 3.0, s).unwrap()).unwrap();
    let additivity_dist = twice.rel_l2_distance(&direct);

    vec![
        check("frft_half_pi_is_fourier", fourier_dist, 1e-9),
        check("frft_pi_is_parity", parity_dist, 1e-10),
        check("frft_additivity", additivity_dist, 1e-6),
    ]
}

fn awp_equivalence_matrix() -> CheckOutcome {
    let grid = GridSpec::new(256, 8, 30e-6, 30e-6).unwrap();
    let z = 0.05;
    let k = KP / 2.0;
    let pumps: Vec<(&str, PumpSpec)> = vec![
        ("flat", PumpSpec::flat(grid, KP).unwrap()),
        ("curved", make_gaussian_pump(0.5e-3, -1.5 * z, KP, grid).unwrap()),
        (
            "wire",
            make_wire_pump(WireOrientation::Vertical, 0.3e-3, 1.5e-3, KP, grid).unwrap(),
        ),
    ];
    let modes: Vec<(&str, ProjectionMode)> = vec![
        ("point", ProjectionMode::point_detector(grid, k, 0.24e-3, 0.0).unwrap()),
        (
            "double_slit",
            ProjectionMode::new(
                crate::optics::make_double_slit(1.2e-3, 0.4e-3, grid, k).unwrap(),
            )
            .unwrap(),
        ),
        (
            "gaussian",
            ProjectionMode::new(ComplexField::gaussian(grid, k, 0.5e-3, 0.2e-3, 0.0)).unwrap(),
        ),
    ];
    let h1 = OpticalSystem::free_space(z, k).unwrap();
    let h2 = OpticalSystem::free_space(z, k).unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_name = String::new();
    for (pn, pump) in &pumps {
        for (mn, phi) in &modes {
            let report = awp_equivalence_report(phi, &h1, pump, &h2).unwrap();
            if report.rel_l2_residual > worst {
                worst = report.rel_l2_residual;
                worst_name = format!("{pn}/{mn}");
            }
        }
    }
    CheckOutcome {
        name: "awp_equivalence_matrix",
        passed: worst < 1e-8,
        detail: format!("worst {worst:.3e} at {worst_name} (bound 1e-8)"),
    }
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let grid = GridSpec::new(32, 8, 0.1e-3, 0.1e-3).unwrap();
        let k = KP / 2.0;
        let pump = make_gaussian_pump(
            rng.gen_range(0.6e-3..1.0e-3),
            -rng.gen_range(0.01..0.03),
            KP,
            grid,
        )
        .unwrap();
        let phi = ProjectionMode::new(ComplexField::gaussian(
            grid,
            k,
            rng.gen_range(0.3e-3..0.5e-3),
            rng.gen_range(-0.2e-3..0.2e-3),
            0.0,
        ))
        .unwrap();
        let h1 = OpticalSystem::free_space(rng.gen_range(0.005..0.02), k).unwrap();
        let h2 = OpticalSystem::free_space(rng.gen_range(0.005..0.02), k).unwrap();
        let chain = awp_chain(&phi, &h1, &pump, &h2).unwrap();
        let oracle = spdc_amplitude_oracle(&phi, &h1, &pump, &h2, grid).unwrap();
        worst = worst.max(chain.rel_l2_distance(&oracle));
    }
    check("oracle_equivalence_32pt", worst, 1e-6)
}

fn mirror_law() -> CheckOutcome {
    let grid = GridSpec::square(128, 40e-6).unwrap();
    let z = 0.15;
    let k = KP / 2.0;
    let pump = make_gaussian_pump(0.2e-3, 0.0, KP, grid).unwrap();
    let offset = 0.48e-3;
    let phi = ProjectionMode::point_detector(grid, k, offset, 0.0).unwrap();
    let h = OpticalSystem::free_space(z, k).unwrap();
    let out = awp_chain(&phi, &h, &pump, &h).unwrap();
    let (ix, iy) = out.intensity().argmax();
    let ok = (ix as i64 - grid.ix_of_x(-offset) as i64).abs() <= 1
        && (iy as i64 - (grid.ny() / 2) as i64).abs() <= 1;
    CheckOutcome {
        name: "mirror_law_parity_peak",
        passed: ok,
        detail: format!("peak at ({ix}, {iy}), parity cell {}", grid.ix_of_x(-offset)),
    }
}

fn spont_flatness(quick: bool) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let grid = GridSpec::new(64, 16, 0.1e-3, 0.1e-3).unwrap();
    let pump = make_wire_pump(WireOrientation::Vertical, 0.4e-3, 1.5e-3, KP, grid).unwrap();
    let h2 = OpticalSystem::free_space(0.08, K2).unwrap();
    let spont = spont_idler_intensity(&pump, &h2).unwrap();
    out.push(check(
        "spont_flatness_free_space",
        spont.rel_std_central_window(0.8),
        1e-10,
    ));
    if !quick {
        // aux independence of the full stimulated+spontaneous split
        let aux_a = ComplexField::gaussian(grid, K1, 0.6e-3, 0.0, 0.0);
        let aux_b = ComplexField::gaussian(grid, K1, 0.2e-3, 0.4e-3, 0.0);
        let sa = StimSetup::new(aux_a, pump.clone(), h2.clone(), K1, K2).unwrap();
        let sb = StimSetup::new(aux_b, pump.clone(), h2.clone(), K1, K2).unwrap();
        let d = spont_idler_intensity(&sa.pump, &sa.h2)
            .unwrap()
            .rel_l2_distance(&spont_idler_intensity(&sb.pump, &sb.h2).unwrap());
        out.push(check("spont_aux_independence", d, 1e-15));
    }
    out
}

fn phase_conjugation_monotonic() -> CheckOutcome {
    let grid = GridSpec::square(128, 60e-6).unwrap();
    let pump = PumpSpec::flat(grid, KP).unwrap();
    let h2 = OpticalSystem::free_space(0.11, K2).unwrap();
    let mut widths = Vec::new();
    for f in [-1e9, -0.3, -0.15] {
        let seed = ComplexField::gaussian(grid, K1, 0.5e-3, 0.0, 0.0);
        let mut elements = Vec::new();
        if f > -1e6 {
            elements.push(OpticalElement::thin_lens(f));
        }
        elements.push(OpticalElement::free_space(0.1));
        let sys = OpticalSystem::new(elements, K1).unwrap();
        let aux = sys.apply(&seed, Direction::Forward).unwrap();
        let setup = StimSetup::new(aux, pump.clone(), h2.clone(), K1, K2).unwrap();
        widths.push(stim_idler_intensity(&setup).unwrap().spot_width_x());
    }
    let ok = widths.windows(2).all(|w| w[1] < w[0]);
    CheckOutcome {
        name: "phase_conjugation_idler_focusing",
        passed: ok,
        detail: format!("idler widths {:?}", widths.iter().map(|w| format!("{w:.2e}")).collect::<Vec<_>>()),
    }
}

fn two_path_consistency() -> CheckOutcome {
    let grid = GridSpec::new(128, 8, 40e-6, 40e-6).unwrap();
    let z = 0.04;
    let k = KP / 2.0;
    let pump = make_gaussian_pump(0.6e-3, -1.8 * z, KP, grid).unwrap();
    let phi = ProjectionMode::new(ComplexField::gaussian(grid, k, 0.4e-3, 0.1e-3, 0.0)).unwrap();
    let h1 = OpticalSystem::free_space(z, k).unwrap();
    let h2 = OpticalSystem::free_space(z, k).unwrap();
    let coincidence = awp_chain(&phi, &h1, &pump, &h2)
        .unwrap()
        .intensity()
        .unit_total_power()
        .unwrap();
    let aux = prepare_aux_from_projection(&phi, &h1).unwrap();
    let stim = stim_idler_intensity(&StimSetup::new(aux, pump, h2, k, k).unwrap()).unwrap();
    check("stim_path_matches_chain", coincidence.rel_l2_distance(&stim), 1e-8)
}

/// Run the suite. `quick` skips the direct-quadrature oracle and other
/// super-linear checks.
pub fn run(quick: bool) -> SelftestReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = if quick { 20 } else { 100 };
    let mut checks = Vec::new();
    checks.extend(parseval_and_roundtrip(&mut rng, trials));
    checks.push(shift_theorem(&mut rng));
    checks.extend(unitary_systems(&mut rng, trials.min(40)));
    checks.extend(frft_group());
    checks.push(two_path_consistency());
    checks.push(awp_equivalence_matrix());
    if !quick {
        checks.push(oracle_equivalence(&mut rng));
    }
    checks.push(mirror_law());
    checks.extend(spont_flatness(quick));
    checks.push(phase_conjugation_monotonic());
    SelftestReport { checks, elapsed_s: started.elapsed().as_secs_f64() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run(true);
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
