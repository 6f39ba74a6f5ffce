//! Deterministic paraxial Fourier-optics engine for structured-pump
//! parametric down-conversion in the advanced-wave picture.
//!
//! The crate computes three quantities that must coincide numerically:
//! projected two-photon coincidence amplitudes from spontaneous
//! down-conversion, stimulated-emission idler intensities seeded by an
//! auxiliary beam, and lensless fractional Fourier transforms driven purely
//! by pump phase curvature. All arithmetic is double precision and every
//! operation is a pure function of its inputs, so results are bit-stable
//! run to run.

pub mod error;
pub mod fft;
pub mod field;
pub mod frft;
pub mod metrics;
pub mod grid;
pub mod optics;
pub mod oracle;
pub mod pdc;
pub mod scenarios;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{ComplexField, Domain, RealField};
pub use frft::{
    alpha_from_geometry, frft_apply, frft_apply_raw, frft_dense_oracle, frft_prediction,
    scale_from_geometry, FrftGeometry, FrftParams,
};
pub use grid::GridSpec;
pub use scenarios::{
    run_amplitude_transfer, run_design_preview, run_frft_doubleslit, run_phase_conjugation,
    AmplitudeTransferConfig, DesignPreviewConfig, ElementSpec, FrftDoubleSlitConfig, ModeSpec,
    PhaseConjugationConfig, PumpKind, ScenarioConfig, ScenarioResult, Wavelengths,
};
pub use oracle::spdc_amplitude_oracle;
pub use pdc::{
    awp_chain, awp_equivalence_report, coincidence_pump_image, prepare_aux_from_projection,
    spont_idler_intensity, stim_idler_intensity, total_idler_intensity, EquivalenceReport,
    ProjectionMode, StimSetup,
};
pub use optics::{
    apply_element, make_double_slit, make_gaussian_pump, make_wire_pump, Direction,
    OpticalElement, OpticalSystem, PumpSpec, WireOrientation,
};
