//! Error types shared by all engine modules.

use thiserror::Error;

/// Errors emitted by the simulation engine.
///
/// Contract violations (domain or grid mismatches, invalid parameters) are
/// programming errors at the call site; resolution and cost refusals are
/// numerical guards that a caller can recover from by changing the grid.
#[derive(Debug, Error)]
pub enum Error {
    /// A field was supplied in the wrong representation.
    #[error("domain mismatch: expected {expected} field, got {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },

    /// Two fields that must share a lattice do not.
    #[error("grid mismatch: {context}")]
    GridMismatch { context: &'static str },

    /// Grid parameters outside the supported range.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// A sample array contained NaN or infinity.
    #[error("non-finite samples in {context}")]
    NonFinite { context: &'static str },

    /// A constructed feature is too small for the grid to resolve.
    #[error("resolution: {what} spans {cells:.2} cells, need at least {needed}")]
    Resolution {
        what: &'static str,
        cells: f64,
        needed: f64,
    },

    /// A constructed feature does not fit inside the grid window.
    #[error("{what} does not fit in the grid window ({extent:.3e} m vs half-window {half_window:.3e} m)")]
    OutOfWindow {
        what: &'static str,
        extent: f64,
        half_window: f64,
    },

    /// Direct-quadrature evaluation refused: the grid is too large.
    #[error("quadrature refused: {cells} cells exceeds limit {max}")]
    QuadratureTooLarge { cells: usize, max: usize },

    /// The quadrature oracle only handles separable transmission masks.
    #[error("mask is not separable into Tx(x)*Ty(y); quadrature oracle cannot expand it")]
    NonSeparableMask,

    /// Fractional order too close to a multiple of pi (but not exactly 0 or pi).
    #[error("fractional order {alpha} is degenerate (within {tol:.1e} of a multiple of pi)")]
    DegenerateOrder { alpha: f64, tol: f64 },

    /// The lensless-FRFT geometry admits no real order.
    #[error("no real fractional order: |2z/Z + 1| = {value} > 1")]
    NoRealOrder { value: f64 },

    /// Pump-curvature geometry is invalid (z <= 0 or Z >= 0).
    #[error("invalid FRFT geometry: {reason}")]
    InvalidGeometry { reason: String },

    /// The two scale relations disagreed beyond tolerance.
    #[error("geometry inconsistency: relation residual {residual:.3e} exceeds 1e-10")]
    GeometryInconsistency { residual: f64 },

    /// The pump envelope is too narrow for the broad-envelope approximation.
    #[error("pump envelope too narrow: momentum width {envelope_width:.3e} < 10x mode extent {mode_extent:.3e}")]
    EnvelopeTooNarrow {
        envelope_width: f64,
        mode_extent: f64,
    },

    /// A field that must carry power is identically zero.
    #[error("zero field: {context}")]
    ZeroField { context: &'static str },

    /// Parameter outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
