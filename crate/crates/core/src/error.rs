use thiserror::Error;

/// Errors produced by the special-function kernels, the root search, the
/// wavefunction assembly and the shooting integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Kummer series parameter `b` sits on a pole of the series
    /// coefficients (zero or a negative integer).
    #[error("kummer series pole: b = {b} is zero or a negative integer")]
    InvalidPole { b: f64 },

    /// A series was truncated at its term cap without meeting the stopping
    /// rule.
    #[error("series failed to converge within {terms} terms")]
    NoConvergence { terms: usize },

    /// A scan sampled a non-finite value, or exhausted its search window.
    #[error("scan failure at sample point {at}")]
    ScanFailure { at: f64 },

    /// Bracketed refinement did not reach the requested tolerance within the
    /// iteration cap.
    #[error("root refinement exceeded the iteration limit")]
    MaxIterations,

    /// A wavefunction was requested at a point that does not satisfy the
    /// quantization condition.
    #[error("not an eigenvalue: quantization residual {residual} above tolerance")]
    NotAnEigenvalue { residual: f64 },

    /// Both matching denominators vanish at the origin, so the two half-line
    /// solutions cannot be joined.
    #[error("degenerate matching: both spinor components vanish at the origin")]
    DegenerateMatch,

    /// The integration grid ends while the Gaussian envelope is still too
    /// large for the normalization quadrature to be trusted.
    #[error("grid truncates the tail: envelope ratio {ratio} at the end points")]
    TailTruncation { ratio: f64 },

    /// State renormalization inside the shooting integrator produced a zero
    /// or non-finite norm.
    #[error("state renormalization overflowed during integration")]
    Overflow,

    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
