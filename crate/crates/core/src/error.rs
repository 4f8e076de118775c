use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {0} outside the supported domain")]
    Domain(Complex64),

    #[error("overflow: Re(-z^2) = {0} exceeds the exponent range")]
    Overflow(f64),

    #[error("the Fresnel integral diverges for k = 0")]
    ZeroWavenumber,

    #[error("sqrt(-2ik) is purely imaginary for k = {0}; the integral does not converge")]
    BranchAmbiguity(Complex64),

    #[error("quadrature did not converge after {subdivisions} subdivisions (partial value {partial}, error estimate {error:e})")]
    Quadrature {
        partial: Complex64,
        error: f64,
        subdivisions: usize,
    },

    #[error("point ({x}, {y}) is the edge tip, a coordinate singularity")]
    Tip { x: f64, y: f64 },

    #[error("source and observation points coincide at ({x}, {y})")]
    Coincident { x: f64, y: f64 },

    #[error("grid is not aligned with {what} at {value}")]
    Misaligned { what: &'static str, value: f64 },

    #[error("grid too coarse: wavenumber * spacing = {0} > 0.5")]
    Resolution(f64),

    #[error("linear solve failed: relative residual {achieved:e} above tolerance {tol:e}")]
    Solver { achieved: f64, tol: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
