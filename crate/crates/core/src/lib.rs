//! Exact fields for a particle trapped on a delta-potential waveguide and
//! scattered by a semi-infinite impenetrable edge, together with the
//! numerical machinery used to check them.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: complex error function and the Fresnel-type integral
//!   `F(ξ) = ∫_{-∞}^{ξ} exp(2ikτ²) dτ`, plus an independent quadrature.
//! * [`delta_1d`]: the transverse delta well, its bound state, scattering
//!   coefficients and S-matrix pole.
//! * [`geometry`]: the parabolic double cover `y + i(x - a) = (ξ + iη)²`.
//! * [`sommerfeld`]: free diffraction of a plane wave on the edge.
//! * [`bound_edge`]: the bound-state-with-edge closed form.
//! * [`green`]: channel-decomposed Green's function and the first-order
//!   impurity correction used for the tail-stability scan.
//! * [`oracle_fd`]: a five-point finite-difference solver used as the
//!   brute-force oracle.
//! * [`grid`]: the sampled-field exchange format shared by all of the above.

pub mod bound_edge;
pub mod delta_1d;
mod error;
pub mod fit;
pub mod geometry;
pub mod green;
pub mod grid;
pub mod oracle_fd;
pub mod quad;
pub mod sommerfeld;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
