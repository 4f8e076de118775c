//! Complex special functions: the error function and the Fresnel-type
//! integral built on it.

mod erf;
mod fresnel;

pub use erf::{erf, erf_checked, erfc, faddeeva, ErfValue};
pub use fresnel::{fresnel_f, fresnel_f_derivative, fresnel_f_quadrature, rotation, FresnelValue};
