//! Book chapters compiled as doctests, so the listings cannot drift from
//! the library.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/fresnel.md")]
pub mod fresnel {}

#[doc = include_str!("../../../book/src/waveguide.md")]
pub mod waveguide {}

#[doc = include_str!("../../../book/src/coordinates.md")]
pub mod coordinates {}

#[doc = include_str!("../../../book/src/sommerfeld.md")]
pub mod sommerfeld {}

#[doc = include_str!("../../../book/src/bound_edge.md")]
pub mod bound_edge {}

#[doc = include_str!("../../../book/src/tails.md")]
pub mod tails {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
