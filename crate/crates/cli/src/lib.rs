//! File formats, DOT output and the sweep harness behind the `contour-hcp`
//! binary.

pub mod dot;
pub mod formats;
pub mod harness;
