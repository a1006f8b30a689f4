//! Exact numeric substrate: rationals, rational points on the unit circle
//! and exact PSD / rank testing of symmetric rational matrices.

mod matrix;
mod rational;
mod rotation;

pub use matrix::{exact_psd_rank, extreme_point_e3, PsdRank, SymmetricMatrix};
pub use rational::{format_rational, parse_rational, rational_from_f64, to_f64, Rational};
pub use rotation::RationalRotation;
