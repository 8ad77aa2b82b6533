//! Symbolic dynamics behind the one-dimensional models: the Thue-Morse
//! substitution, codings of irrational rotations, continued fractions,
//! forbidden distances of Sturmian words and exact patch frequencies.

mod circle;
mod continued_fraction;
mod forbidden;
mod frequency;
mod rotation;
mod substitution;

pub use circle::{ArcSet, CircleInterval};
pub use continued_fraction::{
    continued_fraction, is_badly_approximable_heuristic, ContinuedFraction, Verdict,
};
pub use forbidden::{forbidden_distances, ForbiddenSet, DEFAULT_K_MAX};
pub use frequency::{
    empirical_frequency, sturmian_cylinder, sturmian_patch_frequency,
    sturmian_patch_frequency_exact,
};
pub use rotation::RotationNumber;
pub use substitution::{substitution_prefix, thue_morse_symbol, SubstitutionRule};
