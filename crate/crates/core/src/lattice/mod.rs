//! Configurations on Z and Z²: alphabets, configuration sources, finite
//! windows, patches and local excitations.
//!
//! Symbols are plain indices. Textual labels such as `+`, `-`, `0`, `1` are
//! attached through an [`Alphabet`] and only matter when reading or printing.

mod alphabet;
mod excitation;
mod patch;
mod source;

pub use alphabet::{Alphabet, Symbol};
pub use excitation::{apply_excitation, diff_count, Excitation};
pub use patch::{count_patch, Patch, Patch2d, TileId};
pub use source::{ConfigurationSource, SourceKind, Window};
