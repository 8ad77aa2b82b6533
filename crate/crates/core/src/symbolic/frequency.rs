use crate::error::{Error, Result};
use crate::lattice::{count_patch, ConfigurationSource, Patch};
use crate::quadratic::QuadSurd;

use super::{ArcSet, CircleInterval, RotationNumber};

/// Cylinder of `patch` on the circle: the set of `{nφ}` at which the
/// Sturmian word matches `patch` anchored at `n`.
pub fn sturmian_cylinder(phi: &RotationNumber, patch: &Patch) -> Result<ArcSet> {
    let x = phi.value();
    let coding = [
        CircleInterval::new(QuadSurd::zero(), x),
        CircleInterval::new(x, QuadSurd::one()),
    ];
    let mut set = ArcSet::full();
    for &(offset, s) in patch.cells() {
        let interval = coding.get(s.index()).ok_or_else(|| {
            Error::Domain(format!("Sturmian patches use symbols 0 and 1, got {}", s.0))
        })?;
        set = set.intersect_interval(&interval.translate(-(x * offset as i128)));
        if set.is_empty() {
            break;
        }
    }
    Ok(set)
}

/// Exact frequency `ω` of `patch` in the Sturmian words of slope φ, as an
/// element of the quadratic field.
pub fn sturmian_patch_frequency_exact(phi: &RotationNumber, patch: &Patch) -> Result<QuadSurd> {
    Ok(sturmian_cylinder(phi, patch)?.length())
}

/// [`sturmian_patch_frequency_exact`] rounded to a double.
pub fn sturmian_patch_frequency(phi: &RotationNumber, patch: &Patch) -> Result<f64> {
    Ok(sturmian_patch_frequency_exact(phi, patch)?.to_f64())
}

/// Dirac-comb estimate of a patch frequency: occurrences in `[0, L)` per
/// fully contained placement.
pub fn empirical_frequency(source: &ConfigurationSource, patch: &Patch, len: usize) -> Result<f64> {
    let placements = patch.placements_in(len);
    if placements == 0 {
        return Err(Error::Contract(format!(
            "window of {len} sites has no room for a patch of diameter {}",
            patch.diameter()
        )));
    }
    let window = source.window(0, len)?;
    Ok(count_patch(&window, patch) as f64 / placements as f64)
}
