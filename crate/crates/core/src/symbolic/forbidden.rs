use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadratic::QuadSurd;

use super::{ArcSet, CircleInterval, RotationNumber};

/// Default largest distance examined for forbidden pairs.
pub const DEFAULT_K_MAX: u64 = 64;

/// Patterns absent from every Sturmian word of a given slope: runs of `m`
/// zeros, and two ones at any distance in `distances`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenSet {
    /// Length of the shortest forbidden run of zeros (longest legal run + 1).
    pub m: u64,
    /// Forbidden distances in `[1, k_max]`, ascending.
    pub distances: Vec<u64>,
    pub k_max: u64,
}

impl ForbiddenSet {
    pub fn is_forbidden(&self, d: u64) -> bool {
        self.distances.binary_search(&d).is_ok()
    }
}

/// Upper bound on run lengths examined before giving up.
const MAX_RUN: u64 = 1_000_000;

/// Forbidden distances and the zero-run bound for φ ∈ (1/2, 1), by exact
/// intersection of rotated coding intervals.
///
/// Distance `d` is forbidden iff `[φ, 1)` and `[φ, 1) − dφ` are disjoint; a
/// run of `ℓ` zeros is possible iff `⋂_{j<ℓ} ([0, φ) − jφ)` is non-empty.
/// For φ ∈ (0, 1/2) exchange the symbols and use `1 − φ`.
pub fn forbidden_distances(phi: &RotationNumber, k_max: u64) -> Result<ForbiddenSet> {
    let x = phi.value();
    if x <= QuadSurd::rational(1, 2) || x >= QuadSurd::one() {
        return Err(Error::Domain(format!(
            "forbidden distances need φ in (1/2, 1), got {phi}"
        )));
    }
    let zero = QuadSurd::zero();
    let ones = CircleInterval::new(x, QuadSurd::one());
    let ones_arcs = ones.to_arcs();
    let distances = (1..=k_max)
        .filter(|&d| {
            let shifted = ones.translate(-(x * d as i128));
            ones_arcs.intersect_interval(&shifted).is_empty()
        })
        .collect();

    let zeros = CircleInterval::new(zero, x);
    let mut run = ArcSet::full().intersect_interval(&zeros);
    let mut longest = 1;
    loop {
        if longest >= MAX_RUN {
            return Err(Error::Budget(format!(
                "zero runs longer than {MAX_RUN} for {phi}"
            )));
        }
        let next = run.intersect_interval(&zeros.translate(-(x * longest as i128)));
        if next.is_empty() {
            break;
        }
        run = next;
        longest += 1;
    }
    Ok(ForbiddenSet {
        m: longest + 1,
        distances,
        k_max,
    })
}
