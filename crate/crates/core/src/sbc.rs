//! Patch-count discrepancy: window scans, excitation ratios, tiling
//! deviations and the balance property.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::hamiltonian::{broken_bonds, HamiltonianSpec};
use crate::lattice::{diff_count, ConfigurationSource, Excitation, Patch, Patch2d, Symbol};
use crate::wang::{count_patch_2d, TilingGrid};

/// Which window starts a scan examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ScanPolicy {
    /// Every start in the prefix.
    Exhaustive,
    /// Starts `0, stride, 2·stride, …`.
    Sampled { stride: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscrepancyRow {
    #[serde(rename = "L")]
    pub length: usize,
    /// `max |count − ω·(L − diameter)|` over the examined windows.
    #[serde(rename = "D")]
    pub discrepancy: f64,
    /// Smallest start attaining the maximum.
    pub argmax_start: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub patch: String,
    pub frequency: f64,
    pub prefix: usize,
    pub policy: ScanPolicy,
    pub rows: Vec<DiscrepancyRow>,
}

impl DiscrepancyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,D,argmax_start\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.length,
                sig12(r.discrepancy),
                r.argmax_start
            ));
        }
        out
    }
}

/// Largest deviation of the patch count from `ω` times the number of
/// placements, over windows of each length inside `[0, prefix)`.
pub fn discrepancy_profile(
    source: &ConfigurationSource,
    patch: &Patch,
    omega: f64,
    lengths: &[usize],
    prefix: usize,
    policy: ScanPolicy,
) -> Result<DiscrepancyReport> {
    if let Some(&l) = lengths.iter().find(|&&l| l == 0 || l > prefix) {
        return Err(Error::Domain(format!(
            "window length {l} must lie in [1, {prefix}]"
        )));
    }
    if let ScanPolicy::Sampled { stride: 0 } = policy {
        return Err(Error::Domain("sampling stride must be positive".into()));
    }
    for &(_, s) in patch.cells() {
        source.alphabet().check(s)?;
    }
    let window = source.window(0, prefix)?;
    let hits = patch.occurrences(&window.symbols);
    // prefix_sums[k] = occurrences starting before k.
    let mut sums = Vec::with_capacity(hits.len() + 1);
    sums.push(0u64);
    for h in &hits {
        sums.push(sums.last().unwrap() + *h as u64);
    }
    let diam = patch.diameter() as usize;
    let stride = match policy {
        ScanPolicy::Exhaustive => 1,
        ScanPolicy::Sampled { stride } => stride,
    };
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let rows = sorted
        .par_iter()
        .map(|&len| {
            let places = len.saturating_sub(diam);
            let expected = omega * places as f64;
            let mut best = (-1.0f64, 0i64);
            let mut a = 0;
            while a + len <= prefix {
                let count = (sums[a + places] - sums[a]) as f64;
                let d = (count - expected).abs();
                if d > best.0 {
                    best = (d, a as i64);
                }
                a += stride;
            }
            DiscrepancyRow {
                length: len,
                discrepancy: best.0,
                argmax_start: best.1,
            }
        })
        .collect();
    Ok(DiscrepancyReport {
        patch: patch.format(source.alphabet()),
        frequency: omega,
        prefix,
        policy,
        rows,
    })
}

/// Particle change against broken bonds for one excitation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExcitationRatio {
    /// `|n(Y|X)|` for the patch.
    pub particles: u64,
    pub broken_bonds: u64,
    /// `particles / broken_bonds`; `None` when no bond is broken.
    pub ratio: Option<f64>,
}

pub fn sbc_excitation_ratio(
    spec: &HamiltonianSpec,
    excitation: &Excitation,
    patch: &Patch,
) -> Result<ExcitationRatio> {
    if excitation.is_empty() {
        return Err(Error::Contract(
            "the excitation must change at least one site".into(),
        ));
    }
    let particles = diff_count(excitation, patch, patch.diameter())?.unsigned_abs();
    let bonds = broken_bonds(spec, excitation)?;
    let ratio = (bonds > 0).then(|| particles as f64 / bonds as f64);
    Ok(ExcitationRatio {
        particles,
        broken_bonds: bonds,
        ratio,
    })
}

/// Patch count in a rectangular region against `ω` times the number of
/// placements, with the boundary length `P(Λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TilingDeviation {
    pub count: u64,
    pub expected: f64,
    pub deviation: f64,
    pub perimeter: usize,
    pub ratio: f64,
}

pub fn tiling_discrepancy(grid: &TilingGrid, patch: &Patch2d, omega: f64) -> TilingDeviation {
    let (dx, dy) = patch.diameter();
    let places =
        grid.width().saturating_sub(dx as usize) * grid.height().saturating_sub(dy as usize);
    let count = count_patch_2d(grid, patch);
    let expected = omega * places as f64;
    let deviation = (count as f64 - expected).abs();
    let perimeter = grid.perimeter();
    TilingDeviation {
        count,
        expected,
        deviation,
        perimeter,
        ratio: deviation / perimeter as f64,
    }
}

/// Largest difference in the number of `symbol`s between two windows of
/// equal length `<= l_max`, both inside `[0, 4·l_max)`.
pub fn balanced_check(source: &ConfigurationSource, symbol: Symbol, l_max: usize) -> Result<u64> {
    if source.alphabet().size() != 2 {
        return Err(Error::Domain(
            "balance is defined for binary alphabets".into(),
        ));
    }
    source.alphabet().check(symbol)?;
    if l_max == 0 {
        return Err(Error::Domain("l_max must be positive".into()));
    }
    let prefix = 4 * l_max;
    let window = source.window(0, prefix)?;
    let mut sums = vec![0u64; prefix + 1];
    for (k, &s) in window.symbols.iter().enumerate() {
        sums[k + 1] = sums[k] + (s == symbol) as u64;
    }
    let worst = (1..=l_max)
        .into_par_iter()
        .map(|len| {
            let counts = (0..=prefix - len).map(|a| sums[a + len] - sums[a]);
            let (lo, hi) = counts.fold((u64::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
            hi - lo
        })
        .max()
        .unwrap_or(0);
    Ok(worst)
}
