//! Translation-invariant interactions and their energy algebra.
//!
//! A [`HamiltonianSpec`] expands into a list of [`InteractionTerm`]s. Each
//! term is a template `Φ` on a finite set of offsets; the Hamiltonian is the
//! sum of every template placed at every site of Z. Three families are
//! built in: the Thue-Morse four-spin interaction, the Sturmian
//! forbidden-distance pair interaction and explicit finite-range terms.
//! Chemical potentials add `−ε` per occurrence of a favored patch.

mod energy;
mod local;
mod search;
mod text;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Alphabet, Patch, Symbol};
use crate::symbolic::{forbidden_distances, ForbiddenSet, RotationNumber};

pub use energy::{
    bond_changes, broken_bonds, energy_density, find_frustration, non_frustration_check,
    relative_energy, window_energy, BondChanges,
};
pub(crate) use local::LocalProblem;
pub use search::{
    exhaustive_search, is_local_ground_state, GroundCheck, GroundVerdict, SearchOutcome,
    DEFAULT_BUDGET,
};

/// Largest table a finite-range term may carry.
const MAX_TABLE: usize = 1 << 20;
/// Largest number of templates a family may expand into.
const MAX_TEMPLATES: usize = 1 << 16;

/// Shape of a term's energy as a function of the symbols on its offsets.
#[derive(Clone, Debug, PartialEq)]
pub enum TermEnergy {
    /// `(σ₀ + σ₁)² (σ₂ + σ₃)²` with σ = +1 for symbol 0 and −1 for symbol 1.
    /// Offsets 1 and 2 may coincide.
    FourSpin,
    /// 1 when the symbols equal `pattern`, 0 otherwise.
    Pattern(Vec<Symbol>),
    /// `values[Σ s_k · radix^k]`.
    Table { radix: usize, values: Vec<f64> },
}

/// Whether a term belongs to the interaction proper or to a chemical
/// potential added on top of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermRole {
    Interaction,
    Chemical,
}

/// One interaction template `Φ_Λ`, placed at every site.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionTerm {
    pub id: String,
    pub offsets: Vec<i64>,
    pub energy: TermEnergy,
    pub coupling: f64,
    pub role: TermRole,
}

impl InteractionTerm {
    pub fn new(
        id: impl Into<String>,
        offsets: Vec<i64>,
        energy: TermEnergy,
        coupling: f64,
    ) -> Result<Self> {
        let id = id.into();
        if offsets.is_empty() {
            return Err(Error::Domain(format!("term {id} has no offsets")));
        }
        let mut sorted = offsets.clone();
        sorted.sort_unstable();
        // The four-spin product may share its middle site, (σ₀+σ₁)²(σ₁+σ₂)².
        if energy != TermEnergy::FourSpin && sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("term {id} repeats an offset")));
        }
        if !coupling.is_finite() {
            return Err(Error::Domain(format!(
                "term {id} has a non-finite coupling"
            )));
        }
        match &energy {
            TermEnergy::FourSpin if offsets.len() != 4 => {
                return Err(Error::Domain(format!(
                    "four-spin term {id} needs exactly 4 offsets"
                )));
            }
            TermEnergy::Pattern(p) if p.len() != offsets.len() => {
                return Err(Error::Domain(format!(
                    "pattern of term {id} does not match its offsets"
                )));
            }
            TermEnergy::Table { radix, values } => {
                let expected = radix
                    .checked_pow(offsets.len() as u32)
                    .filter(|&n| n <= MAX_TABLE)
                    .ok_or_else(|| Error::Domain(format!("table of term {id} is too large")))?;
                if values.len() != expected {
                    return Err(Error::Domain(format!(
                        "table of term {id} has {} entries, expected {expected}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain(format!(
                        "table of term {id} has a non-finite entry"
                    )));
                }
            }
            _ => {}
        }
        Ok(InteractionTerm {
            id,
            offsets,
            energy,
            coupling,
            role: TermRole::Interaction,
        })
    }

    /// Energy for the symbols `sym(k)` on `offsets[k]`.
    #[inline]
    pub fn value(&self, sym: impl Fn(usize) -> Symbol) -> f64 {
        self.coupling * self.raw(sym)
    }

    #[inline]
    fn raw(&self, sym: impl Fn(usize) -> Symbol) -> f64 {
        match &self.energy {
            TermEnergy::FourSpin => {
                let spin = |k: usize| 1.0 - 2.0 * sym(k).0 as f64;
                let a = spin(0) + spin(1);
                let b = spin(2) + spin(3);
                a * a * b * b
            }
            TermEnergy::Pattern(p) => {
                if p.iter().enumerate().all(|(k, &s)| sym(k) == s) {
                    1.0
                } else {
                    0.0
                }
            }
            TermEnergy::Table { radix, values } => {
                let mut idx = 0;
                for k in (0..self.offsets.len()).rev() {
                    idx = idx * radix + sym(k).index();
                }
                values[idx]
            }
        }
    }

    fn raw_range(&self) -> (f64, f64) {
        match &self.energy {
            TermEnergy::FourSpin => (0.0, 16.0),
            TermEnergy::Pattern(_) => (0.0, 1.0),
            TermEnergy::Table { values, .. } => {
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }

    /// Smallest value the term takes over all assignments.
    pub fn min_energy(&self) -> f64 {
        let (lo, hi) = self.raw_range();
        (self.coupling * lo).min(self.coupling * hi)
    }

    /// Largest `|Φ|` over all assignments.
    pub fn max_abs_energy(&self) -> f64 {
        let (lo, hi) = self.raw_range();
        (self.coupling * lo).abs().max((self.coupling * hi).abs())
    }

    /// Whether the term takes at most two distinct values, so that every
    /// placement is either satisfied or a broken bond.
    pub fn is_two_valued(&self) -> bool {
        match &self.energy {
            TermEnergy::FourSpin | TermEnergy::Pattern(_) => true,
            TermEnergy::Table { values, .. } => {
                let mut distinct: Vec<f64> = values.clone();
                distinct.sort_by(f64::total_cmp);
                distinct.dedup();
                distinct.len() <= 2
            }
        }
    }

    pub fn min_offset(&self) -> i64 {
        self.offsets.iter().copied().min().unwrap_or(0)
    }

    pub fn max_offset(&self) -> i64 {
        self.offsets.iter().copied().max().unwrap_or(0)
    }

    fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match &self.energy {
            TermEnergy::FourSpin if alphabet.size() != 2 => Err(Error::Domain(format!(
                "four-spin term {} needs a binary alphabet",
                self.id
            ))),
            TermEnergy::Pattern(p) => p.iter().try_for_each(|&s| alphabet.check(s).map(|_| ())),
            TermEnergy::Table { radix, .. } if *radix != alphabet.size() => {
                Err(Error::Domain(format!(
                    "table of term {} is indexed for {radix} symbols, alphabet has {}",
                    self.id,
                    alphabet.size()
                )))
            }
            _ => Ok(()),
        }
    }
}

/// The parametric family a spec was built from.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `J(r, p) = λ^{r+p}` for `r <= r_max`, `p <= p_max`.
    ThueMorse { lambda: f64, r_max: u32, p_max: u32 },
    /// Pair couplings `d^{-α}` on forbidden distances up to `k_max`, plus the
    /// zero-run term.
    Sturmian {
        phi: RotationNumber,
        alpha: f64,
        k_max: u64,
        forbidden: ForbiddenSet,
    },
    /// Explicit terms over an arbitrary alphabet.
    FiniteRange { terms: Vec<InteractionTerm> },
}

/// A favored patch with strength `ε`: each occurrence contributes `−ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChemicalPotential {
    pub patch: Patch,
    pub epsilon: f64,
}

/// A complete Hamiltonian: family, alphabet, chemical potentials and the
/// expanded list of term templates.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    family: Family,
    alphabet: Alphabet,
    chemical: Vec<ChemicalPotential>,
    terms: Vec<InteractionTerm>,
}

/// Result of an energy evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// Sum of `per_term`, accumulated in key order.
    pub total: f64,
    /// Contribution of every template with a nonzero share.
    pub per_term: BTreeMap<String, f64>,
    /// Bound on the energy carried by couplings beyond the cutoffs.
    pub tail_bound: f64,
}

impl EnergyBreakdown {
    pub(crate) fn from_terms(per_term: BTreeMap<String, f64>, tail_bound: f64) -> Self {
        let total = per_term.values().fold(0.0, |a, b| a + b);
        EnergyBreakdown {
            total,
            per_term,
            tail_bound,
        }
    }

    pub fn to_csv(&self) -> String {
        use crate::fmt::sig12;
        let mut out = String::from("term,energy\n");
        for (k, v) in &self.per_term {
            out.push_str(&format!("{k},{}\n", sig12(*v)));
        }
        out.push_str(&format!("total,{}\n", sig12(self.total)));
        out.push_str(&format!("tail_bound,{}\n", sig12(self.tail_bound)));
        out
    }
}

/// The Thue-Morse four-spin Hamiltonian with `J(r, p) = λ^{r+p}`.
///
/// Template `(r, p)` sits on offsets `{0, 2^r, (2p+1)2^r, (2p+2)2^r}`.
pub fn build_tm_hamiltonian(lambda: f64, r_max: u32, p_max: u32) -> Result<HamiltonianSpec> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!(
            "λ = {lambda} must lie in (0, 1) for summability"
        )));
    }
    if r_max > 40 || p_max > 1 << 20 {
        return Err(Error::Domain("cutoffs too large for 64-bit offsets".into()));
    }
    let count = (r_max as usize + 1) * (p_max as usize + 1);
    if count > MAX_TEMPLATES {
        return Err(Error::Budget(format!(
            "{count} templates exceed the limit of {MAX_TEMPLATES}"
        )));
    }
    let mut terms = Vec::with_capacity(count);
    for r in 0..=r_max {
        let step = 1i64 << r;
        for p in 0..=p_max {
            let p64 = p as i64;
            let offsets = vec![0, step, (2 * p64 + 1) * step, (2 * p64 + 2) * step];
            let coupling = lambda.powi((r + p) as i32);
            terms.push(InteractionTerm::new(
                format!("tm(r={r},p={p})"),
                offsets,
                TermEnergy::FourSpin,
                coupling,
            )?);
        }
    }
    Ok(HamiltonianSpec {
        family: Family::ThueMorse {
            lambda,
            r_max,
            p_max,
        },
        alphabet: Alphabet::spins(),
        chemical: Vec::new(),
        terms,
    })
}

/// The forbidden-distance Hamiltonian of a Sturmian system.
///
/// For every forbidden `d <= k_max` a pair term on `{0, d}` costs `d^{-α}`
/// when both sites hold `1`; one more term costs 1 for `m` consecutive
/// zeros. Every Sturmian word of slope φ has all terms at zero.
pub fn build_sturmian_hamiltonian(
    phi: &RotationNumber,
    alpha: f64,
    k_max: u64,
) -> Result<HamiltonianSpec> {
    if !alpha.is_finite() || alpha <= 3.0 {
        return Err(Error::Domain(format!(
            "decay exponent α = {alpha} must exceed 3"
        )));
    }
    let forbidden = forbidden_distances(phi, k_max)?;
    let mut terms = Vec::with_capacity(forbidden.distances.len() + 1);
    for &d in &forbidden.distances {
        terms.push(InteractionTerm::new(
            format!("pair(d={d})"),
            vec![0, d as i64],
            TermEnergy::Pattern(vec![Symbol(1), Symbol(1)]),
            (d as f64).powf(-alpha),
        )?);
    }
    let m = forbidden.m as usize;
    terms.push(InteractionTerm::new(
        format!("zero-run(m={m})"),
        (0..m as i64).collect(),
        TermEnergy::Pattern(vec![Symbol(0); m]),
        1.0,
    )?);
    Ok(HamiltonianSpec {
        family: Family::Sturmian {
            phi: phi.clone(),
            alpha,
            k_max,
            forbidden,
        },
        alphabet: Alphabet::binary(),
        chemical: Vec::new(),
        terms,
    })
}

/// A spec made of explicit terms. No terms at all is the free gas.
pub fn build_finite_range(
    alphabet: Alphabet,
    terms: Vec<InteractionTerm>,
) -> Result<HamiltonianSpec> {
    for t in &terms {
        t.check_alphabet(&alphabet)?;
        if t.role != TermRole::Interaction {
            return Err(Error::Domain(format!(
                "term {} is not an interaction term",
                t.id
            )));
        }
    }
    let mut ids: Vec<&str> = terms.iter().map(|t| t.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Domain(format!("duplicate term id {}", w[0])));
    }
    Ok(HamiltonianSpec {
        family: Family::FiniteRange {
            terms: terms.clone(),
        },
        alphabet,
        chemical: Vec::new(),
        terms,
    })
}

/// `spec` plus `−ε` per occurrence of `patch`; `ε > 0` favors the patch.
pub fn add_chemical_potential(
    spec: &HamiltonianSpec,
    patch: &Patch,
    epsilon: f64,
) -> Result<HamiltonianSpec> {
    if !epsilon.is_finite() {
        return Err(Error::Domain("chemical potential must be finite".into()));
    }
    for &(_, s) in patch.cells() {
        spec.alphabet.check(s)?;
    }
    let mut out = spec.clone();
    let label = patch.format(&spec.alphabet);
    let mut id = format!("chem({label})");
    let mut k = 1;
    while out.terms.iter().any(|t| t.id == id) {
        k += 1;
        id = format!("chem({label})#{k}");
    }
    out.terms.push(InteractionTerm {
        id,
        offsets: patch.offsets().collect(),
        energy: TermEnergy::Pattern(patch.cells().iter().map(|c| c.1).collect()),
        coupling: -epsilon,
        role: TermRole::Chemical,
    });
    out.chemical.push(ChemicalPotential {
        patch: patch.clone(),
        epsilon,
    });
    Ok(out)
}

impl HamiltonianSpec {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn chemical_potentials(&self) -> &[ChemicalPotential] {
        &self.chemical
    }

    /// Every template, interaction terms first, then chemical potentials.
    pub fn terms(&self) -> &[InteractionTerm] {
        &self.terms
    }

    pub fn interaction_terms(&self) -> impl Iterator<Item = &InteractionTerm> {
        self.terms
            .iter()
            .filter(|t| t.role == TermRole::Interaction)
    }

    /// Whether every interaction term is two-valued, so broken bonds can be
    /// counted.
    pub fn is_normalizable(&self) -> bool {
        self.interaction_terms().all(InteractionTerm::is_two_valued)
    }

    /// Largest template extent `max offset − min offset`.
    pub fn max_diameter(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.max_offset() - t.min_offset())
            .max()
            .unwrap_or(0)
    }

    /// Sum of the couplings dropped by the cutoffs times the largest term
    /// energy: the truncation error of the energy per site.
    pub fn tail_per_site(&self) -> f64 {
        match &self.family {
            Family::ThueMorse {
                lambda,
                r_max,
                p_max,
            } => {
                let full = 1.0 / ((1.0 - lambda) * (1.0 - lambda));
                let kept = (1.0 - lambda.powi(*r_max as i32 + 1))
                    * (1.0 - lambda.powi(*p_max as i32 + 1))
                    * full;
                16.0 * (full - kept).max(0.0)
            }
            Family::Sturmian { alpha, k_max, .. } => {
                // Σ_{d > k} d^{-α} <= ∫_k^∞ x^{-α} dx, and ζ(α) <= 1 + 1/(α−1).
                if *k_max == 0 {
                    1.0 + 1.0 / (alpha - 1.0)
                } else {
                    (*k_max as f64).powf(1.0 - alpha) / (alpha - 1.0)
                }
            }
            Family::FiniteRange { .. } => 0.0,
        }
    }

    /// Truncation bound for an energy difference supported on `sites`
    /// sites: every dropped template can meet each site once per offset.
    pub fn tail_bound(&self, sites: usize) -> f64 {
        let offsets = match &self.family {
            Family::ThueMorse { .. } => 4.0,
            Family::Sturmian { .. } => 2.0,
            Family::FiniteRange { .. } => 0.0,
        };
        sites as f64 * offsets * self.tail_per_site()
    }
}
