use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{count_patch, ConfigurationSource, Patch, Symbol, Window};

/// A configuration `Y` that differs from its base `X` on finitely many
/// sites. Overrides equal to the base value are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Excitation {
    base: ConfigurationSource,
    overrides: BTreeMap<i64, Symbol>,
}

/// Build `Y ~ X` from a map of overrides.
pub fn apply_excitation(
    base: &ConfigurationSource,
    overrides: impl IntoIterator<Item = (i64, Symbol)>,
) -> Result<Excitation> {
    let mut kept = BTreeMap::new();
    for (site, s) in overrides {
        base.alphabet().check(s)?;
        if base.symbol_at(site)? != s {
            kept.insert(site, s);
        } else {
            kept.remove(&site);
        }
    }
    Ok(Excitation {
        base: base.clone(),
        overrides: kept,
    })
}

impl Excitation {
    /// The trivial excitation `Y = X`.
    pub fn identity(base: &ConfigurationSource) -> Self {
        Excitation {
            base: base.clone(),
            overrides: BTreeMap::new(),
        }
    }

    /// Overwrite every site of `[start, start + len)` with `f(site, X_site)`.
    pub fn rewrite(
        base: &ConfigurationSource,
        start: i64,
        len: usize,
        mut f: impl FnMut(i64, Symbol) -> Symbol,
    ) -> Result<Self> {
        let window = base.window(start, len)?;
        let overrides = window
            .symbols
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let site = start + k as i64;
                (site, f(site, s))
            })
            .collect::<Vec<_>>();
        apply_excitation(base, overrides)
    }

    /// Flip (cyclically advance) every symbol of `[start, start + len)`.
    pub fn flip_block(base: &ConfigurationSource, start: i64, len: usize) -> Result<Self> {
        let alphabet = base.alphabet().clone();
        Self::rewrite(base, start, len, |_, s| alphabet.flip(s))
    }

    pub fn base(&self) -> &ConfigurationSource {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<i64, Symbol> {
        &self.overrides
    }

    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }

    /// Number of sites where `Y` differs from `X`.
    pub fn support_size(&self) -> usize {
        self.overrides.len()
    }

    /// Smallest and largest overridden site.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.overrides.keys().next()?;
        let hi = *self.overrides.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn symbol_at(&self, i: i64) -> Result<Symbol> {
        match self.overrides.get(&i) {
            Some(&s) => Ok(s),
            None => self.base.symbol_at(i),
        }
    }

    pub fn window(&self, start: i64, len: usize) -> Result<Window> {
        let mut w = self.base.window(start, len)?;
        for (&site, &s) in self.overrides.range(start..start + len as i64) {
            w.symbols[(site - start) as usize] = s;
        }
        Ok(w)
    }
}

/// `n_ar(Y|X)`: occurrences of `patch` in `Y` minus occurrences in `X`.
///
/// Only placements meeting an override can differ, and all of them lie in
/// the support widened by `margin` on both sides, so the count is exact
/// whenever `margin >= diameter(patch)`.
pub fn diff_count(excitation: &Excitation, patch: &Patch, margin: i64) -> Result<i64> {
    if margin < patch.diameter() {
        return Err(Error::Contract(format!(
            "margin {margin} is smaller than the patch diameter {}",
            patch.diameter()
        )));
    }
    let Some((lo, hi)) = excitation.support_bounds() else {
        return Ok(0);
    };
    let start = lo - margin;
    let len = (hi - lo + 2 * margin + 1) as usize;
    let x = excitation.base.window(start, len)?;
    let y = excitation.window(start, len)?;
    Ok(count_patch(&y, patch) as i64 - count_patch(&x, patch) as i64)
}
