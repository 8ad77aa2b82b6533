use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{ConfigurationSource, Excitation, Window};

use super::local::placement_starts;
use super::{EnergyBreakdown, HamiltonianSpec, InteractionTerm};

fn check_alphabet(spec: &HamiltonianSpec, source: &ConfigurationSource) -> Result<()> {
    if source.alphabet().size() != spec.alphabet().size() {
        return Err(Error::Domain(format!(
            "configuration over {} symbols, Hamiltonian over {}",
            source.alphabet().size(),
            spec.alphabet().size()
        )));
    }
    Ok(())
}

/// `H(Y) − H(X)`, summed over the placements that meet the support of `Y`.
pub fn relative_energy(spec: &HamiltonianSpec, excitation: &Excitation) -> Result<EnergyBreakdown> {
    let base = excitation.base();
    check_alphabet(spec, base)?;
    let sites: Vec<i64> = excitation.overrides().keys().copied().collect();
    let mut per_term = BTreeMap::new();
    for term in spec.terms() {
        let mut acc = 0.0;
        for start in placement_starts(term, &sites) {
            let y = eval(term, start, |i| excitation.symbol_at(i))?;
            let x = eval(term, start, |i| base.symbol_at(i))?;
            acc += y - x;
        }
        if acc != 0.0 {
            per_term.insert(term.id.clone(), acc);
        }
    }
    Ok(EnergyBreakdown::from_terms(
        per_term,
        spec.tail_bound(sites.len()),
    ))
}

fn eval(
    term: &InteractionTerm,
    start: i64,
    sym: impl Fn(i64) -> Result<crate::lattice::Symbol>,
) -> Result<f64> {
    let symbols = term
        .offsets
        .iter()
        .map(|&o| sym(start + o))
        .collect::<Result<Vec<_>>>()?;
    Ok(term.value(|k| symbols[k]))
}

/// Interaction placements meeting the support of an excitation, split by
/// whether they are broken (above their minimum) in `X` and in `Y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BondChanges {
    /// Broken in `Y`, satisfied in `X`.
    pub created: u64,
    /// Broken in `X`, satisfied in `Y`.
    pub healed: u64,
    /// Broken in both.
    pub kept: u64,
}

/// Broken-bond bookkeeping for an excitation. Chemical potentials are not
/// bonds and are skipped. Needs every interaction term to be two-valued.
pub fn bond_changes(spec: &HamiltonianSpec, excitation: &Excitation) -> Result<BondChanges> {
    if !spec.is_normalizable() {
        return Err(Error::Contract(
            "broken bonds need every interaction term to take at most two values".into(),
        ));
    }
    let base = excitation.base();
    check_alphabet(spec, base)?;
    let sites: Vec<i64> = excitation.overrides().keys().copied().collect();
    let mut out = BondChanges::default();
    for term in spec.interaction_terms() {
        let min = term.min_energy();
        for start in placement_starts(term, &sites) {
            let y = eval(term, start, |i| excitation.symbol_at(i))? > min;
            let x = eval(term, start, |i| base.symbol_at(i))? > min;
            match (x, y) {
                (false, true) => out.created += 1,
                (true, false) => out.healed += 1,
                (true, true) => out.kept += 1,
                (false, false) => {}
            }
        }
    }
    Ok(out)
}

/// Number of bonds `Y` breaks that `X` keeps.
pub fn broken_bonds(spec: &HamiltonianSpec, excitation: &Excitation) -> Result<u64> {
    Ok(bond_changes(spec, excitation)?.created)
}

/// Values of `term` at every placement contained in `window`, paired with
/// the placement start.
fn contained<'w>(
    term: &'w InteractionTerm,
    window: &'w Window,
) -> impl Iterator<Item = (i64, f64)> + 'w {
    let lo = window.start - term.min_offset();
    let hi = window.end() - term.max_offset();
    (lo..hi).map(move |i| {
        let v = term.value(|k| {
            window
                .get(i + term.offsets[k])
                .expect("placement inside window")
        });
        (i, v)
    })
}

/// First template placement inside `[start, start + len)` that sits above
/// its minimum, as `(term id, placement start)`.
pub fn find_frustration(
    spec: &HamiltonianSpec,
    source: &ConfigurationSource,
    start: i64,
    len: usize,
) -> Result<Option<(String, i64)>> {
    check_alphabet(spec, source)?;
    let window = source.window(start, len)?;
    for term in spec.terms() {
        let min = term.min_energy();
        if let Some((i, _)) = contained(term, &window).find(|&(_, v)| v > min) {
            return Ok(Some((term.id.clone(), i)));
        }
    }
    Ok(None)
}

/// Whether every template placement inside the window attains its minimum.
pub fn non_frustration_check(
    spec: &HamiltonianSpec,
    source: &ConfigurationSource,
    start: i64,
    len: usize,
) -> Result<bool> {
    Ok(find_frustration(spec, source, start, len)?.is_none())
}

/// Energy of the placements contained in `window`.
pub fn window_energy(spec: &HamiltonianSpec, window: &Window) -> EnergyBreakdown {
    let mut per_term = BTreeMap::new();
    for term in spec.terms() {
        let e: f64 = contained(term, window).map(|(_, v)| v).sum();
        if e != 0.0 {
            per_term.insert(term.id.clone(), e);
        }
    }
    EnergyBreakdown::from_terms(per_term, spec.tail_per_site() * window.len() as f64)
}

/// Energy per site of the placements anchored in `[start, start + len)`.
pub fn energy_density(
    spec: &HamiltonianSpec,
    source: &ConfigurationSource,
    start: i64,
    len: usize,
) -> Result<EnergyBreakdown> {
    check_alphabet(spec, source)?;
    if len == 0 {
        return Err(Error::Domain(
            "energy density needs a non-empty window".into(),
        ));
    }
    let mut per_term = BTreeMap::new();
    let mut symbols = Vec::new();
    for term in spec.terms() {
        let mut e = 0.0;
        for i in start..start + len as i64 {
            symbols.clear();
            for &o in &term.offsets {
                symbols.push(source.symbol_at(i + o)?);
            }
            e += term.value(|k| symbols[k]);
        }
        if e != 0.0 {
            per_term.insert(term.id.clone(), e / len as f64);
        }
    }
    Ok(EnergyBreakdown::from_terms(per_term, spec.tail_per_site()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{
        add_chemical_potential, build_sturmian_hamiltonian, build_tm_hamiltonian,
    };
    use crate::lattice::{apply_excitation, Patch, Symbol};
    use crate::symbolic::RotationNumber;

    #[test]
    fn thue_morse_is_frustration_free() {
        let spec = build_tm_hamiltonian(0.25, 4, 4).unwrap();
        let tm = ConfigurationSource::thue_morse();
        assert!(non_frustration_check(&spec, &tm, -500, 1500).unwrap());
        let d = energy_density(&spec, &tm, 0, 256).unwrap();
        assert_eq!(d.total, 0.0);
    }

    #[test]
    fn single_flip_costs() {
        let spec = build_tm_hamiltonian(0.25, 0, 0).unwrap();
        let tm = ConfigurationSource::thue_morse();
        // +--+-++- ; flip site 3.
        let y = apply_excitation(&tm, [(3, Symbol(1))]).unwrap();
        // Brute force over placements near site 3.
        let brute: f64 = (-2..6)
            .map(|i| {
                let w = |s: &dyn Fn(i64) -> Symbol| {
                    let a = 1.0 - 2.0 * s(i).0 as f64 + 1.0 - 2.0 * s(i + 1).0 as f64;
                    let b = 1.0 - 2.0 * s(i + 1).0 as f64 + 1.0 - 2.0 * s(i + 2).0 as f64;
                    a * a * b * b
                };
                w(&|j| y.symbol_at(j).unwrap()) - w(&|j| tm.symbol_at(j).unwrap())
            })
            .sum();
        let e = relative_energy(&spec, &y).unwrap();
        assert_eq!(e.total, brute);
        assert!(e.total > 0.0);
        let bonds = bond_changes(&spec, &y).unwrap();
        assert_eq!(bonds.healed, 0);
        assert_eq!(e.total, 16.0 * bonds.created as f64);
    }

    #[test]
    fn identity_is_zero() {
        let spec = build_sturmian_hamiltonian(&RotationNumber::golden(), 4.0, 20).unwrap();
        let s = ConfigurationSource::sturmian(RotationNumber::golden());
        let y = apply_excitation(&s, [(5, s.symbol_at(5).unwrap())]).unwrap();
        let e = relative_energy(&spec, &y).unwrap();
        assert_eq!(e.total, 0.0);
        assert!(e.per_term.is_empty());
        assert_eq!(e.tail_bound, 0.0);
    }

    #[test]
    fn chemical_terms_are_not_bonds() {
        let spec = build_tm_hamiltonian(0.25, 1, 1).unwrap();
        let tm = ConfigurationSource::thue_morse();
        let pair = Patch::parse(spec.alphabet(), "++").unwrap();
        let chem = add_chemical_potential(&spec, &pair, 1.0).unwrap();
        let y = apply_excitation(&tm, [(1, Symbol(0))]).unwrap();
        assert_eq!(
            bond_changes(&spec, &y).unwrap(),
            bond_changes(&chem, &y).unwrap()
        );
        let plain = relative_energy(&spec, &y).unwrap().total;
        let with = relative_energy(&chem, &y).unwrap();
        // "+--+" becomes "++-+": one "++" appears at 0.
        assert_eq!(with.per_term["chem(++)"], -1.0);
        assert_eq!(with.total, plain - 1.0);
    }

    #[test]
    fn window_energy_counts_contained_placements() {
        let spec = build_tm_hamiltonian(0.25, 0, 0).unwrap();
        let w = Window::new(0, vec![Symbol(0); 6]);
        assert_eq!(window_energy(&spec, &w).total, 4.0 * 16.0);
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let spec = build_tm_hamiltonian(0.25, 0, 0).unwrap();
        let src =
            ConfigurationSource::constant(crate::lattice::Alphabet::new("abc").unwrap(), Symbol(0))
                .unwrap();
        assert!(non_frustration_check(&spec, &src, 0, 10).is_err());
    }
}
