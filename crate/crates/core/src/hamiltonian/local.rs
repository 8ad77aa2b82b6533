//! Placements of term templates that touch a finite set of free sites.

use crate::error::Result;
use crate::lattice::{ConfigurationSource, Symbol};

use super::{HamiltonianSpec, InteractionTerm};

/// Starts `i` such that the template placed at `i` covers some site in
/// `sites`, ascending and without repeats.
pub(crate) fn placement_starts(term: &InteractionTerm, sites: &[i64]) -> Vec<i64> {
    let mut starts: Vec<i64> = Vec::with_capacity(sites.len() * term.offsets.len());
    for &o in &term.offsets {
        starts.extend(sites.iter().map(|&s| s - o));
    }
    starts.sort_unstable();
    starts.dedup();
    starts
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Fixed(Symbol),
    Var(u32),
}

#[derive(Clone, Debug)]
struct Placement {
    term: u32,
    cells: u32,
    base_energy: f64,
}

/// Every placement touching the free sites, with the symbols outside them
/// frozen to a base configuration. Energies are differences against the
/// base, summed over placements in a fixed order.
#[derive(Clone, Debug)]
pub(crate) struct LocalProblem<'a> {
    terms: &'a [InteractionTerm],
    sites: Vec<i64>,
    base: Vec<Symbol>,
    placements: Vec<Placement>,
    cells: Vec<Cell>,
    by_site: Vec<Vec<u32>>,
}

impl<'a> LocalProblem<'a> {
    /// `sites` must be ascending and distinct.
    pub fn new(
        spec: &'a HamiltonianSpec,
        base: &ConfigurationSource,
        sites: Vec<i64>,
    ) -> Result<Self> {
        debug_assert!(sites.windows(2).all(|w| w[0] < w[1]));
        let terms = spec.terms();
        let base_symbols = sites
            .iter()
            .map(|&s| base.symbol_at(s))
            .collect::<Result<Vec<_>>>()?;
        let mut placements = Vec::new();
        let mut cells = Vec::new();
        let mut by_site = vec![Vec::new(); sites.len()];
        for (ti, term) in terms.iter().enumerate() {
            for start in placement_starts(term, &sites) {
                let first = cells.len() as u32;
                let index = placements.len() as u32;
                for &o in &term.offsets {
                    let site = start + o;
                    match sites.binary_search(&site) {
                        Ok(k) => {
                            if by_site[k].last() != Some(&index) {
                                by_site[k].push(index);
                            }
                            cells.push(Cell::Var(k as u32));
                        }
                        Err(_) => cells.push(Cell::Fixed(base.symbol_at(site)?)),
                    }
                }
                let slice = &cells[first as usize..];
                let base_energy = term.value(|k| match slice[k] {
                    Cell::Fixed(s) => s,
                    Cell::Var(v) => base_symbols[v as usize],
                });
                placements.push(Placement {
                    term: ti as u32,
                    cells: first,
                    base_energy,
                });
            }
        }
        Ok(LocalProblem {
            terms,
            sites,
            base: base_symbols,
            placements,
            cells,
            by_site,
        })
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn base(&self) -> &[Symbol] {
        &self.base
    }

    #[inline]
    fn value(&self, p: &Placement, assign: &[Symbol]) -> f64 {
        let term = &self.terms[p.term as usize];
        let cells = &self.cells[p.cells as usize..];
        term.value(|k| match cells[k] {
            Cell::Fixed(s) => s,
            Cell::Var(v) => assign[v as usize],
        })
    }

    /// `H(Y) − H(X)` where `Y` carries `assign` on the free sites.
    pub fn energy(&self, assign: &[Symbol]) -> f64 {
        self.placements
            .iter()
            .fold(0.0, |acc, p| acc + (self.value(p, assign) - p.base_energy))
    }

    /// Change of `H` when free site `k` goes from `assign[k]` to `to`.
    pub fn delta(&self, assign: &mut [Symbol], k: usize, to: Symbol) -> f64 {
        let from = assign[k];
        let before: f64 = self.by_site[k]
            .iter()
            .map(|&p| self.value(&self.placements[p as usize], assign))
            .sum();
        assign[k] = to;
        let after: f64 = self.by_site[k]
            .iter()
            .map(|&p| self.value(&self.placements[p as usize], assign))
            .sum();
        assign[k] = from;
        after - before
    }
}
