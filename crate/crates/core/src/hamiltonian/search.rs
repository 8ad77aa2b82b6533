//! Exhaustive minimisation of `H(Y) − H(X)` over excitations supported in a
//! window.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{apply_excitation, ConfigurationSource, Excitation, Symbol};

use super::local::LocalProblem;
use super::{relative_energy, EnergyBreakdown, HamiltonianSpec};

/// Default cap on the number of configurations enumerated.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

const CHUNK: u64 = 1 << 12;

/// Lowest relative energy found and the excitation attaining it.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub window_start: i64,
    pub width: usize,
    pub max_flips: Option<usize>,
    pub enumerated: u64,
    /// Equal to `breakdown.total`, recomputed for `witness` alone.
    pub minimum: f64,
    pub witness: Excitation,
    pub breakdown: EnergyBreakdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundVerdict {
    LocallyGround,
    Violated,
}

#[derive(Clone, Debug)]
pub struct GroundCheck {
    pub verdict: GroundVerdict,
    /// Truncation allowance for excitations in the window.
    pub tail_bound: f64,
    pub outcome: SearchOutcome,
}

type Candidate = (f64, Vec<(i64, Symbol)>);

fn better(a: &Candidate, b: &Candidate) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

fn keep_best(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn overrides(problem: &LocalProblem, assign: &[Symbol]) -> Vec<(i64, Symbol)> {
    problem
        .sites()
        .iter()
        .zip(assign.iter().zip(problem.base()))
        .filter(|(_, (a, b))| a != b)
        .map(|(&s, (&a, _))| (s, a))
        .collect()
}

fn ball_size(width: usize, radix: u64, max_flips: usize, budget: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut choose: u64 = 1;
    let mut power: u64 = 1;
    for j in 0..=max_flips.min(width) {
        if j > 0 {
            choose = choose.checked_mul((width - j + 1) as u64)? / j as u64;
            power = power.checked_mul(radix - 1)?;
        }
        total = total.checked_add(choose.checked_mul(power)?)?;
        if total > budget {
            return None;
        }
    }
    Some(total)
}

/// Minimise `H(Y) − H(X)` over all `Y` equal to `X` outside
/// `[start, start + width)`, optionally within Hamming distance
/// `max_flips`. Ties go to the lexicographically smallest override set, so
/// the result does not depend on the thread count.
pub fn exhaustive_search(
    spec: &HamiltonianSpec,
    base: &ConfigurationSource,
    start: i64,
    width: usize,
    max_flips: Option<usize>,
    budget: u64,
) -> Result<SearchOutcome> {
    if base.alphabet().size() != spec.alphabet().size() {
        return Err(Error::Domain(
            "configuration and Hamiltonian alphabets differ".into(),
        ));
    }
    let radix = spec.alphabet().size() as u64;
    let sites: Vec<i64> = (start..start + width as i64).collect();
    let problem = LocalProblem::new(spec, base, sites)?;

    let (best, enumerated) = match max_flips {
        Some(k) if k < width => {
            let total = ball_size(width, radix, k, budget).ok_or_else(|| {
                Error::Budget(format!(
                    "Hamming ball of radius {k} in width {width} exceeds {budget}"
                ))
            })?;
            (search_ball(&problem, radix, k), total)
        }
        _ => {
            let total = radix
                .checked_pow(width as u32)
                .filter(|&n| n <= budget)
                .ok_or_else(|| {
                    Error::Budget(format!("{radix}^{width} configurations exceed {budget}"))
                })?;
            (search_full(&problem, radix, total), total)
        }
    };
    let (_, overrides) = best.expect("the base configuration is always enumerated");
    let witness = apply_excitation(base, overrides)?;
    let breakdown = relative_energy(spec, &witness)?;
    Ok(SearchOutcome {
        window_start: start,
        width,
        max_flips,
        enumerated,
        minimum: breakdown.total,
        witness,
        breakdown,
    })
}

fn search_full(problem: &LocalProblem, radix: u64, total: u64) -> Option<Candidate> {
    let width = problem.sites().len();
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut assign = Vec::with_capacity(width);
            let mut rest = lo;
            for _ in 0..width {
                assign.push(Symbol((rest % radix) as u8));
                rest /= radix;
            }
            let mut energy = problem.energy(&assign);
            let mut best: Option<Candidate> = None;
            for idx in lo..hi {
                if idx > lo {
                    // Odometer step, updating the energy incrementally.
                    for k in 0..width {
                        let next = (assign[k].0 as u64 + 1) % radix;
                        energy += problem.delta(&mut assign, k, Symbol(next as u8));
                        assign[k] = Symbol(next as u8);
                        if next != 0 {
                            break;
                        }
                    }
                }
                let worth = match &best {
                    None => true,
                    Some((b, _)) => energy <= b + 1e-9 * (1.0 + b.abs()),
                };
                if worth {
                    let exact = problem.energy(&assign);
                    let cand = (exact, overrides(problem, &assign));
                    if best.as_ref().is_none_or(|b| better(&cand, b)) {
                        best = Some(cand);
                    }
                }
            }
            best
        })
        .reduce(|| None, keep_best)
}

fn search_ball(problem: &LocalProblem, radix: u64, max_flips: usize) -> Option<Candidate> {
    fn walk(
        problem: &LocalProblem,
        radix: u64,
        from: usize,
        left: usize,
        assign: &mut Vec<Symbol>,
        best: &mut Option<Candidate>,
    ) {
        let cand = (problem.energy(assign), overrides(problem, assign));
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            *best = Some(cand);
        }
        if left == 0 {
            return;
        }
        for k in from..assign.len() {
            let orig = assign[k];
            for s in 0..radix as u8 {
                if Symbol(s) == orig {
                    continue;
                }
                assign[k] = Symbol(s);
                walk(problem, radix, k + 1, left - 1, assign, best);
            }
            assign[k] = orig;
        }
    }
    let mut assign = problem.base().to_vec();
    let mut best = None;
    walk(problem, radix, 0, max_flips, &mut assign, &mut best);
    best
}

/// Exhaustive search plus the verdict: locally ground when no excitation in
/// the window goes below `−tail_bound`.
pub fn is_local_ground_state(
    spec: &HamiltonianSpec,
    base: &ConfigurationSource,
    start: i64,
    width: usize,
    max_flips: Option<usize>,
    budget: u64,
) -> Result<GroundCheck> {
    let outcome = exhaustive_search(spec, base, start, width, max_flips, budget)?;
    let tail_bound = spec.tail_bound(width);
    let verdict = if outcome.minimum >= -tail_bound {
        GroundVerdict::LocallyGround
    } else {
        GroundVerdict::Violated
    };
    Ok(GroundCheck {
        verdict,
        tail_bound,
        outcome,
    })
}
