//! Finite-volume Gibbs states with a fixed boundary configuration.
//!
//! The volume `V = [start, start + len)` is free; every site outside keeps
//! the boundary configuration `X`. Energies are `H(Y) − H(X)` over the
//! templates meeting `V`, so terms entirely outside `V` drop out. Two
//! evaluators are provided: exact enumeration of all `|S|^|V|` states and a
//! single-site Metropolis chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, LocalProblem};
use crate::lattice::{ConfigurationSource, Patch, Symbol};

/// Cap on the number of states enumerated exactly.
pub const EXACT_BUDGET: u64 = 1 << 24;
/// Number of batches used for batch-means error bars.
pub const BATCHES: usize = 32;
/// Name of the random generator recorded in sampler output.
pub const RNG_NAME: &str = "ChaCha8";

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct GibbsProblem {
    spec: HamiltonianSpec,
    start: i64,
    len: usize,
    boundary: ConfigurationSource,
    beta: f64,
}

impl GibbsProblem {
    pub fn new(
        spec: HamiltonianSpec,
        start: i64,
        len: usize,
        boundary: ConfigurationSource,
        beta: f64,
    ) -> Result<Self> {
        if len == 0 {
            return Err(Error::Domain(
                "the volume must contain at least one site".into(),
            ));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::Domain(format!(
                "β = {beta} must be finite and non-negative"
            )));
        }
        if boundary.alphabet().size() != spec.alphabet().size() {
            return Err(Error::Domain(
                "boundary and Hamiltonian alphabets differ".into(),
            ));
        }
        Ok(GibbsProblem {
            spec,
            start,
            len,
            boundary,
            beta,
        })
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(
            self.spec.clone(),
            self.start,
            self.len,
            self.boundary.clone(),
            beta,
        )
    }

    pub fn spec(&self) -> &HamiltonianSpec {
        &self.spec
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn volume(&self) -> (i64, usize) {
        (self.start, self.len)
    }

    fn local(&self) -> Result<LocalProblem<'_>> {
        let sites = (self.start..self.start + self.len as i64).collect();
        LocalProblem::new(&self.spec, &self.boundary, sites)
    }

    fn check_observables(&self, observables: &[Patch]) -> Result<()> {
        for p in observables {
            for &(_, s) in p.cells() {
                self.spec.alphabet().check(s)?;
            }
            if p.placements_in(self.len) == 0 {
                return Err(Error::Domain(format!(
                    "patch {} does not fit in a volume of {} sites",
                    p.format(self.spec.alphabet()),
                    self.len
                )));
            }
        }
        Ok(())
    }
}

/// Density of `patch` among the placements inside the volume.
fn density(patch: &Patch, assign: &[Symbol]) -> f64 {
    let places = patch.placements_in(assign.len());
    let hits = (0..places).filter(|&a| patch.matches_at(assign, a)).count();
    hits as f64 / places as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableEstimate {
    pub patch: String,
    pub mean: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsEstimate {
    pub beta: f64,
    /// `exact` or `metropolis`.
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    /// Energy relative to the boundary configuration.
    pub energy: Estimate,
    pub observables: Vec<ObservableEstimate>,
    /// Probability of the lowest-energy states (exact only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_probability: Option<f64>,
    /// `marginals[k][s]`: probability that site `start + k` holds `s`
    /// (exact only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub marginals: Vec<Vec<f64>>,
    /// Fraction of accepted proposals (Metropolis only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<f64>,
}

fn decode(mut idx: u64, radix: u64, out: &mut [Symbol]) {
    for s in out.iter_mut() {
        *s = Symbol((idx % radix) as u8);
        idx /= radix;
    }
}

struct Sums {
    z: f64,
    e: f64,
    obs: Vec<f64>,
    marg: Vec<f64>,
    ground: f64,
}

/// Exact Boltzmann averages by enumerating every state of the volume.
/// Weights are `exp(−β(E − E_min))`, so no term overflows.
pub fn exact_gibbs(problem: &GibbsProblem, observables: &[Patch]) -> Result<GibbsEstimate> {
    problem.check_observables(observables)?;
    let radix = problem.spec.alphabet().size() as u64;
    let len = problem.len;
    let total = radix
        .checked_pow(len as u32)
        .filter(|&n| n <= EXACT_BUDGET)
        .ok_or_else(|| Error::Budget(format!("{radix}^{len} states exceed {EXACT_BUDGET}")))?;
    let local = problem.local()?;
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect();

    // Energies of every state, chunk by chunk; the order is fixed, so the
    // sums below do not depend on the thread count.
    let energies: Vec<Vec<f64>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut assign = vec![Symbol(0); len];
            (lo..hi)
                .map(|i| {
                    decode(i, radix, &mut assign);
                    local.energy(&assign)
                })
                .collect()
        })
        .collect();
    let e_min = energies
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let beta = problem.beta;
    let parts: Vec<Sums> = chunks
        .par_iter()
        .zip(&energies)
        .map(|(&(lo, _), es)| {
            let mut s = Sums {
                z: 0.0,
                e: 0.0,
                obs: vec![0.0; observables.len()],
                marg: vec![0.0; len * radix as usize],
                ground: 0.0,
            };
            let mut assign = vec![Symbol(0); len];
            for (k, &e) in es.iter().enumerate() {
                decode(lo + k as u64, radix, &mut assign);
                let w = if beta == 0.0 {
                    1.0
                } else {
                    (-beta * (e - e_min)).exp()
                };
                s.z += w;
                s.e += w * e;
                for (o, p) in s.obs.iter_mut().zip(observables) {
                    *o += w * density(p, &assign);
                }
                for (site, sym) in assign.iter().enumerate() {
                    s.marg[site * radix as usize + sym.index()] += w;
                }
                if e == e_min {
                    s.ground += w;
                }
            }
            s
        })
        .collect();
    let mut acc = Sums {
        z: 0.0,
        e: 0.0,
        obs: vec![0.0; observables.len()],
        marg: vec![0.0; len * radix as usize],
        ground: 0.0,
    };
    for p in parts {
        acc.z += p.z;
        acc.e += p.e;
        acc.ground += p.ground;
        acc.obs.iter_mut().zip(&p.obs).for_each(|(a, b)| *a += b);
        acc.marg.iter_mut().zip(&p.marg).for_each(|(a, b)| *a += b);
    }
    let z = acc.z;
    let alphabet = problem.spec.alphabet();
    Ok(GibbsEstimate {
        beta,
        method: "exact".into(),
        sweeps: None,
        burn_in: None,
        seed: None,
        rng: None,
        energy: Estimate {
            mean: acc.e / z,
            se: 0.0,
        },
        observables: observables
            .iter()
            .zip(&acc.obs)
            .map(|(p, o)| ObservableEstimate {
                patch: p.format(alphabet),
                mean: o / z,
                se: 0.0,
            })
            .collect(),
        ground_probability: Some(acc.ground / z),
        marginals: acc
            .marg
            .chunks(radix as usize)
            .map(|c| c.iter().map(|w| w / z).collect())
            .collect(),
        acceptance: None,
    })
}

/// Mean and batch-means standard error of a series.
fn batch_means(series: &[f64]) -> Estimate {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let batches = BATCHES.min(n);
    if batches < 2 {
        return Estimate { mean, se: f64::NAN };
    }
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| series[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - bm) * (m - bm)).sum::<f64>() / (batches - 1) as f64;
    Estimate {
        mean,
        se: (var / batches as f64).sqrt(),
    }
}

/// Single-site Metropolis sampling, started from the boundary
/// configuration. A sweep is `|V|` proposals, each a uniform site and a
/// uniform different symbol, accepted with probability
/// `min(1, exp(−βΔH))`. Measurements are taken after every sweep past
/// `burn_in`.
pub fn metropolis_sample(
    problem: &GibbsProblem,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
    observables: &[Patch],
) -> Result<GibbsEstimate> {
    metropolis_stream(problem, sweeps, burn_in, seed, 0, observables)
}

fn metropolis_stream(
    problem: &GibbsProblem,
    sweeps: u64,
    burn_in: u64,
    seed: u64,
    stream: u64,
    observables: &[Patch],
) -> Result<GibbsEstimate> {
    if sweeps <= burn_in {
        return Err(Error::Domain(format!(
            "sweeps ({sweeps}) must exceed burn-in ({burn_in})"
        )));
    }
    problem.check_observables(observables)?;
    let local = problem.local()?;
    let radix = problem.spec.alphabet().size();
    let len = problem.len;
    let beta = problem.beta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut assign = local.base().to_vec();
    let kept = (sweeps - burn_in) as usize;
    let mut energies = Vec::with_capacity(kept);
    let mut series = vec![Vec::with_capacity(kept); observables.len()];
    let mut accepted: u64 = 0;
    for sweep in 0..sweeps {
        for _ in 0..len {
            if radix < 2 {
                break;
            }
            let k = rng.gen_range(0..len);
            let mut to = rng.gen_range(0..radix - 1);
            if to >= assign[k].index() {
                to += 1;
            }
            let to = Symbol(to as u8);
            let dh = local.delta(&mut assign, k, to);
            if dh <= 0.0 || rng.gen::<f64>() < (-beta * dh).exp() {
                assign[k] = to;
                accepted += 1;
            }
        }
        if sweep >= burn_in {
            energies.push(local.energy(&assign));
            for (s, p) in series.iter_mut().zip(observables) {
                s.push(density(p, &assign));
            }
        }
    }
    let alphabet = problem.spec.alphabet();
    Ok(GibbsEstimate {
        beta,
        method: "metropolis".into(),
        sweeps: Some(sweeps),
        burn_in: Some(burn_in),
        seed: Some(seed),
        rng: Some(RNG_NAME.into()),
        energy: batch_means(&energies),
        observables: observables
            .iter()
            .zip(&series)
            .map(|(p, s)| {
                let e = batch_means(s);
                ObservableEstimate {
                    patch: p.format(alphabet),
                    mean: e.mean,
                    se: e.se,
                }
            })
            .collect(),
        ground_probability: None,
        marginals: Vec::new(),
        acceptance: Some(accepted as f64 / (sweeps * len as u64) as f64),
    })
}

/// How each temperature of an anneal profile is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnealMethod {
    Exact,
    /// The chain for the `k`-th β uses stream `k` of the seeded generator.
    Metropolis {
        sweeps: u64,
        burn_in: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnealProfile {
    pub rows: Vec<GibbsEstimate>,
    /// Whether the mean energy is non-increasing in β: exactly (up to
    /// rounding) for enumeration, within three combined standard errors for
    /// sampling.
    pub energy_monotone: bool,
}

/// Independent estimates for an ascending list of β.
pub fn anneal_profile(
    template: &GibbsProblem,
    betas: &[f64],
    method: AnnealMethod,
    observables: &[Patch],
) -> Result<AnnealProfile> {
    if betas.is_empty() {
        return Err(Error::Domain("at least one β is needed".into()));
    }
    if betas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("β values must be ascending".into()));
    }
    let rows = betas
        .par_iter()
        .enumerate()
        .map(|(k, &beta)| {
            let problem = template.with_beta(beta)?;
            match method {
                AnnealMethod::Exact => exact_gibbs(&problem, observables),
                AnnealMethod::Metropolis {
                    sweeps,
                    burn_in,
                    seed,
                } => metropolis_stream(&problem, sweeps, burn_in, seed, k as u64, observables),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let energy_monotone = rows.windows(2).all(|w| {
        let (a, b) = (&w[0].energy, &w[1].energy);
        let slack = if a.se == 0.0 && b.se == 0.0 {
            1e-12 * (1.0 + a.mean.abs())
        } else {
            3.0 * (a.se * a.se + b.se * b.se).sqrt()
        };
        b.mean <= a.mean + slack
    });
    Ok(AnnealProfile {
        rows,
        energy_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_finite_range, InteractionTerm, TermEnergy};
    use crate::lattice::Alphabet;

    fn field(h: f64) -> HamiltonianSpec {
        let t = InteractionTerm::new(
            "field",
            vec![0],
            TermEnergy::Table {
                radix: 2,
                values: vec![1.0, -1.0],
            },
            h,
        )
        .unwrap();
        build_finite_range(Alphabet::spins(), vec![t]).unwrap()
    }

    fn free() -> HamiltonianSpec {
        build_finite_range(Alphabet::new("abc").unwrap(), vec![]).unwrap()
    }

    #[test]
    fn free_site_is_uniform() {
        let base = ConfigurationSource::constant(Alphabet::new("abc").unwrap(), Symbol(0)).unwrap();
        let p = GibbsProblem::new(free(), 0, 1, base, 3.0).unwrap();
        let g = exact_gibbs(&p, &[]).unwrap();
        for &q in &g.marginals[0] {
            assert!((q - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(g.energy.mean, 0.0);
    }

    #[test]
    fn field_two_state_ratio() {
        let base = ConfigurationSource::constant(Alphabet::spins(), Symbol(0)).unwrap();
        let h = 0.7;
        let beta = 1.3;
        let p = GibbsProblem::new(field(h), 0, 1, base, beta).unwrap();
        let g = exact_gibbs(&p, &[]).unwrap();
        // E(+) = h, E(−) = −h, so P(+)/P(−) = e^{−2βh}.
        let ratio = g.marginals[0][0] / g.marginals[0][1];
        assert!((ratio - (-2.0 * beta * h).exp()).abs() < 1e-14);
        assert!((g.marginals[0].iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn metropolis_is_reproducible() {
        let base = ConfigurationSource::constant(Alphabet::spins(), Symbol(0)).unwrap();
        let p = GibbsProblem::new(field(0.3), 0, 4, base, 1.0).unwrap();
        let plus = [Patch::single(Symbol(0))];
        let a = metropolis_sample(&p, 2000, 100, 9, &plus).unwrap();
        let b = metropolis_sample(&p, 2000, 100, 9, &plus).unwrap();
        assert_eq!(a, b);
        let exact = exact_gibbs(&p, &plus).unwrap();
        let o = &a.observables[0];
        assert!((o.mean - exact.observables[0].mean).abs() < 4.0 * o.se);
    }

    #[test]
    fn infinite_temperature_accepts_everything() {
        let base = ConfigurationSource::constant(Alphabet::spins(), Symbol(0)).unwrap();
        let p = GibbsProblem::new(field(5.0), 0, 3, base, 0.0).unwrap();
        let g = metropolis_sample(&p, 100, 0, 1, &[]).unwrap();
        assert_eq!(g.acceptance, Some(1.0));
    }

    #[test]
    fn anneal_singleton_matches_single_call() {
        let base = ConfigurationSource::constant(Alphabet::spins(), Symbol(0)).unwrap();
        let p = GibbsProblem::new(field(0.3), 0, 4, base, 2.0).unwrap();
        let plus = [Patch::single(Symbol(0))];
        let one = metropolis_sample(&p, 500, 10, 4, &plus).unwrap();
        let prof = anneal_profile(
            &p,
            &[2.0],
            AnnealMethod::Metropolis {
                sweeps: 500,
                burn_in: 10,
                seed: 4,
            },
            &plus,
        )
        .unwrap();
        assert_eq!(prof.rows, vec![one]);
        assert!(anneal_profile(&p, &[2.0, 1.0], AnnealMethod::Exact, &plus).is_err());
        let exact = anneal_profile(&p, &[0.0, 0.5, 1.0, 4.0], AnnealMethod::Exact, &plus).unwrap();
        assert!(exact.energy_monotone);
    }

    #[test]
    fn rejects_bad_inputs() {
        let base = ConfigurationSource::constant(Alphabet::spins(), Symbol(0)).unwrap();
        assert!(GibbsProblem::new(field(1.0), 0, 0, base.clone(), 1.0).is_err());
        assert!(GibbsProblem::new(field(1.0), 0, 3, base.clone(), -1.0).is_err());
        let p = GibbsProblem::new(field(1.0), 0, 30, base, 1.0).unwrap();
        assert!(matches!(exact_gibbs(&p, &[]), Err(Error::Budget(_))));
        assert!(metropolis_sample(&p, 10, 10, 0, &[]).is_err());
    }
}
