//! Zero-temperature stability scans: how cheaply can an excitation gain
//! favored patches?
//!
//! For an excitation `Y` with unperturbed energy `H(Y|X)` and patch gain
//! `n > 0`, adding a chemical potential `ε` for the patches makes `Y`
//! favorable once `ε > H(Y|X)/n`. The scan reports the smallest such
//! threshold over families of excitations of growing size.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::hamiltonian::{relative_energy, HamiltonianSpec};
use crate::lattice::{diff_count, ConfigurationSource, Excitation, Patch};

pub use crate::hamiltonian::exhaustive_search as exhaustive_excitation_search;

/// Blocks per scale when none is given.
pub const DEFAULT_BLOCKS_PER_SCALE: usize = 4;

/// A finite, enumerable family of excitations of a base configuration.
/// Flipping advances each symbol cyclically (complement for binary).
#[derive(Clone, Debug, PartialEq)]
pub enum ExcitationFamily {
    /// One site flipped, for each listed site. Size 1.
    SingleFlip { sites: Vec<i64> },
    /// `[start, start + w)` flipped for every width and start. Size `w`.
    ContiguousBlockFlip {
        widths: Vec<usize>,
        starts: Vec<i64>,
    },
    /// Dyadic blocks `[a·2^k, (a+1)·2^k)` for `a < blocks_per_scale`.
    /// Size `2^k`.
    HierarchicalBlockFlip {
        scales: Vec<u32>,
        blocks_per_scale: usize,
    },
    /// Explicit excitations; size is the support size.
    Custom(Vec<Excitation>),
}

/// One enumerated excitation.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub id: String,
    pub size: usize,
    pub excitation: Excitation,
}

impl ExcitationFamily {
    /// Every non-trivial member, in a fixed order.
    pub fn members(&self, base: &ConfigurationSource) -> Result<Vec<FamilyMember>> {
        let mut out = Vec::new();
        match self {
            ExcitationFamily::SingleFlip { sites } => {
                for &s in sites {
                    out.push(FamilyMember {
                        id: format!("flip@{s}"),
                        size: 1,
                        excitation: Excitation::flip_block(base, s, 1)?,
                    });
                }
            }
            ExcitationFamily::ContiguousBlockFlip { widths, starts } => {
                for &w in widths {
                    for &s in starts {
                        out.push(FamilyMember {
                            id: format!("block(w={w})@{s}"),
                            size: w,
                            excitation: Excitation::flip_block(base, s, w)?,
                        });
                    }
                }
            }
            ExcitationFamily::HierarchicalBlockFlip {
                scales,
                blocks_per_scale,
            } => {
                for &k in scales {
                    if k > 30 {
                        return Err(Error::Domain(format!("scale 2^{k} is too large")));
                    }
                    let w = 1usize << k;
                    for a in 0..*blocks_per_scale {
                        let start = (a * w) as i64;
                        out.push(FamilyMember {
                            id: format!("dyadic(k={k},a={a})"),
                            size: w,
                            excitation: Excitation::flip_block(base, start, w)?,
                        });
                    }
                }
            }
            ExcitationFamily::Custom(list) => {
                for (i, e) in list.iter().enumerate() {
                    if e.base() != base {
                        return Err(Error::Contract(format!(
                            "custom excitation {i} has a different base"
                        )));
                    }
                    out.push(FamilyMember {
                        id: format!("custom#{i}"),
                        size: e.support_size(),
                        excitation: e.clone(),
                    });
                }
            }
        }
        out.retain(|m| !m.excitation.is_empty());
        Ok(out)
    }
}

/// Best threshold among members of size at most `size`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub size: usize,
    pub best: String,
    /// Unperturbed `H(Y|X)` of the best member.
    pub energy: f64,
    /// Favored-patch gain of the best member.
    pub gain: i64,
    /// `energy / gain`; absent while no member gains patches.
    pub epsilon_star: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityCurve {
    pub members: usize,
    pub rows: Vec<StabilityRow>,
}

impl StabilityCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,energy,gain,epsilon_star\n");
        for r in &self.rows {
            let eps = r.epsilon_star.map(sig12).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.size,
                sig12(r.energy),
                r.gain,
                eps
            ));
        }
        out
    }
}

struct Scored {
    id: String,
    size: usize,
    energy: f64,
    gain: i64,
}

impl Scored {
    fn threshold(&self) -> Option<f64> {
        (self.gain > 0).then(|| self.energy / self.gain as f64)
    }
}

/// Thresholds `ε*(s)`: the minimum of `H(Y|X)/n` over members of size at
/// most `s` with positive gain. The families are nested by size, so the
/// curve is non-increasing.
pub fn stability_scan(
    spec: &HamiltonianSpec,
    favored: &[Patch],
    base: &ConfigurationSource,
    family: &ExcitationFamily,
) -> Result<StabilityCurve> {
    let members = family.members(base)?;
    if members.is_empty() {
        return Err(Error::Domain(
            "the excitation family has no non-trivial member".into(),
        ));
    }
    let scored = members
        .par_iter()
        .map(|m| {
            let energy = relative_energy(spec, &m.excitation)?.total;
            let mut gain = 0;
            for p in favored {
                gain += diff_count(&m.excitation, p, p.diameter())?;
            }
            Ok(Scored {
                id: m.id.clone(),
                size: m.size,
                energy,
                gain,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sizes: Vec<usize> = scored.iter().map(|s| s.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut rows = Vec::with_capacity(sizes.len());
    let mut best: Option<&Scored> = None;
    for size in sizes {
        for s in scored.iter().filter(|s| s.size == size) {
            best = Some(match best {
                None => s,
                Some(b) => match (s.threshold(), b.threshold()) {
                    (Some(x), Some(y)) if x < y => s,
                    (Some(_), None) => s,
                    (None, None) if s.energy < b.energy => s,
                    _ => b,
                },
            });
        }
        let b = best.expect("every size has a member");
        rows.push(StabilityRow {
            size,
            best: b.id.clone(),
            energy: b.energy,
            gain: b.gain,
            epsilon_star: b.threshold(),
        });
    }
    Ok(StabilityCurve {
        members: scored.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_sturmian_hamiltonian, build_tm_hamiltonian};
    use crate::lattice::Alphabet;
    use crate::symbolic::RotationNumber;

    #[test]
    fn thresholds_never_increase() {
        let spec = build_tm_hamiltonian(0.25, 6, 6).unwrap();
        let a = Alphabet::spins();
        let favored = [
            Patch::parse(&a, "++").unwrap(),
            Patch::parse(&a, "--").unwrap(),
        ];
        let fam = ExcitationFamily::HierarchicalBlockFlip {
            scales: (1..7).collect(),
            blocks_per_scale: 4,
        };
        let curve =
            stability_scan(&spec, &favored, &ConfigurationSource::thue_morse(), &fam).unwrap();
        assert_eq!(curve.rows.len(), 6);
        let eps: Vec<f64> = curve.rows.iter().filter_map(|r| r.epsilon_star).collect();
        assert!(eps.windows(2).all(|w| w[1] <= w[0]));
        assert!(curve
            .to_csv()
            .starts_with("size,energy,gain,epsilon_star\n2,"));
    }

    #[test]
    fn empty_family_is_rejected() {
        let spec = build_sturmian_hamiltonian(&RotationNumber::golden(), 4.0, 16).unwrap();
        let base = ConfigurationSource::sturmian(RotationNumber::golden());
        let fam = ExcitationFamily::Custom(vec![Excitation::identity(&base)]);
        let one = [Patch::parse(&Alphabet::binary(), "1").unwrap()];
        assert!(matches!(
            stability_scan(&spec, &one, &base, &fam),
            Err(Error::Domain(_))
        ));
        let none = ExcitationFamily::SingleFlip { sites: vec![] };
        assert!(matches!(
            stability_scan(&spec, &one, &base, &none),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn single_flip_of_sturmian_zero() {
        // The golden word starts 0100101001001; flipping a 0 to 1 gains one
        // particle.
        let spec = build_sturmian_hamiltonian(&RotationNumber::golden(), 4.0, 16).unwrap();
        let base = ConfigurationSource::sturmian(RotationNumber::golden());
        let one = [Patch::parse(&Alphabet::binary(), "1").unwrap()];
        let fam = ExcitationFamily::SingleFlip { sites: vec![0] };
        let curve = stability_scan(&spec, &one, &base, &fam).unwrap();
        assert_eq!(curve.rows[0].gain, 1);
        let e = curve.rows[0].energy;
        assert!(e > 0.0);
        assert_eq!(curve.rows[0].epsilon_star, Some(e));
    }
}
