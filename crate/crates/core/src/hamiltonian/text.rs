//! Line-oriented text form of a [`HamiltonianSpec`].
//!
//! ```text
//! # comments and blank lines are ignored
//! family thue-morse lambda=0.25 r_max=8 p_max=8
//! family sturmian phi=quad:(-1+1*sqrt5)/2 alpha=4 k_max=64
//! family finite-range alphabet=01
//! term id=field offsets=0 table=1,-1 coupling=0.5
//! term id=pair offsets=0,2 pattern=11 coupling=1
//! chem patch=1.1 epsilon=0.25
//! ```
//!
//! Exactly one `family` line comes first. `term` lines are only valid for
//! `finite-range`; `chem` lines are valid for every family.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{Alphabet, Patch};
use crate::symbolic::RotationNumber;

use super::{
    add_chemical_potential, build_finite_range, build_sturmian_hamiltonian, build_tm_hamiltonian,
    Family, HamiltonianSpec, InteractionTerm, TermEnergy,
};

struct Fields<'a> {
    values: BTreeMap<&'a str, &'a str>,
    flags: Vec<&'a str>,
}

impl<'a> Fields<'a> {
    fn split(tokens: impl Iterator<Item = &'a str>) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut flags = Vec::new();
        for tok in tokens {
            match tok.split_once('=') {
                Some((k, v)) => {
                    if values.insert(k, v).is_some() {
                        return Err(Error::parse(format!("field {k} given twice")));
                    }
                }
                None => flags.push(tok),
            }
        }
        Ok(Fields { values, flags })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.values.remove(key)
    }

    fn need(&mut self, key: &str) -> Result<&'a str> {
        self.take(key)
            .ok_or_else(|| Error::parse(format!("missing field {key}")))
    }

    fn number<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.need(key)?;
        raw.parse()
            .map_err(|_| Error::parse(format!("bad value for {key}: {raw}")))
    }

    fn flag(&mut self, name: &str) -> bool {
        let before = self.flags.len();
        self.flags.retain(|f| *f != name);
        self.flags.len() != before
    }

    fn finish(self) -> Result<()> {
        if let Some(k) = self.values.keys().next() {
            return Err(Error::parse(format!("unknown field {k}")));
        }
        if let Some(f) = self.flags.first() {
            return Err(Error::parse(format!("unexpected token {f}")));
        }
        Ok(())
    }
}

fn list<T: FromStr>(raw: &str, what: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad {what} entry: {v}")))
        })
        .collect()
}

fn parse_term(alphabet: &Alphabet, mut f: Fields, index: usize) -> Result<InteractionTerm> {
    let id = f
        .take("id")
        .map(str::to_string)
        .unwrap_or_else(|| format!("term{index}"));
    let offsets: Vec<i64> = list(f.need("offsets")?, "offset")?;
    let coupling = match f.take("coupling") {
        Some(raw) => raw
            .parse()
            .map_err(|_| Error::parse(format!("bad coupling: {raw}")))?,
        None => 1.0,
    };
    let pattern = f.take("pattern");
    let table = f.take("table");
    let four = f.flag("four-spin");
    let energy = match (pattern, table, four) {
        (Some(p), None, false) => TermEnergy::Pattern(alphabet.parse_word(p)?),
        (None, Some(t), false) => TermEnergy::Table {
            radix: alphabet.size(),
            values: list(t, "table")?,
        },
        (None, None, true) => TermEnergy::FourSpin,
        _ => {
            return Err(Error::parse(
                "a term needs exactly one of pattern=, table= or four-spin",
            ))
        }
    };
    f.finish()?;
    InteractionTerm::new(id, offsets, energy, coupling)
}

impl FromStr for HamiltonianSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut family: Option<(usize, &str, Fields)> = None;
        let mut terms = Vec::new();
        let mut chems = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or("");
            match head {
                "family" => {
                    if family.is_some() {
                        return Err(Error::parse_at(line_no, "second family line"));
                    }
                    let name = tokens
                        .next()
                        .ok_or_else(|| Error::parse_at(line_no, "missing family name"))?;
                    let fields = Fields::split(tokens).map_err(|e| e.at_line(line_no))?;
                    family = Some((line_no, name, fields));
                }
                "term" | "chem" if family.is_none() => {
                    return Err(Error::parse_at(line_no, "the family line must come first"));
                }
                "term" => terms.push((
                    line_no,
                    Fields::split(tokens).map_err(|e| e.at_line(line_no))?,
                )),
                "chem" => chems.push((
                    line_no,
                    Fields::split(tokens).map_err(|e| e.at_line(line_no))?,
                )),
                other => {
                    return Err(Error::parse_at(
                        line_no,
                        format!("unknown directive {other}"),
                    ))
                }
            }
        }
        let (line_no, name, mut f) = family.ok_or_else(|| Error::parse("no family line"))?;
        let at = |e: Error| e.at_line(line_no);
        let mut spec = match name {
            "thue-morse" => {
                let lambda = f.number("lambda").map_err(at)?;
                let r_max = f.number("r_max").map_err(at)?;
                let p_max = f.number("p_max").map_err(at)?;
                f.finish().map_err(at)?;
                build_tm_hamiltonian(lambda, r_max, p_max)?
            }
            "sturmian" => {
                let phi: RotationNumber = f.need("phi").map_err(at)?.parse().map_err(at)?;
                let alpha = f.number("alpha").map_err(at)?;
                let k_max = f.number("k_max").map_err(at)?;
                f.finish().map_err(at)?;
                build_sturmian_hamiltonian(&phi, alpha, k_max)?
            }
            "finite-range" => {
                let alphabet = match f.take("alphabet") {
                    Some(a) => Alphabet::new(a)?,
                    None => Alphabet::binary(),
                };
                f.finish().map_err(at)?;
                let mut parsed = Vec::new();
                for (k, (ln, tf)) in terms.drain(..).enumerate() {
                    parsed.push(parse_term(&alphabet, tf, k + 1).map_err(|e| e.at_line(ln))?);
                }
                build_finite_range(alphabet, parsed)?
            }
            other => return Err(Error::parse_at(line_no, format!("unknown family {other}"))),
        };
        if let Some((ln, _)) = terms.first() {
            return Err(Error::parse_at(*ln, "term lines need family finite-range"));
        }
        for (ln, mut cf) in chems {
            let at = |e: Error| e.at_line(ln);
            let patch = Patch::parse(spec.alphabet(), cf.need("patch").map_err(at)?).map_err(at)?;
            let epsilon = cf.number("epsilon").map_err(at)?;
            cf.finish().map_err(at)?;
            spec = add_chemical_potential(&spec, &patch, epsilon)?;
        }
        Ok(spec)
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            Family::ThueMorse {
                lambda,
                r_max,
                p_max,
            } => {
                writeln!(
                    f,
                    "family thue-morse lambda={lambda} r_max={r_max} p_max={p_max}"
                )?;
            }
            Family::Sturmian {
                phi, alpha, k_max, ..
            } => {
                writeln!(f, "family sturmian phi={phi} alpha={alpha} k_max={k_max}")?;
            }
            Family::FiniteRange { terms } => {
                writeln!(
                    f,
                    "family finite-range alphabet={}",
                    self.alphabet().labels()
                )?;
                for t in terms {
                    write!(f, "term id={} offsets={} ", t.id, join(&t.offsets))?;
                    match &t.energy {
                        TermEnergy::FourSpin => write!(f, "four-spin")?,
                        TermEnergy::Pattern(p) => {
                            write!(f, "pattern={}", self.alphabet().format_word(p))?
                        }
                        TermEnergy::Table { values, .. } => write!(f, "table={}", join(values))?,
                    }
                    writeln!(f, " coupling={}", t.coupling)?;
                }
            }
        }
        for c in self.chemical_potentials() {
            writeln!(
                f,
                "chem patch={} epsilon={}",
                c.patch.format(self.alphabet()),
                c.epsilon
            )?;
        }
        Ok(())
    }
}
