use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use aperiodic::fmt::sig12;
use aperiodic::gibbs::{
    anneal_profile, exact_gibbs, metropolis_sample, AnnealMethod, GibbsEstimate, GibbsProblem,
};
use aperiodic::hamiltonian::{
    bond_changes, energy_density, exhaustive_search, is_local_ground_state, relative_energy,
    Family, HamiltonianSpec,
};
use aperiodic::lattice::{
    apply_excitation, Alphabet, ConfigurationSource, Excitation, Patch, Patch2d, SourceKind, Symbol,
};
use aperiodic::sbc::{balanced_check, discrepancy_profile, tiling_discrepancy, ScanPolicy};
use aperiodic::stability::{stability_scan, ExcitationFamily};
use aperiodic::symbolic::{
    continued_fraction, empirical_frequency, forbidden_distances, is_badly_approximable_heuristic,
    sturmian_patch_frequency_exact, RotationNumber,
};
use aperiodic::wang::{
    complete_region, load_tileset, tiling_energy, verify_tiling, Completion, TilingGrid,
};

use crate::args::{Command, FamilyKind, GibbsArgs, GibbsMethod, SourceArgs, System};
use crate::output::Report;
use crate::CliError;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library results serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<HamiltonianSpec, CliError> {
    Ok(read(path)?.parse()?)
}

fn parse_phi(text: &str) -> Result<RotationNumber, CliError> {
    Ok(text.parse()?)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// The configuration named by the flags, or the spec's own ground state.
fn source(
    args: &SourceArgs,
    spec: Option<&HamiltonianSpec>,
) -> Result<ConfigurationSource, CliError> {
    let system = match (args.system, spec.map(HamiltonianSpec::family)) {
        (Some(s), _) => s,
        (None, Some(Family::ThueMorse { .. })) => System::ThueMorse,
        (None, Some(Family::Sturmian { .. })) => System::Sturmian,
        (None, _) => return Err(usage("--system is required")),
    };
    match system {
        System::ThueMorse => Ok(ConfigurationSource::thue_morse()),
        System::Sturmian => {
            let phi = match (&args.phi, spec.map(HamiltonianSpec::family)) {
                (Some(text), _) => parse_phi(text)?,
                (None, Some(Family::Sturmian { phi, .. })) => phi.clone(),
                _ => return Err(usage("--phi is required for a Sturmian system")),
            };
            Ok(ConfigurationSource::sturmian(phi))
        }
        System::Periodic => {
            let word = args
                .word
                .as_deref()
                .ok_or_else(|| usage("--word is required for a periodic system"))?;
            let alphabet = match (&args.alphabet, spec) {
                (Some(labels), _) => Alphabet::new(labels)?,
                (None, Some(s)) => s.alphabet().clone(),
                (None, None) => Alphabet::binary(),
            };
            let symbols = alphabet.parse_word(word)?;
            Ok(ConfigurationSource::periodic(alphabet, symbols)?)
        }
    }
}

fn int_list(text: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || usage(format!("bad list entry {part} (expected n or a..b)"));
        match part.split_once("..") {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().parse().map_err(|_| bad())?;
                if b < a || b - a > 1 << 24 {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    int_list(text)?
        .into_iter()
        .map(|v| usize::try_from(v).map_err(|_| usage(format!("{v} must be non-negative"))))
        .collect()
}

fn f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| usage(format!("bad number {v}")))
        })
        .collect()
}

fn patches(alphabet: &Alphabet, text: &str) -> Result<Vec<Patch>, CliError> {
    text.split(',')
        .map(|p| Patch::parse(alphabet, p.trim()).map_err(CliError::from))
        .collect()
}

fn witness_json(e: &Excitation) -> Value {
    let a = e.base().alphabet();
    Value::Array(
        e.overrides()
            .iter()
            .map(|(&site, &s)| json!({ "site": site, "symbol": a.label(s).to_string() }))
            .collect(),
    )
}

fn witness_text(e: &Excitation) -> String {
    let a = e.base().alphabet();
    e.overrides()
        .iter()
        .map(|(site, &s)| format!("{site}:{}", a.label(s)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Generate {
            source: s,
            start,
            len,
        } => generate(&s, start, len),
        Command::Frequency {
            source: s,
            patch,
            len,
        } => frequency(&s, &patch, len),
        Command::Forbidden { phi, k_max } => {
            let f = forbidden_distances(&parse_phi(&phi)?, k_max)?;
            let list = f
                .distances
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";");
            Ok(Report::new(
                format!("m,k_max,distances\n{},{},{list}\n", f.m, f.k_max),
                to_json(&f),
            ))
        }
        Command::Cf { phi, depth, bound } => cf(&phi, depth, bound),
        Command::Energy {
            spec,
            source: s,
            start,
            len,
        } => {
            let spec = load_spec(&spec)?;
            let src = source(&s, Some(&spec))?;
            let e = energy_density(&spec, &src, start, len)?;
            Ok(Report::new(e.to_csv(), to_json(&e)))
        }
        Command::RelativeEnergy {
            spec,
            source: s,
            flip,
            block,
            set,
        } => relative(&spec, &s, flip.as_deref(), block.as_deref(), set.as_deref()),
        Command::GroundCheck {
            spec,
            source: s,
            search,
        } => {
            let spec = load_spec(&spec)?;
            let src = source(&s, Some(&spec))?;
            let c = is_local_ground_state(
                &spec,
                &src,
                search.start,
                search.width,
                search.max_flips,
                search.budget,
            )?;
            let verdict = to_json(&c.verdict);
            let o = &c.outcome;
            let csv = format!(
                "verdict,minimum,tail_bound,enumerated,witness\n{},{},{},{},{}\n",
                verdict.as_str().unwrap_or_default(),
                sig12(o.minimum),
                sig12(c.tail_bound),
                o.enumerated,
                witness_text(&o.witness)
            );
            let json = json!({
                "verdict": verdict,
                "minimum": o.minimum,
                "tail_bound": c.tail_bound,
                "enumerated": o.enumerated,
                "window_start": o.window_start,
                "width": o.width,
                "max_flips": o.max_flips,
                "witness": witness_json(&o.witness),
                "breakdown": to_json(&o.breakdown),
            });
            Ok(Report::new(csv, json))
        }
        Command::Search {
            spec,
            source: s,
            search,
        } => {
            let spec = load_spec(&spec)?;
            let src = source(&s, Some(&spec))?;
            let o = exhaustive_search(
                &spec,
                &src,
                search.start,
                search.width,
                search.max_flips,
                search.budget,
            )?;
            let csv = format!(
                "minimum,enumerated,support,witness\n{},{},{},{}\n",
                sig12(o.minimum),
                o.enumerated,
                o.witness.support_size(),
                witness_text(&o.witness)
            );
            let json = json!({
                "minimum": o.minimum,
                "enumerated": o.enumerated,
                "window_start": o.window_start,
                "width": o.width,
                "max_flips": o.max_flips,
                "witness": witness_json(&o.witness),
                "breakdown": to_json(&o.breakdown),
            });
            Ok(Report::new(csv, json))
        }
        Command::Discrepancy {
            source: s,
            patch,
            lengths,
            prefix,
            omega,
            stride,
        } => {
            let src = source(&s, None)?;
            let patch = Patch::parse(src.alphabet(), &patch)?;
            let lengths = usize_list(&lengths)?;
            let omega = match (omega, src.kind()) {
                (Some(w), _) => w,
                (None, SourceKind::Sturmian(phi)) => {
                    sturmian_patch_frequency_exact(phi, &patch)?.to_f64()
                }
                (None, _) => {
                    let scale = 64 * lengths.iter().copied().max().unwrap_or(1);
                    empirical_frequency(&src, &patch, scale)?
                }
            };
            let policy = match stride {
                Some(s) => ScanPolicy::Sampled { stride: s },
                None => ScanPolicy::Exhaustive,
            };
            let r = discrepancy_profile(&src, &patch, omega, &lengths, prefix, policy)?;
            Ok(Report::new(r.to_csv(), to_json(&r)))
        }
        Command::Balance {
            source: s,
            symbol,
            l_max,
        } => {
            let src = source(&s, None)?;
            let mut chars = symbol.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(usage("--symbol takes a single label"));
            };
            let sym = src.alphabet().symbol(c)?;
            let d = balanced_check(&src, sym, l_max)?;
            Ok(Report::new(
                format!("l_max,max_deviation\n{l_max},{d}\n"),
                json!({ "symbol": symbol, "l_max": l_max, "max_deviation": d }),
            ))
        }
        Command::StabilityScan {
            spec,
            source: s,
            favored,
            family,
            starts,
            widths,
            scales,
            blocks_per_scale,
        } => {
            let spec = load_spec(&spec)?;
            let src = source(&s, Some(&spec))?;
            let favored = patches(spec.alphabet(), &favored)?;
            let family = match family {
                FamilyKind::Single => ExcitationFamily::SingleFlip {
                    sites: int_list(&starts)?,
                },
                FamilyKind::Block => ExcitationFamily::ContiguousBlockFlip {
                    widths: usize_list(&widths)?,
                    starts: int_list(&starts)?,
                },
                FamilyKind::Dyadic => ExcitationFamily::HierarchicalBlockFlip {
                    scales: usize_list(&scales)?.into_iter().map(|k| k as u32).collect(),
                    blocks_per_scale,
                },
            };
            let curve = stability_scan(&spec, &favored, &src, &family)?;
            Ok(Report::new(curve.to_csv(), to_json(&curve)))
        }
        Command::Gibbs { gibbs, beta } => {
            let (problem, obs) = gibbs_problem(&gibbs, beta)?;
            let est = match gibbs.method {
                GibbsMethod::Exact => exact_gibbs(&problem, &obs)?,
                GibbsMethod::Metropolis => {
                    metropolis_sample(&problem, gibbs.sweeps, gibbs.burn_in, gibbs.seed, &obs)?
                }
            };
            Ok(Report::new(gibbs_csv(&est), to_json(&est)))
        }
        Command::Anneal { gibbs, betas } => {
            let betas = f64_list(&betas)?;
            let first = *betas.first().ok_or_else(|| usage("--betas is empty"))?;
            let (problem, obs) = gibbs_problem(&gibbs, first)?;
            let method = match gibbs.method {
                GibbsMethod::Exact => AnnealMethod::Exact,
                GibbsMethod::Metropolis => AnnealMethod::Metropolis {
                    sweeps: gibbs.sweeps,
                    burn_in: gibbs.burn_in,
                    seed: gibbs.seed,
                },
            };
            let profile = anneal_profile(&problem, &betas, method, &obs)?;
            let mut csv = String::from("beta,energy,energy_se");
            for o in &obs {
                let label = o.format(problem_alphabet(&problem));
                csv.push_str(&format!(",{label},{label}_se"));
            }
            csv.push('\n');
            for r in &profile.rows {
                csv.push_str(&format!(
                    "{},{},{}",
                    sig12(r.beta),
                    sig12(r.energy.mean),
                    sig12(r.energy.se)
                ));
                for o in &r.observables {
                    csv.push_str(&format!(",{},{}", sig12(o.mean), sig12(o.se)));
                }
                csv.push('\n');
            }
            Ok(Report::new(csv, to_json(&profile)))
        }
        Command::TilingVerify {
            tileset,
            grid,
            chem,
        } => {
            let tiles = load_tileset(&read(&tileset)?)?;
            let grid = TilingGrid::parse(&read(&grid)?)?;
            let report = verify_tiling(&tiles, &grid)?;
            let mut chemical = Vec::new();
            for part in chem.iter().flat_map(|c| c.split(',')) {
                let bad = || {
                    usage(format!(
                        "bad chemical potential {part} (expected id:epsilon)"
                    ))
                };
                let (id, eps) = part.split_once(':').ok_or_else(bad)?;
                chemical.push((
                    id.trim().parse().map_err(|_| bad())?,
                    eps.trim().parse().map_err(|_| bad())?,
                ));
            }
            let energy = tiling_energy(&tiles, &grid, &chemical)?;
            let csv = format!("broken_bonds,energy\n{},{}\n", report.energy, sig12(energy));
            let json = json!({ "broken": to_json(&report.broken), "broken_bonds": report.energy, "energy": energy });
            Ok(Report::new(csv, json))
        }
        Command::TilingComplete {
            tileset,
            grid,
            budget,
        } => {
            let tiles = load_tileset(&read(&tileset)?)?;
            let grid = TilingGrid::parse(&read(&grid)?)?;
            let holes = grid.holes();
            Ok(match complete_region(&tiles, &grid, budget)? {
                Completion::Completed(g) => {
                    let text = g.to_string();
                    Report::new(
                        format!("verdict,holes_filled\ncompleted,{holes}\n"),
                        json!({ "verdict": "completed", "holes_filled": holes, "grid": text }),
                    )
                    .with_text(text)
                }
                Completion::Unsatisfiable => Report::new(
                    "verdict,holes_filled\nunsatisfiable,0\n".into(),
                    json!({ "verdict": "unsatisfiable", "holes_filled": 0 }),
                )
                .with_text("unsatisfiable\n".into()),
            })
        }
        Command::TilingCount { grid, patch, omega } => {
            let grid = TilingGrid::parse(&read(&grid)?)?;
            let patch = Patch2d::parse(&patch)?;
            let d = tiling_discrepancy(&grid, &patch, omega);
            let csv = format!(
                "count,expected,deviation,perimeter,ratio\n{},{},{},{},{}\n",
                d.count,
                sig12(d.expected),
                sig12(d.deviation),
                d.perimeter,
                sig12(d.ratio)
            );
            Ok(Report::new(csv, to_json(&d)))
        }
    }
}

fn generate(s: &SourceArgs, start: i64, len: usize) -> Result<Report, CliError> {
    let src = source(s, None)?;
    let window = src.window(start, len)?;
    let a = src.alphabet();
    let word = a.format_word(&window.symbols);
    let mut csv = String::from("site,symbol\n");
    for (k, &sym) in window.symbols.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", start + k as i64, a.label(sym)));
    }
    let json = json!({ "start": start, "len": len, "alphabet": a.labels(), "word": word });
    Ok(Report::new(csv, json).with_text(format!("{word}\n")))
}

fn frequency(s: &SourceArgs, patch: &str, len: usize) -> Result<Report, CliError> {
    let src = source(s, None)?;
    let p = Patch::parse(src.alphabet(), patch)?;
    let label = p.format(src.alphabet());
    let (value, method, exact) = match src.kind() {
        SourceKind::Sturmian(phi) => {
            let exact = sturmian_patch_frequency_exact(phi, &p)?;
            (exact.to_f64(), "exact", Some(exact.to_string()))
        }
        _ => (empirical_frequency(&src, &p, len)?, "empirical", None),
    };
    let csv = format!(
        "patch,frequency,method,exact\n{label},{},{method},{}\n",
        sig12(value),
        exact.clone().unwrap_or_default()
    );
    let json =
        json!({ "patch": label, "frequency": value, "method": method, "exact": exact, "len": len });
    Ok(Report::new(csv, json))
}

fn cf(phi: &str, depth: usize, bound: Option<i128>) -> Result<Report, CliError> {
    let phi = parse_phi(phi)?;
    let expansion = continued_fraction(&phi, depth)?;
    let verdict = match bound {
        Some(b) => Some(to_json(&is_badly_approximable_heuristic(&phi, depth, b)?)),
        None => None,
    };
    let mut csv = String::from("index,quotient\n");
    csv.push_str(&format!("0,{}\n", expansion.integer_part));
    for (k, q) in expansion.quotients.iter().enumerate() {
        csv.push_str(&format!("{},{q}\n", k + 1));
    }
    let mut json = to_json(&expansion);
    if let (Value::Object(map), Some(v)) = (&mut json, verdict) {
        map.insert("verdict".into(), v);
        map.insert("bound".into(), json!(bound));
    }
    Ok(Report::new(csv, json))
}

fn relative(
    spec: &Path,
    s: &SourceArgs,
    flip: Option<&str>,
    block: Option<&str>,
    set: Option<&str>,
) -> Result<Report, CliError> {
    let spec = load_spec(spec)?;
    let src = source(s, Some(&spec))?;
    let a = src.alphabet().clone();
    let excitation = match (flip, block, set) {
        (Some(sites), None, None) => {
            let mut overrides = Vec::new();
            for site in int_list(sites)? {
                overrides.push((site, a.flip(src.symbol_at(site)?)));
            }
            apply_excitation(&src, overrides)?
        }
        (None, Some(b), None) => {
            let bad = || usage(format!("bad block {b} (expected start:len)"));
            let (start, len) = b.split_once(':').ok_or_else(bad)?;
            Excitation::flip_block(
                &src,
                start.trim().parse().map_err(|_| bad())?,
                len.trim().parse().map_err(|_| bad())?,
            )?
        }
        (None, None, Some(list)) => {
            let mut overrides: Vec<(i64, Symbol)> = Vec::new();
            for part in list.split(',') {
                let bad = || usage(format!("bad override {part} (expected site:label)"));
                let (site, label) = part.rsplit_once(':').ok_or_else(bad)?;
                let mut chars = label.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(bad());
                };
                overrides.push((site.trim().parse().map_err(|_| bad())?, a.symbol(c)?));
            }
            apply_excitation(&src, overrides)?
        }
        _ => return Err(usage("give exactly one of --flip, --block or --set")),
    };
    let e = relative_energy(&spec, &excitation)?;
    let bonds = if spec.is_normalizable() {
        Some(to_json(&bond_changes(&spec, &excitation)?))
    } else {
        None
    };
    let mut json = to_json(&e);
    if let Value::Object(map) = &mut json {
        map.insert("support".into(), json!(excitation.support_size()));
        map.insert("bonds".into(), bonds.unwrap_or(Value::Null));
    }
    Ok(Report::new(e.to_csv(), json))
}

fn gibbs_problem(args: &GibbsArgs, beta: f64) -> Result<(GibbsProblem, Vec<Patch>), CliError> {
    let spec = load_spec(&args.spec)?;
    let src = source(&args.source, Some(&spec))?;
    let alphabet = spec.alphabet().clone();
    let obs = match &args.observables {
        Some(list) => patches(&alphabet, list)?,
        None => (0..alphabet.size())
            .map(|k| Patch::single(Symbol(k as u8)))
            .collect(),
    };
    Ok((
        GibbsProblem::new(spec, args.start, args.volume, src, beta)?,
        obs,
    ))
}

fn problem_alphabet(p: &GibbsProblem) -> &Alphabet {
    p.spec().alphabet()
}

fn gibbs_csv(est: &GibbsEstimate) -> String {
    let mut csv = String::from("observable,mean,se\n");
    csv.push_str(&format!(
        "energy,{},{}\n",
        sig12(est.energy.mean),
        sig12(est.energy.se)
    ));
    for o in &est.observables {
        csv.push_str(&format!("{},{},{}\n", o.patch, sig12(o.mean), sig12(o.se)));
    }
    csv
}
