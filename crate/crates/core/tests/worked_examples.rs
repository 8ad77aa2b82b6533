//! Small worked cases with known answers, each checked against an
//! independent computation where one is cheap to write.

use aperiodic::gibbs::{exact_gibbs, metropolis_sample, GibbsProblem};
use aperiodic::hamiltonian::{
    add_chemical_potential, build_finite_range, build_sturmian_hamiltonian, build_tm_hamiltonian,
    energy_density, exhaustive_search, non_frustration_check, relative_energy, window_energy,
    InteractionTerm, TermEnergy,
};
use aperiodic::lattice::{
    apply_excitation, count_patch, diff_count, Alphabet, ConfigurationSource, Patch, Patch2d,
    Symbol, Window,
};
use aperiodic::sbc::{balanced_check, discrepancy_profile, sbc_excitation_ratio, ScanPolicy};
use aperiodic::stability::{stability_scan, ExcitationFamily};
use aperiodic::symbolic::{
    continued_fraction, empirical_frequency, forbidden_distances, is_badly_approximable_heuristic,
    sturmian_patch_frequency, substitution_prefix, RotationNumber, SubstitutionRule, Verdict,
};
use aperiodic::wang::{
    complete_region, count_patch_2d, load_tileset, verify_tiling, Completion, TilingGrid,
};
use aperiodic::Error;

fn spins() -> Alphabet {
    Alphabet::spins()
}

fn golden_word(len: usize) -> Vec<u8> {
    // Independent of the library: floating-point rotation, safe for small n.
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    (0..len)
        .map(|n| u8::from((n as f64 * phi).fract() >= phi))
        .collect()
}

#[test]
fn thue_morse_windows() {
    let tm = ConfigurationSource::thue_morse();
    assert_eq!(tm.render(0, 16).unwrap(), "+--+-++--++-+--+");
    assert_eq!(tm.render(-4, 8).unwrap(), "+--++--+");
    assert_eq!(tm.render(-1, 2).unwrap(), "++");
    let periodic =
        ConfigurationSource::periodic(Alphabet::binary(), vec![Symbol(0), Symbol(1)]).unwrap();
    assert_eq!(periodic.render(0, 5).unwrap(), "01010");
}

#[test]
fn patch_counts() {
    let s = spins();
    let w = |t: &str| Window::new(0, s.parse_word(t).unwrap());
    assert_eq!(count_patch(&w("+--+"), &Patch::parse(&s, "--").unwrap()), 1);
    assert_eq!(
        count_patch(&w("+--+-++--++-+--+"), &Patch::parse(&s, "+").unwrap()),
        8
    );
    let b = Alphabet::binary();
    let gapped = Patch::parse(&b, "1.1").unwrap();
    assert_eq!(
        count_patch(&Window::new(0, b.parse_word("01010").unwrap()), &gapped),
        1
    );
}

#[test]
fn excitations_normalise_and_count_differences() {
    let tm = ConfigurationSource::thue_morse();
    assert!(apply_excitation(&tm, []).unwrap().is_empty());
    assert!(apply_excitation(&tm, [(0, Symbol(0))]).unwrap().is_empty());
    assert_eq!(
        apply_excitation(&tm, [(0, Symbol(1))])
            .unwrap()
            .support_size(),
        1
    );

    let s = spins();
    let alt = ConfigurationSource::periodic(s.clone(), s.parse_word("+-").unwrap()).unwrap();
    let e = apply_excitation(&alt, [(0, Symbol(1))]).unwrap();
    assert_eq!(
        diff_count(&e, &Patch::parse(&s, "--").unwrap(), 4).unwrap(),
        2
    );
    let identity = apply_excitation(&alt, []).unwrap();
    assert_eq!(
        diff_count(&identity, &Patch::parse(&s, "--").unwrap(), 4).unwrap(),
        0
    );

    // Flipping X_TM(0) on "+--+": Y = "(+)---+" around the origin.
    let e = apply_excitation(&tm, [(0, Symbol(1))]).unwrap();
    let pair = Patch::parse(&s, "++").unwrap();
    let count = |f: &dyn Fn(i64) -> Symbol| {
        (-3..=2)
            .filter(|&i| f(i) == Symbol(0) && f(i + 1) == Symbol(0))
            .count() as i64
    };
    let expected = count(&|i| e.symbol_at(i).unwrap()) - count(&|i| tm.symbol_at(i).unwrap());
    assert_eq!(diff_count(&e, &pair, 2).unwrap(), expected);
    assert_eq!(expected, -1);
}

#[test]
fn substitutions() {
    let tm = substitution_prefix(&SubstitutionRule::thue_morse(), Symbol(0), 2).unwrap();
    assert_eq!(spins().format_word(&tm.symbols), "+--+");
    let fib = substitution_prefix(&SubstitutionRule::fibonacci(), Symbol(0), 3).unwrap();
    assert_eq!(Alphabet::binary().format_word(&fib.symbols), "01001");
    let none = substitution_prefix(&SubstitutionRule::thue_morse(), Symbol(1), 0).unwrap();
    assert_eq!(none.symbols, [Symbol(1)]);
    // 1 → 0 has no fixed point starting with 1.
    let bad = substitution_prefix(&SubstitutionRule::fibonacci(), Symbol(1), 0);
    assert!(matches!(bad, Err(Error::Contract(_))));
}

#[test]
fn golden_rotation_matches_floating_point_for_small_n() {
    let st = ConfigurationSource::sturmian(RotationNumber::golden());
    let word: Vec<u8> = st
        .window(0, 2000)
        .unwrap()
        .symbols
        .iter()
        .map(|s| s.0)
        .collect();
    assert_eq!(word, golden_word(2000));
    assert_eq!(st.render(0, 7).unwrap(), "0101001");
}

#[test]
fn continued_fractions() {
    let g = continued_fraction(&RotationNumber::golden(), 6).unwrap();
    assert_eq!(
        (g.integer_part, g.quotients.as_slice()),
        (0, &[1, 1, 1, 1, 1, 1][..])
    );
    let s = continued_fraction(&RotationNumber::silver(), 4).unwrap();
    assert_eq!(s.quotients, [2, 2, 2, 2]);
    let half: RotationNumber = "dec:0.5".parse().unwrap();
    assert!(matches!(
        continued_fraction(&half, 5),
        Err(Error::Rationality(_))
    ));

    assert_eq!(
        is_badly_approximable_heuristic(&RotationNumber::golden(), 20, 5).unwrap(),
        Verdict::YesUpToDepth
    );
    assert_eq!(
        is_badly_approximable_heuristic(&RotationNumber::golden(), 20, 0).unwrap(),
        Verdict::No
    );
    let e_minus_two: RotationNumber = "dec:0.71828182845904523536:20".parse().unwrap();
    let cf = continued_fraction(&e_minus_two, 8).unwrap();
    assert_eq!(cf.quotients, [1, 2, 1, 1, 4, 1, 1, 6]);
    assert_eq!(
        is_badly_approximable_heuristic(&e_minus_two, 12, 5).unwrap(),
        Verdict::No
    );
}

#[test]
fn forbidden_distances_agree_with_a_scan() {
    let f = forbidden_distances(&RotationNumber::golden(), 10).unwrap();
    assert_eq!((f.distances.as_slice(), f.m), (&[1, 4, 9][..], 3));
    assert!(f.is_forbidden(1) && !f.is_forbidden(2));

    let w = golden_word(100_000);
    for d in 1..=10 {
        let occurs = (0..w.len() - d).any(|i| w[i] == 1 && w[i + d] == 1);
        assert_eq!(occurs, !f.is_forbidden(d as u64), "distance {d}");
    }
    let longest_zero_run = w.split(|&s| s == 1).skip(1).map(<[u8]>::len).max().unwrap();
    assert_eq!(longest_zero_run as u64 + 1, f.m);
}

#[test]
fn frequencies() {
    let g = RotationNumber::golden();
    let b = Alphabet::binary();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    assert!(
        (sturmian_patch_frequency(&g, &Patch::parse(&b, "0").unwrap()).unwrap() - phi).abs()
            < 1e-15
    );
    assert_eq!(
        sturmian_patch_frequency(&g, &Patch::parse(&b, "11").unwrap()).unwrap(),
        0.0
    );
    assert!(Patch::new([]).is_err());

    let tm = ConfigurationSource::thue_morse();
    let plus = Patch::parse(&spins(), "+").unwrap();
    for k in 1..=16 {
        assert_eq!(empirical_frequency(&tm, &plus, 1 << k).unwrap(), 0.5);
    }
    let alt = ConfigurationSource::periodic(b.clone(), vec![Symbol(0), Symbol(1)]).unwrap();
    assert_eq!(
        empirical_frequency(&alt, &Patch::parse(&b, "0").unwrap(), 1000).unwrap(),
        0.5
    );
    let st = ConfigurationSource::sturmian(g);
    let f = empirical_frequency(&st, &Patch::parse(&b, "0").unwrap(), 1_000_000).unwrap();
    assert!((f - phi).abs() < 1e-3);
}

#[test]
fn four_spin_terms_and_the_all_plus_density() {
    let spec = build_tm_hamiltonian(0.25, 0, 0).unwrap();
    let t = &spec.terms()[0];
    let value = |word: &str| {
        let w = spins().parse_word(word).unwrap();
        t.value(|k| w[k])
    };
    assert_eq!(value("+-++"), 0.0);
    assert_eq!(value("++++"), 16.0);

    let deep = build_tm_hamiltonian(0.25, 30, 30).unwrap();
    let plus = ConfigurationSource::constant(spins(), Symbol(0)).unwrap();
    let closed = 16.0 / (0.75f64 * 0.75);
    assert!((energy_density(&deep, &plus, 0, 1).unwrap().total - closed).abs() < 1e-9);
}

#[test]
fn sturmian_terms() {
    let g = RotationNumber::golden();
    let spec = build_sturmian_hamiltonian(&g, 4.0, 10).unwrap();
    let couplings: Vec<(String, f64)> = spec
        .terms()
        .iter()
        .map(|t| (t.id.clone(), t.coupling))
        .collect();
    assert_eq!(couplings.len(), 4);
    for (d, c) in [(1.0f64, 1.0), (4.0, 1.0 / 256.0), (9.0, 1.0 / 6561.0)] {
        let id = format!("pair(d={d})");
        let got = couplings.iter().find(|(i, _)| *i == id).unwrap().1;
        assert!((got - c).abs() < 1e-15, "{id}");
    }
    assert!(couplings.iter().any(|(i, _)| i == "zero-run(m=3)"));

    let st = ConfigurationSource::sturmian(g);
    assert_eq!(
        window_energy(&spec, &st.window(0, 1000).unwrap()).total,
        0.0
    );
    let w = Window::new(0, Alphabet::binary().parse_word("0110").unwrap());
    assert_eq!(window_energy(&spec, &w).per_term["pair(d=1)"], 1.0);
}

#[test]
fn chemical_potentials() {
    let s = spins();
    let spec = build_tm_hamiltonian(0.25, 4, 4).unwrap();
    let tm = ConfigurationSource::thue_morse();
    let zero = add_chemical_potential(&spec, &Patch::parse(&s, "++").unwrap(), 0.0).unwrap();
    let e = apply_excitation(&tm, [(5, Symbol(0))]).unwrap();
    assert_eq!(
        relative_energy(&zero, &e).unwrap().total,
        relative_energy(&spec, &e).unwrap().total
    );

    let g = RotationNumber::golden();
    let st_spec = build_sturmian_hamiltonian(&g, 4.0, 10).unwrap();
    let bonus = add_chemical_potential(
        &st_spec,
        &Patch::parse(&Alphabet::binary(), "1").unwrap(),
        0.1,
    )
    .unwrap();
    let st = ConfigurationSource::sturmian(g);
    // Removing a particle: site 1 holds 1.
    let e = apply_excitation(&st, [(1, Symbol(0))]).unwrap();
    let without = relative_energy(&st_spec, &e).unwrap().total;
    assert!((relative_energy(&bonus, &e).unwrap().total - (without + 0.1)).abs() < 1e-12);

    let both = add_chemical_potential(&spec, &Patch::parse(&s, "++").unwrap(), 1.0).unwrap();
    let both = add_chemical_potential(&both, &Patch::parse(&s, "--").unwrap(), 1.0).unwrap();
    assert_eq!(both.chemical_potentials().len(), 2);
}

#[test]
fn relative_energy_of_a_single_tm_flip_matches_resummation() {
    let spec = build_tm_hamiltonian(0.25, 8, 8).unwrap();
    let tm = ConfigurationSource::thue_morse();
    let e = apply_excitation(&tm, [(0, Symbol(1))]).unwrap();
    let got = relative_energy(&spec, &e).unwrap();

    let x = |i: i64| tm.symbol_at(i).unwrap();
    let y = |i: i64| if i == 0 { Symbol(1) } else { x(i) };
    let mut expected = 0.0;
    for t in spec.terms() {
        let reach = *t.offsets.iter().max().unwrap();
        for start in -reach..=0 {
            if t.offsets.iter().any(|&o| start + o == 0) {
                expected +=
                    t.value(|k| y(start + t.offsets[k])) - t.value(|k| x(start + t.offsets[k]));
            }
        }
    }
    assert!((got.total - expected).abs() < 1e-12 * expected.abs().max(1.0));
    assert!(relative_energy(&spec, &apply_excitation(&tm, []).unwrap())
        .unwrap()
        .per_term
        .is_empty());
}

#[test]
fn one_inserted_pair_costs_the_nearest_coupling() {
    // Golden word 0101001...: site 2 sits between 1s at sites 1 and 3, so
    // setting it creates two pairs. Site 0 has a 1 only on its right.
    let g = RotationNumber::golden();
    let spec = build_sturmian_hamiltonian(&g, 4.0, 10).unwrap();
    let st = ConfigurationSource::sturmian(g);
    let e = apply_excitation(&st, [(0, Symbol(1))]).unwrap();
    let r = relative_energy(&spec, &e).unwrap();
    assert_eq!(r.per_term["pair(d=1)"], 1.0);
    let ratio =
        sbc_excitation_ratio(&spec, &e, &Patch::parse(&Alphabet::binary(), "1").unwrap()).unwrap();
    assert_eq!(ratio.particles, 1);
    assert!(ratio.broken_bonds >= 1);
    assert!(sbc_excitation_ratio(
        &spec,
        &apply_excitation(&st, []).unwrap(),
        &Patch::single(Symbol(1))
    )
    .is_err());
}

#[test]
fn ground_state_windows() {
    let tm_spec = build_tm_hamiltonian(0.25, 8, 8).unwrap();
    let tm = ConfigurationSource::thue_morse();
    let out = exhaustive_search(&tm_spec, &tm, 0, 12, None, 1 << 24).unwrap();
    assert_eq!((out.minimum, out.witness.is_empty()), (0.0, true));
    assert!(non_frustration_check(&tm_spec, &tm, 0, 4096).unwrap());
    let plus = ConfigurationSource::constant(spins(), Symbol(0)).unwrap();
    assert!(!non_frustration_check(&tm_spec, &plus, 0, 16).unwrap());

    let g = RotationNumber::golden();
    let st_spec = build_sturmian_hamiltonian(&g, 4.0, 64).unwrap();
    let st = ConfigurationSource::sturmian(g);
    let out = exhaustive_search(&st_spec, &st, 0, 12, None, 1 << 24).unwrap();
    assert_eq!((out.minimum, out.witness.is_empty()), (0.0, true));
    assert!(non_frustration_check(&st_spec, &st, 0, 10_000).unwrap());

    // m = 3 zeros in a row break the zero-run term.
    let zeros = Window::new(0, vec![Symbol(0); 3]);
    assert!(window_energy(&st_spec, &zeros).total >= 1.0);
}

#[test]
fn discrepancy_examples() {
    let g = RotationNumber::golden();
    let b = Alphabet::binary();
    let one = Patch::parse(&b, "1").unwrap();
    let omega = 1.0 - (5f64.sqrt() - 1.0) / 2.0;
    let st = ConfigurationSource::sturmian(g);
    let r = discrepancy_profile(
        &st,
        &one,
        omega,
        &[10, 100, 1000, 10_000],
        100_000,
        ScanPolicy::Exhaustive,
    )
    .unwrap();
    assert!(r.rows.iter().all(|row| row.discrepancy <= 1.0));

    let tm = ConfigurationSource::thue_morse();
    let plus = Patch::parse(&spins(), "+").unwrap();
    let even: Vec<usize> = (1..=64).map(|k| 2 * k).collect();
    let r = discrepancy_profile(&tm, &plus, 0.5, &even, 20_000, ScanPolicy::Exhaustive).unwrap();
    assert!(r.rows.iter().all(|row| row.discrepancy <= 1.0));

    assert_eq!(balanced_check(&st, Symbol(1), 1000).unwrap(), 1);
    let alt = ConfigurationSource::periodic(b, vec![Symbol(0), Symbol(1)]).unwrap();
    assert_eq!(balanced_check(&alt, Symbol(1), 50).unwrap(), 1);
    assert!(balanced_check(&tm, Symbol(0), 1000).unwrap() <= 2);
}

#[test]
fn stability_curves() {
    let s = spins();
    let pairs = [
        Patch::parse(&s, "++").unwrap(),
        Patch::parse(&s, "--").unwrap(),
    ];
    let spec = build_tm_hamiltonian(0.25, 6, 6).unwrap();
    let tm = ConfigurationSource::thue_morse();
    let family = ExcitationFamily::HierarchicalBlockFlip {
        scales: (2..=8).collect(),
        blocks_per_scale: 2,
    };
    let curve = stability_scan(&spec, &pairs, &tm, &family).unwrap();
    let eps: Vec<f64> = curve.rows.iter().filter_map(|r| r.epsilon_star).collect();
    assert!(eps.windows(2).all(|w| w[1] <= w[0]), "{eps:?}");

    let empty = ExcitationFamily::Custom(vec![apply_excitation(&tm, []).unwrap()]);
    assert!(stability_scan(&spec, &pairs, &tm, &empty).is_err());
}

#[test]
fn gibbs_small_systems() {
    let b = Alphabet::binary();
    let free = build_finite_range(b.clone(), vec![]).unwrap();
    let base = ConfigurationSource::constant(b.clone(), Symbol(0)).unwrap();
    let p = GibbsProblem::new(free.clone(), 0, 1, base.clone(), 3.0).unwrap();
    assert_eq!(exact_gibbs(&p, &[]).unwrap().marginals, [[0.5, 0.5]]);
    let chain = metropolis_sample(&p, 20_000, 100, 1, &[Patch::single(Symbol(1))]).unwrap();
    let o = &chain.observables[0];
    assert!((o.mean - 0.5).abs() <= 3.0 * o.se.max(1e-3));
    assert_eq!(chain.energy.mean, 0.0);

    // Field h·σ with σ = ±1: energies +h for symbol 0 and −h for symbol 1.
    let h = 0.7;
    let field = InteractionTerm::new(
        "field",
        vec![0],
        TermEnergy::Table {
            radix: 2,
            values: vec![h, -h],
        },
        1.0,
    )
    .unwrap();
    let spec = build_finite_range(b, vec![field]).unwrap();
    for beta in [0.5, 2.0, 20.0] {
        let p = GibbsProblem::new(spec.clone(), 0, 1, base.clone(), beta).unwrap();
        let m = &exact_gibbs(&p, &[]).unwrap().marginals[0];
        let ratio = (-2.0 * beta * h).exp();
        assert!((m[0] / m[1] - ratio).abs() < 1e-12 * ratio.max(1.0));
    }
}

#[test]
fn wang_examples() {
    assert_eq!(load_tileset("T 1 0 0 0 0\n").unwrap().tiles().len(), 1);
    let dup = load_tileset("T 1 0 0 0 0\nT 1 1 1 1 1\n").unwrap_err();
    assert!(matches!(dup, Error::Parse { line: Some(2), .. }), "{dup:?}");

    let single = load_tileset("T 0 0 0 0 0\nT 1 5 0 0 0\n").unwrap();
    let mut grid = TilingGrid::from_fn(10, 10, 0, 0, |_, _| 0).unwrap();
    assert_eq!(verify_tiling(&single, &grid).unwrap().energy, 0);
    grid.set(4, 4, Some(1)).unwrap();
    assert_eq!(verify_tiling(&single, &grid).unwrap().energy, 1);

    let empty = TilingGrid::new(5, 5, 0, 0).unwrap();
    match complete_region(&single, &empty, 1_000_000).unwrap() {
        Completion::Completed(g) => assert_eq!(verify_tiling(&single, &g).unwrap().energy, 0),
        Completion::Unsatisfiable => panic!("a uniform tile always fills the region"),
    }

    let checker = load_tileset("T 0 3 1 4 2\nT 1 4 2 3 1\n").unwrap();
    let mut centre = TilingGrid::new(3, 3, 0, 0).unwrap();
    centre.set(1, 1, Some(0)).unwrap();
    let Completion::Completed(g) = complete_region(&checker, &centre, 1_000_000).unwrap() else {
        panic!("checkerboard completion exists");
    };
    for y in 0..3 {
        for x in 0..3 {
            assert_eq!(g.get(x, y), Some(Some(((x + y) % 2) as u32)));
        }
    }

    let uniform = TilingGrid::from_fn(4, 4, 0, 0, |_, _| 0).unwrap();
    assert_eq!(count_patch_2d(&uniform, &Patch2d::single(0)), 16);
    let board = TilingGrid::from_fn(4, 4, 0, 0, |x, y| ((x + y) % 2) as u32).unwrap();
    assert_eq!(count_patch_2d(&board, &Patch2d::single(0)), 8);
    assert_eq!(
        count_patch_2d(&board, &Patch2d::parse("0,0:0; 4,0:0").unwrap()),
        0
    );
}
