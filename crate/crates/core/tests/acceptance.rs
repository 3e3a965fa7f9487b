//! Acceptance gate: one test per shipping criterion. Run with
//! `cargo test -p dualize --test acceptance -- --nocapture` to see one
//! PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use dualize::enumerate::{
    dualize as enumerate_dual, measure_delay, minimal_transversals, r_dualize, RhoStrategy,
};
use dualize::fk::{
    check_dual_a, check_dual_b, chi, replay_certificate, verify_witness, BOutcome, DualPair,
    DualityOutcome, ReplayOutcome,
};
use dualize::generate::{path_two_cnf, random_kcnf, random_prime_cnf, read_k_random};
use dualize::oracle::{all_prime_cnfs, brute_degeneracy, brute_dual_check, brute_transversals};
use dualize::structure::{
    delta_profile, gyo_reduce, heuristic_td, incidence_graph, ordering_from_gyo,
    ordering_from_td2, read_number, replay_gyo, smallest_last_ordering, GyoStep, GyoTrace,
};
use dualize::{delta_conditioned, term_key, MonotoneCnf, Reduced, Term, VarSet, VariableOrdering};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(num: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {num:02} ({name}): {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {num} failed: {detail}");
}

fn cnf(n: usize, lists: &[&[usize]]) -> MonotoneCnf {
    MonotoneCnf::from_lists(n, lists).unwrap()
}

fn clause_lists(f: &MonotoneCnf) -> Vec<Vec<usize>> {
    f.clauses().iter().map(|c| c.vars().to_vec()).collect()
}

fn term_set(ts: &[Term]) -> BTreeSet<Vec<usize>> {
    ts.iter().map(|t| t.vars().to_vec()).collect()
}

fn keys_strictly_increase(ts: &[Term]) -> bool {
    ts.windows(2).all(|w| term_key(&w[0]) < term_key(&w[1]))
}

#[test]
fn criterion_01_three_clause_worked_example() {
    let start = Instant::now();
    let f = cnf(4, &[&[2], &[1, 3], &[1, 4]]);
    let ord = VariableOrdering::identity(4);
    let terms = enumerate_dual(&f, &ord, RhoStrategy::Auto).unwrap();
    let got: Vec<Vec<usize>> = terms.iter().map(|t| t.vars().to_vec()).collect();
    let elapsed = start.elapsed();
    let ok = got == vec![vec![2, 3, 4], vec![1, 2]]
        && keys_strictly_increase(&terms)
        && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "three-clause worked example",
        ok,
        &format!("emitted {got:?} in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_restriction_and_delta_tables() {
    let phi = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
    let ord = VariableOrdering::identity(4);

    let restrictions: Vec<Vec<Vec<usize>>> =
        (0..=4).map(|i| clause_lists(&phi.restrict(&ord, i))).collect();
    let expected_restrictions: Vec<Vec<Vec<usize>>> = vec![
        vec![],
        vec![],
        vec![vec![1, 2]],
        vec![vec![1, 2], vec![1, 3]],
        vec![vec![1, 2], vec![1, 3], vec![2, 3, 4], vec![1, 4]],
    ];

    let deltas: Vec<Vec<Vec<usize>>> =
        (1..=4).map(|i| clause_lists(&phi.delta(&ord, i))).collect();
    let expected_deltas: Vec<Vec<Vec<usize>>> = vec![
        vec![],
        vec![vec![1, 2]],
        vec![vec![1, 3]],
        vec![vec![2, 3, 4], vec![1, 4]],
    ];

    let t = Term::new(VarSet::from_vars(4, &[2, 3, 4]));
    let conditioned = match delta_conditioned(&phi.delta(&ord, 4), &t, 4) {
        Reduced::Cnf(g) => clause_lists(&g),
        Reduced::ConstantZero => vec![vec![0]],
    };

    let ok = restrictions == expected_restrictions
        && deltas == expected_deltas
        && conditioned == vec![vec![1]];
    report(
        2,
        "restriction and clause-group tables",
        ok,
        &format!("restrictions {restrictions:?}, groups {deltas:?}, conditioned {conditioned:?}"),
    );
}

#[test]
fn criterion_03_gyo_trace_and_elimination_ordering() {
    let f = cnf(6, &[&[1, 2, 3], &[1, 3, 5], &[1, 5, 6], &[3, 4, 5]]);
    let steps = vec![
        GyoStep::RemoveVariable { var: 2, clause: 1 },
        GyoStep::RemoveClause { clause: 1, subsumed_by: 2 },
        GyoStep::RemoveVariable { var: 4, clause: 4 },
        GyoStep::RemoveVariable { var: 6, clause: 3 },
        GyoStep::RemoveClause { clause: 4, subsumed_by: 2 },
        GyoStep::RemoveClause { clause: 3, subsumed_by: 2 },
        GyoStep::RemoveVariable { var: 1, clause: 2 },
        GyoStep::RemoveVariable { var: 3, clause: 2 },
        GyoStep::RemoveVariable { var: 5, clause: 2 },
    ];
    let replayed = replay_gyo(&f, &steps) == Ok(true);

    let trace = GyoTrace { steps, success: true };
    let ord = ordering_from_gyo(&trace, 6).unwrap();
    let ord_ok = ord.as_slice() == [5, 3, 1, 6, 4, 2];

    let profile = delta_profile(&f, &ord);
    let groups: Vec<Vec<Vec<usize>>> =
        (1..=6).map(|i| clause_lists(&f.delta(&ord, i))).collect();
    let groups_ok = groups[0].is_empty()
        && groups[1].is_empty()
        && groups[2] == vec![vec![1, 3, 5]]
        && groups[3] == vec![vec![1, 5, 6]]
        && groups[4] == vec![vec![3, 4, 5]]
        && groups[5] == vec![vec![1, 2, 3]];

    let ok = replayed && ord_ok && profile == vec![0, 0, 1, 1, 1, 1] && groups_ok;
    report(
        3,
        "GYO trace replay and 1-degenerate ordering",
        ok,
        &format!("ordering {:?}, profile {profile:?}", ord.as_slice()),
    );
}

/// Shared corpus for criteria 4 and 5: 500 random prime CNFs, dualized
/// under the identity ordering.
fn random_dualize_suite() -> (usize, usize, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut key_violations = 0usize;
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(1..=20);
        let f = random_prime_cnf(&mut rng, n, m);
        let ord = VariableOrdering::identity(n);
        let terms = enumerate_dual(&f, &ord, RhoStrategy::Auto).unwrap();
        if !keys_strictly_increase(&terms) {
            key_violations += 1;
        }
        let brute = brute_transversals(&f).unwrap();
        if term_set(&terms) != term_set(&brute) {
            mismatches += 1;
        }
    }
    (mismatches, key_violations, start.elapsed().as_secs_f64())
}

#[test]
fn criterion_04_dual_matches_the_brute_oracle() {
    let (mismatches, _, secs) = random_dualize_suite();
    let ok = mismatches == 0 && secs < 60.0;
    report(
        4,
        "500 random instances vs. brute-force transversals",
        ok,
        &format!("{mismatches} mismatches in {secs:.1} s"),
    );
}

#[test]
fn criterion_05_emission_keys_strictly_increase() {
    let (_, key_violations, _) = random_dualize_suite();
    let ok = key_violations == 0;
    report(
        5,
        "ordered emission over the criterion-4 corpus",
        ok,
        &format!("{key_violations} runs with non-increasing keys"),
    );
}

#[test]
fn criterion_06_transversal_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=12);
        let f = random_prime_cnf(&mut rng, n, m);
        let d = minimal_transversals(&f, RhoStrategy::Auto).unwrap();
        let dcnf = MonotoneCnf::from_sets_minimized(
            n,
            d.into_iter().map(Term::into_vars).collect(),
        )
        .unwrap();
        let dd = minimal_transversals(&dcnf, RhoStrategy::Auto).unwrap();
        if term_set(&dd)
            != f.clauses()
                .iter()
                .map(|c| c.vars().to_vec())
                .collect::<BTreeSet<_>>()
        {
            mismatches += 1;
        }
    }
    let ok = mismatches == 0;
    report(
        6,
        "Tr(Tr(H)) = H on 200 instances",
        ok,
        &format!("{mismatches} mismatches"),
    );
}

#[test]
fn criterion_07_smallest_last_attains_brute_degeneracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=10);
        let f = random_prime_cnf(&mut rng, n, m);
        let k = smallest_last_ordering(&f).k;
        let opt = brute_degeneracy(&f).unwrap();
        if k != opt {
            mismatches += 1;
        }
    }
    let ok = mismatches == 0;
    report(
        7,
        "smallest-last k equals brute-force degeneracy",
        ok,
        &format!("{mismatches} mismatches over 200 instances"),
    );
}

#[test]
fn criterion_08_class_implications() {
    let mut rng = ChaCha8Rng::seed_from_u64(801);
    let mut violations = 0usize;

    // alpha-acyclic implies 1-degenerate
    for _ in 0..60 {
        let n = rng.gen_range(3..=14);
        let m = rng.gen_range(2..=10);
        let f = dualize::generate::alpha_acyclic_random(&mut rng, n, m);
        if !gyo_reduce(&f).success || smallest_last_ordering(&f).k > 1 {
            violations += 1;
        }
    }

    // read-k implies k-degenerate
    for round in 0..60 {
        let k = 2 + round % 3;
        let n = rng.gen_range(4..=12);
        let f = read_k_random(&mut rng, n, k);
        let r = read_number(&f);
        if r > k || smallest_last_ordering(&f).k > r {
            violations += 1;
        }
    }

    // a peeling ordering from a decomposition of width w keeps every
    // clause group within 2^w
    for round in 0..40 {
        let f = match round % 3 {
            0 => path_two_cnf(rng.gen_range(4..=16)),
            1 => {
                let n = rng.gen_range(3..=10);
                let m = rng.gen_range(2..=8);
                dualize::generate::alpha_acyclic_random(&mut rng, n, m)
            }
            _ => {
                let n = rng.gen_range(3..=9);
                let m = rng.gen_range(2..=8);
                random_prime_cnf(&mut rng, n, m)
            }
        };
        let td = heuristic_td(&incidence_graph(&f));
        let ord = ordering_from_td2(&td, &f).unwrap();
        let bound = 1usize << td.width().min(30);
        if delta_profile(&f, &ord).into_iter().max().unwrap_or(0) > bound {
            violations += 1;
        }
    }

    let ok = violations == 0;
    report(
        8,
        "acyclic/read-k/width class implications",
        ok,
        &format!("{violations} violations over 160 instances"),
    );
}

fn outcome_is_dual(o: &DualityOutcome) -> bool {
    matches!(o, DualityOutcome::Dual)
}

#[test]
fn criterion_09_checker_agreement() {
    let start = Instant::now();
    let mut violations = 0usize;
    let mut pairs = 0usize;

    let check_pair = |pair: &DualPair, violations: &mut usize| {
        let brute_dual = brute_dual_check(pair).unwrap().is_none();
        let (a, _) = check_dual_a(pair).unwrap();
        let (b, _) = check_dual_b(pair).unwrap();
        if outcome_is_dual(&a) != brute_dual {
            *violations += 1;
        }
        match (&a, &b) {
            (DualityOutcome::Dual, BOutcome::Dual) => {}
            (DualityOutcome::NotDual { witness: wa }, BOutcome::NotDual { witness: wb, .. }) => {
                if !verify_witness(pair, wa) || !verify_witness(pair, wb) {
                    *violations += 1;
                }
            }
            _ => *violations += 1,
        }
    };

    for n in 0..=4 {
        let all = all_prime_cnfs(n);
        for f in &all {
            for g in &all {
                let pair = DualPair::new(f.clone(), g.clone()).unwrap();
                check_pair(&pair, &mut violations);
                pairs += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(901);
    for round in 0..500 {
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=8);
        let f = random_prime_cnf(&mut rng, n, m);
        let g = match round % 3 {
            0 => {
                let d = brute_transversals(&f).unwrap();
                MonotoneCnf::from_sets_minimized(
                    n,
                    d.into_iter().map(Term::into_vars).collect(),
                )
                .unwrap()
            }
            1 => {
                let mut d = brute_transversals(&f).unwrap();
                if d.len() >= 2 {
                    let drop = rng.gen_range(0..d.len());
                    d.remove(drop);
                }
                MonotoneCnf::from_sets_minimized(
                    n,
                    d.into_iter().map(Term::into_vars).collect(),
                )
                .unwrap()
            }
            _ => {
                let m2 = rng.gen_range(1..=8);
                random_prime_cnf(&mut rng, n, m2)
            }
        };
        let pair = DualPair::new(f, g).unwrap();
        check_pair(&pair, &mut violations);
        pairs += 1;
    }

    let ok = violations == 0;
    report(
        9,
        "exhaustive and random checker agreement",
        ok,
        &format!(
            "{violations} violations over {pairs} pairs in {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_10_certificate_round_trip_and_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut violations = 0usize;
    let mut collected = 0usize;
    let mut mutations = 0usize;
    let mut mutant_rejected = 0usize;
    let mut mutant_confirmed_valid = 0usize;

    while collected < 200 {
        // the near-dual variant gets larger instances so its certificates
        // carry branch-choice bits worth mutating
        let (n, m) = if collected % 3 == 0 {
            (rng.gen_range(6..=10), rng.gen_range(4..=10))
        } else {
            (rng.gen_range(4..=9), rng.gen_range(3..=8))
        };
        let f = random_prime_cnf(&mut rng, n, m);
        let dual_terms = brute_transversals(&f).unwrap();
        let g = match collected % 3 {
            0 => {
                let mut d = dual_terms;
                if d.len() < 2 {
                    continue;
                }
                let drop = rng.gen_range(0..d.len());
                d.remove(drop);
                MonotoneCnf::from_sets_minimized(
                    n,
                    d.into_iter().map(Term::into_vars).collect(),
                )
                .unwrap()
            }
            1 => {
                if f.len() < 2 {
                    continue;
                }
                // pair the dual of f against a weakened f
                let mut sets: Vec<VarSet> =
                    f.clauses().iter().map(|c| c.vars().clone()).collect();
                let kill = rng.gen_range(0..sets.len());
                sets.remove(kill);
                let f2 = MonotoneCnf::from_sets_minimized(n, sets).unwrap();
                let g = MonotoneCnf::from_sets_minimized(
                    n,
                    dual_terms.into_iter().map(Term::into_vars).collect(),
                )
                .unwrap();
                let pair = DualPair::new(f2, g).unwrap();
                if pair.volume() > 10_000 || brute_dual_check(&pair).unwrap().is_none() {
                    continue;
                }
                examine_pair(
                    &pair,
                    &mut violations,
                    &mut mutations,
                    &mut mutant_rejected,
                    &mut mutant_confirmed_valid,
                );
                collected += 1;
                continue;
            }
            _ => {
                let m2 = rng.gen_range(2..=8);
                random_prime_cnf(&mut rng, n, m2)
            }
        };
        let pair = DualPair::new(f, g).unwrap();
        if pair.volume() > 10_000 || brute_dual_check(&pair).unwrap().is_none() {
            continue;
        }
        examine_pair(
            &pair,
            &mut violations,
            &mut mutations,
            &mut mutant_rejected,
            &mut mutant_confirmed_valid,
        );
        collected += 1;
    }

    let ok = violations == 0;
    report(
        10,
        "certificate replay, mutation soundness, size bounds",
        ok,
        &format!(
            "{violations} violations over {collected} pairs; {mutations} bit mutations \
             ({mutant_rejected} rejected/refuted, {mutant_confirmed_valid} confirmed with \
             an independently verified witness)"
        ),
    );
}

/// Check one non-dual pair for criterion 10: replay confirmation, size and
/// move-count bounds, and soundness of every single choice-bit mutation.
fn examine_pair(
    pair: &DualPair,
    violations: &mut usize,
    mutations: &mut usize,
    mutant_rejected: &mut usize,
    mutant_confirmed_valid: &mut usize,
) {
    let (outcome, stats) = check_dual_b(pair).unwrap();
    let BOutcome::NotDual { witness, certificate } = outcome else {
        *violations += 1;
        return;
    };
    if !verify_witness(pair, &witness) {
        *violations += 1;
        return;
    }
    match replay_certificate(pair, &certificate).unwrap() {
        ReplayOutcome::Confirmed { witness: w, .. } if verify_witness(pair, &w) => {}
        _ => {
            *violations += 1;
            return;
        }
    }

    let v = pair.volume() as f64;
    let lg = v.log2().max(1.0);
    if (certificate.bit_length() as f64) > 4.0 * chi(v) * lg + 16.0 {
        *violations += 1;
    }
    if stats.max_a as f64 > v || stats.max_b as f64 > lg || stats.max_c as f64 > lg * lg {
        *violations += 1;
    }

    // flip every branch-choice bit, one at a time
    let blocks = 1 + certificate.rest.len();
    for block in 0..blocks {
        let nbits = if block == 0 {
            certificate.lead.choices.len()
        } else {
            certificate.rest[block - 1].1.choices.len()
        };
        for bit in 0..nbits {
            let mut mutant = certificate.clone();
            let slot = if block == 0 {
                &mut mutant.lead.choices[bit]
            } else {
                &mut mutant.rest[block - 1].1.choices[bit]
            };
            *slot = !*slot;
            *mutations += 1;
            match replay_certificate(pair, &mutant) {
                Ok(ReplayOutcome::Invalid { .. }) | Ok(ReplayOutcome::Refuted) => {
                    *mutant_rejected += 1;
                }
                Ok(ReplayOutcome::Confirmed { witness: w, .. }) => {
                    if verify_witness(pair, &w) {
                        *mutant_confirmed_valid += 1;
                    } else {
                        *violations += 1;
                    }
                }
                Err(_) => {
                    *violations += 1;
                }
            }
        }
    }
}

#[test]
fn criterion_11_delay_growth_on_a_read_two_family() {
    let sizes = [8usize, 16, 32, 64];
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut medians: Vec<u128> = Vec::new();
    for &n in &sizes {
        let f = path_two_cnf(n);
        let ord = smallest_last_ordering(&f).ordering;
        let mut runs: Vec<u128> = (0..5)
            .map(|_| {
                let (_, rep) =
                    measure_delay(&f, &ord, RhoStrategy::Auto, Some(1000)).unwrap();
                rep.max_delay().as_nanos()
            })
            .collect();
        runs.sort_unstable();
        let median = runs[2].max(1);
        medians.push(median);
        points.push(((n as f64).log2(), (median as f64).log2()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = num / den;
    let ok = slope <= 4.5;
    report(
        11,
        "log-log max-delay slope on chain CNFs",
        ok,
        &format!("slope {slope:.2} with medians {medians:?} ns"),
    );
}

#[test]
fn criterion_12_recursion_depth_on_bounded_width_clauses() {
    let mut rng = ChaCha8Rng::seed_from_u64(1201);
    let mut violations = 0usize;
    for k in [2usize, 3] {
        for _ in 0..40 {
            let n = rng.gen_range(4..=12);
            let m = rng.gen_range(2..=12);
            let f = random_kcnf(&mut rng, n, m, k);
            assert!(f.max_clause_len() <= k);
            let run = r_dualize(&f, 8).unwrap();
            if run.max_depth > k {
                violations += 1;
            }
            if term_set(&run.terms) != term_set(&brute_transversals(&f).unwrap()) {
                violations += 1;
            }
        }
    }
    let ok = violations == 0;
    report(
        12,
        "recursive dualization depth on k-CNFs",
        ok,
        &format!("{violations} violations over 80 instances"),
    );
}
