//! Deterministic instance generators for tests and benchmarks.
//!
//! Every generator is a pure function of the supplied RNG state; seed the
//! RNG to reproduce an instance. All results are prime (an antichain) and
//! use every variable of their universe.

use crate::cnf::MonotoneCnf;
use crate::varset::VarSet;
use rand::Rng;

/// Minimize, then force every variable to occur by adding singleton clauses
/// for unused variables (a singleton subsumes every other clause containing
/// its variable, so the result stays prime; repeat until stable).
fn patch_to_prime_cover(n: usize, mut sets: Vec<VarSet>) -> MonotoneCnf {
    loop {
        sets = crate::cnf::minimize_sets(&sets);
        let mut used = VarSet::empty(n);
        for s in &sets {
            used.union_with(s);
        }
        if used.len() == n {
            let f = MonotoneCnf::from_sets_minimized(n, sets).expect("sets are nonempty");
            debug_assert!(f.is_prime() && f.all_variables_used());
            return f;
        }
        for v in 1..=n {
            if !used.contains(v) {
                sets.push(VarSet::from_vars(n, &[v]));
            }
        }
    }
}

/// Random prime CNF over exactly `1..=n`: `m` random clauses (each variable
/// joining with probability about 1/3), minimized and patched so that every
/// variable occurs.
pub fn random_prime_cnf<R: Rng>(rng: &mut R, n: usize, m: usize) -> MonotoneCnf {
    assert!(n >= 1);
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let mut s = VarSet::empty(n);
        for v in 1..=n {
            if rng.gen_bool(0.35) {
                s.insert(v);
            }
        }
        if s.is_empty() {
            s.insert(rng.gen_range(1..=n));
        }
        sets.push(s);
    }
    patch_to_prime_cover(n, sets)
}

/// Random prime CNF whose clauses all have at most `k` variables (`m`
/// clauses of size exactly `k` before minimization and patching).
pub fn random_kcnf<R: Rng>(rng: &mut R, n: usize, m: usize, k: usize) -> MonotoneCnf {
    assert!(n >= 1 && k >= 1 && k <= n);
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let mut s = VarSet::empty(n);
        while s.len() < k {
            s.insert(rng.gen_range(1..=n));
        }
        sets.push(s);
    }
    patch_to_prime_cover(n, sets)
}

/// Random prime CNF in which every variable occurs at most `k` times:
/// each variable's occurrence budget is spent on clauses of 2–3 variables
/// cut from a shuffled multiset.
pub fn read_k_random<R: Rng>(rng: &mut R, n: usize, k: usize) -> MonotoneCnf {
    assert!(n >= 1 && k >= 1);
    let mut pool: Vec<usize> = Vec::with_capacity(n * k);
    for v in 1..=n {
        for _ in 0..k {
            pool.push(v);
        }
    }
    for i in (1..pool.len()).rev() {
        pool.swap(i, rng.gen_range(0..=i));
    }
    let mut sets = Vec::new();
    let mut at = 0;
    while at < pool.len() {
        let want = rng.gen_range(2..=3.min(pool.len() - at).max(2));
        let mut s = VarSet::empty(n);
        for &v in pool[at..(at + want).min(pool.len())].iter() {
            s.insert(v);
        }
        at += want;
        sets.push(s);
    }
    let f = patch_to_prime_cover(n, sets);
    debug_assert!(crate::structure::read_number(&f) <= k);
    f
}

/// Random prime CNF that is `k`-degenerate by construction: under the
/// identity ordering, at most `k` clauses have their maximum variable at
/// any one position.
pub fn k_degenerate_random<R: Rng>(rng: &mut R, n: usize, k: usize) -> MonotoneCnf {
    assert!(n >= 1 && k >= 1);
    let mut sets = Vec::new();
    for i in 2..=n {
        let group = rng.gen_range(0..=k);
        for _ in 0..group {
            let mut s = VarSet::empty(n);
            s.insert(i);
            // a few earlier variables
            let picks = rng.gen_range(1..=3.min(i - 1));
            for _ in 0..picks {
                s.insert(rng.gen_range(1..i));
            }
            sets.push(s);
        }
    }
    patch_to_prime_cover(n, sets)
}

/// Random prime alpha-acyclic CNF: clauses are grown along a tree, each new
/// clause overlapping the hypergraph only inside a single existing clause
/// (the running-intersection property). Every clause inherits a *proper*
/// subset of its base and introduces at least one fresh variable, so the
/// family is an antichain as built — no minimization that could delete a
/// tree node and splice its children into a cycle. `m` is a target clause
/// count (capped by `n`); generation runs until the universe is covered.
pub fn alpha_acyclic_random<R: Rng>(rng: &mut R, n: usize, m: usize) -> MonotoneCnf {
    assert!(n >= 1);
    let m = m.clamp(1, n);
    let mut sets: Vec<VarSet> = Vec::new();
    let mut next_fresh = 1usize;
    while next_fresh <= n {
        let mut s = VarSet::empty(n);
        if !sets.is_empty() {
            let base = sets[rng.gen_range(0..sets.len())].clone();
            let keep_at_most = base.len() - 1;
            let mut kept = 0;
            for v in base.iter() {
                if kept < keep_at_most && rng.gen_bool(0.5) {
                    s.insert(v);
                    kept += 1;
                }
            }
        }
        // reserve one fresh variable for each clause still owed
        let budget = n + 1 - next_fresh;
        let need = m.saturating_sub(sets.len());
        let cap = if need > 1 { (budget - (need - 1)).min(3) } else { budget.min(3) };
        for _ in 0..rng.gen_range(1..=cap) {
            s.insert(next_fresh);
            next_fresh += 1;
        }
        sets.push(s);
    }
    let f = MonotoneCnf::from_sets_minimized(n, sets).expect("every clause is nonempty");
    debug_assert!(f.is_prime() && f.all_variables_used());
    f
}

/// The star `(x1 | x2)(x1 | x3)...(x1 | xn)`: variable 1 occurs `n - 1`
/// times, yet the incidence graph is a tree.
pub fn star_cnf(n: usize) -> MonotoneCnf {
    assert!(n >= 2);
    let lists: Vec<Vec<usize>> = (2..=n).map(|i| vec![1, i]).collect();
    let refs: Vec<&[usize]> = lists.iter().map(|l| l.as_slice()).collect();
    MonotoneCnf::from_lists(n, &refs).unwrap()
}

/// A single clause over the whole universe.
pub fn full_clause(n: usize) -> MonotoneCnf {
    assert!(n >= 1);
    let vars: Vec<usize> = (1..=n).collect();
    MonotoneCnf::from_lists(n, &[&vars]).unwrap()
}

/// The path `(x1 | x2)(x2 | x3)...(x_{n-1} | xn)`: a read-2 2-CNF whose
/// minimal transversals are the minimal vertex covers of a path.
pub fn path_two_cnf(n: usize) -> MonotoneCnf {
    assert!(n >= 2);
    let lists: Vec<Vec<usize>> = (1..n).map(|i| vec![i, i + 1]).collect();
    let refs: Vec<&[usize]> = lists.iter().map(|l| l.as_slice()).collect();
    MonotoneCnf::from_lists(n, &refs).unwrap()
}
