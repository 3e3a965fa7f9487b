//! Ordered enumeration of prime implicants (minimal transversals).
//!
//! The enumerator emits the prime implicants of a prime monotone CNF in
//! increasing order of their weight under a chosen variable ordering. Each
//! emitted implicant `t` is processed position by position: the clauses
//! whose maximum position is `i`, conditioned on the prefix of `t` below
//! `i`, form a small CNF whose own minimal transversals suggest candidate
//! prefixes; every candidate that is a prime implicant of the restricted
//! CNF is extended to the weight-smallest full prime implicant and queued.

use crate::cnf::{minimize_sets, MonotoneCnf, Term, VariableOrdering};
use crate::varset::{KeyOrdered, Overlap, VarSet};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Auto strategy: expand in-place when the conditioned CNF has at most this
/// many clauses, otherwise recurse.
pub const EXPAND_CLAUSE_LIMIT: usize = 16;
/// Auto strategy: depth budget handed to recursive expansion.
pub const AUTO_RECURSION_BUDGET: usize = 8;

/// How the minimal transversals of conditioned clause groups are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoStrategy {
    /// Expand small groups by Berge multiplication, recurse on large ones.
    #[default]
    Auto,
    /// Always expand by Berge multiplication with stepwise minimization.
    Expand,
    /// Always recurse into a nested enumeration; `budget` bounds the total
    /// nesting depth (the top-level enumeration is depth 1).
    Recursive { budget: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("ordering covers {ord_n} variables but the CNF universe has {cnf_n}")]
    UniverseMismatch { ord_n: usize, cnf_n: usize },
    #[error("variable x{var} occurs in no clause; compact the universe first")]
    UnusedVariable { var: usize },
    #[error("input CNF is not prime: clause {sub} is contained in clause {sup}")]
    NotPrime { sub: usize, sup: usize },
    #[error("nested enumeration exceeded the depth budget of {limit}")]
    DepthLimit { limit: usize },
    #[error("prefix cannot be extended: clause {clause} is falsified by the fixing")]
    ExtendImpossible { clause: usize },
}

/// Counters accumulated over one enumeration (including nested ones).
#[derive(Debug, Clone, Copy, Default)]
pub struct DualizeStats {
    /// Terms emitted by the top-level enumeration.
    pub emitted: usize,
    /// Largest transversal set returned by any conditioned-group expansion.
    pub max_rho_size: usize,
    /// Deepest nesting of enumerations reached (top level = 1).
    pub max_depth: usize,
    /// High-water mark of the pending-term queue.
    pub max_queue_len: usize,
}

/// Core enumerator; works in position space, i.e. on a CNF whose variable
/// `j` is the `j`-th variable of the ordering.
struct Engine {
    n: usize,
    clauses: Vec<VarSet>,
    maxpos: Vec<usize>,
    by_maxpos: Vec<Vec<usize>>,
    queue: BTreeSet<KeyOrdered>,
    emitted: BTreeSet<KeyOrdered>,
    strategy: RhoStrategy,
    level: usize,
    stats: DualizeStats,
}

impl Engine {
    /// `clauses` must be a prime antichain over `1..=n`.
    fn new(clauses: Vec<VarSet>, n: usize, strategy: RhoStrategy, level: usize) -> Self {
        let maxpos: Vec<usize> =
            clauses.iter().map(|c| c.max_var().expect("clauses are nonempty")).collect();
        let mut by_maxpos = vec![Vec::new(); n + 1];
        for (ci, &mp) in maxpos.iter().enumerate() {
            by_maxpos[mp].push(ci);
        }
        let first = greedy_min_transversal(&clauses, n, 1);
        let mut queue = BTreeSet::new();
        queue.insert(KeyOrdered(first));
        Engine {
            n,
            clauses,
            maxpos,
            by_maxpos,
            queue,
            emitted: BTreeSet::new(),
            strategy,
            level,
            stats: DualizeStats { max_queue_len: 1, max_depth: level, ..Default::default() },
        }
    }

    fn next(&mut self) -> Result<Option<VarSet>, EnumerateError> {
        let Some(kt) = self.queue.pop_first() else {
            return Ok(None);
        };
        let t = kt.0.clone();
        self.emitted.insert(kt);
        for p in t.to_vec() {
            if self.by_maxpos[p].is_empty() {
                continue;
            }
            // condition the position-p clause group on t's prefix below p
            let prefix = t.below(p);
            let mut reduced: Vec<VarSet> = Vec::new();
            let mut constant_zero = false;
            for &ci in &self.by_maxpos[p] {
                let mut c = self.clauses[ci].clone();
                c.remove(p);
                if !c.is_disjoint_from(&prefix) {
                    continue; // satisfied by a 1 in the prefix
                }
                if c.is_empty() {
                    constant_zero = true;
                    break;
                }
                reduced.push(c);
            }
            if constant_zero || reduced.is_empty() {
                continue; // constant group contributes no candidates
            }
            let d = minimize_sets(&reduced);
            let rho = rho_sets(&d, self.n, self.strategy, self.level, &mut self.stats)?;
            self.stats.max_rho_size = self.stats.max_rho_size.max(rho.len());
            for tp in rho {
                let cand = prefix.union(&tp);
                if !self.is_prime_implicant_upto(&cand, p) {
                    continue;
                }
                let tstar = extend_min_sets(&self.clauses, self.n, &cand, p)?;
                debug_assert_eq!(tstar.cmp_key(&t), Ordering::Greater);
                let key = KeyOrdered(tstar);
                if !self.emitted.contains(&key) {
                    self.queue.insert(key); // silently keeps an existing copy
                }
            }
        }
        self.stats.emitted += 1;
        self.stats.max_queue_len = self.stats.max_queue_len.max(self.queue.len());
        Ok(Some(t))
    }

    /// Is `cand` a prime implicant of the restriction to positions `<= p`?
    /// Single pass: every restricted clause must be hit, and every member of
    /// `cand` must be the sole hit of some restricted clause.
    fn is_prime_implicant_upto(&self, cand: &VarSet, p: usize) -> bool {
        let mut private = VarSet::empty(self.n);
        for (ci, c) in self.clauses.iter().enumerate() {
            if self.maxpos[ci] > p {
                continue;
            }
            match c.sole_intersection(cand) {
                Overlap::Empty => return false,
                Overlap::Single(v) => private.insert(v),
                Overlap::Many => {}
            }
        }
        cand.is_subset_of(&private)
    }
}

/// Greedy weight-smallest transversal: start from all positions
/// `from_pos..=n` and drop each in ascending order whenever the remainder
/// still hits every clause (only clause members `>= from_pos` count).
fn greedy_min_transversal(clauses: &[VarSet], n: usize, from_pos: usize) -> VarSet {
    let mut hits: Vec<usize> = Vec::with_capacity(clauses.len());
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (ci, c) in clauses.iter().enumerate() {
        let mut h = 0;
        for v in c.iter() {
            if v >= from_pos {
                occ[v].push(ci);
                h += 1;
            }
        }
        hits.push(h);
    }
    let mut keep = VarSet::empty(n);
    for v in from_pos..=n {
        keep.insert(v);
    }
    for v in from_pos..=n {
        if occ[v].iter().all(|&ci| hits[ci] >= 2) {
            keep.remove(v);
            for &ci in &occ[v] {
                hits[ci] -= 1;
            }
        }
    }
    keep
}

/// Extend `prefix` (a prime implicant of the restriction to positions
/// `<= p`) to the weight-smallest prime implicant of the whole CNF that
/// fixes positions `<= p` to exactly `prefix`.
fn extend_min_sets(
    clauses: &[VarSet],
    n: usize,
    prefix: &VarSet,
    p: usize,
) -> Result<VarSet, EnumerateError> {
    let mut residual: Vec<VarSet> = Vec::new();
    for (ci, c) in clauses.iter().enumerate() {
        if !c.is_disjoint_from(prefix) {
            continue;
        }
        let r = c.above(p);
        if r.is_empty() {
            return Err(EnumerateError::ExtendImpossible { clause: ci + 1 });
        }
        residual.push(r);
    }
    let tail = greedy_min_transversal(&residual, n, p + 1);
    Ok(prefix.union(&tail))
}

/// Minimal transversals of a reduced clause group, per strategy. `level` is
/// the nesting depth of the *caller*; a recursive expansion runs at
/// `level + 1`. Results come back sorted by ascending weight.
fn rho_sets(
    d: &[VarSet],
    n: usize,
    strategy: RhoStrategy,
    level: usize,
    stats: &mut DualizeStats,
) -> Result<Vec<VarSet>, EnumerateError> {
    let expand = match strategy {
        RhoStrategy::Expand => true,
        RhoStrategy::Recursive { .. } => false,
        RhoStrategy::Auto => d.len() <= EXPAND_CLAUSE_LIMIT,
    };
    if expand {
        let mut out = berge(d, n);
        out.sort_by(|a, b| a.cmp_key(b));
        return Ok(out);
    }
    let limit = match strategy {
        RhoStrategy::Recursive { budget } => budget,
        _ => AUTO_RECURSION_BUDGET,
    };
    if level + 1 > limit {
        return Err(EnumerateError::DepthLimit { limit });
    }
    // compact the group's universe, preserving relative variable order
    let mut used = VarSet::empty(n);
    for c in d {
        used.union_with(c);
    }
    let to_old: Vec<usize> = used.iter().collect();
    let mut from_old = vec![0usize; n + 1];
    for (k, &v) in to_old.iter().enumerate() {
        from_old[v] = k + 1;
    }
    let n2 = to_old.len();
    let compacted: Vec<VarSet> = d
        .iter()
        .map(|c| {
            let mut s = VarSet::empty(n2);
            for v in c.iter() {
                s.insert(from_old[v]);
            }
            s
        })
        .collect();
    let mut child = Engine::new(compacted, n2, strategy, level + 1);
    let mut out: Vec<VarSet> = Vec::new();
    while let Some(term) = child.next()? {
        let mut s = VarSet::empty(n);
        for v in term.iter() {
            s.insert(to_old[v - 1]);
        }
        out.push(s);
    }
    stats.max_depth = stats.max_depth.max(child.stats.max_depth);
    stats.max_rho_size = stats.max_rho_size.max(child.stats.max_rho_size);
    // the renaming is monotone, so the child's emission order is already
    // ascending in the caller's universe
    debug_assert!(out.windows(2).all(|w| w[0].cmp_key(&w[1]) == Ordering::Less));
    Ok(out)
}

/// Berge multiplication with stepwise minimization: exactly the minimal
/// transversals, one clause at a time.
fn berge(clauses: &[VarSet], n: usize) -> Vec<VarSet> {
    let mut ts: Vec<VarSet> = vec![VarSet::empty(n)];
    for c in clauses {
        let mut next: Vec<VarSet> = Vec::new();
        for t in &ts {
            if !t.is_disjoint_from(c) {
                next.push(t.clone());
            } else {
                for v in c.iter() {
                    let mut u = t.clone();
                    u.insert(v);
                    next.push(u);
                }
            }
        }
        ts = minimize_sets(&next);
    }
    ts
}

/// Streaming enumerator over a prime monotone CNF in which every variable
/// occurs. Terms arrive in increasing weight under `ord`.
pub struct Dualizer {
    engine: Engine,
    ord: VariableOrdering,
    finished: bool,
}

impl Dualizer {
    pub fn new(
        cnf: &MonotoneCnf,
        ord: &VariableOrdering,
        strategy: RhoStrategy,
    ) -> Result<Self, EnumerateError> {
        if ord.n() != cnf.n() {
            return Err(EnumerateError::UniverseMismatch { ord_n: ord.n(), cnf_n: cnf.n() });
        }
        let used = cnf.variables();
        for v in 1..=cnf.n() {
            if !used.contains(v) {
                return Err(EnumerateError::UnusedVariable { var: v });
            }
        }
        let cs = cnf.clauses();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                if i != j && cs[i].vars().is_subset_of(cs[j].vars()) {
                    return Err(EnumerateError::NotPrime { sub: i + 1, sup: j + 1 });
                }
            }
        }
        let relabeled: Vec<VarSet> =
            cs.iter().map(|c| ord.vars_to_positions(c.vars())).collect();
        Ok(Dualizer {
            engine: Engine::new(relabeled, cnf.n(), strategy, 1),
            ord: ord.clone(),
            finished: false,
        })
    }

    /// Next prime implicant, or `None` once the enumeration is complete.
    /// After an error or completion the stream stays finished.
    pub fn next_term(&mut self) -> Result<Option<Term>, EnumerateError> {
        if self.finished {
            return Ok(None);
        }
        match self.engine.next() {
            Ok(Some(positions)) => Ok(Some(Term::new(self.ord.positions_to_vars(&positions)))),
            Ok(None) => {
                self.finished = true;
                Ok(None)
            }
            Err(e) => {
                self.finished = true;
                Err(e)
            }
        }
    }

    pub fn stats(&self) -> DualizeStats {
        self.engine.stats
    }
}

impl Iterator for Dualizer {
    type Item = Result<Term, EnumerateError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.next_term() {
            Ok(Some(t)) => Some(Ok(t)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    }
}

/// All prime implicants of `cnf` in increasing weight under `ord`.
pub fn dualize(
    cnf: &MonotoneCnf,
    ord: &VariableOrdering,
    strategy: RhoStrategy,
) -> Result<Vec<Term>, EnumerateError> {
    Dualizer::new(cnf, ord, strategy)?.collect()
}

/// Result of a fully recursive dualization.
#[derive(Debug, Clone)]
pub struct RDualizeRun {
    pub terms: Vec<Term>,
    /// Deepest enumeration nesting reached (top level = 1).
    pub max_depth: usize,
}

/// Dualize under the identity ordering, expanding every conditioned group
/// recursively; fails once nesting would exceed `depth_limit`.
pub fn r_dualize(cnf: &MonotoneCnf, depth_limit: usize) -> Result<RDualizeRun, EnumerateError> {
    if depth_limit == 0 {
        return Err(EnumerateError::DepthLimit { limit: 0 });
    }
    let ord = VariableOrdering::identity(cnf.n());
    let mut dz = Dualizer::new(cnf, &ord, RhoStrategy::Recursive { budget: depth_limit })?;
    let mut terms = Vec::new();
    while let Some(t) = dz.next_term()? {
        terms.push(t);
    }
    Ok(RDualizeRun { terms, max_depth: dz.stats().max_depth })
}

/// The weight-smallest prime implicant (minimal transversal) of any
/// monotone CNF; the empty term for the constant-1 CNF.
pub fn smallest_prime_implicant(cnf: &MonotoneCnf) -> Term {
    let sets: Vec<VarSet> = cnf.clauses().iter().map(|c| c.vars().clone()).collect();
    Term::new(greedy_min_transversal(&sets, cnf.n(), 1))
}

/// Extend `prefix` (over positions `<= i` of `ord`) to the weight-smallest
/// prime implicant of `cnf` agreeing with it there. The prefix must be a
/// prime implicant of the restriction to the first `i` positions; a clause
/// falsified by the fixing yields `ExtendImpossible`.
pub fn extend_to_smallest(
    cnf: &MonotoneCnf,
    ord: &VariableOrdering,
    prefix: &Term,
    i: usize,
) -> Result<Term, EnumerateError> {
    if ord.n() != cnf.n() {
        return Err(EnumerateError::UniverseMismatch { ord_n: ord.n(), cnf_n: cnf.n() });
    }
    let ppos = ord.vars_to_positions(prefix.vars());
    assert!(
        ppos.max_var().is_none_or(|m| m <= i),
        "prefix must use only the first {i} positions"
    );
    let relabeled: Vec<VarSet> =
        cnf.clauses().iter().map(|c| ord.vars_to_positions(c.vars())).collect();
    let extended = extend_min_sets(&relabeled, cnf.n(), &ppos, i)?;
    Ok(Term::new(ord.positions_to_vars(&extended)))
}

/// Minimal transversals of an arbitrary monotone CNF (minimized and
/// compacted internally), in increasing weight under the identity ordering.
pub fn minimal_transversals(
    d: &MonotoneCnf,
    strategy: RhoStrategy,
) -> Result<Vec<Term>, EnumerateError> {
    let m = d.minimize();
    let sets: Vec<VarSet> = m.clauses().iter().map(|c| c.vars().clone()).collect();
    let mut stats = DualizeStats::default();
    let out = rho_sets(&sets, d.n(), strategy, 0, &mut stats)?;
    Ok(out.into_iter().map(Term::new).collect())
}

/// Timing profile of one enumeration run.
#[derive(Debug, Clone, Copy)]
pub struct DelayReport {
    pub outputs: usize,
    /// Time from construction to the first output (or to exhaustion).
    pub pre_first: Duration,
    pub max_gap: Duration,
    pub mean_gap: Duration,
    pub p50_gap: Duration,
    pub p90_gap: Duration,
    pub p99_gap: Duration,
    /// Time from the last output to exhaustion (zero when truncated).
    pub post_last: Duration,
    pub total: Duration,
    /// True when the run stopped at `max_outputs` rather than exhaustion.
    pub truncated: bool,
}

impl DelayReport {
    /// The worst single wait: before the first output, between outputs, or
    /// after the last one.
    pub fn max_delay(&self) -> Duration {
        self.pre_first.max(self.max_gap).max(self.post_last)
    }
}

fn percentile(sorted: &[Duration], pct: usize) -> Duration {
    if sorted.is_empty() {
        return Duration::ZERO;
    }
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// Run an enumeration, recording per-output delays; stops after
/// `max_outputs` terms when given.
pub fn measure_delay(
    cnf: &MonotoneCnf,
    ord: &VariableOrdering,
    strategy: RhoStrategy,
    max_outputs: Option<usize>,
) -> Result<(Vec<Term>, DelayReport), EnumerateError> {
    let start = Instant::now();
    let mut dz = Dualizer::new(cnf, ord, strategy)?;
    let mut terms: Vec<Term> = Vec::new();
    let mut stamps: Vec<Duration> = Vec::new();
    let mut truncated = false;
    loop {
        if max_outputs.is_some_and(|cap| terms.len() >= cap) {
            truncated = true;
            break;
        }
        match dz.next_term()? {
            Some(t) => {
                stamps.push(start.elapsed());
                terms.push(t);
            }
            None => break,
        }
    }
    let total = start.elapsed();
    let pre_first = stamps.first().copied().unwrap_or(total);
    let mut gaps: Vec<Duration> = stamps.windows(2).map(|w| w[1] - w[0]).collect();
    let post_last = if truncated {
        Duration::ZERO
    } else {
        stamps.last().map(|&s| total - s).unwrap_or(Duration::ZERO)
    };
    let mean_gap = if gaps.is_empty() {
        Duration::ZERO
    } else {
        gaps.iter().sum::<Duration>() / gaps.len() as u32
    };
    gaps.sort();
    let report = DelayReport {
        outputs: terms.len(),
        pre_first,
        max_gap: gaps.last().copied().unwrap_or(Duration::ZERO),
        mean_gap,
        p50_gap: percentile(&gaps, 50),
        p90_gap: percentile(&gaps, 90),
        p99_gap: percentile(&gaps, 99),
        post_last,
        total,
        truncated,
    };
    Ok((terms, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::term_key;
    use crate::oracle::brute_transversals;
    use num_bigint::BigUint;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn cnf(n: usize, lists: &[&[usize]]) -> MonotoneCnf {
        MonotoneCnf::from_lists(n, lists).unwrap()
    }

    fn lists(terms: &[Term]) -> Vec<Vec<usize>> {
        terms.iter().map(|t| t.vars().to_vec()).collect()
    }

    #[test]
    fn smallest_prime_implicant_examples() {
        let f = cnf(4, &[&[2], &[1, 3], &[1, 4]]);
        assert_eq!(smallest_prime_implicant(&f).vars().to_vec(), vec![2, 3, 4]);
        let g = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        assert_eq!(smallest_prime_implicant(&g).vars().to_vec(), vec![2, 3, 4]);
        assert!(smallest_prime_implicant(&MonotoneCnf::constant_one(3)).is_empty());
    }

    #[test]
    fn smallest_prime_implicant_is_weight_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let f = crate::generate::random_prime_cnf(&mut rng, 8, 8);
            let t = smallest_prime_implicant(&f);
            assert!(f.is_prime_implicant(&t), "{f:?} {t:?}");
            let all = brute_transversals(&f).unwrap();
            let min = all.iter().map(term_key).min().unwrap_or_else(|| BigUint::from(0u32));
            assert_eq!(term_key(&t), min, "{f:?}");
        }
    }

    #[test]
    fn dualize_two_clause_example_in_order() {
        let f = cnf(4, &[&[2], &[1, 3], &[1, 4]]);
        let out = dualize(&f, &VariableOrdering::identity(4), RhoStrategy::Auto).unwrap();
        assert_eq!(lists(&out), vec![vec![2, 3, 4], vec![1, 2]]);
        assert_eq!(term_key(&out[0]), BigUint::from(7u32));
        assert_eq!(term_key(&out[1]), BigUint::from(12u32));
    }

    #[test]
    fn dualize_four_clause_example_in_order() {
        let f = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        let out = dualize(&f, &VariableOrdering::identity(4), RhoStrategy::Auto).unwrap();
        // weights 7, 9, 10, 12
        assert_eq!(
            lists(&out),
            vec![vec![2, 3, 4], vec![1, 4], vec![1, 3], vec![1, 2]]
        );
    }

    #[test]
    fn dualize_respects_nonidentity_ordering() {
        let f = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        // put x1 last: ordering positions (x2,x3,x4,x1)
        let ord = VariableOrdering::new(vec![2, 3, 4, 1]).unwrap();
        let out = dualize(&f, &ord, RhoStrategy::Auto).unwrap();
        // same implicants, reweighted: {1,4} -> 3, {1,3} -> 5, {1,2} -> 9,
        // {2,3,4} -> 14
        assert_eq!(
            lists(&out),
            vec![vec![1, 4], vec![1, 3], vec![1, 2], vec![2, 3, 4]]
        );
    }

    #[test]
    fn emitted_keys_strictly_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let f = crate::generate::random_prime_cnf(&mut rng, 9, 10);
            let out = dualize(&f, &VariableOrdering::identity(9), RhoStrategy::Auto).unwrap();
            for w in out.windows(2) {
                assert!(term_key(&w[0]) < term_key(&w[1]), "{f:?}");
            }
        }
    }

    #[test]
    fn dualize_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let f = crate::generate::random_prime_cnf(&mut rng, 8, 10);
            let mut got = lists(&dualize(&f, &VariableOrdering::identity(8), RhoStrategy::Auto)
                .unwrap());
            let mut want = lists(&brute_transversals(&f).unwrap());
            got.sort();
            want.sort();
            assert_eq!(got, want, "{f:?}");
        }
    }

    #[test]
    fn strategies_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let f = crate::generate::random_prime_cnf(&mut rng, 8, 9);
            let ord = VariableOrdering::identity(8);
            let a = lists(&dualize(&f, &ord, RhoStrategy::Auto).unwrap());
            let b = lists(&dualize(&f, &ord, RhoStrategy::Expand).unwrap());
            let c = lists(&dualize(&f, &ord, RhoStrategy::Recursive { budget: 8 }).unwrap());
            assert_eq!(a, b, "{f:?}");
            assert_eq!(a, c, "{f:?}");
        }
    }

    #[test]
    fn constant_one_yields_empty_term() {
        let out = dualize(
            &MonotoneCnf::constant_one(0),
            &VariableOrdering::identity(0),
            RhoStrategy::Auto,
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].is_empty());
    }

    #[test]
    fn input_validation_errors() {
        let f = cnf(3, &[&[1], &[1, 2], &[2, 3]]);
        assert_eq!(
            dualize(&f, &VariableOrdering::identity(3), RhoStrategy::Auto),
            Err(EnumerateError::NotPrime { sub: 1, sup: 2 })
        );
        let g = cnf(3, &[&[1, 3]]);
        assert_eq!(
            dualize(&g, &VariableOrdering::identity(3), RhoStrategy::Auto),
            Err(EnumerateError::UnusedVariable { var: 2 })
        );
        let h = cnf(3, &[&[1, 2, 3]]);
        assert_eq!(
            dualize(&h, &VariableOrdering::identity(2), RhoStrategy::Auto),
            Err(EnumerateError::UniverseMismatch { ord_n: 2, cnf_n: 3 })
        );
    }

    #[test]
    fn recursive_depth_is_bounded_by_clause_size() {
        // a 1-CNF never recurses
        let f = cnf(3, &[&[1], &[2], &[3]]);
        let run = r_dualize(&f, 8).unwrap();
        assert_eq!(run.max_depth, 1);
        assert_eq!(lists(&run.terms), vec![vec![1, 2, 3]]);
        // the four-clause 3-CNF example needs nesting but stays within 3
        let g = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        let run = r_dualize(&g, 8).unwrap();
        assert!(run.max_depth <= 3, "depth {}", run.max_depth);
        assert_eq!(run.terms.len(), 4);
        // and a tight budget fails honestly
        assert_eq!(r_dualize(&g, 1).map(|_| ()), Err(EnumerateError::DepthLimit { limit: 1 }));
        assert_eq!(r_dualize(&g, 0).map(|_| ()), Err(EnumerateError::DepthLimit { limit: 0 }));
    }

    #[test]
    fn extend_to_smallest_example() {
        let f = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        let ord = VariableOrdering::identity(4);
        let prefix = Term::new(VarSet::from_vars(4, &[1]));
        let t = extend_to_smallest(&f, &ord, &prefix, 1).unwrap();
        assert_eq!(t.vars().to_vec(), vec![1, 4]);
        // fixing x1=0, x2=1 leaves (x1|x3) and (x1|x4) to cover beyond
        // position 2: the smallest completion of {2} is {2,3,4}
        let prefix = Term::new(VarSet::from_vars(4, &[2]));
        let t = extend_to_smallest(&f, &ord, &prefix, 2).unwrap();
        assert_eq!(t.vars().to_vec(), vec![2, 3, 4]);
        // a unit clause inside the fixed range cannot be repaired
        let g = cnf(3, &[&[1], &[2, 3]]);
        let bad = extend_to_smallest(&g, &ord_of(3), &Term::empty(3), 1);
        assert_eq!(bad, Err(EnumerateError::ExtendImpossible { clause: 1 }));
    }

    fn ord_of(n: usize) -> VariableOrdering {
        VariableOrdering::identity(n)
    }

    #[test]
    fn minimal_transversals_handles_nonprime_input() {
        let d = cnf(5, &[&[1, 2, 3], &[1, 2], &[4]]);
        let out = minimal_transversals(&d, RhoStrategy::Auto).unwrap();
        let mut got = lists(&out);
        got.sort();
        assert_eq!(got, vec![vec![1, 4], vec![2, 4]]);
        // constant-1 group: single empty transversal
        let one = MonotoneCnf::constant_one(3);
        let out = minimal_transversals(&one, RhoStrategy::Auto).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].is_empty());
    }

    #[test]
    fn rho_size_never_exceeds_output_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let f = crate::generate::random_prime_cnf(&mut rng, 9, 12);
            let ord = VariableOrdering::identity(9);
            let mut dz = Dualizer::new(&f, &ord, RhoStrategy::Auto).unwrap();
            let mut count = 0;
            while let Some(_t) = dz.next_term().unwrap() {
                count += 1;
            }
            let stats = dz.stats();
            assert_eq!(stats.emitted, count);
            assert!(
                stats.max_rho_size <= count,
                "rho {} vs outputs {count} on {f:?}",
                stats.max_rho_size
            );
        }
    }

    #[test]
    fn measure_delay_reports_counts_and_truncation() {
        let f = cnf(4, &[&[1, 2], &[1, 3], &[2, 3, 4], &[1, 4]]);
        let ord = VariableOrdering::identity(4);
        let (terms, report) = measure_delay(&f, &ord, RhoStrategy::Auto, None).unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(report.outputs, 4);
        assert!(!report.truncated);
        assert!(report.max_delay() <= report.total);
        assert!(report.p50_gap <= report.p90_gap && report.p90_gap <= report.p99_gap);
        let (terms, report) = measure_delay(&f, &ord, RhoStrategy::Auto, Some(2)).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(report.truncated);
    }
}
