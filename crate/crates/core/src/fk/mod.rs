//! Deciding whether two prime monotone CNFs are each other's duals, in the
//! style of Fredman and Khachiyan: recursive decomposition with explicit
//! counterexample points on every negative answer.

mod algo_a;
mod algo_b;
pub mod certificate;

pub use algo_a::{check_dual_a, AStats};
pub use algo_b::{check_dual_b, replay_certificate, BOutcome, BStats, ReplayOutcome};
pub use certificate::{parse_certificate, AcBlock, CertParseError, Certificate, MoveLabel};

use crate::cnf::{Assignment, CnfError, MonotoneCnf};
use crate::varset::VarSet;
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FkError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// Answer of a duality check: either the pair is dual, or a point `w` with
/// `phi(w) = psi(complement(w))` refutes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityOutcome {
    Dual,
    NotDual { witness: Assignment },
}

/// An ordered pair of monotone CNFs over a common universe, both kept
/// minimized (prime) at all times.
#[derive(Debug, Clone)]
pub struct DualPair {
    phi: MonotoneCnf,
    psi: MonotoneCnf,
}

impl DualPair {
    pub fn new(phi: MonotoneCnf, psi: MonotoneCnf) -> Result<Self, CnfError> {
        if phi.n() != psi.n() {
            return Err(CnfError::UniverseMismatch { left: phi.n(), right: psi.n() });
        }
        Ok(DualPair { phi: phi.minimize(), psi: psi.minimize() })
    }

    pub fn phi(&self) -> &MonotoneCnf {
        &self.phi
    }

    pub fn psi(&self) -> &MonotoneCnf {
        &self.psi
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    /// Product of the clause counts, the measure the search recurses on.
    pub fn volume(&self) -> u64 {
        self.phi.len() as u64 * self.psi.len() as u64
    }

    pub fn swapped(&self) -> DualPair {
        DualPair { phi: self.psi.clone(), psi: self.phi.clone() }
    }
}

/// Does `w` witness non-duality, i.e. `phi(w) = psi(complement(w))`?
pub fn verify_witness(pair: &DualPair, w: &Assignment) -> bool {
    pair.phi.evaluate(w) == pair.psi.evaluate(&w.complement())
}

/// The unique root of `x ln x = ln v` at least 1; duals satisfy
/// `min-frequency <= 1/chi(volume)` splits, and certificate sizes are
/// measured against it.
pub fn chi(v: f64) -> f64 {
    if v <= 1.0 {
        return 1.0;
    }
    let target = v.ln();
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while hi * hi.ln() < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if mid * mid.ln() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

fn all_ones_except(zeros: &VarSet) -> Assignment {
    Assignment::from_true_set(zeros.complement())
}

/// If some clause of `phi` misses some clause of `psi` entirely, the pair
/// cannot be dual: setting exactly that `phi`-clause to zero falsifies both
/// sides.
pub(crate) fn precheck_intersections(pair: &DualPair) -> Option<Assignment> {
    for cp in pair.psi.clauses() {
        for c in pair.phi.clauses() {
            if c.vars().is_disjoint_from(cp.vars()) {
                return Some(all_ones_except(c.vars()));
            }
        }
    }
    None
}

/// Witness for a variable `x` used by `f` but not by `g` (both sides of a
/// would-be dual pair must mention the same variables). The returned point
/// is in `(f, g)` orientation; pass `flip` to complement it for the mirrored
/// call.
fn variable_gap_witness(
    f: &MonotoneCnf,
    g: &MonotoneCnf,
    x: usize,
    flip: bool,
) -> Assignment {
    let c = f
        .clauses()
        .iter()
        .find(|c| c.vars().contains(x))
        .expect("x is used by f");
    let w0 = all_ones_except(c.vars());
    let w = if !g.evaluate(&w0.complement()) {
        // both sides are 0 at w0
        w0
    } else {
        // drop x: f stays 1 because it is an antichain, g cannot tell
        let mut cm = c.vars().clone();
        cm.remove(x);
        all_ones_except(&cm)
    };
    if flip {
        w.complement()
    } else {
        w
    }
}

/// Check `V(phi) = V(psi)`; on failure build a witness.
fn condition_variables(pair: &DualPair) -> Option<Assignment> {
    let vf = pair.phi.variables();
    let vg = pair.psi.variables();
    if vf == vg {
        return None;
    }
    let extra_phi = vf.difference(&vg);
    if let Some(x) = extra_phi.iter().next() {
        return Some(variable_gap_witness(&pair.phi, &pair.psi, x, false));
    }
    let x = vg.difference(&vf).iter().next().expect("the sets differ");
    Some(variable_gap_witness(&pair.psi, &pair.phi, x, true))
}

/// Check that no `f`-clause is longer than `g`'s clause count; on failure
/// some literal of the oversized clause can be dropped while every
/// `g`-clause still meets the rest (pigeonhole, using that all pairwise
/// intersections are nonempty), which yields a point where both sides are 1.
fn condition_size(
    f: &MonotoneCnf,
    g: &MonotoneCnf,
    flip: bool,
) -> Result<Option<Assignment>, FkError> {
    let Some(c) = f.clauses().iter().find(|c| c.len() > g.len()) else {
        return Ok(None);
    };
    for x in c.vars().iter() {
        let mut cm = c.vars().clone();
        cm.remove(x);
        if g.clauses().iter().all(|d| !d.vars().is_disjoint_from(&cm)) {
            let w = all_ones_except(&cm);
            return Ok(Some(if flip { w.complement() } else { w }));
        }
    }
    Err(FkError::Internal(
        "an oversized clause had no droppable literal".into(),
    ))
}

fn scaled_weight(cnf: &MonotoneCnf, l: usize) -> BigUint {
    let mut total = BigUint::from(0u8);
    for c in cnf.clauses() {
        total += BigUint::from(1u8) << (l - c.len());
    }
    total
}

/// Potential of a partial assignment, scaled by `2^l`: each `phi`-clause
/// not yet satisfied (no variable set to 1) contributes `2^(l - u)` for `u`
/// unassigned variables, and each `psi`-clause not yet hit on the
/// complement side (no variable set to 0) contributes the same.
fn scaled_potential(pair: &DualPair, values: &[Option<bool>], l: usize) -> BigUint {
    let mut total = BigUint::from(0u8);
    let side = |cnf: &MonotoneCnf, satisfied_by: bool, total: &mut BigUint| {
        for c in cnf.clauses() {
            let mut sat = false;
            let mut unassigned = 0usize;
            for v in c.vars().iter() {
                match values[v] {
                    Some(b) if b == satisfied_by => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => unassigned += 1,
                }
            }
            if !sat {
                *total += BigUint::from(1u8) << (l - unassigned);
            }
        }
    };
    side(&pair.phi, true, &mut total);
    side(&pair.psi, false, &mut total);
    total
}

/// Check the weight inequality `sum 2^-|c| + sum 2^-|c'| >= 1` that every
/// dual pair satisfies, in exact arithmetic. When it fails, derandomize the
/// union bound: assign variables in index order, always taking the branch
/// of smaller potential (ties to 0); the end point satisfies both sides.
fn condition_weight(pair: &DualPair) -> Result<Option<Assignment>, FkError> {
    let l = pair
        .phi
        .max_clause_len()
        .max(pair.psi.max_clause_len());
    let one_scaled = BigUint::from(1u8) << l;
    let total = scaled_weight(&pair.phi, l) + scaled_weight(&pair.psi, l);
    if total >= one_scaled {
        return Ok(None);
    }
    let n = pair.n();
    let mut values: Vec<Option<bool>> = vec![None; n + 1];
    for v in 1..=n {
        values[v] = Some(false);
        let p0 = scaled_potential(pair, &values, l);
        values[v] = Some(true);
        let p1 = scaled_potential(pair, &values, l);
        if p0 <= p1 {
            values[v] = Some(false);
        }
    }
    let mut w = Assignment::all_false(n);
    for v in 1..=n {
        w.set(v, values[v] == Some(true));
    }
    if !pair.phi.evaluate(&w) || !pair.psi.evaluate(&w.complement()) {
        return Err(FkError::Internal(
            "derandomized weight witness failed to satisfy both sides".into(),
        ));
    }
    Ok(Some(w))
}

/// All four necessary conditions for duality, each returning a verified
/// witness on failure: matching variable sets, both size bounds, and the
/// weight inequality. Assumes the intersection precheck already passed.
pub(crate) fn check_conditions_a(pair: &DualPair) -> Result<Option<Assignment>, FkError> {
    if let Some(w) = condition_variables(pair) {
        return Ok(Some(w));
    }
    if let Some(w) = condition_size(&pair.phi, &pair.psi, false)? {
        return Ok(Some(w));
    }
    if let Some(w) = condition_size(&pair.psi, &pair.phi, true)? {
        return Ok(Some(w));
    }
    condition_weight(pair)
}

/// The small-side leaf predicate: mismatched variable sets, a violated
/// size bound, or one side with at most two clauses.
pub(crate) fn lcheck(pair: &DualPair) -> bool {
    pair.phi.variables() != pair.psi.variables()
        || pair.phi.max_clause_len() > pair.psi.len()
        || pair.psi.max_clause_len() > pair.phi.len()
        || pair.phi.len().min(pair.psi.len()) <= 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LeafOutcome {
    Dual,
    NotDual(Assignment),
}

/// Exact prime dual of a CNF with at most two clauses: one clause dualizes
/// to its singletons, two clauses to the minimized pairwise unions.
fn small_dual_sets(s: &MonotoneCnf) -> Vec<VarSet> {
    match s.len() {
        1 => s.clauses()[0]
            .vars()
            .iter()
            .map(|v| VarSet::from_vars(s.n(), &[v]))
            .collect(),
        2 => {
            let c = s.clauses()[0].vars();
            let d = s.clauses()[1].vars();
            let mut sets = Vec::new();
            for a in c.iter() {
                for b in d.iter() {
                    let mut u = VarSet::empty(s.n());
                    u.insert(a);
                    u.insert(b);
                    sets.push(u);
                }
            }
            crate::cnf::minimize_sets(&sets)
        }
        _ => unreachable!("small_dual_sets wants at most two clauses"),
    }
}

/// Decide a leaf exactly. The checks run in a fixed order so that replay
/// reproduces the same witness: the intersection precheck, the variable-set
/// condition, the two size conditions, then the exact comparison against
/// the computed dual of the side with at most two clauses. Only the last
/// step can answer `Dual`.
pub(crate) fn leaf_test(pair: &DualPair) -> Result<LeafOutcome, FkError> {
    if let Some(w) = precheck_intersections(pair) {
        return Ok(LeafOutcome::NotDual(w));
    }
    if let Some(w) = condition_variables(pair) {
        return Ok(LeafOutcome::NotDual(w));
    }
    if let Some(w) = condition_size(&pair.phi, &pair.psi, false)? {
        return Ok(LeafOutcome::NotDual(w));
    }
    if let Some(w) = condition_size(&pair.psi, &pair.phi, true)? {
        return Ok(LeafOutcome::NotDual(w));
    }
    let n = pair.n();
    let s_is_phi = pair.phi.len() <= pair.psi.len();
    let (s, t) = if s_is_phi { (&pair.phi, &pair.psi) } else { (&pair.psi, &pair.phi) };
    if s.len() > 2 {
        return Err(FkError::Internal("leaf test on a non-leaf pair".into()));
    }
    if s.is_empty() {
        // s is constant 1, whose dual (constant 0) has no clause form here,
        // so the pair cannot be dual; both sides evaluate to 1 at this point
        let w = if s_is_phi { Assignment::all_false(n) } else { Assignment::all_true(n) };
        return Ok(LeafOutcome::NotDual(w));
    }
    let dual_sets = small_dual_sets(s);
    let t_sets: std::collections::HashSet<&VarSet> =
        t.clauses().iter().map(|c| c.vars()).collect();
    let matches = dual_sets.len() == t.len() && dual_sets.iter().all(|d| t_sets.contains(d));
    if matches {
        return Ok(LeafOutcome::Dual);
    }
    // find a point p where t and the true dual differ, then complement it
    // into the pair's orientation
    let p = distinguishing_point(&dual_sets, t);
    let w = if s_is_phi { p.complement() } else { p };
    if !verify_witness(pair, &w) {
        return Err(FkError::Internal("leaf distinguishing point failed".into()));
    }
    Ok(LeafOutcome::NotDual(w))
}

/// A point where the antichain CNF `t` and the antichain `dual_sets`
/// disagree. Zeroing exactly one antichain member keeps its own CNF at 0
/// while no *other* member of the same antichain fits inside it; the other
/// CNF tells them apart.
fn distinguishing_point(dual_sets: &[VarSet], t: &MonotoneCnf) -> Assignment {
    let t_has = |x: &VarSet| t.clauses().iter().any(|c| c.vars() == x);
    if let Some(cstar) = dual_sets.iter().find(|d| !t_has(d)) {
        let p0 = all_ones_except(cstar);
        if t.evaluate(&p0) {
            return p0; // t = 1, dual = 0
        }
        // t = 0 because some t-clause sits strictly inside cstar; zeroing
        // that clause instead flips the roles
        let e = t
            .clauses()
            .iter()
            .find(|e| e.vars().is_subset_of(cstar))
            .expect("t evaluated to 0 at p0");
        return all_ones_except(e.vars());
    }
    // dual_sets is contained in t, so some t-clause is extra
    let dual_has = |x: &VarSet| dual_sets.iter().any(|d| d == x);
    let cstar = t
        .clauses()
        .iter()
        .find(|c| !dual_has(c.vars()))
        .expect("the antichains differ");
    all_ones_except(cstar.vars())
}

/// Composable description of how a child witness maps to its parent:
/// complement first, then force the listed variables.
#[derive(Debug, Clone)]
pub(crate) struct MoveTransform {
    pub complement: bool,
    pub set_true: VarSet,
    pub set_false: VarSet,
}

impl MoveTransform {
    pub fn apply(&self, w: &Assignment) -> Assignment {
        let mut w = if self.complement { w.complement() } else { w.clone() };
        for v in self.set_true.iter() {
            w.set(v, true);
        }
        for v in self.set_false.iter() {
            w.set(v, false);
        }
        w
    }
}

/// The four clause groups induced by a split variable, in input order:
/// `phi0` are `phi`-clauses containing `x` with `x` removed, `phi1` those
/// without `x`; likewise for `psi`.
pub(crate) struct Split {
    pub phi0: Vec<VarSet>,
    pub phi1: Vec<VarSet>,
    pub psi0: Vec<VarSet>,
    pub psi1: Vec<VarSet>,
}

pub(crate) fn split_at(pair: &DualPair, x: usize) -> Split {
    let part = |cnf: &MonotoneCnf| {
        let mut with = Vec::new();
        let mut without = Vec::new();
        for c in cnf.clauses() {
            if c.vars().contains(x) {
                let mut s = c.vars().clone();
                s.remove(x);
                with.push(s);
            } else {
                without.push(c.vars().clone());
            }
        }
        (with, without)
    };
    let (phi0, phi1) = part(&pair.phi);
    let (psi0, psi1) = part(&pair.psi);
    Split { phi0, phi1, psi0, psi1 }
}

/// Child for `x := 1` in `(phi, psi)` orientation: `(phi1, psi0 ++ psi1)`.
pub(crate) fn restrict_one_child(sp: &Split) -> (Vec<VarSet>, Vec<VarSet>) {
    let mut g = sp.psi0.clone();
    g.extend(sp.psi1.iter().cloned());
    (sp.phi1.clone(), g)
}

/// Child for `x := 0` in swapped orientation: `(psi1, phi0 ++ phi1)`.
pub(crate) fn restrict_zero_child(sp: &Split) -> (Vec<VarSet>, Vec<VarSet>) {
    let mut g = sp.phi0.clone();
    g.extend(sp.phi1.iter().cloned());
    (sp.psi1.clone(), g)
}

/// The `j`-th sibling child (0-based) when `psi`'s frequency at `x` is the
/// low one: `x := 0` and all of the `j`-th `psi0`-clause forced to 1. Its
/// left side keeps the `phi0`-clauses disjoint from that clause; its right
/// side strips the clause's variables out of `psi1`. Sound and complete
/// given the intersection property at the parent.
pub(crate) fn sibling_child(
    f0: &[VarSet],
    g1: &[VarSet],
    cj: &VarSet,
) -> (Vec<VarSet>, Vec<VarSet>) {
    let f = f0.iter().filter(|c| c.is_disjoint_from(cj)).cloned().collect();
    let g = g1.iter().map(|d| d.difference(cj)).collect();
    (f, g)
}

pub(crate) fn transform_one(n: usize, x: usize) -> MoveTransform {
    MoveTransform {
        complement: false,
        set_true: VarSet::from_vars(n, &[x]),
        set_false: VarSet::empty(n),
    }
}

pub(crate) fn transform_zero(n: usize, x: usize) -> MoveTransform {
    MoveTransform {
        complement: true,
        set_true: VarSet::empty(n),
        set_false: VarSet::from_vars(n, &[x]),
    }
}

pub(crate) fn transform_sibling_low_phi(n: usize, x: usize, cj: &VarSet) -> MoveTransform {
    MoveTransform {
        complement: false,
        set_true: cj.clone(),
        set_false: VarSet::from_vars(n, &[x]),
    }
}

pub(crate) fn transform_sibling_low_psi(n: usize, x: usize, cj: &VarSet) -> MoveTransform {
    MoveTransform {
        complement: true,
        set_true: VarSet::from_vars(n, &[x]),
        set_false: cj.clone(),
    }
}

/// Build a child pair from raw clause sets, deciding it on the spot when a
/// side collapses to a constant. A clause emptied by restriction makes its
/// side constant 0; an empty list is constant 1; `dual(0) = 1` is the only
/// dual constant pair, and every other constant case yields an immediate
/// witness in the child's own orientation.
pub(crate) enum ResolvedChild {
    Pair(DualPair),
    Decided { dual: bool, witness: Option<Assignment> },
}

pub(crate) fn resolve_child(
    n: usize,
    f_sets: Vec<VarSet>,
    g_sets: Vec<VarSet>,
) -> Result<ResolvedChild, FkError> {
    let f_zero = f_sets.iter().any(|s| s.is_empty());
    let g_zero = g_sets.iter().any(|s| s.is_empty());
    if f_zero && g_sets.is_empty() {
        return Ok(ResolvedChild::Decided { dual: true, witness: None });
    }
    if g_zero && f_sets.is_empty() {
        return Ok(ResolvedChild::Decided { dual: true, witness: None });
    }
    if f_zero {
        // f = 0 and g is not constant 1: both sides are 0 at all-ones
        return Ok(ResolvedChild::Decided {
            dual: false,
            witness: Some(Assignment::all_true(n)),
        });
    }
    if g_zero {
        // g = 0 and f is not constant 1: both sides are 0 at all-zeros
        return Ok(ResolvedChild::Decided {
            dual: false,
            witness: Some(Assignment::all_false(n)),
        });
    }
    let f = MonotoneCnf::from_sets_minimized(n, f_sets)?;
    let g = MonotoneCnf::from_sets_minimized(n, g_sets)?;
    Ok(ResolvedChild::Pair(DualPair::new(f, g)?))
}

/// The variable with the highest clause frequency on either side (exact
/// fraction comparison, ties to the smallest index), plus whether the
/// winning side was `psi`.
pub(crate) fn max_frequency_var(pair: &DualPair) -> (usize, bool) {
    let mf = pair.phi.len() as u64;
    let mg = pair.psi.len() as u64;
    let mut counts_f = vec![0u64; pair.n() + 1];
    let mut counts_g = vec![0u64; pair.n() + 1];
    for c in pair.phi.clauses() {
        for v in c.vars().iter() {
            counts_f[v] += 1;
        }
    }
    for c in pair.psi.clauses() {
        for v in c.vars().iter() {
            counts_g[v] += 1;
        }
    }
    // compare a/b vs c/d as a*d vs c*b; empty sides behave as frequency 0
    let better = |an: u64, ad: u64, bn: u64, bd: u64| {
        if ad == 0 {
            return false;
        }
        if bd == 0 {
            return an > 0;
        }
        an * bd > bn * ad
    };
    let mut best: Option<(usize, bool, u64, u64)> = None; // (var, from_psi, num, den)
    for v in 1..=pair.n() {
        if counts_f[v] == 0 && counts_g[v] == 0 {
            continue;
        }
        // the larger of the two per-side fractions for v
        let psi_larger = better(counts_g[v], mg, counts_f[v], mf);
        let (num, den) = if psi_larger { (counts_g[v], mg) } else { (counts_f[v], mf) };
        let improves = match best {
            None => true,
            Some((_, _, bn, bd)) => better(num, den, bn, bd),
        };
        if improves {
            best = Some((v, psi_larger, num, den));
        }
    }
    let (v, from_psi, _, _) = best.expect("some variable occurs somewhere");
    (v, from_psi)
}
