//! Monotone CNFs, terms, assignments, and variable orderings.

use crate::varset::{VarSet, MAX_VARS};
use num_bigint::BigUint;
use std::fmt;
use thiserror::Error;

/// Errors raised while constructing or combining the basic types.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("clauses must be nonempty")]
    EmptyClause,
    #[error("variable x{var} outside the universe 1..={n}")]
    IndexOutOfRange { var: usize, n: usize },
    #[error("universe of {n} variables exceeds the {max}-variable cap")]
    UniverseTooLarge { n: usize, max: usize },
    #[error("clauses {first} and {second} are identical")]
    DuplicateClause { first: usize, second: usize },
    #[error("operands live in different universes ({left} vs {right})")]
    UniverseMismatch { left: usize, right: usize },
    #[error("ordering is not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
}

/// A nonempty positive clause: the disjunction of its variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause(VarSet);

impl Clause {
    pub fn new(vars: VarSet) -> Result<Self, CnfError> {
        if vars.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        Ok(Clause(vars))
    }

    pub fn vars(&self) -> &VarSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_vars(self) -> VarSet {
        self.0
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Clause{:?}", self.0)
    }
}

/// A positive term: the conjunction of its variables. May be empty
/// (the constant-1 term).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(VarSet);

impl Term {
    pub fn new(vars: VarSet) -> Self {
        Term(vars)
    }

    pub fn empty(n: usize) -> Self {
        Term(VarSet::empty(n))
    }

    pub fn vars(&self) -> &VarSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vars(self) -> VarSet {
        self.0
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term{:?}", self.0)
    }
}

impl fmt::Display for Term {
    /// Space-separated ascending variable indices; empty string for the
    /// constant-1 term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The weight `sum of 2^(n-j)` over the variables `j` of `t`, where `n` is
/// the universe size: variable 1 carries the highest weight.
pub fn term_key(t: &Term) -> BigUint {
    let n = t.vars().universe();
    let mut key = BigUint::from(0u32);
    for j in t.vars().iter() {
        key |= BigUint::from(1u32) << (n - j);
    }
    key
}

/// A total truth assignment over `1..=n`, stored as its set of true variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment(VarSet);

impl Assignment {
    pub fn all_false(n: usize) -> Self {
        Assignment(VarSet::empty(n))
    }

    pub fn all_true(n: usize) -> Self {
        Assignment(VarSet::full(n))
    }

    pub fn from_true_set(trues: VarSet) -> Self {
        Assignment(trues)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = VarSet::empty(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.insert(i + 1);
            }
        }
        Assignment(s)
    }

    pub fn n(&self) -> usize {
        self.0.universe()
    }

    pub fn is_true(&self, var: usize) -> bool {
        self.0.contains(var)
    }

    pub fn set(&mut self, var: usize, value: bool) {
        if value {
            self.0.insert(var);
        } else {
            self.0.remove(var);
        }
    }

    pub fn true_set(&self) -> &VarSet {
        &self.0
    }

    /// The pointwise negation.
    pub fn complement(&self) -> Assignment {
        Assignment(self.0.complement())
    }

    /// Bit-string `w_1 w_2 ... w_n`, e.g. `10` for (1,0).
    pub fn to_bitstring(&self) -> String {
        (1..=self.n()).map(|v| if self.is_true(v) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({})", self.to_bitstring())
    }
}

/// A bijection between variables and positions `1..=n`.
///
/// `var_at(p)` is the variable placed at position `p`; `position_of(v)` is
/// the position holding variable `v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VariableOrdering {
    order: Vec<usize>, // order[p-1] = variable at position p
    pos: Vec<usize>,   // pos[v-1] = position of variable v
}

impl VariableOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self, CnfError> {
        let n = order.len();
        if n > MAX_VARS {
            return Err(CnfError::UniverseTooLarge { n, max: MAX_VARS });
        }
        let mut pos = vec![0usize; n];
        for (p, &v) in order.iter().enumerate() {
            if v < 1 || v > n || pos[v - 1] != 0 {
                return Err(CnfError::NotAPermutation { n });
            }
            pos[v - 1] = p + 1;
        }
        Ok(VariableOrdering { order, pos })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((1..=n).collect()).expect("identity is a permutation")
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn var_at(&self, position: usize) -> usize {
        self.order[position - 1]
    }

    pub fn position_of(&self, var: usize) -> usize {
        self.pos[var - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// Rewrite a set of variables as the set of their positions.
    pub fn vars_to_positions(&self, vars: &VarSet) -> VarSet {
        let mut s = VarSet::empty(self.n());
        for v in vars.iter() {
            s.insert(self.position_of(v));
        }
        s
    }

    /// Rewrite a set of positions back to the variables they hold.
    pub fn positions_to_vars(&self, positions: &VarSet) -> VarSet {
        let mut s = VarSet::empty(self.n());
        for p in positions.iter() {
            s.insert(self.var_at(p));
        }
        s
    }
}

/// Result of conditioning a clause set: either the constant-0 function or a
/// (possibly empty, i.e. constant-1) monotone CNF.
#[derive(Clone, Debug, PartialEq)]
pub enum Reduced {
    ConstantZero,
    Cnf(MonotoneCnf),
}

/// Renaming produced by [`MonotoneCnf::compact`]: maps the compacted
/// universe `1..=n'` back to the original variable indices.
#[derive(Clone, Debug)]
pub struct CompactionMap {
    to_old: Vec<usize>, // to_old[new-1] = old index
    from_old: Vec<Option<usize>>,
}

impl CompactionMap {
    pub fn compact_n(&self) -> usize {
        self.to_old.len()
    }

    pub fn to_old(&self, new_var: usize) -> usize {
        self.to_old[new_var - 1]
    }

    pub fn to_new(&self, old_var: usize) -> Option<usize> {
        self.from_old[old_var - 1]
    }

    /// Map a term over the compacted universe back to original indices.
    pub fn term_to_old(&self, t: &Term, original_n: usize) -> Term {
        let mut s = VarSet::empty(original_n);
        for v in t.vars().iter() {
            s.insert(self.to_old(v));
        }
        Term::new(s)
    }
}

/// A monotone CNF: a conjunction of nonempty positive clauses over a fixed
/// universe `1..=n`. Clause order is preserved; no two clauses may be equal,
/// but one may contain another (use [`MonotoneCnf::minimize`] to restore the
/// antichain property).
#[derive(Clone, PartialEq, Eq)]
pub struct MonotoneCnf {
    n: usize,
    clauses: Vec<Clause>,
}

impl MonotoneCnf {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if n > MAX_VARS {
            return Err(CnfError::UniverseTooLarge { n, max: MAX_VARS });
        }
        for c in &clauses {
            if c.vars().universe() != n {
                return Err(CnfError::UniverseMismatch { left: c.vars().universe(), right: n });
            }
        }
        for i in 0..clauses.len() {
            for j in i + 1..clauses.len() {
                if clauses[i] == clauses[j] {
                    return Err(CnfError::DuplicateClause { first: i + 1, second: j + 1 });
                }
            }
        }
        Ok(MonotoneCnf { n, clauses })
    }

    /// Convenience constructor from variable-index lists.
    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Self, CnfError> {
        if n > MAX_VARS {
            return Err(CnfError::UniverseTooLarge { n, max: MAX_VARS });
        }
        let mut clauses = Vec::with_capacity(lists.len());
        for list in lists {
            let mut s = VarSet::empty(n);
            for &v in *list {
                if v < 1 || v > n {
                    return Err(CnfError::IndexOutOfRange { var: v, n });
                }
                s.insert(v);
            }
            clauses.push(Clause::new(s)?);
        }
        Self::new(n, clauses)
    }

    /// The constant-1 CNF (no clauses) over `1..=n`.
    pub fn constant_one(n: usize) -> Self {
        MonotoneCnf { n, clauses: Vec::new() }
    }

    /// Build from raw nonempty variable sets, removing duplicates and
    /// supersets as by [`MonotoneCnf::minimize`].
    pub fn from_sets_minimized(n: usize, sets: Vec<VarSet>) -> Result<Self, CnfError> {
        if n > MAX_VARS {
            return Err(CnfError::UniverseTooLarge { n, max: MAX_VARS });
        }
        for s in &sets {
            if s.is_empty() {
                return Err(CnfError::EmptyClause);
            }
            if s.universe() != n {
                return Err(CnfError::UniverseMismatch { left: s.universe(), right: n });
            }
        }
        let clauses = minimize_sets(&sets).into_iter().map(Clause).collect();
        Ok(MonotoneCnf { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total number of literal occurrences.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).sum()
    }

    /// Union of all clause variable sets.
    pub fn variables(&self) -> VarSet {
        let mut s = VarSet::empty(self.n);
        for c in &self.clauses {
            s.union_with(c.vars());
        }
        s
    }

    /// True when every variable of the universe occurs in some clause.
    pub fn all_variables_used(&self) -> bool {
        self.variables().len() == self.n
    }

    /// Largest clause size (0 for the constant-1 CNF).
    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Remove duplicate clauses and clauses containing another clause,
    /// keeping the first occurrence of each survivor in input order. The
    /// result is an antichain defining the same monotone function.
    pub fn minimize(&self) -> MonotoneCnf {
        let mut keep: Vec<Clause> = Vec::new();
        'outer: for c in &self.clauses {
            let mut k = 0;
            while k < keep.len() {
                if keep[k].vars().is_subset_of(c.vars()) {
                    continue 'outer; // c is a duplicate or a superset
                }
                if c.vars().is_subset_of(keep[k].vars()) {
                    keep.remove(k);
                } else {
                    k += 1;
                }
            }
            keep.push(c.clone());
        }
        MonotoneCnf { n: self.n, clauses: keep }
    }

    /// True when the clause sets form an antichain with no duplicates.
    pub fn is_prime(&self) -> bool {
        for i in 0..self.clauses.len() {
            for j in 0..self.clauses.len() {
                if i != j && self.clauses[i].vars().is_subset_of(self.clauses[j].vars()) {
                    return false;
                }
            }
        }
        true
    }

    /// Evaluate at `w`; panics if the universes differ.
    pub fn evaluate(&self, w: &Assignment) -> bool {
        assert_eq!(w.n(), self.n, "assignment over {} variables, CNF over {}", w.n(), self.n);
        self.satisfied_by(w.true_set())
    }

    /// Evaluate with the set of true variables given directly.
    pub fn satisfied_by(&self, trues: &VarSet) -> bool {
        self.clauses.iter().all(|c| !c.vars().is_disjoint_from(trues))
    }

    /// The restriction to the first `i` positions of `ord`: clauses all of
    /// whose variables sit at positions `<= i`.
    pub fn restrict(&self, ord: &VariableOrdering, i: usize) -> MonotoneCnf {
        let keep: Vec<Clause> = self
            .clauses
            .iter()
            .filter(|c| c.vars().iter().all(|v| ord.position_of(v) <= i))
            .cloned()
            .collect();
        MonotoneCnf { n: self.n, clauses: keep }
    }

    /// Clauses whose maximum position under `ord` is exactly `i`.
    pub fn delta(&self, ord: &VariableOrdering, i: usize) -> MonotoneCnf {
        let keep: Vec<Clause> = self
            .clauses
            .iter()
            .filter(|c| c.vars().iter().map(|v| ord.position_of(v)).max() == Some(i))
            .cloned()
            .collect();
        MonotoneCnf { n: self.n, clauses: keep }
    }

    /// True when setting exactly the variables of `t` to 1 satisfies the CNF.
    pub fn is_implicant(&self, t: &Term) -> bool {
        self.satisfied_by(t.vars())
    }

    /// True when `t` is an implicant and no proper subset of `t` is.
    pub fn is_prime_implicant(&self, t: &Term) -> bool {
        if !self.is_implicant(t) {
            return false;
        }
        for v in t.vars().iter() {
            let mut shrunk = t.vars().clone();
            shrunk.remove(v);
            if self.satisfied_by(&shrunk) {
                return false;
            }
        }
        true
    }

    /// Rename every variable to its position under `ord` (an isomorphic CNF
    /// on which the identity ordering plays the role of `ord`).
    pub fn relabel_to_positions(&self, ord: &VariableOrdering) -> MonotoneCnf {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause(ord.vars_to_positions(c.vars())))
            .collect();
        MonotoneCnf { n: self.n, clauses }
    }

    /// Drop unused variables, renaming the used ones to `1..=n'` in
    /// ascending order (so relative order, and hence term-key order, is
    /// preserved). Returns the renamed CNF and the renaming.
    pub fn compact(&self) -> (MonotoneCnf, CompactionMap) {
        let used = self.variables();
        let to_old: Vec<usize> = used.iter().collect();
        let mut from_old = vec![None; self.n];
        for (k, &v) in to_old.iter().enumerate() {
            from_old[v - 1] = Some(k + 1);
        }
        let n2 = to_old.len();
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let mut s = VarSet::empty(n2);
                for v in c.vars().iter() {
                    s.insert(from_old[v - 1].expect("used variable has a new index"));
                }
                Clause(s)
            })
            .collect();
        (MonotoneCnf { n: n2, clauses }, CompactionMap { to_old, from_old })
    }
}

impl fmt::Debug for MonotoneCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonotoneCnf(n={}, [", self.n)?;
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", c.vars())?;
        }
        write!(f, "])")
    }
}

/// Inclusion-minimal members of a list of sets: duplicates and supersets are
/// dropped, first occurrences of survivors keep their relative order.
pub fn minimize_sets(sets: &[VarSet]) -> Vec<VarSet> {
    let mut keep: Vec<VarSet> = Vec::new();
    'outer: for s in sets {
        let mut k = 0;
        while k < keep.len() {
            if keep[k].is_subset_of(s) {
                continue 'outer;
            }
            if s.is_subset_of(&keep[k]) {
                keep.remove(k);
            } else {
                k += 1;
            }
        }
        keep.push(s.clone());
    }
    keep
}

/// Condition the clauses of `delta_i` (each of which must contain the
/// variable at position `i`) on the partial assignment that sets the
/// positions of `t` below `i` to 1 and every other position `<= i` to 0.
///
/// Positions here mean: `delta_i` is assumed to be already relabeled so that
/// variable `j` *is* position `j` (see [`MonotoneCnf::relabel_to_positions`]).
/// Clauses hit by a 1 are satisfied and dropped; position `i` is falsified
/// and stripped; a clause stripped to nothing makes the whole conditioned
/// function constant 0.
pub fn delta_conditioned(delta_i: &MonotoneCnf, t: &Term, i: usize) -> Reduced {
    let prefix = t.vars().below(i);
    let mut kept: Vec<Clause> = Vec::new();
    for c in delta_i.clauses() {
        debug_assert!(c.vars().contains(i), "delta clause must contain position {i}");
        let mut reduced = c.vars().clone();
        reduced.remove(i);
        if !reduced.is_disjoint_from(&prefix) {
            continue; // satisfied by a 1 in the prefix
        }
        if reduced.is_empty() {
            return Reduced::ConstantZero;
        }
        kept.push(Clause(reduced));
    }
    Reduced::Cnf(MonotoneCnf { n: delta_i.n(), clauses: kept })
}
