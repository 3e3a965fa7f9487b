//! Brute-force reference implementations for cross-checking.
//!
//! Everything here enumerates subsets, points, or permutations exhaustively
//! and is guarded by hard size caps; these functions define the ground truth
//! that the real algorithms are tested against.

use crate::cnf::{Assignment, MonotoneCnf, Term};
use crate::fk::DualPair;
use crate::varset::VarSet;
use itertools::Itertools;
use thiserror::Error;

/// Largest universe accepted by the subset/point-enumeration oracles.
pub const MAX_BRUTE_VARS: usize = 20;
/// Largest universe accepted by the permutation-enumeration oracle.
pub const MAX_BRUTE_FACTORIAL_VARS: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to {max} variables, got {n}")]
    TooManyVariables { n: usize, max: usize },
}

fn check_n(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooManyVariables { n, max })
    } else {
        Ok(())
    }
}

fn clause_masks(cnf: &MonotoneCnf) -> Vec<u32> {
    cnf.clauses()
        .iter()
        .map(|c| c.vars().iter().fold(0u32, |m, v| m | 1 << (v - 1)))
        .collect()
}

fn mask_to_term(n: usize, mask: u32) -> Term {
    let vars: Vec<usize> = (1..=n).filter(|v| mask & (1 << (v - 1)) != 0).collect();
    Term::new(VarSet::from_vars(n, &vars))
}

/// All minimal transversals of the clause hypergraph, by subset enumeration
/// in ascending cardinality (ties in lexicographic combination order).
pub fn brute_transversals(cnf: &MonotoneCnf) -> Result<Vec<Term>, OracleError> {
    let n = cnf.n();
    check_n(n, MAX_BRUTE_VARS)?;
    let clauses = clause_masks(cnf);
    let mut found_masks: Vec<u32> = Vec::new();
    for size in 0..=n {
        for combo in (1..=n).combinations(size) {
            let mask = combo.iter().fold(0u32, |m, v| m | 1 << (v - 1));
            if clauses.iter().any(|&c| c & mask == 0) {
                continue; // not a transversal
            }
            if found_masks.iter().any(|&f| f & mask == f) {
                continue; // contains a smaller transversal
            }
            found_masks.push(mask);
        }
    }
    Ok(found_masks.into_iter().map(|m| mask_to_term(n, m)).collect())
}

/// Exhaustive duality check: returns the first point `w` (in ascending order
/// of the integer whose bit `i-1` is `w_i`, so variable 1 is the low bit)
/// where `f(w) = g(complement(w))`, i.e. a witness that the pair is not
/// dual; `None` means the pair is dual.
pub fn brute_dual_check(pair: &DualPair) -> Result<Option<Assignment>, OracleError> {
    let n = pair.n();
    check_n(n, MAX_BRUTE_VARS)?;
    let phi = clause_masks(pair.phi());
    let psi = clause_masks(pair.psi());
    let all = (1u32 << n) - 1;
    for w in 0..=all {
        let f = phi.iter().all(|&c| c & w != 0);
        let g = psi.iter().all(|&c| c & (all & !w) != 0);
        if f == g {
            return Ok(Some(Assignment::from_true_set(mask_to_term(n, w).into_vars())));
        }
    }
    Ok(None)
}

/// Exact degeneracy: the minimum over all variable orderings of the largest
/// clause group `delta^i`, by enumerating every permutation.
pub fn brute_degeneracy(cnf: &MonotoneCnf) -> Result<usize, OracleError> {
    let n = cnf.n();
    check_n(n, MAX_BRUTE_FACTORIAL_VARS)?;
    if cnf.is_empty() {
        return Ok(0);
    }
    let mut best = usize::MAX;
    let clause_vars: Vec<Vec<usize>> =
        cnf.clauses().iter().map(|c| c.vars().to_vec()).collect();
    for perm in (1..=n).permutations(n) {
        let mut pos = vec![0usize; n + 1];
        for (p, &v) in perm.iter().enumerate() {
            pos[v] = p + 1;
        }
        let mut count = vec![0usize; n + 1];
        for vars in &clause_vars {
            let maxpos = vars.iter().map(|&v| pos[v]).max().unwrap();
            count[maxpos] += 1;
        }
        let k = count.iter().copied().max().unwrap();
        best = best.min(k);
        if best == 1 {
            break; // cannot do better on a nonempty CNF
        }
    }
    Ok(best)
}

/// Every prime monotone CNF over `1..=n`: one CNF per antichain of
/// nonempty clauses, the empty (constant-1) CNF included. The counts are
/// the Dedekind numbers less the constant-0 function (19 for `n = 3`,
/// 167 for `n = 4`), so the universe is capped at 4.
pub fn all_prime_cnfs(n: usize) -> Vec<MonotoneCnf> {
    assert!(n <= 4, "antichain enumeration is doubly exponential in n");
    let subsets: Vec<u32> = (1..1u32 << n).collect();
    let mut out = Vec::new();
    'family: for fam in 0u32..1 << subsets.len() {
        let members: Vec<u32> = subsets
            .iter()
            .enumerate()
            .filter(|&(i, _)| fam >> i & 1 == 1)
            .map(|(_, &m)| m)
            .collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if a & b == a || a & b == b {
                    continue 'family; // one clause contains the other
                }
            }
        }
        let sets: Vec<VarSet> = members
            .iter()
            .map(|&m| {
                let vars: Vec<usize> = (1..=n).filter(|v| m >> (v - 1) & 1 == 1).collect();
                VarSet::from_vars(n, &vars)
            })
            .collect();
        out.push(MonotoneCnf::from_sets_minimized(n, sets).unwrap());
    }
    out
}
