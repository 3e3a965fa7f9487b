//! The symmetric duality check: recurse on the most frequent variable,
//! pairing each restriction of one side with the opposite restriction of
//! the other. Every negative answer carries a point where both functions
//! agree, which is verified before it is returned.

use super::{
    check_conditions_a, leaf_test, max_frequency_var, precheck_intersections, resolve_child,
    restrict_one_child, restrict_zero_child, split_at, transform_one, transform_zero,
    verify_witness, DualPair, DualityOutcome, FkError, LeafOutcome, ResolvedChild,
};

/// Shape of a finished run: how big the root was, how many nodes the tree
/// had, and the deepest the two recursion kinds ever nested.
#[derive(Debug, Clone, Default)]
pub struct AStats {
    pub root_volume: u64,
    pub nodes: u64,
    /// Depth in moves that restrict the frequent variable's own side.
    pub max_left_moves: usize,
    /// Depth in moves that restrict the opposite side.
    pub max_right_moves: usize,
}

/// Decide whether `pair.phi` and `pair.psi` are dual. A `NotDual` answer
/// has its witness re-verified at the root.
pub fn check_dual_a(pair: &DualPair) -> Result<(DualityOutcome, AStats), FkError> {
    let mut stats = AStats { root_volume: pair.volume(), ..AStats::default() };
    let out = a_node(pair, 0, 0, &mut stats)?;
    if let DualityOutcome::NotDual { witness } = &out {
        if !verify_witness(pair, witness) {
            return Err(FkError::Internal(
                "refutation witness failed verification at the root".into(),
            ));
        }
    }
    Ok((out, stats))
}

fn a_node(
    pair: &DualPair,
    left: usize,
    right: usize,
    stats: &mut AStats,
) -> Result<DualityOutcome, FkError> {
    stats.nodes += 1;
    stats.max_left_moves = stats.max_left_moves.max(left);
    stats.max_right_moves = stats.max_right_moves.max(right);
    if let Some(w) = precheck_intersections(pair) {
        return Ok(DualityOutcome::NotDual { witness: w });
    }
    if let Some(w) = check_conditions_a(pair)? {
        return Ok(DualityOutcome::NotDual { witness: w });
    }
    if pair.volume() <= 1 {
        return Ok(match leaf_test(pair)? {
            LeafOutcome::Dual => DualityOutcome::Dual,
            LeafOutcome::NotDual(w) => DualityOutcome::NotDual { witness: w },
        });
    }

    // split on the globally most frequent variable, orienting the pair so
    // that the frequent side sits on the left; child answers come back in
    // the working orientation and are complemented out of the swap at the
    // end
    let (x, from_psi) = max_frequency_var(pair);
    let work = if from_psi { pair.swapped() } else { pair.clone() };
    let n = work.n();
    let v = work.volume();
    let sp = split_at(&work, x);

    // x := 1 pairs the left side's survivors against the whole right side
    let (f, g) = restrict_one_child(&sp);
    let one = match resolve_child(n, f, g)? {
        ResolvedChild::Pair(child) => {
            debug_assert!(child.volume() < v);
            a_node(&child, left + 1, right, stats)?
        }
        ResolvedChild::Decided { dual: true, .. } => DualityOutcome::Dual,
        ResolvedChild::Decided { dual: false, witness } => DualityOutcome::NotDual {
            witness: witness.expect("non-dual decisions carry a witness"),
        },
    };
    if let DualityOutcome::NotDual { witness } = one {
        let w = transform_one(n, x).apply(&witness);
        return Ok(DualityOutcome::NotDual {
            witness: if from_psi { w.complement() } else { w },
        });
    }

    // x := 0 swaps the orientation: the right side's survivors lead
    let (f, g) = restrict_zero_child(&sp);
    let zero = match resolve_child(n, f, g)? {
        ResolvedChild::Pair(child) => {
            debug_assert!(child.volume() < v);
            a_node(&child, left, right + 1, stats)?
        }
        ResolvedChild::Decided { dual: true, .. } => DualityOutcome::Dual,
        ResolvedChild::Decided { dual: false, witness } => DualityOutcome::NotDual {
            witness: witness.expect("non-dual decisions carry a witness"),
        },
    };
    if let DualityOutcome::NotDual { witness } = zero {
        let w = transform_zero(n, x).apply(&witness);
        return Ok(DualityOutcome::NotDual {
            witness: if from_psi { w.complement() } else { w },
        });
    }
    Ok(DualityOutcome::Dual)
}
