//! The certificate-producing duality check. Nodes are classified by how
//! frequent the chosen split variable is: an infrequent side yields one
//! restriction child plus a family of "sibling" children indexed by the
//! other side's clauses, and a variable frequent on both sides yields two
//! restriction children chosen by a branch bit. Every negative answer is
//! replayable from the move sequence alone, because the classification is
//! a deterministic function of the pair.

use super::certificate::{Certificate, MoveLabel};
use super::{
    chi, lcheck, leaf_test, max_frequency_var, precheck_intersections, resolve_child,
    restrict_one_child, restrict_zero_child, sibling_child, split_at, transform_one,
    transform_sibling_low_phi, transform_sibling_low_psi, transform_zero, verify_witness,
    DualPair, FkError, LeafOutcome, MoveTransform, ResolvedChild,
};
use crate::cnf::Assignment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BOutcome {
    Dual,
    NotDual { witness: Assignment, certificate: Certificate },
}

/// Shape of a finished run: the root volume, the node count, and the
/// deepest each move kind ever nested on one path.
#[derive(Debug, Clone, Default)]
pub struct BStats {
    pub root_volume: u64,
    pub nodes: u64,
    pub max_a: usize,
    pub max_b: usize,
    pub max_c: usize,
}

enum NodeClass {
    Leaf,
    RuleI { x: usize },
    RuleII { x: usize },
    RuleIII { x: usize },
}

/// Deterministic node classification, shared between search and replay.
/// Non-leaves satisfy the intersection property and have at least three
/// clauses on each side, so every decomposition below is sound.
fn classify_b(pair: &DualPair) -> NodeClass {
    if lcheck(pair) || precheck_intersections(pair).is_some() {
        return NodeClass::Leaf;
    }
    let (x, _) = max_frequency_var(pair);
    let occurrences = |cnf: &crate::cnf::MonotoneCnf| {
        cnf.clauses().iter().filter(|c| c.vars().contains(x)).count()
    };
    let cf = occurrences(pair.phi());
    let cg = occurrences(pair.psi());
    let chi_v = chi(pair.volume() as f64);
    if (cf as f64) * chi_v <= pair.phi().len() as f64 {
        NodeClass::RuleI { x }
    } else if (cg as f64) * chi_v <= pair.psi().len() as f64 {
        NodeClass::RuleII { x }
    } else {
        NodeClass::RuleIII { x }
    }
}

struct BCtx {
    path: Vec<MoveLabel>,
    found: Option<Vec<MoveLabel>>,
    a: usize,
    b: usize,
    c: usize,
    stats: BStats,
}

/// Decide duality and, on a negative answer, return a verified witness
/// together with a certificate from which the witness can be re-derived.
pub fn check_dual_b(pair: &DualPair) -> Result<(BOutcome, BStats), FkError> {
    let mut ctx = BCtx {
        path: Vec::new(),
        found: None,
        a: 0,
        b: 0,
        c: 0,
        stats: BStats { root_volume: pair.volume(), ..BStats::default() },
    };
    match b_node(pair, &mut ctx)? {
        None => Ok((BOutcome::Dual, ctx.stats)),
        Some(witness) => {
            if !verify_witness(pair, &witness) {
                return Err(FkError::Internal(
                    "refutation witness failed verification at the root".into(),
                ));
            }
            let moves = ctx.found.take().expect("a refutation records its path");
            let certificate = Certificate::from_path(ctx.stats.root_volume, &moves);
            Ok((BOutcome::NotDual { witness, certificate }, ctx.stats))
        }
    }
}

/// Returns a refuting witness in this node's orientation, or `None` when
/// the subproblem is dual. The first refutation found freezes its move
/// path into `ctx.found`.
fn b_node(pair: &DualPair, ctx: &mut BCtx) -> Result<Option<Assignment>, FkError> {
    ctx.stats.nodes += 1;
    let n = pair.n();
    match classify_b(pair) {
        NodeClass::Leaf => match leaf_test(pair)? {
            LeafOutcome::Dual => Ok(None),
            LeafOutcome::NotDual(w) => {
                ctx.found = Some(ctx.path.clone());
                Ok(Some(w))
            }
        },
        NodeClass::RuleI { x } => {
            let v = pair.volume();
            let sp = split_at(pair, x);
            let (f, g) = restrict_one_child(&sp);
            if let Some(w) =
                descend(MoveLabel::A, resolve_child(n, f, g)?, transform_one(n, x), v, ctx)?
            {
                return Ok(Some(w));
            }
            for (i, cj) in sp.psi0.iter().enumerate() {
                let (f, g) = sibling_child(&sp.phi0, &sp.psi1, cj);
                if let Some(w) = descend(
                    MoveLabel::B((i + 1) as u64),
                    resolve_child(n, f, g)?,
                    transform_sibling_low_phi(n, x, cj),
                    v,
                    ctx,
                )? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        NodeClass::RuleII { x } => {
            let v = pair.volume();
            let sp = split_at(pair, x);
            let (f, g) = restrict_zero_child(&sp);
            if let Some(w) =
                descend(MoveLabel::A, resolve_child(n, f, g)?, transform_zero(n, x), v, ctx)?
            {
                return Ok(Some(w));
            }
            for (i, cj) in sp.phi0.iter().enumerate() {
                let (f, g) = sibling_child(&sp.psi0, &sp.phi1, cj);
                if let Some(w) = descend(
                    MoveLabel::B((i + 1) as u64),
                    resolve_child(n, f, g)?,
                    transform_sibling_low_psi(n, x, cj),
                    v,
                    ctx,
                )? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        NodeClass::RuleIII { x } => {
            let v = pair.volume();
            let sp = split_at(pair, x);
            let (f, g) = restrict_one_child(&sp);
            if let Some(w) = descend(
                MoveLabel::C(false),
                resolve_child(n, f, g)?,
                transform_one(n, x),
                v,
                ctx,
            )? {
                return Ok(Some(w));
            }
            let (f, g) = restrict_zero_child(&sp);
            if let Some(w) = descend(
                MoveLabel::C(true),
                resolve_child(n, f, g)?,
                transform_zero(n, x),
                v,
                ctx,
            )? {
                return Ok(Some(w));
            }
            Ok(None)
        }
    }
}

/// Run one child: bump the move counters, record the label on the path,
/// recurse (or take the decided answer), and lift any witness through the
/// child's transform into the parent's orientation.
fn descend(
    label: MoveLabel,
    child: ResolvedChild,
    t: MoveTransform,
    parent_volume: u64,
    ctx: &mut BCtx,
) -> Result<Option<Assignment>, FkError> {
    match label {
        MoveLabel::A => {
            ctx.a += 1;
            ctx.stats.max_a = ctx.stats.max_a.max(ctx.a);
        }
        MoveLabel::B(_) => {
            ctx.b += 1;
            ctx.stats.max_b = ctx.stats.max_b.max(ctx.b);
        }
        MoveLabel::C(_) => {
            ctx.c += 1;
            ctx.stats.max_c = ctx.stats.max_c.max(ctx.c);
        }
    }
    ctx.path.push(label);
    let raw = match child {
        ResolvedChild::Decided { dual: true, .. } => None,
        ResolvedChild::Decided { dual: false, witness } => {
            ctx.found = Some(ctx.path.clone());
            Some(witness.expect("non-dual decisions carry a witness"))
        }
        ResolvedChild::Pair(p) => {
            match label {
                // restriction children drop at least one clause
                MoveLabel::A => debug_assert!(p.volume() < parent_volume),
                // sibling children keep at most a 1/chi <= 1/2 fraction
                MoveLabel::B(_) => debug_assert!(2 * p.volume() <= parent_volume),
                // branch children shrink by a (1 - 1/chi) factor
                MoveLabel::C(_) => debug_assert!(
                    p.volume() as f64
                        <= (1.0 - 1.0 / chi(parent_volume as f64)) * parent_volume as f64
                            + 1e-6
                ),
            }
            b_node(&p, ctx)?
        }
    };
    ctx.path.pop();
    match label {
        MoveLabel::A => ctx.a -= 1,
        MoveLabel::B(_) => ctx.b -= 1,
        MoveLabel::C(_) => ctx.c -= 1,
    }
    Ok(raw.map(|w| t.apply(&w)))
}

/// Result of replaying a certificate against a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOutcome {
    /// The moves lead to a refuted leaf; the recovered witness is verified.
    Confirmed { witness: Assignment, moves: usize },
    /// The moves are well-formed but lead to a dual leaf, so the
    /// certificate fails to establish non-duality.
    Refuted,
    /// The moves do not fit the pair's deterministic node structure.
    Invalid { reason: String },
}

/// Reads the certificate as two pools per block: a count of `a`-moves and
/// a sequence of branch bits. The node rules decide which pool each step
/// draws from, so no interleaving needs to be stored.
struct Cursor<'a> {
    a_rem: u64,
    g: &'a [bool],
    g_idx: usize,
    rest: &'a [(u64, super::certificate::AcBlock)],
    rest_idx: usize,
}

impl<'a> Cursor<'a> {
    fn new(cert: &'a Certificate) -> Self {
        Cursor {
            a_rem: cert.lead.a_count,
            g: &cert.lead.choices,
            g_idx: 0,
            rest: &cert.rest,
            rest_idx: 0,
        }
    }

    fn take_a(&mut self) -> bool {
        if self.a_rem > 0 {
            self.a_rem -= 1;
            true
        } else {
            false
        }
    }

    fn take_g(&mut self) -> Option<bool> {
        if self.g_idx < self.g.len() {
            self.g_idx += 1;
            Some(self.g[self.g_idx - 1])
        } else {
            None
        }
    }

    fn block_done(&self) -> bool {
        self.a_rem == 0 && self.g_idx == self.g.len()
    }

    fn next_block(&mut self) -> Option<u64> {
        if self.rest_idx < self.rest.len() {
            let (j, b) = &self.rest[self.rest_idx];
            self.rest_idx += 1;
            self.a_rem = b.a_count;
            self.g = &b.choices;
            self.g_idx = 0;
            Some(*j)
        } else {
            None
        }
    }

    fn fully_done(&self) -> bool {
        self.block_done() && self.rest_idx == self.rest.len()
    }
}

enum Step {
    Confirmed(Assignment),
    Refuted,
    Invalid(String),
}

/// Re-walk the moves against the pair. Every move kind is checked against
/// the recomputed node rule, so a certificate for a different pair (or a
/// tampered one) is rejected as invalid rather than trusted; a witness is
/// only ever reconstructed from a leaf the replay itself decided, and is
/// re-verified at the root.
pub fn replay_certificate(
    pair: &DualPair,
    cert: &Certificate,
) -> Result<ReplayOutcome, FkError> {
    if cert.root_volume != pair.volume() {
        return Ok(ReplayOutcome::Invalid {
            reason: format!(
                "root volume {} does not match the pair's {}",
                cert.root_volume,
                pair.volume()
            ),
        });
    }
    let mut cursor = Cursor::new(cert);
    let mut moves = 0usize;
    match replay_node(pair, &mut cursor, &mut moves)? {
        Step::Confirmed(witness) => {
            if !verify_witness(pair, &witness) {
                return Err(FkError::Internal(
                    "replayed witness failed verification at the root".into(),
                ));
            }
            Ok(ReplayOutcome::Confirmed { witness, moves })
        }
        Step::Refuted => Ok(ReplayOutcome::Refuted),
        Step::Invalid(reason) => Ok(ReplayOutcome::Invalid { reason }),
    }
}

fn replay_node(pair: &DualPair, cur: &mut Cursor, moves: &mut usize) -> Result<Step, FkError> {
    let n = pair.n();
    match classify_b(pair) {
        NodeClass::Leaf => {
            if !cur.fully_done() {
                return Ok(Step::Invalid("certificate continues past a leaf".into()));
            }
            match leaf_test(pair)? {
                LeafOutcome::NotDual(w) => Ok(Step::Confirmed(w)),
                LeafOutcome::Dual => Ok(Step::Refuted),
            }
        }
        NodeClass::RuleI { x } => {
            let sp = split_at(pair, x);
            if cur.take_a() {
                *moves += 1;
                let (f, g) = restrict_one_child(&sp);
                return replay_child(resolve_child(n, f, g)?, transform_one(n, x), cur, moves);
            }
            if !cur.block_done() {
                return Ok(Step::Invalid(
                    "branch choice where an a-move is required".into(),
                ));
            }
            match cur.next_block() {
                Some(j) => {
                    *moves += 1;
                    if j == 0 || j as usize > sp.psi0.len() {
                        return Ok(Step::Invalid(format!("sibling index {j} out of range")));
                    }
                    let cj = &sp.psi0[j as usize - 1];
                    let (f, g) = sibling_child(&sp.phi0, &sp.psi1, cj);
                    replay_child(
                        resolve_child(n, f, g)?,
                        transform_sibling_low_phi(n, x, cj),
                        cur,
                        moves,
                    )
                }
                None => Ok(Step::Invalid("certificate ends at an internal node".into())),
            }
        }
        NodeClass::RuleII { x } => {
            let sp = split_at(pair, x);
            if cur.take_a() {
                *moves += 1;
                let (f, g) = restrict_zero_child(&sp);
                return replay_child(resolve_child(n, f, g)?, transform_zero(n, x), cur, moves);
            }
            if !cur.block_done() {
                return Ok(Step::Invalid(
                    "branch choice where an a-move is required".into(),
                ));
            }
            match cur.next_block() {
                Some(j) => {
                    *moves += 1;
                    if j == 0 || j as usize > sp.phi0.len() {
                        return Ok(Step::Invalid(format!("sibling index {j} out of range")));
                    }
                    let cj = &sp.phi0[j as usize - 1];
                    let (f, g) = sibling_child(&sp.psi0, &sp.phi1, cj);
                    replay_child(
                        resolve_child(n, f, g)?,
                        transform_sibling_low_psi(n, x, cj),
                        cur,
                        moves,
                    )
                }
                None => Ok(Step::Invalid("certificate ends at an internal node".into())),
            }
        }
        NodeClass::RuleIII { x } => match cur.take_g() {
            Some(bit) => {
                *moves += 1;
                let sp = split_at(pair, x);
                if bit {
                    let (f, g) = restrict_zero_child(&sp);
                    replay_child(resolve_child(n, f, g)?, transform_zero(n, x), cur, moves)
                } else {
                    let (f, g) = restrict_one_child(&sp);
                    replay_child(resolve_child(n, f, g)?, transform_one(n, x), cur, moves)
                }
            }
            None => Ok(Step::Invalid("no branch choice at a branching node".into())),
        },
    }
}

fn replay_child(
    child: ResolvedChild,
    t: MoveTransform,
    cur: &mut Cursor,
    moves: &mut usize,
) -> Result<Step, FkError> {
    let step = match child {
        ResolvedChild::Pair(p) => replay_node(&p, cur, moves)?,
        ResolvedChild::Decided { dual: false, witness } => {
            if cur.fully_done() {
                Step::Confirmed(witness.expect("non-dual decisions carry a witness"))
            } else {
                Step::Invalid("certificate continues past a decided leaf".into())
            }
        }
        ResolvedChild::Decided { dual: true, .. } => {
            if cur.fully_done() {
                Step::Refuted
            } else {
                Step::Invalid("certificate continues past a decided leaf".into())
            }
        }
    };
    Ok(match step {
        Step::Confirmed(w) => Step::Confirmed(t.apply(&w)),
        other => other,
    })
}
