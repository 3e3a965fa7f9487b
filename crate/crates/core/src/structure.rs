//! Structural analysis: degeneracy orderings, GYO reduction, incidence
//! graphs, tree decompositions, and the ordering chooser built on them.

use crate::cnf::{MonotoneCnf, VariableOrdering};
use crate::varset::VarSet;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("replay step {step} is illegal: {reason}")]
    IllegalStep { step: usize, reason: String },
    #[error("GYO reduction failed; the CNF is not alpha-acyclic")]
    GyoFailed,
    #[error("trace does not remove every variable exactly once")]
    IncompleteTrace,
    #[error("invalid tree decomposition: {reason}")]
    InvalidDecomposition { reason: String },
    #[error("expected a {expected:?} decomposition, found {found:?}")]
    WrongKind { expected: TdKind, found: TdKind },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A variable ordering with its clause-group profile: `profile[i-1]` counts
/// the clauses whose maximum position is `i`, and `k` is the largest count.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub ordering: VariableOrdering,
    pub k: usize,
    pub profile: Vec<usize>,
}

/// Number of clauses whose maximum position under `ord` is `i`, for each
/// position `i`.
pub fn delta_profile(cnf: &MonotoneCnf, ord: &VariableOrdering) -> Vec<usize> {
    let mut prof = vec![0usize; cnf.n()];
    for c in cnf.clauses() {
        let mp = c.vars().iter().map(|v| ord.position_of(v)).max().expect("nonempty clause");
        prof[mp - 1] += 1;
    }
    prof
}

/// Largest number of clauses any one variable occurs in (0 when there are
/// no clauses).
pub fn read_number(cnf: &MonotoneCnf) -> usize {
    let mut occ = vec![0usize; cnf.n() + 1];
    for c in cnf.clauses() {
        for v in c.vars().iter() {
            occ[v] += 1;
        }
    }
    occ.into_iter().max().unwrap_or(0)
}

/// Smallest-last ordering: repeatedly place, at the latest unfilled
/// position, a variable contained in the fewest clauses that survive on the
/// still-unplaced variables (ties to the smallest index). The resulting `k`
/// is exactly the degeneracy of the clause hypergraph.
pub fn smallest_last_ordering(cnf: &MonotoneCnf) -> DegeneracyReport {
    let n = cnf.n();
    let mut alive = VarSet::full(n);
    let mut order = vec![0usize; n];
    for i in (1..=n).rev() {
        let mut best: Option<(usize, usize)> = None; // (count, var)
        for v in alive.iter() {
            let count = cnf
                .clauses()
                .iter()
                .filter(|c| c.vars().contains(v) && c.vars().is_subset_of(&alive))
                .count();
            if best.is_none_or(|(bc, _)| count < bc) {
                best = Some((count, v));
            }
        }
        let (_, v) = best.expect("alive set is nonempty");
        order[i - 1] = v;
        alive.remove(v);
    }
    let ordering = VariableOrdering::new(order).expect("constructed a permutation");
    let profile = delta_profile(cnf, &ordering);
    let k = profile.iter().copied().max().unwrap_or(0);
    DegeneracyReport { ordering, k, profile }
}

/// One step of a GYO reduction, naming clauses by their 1-based input index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GyoStep {
    /// The variable occurred in exactly this one clause and was deleted
    /// from it.
    RemoveVariable { var: usize, clause: usize },
    /// The clause's remaining variables were contained in another live
    /// clause, so the clause was deleted.
    RemoveClause { clause: usize, subsumed_by: usize },
}

/// Record of a GYO reduction run; `success` means the run ended in a single
/// empty clause, i.e. the CNF is alpha-acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GyoTrace {
    pub steps: Vec<GyoStep>,
    pub success: bool,
}

/// Run GYO reduction to exhaustion with a deterministic schedule: always
/// delete the lowest-indexed variable occurring in exactly one live clause;
/// when no such variable exists, delete the first live clause contained in
/// another live clause (the container with the lowest index). The CNF is
/// alpha-acyclic exactly when the run succeeds; a CNF without clauses does
/// not succeed.
pub fn gyo_reduce(cnf: &MonotoneCnf) -> GyoTrace {
    let n = cnf.n();
    let mut live: Vec<Option<VarSet>> =
        cnf.clauses().iter().map(|c| Some(c.vars().clone())).collect();
    let mut occ = vec![0usize; n + 1];
    for c in live.iter().flatten() {
        for v in c.iter() {
            occ[v] += 1;
        }
    }
    let mut steps = Vec::new();
    loop {
        if let Some(v) = (1..=n).find(|&v| occ[v] == 1) {
            let ci = live
                .iter()
                .position(|c| c.as_ref().is_some_and(|c| c.contains(v)))
                .expect("occurrence count says the variable is live");
            live[ci].as_mut().unwrap().remove(v);
            occ[v] = 0;
            steps.push(GyoStep::RemoveVariable { var: v, clause: ci + 1 });
            continue;
        }
        let ids: Vec<usize> = (0..live.len()).filter(|&i| live[i].is_some()).collect();
        let mut removed = None;
        'search: for &a in &ids {
            for &b in &ids {
                if a != b && live[a].as_ref().unwrap().is_subset_of(live[b].as_ref().unwrap()) {
                    removed = Some((a, b));
                    break 'search;
                }
            }
        }
        let Some((a, b)) = removed else { break };
        for v in live[a].as_ref().unwrap().clone().iter() {
            occ[v] -= 1;
        }
        live[a] = None;
        steps.push(GyoStep::RemoveClause { clause: a + 1, subsumed_by: b + 1 });
    }
    let rest: Vec<&VarSet> = live.iter().flatten().collect();
    let success = rest.len() == 1 && rest[0].is_empty();
    GyoTrace { steps, success }
}

/// Replay a sequence of GYO steps against `cnf`, checking each for
/// legality; returns whether the end state is a single empty clause.
pub fn replay_gyo(cnf: &MonotoneCnf, steps: &[GyoStep]) -> Result<bool, StructureError> {
    let n = cnf.n();
    let m = cnf.len();
    let mut live: Vec<Option<VarSet>> =
        cnf.clauses().iter().map(|c| Some(c.vars().clone())).collect();
    let mut occ = vec![0usize; n + 1];
    for c in live.iter().flatten() {
        for v in c.iter() {
            occ[v] += 1;
        }
    }
    let illegal = |step: usize, reason: String| StructureError::IllegalStep { step, reason };
    for (k, step) in steps.iter().enumerate() {
        match *step {
            GyoStep::RemoveVariable { var, clause } => {
                if clause == 0 || clause > m || live[clause - 1].is_none() {
                    return Err(illegal(k, format!("clause {clause} is not live")));
                }
                if var == 0 || var > n {
                    return Err(illegal(k, format!("variable x{var} out of range")));
                }
                if !live[clause - 1].as_ref().unwrap().contains(var) {
                    return Err(illegal(k, format!("x{var} not in clause {clause}")));
                }
                if occ[var] != 1 {
                    return Err(illegal(k, format!("x{var} occurs in {} clauses", occ[var])));
                }
                live[clause - 1].as_mut().unwrap().remove(var);
                occ[var] = 0;
            }
            GyoStep::RemoveClause { clause, subsumed_by } => {
                if clause == 0 || clause > m || live[clause - 1].is_none() {
                    return Err(illegal(k, format!("clause {clause} is not live")));
                }
                if subsumed_by == 0 || subsumed_by > m || live[subsumed_by - 1].is_none() {
                    return Err(illegal(k, format!("clause {subsumed_by} is not live")));
                }
                if clause == subsumed_by {
                    return Err(illegal(k, "a clause cannot subsume itself".into()));
                }
                let a = live[clause - 1].as_ref().unwrap();
                let b = live[subsumed_by - 1].as_ref().unwrap();
                if !a.is_subset_of(b) {
                    return Err(illegal(
                        k,
                        format!("clause {clause} is not contained in clause {subsumed_by}"),
                    ));
                }
                for v in a.clone().iter() {
                    occ[v] -= 1;
                }
                live[clause - 1] = None;
            }
        }
    }
    let rest: Vec<&VarSet> = live.iter().flatten().collect();
    Ok(rest.len() == 1 && rest[0].is_empty())
}

/// The elimination ordering of a successful GYO run: the variable removed
/// last is placed first. Under this ordering every position's clause group
/// has at most one clause.
pub fn ordering_from_gyo(trace: &GyoTrace, n: usize) -> Result<VariableOrdering, StructureError> {
    if !trace.success {
        return Err(StructureError::GyoFailed);
    }
    let removed: Vec<usize> = trace
        .steps
        .iter()
        .filter_map(|s| match *s {
            GyoStep::RemoveVariable { var, .. } => Some(var),
            GyoStep::RemoveClause { .. } => None,
        })
        .collect();
    if removed.len() != n {
        return Err(StructureError::IncompleteTrace);
    }
    let order: Vec<usize> = removed.into_iter().rev().collect();
    VariableOrdering::new(order).map_err(|_| StructureError::IncompleteTrace)
}

/// Bipartite incidence graph: one vertex per variable, one per clause, an
/// edge for each literal occurrence. Variables are vertices `0..n_vars`;
/// clause `j` (1-based) is vertex `n_vars + j - 1`.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    pub n_vars: usize,
    pub n_clauses: usize,
    adj: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    pub fn vertex_count(&self) -> usize {
        self.n_vars + self.n_clauses
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn var_vertex(&self, v: usize) -> usize {
        v - 1
    }

    pub fn clause_vertex(&self, j: usize) -> usize {
        self.n_vars + j - 1
    }

    /// The decomposition-vertex name of graph vertex `u`.
    pub fn vertex_name(&self, u: usize) -> TdVertex {
        if u < self.n_vars {
            TdVertex::Var(u + 1)
        } else {
            TdVertex::ClauseNode(u - self.n_vars + 1)
        }
    }
}

pub fn incidence_graph(cnf: &MonotoneCnf) -> IncidenceGraph {
    let n = cnf.n();
    let m = cnf.len();
    let mut adj = vec![Vec::new(); n + m];
    for (j, c) in cnf.clauses().iter().enumerate() {
        for v in c.vars().iter() {
            adj[v - 1].push(n + j);
            adj[n + j].push(v - 1);
        }
    }
    IncidenceGraph { n_vars: n, n_clauses: m, adj }
}

/// A vertex of a tree decomposition's bags: a variable or a clause node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TdVertex {
    Var(usize),
    ClauseNode(usize),
}

impl fmt::Display for TdVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdVertex::Var(v) => write!(f, "{v}"),
            TdVertex::ClauseNode(j) => write!(f, "c{j}"),
        }
    }
}

/// Which object a decomposition covers: the variables with whole clauses
/// inside bags (type I), or the bipartite incidence graph (type II).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdKind {
    TypeI,
    TypeII,
}

/// A tree decomposition: nodes `0..bags.len()` with their bags, connected
/// by `bags.len() - 1` tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub kind: TdKind,
    pub bags: Vec<BTreeSet<TdVertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

fn check_tree(td: &TreeDecomposition) -> Result<Vec<Vec<usize>>, StructureError> {
    let nn = td.bags.len();
    let fail = |reason: String| StructureError::InvalidDecomposition { reason };
    if nn == 0 {
        return Err(fail("no nodes".into()));
    }
    if td.edges.len() != nn - 1 {
        return Err(fail(format!("{} edges for {} nodes", td.edges.len(), nn)));
    }
    let mut adj = vec![Vec::new(); nn];
    for &(u, v) in &td.edges {
        if u >= nn || v >= nn || u == v {
            return Err(fail(format!("bad edge ({u}, {v})")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    // nn-1 edges + connected => a tree
    let mut seen = vec![false; nn];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(fail("tree is disconnected".into()));
    }
    Ok(adj)
}

fn check_vertex_subtrees(
    td: &TreeDecomposition,
    adj: &[Vec<usize>],
) -> Result<(), StructureError> {
    let mut vertices: BTreeSet<TdVertex> = BTreeSet::new();
    for bag in &td.bags {
        vertices.extend(bag.iter().copied());
    }
    for &x in &vertices {
        let holders: Vec<usize> =
            (0..td.bags.len()).filter(|&i| td.bags[i].contains(&x)).collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![holders[0]];
        seen.insert(holders[0]);
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if td.bags[v].contains(&x) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        if seen.len() != holders.len() {
            return Err(StructureError::InvalidDecomposition {
                reason: format!("bags containing {x} are not connected"),
            });
        }
    }
    Ok(())
}

/// Validate `td` against `cnf`. Type I: bags hold variables, every used
/// variable appears, every clause fits inside some bag, and each variable's
/// bags form a subtree. Type II: bags hold variables and clause nodes,
/// every used variable and every clause node appears, every literal
/// occurrence `(x, c)` is covered by some bag, and each vertex's bags form
/// a subtree.
pub fn validate_td(td: &TreeDecomposition, cnf: &MonotoneCnf) -> Result<(), StructureError> {
    let adj = check_tree(td)?;
    let fail = |reason: String| StructureError::InvalidDecomposition { reason };
    let mut covered: BTreeSet<TdVertex> = BTreeSet::new();
    for bag in &td.bags {
        for &x in bag {
            match x {
                TdVertex::Var(v) if v >= 1 && v <= cnf.n() => {}
                TdVertex::ClauseNode(j) if td.kind == TdKind::TypeII && j >= 1 && j <= cnf.len() => {}
                other => return Err(fail(format!("vertex {other} does not belong here"))),
            }
            covered.insert(x);
        }
    }
    let used = cnf.variables();
    for v in used.iter() {
        if !covered.contains(&TdVertex::Var(v)) {
            return Err(fail(format!("variable {v} is in no bag")));
        }
    }
    match td.kind {
        TdKind::TypeI => {
            for (j, c) in cnf.clauses().iter().enumerate() {
                let inside = td.bags.iter().any(|bag| {
                    c.vars().iter().all(|v| bag.contains(&TdVertex::Var(v)))
                });
                if !inside {
                    return Err(fail(format!("clause {} fits in no bag", j + 1)));
                }
            }
        }
        TdKind::TypeII => {
            for j in 1..=cnf.len() {
                if !covered.contains(&TdVertex::ClauseNode(j)) {
                    return Err(fail(format!("clause node c{j} is in no bag")));
                }
            }
            for (j, c) in cnf.clauses().iter().enumerate() {
                for v in c.vars().iter() {
                    let ok = td.bags.iter().any(|bag| {
                        bag.contains(&TdVertex::Var(v))
                            && bag.contains(&TdVertex::ClauseNode(j + 1))
                    });
                    if !ok {
                        return Err(fail(format!("edge (x{v}, c{}) is uncovered", j + 1)));
                    }
                }
            }
        }
    }
    check_vertex_subtrees(td, &adj)
}

/// Convert a type-I decomposition to type II by adding each clause's node
/// to every bag that contains the whole clause. Width grows by at most
/// `2^(w+1)` where `w` is the input width.
pub fn td1_to_td2(
    td: &TreeDecomposition,
    cnf: &MonotoneCnf,
) -> Result<TreeDecomposition, StructureError> {
    if td.kind != TdKind::TypeI {
        return Err(StructureError::WrongKind { expected: TdKind::TypeI, found: td.kind });
    }
    validate_td(td, cnf)?;
    let mut bags = td.bags.clone();
    for (j, c) in cnf.clauses().iter().enumerate() {
        for (i, bag) in td.bags.iter().enumerate() {
            if c.vars().iter().all(|v| bag.contains(&TdVertex::Var(v))) {
                bags[i].insert(TdVertex::ClauseNode(j + 1));
            }
        }
    }
    let out = TreeDecomposition { kind: TdKind::TypeII, bags, edges: td.edges.clone() };
    validate_td(&out, cnf)?;
    Ok(out)
}

/// Min-fill elimination heuristic: a type-II tree decomposition of the
/// incidence graph. At each step the vertex whose neighborhood needs the
/// fewest fill edges is eliminated (ties to the lowest vertex id), its bag
/// is itself plus its current neighbors, and its node hangs off the bag of
/// its earliest-eliminated neighbor.
pub fn heuristic_td(graph: &IncidenceGraph) -> TreeDecomposition {
    let nv = graph.vertex_count();
    if nv == 0 {
        return TreeDecomposition {
            kind: TdKind::TypeII,
            bags: vec![BTreeSet::new()],
            edges: Vec::new(),
        };
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..nv)
        .map(|u| graph.neighbors(u).iter().copied().collect())
        .collect();
    let mut alive = vec![true; nv];
    let mut elim_step = vec![0usize; nv];
    let mut bags: Vec<BTreeSet<TdVertex>> = Vec::with_capacity(nv);
    let mut recorded_neighbors: Vec<Vec<usize>> = Vec::with_capacity(nv);
    for step in 0..nv {
        let mut best: Option<(usize, usize)> = None; // (fill, vertex)
        for u in 0..nv {
            if !alive[u] {
                continue;
            }
            let neigh: Vec<usize> = adj[u].iter().copied().collect();
            let mut fill = 0;
            for (a_idx, &a) in neigh.iter().enumerate() {
                for &b in &neigh[a_idx + 1..] {
                    if !adj[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if best.is_none_or(|(bf, _)| fill < bf) {
                best = Some((fill, u));
            }
        }
        let (_, u) = best.expect("some vertex is alive");
        let neigh: Vec<usize> = adj[u].iter().copied().collect();
        let mut bag: BTreeSet<TdVertex> = BTreeSet::new();
        bag.insert(graph.vertex_name(u));
        for &w in &neigh {
            bag.insert(graph.vertex_name(w));
        }
        bags.push(bag);
        recorded_neighbors.push(neigh.clone());
        elim_step[u] = step;
        for (a_idx, &a) in neigh.iter().enumerate() {
            for &b in &neigh[a_idx + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &w in &neigh {
            adj[w].remove(&u);
        }
        alive[u] = false;
        adj[u].clear();
    }
    let mut edges = Vec::with_capacity(nv - 1);
    for step in 0..nv {
        if let Some(&parent) = recorded_neighbors[step]
            .iter()
            .min_by_key(|&&w| elim_step[w])
        {
            edges.push((step, elim_step[parent]));
        } else if step + 1 < nv {
            edges.push((step, step + 1)); // isolated vertex: chain onward
        }
    }
    TreeDecomposition { kind: TdKind::TypeII, bags, edges }
}

/// Peel a type-II decomposition into a variable ordering. Repeatedly take
/// the lowest-numbered leaf node; the variables private to its bag (absent
/// from its neighbor's) are placed at the latest unfilled positions,
/// smallest variable last; clause nodes touching a placed variable vanish
/// everywhere; a bag with nothing private left is deleted. Variables of the
/// universe that appear in no bag (unused in `cnf`) fill the earliest
/// positions in ascending order.
pub fn ordering_from_td2(
    td: &TreeDecomposition,
    cnf: &MonotoneCnf,
) -> Result<VariableOrdering, StructureError> {
    if td.kind != TdKind::TypeII {
        return Err(StructureError::WrongKind { expected: TdKind::TypeII, found: td.kind });
    }
    validate_td(td, cnf)?;
    let nn = td.bags.len();
    let n = cnf.n();
    let mut bags = td.bags.clone();
    let mut adj = vec![BTreeSet::new(); nn];
    for &(u, v) in &td.edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive = vec![true; nn];
    let mut alive_count = nn;
    let mut placed = VarSet::empty(n);
    let mut slots: Vec<usize> = Vec::with_capacity(n); // positions n, n-1, ...
    while alive_count > 0 {
        let w = (0..nn)
            .find(|&u| alive[u] && adj[u].len() <= 1)
            .expect("a tree always has a leaf");
        let parent = adj[w].iter().copied().next();
        let private_vars: Vec<usize> = bags[w]
            .iter()
            .filter_map(|&x| match x {
                TdVertex::Var(v)
                    if parent.is_none_or(|p| !bags[p].contains(&TdVertex::Var(v))) =>
                {
                    Some(v)
                }
                _ => None,
            })
            .collect();
        if private_vars.is_empty() {
            alive[w] = false;
            alive_count -= 1;
            if let Some(p) = parent {
                adj[p].remove(&w);
            }
            adj[w].clear();
            continue;
        }
        // ascending private variables fill descending positions
        for &v in &private_vars {
            slots.push(v);
            placed.insert(v);
            bags[w].remove(&TdVertex::Var(v));
        }
        // clause nodes touching a placed variable are finished everywhere
        let mut dead_clauses: Vec<usize> = Vec::new();
        for (j, c) in cnf.clauses().iter().enumerate() {
            if private_vars.iter().any(|&v| c.vars().contains(v)) {
                dead_clauses.push(j + 1);
            }
        }
        for bag in bags.iter_mut() {
            for &j in &dead_clauses {
                bag.remove(&TdVertex::ClauseNode(j));
            }
        }
    }
    // unused variables (never in a bag) take the earliest positions
    let mut order: Vec<usize> = (1..=n).filter(|&v| !placed.contains(v)).collect();
    order.extend(slots.into_iter().rev());
    VariableOrdering::new(order).map_err(|_| StructureError::InvalidDecomposition {
        reason: "peeling did not place every variable exactly once".into(),
    })
}

/// Which structural route produced the chosen ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingSource {
    GyoElimination,
    SmallestLast,
    TreeDecomposition,
}

impl fmt::Display for OrderingSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSource::GyoElimination => write!(f, "gyo"),
            OrderingSource::SmallestLast => write!(f, "smallest-last"),
            OrderingSource::TreeDecomposition => write!(f, "tree-decomposition"),
        }
    }
}

/// Everything the structural analysis learned about an instance.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub n: usize,
    pub m: usize,
    pub literals: usize,
    pub read: usize,
    pub degeneracy: DegeneracyReport,
    pub alpha_acyclic: bool,
    pub gyo: GyoTrace,
    pub gyo_ordering: Option<VariableOrdering>,
    pub td_width: Option<usize>,
    pub td_ordering: Option<VariableOrdering>,
    pub chosen: VariableOrdering,
    pub chosen_source: OrderingSource,
    pub chosen_max_group: usize,
    pub guarantees: Vec<String>,
}

/// Analyze an instance and pick the enumeration ordering with the smallest
/// maximum clause group. Candidates: the GYO elimination ordering (when the
/// CNF is alpha-acyclic), the smallest-last ordering, and the peeling
/// ordering of a supplied decomposition (type I is converted first). Ties
/// prefer GYO, then smallest-last.
pub fn analyze(
    cnf: &MonotoneCnf,
    td: Option<&TreeDecomposition>,
) -> Result<AnalysisReport, StructureError> {
    let degeneracy = smallest_last_ordering(cnf);
    let read = read_number(cnf);
    let gyo = gyo_reduce(cnf);
    let alpha_acyclic = gyo.success;
    let gyo_ordering = if alpha_acyclic {
        Some(ordering_from_gyo(&gyo, cnf.n())?)
    } else {
        None
    };
    let (td_width, td_ordering) = match td {
        None => (None, None),
        Some(t) => {
            let t2;
            let t2_ref = if t.kind == TdKind::TypeI {
                t2 = td1_to_td2(t, cnf)?;
                &t2
            } else {
                validate_td(t, cnf)?;
                t
            };
            (Some(t2_ref.width()), Some(ordering_from_td2(t2_ref, cnf)?))
        }
    };

    let max_group = |ord: &VariableOrdering| {
        delta_profile(cnf, ord).into_iter().max().unwrap_or(0)
    };
    let mut candidates: Vec<(OrderingSource, &VariableOrdering, usize)> = Vec::new();
    if let Some(ord) = &gyo_ordering {
        candidates.push((OrderingSource::GyoElimination, ord, max_group(ord)));
    }
    candidates.push((
        OrderingSource::SmallestLast,
        &degeneracy.ordering,
        degeneracy.k,
    ));
    if let Some(ord) = &td_ordering {
        candidates.push((OrderingSource::TreeDecomposition, ord, max_group(ord)));
    }
    let (chosen_source, chosen, chosen_max_group) = {
        let &(src, ord, g) = candidates
            .iter()
            .min_by_key(|&&(_, _, g)| g)
            .expect("smallest-last always present");
        (src, ord.clone(), g)
    };

    let literals = cnf.literal_count();
    let mut guarantees = Vec::new();
    let k = degeneracy.k;
    guarantees.push(format!(
        "{k}-degenerate: enumeration delay O(||f|| * n^{}) under the smallest-last ordering",
        k + 1
    ));
    if literals >= 2 && (k as f64) <= (literals as f64).log2() {
        guarantees.push(format!(
            "log-degenerate (k = {k} <= log2 ||f|| = {:.2}): total time polynomial in input plus output",
            (literals as f64).log2()
        ));
    }
    if alpha_acyclic {
        guarantees.push(
            "alpha-acyclic: the GYO elimination ordering is 1-degenerate, delay O(||f|| * n^2)"
                .to_string(),
        );
    }
    if read > 0 {
        guarantees.push(format!(
            "read-{read}: every ordering is {read}-degenerate, delay O(||f|| * n^{})",
            read + 1
        ));
    }
    if let Some(w) = td_width {
        guarantees.push(format!(
            "incidence tree-width <= {w}: the peeling ordering keeps clause groups within 2^{w}"
        ));
    }

    Ok(AnalysisReport {
        n: cnf.n(),
        m: cnf.len(),
        literals,
        read,
        degeneracy,
        alpha_acyclic,
        gyo,
        gyo_ordering,
        td_width,
        td_ordering,
        chosen,
        chosen_source,
        chosen_max_group,
        guarantees,
    })
}

/// Print a decomposition in the line-oriented text format (see `parse_td`).
pub fn format_td(td: &TreeDecomposition) -> String {
    let mut max_var = 0usize;
    let mut max_clause = 0usize;
    for bag in &td.bags {
        for &x in bag {
            match x {
                TdVertex::Var(v) => max_var = max_var.max(v),
                TdVertex::ClauseNode(j) => max_clause = max_clause.max(j),
            }
        }
    }
    let max_bag = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut out = format!("td {} {} {}\n", td.bags.len(), max_bag, max_var + max_clause);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for x in bag {
            out.push_str(&format!(" {x}"));
        }
        out.push('\n');
    }
    for &(u, v) in &td.edges {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// Parse the text format: a header `td <nodes> <max-bag-size> <vertices>`,
/// one `b <node-id> <vertex>...` line per nonempty bag (clause nodes
/// written `c<j>`, variables as bare indices), and `<u> <v>` tree-edge
/// lines between 1-based node ids. `#` starts a comment line. A
/// decomposition mentioning any clause node is type II, otherwise type I.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, StructureError> {
    let fail = |line: usize, msg: String| StructureError::Parse { line, msg };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<BTreeSet<TdVertex>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut saw_clause_node = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens[0] == "td" {
            if header.is_some() {
                return Err(fail(line, "duplicate header".into()));
            }
            if tokens.len() != 4 {
                return Err(fail(line, "expected: td <nodes> <max-bag-size> <vertices>".into()));
            }
            let nums: Result<Vec<usize>, _> =
                tokens[1..].iter().map(|t| t.parse::<usize>()).collect();
            let nums = nums.map_err(|_| fail(line, "header fields must be numbers".into()))?;
            if nums[0] == 0 {
                return Err(fail(line, "a decomposition needs at least one node".into()));
            }
            header = Some((nums[0], nums[1], nums[2]));
            bags = vec![BTreeSet::new(); nums[0]];
            continue;
        }
        let Some((nodes, max_bag, _)) = header else {
            return Err(fail(line, "the td header must come first".into()));
        };
        if tokens[0] == "b" {
            if tokens.len() < 2 {
                return Err(fail(line, "expected: b <node-id> <vertex>...".into()));
            }
            let id: usize = tokens[1]
                .parse()
                .map_err(|_| fail(line, format!("bad node id {:?}", tokens[1])))?;
            if id == 0 || id > nodes {
                return Err(fail(line, format!("node id {id} out of range 1..={nodes}")));
            }
            for t in &tokens[2..] {
                let vertex = if let Some(rest) = t.strip_prefix('c') {
                    let j: usize = rest
                        .parse()
                        .map_err(|_| fail(line, format!("bad clause node {t:?}")))?;
                    if j == 0 {
                        return Err(fail(line, "clause nodes are numbered from 1".into()));
                    }
                    saw_clause_node = true;
                    TdVertex::ClauseNode(j)
                } else {
                    let v: usize = t
                        .parse()
                        .map_err(|_| fail(line, format!("bad vertex {t:?}")))?;
                    if v == 0 {
                        return Err(fail(line, "variables are numbered from 1".into()));
                    }
                    TdVertex::Var(v)
                };
                bags[id - 1].insert(vertex);
            }
            if bags[id - 1].len() > max_bag {
                return Err(fail(
                    line,
                    format!("bag {id} exceeds the declared maximum size {max_bag}"),
                ));
            }
            continue;
        }
        if tokens.len() == 2 {
            let u: usize =
                tokens[0].parse().map_err(|_| fail(line, format!("bad edge {s:?}")))?;
            let v: usize =
                tokens[1].parse().map_err(|_| fail(line, format!("bad edge {s:?}")))?;
            if u == 0 || u > nodes || v == 0 || v > nodes {
                return Err(fail(line, format!("edge ({u}, {v}) out of range")));
            }
            edges.push((u - 1, v - 1));
            continue;
        }
        return Err(fail(line, format!("unrecognized line {s:?}")));
    }
    if header.is_none() {
        return Err(fail(0, "missing td header".into()));
    }
    let kind = if saw_clause_node { TdKind::TypeII } else { TdKind::TypeI };
    Ok(TreeDecomposition { kind, bags, edges })
}
