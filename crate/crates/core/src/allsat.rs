//! All-solutions enumeration for leaf formulas and gathering of leaf
//! solutions into a solution set of the root formula.

use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{CnfFormula, PartialAssignment, Row, SolutionSet, Var};
use crate::decompose::{DecompositionTree, NodeId, NodeStatus};
use crate::{Error, Result};

/// Largest universe [`all_solutions`] accepts.
pub const MAX_LEAF_VARS: usize = 20;
/// Largest number of unconstrained variables expanded for one row.
pub const MAX_WIDEN_VARS: usize = 24;

/// Solutions of one solvable leaf, over the leaf formula's universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafResult {
    pub node: NodeId,
    pub solutions: SolutionSet,
}

/// Every satisfying assignment over `f`'s universe, by backtracking over
/// the universe order with unit propagation.
pub fn all_solutions(f: &CnfFormula) -> Result<SolutionSet> {
    let n = f.num_vars();
    if n > MAX_LEAF_VARS {
        return Err(Error::Capacity {
            what: "leaf formula",
            got: n,
            limit: MAX_LEAF_VARS,
        });
    }
    let clauses: Vec<Vec<(usize, bool)>> = f
        .clauses()
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .map(|l| (f.position(l.var).expect("literal in universe"), l.positive))
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    search(&clauses, vec![None; n], &mut rows);
    SolutionSet::new(f.universe().to_vec(), rows)
}

enum Propagation {
    Conflict,
    Satisfied,
    Open,
}

fn propagate(clauses: &[Vec<(usize, bool)>], assign: &mut [Option<bool>]) -> Propagation {
    loop {
        let mut changed = false;
        let mut all_sat = true;
        for c in clauses {
            let mut unassigned = None;
            let mut free = 0;
            let mut sat = false;
            for &(v, pos) in c {
                match assign[v] {
                    Some(b) if b == pos => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        free += 1;
                        unassigned = Some((v, pos));
                    }
                }
            }
            if sat {
                continue;
            }
            all_sat = false;
            match (free, unassigned) {
                (0, _) => return Propagation::Conflict,
                (1, Some((v, pos))) => {
                    assign[v] = Some(pos);
                    changed = true;
                }
                _ => {}
            }
        }
        if all_sat {
            return Propagation::Satisfied;
        }
        if !changed {
            return Propagation::Open;
        }
    }
}

fn search(clauses: &[Vec<(usize, bool)>], mut assign: Vec<Option<bool>>, rows: &mut Vec<Row>) {
    match propagate(clauses, &mut assign) {
        Propagation::Conflict => {}
        Propagation::Satisfied => {
            // Remaining variables are unconstrained.
            let free: Vec<usize> = (0..assign.len()).filter(|&v| assign[v].is_none()).collect();
            for bits in 0..1usize << free.len() {
                let mut row: Vec<bool> = assign.iter().map(|b| b.unwrap_or(false)).collect();
                for (j, &v) in free.iter().enumerate() {
                    row[v] = bits >> j & 1 == 1;
                }
                rows.push(Row::new(row));
            }
        }
        Propagation::Open => {
            let v = assign
                .iter()
                .position(Option::is_none)
                .expect("an open clause has an unassigned variable");
            for value in [false, true] {
                let mut next = assign.clone();
                next[v] = Some(value);
                search(clauses, next, rows);
            }
        }
    }
}

/// Extends every row of `s` by `prefix`; the result is over the union of
/// the two variable sets.
pub fn patch(prefix: &PartialAssignment, s: &SolutionSet) -> Result<SolutionSet> {
    if let Some(v) = prefix.vars().find(|v| s.over().binary_search(v).is_ok()) {
        return Err(Error::Usage(format!(
            "{v} is bound by the prefix and by the solution set"
        )));
    }
    let over: Vec<Var> = s
        .over()
        .iter()
        .copied()
        .chain(prefix.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = s.rows().iter().map(|r| {
        Row::new(
            over.iter()
                .map(|&v| {
                    prefix.get(v).unwrap_or_else(|| {
                        let j = s.over().binary_search(&v).expect("variable from s");
                        r.values()[j]
                    })
                })
                .collect(),
        )
    });
    let rows: Vec<Row> = rows.collect();
    SolutionSet::new(over, rows)
}

/// Re-expresses `s` over `universe`, expanding variables absent from
/// `s.over()` to both values.
pub fn widen(s: &SolutionSet, universe: &[Var]) -> Result<SolutionSet> {
    let mut out = BTreeSet::new();
    widen_into(s, universe, &mut out)?;
    SolutionSet::new(universe.to_vec(), out)
}

fn widen_into(s: &SolutionSet, universe: &[Var], out: &mut BTreeSet<Row>) -> Result<()> {
    if let Some(v) = s.over().iter().find(|v| universe.binary_search(v).is_err()) {
        return Err(Error::Usage(format!("{v} is outside the target universe")));
    }
    let source: Vec<Option<usize>> = universe
        .iter()
        .map(|v| s.over().binary_search(v).ok())
        .collect();
    let missing: Vec<usize> = (0..universe.len())
        .filter(|&j| source[j].is_none())
        .collect();
    if missing.len() > MAX_WIDEN_VARS && !s.is_empty() {
        return Err(Error::Capacity {
            what: "unconstrained variables to expand",
            got: missing.len(),
            limit: MAX_WIDEN_VARS,
        });
    }
    for r in s.rows() {
        let base: Vec<bool> = source
            .iter()
            .map(|j| j.is_some_and(|j| r.values()[j]))
            .collect();
        for bits in 0..1usize << missing.len() {
            let mut row = base.clone();
            for (k, &j) in missing.iter().enumerate() {
                row[j] = bits >> k & 1 == 1;
            }
            out.insert(Row::new(row));
        }
    }
    Ok(())
}

/// Solves one solvable leaf of `tree`.
pub fn solve_leaf(tree: &DecompositionTree, node: NodeId) -> Result<LeafResult> {
    let n = tree
        .node(node)
        .ok_or_else(|| Error::Usage(format!("no node {node}")))?;
    if n.status != NodeStatus::Solvable {
        return Err(Error::Usage(format!("node {node} is not a solvable leaf")));
    }
    let f = n
        .item
        .formula
        .formula()
        .expect("solvable leaves have a formula");
    Ok(LeafResult {
        node,
        solutions: all_solutions(f)?,
    })
}

/// Solves all solvable leaves in node order.
pub fn solve_all_leaves(tree: &DecompositionTree) -> Result<Vec<LeafResult>> {
    tree.solvable_leaves()
        .map(|n| solve_leaf(tree, n.id))
        .collect()
}

/// Unites the patched leaf solutions over the root universe. Trivial leaves
/// contribute every extension of their prefix, dead leaves nothing.
pub fn gather(tree: &DecompositionTree, results: &[LeafResult]) -> Result<SolutionSet> {
    let mut by_node: BTreeMap<NodeId, &LeafResult> = BTreeMap::new();
    for r in results {
        match tree.node(r.node) {
            Some(n) if n.status == NodeStatus::Solvable => {}
            _ => {
                return Err(Error::Usage(format!(
                    "result for node {} which is not a solvable leaf",
                    r.node
                )))
            }
        }
        if by_node.insert(r.node, r).is_some() {
            return Err(Error::Usage(format!("two results for node {}", r.node)));
        }
    }
    let universe = tree.root().universe();
    let mut rows = BTreeSet::new();
    for leaf in tree.leaves() {
        let local = match &leaf.status {
            NodeStatus::Unsat => continue,
            NodeStatus::Trivial => {
                let f = leaf
                    .item
                    .formula
                    .formula()
                    .expect("trivial leaves have a formula");
                SolutionSet::all(f.universe().to_vec())?
            }
            NodeStatus::Solvable => by_node
                .get(&leaf.id)
                .ok_or_else(|| Error::Usage(format!("missing result for leaf {}", leaf.id)))?
                .solutions
                .clone(),
            NodeStatus::Internal(_) => unreachable!("leaves only"),
        };
        widen_into(&patch(&leaf.item.prefix, &local)?, universe, &mut rows)?;
    }
    SolutionSet::new(universe.to_vec(), rows)
}
