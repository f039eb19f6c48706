//! Decomposition of a CNF formula into independent subproblems.
//!
//! Two strategies produce a [`DecompositionTree`] whose leaves are
//! self-contained [`WorkItem`]s:
//!
//! - **Clause pivot.** A formula is satisfiable iff, for some clause `C`,
//!   one of the `2^k - 1` partial assignments that satisfy `C` leaves a
//!   satisfiable reduced formula. Branching on those assignments covers the
//!   solution set; branches overlap, so gathering must deduplicate.
//! - **Variable partition.** Pick a block `X1` of at most `n0` variables,
//!   split the clauses into those inside `X1` (`C1`), those mixing `X1` and
//!   the rest (`C2`), and those outside (`C3`), then branch on every full
//!   assignment of `X1` that satisfies `C1`. Branches are disjoint.
//!
//! In both cases children carry the reduced formula over its occurring
//! variables only; variables that vanish are re-expanded when solutions are
//! gathered.

mod cost;
mod text;

use std::collections::{BTreeSet, HashMap, VecDeque};

use log::debug;

use crate::cnf::{Clause, CnfFormula, PartialAssignment, Reduced, Var};
use crate::{Error, Result};

pub use cost::{estimate_cost, CostEstimate};

/// Upper bound on `|X1|` for enumerating block assignments.
pub const MAX_BLOCK_VARS: usize = 20;

/// A subproblem: the bindings made on the way from the root plus the
/// formula left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkItem {
    pub prefix: PartialAssignment,
    pub formula: Reduced,
    pub depth: usize,
}

impl WorkItem {
    pub fn is_dead(&self) -> bool {
        self.formula.is_unsat()
    }

    fn child(&self, q: &PartialAssignment, reduced: Reduced) -> Result<Self> {
        Ok(Self {
            prefix: self.prefix.union(q)?,
            formula: match reduced {
                Reduced::Formula(f) => Reduced::Formula(f.compact()),
                Reduced::Unsat => Reduced::Unsat,
            },
            depth: self.depth + 1,
        })
    }
}

/// The three-way clause split induced by a variable block `X1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Clauses over `X1` only.
    pub c1: Vec<Clause>,
    /// Clauses touching both blocks.
    pub c2: Vec<Clause>,
    /// Clauses over `X2` only.
    pub c3: Vec<Clause>,
    pub x1: Vec<Var>,
    pub x2: Vec<Var>,
}

/// How an internal node was split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Branched on the partial assignments of the clause at this index of
    /// the node's formula.
    ClausePivot { clause: usize },
    /// Branched on the assignments of this variable block.
    VarPartition { block: Vec<Var> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeStatus {
    Internal(Step),
    /// Leaf with clauses and at most `n0` variables.
    Solvable,
    /// Leaf known to have no solutions.
    Unsat,
    /// Leaf with no clauses left.
    Trivial,
}

impl NodeStatus {
    pub fn is_leaf(&self) -> bool {
        !matches!(self, NodeStatus::Internal(_))
    }
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub item: WorkItem,
    pub status: NodeStatus,
}

/// The recursion structure of a decomposition. Node 0 is the root and nodes
/// are numbered in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTree {
    root: CnfFormula,
    nodes: Vec<Node>,
}

impl DecompositionTree {
    pub(crate) fn from_parts(root: CnfFormula, nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Usage("a tree needs a root node".into()));
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::Usage(format!(
                    "node {} stored at position {i}",
                    n.id
                )));
            }
            if let Some(p) = n.parent {
                if p >= i {
                    return Err(Error::Usage(format!("node {i} has parent {p} after it")));
                }
            } else if i != 0 {
                return Err(Error::Usage(format!("node {i} has no parent")));
            }
        }
        Ok(Self { root, nodes })
    }

    /// The formula the tree was built from, with its original universe.
    pub fn root(&self) -> &CnfFormula {
        &self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().filter(|n| n.status.is_leaf())
    }

    pub fn solvable_leaves(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes
            .iter()
            .filter(|n| n.status == NodeStatus::Solvable)
    }

    /// Every leaf is dead, so the root formula is unsatisfiable.
    pub fn all_dead(&self) -> bool {
        self.leaves().all(|n| n.status == NodeStatus::Unsat)
    }

    pub fn to_text(&self) -> String {
        text::write_tree(self)
    }

    pub fn from_text(src: &str) -> Result<Self> {
        text::read_tree(src)
    }
}

fn leaf_status(item: &WorkItem, n0: usize) -> Option<NodeStatus> {
    match &item.formula {
        Reduced::Unsat => Some(NodeStatus::Unsat),
        Reduced::Formula(f) if f.has_empty_clause() => Some(NodeStatus::Unsat),
        Reduced::Formula(f) if f.is_trivial() => Some(NodeStatus::Trivial),
        Reduced::Formula(f) if f.formula_vars().len() <= n0 => Some(NodeStatus::Solvable),
        Reduced::Formula(_) => None,
    }
}

fn root_item(f: &CnfFormula) -> WorkItem {
    WorkItem {
        prefix: PartialAssignment::new(),
        formula: Reduced::Formula(f.compact()),
        depth: 0,
    }
}

fn check_n0(n0: usize) -> Result<()> {
    if n0 < 1 {
        return Err(Error::Usage("n0 must be at least 1".into()));
    }
    Ok(())
}

/// One branch per partial assignment of the pivot clause, in the clause's
/// canonical order. Branches whose reduction empties a clause are kept and
/// marked dead.
pub fn clause_pivot_decompose(f: &CnfFormula, pivot: usize) -> Result<Vec<WorkItem>> {
    pivot_children(&root_item(f), pivot)
}

fn pivot_children(parent: &WorkItem, pivot: usize) -> Result<Vec<WorkItem>> {
    let f = parent
        .formula
        .formula()
        .ok_or_else(|| Error::Usage("cannot pivot a dead branch".into()))?;
    let clause = f.clauses().get(pivot).ok_or_else(|| {
        Error::Usage(format!(
            "pivot clause {pivot} out of range for {} clauses",
            f.clauses().len()
        ))
    })?;
    clause
        .partial_assignments()?
        .iter()
        .map(|q| parent.child(q, f.substitute(q)))
        .collect()
}

/// Shortest clause, lowest index on ties.
fn default_pivot(f: &CnfFormula) -> usize {
    f.clauses()
        .iter()
        .enumerate()
        .min_by_key(|(i, c)| (c.len(), *i))
        .map_or(0, |(i, _)| i)
}

/// Recursive clause-pivot decomposition. With `root_pivot = Some(i)` the
/// root is always split on clause `i`; every other node is split on its
/// shortest clause while it has more than `n0` variables.
pub fn clause_pivot_tree(
    f: &CnfFormula,
    root_pivot: Option<usize>,
    n0: usize,
) -> Result<DecompositionTree> {
    check_n0(n0)?;
    build_tree(f, n0, |item, is_root| {
        let formula = item.formula.formula().expect("live node");
        let pivot = match (is_root, root_pivot) {
            (true, Some(i)) => i,
            _ => {
                if leaf_status(item, n0).is_some() {
                    return Ok(None);
                }
                default_pivot(formula)
            }
        };
        let children = pivot_children(item, pivot)?;
        Ok(Some((Step::ClausePivot { clause: pivot }, children)))
    })
}

/// Greedy choice of the block `X1`: repeatedly add the variable that
/// completes the most clauses, breaking ties by the smallest id, until the
/// block has `min(n0, |X|)` variables.
pub fn choose_var_subset(f: &CnfFormula, n0: usize) -> Result<Vec<Var>> {
    check_n0(n0)?;
    let vars = f.formula_vars();
    let target = n0.min(vars.len());
    let clause_vars: Vec<Vec<Var>> = f.clauses().iter().map(Clause::vars).collect();
    let mut occurs: HashMap<Var, Vec<usize>> = HashMap::new();
    for (i, vs) in clause_vars.iter().enumerate() {
        for &v in vs {
            occurs.entry(v).or_default().push(i);
        }
    }
    let mut chosen: BTreeSet<Var> = BTreeSet::new();
    while chosen.len() < target {
        // Marginal gain of v: clauses containing v whose other variables are
        // already chosen.
        let gain = |v: Var| {
            occurs[&v]
                .iter()
                .filter(|&&i| clause_vars[i].iter().all(|u| *u == v || chosen.contains(u)))
                .count()
        };
        let best = vars
            .iter()
            .copied()
            .filter(|v| !chosen.contains(v))
            .map(|v| (gain(v), v))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .expect("fewer chosen than available");
        chosen.insert(best.1);
    }
    Ok(chosen.into_iter().collect())
}

/// Splits the clauses of `f` by their position relative to the block `x1`.
pub fn partition(f: &CnfFormula, x1: &[Var]) -> Result<Partition> {
    let vars = f.formula_vars();
    let block: BTreeSet<Var> = x1.iter().copied().collect();
    if let Some(v) = block.iter().find(|v| vars.binary_search(v).is_err()) {
        return Err(Error::Precondition(format!(
            "{v} is not a variable of the formula"
        )));
    }
    let mut p = Partition {
        c1: Vec::new(),
        c2: Vec::new(),
        c3: Vec::new(),
        x1: block.iter().copied().collect(),
        x2: vars.into_iter().filter(|v| !block.contains(v)).collect(),
    };
    for c in f.clauses() {
        let inside = c
            .literals()
            .iter()
            .filter(|l| block.contains(&l.var))
            .count();
        if inside == c.len() {
            p.c1.push(c.clone());
        } else if inside == 0 {
            p.c3.push(c.clone());
        } else {
            p.c2.push(c.clone());
        }
    }
    Ok(p)
}

/// Every full assignment of `x1` satisfying all of `c1`, in ascending order
/// of their encoding (`x1[j]` is bit `j` once `x1` is sorted).
pub fn enumerate_c1_assignments(c1: &[Clause], x1: &[Var]) -> Result<Vec<PartialAssignment>> {
    let block: Vec<Var> = x1
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if block.len() > MAX_BLOCK_VARS {
        return Err(Error::Capacity {
            what: "variable block",
            got: block.len(),
            limit: MAX_BLOCK_VARS,
        });
    }
    // Clause masks over block positions.
    let mut masks = Vec::with_capacity(c1.len());
    for c in c1 {
        let (mut pos, mut neg) = (0usize, 0usize);
        for l in c.literals() {
            let j = block
                .binary_search(&l.var)
                .map_err(|_| Error::Precondition(format!("clause {c} leaves the block")))?;
            if l.positive {
                pos |= 1 << j;
            } else {
                neg |= 1 << j;
            }
        }
        masks.push((pos, neg));
    }
    Ok((0..1usize << block.len())
        .filter(|&p| {
            masks
                .iter()
                .all(|&(pos, neg)| p & pos != 0 || !p & neg != 0)
        })
        .map(|p| {
            PartialAssignment::from_pairs(
                block.iter().enumerate().map(|(j, &v)| (v, p >> j & 1 == 1)),
            )
            .expect("block variables are distinct")
        })
        .collect())
}

/// Recursive variable-partition decomposition down to leaves with at most
/// `n0` variables.
pub fn var_partition_decompose(f: &CnfFormula, n0: usize) -> Result<DecompositionTree> {
    check_n0(n0)?;
    build_tree(f, n0, |item, _| {
        if leaf_status(item, n0).is_some() {
            return Ok(None);
        }
        let formula = item.formula.formula().expect("live node");
        let x1 = choose_var_subset(formula, n0)?;
        let part = partition(formula, &x1)?;
        let assignments = enumerate_c1_assignments(&part.c1, &part.x1)?;
        debug!(
            "depth {}: |X1| = {}, |C1| = {}, |C2| = {}, |C3| = {}, |L| = {}",
            item.depth,
            part.x1.len(),
            part.c1.len(),
            part.c2.len(),
            part.c3.len(),
            assignments.len()
        );
        if assignments.is_empty() {
            // C1 alone is unsatisfiable.
            return Ok(None);
        }
        // q satisfies every clause of C1, so substituting into the whole
        // formula leaves exactly C2(q) together with C3.
        let children = assignments
            .iter()
            .map(|q| item.child(q, formula.substitute(q)))
            .collect::<Result<_>>()?;
        Ok(Some((Step::VarPartition { block: part.x1 }, children)))
    })
}

/// Breadth-first expansion. `split` returns `None` to make the node a leaf.
fn build_tree(
    f: &CnfFormula,
    n0: usize,
    mut split: impl FnMut(&WorkItem, bool) -> Result<Option<(Step, Vec<WorkItem>)>>,
) -> Result<DecompositionTree> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back((None, root_item(f)));
    while let Some((parent, item)) = queue.pop_front() {
        let id = nodes.len();
        let dead = matches!(leaf_status(&item, n0), Some(NodeStatus::Unsat));
        let split = if dead { None } else { split(&item, id == 0)? };
        let status = match split {
            Some((step, children)) => {
                for c in children {
                    queue.push_back((Some(id), c));
                }
                NodeStatus::Internal(step)
            }
            // A live node that refused to split with too many variables has
            // an unsatisfiable block.
            None => leaf_status(&item, n0).unwrap_or(NodeStatus::Unsat),
        };
        nodes.push(Node {
            id,
            parent,
            item,
            status,
        });
    }
    debug!("decomposition tree with {} nodes", nodes.len());
    DecompositionTree::from_parts(f.clone(), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(clauses).unwrap()
    }

    fn example2() -> CnfFormula {
        formula(&[&[-1, 2, 4], &[-2, 3, -4], &[1, 3, -4], &[1, -3, -4]])
    }

    fn pa(lits: &[i64]) -> PartialAssignment {
        PartialAssignment::from_dimacs(lits).unwrap()
    }

    fn vars(ids: &[u32]) -> Vec<Var> {
        ids.iter().map(|&i| Var(i)).collect()
    }

    #[test]
    fn pivot_on_c1_reproduces_the_reduced_table() {
        let items = clause_pivot_decompose(&example2(), 0).unwrap();
        let expected: [&[&[i64]]; 7] = [
            &[&[-2, 3, -4], &[3, -4], &[-3, -4]],
            &[&[3, -4], &[1, 3, -4], &[1, -3, -4]],
            &[&[-2, 3], &[1, 3], &[1, -3]],
            &[&[3, -4], &[-3, -4]],
            &[&[-2, 3], &[3], &[-3]],
            &[&[3], &[1, 3], &[1, -3]],
            &[&[3], &[-3]],
        ];
        assert_eq!(items.len(), 7);
        for (item, want) in items.iter().zip(expected) {
            assert_eq!(item.formula, Reduced::Formula(formula(want)));
            assert_eq!(item.depth, 1);
        }
        assert_eq!(items[4].prefix, pa(&[-1, 4]));
    }

    #[test]
    fn unit_pivot_has_one_branch() {
        let f = formula(&[&[1], &[-1, 2]]);
        let items = clause_pivot_decompose(&f, 0).unwrap();
        assert_eq!(items.len(), 1);
        assert!(clause_pivot_decompose(&f, 2).is_err());
    }

    #[test]
    fn dead_branches_are_kept() {
        let f = formula(&[&[1, 2], &[-1]]);
        let items = clause_pivot_decompose(&f, 0).unwrap();
        assert_eq!(items.len(), 3);
        assert!(items[0].is_dead());
        assert!(!items[1].is_dead());
        assert!(items[2].is_dead());
    }

    #[test]
    fn greedy_block_on_example2() {
        // No single variable or pair completes a clause, so ties resolve to
        // the smallest ids.
        assert_eq!(choose_var_subset(&example2(), 2).unwrap(), vars(&[1, 2]));
        assert_eq!(choose_var_subset(&example2(), 3).unwrap(), vars(&[1, 2, 4]));
        assert!(choose_var_subset(&example2(), 0).is_err());
    }

    #[test]
    fn greedy_block_prefers_coverage() {
        // {3, 4} completes three clauses; any other pair at most one.
        let f = formula(&[&[3, 4], &[-3, 4], &[3, -4], &[1, 5], &[2, 6]]);
        // Step one: no unit clauses, tie -> 1. Step two: 5 completes (1 5).
        assert_eq!(choose_var_subset(&f, 2).unwrap(), vars(&[1, 5]));
        let g = formula(&[&[1, 2], &[-1, 2], &[1, -2], &[3, 4, 5]]);
        assert_eq!(choose_var_subset(&g, 2).unwrap(), vars(&[1, 2]));
    }

    #[test]
    fn greedy_block_unit_clauses() {
        let f = formula(&[&[5, 1], &[5, -2], &[5], &[5, 3]]);
        assert_eq!(choose_var_subset(&f, 1).unwrap(), vars(&[5]));
        let g = formula(&[&[5, 1], &[5, -2], &[5, 3]]);
        assert_eq!(choose_var_subset(&g, 1).unwrap(), vars(&[1]));
    }

    #[test]
    fn partition_examples() {
        let f = example2();
        let all = partition(&f, &vars(&[1, 2, 3, 4])).unwrap();
        assert_eq!(all.c1.len(), 4);
        assert!(all.c2.is_empty() && all.c3.is_empty());
        let none = partition(&f, &[]).unwrap();
        assert_eq!(none.c3.len(), 4);
        let xw = partition(&f, &vars(&[1, 4])).unwrap();
        assert!(xw.c1.is_empty() && xw.c3.is_empty());
        assert_eq!(xw.c2.len(), 4);
        assert_eq!(xw.x2, vars(&[2, 3]));
        assert!(partition(&f, &vars(&[9])).is_err());
    }

    #[test]
    fn c1_assignments() {
        let all = enumerate_c1_assignments(&[], &vars(&[1, 2])).unwrap();
        assert_eq!(
            all,
            vec![pa(&[-1, -2]), pa(&[1, -2]), pa(&[-1, 2]), pa(&[1, 2])]
        );
        let contra = formula(&[&[1], &[-1]]);
        assert!(enumerate_c1_assignments(contra.clauses(), &vars(&[1]))
            .unwrap()
            .is_empty());
        let c = formula(&[&[1, -2]]);
        assert_eq!(
            enumerate_c1_assignments(c.clauses(), &vars(&[1, 2])).unwrap(),
            vec![pa(&[-1, -2]), pa(&[1, -2]), pa(&[1, 2])]
        );
        let wide: Vec<Var> = (1..=21).map(Var).collect();
        assert!(matches!(
            enumerate_c1_assignments(&[], &wide),
            Err(Error::Capacity { .. })
        ));
        assert!(enumerate_c1_assignments(c.clauses(), &vars(&[1])).is_err());
    }

    #[test]
    fn small_formula_is_a_single_leaf() {
        let t = var_partition_decompose(&example2(), 4).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert_eq!(t.nodes()[0].status, NodeStatus::Solvable);
    }

    #[test]
    fn contradictory_block_is_all_dead() {
        let f = formula(&[&[1], &[-1], &[2, 3, 4], &[-2, 5]]);
        let t = var_partition_decompose(&f, 2).unwrap();
        assert!(t.all_dead());
    }

    #[test]
    fn leaves_respect_n0() {
        let f = formula(&[
            &[1, 2, -3],
            &[-1, 4, 5],
            &[2, -5, 6],
            &[-3, -6, 7],
            &[4, 7, -8],
            &[-2, 8, 1],
            &[5, -7, 3],
        ]);
        for n0 in 1..=4 {
            let t = var_partition_decompose(&f, n0).unwrap();
            for leaf in t.solvable_leaves() {
                let lf = leaf.item.formula.formula().unwrap();
                assert!(lf.formula_vars().len() <= n0);
                assert!(leaf.item.prefix.vars().all(|v| lf.position(v).is_none()));
            }
            let t = clause_pivot_tree(&f, None, n0).unwrap();
            for leaf in t.solvable_leaves() {
                assert!(leaf.item.formula.formula().unwrap().formula_vars().len() <= n0);
            }
        }
    }

    #[test]
    fn root_pivot_is_forced() {
        let t = clause_pivot_tree(&example2(), Some(0), 8).unwrap();
        assert_eq!(t.nodes().len(), 8);
        assert_eq!(
            t.nodes()[0].status,
            NodeStatus::Internal(Step::ClausePivot { clause: 0 })
        );
        assert_eq!(t.leaves().count(), 7);
        let t = clause_pivot_tree(&example2(), None, 8).unwrap();
        assert_eq!(t.nodes().len(), 1);
    }
}
