//! Line-oriented serialization of a [`DecompositionTree`].
//!
//! ```text
//! c <comment>                      ignored anywhere
//! tree <node count>
//! root
//! u <universe ids> 0               root formula universe
//! p cnf <max var> <clauses>        root formula, DIMACS clause lines follow
//! node <id> <parent|-> <depth> <internal|solvable|unsat|trivial>
//! a <prefix literals> 0            bindings accumulated from the root
//! s clause <index>                 internal nodes: clause-pivot step
//! s vars <ids> 0                   internal nodes: variable-partition step
//! u <ids> 0                        leaves with a formula: its universe
//! p cnf <max var> <clauses>        ...and its clauses
//! ```
//!
//! Dead branches produced by an emptied clause carry no formula block.
//! Internal node formulas are not written; they are recomputed from the
//! parent's formula and the prefix.

use std::fmt::Write as _;

use super::{DecompositionTree, Node, NodeStatus, Step, WorkItem};
use crate::cnf::{Clause, CnfFormula, PartialAssignment, Reduced, Var};
use crate::{Error, Result};

pub(super) fn write_tree(tree: &DecompositionTree) -> String {
    let mut out = format!("tree {}\nroot\n", tree.nodes.len());
    write_formula(&mut out, &tree.root);
    for node in &tree.nodes {
        let parent = node.parent.map_or("-".to_string(), |p| p.to_string());
        let status = match &node.status {
            NodeStatus::Internal(_) => "internal",
            NodeStatus::Solvable => "solvable",
            NodeStatus::Unsat => "unsat",
            NodeStatus::Trivial => "trivial",
        };
        let _ = writeln!(
            out,
            "node {} {parent} {} {status}",
            node.id, node.item.depth
        );
        out.push('a');
        for l in node.item.prefix.literals() {
            let _ = write!(out, " {l}");
        }
        out.push_str(" 0\n");
        match (&node.status, &node.item.formula) {
            (NodeStatus::Internal(Step::ClausePivot { clause }), _) => {
                let _ = writeln!(out, "s clause {clause}");
            }
            (NodeStatus::Internal(Step::VarPartition { block }), _) => {
                out.push_str("s vars");
                for v in block {
                    let _ = write!(out, " {}", v.0);
                }
                out.push_str(" 0\n");
            }
            (_, Reduced::Formula(f)) => write_formula(&mut out, f),
            (_, Reduced::Unsat) => {}
        }
    }
    out
}

fn write_formula(out: &mut String, f: &CnfFormula) {
    out.push('u');
    for v in f.universe() {
        let _ = write!(out, " {}", v.0);
    }
    out.push_str(" 0\n");
    out.push_str(&crate::cnf::emit_dimacs(f));
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(src: &'a str) -> Self {
        let lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
            .collect();
        Self { lines, pos: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|&(_, l)| l)
    }

    fn line_no(&self) -> usize {
        self.lines
            .get(self.pos)
            .or(self.lines.last())
            .map_or(1, |&(n, _)| n)
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        let l = self.peek().ok_or_else(|| {
            err(
                self.line_no(),
                &format!("unexpected end of input, expected {what}"),
            )
        })?;
        self.pos += 1;
        Ok(l)
    }

    /// Consumes a line `<tag> ...`, returning the remaining tokens.
    fn tagged(&mut self, tag: &str) -> Result<Vec<&'a str>> {
        let line = self.line_no();
        let l = self.next(tag)?;
        let mut toks = l.split_whitespace();
        if toks.next() != Some(tag) {
            return Err(err(line, &format!("expected `{tag}` line")));
        }
        Ok(toks.collect())
    }
}

fn err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| err(line, &format!("bad number {tok:?}")))
}

/// Tokens `... 0` as integers, without the terminator.
fn zero_terminated(toks: &[&str], line: usize) -> Result<Vec<i64>> {
    match toks.split_last() {
        Some((&"0", body)) => body.iter().map(|t| int(t, line)).collect(),
        _ => Err(err(line, "list not terminated by 0")),
    }
}

fn read_formula(lines: &mut Lines<'_>) -> Result<CnfFormula> {
    let line = lines.line_no();
    let universe = zero_terminated(&lines.tagged("u")?, line)?
        .into_iter()
        .map(|v| {
            u32::try_from(v)
                .ok()
                .filter(|&v| v > 0)
                .map(Var)
                .ok_or_else(|| err(line, "bad variable id"))
        })
        .collect::<Result<Vec<_>>>()?;
    let line = lines.line_no();
    let header = lines.tagged("p")?;
    let count: usize = match header.as_slice() {
        ["cnf", _, m] => int(m, line)?,
        _ => return Err(err(line, "malformed problem line")),
    };
    let mut clauses = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines.line_no();
        let toks: Vec<&str> = lines.next("clause")?.split_whitespace().collect();
        let lits = zero_terminated(&toks, line)?;
        let c = Clause::from_dimacs(&lits)
            .map_err(|e| err(line, &e.to_string()))?
            .ok_or_else(|| err(line, "tautological clause"))?;
        clauses.push(c);
    }
    CnfFormula::with_universe(universe, clauses).map_err(|e| err(line, &e.to_string()))
}

pub(super) fn read_tree(src: &str) -> Result<DecompositionTree> {
    let mut lines = Lines::new(src);
    let line = lines.line_no();
    let count: usize = match lines.tagged("tree")?.as_slice() {
        [n] => int(n, line)?,
        _ => return Err(err(line, "malformed tree line")),
    };
    lines.tagged("root")?;
    let root = read_formula(&mut lines)?;

    let mut nodes: Vec<Node> = Vec::with_capacity(count);
    for expected_id in 0..count {
        let line = lines.line_no();
        let toks = lines.tagged("node")?;
        let [id, parent, depth, status] = toks.as_slice() else {
            return Err(err(line, "malformed node line"));
        };
        let id: usize = int(id, line)?;
        if id != expected_id {
            return Err(err(
                line,
                &format!("expected node {expected_id}, found {id}"),
            ));
        }
        let parent: Option<usize> = match *parent {
            "-" => None,
            p => Some(int(p, line)?),
        };
        let depth: usize = int(depth, line)?;
        let status_tag = *status;

        let line = lines.line_no();
        let prefix = PartialAssignment::from_dimacs(&zero_terminated(&lines.tagged("a")?, line)?)
            .map_err(|e| err(line, &e.to_string()))?;

        let status = match status_tag {
            "internal" => {
                let line = lines.line_no();
                let toks = lines.tagged("s")?;
                let step = match toks.split_first() {
                    Some((&"clause", [i])) => Step::ClausePivot {
                        clause: int(i, line)?,
                    },
                    Some((&"vars", rest)) => Step::VarPartition {
                        block: zero_terminated(rest, line)?
                            .into_iter()
                            .map(|v| {
                                u32::try_from(v)
                                    .map(Var)
                                    .map_err(|_| err(line, "bad variable id"))
                            })
                            .collect::<Result<_>>()?,
                    },
                    _ => return Err(err(line, "malformed step line")),
                };
                NodeStatus::Internal(step)
            }
            "solvable" => NodeStatus::Solvable,
            "unsat" => NodeStatus::Unsat,
            "trivial" => NodeStatus::Trivial,
            other => return Err(err(line, &format!("unknown status {other:?}"))),
        };

        let formula = if status.is_leaf() {
            if lines.peek().is_some_and(|l| l.starts_with('u')) {
                Reduced::Formula(read_formula(&mut lines)?)
            } else if status == NodeStatus::Unsat {
                Reduced::Unsat
            } else {
                return Err(err(lines.line_no(), "leaf without a formula block"));
            }
        } else {
            reconstruct(&root, &nodes, parent, &prefix).map_err(|e| err(line, &e.to_string()))?
        };
        nodes.push(Node {
            id,
            parent,
            item: WorkItem {
                prefix,
                formula,
                depth,
            },
            status,
        });
    }
    if let Some(extra) = lines.peek() {
        return Err(err(lines.line_no(), &format!("trailing input {extra:?}")));
    }
    DecompositionTree::from_parts(root, nodes)
}

fn reconstruct(
    root: &CnfFormula,
    nodes: &[Node],
    parent: Option<usize>,
    prefix: &PartialAssignment,
) -> Result<Reduced> {
    let Some(p) = parent else {
        return Ok(Reduced::Formula(root.compact()));
    };
    let parent = nodes
        .get(p)
        .ok_or_else(|| Error::Usage(format!("parent {p} not yet defined")))?;
    let f = parent
        .item
        .formula
        .formula()
        .ok_or_else(|| Error::Usage("internal node below a dead branch".into()))?;
    Ok(
        match f.substitute(&prefix.difference(&parent.item.prefix)) {
            Reduced::Formula(f) => Reduced::Formula(f.compact()),
            Reduced::Unsat => Reduced::Unsat,
        },
    )
}
