//! The command-line pipeline: parse DIMACS, decompose, solve leaves on a
//! worker pool, gather, report.
//!
//! Exit statuses follow SAT-solver convention: 10 satisfiable, 20
//! unsatisfiable, 0 for a decomposition-only run, 1 for any error.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, ValueEnum};
use log::{info, warn};
use serde::Serialize;

use crate::allsat::{gather, solve_leaf, LeafResult};
use crate::boolfn::MAX_VARS;
use crate::cnf::{parse_dimacs, CnfFormula, SolutionSet};
use crate::decompose::{clause_pivot_tree, var_partition_decompose, DecompositionTree, NodeId};
use crate::{Error, Result};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_DECOMPOSED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sat,
    Allsat,
    Count,
    Decompose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pivot {
    /// Branch on the partial assignments of one clause.
    Clause,
    /// Branch on the assignments of a variable block.
    Vars,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Decompose a CNF formula into independent subproblems and enumerate its
/// solutions.
#[derive(Debug, Clone, Parser)]
#[command(name = "cofsat", version)]
pub struct RunConfig {
    /// DIMACS CNF input file.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = Mode::Sat)]
    pub mode: Mode,

    /// Decomposition strategy.
    #[arg(long, value_enum, default_value_t = Pivot::Vars)]
    pub pivot: Pivot,

    /// Clause index (0-based, in file order) to split the root on; requires
    /// `--pivot clause`.
    #[arg(long)]
    pub pivot_clause: Option<usize>,

    /// Leaves have at most this many variables.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub n0: u32,

    /// Parallel leaf workers.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cross-check against truth-table enumeration (formulas up to 16 variables).
    #[arg(long)]
    pub verify: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, mode: Mode) -> Self {
        Self {
            input: input.into(),
            mode,
            pivot: Pivot::Vars,
            pivot_clause: None,
            n0: 8,
            jobs: 1,
            format: Format::Text,
            verify: false,
        }
    }
}

/// Exit status and everything written to standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub output: String,
}

#[derive(Serialize)]
struct JsonReport {
    status: &'static str,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<String>,
}

/// Reads `config.input` and runs the pipeline on it.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let text = std::fs::read_to_string(&config.input)
        .map_err(|e| Error::Io(format!("{}: {e}", config.input.display())))?;
    execute(config, &text)
}

/// Runs the pipeline on DIMACS text; `config.input` is ignored.
pub fn execute(config: &RunConfig, dimacs: &str) -> Result<Outcome> {
    let parsed = parse_dimacs(dimacs)?;
    let f = parsed.formula;
    info!(
        "{} variables, {} clauses, {} warnings",
        f.num_vars(),
        f.clauses().len(),
        parsed.warnings.len()
    );
    let tree = build_tree(config, &f)?;
    info!(
        "{} nodes, {} solvable leaves",
        tree.nodes().len(),
        tree.solvable_leaves().count()
    );

    if config.mode == Mode::Decompose {
        let leaves = tree.solvable_leaves().count();
        let output = match config.format {
            Format::Text => tree.to_text(),
            Format::Json => json(&JsonReport {
                status: "DECOMPOSED",
                count: leaves,
                solutions: None,
                tree: Some(tree.to_text()),
            })?,
        };
        return Ok(Outcome {
            status: EXIT_DECOMPOSED,
            output,
        });
    }

    let results = parallel_leaf_solve(&tree, config.jobs as usize)?;
    let solutions = gather(&tree, &results)?;
    if config.verify {
        verify(&f, &solutions)?;
    }

    let sat = !solutions.is_empty();
    let status = if sat { EXIT_SAT } else { EXIT_UNSAT };
    let label = if sat { "SATISFIABLE" } else { "UNSATISFIABLE" };
    let rows = |s: &SolutionSet, limit: usize| -> Vec<Vec<i64>> {
        (0..s.len().min(limit)).map(|i| s.literals(i)).collect()
    };
    let output = match (config.mode, config.format) {
        (Mode::Sat, Format::Text) => {
            let mut out = format!("{label}\n");
            if sat {
                let witness: Vec<String> =
                    solutions.literals(0).iter().map(i64::to_string).collect();
                out.push_str(&witness.join(" "));
                out.push_str(if witness.is_empty() { "0\n" } else { " 0\n" });
            }
            out
        }
        (Mode::Allsat, Format::Text) => solutions.to_text(),
        (Mode::Count, Format::Text) => format!("{}\n", solutions.len()),
        (mode, Format::Json) => json(&JsonReport {
            status: label,
            count: solutions.len(),
            solutions: match mode {
                Mode::Sat => Some(rows(&solutions, 1)),
                Mode::Allsat => Some(rows(&solutions, usize::MAX)),
                _ => None,
            },
            tree: None,
        })?,
        (Mode::Decompose, _) => unreachable!("handled above"),
    };
    Ok(Outcome { status, output })
}

fn json(report: &JsonReport) -> Result<String> {
    let mut s = serde_json::to_string(report).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn build_tree(config: &RunConfig, f: &CnfFormula) -> Result<DecompositionTree> {
    let n0 = config.n0 as usize;
    match config.pivot {
        Pivot::Clause => clause_pivot_tree(f, config.pivot_clause, n0),
        Pivot::Vars => {
            if config.pivot_clause.is_some() {
                return Err(Error::Usage(
                    "--pivot-clause requires --pivot clause".into(),
                ));
            }
            var_partition_decompose(f, n0)
        }
    }
}

fn verify(f: &CnfFormula, solutions: &SolutionSet) -> Result<()> {
    if f.num_vars() > MAX_VARS {
        warn!(
            "skipping verification: {} variables exceed the oracle limit of {MAX_VARS}",
            f.num_vars()
        );
        return Ok(());
    }
    let oracle = SolutionSet::from_truth_table(f.universe().to_vec(), &f.to_truth_table()?)?;
    if &oracle != solutions {
        return Err(Error::Verify(format!(
            "decomposition found {} solutions, truth-table enumeration {}",
            solutions.len(),
            oracle.len()
        )));
    }
    info!(
        "verified {} solutions against the truth table",
        oracle.len()
    );
    Ok(())
}

/// Solves every solvable leaf on `jobs` workers pulling from a shared
/// queue. Results come back in node order whatever the completion order;
/// the first failing leaf (by node id) fails the whole call.
pub fn parallel_leaf_solve(tree: &DecompositionTree, jobs: usize) -> Result<Vec<LeafResult>> {
    if jobs < 1 {
        return Err(Error::Usage("jobs must be at least 1".into()));
    }
    let queue: Vec<NodeId> = tree.solvable_leaves().map(|n| n.id).collect();
    let workers = jobs.min(queue.len()).max(1);
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(NodeId, Result<LeafResult>)>> =
        Mutex::new(Vec::with_capacity(queue.len()));

    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                let mut local = Vec::new();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&node) = queue.get(i) else { break };
                    local.push((node, solve_leaf(tree, node)));
                }
                done.lock()
                    .expect("no worker panics while holding the lock")
                    .extend(local);
            });
        }
    });

    let mut done = done.into_inner().expect("workers finished");
    if done.len() != queue.len() {
        return Err(Error::Verify(format!(
            "{} of {} leaves came back from the workers",
            done.len(),
            queue.len()
        )));
    }
    done.sort_by_key(|(node, _)| *node);
    done.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE2: &str = "p cnf 4 4\n-1 2 4 0\n-2 3 -4 0\n1 3 -4 0\n1 -3 -4 0\n";

    fn cfg(mode: Mode) -> RunConfig {
        RunConfig::new("-", mode)
    }

    #[test]
    fn count_example2() {
        let out = execute(&cfg(Mode::Count), EXAMPLE2).unwrap();
        assert_eq!(
            out,
            Outcome {
                status: EXIT_SAT,
                output: "9\n".into()
            }
        );
    }

    #[test]
    fn unsat_units() {
        let out = execute(&cfg(Mode::Sat), "p cnf 1 2\n3 0\n-3 0\n").err();
        // variable 3 exceeds the header
        assert!(matches!(out, Some(Error::Parse { line: 2, .. })));
        let out = execute(&cfg(Mode::Sat), "p cnf 3 2\n3 0\n-3 0\n").unwrap();
        assert_eq!(out.status, EXIT_UNSAT);
        assert_eq!(out.output, "UNSATISFIABLE\n");
    }

    #[test]
    fn sat_witness_is_smallest_solution() {
        let out = execute(&cfg(Mode::Sat), EXAMPLE2).unwrap();
        assert_eq!(out.status, EXIT_SAT);
        assert_eq!(out.output, "SATISFIABLE\n-1 -2 -3 -4 0\n");
    }

    #[test]
    fn json_report() {
        let mut c = cfg(Mode::Allsat);
        c.format = Format::Json;
        let out = execute(&c, "p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(
            out.output,
            "{\"status\":\"SATISFIABLE\",\"count\":3,\"solutions\":[[-1,-2],[1,-2],[1,2]]}\n"
        );
        c.mode = Mode::Count;
        let out = execute(&c, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(out.output, "{\"status\":\"UNSATISFIABLE\",\"count\":0}\n");
    }

    #[test]
    fn pivot_clause_needs_clause_mode() {
        let mut c = cfg(Mode::Count);
        c.pivot_clause = Some(0);
        assert!(matches!(execute(&c, EXAMPLE2), Err(Error::Usage(_))));
        c.pivot = Pivot::Clause;
        assert_eq!(execute(&c, EXAMPLE2).unwrap().output, "9\n");
    }

    #[test]
    fn verify_passes() {
        let mut c = cfg(Mode::Count);
        c.verify = true;
        c.n0 = 2;
        assert_eq!(execute(&c, EXAMPLE2).unwrap().output, "9\n");
    }

    #[test]
    fn single_leaf_any_jobs() {
        let f = parse_dimacs(EXAMPLE2).unwrap().formula;
        let tree = var_partition_decompose(&f, 8).unwrap();
        for jobs in [1, 4] {
            let r = parallel_leaf_solve(&tree, jobs).unwrap();
            assert_eq!(r.len(), 1);
        }
        assert!(parallel_leaf_solve(&tree, 0).is_err());
    }
}
