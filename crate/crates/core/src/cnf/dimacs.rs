//! DIMACS CNF reading and writing.
//!
//! Emission is byte-exact: a `p cnf <max var> <clauses>` header, one clause
//! per line as space-separated signed integers with a trailing ` 0`, LF line
//! endings. Parsed formulas span the universe `1..=nvars` of the header.

use std::fmt;
use std::fmt::Write as _;

use log::warn;

use super::{Clause, CnfFormula, Literal, Var};
use crate::{Error, Result};

/// Normalizations applied while parsing. None of them fail the parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    Tautology { line: usize },
    DuplicateClause { line: usize },
    ClauseCount { declared: usize, found: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Tautology { line } => {
                write!(f, "line {line}: tautological clause dropped")
            }
            Warning::DuplicateClause { line } => {
                write!(f, "line {line}: duplicate clause dropped")
            }
            Warning::ClauseCount { declared, found } => write!(
                f,
                "header declares {declared} clauses, {found} kept after normalization"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub formula: CnfFormula,
    pub warnings: Vec<Warning>,
}

pub fn parse_dimacs(text: &str) -> Result<Dimacs> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<(usize, Clause)> = Vec::new();
    let mut warnings = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0;
    let mut parsed_clauses = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // SATLIB files end with a `%` line.
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line, "second problem line"));
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let (nvars, _) = header.ok_or_else(|| parse_err(line, "clause before the problem line"))?;
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| parse_err(line, &format!("bad literal {tok:?}")))?;
            if lit == 0 {
                parsed_clauses += 1;
                let lits = std::mem::take(&mut pending);
                match Clause::new(lits) {
                    Some(c) => clauses.push((pending_line.max(line), c)),
                    None => warnings.push(Warning::Tautology {
                        line: pending_line.max(line),
                    }),
                }
                pending_line = 0;
                continue;
            }
            if lit.unsigned_abs() > u64::from(nvars) {
                return Err(parse_err(
                    line,
                    &format!("literal {lit} exceeds the declared {nvars} variables"),
                ));
            }
            if pending.is_empty() {
                pending_line = line;
            }
            pending.push(Literal::from_dimacs(lit)?);
        }
    }

    let (nvars, declared) =
        header.ok_or_else(|| parse_err(text.lines().count().max(1), "missing problem line"))?;
    if !pending.is_empty() {
        return Err(parse_err(pending_line, "clause not terminated by 0"));
    }

    let mut kept = Vec::with_capacity(clauses.len());
    let mut seen = std::collections::HashSet::new();
    for (line, c) in clauses {
        if seen.insert(c.set_key()) {
            kept.push(c);
        } else {
            warnings.push(Warning::DuplicateClause { line });
        }
    }
    if kept.len() != declared || parsed_clauses != declared {
        warnings.push(Warning::ClauseCount {
            declared,
            found: kept.len(),
        });
    }
    for w in &warnings {
        warn!("{w}");
    }
    let formula = CnfFormula::with_universe((1..=nvars).map(Var), kept)?;
    Ok(Dimacs { formula, warnings })
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, usize)> {
    let toks: Vec<&str> = line_text.split_whitespace().collect();
    match toks.as_slice() {
        ["p", "cnf", v, c] => {
            let v = v
                .parse()
                .map_err(|_| parse_err(line, &format!("bad variable count {v:?}")))?;
            let c = c
                .parse()
                .map_err(|_| parse_err(line, &format!("bad clause count {c:?}")))?;
            Ok((v, c))
        }
        _ => Err(parse_err(
            line,
            "malformed problem line, expected `p cnf <vars> <clauses>`",
        )),
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

pub fn emit_dimacs(f: &CnfFormula) -> String {
    let max_var = f.universe().last().map_or(0, |v| v.0);
    let mut out = format!("p cnf {max_var} {}\n", f.clauses().len());
    for c in f.clauses() {
        write_clause(&mut out, c);
    }
    out
}

pub(crate) fn write_clause(out: &mut String, c: &Clause) {
    for l in c.literals() {
        let _ = write!(out, "{} ", l.to_dimacs());
    }
    out.push_str("0\n");
}
