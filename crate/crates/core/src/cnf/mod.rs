//! Symbolic CNF formulas.
//!
//! Variables carry their DIMACS ids (1-based). A [`Clause`] keeps its
//! literals in input order, because the order of a clause's partial
//! assignments follows literal position. Tautologies never become clauses
//! and formulas hold each clause at most once (compared as literal sets).

mod dimacs;
mod solution;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::boolfn::{TruthTable, MAX_VARS};
use crate::{Error, Result};

pub use dimacs::{emit_dimacs, parse_dimacs, Dimacs, Warning};
pub use solution::{Row, SolutionSet};

/// Largest clause whose `2^k - 1` partial assignments we agree to list.
pub const MAX_PIVOT_LITERALS: usize = 24;

/// A variable, identified by its 1-based DIMACS index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    /// `true` for `x`, `false` for `x'`.
    pub positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        Self { var, positive }
    }

    /// From a nonzero signed DIMACS integer.
    pub fn from_dimacs(lit: i64) -> Result<Self> {
        let id = u32::try_from(lit.unsigned_abs())
            .ok()
            .filter(|&id| id != 0)
            .ok_or_else(|| Error::Usage(format!("{lit} is not a DIMACS literal")))?;
        Ok(Self::new(Var(id), lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var.0);
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn negate(self) -> Self {
        Self::new(self.var, !self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, dropping repeated literals. Returns `None` for a
    /// tautology (a clause containing both `x` and `x'`).
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Option<Self> {
        let mut seen: BTreeMap<Var, bool> = BTreeMap::new();
        let mut out = Vec::new();
        for lit in lits {
            match seen.get(&lit.var) {
                Some(&p) if p == lit.positive => continue,
                Some(_) => return None,
                None => {
                    seen.insert(lit.var, lit.positive);
                    out.push(lit);
                }
            }
        }
        Some(Self { lits: out })
    }

    /// The empty clause, which no assignment satisfies.
    pub fn empty() -> Self {
        Self { lits: Vec::new() }
    }

    pub fn from_dimacs(lits: &[i64]) -> Result<Option<Self>> {
        let lits = lits
            .iter()
            .map(|&l| Literal::from_dimacs(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(lits))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Sorted distinct variables of the clause.
    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.lits.iter().map(|l| l.var).collect();
        v.sort_unstable();
        v
    }

    fn set_key(&self) -> Vec<Literal> {
        let mut k = self.lits.clone();
        k.sort_unstable();
        k
    }

    /// `Some(true)` if some literal is true under `q`, `Some(false)` if all
    /// literals are false, `None` otherwise.
    pub fn eval(&self, q: &PartialAssignment) -> Option<bool> {
        let mut undecided = false;
        for lit in &self.lits {
            match q.get(lit.var) {
                Some(v) if v == lit.positive => return Some(true),
                Some(_) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// The SAT set `s(C)`: each literal's variable bound to the value that
    /// makes the literal true.
    pub fn sat_set(&self) -> Result<PartialAssignment> {
        if self.is_empty() {
            return Err(Error::Domain("the empty clause has no SAT set".into()));
        }
        Ok(PartialAssignment {
            bindings: self.lits.iter().map(|l| (l.var, l.positive)).collect(),
        })
    }

    /// All `2^k - 1` nonempty subsets of the SAT set, by ascending size and
    /// then lexicographically by literal position.
    pub fn partial_assignments(&self) -> Result<Vec<PartialAssignment>> {
        if self.is_empty() {
            return Err(Error::Domain(
                "the empty clause has no partial assignments".into(),
            ));
        }
        let k = self.len();
        if k > MAX_PIVOT_LITERALS {
            return Err(Error::Capacity {
                what: "pivot clause",
                got: k,
                limit: MAX_PIVOT_LITERALS,
            });
        }
        let mut out = Vec::with_capacity((1 << k) - 1);
        for size in 1..=k {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                out.push(PartialAssignment {
                    bindings: idx
                        .iter()
                        .map(|&i| (self.lits[i].var, self.lits[i].positive))
                        .collect(),
                });
                // Advance to the next combination in lexicographic order.
                let Some(pos) = (0..size).rev().find(|&i| idx[i] != i + k - size) else {
                    break;
                };
                idx[pos] += 1;
                for j in pos + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// A finite mapping from variables to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    bindings: BTreeMap<Var, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// From `(var, value)` pairs; binding a variable twice is an error even
    /// when the values agree.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, bool)>) -> Result<Self> {
        let mut q = Self::new();
        for (v, b) in pairs {
            q.bind(v, b)?;
        }
        Ok(q)
    }

    /// From signed DIMACS literals, e.g. `[-1, 4]` is `{x1 = 0, x4 = 1}`.
    pub fn from_dimacs(lits: &[i64]) -> Result<Self> {
        let pairs = lits
            .iter()
            .map(|&l| Literal::from_dimacs(l).map(|l| (l.var, l.positive)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    pub fn bind(&mut self, var: Var, value: bool) -> Result<()> {
        if self.bindings.insert(var, value).is_some() {
            return Err(Error::Usage(format!("{var} is bound twice")));
        }
        Ok(())
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bindings.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.iter().map(|(v, b)| Literal::new(v, b))
    }

    /// Disjoint union; a variable bound on both sides is an error.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (v, b) in other.iter() {
            out.bind(v, b)?;
        }
        Ok(out)
    }

    /// Whether every binding of `self` also appears in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|(v, b)| other.get(v) == Some(b))
    }

    /// Bindings of `self` not present in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        Self {
            bindings: self
                .iter()
                .filter(|&(v, b)| other.get(v) != Some(b))
                .collect(),
        }
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={}", u8::from(b))?;
        }
        f.write_str("}")
    }
}

/// Result of substituting a partial assignment into a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced {
    Formula(CnfFormula),
    /// Some clause lost all of its literals.
    Unsat,
}

impl Reduced {
    pub fn formula(&self) -> Option<&CnfFormula> {
        match self {
            Reduced::Formula(f) => Some(f),
            Reduced::Unsat => None,
        }
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Reduced::Unsat)
    }
}

/// A conjunction of clauses over an ordered variable universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    universe: Vec<Var>,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// A formula whose universe is exactly the variables that occur.
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let clauses = dedup(clauses);
        let universe = occurring(&clauses);
        Self { universe, clauses }
    }

    /// A formula over an explicit (possibly wider) universe.
    pub fn with_universe(
        universe: impl IntoIterator<Item = Var>,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<Self> {
        let universe: Vec<Var> = universe
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let clauses = dedup(clauses);
        for c in &clauses {
            for l in c.literals() {
                if universe.binary_search(&l.var).is_err() {
                    return Err(Error::Usage(format!(
                        "clause {c} mentions {} outside the universe",
                        l.var
                    )));
                }
            }
        }
        Ok(Self { universe, clauses })
    }

    /// Shorthand for tests and examples: clauses as signed DIMACS integers,
    /// tautologies dropped, universe = occurring variables.
    pub fn from_dimacs_clauses(clauses: &[&[i64]]) -> Result<Self> {
        let mut out = Vec::new();
        for c in clauses {
            if let Some(c) = Clause::from_dimacs(c)? {
                out.push(c);
            }
        }
        Ok(Self::new(out))
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn universe(&self) -> &[Var] {
        &self.universe
    }

    pub fn num_vars(&self) -> usize {
        self.universe.len()
    }

    /// Sorted distinct variables that occur in some clause.
    pub fn formula_vars(&self) -> Vec<Var> {
        occurring(&self.clauses)
    }

    pub fn is_trivial(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// The same clauses over the occurring variables only.
    pub fn compact(&self) -> Self {
        Self {
            universe: self.formula_vars(),
            clauses: self.clauses.clone(),
        }
    }

    /// Conjunction; the universe is the union of both universes.
    pub fn conjoin(&self, other: &Self) -> Self {
        let universe: BTreeSet<Var> = self
            .universe
            .iter()
            .chain(&other.universe)
            .copied()
            .collect();
        Self {
            universe: universe.into_iter().collect(),
            clauses: dedup(self.clauses.iter().chain(&other.clauses).cloned()),
        }
    }

    /// Substitutes `q`: satisfied clauses disappear, falsified literals are
    /// removed, and an emptied clause makes the whole result [`Reduced::Unsat`].
    /// The universe loses every variable bound by `q`.
    pub fn substitute(&self, q: &PartialAssignment) -> Reduced {
        let mut out = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            if c.eval(q) == Some(true) {
                continue;
            }
            let rest: Vec<Literal> = c
                .literals()
                .iter()
                .copied()
                .filter(|l| q.get(l.var).is_none())
                .collect();
            if rest.is_empty() {
                return Reduced::Unsat;
            }
            out.push(Clause { lits: rest });
        }
        Reduced::Formula(Self {
            universe: self
                .universe
                .iter()
                .copied()
                .filter(|&v| q.get(v).is_none())
                .collect(),
            clauses: dedup(out),
        })
    }

    /// `Some(value)` once `q` decides the formula, `None` otherwise.
    pub fn eval(&self, q: &PartialAssignment) -> Option<bool> {
        let mut undecided = false;
        for c in &self.clauses {
            match c.eval(q) {
                Some(false) => return Some(false),
                None => undecided = true,
                Some(true) => {}
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    /// Dense semantics; universe position `j` becomes truth-table variable `j`.
    pub fn to_truth_table(&self) -> Result<TruthTable> {
        let n = self.universe.len();
        if n > MAX_VARS {
            return Err(Error::Capacity {
                what: "formula universe",
                got: n,
                limit: MAX_VARS,
            });
        }
        // Each clause as (positive mask, negative mask) over universe positions.
        let masks: Vec<(usize, usize)> = self
            .clauses
            .iter()
            .map(|c| {
                c.literals().iter().fold((0, 0), |(pos, neg), l| {
                    let bit = 1usize << self.position(l.var).expect("literal in universe");
                    if l.positive {
                        (pos | bit, neg)
                    } else {
                        (pos, neg | bit)
                    }
                })
            })
            .collect();
        TruthTable::from_fn(n, |p| {
            masks
                .iter()
                .all(|&(pos, neg)| p & pos != 0 || !p & neg != 0)
        })
    }

    /// Position of `var` in the universe.
    pub fn position(&self, var: Var) -> Option<usize> {
        self.universe.binary_search(&var).ok()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("1");
        }
        for c in &self.clauses {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn dedup(clauses: impl IntoIterator<Item = Clause>) -> Vec<Clause> {
    let mut seen = HashSet::new();
    clauses
        .into_iter()
        .filter(|c| seen.insert(c.set_key()))
        .collect()
}

fn occurring(clauses: &[Clause]) -> Vec<Var> {
    clauses
        .iter()
        .flat_map(|c| c.literals().iter().map(|l| l.var))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
