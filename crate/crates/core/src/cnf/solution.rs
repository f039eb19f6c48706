//! Explicit solution sets over an ordered variable list.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Literal, PartialAssignment, Var};
use crate::boolfn::TruthTable;
use crate::{Error, Result};

/// One full assignment; entry `j` is the value of the `j`-th variable of the
/// owning set. Rows order by their bit encoding with entry `j` as bit `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row(Vec<bool>);

impl Row {
    pub fn new(values: Vec<bool>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}

impl Ord for Row {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Row {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A set of full assignments over `over`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionSet {
    over: Vec<Var>,
    rows: Vec<Row>,
}

impl SolutionSet {
    /// `over` must be strictly ascending; every row must have one value per
    /// variable. Rows are sorted and deduplicated.
    pub fn new(over: Vec<Var>, rows: impl IntoIterator<Item = Row>) -> Result<Self> {
        if over.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage(
                "solution variables must be strictly ascending".into(),
            ));
        }
        let mut set = BTreeSet::new();
        for r in rows {
            if r.0.len() != over.len() {
                return Err(Error::Usage(format!(
                    "row of width {} for {} variables",
                    r.0.len(),
                    over.len()
                )));
            }
            set.insert(r);
        }
        Ok(Self {
            over,
            rows: set.into_iter().collect(),
        })
    }

    pub fn empty(over: Vec<Var>) -> Result<Self> {
        Self::new(over, [])
    }

    /// Every assignment over `over`.
    pub fn all(over: Vec<Var>) -> Result<Self> {
        let n = over.len();
        if n > 24 {
            return Err(Error::Capacity {
                what: "explicit solution set",
                got: n,
                limit: 24,
            });
        }
        let rows = (0..1usize << n).map(|p| Row((0..n).map(|j| p >> j & 1 == 1).collect()));
        Self::new(over, rows)
    }

    /// Solutions of a truth table whose variable `j` is `over[j]`.
    pub fn from_truth_table(over: Vec<Var>, table: &TruthTable) -> Result<Self> {
        if table.num_vars() != over.len() {
            return Err(Error::UniverseMismatch(format!(
                "{} variables for a table over {}",
                over.len(),
                table.num_vars()
            )));
        }
        let n = over.len();
        let rows: Vec<Row> = table
            .support()
            .map(|p| Row((0..n).map(|j| p >> j & 1 == 1).collect()))
            .collect();
        Self::new(over, rows)
    }

    pub fn over(&self) -> &[Var] {
        &self.over
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &Row) -> bool {
        self.rows.binary_search(row).is_ok()
    }

    /// Row `i` as a partial assignment.
    pub fn assignment(&self, i: usize) -> PartialAssignment {
        PartialAssignment::from_pairs(
            self.over
                .iter()
                .copied()
                .zip(self.rows[i].0.iter().copied()),
        )
        .expect("variables of a solution set are distinct")
    }

    pub fn assignments(&self) -> impl Iterator<Item = PartialAssignment> + '_ {
        (0..self.rows.len()).map(|i| self.assignment(i))
    }

    /// Row `i` as signed DIMACS literals in ascending variable order.
    pub fn literals(&self, i: usize) -> Vec<i64> {
        self.over
            .iter()
            .zip(&self.rows[i].0)
            .map(|(&v, &b)| Literal::new(v, b).to_dimacs())
            .collect()
    }

    /// One line per row: signed literals in ascending variable order,
    /// terminated by `0`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows.len() {
            for l in self.literals(i) {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}
