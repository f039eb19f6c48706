#![allow(dead_code)]

use cofsat::boolfn::{BaseSet, TruthTable};
use std::fmt::Write as _;

use cofsat::cnf::{CnfFormula, PartialAssignment, Reduced, Row, SolutionSet, Var};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::Rng;

/// Random 3-CNF as signed DIMACS clauses over variables `1..=n`.
pub fn random_3cnf(rng: &mut StdRng, n: usize, m: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| {
            sample(rng, n, 3.min(n))
                .into_iter()
                .map(|v| {
                    let v = v as i64 + 1;
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

pub fn to_formula(clauses: &[Vec<i64>], n: usize) -> CnfFormula {
    let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
    let f = CnfFormula::from_dimacs_clauses(&refs).unwrap();
    CnfFormula::with_universe((1..=n as u32).map(Var), f.clauses().to_vec()).unwrap()
}

/// Brute force straight from the integer clauses: every assignment of
/// `1..=n`, kept when each clause has a true literal. Shares no code with
/// the crate beyond the result container.
pub fn brute_force(clauses: &[Vec<i64>], n: usize) -> SolutionSet {
    let mut rows = Vec::new();
    for p in 0u64..1 << n {
        let value = |v: i64| p >> (v.unsigned_abs() - 1) & 1 == 1;
        let ok = clauses
            .iter()
            .all(|c| c.iter().any(|&l| value(l) == (l > 0)));
        if ok {
            rows.push(Row::new((0..n).map(|j| p >> j & 1 == 1).collect()));
        }
    }
    SolutionSet::new((1..=n as u32).map(Var).collect(), rows).unwrap()
}

pub fn random_table(rng: &mut StdRng, n: usize) -> TruthTable {
    let bits: Vec<bool> = (0..1usize << n).map(|_| rng.random_bool(0.5)).collect();
    TruthTable::from_bits(n, &bits).unwrap()
}

pub fn random_nonzero(rng: &mut StdRng, n: usize) -> TruthTable {
    loop {
        let t = random_table(rng, n);
        if !t.is_zero() {
            return t;
        }
    }
}

pub fn random_base(rng: &mut StdRng, n: usize, m: usize) -> BaseSet {
    BaseSet::new((0..m).map(|_| random_nonzero(rng, n)).collect()).unwrap()
}

/// A random orthonormal base: each point is assigned to one of `m` blocks,
/// empty blocks dropped.
pub fn random_on_base(rng: &mut StdRng, n: usize, m: usize) -> BaseSet {
    let owner: Vec<usize> = (0..1usize << n).map(|_| rng.random_range(0..m)).collect();
    let members = (0..m)
        .map(|b| TruthTable::from_fn(n, |p| owner[p] == b).unwrap())
        .filter(|t| !t.is_zero())
        .collect();
    BaseSet::new(members).unwrap()
}

/// All tables over `n <= 3` variables.
pub fn all_tables(n: usize) -> Vec<TruthTable> {
    (0..1u64 << (1 << n))
        .map(|bits| TruthTable::from_u64(n, bits).unwrap())
        .collect()
}

/// Pointwise reference for `f(h_1(x), ..., h_k(x))`.
pub fn compose_pointwise(f: &TruthTable, hs: &[TruthTable]) -> TruthTable {
    TruthTable::from_fn(hs[0].num_vars(), |x| {
        let mut y = 0;
        for (i, h) in hs.iter().enumerate() {
            if h.get(x) {
                y |= 1 << i;
            }
        }
        f.get(y)
    })
    .unwrap()
}

fn lits(pa: &PartialAssignment) -> String {
    pa.literals()
        .map(|l| l.to_dimacs().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// SAT sets, the partial assignments of C1 and the reduced formulas, in the
/// golden file's layout.
pub fn render_example2(f: &CnfFormula) -> String {
    let mut out = String::new();
    for (i, c) in f.clauses().iter().enumerate() {
        let _ = writeln!(out, "s {}: {}", i + 1, lits(&c.sat_set().unwrap()));
    }
    let qs = f.clauses()[0].partial_assignments().unwrap();
    for (i, q) in qs.iter().enumerate() {
        let _ = writeln!(out, "q {}: {}", i + 1, lits(q));
    }
    for (i, q) in qs.iter().enumerate() {
        let Reduced::Formula(r) = f.substitute(q) else {
            panic!("row {} reduced to the unsat marker", i + 1)
        };
        let clauses: Vec<String> = r.clauses().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "r {}: {}", i + 1, clauses.join(" "));
    }
    out
}
