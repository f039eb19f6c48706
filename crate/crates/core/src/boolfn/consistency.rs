//! Consistency of `f = 1` decided through cofactors over a base set.
//!
//! With `f <= cover(G)`, `f = 1` has a solution iff for some member `g_i`
//! the system `alpha_i = 1, g_i = 1` has one, for any cofactor `alpha_i` of
//! `f` relative to `g_i`. Over an orthonormal base exactly one member is
//! active at each point.

use super::cofactor::{canonical_cofactors, cofactor_member, BaseSet};
use super::TruthTable;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub sat: bool,
    /// Index of the base member whose system `alpha_i = 1, g_i = 1` was
    /// found consistent.
    pub witness_index: Option<usize>,
    /// A point solving that system, in truth-table point encoding.
    pub witness_point: Option<usize>,
}

impl Verdict {
    fn unsat() -> Self {
        Self {
            sat: false,
            witness_index: None,
            witness_point: None,
        }
    }
}

/// Decides `f = 1` using the lower-endpoint cofactors `f g_i`.
pub fn consistency_over_base(f: &TruthTable, base: &BaseSet) -> Result<Verdict> {
    let alphas = canonical_cofactors(f, base)?;
    consistency_with_cofactors(f, base, &alphas)
}

/// Decides `f = 1` from an arbitrary choice of cofactors. The verdict does
/// not depend on that choice.
pub fn consistency_with_cofactors(
    f: &TruthTable,
    base: &BaseSet,
    alphas: &[TruthTable],
) -> Result<Verdict> {
    f.same_universe(&base.members()[0])?;
    if !f.leq(&base.cover())? {
        return Err(Error::Precondition(
            "f is not below the cover of the base set".into(),
        ));
    }
    if alphas.len() != base.len() {
        return Err(Error::Usage(format!(
            "{} coefficients for a base of {} members",
            alphas.len(),
            base.len()
        )));
    }
    for (i, (alpha, g)) in alphas.iter().zip(base.members()).enumerate() {
        if !cofactor_member(alpha, f, g)? {
            return Err(Error::Precondition(format!(
                "coefficient {i} is not a cofactor of f relative to member {i}"
            )));
        }
        if let Some(x) = (alpha & g).first_one() {
            return Ok(Verdict {
                sat: true,
                witness_index: Some(i),
                witness_point: Some(x),
            });
        }
    }
    Ok(Verdict::unsat())
}

/// Indices of the members with `g_i(point) = 1`.
pub fn active_indices(base: &BaseSet, point: usize) -> Vec<usize> {
    base.members()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.get(point))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnVerdict {
    pub verdict: Verdict,
    /// Every satisfying point of `f` activates exactly one member.
    pub exactly_one: bool,
}

/// Decides `f = 1` over an orthonormal base and checks that each satisfying
/// point of `f` selects a unique member.
pub fn consistency_over_on(f: &TruthTable, phi: &BaseSet) -> Result<OnVerdict> {
    f.same_universe(&phi.members()[0])?;
    if !phi.is_orthonormal() {
        return Err(Error::Precondition("base set is not orthonormal".into()));
    }
    let verdict = consistency_over_base(f, phi)?;
    let exactly_one = f.support().all(|x| active_indices(phi, x).len() == 1);
    Ok(OnVerdict {
        verdict,
        exactly_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(expr: &str, n: usize) -> TruthTable {
        TruthTable::parse(expr, n).unwrap()
    }

    #[test]
    fn zero_is_inconsistent() {
        let base = BaseSet::new(vec![tt("x0", 2), tt("x1", 2)]).unwrap();
        let v = consistency_over_base(&TruthTable::zero(2).unwrap(), &base).unwrap();
        assert_eq!(v, Verdict::unsat());
    }

    #[test]
    fn single_member_base() {
        let g = tt("x0 x1' + x2", 3);
        let base = BaseSet::new(vec![g.clone()]).unwrap();
        let v = consistency_over_base(&g, &base).unwrap();
        assert!(v.sat);
        assert_eq!(v.witness_index, Some(0));
        assert!(g.get(v.witness_point.unwrap()));
    }

    #[test]
    fn four_clause_example_is_consistent() {
        let clauses = ["x0'+x1+x3", "x1'+x2+x3'", "x0+x2+x3'", "x0+x2'+x3'"];
        let members: Vec<_> = clauses.iter().map(|c| tt(c, 4)).collect();
        let f = members
            .iter()
            .skip(1)
            .fold(members[0].clone(), |a, c| a & c);
        let base = BaseSet::new(members).unwrap();
        let v = consistency_over_base(&f, &base).unwrap();
        assert!(v.sat);
        assert!(f.get(v.witness_point.unwrap()));
    }

    #[test]
    fn precondition_f_below_cover() {
        let base = BaseSet::new(vec![tt("x0", 2)]).unwrap();
        assert!(matches!(
            consistency_over_base(&tt("x1", 2), &base),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn on_member_and_zero() {
        let phi = BaseSet::minterms(2).unwrap();
        let f = phi.members()[2].clone();
        let v = consistency_over_on(&f, &phi).unwrap();
        assert!(v.verdict.sat && v.exactly_one);
        assert_eq!(v.verdict.witness_index, Some(2));
        assert_eq!(v.verdict.witness_point, Some(2));

        let v = consistency_over_on(&TruthTable::zero(2).unwrap(), &phi).unwrap();
        assert!(!v.verdict.sat);

        let not_on = BaseSet::new(vec![tt("x0", 2), tt("x1", 2)]).unwrap();
        assert!(consistency_over_on(&tt("x0", 2), &not_on).is_err());
    }

    #[test]
    fn minterm_index_selects_point() {
        let phi = BaseSet::minterms(3).unwrap();
        let f = tt("x0 ^ x1 + x2", 3);
        for x in f.support() {
            assert_eq!(active_indices(&phi, x), vec![x]);
        }
    }
}
