//! Cofactors relative to arbitrary functions and expansions over base sets.
//!
//! For `g != 0` the cofactors of `f` relative to `g` are the functions that
//! agree with `f` on `supp g`, i.e. the solutions of `alpha g = f g`. They
//! form the interval `[f g, f + g']`. Given a base set `G` whose cover
//! `g_1 + ... + g_m` dominates `f`, any choice of cofactors reconstructs `f`
//! as `sum alpha_i g_i`.
//!
//! Wherever one representative cofactor is needed internally, the lower
//! endpoint `f g` is used.

use super::TruthTable;
use crate::{Error, Result};

/// The interval `[f g, f + g']` of all cofactors of `f` relative to `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofactorInterval {
    pub lower: TruthTable,
    pub upper: TruthTable,
}

impl CofactorInterval {
    pub fn contains(&self, alpha: &TruthTable) -> Result<bool> {
        Ok(self.lower.leq(alpha)? && alpha.leq(&self.upper)?)
    }
}

fn nonzero(g: &TruthTable) -> Result<()> {
    if g.is_zero() {
        return Err(Error::Domain(
            "cofactors are undefined relative to the zero function".into(),
        ));
    }
    Ok(())
}

pub fn cofactor_interval(f: &TruthTable, g: &TruthTable) -> Result<CofactorInterval> {
    f.same_universe(g)?;
    nonzero(g)?;
    Ok(CofactorInterval {
        lower: f & g,
        upper: f | &!g,
    })
}

/// Whether `alpha` is a cofactor of `f` relative to `g` (`alpha g = f g`).
pub fn cofactor_member(alpha: &TruthTable, f: &TruthTable, g: &TruthTable) -> Result<bool> {
    f.same_universe(g)?;
    alpha.same_universe(g)?;
    nonzero(g)?;
    Ok(alpha & g == f & g)
}

/// The member `f g + p g'` of the cofactor set selected by `p`.
pub fn cofactor_sample(f: &TruthTable, g: &TruthTable, p: &TruthTable) -> Result<TruthTable> {
    f.same_universe(g)?;
    p.same_universe(g)?;
    nonzero(g)?;
    Ok((f & g) | (p & &!g))
}

/// A nonempty family of nonzero functions over a common universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet {
    members: Vec<TruthTable>,
}

impl BaseSet {
    pub fn new(members: Vec<TruthTable>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::Domain("a base set needs at least one member".into()))?;
        for (i, g) in members.iter().enumerate() {
            first.same_universe(g)?;
            if g.is_zero() {
                return Err(Error::Domain(format!(
                    "base member {i} is the zero function"
                )));
            }
        }
        Ok(Self { members })
    }

    /// All `2^n` minterms, in point order.
    pub fn minterms(num_vars: usize) -> Result<Self> {
        TruthTable::zero(num_vars)?;
        let members = (0..1usize << num_vars)
            .map(|p| TruthTable::minterm(num_vars, p))
            .collect::<Result<_>>()?;
        Ok(Self { members })
    }

    /// The pair `{g, g'}`; requires `g` non-constant.
    pub fn complement_pair(g: &TruthTable) -> Result<Self> {
        Self::new(vec![g.clone(), !g])
    }

    pub fn members(&self) -> &[TruthTable] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.members[0].num_vars()
    }

    /// `g_1 + ... + g_m`.
    pub fn cover(&self) -> TruthTable {
        self.members
            .iter()
            .skip(1)
            .fold(self.members[0].clone(), |acc, g| acc | g)
    }

    pub fn is_orthonormal(&self) -> bool {
        is_orthonormal(self)
    }

    fn dominates(&self, f: &TruthTable, what: &str) -> Result<()> {
        f.same_universe(&self.members[0])?;
        if !f.leq(&self.cover())? {
            return Err(Error::Precondition(format!(
                "{what} is not below the cover of the base set"
            )));
        }
        Ok(())
    }
}

/// Pairwise disjoint members summing to the constant 1.
pub fn is_orthonormal(base: &BaseSet) -> bool {
    let m = base.members();
    let disjoint = (0..m.len()).all(|i| (i + 1..m.len()).all(|j| (&m[i] & &m[j]).is_zero()));
    disjoint && base.cover().is_one()
}

/// Lower-endpoint cofactors `f g_i` for every member.
pub fn canonical_cofactors(f: &TruthTable, base: &BaseSet) -> Result<Vec<TruthTable>> {
    base.members().iter().map(|g| f.and(g)).collect()
}

/// `sum alpha_i g_i` with no precondition on `f`. When every `alpha_i` is a
/// cofactor of some `f`, this equals `f . cover(G)`.
pub fn cofactor_sum(base: &BaseSet, alphas: &[TruthTable]) -> Result<TruthTable> {
    if alphas.len() != base.len() {
        return Err(Error::Usage(format!(
            "{} coefficients for a base of {} members",
            alphas.len(),
            base.len()
        )));
    }
    let mut acc = TruthTable::zero(base.num_vars())?;
    for (alpha, g) in alphas.iter().zip(base.members()) {
        acc = acc | alpha.and(g)?;
    }
    Ok(acc)
}

/// The generalized cofactor expansion `sum alpha_i g_i` of `f`.
///
/// Requires `f <= cover(G)` and `alpha_i` a cofactor of `f` relative to
/// `g_i`; under those hypotheses the result equals `f`.
pub fn expand(f: &TruthTable, base: &BaseSet, alphas: &[TruthTable]) -> Result<TruthTable> {
    base.dominates(f, "f")?;
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
    }
    cofactor_sum(base, alphas)
}

/// If `t` is a product term (its support is a subcube), the partial
/// assignment `q(t)` forced by `t = 1`, as `(variable, value)` pairs in
/// ascending variable order. `None` for non-terms, including 0.
pub fn term_assignment(t: &TruthTable) -> Option<Vec<(usize, bool)>> {
    let first = t.first_one()?;
    let n = t.num_vars();
    let full = (1usize << n) - 1;
    // Bits on which every support point agrees with `first`.
    let mut agree = full;
    for p in t.support() {
        agree &= !(p ^ first);
    }
    let free = n - agree.count_ones() as usize;
    if t.support_size() != 1 << free {
        return None;
    }
    Some(
        (0..n)
            .filter(|j| agree >> j & 1 == 1)
            .map(|j| (j, first >> j & 1 == 1))
            .collect(),
    )
}

/// The quotient `f / t`: `f` with the assignment forced by the term `t`
/// substituted.
pub fn quotient(f: &TruthTable, t: &TruthTable) -> Result<TruthTable> {
    f.same_universe(t)?;
    let q = term_assignment(t)
        .ok_or_else(|| Error::Precondition(format!("{t:?} is not a product term")))?;
    f.restrict_all(&q)
}

/// The dual expansions of `f` over an orthonormal set of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermExpansions {
    /// `sum (f/t_i) t_i`
    pub sum_form: TruthTable,
    /// `prod ((f/t_i) + t_i')`
    pub product_form: TruthTable,
}

pub fn on_term_expansions(f: &TruthTable, terms: &BaseSet) -> Result<TermExpansions> {
    f.same_universe(&terms.members()[0])?;
    if !terms.is_orthonormal() {
        return Err(Error::Precondition("term set is not orthonormal".into()));
    }
    let n = f.num_vars();
    let mut sum_form = TruthTable::zero(n)?;
    let mut product_form = TruthTable::one(n)?;
    for t in terms.members() {
        let q = quotient(f, t)?;
        sum_form = sum_form | (&q & t);
        product_form = product_form & (&q | &!t);
    }
    Ok(TermExpansions {
        sum_form,
        product_form,
    })
}

/// Which identity of the cofactor algebra to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum Identity<'a> {
    /// `f + h = sum (alpha_i + beta_i) g_i`
    Sum(&'a TruthTable),
    /// `f h = sum (alpha_i beta_i) g_i`
    Product(&'a TruthTable),
    /// `f' = sum alpha_i' g_i`, only under `cover(G) = 1`
    Complement,
    /// `f ^ h = sum (alpha_i ^ beta_i) g_i`
    Xor(&'a TruthTable),
}

/// Evaluates the right-hand side of an expansion identity with
/// lower-endpoint cofactors `alpha_i = f g_i`, `beta_i = h g_i`.
///
/// Preconditions: `f, h <= cover(G)` for the binary identities;
/// `cover(G) = 1` for the complement, since `f <= cover` does not bound `f'`.
pub fn expansion_identity(
    f: &TruthTable,
    identity: Identity<'_>,
    base: &BaseSet,
) -> Result<TruthTable> {
    base.dominates(f, "f")?;
    let alphas = canonical_cofactors(f, base)?;
    let coeffs: Vec<TruthTable> = match identity {
        Identity::Complement => {
            if !base.cover().is_one() {
                return Err(Error::Precondition(
                    "the complement identity needs a base whose cover is 1".into(),
                ));
            }
            alphas.iter().map(|a| !a).collect()
        }
        Identity::Sum(h) | Identity::Product(h) | Identity::Xor(h) => {
            base.dominates(h, "h")?;
            let betas = canonical_cofactors(h, base)?;
            alphas
                .iter()
                .zip(&betas)
                .map(|(a, b)| match identity {
                    Identity::Sum(_) => a | b,
                    Identity::Product(_) => a & b,
                    _ => a ^ b,
                })
                .collect()
        }
    };
    cofactor_sum(base, &coeffs)
}

/// Direct composition `f(h_1(x), ..., h_k(x))` where `f` has `k` variables.
pub fn compose(f: &TruthTable, hs: &[TruthTable]) -> Result<TruthTable> {
    let first = check_composition(f, hs)?;
    TruthTable::from_fn(first.num_vars(), |x| {
        f.get(point_of(hs.iter().map(|h| h.get(x))))
    })
}

/// Composition through an orthonormal expansion:
/// `sum_j f(beta_1j, ..., beta_kj) phi_j` with `beta_ij = h_i phi_j`.
pub fn compose_via_expansion(
    f: &TruthTable,
    hs: &[TruthTable],
    phi: &BaseSet,
) -> Result<TruthTable> {
    let first = check_composition(f, hs)?;
    first.same_universe(&phi.members()[0])?;
    if !phi.is_orthonormal() {
        return Err(Error::Precondition(
            "composition by expansion needs an orthonormal base".into(),
        ));
    }
    let mut acc = TruthTable::zero(first.num_vars())?;
    for p in phi.members() {
        let betas: Vec<TruthTable> = hs.iter().map(|h| h & p).collect();
        let alpha = TruthTable::from_fn(first.num_vars(), |x| {
            f.get(point_of(betas.iter().map(|b| b.get(x))))
        })?;
        acc = acc | (alpha & p);
    }
    Ok(acc)
}

fn check_composition<'a>(f: &TruthTable, hs: &'a [TruthTable]) -> Result<&'a TruthTable> {
    if hs.len() != f.num_vars() {
        return Err(Error::Usage(format!(
            "f has {} variables but {} inner functions were given",
            f.num_vars(),
            hs.len()
        )));
    }
    let first = hs
        .first()
        .ok_or_else(|| Error::Usage("composition needs at least one inner function".into()))?;
    for h in hs {
        first.same_universe(h)?;
    }
    Ok(first)
}

fn point_of(bits: impl Iterator<Item = bool>) -> usize {
    bits.enumerate()
        .fold(0, |acc, (j, b)| acc | (usize::from(b) << j))
}
