//! Dense truth-table algebra over `B0 = {0, 1}`.
//!
//! A [`TruthTable`] over `n` variables stores `2^n` output bits. The entry at
//! point `p` is the value of the function at the assignment where variable
//! `j` takes bit `j` of `p` (least-significant first), so variable 0 toggles
//! fastest.
//!
//! On top of the table sit the cofactor machinery ([`cofactor`]) and the
//! consistency checks for `f = 1` ([`consistency`]). Tables are capped at
//! [`MAX_VARS`] variables; this layer exists to check the algebra
//! exhaustively, not to scale.

pub mod cofactor;
pub mod consistency;
mod parse;

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use crate::{Error, Result};

pub use cofactor::{
    canonical_cofactors, cofactor_interval, cofactor_member, cofactor_sample, cofactor_sum,
    compose, compose_via_expansion, expand, expansion_identity, is_orthonormal, on_term_expansions,
    quotient, term_assignment, BaseSet, CofactorInterval, Identity, TermExpansions,
};
pub use consistency::{
    active_indices, consistency_over_base, consistency_over_on, consistency_with_cofactors,
    OnVerdict, Verdict,
};

/// Hard cap on the number of variables of a [`TruthTable`].
pub const MAX_VARS: usize = 16;

/// Index of a variable inside a truth table's ordered universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// A Boolean function `B0^n -> B0` stored as a bit vector of length `2^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_vars: usize,
    // Bits above 2^n in the last word are always zero.
    words: Vec<u64>,
}

fn word_count(num_vars: usize) -> usize {
    if num_vars <= 6 {
        1
    } else {
        1 << (num_vars - 6)
    }
}

fn tail_mask(num_vars: usize) -> u64 {
    if num_vars >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << num_vars)) - 1
    }
}

fn check_vars(num_vars: usize) -> Result<()> {
    if num_vars > MAX_VARS {
        return Err(Error::Capacity {
            what: "truth table",
            got: num_vars,
            limit: MAX_VARS,
        });
    }
    Ok(())
}

impl TruthTable {
    pub fn zero(num_vars: usize) -> Result<Self> {
        check_vars(num_vars)?;
        Ok(Self {
            num_vars,
            words: vec![0; word_count(num_vars)],
        })
    }

    pub fn one(num_vars: usize) -> Result<Self> {
        let mut t = Self::zero(num_vars)?;
        t.words.iter_mut().for_each(|w| *w = u64::MAX);
        t.clear_tail();
        Ok(t)
    }

    /// The projection `x_var`.
    pub fn var(num_vars: usize, var: usize) -> Result<Self> {
        Self::literal(num_vars, var, true)
    }

    /// `x_var` if `positive`, otherwise `x_var'`.
    pub fn literal(num_vars: usize, var: usize, positive: bool) -> Result<Self> {
        if var >= num_vars {
            return Err(Error::Usage(format!(
                "variable x{var} outside a universe of {num_vars} variables"
            )));
        }
        Self::from_fn(num_vars, |p| ((p >> var) & 1 == 1) == positive)
    }

    /// The minterm selecting exactly `point`.
    pub fn minterm(num_vars: usize, point: usize) -> Result<Self> {
        check_vars(num_vars)?;
        if point >= 1 << num_vars {
            return Err(Error::Usage(format!(
                "point {point} outside a universe of {num_vars} variables"
            )));
        }
        Self::from_fn(num_vars, |p| p == point)
    }

    pub fn from_fn(num_vars: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut t = Self::zero(num_vars)?;
        for p in 0..t.len() {
            if f(p) {
                t.words[p >> 6] |= 1 << (p & 63);
            }
        }
        Ok(t)
    }

    pub fn from_bits(num_vars: usize, bits: &[bool]) -> Result<Self> {
        check_vars(num_vars)?;
        if bits.len() != 1 << num_vars {
            return Err(Error::Usage(format!(
                "expected {} bits for {num_vars} variables, got {}",
                1usize << num_vars,
                bits.len()
            )));
        }
        Self::from_fn(num_vars, |p| bits[p])
    }

    /// Builds a table over `num_vars <= 6` variables from the low `2^n` bits
    /// of `bits`. Higher bits are ignored.
    pub fn from_u64(num_vars: usize, bits: u64) -> Result<Self> {
        if num_vars > 6 {
            return Err(Error::Capacity {
                what: "u64 truth table",
                got: num_vars,
                limit: 6,
            });
        }
        let mut t = Self::zero(num_vars)?;
        t.words[0] = bits;
        t.clear_tail();
        Ok(t)
    }

    /// Parses an expression over `x0 .. x15`: postfix `'` is complement,
    /// juxtaposition or `*` is AND, `^` is XOR, `+` is OR (loosest), plus
    /// the constants `0`/`1` and parentheses.
    pub fn parse(expr: &str, num_vars: usize) -> Result<Self> {
        parse::parse_expr(expr, num_vars)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.num_vars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, point: usize) -> bool {
        assert!(point < self.len(), "point {point} out of range");
        (self.words[point >> 6] >> (point & 63)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        let full = self.words.len() - 1;
        self.words[..full].iter().all(|&w| w == u64::MAX)
            && self.words[full] == tail_mask(self.num_vars)
    }

    /// `|supp f|`, the number of points where `f = 1`.
    pub fn support_size(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Points of `supp f` in ascending order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| self.get(p))
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| (i << 6) + w.trailing_zeros() as usize)
    }

    pub fn same_universe(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::UniverseMismatch(format!(
                "{} vs {} variables",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(self.zip(other, |a, b| a & b))
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(self.zip(other, |a, b| a | b))
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(self.zip(other, |a, b| a ^ b))
    }

    pub fn complement(&self) -> Self {
        let mut t = Self {
            num_vars: self.num_vars,
            words: self.words.iter().map(|w| !w).collect(),
        };
        t.clear_tail();
        t
    }

    /// `f <= h` pointwise, i.e. `f h' = 0`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// Fixes `var := value`. The result is over the same universe and no
    /// longer depends on `var`.
    pub fn restrict(&self, var: usize, value: bool) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::Usage(format!(
                "variable x{var} outside a universe of {} variables",
                self.num_vars
            )));
        }
        let bit = 1usize << var;
        Self::from_fn(self.num_vars, |p| {
            self.get(if value { p | bit } else { p & !bit })
        })
    }

    /// Fixes several variables at once.
    pub fn restrict_all(&self, bindings: &[(usize, bool)]) -> Result<Self> {
        let mut set = 0usize;
        let mut clear = 0usize;
        for &(var, value) in bindings {
            if var >= self.num_vars {
                return Err(Error::Usage(format!(
                    "variable x{var} outside a universe of {} variables",
                    self.num_vars
                )));
            }
            if value {
                set |= 1 << var;
            } else {
                clear |= 1 << var;
            }
        }
        Self::from_fn(self.num_vars, |p| self.get((p | set) & !clear))
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        Self {
            num_vars: self.num_vars,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    fn clear_tail(&mut self) {
        let mask = tail_mask(self.num_vars);
        if let Some(last) = self.words.last_mut() {
            *last &= mask;
        }
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, ", self.num_vars)?;
        for p in 0..self.len() {
            f.write_str(if self.get(p) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

// Operator forms panic on a universe mismatch; the checked methods above
// return an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&TruthTable> for &TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: &TruthTable) -> TruthTable {
                self.$checked(rhs)
                    .expect("truth tables over different universes")
            }
        }
        impl $trait<TruthTable> for TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: TruthTable) -> TruthTable {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TruthTable> for TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: &TruthTable) -> TruthTable {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(BitAnd, bitand, and);
binop!(BitOr, bitor, or);
binop!(BitXor, bitxor, xor);

impl Not for &TruthTable {
    type Output = TruthTable;
    fn not(self) -> TruthTable {
        self.complement()
    }
}

impl Not for TruthTable {
    type Output = TruthTable;
    fn not(self) -> TruthTable {
        self.complement()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(expr: &str, n: usize) -> TruthTable {
        TruthTable::parse(expr, n).unwrap()
    }

    #[test]
    fn complement_law() {
        let x1 = TruthTable::var(3, 1).unwrap();
        assert!((&x1 & &!&x1).is_zero());
        assert!((&x1 | &!&x1).is_one());
    }

    #[test]
    fn bit_encoding_is_lsb_first() {
        let x0 = TruthTable::var(2, 0).unwrap();
        assert_eq!(format!("{x0:?}"), "TruthTable(n=2, 0101)");
        let x1 = TruthTable::var(2, 1).unwrap();
        assert_eq!(format!("{x1:?}"), "TruthTable(n=2, 0011)");
    }

    #[test]
    fn example2_formula_has_nine_models() {
        // x, y, z, w -> x0, x1, x2, x3
        let f = tt("(x0'+x1+x3)(x1'+x2+x3')(x0+x2+x3')(x0+x2'+x3')", 4);
        let brute = (0..16usize)
            .filter(|&p| {
                let b = |j: usize| (p >> j) & 1 == 1;
                let (x, y, z, w) = (b(0), b(1), b(2), b(3));
                (!x || y || w) && (!y || z || !w) && (x || z || !w) && (x || !z || !w)
            })
            .count();
        assert_eq!(brute, 9);
        assert_eq!(f.support_size(), brute);
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let a = TruthTable::one(2).unwrap();
        let b = TruthTable::one(3).unwrap();
        assert!(matches!(a.and(&b), Err(Error::UniverseMismatch(_))));
        assert!(a.leq(&b).is_err());
    }

    #[test]
    fn capacity_cap() {
        assert!(TruthTable::zero(MAX_VARS).is_ok());
        assert!(matches!(
            TruthTable::zero(MAX_VARS + 1),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn constants_over_many_words() {
        let one = TruthTable::one(8).unwrap();
        assert!(one.is_one());
        assert_eq!(one.support_size(), 256);
        assert!((!&one).is_zero());
        let small = TruthTable::one(2).unwrap();
        assert!(small.is_one());
        assert!((!&small).is_zero());
    }

    #[test]
    fn restrict_matches_substitution() {
        let f = tt("x0x1' + x2", 3);
        let r = f.restrict(2, false).unwrap();
        assert_eq!(r, tt("x0x1'", 3));
        let r = f.restrict_all(&[(0, true), (1, false)]).unwrap();
        assert!(r.is_one());
    }

    #[test]
    fn leq_and_first_one() {
        let a = tt("x0x1", 2);
        let b = tt("x0", 2);
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
        assert_eq!(a.first_one(), Some(3));
        assert_eq!(TruthTable::zero(9).unwrap().first_one(), None);
        assert_eq!(TruthTable::minterm(9, 300).unwrap().first_one(), Some(300));
    }
}
