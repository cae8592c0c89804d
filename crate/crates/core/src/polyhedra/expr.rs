//! Linear expressions with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::VarId;

/// `sum(coeff_i * var_i) + constant` with exact rational coefficients.
///
/// This is the interchange type between the model layer (guards, invariants,
/// weight updates) and the polyhedron layer; [`super::Row`] is its
/// integer-scaled normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearExpr {
    terms: BTreeMap<VarId, BigRational>,
    constant: BigRational,
}

impl LinearExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self { terms: BTreeMap::new(), constant: c }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(id: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, BigRational::from_integer(BigInt::from(1)));
        Self { terms, constant: BigRational::zero() }
    }

    pub fn term(id: VarId, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(id, coeff);
        e
    }

    pub fn add_term(&mut self, id: VarId, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(id).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn coeff(&self, id: VarId) -> BigRational {
        self.terms.get(&id).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &BigRational)> + '_ {
        self.terms.iter().map(|(&id, c)| (id, c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ids of all variables with a nonzero coefficient.
    pub fn variables(&self) -> Vec<VarId> {
        self.terms.keys().copied().collect()
    }

    /// Evaluates the expression at a full point (index = `VarId`).
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        let mut acc = self.constant.clone();
        for (&id, coeff) in &self.terms {
            acc += coeff * &point[id];
        }
        acc
    }

    /// Replaces every variable by the expression `subst` maps it to,
    /// leaving unmapped variables in place. Substitution is simultaneous.
    pub fn substitute(&self, subst: &BTreeMap<VarId, LinearExpr>) -> LinearExpr {
        let mut out = LinearExpr::constant(self.constant.clone());
        for (&id, coeff) in &self.terms {
            match subst.get(&id) {
                Some(replacement) => {
                    let mut scaled = replacement.clone();
                    scaled.scale(coeff);
                    out = out + scaled;
                }
                None => out.add_term(id, coeff.clone()),
            }
        }
        out
    }

    pub fn scale(&mut self, factor: &BigRational) {
        if factor.is_zero() {
            self.terms.clear();
            self.constant = BigRational::zero();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= factor;
        }
        self.constant *= factor;
    }
}

impl Add for LinearExpr {
    type Output = LinearExpr;
    fn add(self, rhs: LinearExpr) -> LinearExpr {
        let mut out = self;
        for (id, coeff) in rhs.terms {
            out.add_term(id, coeff);
        }
        out.constant += rhs.constant;
        out
    }
}

impl Sub for LinearExpr {
    type Output = LinearExpr;
    fn sub(self, rhs: LinearExpr) -> LinearExpr {
        self + (-rhs)
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;
    fn neg(self) -> LinearExpr {
        let mut out = self;
        for coeff in out.terms.values_mut() {
            *coeff = -coeff.clone();
        }
        out.constant = -out.constant;
        out
    }
}

impl Mul<BigRational> for LinearExpr {
    type Output = LinearExpr;
    fn mul(self, rhs: BigRational) -> LinearExpr {
        let mut out = self;
        out.scale(&rhs);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cancels_terms_to_zero() {
        let e = LinearExpr::var(0) - LinearExpr::var(0);
        assert!(e.is_constant());
        assert!(e.constant_part().is_zero());
    }

    #[test]
    fn evaluates_at_point() {
        // 2x - y/2 + 3 at (1, 4) = 2 - 2 + 3 = 3
        let e = LinearExpr::term(0, rat(2, 1)) + LinearExpr::term(1, rat(-1, 2))
            + LinearExpr::from_integer(3);
        let v = e.evaluate(&[rat(1, 1), rat(4, 1)]);
        assert_eq!(v, rat(3, 1));
    }

    #[test]
    fn substitution_is_simultaneous() {
        // e = x + y, subst x -> y, y -> x: result y + x (unchanged set, swapped roles)
        let e = LinearExpr::var(0) + LinearExpr::var(1);
        let mut subst = BTreeMap::new();
        subst.insert(0, LinearExpr::var(1));
        subst.insert(1, LinearExpr::var(0));
        let out = e.substitute(&subst);
        assert_eq!(out, LinearExpr::var(0) + LinearExpr::var(1));

        // e = x, subst x -> x + 1 applied once gives x + 1, not x + 2
        let e = LinearExpr::var(0);
        let mut subst = BTreeMap::new();
        subst.insert(0, LinearExpr::var(0) + LinearExpr::from_integer(1));
        let out = e.substitute(&subst);
        assert_eq!(out, LinearExpr::var(0) + LinearExpr::from_integer(1));
    }

    #[test]
    fn unmapped_variables_stay() {
        let e = LinearExpr::var(0) + LinearExpr::var(1);
        let mut subst = BTreeMap::new();
        subst.insert(0, LinearExpr::from_integer(5));
        let out = e.substitute(&subst);
        assert_eq!(out, LinearExpr::var(1) + LinearExpr::from_integer(5));
    }
}
