//! Integer-scaled constraint rows in normal form.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{LinearExpr, VarId};

/// Comparison of a linear term against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr <= 0`
    Le,
    /// `expr < 0`
    Lt,
    /// `expr = 0`
    Eq,
}

/// One constraint `sum(coeffs[i] * v_i) + constant REL 0` over integer
/// coefficients with gcd 1.
///
/// Equalities additionally fix the sign of the first nonzero coefficient to
/// be positive, so structurally equal rows denote the same half-space or
/// hyperplane and vice versa (for equalities and for inequalities with the
/// same relation).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
    pub rel: Relation,
}

/// Outcome of normalising a row: either a real constraint, a tautology that
/// can be dropped, or a contradiction that empties the polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalisedRow {
    Constraint(Row),
    Trivial,
    Contradiction,
}

impl Row {
    /// Builds a row from a rational expression by clearing denominators.
    pub fn from_expr(expr: &LinearExpr, rel: Relation, dims: usize) -> NormalisedRow {
        let mut lcm = BigInt::from(1);
        for (_, coeff) in expr.terms() {
            lcm = lcm.lcm(coeff.denom());
        }
        lcm = lcm.lcm(expr.constant_part().denom());
        let scale = BigRational::from_integer(lcm);
        let mut coeffs = vec![BigInt::zero(); dims];
        for (id, coeff) in expr.terms() {
            assert!(id < dims, "variable {id} outside universe of {dims} dims");
            coeffs[id] = (coeff * &scale).to_integer();
        }
        let constant = (expr.constant_part() * &scale).to_integer();
        Row { coeffs, constant, rel }.normalise()
    }

    /// Divides by the gcd and fixes the sign convention. Detects rows with
    /// no variables, which are either trivially true or contradictions.
    pub fn normalise(mut self) -> NormalisedRow {
        if self.coeffs.iter().all(Zero::is_zero) {
            let holds = match self.rel {
                Relation::Le => self.constant <= BigInt::zero(),
                Relation::Lt => self.constant < BigInt::zero(),
                Relation::Eq => self.constant.is_zero(),
            };
            return if holds { NormalisedRow::Trivial } else { NormalisedRow::Contradiction };
        }
        let mut gcd = self.constant.abs();
        for c in &self.coeffs {
            gcd = gcd.gcd(c);
        }
        if gcd > BigInt::from(1) {
            for c in &mut self.coeffs {
                *c = &*c / &gcd;
            }
            self.constant = &self.constant / &gcd;
        }
        if self.rel == Relation::Eq {
            let first = self.coeffs.iter().find(|c| !c.is_zero()).unwrap();
            if first.is_negative() {
                for c in &mut self.coeffs {
                    *c = -&*c;
                }
                self.constant = -&self.constant;
            }
        }
        NormalisedRow::Constraint(self)
    }

    /// Whether `point` (indexed by `VarId`) satisfies this row.
    pub fn satisfied_at(&self, point: &[BigRational]) -> bool {
        let mut acc = BigRational::from_integer(self.constant.clone());
        for (id, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += BigRational::from_integer(c.clone()) * &point[id];
            }
        }
        match self.rel {
            Relation::Le => acc <= BigRational::zero(),
            Relation::Lt => acc < BigRational::zero(),
            Relation::Eq => acc.is_zero(),
        }
    }

    /// Rows whose conjunction is the complement of this row. One row for
    /// inequalities, two (to be tested separately, as a disjunction) for
    /// equalities.
    pub fn negations(&self) -> Vec<Row> {
        let flipped: Vec<BigInt> = self.coeffs.iter().map(|c| -c).collect();
        let flipped_k = -&self.constant;
        match self.rel {
            Relation::Le => vec![Row { coeffs: flipped, constant: flipped_k, rel: Relation::Lt }],
            Relation::Lt => vec![Row { coeffs: flipped, constant: flipped_k, rel: Relation::Le }],
            Relation::Eq => vec![
                Row { coeffs: self.coeffs.clone(), constant: self.constant.clone(), rel: Relation::Lt },
                Row { coeffs: flipped, constant: flipped_k, rel: Relation::Lt },
            ],
        }
    }

    pub fn coeff(&self, id: VarId) -> &BigInt {
        &self.coeffs[id]
    }

    pub fn mentions(&self, id: VarId) -> bool {
        !self.coeffs[id].is_zero()
    }

    /// Deterministic ordering used to canonicalise row lists for display
    /// and comparison: by coefficient vector, then constant, then relation.
    pub fn canonical_cmp(&self, other: &Row) -> Ordering {
        self.coeffs
            .cmp(&other.coeffs)
            .then_with(|| self.constant.cmp(&other.constant))
            .then_with(|| self.rel.cmp(&other.rel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[i64], k: i64, rel: Relation) -> Row {
        Row {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            constant: BigInt::from(k),
            rel,
        }
    }

    #[test]
    fn normalises_gcd() {
        let n = row(&[4, -6], 10, Relation::Le).normalise();
        match n {
            NormalisedRow::Constraint(r) => {
                assert_eq!(r, row(&[2, -3], 5, Relation::Le));
            }
            other => panic!("expected constraint, got {other:?}"),
        }
    }

    #[test]
    fn fixes_equality_sign() {
        let n = row(&[-2, 4], 6, Relation::Eq).normalise();
        match n {
            NormalisedRow::Constraint(r) => {
                assert_eq!(r, row(&[1, -2], -3, Relation::Eq));
            }
            other => panic!("expected constraint, got {other:?}"),
        }
    }

    #[test]
    fn detects_trivial_and_contradictory_constants() {
        assert_eq!(row(&[0, 0], -1, Relation::Le).normalise(), NormalisedRow::Trivial);
        assert_eq!(row(&[0, 0], 0, Relation::Le).normalise(), NormalisedRow::Trivial);
        assert_eq!(row(&[0, 0], 1, Relation::Le).normalise(), NormalisedRow::Contradiction);
        assert_eq!(row(&[0, 0], 0, Relation::Lt).normalise(), NormalisedRow::Contradiction);
        assert_eq!(row(&[0, 0], 0, Relation::Eq).normalise(), NormalisedRow::Trivial);
        assert_eq!(row(&[0, 0], 2, Relation::Eq).normalise(), NormalisedRow::Contradiction);
    }

    #[test]
    fn satisfaction_respects_strictness() {
        // x - 1 < 0
        let r = row(&[1], -1, Relation::Lt);
        let one = BigRational::from_integer(BigInt::from(1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(r.satisfied_at(&[half]));
        assert!(!r.satisfied_at(&[one]));
    }

    #[test]
    fn negation_of_le_is_strict_gt() {
        // x - 1 <= 0, negation: 1 - x < 0, i.e. x > 1
        let r = row(&[1], -1, Relation::Le);
        let neg = r.negations();
        assert_eq!(neg, vec![row(&[-1], 1, Relation::Lt)]);
    }

    #[test]
    fn negation_of_eq_is_two_strict_rows() {
        let r = row(&[1], -1, Relation::Eq);
        let neg = r.negations();
        assert_eq!(neg.len(), 2);
        // x < 1 or x > 1
        assert_eq!(neg[0], row(&[1], -1, Relation::Lt));
        assert_eq!(neg[1], row(&[-1], 1, Relation::Lt));
    }

    #[test]
    fn from_expr_clears_denominators() {
        // x/2 - 3/4 <= 0  ->  2x - 3 <= 0
        let e = LinearExpr::term(0, BigRational::new(BigInt::from(1), BigInt::from(2)))
            + LinearExpr::constant(BigRational::new(BigInt::from(-3), BigInt::from(4)));
        match Row::from_expr(&e, Relation::Le, 1) {
            NormalisedRow::Constraint(r) => assert_eq!(r, row(&[2], -3, Relation::Le)),
            other => panic!("expected constraint, got {other:?}"),
        }
    }
}
