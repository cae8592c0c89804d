//! Core library for parametric analysis of attack-fault trees.
//!
//! The pipeline has four stages:
//!
//! 1. [`galileo`] parses the extended Galileo format into a validated tree.
//! 2. [`translation`] compiles the tree into a network of parametric weighted
//!    timed automata, one automaton per node plus a root observer.
//! 3. [`synthesis`] runs symbolic reachability over the network and projects
//!    the reachable constraints onto the parameters of interest.
//! 4. [`oracle`] independently predicts the result for constant-attribute
//!    trees, which the test suite uses to cross-check the pipeline.
//!
//! All arithmetic is exact: constraints live in [`polyhedra`], a small
//! rational-coefficient convex polyhedron library built on Fourier-Motzkin
//! elimination. Concrete (non-symbolic) execution of automata networks is in
//! [`pwta`], and [`imitator`] renders the translated network in an
//! IMITATOR-style text format for use with external tools.

pub mod galileo;
pub mod imitator;
pub mod oracle;
pub mod polyhedra;
pub mod pwta;
pub mod synthesis;
pub mod testkit;
pub mod translation;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Parses `s` into an exact rational. Accepts decimal ("11.5"), integer
/// ("42", "-3"), and fraction ("23/2") notation.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    use num_traits::{Pow, Zero};
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let mut value = BigRational::new(int * &scale, scale.clone());
        let frac_value = BigRational::new(frac, scale);
        if negative {
            value -= frac_value;
        } else {
            value += frac_value;
        }
        return Some(value);
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Renders an exact rational compactly: integers without a denominator,
/// everything else as "n/d".
pub fn rational_to_string(r: &BigRational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
