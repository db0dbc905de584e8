//! Exact arithmetic: integers, rationals, Gaussian rationals, univariate
//! polynomials and small integer matrices.

pub mod arith;
mod gaussian;
mod matrix;
mod poly;
mod zpoly;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use gaussian::GaussianRational;
pub use matrix::{nullspace_rational, solve_rational, IntMatrix};
pub use poly::{squarefree_part, Poly, SquarefreeSplit};
pub use zpoly::ZPoly;

pub type Rational = num_rational::BigRational;

/// `n / d` as a rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"a"` or `"a/b"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// An exact field of characteristic zero containing Q.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(q: &Rational) -> Self;

    fn powi(&self, e: i64) -> Self {
        let base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * b.clone();
            }
            n >>= 1;
            if n > 0 {
                b = b.clone() * b;
            }
        }
        acc
    }
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for GaussianRational {
    fn from_rational(q: &Rational) -> Self {
        GaussianRational::from_rational(q.clone())
    }
}
