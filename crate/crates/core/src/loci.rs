//! The quaternionic locus: membership in `Q_D`, enumeration of
//! `Q_D / GL(2, Z)`, and the count `r_D` by two independent routes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::{is_squarefree_u64, prime_divisors};
use crate::exact::Rational;
use crate::qforms::{
    class_number, coprime_value, enumerate_primitive_classes, genus_characters, gl_canonical,
    is_ambiguous, BinaryQF, GenusCharacter,
};
use crate::quatalg::{
    build_maximal_order, is_isomorphic_to_BD, twisting_divisor_count, MaximalOrder, QuatAlgebra,
    DEFAULT_PRIME_BOUND,
};

/// Check that `D` is squarefree with an even number (at least two) of
/// prime factors, returning the primes.
pub fn validate_d(d: u64) -> Result<Vec<u64>> {
    if d < 6 || !is_squarefree_u64(d) {
        return Err(Error::InvalidDiscriminant(format!("{d} is not a squarefree product of primes")));
    }
    let primes = prime_divisors(d);
    if primes.len() % 2 != 0 {
        return Err(Error::InvalidDiscriminant(format!(
            "{d} has an odd number of prime factors"
        )));
    }
    Ok(primes)
}

/// All valid `D` up to `bound`.
pub fn valid_discriminants(bound: u64) -> Vec<u64> {
    (6..=bound).filter(|&d| validate_d(d).is_ok()).collect()
}

/// Whether every value of `q` is `0` or `1` mod 4.
pub fn values_mod4_ok(q: &BinaryQF) -> bool {
    let four = BigInt::from(4);
    (0..4i64).all(|x| {
        (0..4i64).all(|y| {
            let v = q.eval(&BigInt::from(x), &BigInt::from(y)).mod_floor(&four);
            v.is_zero() || v.is_one()
        })
    })
}

/// Membership of `q` in `Q_D`.
pub fn sq_membership(q: &BinaryQF, d: u64) -> Result<bool> {
    validate_d(d)?;
    if q.discriminant() != BigInt::from(-16) * d || !q.is_positive_definite() {
        return Ok(false);
    }
    if !values_mod4_ok(q) {
        return Ok(false);
    }
    let content = q.content();
    let prim = q.div_exact(&content);
    let v = coprime_value(&prim, &BigInt::from(2 * d))?;
    let a0 = Rational::from_integer(v * content);
    is_isomorphic_to_BD(&QuatAlgebra::new(Rational::from_integer(-BigInt::from(d)), a0)?, d)
}

fn push_class(out: &mut Vec<BinaryQF>, q: BinaryQF) -> Result<()> {
    let g = gl_canonical(&q)?;
    if !out.contains(&g) {
        out.push(g);
    }
    Ok(())
}

/// GL-canonical representatives of `Q_D / GL(2, Z)`, sorted by `(a, b, c)`.
pub fn enumerate_sq_classes(d: u64) -> Result<Vec<BinaryQF>> {
    validate_d(d)?;
    let mut out = Vec::new();
    for q in enumerate_primitive_classes(&(BigInt::from(-16) * d))? {
        if sq_membership(&q, d)? {
            push_class(&mut out, q)?;
        }
    }
    if d % 4 == 3 {
        let four = BigInt::from(4);
        for q in enumerate_primitive_classes(&-BigInt::from(d))? {
            let q4 = q.scale(&four);
            if sq_membership(&q4, d)? {
                push_class(&mut out, q4)?;
            }
        }
    }
    out.sort_by(|l, r| (&l.a, &l.b, &l.c).cmp(&(&r.a, &r.b, &r.c)));
    Ok(out)
}

/// The primitive classes of discriminant `-16D` selected by genus
/// characters alone: `chi_-4 = 1` and `chi_p = -1` for every odd `p | D`.
/// `chi_2` is left free; it is fixed by the character relation.
pub fn genus_description_classes(d: u64) -> Result<Vec<BinaryQF>> {
    validate_d(d)?;
    let mut out = Vec::new();
    for q in enumerate_primitive_classes(&(BigInt::from(-16) * d))? {
        let chars = genus_characters(&q, d)?;
        let ok = chars.iter().all(|(w, v)| match w {
            GenusCharacter::Minus4 => *v == 1,
            GenusCharacter::Odd(_) => *v == -1,
            GenusCharacter::Two => true,
        });
        if ok {
            push_class(&mut out, q)?;
        }
    }
    out.sort_by(|l, r| (&l.a, &l.b, &l.c).cmp(&(&r.a, &r.b, &r.c)));
    Ok(out)
}

/// `h(-4D) + h(-D)` if `D = 3 mod 4`, else `h(-4D)`.
pub fn hat_h(d: u64) -> Result<usize> {
    validate_d(d)?;
    let mut h = class_number(&(BigInt::from(-4) * d))?;
    if d % 4 == 3 {
        h += class_number(&-BigInt::from(d))?;
    }
    Ok(h)
}

/// `r_D = hat_h(D) / 2^k + #{m | D : (-D, m) = B_D} / c`, with `c = 4` for
/// even `D` and `c = 2` otherwise.
pub fn r_via_formula(d: u64) -> Result<u64> {
    let primes = validate_d(d)?;
    let h = Rational::new(BigInt::from(hat_h(d)?), BigInt::one() << primes.len());
    let c = if d % 2 == 0 { 4 } else { 2 };
    let t = Rational::new(BigInt::from(twisting_divisor_count(d)?), BigInt::from(c));
    let r = h + t;
    if !r.is_integer() {
        return Err(Error::Consistency(format!("r_{d} = {r} is not an integer")));
    }
    r.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Consistency(format!("r_{d} out of range")))
}

pub fn r_via_enumeration(d: u64) -> Result<u64> {
    Ok(enumerate_sq_classes(d)?.len() as u64)
}

/// Order of the stabilizer of the Shimura curve in the Atkin-Lehner group:
/// 4 for ambiguous forms, 2 otherwise.
pub fn stable_group_order(q: &BinaryQF) -> Result<u8> {
    Ok(if is_ambiguous(q)? { 4 } else { 2 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusClass {
    pub form: BinaryQF,
    pub stable_group_order: u8,
    pub order: MaximalOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusCatalog {
    pub d: u64,
    pub classes: Vec<LocusClass>,
}

pub fn catalog(d: u64) -> Result<LocusCatalog> {
    let classes = enumerate_sq_classes(d)?
        .into_iter()
        .map(|form| {
            Ok(LocusClass {
                stable_group_order: stable_group_order(&form)?,
                order: build_maximal_order(d, &form, DEFAULT_PRIME_BOUND)?,
                form,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocusCatalog { d, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> BinaryQF {
        BinaryQF::from_i64(a, b, c)
    }

    #[test]
    fn membership() {
        assert!(sq_membership(&f(5, 2, 5), 6).unwrap());
        assert!(!sq_membership(&f(1, 0, 24), 6).unwrap());
        assert!(sq_membership(&f(8, 4, 8), 15).unwrap());
    }

    #[test]
    fn classes() {
        assert_eq!(enumerate_sq_classes(6).unwrap(), vec![f(5, 2, 5)]);
        assert_eq!(enumerate_sq_classes(15).unwrap(), vec![f(5, 0, 12), f(8, 4, 8)]);
        assert_eq!(
            enumerate_sq_classes(35).unwrap(),
            vec![f(5, 0, 28), f(12, 4, 12), f(12, 8, 13)]
        );
    }

    #[test]
    fn r_counts() {
        for (d, r) in [(6, 1), (10, 1), (26, 2), (35, 3), (39, 2), (46, 1)] {
            assert_eq!(r_via_formula(d).unwrap(), r, "formula D={d}");
            assert_eq!(r_via_enumeration(d).unwrap(), r, "enumeration D={d}");
        }
    }

    #[test]
    fn invalid_d() {
        assert!(validate_d(30).is_err());
        assert!(validate_d(12).is_err());
        assert!(validate_d(7).is_err());
        assert!(validate_d(1).is_err());
    }

    #[test]
    fn stable_orders() {
        assert_eq!(stable_group_order(&f(5, 2, 5)).unwrap(), 4);
        assert_eq!(stable_group_order(&f(5, 4, 12)).unwrap(), 2);
        assert_eq!(stable_group_order(&f(13, 0, 44)).unwrap(), 4);
    }
}
