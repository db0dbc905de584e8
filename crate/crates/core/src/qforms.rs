//! Positive definite binary quadratic forms `[a, b, c] = a x^2 + b xy + c y^2`.
//!
//! Reduction follows Gauss: a form is SL-reduced when `-a < b <= a <= c`,
//! with `b >= 0` whenever `a == c`. GL-classes are represented by the
//! reduced form with `b >= 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::{exact_sqrt, isqrt, kronecker, prime_divisors};

/// A binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQF {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// A 2x2 integer matrix `[[alpha, beta], [gamma, delta]]` acting by
/// `Q'(x, y) = Q(alpha x + beta y, gamma x + delta y)`.
pub type Transform = [[BigInt; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    Found { x: BigInt, y: BigInt },
    Exhausted,
}

impl Representation {
    pub fn is_found(&self) -> bool {
        matches!(self, Representation::Found { .. })
    }
}

/// The genus characters attached to forms of discriminant `-16D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenusCharacter {
    /// `(-4/a)`.
    Minus4,
    /// `(a/p)` for an odd prime `p | D`.
    Odd(u64),
    /// `(8/a)`, defined when `D` is even.
    Two,
}

impl fmt::Display for GenusCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusCharacter::Minus4 => write!(f, "chi_-4"),
            GenusCharacter::Odd(p) => write!(f, "chi_{p}"),
            GenusCharacter::Two => write!(f, "chi_2"),
        }
    }
}

impl BinaryQF {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        BinaryQF { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        BinaryQF::new(a.into(), b.into(), c.into())
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_negative()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BinaryQF::new(&self.a * k, &self.b * k, &self.c * k)
    }

    pub fn div_exact(&self, k: &BigInt) -> Self {
        BinaryQF::new(&self.a / k, &self.b / k, &self.c / k)
    }

    /// `Q'(x, y) = Q(alpha x + beta y, gamma x + delta y)`.
    pub fn transform(&self, t: &Transform) -> Self {
        let [[al, be], [ga, de]] = t;
        let a = self.eval(al, ga);
        let c = self.eval(be, de);
        let b = BigInt::from(2) * &self.a * al * be
            + &self.b * (al * de + be * ga)
            + BigInt::from(2) * &self.c * ga * de;
        BinaryQF::new(a, b, c)
    }

    fn require_definite(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::InvalidDiscriminant(format!(
                "{self} is not positive definite"
            )))
        }
    }
}

impl fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

fn mat_mul(x: &Transform, y: &Transform) -> Transform {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity() -> Transform {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

/// SL2(Z)-reduce a positive definite form. Returns the reduced form and a
/// transform `T` of determinant 1 with `q.transform(T) == reduced`.
pub fn reduce_sl(q: &BinaryQF) -> Result<(BinaryQF, Transform)> {
    q.require_definite()?;
    let (mut a, mut b, mut c) = (q.a.clone(), q.b.clone(), q.c.clone());
    let mut t = identity();
    let two = BigInt::from(2);
    let swap: Transform = [
        [BigInt::zero(), -BigInt::one()],
        [BigInt::one(), BigInt::zero()],
    ];
    loop {
        let k = (&a - &b).div_floor(&(&two * &a));
        if !k.is_zero() {
            let nc = &a * &k * &k + &b * &k + &c;
            b += &two * &a * &k;
            c = nc;
            t = mat_mul(&t, &[[BigInt::one(), k], [BigInt::zero(), BigInt::one()]]);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            t = mat_mul(&t, &swap);
        } else {
            break;
        }
    }
    if a == c && b.is_negative() {
        b = -b;
        t = mat_mul(&t, &swap);
    }
    Ok((BinaryQF::new(a, b, c), t))
}

/// Canonical representative of the GL2(Z)-class.
pub fn gl_canonical(q: &BinaryQF) -> Result<BinaryQF> {
    let (r, _) = reduce_sl(q)?;
    Ok(BinaryQF::new(r.a, r.b.abs(), r.c))
}

pub fn is_sl_reduced(q: &BinaryQF) -> bool {
    let neg_a = -&q.a;
    q.a.is_positive()
        && neg_a < q.b
        && q.b <= q.a
        && q.a <= q.c
        && !(q.a == q.c && q.b.is_negative())
}

/// All SL-reduced primitive positive definite forms of discriminant `d`,
/// ordered by `a` then `b`.
pub fn enumerate_primitive_classes(d: &BigInt) -> Result<Vec<BinaryQF>> {
    if !crate::exact::arith::is_negative_discriminant(d) {
        return Err(Error::InvalidDiscriminant(format!(
            "{d} is not a negative discriminant"
        )));
    }
    let n = -d;
    let amax = isqrt(&(&n / 3));
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while a <= amax {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            let num: BigInt = &b * &b - d;
            let four_a = BigInt::from(4) * &a;
            if (&num % &four_a).is_zero() {
                let c = &num / &four_a;
                let q = BinaryQF::new(a.clone(), b.clone(), c);
                if is_sl_reduced(&q) && q.is_primitive() {
                    out.push(q);
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(d: &BigInt) -> Result<usize> {
    Ok(enumerate_primitive_classes(d)?.len())
}

/// Search for `(x, y)` with `Q(x, y) = n`, scanning `y = 0, 1, ...` and
/// preferring the larger root in `x`. With `primitively` the witness must
/// have `gcd(x, y) = 1`.
pub fn represents(q: &BinaryQF, n: &BigInt, primitively: bool) -> Result<Representation> {
    q.require_definite()?;
    if n.is_negative() {
        return Ok(Representation::Exhausted);
    }
    if n.is_zero() {
        return Ok(if primitively {
            Representation::Exhausted
        } else {
            Representation::Found {
                x: BigInt::zero(),
                y: BigInt::zero(),
            }
        });
    }
    let disc = -q.discriminant();
    let ymax = isqrt(&(BigInt::from(4) * &q.a * n / &disc));
    let two_a = BigInt::from(2) * &q.a;
    let mut y = BigInt::zero();
    while y <= ymax {
        let dx = &q.b * &q.b * &y * &y - BigInt::from(4) * &q.a * (&q.c * &y * &y - n);
        if let Some(s) = exact_sqrt(&dx) {
            for num in [-&q.b * &y + &s, -&q.b * &y - &s] {
                if (&num % &two_a).is_zero() {
                    let x = &num / &two_a;
                    if !primitively || x.gcd(&y).is_one() {
                        return Ok(Representation::Found { x, y });
                    }
                }
            }
        }
        y += 1;
    }
    Ok(Representation::Exhausted)
}

/// All values `Q(x, y) <= bound` with `(x, y) != 0`, one representative of
/// each `+-(x, y)` pair, sorted by value then `(y, x)`.
pub fn represented_values(q: &BinaryQF, bound: &BigInt) -> Result<Vec<(BigInt, BigInt, BigInt)>> {
    q.require_definite()?;
    let disc = -q.discriminant();
    let ymax = isqrt(&(BigInt::from(4) * &q.a * bound / &disc));
    let two_a = BigInt::from(2) * &q.a;
    let mut out = Vec::new();
    let mut y = BigInt::zero();
    while y <= ymax {
        let dx: BigInt = BigInt::from(4) * &q.a * bound - &disc * &y * &y;
        if !dx.is_negative() {
            let s = isqrt(&dx);
            let lo = (-&q.b * &y - &s - 1u32).div_floor(&two_a);
            let hi = (-&q.b * &y + &s + 1u32).div_ceil(&two_a);
            let mut x = lo;
            while x <= hi {
                if y.is_zero() && !x.is_positive() {
                    x += 1;
                    continue;
                }
                let v = q.eval(&x, &y);
                if &v <= bound {
                    out.push((v, x.clone(), y.clone()));
                }
                x += 1;
            }
        }
        y += 1;
    }
    out.sort_by(|l, r| (&l.0, &l.2, &l.1).cmp(&(&r.0, &r.2, &r.1)));
    Ok(out)
}

/// The smallest value of `q` coprime to `m`, searched up to `50 |disc(q)|`.
pub fn coprime_value(q: &BinaryQF, m: &BigInt) -> Result<BigInt> {
    let cap: BigInt = BigInt::from(50) * (-q.discriminant());
    let mut bound: BigInt = (&q.a * 4u32).max(BigInt::from(16));
    loop {
        let b = bound.clone().min(cap.clone());
        for (v, _, _) in represented_values(q, &b)? {
            if v.gcd(m).is_one() {
                return Ok(v);
            }
        }
        if b >= cap {
            return Err(Error::SearchExhausted(format!(
                "no value of {q} coprime to {m} up to {cap}"
            )));
        }
        bound *= 4;
    }
}

/// A form is ambiguous when its reduced form has `b = 0`, `b = a` or `a = c`.
pub fn is_ambiguous(q: &BinaryQF) -> Result<bool> {
    let (r, _) = reduce_sl(q)?;
    Ok(r.b.is_zero() || r.b == r.a || r.a == r.c)
}

/// The characters defined on forms of discriminant `-16 D`, in the order
/// `chi_-4`, `chi_p` for odd `p | D` ascending, then `chi_2` if `D` is even.
pub fn defined_characters(d: u64) -> Vec<GenusCharacter> {
    let mut out = vec![GenusCharacter::Minus4];
    for p in prime_divisors(d) {
        if p != 2 {
            out.push(GenusCharacter::Odd(p));
        }
    }
    if d % 2 == 0 {
        out.push(GenusCharacter::Two);
    }
    out
}

/// Evaluate a genus character on `q` through a represented value coprime
/// to `2D`.
pub fn genus_character(q: &BinaryQF, d: u64, which: GenusCharacter) -> Result<i32> {
    let a = coprime_value(q, &BigInt::from(2 * d))?;
    Ok(character_value(&a, which))
}

/// The value of a genus character at an integer coprime to `2D`.
pub fn character_value(a: &BigInt, which: GenusCharacter) -> i32 {
    match which {
        GenusCharacter::Minus4 => kronecker(&BigInt::from(-4), a),
        GenusCharacter::Odd(p) => kronecker(a, &BigInt::from(p)),
        GenusCharacter::Two => kronecker(&BigInt::from(2), a),
    }
}

/// All defined characters of `q`, evaluated at one common coprime value.
pub fn genus_characters(q: &BinaryQF, d: u64) -> Result<Vec<(GenusCharacter, i32)>> {
    let a = coprime_value(q, &BigInt::from(2 * d))?;
    Ok(defined_characters(d)
        .into_iter()
        .map(|w| (w, character_value(&a, w)))
        .collect())
}

/// Number of odd primes `p | D` with `p = 3 mod 4`.
pub fn count_primes_3_mod_4(d: u64) -> usize {
    prime_divisors(d)
        .into_iter()
        .filter(|p| p % 4 == 3)
        .count()
}

/// The relation satisfied by the characters on every class of
/// discriminant `-16D`: `prod(all chi) * chi_-4^(N3) = 1`, where `N3`
/// counts the prime divisors of `D` that are `3 mod 4`.
pub fn twisted_character_product(chars: &[(GenusCharacter, i32)], d: u64) -> i32 {
    let all: i32 = chars.iter().map(|(_, v)| v).product();
    let m4 = chars
        .iter()
        .find(|(w, _)| *w == GenusCharacter::Minus4)
        .map_or(1, |(_, v)| *v);
    if count_primes_3_mod_4(d) % 2 == 1 {
        all * m4
    } else {
        all
    }
}
