//! Univariate polynomials over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Field, Rational, ZPoly};
use crate::error::{Error, Result};

/// A polynomial over Q with coefficients in ascending order and no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

/// `p = constant * square^2 * squarefree` with both polynomial factors
/// integral, primitive, and with positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeSplit {
    pub constant: Rational,
    pub square: Poly,
    pub squarefree: Poly,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_zpoly(p: &ZPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Write `self = scalar * z` with `z` primitive in `Z[x]` and positive
    /// leading coefficient. The zero polynomial gives `(0, 0)`.
    pub fn to_primitive(&self) -> (Rational, ZPoly) {
        if self.is_zero() {
            return (Rational::zero(), ZPoly::zero());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let z = ZPoly::new(ints);
        let pp = z.primitive_part();
        let scalar = Rational::new(z.lc() / pp.lc(), den);
        (scalar, pp)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let (s, z) = self.to_primitive();
        Poly::from_zpoly(&z.pow(e)).scale(&num_traits::pow(s, e as usize))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Evaluate at a point of any exact field containing Q.
    pub fn eval<F: Field>(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + F::from_rational(c);
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let m = d.coeffs.len();
        if self.coeffs.len() < m {
            return (Self::zero(), self.clone());
        }
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len() - m + 1];
        for k in (0..q.len()).rev() {
            let t = &r[k + m - 1] / &lc;
            if t.is_zero() {
                continue;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &t * c;
            }
            q[k] = t;
        }
        r.truncate(m - 1);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd over Q; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (_, a) = self.to_primitive();
        let (_, b) = o.to_primitive();
        let g = a.gcd(&b);
        if g.is_zero() {
            return Self::zero();
        }
        let p = Poly::from_zpoly(&g);
        let lc = p.lc();
        p.scale(&(Rational::one() / lc))
    }

    /// Substitute `x -> -x`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}j", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}j^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Split `p` into `constant * square^2 * squarefree` (Yun's algorithm over
/// the integers).
pub fn squarefree_part(p: &Poly) -> Result<SquarefreeSplit> {
    if p.is_zero() {
        return Err(Error::Degenerate("squarefree part of the zero polynomial".into()));
    }
    let (scalar, f) = p.to_primitive();
    let factors = yun(&f);
    let mut square = ZPoly::one();
    let mut squarefree = ZPoly::one();
    for (i, a) in factors.iter().enumerate() {
        let mult = (i + 1) as u32;
        if mult / 2 > 0 {
            square = square.mul(&a.pow(mult / 2));
        }
        if mult % 2 == 1 {
            squarefree = squarefree.mul(a);
        }
    }
    let denom = square.pow(2).mul(&squarefree);
    let rest = f
        .div_exact(&denom)
        .ok_or_else(|| Error::Consistency("squarefree decomposition does not divide".into()))?;
    if rest.degree() != Some(0) {
        return Err(Error::Consistency("squarefree decomposition incomplete".into()));
    }
    Ok(SquarefreeSplit {
        constant: scalar * Rational::from_integer(rest.lc()),
        square: Poly::from_zpoly(&square),
        squarefree: Poly::from_zpoly(&squarefree),
    })
}

/// Yun's squarefree factorisation of a primitive polynomial: returns
/// `[a_1, a_2, ...]` with `f = c * prod a_i^i`.
fn yun(f: &ZPoly) -> Vec<ZPoly> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides f");
    let mut c = df.div_exact(&a0).expect("gcd divides f'");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).expect("gcd divides b");
        c = d.div_exact(&a).expect("gcd divides d");
        b = nb;
        d = c.sub(&b.derivative());
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_of_cube() {
        let p = Poly::from_i64(&[0, 0, 0, 1]);
        let s = squarefree_part(&p).unwrap();
        assert_eq!(s.square, Poly::x());
        assert_eq!(s.squarefree, Poly::x());
        assert_eq!(s.constant, q(1, 1));
    }

    #[test]
    fn squarefree_keeps_quartic() {
        // j^2 (j-1)^2 (16 j^4 - 13 j^2 + 8), scaled by 3/7.
        let j = Poly::x();
        let jm1 = Poly::from_i64(&[-1, 1]);
        let quartic = Poly::from_i64(&[8, 0, -13, 0, 16]);
        let p = j.mul(&j).mul(&jm1).mul(&jm1).mul(&quartic).scale(&q(3, 7));
        let s = squarefree_part(&p).unwrap();
        assert_eq!(s.square, j.mul(&jm1));
        assert_eq!(s.squarefree, quartic);
        assert_eq!(s.constant, q(3, 7));
    }

    #[test]
    fn primitive_roundtrip() {
        let p = Poly::new(vec![q(1, 2), q(-3, 4), q(5, 6)]);
        let (s, z) = p.to_primitive();
        assert_eq!(Poly::from_zpoly(&z).scale(&s), p);
        assert!(z.lc() > BigInt::zero());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[-5, 0, 1]).to_string(), "j^2 - 5");
        assert_eq!(Poly::from_i64(&[0, 3, -2]).to_string(), "-2*j^2 + 3*j");
    }
}
