//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order with no trailing zeros.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::is_prime_u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff(i) + other.coeff(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeff(i) - other.coeff(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact quotient `self / d` if `d` divides `self` in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (n, m) = (self.coeffs.len(), d.coeffs.len());
        if n < m {
            return None;
        }
        let lc = d.lc();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let top = &rem[k + m - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder `prem(self, d)`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let m = d.coeffs.len();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        while r.len() >= m && !r.is_empty() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - m;
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &top * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Primitive gcd by the primitive pseudo-remainder sequence. Slow on
    /// large inputs; kept as an independent reference for [`ZPoly::gcd`].
    pub fn gcd_prs(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Primitive gcd (positive leading coefficient) of two polynomials,
    /// computed modulo word-sized primes, recombined by CRT and certified
    /// by exact division.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let a = self.primitive_part();
        let b = other.primitive_part();
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return Self::one();
        }
        let g = a.lc().gcd(&b.lc());
        let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
        let mut last_candidate: Option<ZPoly> = None;
        for &p in word_primes() {
            let pb = BigInt::from(p);
            if (a.lc() % &pb).is_zero() || (b.lc() % &pb).is_zero() {
                continue;
            }
            let ap = reduce_mod(&a, p);
            let bp = reduce_mod(&b, p);
            let mut gp = gcd_mod_p(&ap, &bp, p);
            if gp.len() == 1 {
                return Self::one();
            }
            let gm = (g.mod_floor(&pb)).to_u64().unwrap();
            for c in gp.iter_mut() {
                *c = mulm(*c, gm, p);
            }
            let deg = gp.len() - 1;
            match &mut acc {
                Some((h, m)) if h.len() - 1 == deg => {
                    let minv = inv_mod((m.mod_floor(&pb)).to_u64().unwrap(), p);
                    let newm = &*m * &pb;
                    let half = &newm / 2;
                    for (hc, &gc) in h.iter_mut().zip(gp.iter()) {
                        let hr = hc.mod_floor(&pb).to_u64().unwrap();
                        let t = mulm((gc + p - hr) % p, minv, p);
                        let mut v = &*hc + &*m * BigInt::from(t);
                        v = v.mod_floor(&newm);
                        if v > half {
                            v -= &newm;
                        }
                        *hc = v;
                    }
                    *m = newm;
                }
                Some((h, _)) if h.len() - 1 < deg => continue,
                _ => {
                    let half = p / 2;
                    let h = gp
                        .iter()
                        .map(|&c| {
                            if c > half {
                                BigInt::from(c) - &pb
                            } else {
                                BigInt::from(c)
                            }
                        })
                        .collect();
                    acc = Some((h, pb.clone()));
                    last_candidate = None;
                    continue;
                }
            }
            let (h, _) = acc.as_ref().unwrap();
            let cand = ZPoly::new(h.clone()).primitive_part();
            if last_candidate.as_ref() == Some(&cand)
                && a.div_exact(&cand).is_some()
                && b.div_exact(&cand).is_some()
            {
                return cand;
            }
            last_candidate = Some(cand);
        }
        panic!("modular gcd ran out of primes");
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

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn reduce_mod(a: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    a.coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `F_p`.
fn gcd_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() && !a.is_empty() {
            let q = mulm(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                let t = mulm(q, c, p);
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for c in a.iter_mut() {
            *c = mulm(*c, inv, p);
        }
    }
    a
}

/// Primes just below 2^31, largest first.
fn word_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(4000);
        let mut n: u64 = (1 << 31) - 1;
        while out.len() < 4000 {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn gcd_of_products() {
        let f = zp(&[1, 1]); // x + 1
        let g = zp(&[-2, 0, 3]); // 3x^2 - 2
        let h = zp(&[5, -7, 0, 11]);
        let a = f.mul(&g).mul(&zp(&[6]));
        let b = f.mul(&g).mul(&h);
        let expect = f.mul(&g).primitive_part();
        assert_eq!(a.gcd(&b), expect);
        assert_eq!(a.gcd_prs(&b), expect);
    }

    #[test]
    fn coprime_gcd_is_one() {
        assert_eq!(zp(&[1, 0, 1]).gcd(&zp(&[-1, 1])), ZPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = zp(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&zp(&[1, 1])), Some(zp(&[-1, 1])));
        assert_eq!(a.div_exact(&zp(&[1, 2])), None);
    }

    #[test]
    fn large_coefficient_gcd_matches_prs() {
        let mut f = zp(&[123456789, -987654321, 555555555, 1]);
        f = f.pow(3);
        let g = zp(&[17, 0, -3, 0, 99]).pow(2);
        let a = f.mul(&g);
        let b = f.mul(&zp(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(a.gcd(&b), a.gcd_prs(&b));
        assert_eq!(a.gcd(&b), f.primitive_part());
    }
}
