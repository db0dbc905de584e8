//! Elementary integer arithmetic: square roots, primality, factoring and
//! the Kronecker symbol.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation of a positive integer by trial division, as
/// `(prime, exponent)` pairs in increasing order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64(0)");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorisation of a nonzero big integer (absolute value) by trial
/// division. Returns `None` if a cofactor larger than `limit^2` survives.
pub fn factor_bigint(n: &BigInt, limit: u64) -> Option<Vec<(BigInt, u32)>> {
    assert!(!n.is_zero(), "factor_bigint(0)");
    let mut n = n.abs();
    if let Some(small) = n.to_u64() {
        return Some(
            factor_u64(small)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect(),
        );
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= limit {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        if (&n % &bp).is_zero() {
            let mut e = 0;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Some(out);
    }
    let bl = BigInt::from(limit);
    if n <= &bl * &bl {
        out.push((n, 1));
        Some(out)
    } else {
        None
    }
}

/// All positive divisors of a nonzero big integer, sorted.
pub fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let f = factor_bigint(n, limit)?;
    let mut out = vec![BigInt::one()];
    for (p, e) in f {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut q = d.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= &p;
            }
        }
        out = next;
    }
    out.sort();
    Some(out)
}

/// Distinct prime divisors of a positive integer.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree_u64(n: u64) -> bool {
    n > 0 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// The p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let two = BigInt::from(2);
    let mut v = 0;
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = n.mod_floor(&BigInt::from(8)).to_u8().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let ra = a.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        let rn = n.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        if ra == 3 && rn == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Squarefree kernel of a nonzero integer, keeping the sign: the unique
/// squarefree `m` with `n = m * k^2`.
pub fn squarefree_kernel(n: &BigInt, limit: u64) -> Option<BigInt> {
    let f = factor_bigint(n, limit)?;
    let mut m = if n.sign() == Sign::Minus {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, e) in f {
        if e % 2 == 1 {
            m *= p;
        }
    }
    Some(m)
}

/// Whether `d` is a negative discriminant (`d < 0`, `d = 0, 1 mod 4`).
pub fn is_negative_discriminant(d: &BigInt) -> bool {
    if !d.is_negative() {
        return false;
    }
    let r = d.mod_floor(&BigInt::from(4));
    r.is_zero() || r.is_one()
}

/// Split a negative discriminant as `d = f^2 d0` with `d0` fundamental.
pub fn fundamental_part(d: &BigInt) -> Option<(BigInt, BigInt)> {
    if !is_negative_discriminant(d) {
        return None;
    }
    let m = squarefree_kernel(d, 1 << 24)?;
    let d0 = if m.mod_floor(&BigInt::from(4)).is_one() {
        m
    } else {
        m * 4
    };
    let f2 = d / &d0;
    let f = exact_sqrt(&f2)?;
    Some((d0, f))
}

/// Modular inverse of `a` modulo `m` (both positive), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_euler(a: i64, p: i64) -> i32 {
        let base = a.rem_euclid(p);
        let mut r = 1i64;
        for _ in 0..(p - 1) / 2 {
            r = r * base % p;
        }
        if a.rem_euclid(p) == 0 {
            0
        } else if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 29, 31] {
            for a in -40..40 {
                assert_eq!(kronecker_i64(a, p), legendre_euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_i64(-11, 2), -1);
        assert_eq!(kronecker_i64(-7, 2), 1);
        assert_eq!(kronecker_i64(-4, 2), 0);
        assert_eq!(kronecker_i64(-3, 2), -1);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && factor_u64(n.max(1)).len() == 1 && factor_u64(n)[0].1 == 1;
            assert_eq!(is_prime_u64(n), trial, "{n}");
        }
        assert!(is_prime_u64(2147483647));
    }

    #[test]
    fn fundamental_parts() {
        let (d0, f) = fundamental_part(&BigInt::from(-36)).unwrap();
        assert_eq!((d0, f), (BigInt::from(-4), BigInt::from(3)));
        let (d0, f) = fundamental_part(&BigInt::from(-12)).unwrap();
        assert_eq!((d0, f), (BigInt::from(-3), BigInt::from(2)));
        assert!(fundamental_part(&BigInt::from(-5)).is_none());
    }
}
