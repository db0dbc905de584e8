//! Quaternion algebras `(a, b)_Q`, Hilbert symbols, embeddings of
//! imaginary quadratic orders, and the explicit maximal orders attached to
//! forms of the quaternionic locus.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::{factor_bigint, is_prime_u64, is_squarefree_u64, kronecker, prime_divisors, valuation};
use crate::exact::{solve_rational, IntMatrix, Rational};
use crate::qforms::{represents, BinaryQF};

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// The Hilbert symbol `(a, b)_v` of two nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("Hilbert symbol of zero".into()));
    }
    // n/d and n*d differ by the square d^2.
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    match place {
        Place::Infinity => Ok(if ai.is_negative() && bi.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => {
            if !is_prime_u64(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            Ok(hilbert_finite(&ai, &bi, p))
        }
    }
}

fn hilbert_finite(a: &BigInt, b: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let alpha = valuation(a, &pb);
    let beta = valuation(b, &pb);
    let u = a / num_traits::pow(pb.clone(), alpha as usize);
    let v = b / num_traits::pow(pb.clone(), beta as usize);
    let m4 = |x: &BigInt| x.mod_floor(&BigInt::from(4)).to_u8().unwrap();
    let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    if p == 2 {
        let eps = |x: &BigInt| u32::from(m4(x) == 3);
        let omega = |x: &BigInt| u32::from(matches!(m8(x), 3 | 5));
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
        if beta % 2 == 1 {
            s *= kronecker(&u, &pb);
        }
        if alpha % 2 == 1 {
            s *= kronecker(&v, &pb);
        }
        s
    }
}

/// The quaternion algebra `(a, b)_Q` with basis `1, I, J, IJ`,
/// `I^2 = a`, `J^2 = b`, `IJ = -JI`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatAlgebra {
    pub a: Rational,
    pub b: Rational,
}

/// The places where an algebra ramifies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationSet {
    pub finite: Vec<u64>,
    pub infinite: bool,
}

impl RamificationSet {
    /// Product of the finite ramified primes.
    pub fn discriminant(&self) -> u64 {
        self.finite.iter().product()
    }
}

impl QuatAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidInput("quaternion algebra with a zero parameter".into()));
        }
        Ok(QuatAlgebra { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let (a, b) = (&self.a, &self.b);
        let [x0, x1, x2, x3] = &x.c;
        let [y0, y1, y2, y3] = &y.c;
        let ab = a * b;
        QuatElement {
            c: [
                x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
            ],
        }
    }

    /// Reduced norm `x0^2 - a x1^2 - b x2^2 + ab x3^2`.
    pub fn norm(&self, x: &QuatElement) -> Rational {
        let [x0, x1, x2, x3] = &x.c;
        x0 * x0 - &self.a * x1 * x1 - &self.b * x2 * x2 + &self.a * &self.b * x3 * x3
    }

    /// Reduced trace of `x * conj(y)`.
    pub fn trace_pairing(&self, x: &QuatElement, y: &QuatElement) -> Rational {
        self.mul(x, &y.conj()).trace()
    }
}

impl fmt::Display for QuatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// An element `c0 + c1 I + c2 J + c3 IJ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatElement {
    pub c: [Rational; 4],
}

impl QuatElement {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, c3: Rational) -> Self {
        QuatElement { c: [c0, c1, c2, c3] }
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        Self::new(c0.clone(), -c1, -c2, -c3)
    }

    pub fn trace(&self) -> Rational {
        &self.c[0] * Rational::from_integer(2.into())
    }

    pub fn add(&self, o: &Self) -> Self {
        QuatElement {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QuatElement {
            c: std::array::from_fn(|i| &self.c[i] * k),
        }
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.c;
        write!(f, "{c0} + ({c1})I + ({c2})J + ({c3})IJ")
    }
}

fn prime_support(x: &Rational) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in [x.numer(), x.denom()] {
        if n.abs().is_one() {
            continue;
        }
        let f = factor_bigint(n, 1 << 22)
            .ok_or_else(|| Error::InvalidInput(format!("cannot factor {n}")))?;
        for (p, _) in f {
            out.push(p.to_u64().ok_or_else(|| Error::InvalidInput(format!("prime {p} too large")))?);
        }
    }
    Ok(out)
}

/// Ramified places of `(a, b)_Q`. The number of ramified places is even.
pub fn ramified_primes(alg: &QuatAlgebra) -> Result<RamificationSet> {
    let mut cand = vec![2u64];
    cand.extend(prime_support(&alg.a)?);
    cand.extend(prime_support(&alg.b)?);
    cand.sort_unstable();
    cand.dedup();
    let mut finite = Vec::new();
    for p in cand {
        if hilbert_symbol(&alg.a, &alg.b, Place::Finite(p))? == -1 {
            finite.push(p);
        }
    }
    let infinite = hilbert_symbol(&alg.a, &alg.b, Place::Infinity)? == -1;
    if (finite.len() + usize::from(infinite)) % 2 != 0 {
        return Err(Error::Consistency(format!(
            "odd number of ramified places for {alg}"
        )));
    }
    Ok(RamificationSet { finite, infinite })
}

/// Validate an indefinite quaternion discriminant: squarefree with an even
/// number of prime factors (`D = 1` is the split algebra).
pub fn validate_algebra_discriminant(d: u64) -> Result<Vec<u64>> {
    if d == 0 || !is_squarefree_u64(d) {
        return Err(Error::InvalidDiscriminant(format!("{d} is not squarefree")));
    }
    let primes = if d == 1 { Vec::new() } else { prime_divisors(d) };
    if primes.len() % 2 != 0 {
        return Err(Error::InvalidDiscriminant(format!(
            "{d} has an odd number of prime factors"
        )));
    }
    Ok(primes)
}

/// Whether `alg` is isomorphic to the indefinite algebra of discriminant `D`.
#[allow(non_snake_case)]
pub fn is_isomorphic_to_BD(alg: &QuatAlgebra, d: u64) -> Result<bool> {
    let primes = validate_algebra_discriminant(d)?;
    let r = ramified_primes(alg)?;
    Ok(!r.infinite && r.finite == primes)
}

/// `#{ m | D, m > 0 : (-D, m) = B_D }`.
pub fn twisting_divisor_count(d: u64) -> Result<u64> {
    validate_algebra_discriminant(d)?;
    let mut count = 0;
    for m in 1..=d {
        if d % m == 0 && is_isomorphic_to_BD(&QuatAlgebra::from_ints(-(d as i64), m as i64)?, d)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether the order of discriminant `disc` embeds optimally into a maximal
/// order of `B_D`: `(disc/p) != 1` for every `p | D`.
pub fn embeds_imaginary_quadratic(d: u64, disc: &BigInt) -> Result<bool> {
    let primes = validate_algebra_discriminant(d)?;
    if !crate::exact::arith::is_negative_discriminant(disc) {
        return Err(Error::InvalidDiscriminant(format!("{disc} is not a negative discriminant")));
    }
    Ok(primes
        .iter()
        .all(|&p| kronecker(disc, &BigInt::from(p)) != 1))
}

/// Whether `K = Q(sqrt(k_disc))` splits `alg`: no finite ramified prime of
/// `alg` splits in `K`.
pub fn splits_over_imaginary_quadratic(alg: &QuatAlgebra, k_disc: &BigInt) -> Result<bool> {
    if !crate::exact::arith::is_negative_discriminant(k_disc) {
        return Err(Error::InvalidDiscriminant(format!("{k_disc} is not a negative discriminant")));
    }
    let r = ramified_primes(alg)?;
    Ok(r
        .finite
        .iter()
        .all(|&p| kronecker(k_disc, &BigInt::from(p)) != 1))
}

/// Which of the two explicit constructions produced a maximal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderBranch {
    /// `Q` primitive.
    Primitive,
    /// `Q = 4 Q'` with `D = 3 mod 4`.
    FourTimes,
}

/// An explicit maximal order of `B_D = (-D, p)` attached to a form of the
/// quaternionic locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalOrder {
    pub d: u64,
    pub form: BinaryQF,
    pub branch: OrderBranch,
    pub p: u64,
    pub s: u64,
    pub t: BigInt,
    pub algebra: QuatAlgebra,
    pub basis: Vec<QuatElement>,
}

/// Default search bound for the prime `p` in [`build_maximal_order`].
pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Build the explicit maximal order for `q` in the quaternionic locus of
/// discriminant `D`.
pub fn build_maximal_order(d: u64, q: &BinaryQF, prime_bound: u64) -> Result<MaximalOrder> {
    if !crate::loci::sq_membership(q, d)? {
        return Err(Error::NotInLocus { form: q.to_string(), d });
    }
    let four = BigInt::from(4);
    let (branch, target) = if q.is_primitive() {
        (OrderBranch::Primitive, q.clone())
    } else {
        (OrderBranch::FourTimes, q.div_exact(&four))
    };
    let mut p = 5u64;
    loop {
        if p > prime_bound {
            return Err(Error::SearchExhausted(format!(
                "no prime p = 1 mod 4 below {prime_bound} represented by {target}"
            )));
        }
        if is_prime_u64(p) && d % p != 0 && represents(&target, &BigInt::from(p), false)?.is_found() {
            break;
        }
        p += 4;
    }
    let (start, modulus) = match branch {
        OrderBranch::Primitive => (2u64, p),
        OrderBranch::FourTimes => (1u64, 4 * p),
    };
    let s = (start..modulus + 2)
        .step_by(2)
        .find(|&s| (BigInt::from(s) * s * d + 1u32) % modulus == BigInt::zero())
        .ok_or_else(|| Error::SearchExhausted(format!("no s for p = {p}")))?;
    let t = (BigInt::from(s) * s * d + 1u32) / modulus;
    let algebra = QuatAlgebra::from_ints(-(d as i64), p as i64)?;
    let r = |n: i64, den: i64| Rational::new(n.into(), den.into());
    let z = || Rational::zero();
    let sd = (s * d) as i64;
    let pi = p as i64;
    let basis = match branch {
        OrderBranch::Primitive => vec![
            QuatElement::one(),
            QuatElement::new(r(1, 2), z(), r(1, 2), z()),
            QuatElement::new(z(), r(1, 2), z(), r(1, 2)),
            QuatElement::new(z(), z(), r(sd, pi), r(1, pi)),
        ],
        OrderBranch::FourTimes => vec![
            QuatElement::one(),
            QuatElement::new(r(1, 2), r(1, 2), z(), z()),
            QuatElement::new(z(), z(), r(1, 1), z()),
            QuatElement::new(z(), z(), r(sd, 2 * pi), r(1, 2 * pi)),
        ],
    };
    Ok(MaximalOrder {
        d,
        form: q.clone(),
        branch,
        p,
        s,
        t,
        algebra,
        basis,
    })
}

impl MaximalOrder {
    /// Coordinates of `x` in the order basis, if `x` lies in its Q-span.
    pub fn coordinates(&self, x: &QuatElement) -> Option<Vec<Rational>> {
        let m: Vec<Vec<Rational>> = (0..4)
            .map(|i| self.basis.iter().map(|e| e.c[i].clone()).collect())
            .collect();
        solve_rational(&m, &x.c)
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.coordinates(x)
            .is_some_and(|v| v.iter().all(|c| c.is_integer()))
    }

    /// Gram matrix of the trace form `tr(x conj(y))` on the basis.
    pub fn trace_gram(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let v = self.algebra.trace_pairing(&self.basis[i], &self.basis[j]);
                assert!(v.is_integer(), "non-integral trace pairing");
                m[(i, j)] = v.to_integer();
            }
        }
        m
    }

    /// Check that the basis spans a ring containing 1 whose trace form has
    /// determinant `D^2`, so the order is maximal.
    pub fn verify(&self) -> Result<()> {
        if !is_isomorphic_to_BD(&self.algebra, self.d)? {
            return Err(Error::Consistency(format!("{} is not B_{}", self.algebra, self.d)));
        }
        for x in &self.basis {
            for y in &self.basis {
                if !self.contains(&self.algebra.mul(x, y)) {
                    return Err(Error::Consistency("basis is not closed under multiplication".into()));
                }
            }
        }
        let det = self.trace_gram().det();
        let dd = BigInt::from(self.d) * self.d;
        if det != dd {
            return Err(Error::Consistency(format!("trace form determinant {det}, expected {dd}")));
        }
        Ok(())
    }
}

/// The form `Q_mu` read off the order parameters.
pub fn q_mu_of_order(ord: &MaximalOrder) -> BinaryQF {
    let d = BigInt::from(ord.d);
    let sd4 = BigInt::from(4) * ord.s * &d;
    let td4 = BigInt::from(4) * &ord.t * &d;
    match ord.branch {
        OrderBranch::Primitive => BinaryQF::new(ord.p.into(), sd4, td4),
        OrderBranch::FourTimes => BinaryQF::new(BigInt::from(4 * ord.p), sd4, td4),
    }
}

/// The lattice `L_mu = (Z + 2 O) cap <1, I>^perp` computed from the order
/// basis, with its Gram matrix under `-tr(x conj(y))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LMu {
    pub basis: [QuatElement; 2],
    pub gram: IntMatrix,
}

impl LMu {
    /// The binary form `[g00/2, g01, g11/2]` of the lattice.
    pub fn form(&self) -> BinaryQF {
        let two = BigInt::from(2);
        BinaryQF::new(
            &self.gram[(0, 0)] / &two,
            self.gram[(0, 1)].clone(),
            &self.gram[(1, 1)] / &two,
        )
    }
}

pub fn l_mu_gram(ord: &MaximalOrder) -> Result<LMu> {
    let two = Rational::from_integer(2.into());
    let gens: Vec<QuatElement> = std::iter::once(QuatElement::one())
        .chain(ord.basis[1..].iter().map(|e| e.scale(&two)))
        .collect();
    // Constraints: coefficient of 1 and of I vanish.
    let den = gens
        .iter()
        .flat_map(|g| g.c.iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let dr = Rational::from_integer(den);
    let rows: Vec<Vec<BigInt>> = (0..2)
        .map(|k| gens.iter().map(|g| (&g.c[k] * &dr).to_integer()).collect())
        .collect();
    let kernel = IntMatrix::from_rows(&rows).integer_kernel();
    if kernel.len() != 2 {
        return Err(Error::Consistency(format!("L_mu has rank {}", kernel.len())));
    }
    let elem = |v: &Vec<BigInt>| {
        gens.iter()
            .zip(v)
            .fold(QuatElement::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()), |acc, (g, n)| {
                acc.add(&g.scale(&Rational::from_integer(n.clone())))
            })
    };
    let basis = [elem(&kernel[0]), elem(&kernel[1])];
    let mut gram = IntMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let v = -ord.algebra.trace_pairing(&basis[i], &basis[j]);
            if !v.is_integer() {
                return Err(Error::Consistency("non-integral L_mu pairing".into()));
            }
            gram[(i, j)] = v.to_integer();
        }
    }
    Ok(LMu { basis, gram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), Place::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), Place::Finite(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&int(2), &int(3), Place::Finite(3)).unwrap(), -1);
    }

    #[test]
    fn ramification_examples() {
        let r = ramified_primes(&QuatAlgebra::from_ints(-14, -3).unwrap()).unwrap();
        assert_eq!(r.finite, vec![2]);
        assert!(r.infinite);
        assert!(is_isomorphic_to_BD(&QuatAlgebra::from_ints(-6, 5).unwrap(), 6).unwrap());
        assert!(!is_isomorphic_to_BD(&QuatAlgebra::from_ints(-6, 1).unwrap(), 6).unwrap());
    }

    #[test]
    fn embeddings() {
        assert!(embeds_imaginary_quadratic(14, &BigInt::from(-11)).unwrap());
        assert!(!embeds_imaginary_quadratic(14, &BigInt::from(-7)).unwrap());
        assert!(embeds_imaginary_quadratic(6, &BigInt::from(-24)).unwrap());
        assert!(embeds_imaginary_quadratic(1, &BigInt::from(-7)).unwrap());
    }

    #[test]
    fn gaussian_field_splits_minus14_minus3() {
        let alg = QuatAlgebra::from_ints(-14, -3).unwrap();
        assert!(splits_over_imaginary_quadratic(&alg, &BigInt::from(-4)).unwrap());
    }

    #[test]
    fn order_for_d14() {
        let ord = build_maximal_order(14, &BinaryQF::from_i64(5, 4, 12), DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!((ord.p, ord.s), (5, 4));
        assert_eq!(ord.t, BigInt::from(45));
        ord.verify().unwrap();
        assert_eq!(q_mu_of_order(&ord), BinaryQF::from_i64(5, 224, 2520));
        let l = l_mu_gram(&ord).unwrap();
        assert_eq!(l.gram.det(), BigInt::from(224));
    }

    #[test]
    fn order_four_times_branch() {
        let ord = build_maximal_order(15, &BinaryQF::from_i64(8, 4, 8), DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!((ord.p, ord.s, ord.branch), (17, 3, OrderBranch::FourTimes));
        ord.verify().unwrap();
    }

    #[test]
    fn rejects_forms_outside_locus() {
        let e = build_maximal_order(14, &BinaryQF::from_i64(1, 0, 56), DEFAULT_PRIME_BOUND);
        assert!(matches!(e, Err(Error::NotInLocus { .. })));
    }
}
