//! Singular relations, Gram matrices of CM points, Galois orbits of CM
//! points, the Atkin-Lehner action on them, and the search for
//! intersections of two curves on the Siegel threefold.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::{divisors, exact_sqrt, fundamental_part, isqrt, is_negative_discriminant, kronecker, prime_divisors};
use crate::exact::{IntMatrix, Rational};
use crate::qforms::{gl_canonical, represented_values, represents, BinaryQF};
use crate::quatalg::{embeds_imaginary_quadratic, MaximalOrder, OrderBranch, QuatElement};

/// A singular relation `a t1 + b t2 + c t3 + d (t2^2 - t1 t3) + e = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingularRelation {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

impl SingularRelation {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt, e: BigInt) -> Self {
        SingularRelation { a, b, c, d, e }
    }

    pub fn from_i64(v: [i64; 5]) -> Self {
        let [a, b, c, d, e] = v.map(BigInt::from);
        SingularRelation { a, b, c, d, e }
    }

    pub fn add(&self, o: &Self) -> Self {
        SingularRelation::new(
            &self.a + &o.a,
            &self.b + &o.b,
            &self.c + &o.c,
            &self.d + &o.d,
            &self.e + &o.e,
        )
    }

    pub fn is_primitive(&self) -> bool {
        [&self.b, &self.c, &self.d, &self.e]
            .into_iter()
            .fold(self.a.clone(), |g, x| g.gcd(x))
            .is_one()
    }
}

impl fmt::Display for SingularRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.a, self.b, self.c, self.d, self.e)
    }
}

/// `b^2 - 4ac - 4de`.
pub fn delta(r: &SingularRelation) -> BigInt {
    &r.b * &r.b - BigInt::from(4) * (&r.a * &r.c + &r.d * &r.e)
}

/// The polarization exactly as displayed: `(D(l1) + D(l2) - D(l1 + l2)) / 2`.
/// On the diagonal this is `-delta`.
pub fn delta_pairing_literal(r1: &SingularRelation, r2: &SingularRelation) -> Rational {
    let s = delta(r1) + delta(r2) - delta(&r1.add(r2));
    Rational::new(s, BigInt::from(2))
}

/// The pairing used in every Gram matrix: `(D(l1 + l2) - D(l1) - D(l2)) / 2`,
/// so that `<l, l> = delta(l)`. Always an integer.
pub fn delta_pairing(r1: &SingularRelation, r2: &SingularRelation) -> BigInt {
    (delta(&r1.add(r2)) - delta(r1) - delta(r2)) / 2
}

pub fn relation_gram(rels: &[SingularRelation]) -> IntMatrix {
    let n = rels.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = delta_pairing(&rels[i], &rels[j]);
        }
    }
    m
}

fn half(x: &BigInt) -> BigInt {
    debug_assert!(x.is_even());
    x / 2
}

/// The element `b1 beta1 + b2 beta2 + b3 beta3` of the trace-zero part of
/// the order.
pub fn cm_element(ord: &MaximalOrder, b: &[BigInt; 3]) -> QuatElement {
    let r = |x: &BigInt| Rational::from_integer(x.clone());
    let p = Rational::from_integer(BigInt::from(ord.p));
    let sd = Rational::from_integer(BigInt::from(ord.s) * ord.d);
    let [b1, b2, b3] = b;
    match ord.branch {
        // b1 J + b2 (I + IJ)/2 + b3 (sDJ + IJ)/p
        OrderBranch::Primitive => QuatElement::new(
            Rational::zero(),
            r(b2) / Rational::from_integer(2.into()),
            r(b1) + &sd * r(b3) / &p,
            r(b2) / Rational::from_integer(2.into()) + r(b3) / &p,
        ),
        // b1 J + b2 I + b3 (sDJ + IJ)/(2p)
        OrderBranch::FourTimes => {
            let tp = p * Rational::from_integer(2.into());
            QuatElement::new(Rational::zero(), r(b2), r(b1) + &sd * r(b3) / &tp, r(b3) / &tp)
        }
    }
}

fn check_parity(ord: &MaximalOrder, b: &[BigInt; 3]) -> Result<()> {
    let [b1, b2, b3] = b;
    let ok = match ord.branch {
        OrderBranch::Primitive => b2.is_even() && b3.is_even(),
        OrderBranch::FourTimes => b1.is_even() && b3.is_even(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "coefficients ({b1}, {b2}, {b3}) violate the parity constraint of the {:?} branch",
            ord.branch
        )))
    }
}

/// Gram matrix of the lattice of singular relations of the CM point whose
/// normalized embedding sends `sqrt(d)` to `b1 beta1 + b2 beta2 + b3 beta3`.
/// The determinant is checked against `4 nm(beta)` computed in the algebra.
pub fn cm_gram(ord: &MaximalOrder, b1: &BigInt, b2: &BigInt, b3: &BigInt) -> Result<IntMatrix> {
    let b = [b1.clone(), b2.clone(), b3.clone()];
    check_parity(ord, &b)?;
    let nm = ord.algebra.norm(&cm_element(ord, &b));
    if !nm.is_positive() {
        return Err(Error::Degenerate(format!("norm {nm} is not positive")));
    }
    let p = BigInt::from(ord.p);
    let sd = BigInt::from(ord.s) * ord.d;
    let td4 = BigInt::from(4) * &ord.t * ord.d;
    let m = match ord.branch {
        OrderBranch::Primitive => {
            let x: BigInt = -(b2 * &p) / 2 - b3;
            let y = BigInt::from(2) * b1 - b2 * &sd;
            let z = half(b2) * half(b2);
            vec![
                vec![p.clone(), BigInt::from(2) * &sd, x.clone()],
                vec![BigInt::from(2) * &sd, td4, y.clone()],
                vec![x, y, z],
            ]
        }
        OrderBranch::FourTimes => vec![
            vec![BigInt::from(4) * &p, BigInt::from(2) * &sd, -b3],
            vec![BigInt::from(2) * &sd, td4, b1.clone()],
            vec![-b3, b1.clone(), b2 * b2],
        ],
    };
    let m = IntMatrix::from_rows(&m);
    let det = Rational::from_integer(m.det());
    if det != nm * Rational::from_integer(4.into()) {
        return Err(Error::Consistency(format!("Gram determinant {det} is not 4 nm(beta)")));
    }
    Ok(m)
}

/// The basis of singular relations of the CM point, written out
/// coordinate by coordinate.
pub fn singular_basis(ord: &MaximalOrder, b1: &BigInt, b2: &BigInt, b3: &BigInt) -> Result<[SingularRelation; 3]> {
    let b = [b1.clone(), b2.clone(), b3.clone()];
    check_parity(ord, &b)?;
    let p = BigInt::from(ord.p);
    let d = BigInt::from(ord.d);
    let s = BigInt::from(ord.s);
    let z = BigInt::zero;
    let one = BigInt::one;
    Ok(match ord.branch {
        OrderBranch::Primitive => {
            let q: BigInt = (BigInt::one() - &p) / 4;
            [
                SingularRelation::new(one(), one(), q.clone(), z(), z()),
                SingularRelation::new(
                    z(),
                    BigInt::from(2) * &s * &d,
                    z(),
                    one(),
                    &d * (&s * &s * &d - &ord.t),
                ),
                SingularRelation::new(z(), -half(b2), half(b3) - b2 * q, z(), -b1),
            ]
        }
        OrderBranch::FourTimes => [
            SingularRelation::new(one(), z(), -&p, z(), -half(&(BigInt::one() + &s * &d))),
            SingularRelation::new(z(), z(), half(&(BigInt::one() - &s * &d)), one(), -(&ord.t * &d)),
            SingularRelation::new(z(), -b2, half(b3), z(), -half(b1)),
        ],
    })
}

/// A Galois orbit of CM points of discriminant `d`, labelled by a residue
/// `r mod 2D` with `p r^2 = d mod 4D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub r: u64,
    pub modulus: u64,
}

/// Residues `r mod 2D` with `p r^2 = d mod 4D`.
pub fn orbit_labels(dd: u64, p: u64, d: &BigInt) -> Vec<OrbitLabel> {
    let m4 = BigInt::from(4 * dd);
    let target = d.mod_floor(&m4);
    (0..2 * dd)
        .filter(|&r| (BigInt::from(p) * r * r).mod_floor(&m4) == target)
        .map(|r| OrbitLabel { r, modulus: 2 * dd })
        .collect()
}

/// Number of Galois orbits by direct sweep of residues.
pub fn orbit_count(dd: u64, p: u64, d: &BigInt) -> usize {
    orbit_labels(dd, p, d).len()
}

/// `prod_{q | D} (1 - (d/q))`.
pub fn orbit_count_closed_form(dd: u64, d: &BigInt) -> usize {
    prime_divisors(dd)
        .into_iter()
        .map(|q| (1 - kronecker(d, &BigInt::from(q))) as usize)
        .product()
}

/// The sweep count, checked against the closed form.
pub fn orbit_count_checked(dd: u64, p: u64, d: &BigInt) -> Result<usize> {
    let sweep = orbit_count(dd, p, d);
    let closed = orbit_count_closed_form(dd, d);
    if sweep != closed {
        return Err(Error::Consistency(format!(
            "orbit count for D={dd}, p={p}, d={d}: sweep {sweep}, closed form {closed}"
        )));
    }
    Ok(sweep)
}

/// Action of the Atkin-Lehner involution `w_m` (`m | D`) on orbit labels:
/// `r` is negated at the primes dividing `m` and fixed elsewhere. The
/// component at 2 is taken mod 4 when `2 | D`.
pub fn atkin_lehner_on_orbits(label: OrbitLabel, m: u64, dd: u64) -> Result<OrbitLabel> {
    if m == 0 || dd % m != 0 {
        return Err(Error::InvalidInput(format!("{m} does not divide {dd}")));
    }
    if label.modulus != 2 * dd {
        return Err(Error::InvalidInput(format!("label modulus {} is not 2D", label.modulus)));
    }
    let n = 2 * dd;
    let mut r = 0u64;
    let mut acc = 1u64;
    let mut rest = n;
    let mut parts = Vec::new();
    for q in prime_divisors(n) {
        let mut qe = 1;
        while rest % q == 0 {
            rest /= q;
            qe *= q;
        }
        parts.push((q, qe));
    }
    for (q, qe) in parts {
        let x = label.r % qe;
        let x = if m % q == 0 { (qe - x) % qe } else { x };
        // CRT step: r = r + acc * k with r + acc k = x mod qe.
        let inv = crate::exact::arith::mod_inverse(&BigInt::from(acc % qe), &BigInt::from(qe))
            .and_then(|v| v.to_u64())
            .unwrap_or(0);
        let k = ((x + qe - r % qe) % qe) * inv % qe;
        r += acc * k;
        acc *= qe;
    }
    Ok(OrbitLabel { r: r % n, modulus: n })
}

/// Default cap on the values scanned by [`smallest_new_represented`].
pub const NEW_VALUE_CAP: u64 = 100_000;

/// The least `n >= 1` represented by `q_prime` but not by `q`.
pub fn smallest_new_represented(q_prime: &BinaryQF, q: &BinaryQF) -> Result<BigInt> {
    if gl_canonical(q_prime)? == gl_canonical(q)? {
        return Err(Error::SearchExhausted(format!("{q_prime} and {q} are equivalent")));
    }
    for (v, _, _) in represented_values(q_prime, &BigInt::from(NEW_VALUE_CAP))? {
        if v.is_zero() {
            continue;
        }
        if !represents(q, &v, false)?.is_found() {
            return Ok(v);
        }
    }
    Err(Error::SearchExhausted(format!(
        "every value of {q_prime} up to {NEW_VALUE_CAP} is represented by {q}"
    )))
}

fn quad(m: &IntMatrix, v: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += &m[(i, j)] * &v[i] * &v[j];
        }
    }
    s
}

fn bilinear(m: &IntMatrix, v: &[BigInt], w: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..v.len() {
        for j in 0..w.len() {
            s += &m[(i, j)] * &v[i] * &w[j];
        }
    }
    s
}

/// Whether a symmetric matrix is positive definite (leading minors).
pub fn is_positive_definite(m: &IntMatrix) -> bool {
    (1..=m.rows()).all(|k| {
        let rows: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| m[(i, j)].clone()).collect()).collect();
        IntMatrix::from_rows(&rows).det().is_positive()
    })
}

/// Integer vectors `v` with `v^t M v <= bound`, up to sign.
fn short_vectors(m: &IntMatrix, bound: &BigInt) -> Vec<(Vec<BigInt>, BigInt)> {
    let det = m.det();
    let adj = m.adjugate();
    let k = m.rows();
    let lim: Vec<BigInt> = (0..k).map(|i| isqrt(&(bound * &adj[(i, i)] / &det))).collect();
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = lim.iter().map(|l| -l).collect();
    loop {
        let v = quad(m, &cur);
        if !v.is_zero() && &v <= bound {
            out.push((cur.clone(), v));
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            if cur[i] < lim[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = -lim[i].clone();
            i += 1;
        }
    }
}

/// Decide whether the positive definite ternary `M` represents the binary
/// form `q = [a, 2b, c]`, i.e. whether `T^t M T = [[a, b], [b, c]]` for an
/// integral `3 x 2` matrix `T`. Returns the two columns of `T`.
pub fn ternary_represents_binary(m: &IntMatrix, q: &BinaryQF) -> Result<Option<[Vec<BigInt>; 2]>> {
    if q.b.is_odd() {
        return Err(Error::InvalidInput(format!("{q} has an odd middle coefficient")));
    }
    if !m.is_symmetric() || !is_positive_definite(m) {
        return Err(Error::InvalidInput("ternary form is not positive definite".into()));
    }
    let hb = &q.b / 2;
    let bound = (&q.a).max(&q.c).clone();
    let vecs = short_vectors(m, &bound);
    for (x, vx) in vecs.iter().filter(|(_, v)| *v == q.a) {
        for (y, vy) in vecs.iter().filter(|(_, v)| *v == q.c) {
            debug_assert!(vx == &q.a && vy == &q.c);
            if bilinear(m, x, y) == hb {
                return Ok(Some([x.clone(), y.clone()]));
            }
        }
    }
    Ok(None)
}

/// One solution of the intersection recipe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub u: BigInt,
    pub v: BigInt,
    pub d: BigInt,
    pub d0: BigInt,
    pub f: BigInt,
    /// Divisors `r | f` with `(r, D) = 1`; CM points of discriminant
    /// `r^2 d0` are predicted.
    pub admissible_r: Vec<BigInt>,
    pub gram: IntMatrix,
    pub witness: [Vec<BigInt>; 2],
}

/// Whether the imaginary quadratic field of discriminant `d0` embeds into
/// `B_D` (`D = 1` never constrains).
pub fn field_embeds(dd: u64, d0: &BigInt) -> Result<bool> {
    embeds_imaginary_quadratic(dd, d0)
}

/// Search `M = [[a, b, u], [b, c, v], [u, v, n]]` for the curve with form
/// `q = [a, 2b, c]` against the curve with form `q_other`.
pub fn candidate_intersections(
    q: &BinaryQF,
    q_other: &BinaryQF,
    dd: u64,
    dd_other: u64,
    n: &BigInt,
    filter: Option<&dyn Fn(&BigInt) -> bool>,
) -> Result<Vec<Candidate>> {
    if q.b.is_odd() {
        return Err(Error::InvalidInput(format!("{q} has an odd middle coefficient")));
    }
    if !q.is_positive_definite() || !n.is_positive() {
        return Err(Error::InvalidInput("candidate search needs a definite form and n > 0".into()));
    }
    let (a, b, c): (BigInt, BigInt, BigInt) = (q.a.clone(), &q.b / 2, q.c.clone());
    let delta0 = &a * &c - &b * &b;
    let cap = n * &delta0;
    let umax = isqrt(&(&a * n));
    let vmax = isqrt(&(&c * n));
    let two = BigInt::from(2);
    let pu = (&a * n).mod_floor(&two);
    let pv = (&c * n).mod_floor(&two);
    let mut out = Vec::new();
    let mut u = -umax.clone();
    while u <= umax {
        if u.mod_floor(&two) != pu {
            u += 1;
            continue;
        }
        let mut next_v = -vmax.clone();
        while next_v <= vmax {
            let v0 = next_v.clone();
            next_v += 1;
            if v0.mod_floor(&two) != pv {
                continue;
            }
            let r = &c * &u * &u - &two * &b * &u * &v0 + &a * &v0 * &v0;
            let det: BigInt = &cap - r;
            if !det.is_positive() || !(&det % 4u32).is_zero() {
                continue;
            }
            let d = -(&det / 4u32);
            if !is_negative_discriminant(&d) {
                continue;
            }
            let Some((d0, f)) = fundamental_part(&d) else {
                return Err(Error::SearchExhausted(format!("cannot factor {d}")));
            };
            if !field_embeds(dd, &d0)? || !field_embeds(dd_other, &d0)? {
                continue;
            }
            if let Some(pred) = filter {
                if !pred(&d) {
                    continue;
                }
            }
            let gram = IntMatrix::from_rows(&[
                vec![a.clone(), b.clone(), u.clone()],
                vec![b.clone(), c.clone(), v0.clone()],
                vec![u.clone(), v0.clone(), n.clone()],
            ]);
            let Some(witness) = ternary_represents_binary(&gram, q_other)? else {
                continue;
            };
            let admissible_r = divisors(&f, 1 << 20)
                .unwrap_or_default()
                .into_iter()
                .filter(|r| r.gcd(&BigInt::from(dd)).is_one())
                .collect();
            out.push(Candidate { u: u.clone(), v: v0, d, d0, f, admissible_r, gram, witness });
        }
        u += 1;
    }
    Ok(out)
}

/// `f` such that `d = f^2 d0`, when `d0` divides `d` with a square cofactor.
pub fn conductor(d: &BigInt, d0: &BigInt) -> Option<BigInt> {
    if !(d % d0).is_zero() {
        return None;
    }
    exact_sqrt(&(d / d0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatalg::{build_maximal_order, DEFAULT_PRIME_BOUND};

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ord14() -> MaximalOrder {
        build_maximal_order(14, &BinaryQF::from_i64(5, 4, 12), DEFAULT_PRIME_BOUND).unwrap()
    }

    #[test]
    fn deltas() {
        assert_eq!(delta(&SingularRelation::from_i64([0, 1, 0, 0, 0])), bi(1));
        assert_eq!(delta(&SingularRelation::from_i64([1, 0, 1, 0, 0])), bi(-4));
        assert_eq!(delta(&SingularRelation::from_i64([0, 0, 0, 1, 1])), bi(-4));
        assert_eq!(delta(&SingularRelation::from_i64([7, 0, -1, 0, 0])), bi(28));
        let r1 = SingularRelation::from_i64([0, 1, 0, 0, 0]);
        let r2 = SingularRelation::from_i64([7, 0, -1, 0, 0]);
        assert!(delta_pairing_literal(&r1, &r2).is_zero());
        assert_eq!(delta_pairing_literal(&r2, &r2), Rational::from_integer(bi(-28)));
        assert_eq!(delta_pairing(&r2, &r2), bi(28));
    }

    #[test]
    fn gram_d14() {
        let ord = ord14();
        let m = cm_gram(&ord, &bi(67), &bi(2), &bi(-6)).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[5, 112, 1], &[112, 2520, 22], &[1, 22, 1]]));
        assert_eq!(cm_gram(&ord, &bi(115), &bi(4), &bi(-10)).unwrap().det(), bi(44));
        assert!(cm_gram(&ord, &bi(0), &bi(0), &bi(0)).is_err());
        assert!(cm_gram(&ord, &bi(1), &bi(1), &bi(0)).is_err());
        let rels = singular_basis(&ord, &bi(67), &bi(2), &bi(-6)).unwrap();
        assert_eq!(relation_gram(&rels), m);
    }

    #[test]
    fn gram_four_times_branch() {
        let ord = build_maximal_order(15, &BinaryQF::from_i64(8, 4, 8), DEFAULT_PRIME_BOUND).unwrap();
        let mut checked = 0;
        for b1 in (-6..=6).step_by(2) {
            for b2 in -3..=3 {
                for b3 in (-6..=6).step_by(2) {
                    let (b1, b2, b3) = (bi(b1), bi(b2), bi(b3));
                    let Ok(m) = cm_gram(&ord, &b1, &b2, &b3) else { continue };
                    let rels = singular_basis(&ord, &b1, &b2, &b3).unwrap();
                    assert_eq!(relation_gram(&rels), m);
                    checked += 1;
                }
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn orbits() {
        let d = bi(-11);
        let labels: Vec<u64> = orbit_labels(14, 5, &d).iter().map(|l| l.r).collect();
        assert_eq!(labels, vec![3, 11, 17, 25]);
        assert_eq!(orbit_count_checked(14, 5, &bi(-4)).unwrap(), 2);
        assert_eq!(orbit_count_checked(6, 5, &bi(-3)).unwrap(), 2);
        let l = OrbitLabel { r: 3, modulus: 28 };
        assert_eq!(atkin_lehner_on_orbits(l, 2, 14).unwrap().r, 17);
        assert_eq!(atkin_lehner_on_orbits(l, 7, 14).unwrap().r, 11);
        assert_eq!(atkin_lehner_on_orbits(l, 14, 14).unwrap().r, 25);
        assert!(atkin_lehner_on_orbits(l, 3, 14).is_err());
    }

    #[test]
    fn new_values() {
        let q = BinaryQF::from_i64(5, 2, 5);
        assert_eq!(smallest_new_represented(&BinaryQF::from_i64(1, 0, 4), &q).unwrap(), bi(1));
        assert_eq!(smallest_new_represented(&BinaryQF::from_i64(4, 0, 5), &q).unwrap(), bi(4));
        assert!(smallest_new_represented(&q, &q).is_err());
    }

    #[test]
    fn ternary_representations() {
        let m = IntMatrix::from_i64(&[&[5, 1, 1], &[1, 5, 1], &[1, 1, 1]]);
        assert!(ternary_represents_binary(&m, &BinaryQF::from_i64(1, 0, 4)).unwrap().is_some());
        let m = IntMatrix::from_i64(&[&[5, 0, 1], &[0, 12, 2], &[1, 2, 5]]);
        assert!(ternary_represents_binary(&m, &BinaryQF::from_i64(8, 4, 8)).unwrap().is_none());
        assert!(ternary_represents_binary(&IntMatrix::identity(3), &BinaryQF::from_i64(1, 0, 1)).unwrap().is_some());
    }

    #[test]
    fn intersections_d6_y1() {
        let c = candidate_intersections(&BinaryQF::from_i64(5, 2, 5), &BinaryQF::from_i64(1, 0, 4), 6, 1, &bi(1), None).unwrap();
        let mut got: Vec<(i64, i64, i64)> = c
            .iter()
            .map(|x| (x.u.to_i64().unwrap(), x.v.to_i64().unwrap(), x.d.to_i64().unwrap()))
            .collect();
        got.sort();
        assert_eq!(got, vec![(-1, -1, -4), (-1, 1, -3), (1, -1, -3), (1, 1, -4)]);
    }
}
