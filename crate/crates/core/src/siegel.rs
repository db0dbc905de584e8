//! Igusa invariants on the Siegel threefold: conversion between the
//! modular-form coordinates `s2, s3, s5, s6` and Igusa's `J2, J4, J6, J10`,
//! weighted projective comparison, the Humbert surface `H4`, evaluation of
//! curve parameterizations, and fitting of rational maps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::data::{bundle, CurveRecord};
use crate::error::{Error, Result};
use crate::exact::{int, nullspace_rational, squarefree_part, Field, Poly, Rational, ZPoly};
use crate::qforms::BinaryQF;

pub const S_WEIGHTS: [u32; 4] = [2, 3, 5, 6];
pub const J_WEIGHTS: [u32; 4] = [1, 2, 3, 5];

/// `2^10 3^5`.
pub fn c10() -> Rational {
    int(248_832)
}

/// A point `[s2, s3, s5, s6]` in weighted projective space of weights
/// `(2, 3, 5, 6)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct STuple<F> {
    pub s2: F,
    pub s3: F,
    pub s5: F,
    pub s6: F,
}

/// Igusa invariants `[J2, J4, J6, J10]`, weights `(1, 2, 3, 5)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JTuple<F> {
    pub j2: F,
    pub j4: F,
    pub j6: F,
    pub j10: F,
}

impl<F: Field> STuple<F> {
    pub fn new(s2: F, s3: F, s5: F, s6: F) -> Self {
        STuple { s2, s3, s5, s6 }
    }

    pub fn to_array(&self) -> [F; 4] {
        [self.s2.clone(), self.s3.clone(), self.s5.clone(), self.s6.clone()]
    }

    /// The all-zero tuple is not a projective point; parameterizations
    /// produce it at their base points.
    pub fn is_indeterminate(&self) -> bool {
        self.to_array().iter().all(Zero::is_zero)
    }
}

impl<F: Field> JTuple<F> {
    pub fn new(j2: F, j4: F, j6: F, j10: F) -> Self {
        JTuple { j2, j4, j6, j10 }
    }

    pub fn to_array(&self) -> [F; 4] {
        [self.j2.clone(), self.j4.clone(), self.j6.clone(), self.j10.clone()]
    }
}

fn k<F: Field>(n: i64) -> F {
    F::from_rational(&int(n))
}

/// `J2 = -s6/s5`, `J4 = (J2^2 - s2)/24`, `J6 = (-J2^3 + 36 J2 J4 + s3)/216`,
/// `J10 = -s5 / (2^10 3^5)`.
pub fn s_to_j<F: Field>(s: &STuple<F>) -> Result<JTuple<F>> {
    if s.s5.is_zero() {
        return Err(Error::Degenerate("s5 = 0: the point lies on H1".into()));
    }
    let j2 = -(s.s6.clone() / s.s5.clone());
    let j4 = (j2.clone() * j2.clone() - s.s2.clone()) / k(24);
    let j6 = (-(j2.clone() * j2.clone() * j2.clone()) + k::<F>(36) * j2.clone() * j4.clone() + s.s3.clone()) / k(216);
    let j10 = -(s.s5.clone() / F::from_rational(&c10()));
    Ok(JTuple::new(j2, j4, j6, j10))
}

/// Inverse of [`s_to_j`]: `s2 = J2^2 - 24 J4`, `s3 = 216 J6 + J2^3 - 36 J2 J4`,
/// `s5 = -2^10 3^5 J10`, `s6 = -J2 s5`.
pub fn j_to_s<F: Field>(j: &JTuple<F>) -> STuple<F> {
    let s2 = j.j2.clone() * j.j2.clone() - k::<F>(24) * j.j4.clone();
    let s3 = k::<F>(216) * j.j6.clone() + j.j2.clone() * j.j2.clone() * j.j2.clone()
        - k::<F>(36) * j.j2.clone() * j.j4.clone();
    let s5 = -(F::from_rational(&c10()) * j.j10.clone());
    let s6 = -(j.j2.clone() * s5.clone());
    STuple::new(s2, s3, s5, s6)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Whether `y_i = lambda^{w_i} x_i` for some nonzero `lambda` over an
/// algebraic closure. Zero patterns must agree. With `g` the gcd of the
/// weights on the nonzero coordinates, `mu = lambda^g` is recovered from the
/// ratios by an extended-gcd combination and every ratio is checked against
/// the matching power of `mu`.
pub fn weighted_eq<F: Field>(x: &[F], y: &[F], w: &[u32]) -> bool {
    if x.len() != y.len() || x.len() != w.len() {
        return false;
    }
    let mut idx = Vec::new();
    for i in 0..x.len() {
        match (x[i].is_zero(), y[i].is_zero()) {
            (true, true) => {}
            (false, false) => idx.push(i),
            _ => return false,
        }
    }
    if idx.is_empty() {
        return true;
    }
    let ratios: Vec<F> = idx.iter().map(|&i| y[i].clone() / x[i].clone()).collect();
    let mut g = 0i64;
    let mut coef: Vec<i64> = Vec::with_capacity(idx.len());
    for &i in &idx {
        let wi = i64::from(w[i]);
        if g == 0 {
            g = wi;
            coef.push(1);
            continue;
        }
        let (ng, a, b) = ext_gcd(g, wi);
        for c in coef.iter_mut() {
            *c *= a;
        }
        coef.push(b);
        g = ng;
    }
    let mut mu = F::one();
    for (r, &c) in ratios.iter().zip(&coef) {
        mu = mu * r.powi(c);
    }
    idx.iter()
        .zip(&ratios)
        .all(|(&i, r)| mu.powi(i64::from(w[i]) / g) == *r)
}

/// `[12(j+1), 6(j^2+j+1), 4(j^3-2j^2+1), j^3]`.
pub fn baba_point<F: Field>(j: &F) -> JTuple<F> {
    let one = F::one();
    let j2 = j.clone() * j.clone();
    let j3 = j2.clone() * j.clone();
    JTuple::new(
        k::<F>(12) * (j.clone() + one.clone()),
        k::<F>(6) * (j2.clone() + j.clone() + one.clone()),
        k::<F>(4) * (j3.clone() - k::<F>(2) * j2 + one),
        j3,
    )
}

/// A rational parameterization `[s2, s3, s5, s6](j)` of a curve on the
/// Siegel threefold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCurve {
    pub label: String,
    pub d: u64,
    pub level: Option<u64>,
    pub form: BinaryQF,
    pub s: [Poly; 4],
    pub hauptmodul: Option<String>,
}

impl ParamCurve {
    pub fn from_record(r: &CurveRecord) -> Result<Self> {
        Ok(ParamCurve {
            label: r.label.clone(),
            d: r.d,
            level: r.level,
            form: r.binary_form(),
            s: [r.s2.to_poly()?, r.s3.to_poly()?, r.s5.to_poly()?, r.s6.to_poly()?],
            hauptmodul: r.hauptmodul.clone(),
        })
    }

    /// Look a curve up in the bundle by label (`fX14^1`, `fY5'`, ...).
    pub fn load(label: &str) -> Result<Self> {
        let b = bundle()?;
        let r = b
            .curve(label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown curve {label}")))?;
        Self::from_record(r)
    }

    pub fn all_shimura() -> Result<Vec<Self>> {
        bundle()?.shimura.iter().map(Self::from_record).collect()
    }

    pub fn all_modular() -> Result<Vec<Self>> {
        bundle()?.modular.iter().map(Self::from_record).collect()
    }
}

pub fn eval_param<F: Field>(c: &ParamCurve, j: &F) -> STuple<F> {
    STuple::new(c.s[0].eval(j), c.s[1].eval(j), c.s[2].eval(j), c.s[3].eval(j))
}

/// `i1 = 2^13 3^5 s6^5 / s5^6`, `i2 = 2^9 3^5 s2 s6^3 / s5^4`,
/// `i3 = 2^7 3^4 s6^2 (4 s2 s6 + s3 s5) / s5^4`.
pub fn absolute_invariants<F: Field>(s: &STuple<F>) -> Result<(F, F, F)> {
    if s.s5.is_zero() {
        return Err(Error::Degenerate("s5 = 0".into()));
    }
    let s5_4 = s.s5.powi(4);
    let i1 = k::<F>(8192 * 243) * s.s6.powi(5) / s.s5.powi(6);
    let i2 = k::<F>(512 * 243) * s.s2.clone() * s.s6.powi(3) / s5_4.clone();
    let i3 = k::<F>(128 * 81)
        * s.s6.powi(2)
        * (k::<F>(4) * s.s2.clone() * s.s6.clone() + s.s3.clone() * s.s5.clone())
        / s5_4;
    Ok((i1, i2, i3))
}

/// The weight-60 form whose divisor is `2 H4`, as a polynomial in
/// `s2, s3, s5, s6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H4 {
    pub terms: Vec<(BigInt, [u32; 4])>,
}

impl H4 {
    pub fn load() -> Result<Self> {
        let terms = bundle()?
            .h4
            .iter()
            .map(|t| {
                t.coef
                    .parse::<BigInt>()
                    .map(|c| (c, t.exps))
                    .map_err(|_| Error::Data(format!("bad H4 coefficient {}", t.coef)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(H4 { terms })
    }

    pub fn eval<F: Field>(&self, s: &STuple<F>) -> F {
        let v = s.to_array();
        let mut acc = F::zero();
        for (c, e) in &self.terms {
            let mut t = F::from_rational(&Rational::from_integer(c.clone()));
            for i in 0..4 {
                if e[i] > 0 {
                    t = t * v[i].powi(i64::from(e[i]));
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Compose with a parameterization. Each `s_k` is split as a rational
    /// scalar times a primitive integer polynomial so that the products are
    /// formed over the integers.
    pub fn restrict(&self, c: &ParamCurve) -> Poly {
        let parts: Vec<Option<(Rational, ZPoly)>> = c
            .s
            .iter()
            .map(|p| (!p.is_zero()).then(|| p.to_primitive()))
            .collect();
        let max_e: Vec<u32> = (0..4)
            .map(|i| self.terms.iter().map(|(_, e)| e[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<ZPoly>> = Vec::with_capacity(4);
        for i in 0..4 {
            let mut v = vec![ZPoly::one()];
            if let Some((_, z)) = &parts[i] {
                for _ in 0..max_e[i] {
                    let next = v.last().unwrap().mul(z);
                    v.push(next);
                }
            }
            powers.push(v);
        }
        let mut scaled: Vec<(Rational, ZPoly)> = Vec::new();
        'term: for (coef, e) in &self.terms {
            let mut scalar = Rational::from_integer(coef.clone());
            let mut poly = ZPoly::one();
            for i in 0..4 {
                if e[i] == 0 {
                    continue;
                }
                let Some((sc, _)) = &parts[i] else { continue 'term };
                scalar *= sc.pow(e[i] as i32);
                poly = poly.mul(&powers[i][e[i] as usize]);
            }
            scaled.push((scalar, poly));
        }
        let den = scaled
            .iter()
            .fold(BigInt::one(), |acc, (s, _)| acc.lcm(s.denom()));
        let mut total = ZPoly::zero();
        for (s, p) in &scaled {
            let m = (s * Rational::from_integer(den.clone())).to_integer();
            total = total.add(&p.scale(&m));
        }
        Poly::from_zpoly(&total).scale(&Rational::new(BigInt::one(), den))
    }
}

pub fn h4_eval<F: Field>(s: &STuple<F>) -> Result<F> {
    Ok(H4::load()?.eval(s))
}

pub fn h4_restrict(c: &ParamCurve) -> Result<Poly> {
    Ok(H4::load()?.restrict(c))
}

/// `H4|_X = constant * square^2 * squarefree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCertificate {
    pub constant: Rational,
    pub square: Poly,
    pub squarefree: Poly,
}

pub fn square_certificate(c: &ParamCurve) -> Result<SquareCertificate> {
    if c.s[2].is_zero() {
        return Err(Error::InvalidInput(format!("{}: s5 vanishes identically", c.label)));
    }
    let r = h4_restrict(c)?;
    let split = squarefree_part(&r)?;
    Ok(SquareCertificate {
        constant: split.constant,
        square: split.square,
        squarefree: split.squarefree,
    })
}

/// Fit `value = P(j) / Q(j)` with `deg P <= num_deg`, `deg Q <= den_deg`
/// from exact samples. `Q` is normalized to a primitive integer polynomial
/// with positive leading coefficient.
pub fn fit_rational_map(samples: &[(Rational, Rational)], num_deg: usize, den_deg: usize) -> Result<(Poly, Poly)> {
    for (i, (a, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(b, _)| a == b) {
            return Err(Error::InvalidInput(format!("repeated sample point {a}")));
        }
    }
    let rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|(j, v)| {
            let mut row = Vec::with_capacity(num_deg + den_deg + 2);
            let mut pw = Rational::one();
            for _ in 0..=num_deg {
                row.push(-pw.clone());
                pw *= j;
            }
            let mut pw = Rational::one();
            for _ in 0..=den_deg {
                row.push(v * &pw);
                pw *= j;
            }
            row
        })
        .collect();
    let ncols = num_deg + den_deg + 2;
    let basis = if rows.is_empty() {
        (0..ncols)
            .map(|i| (0..ncols).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        nullspace_rational(&rows)?
    };
    match basis.len() {
        0 => return Err(Error::Inconsistent),
        1 => {}
        n => return Err(Error::Underdetermined { dimension: n }),
    }
    let v = &basis[0];
    let p = Poly::new(v[..=num_deg].to_vec());
    let q = Poly::new(v[num_deg + 1..].to_vec());
    if q.is_zero() {
        return Err(Error::Inconsistent);
    }
    let (scalar, qz) = q.to_primitive();
    let p = p.scale(&(Rational::one() / scalar));
    Ok((p, Poly::from_zpoly(&qz)))
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckLine { name: name.into(), passed, detail: detail.into() }
    }
}

/// Identities satisfied by the modular curve tables: `fY_N` lie on `H1`
/// (`s5 = 0`), `fY_N'` lie on `H4` (the `H4` form vanishes identically),
/// plus spot values at CM points.
pub fn verify_modular_curve_tables() -> Result<Vec<CheckLine>> {
    let h4 = H4::load()?;
    let mut out = Vec::new();
    for c in ParamCurve::all_modular()? {
        if c.label.ends_with('\'') {
            let r = h4.restrict(&c);
            out.push(CheckLine::new(
                format!("{} lies on H4", c.label),
                r.is_zero(),
                match r.degree() {
                    None => "H4 restriction is identically zero".to_string(),
                    Some(n) => format!("H4 restriction has degree {n}"),
                },
            ));
            out.push(CheckLine::new(
                format!("{} off H1", c.label),
                !c.s[2].is_zero(),
                "s5 is not identically zero",
            ));
        } else {
            out.push(CheckLine::new(
                format!("{} lies on H1", c.label),
                c.s[2].is_zero(),
                format!("s5 = {}", c.s[2]),
            ));
        }
    }
    let y1 = ParamCurve::load("fY1")?;
    let pattern = y1.s[0].mul(&Poly::from_i64(&[-1728, 1]));
    out.push(CheckLine::new("fY1: s3 = s2 (j - 1728)", y1.s[1] == pattern, format!("s3 = {}", y1.s[1])));

    let y5 = ParamCurve::load("fY5'")?;
    let at0 = eval_param(&y5, &int(0));
    out.push(CheckLine::new("fY5' at j = 0: s3 = 0", at0.s3.is_zero(), format!("s3 = {}", at0.s3)));
    let at36 = eval_param(&y5, &int(36));
    let cube = at36.s2.pow(3);
    let r1 = at36.s3.pow(2) / &cube;
    let r2 = &at36.s5 / (&at36.s2 * &at36.s3);
    let r3 = &at36.s6 / &cube;
    out.push(CheckLine::new(
        "fY5' at j = 36: ratios 81/64, 1, 145/64",
        r1 == Rational::new(81.into(), 64.into()) && r2.is_one() && r3 == Rational::new(145.into(), 64.into()),
        format!("{r1}, {r2}, {r3}"),
    ));

    let y3 = ParamCurve::load("fY3'")?;
    let lhs = y3.s[3].add(&y3.s[2].mul(&Poly::from_i64(&[12, 1])));
    out.push(CheckLine::new("fY3': s6 / s5 = -(j + 12)", lhs.is_zero(), format!("s6 + (j+12) s5 = {lhs}")));
    Ok(out)
}

/// Evaluate a polynomial with integer coefficients at a rational, returning
/// its sign.
pub fn sign_at(p: &Poly, j: &Rational) -> i32 {
    let v = p.eval(j);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, GaussianRational};

    #[test]
    fn s_to_j_examples() {
        let s = STuple::new(int(0), int(0), int(248_832 * 4), int(0));
        assert_eq!(s_to_j(&s).unwrap(), JTuple::new(int(0), int(0), int(0), int(-4)));
        let s = STuple::new(int(1), int(1), int(1), int(2));
        let j = s_to_j(&s).unwrap();
        assert_eq!(j, JTuple::new(int(-2), rat(1, 8), int(0), rat(-1, 248_832)));
        assert_eq!(j_to_s(&j), s);
        assert!(s_to_j(&STuple::new(int(1), int(1), int(0), int(1))).is_err());
    }

    #[test]
    fn weighted_examples() {
        let j = s_to_j(&STuple::new(int(1), int(1), int(1), int(2))).unwrap().to_array();
        let b = baba_point(&int(1)).to_array();
        assert!(weighted_eq(&j, &b, &J_WEIGHTS));
        assert!(weighted_eq(&j, &j, &J_WEIGHTS));
        assert!(!weighted_eq(&[int(1), int(1)], &[int(1), int(2)], &[1, 1]));
        // only even weights: lambda = i is allowed
        assert!(weighted_eq(&[int(1), int(1)], &[int(-1), int(1)], &[2, 4]));
        assert!(!weighted_eq(&[int(1), int(0)], &[int(1), int(1)], &[1, 1]));
    }

    #[test]
    fn baba_examples() {
        assert_eq!(baba_point(&int(0)), JTuple::new(int(12), int(6), int(4), int(0)));
        assert_eq!(baba_point(&int(1)), JTuple::new(int(24), int(18), int(0), int(1)));
        assert_eq!(baba_point(&int(-1)), JTuple::new(int(0), int(6), int(-8), int(-1)));
    }

    #[test]
    fn h4_spot_values() {
        let h4 = H4::load().unwrap();
        assert_eq!(h4.eval(&STuple::new(int(0), int(0), int(0), int(1))), int(-11664));
        assert!(h4.eval(&STuple::new(int(0), int(0), int(0), int(0))).is_zero());
    }

    #[test]
    fn fit_examples() {
        let samples: Vec<_> = (1..4).map(|j| (int(j), int(j + 1))).collect();
        let (p, q) = fit_rational_map(&samples, 1, 0).unwrap();
        assert_eq!((p, q), (Poly::from_i64(&[1, 1]), Poly::one()));
        let e = fit_rational_map(&samples[..2], 1, 1);
        assert_eq!(e, Err(Error::Underdetermined { dimension: 2 }));
        let bad = vec![(int(1), int(1)), (int(2), int(5)), (int(3), int(2))];
        assert_eq!(fit_rational_map(&bad, 0, 0), Err(Error::Inconsistent));
    }

    #[test]
    fn gaussian_evaluation() {
        let c = ParamCurve::load("fX14^1").unwrap();
        let j = GaussianRational::new(int(0), rat(-1, 2));
        let s = eval_param(&c, &j);
        assert!(!s.s5.is_zero());
    }

    #[test]
    fn fx6_values() {
        let c = ParamCurve::load("fX6^1").unwrap();
        assert_eq!(eval_param(&c, &int(1)), STuple::new(int(1), int(1), int(1), int(2)));
        assert!(eval_param(&c, &int(0)).is_indeterminate());
        let cert = square_certificate(&c).unwrap();
        assert!(cert.squarefree.degree().unwrap_or(0) <= 4);
    }

    #[test]
    fn fx14_h4_restriction() {
        let c = ParamCurve::load("fX14^1").unwrap();
        let j = Poly::x();
        let lin = |a: i64, b: i64| Poly::from_i64(&[b, a]);
        let expected = [
            j.pow(2),
            lin(1, -1).pow(2),
            lin(1, 1).pow(6),
            lin(9, -5).pow(2),
            Poly::from_i64(&[-5, 0, 1]).pow(2),
            Poly::from_i64(&[4, 0, 3]).pow(2),
            Poly::from_i64(&[7, -12, 9]).pow(2),
            Poly::from_i64(&[8, 0, -13, 0, 16]),
        ]
        .iter()
        .fold(Poly::constant(Rational::from_integer(BigInt::from(3).pow(30u32))), |acc, f| acc.mul(f));
        assert_eq!(h4_restrict(&c).unwrap(), expected);
        let cert = square_certificate(&c).unwrap();
        assert_eq!(cert.squarefree, Poly::from_i64(&[8, 0, -13, 0, 16]));
    }

    #[test]
    fn fy3_ratio_at_12() {
        let c = ParamCurve::load("fY3'").unwrap();
        let s = eval_param(&c, &int(12));
        assert_eq!(s.s6 / s.s5, int(-24));
    }

    #[test]
    fn modular_tables() {
        for line in verify_modular_curve_tables().unwrap() {
            assert!(line.passed, "{}: {}", line.name, line.detail);
        }
    }
}
