//! Mestre obstructions along Shimura curves and the real points of `fX14`
//! on the Humbert surface `H4`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::data::{bundle, MestreRecord};
use crate::error::{Error, Result};
use crate::exact::arith::{divisors, squarefree_kernel};
use crate::exact::{Field, GaussianRational, Poly, Rational, ZPoly};
use crate::quatalg::{ramified_primes, splits_over_imaginary_quadratic, QuatAlgebra, RamificationSet};
use crate::siegel::{eval_param, h4_restrict, s_to_j, square_certificate, JTuple, ParamCurve, STuple};

const FACTOR_LIMIT: u64 = 1_000_000;

/// The pair `(a(j), b(j))` whose quaternion algebra obstructs a rational
/// model at the point `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub label: String,
    pub a: Poly,
    pub b: Poly,
}

impl Obstruction {
    pub fn from_record(r: &MestreRecord) -> Result<Self> {
        Ok(Obstruction { label: r.label.clone(), a: r.a.to_poly()?, b: r.b.to_poly()? })
    }

    pub fn load(label: &str) -> Result<Self> {
        let r = bundle()?
            .mestre_row(label)
            .ok_or_else(|| Error::InvalidInput(format!("no obstruction data for {label}")))?;
        Self::from_record(r)
    }

    pub fn all() -> Result<Vec<Self>> {
        bundle()?.mestre.iter().map(Self::from_record).collect()
    }

    pub fn values<F: Field>(&self, j: &F) -> (F, F) {
        (self.a.eval(j), self.b.eval(j))
    }
}

pub fn obstruction_at(ob: &Obstruction, j: &Rational) -> Result<QuatAlgebra> {
    let (a, b) = ob.values(j);
    if a.is_zero() || b.is_zero() {
        return Err(Error::Degenerate(format!("{}: a({j}) b({j}) = 0", ob.label)));
    }
    QuatAlgebra::new(a, b)
}

/// The obstruction at a point and its finite ramification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub label: String,
    pub j: Rational,
    pub a: Rational,
    pub b: Rational,
    pub ramification: RamificationSet,
    pub splits_over_gaussian: bool,
}

pub fn obstruction_report(ob: &Obstruction, j: &Rational) -> Result<ObstructionReport> {
    let alg = obstruction_at(ob, j)?;
    Ok(ObstructionReport {
        label: ob.label.clone(),
        j: j.clone(),
        a: alg.a.clone(),
        b: alg.b.clone(),
        ramification: ramified_primes(&alg)?,
        splits_over_gaussian: splits_over_imaginary_quadratic(&alg, &BigInt::from(-4))?,
    })
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn square_class(q: &Rational) -> Result<BigInt> {
    if q.is_zero() {
        return Err(Error::Degenerate("square class of 0".into()));
    }
    let n = q.numer() * q.denom();
    squarefree_kernel(&n, FACTOR_LIMIT)
        .ok_or_else(|| Error::SearchExhausted(format!("could not factor {n}")))
}

/// Evaluate at a Gaussian point where both values happen to be rational and
/// reduce them to squarefree integers. Non-rational values are unsupported.
pub fn gaussian_obstruction(ob: &Obstruction, j: &GaussianRational) -> Result<QuatAlgebra> {
    let (a, b) = ob.values(j);
    if !a.is_rational() || !b.is_rational() {
        return Err(Error::InvalidInput(format!(
            "{}: obstruction values at {j:?} are not rational",
            ob.label
        )));
    }
    let a = Rational::from_integer(square_class(&a.re)?);
    let b = Rational::from_integer(square_class(&b.re)?);
    QuatAlgebra::new(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSampleReport {
    pub label: String,
    pub checked: usize,
    pub degenerate: Vec<Rational>,
    pub failures: Vec<Rational>,
}

impl RealSampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The obstruction is ramified at infinity exactly when `a(j) < 0` and
/// `b(j) < 0`.
pub fn ramified_at_infinity_for_real_samples(ob: &Obstruction, samples: &[Rational]) -> RealSampleReport {
    let mut rep = RealSampleReport {
        label: ob.label.clone(),
        checked: 0,
        degenerate: Vec::new(),
        failures: Vec::new(),
    };
    for j in samples {
        let (a, b) = ob.values(j);
        if a.is_zero() || b.is_zero() {
            rep.degenerate.push(j.clone());
            continue;
        }
        rep.checked += 1;
        if !(a.is_negative() && b.is_negative()) {
            rep.failures.push(j.clone());
        }
    }
    rep
}

/// Number of distinct real roots by Sturm's theorem.
pub fn real_root_count(p: &Poly) -> usize {
    let Some(deg) = p.degree() else { return 0 };
    if deg == 0 {
        return 0;
    }
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    let changes = |signs: Vec<i32>| {
        let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |q: &Rational| if q.is_negative() { -1 } else { 1 };
    let at_pos: Vec<i32> = seq.iter().map(|q| sign(&q.lc())).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|q| {
            let s = sign(&q.lc());
            if q.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg) - changes(at_pos)
}

fn signed_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let d = divisors(&n.abs(), FACTOR_LIMIT)
        .ok_or_else(|| Error::SearchExhausted(format!("could not factor {n}")))?;
    Ok(d.iter().flat_map(|x| [x.clone(), -x]).collect())
}

/// Split off the irreducible integer factors of degree one and two of a
/// squarefree primitive polynomial. Returns the factors found and the
/// cofactor.
pub fn low_degree_factors(p: &ZPoly) -> Result<(Vec<ZPoly>, ZPoly)> {
    let mut rest = p.primitive_part();
    let mut found = Vec::new();
    while rest.degree().unwrap_or(0) >= 1 && rest.coeff(0).is_zero() {
        found.push(ZPoly::x());
        rest = rest.div_exact(&ZPoly::x()).expect("x divides");
    }
    for deg in 1..=2usize {
        'search: loop {
            if rest.degree().unwrap_or(0) < deg {
                break;
            }
            let lead = signed_divisors(&rest.lc())?;
            let cons = signed_divisors(&rest.coeff(0))?;
            for a in lead.iter().filter(|a| a.is_positive()) {
                for c in &cons {
                    let cands: Vec<ZPoly> = if deg == 1 {
                        vec![ZPoly::new(vec![c.clone(), a.clone()])]
                    } else {
                        let p1 = rest.eval(&BigInt::one());
                        if p1.is_zero() {
                            continue;
                        }
                        signed_divisors(&p1)?
                            .into_iter()
                            .map(|s| ZPoly::new(vec![c.clone(), &s - a - c, a.clone()]))
                            .collect()
                    };
                    for f in cands {
                        if f.degree() != Some(deg) || f.content() != BigInt::one() {
                            continue;
                        }
                        if deg == 2 {
                            let disc = f.coeff(1).pow(2u32) - BigInt::from(4) * f.coeff(2) * f.coeff(0);
                            if crate::exact::arith::is_square(&disc) {
                                continue;
                            }
                        }
                        if let Some(q) = rest.div_exact(&f) {
                            found.push(f);
                            rest = q;
                            continue 'search;
                        }
                    }
                }
            }
            break;
        }
    }
    Ok((found, rest))
}

/// A real point of `fX14` on `H4` and off `H1`, given by the minimal
/// polynomial of `j` and the `s`-tuple reduced modulo it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalPoint {
    pub min_poly: Poly,
    pub s: [Poly; 4],
    pub rational: Option<(Rational, STuple<Rational>, JTuple<Rational>)>,
}

fn rem(p: &Poly, m: &Poly) -> Poly {
    p.div_rem(m).1
}

/// Real points of a curve meeting `H4` away from `H1` and away from the
/// base points of the parameterization.
pub fn h4_real_points(c: &ParamCurve) -> Result<Vec<ExceptionalPoint>> {
    let r = h4_restrict(c)?;
    let (_, z) = r.to_primitive();
    let radical = {
        let g = z.gcd(&z.derivative());
        z.div_exact(&g)
            .ok_or_else(|| Error::Consistency("radical does not divide".into()))?
    };
    let (factors, rest) = low_degree_factors(&radical)?;
    if real_root_count(&Poly::from_zpoly(&rest)) > 0 {
        return Err(Error::SearchExhausted(format!(
            "{}: real roots in an irreducible factor of degree > 2",
            c.label
        )));
    }
    let mut out = Vec::new();
    for f in factors {
        let m = Poly::from_zpoly(&f);
        if real_root_count(&m) == 0 {
            continue;
        }
        let s = [rem(&c.s[0], &m), rem(&c.s[1], &m), rem(&c.s[2], &m), rem(&c.s[3], &m)];
        if s[2].is_zero() || s.iter().all(Poly::is_zero) {
            continue;
        }
        let rational = if f.degree() == Some(1) {
            let j = -Rational::new(f.coeff(0), f.coeff(1));
            let st = eval_param(c, &j);
            let jt = s_to_j(&st)?;
            Some((j, st, jt))
        } else {
            None
        };
        out.push(ExceptionalPoint { min_poly: m, s, rational });
    }
    out.sort_by_key(|p| p.min_poly.degree());
    Ok(out)
}

pub fn mestre14_exceptional_points() -> Result<Vec<ExceptionalPoint>> {
    h4_real_points(&ParamCurve::load("fX14^1")?)
}

/// If `b(j)` is a constant multiple of the squarefree factor of the `H4`
/// restriction, return that constant.
pub fn certificate_ratio(label: &str) -> Result<Option<Rational>> {
    let ob = Obstruction::load(label)?;
    let cert = square_certificate(&ParamCurve::load(label)?)?;
    let (q, r) = ob.b.div_rem(&cert.squarefree);
    Ok((r.is_zero() && q.degree() == Some(0)).then(|| q.lc()))
}

/// Squarefree integer representatives of `a(j)` and `b(j)` when both are
/// nonzero rationals.
pub fn reduced_pair(ob: &Obstruction, j: &Rational) -> Result<(BigInt, BigInt)> {
    let alg = obstruction_at(ob, j)?;
    Ok((square_class(&alg.a)?, square_class(&alg.b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn fx6_at_one() {
        let ob = Obstruction::load("fX6^1").unwrap();
        let alg = obstruction_at(&ob, &int(1)).unwrap();
        assert_eq!((alg.a, alg.b), (int(-6), int(-86)));
        let ob = Obstruction::load("fX10^1").unwrap();
        assert!(obstruction_at(&ob, &int(0)).is_err());
    }

    #[test]
    fn real_samples() {
        let ob = Obstruction::load("fX14^1").unwrap();
        let samples: Vec<Rational> = (-30..=30).map(|k| rat(k, 3)).collect();
        assert!(ramified_at_infinity_for_real_samples(&ob, &samples).passed());
        let ob = Obstruction::load("fX6^1").unwrap();
        assert!(ramified_at_infinity_for_real_samples(&ob, &[int(1), int(10), int(1000)]).passed());
        let rep = ramified_at_infinity_for_real_samples(&ob, &[int(-1)]);
        assert_eq!(rep.failures, vec![int(-1)]);
    }

    #[test]
    fn gonzalez() {
        let ob = Obstruction::load("fX14^1").unwrap();
        let j = GaussianRational::new(int(0), rat(-1, 2));
        let (_, b) = ob.values(&j);
        assert_eq!(b, GaussianRational::from_rational(rat(-147, 4)));
        let alg = gaussian_obstruction(&ob, &j).unwrap();
        assert_eq!((alg.a.clone(), alg.b.clone()), (int(-14), int(-3)));
        assert!(splits_over_imaginary_quadratic(&alg, &BigInt::from(-4)).unwrap());
    }

    #[test]
    fn sturm() {
        assert_eq!(real_root_count(&Poly::from_i64(&[8, 0, -13, 0, 16])), 0);
        assert_eq!(real_root_count(&Poly::from_i64(&[-5, 0, 1])), 2);
        assert_eq!(real_root_count(&Poly::from_i64(&[0, -1, 0, 1])), 3);
    }

    #[test]
    fn exceptional_points() {
        let pts = mestre14_exceptional_points().unwrap();
        let rational: Vec<_> = pts.iter().filter_map(|p| p.rational.clone()).collect();
        let js: Vec<Rational> = rational.iter().map(|r| r.0.clone()).collect();
        assert!(js.contains(&int(-1)) && js.contains(&rat(5, 9)));
        let quad: Vec<_> = pts.iter().filter(|p| p.rational.is_none()).collect();
        assert_eq!(quad.len(), 1);
        assert_eq!(quad[0].min_poly, Poly::from_i64(&[-5, 0, 1]));
    }

    #[test]
    fn fx14_certificate_ratio() {
        assert_eq!(certificate_ratio("fX14^1").unwrap(), Some(int(-3)));
    }
}
