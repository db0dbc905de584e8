//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatloci::cm::{
    atkin_lehner_on_orbits, candidate_intersections, cm_element, cm_gram, delta, delta_pairing,
    orbit_count, orbit_labels, OrbitLabel, SingularRelation,
};
use quatloci::data::bundle;
use quatloci::exact::arith::kronecker;
use quatloci::exact::{int, rat, GaussianRational, Poly, Rational};
use quatloci::loci::{
    catalog, enumerate_sq_classes, r_via_enumeration, r_via_formula, stable_group_order,
    valid_discriminants,
};
use quatloci::qforms::{enumerate_primitive_classes, genus_characters, twisted_character_product};
use quatloci::quatalg::{
    build_maximal_order, hilbert_symbol, splits_over_imaginary_quadratic, Place, QuatAlgebra,
    DEFAULT_PRIME_BOUND,
};
use quatloci::siegel::{
    absolute_invariants, baba_point, eval_param, h4_restrict, s_to_j, square_certificate,
    weighted_eq, ParamCurve, H4, J_WEIGHTS, S_WEIGHTS,
};
use quatloci::BinaryQF;

type Outcome = Result<String, String>;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn f(a: i64, b: i64, c: i64) -> BinaryQF {
    BinaryQF::from_i64(a, b, c)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn r_table() -> Outcome {
    let ds = [6, 10, 14, 15, 21, 22, 26, 33, 34, 35, 39, 46];
    let want = [1, 1, 1, 2, 1, 1, 2, 1, 1, 3, 2, 1];
    for (d, r) in ds.iter().zip(want) {
        let a = r_via_formula(*d).map_err(e2s)?;
        let b = r_via_enumeration(*d).map_err(e2s)?;
        ensure(a == r && b == r, format!("D={d}: formula {a}, enumeration {b}, expected {r}"))?;
    }
    Ok(format!("{} discriminants, both routes", ds.len()))
}

fn locus_table() -> Outcome {
    let b = bundle().map_err(e2s)?;
    let mut by_d: BTreeMap<u64, Vec<&quatloci::data::SqRow>> = BTreeMap::new();
    for row in &b.sq_table {
        by_d.entry(row.d).or_default().push(row);
    }
    let mut rows = 0;
    for (&d, listed) in &by_d {
        let enumerated: BTreeSet<BinaryQF> = enumerate_sq_classes(d).map_err(e2s)?.into_iter().collect();
        let forms: BTreeSet<BinaryQF> = listed.iter().map(|r| r.binary_form()).collect();
        if d < 100 {
            ensure(forms == enumerated, format!("D={d}: listed {forms:?} vs enumerated {enumerated:?}"))?;
        } else {
            ensure(forms.is_subset(&enumerated), format!("D={d}: listed form outside the locus"))?;
        }
        for r in listed {
            let q = r.binary_form();
            ensure(q.discriminant() == bi(-16) * d, format!("D={d} {q}: discriminant"))?;
            let w = stable_group_order(&q).map_err(e2s)?;
            ensure(w == r.w, format!("D={d} {q}: |W| {w} vs listed {}", r.w))?;
            let ord = build_maximal_order(d, &q, DEFAULT_PRIME_BOUND).map_err(e2s)?;
            ensure(
                ord.p == r.p && ord.s == r.s,
                format!("D={d} {q}: (p,s) = ({}, {}) vs listed ({}, {})", ord.p, ord.s, r.p, r.s),
            )?;
            ord.verify().map_err(e2s)?;
            rows += 1;
        }
    }
    Ok(format!("{rows} rows over {} discriminants", by_d.len()))
}

fn cm_gram_check() -> Outcome {
    let ord = build_maximal_order(14, &f(5, 224, 2520), DEFAULT_PRIME_BOUND).map_err(e2s)?;
    let g = cm_gram(&ord, &bi(67), &bi(2), &bi(-6)).map_err(e2s)?;
    let want = quatloci::IntMatrix::from_i64(&[&[5, 112, 1], &[112, 2520, 22], &[1, 22, 1]]);
    ensure(g == want, format!("D=14 Gram {g:?}"))?;
    ensure(g.det() == bi(44), "determinant 44")?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut orders = Vec::new();
    for d in [6u64, 10, 14, 15, 21, 22, 26, 35, 39] {
        for c in catalog(d).map_err(e2s)?.classes {
            orders.push(c.order);
        }
    }
    orders.truncate(10);
    ensure(orders.len() == 10, "ten orders")?;
    let mut total = 0;
    for ord in &orders {
        let (p, sd) = (ord.p as i64, (ord.s * ord.d) as i64);
        let near = |num: i64, den: i64| (num as f64 / den as f64).round() as i64;
        let mut found = 0;
        let mut tries = 0;
        while found < 200 {
            tries += 1;
            ensure(tries < 100_000, format!("D={}: too few positive-norm triples", ord.d))?;
            let (e1, e2) = (rng.gen_range(-3i64..=3), rng.gen_range(-2i64..=2));
            let b = match ord.branch {
                quatloci::quatalg::OrderBranch::Primitive => {
                    let b3 = 2 * rng.gen_range(-20 * p..=20 * p);
                    let b2 = 2 * (e2 - near(b3, p));
                    [-near(sd * b3, p) + e1, b2, b3]
                }
                quatloci::quatalg::OrderBranch::FourTimes => {
                    let b3 = 2 * rng.gen_range(-10i64..=10);
                    let b1 = 2 * (e1 - near(sd * b3, 4 * p));
                    [b1, rng.gen_range(-200i64..=200), b3]
                }
            }
            .map(bi);
            let nm = ord.algebra.norm(&cm_element(ord, &b));
            if !nm.is_positive() {
                continue;
            }
            let g = cm_gram(ord, &b[0], &b[1], &b[2]).map_err(e2s)?;
            ensure(
                Rational::from_integer(g.det()) == nm * int(4),
                format!("D={} b={b:?}: det != 4 nm", ord.d),
            )?;
            found += 1;
        }
        total += found;
    }
    Ok(format!("D=14 example plus {total} random triples"))
}

fn orbits() -> Outcome {
    let d = bi(-11);
    ensure(orbit_count(14, 5, &d) == 4, "orbit count")?;
    let reps: BTreeSet<u64> = orbit_labels(14, 5, &d).into_iter().map(|l| l.r).collect();
    ensure(reps == [3, 11, 17, 25].into(), format!("reps {reps:?}"))?;
    let three = OrbitLabel { r: 3, modulus: 28 };
    for (m, img) in [(2, 17), (7, 11), (14, 25)] {
        let got = atkin_lehner_on_orbits(three.clone(), m, 14).map_err(e2s)?;
        ensure(got.r == img, format!("w{m}(3) = {}", got.r))?;
    }
    Ok("reps {3,11,17,25} mod 28; w2, w7, w14 images".into())
}

fn uvd(c: &[quatloci::cm::Candidate]) -> BTreeSet<(i64, i64, i64)> {
    c.iter()
        .map(|x| (x.u.to_i64().unwrap(), x.v.to_i64().unwrap(), x.d.to_i64().unwrap()))
        .collect()
}

fn intersections() -> Outcome {
    let x6 = f(5, 2, 5);
    let c = candidate_intersections(&x6, &f(1, 0, 4), 6, 1, &bi(1), None).map_err(e2s)?;
    let want: BTreeSet<_> = [(-1, -1, -4), (-1, 1, -3), (1, -1, -3), (1, 1, -4)].into();
    ensure(uvd(&c) == want, format!("fX6 x fY1: {:?}", uvd(&c)))?;

    let five = bi(5);
    let filt = move |d: &BigInt| kronecker(d, &five) != -1;
    let c = candidate_intersections(&x6, &f(4, 0, 5), 6, 1, &bi(4), Some(&filt)).map_err(e2s)?;
    let ds: BTreeSet<i64> = uvd(&c).into_iter().map(|t| t.2).collect();
    ensure([-4, -19, -24].iter().all(|d| ds.contains(d)), format!("fX6 x fY5': {ds:?}"))?;

    let x14 = f(5, 224, 2520);
    let rows: [(BinaryQF, u64, i64, &[(i64, i64, i64)]); 3] = [
        (f(1, 0, 4), 1, 1, &[(1, 20, -4), (1, 22, -11), (1, 24, -8)]),
        (f(4, 0, 5), 1, 4, &[(0, 2, -51), (0, 4, -36)]),
        (x6, 6, 5, &[(1, 18, -43), (1, 22, -67), (1, 26, -51)]),
    ];
    for (other, dd, n, want) in rows {
        let c = candidate_intersections(&x14, &other, 14, dd, &bi(n), None).map_err(e2s)?;
        let got = uvd(&c);
        for t in want {
            ensure(got.contains(t), format!("fX14 x {other} n={n}: missing {t:?}"))?;
        }
    }
    Ok("fX6 x fY1 exact, fX6 x fY5' filtered, fX14 rows n = 1, 4, 5".into())
}

fn h4_certificates() -> Outcome {
    let c = ParamCurve::load("fX14^1").map_err(e2s)?;
    let lin = |a: i64, b: i64| Poly::from_i64(&[b, a]);
    let expected = [
        Poly::x().pow(2),
        lin(1, -1).pow(2),
        lin(1, 1).pow(6),
        lin(9, -5).pow(2),
        Poly::from_i64(&[-5, 0, 1]).pow(2),
        Poly::from_i64(&[4, 0, 3]).pow(2),
        Poly::from_i64(&[7, -12, 9]).pow(2),
        Poly::from_i64(&[8, 0, -13, 0, 16]),
    ]
    .iter()
    .fold(Poly::constant(Rational::from_integer(bi(3).pow(30u32))), |acc, p| acc.mul(p));
    ensure(h4_restrict(&c).map_err(e2s)? == expected, "fX14 restriction")?;

    let golden: BTreeMap<&str, [usize; 3]> = include_str!("golden/square_certificates.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            (w[0], [1, 2, 3].map(|i| w[i].parse().unwrap()))
        })
        .collect();
    let curves = ParamCurve::all_shimura().map_err(e2s)?;
    ensure(golden.len() == curves.len(), "golden table covers every curve")?;
    let mut over_twelve = 0;
    let mut worst = 0;
    let mut failures = Vec::new();
    for c in &curves {
        let cert = match square_certificate(c) {
            Ok(cert) => cert,
            Err(e) => {
                failures.push(format!("{}: {e}", c.label));
                continue;
            }
        };
        let sq = cert.square.degree().unwrap_or(0);
        let sf = cert.squarefree.degree().unwrap_or(0);
        let total = 2 * sq + sf;
        if golden.get(c.label.as_str()) != Some(&[total, sq, sf]) {
            failures.push(format!("{}: degrees ({total}, {sq}, {sf}) differ from golden", c.label));
        }
        if sf > 12 {
            over_twelve += 1;
        }
        worst = worst.max(sf);
    }
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(format!(
        "fX14 identity; {} certificates match frozen degrees, max squarefree degree {worst} \
         ({over_twelve} curves above 12)",
        curves.len()
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-500..=500), rng.gen_range(1..=60))
}

fn baba() -> Outcome {
    let c = ParamCurve::load("fX6^1").map_err(e2s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 25 {
        let j = random_rational(&mut rng);
        let s = eval_param(&c, &j);
        if s.s5.is_zero() {
            continue;
        }
        let jt = s_to_j(&s).map_err(e2s)?;
        ensure(
            weighted_eq(&jt.to_array(), &baba_point(&j).to_array(), &J_WEIGHTS),
            format!("j = {j}"),
        )?;
        n += 1;
    }
    Ok("25 random rational j".into())
}

fn gonzalez() -> Outcome {
    let g = |a: i64, b: i64| GaussianRational::new(int(a), int(b));
    let c = ParamCurve::load("fX14^1").map_err(e2s)?;
    let s = eval_param(&c, &GaussianRational::new(int(0), rat(-1, 2)));
    let (i1, i2, i3) = absolute_invariants(&s).map_err(e2s)?;
    let w1 = g(1, 1).pow(14) * g(-7, 8).pow(5) * g(28, 5).pow(5) / g(2, 1).pow(12);
    let w2 = g(1, 1).pow(10) * g(3, 10).pow(2) * g(7, -8).pow(3) * g(28, 5).pow(3) / g(2, 1).pow(8);
    let w3 = g(1, 1).pow(12) * g(-2, 3) * g(8, 7).pow(2) * g(28, 5).pow(2) * g(320, 1383) / g(2, 1).pow(8);
    ensure(i1 == w1, format!("i1 = {i1:?}"))?;
    ensure(i2 == w2, format!("i2 = {i2:?}"))?;
    ensure(i3 == w3, format!("i3 = {i3:?}"))?;
    let alg = QuatAlgebra::from_ints(-14, -3).map_err(e2s)?;
    ensure(splits_over_imaginary_quadratic(&alg, &bi(-4)).map_err(e2s)?, "(-14,-3) over Q(i)")?;
    Ok("i1, i2, i3 exact; (-14,-3) splits over Q(i)".into())
}

fn modular_spots() -> Outcome {
    let c = ParamCurve::load("fY5'").map_err(e2s)?;
    let s = eval_param(&c, &int(36));
    let cube = s.s2.pow(3);
    let r = (s.s3.pow(2) / &cube, &s.s5 / (&s.s2 * &s.s3), &s.s6 / &cube);
    ensure(r == (rat(81, 64), int(1), rat(145, 64)), format!("ratios {r:?}"))?;
    let mut n = 0;
    for c in ParamCurve::all_modular().map_err(e2s)? {
        if !c.label.ends_with('\'') {
            ensure(c.s[2].is_zero(), format!("{}: s5 not zero", c.label))?;
            n += 1;
        }
    }
    Ok(format!("fY5' ratios; s5 = 0 on {n} fY tables"))
}

fn all_places(a: &Rational, b: &Rational) -> Vec<Place> {
    let prod: BigInt = a.numer() * a.denom() * b.numer() * b.denom() * 2u32;
    let mut n = prod.abs();
    let mut out = vec![Place::Infinity];
    let mut p = 2u64;
    while n > BigInt::one() {
        let pb = bi(p as i64);
        if (&n % &pb).is_zero() {
            out.push(Place::Finite(p));
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += 1;
    }
    out
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let mut pick = || loop {
            let x = rat(rng.gen_range(-2000..=2000), rng.gen_range(1..=50));
            if !x.is_zero() {
                return x;
            }
        };
        let (a, b) = (pick(), pick());
        let mut prod = 1;
        for v in all_places(&a, &b) {
            prod *= hilbert_symbol(&a, &b, v).map_err(e2s)?;
        }
        ensure(prod == 1, format!("product formula fails at ({a}, {b})"))?;
    }

    for _ in 0..1000 {
        let mut rel = || SingularRelation::from_i64([0i64; 5].map(|_| rng.gen_range(-50i64..=50)));
        let (r1, r2) = (rel(), rel());
        let p = delta_pairing(&r1, &r2);
        let lhs = (&p * &p).mod_floor(&bi(4));
        let rhs = (delta(&r1) * delta(&r2)).mod_floor(&bi(4));
        ensure(lhs == rhs, format!("parity fails for {r1}, {r2}"))?;
    }

    let h4 = H4::load().map_err(e2s)?;
    for (_, e) in &h4.terms {
        let w: u32 = e.iter().zip(S_WEIGHTS).map(|(a, b)| a * b).sum();
        ensure(w == 30, format!("H4 term {e:?} has weight {w}"))?;
    }

    let mut classes = 0;
    for d in valid_discriminants(200) {
        for q in enumerate_primitive_classes(&(bi(-16) * d)).map_err(e2s)? {
            let chars = genus_characters(&q, d).map_err(e2s)?;
            ensure(twisted_character_product(&chars, d) == 1, format!("D={d} {q}: character relation"))?;
            classes += 1;
        }
    }
    Ok(format!("500 Hilbert pairs, 1000 relation pairs, {} H4 terms, {classes} classes", h4.terms.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 r_D table", r_table),
        ("2 locus table reproduction", locus_table),
        ("3 CM Gram matrices", cm_gram_check),
        ("4 CM orbits and Atkin-Lehner action", orbits),
        ("5 intersection recipe", intersections),
        ("6 H4 square certificates", h4_certificates),
        ("7 Baba equivalence", baba),
        ("8 Gonzalez invariants", gonzalez),
        ("9 modular curve spot values", modular_spots),
        ("10 property suites", properties),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("PASS  {name}: {msg} ({:.1?})", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} ({:.1?})", t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", 10 - failed, 10);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
