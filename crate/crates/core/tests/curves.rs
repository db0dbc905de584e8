use quatloci::data::bundle;
use quatloci::exact::{int, rat, Poly, Rational};
use quatloci::mestre::{
    certificate_ratio, mestre14_exceptional_points, obstruction_at, ramified_at_infinity_for_real_samples,
    Obstruction,
};
use quatloci::quatalg::ramified_primes;
use quatloci::siegel::{
    eval_param, fit_rational_map, square_certificate, verify_modular_curve_tables, weighted_eq, JTuple,
    ParamCurve, STuple, J_WEIGHTS,
};

#[test]
fn fx14_exceptional_points() {
    let pts = mestre14_exceptional_points().unwrap();
    let rational: Vec<_> = pts.iter().filter_map(|p| p.rational.clone()).collect();
    assert_eq!(rational.len(), 2);
    let (j, s, jt) = rational.iter().find(|r| r.0 == int(-1)).unwrap();
    assert_eq!(*j, int(-1));
    assert_eq!(*s, STuple::new(int(4), int(35), int(972), int(4617)));
    let printed = JTuple::new(int(-76), int(198), int(188), int(-4096));
    assert!(weighted_eq(&jt.to_array(), &printed.to_array(), &J_WEIGHTS));
    let (_, s, _) = rational.iter().find(|r| r.0 == rat(5, 9)).unwrap();
    assert_eq!(*s, STuple::new(rat(400, 9), rat(889, 3), rat(400, 27), rat(144001, 729)));
    let irrational: Vec<_> = pts.iter().filter(|p| p.rational.is_none()).collect();
    assert_eq!(irrational.len(), 1);
    assert_eq!(irrational[0].min_poly, Poly::from_i64(&[-5, 0, 1]));
}

#[test]
fn certificate_ratios_match_golden() {
    let golden = include_str!("golden/mestre_certificate_ratios.txt");
    for line in golden.lines().filter(|l| !l.starts_with('#')) {
        let (label, want) = line.split_once(' ').unwrap();
        let got = match certificate_ratio(label) {
            Ok(Some(x)) => x.to_string(),
            Ok(None) => "none".to_string(),
            Err(_) => "nodata".to_string(),
        };
        assert_eq!(got, want, "{label}");
    }
    assert_eq!(certificate_ratio("fX14^1").unwrap(), Some(int(-3)));
}

#[test]
fn obstruction_ramification_is_even() {
    for ob in Obstruction::all().unwrap() {
        for j in [int(2), int(7), rat(1, 3), rat(-5, 2), int(11)] {
            let Ok(alg) = obstruction_at(&ob, &j) else { continue };
            let r = ramified_primes(&alg).unwrap();
            assert_eq!((r.finite.len() + usize::from(r.infinite)) % 2, 0, "{} at {j}", ob.label);
        }
    }
}

#[test]
fn fx14_real_sweep() {
    let ob = Obstruction::load("fX14^1").unwrap();
    let samples: Vec<Rational> = (-30..=30).map(|k| rat(k, 3)).collect();
    let rep = ramified_at_infinity_for_real_samples(&ob, &samples);
    assert!(rep.passed());
    assert_eq!(rep.checked, samples.len());
}

#[test]
fn fit_recovers_fx6_ratio() {
    let c = ParamCurve::load("fX6^1").unwrap();
    let samples: Vec<(Rational, Rational)> = [1, 2, 3]
        .iter()
        .map(|&j| {
            let s = eval_param(&c, &int(j));
            (int(j), s.s6 / s.s2.pow(3))
        })
        .collect();
    let (p, q) = fit_rational_map(&samples, 1, 0).unwrap();
    assert_eq!(p, Poly::from_i64(&[1, 1]));
    assert_eq!(q, Poly::one());
}

#[test]
fn modular_tables_verify() {
    let report = verify_modular_curve_tables().unwrap();
    assert!(report.len() >= 10);
    for line in report {
        assert!(line.passed, "{}: {}", line.name, line.detail);
    }
}

#[test]
fn modular_curves_have_no_certificate() {
    let y1 = ParamCurve::load("fY1").unwrap();
    assert!(square_certificate(&y1).is_err());
}

#[test]
fn every_obstruction_label_is_known() {
    let b = bundle().unwrap();
    for m in &b.mestre {
        let has_curve = b.curve(&m.label).is_some();
        assert!(has_curve || m.label == "fX65^3", "{}", m.label);
    }
}
