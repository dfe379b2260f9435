use convsq::catalog::*;
use convsq::characters::characters_with_lambda;
use convsq::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn values(d: u64, class: ValueClass) -> Vec<Complex64> {
    records_for(d).iter().filter(|r| r.has_class(class)).flat_map(|r| r.lambdas().unwrap()).collect()
}

fn same_set(mut got: Vec<Complex64>, mut want: Vec<Complex64>) {
    let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64;
    got.sort_by_key(key);
    want.sort_by_key(key);
    assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).norm() < 1e-9, "{g} vs {w}");
    }
}

#[test]
fn d3_lists_four_values_two_fixed() {
    let s3 = 3f64.sqrt();
    same_set(values(3, ValueClass::Critical), vec![c(1.0, 0.0), c(3.0, 0.0), c(0.0, s3), c(0.0, -s3)]);
    same_set(values(3, ValueClass::Bdo), vec![c(0.0, s3), c(0.0, -s3)]);
    same_set(values(3, ValueClass::Bd), values(3, ValueClass::Bdo));
}

#[test]
fn d7_fixed_point_class() {
    let (s7, s3) = (7f64.sqrt(), 3f64.sqrt());
    let want = vec![c(0.0, s7), c(0.0, -s7), c(2.0, s3), c(2.0, -s3), c(-2.0, s3), c(-2.0, -s3)];
    same_set(values(7, ValueClass::Bdo), want);
}

#[test]
fn d13_records_inclusions_not_equalities() {
    let recs = records_for(13);
    assert!(recs.iter().all(|r| r.possibly_incomplete));
    let bd = values(13, ValueClass::Bd);
    let (s13, s5, s2) = (13f64.sqrt(), 5f64.sqrt(), 2f64.sqrt());
    for z in [c(-s13, 0.0), c(-s5, 2.0 * s2), c(-s5, -2.0 * s2)] {
        assert!(bd.iter().any(|b| (b - z).norm() < 1e-9));
        assert!(!values(13, ValueClass::Bdo).iter().any(|b| (b - z).norm() < 1e-9));
    }
    for d in [3, 5, 7, 9, 11] {
        assert!(records_for(d).iter().all(|r| !r.possibly_incomplete));
    }
}

#[test]
fn classes_are_nested_and_on_the_circle() {
    for r in load_catalog() {
        assert!(r.has_class(ValueClass::Critical));
        if r.has_class(ValueClass::Bdo) {
            assert!(r.has_class(ValueClass::Bd));
        }
        for l in r.lambdas().unwrap() {
            assert!(l.re.is_finite() && l.im.is_finite());
            assert!(l.norm() <= r.modulus as f64 + 1e-9);
            if r.has_class(ValueClass::Bd) {
                assert!((l.norm() - (r.modulus as f64).sqrt()).abs() < 1e-9, "{} {l}", r.modulus);
            }
        }
    }
}

#[test]
fn fixed_point_class_closed_under_conjugation() {
    for d in [3, 5, 7, 9, 11, 13, 15, 17] {
        let bdo = values(d, ValueClass::Bdo);
        for z in &bdo {
            assert!(bdo.iter().any(|w| (w - z.conj()).norm() < 1e-9), "d={d}: {z}");
        }
    }
}

#[test]
fn no_duplicate_values_per_modulus() {
    for d in [3, 5, 7, 9, 11, 13, 15, 17] {
        let all: Vec<Complex64> = records_for(d)
            .iter()
            .filter(|r| matches!(r.value, LambdaValue::Exact { .. }))
            .flat_map(|r| r.lambdas().unwrap())
            .collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!((a - b).norm() > 1e-9, "d={d}: {a} twice");
            }
        }
    }
}

#[test]
fn d9_three_comes_from_four_characters() {
    let rec = records_for(9)
        .into_iter()
        .find(|r| r.construction == Construction::Dirichlet)
        .unwrap();
    let rep = verify_record(&rec, VerifyBudget::default()).unwrap();
    assert_eq!(rep.status, VerifyStatus::Verified);
    assert_eq!(characters_with_lambda(9, c(3.0, 0.0), 1e-9).unwrap().len(), 4);
}

#[test]
fn d11_sign_family_verifies() {
    let fam: Vec<_> = records_for(11).into_iter().filter(|r| r.epsilon.is_some()).collect();
    assert_eq!(fam.len(), 8);
    for r in fam {
        let rep = verify_record(&r, VerifyBudget::default()).unwrap();
        assert_eq!(rep.status, VerifyStatus::Verified, "{}", rep.value);
    }
}

#[test]
fn d15_off_circle_value_is_critical_only() {
    let r = records_for(15)
        .into_iter()
        .find(|r| r.value_label() == "6+sqrt21")
        .unwrap();
    assert_eq!(r.classes, vec![ValueClass::Critical]);
    let l = r.lambdas().unwrap()[0];
    assert!((l.norm() - 15f64.sqrt()).abs() > 1.0);
    let rep = verify_record(&r, VerifyBudget { starts: 100, seed: 3 }).unwrap();
    assert!(matches!(rep.status, VerifyStatus::WitnessFound | VerifyStatus::Inconclusive));
    assert!(rep.checks.iter().all(|c| c.pass));
}

#[test]
fn sweep_counts_admissible_pairs() {
    let sweep = admissible_theta_sweep(17).unwrap();
    assert!(sweep.iter().all(|e| e.pass), "{:?}", sweep.iter().find(|e| !e.pass));
    let at = |d: u64| sweep.iter().filter(|e| e.modulus == d).map(|e| (e.a, e.b)).collect::<Vec<_>>();
    assert!(at(3).is_empty());
    assert_eq!(at(5), vec![(1, 4)]);
    assert_eq!(at(9), vec![(1, 8), (5, 4)]);
    let l5 = sweep.iter().find(|e| e.modulus == 5).unwrap().lambda;
    assert!((l5 - c(1.0, 2.0)).norm() < 1e-12);
    assert!(admissible_theta_sweep(4).is_err());
    assert!(admissible_theta_sweep(1).is_err());
}

#[test]
fn product_witness_multiplies_values() {
    let r = records_for(15)
        .into_iter()
        .find(|r| matches!(r.construction, Construction::Product { .. }) && r.value_label() == "sqrt3*i*(1+2*i)")
        .unwrap();
    let l = r.lambdas().unwrap()[0];
    assert!((l - c(0.0, 3f64.sqrt()) * c(1.0, 2.0)).norm() < 1e-12);
    assert_eq!(verify_record(&r, VerifyBudget::default()).unwrap().status, VerifyStatus::Verified);
}

#[test]
fn unknown_factor_modulus_is_a_contract_violation() {
    let bad = Construction::Lift { from: 4, inner: Box::new(Construction::Dirichlet) };
    assert!(build_witness(9, c(3.0, 0.0), &bad).is_err());
    assert!(build_witness(9, c(-3.0, 0.0), &Construction::Dirichlet).is_err());
}

#[test]
fn json_round_trips_bit_exactly() {
    let doc = CatalogDocument::new(load_catalog());
    let text = doc.to_json().unwrap();
    let back = CatalogDocument::from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json().unwrap(), text);
    let wrong = text.replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
    assert!(CatalogDocument::from_json(&wrong).is_err());
}

#[test]
fn csv_has_one_row_per_value() {
    let recs = records_for(3);
    let mut buf = Vec::new();
    write_csv(&recs, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,lambda_re,lambda_im,value,classes,construction,source,status");
    assert_eq!(lines.len(), 5);
    let family = load_catalog()
        .into_iter()
        .filter(|r| r.source == SourceTag::NonWeilFamily && r.construction.label() == "polynomial")
        .collect::<Vec<_>>();
    assert_eq!(csv_rows(&family).unwrap().len(), 20);
}

#[test]
fn negative_fixtures_are_listed() {
    let fx = negative_fixtures();
    assert_eq!(fx.len(), 5);
    for (d, e) in fx {
        let l = e.eval(None).unwrap();
        assert!(!records_for(d).iter().any(|r| r.lambdas().unwrap().iter().any(|z| (z - l).norm() < 1e-9)));
    }
}
