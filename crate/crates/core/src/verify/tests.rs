use super::*;

fn over(pairs: &[(&str, &str)]) -> ParamMap {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn registry_ids_unique_and_modes_present() {
    let all = ids();
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), all.len());
    assert!(REGISTRY.iter().all(|s| !s.modes().is_empty()));
    assert_eq!(all.len(), 31);
}

#[test]
fn every_exact_identity_passes() {
    for spec in REGISTRY.iter().filter(|s| s.exact.is_some()) {
        let ms = spec.exact.as_ref().unwrap();
        let sets: Vec<Pairs> = if ms.suite.is_empty() { vec![&[]] } else { ms.suite.to_vec() };
        for set in sets {
            let r = check_exact(spec.id, &over(set), 30).unwrap_or_else(|e| panic!("{}: {e}", spec.id));
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary());
            assert_eq!(r.deviation, "0");
        }
    }
}

#[test]
fn spec_exact_examples() {
    let r = check_exact("rama-1psi1", &over(&[("x", "1/3"), ("y", "1/5"), ("z", "2")]), 30).unwrap();
    assert_eq!((r.verdict, r.deviation.as_str()), (Verdict::Pass, "0"));
    for m in -2..=2 {
        let r = check_exact("mci", &over(&[("m", &m.to_string())]), 40).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }
    assert_eq!(check_exact("watson", &ParamMap::new(), 30).unwrap().verdict, Verdict::Pass);
}

#[test]
fn exact_detects_a_wrong_parameter_power() {
    // without the q-power on x the bilateral sum has no q-adic meaning
    let e = check_exact("rama-1psi1", &over(&[("x", "1/3*q^0")]), 10);
    assert!(e.is_err() || e.unwrap().verdict == Verdict::Fail);
}

#[test]
fn exact_rejects_large_a() {
    let e = check_exact("thm-mth", &over(&[("a", "3")]), 10).unwrap_err();
    assert!(matches!(e, Error::DomainError(_)));
}

#[test]
fn every_numeric_identity_passes() {
    for spec in REGISTRY.iter().filter(|s| s.numeric.is_some()) {
        let ms = spec.numeric.as_ref().unwrap();
        let sets: Vec<Pairs> = if ms.suite.is_empty() { vec![&[]] } else { ms.suite.to_vec() };
        for set in sets {
            let r = check_numeric(spec.id, &over(set), 256).unwrap_or_else(|e| panic!("{}: {e}", spec.id));
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary());
        }
    }
}

#[test]
fn spec_numeric_examples() {
    let cases: [(&str, &[(&str, &str)], f64); 3] = [
        ("lem22", &[("a", "3"), ("b", "2"), ("u", "1"), ("z", "0.7"), ("q", "0.4")], 1e-40),
        (
            "thm-mth",
            &[("a", "3"), ("b", "1"), ("r", "1"), ("x1", "-0.3"), ("y1", "-0.2"), ("z", "1.1"), ("q", "0.5")],
            1e-30,
        ),
        ("promr1", &[("y", "0.6"), ("z", "2"), ("q", "0.3")], 1e-30),
    ];
    for (id, p, tol) in cases {
        let r = check_numeric(id, &over(p), 256).unwrap();
        let dev: f64 = r.deviation.parse().unwrap();
        assert!(dev < tol, "{}", r.summary());
    }
}

#[test]
fn lem22_residues_give_conjugates() {
    // u and a − u pick conjugate roots of unity, and z, q are real
    let a = check_numeric("lem22", &over(&[("u", "1")]), 128).unwrap();
    let b = check_numeric("lem22", &over(&[("u", "2")]), 128).unwrap();
    assert_eq!(a.verdict, Verdict::Pass);
    assert_eq!(b.verdict, Verdict::Pass);
    assert_eq!(a.notes["lhs"], b.notes["lhs"]);
    let (ia, ib) = (&a.notes["lhs_im"], &b.notes["lhs_im"]);
    assert_eq!(ia.trim_start_matches('-'), ib.trim_start_matches('-'));
    assert_ne!(ia.starts_with('-'), ib.starts_with('-'));
}

#[test]
fn promr1_refuses_excluded_points() {
    for p in [&[("y", "0.3"), ("q", "0.3")][..], &[("y", "0.2")], &[("y", "1/0.09")], &[("y", "2"), ("z", "-0.18")]] {
        let e = check_numeric("promr1", &over(p), 128);
        assert!(matches!(e, Err(Error::DomainError(_)) | Err(Error::BadParameter { .. })), "{p:?}: {e:?}");
    }
}

#[test]
fn eq21_rank_two() {
    let p = over(&[("alpha", "3"), ("r", "2"), ("x1", "-0.3"), ("y1", "-0.2"), ("z", "1.1")]);
    let mut p2 = p.clone();
    p2.insert("x2".into(), "-0.1".into());
    p2.insert("y2".into(), "-0.25".into());
    // x2, y2 are not registry keys for eq21, so rank two is exercised through the module directly
    let prec = Precision::new(128).unwrap();
    let mut full = resolve(mode_spec("eq21", Mode::Numeric).unwrap(), Mode::Numeric, &p).unwrap();
    full.extend(p2);
    let (l, r) = numeric::sides("eq21", &Args::new(&full), prec).unwrap();
    assert!(numq::log2_abs(&l.rel_diff(&r)) < -60.0);
}

#[test]
fn unknown_ids_and_modes() {
    assert!(matches!(check_exact("bogus", &ParamMap::new(), 10), Err(Error::UnknownIdentity(_))));
    assert!(matches!(check_numeric("euler", &ParamMap::new(), 128), Err(Error::UnsupportedMode { .. })));
    assert!(matches!(check_exact("euler", &over(&[("w", "1")]), 10), Err(Error::BadParameter { .. })));
}

#[test]
fn mm20_and_cor2_agree_on_decay() {
    let ts = DEFAULT_T_GRID;
    let a = fit_asymptotic("mm20", &over(&[("a", "1"), ("b", "1"), ("c", "0")]), &ts, 512).unwrap();
    let b = fit_asymptotic("cor2", &over(&[("alpha", "3"), ("z", "1")]), &ts, 512).unwrap();
    assert!(a.decays());
    assert_eq!(a.decays(), b.decays());
}

#[test]
fn asymptotic_reports_carry_fits() {
    let r = check_asymptotic("eta", &ParamMap::new(), &DEFAULT_T_GRID, 512).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary());
    let c = r.c_fit.unwrap();
    assert!((c / (4.0 * std::f64::consts::PI.powi(2)) - 1.0).abs() < 0.1);
    let r = check_asymptotic("cor1", &ParamMap::new(), &DEFAULT_T_GRID, 512).unwrap();
    assert!(r.notes.contains_key("delta") && r.notes.contains_key("min(2,delta)"));
}

#[test]
fn asymptotic_grid_validation() {
    for ts in [&[0.25, 0.5][..], &[0.5], &[0.5, -0.1], &[]] {
        assert!(check_asymptotic("eta", &ParamMap::new(), ts, 256).is_err(), "{ts:?}");
    }
}

#[test]
fn sweep_rows() {
    let ts = t_range(0.5, 0.1, 5).unwrap();
    assert_eq!(ts, vec![0.5, 0.4, 0.3, 0.2, 0.1]);
    let rows = sweep("cor2", &over(&[("alpha", "2"), ("z", "1")]), &ts, 256).unwrap();
    assert_eq!(rows.len(), 5);
    let res: Vec<f64> = rows.iter().map(|r| r.residual.parse().unwrap()).collect();
    assert!(res.windows(2).all(|w| w[1] < w[0]), "{res:?}");
    let rows = sweep("lem21", &over(&[("z", "2"), ("mu", "0.333")]), &t_range(1.0, 0.2, 4).unwrap(), 256).unwrap();
    assert!(rows.iter().all(|r| r.residual.parse::<f64>().unwrap() < 1e-60));
    assert_eq!(sweep("eta", &ParamMap::new(), &t_range(0.5, 0.5, 1).unwrap(), 128).unwrap().len(), 1);
    assert!(matches!(sweep("euler", &ParamMap::new(), &[0.5], 128), Err(Error::UnsupportedMode { .. })));
}

#[test]
fn coeff_dumps() {
    let l = coeffs("euler-lhs", &over(&[("z", "1")]), 10).unwrap();
    let r = coeffs("euler-rhs", &over(&[("z", "1")]), 10).unwrap();
    assert_eq!(l.to_csv(), r.to_csv());
    let eta = coeffs("eta-product", &ParamMap::new(), 12).unwrap().to_csv();
    assert_eq!(eta, "# D=1 N=12\n0,1,1\n1,-1,1\n2,-1,1\n5,1,1\n7,1,1\n");
    assert_eq!(coeffs("eta-product", &ParamMap::new(), 1).unwrap().to_csv(), "# D=1 N=1\n0,1,1\n");
}

#[test]
fn suite_order_and_empty_selection() {
    let config = SuiteConfig { order: 12, ..SuiteConfig::default() };
    assert!(run_suite(&Selection::Modes(vec![]), &config).is_empty());
    let reports = run_suite(&Selection::Modes(vec![Mode::Exact]), &config);
    let got: Vec<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    let mut want = Vec::new();
    for s in REGISTRY.iter().filter(|s| s.exact.is_some()) {
        let n = s.exact.as_ref().unwrap().suite.len().max(1);
        want.extend(std::iter::repeat(s.id).take(n));
    }
    assert_eq!(got, want);
    assert!(reports.iter().all(|r| r.elapsed_ms == 0));
    assert_eq!(reports_to_json(&reports), reports_to_json(&run_suite(&Selection::Modes(vec![Mode::Exact]), &config)));
}

#[test]
fn suite_errors_become_failures() {
    let mut overrides = BTreeMap::new();
    overrides.insert("lem22".to_string(), over(&[("z", "-1")]));
    let config = SuiteConfig { overrides, ..SuiteConfig::default() };
    let reports = run_suite(&Selection::Ids(vec!["lem22".into()]), &config);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].verdict, Verdict::Fail);
    assert!(reports[0].deviation.starts_with("error:"));
}

#[test]
fn csv_matches_json_content() {
    let r = check_numeric("promr1", &ParamMap::new(), 128).unwrap();
    let csv = reports_to_csv(std::slice::from_ref(&r));
    let json: serde_json::Value = serde_json::from_str(&reports_to_json(std::slice::from_ref(&r))).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], json[0]["id"]);
    assert_eq!(row[4], json[0]["deviation"]);
    assert_eq!(row[2], "q=0.3;y=0.6;z=2");
}
