//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p xrel-core --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use xrel_core::*;

fn qi(n: i64) -> QuadNum {
    QuadNum::from_int(n)
}

fn qf(n: i64, d: i64) -> QuadNum {
    QuadNum::from_frac(n, d)
}

fn pt(x: i64, y: i64) -> CurvePoint {
    CurvePoint::affine(qi(x), qi(y))
}

fn lemniscatic() -> WeierstrassCurve {
    WeierstrassCurve::new(qi(0), qi(-1), qi(0)).unwrap()
}

fn family_curve_a1() -> WeierstrassCurve {
    WeierstrassCurve::new(qi(1), qi(-3), qi(1)).unwrap()
}

fn rank_one_curve() -> WeierstrassCurve {
    WeierstrassCurve::new(qi(0), qi(-1), qf(1, 4)).unwrap()
}

#[test]
fn c01_torsion_search_exact_counts() {
    let started = Instant::now();
    let e = lemniscatic();
    let coeffs = RelationCoeffs::from_ints(1, 1, 2).unwrap();
    let torsion = vec![CurvePoint::Infinity, pt(0, 0), pt(1, 0), pt(-1, 0)];
    let spec = SubgroupSpec::new(&e, vec![], torsion.clone()).unwrap();
    let report = find_solutions(&e, &coeffs, &spec, 0).unwrap();

    // independent oracle: brute force over the 27 nonzero triples
    let nonzero: Vec<&CurvePoint> = torsion.iter().filter(|p| !p.is_infinity()).collect();
    let mut oracle = Vec::new();
    for p1 in &nonzero {
        for p2 in &nonzero {
            for p3 in &nonzero {
                let s = &(&(qi(1) * p1.x().unwrap()) + &(qi(1) * p2.x().unwrap()))
                    + &(qi(2) * p3.x().unwrap());
                if s.is_zero() {
                    oracle.push(((*p1).clone(), (*p2).clone(), (*p3).clone()));
                }
            }
        }
    }
    assert_eq!(oracle.len(), 5, "hand enumeration finds 5 of 27");
    assert_eq!(report.summary.total, 5);
    assert_eq!(report.summary.sporadic, 0);
    assert_eq!(report.summary.trivial, 5);
    assert_eq!(report.families.len(), 9);
    let mut got: Vec<(CurvePoint, CurvePoint, CurvePoint)> = report
        .solutions
        .iter()
        .map(|s| (s.p1.point.clone(), s.p2.point.clone(), s.p3.point.clone()))
        .collect();
    got.sort();
    oracle.sort();
    assert_eq!(got, oracle);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "torsion search under a second");
    println!(
        "criterion 1: PASS — torsion search: 5 solutions, all trivial, 0 sporadic ({:.3}s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn c02_classifier_counts() {
    let generic = rank_one_curve();
    let c111 = RelationCoeffs::from_ints(1, 1, 1).unwrap();
    let out = classify(&generic, &c111).unwrap();
    assert_eq!(out.families.len(), 3);
    assert_eq!(out.count_case(0), 3);

    let e = lemniscatic();
    let c112 = RelationCoeffs::from_ints(1, 1, 2).unwrap();
    let out = classify(&e, &c112).unwrap();
    assert_eq!(out.families.len(), 9);

    let e1 = family_curve_a1();
    let c211 = RelationCoeffs::from_ints(2, 1, 1).unwrap();
    let out = classify(&e1, &c211).unwrap();
    assert_eq!(out.families.len(), 7);
    assert_eq!(out.count_case(0), 3);
    assert_eq!(out.count_case(3), 4);

    // every emitted family passes exact symbolic verification
    for (curve, coeffs) in [(&generic, &c111), (&e, &c112), (&e1, &c211)] {
        for f in &classify(curve, coeffs).unwrap().families {
            assert_eq!(verify_family_symbolic(curve, coeffs, f), Ok(true));
        }
    }
    println!("criterion 2: PASS — classifier counts 3 / 9 / 7, all symbolically verified");
}

#[test]
fn c03_degree_two_family_identity() {
    let e1 = family_curve_a1();
    let coeffs = RelationCoeffs::from_ints(2, 1, 1).unwrap();
    // exact function-field identity 2·x([λ]P) + x(P) + x(P+(1,0)) ≡ 0
    let terms = [
        x_function(&e1, &XTransform::SqrtMinusTwoEndo).unwrap(),
        x_function(&e1, &XTransform::Identity).unwrap(),
        x_function(&e1, &XTransform::TranslateBy(pt(1, 0))).unwrap(),
    ];
    assert!(identity_check(
        &e1,
        &[qi(2), qi(1), qi(1)],
        &terms
    ));
    // spot value
    assert_eq!(terms[0].eval_x(&qi(2)), Some(qf(-5, 2)));
    // numeric residual through the uniformization
    let families = classify(&e1, &coeffs).unwrap();
    let cased = families
        .families
        .iter()
        .find(|f| matches!(f, FamilyDescriptor::CaseD { .. }))
        .unwrap();
    let residual = identity_residual(&e1, coeffs.as_array(), cased, 100).unwrap();
    assert!(
        residual < 1e-9,
        "numeric residual {residual:.3e} under 1e-9"
    );
    println!(
        "criterion 3: PASS — exact identity holds, x([λ]P)|X=2 = −5/2, residual {residual:.3e}"
    );
}

#[test]
fn c04_sign_regression() {
    let e = WeierstrassCurve::new(qi(3), qi(2), qi(0)).unwrap();
    let coeffs = RelationCoeffs::from_ints(1, 1, 1).unwrap();
    let i = QuadNum::sqrt_d(-1);
    let t = derive_caseb_constant(&e, &coeffs, 3, &i).unwrap();
    assert_eq!(t, qi(2), "oracle-derived constant is +2");
    assert_eq!(verify_caseb_with_x(&e, &coeffs, 3, &i, &qi(2)), Ok(true));
    // the transcribed closed form −A(c1+c2)/(3c3) = −2 fails verification
    assert_eq!(verify_caseb_with_x(&e, &coeffs, 3, &i, &qi(-2)), Ok(false));
    println!("criterion 4: PASS — case-b constant +2 verifies, −2 is rejected");
}

#[test]
fn c05_wp_engine() {
    let e = lemniscatic();
    let lattice = LatticeData::from_curve(&e, 53).unwrap();
    // ω₁ against the lemniscate constant
    assert!((lattice.omega1 - Complex64::new(2.6220575543, 0.0)).norm() < 1e-9);
    // ℘(ω₁/2) = 1
    let (half, _) = lattice.wp(lattice.omega1 / 2.0).unwrap();
    assert!((half - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    // differential equation on 100 samples
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range(-0.5..0.5);
        let z = Complex64::new(x, 0.0) * lattice.omega1 + Complex64::new(y, 0.0) * lattice.omega2;
        if lattice.lattice_distance(z) < 1e-3 * lattice.omega1.norm() {
            continue;
        }
        let (p, dp) = lattice.wp(z).unwrap();
        if p.norm() > 1e4 {
            continue;
        }
        let lhs = dp * dp;
        let rhs = 4.0 * p * p * p - lattice.g2 * p - lattice.g3;
        assert!((lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm())) < 1e-8);
        checked += 1;
    }
    // square-lattice identity ℘(iz) = −℘(z)
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let t = 0.11 + 0.031 * k as f64;
        let z = Complex64::new(t, 0.37 * t);
        let (p, _) = lattice.wp(z).unwrap();
        let (pi, _) = lattice.wp(Complex64::new(0.0, 1.0) * z).unwrap();
        worst = worst.max((pi + p).norm());
    }
    assert!(worst < 1e-9);
    println!("criterion 5: PASS — ℘ engine: ω₁, half-period, ODE, rotation all within tolerance");
}

#[test]
fn c06_degree_catalogs() {
    // degree 2 for d = −7: exactly ±(1±√−7)/2
    let got = solve_norm(-7, 2).unwrap();
    let half = |a: i64, b: i64| QuadNum::new(
        xrel_core::exact::rat(a, 2),
        xrel_core::exact::rat(b, 2),
        -7,
    );
    let mut expect = vec![half(1, 1), half(1, -1), half(-1, 1), half(-1, -1)];
    expect.sort();
    assert_eq!(got, expect);

    // degree 4 catalog over every squarefree d down to −20: 2·unit always,
    // plus the two exceptional half-integer families and nothing else
    for d in (-20..=-1i64).filter(|d| xrel_core::exact::squarefree_part(*d).0 == 1) {
        let got = solve_norm(d, 4).unwrap();
        let mut expect: Vec<QuadNum> = units_for_disc(d)
            .into_iter()
            .map(|u| qi(2) * u)
            .collect();
        if d == -7 {
            for (a, b) in [(3, 1), (3, -1), (-3, 1), (-3, -1)] {
                expect.push(QuadNum::new(
                    xrel_core::exact::rat(a, 2),
                    xrel_core::exact::rat(b, 2),
                    -7,
                ));
            }
        }
        if d == -15 {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                expect.push(QuadNum::new(
                    xrel_core::exact::rat(a, 2),
                    xrel_core::exact::rat(b, 2),
                    -15,
                ));
            }
        }
        expect.sort();
        expect.dedup();
        assert_eq!(got, expect, "norm-4 catalog for d = {d}");
    }
    println!("criterion 6: PASS — degree-2 and degree-4 catalogs exact, no extras");
}

fn units_for_disc(d: i64) -> Vec<QuadNum> {
    match d {
        -1 => vec![
            qi(1),
            qi(-1),
            QuadNum::sqrt_d(-1),
            -QuadNum::sqrt_d(-1),
        ],
        -3 => {
            let zeta = QuadNum::new(xrel_core::exact::rat(-1, 2), xrel_core::exact::rat(1, 2), -3);
            let zeta2 = zeta.try_mul(&zeta).unwrap();
            vec![qi(1), qi(-1), zeta.clone(), -zeta, zeta2.clone(), -zeta2]
        }
        _ => vec![qi(1), qi(-1)],
    }
}

#[test]
fn c07_covering_lemma_scan() {
    let started = Instant::now();
    let report = lemma2_scan(64).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.counterexamples, 0);
    assert!(report.covering_instances > 0);
    assert!(report.groups_scanned >= 90);
    assert!(elapsed.as_secs_f64() < 10.0, "scan under ten seconds");
    println!(
        "criterion 7: PASS — {} covering instances over {} groups, 0 counterexamples ({:.2}s)",
        report.covering_instances,
        report.groups_scanned,
        elapsed.as_secs_f64()
    );
}

#[test]
fn c08_fiber_property() {
    let e = lemniscatic();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut generic = 0;
    while generic < 20 {
        let xs = [
            qf(rng.gen_range(-50i64..50), rng.gen_range(1i64..8)),
            qf(rng.gen_range(-50i64..50), rng.gen_range(1i64..8)),
            qf(rng.gen_range(-50i64..50), rng.gen_range(1i64..8)),
        ];
        if xs.iter().any(|x| e.cubic_at(x).is_zero()) {
            continue;
        }
        assert_eq!(fiber_count(&e, &xs), 8);
        generic += 1;
    }
    assert_eq!(fiber_count(&e, &[qi(0), qi(2), qi(3)]), 4);
    assert_eq!(fiber_count(&e, &[qi(0), qi(1), qi(-1)]), 1);
    println!("criterion 8: PASS — fiber counts 8 generic, 4 and 1 degenerate");
}

#[test]
fn c09_pole_window_regression() {
    let e = lemniscatic();
    let lattice = LatticeData::from_curve(&e, 53).unwrap();
    // ([1+i]P, P, P−(0,0)): the third offset is the half-period with ℘ = 0
    let beta3 = lattice
        .half_period_for_value(Complex64::new(0.0, 0.0))
        .unwrap();
    let alphas = [
        Complex64::new(1.0, 1.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    let zero = Complex64::new(0.0, 0.0);
    assert!(pole_inclusion_check(&alphas, &[zero, zero, -beta3], &lattice));
    // half-period-shifted control is rejected
    let ones = [Complex64::new(1.0, 0.0); 3];
    assert!(!pole_inclusion_check(
        &ones,
        &[zero, zero, lattice.omega1 / 2.0],
        &lattice
    ));
    println!("criterion 9: PASS — pole window accepts the degree-2 pole pattern, rejects control");
}

#[test]
fn c10_rank_one_snapshot() {
    let started = Instant::now();
    let e = rank_one_curve();
    let g = e.point(qi(0), qf(1, 2)).unwrap();
    let coeffs = RelationCoeffs::from_ints(1, 1, 1).unwrap();
    let spec = SubgroupSpec::new(&e, vec![g], vec![CurvePoint::Infinity]).unwrap();

    let run = |threads: usize| {
        find_solutions_with(
            &e,
            &coeffs,
            &spec,
            8,
            SearchOptions {
                threads,
                ..Default::default()
            },
        )
        .unwrap()
    };
    let first = run(1);
    let second = run(1);
    let multi = run(4);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0);

    // snapshot frozen from the first recorded run; independently confirmed
    // by hand from the x-coordinates {0, ±1, 2, 1/4, 6, −5/9, 21/25}
    assert_eq!(first.summary.total, 80);
    assert_eq!(first.summary.trivial, 0);
    assert_eq!(first.summary.sporadic, 80);

    // every record passes exact re-verification
    for s in &first.solutions {
        let sum = s
            .p1
            .point
            .x()
            .unwrap()
            .try_add(s.p2.point.x().unwrap())
            .unwrap()
            .try_add(s.p3.point.x().unwrap())
            .unwrap();
        assert!(sum.is_zero());
    }

    // byte-identical across runs and thread counts
    let j1 = serde_json::to_string(&first).unwrap();
    let j2 = serde_json::to_string(&second).unwrap();
    let j4 = serde_json::to_string(&multi).unwrap();
    assert_eq!(j1, j2);
    assert_eq!(j1, j4);
    println!(
        "criterion 10: PASS — rank-1 box 8: {} records, byte-identical across runs/threads ({:.2}s)",
        first.summary.total,
        elapsed.as_secs_f64()
    );
}
