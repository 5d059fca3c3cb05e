use nilorbit::corpus::split_rank_two;
use nilorbit::estimates::*;
use num_complex::Complex64;

#[test]
fn perturbation_on_split_rank2() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let grid = StripGrid::dyadic(2.0, 8, 12).unwrap();
    let unit = Perturbation::unit(&m, 1.0);
    let r = perturbation_bound_check(&m, &unit, 10, &grid).unwrap();
    assert!(r.fitted_constant > 0.0 && r.fitted_constant.is_finite());
    assert!(r.bounded);
    // |a| / (|b| + |a| y) is largest at b = 0 and the lowest level y = 2
    assert!((r.fitted_constant - 0.5).abs() < 1e-12);

    let tripled = perturbation_bound_check(&m, &unit.scaled(3.0), 10, &grid).unwrap();
    assert!((tripled.fitted_constant - 3.0 * r.fitted_constant).abs() < 1e-12);

    let zero = perturbation_bound_check(&m, &unit.scaled(0.0), 10, &grid).unwrap();
    assert_eq!(zero.fitted_constant, 0.0);

    let mut constant = unit.clone();
    constant.coefficients[0][0] = Complex64::new(1.0, 0.0);
    assert!(matches!(
        perturbation_bound_check(&m, &constant, 10, &grid),
        Err(EstimateError::PerturbationConstant)
    ));
}

#[test]
fn c_constants() {
    assert_eq!(c_constant(0).to_string(), "1");
    assert_eq!(c_constant(1).to_string(), "3");
    // 4 + 2·2 + 2 = 10
    assert_eq!(c_constant(2).to_string(), "10");
    // direct expansion of (z − z0)^k and (z − conj z0)^k
    for k in 0..6usize {
        for z0 in [
            Complex64::new(0.0, 2.0),
            Complex64::new(0.9, 1.01),
            Complex64::new(0.3, 50.0),
        ] {
            for w in [z0, z0.conj()] {
                let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                for _ in 0..k {
                    let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                    for (i, x) in coeffs.iter().enumerate() {
                        next[i + 1] += x;
                        next[i] -= x * w;
                    }
                    coeffs = next;
                }
                let bound =
                    c_constant(k).to_string().parse::<f64>().unwrap() * z0.im.powi(k as i32);
                assert!(a_poly(&coeffs, z0.im) <= bound * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn constant_polynomial_satisfies_conditions() {
    let mut p = PolyBoundParams::new(2, 2, 1, 0);
    p.a = Complex64::new(1.5, 0.0);
    p.a_prime = Complex64::new(1.5, 0.0);
    let f = vec![p.a, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    let z0 = Complex64::new(0.5, 10.0);
    assert!(conditions_hold(&p, &f, z0));
    assert_eq!(a_poly(&f, z0.im), 1.5);
}

#[test]
fn homogeneous_linear_case_forces_zero() {
    // a = a' = 0, n = n1 = n2 = 1. On the unit sphere A = 1 the larger
    // of |f(z0)| and |f̄(z0)| stays above 1/8, so eps < 1/8 leaves only f = 0.
    let mut threshold = f64::INFINITY;
    for zi in 0..8 {
        for yi in 0..10 {
            let z0 = Complex64::new(zi as f64 / 8.0, 1.01 * 2f64.powi(yi));
            for ti in 0..=200 {
                let t = ti as f64 / 200.0;
                for phase in 0..64 {
                    for phase1 in 0..16 {
                        let th = phase as f64 * std::f64::consts::TAU / 64.0;
                        let th1 = phase1 as f64 * std::f64::consts::TAU / 16.0;
                        let c0 = Complex64::from_polar(t, th);
                        let c1 = Complex64::from_polar((1.0 - t) / z0.im, th1);
                        let f = c0 + c1 * z0;
                        let g = c0.conj() + c1.conj() * z0;
                        threshold = threshold.min(f.norm().max(g.norm()));
                    }
                }
            }
        }
    }
    assert!(threshold > 0.125, "{threshold}");

    let mut p = PolyBoundParams::new(1, 1, 1, 3);
    p.a = Complex64::new(0.0, 0.0);
    p.a_prime = Complex64::new(0.0, 0.0);
    p.eps = 0.124;
    p.trials = 3000;
    let r = poly_bound_harness(&p).unwrap();
    assert_eq!(r.calibration_max, 0.0);
    assert_eq!(r.validation_max, 0.0);
}

#[test]
fn poly_bound_rejects_small_n1_n2() {
    assert!(poly_bound_harness(&PolyBoundParams::new(2, 1, 1, 0)).is_err());
}

#[test]
fn poly_bound_is_reproducible() {
    let mut p = PolyBoundParams::new(2, 2, 1, 11);
    p.trials = 600;
    let a = poly_bound_harness(&p).unwrap();
    let b = poly_bound_harness(&p).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn triangular_hand_cases() {
    let c = LowerTriangular::new(vec![vec![], vec![1.0]]).unwrap();
    let yes = triangular_check(&c, 0.1).unwrap();
    assert!(yes.forces_zero && yes.agree);
    // eigenvalues 0.1 ± sqrt(0.11)
    assert!((yes.perron_root - (0.1 + 0.11f64.sqrt())).abs() < 1e-10);
    let no = triangular_check(&c, 0.45).unwrap();
    assert!(!no.forces_zero && no.agree);
    assert!((no.perron_root - (0.45 + (0.45f64 * 1.45).sqrt())).abs() < 1e-10);
    // the simplex search returns an actual nonzero solution
    let a = &no.simplex_point;
    let total = a[0] + a[1];
    assert!(a[0] <= 0.45 * total + 1e-12);
    assert!(a[1] <= 0.45 * total + a[0] + 1e-12);

    let single = LowerTriangular::new(vec![vec![]]).unwrap();
    for eps in [0.0, 0.3, 0.99] {
        assert!(triangular_check(&single, eps).unwrap().forces_zero);
    }
    assert!(!triangular_check(&single, 1.0).unwrap().forces_zero);
}

#[test]
fn find_eps2_is_the_dyadic_threshold() {
    let c = LowerTriangular::new(vec![vec![], vec![1.0]]).unwrap();
    let e = find_eps2(&c).unwrap();
    let unit = 2f64.powi(-20);
    assert!(triangular_check(&c, e).unwrap().forces_zero);
    assert!(!triangular_check(&c, e + unit).unwrap().forces_zero);
    // rho = 1 at eps (1 + eps) = (1 − eps)^2, i.e. eps = 1/3
    assert!((e - 1.0 / 3.0).abs() < 2.0 * unit);
    assert!(LowerTriangular::new(vec![vec![], vec![-1.0]]).is_err());
    assert!(LowerTriangular::new(vec![vec![], vec![1.0, 2.0]]).is_err());
}
