use nilorbit::corpus::{direct_sum, split_rank_two, twisted_rank_four};
use nilorbit::estimates::*;
use nilorbit::linalg::{GScalar, GVector};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
}

#[test]
fn split_rank2_sections_are_one_and_z() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    assert_eq!(m.mode(), SectionMode::Hodge);
    assert_eq!(m.fiber_dim(), 1);
    let z = c(0.25, 3.0);
    assert!(close(&m.phi(&[0, 1], z), &[c(1.0, 0.0)]));
    assert!(close(&m.phi(&[1, 0], z), &[z]));
    assert!(close(&m.phi(&[0, 0], z), &[c(0.0, 0.0)]));
}

#[test]
fn split_rank2_norms() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    for (a, b) in [(3i64, -2i64), (0, 5), (-1, 0)] {
        let levels = m.lattice_level_norms(&[a, b]).unwrap();
        let y = 7.5;
        assert!((a_norm(&levels, y) - (b.abs() as f64 + a.abs() as f64 * y)).abs() < 1e-12);
        assert!((b_norm(&levels, y) - a.abs() as f64).abs() < 1e-12);
    }
    // Ker N: only the level-0 term
    let levels = m.lattice_level_norms(&[0, 4]).unwrap();
    assert_eq!(b_norm(&levels, 9.0), 0.0);
}

#[test]
fn twisted_rank4_rational_sections() {
    let m = SectionModel::for_orbit(&twisted_rank_four()).unwrap();
    assert_eq!(m.mode(), SectionMode::Rational);
    assert!(m.refusal().is_some());
    let z = c(0.3, 2.5);
    for (a, b, cc, d) in [(1i64, 0i64, 0i64, 0i64), (2, -1, 3, 5), (0, 0, 1, 0)] {
        let big_a = c(cc as f64, a as f64);
        let big_b = c(d as f64, b as f64);
        assert!(close(
            &m.phi(&[a, b, cc, d], z),
            &[big_a, big_b + z * big_a]
        ));
    }
    // invariant part is {(0, γ)}
    let inv = m.invariant_part();
    assert_eq!(inv.dim(), 1);
    assert!(inv.contains(&GVector(vec![
        GScalar::zero(),
        GScalar::from_parts(1, 2, 1, 4)
    ])));
}

#[test]
fn lattice_min_norm_small_cases() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let e = lattice_min_norm(&m, 3).unwrap();
    assert_eq!(e.value, 1.0);
    assert!(e.certified);
    let id = nilorbit::linalg::Matrix::identity(3);
    assert_eq!(lattice_min_norm_with(&id, 2).unwrap().value, 1.0);
    let twice = id.scale(&GScalar::from_int(2));
    assert_eq!(lattice_min_norm_with(&twice, 2).unwrap().value, 2.0);
    assert!(lattice_min_norm_with(&id, 0).is_err());
}

#[test]
fn deck_and_exact_agreement_on_examples() {
    for orbit in [split_rank_two(), twisted_rank_four()] {
        let m = SectionModel::for_orbit(&orbit).unwrap();
        let z = GScalar::from_parts(1, 3, 7, 2);
        for h in BoxIter::new(m.rank(), 1) {
            assert!(monodromy_consistency_exact(&m, &h, &z));
            assert!(monodromy_consistency(&m, &h, z.to_complex(), 1e-12).consistent);
            assert!(float_exact_gap(&m, &h, &z) < 1e-12);
        }
    }
    // e0 in twisted-rank4: (i, i(z + 1)) on both sides
    let m = SectionModel::for_orbit(&twisted_rank_four()).unwrap();
    let z = c(0.5, 4.0);
    let left = m.phi(&[1, 0, 0, 0], z + 1.0);
    assert!(close(&left, &[c(0.0, 1.0), c(0.0, 1.0) * (z + 1.0)]));
}

#[test]
fn epsilon_on_split_rank2() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let grid = StripGrid::dyadic(2.0, 8, 12).unwrap();
    let zero = GVector::zeros(1);
    let r = estimate_epsilon(&m, &zero, 20, &grid).unwrap();
    assert!(r.epsilon > 0.0);
    assert_eq!(r.violations, 0);
    // oracle: |a z + b| / (|b| + |a| y) minimized directly
    let mut oracle = f64::INFINITY;
    for a in -20i64..=20 {
        if a == 0 {
            continue;
        }
        for b in -20i64..=20 {
            for s in grid.samples() {
                let v =
                    (s.z * a as f64 + b as f64).norm() / (b.abs() as f64 + a.abs() as f64 * s.y());
                oracle = oracle.min(v);
            }
        }
    }
    assert!(
        (r.epsilon - oracle).abs() < 1e-12,
        "{} vs {oracle}",
        r.epsilon
    );

    // a target equal to a scanned section value gives zero
    let z0 = grid.samples()[17].z;
    let target = GVector(vec![GScalar::from_parts(
        (z0.re * 8.0) as i64,
        8,
        z0.im as i64,
        1,
    )]);
    let r = estimate_epsilon(&m, &target, 3, &grid).unwrap();
    assert!(r.epsilon < 1e-12);
    let arg = r.argmin.unwrap();
    assert_eq!(arg.z, z0);
}

#[test]
fn epsilon_refuses_bad_inputs() {
    let m = SectionModel::for_orbit(&twisted_rank_four()).unwrap();
    let grid = StripGrid::dyadic(2.0, 4, 4).unwrap();
    let v = GVector::zeros(2);
    assert!(matches!(
        estimate_epsilon(&m, &v, 2, &grid),
        Err(EstimateError::NotAdmissible(_))
    ));
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    assert!(matches!(
        estimate_epsilon(&m, &GVector::zeros(2), 2, &grid),
        Err(EstimateError::TargetDimension { .. })
    ));
}

#[test]
fn direct_sum_epsilon_is_positive() {
    let one = split_rank_two();
    let sum = direct_sum(&[one.clone(), one.clone()]).unwrap();
    let grid = StripGrid::dyadic(2.0, 4, 6).unwrap();
    let single = estimate_epsilon(
        &SectionModel::for_orbit(&one).unwrap(),
        &GVector::zeros(1),
        5,
        &grid,
    )
    .unwrap();
    let double = estimate_epsilon(
        &SectionModel::for_orbit(&sum).unwrap(),
        &GVector::zeros(2),
        5,
        &grid,
    )
    .unwrap();
    assert!(double.epsilon > 0.0);
    assert!(double.epsilon >= single.epsilon / 2.0);
}
