use std::time::Instant;

use nilorbit::corpus::{jordan_orbit, split_rank_two, twisted_rank_four};
use nilorbit::estimates::*;
use nilorbit::linalg::{GScalar, GVector};

fn gamma() -> GScalar {
    GScalar::from_parts(1, 2, 1, 4)
}

#[test]
fn twisted_rank4_accumulates_at_one_gamma() {
    let m = SectionModel::for_orbit(&twisted_rank_four()).unwrap();
    let v = GVector(vec![GScalar::one(), gamma()]);
    let params = AccumulationParams {
        tol: 1e-9,
        bound: 20,
        region: StripRegion::new(1.125, 1e6).unwrap(),
    };
    let start = Instant::now();
    let w = find_accumulation(&m, &v, &params)
        .unwrap()
        .expect("witness");
    eprintln!("search took {:?}", start.elapsed());
    assert_eq!(w.kind, WitnessKind::Sequence);
    assert_eq!(w.points.len(), 20);
    for (i, p) in w.points.iter().enumerate() {
        let n = i as i64 + 1;
        assert_eq!(p.h, vec![0, -n, 1, 0]);
        assert!(p.exact_zero);
        assert_eq!(p.distance, 0.0);
        assert_eq!(p.z.im, n as f64 + 0.25);
        assert_eq!(p.z.re, 0.5);
        assert!(verify_witness(&m, &v, &params.region, p));
    }
}

#[test]
fn split_rank2_has_no_accumulation_at_one_half() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let v = GVector(vec![GScalar::from_ratio(1, 2)]);
    let params = AccumulationParams {
        tol: 1e-3,
        bound: 30,
        region: StripRegion::new(1.125, 1e6).unwrap(),
    };
    assert!(find_accumulation(&m, &v, &params).unwrap().is_none());
}

#[test]
fn constant_section_is_its_own_witness() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let v = GVector(vec![GScalar::from_int(3)]);
    let params = AccumulationParams {
        tol: 1e-6,
        bound: 5,
        region: StripRegion::new(2.0, 100.0).unwrap(),
    };
    let w = find_accumulation(&m, &v, &params).unwrap().unwrap();
    assert_eq!(w.kind, WitnessKind::ConstantSection);
    assert_eq!(w.points[0].h, vec![0, 3]);
}

fn separation(
    orbit: nilorbit::hodge::NilpotentOrbit,
    p: GVector,
    radius: f64,
    r: f64,
) -> SeparationReport {
    let m = SectionModel::for_orbit(&orbit).unwrap();
    let params = SeparationParams {
        radius,
        bound: 50,
        region: StripRegion::new(r, 1e6).unwrap(),
        epsilon: None,
    };
    certify_separation(&m, &p, &params).unwrap()
}

#[test]
fn split_rank2_is_separated_at_zero() {
    let start = Instant::now();
    let rep = separation(split_rank_two(), GVector::zeros(1), 0.4, 2.0);
    eprintln!("took {:?}", start.elapsed());
    assert!(rep.certified);
    assert!(rep.center_in_invariant_part);
    assert_eq!(rep.sections_through_center, vec![vec![0, 0]]);
}

#[test]
fn twisted_rank4_is_separated_on_the_invariant_part() {
    let start = Instant::now();
    let rep = separation(
        twisted_rank_four(),
        GVector(vec![GScalar::zero(), gamma()]),
        0.2,
        1.125,
    );
    eprintln!("took {:?}", start.elapsed());
    assert!(rep.center_in_invariant_part);
    assert!(rep.certified, "{:?}", rep.intruders);
}

#[test]
fn twisted_rank4_is_not_separated_off_the_invariant_part() {
    let rep = separation(
        twisted_rank_four(),
        GVector(vec![GScalar::one(), gamma()]),
        0.2,
        1.125,
    );
    assert!(!rep.center_in_invariant_part);
    assert!(!rep.certified);
    let mut hs: Vec<Vec<i64>> = rep.intruders.iter().map(|h| h.h.clone()).collect();
    hs.sort_by_key(|h| -h[1]);
    assert_eq!(hs, (1..=50).map(|n| vec![0, -n, 1, 0]).collect::<Vec<_>>());
}

#[test]
fn separation_brute_force_agrees_on_small_box() {
    // Compare the pruned search with a dense scan over a small box.
    let orbit = jordan_orbit(2, -1, 0).unwrap();
    let m = SectionModel::for_orbit(&orbit).unwrap();
    let p = GVector::zeros(m.fiber_dim());
    let region = StripRegion::new(1.5, 40.0).unwrap();
    for radius in [0.3, 1.0, 2.5] {
        let params = SeparationParams {
            radius,
            bound: 2,
            region,
            epsilon: None,
        };
        let rep = certify_separation(&m, &p, &params).unwrap();
        let mut dense = Vec::new();
        for h in BoxIter::new(m.rank(), 2) {
            if h.iter().all(|&x| x == 0) {
                continue;
            }
            let mut best = f64::INFINITY;
            for j in 0..400 {
                let y = 1.5 * (40.0f64 / 1.5).powf(j as f64 / 399.0);
                for i in 0..100 {
                    let z = num_complex::Complex64::new(i as f64 / 100.0, y);
                    let d: f64 = m.phi(&h, z).iter().map(|x| x.norm()).sum();
                    best = best.min(d);
                }
            }
            if best < radius * 0.99 {
                dense.push(h);
            }
        }
        if radius > 2.0 {
            assert!(!dense.is_empty());
        }
        let found: Vec<Vec<i64>> = rep.intruders.iter().map(|x| x.h.clone()).collect();
        for h in &dense {
            assert!(found.contains(h), "radius {radius}: dense scan found {h:?}");
        }
    }
}

#[test]
fn separation_rejects_nonpositive_radius() {
    let m = SectionModel::for_orbit(&split_rank_two()).unwrap();
    let params = SeparationParams {
        radius: 0.0,
        bound: 2,
        region: StripRegion::new(2.0, 10.0).unwrap(),
        epsilon: None,
    };
    assert!(certify_separation(&m, &GVector::zeros(1), &params).is_err());
}
