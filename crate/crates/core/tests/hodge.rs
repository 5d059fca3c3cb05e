use std::collections::BTreeMap;

use nilorbit::corpus::{
    direct_sum, impure_rank_one, jordan_orbit, random_split_orbit, split_rank_two,
    twisted_rank_four, Manifest,
};
use nilorbit::hodge::*;
use nilorbit::linalg::{Direction, Filtration, GScalar, GVector, Subspace};

fn span(dim: usize, vs: &[Vec<i64>]) -> Subspace {
    let vs: Vec<GVector> = vs.iter().map(|v| GVector::from_ints(v)).collect();
    Subspace::echelonize(dim, &vs).unwrap()
}

#[test]
fn split_rank2_validates_and_is_split() {
    let orbit = split_rank_two();
    let report = validate_orbit(&orbit);
    assert!(report.all_pass(), "{report:?}");

    let w = monodromy_weight_filtration(orbit.n(), -1).unwrap();
    assert!(w.get(-3).is_zero());
    assert_eq!(w.get(-2), span(2, &[vec![0, 1]]));
    assert_eq!(w.get(-1), span(2, &[vec![0, 1]]));
    assert!(w.get(0).is_full());

    let mhs = build_limit_mhs(&orbit).unwrap();
    assert_eq!(
        mhs.hodge_numbers(),
        BTreeMap::from([((0, 0), 1), ((-1, -1), 1)])
    );
    assert!(is_r_split(&mhs).unwrap());

    let bi = primitive_decomposition(&mhs).unwrap();
    assert_eq!(bi.piece(1, 1).unwrap().dim(), 1);
    assert_eq!(bi.piece(1, 0).unwrap().dim(), 1);
    assert_eq!(bi.negative_part().unwrap().dim(), 1);

    let iota = construct_alpha(&mhs, &bi).unwrap();
    assert!(iota.is_identity());
    assert_eq!(iota.lattice_index, 1.into());
    assert!(check_kernel_injectivity(&orbit));
}

#[test]
fn twisted_rank4_is_structurally_valid_but_impure_at_weight_zero() {
    let orbit = twisted_rank_four();
    let report = validate_orbit(&orbit);
    assert!(report.check(CHECK_NILPOTENT).unwrap().passed);
    assert!(report.check(CHECK_TRANSVERSAL).unwrap().passed);
    match build_limit_mhs(&orbit) {
        Err(HodgeError::NotPure(d)) => {
            assert_eq!(d.first().weight, 0);
            assert_eq!(d.first().dim, 2);
            assert_eq!(d.first().span_dim, 0);
        }
        other => panic!("expected impurity, got {other:?}"),
    }
}

#[test]
fn impure_rank_one_is_diagnosed() {
    let err = build_limit_mhs(&impure_rank_one()).unwrap_err();
    let HodgeError::NotPure(d) = err else {
        panic!("{err:?}")
    };
    assert_eq!(d.failures.len(), 1);
    assert_eq!(d.first().weight, -1);
}

#[test]
fn identity_is_not_nilpotent() {
    let f = Filtration::new(Direction::Decreasing, 2, BTreeMap::new()).unwrap();
    let orbit = NilpotentOrbit::new(-1, vec![vec![1, 0], vec![0, 1]], f, "id").unwrap();
    let report = validate_orbit(&orbit);
    assert!(!report.check(CHECK_NILPOTENT).unwrap().passed);
    assert!(!report.check(CHECK_EXP_INTEGRAL).unwrap().passed);
}

#[test]
fn kernel_injectivity_fails_for_rational_f0() {
    let f = Filtration::new(
        Direction::Decreasing,
        2,
        BTreeMap::from([(0, span(2, &[vec![1, 0]]))]),
    )
    .unwrap();
    let orbit = NilpotentOrbit::new(-1, vec![vec![0, 0], vec![0, 0]], f, "bad").unwrap();
    assert!(!check_kernel_injectivity(&orbit));

    let f = Filtration::new(
        Direction::Decreasing,
        2,
        BTreeMap::from([(0, Subspace::zero(2))]),
    )
    .unwrap();
    let orbit = NilpotentOrbit::new(-1, vec![vec![0, 0], vec![0, 0]], f, "zero").unwrap();
    assert!(check_kernel_injectivity(&orbit));
}

#[test]
fn zero_monodromy_has_a_single_bigraded_piece() {
    let orbit = jordan_orbit(1, -1, 0).unwrap();
    let mhs = build_limit_mhs(&orbit).unwrap();
    let bi = primitive_decomposition(&mhs).unwrap();
    assert_eq!(bi.depth(), 0);
    assert_eq!(bi.pieces().len(), 1);
    assert_eq!(bi.piece(0, 0).unwrap().dim(), 2);
}

#[test]
fn jordan_sizes_two_and_one() {
    // Weight -2 admits a real block of size 1 and a pair for size 2.
    let a = jordan_orbit(1, -2, 0).unwrap();
    let b = jordan_orbit(3, -2, 0).unwrap();
    let sum = direct_sum(&[b, a]).unwrap();
    let mhs = build_limit_mhs(&sum).unwrap();
    let bi = primitive_decomposition(&mhs).unwrap();
    assert_eq!(bi.primitive(2).unwrap().dim(), 1);
    assert_eq!(bi.primitive(0).unwrap().dim(), 1);
    let total: usize = bi.pieces().values().map(Subspace::dim).sum();
    assert_eq!(total, 4);
}

#[test]
fn corpus_manifests_hold() {
    for r in nilorbit::corpus::catalogue() {
        let orbit = r.build().unwrap();
        assert_eq!(Manifest::observe(&orbit), r.manifest, "{}", r.name);
    }
}

#[test]
fn random_split_orbits_have_nonnegative_kernel_shifts() {
    let mut nontrivial = 0;
    for seed in 0..24 {
        let orbit = random_split_orbit(seed).unwrap();
        assert!(validate_orbit(&orbit).all_pass(), "seed {seed}");
        let mhs = build_limit_mhs(&orbit).unwrap();
        let w = mhs.weight_filtration();
        assert!(w.satisfies_conditions(orbit.n()));
        let bi = primitive_decomposition(&mhs).unwrap();
        let iota = construct_alpha(&mhs, &bi).unwrap();
        assert!(iota.preserves_kernel_filtration(), "seed {seed}");
        if !iota.is_identity() {
            nontrivial += 1;
        }
        check_alpha_invariants(&mhs, &iota);
    }
    assert!(nontrivial > 0);
}

fn check_alpha_invariants(mhs: &LimitMhs, iota: &IotaMap) {
    let g = mhs.graded();
    let n = mhs.orbit().n();
    let ng = g.n_graded();
    for alpha in [&iota.alpha_c, &iota.alpha_q] {
        assert_eq!(n.mul(alpha).unwrap(), alpha.mul(ng).unwrap());
        // identity on graded pieces: T⁻¹ α is block unipotent w.r.t. weight
        let t = g.splitting_inverse().mul(alpha).unwrap();
        for c in 0..t.cols() {
            for r in 0..t.rows() {
                let (wr, wc) = (g.weight_of_index(r), g.weight_of_index(c));
                if wr == wc {
                    let expected = if r == c {
                        GScalar::one()
                    } else {
                        GScalar::zero()
                    };
                    assert_eq!(t[(r, c)], expected);
                } else if wr > wc {
                    assert!(t[(r, c)].is_zero());
                }
            }
        }
    }
    assert!(iota.alpha_q.is_real());
    // alpha_c carries the Hodge filtration of G into F
    let hodge = primitive_decomposition(mhs).unwrap();
    let hb = hodge.hodge().unwrap();
    for b in &hb.basis {
        let (p, _) = b.hodge_type.unwrap();
        let image = iota.alpha_c.apply(&b.vector).unwrap();
        assert!(mhs.orbit().f(p).contains(&image));
    }
}

#[test]
fn twisted_orbit_has_kernel_filtration_preserving_iota() {
    // split-rank2 moved by exp(iN): F^0 = span(e0 + i e1) is not split
    // over the reals, so the Hodge and rational lifts of e0 differ.
    let mut a = GVector::from_ints(&[1, 0]);
    a[1] = GScalar::i();
    let f0 = Subspace::echelonize(2, &[a]).unwrap();
    let f = Filtration::new(Direction::Decreasing, 2, BTreeMap::from([(0, f0)])).unwrap();
    let orbit = NilpotentOrbit::new(-1, vec![vec![0, 0], vec![1, 0]], f, "twisted").unwrap();
    assert!(validate_orbit(&orbit).all_pass());
    let mhs = build_limit_mhs(&orbit).unwrap();
    assert!(!is_r_split(&mhs).unwrap());
    let bi = primitive_decomposition(&mhs).unwrap();
    let iota = construct_alpha(&mhs, &bi).unwrap();
    assert!(!iota.is_identity());
    assert!(iota.preserves_kernel_filtration());
    assert_eq!(
        iota.components.keys().copied().collect::<Vec<_>>(),
        vec![(1, 1, 0), (1, 1, 1)]
    );
    check_alpha_invariants(&mhs, &iota);

    // Same twist next to a pure weight -1 pair: three weights present.
    let pair = nilorbit::corpus::jordan_orbit(1, -1, 0).unwrap();
    let sum = direct_sum(&[orbit, pair]).unwrap();
    let mhs = build_limit_mhs(&sum).unwrap();
    let bi = primitive_decomposition(&mhs).unwrap();
    let iota = construct_alpha(&mhs, &bi).unwrap();
    assert!(!iota.is_identity());
    assert!(iota.preserves_kernel_filtration());
    check_alpha_invariants(&mhs, &iota);
}
