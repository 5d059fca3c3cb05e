use num_complex::Complex64;
use proptest::prelude::*;

use nilorbit::corpus::{direct_sum, random_split_orbit, split_rank_two, twisted_rank_four};
use nilorbit::estimates::{
    a_norm, b_norm, monodromy_consistency, monodromy_consistency_exact, SectionModel,
};
use nilorbit::format::{parse_orbit, serialize_orbit};
use nilorbit::hodge::validate_orbit;
use nilorbit::linalg::{rref, GScalar, GVector, Matrix, Subspace};

fn scalar() -> impl Strategy<Value = GScalar> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3)
        .prop_map(|(a, b, c, d)| GScalar::from_parts(a, b, c, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(scalar(), cols), rows)
        .prop_map(|rs| Matrix::from_rows(&rs.into_iter().map(GVector).collect::<Vec<_>>()).unwrap())
}

fn vectors(dim: usize) -> impl Strategy<Value = Vec<GVector>> {
    prop::collection::vec(
        prop::collection::vec(scalar(), dim).prop_map(GVector),
        0..=dim,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        for v in m.kernel().basis() {
            prop_assert!(m.apply(v).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..=4).prop_flat_map(|n| matrix(n, n))) {
        match m.inverse() {
            Some(inv) => {
                let id = Matrix::identity(m.rows());
                prop_assert_eq!(m.mul(&inv).unwrap(), id.clone());
                prop_assert_eq!(inv.mul(&m).unwrap(), id);
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn rref_is_idempotent(vs in vectors(4)) {
        let (once, pivots) = rref(vs);
        let (twice, pivots2) = rref(once.clone());
        prop_assert_eq!(once, twice);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn sum_and_intersection_dimensions(a in vectors(4), b in vectors(4)) {
        let a = Subspace::echelonize(4, &a).unwrap();
        let b = Subspace::echelonize(4, &b).unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
    }

    #[test]
    fn norms_are_homogeneous(levels in prop::collection::vec(0.0f64..10.0, 1..5), c in 0.0f64..8.0, y in 1.0f64..100.0) {
        let scaled: Vec<f64> = levels.iter().map(|u| c * u).collect();
        let tol = 1e-12 * (1.0 + a_norm(&levels, y) * c);
        prop_assert!((a_norm(&scaled, y) - c * a_norm(&levels, y)).abs() <= tol);
        prop_assert!((b_norm(&scaled, y) - c * b_norm(&levels, y)).abs() <= tol);
    }

    #[test]
    fn sections_are_linear_in_the_lattice(
        h in prop::collection::vec(-6i64..=6, 4),
        g in prop::collection::vec(-6i64..=6, 4),
        k in -5i64..=5,
        z in scalar(),
    ) {
        for orbit in [split_rank_two(), twisted_rank_four()] {
            let m = SectionModel::for_orbit(&orbit).unwrap();
            let n = m.rank();
            let (h, g) = (&h[..n], &g[..n]);
            let sum: Vec<i64> = h.iter().zip(g).map(|(a, b)| a + k * b).collect();
            let lhs = m.phi_exact(&sum, &z);
            let mut rhs = m.phi_exact(h, &z);
            rhs.axpy(&GScalar::from_int(k), &m.phi_exact(g, &z));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sections_are_deck_invariant(
        h in prop::collection::vec(-8i64..=8, 4),
        re in -2.0f64..2.0,
        y in 0.5f64..50.0,
        z in scalar(),
    ) {
        for orbit in [split_rank_two(), twisted_rank_four(), direct_sum(&[split_rank_two(), split_rank_two()]).unwrap()] {
            let m = SectionModel::for_orbit(&orbit).unwrap();
            let h = &h[..m.rank()];
            prop_assert!(monodromy_consistency_exact(&m, h, &z));
            prop_assert!(monodromy_consistency(&m, h, Complex64::new(re, y), 1e-9).consistent);
        }
    }

    #[test]
    fn random_orbits_round_trip(seed in 0u64..10_000) {
        let orbit = random_split_orbit(seed).unwrap();
        prop_assert!(validate_orbit(&orbit).all_pass());
        let text = serialize_orbit(&orbit);
        let parsed = parse_orbit(&text).unwrap();
        prop_assert_eq!(serialize_orbit(&parsed), text);
        let m = SectionModel::for_orbit(&parsed).unwrap();
        let h: Vec<i64> = (0..m.rank() as i64).map(|i| (seed as i64 + i) % 5 - 2).collect();
        prop_assert!(monodromy_consistency_exact(&m, &h, &GScalar::from_parts(1, 3, 2, 1)));
    }
}
