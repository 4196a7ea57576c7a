//! Identities that must hold for any admissible parameters.

use mopkit_core::diffeq::{verify_annihilation, verify_annihilation_weighted};
use mopkit_core::*;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn hermite_system() -> impl Strategy<Value = MopSystem<Rational>> {
    (rational(), rational())
        .prop_filter("distinct", |(a, b)| a != b)
        .prop_map(|(a, b)| MopSystem::new(WeightSystem::hermite(vec![a, b]).unwrap()))
}

fn laguerre_first_system() -> impl Strategy<Value = MopSystem<Rational>> {
    (1i64..=9, 1i64..=9)
        .prop_map(|(a, b)| (Rational::new(a, 4), Rational::new(b, 3)))
        .prop_filter("non-integer difference", |(a, b)| !(a.clone() - b).is_integer())
        .prop_map(|(a, b)| MopSystem::new(WeightSystem::laguerre_first(vec![a, b]).unwrap()))
}

fn index() -> impl Strategy<Value = MultiIndex> {
    (0u32..=3, 0u32..=3).prop_map(|(a, b)| MultiIndex::new(vec![a, b]))
}

fn all_identities(sys: &MopSystem<Rational>, n: &MultiIndex) {
    sys.verify_nn_recurrence(n).unwrap();
    sys.verify_pde(n).unwrap();
    sys.verify_w_commutation(n).unwrap();
    sys.verify_ladder_type2(n).unwrap();
    sys.verify_ladder_type1(n).unwrap();
    sys.verify_compatibility(n).unwrap();
    let first = LatticePath::first_coordinate_first(n);
    let last = LatticePath::last_coordinate_first(n);
    sys.verify_cd(n, &first, &last).unwrap();
    if n.parts().iter().all(|&k| k > 0) {
        let ode = sys.derive_ode_type2(n).unwrap();
        assert_eq!(ode.order(), 3);
        verify_annihilation(&ode, &sys.type2(n).unwrap().p, "P").unwrap();
        let ode1 = sys.derive_ode_type1(n).unwrap();
        let t = sys.type1(n).unwrap();
        for l in 0..2 {
            verify_annihilation_weighted(&ode1, &t.a[l], &sys.weights().potential(l).derivative(), "A").unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hermite_identities(sys in hermite_system(), n in index()) {
        all_identities(&sys, &n);
    }

    #[test]
    fn laguerre_first_identities(sys in laguerre_first_system(), n in index()) {
        all_identities(&sys, &n);
    }

    #[test]
    fn biorthogonality_is_kronecker(sys in hermite_system()) {
        sys.verify_biorthogonality(3).unwrap();
    }

    #[test]
    fn type_two_is_monic_with_full_degree(sys in laguerre_first_system(), n in index()) {
        let p = sys.type2(&n).unwrap().p.clone();
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), Some(n.size() as usize));
    }
}
