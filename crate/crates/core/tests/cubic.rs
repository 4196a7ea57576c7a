use mopkit_core::diffeq::verify_annihilation;
use mopkit_core::reference::cubic;
use mopkit_core::*;

fn digits60(s: &str) -> BigFloat {
    BigFloat::parse(Precision::digits(60), s).unwrap()
}

fn system() -> MopSystem<BigFloat> {
    MopSystem::new(WeightSystem::cubic(vec![digits60("1"), digits60("2")]).unwrap())
}

fn relative(v: &BigFloat, scale: &BigFloat) -> f64 {
    (v.clone().abs() / scale).to_f64()
}

#[test]
fn identities_hold_to_forty_digits() {
    let sys = system();
    for n in MultiIndex::all_up_to(2, 4) {
        for v in [
            sys.verify_nn_recurrence(&n).unwrap(),
            sys.verify_ladder_type2(&n).unwrap(),
            sys.verify_ladder_type1(&n).unwrap(),
            sys.verify_compatibility(&n).unwrap(),
        ] {
            assert!(v.max_residual <= 1e-40, "{v}");
        }
    }
}

#[test]
fn ladder_matrix_has_the_cubic_form() {
    let sys = system();
    let (c1, c2) = (digits60("1"), digits60("2"));
    for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let n = MultiIndex::new(vec![a, b]);
        let k = sys.pair_coefficients(a, b).unwrap();
        let c_lo = sys.pair_coefficients(a - 1, b).unwrap().c;
        let d_lo = sys.pair_coefficients(a, b - 1).unwrap().d;
        let expected = cubic::ladder_matrix(&c1, &c2, &k, &c_lo, &d_lo);
        let computed = sys.ladder_matrix(&n).unwrap().matrix;
        let diff = computed.sub(&expected).unwrap().max_abs_coeff();
        assert!(relative(&diff, &expected.max_abs_coeff()) <= 1e-40, "{n}");
    }
}

#[test]
fn nonlinear_relations_hold() {
    let sys = system();
    let (c1, c2) = (digits60("1"), digits60("2"));
    let get = |n, m| sys.pair_coefficients(n, m);
    for n in MultiIndex::all_up_to(2, 3) {
        for (name, v) in cubic::relations(&c1, &c2, n.get(0), n.get(1), &get).unwrap() {
            assert!(v.to_f64().abs() <= 1e-40, "{name} at {n}: {v}");
        }
    }
}

#[test]
fn equation_shape_and_annihilation() {
    let sys = system();
    for n in MultiIndex::all_up_to(2, 4).into_iter().filter(|n| n.parts().iter().all(|&k| k > 0)) {
        let ode = sys.derive_ode_type2(&n).unwrap();
        let degrees = ode.degrees();
        for (k, bound) in [5, 6, 4, 2].into_iter().enumerate() {
            assert!(degrees[k].is_some_and(|d| d <= bound), "{n}: {degrees:?}");
        }
        let v = verify_annihilation(&ode, &sys.type2(&n).unwrap().p, &n.to_string()).unwrap();
        assert!(v.max_residual <= 1e-35, "{v}");
    }
}

#[test]
fn formal_first_moment_gives_exact_structure() {
    // any mu_1 defines a functional with L[p'] = L[v' p]
    let q = Rational::new;
    let sys = MopSystem::new(
        WeightSystem::cubic_with_first_moments(vec![q(1, 1), q(2, 1)], vec![q(1, 3), q(-1, 2)]).unwrap(),
    );
    let get = |n, m| sys.pair_coefficients(n, m);
    for n in MultiIndex::all_up_to(2, 3) {
        sys.verify_compatibility(&n).unwrap();
        for (name, v) in cubic::relations(&q(1, 1), &q(2, 1), n.get(0), n.get(1), &get).unwrap() {
            assert!(v.is_zero(), "{name} at {n}");
        }
    }
    let ode = sys.derive_ode_type2(&MultiIndex::new(vec![2, 2])).unwrap();
    let degrees: Vec<Option<usize>> = ode.coeffs.iter().map(Poly::degree).collect();
    assert_eq!(degrees, vec![Some(5), Some(6), Some(4), Some(2)]);
}
