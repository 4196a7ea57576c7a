use mopkit_core::diffeq::{verify_annihilation, verify_annihilation_weighted};
use mopkit_core::reference::{hermite, laguerre_first, laguerre_second};
use mopkit_core::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Rows of `N` belonging to existing neighbors: row 0 and each `i` with `n_i > 0`.
fn rows_agree(n: &MultiIndex, computed: &LaurentMatrix<Rational>, expected: &LaurentMatrix<Rational>) -> bool {
    (0..=n.r()).filter(|&i| i == 0 || n.get(i - 1) > 0).all(|i| (0..=n.r()).all(|j| computed.get(i, j) == expected.get(i, j)))
}

fn check_equations(
    sys: &MopSystem<Rational>,
    n: &MultiIndex,
    type2: &OdeCoeffs<Rational>,
    type1: &OdeCoeffs<Rational>,
) {
    let interior = n.parts().iter().all(|&k| k > 0);
    if interior {
        assert_eq!(&sys.derive_ode_type2(n).unwrap(), type2, "type II at {n}");
        assert_eq!(&sys.derive_ode_type1(n).unwrap(), type1, "type I at {n}");
    } else {
        assert!(matches!(sys.derive_ode_type2(n), Err(Error::DegenerateElimination { .. })));
    }
    verify_annihilation(type2, &sys.type2(n).unwrap().p, "closed form").unwrap();
    let t = sys.type1(n).unwrap();
    for l in 0..2 {
        verify_annihilation_weighted(type1, &t.a[l], &sys.weights().potential(l).derivative(), "closed form").unwrap();
    }
}

#[test]
fn hermite_matches_closed_forms() {
    let (c1, c2) = (q(1, 1), q(-1, 1));
    let sys = MopSystem::new(WeightSystem::hermite(vec![c1.clone(), c2.clone()]).unwrap());
    for n in MultiIndex::all_up_to(2, 5) {
        let (a, b) = (n.get(0), n.get(1));
        let k = hermite::coefficients(&c1, &c2, a, b);
        assert_eq!(sys.pair_coefficients(a, b).unwrap(), k);
        assert!(rows_agree(&n, &sys.ladder_matrix(&n).unwrap().matrix, &hermite::ladder_matrix(&c1, &c2, &k)));
        check_equations(&sys, &n, &hermite::ode_type2(&c1, &c2, a, b), &hermite::ode_type1(&c1, &c2, a, b));
    }
}

#[test]
fn hermite_type_one_needs_shifted_constant() {
    let (c1, c2) = (q(1, 1), q(-1, 1));
    let sys = MopSystem::new(WeightSystem::hermite(vec![c1.clone(), c2.clone()]).unwrap());
    let n = MultiIndex::new(vec![1, 1]);
    let mirrored = hermite::ode_type1_mirrored(&c1, &c2, 1, 1);
    assert_ne!(sys.derive_ode_type1(&n).unwrap(), mirrored);
    let a = &sys.type1(&n).unwrap().a[0];
    assert!(verify_annihilation_weighted(&mirrored, a, &sys.weights().potential(0).derivative(), "mirrored").is_err());
}

#[test]
fn laguerre_second_matches_closed_forms() {
    let (alpha, c1, c2) = (q(1, 1), q(1, 1), q(2, 1));
    let sys = MopSystem::new(WeightSystem::laguerre_second(alpha.clone(), vec![c1.clone(), c2.clone()]).unwrap());
    for n in MultiIndex::all_up_to(2, 5) {
        let (a, b) = (n.get(0), n.get(1));
        assert_eq!(sys.pair_coefficients(a, b).unwrap(), laguerre_second::coefficients(&alpha, &c1, &c2, a, b));
        let xn = sys.ladder_matrix(&n).unwrap().matrix.map(|e| e.mul_x_pow(1));
        assert!(rows_agree(&n, &xn, &laguerre_second::x_ladder_matrix(&alpha, &c1, &c2, a, b)), "N at {n}");
        check_equations(
            &sys,
            &n,
            &laguerre_second::ode_type2(&alpha, &c1, &c2, a, b),
            &laguerre_second::ode_type1(&alpha, &c1, &c2, a, b),
        );
    }
}

#[test]
fn laguerre_first_matches_closed_forms() {
    let (a1, a2) = (q(1, 2), q(3, 4));
    let sys = MopSystem::new(WeightSystem::laguerre_first(vec![a1.clone(), a2.clone()]).unwrap());
    for n in MultiIndex::all_up_to(2, 5) {
        let (a, b) = (n.get(0), n.get(1));
        assert_eq!(sys.pair_coefficients(a, b).unwrap(), laguerre_first::coefficients(&a1, &a2, a, b));
        let xn = sys.ladder_matrix(&n).unwrap().matrix.map(|e| e.mul_x_pow(1));
        assert!(rows_agree(&n, &xn, &laguerre_first::x_ladder_matrix(&a1, &a2, a, b)), "N at {n}");
        check_equations(&sys, &n, &laguerre_first::ode_type2(&a1, &a2, a, b), &laguerre_first::ode_type1(&a1, &a2, a, b));
    }
}

#[test]
fn three_weights_give_fourth_order_equations() {
    let sys = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(0, 1), q(-1, 1)]).unwrap());
    let n = MultiIndex::new(vec![1, 1, 1]);
    let ode = sys.derive_ode_type2(&n).unwrap();
    assert_eq!(ode.order(), 4);
    verify_annihilation(&ode, &sys.type2(&n).unwrap().p, "(1,1,1)").unwrap();
    let ode1 = sys.derive_ode_type1(&n).unwrap();
    let t = sys.type1(&n).unwrap();
    for l in 0..3 {
        verify_annihilation_weighted(&ode1, &t.a[l], &sys.weights().potential(l).derivative(), "(1,1,1)").unwrap();
    }
}
