use std::collections::BTreeSet;

use crystal_pde::jets::{
    cartan_distribution_dimension, corpus_file, corpus_system, formal_integrability_check, jet_dimension,
    parse_section, prolong_system, prolongation_dimension_formula, symbol_report, verify_polynomial_solution,
    DiffOperator, DiffPoly, MultiIndex, PdeSystem, Var, CORPUS,
};
use num_rational::BigRational;
use proptest::prelude::*;

const N: usize = 3;
const M: usize = 2;

fn var_strategy() -> impl Strategy<Value = DiffPoly> {
    prop_oneof![
        (0..N).prop_map(DiffPoly::x),
        (0..M, prop::collection::vec(0..N, 0..=2)).prop_map(|(j, dirs)| DiffPoly::jet(j, MultiIndex::from_directions(&dirs))),
    ]
}

fn term_strategy() -> impl Strategy<Value = DiffPoly> {
    (-5i64..=5, prop::collection::vec(var_strategy(), 0..=3))
        .prop_map(|(c, vars)| vars.iter().fold(DiffPoly::integer(c), |acc, v| &acc * v))
}

fn poly_strategy() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec(term_strategy(), 0..=4).prop_map(|ts| ts.iter().fold(DiffPoly::zero(), |acc, t| &acc + t))
}

fn x_poly_strategy() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0..N, 0..=2)), 0..=3).prop_map(|ts| {
        ts.iter().fold(DiffPoly::zero(), |acc, (c, dirs)| {
            &acc + &dirs.iter().fold(DiffPoly::integer(*c), |p, &i| &p * &DiffPoly::x(i))
        })
    })
}

fn operator_strategy() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec((prop::collection::vec(0..N, 0..=2), x_poly_strategy()), 0..=3)
        .prop_map(|ts| DiffOperator::new(ts.into_iter().map(|(d, a)| (MultiIndex::from_directions(&d), a))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn total_derivatives_commute(p in poly_strategy(), i in 0..N, j in 0..N) {
        prop_assert_eq!(p.total_derivative(i).total_derivative(j), p.total_derivative(j).total_derivative(i));
    }

    #[test]
    fn total_derivative_is_a_derivation(p in poly_strategy(), q in poly_strategy(), i in 0..N) {
        let lhs = (&p * &q).total_derivative(i);
        let rhs = &(&p.total_derivative(i) * &q) + &(&p * &q.total_derivative(i));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!((&p + &q).total_derivative(i), &p.total_derivative(i) + &q.total_derivative(i));
    }

    #[test]
    fn total_derivative_raises_order_by_at_most_one(p in poly_strategy(), i in 0..N) {
        prop_assert!(p.total_derivative(i).order() <= p.order() + 1);
        prop_assert_eq!(DiffPoly::x(i).total_derivative(i), DiffPoly::one());
    }

    #[test]
    fn operator_composition_respects_filtration(p in operator_strategy(), q in operator_strategy()) {
        let pq = p.compose(&q);
        match (p.order(), q.order()) {
            (Some(a), Some(b)) => {
                // leading symbols multiply without zero divisors
                prop_assert_eq!(pq.order(), Some(a + b));
                let c = p.commutator(&q);
                prop_assert!(c.order().is_none_or(|o| o < a + b));
            }
            _ => prop_assert!(pq.is_zero()),
        }
    }

    #[test]
    fn operator_composition_is_composition_of_actions(p in operator_strategy(), q in operator_strategy(), f in x_poly_strategy()) {
        prop_assert_eq!(p.compose(&q).apply(&f), p.apply(&q.apply(&f)));
    }

    #[test]
    fn derivations_commute_and_act_on_coefficients(a in x_poly_strategy(), i in 0..N, j in 0..N) {
        let (di, dj) = (DiffOperator::derivation(i), DiffOperator::derivation(j));
        prop_assert!(di.commutator(&dj).is_zero());
        let ma = DiffOperator::multiplication(a.clone()).unwrap();
        let expect = DiffOperator::multiplication(a.partial(&Var::X(i as u8))).unwrap();
        prop_assert_eq!(di.commutator(&ma), expect);
    }
}

fn monic_set(s: &PdeSystem) -> BTreeSet<DiffPoly> {
    s.equations().iter().map(DiffPoly::monic).collect()
}

#[test]
fn prolongations_compose() {
    for key in ["heat", "continuity", "pressure", "dalembert"] {
        let s = corpus_system(key).unwrap();
        for r in 0..=2 {
            for t in 0..=2 - r {
                let stepwise = prolong_system(&prolong_system(&s, t), r);
                let direct = prolong_system(&s, r + t);
                assert_eq!(stepwise.order(), direct.order());
                assert_eq!(monic_set(&stepwise), monic_set(&direct), "{key} r={r} s={t}");
            }
        }
    }
}

/// `(dim E, dim g, g^(1), ..., dim g_{+1}, dim E_{+1})`.
fn chain(key: &str) -> (usize, Vec<usize>, usize, usize) {
    let r = symbol_report(&corpus_system(key).unwrap()).unwrap();
    (r.equation_dim, r.symbol_filtration.clone(), r.prolonged_symbol_dim, r.prolonged_equation_dim)
}

#[test]
fn dimension_chains() {
    assert_eq!(chain("continuity"), (14, vec![8, 5, 2, 0], 15, 29));
    assert_eq!(chain("pressure"), (12, vec![5, 2, 0, 0], 7, 19));
    assert_eq!(chain("singular_component"), (8, vec![3, 0, 0], 3, 11));
    assert_eq!(cartan_distribution_dimension(&corpus_system("singular_component").unwrap()).unwrap(), 5);
    assert_eq!(jet_dimension(2, 1, 2), 8);
    assert_eq!(jet_dimension(2, 3, 1), 11);
}

#[test]
fn alternate_parameters_keep_the_chains() {
    for (key, _) in CORPUS {
        let file = corpus_file(key).unwrap();
        let Some(alt) = file.build_alternate() else { continue };
        let a = symbol_report(&alt.unwrap()).unwrap();
        let b = symbol_report(&file.build().unwrap()).unwrap();
        assert_eq!(
            (a.equation_dim, &a.symbol_filtration, a.prolonged_equation_dim),
            (b.equation_dim, &b.symbol_filtration, b.prolonged_equation_dim),
            "{key}"
        );
    }
}

#[test]
fn integrability_verdicts() {
    for key in ["heat", "continuity", "pressure", "singular_component", "tricomi"] {
        let v = formal_integrability_check(&corpus_system(key).unwrap()).unwrap();
        assert!(v.passed && v.involutivity.involutive && v.dimension_identity, "{key}");
    }
    let v = formal_integrability_check(&corpus_system("non_involutive").unwrap()).unwrap();
    assert!(!v.involutivity.involutive);
    assert!(!v.regular_involutivity.involutive);
    // u u_xy - u_x u_y is involutive only after a generic change of coordinates
    let v = formal_integrability_check(&corpus_system("dalembert").unwrap()).unwrap();
    assert!(!v.involutivity.involutive);
    assert!(v.regular_involutivity.involutive && v.dimension_identity);
}

#[test]
fn prolongation_formula_matches_direct_count() {
    for key in ["heat", "continuity", "pressure", "singular_component", "tricomi"] {
        let r = symbol_report(&corpus_system(key).unwrap()).unwrap();
        let formula = |t| prolongation_dimension_formula(r.lower_order_dim, &r.characters, t);
        assert_eq!(formula(0), r.equation_dim, "{key}");
        assert_eq!(formula(1), r.prolonged_equation_dim, "{key}");
    }
}

fn residuals(key: &str, section: &[&str]) -> Vec<BigRational> {
    let s = corpus_system(key).unwrap();
    let sec = parse_section(&s, section).unwrap();
    verify_polynomial_solution(&s, &sec.components)
        .unwrap()
        .iter()
        .map(|p| p.as_constant().expect("constant residual"))
        .collect()
}

#[test]
fn polynomial_solutions() {
    let q = |n: i64| BigRational::from_integer(n.into());
    assert_eq!(residuals("heat", &["3*x + 5"]), [q(0)]);
    assert_eq!(residuals("heat", &["x^2"]), [q(-2)]);
    assert_eq!(residuals("heat", &["x^2 + 2*t"]), [q(0)]);
    assert_eq!(residuals("dalembert", &["x*y"]), [q(0)]);
    assert_eq!(residuals("tricomi", &["x*y + 4"]), [q(0)]);
    let s = corpus_system("heat").unwrap();
    assert!(parse_section(&s, &["x", "t"]).is_err());
}
