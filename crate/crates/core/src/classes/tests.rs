use super::*;
use crate::combinatorics::profiles_up_to_order;
use crate::syntax::{parse_class, render_text};

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn parse(text: &str) -> ClassExpr {
    parse_class(text).unwrap()
}

#[test]
fn psi_decomposition_small() {
    assert_eq!(psi_decomposition(1), vec![r(1, 1), r(1, 1)]);
    assert_eq!(psi_decomposition(2), vec![r(1, 1), r(3, 2), r(1, 2)]);
    assert_eq!(psi_decomposition(3), vec![r(1, 1), r(7, 4), r(11, 12), r(1, 6)]);
}

#[test]
fn psi_decomposition_reassembles() {
    // Σ c_j ∏_{r≤j}(rψ − 1) = ψ^m at ξ = 1.
    for m in 0..8 {
        let sum = psi_decomposition(m)
            .iter()
            .enumerate()
            .fold(Polynomial::zero(), |acc, (j, c)| &acc + &falling_product(j as u32).scale(c));
        assert_eq!(sum, Polynomial::monomial(Rational::one(), m as usize));
    }
}

#[test]
fn small_products() {
    assert_eq!(render_text(&theorem1_expansion(1).unwrap()), "a_1");
    assert_eq!(render_text(&theorem1_expansion(2).unwrap()), "a_2 + 1/2*i[1,1]");
    assert!(theorem1_expansion(0).is_err());
}

#[test]
fn products_are_homogeneous() {
    for m in 1..=6 {
        let e = theorem1_expansion(m).unwrap();
        for (tree, poly) in e.iter() {
            for (xi, _) in poly.terms() {
                assert_eq!(tree.codim() as usize + xi, m as usize, "{tree}");
            }
        }
    }
}

#[test]
fn psi_powers_match_expansion_of_products() {
    assert_eq!(
        render_text(&psi_power_sing(2).unwrap()),
        "1/2*a_2 + 1/4*i[1,1] + 3/2*xi*a_1 + xi^2"
    );
    // Leading coefficient on a_m is 1/m!.
    for m in 1..=6 {
        let e = psi_power_sing(m).unwrap();
        assert_eq!(e.coefficient(&MarkedTree::stick(m), 0), Rational::factorial(m as u64).recip().unwrap());
    }
}

#[test]
fn small_conversions() {
    let e = basic_to_sing(&parse("d[0,1]")).unwrap();
    assert_eq!(e, parse("i[1,2] + xi*i[1,1]"));
    let e = sing_to_basic(&parse("a_2")).unwrap();
    assert_eq!(e, parse("2*psi^2 - 1/2*d[0,0] - 3*xi*psi + xi^2"));
}

#[test]
fn wrong_basis_is_rejected() {
    assert!(matches!(basic_to_sing(&parse("a_2")), Err(Error::WrongBasis { .. })));
    assert!(matches!(sing_to_basic(&parse("d[0,0]")), Err(Error::WrongBasis { .. })));
}

#[test]
fn sticks_round_trip_to_psi_powers() {
    for m in 1..=6 {
        let basic = sing_to_basic(&psi_power_sing(m).unwrap()).unwrap();
        let expected = ClassExpr::from_tree(Basis::Basic, MarkedTree::stick(m));
        assert_eq!(basic, expected, "m = {m}");
    }
}

#[test]
fn delta_example_has_nested_terms() {
    let e = basic_to_sing(&parse("d[0,1,2]")).unwrap();
    let nested = parse("T{(0;(0;0,0),0,1)}@sing").trees().next().unwrap().clone();
    assert_eq!(e.coefficient(&nested, 0), r(1, 4));
    let nested = parse("T{(0;(0;0,0),0,0)}@sing").trees().next().unwrap().clone();
    assert_eq!(e.coefficient(&nested, 1), r(1, 4));
}

#[test]
fn point_coefficients_psi() {
    let p = |parts: &[u32]| Profile::from_parts(parts);
    assert_eq!(point_coefficient_psi(2, &p(&[1, 1]), false).unwrap(), r(1, 4));
    assert_eq!(point_coefficient_psi(3, &p(&[1, 2]), false).unwrap(), r(1, 3));
    assert_eq!(point_coefficient_psi(4, &p(&[1, 1, 1]), false).unwrap(), r(1, 36));
    // The unnormalized variant carries an extra m!.
    assert_eq!(point_coefficient_psi(2, &p(&[1, 1]), true).unwrap(), r(1, 2));
    assert!(point_coefficient_psi(3, &p(&[1, 1]), false).is_err());
}

#[test]
fn point_coefficient_psi_matches_expansion() {
    for m in 1..=7u32 {
        let e = psi_power_sing(m).unwrap();
        for p in profiles_up_to_order(m as u64 + 2) {
            if p.order() != m as u64 + 2 {
                continue;
            }
            let expected = extract_point_coefficient(&e, &p).unwrap();
            assert_eq!(point_coefficient_psi(m, &p, false).unwrap(), expected, "m = {m}, {p}");
        }
    }
}

#[test]
fn point_coefficients_delta() {
    let p = |parts: &[u32]| Profile::from_parts(parts);
    assert_eq!(point_coefficient_delta(&[1, 1], &p(&[2, 2])).unwrap(), r(1, 1));
    assert_eq!(point_coefficient_delta(&[0, 2], &p(&[1, 3])).unwrap(), r(1, 2));
    assert_eq!(point_coefficient_delta(&[0, 2], &p(&[1, 1, 1])).unwrap(), r(1, 4));
    assert!(point_coefficient_delta(&[0, 2], &p(&[1, 1])).is_err());
}

#[test]
fn point_coefficient_delta_matches_expansion() {
    for ms in [&[0, 2][..], &[1, 1], &[1, 2], &[0, 3], &[0, 1, 2], &[0, 0, 2]] {
        let tree = point_delta_tree(ms).unwrap();
        let e = basic_to_sing(&ClassExpr::from_tree(Basis::Basic, tree)).unwrap();
        let order = 2 * ms.len() as u64 + ms.iter().map(|&m| m as u64).sum::<u64>();
        for p in profiles_up_to_order(order) {
            if p.is_empty() || p.order() != order {
                continue;
            }
            let expected = extract_point_coefficient(&e, &p).unwrap();
            assert_eq!(point_coefficient_delta(ms, &p).unwrap(), expected, "{ms:?}, {p}");
        }
    }
}
