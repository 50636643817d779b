//! Property tests for the exact-algebra invariants: ring axioms, the
//! polarization rebuild identity, initial-form multiplicativity, and the
//! Leibniz rule, all on random sparse polynomials with exact equality.

use dubrovin::exactalg::{polarize, rat, Rational, VarTable, WPoly};
use proptest::prelude::*;

fn uvw2_poly() -> impl Strategy<Value = WPoly<Rational>> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, 6), -9i64..9, 1i64..5),
        1..8,
    )
    .prop_map(|terms| {
        WPoly::from_terms(
            VarTable::uvw(2),
            terms.into_iter().map(|(e, n, d)| (e, rat(n, d))).collect(),
        )
    })
}

/// Homogeneous form in u1..u3 of fixed degree.
fn u3_form(deg: u32) -> impl Strategy<Value = WPoly<Rational>> {
    let t = VarTable::u_only(3);
    let monos: Vec<Vec<u32>> = dubrovin::ideal::monomials_of_weighted_degree(&t, deg as i64);
    let n = monos.len();
    proptest::collection::vec(-9i64..9, n).prop_map(move |coeffs| {
        let mut p = WPoly::zero(VarTable::u_only(3));
        for (e, c) in monos.iter().zip(coeffs) {
            p.add_term(e.clone(), rat(c, 1));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold_exactly(a in uvw2_poly(), b in uvw2_poly(), c in uvw2_poly()) {
        // associativity and distributivity, exact equality
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // commutativity
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn derivative_obeys_leibniz(a in uvw2_poly(), b in uvw2_poly()) {
        let t = VarTable::uvw(2);
        for idx in 0..t.len() {
            let lhs = a.mul(&b).unwrap().partial_derivative_idx(idx);
            let rhs = a
                .partial_derivative_idx(idx)
                .mul(&b)
                .unwrap()
                .add(&a.mul(&b.partial_derivative_idx(idx)).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn polarize_rebuilds_substitution(f in u3_form(3)) {
        // sum over (a, b, c) of polarize(f; a,b,c) x^a y^b t^c equals
        // f(xU + yV + tW) in an enlarged table
        prop_assume!(!f.is_zero());
        let g = 3usize;
        let deg = 3u32;
        // enlarged table: u, v, w blocks plus x, y, t
        let mut names: Vec<String> = VarTable::uvw(g).names().to_vec();
        names.extend(["x".into(), "y".into(), "t".into()]);
        let mut weights: Vec<i64> = VarTable::uvw(g).weights().to_vec();
        weights.extend([1, 1, 1]);
        let big = VarTable::new(names, weights).unwrap();
        // images u_i -> x u_i + y v_i + t w_i
        let var = |i: usize| WPoly::<Rational>::var(big.clone(), i);
        let images: Vec<WPoly<Rational>> = (0..g)
            .map(|i| {
                var(3 * g)
                    .mul(&var(i))
                    .unwrap()
                    .add(&var(3 * g + 1).mul(&var(g + i)).unwrap())
                    .unwrap()
                    .add(&var(3 * g + 2).mul(&var(2 * g + i)).unwrap())
                    .unwrap()
            })
            .collect();
        let substituted = f.compose(&images).unwrap();
        // rebuild from the polarizations
        let mut rebuilt = WPoly::zero(big.clone());
        for a in 0..=deg {
            for b in 0..=(deg - a) {
                let c = deg - a - b;
                let part = polarize(&f, a, b, c).unwrap();
                let embedded = part.embed(big.clone(), &(0..3 * g).collect::<Vec<_>>());
                let mut e = vec![0u32; big.len()];
                e[3 * g] = a;
                e[3 * g + 1] = b;
                e[3 * g + 2] = c;
                rebuilt = rebuilt
                    .add(&embedded.mul_monomial(&e, &rat(1, 1)))
                    .unwrap();
            }
        }
        prop_assert_eq!(substituted, rebuilt);
    }

    #[test]
    fn initial_form_is_multiplicative(a in uvw2_poly(), b in uvw2_poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let t = VarTable::uvw(2);
        let w = t.initial_weights();
        let lhs = a.mul(&b).unwrap().initial_form(&w).unwrap();
        let rhs = a
            .initial_form(&w)
            .unwrap()
            .mul(&b.initial_form(&w).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
