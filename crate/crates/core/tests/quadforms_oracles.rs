use proptest::prelude::*;
use torsionlab::quadforms::*;

mod common;
use common::{abelian_axioms, analytic_class_number, naive_class_number, torsion_counts, torsion_counts_of};

#[test]
fn class_numbers_match_box_classing() {
    for d in negative_fundamental_discriminants(499) {
        let g = class_group(d).unwrap();
        assert_eq!(g.class_number() as usize, naive_class_number(d), "D = {d}");
    }
}

#[test]
fn class_numbers_match_analytic_formula() {
    for d in negative_fundamental_discriminants(5000) {
        assert_eq!(class_group(d).unwrap().class_number(), analytic_class_number(d), "D = {d}");
    }
}

#[test]
fn known_values() {
    let h = |d| class_group(d).unwrap().class_number();
    assert_eq!((h(-3), h(-4), h(-23), h(-47), h(-71), h(-163)), (1, 1, 3, 5, 7, 1));
    assert_eq!(class_group(-4 * 5 * 7 * 11).unwrap().two_rank(), 3);
    assert_eq!(class_group(-420).unwrap().invariants(), &[2, 2, 2]);
    assert_eq!(class_group(-12).unwrap_err(), FormError::NotFundamental(-12));
    assert!(matches!(class_group(5), Err(FormError::NotNegative(5))));
}

#[test]
fn tables_are_abelian_groups_with_stated_structure() {
    for d in negative_fundamental_discriminants(3000) {
        let g = class_group(d).unwrap();
        let table = g.composition_table();
        abelian_axioms(&table, g.identity()).unwrap_or_else(|e| panic!("D = {d}: {e}"));
        assert_eq!(
            torsion_counts(&table, g.identity()),
            torsion_counts_of(g.invariants()),
            "D = {d}"
        );
        assert!(g.invariants().windows(2).all(|w| w[1] % w[0] == 0));
        assert_eq!(g.invariants().iter().product::<u64>().max(1), g.class_number());
        for i in 0..table.len() {
            assert_eq!(table[i][g.inverse(i)], g.identity());
        }
    }
}

#[test]
fn genus_identity_holds() {
    for d in negative_fundamental_discriminants(5000) {
        let r = genus_check(d).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn batched_groups_agree_with_single_ones() {
    let all = class_groups_up_to(20_000).unwrap();
    let discs = negative_fundamental_discriminants(20_000);
    assert_eq!(all.len(), discs.len());
    for (g, &d) in all.iter().zip(&discs).step_by(37) {
        assert_eq!(g, &class_group(d).unwrap());
    }
}

fn fundamental() -> impl Strategy<Value = i64> {
    (3i64..200_000).prop_map(|n| -n).prop_filter("fundamental", |&d| is_fundamental(d))
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_invariant(d in fundamental(), i in 0usize..1000, m in prop::collection::vec(-3i64..=3, 6)) {
        let forms = reduced_forms(d);
        let f = forms[i % forms.len()];
        prop_assert!(f.is_reduced());
        prop_assert_eq!(f.reduce().unwrap(), f);
        // apply an SL_2(Z) change of variables built from S and T^k
        let mut g = f;
        for &k in &m {
            g = QuadForm::new(g.a, g.b + 2 * k * g.a, k * k * g.a + k * g.b + g.c);
            g = QuadForm::new(g.c, -g.b, g.a);
        }
        prop_assert_eq!(g.discriminant(), d);
        let r = g.reduce().unwrap();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r, f);
        prop_assert_eq!(r.reduce().unwrap(), r);
    }

    #[test]
    fn composition_respects_classes(d in fundamental(), i in 0usize..1000, j in 0usize..1000) {
        let forms = reduced_forms(d);
        let (f, g) = (forms[i % forms.len()], forms[j % forms.len()]);
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.discriminant(), d);
        prop_assert!(fg.is_reduced());
        prop_assert_eq!(fg, g.compose(&f).unwrap());
        // composing with a non-reduced representative lands in the same class
        let moved = QuadForm::new(f.c, -f.b, f.a);
        prop_assert_eq!(moved.compose(&g).unwrap(), fg);
        prop_assert_eq!(f.compose(&f.inverse()).unwrap(), QuadForm::principal(d));
    }
}
