mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::{gen, rings, small_gen};
use dercat_core::complex::{cone, is_quasi_iso, shift, ChainMap, Complex, Homotopy};
use dercat_core::derived::{
    derived_hom, roof_compose, roof_eq, roof_normalize, strictify_square, HomotopySquare, Roof,
};
use dercat_core::{Mat, Ring};

const Z: Ring = Ring::Integers;

/// Chain endomorphisms of `Z -2-> Z` are pairs `(u, v)` with `2u = 2v`, and
/// null-homotopic ones are `(2k, 2k)`; count the classes of a box of them.
fn brute_force_endomorphism_classes() -> usize {
    let mut classes = BTreeSet::new();
    for u in -6i64..=6 {
        for v in -6i64..=6 {
            if 2 * u == 2 * v {
                classes.insert(u.rem_euclid(2));
            }
        }
    }
    classes.len()
}

/// Maps `P -> P[1]` have a single component `P¹ -> P[1]⁰ = P¹`, with no
/// cocycle condition, and null-homotopic ones are `2 a + 2 b`.
fn brute_force_shift_classes() -> usize {
    (-6i64..=6).map(|w| w.rem_euclid(2)).collect::<BTreeSet<_>>().len()
}

fn strict_roof(f: ChainMap) -> Roof {
    Roof::from_map(f)
}

#[test]
fn torsion_complex_hom_groups_match_counts() {
    let p = Complex::two_term(0, Mat::lit(Z, &[&[2]]));
    let end = derived_hom(&p, &p).unwrap();
    assert_eq!((end.free_rank, end.torsion.len()), (0, 1));
    assert_eq!(end.torsion[0], brute_force_endomorphism_classes().into());
    let ext = derived_hom(&p, &shift(&p, 1)).unwrap();
    assert_eq!((ext.free_rank, ext.torsion.len()), (0, 1));
    assert_eq!(ext.torsion[0], brute_force_shift_classes().into());
    let unit = Complex::unit(Z);
    let h = derived_hom(&unit, &unit).unwrap();
    assert_eq!((h.free_rank, h.torsion.len()), (1, 0));
}

#[test]
fn identity_and_zero_roofs_differ_on_torsion() {
    let p = Complex::two_term(0, Mat::lit(Z, &[&[2]]));
    assert!(!roof_eq(&strict_roof(ChainMap::identity(&p)), &strict_roof(ChainMap::zero(&p, &p))));
}

#[test]
fn strictifies_a_square_over_a_contractible_cone() {
    let x0 = Complex::unit(Z);
    let y = cone(&ChainMap::identity(&x0));
    let top = ChainMap::from_fn(&x0, &y, |_| Mat::lit(Z, &[&[1]])).unwrap();
    let id = ChainMap::identity(&y);
    let m = Homotopy::new(x0.clone(), y.clone(), BTreeMap::from([(0, Mat::lit(Z, &[&[1]]))])).unwrap();
    let other_left = top.add(&m.boundary()).unwrap();
    assert!(other_left.is_zero());
    let sq = HomotopySquare { top: top.clone(), right: id.clone(), bottom: id, left: top.clone(), other_left, m };
    let st = strictify_square(&sq).unwrap();
    assert_eq!(st.l.compose(&st.top).unwrap(), top);
    assert_eq!(st.right_left.compose(&st.top).unwrap(), sq.bottom.compose(&sq.left).unwrap());
    assert_eq!(st.right_other.compose(&st.top).unwrap(), sq.bottom.compose(&sq.other_left).unwrap());
    assert!(st.homotopy.witnesses(&st.top, &sq.bottom, (&sq.other_left, &st.right_other), (&sq.left, &st.right_left)));
    assert!(is_quasi_iso(&st.l));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn roof_equality_is_an_equivalence(seed: u64, ring in rings()) {
        let mut g = small_gen(seed, ring);
        let (x, y) = (g.complex(), g.complex());
        let a = g.roof_between(&x, &y);
        let b = g.roof_between(&x, &y);
        prop_assert!(roof_eq(&a, &a));
        prop_assert_eq!(roof_eq(&a, &b), roof_eq(&b, &a));

        // a homotopic numerator and a refined apex give roofs equal to `a`
        let k = g.homotopy(a.apex(), &y);
        let moved = Roof::new(a.s().clone(), a.f().add(&k.boundary()).unwrap()).unwrap();
        let e = g.contractible();
        let refine = g.collapse(a.apex(), &e);
        let refined = Roof::new(a.s().compose(&refine).unwrap(), a.f().compose(&refine).unwrap()).unwrap();
        prop_assert!(roof_eq(&a, &moved));
        prop_assert!(roof_eq(&moved, &refined));
        prop_assert!(roof_eq(&a, &refined));
        if roof_eq(&a, &b) {
            prop_assert!(roof_eq(&moved, &b));
        }
    }

    #[test]
    fn roof_composition_is_associative(seed: u64, ring in rings()) {
        let mut g = small_gen(seed, ring);
        let (w, x, y, z) = (g.complex(), g.complex(), g.complex(), g.complex());
        let (r1, r2, r3) = (g.roof_between(&w, &x), g.roof_between(&x, &y), g.roof_between(&y, &z));
        let left = roof_compose(&r3, &roof_compose(&r2, &r1).unwrap()).unwrap();
        let right = roof_compose(&roof_compose(&r3, &r2).unwrap(), &r1).unwrap();
        prop_assert!(is_quasi_iso(left.s()) && is_quasi_iso(right.s()));
        prop_assert!(roof_eq(&left, &right));
    }

    #[test]
    fn normalized_roofs_are_equal_to_their_inputs(seed: u64, ring in rings()) {
        let r = gen(seed, ring).roof();
        let g = roof_normalize(&r).unwrap();
        prop_assert!(roof_eq(&r, &Roof::from_map(g)));
    }

    #[test]
    fn strictified_squares_commute_exactly(seed: u64, ring in rings()) {
        let sq = small_gen(seed, ring).homotopy_square();
        let st = strictify_square(&sq).unwrap();
        prop_assert!(st.apex.check().is_ok());
        prop_assert_eq!(&st.l.compose(&st.top).unwrap(), &sq.top);
        prop_assert_eq!(st.right_left.compose(&st.top).unwrap(), sq.bottom.compose(&sq.left).unwrap());
        prop_assert_eq!(st.right_other.compose(&st.top).unwrap(), sq.bottom.compose(&sq.other_left).unwrap());
        prop_assert!(st.homotopy.witnesses(&st.top, &sq.bottom, (&sq.other_left, &st.right_other), (&sq.left, &st.right_left)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn derived_hom_is_invariant_under_quasi_isos(seed: u64, ring in rings()) {
        let mut g = small_gen(seed, ring);
        let (x, y) = (g.complex(), g.complex());
        let q = g.quasi_iso_from(&x);
        let shape = |h: dercat_core::derived::DerivedHomGroup| (h.free_rank, h.torsion);
        let base = shape(derived_hom(&x, &y).unwrap());
        prop_assert_eq!(&shape(derived_hom(q.dst(), &y).unwrap()), &base);
        prop_assert_eq!(shape(derived_hom(&y, &x).unwrap()), shape(derived_hom(&y, q.dst()).unwrap()));
    }
}
