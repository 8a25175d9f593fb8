mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::{rings, small_gen};
use dercat_core::complex::{homotopy_inverse, is_quasi_iso, ChainMap, Complex};
use dercat_core::diagram::{
    diagram_to_filtration, is_cocartesian, is_componentwise_quasi_iso, pushout_comparison, pushout_complete,
    split_mono_violation, DiagComplex, DiagMap, Poset,
};
use dercat_core::gen::Gen;
use dercat_core::{Mat, Ring};

/// `D(v) ⊕ E(v)` with edges `e ⊕ 0`, and the projection back to `D`.
fn pad(d: &DiagComplex, extras: &[Complex]) -> (DiagComplex, DiagMap) {
    let at: Vec<Complex> = d.complexes().iter().zip(extras).map(|(a, e)| Complex::direct_sum(&[a, e]).unwrap()).collect();
    let along: BTreeMap<(usize, usize), ChainMap> = d
        .edges()
        .iter()
        .map(|(&(a, b), f)| {
            let (ea, eb) = (&extras[a], &extras[b]);
            let g = ChainMap::from_fn(&at[a], &at[b], |n| {
                Mat::block_diag(&[&f.comp(n), &Mat::zeros(f.ring(), eb.rank(n), ea.rank(n))])
            })
            .unwrap();
            ((a, b), g)
        })
        .collect();
    let padded = DiagComplex::new(d.shape().clone(), at.clone(), along).unwrap();
    let comps = at
        .iter()
        .zip(d.complexes())
        .zip(extras)
        .map(|((big, small), e)| {
            ChainMap::from_fn(big, small, |n| {
                Mat::hstack(&[&Mat::identity(small.ring(), small.rank(n)), &Mat::zeros(small.ring(), small.rank(n), e.rank(n))])
            })
            .unwrap()
        })
        .collect();
    let proj = DiagMap::new(padded.clone(), d.clone(), comps).unwrap();
    (padded, proj)
}

fn contractibles(g: &mut Gen, n: usize) -> Vec<Complex> {
    (0..n).map(|_| g.contractible()).collect()
}

#[test]
fn componentwise_quasi_iso_examples() {
    let z = Ring::Integers;
    let p = Complex::two_term(0, Mat::lit(z, &[&[2]]));
    let mut along = BTreeMap::new();
    along.insert((0, 1), ChainMap::identity(&p));
    let d = DiagComplex::new(Poset::delta(1), vec![p.clone(), p.clone()], along).unwrap();
    assert!(is_componentwise_quasi_iso(&DiagMap::identity(&d)));
    // one vertex replaced by the zero complex
    let zero = Complex::zero(z);
    let mut along = BTreeMap::new();
    along.insert((0, 1), ChainMap::zero(&zero, &p));
    let smaller = DiagComplex::new(Poset::delta(1), vec![zero.clone(), p.clone()], along).unwrap();
    let m = DiagMap::new(smaller, d, vec![ChainMap::zero(&zero, &p), ChainMap::identity(&p)]).unwrap();
    assert!(!is_componentwise_quasi_iso(&m));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cocartesian_is_invariant_under_contractible_padding(seed: u64, ring in rings()) {
        let mut g = small_gen(seed, ring);
        let square = g.cocartesian_square();
        prop_assert!(is_cocartesian(&square).unwrap());
        // extra homology at the corner breaks the pushout property
        let mut extra = vec![Complex::zero(ring); 3];
        extra.push(Complex::concentrated(ring, 0, 1));
        let (broken, _) = pad(&square, &extra);
        prop_assert!(!is_cocartesian(&broken).unwrap());
        for d in [square, broken] {
            let extras = contractibles(&mut g, 4);
            let (padded, proj) = pad(&d, &extras);
            prop_assert!(is_componentwise_quasi_iso(&proj));
            for (c, e) in proj.components().iter().zip(&extras) {
                prop_assert!(e.check().is_ok());
                prop_assert!(homotopy_inverse(c).is_ok());
            }
            prop_assert_eq!(is_cocartesian(&padded).unwrap(), is_cocartesian(&d).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn completing_a_corner_restricts_back(seed: u64, ring in rings()) {
        let corner = small_gen(seed, ring).corner();
        let square = pushout_complete(&corner).unwrap();
        prop_assert_eq!(&square.restrict(&Poset::corner()).unwrap(), &corner);
        prop_assert!(is_cocartesian(&square).unwrap());
    }

    #[test]
    fn recompleting_a_cocartesian_square_recovers_the_corner(seed: u64, ring in rings()) {
        let square = small_gen(seed, ring).cocartesian_square();
        let comparison = pushout_comparison(&square).unwrap();
        prop_assert!(is_quasi_iso(&comparison));
    }

    #[test]
    fn delta_diagrams_become_filtrations(seed: u64, ring in rings()) {
        let d = small_gen(seed, ring).delta_diagram(3);
        let f = diagram_to_filtration(&d).unwrap();
        prop_assert!(split_mono_violation(&f.filtration).is_none());
        prop_assert_eq!(f.comparison.dst(), &d);
        for q in f.comparison.components() {
            prop_assert!(is_quasi_iso(q));
            let h = homotopy_inverse(q).unwrap();
            prop_assert!(h.k1.witnesses(&h.inv.compose(q).unwrap(), &ChainMap::identity(q.src())));
            prop_assert!(h.k2.witnesses(&q.compose(&h.inv).unwrap(), &ChainMap::identity(q.dst())));
        }
    }
}
