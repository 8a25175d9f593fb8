mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use common::{det, determinantal_factors, integer_rows, rank};
use dercat_core::linalg::{cokernel_basis, inverse, is_admissible_mono, smith_normal_form, solve};
use dercat_core::{Mat, Ring};

fn int_matrix(max: usize, entries: i64) -> impl Strategy<Value = Mat> {
    (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
        vec(-entries..=entries, r * c).prop_map(move |e| Mat::from_i64(Ring::Integers, r, c, &e))
    })
}

fn recast(m: &Mat, ring: Ring) -> Mat {
    let e: Vec<i64> = m.entries().iter().map(|x| i64::try_from(x.numer()).unwrap()).collect();
    Mat::from_i64(ring, m.rows(), m.cols(), &e)
}

#[test]
fn snf_of_two_four_six_eight_matches_minors() {
    let m = Mat::lit(Ring::Integers, &[&[2, 4], &[6, 8]]);
    // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4
    assert_eq!(determinantal_factors(&m), vec![BigInt::from(2), BigInt::from(4)]);
    let s = smith_normal_form(&m).unwrap();
    assert_eq!(s.d, Mat::lit(Ring::Integers, &[&[2, 0], &[0, 4]]));
}

#[test]
fn cokernel_of_diagonal_completes_to_unimodular() {
    let m = Mat::lit(Ring::Integers, &[&[1], &[1]]);
    let c = cokernel_basis(&m).unwrap();
    assert_eq!(c.rank, 1);
    assert!((&c.proj * &m).is_zero());
    // any valid choice is ±[-1, 1]
    let p: Vec<i64> = c.proj.entries().iter().map(|x| i64::try_from(x.numer()).unwrap()).collect();
    assert!(p == vec![-1, 1] || p == vec![1, -1], "{p:?}");
    let full = Mat::hstack(&[&m, &c.section]);
    assert!(det(integer_rows(&full)).abs().is_one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_normal_form(m in int_matrix(6, 9)) {
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(&(&(&s.u * &m) * &s.v), &s.d);
        prop_assert!(det(integer_rows(&s.u)).abs().is_one());
        prop_assert!(det(integer_rows(&s.v)).abs().is_one());
        let mut prev: Option<BigInt> = None;
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                let x = s.d.get(i, j);
                prop_assert!(x.is_integer());
                if i != j {
                    prop_assert!(x.is_zero());
                }
            }
            if i < s.d.cols() {
                let x = s.d.get(i, i).to_integer();
                prop_assert!(!x.is_negative());
                if let Some(p) = &prev {
                    // zero is divisible by everything and must come last
                    let divides = if p.is_zero() { x.is_zero() } else { (&x % p).is_zero() };
                    prop_assert!(divides);
                }
                prev = Some(x);
            }
        }
    }

    #[test]
    fn invariant_factors_match_determinantal_divisors(m in int_matrix(4, 9)) {
        let s = smith_normal_form(&m).unwrap();
        let got: Vec<BigInt> = s.invariant_factors().iter().map(|x| x.to_integer()).collect();
        let want: Vec<BigInt> = determinantal_factors(&m).into_iter().map(|x| x.abs()).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn solutions_solve_and_integrality_is_consistent(m in int_matrix(5, 9), seed in 0i64..1000) {
        let b = Mat::from_i64(Ring::Integers, m.rows(), 1, &(0..m.rows() as i64).map(|i| (seed * (i + 3)) % 19 - 9).collect::<Vec<_>>());
        let over_z = solve(&m, &b).unwrap();
        let over_q = solve(&recast(&m, Ring::Rationals), &recast(&b, Ring::Rationals)).unwrap();
        if let Some(x) = &over_z {
            prop_assert_eq!(&(&m * x), &b);
            prop_assert!(over_q.is_some());
        }
        if let Some(x) = &over_q {
            prop_assert_eq!(&(&recast(&m, Ring::Rationals) * x), &recast(&b, Ring::Rationals));
        }
        if over_z.is_none() {
            if let Some(x) = &over_q {
                // a rational solution exists; the integral obstruction means no
                // solution differs from it by a kernel vector into Z^n
                if rank(&recast(&m, Ring::Rationals)) == m.cols() {
                    prop_assert!(x.entries().iter().any(|e| !e.is_integer()));
                }
            }
        }
    }

    #[test]
    fn solve_is_exact_over_prime_fields(m in int_matrix(5, 9), p in prop_oneof![Just(2u64), Just(3), Just(7)]) {
        let f = Ring::prime_field(p).unwrap();
        let mf = recast(&m, f);
        let b = Mat::from_i64(f, m.rows(), 1, &vec![1; m.rows()]);
        match solve(&mf, &b).unwrap() {
            Some(x) => prop_assert_eq!(&(&mf * &x), &b),
            None => prop_assert!(rank(&mf) < m.rows()),
        }
    }

    #[test]
    fn admissible_monos_complete_to_invertibles(m in int_matrix(5, 2), ring in common::rings()) {
        let m = recast(&m, ring);
        if is_admissible_mono(&m) {
            let c = cokernel_basis(&m).unwrap();
            prop_assert_eq!(c.rank, m.rows() - m.cols());
            prop_assert!((&c.proj * &m).is_zero());
            prop_assert!((&c.proj * &c.section).is_identity());
            let full = Mat::hstack(&[&m, &c.section]);
            prop_assert!(inverse(&full).is_some());
            prop_assert_eq!(rank(&full), full.rows());
        } else {
            prop_assert!(cokernel_basis(&m).is_err());
            if ring.is_field() {
                prop_assert!(rank(&m) < m.cols());
            }
        }
    }
}
