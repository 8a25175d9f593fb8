use num_bigint::BigInt;

use super::{cone, span, ChainMap, Complex};
use crate::linalg::{self, as_integer, Mat, Ring};

/// `Z^free_rank ⊕ ⊕ Z/t` for the listed torsion factors `t₁ | t₂ | …`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// `ker diff(n) / im diff(n - 1)`.
pub fn homology(a: &Complex, n: i32) -> HomologyGroup {
    let ring = a.ring();
    let incoming = linalg::invariant_factors(&a.diff(n - 1));
    let outgoing = linalg::rank(&a.diff(n));
    let free_rank = a.rank(n) - outgoing - incoming.len();
    let torsion = match ring {
        Ring::Integers => incoming
            .iter()
            .filter(|p| !ring.is_unit(p))
            .map(|p| as_integer(p).clone())
            .collect(),
        _ => Vec::new(),
    };
    HomologyGroup { free_rank, torsion }
}

pub fn is_acyclic(a: &Complex) -> bool {
    (a.lo()..=a.hi()).all(|n| homology(a, n).is_zero())
}

/// Equal homology groups in every degree plus a surjective induced map.
///
/// A surjection between isomorphic finitely generated abelian groups is an
/// isomorphism, so this decides bijectivity without building the groups.
pub fn quasi_iso_by_homology(f: &ChainMap) -> bool {
    let (a, b) = (f.src(), f.dst());
    let (lo, hi) = span(&[a, b]);
    (lo..=hi).all(|n| {
        if homology(a, n) != homology(b, n) {
            return false;
        }
        let ka = linalg::kernel_basis(&a.diff(n));
        let kb = linalg::kernel_basis(&b.diff(n));
        if kb.cols() == 0 {
            return true;
        }
        let image = &*f.comp(n) * &ka;
        let m = linalg::solve(&kb, &image)
            .expect("shapes agree")
            .expect("cycles map to cycles");
        let r = linalg::solve(&kb, &b.diff(n - 1))
            .expect("shapes agree")
            .expect("boundaries are cycles");
        linalg::is_split_epi(&Mat::hstack(&[&m, &r]))
    })
}

pub fn quasi_iso_by_cone(f: &ChainMap) -> bool {
    is_acyclic(&cone(f))
}

/// Decided both by homology and by acyclicity of the cone.
///
/// # Panics
///
/// If the two methods disagree, which would be a bug in this crate.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    let by_homology = quasi_iso_by_homology(f);
    let by_cone = quasi_iso_by_cone(f);
    assert_eq!(
        by_homology, by_cone,
        "quasi-isomorphism tests disagree (homology: {by_homology}, cone: {by_cone})"
    );
    by_cone
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cylinder;

    const Z: Ring = Ring::Integers;

    fn times_two() -> Complex {
        Complex::two_term(0, Mat::lit(Z, &[&[2]]))
    }

    #[test]
    fn homology_examples() {
        let h = homology(&Complex::unit(Z), 0);
        assert_eq!(h, HomologyGroup { free_rank: 1, torsion: vec![] });

        let p = times_two();
        assert!(homology(&p, 0).is_zero());
        assert_eq!(homology(&p, 1), HomologyGroup { free_rank: 0, torsion: vec![BigInt::from(2)] });

        let c = Complex::two_term(0, Mat::lit(Z, &[&[1]]));
        assert!(is_acyclic(&c));
    }

    #[test]
    fn homology_over_fields_has_no_torsion() {
        let q = Complex::two_term(0, Mat::lit(Ring::Rationals, &[&[2]]));
        assert!(is_acyclic(&q));
        let f2 = Complex::two_term(0, Mat::lit(Ring::PrimeField(2), &[&[0]]));
        assert_eq!(homology(&f2, 1).free_rank, 1);
    }

    #[test]
    fn quasi_iso_examples() {
        let p = times_two();
        assert!(is_quasi_iso(&ChainMap::identity(&p)));
        assert!(!is_quasi_iso(&ChainMap::zero(&Complex::zero(Z), &p)));
        let two = ChainMap::identity(&p).scale(&Z.from_int(3));
        let cyl = cylinder(&two);
        assert!(is_quasi_iso(&cyl.retraction));
    }

    #[test]
    fn same_homology_but_not_iso() {
        // multiplication by 2 on Z/2 is zero though both sides are Z/2
        let p = times_two();
        let f = ChainMap::identity(&p).scale(&Z.from_int(2));
        assert!(!quasi_iso_by_homology(&f));
        assert!(!quasi_iso_by_cone(&f));
        // and by 3 is an isomorphism of Z/2
        let g = ChainMap::identity(&p).scale(&Z.from_int(3));
        assert!(is_quasi_iso(&g));
    }
}
