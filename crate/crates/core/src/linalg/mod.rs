//! Exact linear algebra over `Z`, `Q` and `F_p`.

mod elim;
mod mat;
mod ring;

pub use mat::Mat;
pub use ring::{Ring, Scalar};

pub(crate) use ring::{as_integer, scalar_to_i64};

use elim::{diagonalize, Track};
use num_traits::Zero;

use crate::{Error, Result};

/// `u * m * v == d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<Scalar> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &Mat) -> Result<Snf> {
    if m.ring() != Ring::Integers {
        return Err(Error::RingMismatch(Ring::Integers, m.ring()));
    }
    let diag = diagonalize(m, Track { u: true, v: true, ..Track::default() }, None);
    let mut d = Mat::zeros(m.ring(), m.rows(), m.cols());
    for (i, p) in diag.pivots.iter().enumerate() {
        d.set(i, i, p.clone());
    }
    Ok(Snf { u: diag.u.expect("tracked"), d, v: diag.v.expect("tracked") })
}

/// Canonical nonzero diagonal of the normal form: invariant factors over `Z`,
/// all ones over a field.
pub fn invariant_factors(m: &Mat) -> Vec<Scalar> {
    diagonalize(m, Track::default(), None).pivots
}

pub fn rank(m: &Mat) -> usize {
    diagonalize(m, Track::default(), None).pivots.len()
}

/// Solves `m * x = b` over the ring of `m`; `None` when no solution exists.
pub fn solve(m: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if m.ring() != b.ring() {
        return Err(Error::RingMismatch(m.ring(), b.ring()));
    }
    if m.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: matrix has {} rows, right-hand side {}",
            m.rows(),
            b.rows()
        )));
    }
    let ring = m.ring();
    let diag = diagonalize(m, Track { v: true, ..Track::default() }, Some(b));
    let ub = diag.companion.expect("companion tracked");
    let r = diag.pivots.len();
    for i in r..m.rows() {
        if ub.row(i).iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
    }
    let mut y = Mat::zeros(ring, m.cols(), b.cols());
    for (i, p) in diag.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            let v = ub.get(i, j);
            if v.is_zero() {
                continue;
            }
            let q = match exact_div(ring, v, p) {
                Some(q) => q,
                None => return Ok(None),
            };
            y.set(i, j, q);
        }
    }
    let v = diag.v.expect("tracked");
    Ok(Some(&v * &y))
}

fn exact_div(ring: Ring, a: &Scalar, b: &Scalar) -> Option<Scalar> {
    match ring {
        Ring::Integers => {
            let q = a / b;
            q.is_integer().then_some(q)
        }
        _ => ring.inv(b).map(|bi| ring.mul(a, &bi)),
    }
}

/// Columns form a basis of `{x : m x = 0}` (a saturated lattice over `Z`).
pub fn kernel_basis(m: &Mat) -> Mat {
    let diag = diagonalize(m, Track { v: true, ..Track::default() }, None);
    let r = diag.pivots.len();
    let v = diag.v.expect("tracked");
    v.block(0, m.cols(), r, m.cols() - r)
}

/// Injective with free cokernel; over a field simply injective.
pub fn is_admissible_mono(m: &Mat) -> bool {
    let piv = invariant_factors(m);
    piv.len() == m.cols() && piv.iter().all(|p| m.ring().is_unit(p))
}

/// Surjective onto the free target; over `Z` this forces a splitting.
pub fn is_split_epi(m: &Mat) -> bool {
    let piv = invariant_factors(m);
    piv.len() == m.rows() && piv.iter().all(|p| m.ring().is_unit(p))
}

/// Two-sided inverse over the ring, if one exists.
pub fn inverse(m: &Mat) -> Option<Mat> {
    if m.rows() != m.cols() {
        return None;
    }
    solve(m, &Mat::identity(m.ring(), m.rows())).ok().flatten()
}

/// Presentation of `R^{rows} / im m`: the normal-form pivots and `U⁻¹`, whose
/// columns are generators of the quotient in the diagonal coordinates.
pub(crate) fn quotient_presentation(m: &Mat) -> (Vec<Scalar>, Mat) {
    let diag = diagonalize(m, Track { uinv: true, ..Track::default() }, None);
    (diag.pivots, diag.uinv.expect("tracked"))
}

/// Deterministic complement of an admissible monomorphism.
#[derive(Clone, Debug)]
pub struct Cokernel {
    /// Split surjection with `proj * m == 0`.
    pub proj: Mat,
    /// `proj * section == I` and `[m | section]` is invertible.
    pub section: Mat,
    pub rank: usize,
}

pub fn cokernel_basis(m: &Mat) -> Result<Cokernel> {
    let diag = diagonalize(m, Track { u: true, uinv: true, ..Track::default() }, None);
    let ring = m.ring();
    if diag.pivots.len() != m.cols() || !diag.pivots.iter().all(|p| ring.is_unit(p)) {
        return Err(Error::NotAdmissibleMono);
    }
    let c = m.cols();
    let rank = m.rows() - c;
    let u = diag.u.expect("tracked");
    let uinv = diag.uinv.expect("tracked");
    Ok(Cokernel {
        proj: u.block(c, rank, 0, m.rows()),
        section: uinv.block(0, m.rows(), c, rank),
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const Z: Ring = Ring::Integers;
    const Q: Ring = Ring::Rationals;

    fn int(v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    fn check_snf(m: &Mat) -> Snf {
        let snf = smith_normal_form(m).unwrap();
        assert_eq!(&(&snf.u * m) * &snf.v, snf.d);
        snf
    }

    #[test]
    fn snf_trivial_cases() {
        let snf = check_snf(&Mat::lit(Z, &[&[2]]));
        assert_eq!(snf.d, Mat::lit(Z, &[&[2]]));
        let snf = check_snf(&Mat::lit(Z, &[&[1, 0], &[0, 6]]));
        assert_eq!(snf.d, Mat::lit(Z, &[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn snf_of_two_four_six_eight() {
        // by hand: gcd of entries is 2, |det| = 8, so diag(2, 4)
        let snf = check_snf(&Mat::lit(Z, &[&[2, 4], &[6, 8]]));
        assert_eq!(snf.d, Mat::lit(Z, &[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn snf_rejects_fields() {
        assert!(matches!(
            smith_normal_form(&Mat::lit(Q, &[&[1]])),
            Err(Error::RingMismatch(..))
        ));
    }

    #[test]
    fn snf_handles_empty_and_negative() {
        let snf = check_snf(&Mat::zeros(Z, 0, 3));
        assert_eq!(snf.d.shape(), (0, 3));
        let snf = check_snf(&Mat::lit(Z, &[&[-3, 0], &[0, -2]]));
        assert_eq!(snf.invariant_factors(), vec![int(1), int(6)]);
    }

    #[test]
    fn solve_examples() {
        let x = solve(&Mat::lit(Z, &[&[2]]), &Mat::lit(Z, &[&[4]])).unwrap();
        assert_eq!(x, Some(Mat::lit(Z, &[&[2]])));
        assert_eq!(solve(&Mat::lit(Z, &[&[2]]), &Mat::lit(Z, &[&[3]])).unwrap(), None);
        let x = solve(&Mat::lit(Q, &[&[2]]), &Mat::lit(Q, &[&[3]])).unwrap().unwrap();
        assert_eq!(x.get(0, 0), &Scalar::new(3.into(), 2.into()));
        assert!(matches!(
            solve(&Mat::lit(Z, &[&[2]]), &Mat::zeros(Z, 2, 1)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn solve_over_prime_field() {
        let f5 = Ring::PrimeField(5);
        let m = Mat::lit(f5, &[&[2, 1], &[1, 4]]);
        let b = Mat::lit(f5, &[&[1], &[0]]);
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(&m * &x, b);
    }

    #[test]
    fn admissible_mono_examples() {
        assert!(is_admissible_mono(&Mat::lit(Z, &[&[1], &[0]])));
        assert!(!is_admissible_mono(&Mat::lit(Z, &[&[2]])));
        assert!(is_admissible_mono(&Mat::lit(Q, &[&[2]])));
        assert!(!is_admissible_mono(&Mat::lit(Q, &[&[0]])));
        assert!(is_admissible_mono(&Mat::zeros(Z, 3, 0)));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_basis(&Mat::lit(Z, &[&[1], &[0]])).unwrap();
        assert_eq!(c.proj, Mat::lit(Z, &[&[0, 1]]));
        assert_eq!(c.rank, 1);

        let c = cokernel_basis(&Mat::identity(Z, 2)).unwrap();
        assert_eq!(c.proj.shape(), (0, 2));
        assert_eq!(c.rank, 0);

        // complete (1,1)^T to [[1,0],[1,1]]; its inverse's second row is (-1, 1)
        let m = Mat::lit(Z, &[&[1], &[1]]);
        let c = cokernel_basis(&m).unwrap();
        assert_eq!(c.rank, 1);
        assert!(c.proj == Mat::lit(Z, &[&[-1, 1]]) || c.proj == Mat::lit(Z, &[&[1, -1]]));
        assert!((&c.proj * &m).is_zero());
        assert!((&c.proj * &c.section).is_identity());
        assert!(inverse(&Mat::hstack(&[&m, &c.section])).is_some());

        assert!(matches!(cokernel_basis(&Mat::lit(Z, &[&[2]])), Err(Error::NotAdmissibleMono)));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Mat::lit(Z, &[&[2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.shape(), (3, 2));
        assert!((&m * &k).is_zero());
        assert_eq!(rank(&m), 1);
    }
}
