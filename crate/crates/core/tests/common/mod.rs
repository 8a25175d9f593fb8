//! Test-only oracles that avoid the crate's elimination routines: determinants
//! by Bareiss, invariant factors from gcds of minors, homology from ranks and
//! determinantal divisors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use dercat_core::complex::Complex;
use dercat_core::gen::{Gen, Sizes};
use dercat_core::{Mat, Ring};

pub fn rings() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::Integers),
        Just(Ring::Rationals),
        Just(Ring::prime_field(2).unwrap()),
        Just(Ring::prime_field(5).unwrap()),
    ]
}

pub fn gen(seed: u64, ring: Ring) -> Gen {
    Gen::new(seed, ring, Sizes::default())
}

pub fn small_gen(seed: u64, ring: Ring) -> Gen {
    Gen::new(seed, ring, Sizes { max_rank: 2, lo: 0, hi: 2 })
}

/// Rows scaled to integers; ranks and, over `Z`, entries are unchanged.
pub fn integer_rows(m: &Mat) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn minors(a: &[Vec<BigInt>], cols: usize, k: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    for rs in subsets(a.len(), k) {
        for cs in subsets(cols, k) {
            out.push(det(rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect()));
        }
    }
    out
}

/// `d_k / d_{k-1}` where `d_k` is the gcd of all `k × k` minors.
pub fn determinantal_factors(m: &Mat) -> Vec<BigInt> {
    let a = integer_rows(m);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let g = minors(&a, m.cols(), k).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Row reduction over `Q` or `F_p` on integer data.
pub fn rank(m: &Mat) -> usize {
    let mut a = integer_rows(m);
    let p = match m.ring() {
        Ring::PrimeField(p) => Some(BigInt::from(p)),
        _ => None,
    };
    let reduce = |x: BigInt| match &p {
        Some(p) => x.mod_floor(p),
        None => x,
    };
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = reduce(x.clone());
        }
    }
    let mut r = 0;
    for c in 0..m.cols() {
        let Some(i) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(i, r);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (top, here) = (a[r][c].clone(), a[i][c].clone());
            for j in 0..m.cols() {
                a[i][j] = reduce(&a[i][j] * &top - &a[r][j] * &here);
            }
        }
        r += 1;
    }
    r
}

/// `(free rank, torsion)` of `H^n`; over `Z` the torsion of `H^n` is the
/// torsion of `Z^{r_n} / im d^{n-1}` because cycles form a saturated lattice.
pub fn homology_oracle(c: &Complex, n: i32) -> (usize, Vec<BigInt>) {
    let (out, inn) = (c.diff(n), c.diff(n - 1));
    let free = c.rank(n) - rank(&out) - rank(&inn);
    let torsion = if c.ring() == Ring::Integers {
        determinantal_factors(&inn).into_iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect()
    } else {
        vec![]
    };
    (free, torsion)
}

pub fn max_dim(c: &Complex) -> usize {
    c.ranks().iter().copied().max().unwrap_or(0)
}
