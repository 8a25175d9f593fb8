//! Unimodular diagonalization shared by every ring.
//!
//! Over `Z` this is the Smith normal form; over a field the same sweep
//! produces a rank normal form with unit pivots. Row operations are mirrored
//! on `U`, `U^-1` and an optional companion block, column operations on `V`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::Mat;
use super::ring::{as_integer, Ring, Scalar};

trait Arith {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `a += q * b`
    fn add_mul(&self, a: &mut Self::E, q: &Self::E, b: &Self::E);
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Quotient so that `a - q*b` is a remainder smaller than `b`.
    fn quo(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn smaller(&self, a: &Self::E, b: &Self::E) -> bool;
    fn divides(&self, d: &Self::E, a: &Self::E) -> bool;
    /// Unit `u` with `u * a` canonical, plus `u^-1`.
    fn normalizer(&self, a: &Self::E) -> Option<(Self::E, Self::E)>;
    fn is_field(&self) -> bool;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, e: &Self::E) -> Scalar;
}

struct IntArith;

impl Arith for IntArith {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add_mul(&self, a: &mut BigInt, q: &BigInt, b: &BigInt) {
        *a += q * b;
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn quo(&self, a: &BigInt, b: &BigInt) -> BigInt {
        // rounded division keeps the remainder within |b|/2
        let (q, r) = a.div_mod_floor(b);
        let twice: BigInt = &r * 2;
        if twice.abs() > b.abs() {
            q + 1
        } else {
            q
        }
    }
    fn smaller(&self, a: &BigInt, b: &BigInt) -> bool {
        a.abs() < b.abs()
    }
    fn divides(&self, d: &BigInt, a: &BigInt) -> bool {
        a.is_multiple_of(d)
    }
    fn normalizer(&self, a: &BigInt) -> Option<(BigInt, BigInt)> {
        a.is_negative().then(|| (-BigInt::one(), -BigInt::one()))
    }
    fn is_field(&self) -> bool {
        false
    }
    fn lift(&self, s: &Scalar) -> BigInt {
        as_integer(s).clone()
    }
    fn lower(&self, e: &BigInt) -> Scalar {
        Scalar::from_integer(e.clone())
    }
}

struct RatArith;

impl Arith for RatArith {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn add_mul(&self, a: &mut Scalar, q: &Scalar, b: &Scalar) {
        *a += q * b;
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn quo(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a / b
    }
    fn smaller(&self, _a: &Scalar, _b: &Scalar) -> bool {
        false
    }
    fn divides(&self, _d: &Scalar, _a: &Scalar) -> bool {
        true
    }
    fn normalizer(&self, a: &Scalar) -> Option<(Scalar, Scalar)> {
        (!a.is_one()).then(|| (a.recip(), a.clone()))
    }
    fn is_field(&self) -> bool {
        true
    }
    fn lift(&self, s: &Scalar) -> Scalar {
        s.clone()
    }
    fn lower(&self, e: &Scalar) -> Scalar {
        e.clone()
    }
}

struct ModArith(u64);

impl ModArith {
    fn inv(&self, a: u64) -> u64 {
        // Fermat; p < 2^31 keeps products in u128 comfortably
        let mut result = 1u64;
        let mut base = a % self.0;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

impl Arith for ModArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add_mul(&self, a: &mut u64, q: &u64, b: &u64) {
        *a = ((*a as u128 + (*q as u128) * (*b as u128)) % self.0 as u128) as u64;
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn quo(&self, a: &u64, b: &u64) -> u64 {
        self.mul(a, &self.inv(*b))
    }
    fn smaller(&self, _a: &u64, _b: &u64) -> bool {
        false
    }
    fn divides(&self, _d: &u64, _a: &u64) -> bool {
        true
    }
    fn normalizer(&self, a: &u64) -> Option<(u64, u64)> {
        (*a != 1).then(|| (self.inv(*a), *a))
    }
    fn is_field(&self) -> bool {
        true
    }
    fn lift(&self, s: &Scalar) -> u64 {
        let v = as_integer(s).mod_floor(&BigInt::from(self.0));
        u64::try_from(v).expect("residue below p")
    }
    fn lower(&self, e: &u64) -> Scalar {
        Scalar::from_integer(BigInt::from(*e))
    }
}

/// Which transforms to accumulate during [`diagonalize`].
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
}

/// `U * m * V = D` with `D` diagonal: `pivots` are the nonzero diagonal
/// entries, canonical and divisibility-ordered. The companion block, when
/// given, has received every row operation (so it equals `U * companion`).
pub(crate) struct Diagonal {
    pub pivots: Vec<Scalar>,
    pub u: Option<Mat>,
    pub uinv: Option<Mat>,
    pub v: Option<Mat>,
    pub companion: Option<Mat>,
}

pub(crate) fn diagonalize(m: &Mat, track: Track, companion: Option<&Mat>) -> Diagonal {
    match m.ring() {
        Ring::Integers => run(&IntArith, m, track, companion),
        Ring::Rationals => run(&RatArith, m, track, companion),
        Ring::PrimeField(p) => run(&ModArith(p), m, track, companion),
    }
}

struct Sweep<'a, A: Arith> {
    ar: &'a A,
    rows: usize,
    cols: usize,
    w: Vec<Vec<A::E>>,
    u: Option<Vec<Vec<A::E>>>,
    uinv: Option<Vec<Vec<A::E>>>,
    v: Option<Vec<Vec<A::E>>>,
    comp: Option<Vec<Vec<A::E>>>,
}

fn lift_mat<A: Arith>(ar: &A, m: &Mat) -> Vec<Vec<A::E>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| ar.lift(x)).collect()).collect()
}

fn lower_mat<A: Arith>(ar: &A, ring: Ring, rows: usize, cols: usize, m: &[Vec<A::E>]) -> Mat {
    let data = m.iter().flat_map(|r| r.iter().map(|e| ar.lower(e))).collect();
    Mat::from_raw(ring, rows, cols, data)
}

fn ident<A: Arith>(ar: &A, n: usize) -> Vec<Vec<A::E>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ar.one() } else { ar.zero() }).collect())
        .collect()
}

fn row_add_mul<A: Arith>(ar: &A, m: &mut [Vec<A::E>], dst: usize, q: &A::E, src: usize) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !ar.is_zero(y) {
            ar.add_mul(x, q, y);
        }
    }
}

fn col_add_mul<A: Arith>(ar: &A, m: &mut [Vec<A::E>], dst: usize, q: &A::E, src: usize) {
    for row in m.iter_mut() {
        if !ar.is_zero(&row[src]) {
            let s = row[src].clone();
            ar.add_mul(&mut row[dst], q, &s);
        }
    }
}

impl<A: Arith> Sweep<'_, A> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.w.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(c) = &mut self.comp {
            c.swap(i, j);
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.w.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_dst += q * row_src
    fn row_op(&mut self, dst: usize, q: &A::E, src: usize) {
        let ar = self.ar;
        row_add_mul(ar, &mut self.w, dst, q, src);
        if let Some(u) = &mut self.u {
            row_add_mul(ar, u, dst, q, src);
        }
        if let Some(c) = &mut self.comp {
            row_add_mul(ar, c, dst, q, src);
        }
        if let Some(ui) = &mut self.uinv {
            // U' = E U with E = I + q e_dst e_src^T, so U'^-1 = U^-1 (I - q e_dst e_src^T)
            let nq = ar.neg(q);
            col_add_mul(ar, ui, src, &nq, dst);
        }
    }

    /// col_dst += q * col_src
    fn col_op(&mut self, dst: usize, q: &A::E, src: usize) {
        let ar = self.ar;
        col_add_mul(ar, &mut self.w, dst, q, src);
        if let Some(v) = &mut self.v {
            col_add_mul(ar, v, dst, q, src);
        }
    }

    fn scale_row(&mut self, i: usize, unit: &A::E, unit_inv: &A::E) {
        let ar = self.ar;
        for x in self.w[i].iter_mut() {
            *x = ar.mul(x, unit);
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = ar.mul(x, unit);
            }
        }
        if let Some(c) = &mut self.comp {
            for x in c[i].iter_mut() {
                *x = ar.mul(x, unit);
            }
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                row[i] = ar.mul(&row[i], unit_inv);
            }
        }
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.w[i][j];
                if self.ar.is_zero(x) {
                    continue;
                }
                match best {
                    None => {
                        best = Some((i, j));
                        if self.ar.is_field() {
                            return best;
                        }
                    }
                    Some((bi, bj)) if self.ar.smaller(x, &self.w[bi][bj]) => best = Some((i, j)),
                    _ => {}
                }
            }
        }
        best
    }

    fn process_pivot(&mut self, t: usize) {
        let ar = self.ar;
        loop {
            let mut dirty = false;
            for i in t + 1..self.rows {
                if !ar.is_zero(&self.w[i][t]) {
                    let q = ar.neg(&ar.quo(&self.w[i][t], &self.w[t][t]));
                    self.row_op(i, &q, t);
                    dirty |= !ar.is_zero(&self.w[i][t]);
                }
            }
            for j in t + 1..self.cols {
                if !ar.is_zero(&self.w[t][j]) {
                    let q = ar.neg(&ar.quo(&self.w[t][j], &self.w[t][t]));
                    self.col_op(j, &q, t);
                    dirty |= !ar.is_zero(&self.w[t][j]);
                }
            }
            if dirty {
                // move the smallest leftover in row/column t onto the pivot
                let mut best: Option<(usize, bool)> = None;
                let mut best_val = self.w[t][t].clone();
                for i in t + 1..self.rows {
                    let x = &self.w[i][t];
                    if !ar.is_zero(x) && ar.smaller(x, &best_val) {
                        best = Some((i, true));
                        best_val = x.clone();
                    }
                }
                for j in t + 1..self.cols {
                    let x = &self.w[t][j];
                    if !ar.is_zero(x) && ar.smaller(x, &best_val) {
                        best = Some((j, false));
                        best_val = x.clone();
                    }
                }
                match best {
                    Some((i, true)) => self.swap_rows(t, i),
                    Some((j, false)) => self.swap_cols(t, j),
                    None => unreachable!("nonzero remainder is always smaller than the pivot"),
                }
                continue;
            }
            if !ar.is_field() {
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !ar.divides(&self.w[t][t], &self.w[i][j]))
                });
                if let Some(i) = bad {
                    let one = ar.one();
                    self.row_op(t, &one, i);
                    continue;
                }
            }
            break;
        }
        if let Some((unit, unit_inv)) = ar.normalizer(&self.w[t][t]) {
            self.scale_row(t, &unit, &unit_inv);
        }
    }
}

fn run<A: Arith>(ar: &A, m: &Mat, track: Track, companion: Option<&Mat>) -> Diagonal {
    let (rows, cols) = m.shape();
    let ring = m.ring();
    let mut sw = Sweep {
        ar,
        rows,
        cols,
        w: lift_mat(ar, m),
        u: track.u.then(|| ident(ar, rows)),
        uinv: track.uinv.then(|| ident(ar, rows)),
        v: track.v.then(|| ident(ar, cols)),
        comp: companion.map(|c| lift_mat(ar, c)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = sw.min_nonzero(t) else { break };
        sw.swap_rows(t, pi);
        sw.swap_cols(t, pj);
        sw.process_pivot(t);
        t += 1;
    }
    let pivots = (0..t).map(|i| ar.lower(&sw.w[i][i])).collect();
    Diagonal {
        pivots,
        u: sw.u.as_ref().map(|u| lower_mat(ar, ring, rows, rows, u)),
        uinv: sw.uinv.as_ref().map(|u| lower_mat(ar, ring, rows, rows, u)),
        v: sw.v.as_ref().map(|v| lower_mat(ar, ring, cols, cols, v)),
        companion: sw
            .comp
            .as_ref()
            .map(|c| lower_mat(ar, ring, rows, companion.map_or(0, |m| m.cols()), c)),
    }
}
