//! Homotopy equations as single stacked linear systems.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{is_quasi_iso, span, ChainMap, Complex, Homotopy};
use crate::linalg::{self, Mat, Ring, Scalar};
use crate::{Error, Result};

/// A linear system in block unknowns `X_u` whose equations are sums of terms
/// `L · X_u · R = rhs`, flattened row-major into one matrix.
pub(crate) struct System {
    ring: Ring,
    unknowns: Vec<(usize, usize)>,
    equations: Vec<(usize, usize)>,
    terms: Vec<(usize, usize, Option<Mat>, Option<Mat>)>,
    rhs: Vec<Option<Mat>>,
}

impl System {
    pub(crate) fn new(ring: Ring) -> System {
        System { ring, unknowns: Vec::new(), equations: Vec::new(), terms: Vec::new(), rhs: Vec::new() }
    }

    pub(crate) fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.unknowns.push((rows, cols));
        self.unknowns.len() - 1
    }

    pub(crate) fn equation(&mut self, rows: usize, cols: usize) -> usize {
        self.equations.push((rows, cols));
        self.rhs.push(None);
        self.equations.len() - 1
    }

    /// Adds `left · X_u · right` to equation `eq`; `None` stands for an identity.
    pub(crate) fn term(&mut self, eq: usize, u: usize, left: Option<Mat>, right: Option<Mat>) {
        let (er, ec) = self.equations[eq];
        let (ur, uc) = self.unknowns[u];
        let l_shape = left.as_ref().map_or((ur, ur), |m| m.shape());
        let r_shape = right.as_ref().map_or((uc, uc), |m| m.shape());
        debug_assert_eq!(l_shape, (er, ur), "left factor shape");
        debug_assert_eq!(r_shape, (uc, ec), "right factor shape");
        if left.as_ref().is_some_and(|m| m.is_zero()) || right.as_ref().is_some_and(|m| m.is_zero()) {
            return;
        }
        self.terms.push((eq, u, left, right));
    }

    pub(crate) fn set_rhs(&mut self, eq: usize, rhs: Mat) {
        debug_assert_eq!(rhs.shape(), self.equations[eq]);
        self.rhs[eq] = Some(rhs);
    }

    fn offsets(blocks: &[(usize, usize)]) -> Vec<usize> {
        let mut out = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        out.push(0);
        for (r, c) in blocks {
            acc += r * c;
            out.push(acc);
        }
        out
    }

    /// Coefficient matrix acting on the flattened unknowns.
    pub(crate) fn matrix(&self) -> Mat {
        let row_off = Self::offsets(&self.equations);
        let col_off = Self::offsets(&self.unknowns);
        let mut data = vec![Scalar::zero(); row_off.last().unwrap() * col_off.last().unwrap()];
        let width = *col_off.last().unwrap();
        for (eq, u, left, right) in &self.terms {
            let (er, ec) = self.equations[*eq];
            let (ur, uc) = self.unknowns[*u];
            let l_entry = |a: usize, i: usize| -> Option<Scalar> {
                match left {
                    Some(m) => {
                        let v = m.get(a, i);
                        (!v.is_zero()).then(|| v.clone())
                    }
                    None => (a == i).then(|| self.ring.one()),
                }
            };
            let r_entry = |j: usize, b: usize| -> Option<Scalar> {
                match right {
                    Some(m) => {
                        let v = m.get(j, b);
                        (!v.is_zero()).then(|| v.clone())
                    }
                    None => (j == b).then(|| self.ring.one()),
                }
            };
            // (L X R)[a][b] = Σ L[a][i] X[i][j] R[j][b]
            for a in 0..er {
                for i in 0..ur {
                    let Some(la) = l_entry(a, i) else { continue };
                    for j in 0..uc {
                        for b in 0..ec {
                            let Some(rb) = r_entry(j, b) else { continue };
                            let row = row_off[*eq] + a * ec + b;
                            let col = col_off[*u] + i * uc + j;
                            let cell = &mut data[row * width + col];
                            *cell = self.ring.add(cell, &self.ring.mul(&la, &rb));
                        }
                    }
                }
            }
        }
        Mat::from_raw(self.ring, *row_off.last().unwrap(), width, data)
    }

    pub(crate) fn rhs_vector(&self) -> Mat {
        let row_off = Self::offsets(&self.equations);
        let mut out = Mat::zeros(self.ring, *row_off.last().unwrap(), 1);
        for (eq, rhs) in self.rhs.iter().enumerate() {
            let Some(m) = rhs else { continue };
            let (_, ec) = self.equations[eq];
            for a in 0..m.rows() {
                for b in 0..m.cols() {
                    out.set(row_off[eq] + a * ec + b, 0, m.get(a, b).clone());
                }
            }
        }
        out
    }

    /// Splits a flattened solution column back into the unknown blocks.
    pub(crate) fn unpack(&self, x: &Mat, col: usize) -> Vec<Mat> {
        let off = Self::offsets(&self.unknowns);
        self.unknowns
            .iter()
            .enumerate()
            .map(|(u, &(r, c))| {
                let data = (0..r * c).map(|k| x.get(off[u] + k, col).clone()).collect();
                Mat::from_raw(self.ring, r, c, data)
            })
            .collect()
    }

    pub(crate) fn solve(&self) -> Option<Vec<Mat>> {
        let x = linalg::solve(&self.matrix(), &self.rhs_vector()).expect("system shapes agree")?;
        Some(self.unpack(&x, 0))
    }
}

/// Homotopy unknowns `k^n : src^n -> dst^{n-1}` for every degree where both sides are nonzero.
fn homotopy_unknowns(sys: &mut System, src: &Complex, dst: &Complex) -> BTreeMap<i32, usize> {
    (src.lo()..=src.hi())
        .filter(|&n| src.rank(n) > 0 && dst.rank(n - 1) > 0)
        .map(|n| (n, sys.unknown(dst.rank(n - 1), src.rank(n))))
        .collect()
}

/// Adds `sign · (d k^n + k^{n+1} d)` to equation `eq` in degree `n`.
fn add_boundary_terms(
    sys: &mut System,
    eq: usize,
    n: i32,
    src: &Complex,
    dst: &Complex,
    ks: &BTreeMap<i32, usize>,
    sign: i64,
) {
    let ring = src.ring();
    let s = ring.from_int(sign);
    if let Some(&k) = ks.get(&n) {
        sys.term(eq, k, Some(dst.diff(n - 1).scale(&s)), None);
    }
    if let Some(&k) = ks.get(&(n + 1)) {
        sys.term(eq, k, None, Some(src.diff(n).scale(&s)));
    }
}

fn collect_homotopy(src: &Complex, dst: &Complex, ks: &BTreeMap<i32, usize>, sol: &[Mat]) -> Homotopy {
    let comps = ks.iter().map(|(&n, &u)| (n, sol[u].clone())).collect();
    Homotopy::new(src.clone(), dst.clone(), comps).expect("solution blocks have homotopy shapes")
}

/// Some `k` with `d k + k d = f - g`, or `None` when `f` and `g` are not homotopic.
pub fn solve_homotopy(f: &ChainMap, g: &ChainMap) -> Result<Option<Homotopy>> {
    if !f.is_parallel(g) {
        return Err(Error::Incompatible("solve_homotopy: maps are not parallel".into()));
    }
    let (src, dst) = (f.src(), f.dst());
    let diff = f.sub(g)?;
    if diff.is_zero() {
        return Ok(Some(Homotopy::zero(src, dst)));
    }
    let mut sys = System::new(src.ring());
    let ks = homotopy_unknowns(&mut sys, src, dst);
    for n in super::support(src, dst) {
        let eq = sys.equation(dst.rank(n), src.rank(n));
        add_boundary_terms(&mut sys, eq, n, src, dst, &ks, 1);
        sys.set_rhs(eq, diff.comp(n).into_owned());
    }
    Ok(sys.solve().map(|sol| collect_homotopy(src, dst, &ks, &sol)))
}

/// A homotopy inverse `inv : Y -> X` of `s : X -> Y` with witnesses
/// `d k1 + k1 d = inv ∘ s - id_X` and `d k2 + k2 d = s ∘ inv - id_Y`.
#[derive(Clone, Debug)]
pub struct HomotopyInverse {
    pub inv: ChainMap,
    pub k1: Homotopy,
    pub k2: Homotopy,
}

/// A contraction `σ` with `d σ + σ d = id`, built from the top degree down;
/// `None` when `c` is not acyclic.
///
/// At degree `n` the equation is `d σⁿ = id - σⁿ⁺¹ d`, whose right side lands
/// in the cycles once the degree above is solved, so any solution extends.
pub fn contraction(c: &Complex) -> Option<Homotopy> {
    let ring = c.ring();
    if c.is_zero() {
        return Some(Homotopy::zero(c, c));
    }
    let mut comps: BTreeMap<i32, Mat> = BTreeMap::new();
    for n in (c.lo()..=c.hi()).rev() {
        let above = comps.get(&(n + 1)).cloned().unwrap_or_else(|| Mat::zeros(ring, c.rank(n), c.rank(n + 1)));
        let rest = &Mat::identity(ring, c.rank(n)) - &(&above * &*c.diff(n));
        let sigma = if c.rank(n - 1) == 0 {
            if !rest.is_zero() {
                return None;
            }
            Mat::zeros(ring, 0, c.rank(n))
        } else {
            linalg::solve(&c.diff(n - 1), &rest).expect("shapes agree")?
        };
        comps.insert(n, sigma);
    }
    Some(Homotopy::new(c.clone(), c.clone(), comps).expect("blocks have homotopy shapes"))
}

/// Reads `inv`, `k1`, `k2` off a contraction of `cone(s)`, whose degree `n`
/// is `Xⁿ⁺¹ ⊕ Yⁿ`: the blocks of `σⁿ` are `k1ⁿ⁺¹`, `-invⁿ` and `-k2ⁿ`.
fn inverse_from_cone(s: &ChainMap) -> Option<HomotopyInverse> {
    let (x, y) = (s.src(), s.dst());
    let sigma = contraction(&super::cone(s))?;
    let (lo, hi) = span(&[x, y]);
    let mut inv = BTreeMap::new();
    let mut k1 = BTreeMap::new();
    let mut k2 = BTreeMap::new();
    for n in lo - 1..=hi {
        let m = sigma.comp(n);
        let (rx, ry) = (x.rank(n), y.rank(n - 1));
        let (cx, cy) = (x.rank(n + 1), y.rank(n));
        k1.insert(n + 1, m.block(0, rx, 0, cx));
        inv.insert(n, -&m.block(0, rx, cx, cy));
        k2.insert(n, -&m.block(rx, ry, cx, cy));
    }
    let prune = |m: BTreeMap<i32, Mat>| -> BTreeMap<i32, Mat> { m.into_iter().filter(|(_, b)| !b.is_zero()).collect() };
    let inv = ChainMap::new(y.clone(), x.clone(), prune(inv)).expect("a contraction of the cone gives a chain map");
    let k1 = Homotopy::new(x.clone(), x.clone(), prune(k1)).expect("homotopy shapes");
    let k2 = Homotopy::new(y.clone(), y.clone(), prune(k2)).expect("homotopy shapes");
    Some(HomotopyInverse { inv, k1, k2 })
}

/// Contracts `cone(s)` degree by degree, then replaces `inv` by a strict
/// section `s ∘ inv = id` when one exists, adjusting `k1` to match.
pub fn homotopy_inverse(s: &ChainMap) -> Result<HomotopyInverse> {
    if !is_quasi_iso(s) {
        return Err(Error::NotQuasiIso);
    }
    let found = inverse_from_cone(s)
        .ok_or_else(|| Error::Internal("quasi-isomorphism with a non-contractible cone".into()))?;
    let Some(inv) = strict_section(s) else { return Ok(found) };
    // inv - inv0 = ∂(-k1 ∘ inv) when s ∘ inv = id, hence inv ∘ s - id = ∂(k1 - k1 ∘ inv ∘ s)
    let correction = found.k1.pre_compose(&inv.compose(s)?)?;
    let k1 = found.k1.add(&correction.neg())?;
    let k2 = Homotopy::zero(s.dst(), s.dst());
    Ok(HomotopyInverse { inv, k1, k2 })
}

/// `inv` with `s ∘ inv ≃ id` via `k2`; for a quasi-isomorphism this is
/// already a two-sided homotopy inverse.
pub(crate) fn right_homotopy_inverse(s: &ChainMap) -> Option<(ChainMap, Homotopy)> {
    if let Some(inv) = strict_section(s) {
        return Some((inv, Homotopy::zero(s.dst(), s.dst())));
    }
    inverse_from_cone(s).map(|h| (h.inv, h.k2))
}

/// A chain map `inv` with `s ∘ inv = id`, if one exists.
fn strict_section(s: &ChainMap) -> Option<ChainMap> {
    let (x, y) = (s.src(), s.dst());
    let ring = x.ring();
    let mut sys = System::new(ring);
    let invs: BTreeMap<i32, usize> = super::support(y, x)
        .map(|n| (n, sys.unknown(x.rank(n), y.rank(n))))
        .collect();
    let (lo, hi) = span(&[x, y]);
    // d_X inv^n - inv^{n+1} d_Y = 0
    for n in lo - 1..=hi {
        if x.rank(n + 1) == 0 || y.rank(n) == 0 {
            continue;
        }
        let eq = sys.equation(x.rank(n + 1), y.rank(n));
        if let Some(&u) = invs.get(&n) {
            sys.term(eq, u, Some(x.diff(n).into_owned()), None);
        }
        if let Some(&u) = invs.get(&(n + 1)) {
            sys.term(eq, u, None, Some(-&*y.diff(n)));
        }
    }
    // s^n inv^n = id
    for n in lo..=hi {
        if y.rank(n) == 0 {
            continue;
        }
        let eq = sys.equation(y.rank(n), y.rank(n));
        if let Some(&u) = invs.get(&n) {
            sys.term(eq, u, Some(s.comp(n).into_owned()), None);
        }
        sys.set_rhs(eq, Mat::identity(ring, y.rank(n)));
    }
    let sol = sys.solve()?;
    let comps: BTreeMap<i32, Mat> = invs.iter().map(|(&n, &u)| (n, sol[u].clone())).collect();
    Some(ChainMap::new(y.clone(), x.clone(), comps).expect("solution satisfies the chain map equations"))
}
