//! Bounded cochain complexes of free modules and the maps between them.
//!
//! Storage is canonical: a [`Complex`] keeps only the degree window between
//! its lowest and highest nonzero rank, and maps keep only nonzero
//! components. Structural equality is therefore mathematical equality.

mod build;
mod homology;
mod homotopy;

pub use build::{
    cocylinder, cone, cylinder, factor_cyl, h_pullback, h_pushout, shift, shift_map, tensor,
    Cocylinder, Cylinder, HPullback, HPushout,
};
pub use homology::{
    homology, is_acyclic, is_quasi_iso, quasi_iso_by_cone, quasi_iso_by_homology, HomologyGroup,
};
pub use homotopy::{contraction, homotopy_inverse, solve_homotopy, HomotopyInverse};

pub(crate) use homotopy::{right_homotopy_inverse, System};

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::linalg::{Mat, Ring, Scalar};
use crate::{Error, Result};

/// Bounded cochain complex: `rank(n)` free generators in degree `n` and
/// differentials `diff(n) : C^n -> C^{n+1}` with `diff(n+1) * diff(n) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    ring: Ring,
    lo: i32,
    ranks: Vec<usize>,
    /// `diffs[i]` is `diff(lo + i)`.
    diffs: Vec<Mat>,
}

impl Complex {
    pub fn new(ring: Ring, lo: i32, ranks: Vec<usize>, diffs: Vec<Mat>) -> Result<Complex> {
        if diffs.len() != ranks.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            let n = lo + i as i32;
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring, d.ring()));
            }
            if d.shape() != (ranks[i + 1], ranks[i]) {
                return Err(Error::Dimension(format!(
                    "diff({n}) is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[i + 1],
                    ranks[i]
                )));
            }
        }
        for i in 1..diffs.len() {
            if !(&diffs[i] * &diffs[i - 1]).is_zero() {
                return Err(Error::NotAComplex { degree: lo + i as i32 - 1 });
            }
        }
        Ok(Complex { ring, lo, ranks, diffs }.trimmed())
    }

    /// Builds from per-degree closures over `lo..=hi`; callers guarantee `d² = 0`.
    pub(crate) fn assemble(
        ring: Ring,
        lo: i32,
        hi: i32,
        rank: impl Fn(i32) -> usize,
        diff: impl Fn(i32) -> Mat,
    ) -> Complex {
        if hi < lo {
            return Complex::zero(ring);
        }
        let ranks: Vec<usize> = (lo..=hi).map(&rank).collect();
        let diffs: Vec<Mat> = (lo..hi).map(&diff).collect();
        if cfg!(debug_assertions) {
            Complex::new(ring, lo, ranks, diffs).expect("assembled complex is valid")
        } else {
            Complex { ring, lo, ranks, diffs }.trimmed()
        }
    }

    fn trimmed(mut self) -> Complex {
        let first = self.ranks.iter().position(|&r| r > 0);
        let Some(first) = first else {
            return Complex::zero(self.ring);
        };
        let last = self.ranks.iter().rposition(|&r| r > 0).expect("nonempty");
        self.ranks = self.ranks[first..=last].to_vec();
        self.diffs = self.diffs.drain(first..last).collect();
        self.lo += first as i32;
        self
    }

    pub fn zero(ring: Ring) -> Complex {
        Complex { ring, lo: 0, ranks: Vec::new(), diffs: Vec::new() }
    }

    /// Free module of the given rank placed in a single degree.
    pub fn concentrated(ring: Ring, degree: i32, rank: usize) -> Complex {
        Complex { ring, lo: degree, ranks: vec![rank], diffs: Vec::new() }.trimmed()
    }

    /// The ring itself in degree 0, the unit for [`tensor`].
    pub fn unit(ring: Ring) -> Complex {
        Complex::concentrated(ring, 0, 1)
    }

    /// `R^{rows(d)} <- R^{cols(d)}` placed in degrees `lo`, `lo + 1`.
    pub fn two_term(lo: i32, d: Mat) -> Complex {
        let ring = d.ring();
        let ranks = vec![d.cols(), d.rows()];
        Complex { ring, lo, ranks, diffs: vec![d] }.trimmed()
    }

    pub fn direct_sum(parts: &[&Complex]) -> Result<Complex> {
        let ring = parts.first().map(|c| c.ring).ok_or_else(|| {
            Error::Dimension("direct sum of no complexes".into())
        })?;
        if let Some(c) = parts.iter().find(|c| c.ring != ring) {
            return Err(Error::RingMismatch(ring, c.ring));
        }
        let (lo, hi) = span(parts);
        Ok(Complex::assemble(
            ring,
            lo,
            hi,
            |n| parts.iter().map(|c| c.rank(n)).sum(),
            |n| {
                let ds: Vec<Cow<Mat>> = parts.iter().map(|c| c.diff(n)).collect();
                let refs: Vec<&Mat> = ds.iter().map(|d| d.as_ref()).collect();
                Mat::block_diag(&refs)
            },
        ))
    }

    /// Re-checks shapes and `d² = 0` explicitly.
    pub fn check(&self) -> Result<()> {
        Complex::new(self.ring, self.lo, self.ranks.clone(), self.diffs.clone()).map(|_| ())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Lowest degree with nonzero rank (0 for the zero complex).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree with nonzero rank (`lo - 1` for the zero complex).
    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, n: i32) -> usize {
        let i = n - self.lo;
        if i < 0 {
            return 0;
        }
        self.ranks.get(i as usize).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn diff(&self, n: i32) -> Cow<'_, Mat> {
        let i = n - self.lo;
        if i >= 0 && (i as usize) < self.diffs.len() {
            Cow::Borrowed(&self.diffs[i as usize])
        } else {
            Cow::Owned(Mat::zeros(self.ring, self.rank(n + 1), self.rank(n)))
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `Σ (-1)^n rank(n)`.
    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(n) as i64)
            .sum()
    }
}

/// Union of the degree windows, as `(lo, hi)` with `hi < lo` when all are zero.
pub(crate) fn span(parts: &[&Complex]) -> (i32, i32) {
    let nonzero: Vec<&&Complex> = parts.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return (0, -1);
    }
    let lo = nonzero.iter().map(|c| c.lo()).min().expect("nonempty");
    let hi = nonzero.iter().map(|c| c.hi()).max().expect("nonempty");
    (lo, hi)
}

fn check_shape(m: &Mat, rows: usize, cols: usize, ring: Ring, what: &str, n: i32) -> Result<()> {
    if m.ring() != ring {
        return Err(Error::RingMismatch(ring, m.ring()));
    }
    if m.shape() != (rows, cols) {
        return Err(Error::Dimension(format!(
            "{what} component at degree {n} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn prune(comps: BTreeMap<i32, Mat>) -> BTreeMap<i32, Mat> {
    comps.into_iter().filter(|(_, m)| !m.is_zero()).collect()
}

/// Degreewise maps `comp(n) : src^n -> dst^n` commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainMap {
    src: Complex,
    dst: Complex,
    comps: BTreeMap<i32, Mat>,
}

impl ChainMap {
    pub fn new(src: Complex, dst: Complex, comps: BTreeMap<i32, Mat>) -> Result<ChainMap> {
        let ring = src.ring();
        if dst.ring() != ring {
            return Err(Error::RingMismatch(ring, dst.ring()));
        }
        for (&n, m) in &comps {
            check_shape(m, dst.rank(n), src.rank(n), ring, "chain map", n)?;
        }
        let map = ChainMap { src, dst, comps: prune(comps) };
        if let Some(degree) = map.chain_defect() {
            return Err(Error::NotAChainMap { degree });
        }
        Ok(map)
    }

    /// Components from a closure over every degree where both sides are nonzero.
    pub fn from_fn(src: &Complex, dst: &Complex, f: impl Fn(i32) -> Mat) -> Result<ChainMap> {
        let comps = support(src, dst).map(|n| (n, f(n))).collect();
        ChainMap::new(src.clone(), dst.clone(), comps)
    }

    /// Like [`ChainMap::from_fn`] for constructions that are chain maps by design.
    pub(crate) fn assemble(src: &Complex, dst: &Complex, f: impl Fn(i32) -> Mat) -> ChainMap {
        if cfg!(debug_assertions) {
            ChainMap::from_fn(src, dst, f).expect("assembled map is a chain map")
        } else {
            let comps = support(src, dst).map(|n| (n, f(n))).collect();
            ChainMap { src: src.clone(), dst: dst.clone(), comps: prune(comps) }
        }
    }

    pub fn identity(c: &Complex) -> ChainMap {
        ChainMap::assemble(c, c, |n| Mat::identity(c.ring(), c.rank(n)))
    }

    pub fn zero(src: &Complex, dst: &Complex) -> ChainMap {
        ChainMap { src: src.clone(), dst: dst.clone(), comps: BTreeMap::new() }
    }

    /// First degree where `d ∘ f != f ∘ d`, if any.
    pub fn chain_defect(&self) -> Option<i32> {
        let (lo, hi) = span(&[&self.src, &self.dst]);
        (lo - 1..=hi).find(|&n| {
            let left = &*self.dst.diff(n) * &*self.comp(n);
            let right = &*self.comp(n + 1) * &*self.src.diff(n);
            left != right
        })
    }

    pub fn src(&self) -> &Complex {
        &self.src
    }

    pub fn dst(&self) -> &Complex {
        &self.dst
    }

    pub fn ring(&self) -> Ring {
        self.src.ring()
    }

    pub fn comp(&self, n: i32) -> Cow<'_, Mat> {
        match self.comps.get(&n) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Mat::zeros(self.ring(), self.dst.rank(n), self.src.rank(n))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_parallel(&self, other: &ChainMap) -> bool {
        self.src == other.src && self.dst == other.dst
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.dst != self.src {
            return Err(Error::Incompatible("composite: codomain of first map is not the domain of the second".into()));
        }
        Ok(ChainMap::assemble(&first.src, &self.dst, |n| &*self.comp(n) * &*first.comp(n)))
    }

    fn zip(&self, other: &ChainMap, f: impl Fn(&Mat, &Mat) -> Mat) -> Result<ChainMap> {
        if !self.is_parallel(other) {
            return Err(Error::Incompatible("maps are not parallel".into()));
        }
        Ok(ChainMap::assemble(&self.src, &self.dst, |n| f(&self.comp(n), &other.comp(n))))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap::assemble(&self.src, &self.dst, |n| -&*self.comp(n))
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap::assemble(&self.src, &self.dst, |n| self.comp(n).scale(c))
    }

    pub fn components(&self) -> &BTreeMap<i32, Mat> {
        &self.comps
    }
}

/// Degrees where a map `src -> dst` can have a nonzero component.
pub(crate) fn support<'a>(src: &'a Complex, dst: &'a Complex) -> impl Iterator<Item = i32> + 'a {
    let lo = src.lo().max(dst.lo());
    let hi = src.hi().min(dst.hi());
    (lo..=hi).filter(move |&n| src.rank(n) > 0 && dst.rank(n) > 0)
}

/// Degree `-1` maps `comp(n) : src^n -> dst^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homotopy {
    src: Complex,
    dst: Complex,
    comps: BTreeMap<i32, Mat>,
}

impl Homotopy {
    pub fn new(src: Complex, dst: Complex, comps: BTreeMap<i32, Mat>) -> Result<Homotopy> {
        let ring = src.ring();
        if dst.ring() != ring {
            return Err(Error::RingMismatch(ring, dst.ring()));
        }
        for (&n, m) in &comps {
            check_shape(m, dst.rank(n - 1), src.rank(n), ring, "homotopy", n)?;
        }
        Ok(Homotopy { src, dst, comps: prune(comps) })
    }

    pub(crate) fn assemble(src: &Complex, dst: &Complex, f: impl Fn(i32) -> Mat) -> Homotopy {
        let comps = (src.lo()..=src.hi())
            .filter(|&n| src.rank(n) > 0 && dst.rank(n - 1) > 0)
            .map(|n| (n, f(n)))
            .collect();
        Homotopy::new(src.clone(), dst.clone(), comps).expect("assembled homotopy has valid shapes")
    }

    pub fn zero(src: &Complex, dst: &Complex) -> Homotopy {
        Homotopy { src: src.clone(), dst: dst.clone(), comps: BTreeMap::new() }
    }

    pub fn src(&self) -> &Complex {
        &self.src
    }

    pub fn dst(&self) -> &Complex {
        &self.dst
    }

    pub fn comp(&self, n: i32) -> Cow<'_, Mat> {
        match self.comps.get(&n) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Mat::zeros(self.src.ring(), self.dst.rank(n - 1), self.src.rank(n))),
        }
    }

    pub fn components(&self) -> &BTreeMap<i32, Mat> {
        &self.comps
    }

    /// The null-homotopic chain map `d k + k d`.
    pub fn boundary(&self) -> ChainMap {
        ChainMap::assemble(&self.src, &self.dst, |n| {
            let a = &*self.dst.diff(n - 1) * &*self.comp(n);
            let b = &*self.comp(n + 1) * &*self.src.diff(n);
            &a + &b
        })
    }

    /// Whether `d k + k d = f - g` holds exactly.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap) -> bool {
        if f.src() != &self.src || f.dst() != &self.dst {
            return false;
        }
        match f.sub(g) {
            Ok(diff) => self.boundary() == diff,
            Err(_) => false,
        }
    }

    pub fn neg(&self) -> Homotopy {
        Homotopy::assemble(&self.src, &self.dst, |n| -&*self.comp(n))
    }

    pub fn add(&self, other: &Homotopy) -> Result<Homotopy> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Incompatible("homotopies are not parallel".into()));
        }
        Ok(Homotopy::assemble(&self.src, &self.dst, |n| &*self.comp(n) + &*other.comp(n)))
    }

    /// `after ∘ k`.
    pub fn post_compose(&self, after: &ChainMap) -> Result<Homotopy> {
        if after.src() != &self.dst {
            return Err(Error::Incompatible("post-composition domain mismatch".into()));
        }
        Ok(Homotopy::assemble(&self.src, after.dst(), |n| &*after.comp(n - 1) * &*self.comp(n)))
    }

    /// `k ∘ before`.
    pub fn pre_compose(&self, before: &ChainMap) -> Result<Homotopy> {
        if before.dst() != &self.src {
            return Err(Error::Incompatible("pre-composition codomain mismatch".into()));
        }
        Ok(Homotopy::assemble(before.src(), &self.dst, |n| &*self.comp(n) * &*before.comp(n)))
    }
}
