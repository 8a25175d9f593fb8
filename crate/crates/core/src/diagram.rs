//! Complexes indexed by the finite posets `Δⁿ`, `□`, `⌐` and `ArΔⁿ`.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{cylinder, h_pushout, is_quasi_iso, span, ChainMap, Complex};
use crate::linalg::{cokernel_basis, is_admissible_mono, Mat};
use crate::{Error, Result};

/// Tuples ordered componentwise.
pub type Vertex = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// `0 < 1 < ... < n`
    Delta(usize),
    /// `Δ¹ × Δ¹`
    Square,
    /// The square without `(1, 1)`.
    Corner,
    /// Pairs `i <= j` in `Δⁿ`, ordered componentwise.
    ArDelta(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    kind: ShapeKind,
    elements: Vec<Vertex>,
}

impl Poset {
    pub fn delta(n: usize) -> Poset {
        Poset { kind: ShapeKind::Delta(n), elements: (0..=n).map(|i| vec![i]).collect() }
    }

    pub fn square() -> Poset {
        Poset { kind: ShapeKind::Square, elements: vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]] }
    }

    pub fn corner() -> Poset {
        Poset { kind: ShapeKind::Corner, elements: vec![vec![0, 0], vec![0, 1], vec![1, 0]] }
    }

    pub fn ar_delta(n: usize) -> Poset {
        let elements = (0..=n).flat_map(|i| (i..=n).map(move |j| vec![i, j])).collect();
        Poset { kind: ShapeKind::ArDelta(n), elements }
    }

    pub fn of_kind(kind: ShapeKind) -> Poset {
        match kind {
            ShapeKind::Delta(n) => Poset::delta(n),
            ShapeKind::Square => Poset::square(),
            ShapeKind::Corner => Poset::corner(),
            ShapeKind::ArDelta(n) => Poset::ar_delta(n),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn elements(&self) -> &[Vertex] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, v: &[usize]) -> Option<usize> {
        self.elements.iter().position(|e| e.as_slice() == v)
    }

    pub fn leq(a: &[usize], b: &[usize]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
    }

    /// Covering relations `a < b` with nothing strictly between, as index pairs.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        let lt = |a: usize, b: usize| a != b && Poset::leq(&self.elements[a], &self.elements[b]);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

pub(crate) fn label(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

/// A strictly commuting diagram of complexes on a [`Poset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagComplex {
    shape: Poset,
    at: Vec<Complex>,
    along: BTreeMap<(usize, usize), ChainMap>,
}

impl DiagComplex {
    /// `at[i]` sits at `shape.elements()[i]`; `along` holds one map per covering relation.
    pub fn new(shape: Poset, at: Vec<Complex>, along: BTreeMap<(usize, usize), ChainMap>) -> Result<DiagComplex> {
        if at.len() != shape.len() {
            return Err(Error::Shape(format!("{} vertices need {} complexes, got {}", shape.len(), shape.len(), at.len())));
        }
        if let Some(first) = at.first() {
            if let Some(c) = at.iter().find(|c| c.ring() != first.ring()) {
                return Err(Error::RingMismatch(first.ring(), c.ring()));
            }
        }
        let covers = shape.covers();
        for &(a, b) in &covers {
            let name = || format!("{} -> {}", label(&shape.elements[a]), label(&shape.elements[b]));
            let f = along.get(&(a, b)).ok_or_else(|| Error::Shape(format!("missing edge {}", name())))?;
            if f.src() != &at[a] || f.dst() != &at[b] {
                return Err(Error::Shape(format!("edge {} does not match its vertices", name())));
            }
        }
        if let Some((&(a, b), _)) = along.iter().find(|(e, _)| !covers.contains(e)) {
            return Err(Error::Shape(format!(
                "{} -> {} is not a covering relation",
                label(&shape.elements[a]),
                label(&shape.elements[b])
            )));
        }
        let d = DiagComplex { shape, at, along };
        d.check_commutes()?;
        Ok(d)
    }

    /// Composites `arrow(a, b)` along one path, for every comparable pair.
    fn composites(&self) -> BTreeMap<(usize, usize), ChainMap> {
        let n = self.shape.len();
        let mut done: BTreeMap<(usize, usize), ChainMap> = BTreeMap::new();
        for a in 0..n {
            done.insert((a, a), ChainMap::identity(&self.at[a]));
        }
        // longest chains last, so every shorter composite already exists
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && Poset::leq(&self.shape.elements[a], &self.shape.elements[b]))
            .collect();
        let height = |&(a, b): &(usize, usize)| -> usize {
            let (x, y) = (&self.shape.elements[a], &self.shape.elements[b]);
            x.iter().zip(y).map(|(p, q)| q - p).sum()
        };
        pairs.sort_by_key(height);
        for (a, b) in pairs {
            let (&(_, c), edge) = self
                .along
                .iter()
                .find(|(&(s, c), _)| s == a && Poset::leq(&self.shape.elements[c], &self.shape.elements[b]))
                .expect("a cover below b exists");
            let rest = &done[&(c, b)];
            done.insert((a, b), rest.compose(edge).expect("composable"));
        }
        done
    }

    fn check_commutes(&self) -> Result<()> {
        let composites = self.composites();
        for (&(a, c), edge) in &self.along {
            for (&(s, b), total) in &composites {
                if s != a || !Poset::leq(&self.shape.elements[c], &self.shape.elements[b]) {
                    continue;
                }
                let route = composites[&(c, b)].compose(edge).expect("composable");
                if let Some(degree) = first_difference(&route, total) {
                    return Err(Error::NotCommutative {
                        from: label(&self.shape.elements[a]),
                        to: label(&self.shape.elements[b]),
                        degree,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &Poset {
        &self.shape
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.at
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), ChainMap> {
        &self.along
    }

    pub fn at(&self, v: &[usize]) -> Result<&Complex> {
        let i = self.index(v)?;
        Ok(&self.at[i])
    }

    fn index(&self, v: &[usize]) -> Result<usize> {
        self.shape.index_of(v).ok_or_else(|| Error::Shape(format!("no vertex ({})", label(v))))
    }

    /// The composite map `a -> b`, the identity when `a = b`.
    pub fn arrow(&self, a: &[usize], b: &[usize]) -> Result<ChainMap> {
        let (ia, ib) = (self.index(a)?, self.index(b)?);
        if !Poset::leq(a, b) {
            return Err(Error::Shape(format!("({}) is not below ({})", label(a), label(b))));
        }
        self.arrow_by_index(ia, ib)
    }

    fn arrow_by_index(&self, a: usize, b: usize) -> Result<ChainMap> {
        let mut current = a;
        let mut map = ChainMap::identity(&self.at[a]);
        while current != b {
            let (&(_, next), edge) = self
                .along
                .iter()
                .find(|(&(s, c), _)| s == current && Poset::leq(&self.shape.elements[c], &self.shape.elements[b]))
                .ok_or_else(|| Error::Internal("no covering path".into()))?;
            map = edge.compose(&map)?;
            current = next;
        }
        Ok(map)
    }

    /// Precomposition with an order-preserving map `phi : shape -> self.shape`.
    pub fn reindex(&self, shape: Poset, phi: impl Fn(&[usize]) -> Vertex) -> Result<DiagComplex> {
        let images: Vec<Vertex> = shape.elements().iter().map(|v| phi(v)).collect();
        let idx: Vec<usize> = images.iter().map(|v| self.index(v)).collect::<Result<_>>()?;
        let at = idx.iter().map(|&i| self.at[i].clone()).collect();
        let mut along = BTreeMap::new();
        for (a, b) in shape.covers() {
            if !Poset::leq(&images[a], &images[b]) {
                return Err(Error::Shape("reindexing map is not order preserving".into()));
            }
            along.insert((a, b), self.arrow_by_index(idx[a], idx[b])?);
        }
        Ok(DiagComplex { shape, at, along })
    }

    /// Restriction to a subposet given by its vertices, with its own shape kind.
    pub fn restrict(&self, sub: &Poset) -> Result<DiagComplex> {
        for v in sub.elements() {
            if self.shape.index_of(v).is_none() {
                return Err(Error::Shape(format!("({}) is not a vertex of the diagram", label(v))));
            }
        }
        self.reindex(sub.clone(), |v| v.to_vec())
    }
}

fn first_difference(a: &ChainMap, b: &ChainMap) -> Option<i32> {
    let (lo, hi) = span(&[a.src(), a.dst()]);
    (lo..=hi).find(|&n| a.comp(n) != b.comp(n))
}

/// Vertexwise chain maps between diagrams of one shape, natural on the nose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagMap {
    src: DiagComplex,
    dst: DiagComplex,
    comps: Vec<ChainMap>,
}

impl DiagMap {
    pub fn new(src: DiagComplex, dst: DiagComplex, comps: Vec<ChainMap>) -> Result<DiagMap> {
        if src.shape != dst.shape || comps.len() != src.shape.len() {
            return Err(Error::Shape("diagram map between different shapes".into()));
        }
        for (i, f) in comps.iter().enumerate() {
            if f.src() != &src.at[i] || f.dst() != &dst.at[i] {
                return Err(Error::Shape(format!("component at ({}) does not fit", label(&src.shape.elements[i]))));
            }
        }
        for (&(a, b), e) in &src.along {
            let left = comps[b].compose(e)?;
            let right = dst.along[&(a, b)].compose(&comps[a])?;
            if let Some(degree) = first_difference(&left, &right) {
                return Err(Error::NotCommutative {
                    from: label(&src.shape.elements[a]),
                    to: label(&src.shape.elements[b]),
                    degree,
                });
            }
        }
        Ok(DiagMap { src, dst, comps })
    }

    pub fn identity(d: &DiagComplex) -> DiagMap {
        DiagMap { src: d.clone(), dst: d.clone(), comps: d.at.iter().map(ChainMap::identity).collect() }
    }

    pub fn src(&self) -> &DiagComplex {
        &self.src
    }

    pub fn dst(&self) -> &DiagComplex {
        &self.dst
    }

    pub fn components(&self) -> &[ChainMap] {
        &self.comps
    }
}

pub fn is_componentwise_quasi_iso(m: &DiagMap) -> bool {
    m.comps.iter().all(is_quasi_iso)
}

fn require(d: &DiagComplex, kind: ShapeKind) -> Result<()> {
    if d.shape.kind != kind {
        return Err(Error::Shape(format!("expected a {kind:?} diagram, got {:?}", d.shape.kind)));
    }
    Ok(())
}

/// The comparison from the homotopy pushout of the two legs out of `(0,0)`
/// to the corner `(1,1)`; it is `[α, 0, β]` because the square commutes strictly.
pub fn cocartesian_comparison(d: &DiagComplex) -> Result<ChainMap> {
    require(d, ShapeKind::Square)?;
    let top = d.arrow(&[0, 0], &[0, 1])?;
    let left = d.arrow(&[0, 0], &[1, 0])?;
    let right = d.arrow(&[0, 1], &[1, 1])?;
    let bottom = d.arrow(&[1, 0], &[1, 1])?;
    let po = h_pushout(&top, &left)?;
    let (a00, corner) = (top.src(), d.at(&[1, 1])?);
    let ring = corner.ring();
    ChainMap::from_fn(&po.complex, corner, |n| {
        let mid = Mat::zeros(ring, corner.rank(n), a00.rank(n + 1));
        Mat::hstack(&[&right.comp(n), &mid, &bottom.comp(n)])
    })
}

pub fn is_cocartesian(d: &DiagComplex) -> Result<bool> {
    Ok(is_quasi_iso(&cocartesian_comparison(d)?))
}

/// Completes `(1,0) <- (0,0) >-> (0,1)` by the strict degreewise pushout.
pub fn pushout_complete(d: &DiagComplex) -> Result<DiagComplex> {
    require(d, ShapeKind::Corner)?;
    let mono = d.arrow(&[0, 0], &[0, 1])?;
    let leg = d.arrow(&[0, 0], &[1, 0])?;
    let (a00, a01, a10) = (mono.src(), mono.dst(), leg.dst());
    let (lo, hi) = span(&[a00, a01, a10]);
    for n in lo..=hi {
        if !is_admissible_mono(&mono.comp(n)) {
            return Err(Error::NotSplitMono { from: "0,0".into(), to: "0,1".into(), degree: n });
        }
    }
    let ring = a00.ring();
    let mut quotients = BTreeMap::new();
    for n in lo..=hi {
        let relation = Mat::vstack(&[&mono.comp(n), &-&*leg.comp(n)]);
        quotients.insert(n, cokernel_basis(&relation)?);
    }
    let q = |n: i32| quotients.get(&n);
    let corner = Complex::new(
        ring,
        lo,
        (lo..=hi).map(|n| q(n).map_or(0, |c| c.rank)).collect(),
        (lo..hi)
            .map(|n| {
                let sum = Mat::block_diag(&[&a01.diff(n), &a10.diff(n)]);
                &(&q(n + 1).expect("in range").proj * &sum) * &q(n).expect("in range").section
            })
            .collect(),
    )?;
    let inclusion = |n: i32, first: bool| -> Mat {
        let Some(c) = q(n) else { return Mat::zeros(ring, 0, 0) };
        let (r01, r10) = (a01.rank(n), a10.rank(n));
        if first {
            c.proj.block(0, c.rank, 0, r01)
        } else {
            c.proj.block(0, c.rank, r01, r10)
        }
    };
    let right = ChainMap::from_fn(a01, &corner, |n| inclusion(n, true))?;
    let bottom = ChainMap::from_fn(a10, &corner, |n| inclusion(n, false))?;
    let shape = Poset::square();
    let at = vec![a00.clone(), a01.clone(), a10.clone(), corner.clone()];
    let mut along = BTreeMap::new();
    along.insert((0, 1), mono);
    along.insert((0, 2), leg);
    along.insert((1, 3), right);
    along.insert((2, 3), bottom);
    DiagComplex::new(shape, at, along)
}

/// For a commuting square whose top edge is a degreewise split mono, the map
/// from the strict pushout of its `⌐` part to the actual corner.
pub fn pushout_comparison(d: &DiagComplex) -> Result<ChainMap> {
    require(d, ShapeKind::Square)?;
    let completed = pushout_complete(&d.restrict(&Poset::corner())?)?;
    let pushout = completed.at(&[1, 1])?;
    let corner = d.at(&[1, 1])?;
    let mono = d.arrow(&[0, 0], &[0, 1])?;
    let leg = d.arrow(&[0, 0], &[1, 0])?;
    let right = d.arrow(&[0, 1], &[1, 1])?;
    let bottom = d.arrow(&[1, 0], &[1, 1])?;
    let (lo, hi) = span(&[mono.src(), mono.dst(), leg.dst()]);
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        let relation = Mat::vstack(&[&mono.comp(n), &-&*leg.comp(n)]);
        let section = cokernel_basis(&relation)?.section;
        let pair = Mat::hstack(&[&right.comp(n), &bottom.comp(n)]);
        debug_assert_eq!(pair.rows(), corner.rank(n));
        comps.insert(n, &pair * &section);
    }
    ChainMap::new(pushout.clone(), corner.clone(), comps)
}

/// A chain of degreewise split monomorphisms replacing a `Δⁿ` diagram, with
/// the comparison map back to it.
#[derive(Clone, Debug)]
pub struct Filtered {
    pub filtration: DiagComplex,
    pub comparison: DiagMap,
}

/// Iterated mapping cylinders `A₀ >-> Cyl(a₀) >-> Cyl(a₁ r₀) >-> ...`.
pub fn diagram_to_filtration(d: &DiagComplex) -> Result<Filtered> {
    let ShapeKind::Delta(n) = d.shape.kind else {
        return Err(Error::Shape(format!("expected a Delta diagram, got {:?}", d.shape.kind)));
    };
    let mut at = vec![d.at[0].clone()];
    let mut comps = vec![ChainMap::identity(&d.at[0])];
    let mut along = BTreeMap::new();
    for i in 0..n {
        let step = d.along[&(i, i + 1)].compose(&comps[i])?;
        let cyl = cylinder(&step);
        at.push(cyl.complex.clone());
        along.insert((i, i + 1), cyl.j1);
        comps.push(cyl.retraction);
    }
    let filtration = DiagComplex::new(d.shape.clone(), at, along)?;
    let comparison = DiagMap::new(filtration.clone(), d.clone(), comps)?;
    Ok(Filtered { filtration, comparison })
}

/// First edge and degree where a component is not a split monomorphism.
pub fn split_mono_violation(d: &DiagComplex) -> Option<(String, String, i32)> {
    for (&(a, b), f) in &d.along {
        if let Some(n) = crate::derived::split_mono_degree(f) {
            return Some((label(&d.shape.elements[a]), label(&d.shape.elements[b]), n));
        }
    }
    None
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeKind::Delta(n) => write!(f, "delta({n})"),
            ShapeKind::Square => write!(f, "box"),
            ShapeKind::Corner => write!(f, "corner"),
            ShapeKind::ArDelta(n) => write!(f, "ardelta({n})"),
        }
    }
}
