//! Waldhausen `S_n` objects over complexes: `ArΔⁿ` diagrams with zero
//! diagonal whose triples are degreewise split short exact.

use std::collections::BTreeMap;

use crate::complex::{span, ChainMap, Complex};
use crate::diagram::{DiagComplex, DiagMap, Poset, ShapeKind, Vertex};
use crate::linalg::{cokernel_basis, inverse, Cokernel, Mat, Ring};
use crate::{Error, Result};

/// Composable degreewise split monomorphisms `A_0 >-> ... >-> A_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    objects: Vec<Complex>,
    steps: Vec<ChainMap>,
}

impl Filtration {
    pub fn new(objects: Vec<Complex>, steps: Vec<ChainMap>) -> Result<Filtration> {
        if steps.len() + 1 != objects.len() && !(objects.is_empty() && steps.is_empty()) {
            return Err(Error::Shape(format!("{} objects need {} steps", objects.len(), objects.len().saturating_sub(1))));
        }
        for (i, f) in steps.iter().enumerate() {
            if f.src() != &objects[i] || f.dst() != &objects[i + 1] {
                return Err(Error::Shape(format!("step {i} does not connect objects {i} and {}", i + 1)));
            }
            if let Some(degree) = crate::derived::split_mono_degree(f) {
                return Err(Error::NotSplitMono { from: i.to_string(), to: (i + 1).to_string(), degree });
            }
        }
        Ok(Filtration { objects, steps })
    }

    /// The filtration with a single object.
    pub fn single(a: Complex) -> Filtration {
        Filtration { objects: vec![a], steps: Vec::new() }
    }

    pub fn objects(&self) -> &[Complex] {
        &self.objects
    }

    pub fn steps(&self) -> &[ChainMap] {
        &self.steps
    }

    /// Number of objects, which is the `n` of the matching `S_n` object.
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// `A_a -> A_b` for `a <= b`.
    fn composite(&self, a: usize, b: usize) -> ChainMap {
        let mut f = ChainMap::identity(&self.objects[a]);
        for step in &self.steps[a..b] {
            f = step.compose(&f).expect("steps compose");
        }
        f
    }
}

/// An object of `S_n`, stored as its whole `ArΔⁿ` diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnObject {
    n: usize,
    diagram: DiagComplex,
}

impl SnObject {
    /// Validates the zero diagonal and degreewise split exactness of every
    /// triple `A_ij -> A_ik -> A_jk`; failures name the triple and degree.
    pub fn new(diagram: DiagComplex) -> Result<SnObject> {
        let ShapeKind::ArDelta(n) = diagram.shape().kind() else {
            return Err(Error::Shape(format!("S_n objects live on ArDelta, got {}", diagram.shape().kind())));
        };
        let s = SnObject { n, diagram };
        s.validate()?;
        Ok(s)
    }

    /// The zero object of `S_n`.
    pub fn zero(ring: Ring, n: usize) -> SnObject {
        let shape = Poset::ar_delta(n);
        let zero = Complex::zero(ring);
        let at = vec![zero.clone(); shape.len()];
        let along = shape.covers().into_iter().map(|e| (e, ChainMap::identity(&zero))).collect();
        let diagram = DiagComplex::new(shape, at, along).expect("zero diagram commutes");
        SnObject { n, diagram }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..=n {
            let c = self.cell(i, i);
            if !c.is_zero() {
                return Err(Error::SnViolation { i, j: i, k: i, degree: c.lo(), what: "diagonal cell is not zero".into() });
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let mono = self.map((i, j), (i, k));
                    let epi = self.map((i, k), (j, k));
                    if let Some((degree, what)) = exactness_defect(&mono, &epi) {
                        return Err(Error::SnViolation { i, j, k, degree, what: what.into() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.diagram.complexes()[0].ring()
    }

    pub fn cell(&self, i: usize, j: usize) -> &Complex {
        self.diagram.at(&[i, j]).expect("cell in range")
    }

    /// Composite map `A_a -> A_b` for `a <= b` componentwise.
    pub fn map(&self, a: (usize, usize), b: (usize, usize)) -> ChainMap {
        self.diagram.arrow(&[a.0, a.1], &[b.0, b.1]).expect("comparable cells")
    }

    pub fn diagram(&self) -> &DiagComplex {
        &self.diagram
    }

    pub fn face(&self, i: usize) -> Result<SnObject> {
        if self.n == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n });
        }
        let skip = |a: usize| if a < i { a } else { a + 1 };
        let diagram = self.diagram.reindex(Poset::ar_delta(self.n - 1), |v| vec![skip(v[0]), skip(v[1])])?;
        Ok(SnObject { n: self.n - 1, diagram })
    }

    pub fn degeneracy(&self, i: usize) -> Result<SnObject> {
        if i > self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n });
        }
        let squash = |a: usize| if a <= i { a } else { a - 1 };
        let diagram = self.diagram.reindex(Poset::ar_delta(self.n + 1), |v| vec![squash(v[0]), squash(v[1])])?;
        Ok(SnObject { n: self.n + 1, diagram })
    }
}

/// First degree where `A >-mono-> C -epi->> B` fails to be split short exact.
pub(crate) fn exactness_defect(mono: &ChainMap, epi: &ChainMap) -> Option<(i32, &'static str)> {
    let (lo, hi) = span(&[mono.src(), mono.dst(), epi.dst()]);
    for n in lo..=hi {
        let (m, e) = (mono.comp(n), epi.comp(n));
        if !(&*e * &*m).is_zero() {
            return Some((n, "composite is not zero"));
        }
        let Ok(Cokernel { section, .. }) = cokernel_basis(&m) else {
            return Some((n, "first map is not a split monomorphism"));
        };
        if inverse(&(&*e * &section)).is_none() {
            return Some((n, "second map is not the cokernel"));
        }
    }
    None
}

fn ar_index(n: usize, i: usize, j: usize) -> usize {
    // vertices of ArΔⁿ are listed row by row: (0,0), ..., (0,n), (1,1), ...
    (0..i).map(|r| n + 1 - r).sum::<usize>() + (j - i)
}

/// Chooses the quotients `A_{j-1} / A_{i-1}` through [`cokernel_basis`].
pub fn from_filtration(f: &Filtration) -> Result<SnObject> {
    let n = f.len();
    let ring = match f.objects.first() {
        Some(a) => a.ring(),
        None => return Ok(SnObject::zero(Ring::Integers, 0)),
    };
    let zero = Complex::zero(ring);
    // quotient data for 1 <= i < j <= n: cokernel of A_{i-1} -> A_{j-1} per degree
    let mut quotients: BTreeMap<(usize, usize), BTreeMap<i32, Cokernel>> = BTreeMap::new();
    let mut cells: BTreeMap<(usize, usize), Complex> = BTreeMap::new();
    for j in 1..=n {
        cells.insert((0, j), f.objects[j - 1].clone());
    }
    for i in 1..=n {
        cells.insert((i, i), zero.clone());
        for j in i + 1..=n {
            let inc = f.composite(i - 1, j - 1);
            let big = &f.objects[j - 1];
            let (lo, hi) = span(&[inc.src(), big]);
            let mut per_degree = BTreeMap::new();
            for d in lo..=hi {
                let c = cokernel_basis(&inc.comp(d)).map_err(|_| Error::NotSplitMono {
                    from: (i - 1).to_string(),
                    to: (j - 1).to_string(),
                    degree: d,
                })?;
                per_degree.insert(d, c);
            }
            let q = Complex::new(
                ring,
                lo,
                (lo..=hi).map(|d| per_degree[&d].rank).collect(),
                (lo..hi).map(|d| &(&per_degree[&(d + 1)].proj * &*big.diff(d)) * &per_degree[&d].section).collect(),
            )?;
            cells.insert((i, j), q);
            quotients.insert((i, j), per_degree);
        }
    }
    cells.insert((0, 0), zero.clone());

    let proj = |i: usize, j: usize, d: i32| -> Mat {
        match quotients.get(&(i, j)).and_then(|q| q.get(&d)) {
            Some(c) => c.proj.clone(),
            None => Mat::identity(ring, f.objects[j - 1].rank(d)),
        }
    };
    let section = |i: usize, j: usize, d: i32| -> Mat {
        match quotients.get(&(i, j)).and_then(|q| q.get(&d)) {
            Some(c) => c.section.clone(),
            None => Mat::identity(ring, f.objects[j - 1].rank(d)),
        }
    };

    let shape = Poset::ar_delta(n);
    let at: Vec<Complex> = shape.elements().iter().map(|v| cells[&(v[0], v[1])].clone()).collect();
    let mut along = BTreeMap::new();
    for (a, b) in shape.covers() {
        let (va, vb): (&Vertex, &Vertex) = (&shape.elements()[a], &shape.elements()[b]);
        let (src, dst) = (&at[a], &at[b]);
        let (i, j) = (va[0], va[1]);
        let map = if src.is_zero() || dst.is_zero() {
            ChainMap::zero(src, dst)
        } else if vb[1] == j + 1 {
            // (i, j) -> (i, j + 1): induced by the step A_{j-1} -> A_j
            let step = &f.steps[j - 1];
            ChainMap::from_fn(src, dst, |d| &(&proj(i, j + 1, d) * &*step.comp(d)) * &section(i, j, d))?
        } else {
            // (i, j) -> (i + 1, j): further quotient
            ChainMap::from_fn(src, dst, |d| &proj(i + 1, j, d) * &section(i, j, d))?
        };
        debug_assert_eq!((ar_index(n, i, j), ar_index(n, vb[0], vb[1])), (a, b));
        along.insert((a, b), map);
    }
    let diagram = DiagComplex::new(shape, at, along)?;
    SnObject::new(diagram)
}

pub fn forget_quotients(s: &SnObject) -> Filtration {
    let objects = (1..=s.n).map(|j| s.cell(0, j).clone()).collect();
    let steps = (1..s.n).map(|j| s.map((0, j), (0, j + 1))).collect();
    Filtration { objects, steps }
}

/// Maps of `S_n` objects are diagram maps on `ArΔⁿ`.
pub fn sn_map(src: &SnObject, dst: &SnObject, comps: Vec<ChainMap>) -> Result<DiagMap> {
    DiagMap::new(src.diagram.clone(), dst.diagram.clone(), comps)
}

/// A degreewise split short exact sequence `A >-> C ->> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtObject {
    mono: ChainMap,
    epi: ChainMap,
}

impl ExtObject {
    pub fn new(mono: ChainMap, epi: ChainMap) -> Result<ExtObject> {
        if mono.dst() != epi.src() {
            return Err(Error::Incompatible("extension maps do not compose".into()));
        }
        if let Some((degree, what)) = exactness_defect(&mono, &epi) {
            return Err(Error::SnViolation { i: 0, j: 1, k: 2, degree, what: what.into() });
        }
        Ok(ExtObject { mono, epi })
    }

    pub fn mono(&self) -> &ChainMap {
        &self.mono
    }

    pub fn epi(&self) -> &ChainMap {
        &self.epi
    }

    pub fn to_sn(&self) -> SnObject {
        let ring = self.mono.ring();
        let zero = Complex::zero(ring);
        let (a, c, b) = (self.mono.src(), self.mono.dst(), self.epi.dst());
        let shape = Poset::ar_delta(2);
        // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
        let at = vec![zero.clone(), a.clone(), c.clone(), zero.clone(), b.clone(), zero.clone()];
        let mut along = BTreeMap::new();
        for (x, y) in shape.covers() {
            let map = match (x, y) {
                (1, 2) => self.mono.clone(),
                (2, 4) => self.epi.clone(),
                _ => ChainMap::zero(&at[x], &at[y]),
            };
            along.insert((x, y), map);
        }
        let diagram = DiagComplex::new(shape, at, along).expect("extension diagram commutes");
        SnObject { n: 2, diagram }
    }

    pub fn from_sn(s: &SnObject) -> Result<ExtObject> {
        if s.n != 2 {
            return Err(Error::Shape(format!("extensions are S_2 objects, got S_{}", s.n)));
        }
        ExtObject::new(s.map((0, 1), (0, 2)), s.map((0, 2), (1, 2)))
    }
}

/// `a >-> a ⊕ b ->> b` by coordinate inclusion and projection.
pub fn ext_split(a: &Complex, b: &Complex) -> Result<ExtObject> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring(), b.ring()));
    }
    let ring = a.ring();
    let c = Complex::direct_sum(&[a, b])?;
    let mono = ChainMap::from_fn(a, &c, |n| {
        Mat::vstack(&[&Mat::identity(ring, a.rank(n)), &Mat::zeros(ring, b.rank(n), a.rank(n))])
    })?;
    let epi = ChainMap::from_fn(&c, b, |n| {
        Mat::hstack(&[&Mat::zeros(ring, b.rank(n), a.rank(n)), &Mat::identity(ring, b.rank(n))])
    })?;
    ExtObject::new(mono, epi)
}

pub fn ext_s(e: &ExtObject) -> &Complex {
    e.mono.src()
}

pub fn ext_t(e: &ExtObject) -> &Complex {
    e.mono.dst()
}

pub fn ext_q(e: &ExtObject) -> &Complex {
    e.epi.dst()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Ring = Ring::Integers;

    fn inclusion() -> Filtration {
        let a = Complex::unit(Z);
        let b = Complex::concentrated(Z, 0, 2);
        let f = ChainMap::from_fn(&a, &b, |_| Mat::lit(Z, &[&[1], &[0]])).unwrap();
        Filtration::new(vec![a, b], vec![f]).unwrap()
    }

    #[test]
    fn single_object() {
        let a = Complex::two_term(0, Mat::lit(Z, &[&[2]]));
        let s = from_filtration(&Filtration::single(a.clone())).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.cell(0, 1), &a);
        assert!(s.cell(0, 0).is_zero() && s.cell(1, 1).is_zero());
    }

    #[test]
    fn inclusion_quotient() {
        let s = from_filtration(&inclusion()).unwrap();
        assert_eq!(s.cell(0, 1).ranks(), &[1]);
        assert_eq!(s.cell(0, 2).ranks(), &[2]);
        assert_eq!(s.cell(1, 2).ranks(), &[1]);
        assert_eq!(&*s.map((0, 2), (1, 2)).comp(0), &Mat::lit(Z, &[&[0, 1]]));
        assert_eq!(forget_quotients(&s), inclusion());
    }

    #[test]
    fn zero_filtration() {
        let z = Complex::zero(Z);
        let f = Filtration::new(vec![z.clone(), z.clone()], vec![ChainMap::identity(&z)]).unwrap();
        let s = from_filtration(&f).unwrap();
        assert_eq!(s, SnObject::zero(Z, 2));
    }

    #[test]
    fn faces_and_degeneracies() {
        let s = from_filtration(&inclusion()).unwrap();
        let e = ExtObject::from_sn(&s).unwrap();
        let d1 = s.face(1).unwrap();
        assert_eq!(d1.cell(0, 1), ext_t(&e));
        for i in 0..=2 {
            assert_eq!(s.degeneracy(i).unwrap().face(i).unwrap(), s);
            assert_eq!(s.degeneracy(i).unwrap().face(i + 1).unwrap(), s);
        }
        assert!(matches!(s.face(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn validator_pinpoints_triple() {
        let a = Complex::unit(Z);
        let two = ChainMap::from_fn(&a, &a, |_| Mat::lit(Z, &[&[2]])).unwrap();
        let e = ExtObject::new(two, ChainMap::zero(&a, &Complex::zero(Z)));
        assert!(matches!(e, Err(Error::SnViolation { i: 0, j: 1, k: 2, degree: 0, .. })));
    }

    #[test]
    fn split_extension() {
        let a = Complex::unit(Z);
        let b = Complex::concentrated(Z, 0, 2);
        let e = ext_split(&a, &b).unwrap();
        assert_eq!(ext_s(&e), &a);
        assert_eq!(ext_q(&e), &b);
        assert_eq!(ext_t(&e).euler_characteristic(), 3);
        let beta = ext_split(&Complex::zero(Z), &b).unwrap();
        assert_eq!(ext_t(&beta), &b);
        assert_eq!(forget_quotients(&e.to_sn()).steps()[0], e.mono().clone());
    }
}
