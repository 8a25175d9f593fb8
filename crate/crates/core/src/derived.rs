//! Morphisms of the bounded derived category as roofs, derived Hom groups,
//! and the strictification of homotopy commutative squares.

use num_bigint::BigInt;

use crate::complex::{
    cocylinder, cylinder, h_pullback, is_quasi_iso, right_homotopy_inverse, solve_homotopy,
    span, support, ChainMap, Complex, Homotopy, System,
};
use crate::linalg::{self, as_integer, is_admissible_mono};
use crate::{Error, Result};

/// `X <-s- Z -f-> Y` with `s` a quasi-isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roof {
    s: ChainMap,
    f: ChainMap,
}

impl Roof {
    pub fn new(s: ChainMap, f: ChainMap) -> Result<Roof> {
        if s.src() != f.src() {
            return Err(Error::Incompatible("roof legs start at different complexes".into()));
        }
        if !is_quasi_iso(&s) {
            return Err(Error::NotQuasiIso);
        }
        Ok(Roof { s, f })
    }

    /// The roof `X = X -f-> Y` of an honest chain map.
    pub fn from_map(f: ChainMap) -> Roof {
        Roof { s: ChainMap::identity(f.src()), f }
    }

    pub fn apex(&self) -> &Complex {
        self.s.src()
    }

    pub fn src(&self) -> &Complex {
        self.s.dst()
    }

    pub fn dst(&self) -> &Complex {
        self.f.dst()
    }

    pub fn s(&self) -> &ChainMap {
        &self.s
    }

    pub fn f(&self) -> &ChainMap {
        &self.f
    }
}

/// `second ∘ first` through the homotopy pullback of `second.s` and `first.f`.
pub fn roof_compose(second: &Roof, first: &Roof) -> Result<Roof> {
    if first.dst() != second.src() {
        return Err(Error::Incompatible("roofs are not composable".into()));
    }
    let pb = h_pullback(&second.s, &first.f)?;
    // the leg over the quasi-isomorphism second.s
    let s = first.s.compose(&pb.f_prime)?;
    let f = second.f.compose(&pb.g_prime)?;
    Ok(Roof { s, f })
}

/// An honest chain map `g : X -> Y` equal to `f ∘ s⁻¹` in the derived category.
pub fn roof_normalize(r: &Roof) -> Result<ChainMap> {
    if r.s.src() == r.s.dst() && r.s == ChainMap::identity(r.apex()) {
        return Ok(r.f.clone());
    }
    let (inv, _) = right_homotopy_inverse(&r.s)
        .ok_or_else(|| Error::Internal("quasi-isomorphism without a homotopy inverse".into()))?;
    r.f.compose(&inv)
}

/// Whether two roofs with the same endpoints define the same derived morphism.
pub fn roof_eq(a: &Roof, b: &Roof) -> bool {
    if a.src() != b.src() || a.dst() != b.dst() {
        return false;
    }
    let (ga, gb) = match (roof_normalize(a), roof_normalize(b)) {
        (Ok(ga), Ok(gb)) => (ga, gb),
        _ => return false,
    };
    matches!(solve_homotopy(&ga, &gb), Ok(Some(_)))
}

/// `Z^free_rank ⊕ ⊕ Z/t` with chain maps representing the generators.
#[derive(Clone, Debug)]
pub struct DerivedHomGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// Torsion generators first, in the order of `torsion`, then free ones.
    pub representatives: Vec<ChainMap>,
}

/// Chain maps `x -> y` as the kernel of one linear system: the degrees with
/// unknown components, the system, and a basis of its kernel as columns.
fn chain_map_lattice(x: &Complex, y: &Complex) -> (Vec<i32>, System, linalg::Mat) {
    let degrees: Vec<i32> = support(x, y).collect();
    let (lo, hi) = span(&[x, y]);
    // d_Y f^n - f^{n+1} d_X = 0
    let mut maps = System::new(x.ring());
    let unknowns: Vec<usize> =
        degrees.iter().map(|&n| maps.unknown(y.rank(n), x.rank(n))).collect();
    let index = |n: i32| degrees.iter().position(|&d| d == n).map(|i| unknowns[i]);
    for n in lo - 1..=hi {
        if y.rank(n + 1) == 0 || x.rank(n) == 0 {
            continue;
        }
        let eq = maps.equation(y.rank(n + 1), x.rank(n));
        if let Some(u) = index(n) {
            maps.term(eq, u, Some(y.diff(n).into_owned()), None);
        }
        if let Some(u) = index(n + 1) {
            maps.term(eq, u, None, Some(-&*x.diff(n)));
        }
    }
    let cycles = linalg::kernel_basis(&maps.matrix());
    (degrees, maps, cycles)
}

/// A basis of the module of chain maps `x -> y`.
pub fn chain_map_basis(x: &Complex, y: &Complex) -> Vec<ChainMap> {
    let (degrees, maps, cycles) = chain_map_lattice(x, y);
    (0..cycles.cols())
        .map(|col| {
            let comps = degrees.iter().copied().zip(maps.unpack(&cycles, col)).collect();
            ChainMap::new(x.clone(), y.clone(), comps).expect("kernel vectors are chain maps")
        })
        .collect()
}

/// Chain maps `x -> y` modulo null-homotopic ones.
///
/// For bounded complexes of free modules this is `Hom` in the derived category.
pub fn derived_hom(x: &Complex, y: &Complex) -> Result<DerivedHomGroup> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch(x.ring(), y.ring()));
    }
    let ring = x.ring();
    let (degrees, maps, cycles) = chain_map_lattice(x, y);

    // boundaries d k + k d, written in the same coordinates
    let mut nulls = System::new(ring);
    let ks: Vec<(i32, usize)> = (x.lo()..=x.hi())
        .filter(|&n| x.rank(n) > 0 && y.rank(n - 1) > 0)
        .map(|n| (n, nulls.unknown(y.rank(n - 1), x.rank(n))))
        .collect();
    for &n in &degrees {
        let eq = nulls.equation(y.rank(n), x.rank(n));
        for &(m, k) in &ks {
            if m == n {
                nulls.term(eq, k, Some(y.diff(n - 1).into_owned()), None);
            } else if m == n + 1 {
                nulls.term(eq, k, None, Some(x.diff(n).into_owned()));
            }
        }
    }
    let boundaries = nulls.matrix();
    let relations = linalg::solve(&cycles, &boundaries)?
        .ok_or_else(|| Error::Internal("null-homotopic map outside the chain map lattice".into()))?;

    let (pivots, uinv) = linalg::quotient_presentation(&relations);
    let generators = &cycles * &uinv;
    let as_map = |col: usize| -> ChainMap {
        let blocks = maps.unpack(&generators, col);
        let comps = degrees.iter().zip(blocks).map(|(&n, m)| (n, m)).collect();
        ChainMap::new(x.clone(), y.clone(), comps).expect("kernel vectors are chain maps")
    };
    let mut torsion = Vec::new();
    let mut representatives = Vec::new();
    for (i, p) in pivots.iter().enumerate() {
        if !ring.is_unit(p) {
            torsion.push(as_integer(p).clone());
            representatives.push(as_map(i));
        }
    }
    let free_rank = cycles.cols() - pivots.len();
    for i in pivots.len()..cycles.cols() {
        representatives.push(as_map(i));
    }
    Ok(DerivedHomGroup { free_rank, torsion, representatives })
}

/// A homotopy between maps of arrows `(X0 -> X1) => (A0 -> A1)`: one homotopy
/// per vertex, compatible with the two arrows.
#[derive(Clone, Debug)]
pub struct ArrowHomotopy {
    pub at_source: Homotopy,
    pub at_target: Homotopy,
}

impl ArrowHomotopy {
    /// Whether this witnesses `(p0, p1) - (q0, q1)` between the arrow `top`
    /// and the arrow `bottom`.
    pub fn witnesses(
        &self,
        top: &ChainMap,
        bottom: &ChainMap,
        (p0, p1): (&ChainMap, &ChainMap),
        (q0, q1): (&ChainMap, &ChainMap),
    ) -> bool {
        if !self.at_source.witnesses(p0, q0) || !self.at_target.witnesses(p1, q1) {
            return false;
        }
        let (lo, hi) = span(&[top.src(), top.dst()]);
        (lo..=hi + 1).all(|n| {
            &*bottom.comp(n - 1) * &*self.at_source.comp(n) == &*self.at_target.comp(n) * &*top.comp(n)
        })
    }
}

/// A square `X0 -top-> Y -right-> A1` over `X0 -left-> A0 -bottom-> A1`
/// commuting strictly, with a second map `other_left` homotopic to `left`
/// via `d m + m d = other_left - left`.
#[derive(Clone, Debug)]
pub struct HomotopySquare {
    pub top: ChainMap,
    pub right: ChainMap,
    pub bottom: ChainMap,
    pub left: ChainMap,
    pub other_left: ChainMap,
    pub m: Homotopy,
}

/// The output of [`strictify_square`]: `X1` is the cocylinder of `right`.
#[derive(Clone, Debug)]
pub struct StrictSquares {
    pub apex: Complex,
    /// `X0 -> X1`
    pub top: ChainMap,
    /// `X1 -> Y`, a quasi-isomorphism with `l ∘ top = old top`.
    pub l: ChainMap,
    /// `right ∘ l`, making a strict square with `left`.
    pub right_left: ChainMap,
    /// Makes a strict square with `other_left`.
    pub right_other: ChainMap,
    /// Witnesses `(other_left, right_other) - (left, right_left)`.
    pub homotopy: ArrowHomotopy,
}

fn first_difference(a: &ChainMap, b: &ChainMap) -> Option<i32> {
    let (lo, hi) = span(&[a.src(), a.dst()]);
    (lo..=hi).find(|&n| a.comp(n) != b.comp(n))
}

fn check_arrow(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Incompatible(what.into()))
    }
}

/// Replaces a square that commutes only up to the homotopy `m` by two strict ones.
pub fn strictify_square(sq: &HomotopySquare) -> Result<StrictSquares> {
    let (x0, y) = (sq.top.src(), sq.top.dst());
    let (a0, a1) = (sq.bottom.src(), sq.bottom.dst());
    check_arrow(sq.right.src() == y && sq.right.dst() == a1, "right edge does not fit")?;
    check_arrow(sq.left.src() == x0 && sq.left.dst() == a0, "left edge does not fit")?;
    check_arrow(sq.other_left.is_parallel(&sq.left), "second left edge does not fit")?;
    check_arrow(sq.m.src() == x0 && sq.m.dst() == a0, "homotopy does not fit")?;

    let around_top = sq.right.compose(&sq.top)?;
    let around_left = sq.bottom.compose(&sq.left)?;
    if let Some(degree) = first_difference(&around_top, &around_left) {
        return Err(Error::Hypothesis { degree, what: "square does not commute".into() });
    }
    let target = sq.other_left.sub(&sq.left)?;
    if let Some(degree) = first_difference(&sq.m.boundary(), &target) {
        return Err(Error::Hypothesis { degree, what: "homotopy does not witness the edges".into() });
    }

    let co = cocylinder(&sq.right);
    let p = &co.complex;
    // (x, a, y) coordinates of the cocylinder
    let top = ChainMap::from_fn(x0, p, |n| {
        let first = &*sq.bottom.comp(n) * &*sq.other_left.comp(n);
        let middle = &*sq.bottom.comp(n - 1) * &*sq.m.comp(n);
        let last = sq.top.comp(n).into_owned();
        let stacked = linalg::Mat::vstack(&[&first, &middle, &last]);
        debug_assert_eq!(stacked.shape(), (p.rank(n), x0.rank(n)));
        stacked
    })?;
    let right_left = sq.right.compose(&co.l)?;
    let at_target = co.z.clone();
    Ok(StrictSquares {
        apex: p.clone(),
        top,
        l: co.l,
        right_left,
        right_other: co.projection,
        homotopy: ArrowHomotopy { at_source: sq.m.clone(), at_target },
    })
}

/// A strictly commuting map of roofs
/// `A0 <-s0- Y0 -f0-> C0` to `A1 <-s1- Y1 -f1-> C1` along `a`, `y`, `c`, and a
/// second representative `A0 <-t- U -h-> C0` of the bottom roof with common
/// denominator `Y0 <-u- X0 -v-> U`, `d ms + ms d = t v - s0 u` and
/// `d mf + mf d = h v - f0 u`.
#[derive(Clone, Debug)]
pub struct ArrowRoofs {
    pub a: ChainMap,
    pub s0: ChainMap,
    pub s1: ChainMap,
    pub y: ChainMap,
    pub f0: ChainMap,
    pub f1: ChainMap,
    pub c: ChainMap,
    pub t: ChainMap,
    pub h: ChainMap,
    pub u: ChainMap,
    pub v: ChainMap,
    pub ms: Homotopy,
    pub mf: Homotopy,
}

/// The lifted representative `A1 <-q- X1 -g-> C1` over `A0 <-tv- X0 -hv-> C0`.
#[derive(Clone, Debug)]
pub struct LiftedArrow {
    pub apex: Complex,
    /// `X0 -> X1`, a degreewise split monomorphism.
    pub x: ChainMap,
    pub q: ChainMap,
    pub g: ChainMap,
    pub bottom_s: ChainMap,
    pub bottom_f: ChainMap,
}

impl LiftedArrow {
    pub fn top_roof(&self) -> Result<Roof> {
        Roof::new(self.q.clone(), self.g.clone())
    }

    pub fn bottom_roof(&self) -> Result<Roof> {
        Roof::new(self.bottom_s.clone(), self.bottom_f.clone())
    }
}

/// Two strictifications, the first through the cocylinder of `s1`, the second
/// through the cocylinder of `f1 ∘ l`, then a cylinder to make `x` split mono.
pub fn lift_arrow_representative(d: &ArrowRoofs) -> Result<LiftedArrow> {
    let around_top = d.a.compose(&d.s0)?;
    let around_bottom = d.s1.compose(&d.y)?;
    if let Some(degree) = first_difference(&around_top, &around_bottom) {
        return Err(Error::Hypothesis { degree, what: "left square does not commute".into() });
    }
    let around_top = d.c.compose(&d.f0)?;
    let around_bottom = d.f1.compose(&d.y)?;
    if let Some(degree) = first_difference(&around_top, &around_bottom) {
        return Err(Error::Hypothesis { degree, what: "right square does not commute".into() });
    }
    let tv = d.t.compose(&d.v)?;
    let hv = d.h.compose(&d.v)?;

    let first = strictify_square(&HomotopySquare {
        top: d.y.compose(&d.u)?,
        right: d.s1.clone(),
        bottom: d.a.clone(),
        left: d.s0.compose(&d.u)?,
        other_left: tv.clone(),
        m: d.ms.clone(),
    })?;
    let second = strictify_square(&HomotopySquare {
        top: first.top.clone(),
        right: d.f1.compose(&first.l)?,
        bottom: d.c.clone(),
        left: d.f0.compose(&d.u)?,
        other_left: hv.clone(),
        m: d.mf.clone(),
    })?;
    let q_pre = first.right_other.compose(&second.l)?;
    let cyl = cylinder(&second.top);
    let q = q_pre.compose(&cyl.retraction)?;
    let g = second.right_other.compose(&cyl.retraction)?;
    let x = cyl.j1;
    debug_assert!(split_mono_degree(&x).is_none());
    Ok(LiftedArrow { apex: cyl.complex, x, q, g, bottom_s: tv, bottom_f: hv })
}

/// First degree where a component is not an admissible monomorphism.
pub(crate) fn split_mono_degree(f: &ChainMap) -> Option<i32> {
    let (lo, hi) = span(&[f.src(), f.dst()]);
    (lo..=hi).find(|&n| !is_admissible_mono(&f.comp(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;
    use crate::complex::{cone, shift};
    use crate::linalg::Mat;
    use std::collections::BTreeMap;

    const Z: Ring = Ring::Integers;

    fn times_two() -> Complex {
        Complex::two_term(0, Mat::lit(Z, &[&[2]]))
    }

    #[test]
    fn identity_roof_is_neutral() {
        let p = times_two();
        let f = ChainMap::identity(&p).scale(&Z.from_int(3));
        let r = Roof::from_map(f.clone());
        let id = Roof::from_map(ChainMap::identity(&p));
        assert!(roof_eq(&roof_compose(&id, &r).unwrap(), &r));
        assert!(roof_eq(&roof_compose(&r, &id).unwrap(), &r));
    }

    #[test]
    fn strict_maps_compose_as_roofs() {
        let p = times_two();
        let f = ChainMap::identity(&p).scale(&Z.from_int(3));
        let g = ChainMap::identity(&p).scale(&Z.from_int(5));
        let composite = Roof::from_map(g.compose(&f).unwrap());
        let via = roof_compose(&Roof::from_map(g), &Roof::from_map(f)).unwrap();
        assert!(roof_eq(&via, &composite));
    }

    #[test]
    fn normalizing_through_a_cylinder() {
        let p = times_two();
        let f = ChainMap::identity(&p).scale(&Z.from_int(3));
        let cyl = cylinder(&f);
        let h = cyl.retraction.clone();
        let r = Roof::new(cyl.retraction.clone(), h).unwrap();
        let g = roof_normalize(&r).unwrap();
        assert_eq!(g, ChainMap::identity(&p));
        assert!(roof_eq(&r, &Roof::from_map(g)));
    }

    #[test]
    fn identity_and_zero_differ_on_torsion_complex() {
        let p = times_two();
        let id = Roof::from_map(ChainMap::identity(&p));
        let zero = Roof::from_map(ChainMap::zero(&p, &p));
        assert!(roof_eq(&id, &id));
        assert!(!roof_eq(&id, &zero));
    }

    #[test]
    fn homotopic_maps_give_equal_roofs() {
        let p = times_two();
        let mut comps = BTreeMap::new();
        comps.insert(1, Mat::lit(Z, &[&[1]]));
        let k = Homotopy::new(p.clone(), p.clone(), comps).unwrap();
        let f = ChainMap::identity(&p);
        let g = f.add(&k.boundary()).unwrap();
        assert!(roof_eq(&Roof::from_map(f), &Roof::from_map(g)));
    }

    #[test]
    fn derived_hom_examples() {
        let u = Complex::unit(Z);
        let h = derived_hom(&u, &u).unwrap();
        assert_eq!((h.free_rank, h.torsion.len()), (1, 0));

        let p = times_two();
        let h = derived_hom(&p, &p).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        assert!(!roof_eq(&Roof::from_map(h.representatives[0].clone()), &Roof::from_map(ChainMap::zero(&p, &p))));

        let h = derived_hom(&p, &shift(&p, 1)).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn strict_square_stays_strict() {
        let c = cone(&ChainMap::identity(&Complex::unit(Z)));
        let id = ChainMap::identity(&c);
        let sq = HomotopySquare {
            top: id.clone(),
            right: id.clone(),
            bottom: id.clone(),
            left: id.clone(),
            other_left: id.clone(),
            m: Homotopy::zero(&c, &c),
        };
        let out = strictify_square(&sq).unwrap();
        assert_eq!(out.right_left.compose(&out.top).unwrap(), sq.bottom.compose(&sq.left).unwrap());
        assert_eq!(out.right_other.compose(&out.top).unwrap(), sq.bottom.compose(&sq.other_left).unwrap());
        assert_eq!(out.l.compose(&out.top).unwrap(), sq.top);
        assert!(out.homotopy.witnesses(
            &out.top,
            &sq.bottom,
            (&sq.other_left, &out.right_other),
            (&sq.left, &out.right_left)
        ));
    }

    #[test]
    fn strictify_reports_failing_degree() {
        let c = cone(&ChainMap::identity(&Complex::unit(Z)));
        let id = ChainMap::identity(&c);
        let sq = HomotopySquare {
            top: id.clone(),
            right: id.clone(),
            bottom: id.scale(&Z.from_int(2)),
            left: id.clone(),
            other_left: id.clone(),
            m: Homotopy::zero(&c, &c),
        };
        assert!(matches!(strictify_square(&sq), Err(Error::Hypothesis { degree: -1, .. })));
    }
}
