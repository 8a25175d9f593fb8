//! Seeded random inputs.
//!
//! Every generator is a pure function of the seed, the stream and the call
//! sequence, so a check can be replayed from `(seed, stream)` alone.
//! Quasi-isomorphisms are built as homotopy equivalences (a map plus a
//! contractible summand, or a cylinder retraction) and then disguised by chain
//! isomorphisms.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{cylinder, shift, solve_homotopy, ChainMap, Complex, Homotopy};
use crate::derived::{chain_map_basis, ArrowRoofs, HomotopySquare, Roof};
use crate::diagram::{pushout_complete, DiagComplex, Poset};
use crate::linalg::{Mat, Ring};
use crate::sconst::{ExtObject, Filtration, SnObject};
use crate::Result;

/// Bounds on generated complexes: ranks per degree and the degree window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub max_rank: usize,
    pub lo: i32,
    pub hi: i32,
}

impl Default for Sizes {
    fn default() -> Sizes {
        Sizes { max_rank: 3, lo: 0, hi: 2 }
    }
}

/// Which of the ways of building a quasi-isomorphism was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiIsoKind {
    /// `[id, ψ] : Y ⊕ E -> Y` with `E` contractible.
    Collapse,
    /// `Y -> Y ⊕ E`.
    Inclusion,
    /// The retraction of a mapping cylinder.
    Retraction,
}

/// An S_n object broken in one place, with the violation the validator must report.
#[derive(Clone, Debug)]
pub struct Corruption {
    pub diagram: DiagComplex,
    pub expected: (usize, usize, usize, i32),
}

pub struct Gen {
    rng: ChaCha8Rng,
    ring: Ring,
    sizes: Sizes,
}

impl Gen {
    pub fn new(seed: u64, ring: Ring, sizes: Sizes) -> Gen {
        Gen::with_stream(seed, 0, ring, sizes)
    }

    /// Independent generators for the same seed, one per case.
    pub fn with_stream(seed: u64, stream: u64, ring: Ring, sizes: Sizes) -> Gen {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { rng, ring, sizes }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn sizes(&self) -> Sizes {
        self.sizes
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    fn small(&mut self) -> i64 {
        self.rng.gen_range(-2..=2)
    }

    fn nonzero(&mut self) -> i64 {
        loop {
            let c = if self.ring == Ring::Integers { *[1, -1, 2, 3, -2].choose(&mut self.rng).unwrap() } else { self.small() };
            if !self.ring.from_int(c).is_zero() {
                return c;
            }
        }
    }

    fn unit(&mut self) -> i64 {
        if self.coin() {
            1
        } else {
            -1
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Mat {
        let data: Vec<i64> = (0..rows * cols).map(|_| self.small()).collect();
        Mat::from_i64(self.ring, rows, cols, &data)
    }

    /// A random invertible matrix and its inverse, from elementary operations.
    pub fn invertible(&mut self, n: usize) -> (Mat, Mat) {
        let ring = self.ring;
        let mut u = Mat::identity(ring, n);
        let mut uinv = Mat::identity(ring, n);
        if n == 0 {
            return (u, uinv);
        }
        for _ in 0..2 * n {
            let (i, j) = (self.below(n), self.below(n));
            let mut e = Mat::identity(ring, n);
            let mut einv = Mat::identity(ring, n);
            if i == j {
                let c = self.unit();
                e.set_int(i, i, c);
                einv.set_int(i, i, c);
            } else {
                let c = self.unit();
                e.set_int(i, j, c);
                einv.set_int(i, j, -c);
            }
            u = &e * &u;
            uinv = &uinv * &einv;
        }
        (u, uinv)
    }

    /// Free summands plus disks `R -c-> R`, conjugated degreewise.
    pub fn complex(&mut self) -> Complex {
        self.complex_with(false)
    }

    /// Disks with unit coefficients only, conjugated degreewise.
    pub fn contractible(&mut self) -> Complex {
        self.complex_with(true)
    }

    /// One disk `R -1-> R` starting in a random degree of the window.
    pub fn disk(&mut self) -> Complex {
        let Sizes { lo, hi, .. } = self.sizes;
        let start = self.rng.gen_range(lo..=hi.max(lo + 1) - 1);
        let c = self.unit();
        let plain = Complex::two_term(start, Mat::from_i64(self.ring, 1, 1, &[c]));
        self.disguise(&plain).0
    }

    fn complex_with(&mut self, contractible: bool) -> Complex {
        let Sizes { max_rank, lo, hi } = self.sizes;
        if max_rank == 0 || hi < lo {
            return Complex::zero(self.ring);
        }
        let mut ranks = Vec::new();
        let mut disks: Vec<Vec<i64>> = Vec::new();
        let mut incoming = 0;
        for n in lo..=hi {
            let room = max_rank - incoming;
            let outgoing = if n == hi { 0 } else { self.rng.gen_range(0..=room) };
            let free = if contractible { 0 } else { self.rng.gen_range(0..=room - outgoing) };
            let coeffs = (0..outgoing).map(|_| if contractible { self.unit() } else { self.nonzero() }).collect();
            ranks.push(incoming + outgoing + free);
            disks.push(coeffs);
            incoming = outgoing;
        }
        let diffs = (0..ranks.len().saturating_sub(1))
            .map(|i| {
                let coeffs = &disks[i];
                let incoming_here = if i == 0 { 0 } else { disks[i - 1].len() };
                let mut d = Mat::zeros(self.ring, ranks[i + 1], ranks[i]);
                for (j, &c) in coeffs.iter().enumerate() {
                    d.set_int(j, incoming_here + j, c);
                }
                d
            })
            .collect();
        let plain = Complex::new(self.ring, lo, ranks, diffs).expect("disks square to zero");
        self.disguise(&plain).0
    }

    /// A chain isomorphic copy `b` of `a`, with `to : a -> b` and `back : b -> a`.
    pub fn disguise(&mut self, a: &Complex) -> (Complex, ChainMap, ChainMap) {
        if a.is_zero() {
            return (a.clone(), ChainMap::identity(a), ChainMap::identity(a));
        }
        let mut us = BTreeMap::new();
        for n in a.lo()..=a.hi() {
            us.insert(n, self.invertible(a.rank(n)));
        }
        let ranks = a.ranks().to_vec();
        let diffs = (a.lo()..a.hi()).map(|n| &(&us[&(n + 1)].0 * &*a.diff(n)) * &us[&n].1).collect();
        let b = Complex::new(self.ring, a.lo(), ranks, diffs).expect("conjugate of a complex");
        let to = ChainMap::from_fn(a, &b, |n| us.get(&n).map_or_else(|| Mat::zeros(self.ring, 0, 0), |u| u.0.clone()))
            .expect("conjugation is a chain map");
        let back = ChainMap::from_fn(&b, a, |n| us.get(&n).map_or_else(|| Mat::zeros(self.ring, 0, 0), |u| u.1.clone()))
            .expect("conjugation is a chain map");
        (b, to, back)
    }

    /// A random combination of a basis of chain maps `src -> dst`.
    pub fn chain_map(&mut self, src: &Complex, dst: &Complex) -> ChainMap {
        let mut f = ChainMap::zero(src, dst);
        for b in chain_map_basis(src, dst) {
            let v = self.small();
            let c = self.ring.from_int(v);
            f = f.add(&b.scale(&c)).expect("parallel");
        }
        f
    }

    pub fn homotopy(&mut self, src: &Complex, dst: &Complex) -> Homotopy {
        let mut comps = BTreeMap::new();
        for n in src.lo()..=src.hi() {
            let (r, c) = (dst.rank(n - 1), src.rank(n));
            if r > 0 && c > 0 {
                comps.insert(n, self.matrix(r, c));
            }
        }
        Homotopy::new(src.clone(), dst.clone(), comps).expect("blocks have homotopy shapes")
    }

    /// `[id, ψ] : y ⊕ e -> y` for a random `ψ : e -> y`.
    pub fn collapse(&mut self, y: &Complex, e: &Complex) -> ChainMap {
        let psi = self.chain_map(e, y);
        let ring = self.ring;
        let sum = Complex::direct_sum(&[y, e]).expect("same ring");
        ChainMap::from_fn(&sum, y, |n| Mat::hstack(&[&Mat::identity(ring, y.rank(n)), &psi.comp(n)]))
            .expect("collapse is a chain map")
    }

    /// `[id; 0] : y -> y ⊕ e`.
    pub fn inclusion(&mut self, y: &Complex, e: &Complex) -> ChainMap {
        let ring = self.ring;
        let sum = Complex::direct_sum(&[y, e]).expect("same ring");
        ChainMap::from_fn(y, &sum, |n| {
            Mat::vstack(&[&Mat::identity(ring, y.rank(n)), &Mat::zeros(ring, e.rank(n), y.rank(n))])
        })
        .expect("inclusion is a chain map")
    }

    pub fn quasi_iso(&mut self) -> ChainMap {
        let kind = *[QuasiIsoKind::Collapse, QuasiIsoKind::Inclusion, QuasiIsoKind::Retraction]
            .choose(&mut self.rng)
            .unwrap();
        self.quasi_iso_of(kind)
    }

    pub fn quasi_iso_of(&mut self, kind: QuasiIsoKind) -> ChainMap {
        let y = self.complex();
        let raw = match kind {
            QuasiIsoKind::Collapse => {
                let e = self.contractible();
                self.collapse(&y, &e)
            }
            QuasiIsoKind::Inclusion => {
                let e = self.contractible();
                self.inclusion(&y, &e)
            }
            QuasiIsoKind::Retraction => {
                let x = self.complex();
                let f = self.chain_map(&x, &y);
                cylinder(&f).retraction
            }
        };
        self.hide(&raw)
    }

    /// `f` conjugated by chain isomorphisms on both ends.
    pub fn hide(&mut self, f: &ChainMap) -> ChainMap {
        let (_, _, back) = self.disguise(f.src());
        let (_, to, _) = self.disguise(f.dst());
        to.compose(f).and_then(|g| g.compose(&back)).expect("composable")
    }

    /// A quasi-isomorphism with the given source.
    pub fn quasi_iso_from(&mut self, y: &Complex) -> ChainMap {
        let e = self.contractible();
        let f = self.inclusion(y, &e);
        let (_, to, _) = self.disguise(f.dst());
        to.compose(&f).expect("composable")
    }

    /// A quasi-iso half of the time, otherwise an arbitrary chain map.
    pub fn any_map(&mut self) -> ChainMap {
        if self.coin() {
            self.quasi_iso()
        } else {
            let (x, y) = (self.complex(), self.complex());
            self.chain_map(&x, &y)
        }
    }

    /// A roof `x <- z -> y` with a constructed quasi-isomorphism.
    pub fn roof(&mut self) -> Roof {
        let s = self.quasi_iso();
        let y = self.complex();
        let f = self.chain_map(s.src(), &y);
        Roof::new(s, f).expect("constructed quasi-isomorphism")
    }

    /// A roof `x <- z -> y` between the given ends.
    pub fn roof_between(&mut self, x: &Complex, y: &Complex) -> Roof {
        let e = self.contractible();
        let s = self.collapse(x, &e);
        let (z, _, back) = self.disguise(s.src());
        let s = s.compose(&back).expect("composable");
        let f = self.chain_map(&z, y);
        Roof::new(s, f).expect("constructed quasi-isomorphism")
    }

    /// `a >-> c ->> b` with `d_c = [[d_a, φ], [0, d_b]]`, disguised.
    pub fn split_extension(&mut self) -> ExtObject {
        let (a, b) = (self.complex(), self.complex());
        self.extension_of(&a, &b)
    }

    pub fn extension_of(&mut self, a: &Complex, b: &Complex) -> ExtObject {
        let ring = self.ring;
        let phi = self.chain_map(b, &shift(a, 1));
        let (lo, hi) = crate::complex::span(&[a, b]);
        let ranks = (lo..=hi).map(|n| a.rank(n) + b.rank(n)).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let mut d = Mat::block_diag(&[&a.diff(n), &b.diff(n)]);
                d.set_block(0, a.rank(n), &phi.comp(n));
                d
            })
            .collect();
        let c = Complex::new(ring, lo, ranks, diffs).expect("twisted differential squares to zero");
        let mono = ChainMap::from_fn(a, &c, |n| {
            Mat::vstack(&[&Mat::identity(ring, a.rank(n)), &Mat::zeros(ring, b.rank(n), a.rank(n))])
        })
        .expect("inclusion is a chain map");
        let epi = ChainMap::from_fn(&c, b, |n| {
            Mat::hstack(&[&Mat::zeros(ring, b.rank(n), a.rank(n)), &Mat::identity(ring, b.rank(n))])
        })
        .expect("projection is a chain map");
        let (_, to, back) = self.disguise(&c);
        let mono = to.compose(&mono).expect("composable");
        let epi = epi.compose(&back).expect("composable");
        ExtObject::new(mono, epi).expect("degreewise split")
    }

    /// `len` objects joined by split monomorphisms.
    pub fn filtration(&mut self, len: usize) -> Filtration {
        if len == 0 {
            return Filtration::new(Vec::new(), Vec::new()).expect("empty filtration");
        }
        let mut objects = vec![self.complex()];
        let mut steps = Vec::new();
        for _ in 1..len {
            let b = self.complex();
            let e = self.extension_of(objects.last().unwrap(), &b);
            objects.push(e.mono().dst().clone());
            steps.push(e.mono().clone());
        }
        Filtration::new(objects, steps).expect("steps are split monomorphisms")
    }

    /// `X_0 -> X_1 -> ... -> X_n` with arbitrary maps.
    pub fn delta_diagram(&mut self, n: usize) -> DiagComplex {
        let at: Vec<Complex> = (0..=n).map(|_| self.complex()).collect();
        let mut along = BTreeMap::new();
        for i in 0..n {
            along.insert((i, i + 1), self.chain_map(&at[i], &at[i + 1]));
        }
        DiagComplex::new(Poset::delta(n), at, along).expect("a chain always commutes")
    }

    /// `(1,0) <- (0,0) >-> (0,1)` with a split monomorphism on top.
    pub fn corner(&mut self) -> DiagComplex {
        let e = self.split_extension();
        let mono = e.mono().clone();
        let a10 = self.complex();
        let leg = self.chain_map(mono.src(), &a10);
        let at = vec![mono.src().clone(), mono.dst().clone(), a10];
        let mut along = BTreeMap::new();
        along.insert((0, 1), mono);
        along.insert((0, 2), leg);
        DiagComplex::new(Poset::corner(), at, along).expect("a corner always commutes")
    }

    /// A strict pushout square with a contractible summand added to the corner.
    pub fn cocartesian_square(&mut self) -> DiagComplex {
        let corner = self.corner();
        let square = pushout_complete(&corner).expect("top edge is split mono");
        let (p, e) = (square.at(&[1, 1]).unwrap().clone(), self.contractible());
        let inc = self.inclusion(&p, &e);
        let (big, to, _) = self.disguise(inc.dst());
        let inc = to.compose(&inc).expect("composable");
        let mut at = square.complexes().to_vec();
        at[3] = big;
        let mut along = square.edges().clone();
        for key in [(1, 3), (2, 3)] {
            let edge = inc.compose(&along[&key]).expect("composable");
            along.insert(key, edge);
        }
        DiagComplex::new(Poset::square(), at, along).expect("still commutes")
    }

    /// A square `right ∘ top = bottom ∘ left` with `other_left = left + (d m + m d)`.
    pub fn homotopy_square(&mut self) -> HomotopySquare {
        let (x0, y, r, a1) = (self.complex(), self.complex(), self.complex(), self.complex());
        let ring = self.ring;
        let top = self.chain_map(&x0, &y);
        let right = self.chain_map(&y, &a1);
        let phi = self.chain_map(&r, &a1);
        let a0 = Complex::direct_sum(&[&y, &r]).expect("same ring");
        let left = ChainMap::from_fn(&x0, &a0, |n| {
            Mat::vstack(&[&top.comp(n), &Mat::zeros(ring, r.rank(n), x0.rank(n))])
        })
        .expect("chain map");
        let bottom =
            ChainMap::from_fn(&a0, &a1, |n| Mat::hstack(&[&right.comp(n), &phi.comp(n)])).expect("chain map");
        let m = self.homotopy(&x0, &a0);
        let other_left = left.add(&m.boundary()).expect("parallel");
        HomotopySquare { top, right, bottom, left, other_left, m }
    }

    /// A strict map of roofs with a second representative of the bottom roof.
    /// With `quasi_isos` both roofs have quasi-isomorphic forward legs.
    pub fn arrow_roofs(&mut self, quasi_isos: bool) -> ArrowRoofs {
        let ring = self.ring;
        let (a0, a1) = (self.complex(), self.complex());
        let a = self.chain_map(&a0, &a1);
        let (e0, e1) = (self.disk(), self.disk());
        let t0 = self.collapse(&a0, &e0);
        let t1 = self.collapse(&a1, &e1);
        let (s0, s1) = (t0, t1);
        let (y0, y1) = (s0.src().clone(), s1.src().clone());
        let eta = self.chain_map(&e0, &e1);
        let psi0 = s0.compose(&self.inclusion_second(&a0, &e0)).expect("composable");
        let psi1 = s1.compose(&self.inclusion_second(&a1, &e1)).expect("composable");
        let corner = a.compose(&psi0).and_then(|x| x.sub(&psi1.compose(&eta)?)).expect("parallel");
        let y = ChainMap::from_fn(&y0, &y1, |n| {
            let upper = Mat::hstack(&[&a.comp(n), &corner.comp(n)]);
            let lower = Mat::hstack(&[&Mat::zeros(ring, e1.rank(n), a0.rank(n)), &eta.comp(n)]);
            Mat::vstack(&[&upper, &lower])
        })
        .expect("triangular chain map");

        let (f0, f1, c) = if quasi_isos {
            let f1 = self.quasi_iso_from(&y1);
            let f0 = ChainMap::identity(&y0);
            let c = f1.compose(&y).expect("composable");
            (f0, f1, c)
        } else {
            let (r, c1) = (self.complex(), self.complex());
            let f1 = self.chain_map(&y1, &c1);
            let c0 = Complex::direct_sum(&[&y0, &r]).expect("same ring");
            let f0 = self.inclusion(&y0, &r);
            let phi = self.chain_map(&r, &c1);
            let fy = f1.compose(&y).expect("composable");
            let c = ChainMap::from_fn(&c0, &c1, |n| Mat::hstack(&[&fy.comp(n), &phi.comp(n)])).expect("chain map");
            (f0, f1, c)
        };

        let (e2, e3) = (self.disk(), self.disk());
        let psi2 = self.chain_map(&e2, &a0);
        let chi = self.chain_map(&e2, f0.dst());
        let u_cx = Complex::direct_sum(&[&y0, &e2]).expect("same ring");
        let t = ChainMap::from_fn(&u_cx, &a0, |n| Mat::hstack(&[&s0.comp(n), &psi2.comp(n)])).expect("chain map");
        let h = ChainMap::from_fn(&u_cx, f0.dst(), |n| Mat::hstack(&[&f0.comp(n), &chi.comp(n)])).expect("chain map");
        let mu = self.chain_map(&e3, &y0);
        let nu1 = self.chain_map(&e3, &y0);
        let nu2 = self.chain_map(&e3, &e2);
        let x0 = Complex::direct_sum(&[&y0, &e3]).expect("same ring");
        let u = ChainMap::from_fn(&x0, &y0, |n| Mat::hstack(&[&Mat::identity(ring, y0.rank(n)), &mu.comp(n)]))
            .expect("chain map");
        let v = ChainMap::from_fn(&x0, &u_cx, |n| {
            let upper = Mat::hstack(&[&Mat::identity(ring, y0.rank(n)), &nu1.comp(n)]);
            let lower = Mat::hstack(&[&Mat::zeros(ring, e2.rank(n), y0.rank(n)), &nu2.comp(n)]);
            Mat::vstack(&[&upper, &lower])
        })
        .expect("triangular chain map");
        let tv = t.compose(&v).expect("composable");
        let s0u = s0.compose(&u).expect("composable");
        let ms = solve_homotopy(&tv, &s0u).expect("parallel").expect("differ on a contractible summand");
        let hv = h.compose(&v).expect("composable");
        let f0u = f0.compose(&u).expect("composable");
        let mf = solve_homotopy(&hv, &f0u).expect("parallel").expect("differ on a contractible summand");
        ArrowRoofs { a, s0, s1, y, f0, f1, c, t, h, u, v, ms, mf }
    }

    fn inclusion_second(&self, y: &Complex, e: &Complex) -> ChainMap {
        let ring = self.ring;
        let sum = Complex::direct_sum(&[y, e]).expect("same ring");
        ChainMap::from_fn(e, &sum, |n| {
            Mat::vstack(&[&Mat::zeros(ring, y.rank(n), e.rank(n)), &Mat::identity(ring, e.rank(n))])
        })
        .expect("inclusion is a chain map")
    }

    /// Breaks a valid S_n object (`n >= 2`) so that exactly one invariant fails first.
    pub fn corrupt(&mut self, s: &SnObject) -> Result<Corruption> {
        let n = s.n();
        let Sizes { lo, hi, .. } = self.sizes;
        let degree = self.rng.gen_range(lo..=hi);
        let extra = Complex::concentrated(self.ring, degree, 1);
        let d = s.diagram();
        let shape = d.shape().clone();
        let (target, expected) = if self.coin() || n < 2 {
            let i = self.below(n + 1);
            ((i, i), (i, i, i, degree))
        } else {
            let i = 1 + self.below(n - 1);
            let j = i + 1 + self.below(n - i);
            ((i, j), (0, i, j, degree))
        };
        let index = shape.index_of(&[target.0, target.1]).expect("cell in range");
        let ring = self.ring;
        let old = d.complexes()[index].clone();
        let grown = Complex::direct_sum(&[&old, &extra]).expect("same ring");
        let mut at = d.complexes().to_vec();
        at[index] = grown.clone();
        let mut along = BTreeMap::new();
        for (&(a, b), f) in d.edges() {
            let g = if b == index {
                ChainMap::from_fn(&at[a], &grown, |k| {
                    Mat::vstack(&[&f.comp(k), &Mat::zeros(ring, extra.rank(k), at[a].rank(k))])
                })?
            } else if a == index {
                ChainMap::from_fn(&grown, &at[b], |k| {
                    Mat::hstack(&[&f.comp(k), &Mat::zeros(ring, at[b].rank(k), extra.rank(k))])
                })?
            } else {
                f.clone()
            };
            along.insert((a, b), g);
        }
        let diagram = DiagComplex::new(shape, at, along)?;
        Ok(Corruption { diagram, expected })
    }
}
