//! Canonical homotopy pullback and pushout, with the cone, cylinder and
//! cocylinder as special cases, plus shifts and tensor products.

use super::{span, ChainMap, Complex, Homotopy};
use crate::linalg::{Mat, Ring};
use crate::{Error, Result};

/// Matrix assembled from blocks on a grid of row and column sizes.
fn blocks(ring: Ring, rows: &[usize], cols: &[usize], entries: &[(usize, usize, Mat)]) -> Mat {
    let total_rows = rows.iter().sum();
    let total_cols = cols.iter().sum();
    let mut out = Mat::zeros(ring, total_rows, total_cols);
    for (bi, bj, m) in entries {
        let r0: usize = rows[..*bi].iter().sum();
        let c0: usize = cols[..*bj].iter().sum();
        debug_assert_eq!(m.shape(), (rows[*bi], cols[*bj]), "block ({bi},{bj})");
        out.set_block(r0, c0, m);
    }
    out
}

fn window(lo_hi: &[(i32, i32)]) -> (i32, i32) {
    let live: Vec<&(i32, i32)> = lo_hi.iter().filter(|(lo, hi)| lo <= hi).collect();
    if live.is_empty() {
        return (0, -1);
    }
    (live.iter().map(|w| w.0).min().unwrap(), live.iter().map(|w| w.1).max().unwrap())
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `a[k]`: `rank(n) = a.rank(n + k)` and `diff(n) = (-1)^k a.diff(n + k)`.
pub fn shift(a: &Complex, k: i32) -> Complex {
    let ring = a.ring();
    let s = ring.from_int(sign(k));
    Complex::assemble(ring, a.lo() - k, a.hi() - k, |n| a.rank(n + k), |n| a.diff(n + k).scale(&s))
}

/// `f[k]` with components `f^{n+k}` and no sign.
pub fn shift_map(f: &ChainMap, k: i32) -> ChainMap {
    ChainMap::assemble(&shift(f.src(), k), &shift(f.dst(), k), |n| f.comp(n + k).into_owned())
}

/// `F ×ʰ_A G` with `Pⁿ = Fⁿ ⊕ Aⁿ⁻¹ ⊕ Gⁿ`.
#[derive(Clone, Debug)]
pub struct HPullback {
    pub complex: Complex,
    /// `(x, a, y) ↦ y`
    pub f_prime: ChainMap,
    /// `(x, a, y) ↦ x`
    pub g_prime: ChainMap,
    /// `(x, a, y) ↦ -a`, so `d w + w d = g ∘ f' - f ∘ g'`.
    pub witness: Homotopy,
}

/// Canonical homotopy pullback of `f : F -> A` and `g : G -> A`, with
/// `d(x, a, y) = (d x, -d a + f x - g y, d y)`.
pub fn h_pullback(f: &ChainMap, g: &ChainMap) -> Result<HPullback> {
    if f.dst() != g.dst() {
        return Err(Error::Incompatible("homotopy pullback: codomain mismatch".into()));
    }
    let (fc, ac, gc) = (f.src(), f.dst(), g.src());
    let ring = ac.ring();
    let sizes = |n: i32| [fc.rank(n), ac.rank(n - 1), gc.rank(n)];
    let (lo, hi) = window(&[(fc.lo(), fc.hi()), (ac.lo() + 1, ac.hi() + 1), (gc.lo(), gc.hi())]);
    let complex = Complex::assemble(
        ring,
        lo,
        hi,
        |n| sizes(n).iter().sum(),
        |n| {
            blocks(ring, &sizes(n + 1), &sizes(n), &[
                (0, 0, fc.diff(n).into_owned()),
                (1, 0, f.comp(n).into_owned()),
                (1, 1, -&*ac.diff(n - 1)),
                (1, 2, -&*g.comp(n)),
                (2, 2, gc.diff(n).into_owned()),
            ])
        },
    );
    let f_prime = ChainMap::assemble(&complex, gc, |n| {
        blocks(ring, &[gc.rank(n)], &sizes(n), &[(0, 2, Mat::identity(ring, gc.rank(n)))])
    });
    let g_prime = ChainMap::assemble(&complex, fc, |n| {
        blocks(ring, &[fc.rank(n)], &sizes(n), &[(0, 0, Mat::identity(ring, fc.rank(n)))])
    });
    let witness = Homotopy::assemble(&complex, ac, |n| {
        let id = Mat::identity(ring, ac.rank(n - 1));
        blocks(ring, &[ac.rank(n - 1)], &sizes(n), &[(0, 1, -&id)])
    });
    Ok(HPullback { complex, f_prime, g_prime, witness })
}

/// `F ⊔ʰ_A G` with `Qⁿ = Fⁿ ⊕ Aⁿ⁺¹ ⊕ Gⁿ`.
#[derive(Clone, Debug)]
pub struct HPushout {
    pub complex: Complex,
    pub inj_f: ChainMap,
    pub inj_g: ChainMap,
    /// `a ↦ (0, a, 0)`, so `d w + w d = inj_f ∘ f - inj_g ∘ g`.
    pub witness: Homotopy,
}

/// Canonical homotopy pushout of `f : A -> F` and `g : A -> G`, with
/// `d(x, a, y) = (d x + f a, -d a, d y - g a)`.
pub fn h_pushout(f: &ChainMap, g: &ChainMap) -> Result<HPushout> {
    if f.src() != g.src() {
        return Err(Error::Incompatible("homotopy pushout: domain mismatch".into()));
    }
    let (ac, fc, gc) = (f.src(), f.dst(), g.dst());
    let ring = ac.ring();
    let sizes = |n: i32| [fc.rank(n), ac.rank(n + 1), gc.rank(n)];
    let (lo, hi) = window(&[(fc.lo(), fc.hi()), (ac.lo() - 1, ac.hi() - 1), (gc.lo(), gc.hi())]);
    let complex = Complex::assemble(
        ring,
        lo,
        hi,
        |n| sizes(n).iter().sum(),
        |n| {
            blocks(ring, &sizes(n + 1), &sizes(n), &[
                (0, 0, fc.diff(n).into_owned()),
                (0, 1, f.comp(n + 1).into_owned()),
                (1, 1, -&*ac.diff(n + 1)),
                (2, 1, -&*g.comp(n + 1)),
                (2, 2, gc.diff(n).into_owned()),
            ])
        },
    );
    let inj_f = ChainMap::assemble(fc, &complex, |n| {
        blocks(ring, &sizes(n), &[fc.rank(n)], &[(0, 0, Mat::identity(ring, fc.rank(n)))])
    });
    let inj_g = ChainMap::assemble(gc, &complex, |n| {
        blocks(ring, &sizes(n), &[gc.rank(n)], &[(2, 0, Mat::identity(ring, gc.rank(n)))])
    });
    let witness = Homotopy::assemble(ac, &complex, |n| {
        blocks(ring, &sizes(n - 1), &[ac.rank(n)], &[(1, 0, Mat::identity(ring, ac.rank(n)))])
    });
    Ok(HPushout { complex, inj_f, inj_g, witness })
}

/// Mapping cone: the homotopy pushout of `A -> 0` and `g`.
pub fn cone(g: &ChainMap) -> Complex {
    let zero = ChainMap::zero(g.src(), &Complex::zero(g.ring()));
    h_pushout(&zero, g).expect("same domain").complex
}

/// Mapping cylinder of `g : A -> G`, the homotopy pushout of `id_A` and `g`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: Complex,
    /// `x ↦ (x, 0, 0)`, degreewise a coordinate inclusion.
    pub j1: ChainMap,
    /// `y ↦ (0, 0, y)`
    pub front: ChainMap,
    /// `(x, a, y) ↦ g x + y`; `r ∘ j1 = g` and `r ∘ front = id`.
    pub retraction: ChainMap,
    /// `(x, a, y) ↦ (0, x, 0)`, so `d K + K d = id - front ∘ r`.
    pub contraction: Homotopy,
}

pub fn cylinder(g: &ChainMap) -> Cylinder {
    let a = g.src();
    let gc = g.dst();
    let ring = a.ring();
    let po = h_pushout(&ChainMap::identity(a), g).expect("same domain");
    let sizes = |n: i32| [a.rank(n), a.rank(n + 1), gc.rank(n)];
    let retraction = ChainMap::assemble(&po.complex, gc, |n| {
        blocks(ring, &[gc.rank(n)], &sizes(n), &[
            (0, 0, g.comp(n).into_owned()),
            (0, 2, Mat::identity(ring, gc.rank(n))),
        ])
    });
    let contraction = Homotopy::assemble(&po.complex, &po.complex, |n| {
        blocks(ring, &sizes(n - 1), &sizes(n), &[(1, 0, Mat::identity(ring, a.rank(n)))])
    });
    Cylinder { complex: po.complex, j1: po.inj_f, front: po.inj_g, retraction, contraction }
}

/// Mapping cocylinder of `g : G -> A`, the homotopy pullback of `id_A` and `g`.
#[derive(Clone, Debug)]
pub struct Cocylinder {
    pub complex: Complex,
    /// `(x, a, y) ↦ y`, a quasi-isomorphism.
    pub l: ChainMap,
    /// `(x, a, y) ↦ x`
    pub projection: ChainMap,
    /// `(x, a, y) ↦ a`, so `d z + z d = projection - g ∘ l`.
    pub z: Homotopy,
    /// `y ↦ (g y, 0, y)`, a strict section of `l`.
    pub section: ChainMap,
}

pub fn cocylinder(g: &ChainMap) -> Cocylinder {
    let gc = g.src();
    let a = g.dst();
    let ring = a.ring();
    let pb = h_pullback(&ChainMap::identity(a), g).expect("same codomain");
    let sizes = |n: i32| [a.rank(n), a.rank(n - 1), gc.rank(n)];
    let section = ChainMap::assemble(gc, &pb.complex, |n| {
        blocks(ring, &sizes(n), &[gc.rank(n)], &[
            (0, 0, g.comp(n).into_owned()),
            (2, 0, Mat::identity(ring, gc.rank(n))),
        ])
    });
    Cocylinder {
        complex: pb.complex,
        l: pb.f_prime,
        projection: pb.g_prime,
        z: pb.witness.neg(),
        section,
    }
}

/// `f = r ∘ j1` through the mapping cylinder, `j1` a degreewise split mono
/// and `r` a homotopy equivalence.
pub fn factor_cyl(f: &ChainMap) -> (ChainMap, ChainMap) {
    let cyl = cylinder(f);
    (cyl.j1, cyl.retraction)
}

/// Total tensor product with `d(x ⊗ y) = dx ⊗ y + (-1)^p x ⊗ dy`.
///
/// In degree `n` the summands `a^p ⊗ b^{n-p}` are ordered by increasing `p`,
/// each with the Kronecker basis ordering.
pub fn tensor(a: &Complex, b: &Complex) -> Result<Complex> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring(), b.ring()));
    }
    let ring = a.ring();
    if a.is_zero() || b.is_zero() {
        return Ok(Complex::zero(ring));
    }
    let ps = |n: i32| -> Vec<i32> {
        (a.lo()..=a.hi()).filter(|&p| b.rank(n - p) > 0 && a.rank(p) > 0).collect()
    };
    let offsets = |n: i32| -> Vec<(i32, usize)> {
        let mut off = 0;
        ps(n)
            .into_iter()
            .map(|p| {
                let o = off;
                off += a.rank(p) * b.rank(n - p);
                (p, o)
            })
            .collect()
    };
    let rank = |n: i32| ps(n).iter().map(|&p| a.rank(p) * b.rank(n - p)).sum();
    let (_, _) = span(&[a, b]);
    let diff = |n: i32| {
        let mut m = Mat::zeros(ring, rank(n + 1), rank(n));
        let src = offsets(n);
        let dst = offsets(n + 1);
        let find = |p: i32| dst.iter().find(|(q, _)| *q == p).map(|(_, o)| *o);
        for &(p, col) in &src {
            let q = n - p;
            if let Some(row) = find(p + 1) {
                let block = a.diff(p).kron(&Mat::identity(ring, b.rank(q)));
                m.set_block(row, col, &block);
            }
            if let Some(row) = find(p) {
                let block = Mat::identity(ring, a.rank(p))
                    .kron(&b.diff(q))
                    .scale(&ring.from_int(sign(p)));
                m.set_block(row, col, &block);
            }
        }
        m
    };
    Ok(Complex::assemble(ring, a.lo() + b.lo(), a.hi() + b.hi(), rank, diff))
}

#[cfg(test)]
mod tests {
    use super::super::homology::homology;
    use super::*;
    use num_bigint::BigInt;

    const Z: Ring = Ring::Integers;

    fn unit() -> Complex {
        Complex::unit(Z)
    }

    fn times_two() -> Complex {
        Complex::two_term(0, Mat::lit(Z, &[&[2]]))
    }

    fn scalar_map(c: &Complex, d: &Complex, v: i64) -> ChainMap {
        ChainMap::from_fn(c, d, |n| Mat::from_i64(Z, d.rank(n), c.rank(n), &[v])).unwrap()
    }

    #[test]
    fn shift_examples() {
        let p = times_two();
        assert_eq!(shift(&p, 0), p);
        assert_eq!(shift(&shift(&p, 1), -1), p);
        assert_eq!(shift(&unit(), 1), Complex::concentrated(Z, -1, 1));
        let s = shift(&p, 1);
        assert_eq!(s.lo(), -1);
        assert_eq!(&*s.diff(-1), &Mat::lit(Z, &[&[-2]]));
    }

    #[test]
    fn pullback_of_identities() {
        let id = ChainMap::identity(&unit());
        let pb = h_pullback(&id, &id).unwrap();
        assert_eq!(pb.complex.rank(0), 2);
        assert_eq!(pb.complex.rank(1), 1);
        assert_eq!(&*pb.complex.diff(0), &Mat::lit(Z, &[&[1, -1]]));
        assert_eq!(homology(&pb.complex, 0).free_rank, 1);
        assert!(homology(&pb.complex, 0).torsion.is_empty());
        assert_eq!(homology(&pb.complex, 1).free_rank, 0);
        // witness equation
        let lhs = id.compose(&pb.f_prime).unwrap();
        let rhs = id.compose(&pb.g_prime).unwrap();
        assert!(pb.witness.witnesses(&lhs, &rhs));
    }

    #[test]
    fn pullback_with_zero_source() {
        let a = unit();
        let f = ChainMap::identity(&a);
        let g = ChainMap::zero(&Complex::zero(Z), &a);
        let pb = h_pullback(&f, &g).unwrap();
        assert!(pb.f_prime.is_zero());
        assert_eq!(pb.complex, h_pullback(&f, &g).unwrap().complex);
        assert_eq!(pb.complex.rank(0), 1);
        assert_eq!(pb.complex.rank(1), 1);
    }

    #[test]
    fn pushout_examples() {
        let zero = Complex::zero(Z);
        let z0 = ChainMap::identity(&zero);
        assert!(h_pushout(&z0, &z0).unwrap().complex.is_zero());

        let a = times_two();
        let to_zero = ChainMap::zero(&a, &zero);
        let id = ChainMap::identity(&a);
        let q = h_pushout(&to_zero, &id).unwrap();
        assert_eq!(q.complex, cone(&id));
        assert!((-2..=2).all(|n| homology(&q.complex, n) == Default::default()));
    }

    #[test]
    fn cone_examples() {
        let id = ChainMap::identity(&unit());
        let c = cone(&id);
        assert_eq!(c, Complex::two_term(-1, Mat::lit(Z, &[&[-1]])));

        let two = scalar_map(&unit(), &unit(), 2);
        let c = cone(&two);
        let h0 = homology(&c, 0);
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.torsion, vec![BigInt::from(2)]);
        assert_eq!(homology(&c, -1), Default::default());
    }

    #[test]
    fn cylinder_identities() {
        let two = scalar_map(&times_two(), &times_two(), 3);
        let cyl = cylinder(&two);
        assert_eq!(cyl.retraction.compose(&cyl.j1).unwrap(), two);
        assert_eq!(cyl.retraction.compose(&cyl.front).unwrap(), ChainMap::identity(two.dst()));
        let back = cyl.front.compose(&cyl.retraction).unwrap();
        assert!(cyl.contraction.witnesses(&ChainMap::identity(&cyl.complex), &back));
    }

    #[test]
    fn cocylinder_identities() {
        let g = scalar_map(&times_two(), &times_two(), -1);
        let co = cocylinder(&g);
        let gl = g.compose(&co.l).unwrap();
        assert!(co.z.witnesses(&co.projection, &gl));
        assert_eq!(co.l.compose(&co.section).unwrap(), ChainMap::identity(g.src()));
    }

    #[test]
    fn tensor_examples() {
        let p = times_two();
        assert_eq!(tensor(&unit(), &p).unwrap(), p);
        let pp = tensor(&p, &p).unwrap();
        assert_eq!((pp.rank(0), pp.rank(1), pp.rank(2)), (1, 2, 1));
        assert_eq!(pp.euler_characteristic(), 0);
        let q = Ring::Rationals;
        let t = tensor(&Complex::concentrated(q, 0, 2), &Complex::concentrated(q, 0, 3)).unwrap();
        assert_eq!(t.euler_characteristic(), 6);
        assert!(matches!(
            tensor(&unit(), &Complex::unit(q)),
            Err(Error::RingMismatch(..))
        ));
    }
}
