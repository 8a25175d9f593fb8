use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::{Ring, Scalar};
use crate::{Error, Result};

/// Dense exact matrix over a [`Ring`], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Mat {
        Mat { ring, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing into the ring.
    ///
    /// Panics on ragged input; `cols` is needed for the `0 x n` case.
    pub fn from_i64(ring: Ring, rows: usize, cols: usize, entries: &[i64]) -> Mat {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Mat { ring, rows, cols, data: entries.iter().map(|&v| ring.from_int(v)).collect() }
    }

    /// Shorthand for small literal matrices: `Mat::lit(Ring::Integers, &[&[2, 4], &[6, 8]])`.
    pub fn lit(ring: Ring, rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let flat: Vec<i64> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().copied()
            })
            .collect();
        Mat::from_i64(ring, rows.len(), cols, &flat)
    }

    pub fn from_scalars(ring: Ring, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| ring.try_reduce(x)).collect::<Result<Vec<_>>>()?;
        Ok(Mat { ring, rows, cols, data })
    }

    pub(crate) fn from_raw(ring: Ring, rows: usize, cols: usize, data: Vec<Scalar>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat { ring, rows, cols, data }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let v = self.ring.norm(v);
        self.data[i * self.cols + j] = v;
    }

    pub fn set_int(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = self.ring.from_int(v);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.ring, self.rows)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let ring = self.ring;
        Mat {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| ring.mul(x, c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let mut out = vec![Scalar::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        if let Ring::PrimeField(_) = ring {
            out = out.into_iter().map(|x| ring.norm(x)).collect();
        }
        Ok(Mat { ring, rows: self.rows, cols: other.cols, data: out })
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Mat {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        Mat {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Sub-block `rows r0..r0+nr`, `cols c0..c0+nc`.
    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Mat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        let mut out = Vec::with_capacity(nr * nc);
        for i in r0..r0 + nr {
            out.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + nc]);
        }
        Mat { ring: self.ring, rows: nr, cols: nc, data: out }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.data[i * b.cols + j].clone();
            }
        }
    }

    pub fn hstack(parts: &[&Mat]) -> Mat {
        let first = parts.first().expect("hstack of nothing");
        let rows = first.rows;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(first.ring, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Mat]) -> Mat {
        let first = parts.first().expect("vstack of nothing");
        let cols = first.cols;
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(first.ring, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let ring = parts.first().expect("block_diag of nothing").ring;
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Kronecker product: entry `(i*rows(b)+k, j*cols(b)+l)` is `a[i,j] * b[k,l]`.
    pub fn kron(&self, b: &Mat) -> Mat {
        assert_eq!(self.ring, b.ring, "ring mismatch");
        let ring = self.ring;
        let mut out = Mat::zeros(ring, self.rows * b.rows, self.cols * b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let v = b.get(k, l);
                        if !v.is_zero() {
                            out.data[(i * b.rows + k) * out.cols + j * b.cols + l] = ring.mul(a, v);
                        }
                    }
                }
            }
        }
        out
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn mul(self, rhs: &'a Mat) -> Mat {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn add(self, rhs: &'a Mat) -> Mat {
        let ring = self.ring;
        self.zip_with(rhs, |a, b| ring.add(a, b))
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn sub(self, rhs: &'a Mat) -> Mat {
        let ring = self.ring;
        self.zip_with(rhs, |a, b| ring.sub(a, b))
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        let ring = self.ring;
        Mat {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| ring.neg(x)).collect(),
        }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
