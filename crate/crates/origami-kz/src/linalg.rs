//! Small exact matrices: `i64` integer matrices, 2x2 matrices for
//! SL(2,Z), and Gaussian elimination over the rationals (arbitrary
//! precision, no floating point).

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: ({0}x{1}) vs ({2}x{3})")]
    DimMismatch(usize, usize, usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix inverse is not integral")]
    NotIntegral,
}

/// 2x2 integer matrix, row major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Exact inverse; requires `det = ±1`.
    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        assert!(d == 1 || d == -1, "inverse requires det ±1, got {d}");
        Mat2([
            [d * self.0[1][1], -d * self.0[0][1]],
            [-d * self.0[1][0], d * self.0[0][0]],
        ])
    }

    pub fn neg(&self) -> Mat2 {
        Mat2([
            [-self.0[0][0], -self.0[0][1]],
            [-self.0[1][0], -self.0[1][1]],
        ])
    }

    pub fn pow(&self, k: i64) -> Mat2 {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut out = Mat2::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            out = out * base;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

/// Dense integer matrix, row major. Entries stay well inside `i64` for
/// every computation in this crate; overflow panics in debug builds.
/// Serializes as a JSON array of rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    nrows: usize,
    ncols: usize,
    data: Vec<i64>,
}

impl Serialize for IMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(IMat::from_rows(&rows))
    }
}

impl IMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IMat { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IMat { nrows, ncols, data: rows.concat() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in mul");
        let mut out = IMat::zero(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &IMat) -> IMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        IMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn sub(&self, rhs: &IMat) -> IMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        IMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, c: i64) -> IMat {
        let data = self.data.iter().map(|a| a * c).collect();
        IMat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols && *self == IMat::identity(self.nrows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn pow(&self, k: i64) -> IMat {
        assert_eq!(self.nrows, self.ncols);
        let base = if k < 0 { self.inverse_unimodular().expect("invertible") } else { self.clone() };
        let mut out = IMat::identity(self.nrows);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn rank(&self) -> usize {
        QMat::from_int(self).rank()
    }

    pub fn det(&self) -> BigInt {
        QMat::from_int(self).det().to_integer()
    }

    /// Exact inverse of an integer matrix whose inverse is again integral
    /// (determinant ±1). Errors on singular or non-unimodular input.
    pub fn inverse_unimodular(&self) -> Result<IMat, LinAlgError> {
        let inv = QMat::from_int(self).inverse()?;
        inv.to_int().ok_or(LinAlgError::NotIntegral)
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IMat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense rational matrix for exact rank / kernel / solve computations.
#[derive(Clone, PartialEq)]
pub struct QMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMat { nrows, ncols, data: vec![Q::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_int(m: &IMat) -> Self {
        QMat {
            nrows: m.nrows,
            ncols: m.ncols,
            data: m.data.iter().map(|&a| q(a)).collect(),
        }
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        QMat { nrows, ncols, data: rows.concat() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = QMat::zero(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let t = &a * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn transposed(&self) -> QMat {
        let mut t = QMat::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Integer matrix with the same entries, if all entries are integers.
    pub fn to_int(&self) -> Option<IMat> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            if !v.is_integer() {
                return None;
            }
            data.push(i64::try_from(v.to_integer()).ok()?);
        }
        Some(IMat { nrows: self.nrows, ncols: self.ncols, data })
    }

    /// Row echelon form (in place copy); returns pivot columns.
    fn echelon(mut self) -> (QMat, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(pr) = (r..self.nrows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.ncols {
                    let (a, b) = (self[(r, j)].clone(), self[(pr, j)].clone());
                    self[(r, j)] = b;
                    self[(pr, j)] = a;
                }
            }
            let inv = self[(r, c)].recip();
            for j in c..self.ncols {
                let t = &self[(r, j)] * &inv;
                self[(r, j)] = t;
            }
            for i in 0..self.nrows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.ncols {
                        let t = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (self, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().1.len()
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.nrows, self.ncols);
        // elimination without normalizing pivots, tracking swaps
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..m.ncols {
            let Some(pr) = (c..m.nrows).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if pr != c {
                for j in 0..m.ncols {
                    let (a, b) = (m[(c, j)].clone(), m[(pr, j)].clone());
                    m[(c, j)] = b;
                    m[(pr, j)] = a;
                }
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..m.nrows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.ncols {
                    let t = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<QMat, LinAlgError> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = QMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (ech, pivots) = aug.echelon();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(LinAlgError::Singular);
        }
        let mut inv = QMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = ech[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (ech, pivots) = self.clone().echelon();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.ncols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![Q::zero(); self.ncols];
            x[free] = Q::one();
            for (c, pr) in pivot_set.iter().enumerate() {
                if let Some(r) = pr {
                    x[c] = -ech[(*r, free)].clone();
                }
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `Mx = b` with free variables set to zero, choosing
    /// pivots left to right (so leading columns are preferred).
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.nrows, b.len());
        let mut aug = QMat::zero(self.nrows, self.ncols + 1);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.ncols)] = b[i].clone();
        }
        let (ech, pivots) = aug.echelon();
        // inconsistent if a pivot lands in the augmented column
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = ech[(r, self.ncols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.ncols + j]
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            writeln!(f, "  {:?}", self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

/// Scale a rational vector to a primitive integer vector (positive leading
/// denominator cleared, gcd one). Zero vectors map to zero.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<i64> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| i64::try_from(x / &g).expect("entry fits i64"))
        .collect()
}

/// gcd of two i64s, nonnegative.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}
