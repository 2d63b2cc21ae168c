//! Small dense linear-algebra kernel.
//!
//! Operators in this crate never exceed a few thousand rows, so everything is
//! stored densely in row-major order. Hermitian eigenvalues and singular values
//! are delegated to `nalgebra`; exact ranks use fraction-free elimination over
//! arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used when deciding whether a matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_real(m: &RealMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| C64::new(m[(i, j)], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn scale(&self, s: C64) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &DenseMatrix) -> Self {
        &(self * other) + &(other * self)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &DenseMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn kron(&self, other: &DenseMatrix) -> Self {
        kron(self, other)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }
}

/// Serialized as `{"re": [[..]], "im": [[..]]}` row by row.
impl serde::Serialize for DenseMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..self.rows)
                .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().map(f).collect())
                .collect()
        };
        let mut st = serializer.serialize_struct("DenseMatrix", 2)?;
        st.serialize_field("re", &part(|z| z.re))?;
        st.serialize_field("im", &part(|z| z.im))?;
        st.end()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::zero() {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product in the standard ordering: entry `(i*rb + k, j*cb + l)`
/// is `a[i][j] * b[k][l]`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = DenseMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == C64::zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a DenseMatrix>) -> DenseMatrix {
    factors
        .into_iter()
        .fold(DenseMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut ev: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn min_eigenvalue_hermitian(m: &DenseMatrix) -> Result<f64> {
    if m.rows() == 0 {
        return Err(Error::Dimension("empty matrix has no eigenvalues".into()));
    }
    Ok(hermitian_eigenvalues(m)?[0])
}

fn check_hermitian(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not square",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let res = m.hermitian_residual();
    if res > HERMITIAN_TOL {
        return Err(Error::NotHermitian(res));
    }
    Ok(())
}

/// Number of singular values exceeding `tol` times the largest one.
pub fn rank_numeric(m: &DenseMatrix, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("rank tolerance must be positive, got {tol}")));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    let sv = m.to_nalgebra().singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * largest).count())
}

/// Applies the transpose to the last qubit of an operator on `r` qubits.
pub fn partial_transpose_last_qubit(m: &DenseMatrix, r: usize) -> Result<DenseMatrix> {
    if r == 0 || r >= usize::BITS as usize {
        return Err(Error::Dimension(format!("qubit count {r} out of range")));
    }
    let dim = 1usize << r;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Dimension(format!(
            "{}x{} matrix does not act on {r} qubits",
            m.rows(),
            m.cols()
        )));
    }
    // Swap the lowest bit of the row index with that of the column index.
    Ok(DenseMatrix::from_fn(dim, dim, |i, j| {
        let i2 = (i & !1) | (j & 1);
        let j2 = (j & !1) | (i & 1);
        m[(i2, j2)]
    }))
}

/// Dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RealMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        RealMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and
    /// the matching eigenvectors as columns.
    pub fn symmetric_eigen(&self) -> Result<(Vec<f64>, RealMatrix)> {
        if self.rows != self.cols {
            return Err(Error::Dimension("symmetric_eigen needs a square matrix".into()));
        }
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = self.rows;
        let eig = DMatrix::from_fn(n, n, |i, j| self[(i, j)]).symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = RealMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    pub fn rank_numeric(&self, tol: f64) -> Result<usize> {
        rank_numeric(&DenseMatrix::from_real(self), tol)
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Exact rational matrix. Entries are kept reduced with positive denominators
/// (guaranteed by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub reduced: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    pub fn from_integers(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_f64(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| ratio_to_f64(&self[(i, j)]))
    }

    /// Exact reduced row echelon form by Gauss-Jordan elimination over the
    /// rationals.
    pub fn row_echelon(&self) -> RowEchelon {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = &a[(i, j)] - &f * &a[(r, j)];
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelon { reduced: a, pivots }
    }

    /// Kernel basis vector attached to the smallest free column, or `None`
    /// when the columns are independent.
    pub fn first_null_vector(&self) -> Option<Vec<BigRational>> {
        let ech = self.row_echelon();
        let free = (0..self.cols).find(|c| !ech.pivots.contains(c))?;
        let mut v = vec![BigRational::zero(); self.cols];
        v[free] = BigRational::one();
        for (row, &p) in ech.pivots.iter().enumerate() {
            v[p] = -ech.reduced[(row, free)].clone();
        }
        Some(v)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rank by Bareiss fraction-free elimination.
///
/// Each row is first scaled by the lcm of its denominators, which leaves the
/// rank unchanged, and elimination then stays inside the integers.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    rank_exact_with_pivots(m).len()
}

/// Pivot columns found by fraction-free elimination; their count is the rank.
pub fn rank_exact_with_pivots(m: &RationalMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let lcm = (0..cols).fold(BigInt::one(), |acc, j| acc.lcm(m[(i, j)].denom()));
            (0..cols)
                .map(|j| {
                    let e = &m[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_y() -> DenseMatrix {
        DenseMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }
    fn pauli_z() -> DenseMatrix {
        DenseMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn kron_identities() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), DenseMatrix::identity(4));

        let zi = kron(&pauli_z(), &i2);
        let expect = DenseMatrix::from_fn(4, 4, |i, j| {
            if i != j {
                C64::zero()
            } else if i < 2 {
                C64::one()
            } else {
                -C64::one()
            }
        });
        assert_eq!(zi, expect);
    }

    #[test]
    fn kron_y_z_squares_to_identity() {
        let yz = kron(&pauli_y(), &pauli_z());
        // Explicit Y (x) Z built entry by entry.
        let i = c(0., 1.);
        let z0 = C64::zero();
        let direct = DenseMatrix::from_vec(
            4,
            4,
            vec![
                z0, z0, -i, z0, //
                z0, z0, z0, i, //
                i, z0, z0, z0, //
                z0, -i, z0, z0,
            ],
        )
        .unwrap();
        assert!(yz.max_abs_diff(&direct) < 1e-15);
        assert!((&yz * &yz).max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn rank_exact_examples() {
        assert_eq!(rank_exact(&RationalMatrix::zeros(3, 4)), 0);

        let chsh_m = RationalMatrix::from_vec(2, 1, vec![rat(1, 2), rat(-1, 2)]).unwrap();
        assert_eq!(rank_exact(&chsh_m), 1);

        let rows = [[1, 1, 1], [-1, -1, 1], [-1, 1, -1], [1, -1, -1]];
        let ebi_m = RationalMatrix::from_fn(4, 3, |i, j| rat(rows[i][j], 3));
        assert_eq!(rank_exact(&ebi_m), 3);
    }

    #[test]
    fn rank_exact_dependent_rows() {
        let m = RationalMatrix::from_fn(3, 3, |i, j| rat(((i + 1) * (j + 1)) as i64, 7));
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(rank_exact_with_pivots(&m), vec![0]);
    }

    #[test]
    fn null_vector_is_in_kernel() {
        let m = RationalMatrix::from_integers(2, 3, &[1, 2, 3, 2, 4, 7]).unwrap();
        let v = m.first_null_vector().unwrap();
        for i in 0..2 {
            let s: BigRational = (0..3).map(|j| &m[(i, j)] * &v[j]).sum();
            assert!(s.is_zero());
        }
        // Smallest free column is column 1.
        assert_eq!(v[1], BigRational::one());
        assert!(RationalMatrix::from_integers(2, 2, &[1, 0, 0, 1])
            .unwrap()
            .first_null_vector()
            .is_none());
    }

    #[test]
    fn rank_numeric_examples() {
        assert_eq!(rank_numeric(&DenseMatrix::identity(3), 1e-10).unwrap(), 3);
        let u = [0.3, -1.2, 0.7, 2.0];
        let v = [1.1, 0.4, -0.9];
        let outer = DenseMatrix::from_fn(4, 3, |i, j| c(u[i] * v[j], 0.0));
        assert_eq!(rank_numeric(&outer, 1e-10).unwrap(), 1);
        assert!(rank_numeric(&outer, 0.0).is_err());
        let mut bad = DenseMatrix::identity(2);
        bad[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(rank_numeric(&bad, 1e-10), Err(Error::NonFinite)));
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert!((min_eigenvalue_hermitian(&DenseMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-14);
        let d = DenseMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c([3.0, -2.0, 0.0][i], 0.0)
            } else {
                C64::zero()
            }
        });
        assert!((min_eigenvalue_hermitian(&d).unwrap() + 2.0).abs() < 1e-14);
        let mut nh = DenseMatrix::identity(2);
        nh[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(min_eigenvalue_hermitian(&nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_transpose_examples() {
        let y = pauli_y();
        let z = pauli_z();
        assert_eq!(partial_transpose_last_qubit(&y, 1).unwrap(), -&y);
        let yz = kron(&y, &z);
        assert_eq!(partial_transpose_last_qubit(&yz, 2).unwrap(), yz);
        let yy = kron(&y, &y);
        assert_eq!(partial_transpose_last_qubit(&yy, 2).unwrap(), -&yy);
        assert!(partial_transpose_last_qubit(&yy, 3).is_err());
        assert!(partial_transpose_last_qubit(&DenseMatrix::identity(3), 1).is_err());
    }
}
