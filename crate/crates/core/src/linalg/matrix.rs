use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from machine integers. Panics if the entry count is wrong,
    /// which makes it convenient for literals in tests and catalogs.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count for {rows}x{cols}");
        IntMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Builds a matrix from a list of rows. An empty list yields a 0x`cols` matrix.
    pub fn from_rows<T: Clone + Into<BigInt>>(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                "vstack column counts differ".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn vstack_all(cols: usize, blocks: &[IntMatrix]) -> Result<IntMatrix> {
        let mut out = IntMatrix::zeros(0, cols);
        for b in blocks {
            out = out.vstack(b)?;
        }
        Ok(out)
    }

    pub fn block_diagonal(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn add_block(&mut self, row: usize, col: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let x = &block[(i, j)];
                if !x.is_zero() {
                    self[(row + i, col + j)] += x;
                }
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (oj, &j) in idx.iter().enumerate() {
                out[(i, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v.div_floor(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    /// If this is a permutation matrix, returns `p` with column `j` equal to `e_{p[j]}`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let mut perm = Vec::with_capacity(self.cols);
        let mut seen = vec![false; self.rows];
        for j in 0..self.cols {
            let mut target = None;
            for i in 0..self.rows {
                let x = &self[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if !x.is_one() || target.is_some() {
                    return None;
                }
                target = Some(i);
            }
            let t = target?;
            if seen[t] {
                return None;
            }
            seen[t] = true;
            perm.push(t);
        }
        Some(perm)
    }

    pub fn permutation(perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = BigInt::one();
        }
        m
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) {}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
