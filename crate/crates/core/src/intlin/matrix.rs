use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Integer vector with arbitrary-precision entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        IntVector(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `u⁺`: the positive part, so that `u = u⁺ - u⁻` with both nonnegative.
    pub fn pos_part(&self) -> IntVector {
        IntVector(
            self.0
                .iter()
                .map(|x| {
                    if x.is_positive() {
                        x.clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        )
    }

    /// `u⁻`: the negative part (entries are nonnegative).
    pub fn neg_part(&self) -> IntVector {
        IntVector(
            self.0
                .iter()
                .map(|x| if x.is_negative() { -x } else { BigInt::zero() })
                .collect(),
        )
    }

    pub fn l1_norm(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> IntVector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(first) if first.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_sign_normalized(&self) -> bool {
        !matches!(self.0.iter().find(|x| !x.is_zero()), Some(first) if first.is_negative())
    }
}

impl Deref for IntVector {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector::from_i64s(&v)
    }
}

/// Comma-separated entries, e.g. `1,-2,1`.
impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Vector of exact rationals, used for the positive-grading witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest positive integer multiple of the vector.
    pub fn to_integer_multiple(&self) -> IntVector {
        let lcm = self.0.iter().fold(BigInt::from(1), |acc, q| {
            num_integer::lcm(acc, q.denom().clone())
        });
        IntVector(
            self.0
                .iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect(),
        )
    }
}

/// Dense integer matrix, row-major, at least one row and one column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix must have at least one row and one column, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = IntMatrix::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        Ok(m)
    }

    /// Builds a matrix from rows of anything convertible to `BigInt`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        IntMatrix::new(rows.len(), cols, data)
    }

    pub fn from_int_rows(rows: &[IntVector]) -> Result<Self> {
        let raw: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
        IntMatrix::from_rows(&raw)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `‖A‖∞`, the largest absolute value of an entry.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(IntVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(
                "dimension mismatch in product".into(),
            ));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                data.push(
                    (0..self.cols)
                        .map(|k| self.get(i, k) * other.get(k, j))
                        .sum(),
                );
            }
        }
        IntMatrix::new(self.rows, other.cols, data)
    }

    /// `true` iff `A·v = 0`.
    pub fn annihilates(&self, v: &[BigInt]) -> bool {
        v.len() == self.cols && self.mul_vec(v).map(|w| w.is_zero()).unwrap_or(false)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<IntMatrix> {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<IntMatrix> {
        let raw: Vec<Vec<BigInt>> = rows.iter().map(|&i| self.row(i).to_vec()).collect();
        IntMatrix::from_rows(&raw)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}
