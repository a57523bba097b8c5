//! Positive-grading test: find `y` with `yᵀ·a_j > 0` for every column.
//!
//! By Gordan's alternative such `y` exists iff `Ker_Z(A) ∩ Nⁿ = {0}`. The
//! search is the LP `max τ  s.t.  yᵀ·a_j ≥ τ, τ ≤ 1`, solved by a dense
//! exact-rational simplex with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector, RationalVector};

struct Tableau {
    // constraint rows followed by the objective row; last column is the rhs
    cells: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        for x in self.cells[row].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.cells[row].clone();
        for (r, cells) in self.cells.iter_mut().enumerate() {
            if r == row || cells[col].is_zero() {
                continue;
            }
            let f = cells[col].clone();
            for (x, pr) in cells.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x -= &f * pr;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule to optimality; the objective row stores `-c`.
    fn solve(&mut self) {
        let nrows = self.basis.len();
        let width = self.cells[0].len() - 1;
        loop {
            let obj = &self.cells[nrows];
            let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
                return;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..nrows {
                let coef = &self.cells[r][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.cells[r][width] / coef;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let (row, _) = best.expect("objective is bounded by tau <= 1");
            self.pivot(row, enter);
        }
    }
}

/// Returns `y` with `yᵀ·a_j > 0` for all columns, or `None` when the kernel
/// meets the nonnegative orthant nontrivially.
pub fn positive_grading_witness(a: &IntMatrix) -> Option<RationalVector> {
    let (m, n) = (a.rows(), a.cols());
    // variables: y+ (m), y- (m), tau, slacks (n + 1)
    let nvars = 2 * m + 1 + n + 1;
    let tau = 2 * m;
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let mut cells = Vec::with_capacity(n + 2);
    for j in 0..n {
        let mut row = vec![BigRational::zero(); nvars + 1];
        for i in 0..m {
            let e = q(a.get(i, j));
            row[m + i] = e.clone();
            row[i] = -e;
        }
        row[tau] = BigRational::one();
        row[tau + 1 + j] = BigRational::one();
        cells.push(row);
    }
    let mut cap = vec![BigRational::zero(); nvars + 1];
    cap[tau] = BigRational::one();
    cap[tau + 1 + n] = BigRational::one();
    cap[nvars] = BigRational::one();
    cells.push(cap);
    let mut obj = vec![BigRational::zero(); nvars + 1];
    obj[tau] = -BigRational::one();
    cells.push(obj);

    let mut tab = Tableau {
        cells,
        basis: (0..=n).map(|j| tau + 1 + j).collect(),
    };
    tab.solve();

    let value = tab.cells[n + 1][nvars].clone();
    if !value.is_positive() {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (r, &b) in tab.basis.iter().enumerate() {
        x[b] = tab.cells[r][nvars].clone();
    }
    let y = (0..m).map(|i| &x[i] - &x[m + i]).collect();
    Some(RationalVector(y))
}

/// Integer witness together with the column weights `w_j = yᵀ·a_j > 0`.
pub fn integer_grading(a: &IntMatrix) -> Option<(IntVector, Vec<BigInt>)> {
    let y = positive_grading_witness(a)?.to_integer_multiple();
    let weights: Vec<BigInt> = (0..a.cols()).map(|j| a.column(j).dot(&y)).collect();
    debug_assert!(weights.iter().all(|w| w.is_positive()));
    Some((y, weights))
}
