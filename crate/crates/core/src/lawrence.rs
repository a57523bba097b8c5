//! Lawrence liftings, tableaux, the matrix families used as witnesses, and
//! generalized Lawrence matrices with prescribed bouquets.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bouquet::bouquets;
use crate::error::{Error, Result};
use crate::intlin::{ext_gcd, rank, text, IntMatrix, IntVector};

/// The `(rm+n) × rn` matrix with `r` diagonal copies of `A` above a row of
/// `r` copies of the `n × n` identity.
pub fn lawrence_lift(a: &IntMatrix, r: usize) -> Result<IntMatrix> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "lifting order must be >= 2, got {r}"
        )));
    }
    let (m, n) = (a.rows(), a.cols());
    let mut out = IntMatrix::zeros(r * m + n, r * n)?;
    for copy in 0..r {
        for i in 0..m {
            for j in 0..n {
                out.set(copy * m + i, copy * n + j, a.get(i, j).clone());
            }
        }
        for j in 0..n {
            out.set(r * m + j, copy * n + j, BigInt::one());
        }
    }
    Ok(out)
}

/// A kernel element of `A^(r)` viewed as an `r × n` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    rows: Vec<IntVector>,
    n: usize,
}

impl Tableau {
    pub fn new(rows: Vec<IntVector>) -> Result<Self> {
        let n = rows.first().map_or(0, IntVector::len);
        if rows.is_empty() || n == 0 {
            return Err(Error::InvalidArgument("tableau must be nonempty".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "tableau rows differ in length".into(),
            ));
        }
        Ok(Tableau { rows, n })
    }

    pub fn zero(r: usize, n: usize) -> Result<Self> {
        Tableau::new(vec![IntVector::zeros(n); r])
    }

    /// Splits a row-major vector of length `r·n` into `r` rows.
    pub fn from_flat(flat: &[BigInt], r: usize) -> Result<Self> {
        if r == 0 || !flat.len().is_multiple_of(r) {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} cannot be split into {r} rows",
                flat.len()
            )));
        }
        let n = flat.len() / r;
        Tableau::new(flat.chunks(n).map(|c| IntVector(c.to_vec())).collect())
    }

    pub fn to_flat(&self) -> IntVector {
        IntVector(self.rows.iter().flat_map(|r| r.0.iter().cloned()).collect())
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    /// `true` iff every row is in `Ker_Z(A)` and the rows sum to zero, which
    /// is exactly membership of the flattened vector in `Ker_Z(A^(r))`.
    pub fn is_kernel_element(&self, a: &IntMatrix) -> bool {
        if a.cols() != self.n {
            return false;
        }
        let rows_ok = self.rows.iter().all(|row| a.annihilates(row));
        let sums_zero = (0..self.n).all(|j| {
            self.rows
                .iter()
                .map(|row| &row[j])
                .sum::<BigInt>()
                .is_zero()
        });
        rows_ok && sums_zero
    }

    /// Parses the literal `"1,-1,-1,1;0,-1,2,-1"`.
    pub fn parse(literal: &str) -> Result<Self> {
        let rows = literal
            .split(';')
            .map(text::parse_vector)
            .collect::<Result<Vec<_>>>()?;
        Tableau::new(rows)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Number of nonzero rows.
pub fn tableau_type(t: &Tableau) -> usize {
    t.rows.iter().filter(|r| !r.is_zero()).count()
}

/// `A_s = [[0, 1, s-1, s], [1, 1, 1, 1]]`.
pub fn family_as(s: u64) -> Result<IntMatrix> {
    if s < 3 {
        return Err(Error::InvalidArgument(format!(
            "family A_s needs s >= 3, got {s}"
        )));
    }
    let s = BigInt::from(s);
    let one = BigInt::one();
    IntMatrix::from_rows(&[
        vec![BigInt::zero(), one.clone(), &s - 1, s],
        vec![one.clone(), one.clone(), one.clone(), one],
    ])
}

/// The `1 × (4+k)` matrix `[1, s, s²-s, s²-1, 1, …, 1]`.
pub fn family_kt(s: u64, k: usize) -> Result<IntMatrix> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!(
            "family needs s >= 2, got {s}"
        )));
    }
    let s = BigInt::from(s);
    let mut row = vec![BigInt::one(), s.clone(), &s * &s - &s, &s * &s - 1];
    row.extend(std::iter::repeat_n(BigInt::one(), k));
    IntMatrix::from_rows(&[row])
}

/// The type-`s` element of `Ker_Z(A_s^(s))`: `s-2` copies of
/// `(1,-1,-1,1)`, then `(0,-1,s-1,2-s)` and `(2-s,s-1,-1,0)`.
pub fn witness_matrix(s: u64) -> Result<Tableau> {
    if s < 3 {
        return Err(Error::InvalidArgument(format!(
            "witness needs s >= 3, got {s}"
        )));
    }
    let si = s as i64;
    let mut rows = vec![IntVector::from_i64s(&[1, -1, -1, 1]); (s - 2) as usize];
    rows.push(IntVector::from_i64s(&[0, -1, si - 1, 2 - si]));
    rows.push(IntVector::from_i64s(&[2 - si, si - 1, -1, 0]));
    Tableau::new(rows)
}

/// One bouquet of a generalized Lawrence matrix: its direction `c′` and a
/// Bézout vector `λ` with `λ·c′ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BouquetSpec {
    pub cprime: IntVector,
    pub lambda: IntVector,
}

impl BouquetSpec {
    pub fn new(cprime: IntVector, lambda: IntVector) -> Self {
        BouquetSpec { cprime, lambda }
    }

    pub fn from_i64s(cprime: &[i64], lambda: &[i64]) -> Self {
        BouquetSpec::new(IntVector::from_i64s(cprime), IntVector::from_i64s(lambda))
    }

    /// Builds the spec with `λ` from [`solve_lambda`].
    pub fn with_solved_lambda(cprime: IntVector) -> Result<Self> {
        let lambda = solve_lambda(&cprime)?;
        Ok(BouquetSpec { cprime, lambda })
    }

    pub fn len(&self) -> usize {
        self.cprime.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cprime.is_empty()
    }

    /// `index` is 1-based and only used in the error message.
    pub fn validate(&self, index: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidArgument(format!("bouquet {index}: {why}")));
        if self.cprime.is_empty() {
            return bad("c' is empty");
        }
        if self.cprime.len() != self.lambda.len() {
            return bad("c' and lambda differ in length");
        }
        if self.cprime.iter().any(Zero::is_zero) {
            return bad("c' has a zero entry");
        }
        if !self.cprime[0].is_positive() {
            return bad("first entry of c' must be positive");
        }
        let g = self.cprime.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_one() {
            return bad("entries of c' are not coprime");
        }
        if !self.lambda.dot(&self.cprime).is_one() {
            return bad("lambda . c' != 1");
        }
        Ok(())
    }
}

/// One integer solution of `λ·c′ = 1` by chained extended Euclid; a
/// coordinate whose entry is already divisible by the running gcd gets 0.
pub fn solve_lambda(cprime: &IntVector) -> Result<IntVector> {
    let first = cprime
        .first()
        .ok_or_else(|| Error::InvalidArgument("c' is empty".into()))?;
    let mut g = first.abs();
    let mut lambda = vec![first.signum()];
    for c in cprime.iter().skip(1) {
        if c.is_multiple_of(&g) {
            lambda.push(BigInt::zero());
            continue;
        }
        let (ng, x, y) = ext_gcd(&g, c);
        lambda.iter_mut().for_each(|l| *l *= &x);
        lambda.push(y);
        g = ng;
    }
    if !g.is_one() {
        return Err(Error::InvalidArgument(format!(
            "entries of c' have gcd {g}"
        )));
    }
    Ok(IntVector(lambda))
}

/// Generalized Lawrence matrix with one column block per bouquet spec.
///
/// The top `d′` rows put `base[k,i]·λ_ij` in column `(i,j)`; for every block
/// `i` and `j ≥ 2` a relation row carries `-c′_ij` at `(i,1)` and `c′_i1` at
/// `(i,j)`. The result has `d′ + Σ(m_i − 1)` rows and `Σ m_i` columns.
pub fn generalized_lawrence(base: &IntMatrix, specs: &[BouquetSpec]) -> Result<IntMatrix> {
    if specs.len() != base.cols() {
        return Err(Error::InvalidArgument(format!(
            "{} bouquet specs for a base matrix with {} columns",
            specs.len(),
            base.cols()
        )));
    }
    for (i, spec) in specs.iter().enumerate() {
        spec.validate(i + 1)?;
    }
    let n: usize = specs.iter().map(BouquetSpec::len).sum();
    let extra: usize = specs.iter().map(|s| s.len() - 1).sum();
    let d = base.rows();
    let mut out = IntMatrix::zeros(d + extra, n)?;
    let mut col = 0;
    let mut relation = d;
    for (i, spec) in specs.iter().enumerate() {
        for (j, l) in spec.lambda.iter().enumerate() {
            for k in 0..d {
                out.set(k, col + j, base.get(k, i) * l);
            }
        }
        for j in 1..spec.len() {
            out.set(relation, col, -&spec.cprime[j]);
            out.set(relation, col + j, spec.cprime[0].clone());
            relation += 1;
        }
        col += spec.len();
    }
    Ok(out)
}

/// Checks the properties the construction promises: `rank(L) = d′ + n − q`
/// and the bouquets of `L` are exactly the column blocks with `c_B = c′_i`.
/// This needs a full-row-rank base whose columns form `q` distinct non-free
/// bouquets.
pub fn verify_generalized_lawrence(
    base: &IntMatrix,
    specs: &[BouquetSpec],
    l: &IntMatrix,
) -> Result<()> {
    let n: usize = specs.iter().map(BouquetSpec::len).sum();
    let q = specs.len();
    let expected_rank = base.rows() + n - q;
    let got = rank(l);
    if got != expected_rank {
        return Err(Error::InvalidArgument(format!(
            "rank of L is {got}, expected {expected_rank}"
        )));
    }
    let dec = bouquets(l);
    if dec.bouquets.len() != q || dec.free_flags.iter().any(|&f| f) {
        return Err(Error::InvalidArgument(format!(
            "L has {} bouquets ({} free), expected {q} non-free",
            dec.bouquets.len(),
            dec.free_flags.iter().filter(|&&f| f).count()
        )));
    }
    let mut start = 0;
    for (i, spec) in specs.iter().enumerate() {
        let block: Vec<usize> = (start..start + spec.len()).collect();
        if dec.bouquets[i] != block {
            return Err(Error::InvalidArgument(format!(
                "bouquet {} of L is {:?}, expected columns {:?}",
                i + 1,
                dec.bouquets[i],
                block
            )));
        }
        if dec.cb[i][start..start + spec.len()] != spec.cprime[..] {
            return Err(Error::InvalidArgument(format!(
                "c_B of bouquet {} is ({}), expected c' = ({})",
                i + 1,
                dec.cb[i],
                spec.cprime
            )));
        }
        start += spec.len();
    }
    Ok(())
}

/// Worked example with twelve bouquets on seventeen columns: base matrix
/// `[1, s, s²-s, s²-1, 1, …, 1]`.
pub fn example61_inputs(s: u64) -> Result<(IntMatrix, Vec<BouquetSpec>)> {
    let base = family_kt(s, 8)?;
    let specs = vec![
        BouquetSpec::from_i64s(&[1, -1], &[1, 0]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1, -1], &[1, 0]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1, 11], &[1, 0]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[3, 7, 2021], &[-2, 1, 0]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
    ];
    Ok((base, specs))
}

/// The printed 6×17 generalized Lawrence matrix, entries instantiated at `s`.
pub fn fixture_example61(s: u64) -> Result<IntMatrix> {
    let s = s as i64;
    let (s1, s2, s3) = (s, s * s - s, s * s - 1);
    let top = [1, 0, s1, s2, 0, s3, 1, 1, 0, 1, 1, -2, 1, 0, 1, 1, 1];
    let mut rows = vec![top.to_vec()];
    let sparse: [&[(usize, i64)]; 5] = [
        &[(0, 1), (1, 1)],
        &[(3, 1), (4, 1)],
        &[(7, -11), (8, 1)],
        &[(11, -7), (12, 3)],
        &[(11, -2021), (13, 3)],
    ];
    for entries in sparse {
        let mut row = vec![0i64; 17];
        for &(j, v) in entries {
            row[j] = v;
        }
        rows.push(row);
    }
    IntMatrix::from_rows(&rows)
}

/// The printed 15×15 0/1 matrix of rank 13 built from `A_5`.
pub fn fixture_example62() -> IntMatrix {
    const ROWS: [[i64; 15]; 15] = [
        [0, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 1, 1, 1],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1],
        [0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0],
        [1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    ];
    let rows: Vec<Vec<i64>> = ROWS.iter().map(|r| r.to_vec()).collect();
    IntMatrix::from_rows(&rows).expect("static fixture")
}
