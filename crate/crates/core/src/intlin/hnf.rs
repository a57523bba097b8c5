//! Row-style Hermite normal form and the lattice operations built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// Extended Euclid: returns `(g, x, y)` with `x·a + y·b = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn axpy(target: &mut [BigInt], factor: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= factor * s;
        }
    }
}

/// Row HNF on raw rows. When `track` is set the rows of the returned
/// transform `U` satisfy `U·M = H`.
/// Echelon rows, pivot columns, and the transform when tracked.
pub(crate) type HnfParts = (Vec<Vec<BigInt>>, Vec<usize>, Option<Vec<Vec<BigInt>>>);

pub(crate) fn hnf_raw(mut rows: Vec<Vec<BigInt>>, ncols: usize, track: bool) -> HnfParts {
    let m = rows.len();
    let mut u: Option<Vec<Vec<BigInt>>> = track.then(|| {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    });
    let mut pivots = Vec::new();
    let mut p = 0;
    for c in 0..ncols {
        if p == m {
            break;
        }
        for i in p + 1..m {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[p][c].is_zero() {
                rows.swap(p, i);
                if let Some(u) = u.as_mut() {
                    u.swap(p, i);
                }
                continue;
            }
            let a = rows[p][c].clone();
            let b = rows[i][c].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            combine(&mut rows, p, i, &x, &y, &ag, &bg);
            if let Some(u) = u.as_mut() {
                combine(u, p, i, &x, &y, &ag, &bg);
            }
        }
        if rows[p][c].is_zero() {
            continue;
        }
        if rows[p][c].is_negative() {
            rows[p].iter_mut().for_each(|x| *x = -&*x);
            if let Some(u) = u.as_mut() {
                u[p].iter_mut().for_each(|x| *x = -&*x);
            }
        }
        let pivot = rows[p][c].clone();
        for k in 0..p {
            let q = rows[k][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let src = rows[p].clone();
            axpy(&mut rows[k], &q, &src);
            if let Some(u) = u.as_mut() {
                let src = u[p].clone();
                axpy(&mut u[k], &q, &src);
            }
        }
        pivots.push(c);
        p += 1;
    }
    (rows, pivots, u)
}

// rows p, i <- (x·p + y·i, -bg·p + ag·i); the 2x2 block has determinant 1.
fn combine(
    rows: &mut [Vec<BigInt>],
    p: usize,
    i: usize,
    x: &BigInt,
    y: &BigInt,
    ag: &BigInt,
    bg: &BigInt,
) {
    let (rp, ri) = if p < i {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut lo[p], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(p);
        (&mut hi[0], &mut lo[i])
    };
    for (ep, ei) in rp.iter_mut().zip(ri.iter_mut()) {
        if ep.is_zero() && ei.is_zero() {
            continue;
        }
        let (a, b) = (ep.clone(), ei.clone());
        *ep = x * &a + y * &b;
        *ei = ag * &b - bg * &a;
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U·M = H`. Pivots are positive, entries above a pivot lie in `[0, pivot)`,
/// zero rows come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, _, u) = hnf_raw(m.row_vecs(), m.cols(), true);
    let h = IntMatrix::from_rows(&h).expect("shape preserved");
    let u = IntMatrix::from_rows(&u.expect("tracked")).expect("square transform");
    (h, u)
}

pub fn rank(m: &IntMatrix) -> usize {
    hnf_raw(m.row_vecs(), m.cols(), false).1.len()
}

/// Canonical HNF of a list of rows, zero rows dropped.
pub fn hnf_rows(rows: &[IntVector], ncols: usize) -> Vec<IntVector> {
    let raw = rows.iter().map(|r| r.0.clone()).collect();
    let (h, pivots, _) = hnf_raw(raw, ncols, false);
    h.into_iter().take(pivots.len()).map(IntVector).collect()
}

/// Integer basis of `Ker_Z(A)`, in row HNF when `canonical` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub ambient_dim: usize,
    pub basis_rows: Vec<IntVector>,
    pub canonical: bool,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.basis_rows.len()
    }

    /// Re-expresses the basis in row HNF, the unique representative of the lattice.
    pub fn canonicalize(&self) -> LatticeBasis {
        LatticeBasis {
            ambient_dim: self.ambient_dim,
            basis_rows: hnf_rows(&self.basis_rows, self.ambient_dim),
            canonical: true,
        }
    }

    /// Lattice equality, decided by comparing canonical forms.
    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.canonicalize().basis_rows == other.canonicalize().basis_rows
    }

    /// Membership test: `v` is an integer combination of the basis rows.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let canon = self.canonicalize();
        let mut rest = v.to_vec();
        for row in &canon.basis_rows {
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if rest[..pc].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = rest[pc].div_rem(&row[pc]);
            if !r.is_zero() {
                return false;
            }
            axpy(&mut rest, &q, row);
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn to_matrix(&self) -> Option<IntMatrix> {
        IntMatrix::from_int_rows(&self.basis_rows).ok()
    }
}

/// Saturated kernel lattice `Ker_Z(A)`, returned in canonical form.
///
/// The HNF transform `U` of `Aᵀ` is unimodular, so the rows of `U` that map
/// to zero rows of `U·Aᵀ` span the full kernel, not a finite-index sublattice.
pub fn kernel_basis(a: &IntMatrix) -> LatticeBasis {
    let at = a.transpose();
    let (h, pivots, u) = hnf_raw(at.row_vecs(), at.cols(), true);
    let u = u.expect("tracked");
    let d = pivots.len();
    debug_assert!(h[d..].iter().all(|r| r.iter().all(Zero::is_zero)));
    let rows: Vec<IntVector> = u.into_iter().skip(d).map(IntVector).collect();
    LatticeBasis {
        ambient_dim: a.cols(),
        basis_rows: rows,
        canonical: false,
    }
    .canonicalize()
}

/// Gale transforms: `G(a_i)` is column `i` of the canonical kernel basis.
/// A zero transform marks a free column.
pub fn gale_transforms(a: &IntMatrix) -> Vec<IntVector> {
    gale_from_basis(&kernel_basis(a))
}

pub fn gale_from_basis(basis: &LatticeBasis) -> Vec<IntVector> {
    (0..basis.ambient_dim)
        .map(|i| IntVector(basis.basis_rows.iter().map(|r| r[i].clone()).collect()))
        .collect()
}

/// `true` iff `u` and `v` are linearly dependent (all 2x2 minors vanish).
pub fn parallel(u: &[BigInt], v: &[BigInt]) -> bool {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

/// Rows chosen greedily (in order) so that they span the row space of `a`.
pub fn row_space_rows(a: &IntMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0;
    for i in 0..a.rows() {
        let mut trial: Vec<IntVector> = chosen.iter().map(|&k| a.row_vector(k)).collect();
        trial.push(a.row_vector(i));
        let r = hnf_rows(&trial, a.cols()).len();
        if r > current {
            chosen.push(i);
            current = r;
        }
    }
    chosen
}
