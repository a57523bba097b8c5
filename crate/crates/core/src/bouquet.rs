//! Bouquet decomposition, the bouquet matrix `A_B`, and the kernel
//! isomorphisms `D: Ker(A_B) → Ker(A)` and `T = D⁻¹`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bases::{BasisKind, BasisSet};
use crate::error::{Error, Result};
use crate::intlin::{gale_transforms, kernel_basis, parallel, IntMatrix, IntVector};
use crate::lawrence::{lawrence_lift, Tableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BouquetDecomposition {
    pub source: IntMatrix,
    /// Column indices (0-based) of each bouquet, ordered by smallest member.
    pub bouquets: Vec<Vec<usize>>,
    pub free_flags: Vec<bool>,
    /// `c_B` of each bouquet, length `n`, supported on the bouquet.
    pub cb: Vec<IntVector>,
    /// `m × q` bouquet matrix.
    pub ab: IntMatrix,
    /// `n × q`, column `k` is `cb[k]`.
    pub c: IntMatrix,
}

impl BouquetDecomposition {
    pub fn q(&self) -> usize {
        self.bouquets.len()
    }

    pub fn has_free_bouquet(&self) -> bool {
        self.free_flags.iter().any(|&f| f)
    }

    /// `D(u) = C·u`, defined on `Ker_Z(A_B)`.
    pub fn map_d(&self, u: &IntVector) -> Result<IntVector> {
        if u.len() != self.q() {
            return Err(Error::InvalidArgument(format!(
                "vector has length {}, expected {}",
                u.len(),
                self.q()
            )));
        }
        if !self.ab.annihilates(u) {
            return Err(Error::Domain(format!(
                "({u}) is not in the kernel of the bouquet matrix"
            )));
        }
        self.c.mul_vec(u)
    }

    /// Inverse of [`map_d`](Self::map_d): coordinate `k` is the first entry of
    /// `v` on bouquet `k` divided by the matching entry of `c_B`.
    pub fn map_t(&self, v: &IntVector) -> Result<IntVector> {
        let n = self.source.cols();
        if v.len() != n {
            return Err(Error::InvalidArgument(format!(
                "vector has length {}, expected {n}",
                v.len()
            )));
        }
        if !self.source.annihilates(v) {
            return Err(Error::Domain(format!("({v}) is not in the kernel")));
        }
        let mut out = Vec::with_capacity(self.q());
        for (cols, cb) in self.bouquets.iter().zip(&self.cb) {
            let first = cols[0];
            let (quot, rem) = v[first].div_rem(&cb[first]);
            if !rem.is_zero() {
                return Err(Error::Domain(format!(
                    "({v}) is not a multiple of c_B on a bouquet"
                )));
            }
            out.push(quot);
        }
        let out = IntVector(out);
        if self.c.mul_vec(&out)? != *v {
            return Err(Error::Domain(format!(
                "({v}) is not constant along c_B on a bouquet"
            )));
        }
        Ok(out)
    }

    /// Row-wise `D` on a tableau over `A_B`.
    pub fn map_d_r(&self, t: &Tableau) -> Result<Tableau> {
        check_rows_sum_to_zero(t)?;
        Tableau::new(
            t.rows()
                .iter()
                .map(|r| self.map_d(r))
                .collect::<Result<_>>()?,
        )
    }

    /// Row-wise `T` on a tableau over `A`.
    pub fn map_t_r(&self, t: &Tableau) -> Result<Tableau> {
        check_rows_sum_to_zero(t)?;
        Tableau::new(
            t.rows()
                .iter()
                .map(|r| self.map_t(r))
                .collect::<Result<_>>()?,
        )
    }

    /// Element-wise `T` image of a Markov basis of `A`, as a basis set of `A_B`.
    pub fn markov_image_under_t(&self, markov: &BasisSet) -> Result<BasisSet> {
        let images = markov
            .elements()
            .iter()
            .map(|u| self.map_t(u))
            .collect::<Result<Vec<_>>>()?;
        BasisSet::new(self.ab.clone(), BasisKind::Markov, images)
    }

    /// One line per bouquet, `B<i> free|nonfree cols=<1-based list> cB=<vector>`.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (k, cols) in self.bouquets.iter().enumerate() {
            let list: Vec<String> = cols.iter().map(|c| (c + 1).to_string()).collect();
            out.push_str(&format!(
                "B{} {} cols={} cB={}\n",
                k + 1,
                if self.free_flags[k] {
                    "free"
                } else {
                    "nonfree"
                },
                list.join(","),
                self.cb[k]
            ));
        }
        out
    }
}

fn check_rows_sum_to_zero(t: &Tableau) -> Result<()> {
    let sum = t
        .rows()
        .iter()
        .fold(IntVector::zeros(t.n()), |acc, r| acc.add(r));
    if !sum.is_zero() {
        return Err(Error::Domain("tableau rows do not sum to zero".into()));
    }
    Ok(())
}

/// Bouquet decomposition of `A` from the Gale transforms of its canonical
/// kernel basis.
pub fn bouquets(a: &IntMatrix) -> BouquetDecomposition {
    let gale = gale_transforms(a);
    let n = a.cols();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut free: Option<usize> = None;
    let mut free_flags = Vec::new();
    for (i, g) in gale.iter().enumerate() {
        if g.is_zero() {
            match free {
                Some(k) => classes[k].push(i),
                None => {
                    free = Some(classes.len());
                    classes.push(vec![i]);
                    free_flags.push(true);
                }
            }
            continue;
        }
        let home = classes
            .iter()
            .enumerate()
            .position(|(k, c)| !free_flags[k] && parallel(&gale[c[0]], g));
        match home {
            Some(k) => classes[k].push(i),
            None => {
                classes.push(vec![i]);
                free_flags.push(false);
            }
        }
    }
    // classes are created in order of their smallest member already
    let cb: Vec<IntVector> = classes
        .iter()
        .zip(&free_flags)
        .map(|(cols, &is_free)| {
            let mut v = IntVector::zeros(n);
            if is_free {
                for &c in cols {
                    v.0[c] = BigInt::one();
                }
            } else {
                let j = gale[cols[0]]
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero Gale vector");
                let g = cols.iter().fold(BigInt::zero(), |g, &c| g.gcd(&gale[c][j]));
                let eps = gale[cols[0]][j].signum();
                for &c in cols {
                    v.0[c] = &eps * &gale[c][j] / &g;
                }
            }
            v
        })
        .collect();
    let q = classes.len();
    let m = a.rows();
    let mut ab = IntMatrix::zeros(m, q).expect("q >= 1");
    let mut c = IntMatrix::zeros(n, q).expect("q >= 1");
    for (k, v) in cb.iter().enumerate() {
        for i in 0..m {
            let e: BigInt = (0..n).map(|l| a.get(i, l) * &v[l]).sum();
            ab.set(i, k, e);
        }
        for l in 0..n {
            c.set(l, k, v[l].clone());
        }
    }
    BouquetDecomposition {
        source: a.clone(),
        bouquets: classes,
        free_flags,
        cb,
        ab,
        c,
    }
}

/// Compares `Ker((A^(r))_B)` with `Ker(A_B^(r))` by canonical lattice bases.
/// Bouquets of the lifting come out copy-major because they are ordered by
/// smallest column index.
pub fn lifted_bouquet_kernel_check(a: &IntMatrix, r: usize) -> Result<bool> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!(
            "lifting order must be >= 3, got {r}"
        )));
    }
    let dec = bouquets(a);
    if dec.has_free_bouquet() {
        return Err(Error::Unsupported(
            "matrix has a free bouquet; the lifted comparison covers only free-bouquet-free inputs"
                .into(),
        ));
    }
    let lifted = bouquets(&lawrence_lift(a, r)?);
    let lifted_of_ab = lawrence_lift(&dec.ab, r)?;
    if lifted.ab.cols() != lifted_of_ab.cols() {
        return Ok(false);
    }
    Ok(kernel_basis(&lifted.ab).same_lattice(&kernel_basis(&lifted_of_ab)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{is_markov_basis, minimal_markov, Limits};
    use crate::lawrence::{family_as, witness_matrix};

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn two_row() -> IntMatrix {
        IntMatrix::from_rows(&[vec![3, 3, 4, 5], vec![2, 3, 0, 0]]).unwrap()
    }

    #[test]
    fn worked_example_decomposition() {
        let d = bouquets(&two_row());
        assert_eq!(d.bouquets, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(d.free_flags, vec![false; 3]);
        assert_eq!(
            d.cb,
            vec![v(&[3, -2, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]
        );
        assert_eq!(
            d.ab,
            IntMatrix::from_rows(&[vec![3, 4, 5], vec![0, 0, 0]]).unwrap()
        );
        assert_eq!(
            d.describe().lines().next().unwrap(),
            "B1 nonfree cols=1,2 cB=3,-2,0,0"
        );
    }

    #[test]
    fn identity_is_one_free_bouquet() {
        let d = bouquets(&IntMatrix::identity(3).unwrap());
        assert_eq!(d.bouquets, vec![vec![0, 1, 2]]);
        assert_eq!(d.free_flags, vec![true]);
        assert_eq!(d.cb, vec![v(&[1, 1, 1])]);
        assert_eq!(
            d.ab,
            IntMatrix::from_rows(&[vec![1], vec![1], vec![1]]).unwrap()
        );
    }

    #[test]
    fn maps_on_worked_example() {
        let d = bouquets(&two_row());
        assert_eq!(d.map_d(&v(&[1, -2, 1])).unwrap(), v(&[3, -2, -2, 1]));
        assert_eq!(d.map_d(&v(&[0, 5, -4])).unwrap(), v(&[0, 0, 5, -4]));
        assert_eq!(d.map_d(&v(&[0, 0, 0])).unwrap(), v(&[0, 0, 0, 0]));
        assert_eq!(d.map_t(&v(&[3, -2, -2, 1])).unwrap(), v(&[1, -2, 1]));
        assert_eq!(d.map_t(&v(&[9, -6, -1, -1])).unwrap(), v(&[3, -1, -1]));
        assert!(matches!(d.map_d(&v(&[1, 0, 0])), Err(Error::Domain(_))));
        assert!(matches!(d.map_t(&v(&[1, 0, 0, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn t_image_of_printed_markov_basis() {
        let a = two_row();
        let d = bouquets(&a);
        let printed = [
            [0, 0, 5, -4],
            [3, -2, -2, 1],
            [3, -2, 3, -3],
            [6, -4, 1, -2],
            [9, -6, -1, -1],
        ];
        let set =
            BasisSet::new(a, BasisKind::Markov, printed.iter().map(|x| v(x)).collect()).unwrap();
        let image = d.markov_image_under_t(&set).unwrap();
        let expect = [
            v(&[0, 5, -4]),
            v(&[1, -2, 1]),
            v(&[1, 3, -3]),
            v(&[2, 1, -2]),
            v(&[3, -1, -1]),
        ];
        assert_eq!(image.elements(), &expect);
        let l = Limits::default();
        assert!(is_markov_basis(&d.ab, &image, &l).unwrap());
        assert_eq!(minimal_markov(&d.ab, &l).unwrap().len(), 3);
    }

    #[test]
    fn lifted_maps_preserve_type() {
        // A_3 has singleton bouquets, so use a matrix with a genuine bouquet
        let a = IntMatrix::from_rows(&[
            vec![0, 0, 1, 2, 3],
            vec![1, 0, 1, 1, 1],
            vec![1, 1, 0, 0, 0],
        ])
        .unwrap();
        let d = bouquets(&a);
        assert_eq!(d.bouquets[0], vec![0, 1]);
        let w = witness_matrix(3).unwrap();
        assert!(kernel_basis(&d.ab).same_lattice(&kernel_basis(&family_as(3).unwrap())));
        let up = d.map_d_r(&w).unwrap();
        assert_eq!(crate::lawrence::tableau_type(&up), 3);
        assert!(up.is_kernel_element(&a));
        assert_eq!(d.map_t_r(&up).unwrap(), w);
        let zero = Tableau::zero(3, 4).unwrap();
        assert_eq!(d.map_d_r(&zero).unwrap(), Tableau::zero(3, 5).unwrap());
    }

    #[test]
    fn lifted_kernels_agree() {
        assert!(lifted_bouquet_kernel_check(&two_row(), 3).unwrap());
        assert!(lifted_bouquet_kernel_check(&family_as(3).unwrap(), 3).unwrap());
        assert!(matches!(
            lifted_bouquet_kernel_check(&IntMatrix::identity(2).unwrap(), 3),
            Err(Error::Unsupported(_))
        ));
        assert!(lifted_bouquet_kernel_check(&two_row(), 2).is_err());
    }
}
