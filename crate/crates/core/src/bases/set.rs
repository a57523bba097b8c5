use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::intlin::text::{matrix_digest, parse_vector_list};
use crate::intlin::{IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Graver,
    MarkovMinimal,
    Markov,
    Indispensable,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Graver => "graver",
            BasisKind::MarkovMinimal => "markov-minimal",
            BasisKind::Markov => "markov",
            BasisKind::Indispensable => "indispensable",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graver" => Ok(BasisKind::Graver),
            "markov-minimal" => Ok(BasisKind::MarkovMinimal),
            "markov" => Ok(BasisKind::Markov),
            "indispensable" => Ok(BasisKind::Indispensable),
            other => Err(Error::InvalidArgument(format!(
                "unknown basis kind {other:?}"
            ))),
        }
    }
}

/// Sign-normalized, sorted, duplicate-free set of nonzero kernel vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSet {
    matrix: IntMatrix,
    kind: BasisKind,
    elements: Vec<IntVector>,
}

impl BasisSet {
    /// Validates kernel membership, then normalizes signs, sorts and dedups.
    pub fn new(matrix: IntMatrix, kind: BasisKind, elements: Vec<IntVector>) -> Result<Self> {
        for e in &elements {
            if e.len() != matrix.cols() {
                return Err(Error::InvalidArgument(format!(
                    "element ({e}) has length {}, matrix has {} columns",
                    e.len(),
                    matrix.cols()
                )));
            }
            if e.is_zero() {
                return Err(Error::Domain("zero vector in a basis set".into()));
            }
            if !matrix.annihilates(e) {
                return Err(Error::Domain(format!("({e}) is not in the kernel")));
            }
        }
        Ok(BasisSet::from_kernel_elements(matrix, kind, elements))
    }

    /// For elements already known to be nonzero kernel vectors.
    pub(crate) fn from_kernel_elements(
        matrix: IntMatrix,
        kind: BasisKind,
        elements: Vec<IntVector>,
    ) -> Self {
        let mut elements: Vec<IntVector> =
            elements.iter().map(IntVector::sign_normalized).collect();
        elements.sort();
        elements.dedup();
        BasisSet {
            matrix,
            kind,
            elements,
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elements(&self) -> &[IntVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Membership up to sign.
    pub fn contains(&self, v: &IntVector) -> bool {
        self.elements.binary_search(&v.sign_normalized()).is_ok()
    }

    /// `true` iff every element of `self` is (up to sign) in `other`.
    pub fn is_subset_of(&self, other: &BasisSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn with_kind(mut self, kind: BasisKind) -> Self {
        self.kind = kind;
        self
    }

    /// The set with element `index` removed.
    pub fn without(&self, index: usize) -> BasisSet {
        let mut elements = self.elements.clone();
        elements.remove(index);
        BasisSet {
            matrix: self.matrix.clone(),
            kind: self.kind,
            elements,
        }
    }

    pub fn max_l1_norm(&self) -> BigInt {
        self.elements
            .iter()
            .map(IntVector::l1_norm)
            .max()
            .unwrap_or_default()
    }

    /// Basis-file text: header comments with kind, digest and count, then one
    /// vector per line.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "# kind={}\n# matrix-sha256={}\n# count={}\n",
            self.kind,
            matrix_digest(&self.matrix),
            self.len()
        );
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses a basis file for `matrix`. A `kind=` header overrides
    /// `default_kind`; a digest header must match `matrix`.
    pub fn parse(text: &str, matrix: &IntMatrix, default_kind: BasisKind) -> Result<Self> {
        let mut kind = default_kind;
        for (i, line) in text.lines().enumerate() {
            let Some(comment) = line.trim().strip_prefix('#') else {
                continue;
            };
            let comment = comment.trim();
            if let Some(k) = comment.strip_prefix("kind=") {
                kind = k.trim().parse()?;
            } else if let Some(d) = comment.strip_prefix("matrix-sha256=") {
                if d.trim() != matrix_digest(matrix) {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "basis file was written for a different matrix".into(),
                    });
                }
            }
        }
        BasisSet::new(matrix.clone(), kind, parse_vector_list(text)?)
    }
}

/// `v ⊑ u`: `v⁺ ≤ u⁺` and `v⁻ ≤ u⁻` coordinate-wise.
pub fn conformal_leq(v: &IntVector, u: &IntVector) -> Result<bool> {
    same_len(&[v, u])?;
    Ok(v.iter().zip(u.iter()).all(|(a, b)| {
        if a.is_positive() {
            b >= a
        } else if a.is_negative() {
            b <= a
        } else {
            true
        }
    }))
}

/// `u = v +_sc w`: `u = v + w`, `v_i > 0 ⇒ w_i ≥ 0` and `w_i < 0 ⇒ v_i ≤ 0`.
pub fn is_semiconformal_sum(u: &IntVector, v: &IntVector, w: &IntVector) -> Result<bool> {
    same_len(&[u, v, w])?;
    Ok(u.iter().zip(v.iter()).zip(w.iter()).all(|((ui, vi), wi)| {
        &(vi + wi) == ui
            && (!vi.is_positive() || !wi.is_negative())
            && (!wi.is_negative() || !vi.is_positive())
    }))
}

fn same_len(vs: &[&IntVector]) -> Result<()> {
    if vs.windows(2).any(|p| p[0].len() != p[1].len()) {
        return Err(Error::InvalidArgument("vectors differ in length".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    #[test]
    fn conformal_examples() {
        assert!(conformal_leq(&v(&[1, 0, -1]), &v(&[2, 0, -1])).unwrap());
        assert!(!conformal_leq(&v(&[1, -1]), &v(&[-1, 1])).unwrap());
        assert!(conformal_leq(&v(&[3, -2]), &v(&[3, -2])).unwrap());
        assert!(conformal_leq(&v(&[1]), &v(&[1, 2])).is_err());
    }

    #[test]
    fn semiconformal_examples() {
        let u = v(&[1, -1, -1, 1]);
        assert!(is_semiconformal_sum(&u, &u, &v(&[0, 0, 0, 0])).unwrap());
        // (+) = (*) + (⊕): v may exceed u only where w stays nonnegative
        assert!(is_semiconformal_sum(&v(&[1]), &v(&[-2]), &v(&[3])).unwrap());
        assert!(!is_semiconformal_sum(&v(&[0]), &v(&[1]), &v(&[-1])).unwrap());
        assert!(!is_semiconformal_sum(&v(&[1, 1]), &v(&[1, 0]), &v(&[0, 0])).unwrap());
    }

    #[test]
    fn set_is_normalized_sorted_and_checked() {
        let a = IntMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let s =
            BasisSet::new(a.clone(), BasisKind::Graver, vec![v(&[-1, 1]), v(&[1, -1])]).unwrap();
        assert_eq!(s.elements(), &[v(&[1, -1])]);
        assert!(s.contains(&v(&[-1, 1])));
        assert!(matches!(
            BasisSet::new(a.clone(), BasisKind::Graver, vec![v(&[1, 1])]),
            Err(Error::Domain(_))
        ));
        assert!(BasisSet::new(a, BasisKind::Graver, vec![v(&[0, 0])]).is_err());
    }

    #[test]
    fn file_round_trip_and_digest_guard() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3]]).unwrap();
        let s = BasisSet::new(
            a.clone(),
            BasisKind::Markov,
            vec![v(&[2, -1, 0]), v(&[1, 1, -1])],
        )
        .unwrap();
        let text = s.to_file_string();
        assert!(text.starts_with("# kind=markov\n# matrix-sha256="));
        assert_eq!(BasisSet::parse(&text, &a, BasisKind::Graver).unwrap(), s);
        let other = IntMatrix::from_rows(&[vec![1, 2, 4]]).unwrap();
        assert!(BasisSet::parse(&text, &other, BasisKind::Markov).is_err());
    }
}
