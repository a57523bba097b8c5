//! Exhaustive searches used as independent checks on small inputs.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::coeff::{rows_from_big, vec_to_big, with_fallback, Coeff, Step};
use super::fiber::Grading;
use super::set::{is_semiconformal_sum, BasisKind, BasisSet};
use crate::error::{Error, Result};
use crate::intlin::{IntMatrix, IntVector};

struct Ball<'a, T> {
    rows: &'a [Vec<T>],
    /// `ending[j]`: rows whose last nonzero entry is in column `j`.
    ending: Vec<Vec<usize>>,
    t: Vec<T>,
    r: Vec<T>,
    out: Vec<Vec<T>>,
}

impl<T: Coeff> Ball<'_, T> {
    fn rec(&mut self, j: usize, budget: &T) -> Step<()> {
        let n = self.t.len();
        if j == n {
            if self.t.iter().any(|x| !x.is_zero()) {
                self.out.push(self.t.clone());
            }
            return Ok(());
        }
        // a row ending here forces the coordinate
        let forced = match self.ending[j].first() {
            Some(&i) => {
                let a = &self.rows[i][j];
                let num = self.r[i].neg()?;
                let q = num.div_floor(a);
                if !q.mul(a)?.sub(&num)?.is_zero() {
                    return Ok(());
                }
                if q.abs()? > *budget {
                    return Ok(());
                }
                Some(q)
            }
            None => None,
        };
        let candidates: Vec<T> = match forced {
            Some(q) => vec![q],
            None => {
                let mut c = Vec::new();
                let mut v = budget.neg()?;
                let one = T::from_big(&BigInt::from(1))?;
                while v <= *budget {
                    c.push(v.clone());
                    v = v.add(&one)?;
                }
                c
            }
        };
        let saved = self.r.clone();
        for v in candidates {
            let mut ok = true;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_zero() {
                    self.r[i] = saved[i].add(&row[j].mul(&v)?)?;
                }
            }
            for &i in &self.ending[j] {
                ok &= self.r[i].is_zero();
            }
            if ok {
                self.t[j] = v.clone();
                let rest = budget.sub(&v.abs()?)?;
                self.rec(j + 1, &rest)?;
            }
        }
        self.t[j] = T::zero();
        self.r = saved;
        Ok(())
    }
}

fn ball_over<T: Coeff>(a: &IntMatrix, cap: u64) -> Step<Vec<IntVector>> {
    let rows: Vec<Vec<T>> = rows_from_big(a)?;
    let mut ending = vec![Vec::new(); a.cols()];
    for (i, row) in rows.iter().enumerate() {
        if let Some(last) = row.iter().rposition(|x| !x.is_zero()) {
            ending[last].push(i);
        }
    }
    let budget = T::from_big(&BigInt::from(cap))?;
    let mut ball = Ball {
        rows: &rows,
        ending,
        t: vec![T::zero(); a.cols()],
        r: vec![T::zero(); a.rows()],
        out: Vec::new(),
    };
    ball.rec(0, &budget)?;
    Ok(ball.out.iter().map(|v| IntVector(vec_to_big(v))).collect())
}

/// Every nonzero `u ∈ Ker_Z(A)` with `‖u‖₁ ≤ cap`, both signs, sorted by
/// norm and then lexicographically.
pub fn kernel_ball(a: &IntMatrix, cap: u64) -> Result<Vec<IntVector>> {
    let mut out = with_fallback(|| ball_over::<i64>(a, cap), || ball_over::<BigInt>(a, cap))?;
    out.sort_by(|x, y| x.l1_norm().cmp(&y.l1_norm()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// Graver elements of 1-norm at most `norm_cap`, found by enumerating the
/// kernel ball and keeping the vectors with no smaller nonzero `v ⊑ u`.
pub fn graver_bruteforce(a: &IntMatrix, norm_cap: u64) -> Result<BasisSet> {
    let ball = kernel_ball(a, norm_cap)?;
    let mut minimal: Vec<IntVector> = Vec::new();
    for u in ball.iter().filter(|u| u.is_sign_normalized()) {
        let reducible = minimal.iter().any(|v| below(v, u) || below(&v.neg(), u));
        if !reducible {
            minimal.push(u.clone());
        }
    }
    Ok(BasisSet::from_kernel_elements(
        a.clone(),
        BasisKind::Graver,
        minimal,
    ))
}

fn below(v: &IntVector, u: &IntVector) -> bool {
    v.iter().zip(u.iter()).all(|(a, b)| {
        if a.is_positive() {
            b >= a
        } else if a.is_negative() {
            b <= a
        } else {
            true
        }
    })
}

/// Searches for a proper semiconformal decomposition `u = v +_sc w`.
///
/// A semiconformal `v` satisfies `v ≤ u⁺`, and since `y·A·v = 0` its
/// negative part is bounded by `Σ w_j v⁻_j ≤ Σ w_j u⁺_j`; the search covers
/// that whole box.
pub fn proper_semiconformal_decomposition(
    a: &IntMatrix,
    u: &IntVector,
) -> Result<Option<(IntVector, IntVector)>> {
    if !a.annihilates(u) {
        return Err(Error::Domain(format!("({u}) is not in the kernel")));
    }
    let grading = Grading::of(a)?;
    let up = u.pos_part();
    let budget: BigInt = grading
        .weights
        .iter()
        .zip(up.iter())
        .map(|(w, x)| w * x)
        .sum();
    let mut v = vec![<BigInt as Zero>::zero(); u.len()];
    let mut found = None;
    search_sc(a, u, &up, &grading.weights, 0, &budget, &mut v, &mut found)?;
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn search_sc(
    a: &IntMatrix,
    u: &IntVector,
    up: &IntVector,
    weights: &[BigInt],
    j: usize,
    budget: &BigInt,
    v: &mut Vec<BigInt>,
    found: &mut Option<(IntVector, IntVector)>,
) -> Result<()> {
    if found.is_some() {
        return Ok(());
    }
    if j == u.len() {
        let vv = IntVector(v.clone());
        let w = u.sub(&vv);
        if !vv.is_zero() && !w.is_zero() && a.annihilates(&vv) && is_semiconformal_sum(u, &vv, &w)?
        {
            *found = Some((vv, w));
        }
        return Ok(());
    }
    let lo = -(budget / &weights[j]);
    let mut x = up[j].clone();
    while x >= lo {
        let spent = if x.is_negative() {
            -&x * &weights[j]
        } else {
            <BigInt as Zero>::zero()
        };
        v[j] = x.clone();
        search_sc(a, u, up, weights, j + 1, &(budget - spent), v, found)?;
        x -= 1;
    }
    v[j] = <BigInt as Zero>::zero();
    Ok(())
}
