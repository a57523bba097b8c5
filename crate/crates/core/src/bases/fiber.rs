//! Fibers `{t ∈ Nⁿ : A·t = b}` by depth-first search over the columns.
//!
//! A positive grading `y` bounds the search: every member satisfies
//! `Σ w_j t_j = y·b` with `w_j = y·a_j > 0`. Rows are also checked as soon as
//! their last nonzero column is fixed, and rows whose remaining entries share
//! a sign cap the next coordinate.

use num_bigint::BigInt;

use super::coeff::{
    dot, rows_from_big, vec_from_big, vec_to_big, with_fallback, Coeff, Halt, Step,
};
use super::Limits;
use crate::error::{Error, Result};
use crate::intlin::{integer_grading, IntMatrix, IntVector};

/// All nonnegative integer points of one A-degree, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub matrix: IntMatrix,
    pub degree: IntVector,
    pub members: Vec<IntVector>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &IntVector) -> bool {
        self.members.binary_search(t).is_ok()
    }
}

/// Integer positivity witness `y` and the column weights `yᵀ·a_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub y: IntVector,
    pub weights: Vec<BigInt>,
}

impl Grading {
    pub fn of(a: &IntMatrix) -> Result<Self> {
        integer_grading(a)
            .map(|(y, weights)| Grading { y, weights })
            .ok_or_else(|| {
                Error::NotPositivelyGraded("the kernel meets the nonnegative orthant".into())
            })
    }

    /// `y·b`, the value used to order degrees.
    pub fn value(&self, degree: &[BigInt]) -> BigInt {
        self.y.iter().zip(degree).map(|(a, b)| a * b).sum()
    }
}

pub(crate) struct FiberProblem<T> {
    rows: Vec<Vec<T>>,
    y: Vec<T>,
    weights: Vec<T>,
    /// `ending[j]`: rows whose last nonzero entry is in column `j`.
    ending: Vec<Vec<usize>>,
    /// `suffix[j][i]`: +1 / -1 if row `i` has only nonnegative / nonpositive
    /// entries in columns `j..`, 0 if mixed.
    suffix: Vec<Vec<i8>>,
    live: Vec<usize>,
}

pub(crate) enum Stop {
    Never,
    After(usize),
}

impl<T: Coeff> FiberProblem<T> {
    pub(crate) fn new(a: &IntMatrix, grading: &Grading) -> Step<Self> {
        let rows: Vec<Vec<T>> = rows_from_big(a)?;
        let (m, n) = (a.rows(), a.cols());
        let mut ending = vec![Vec::new(); n];
        let mut live = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if let Some(last) = row.iter().rposition(|x| !x.is_zero()) {
                ending[last].push(i);
                live.push(i);
            }
        }
        let mut suffix = vec![vec![1i8; m]; n + 1];
        for i in 0..m {
            let (mut has_pos, mut has_neg) = (false, false);
            for j in (0..n).rev() {
                has_pos |= rows[i][j].is_pos();
                has_neg |= rows[i][j].is_neg();
                suffix[j][i] = match (has_pos, has_neg) {
                    (_, false) => 1,
                    (false, true) => -1,
                    (true, true) => 0,
                };
            }
        }
        Ok(FiberProblem {
            rows,
            y: vec_from_big(&grading.y)?,
            weights: vec_from_big(&grading.weights)?,
            ending,
            suffix,
            live,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.weights.len()
    }

    /// Members of degree `b`; `Stop::After(k)` returns early once more than
    /// `k` members are known.
    pub(crate) fn enumerate(&self, b: &[T], cap: usize, stop: Stop) -> Step<Vec<Vec<T>>> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if row.iter().all(Coeff::is_zero) && !b[i].is_zero() {
                return Ok(out);
            }
        }
        let budget = dot(&self.y, b)?;
        if budget.is_neg() {
            return Ok(out);
        }
        let mut state = Search {
            p: self,
            t: vec![T::zero(); self.n()],
            r: b.to_vec(),
            out: &mut out,
            cap,
            limit: match stop {
                Stop::Never => usize::MAX,
                Stop::After(k) => k,
            },
        };
        state.rec(0, budget)?;
        out.sort();
        Ok(out)
    }
}

struct Search<'a, T> {
    p: &'a FiberProblem<T>,
    t: Vec<T>,
    r: Vec<T>,
    out: &'a mut Vec<Vec<T>>,
    cap: usize,
    limit: usize,
}

impl<T: Coeff> Search<'_, T> {
    /// Returns `true` when the search should stop.
    fn rec(&mut self, j: usize, rem: T) -> Step<bool> {
        let p = self.p;
        let n = p.n();
        if j == n {
            if rem.is_zero() && p.live.iter().all(|&i| self.r[i].is_zero()) {
                self.out.push(self.t.clone());
                if self.out.len() > self.cap {
                    return Err(Halt::Fail(Error::ResourceLimit {
                        what: "fiber members",
                        cap: self.cap,
                    }));
                }
                return Ok(self.out.len() > self.limit);
            }
            return Ok(false);
        }
        let w = &p.weights[j];
        let mut hi = rem.div_floor(w);
        for &i in &p.live {
            let a = &p.rows[i][j];
            if a.is_pos() && p.suffix[j][i] == 1 {
                hi = hi.min(self.r[i].div_floor(a));
            } else if a.is_neg() && p.suffix[j][i] == -1 {
                hi = hi.min(self.r[i].neg()?.div_floor(&a.neg()?));
            }
        }
        if hi.is_neg() {
            return Ok(false);
        }
        let lo = if j + 1 == n {
            // the last coordinate is forced by the weight equation
            if !rem.sub(&hi.mul(w)?)?.is_zero() {
                return Ok(false);
            }
            hi.clone()
        } else {
            T::zero()
        };
        let saved_r = self.r.clone();
        let mut v = lo;
        loop {
            if v > hi {
                break;
            }
            let mut ok = true;
            for &i in &p.live {
                let a = &p.rows[i][j];
                if !a.is_zero() {
                    self.r[i] = saved_r[i].sub(&a.mul(&v)?)?;
                }
            }
            for &i in &p.ending[j] {
                ok &= self.r[i].is_zero();
            }
            if ok && j + 1 < n {
                for &i in &p.live {
                    match p.suffix[j + 1][i] {
                        1 => ok &= !self.r[i].is_neg(),
                        -1 => ok &= !self.r[i].is_pos(),
                        _ => {}
                    }
                }
            }
            if ok {
                self.t[j] = v.clone();
                let next = rem.sub(&w.mul(&v)?)?;
                if self.rec(j + 1, next)? {
                    return Ok(true);
                }
            }
            v = v.add(&one::<T>()?)?;
        }
        self.t[j] = T::zero();
        self.r = saved_r;
        Ok(false)
    }
}

fn one<T: Coeff>() -> Step<T> {
    T::from_big(&BigInt::from(1))
}

fn members<T: Coeff>(
    a: &IntMatrix,
    grading: &Grading,
    b: &IntVector,
    cap: usize,
    stop: Stop,
) -> Step<Vec<IntVector>> {
    let p = FiberProblem::<T>::new(a, grading)?;
    let bt = vec_from_big::<T>(b)?;
    let found = p.enumerate(&bt, cap, stop)?;
    Ok(found.iter().map(|t| IntVector(vec_to_big(t))).collect())
}

fn enumerate_exact(
    a: &IntMatrix,
    grading: &Grading,
    b: &IntVector,
    cap: usize,
    stop_after: Option<usize>,
) -> Result<Vec<IntVector>> {
    let stop = || stop_after.map_or(Stop::Never, Stop::After);
    let mut found = with_fallback(
        || members::<i64>(a, grading, b, cap, stop()),
        || members::<BigInt>(a, grading, b, cap, stop()),
    )?;
    found.sort();
    Ok(found)
}

/// All `t ∈ Nⁿ` with `A·t = b`.
pub fn fiber_by_degree(a: &IntMatrix, b: &IntVector, limits: &Limits) -> Result<Fiber> {
    if b.len() != a.rows() {
        return Err(Error::InvalidArgument(format!(
            "degree has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let grading = Grading::of(a)?;
    let members = enumerate_exact(a, &grading, b, limits.fiber_cap, None)?;
    Ok(Fiber {
        matrix: a.clone(),
        degree: b.clone(),
        members,
    })
}

fn check_kernel_element(a: &IntMatrix, u: &IntVector) -> Result<()> {
    if u.len() != a.cols() {
        return Err(Error::InvalidArgument(format!(
            "vector has length {}, matrix has {} columns",
            u.len(),
            a.cols()
        )));
    }
    if !a.annihilates(u) {
        return Err(Error::Domain(format!("({u}) is not in the kernel")));
    }
    Ok(())
}

/// The fiber of `u⁺` for a kernel element `u`.
pub fn fiber_of(a: &IntMatrix, u: &IntVector, limits: &Limits) -> Result<Fiber> {
    check_kernel_element(a, u)?;
    let b = a.mul_vec(&u.pos_part())?;
    fiber_by_degree(a, &b, limits)
}

/// `u` is indispensable iff its fiber is exactly `{u⁺, u⁻}`; the search stops
/// at the third member.
pub fn is_indispensable(a: &IntMatrix, u: &IntVector, limits: &Limits) -> Result<bool> {
    check_kernel_element(a, u)?;
    if u.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero vector is never indispensable".into(),
        ));
    }
    let grading = Grading::of(a)?;
    is_indispensable_graded(a, &grading, u, limits)
}

pub(crate) fn is_indispensable_graded(
    a: &IntMatrix,
    grading: &Grading,
    u: &IntVector,
    limits: &Limits,
) -> Result<bool> {
    let b = a.mul_vec(&u.pos_part())?;
    let found = enumerate_exact(a, grading, &b, limits.fiber_cap, Some(2))?;
    Ok(found.len() == 2)
}
