//! Graver basis by completion.
//!
//! Elements are stored once per sign. A new element is paired with every
//! earlier one in insertion order, each sum is reduced by subtracting
//! `⊑`-smaller members until none applies, and a nonzero remainder joins the
//! set. At the fixpoint the `⊑`-minimal elements form the Graver basis.
//! [`graver`] runs this coordinate by coordinate (project-and-lift);
//! [`graver_plain_completion`] runs it once over all coordinates.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::coeff::{vec_from_big, vec_to_big, with_fallback, Coeff, Halt, Step};
use super::set::{BasisKind, BasisSet};
use super::Limits;
use crate::error::{Error, Result};
use crate::intlin::{kernel_basis, IntMatrix, IntVector};

/// Coordinates on which `⊑` is currently enforced.
#[derive(Clone, Debug)]
pub(crate) struct Restricted {
    mask: u128,
    coords: Vec<usize>,
    /// Masks are exact only when every coordinate fits in 128 bits.
    exact: bool,
}

impl Restricted {
    fn new(n: usize, coords: Vec<usize>) -> Self {
        let mask = coords
            .iter()
            .filter(|&&k| k < 128)
            .fold(0u128, |m, &k| m | (1 << k));
        Restricted {
            mask,
            coords,
            exact: n <= 128,
        }
    }

    fn all(n: usize) -> Self {
        Restricted::new(n, (0..n).collect())
    }
}

/// A vector with sign masks over its first 128 coordinates and its 1-norm
/// on the restricted coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Elem<T> {
    pub(crate) v: Vec<T>,
    pos: u128,
    neg: u128,
    norm: T,
}

impl<T: Coeff> Elem<T> {
    pub(crate) fn new(v: Vec<T>, r: &Restricted) -> Step<Self> {
        let (mut pos, mut neg) = (0u128, 0u128);
        for (k, x) in v.iter().enumerate().take(128) {
            if x.is_pos() {
                pos |= 1 << k;
            } else if x.is_neg() {
                neg |= 1 << k;
            }
        }
        let mut norm = T::zero();
        for &k in &r.coords {
            norm = norm.add(&v[k].abs()?)?;
        }
        Ok(Elem { v, pos, neg, norm })
    }

    fn is_zero(&self) -> bool {
        self.v.iter().all(Coeff::is_zero)
    }

    fn negated(&self) -> Step<Self> {
        Ok(Elem {
            v: self.v.iter().map(Coeff::neg).collect::<Step<_>>()?,
            pos: self.neg,
            neg: self.pos,
            norm: self.norm.clone(),
        })
    }

    fn sign_normalized(self) -> Step<Self> {
        match self.v.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_neg() => self.negated(),
            _ => Ok(self),
        }
    }

    /// `self ⊑ s` on the restricted coordinates (`-self ⊑ s` when `flip`).
    fn below(&self, s: &Elem<T>, flip: bool, r: &Restricted) -> bool {
        let (p, n) = if flip {
            (self.neg, self.pos)
        } else {
            (self.pos, self.neg)
        };
        if (p & !s.pos | n & !s.neg) & r.mask != 0 || self.norm > s.norm {
            return false;
        }
        r.coords.iter().all(|&k| {
            let g = &self.v[k];
            if g.is_zero() {
                return true;
            }
            let x = &s.v[k];
            let g = if flip { g.neg().ok() } else { Some(g.clone()) };
            match g {
                Some(g) if g.is_pos() => *x >= g,
                Some(g) => *x <= g,
                None => false,
            }
        })
    }

    /// `true` if `self` and `±other` have opposite signs somewhere in `r`.
    fn clashes(&self, other: &Elem<T>, subtract: bool, r: &Restricted) -> bool {
        if r.exact {
            let (op, on) = if subtract {
                (other.neg, other.pos)
            } else {
                (other.pos, other.neg)
            };
            return (self.pos & on | self.neg & op) & r.mask != 0;
        }
        r.coords.iter().any(|&k| {
            let (a, b) = (&self.v[k], &other.v[k]);
            let opposite = (a.is_pos() && b.is_neg()) || (a.is_neg() && b.is_pos());
            let same = (a.is_pos() && b.is_pos()) || (a.is_neg() && b.is_neg());
            if subtract {
                same
            } else {
                opposite
            }
        })
    }

    fn combine(&self, other: &Elem<T>, subtract: bool, r: &Restricted) -> Step<Elem<T>> {
        let v = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| if subtract { a.sub(b) } else { a.add(b) })
            .collect::<Step<Vec<T>>>()?;
        Elem::new(v, r)
    }
}

/// Normal form of `s` with respect to `basis` under `⊑`-reduction on `r`.
fn reduce<T: Coeff>(mut s: Elem<T>, basis: &[Elem<T>], r: &Restricted) -> Step<Option<Elem<T>>> {
    'outer: loop {
        if s.is_zero() {
            return Ok(None);
        }
        for g in basis {
            for flip in [false, true] {
                if g.below(&s, flip, r) {
                    s = s.combine(g, !flip, r)?;
                    continue 'outer;
                }
            }
        }
        return Ok(Some(s));
    }
}

/// Which pairs `f ± g` a completion round forms.
#[derive(Clone, Copy)]
enum Pairs<'a> {
    /// Every pair with a sign clash on the restricted coordinates.
    Clashing,
    /// Pairs without a clash on `old` whose signs are opposite at `c`.
    Lift { old: &'a Restricted, c: usize },
}

/// One completion run: pairs each new element with all earlier ones in
/// insertion order and keeps nonzero normal forms.
fn complete<T: Coeff>(
    mut g: Vec<Elem<T>>,
    r: &Restricted,
    pairs: Pairs<'_>,
    cap: usize,
) -> Step<Vec<Elem<T>>> {
    let mut i = 0;
    while i < g.len() {
        let snapshot = &g[..];
        let fi = &g[i];
        let found: Vec<Step<Option<Elem<T>>>> = (0..i)
            .into_par_iter()
            .flat_map_iter(|j| {
                [false, true].into_iter().map(move |subtract| {
                    let fj = &snapshot[j];
                    let wanted = match pairs {
                        Pairs::Clashing => fi.clashes(fj, subtract, r),
                        Pairs::Lift { old, c } => {
                            let (a, b) = (&fi.v[c], &fj.v[c]);
                            let opposite = if subtract {
                                (a.is_pos() && b.is_pos()) || (a.is_neg() && b.is_neg())
                            } else {
                                (a.is_pos() && b.is_neg()) || (a.is_neg() && b.is_pos())
                            };
                            opposite && !fi.clashes(fj, subtract, old)
                        }
                    };
                    if !wanted {
                        return Ok(None);
                    }
                    reduce(fi.combine(fj, subtract, r)?, snapshot, r)
                })
            })
            .collect();
        for e in found {
            if let Some(e) = e? {
                // members added earlier in this round may reduce it further
                if let Some(e) = reduce(e, &g, r)? {
                    g.push(e.sign_normalized()?);
                    if g.len() > cap {
                        return Err(Halt::Fail(Error::ResourceLimit {
                            what: "Graver completion set",
                            cap,
                        }));
                    }
                }
            }
        }
        i += 1;
    }
    Ok(minimal(g, r))
}

/// The `⊑`-minimal elements on `r`.
fn minimal<T: Coeff>(g: Vec<Elem<T>>, r: &Restricted) -> Vec<Elem<T>> {
    let keep: Vec<bool> = g
        .par_iter()
        .enumerate()
        .map(|(k, u)| {
            !g.iter().enumerate().any(|(l, v)| {
                l != k
                    && (v.below(u, false, r) || v.below(u, true, r))
                    && !(u.below(v, false, r) || u.below(v, true, r))
            })
        })
        .collect();
    g.into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

fn sorted_vectors<T: Coeff>(g: Vec<Elem<T>>) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = g.into_iter().map(|e| e.v).collect();
    out.sort();
    out.dedup();
    out
}

/// Plain completion from lattice generators with `⊑` on all coordinates.
pub(crate) fn completion<T: Coeff>(seeds: &[Vec<T>], cap: usize) -> Step<Vec<Vec<T>>> {
    let Some(n) = seeds.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    let r = Restricted::all(n);
    let mut g = Vec::new();
    for s in seeds {
        if let Some(e) = reduce(Elem::new(s.clone(), &r)?, &g, &r)? {
            g.push(e.sign_normalized()?);
        }
    }
    Ok(sorted_vectors(complete(g, &r, Pairs::Clashing, cap)?))
}

/// Project-and-lift: start from the pivot coordinates of an echelon basis,
/// on which the projection of the lattice is injective, then enforce `⊑` on
/// one further coordinate at a time.
///
/// When a coordinate `c` is added, only sums of two elements that agree in
/// sign on the previous coordinates and disagree at `c` need to be formed:
/// any other obstruction to a conformal representation is already resolved.
pub(crate) fn project_and_lift<T: Coeff>(
    echelon: &[Vec<T>],
    pivots: &[usize],
    cap: usize,
) -> Step<Vec<Vec<T>>> {
    let Some(n) = echelon.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    let mut coords = pivots.to_vec();
    let mut r = Restricted::new(n, coords.clone());
    let seeds = echelon
        .iter()
        .map(|v| Elem::new(v.clone(), &r))
        .collect::<Step<Vec<_>>>()?;
    let mut g = complete(seeds, &r, Pairs::Clashing, cap)?;
    for c in (0..n).filter(|c| !pivots.contains(c)) {
        let old = r;
        coords.push(c);
        r = Restricted::new(n, coords.clone());
        let rebuilt = g
            .into_iter()
            .map(|e| Elem::new(e.v, &r))
            .collect::<Step<Vec<_>>>()?;
        g = complete(rebuilt, &r, Pairs::Lift { old: &old, c }, cap)?;
    }
    Ok(sorted_vectors(g))
}

fn graver_over<T: Coeff>(echelon: &[IntVector], cap: usize, plain: bool) -> Step<Vec<IntVector>> {
    let rows: Vec<Vec<T>> = echelon
        .iter()
        .map(|s| vec_from_big(s))
        .collect::<Step<_>>()?;
    let out = if plain {
        completion(&rows, cap)?
    } else {
        let pivots: Vec<usize> = echelon
            .iter()
            .map(|row| {
                row.iter()
                    .position(|x| !num_traits::Zero::is_zero(x))
                    .expect("nonzero row")
            })
            .collect();
        project_and_lift(&rows, &pivots, cap)?
    };
    Ok(out.iter().map(|v| IntVector(vec_to_big(v))).collect())
}

/// Graver elements of the lattice with the given row-echelon basis.
pub(crate) fn graver_of_lattice(
    echelon: &[IntVector],
    cap: usize,
    plain: bool,
) -> Result<Vec<IntVector>> {
    with_fallback(
        || graver_over::<i64>(echelon, cap, plain),
        || graver_over::<BigInt>(echelon, cap, plain),
    )
}

/// Graver basis by plain completion over all coordinates at once; slower,
/// kept as an independent check on [`graver`].
pub fn graver_plain_completion(a: &IntMatrix, limits: &Limits) -> Result<BasisSet> {
    let basis = kernel_basis(a);
    let elements = graver_of_lattice(&basis.basis_rows, limits.graver_cap, true)?;
    Ok(BasisSet::from_kernel_elements(
        a.clone(),
        BasisKind::Graver,
        elements,
    ))
}

/// The `⊑`-minimal nonzero elements of `Ker_Z(A)`.
pub fn graver(a: &IntMatrix, limits: &Limits) -> Result<BasisSet> {
    let basis = kernel_basis(a);
    let elements = graver_of_lattice(&basis.basis_rows, limits.graver_cap, false)?;
    Ok(BasisSet::from_kernel_elements(
        a.clone(),
        BasisKind::Graver,
        elements,
    ))
}
