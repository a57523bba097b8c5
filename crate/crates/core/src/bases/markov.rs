//! Minimal Markov bases and Markov-basis checks by fiber connectivity.
//!
//! Only fibers of Graver degrees matter: every minimal Markov basis lies in
//! the Graver basis, so generation is decided on exactly those fibers.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::coeff::{vec_from_big, with_fallback, Coeff, Step};
use super::fiber::{is_indispensable_graded, FiberProblem, Grading, Stop};
use super::graver::graver;
use super::set::{BasisKind, BasisSet};
use super::Limits;
use crate::error::{Error, Result};
use crate::intlin::{IntMatrix, IntVector};

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if two components were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.components -= 1;
        true
    }
}

/// A fiber with an index for member lookup.
struct FiberGraph<T> {
    members: Vec<Vec<T>>,
    index: HashMap<Vec<T>, usize>,
    uf: UnionFind,
}

impl<T: Coeff> FiberGraph<T> {
    fn new(members: Vec<Vec<T>>) -> Self {
        let index = members
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, t)| (t, k))
            .collect();
        let uf = UnionFind::new(members.len());
        FiberGraph { members, index, uf }
    }

    /// Adds every edge `{t, t - s}` with both ends in the fiber. One sign of
    /// `s` suffices because the edge relation is symmetric.
    fn apply_move(&mut self, s: &[T]) -> Step<()> {
        for k in 0..self.members.len() {
            let t = &self.members[k];
            if t.iter().zip(s).any(|(x, y)| y.is_pos() && x < y) {
                continue;
            }
            let target: Vec<T> = t
                .iter()
                .zip(s)
                .map(|(x, y)| x.sub(y))
                .collect::<Step<_>>()?;
            if let Some(&l) = self.index.get(&target) {
                self.uf.union(k, l);
            }
        }
        Ok(())
    }

    fn connected(&self) -> bool {
        self.uf.components <= 1
    }
}

/// One Graver degree: the degree, its grading value and its elements.
struct DegreeClass {
    degree: IntVector,
    value: BigInt,
    elements: Vec<IntVector>,
}

fn degree_classes(a: &IntMatrix, grading: &Grading, graver: &BasisSet) -> Result<Vec<DegreeClass>> {
    let mut by_degree: BTreeMap<IntVector, Vec<IntVector>> = BTreeMap::new();
    for g in graver.elements() {
        let b = a.mul_vec(&g.pos_part())?;
        by_degree.entry(b).or_default().push(g.clone());
    }
    let mut classes: Vec<DegreeClass> = by_degree
        .into_iter()
        .map(|(degree, elements)| DegreeClass {
            value: grading.value(&degree),
            degree,
            elements,
        })
        .collect();
    classes.sort_by(|x, y| x.value.cmp(&y.value).then_with(|| x.degree.cmp(&y.degree)));
    Ok(classes)
}

fn to_t<T: Coeff>(vs: &[IntVector]) -> Step<Vec<Vec<T>>> {
    vs.iter().map(|v| vec_from_big(v)).collect()
}

/// Moves of one degree chosen greedily against the connectivity given by
/// the Graver moves of smaller grading value. Those induce the same fiber
/// components as the moves selected at smaller degrees, so every degree can
/// be processed independently.
fn select_for_degree<T: Coeff>(
    problem: &FiberProblem<T>,
    class: &DegreeClass,
    lower: &[Vec<T>],
    cap: usize,
) -> Step<Vec<IntVector>> {
    let b: Vec<T> = vec_from_big(&class.degree)?;
    let members = problem.enumerate(&b, cap, Stop::Never)?;
    let mut graph = FiberGraph::new(members);
    for s in lower {
        if graph.connected() {
            break;
        }
        graph.apply_move(s)?;
    }
    let mut chosen = Vec::new();
    for g in &class.elements {
        if graph.connected() {
            break;
        }
        let plus: Vec<T> = vec_from_big(&g.pos_part())?;
        let minus: Vec<T> = vec_from_big(&g.neg_part())?;
        let (p, q) = (graph.index[&plus], graph.index[&minus]);
        if graph.uf.union(p, q) {
            chosen.push(g.clone());
        }
    }
    debug_assert!(
        graph.connected(),
        "Graver moves always connect their fibers"
    );
    Ok(chosen)
}

fn minimal_over<T: Coeff>(
    a: &IntMatrix,
    grading: &Grading,
    classes: &[DegreeClass],
    cap: usize,
) -> Step<Vec<IntVector>> {
    let problem = FiberProblem::<T>::new(a, grading)?;
    let all: Vec<Vec<T>> = classes
        .iter()
        .flat_map(|c| c.elements.iter().cloned())
        .map(|v| vec_from_big(&v))
        .collect::<Step<_>>()?;
    let mut starts = Vec::with_capacity(classes.len());
    let mut offset = 0;
    for c in classes {
        starts.push(offset);
        offset += c.elements.len();
    }
    let picked: Vec<Step<Vec<IntVector>>> = classes
        .par_iter()
        .enumerate()
        .map(|(k, class)| {
            let lower_end = classes[..k]
                .iter()
                .rposition(|c| c.value < class.value)
                .map_or(0, |p| starts[p] + classes[p].elements.len());
            select_for_degree(&problem, class, &all[..lower_end], cap)
        })
        .collect();
    let mut out = Vec::new();
    for p in picked {
        out.extend(p?);
    }
    Ok(out)
}

/// A minimal Markov basis chosen from the Graver basis, degree by degree in
/// increasing grading value; within a degree, candidates are tried in basis
/// order and kept when they join two components of the fiber graph.
pub fn minimal_markov(a: &IntMatrix, limits: &Limits) -> Result<BasisSet> {
    let grading = Grading::of(a)?;
    let g = graver(a, limits)?;
    minimal_markov_from_graver(a, &grading, &g, limits)
}

pub(crate) fn minimal_markov_from_graver(
    a: &IntMatrix,
    grading: &Grading,
    graver: &BasisSet,
    limits: &Limits,
) -> Result<BasisSet> {
    let classes = degree_classes(a, grading, graver)?;
    let cap = limits.fiber_cap;
    let chosen = with_fallback(
        || minimal_over::<i64>(a, grading, &classes, cap),
        || minimal_over::<BigInt>(a, grading, &classes, cap),
    )?;
    Ok(BasisSet::from_kernel_elements(
        a.clone(),
        BasisKind::MarkovMinimal,
        chosen,
    ))
}

fn check_over<T: Coeff>(
    a: &IntMatrix,
    grading: &Grading,
    classes: &[DegreeClass],
    moves: &[IntVector],
    cap: usize,
) -> Step<bool> {
    let problem = FiberProblem::<T>::new(a, grading)?;
    let moves: Vec<Vec<T>> = to_t(moves)?;
    let results: Vec<Step<bool>> = classes
        .par_iter()
        .map(|class| {
            let b: Vec<T> = vec_from_big(&class.degree)?;
            let mut graph = FiberGraph::new(problem.enumerate(&b, cap, Stop::Never)?);
            for s in &moves {
                if graph.connected() {
                    break;
                }
                graph.apply_move(s)?;
            }
            Ok(graph.connected())
        })
        .collect();
    let mut all = true;
    for r in results {
        all &= r?;
    }
    Ok(all)
}

/// `true` iff the moves of `s` connect every fiber of a Graver degree.
pub fn is_markov_basis(a: &IntMatrix, s: &BasisSet, limits: &Limits) -> Result<bool> {
    if s.matrix() != a {
        return Err(Error::InvalidArgument(
            "basis set belongs to a different matrix".into(),
        ));
    }
    let grading = Grading::of(a)?;
    let g = graver(a, limits)?;
    let classes = degree_classes(a, &grading, &g)?;
    let cap = limits.fiber_cap;
    with_fallback(
        || check_over::<i64>(a, &grading, &classes, s.elements(), cap),
        || check_over::<BigInt>(a, &grading, &classes, s.elements(), cap),
    )
}

/// Graver elements whose fiber is `{u⁺, u⁻}`.
pub fn indispensable_set(a: &IntMatrix, limits: &Limits) -> Result<BasisSet> {
    let grading = Grading::of(a)?;
    let g = graver(a, limits)?;
    indispensable_from_graver(a, &grading, &g, limits)
}

pub(crate) fn indispensable_from_graver(
    a: &IntMatrix,
    grading: &Grading,
    graver: &BasisSet,
    limits: &Limits,
) -> Result<BasisSet> {
    let flags: Vec<Result<bool>> = graver
        .elements()
        .par_iter()
        .map(|u| is_indispensable_graded(a, grading, u, limits))
        .collect();
    let mut keep = Vec::new();
    for (u, f) in graver.elements().iter().zip(flags) {
        if f? {
            keep.push(u.clone());
        }
    }
    Ok(BasisSet::from_kernel_elements(
        a.clone(),
        BasisKind::Indispensable,
        keep,
    ))
}
