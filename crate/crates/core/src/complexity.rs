//! Markov and Graver complexity lower bounds from computed liftings,
//! tree-depth, and the norm and complexity upper bounds.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{graver, is_indispensable, BasisSet, Limits};
use crate::error::{Error, Result};
use crate::intlin::text::matrix_digest;
use crate::intlin::{row_space_rows, IntMatrix};
use crate::lawrence::{lawrence_lift, tableau_type, Tableau};

/// Largest tableau type among the elements of a basis of `A^(r)`.
pub fn max_type(set: &BasisSet, r: usize) -> usize {
    set.elements()
        .iter()
        .map(|e| Tableau::from_flat(e, r).map_or(0, |t| tableau_type(&t)))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    pub matrix: IntMatrix,
    pub r_values: Vec<usize>,
    pub per_r_max_type_markov: Vec<usize>,
    pub per_r_max_type_graver: Option<Vec<usize>>,
    /// Certified lower bound on `m(A)`.
    pub running_max: usize,
    /// `(2a+1)^(2^(n+m')-1) + 1` with `m'` the number of independent rows.
    pub bound_td: BigInt,
    /// `(2a+1)^(4^n-1) + 1`.
    pub bound_closed_form: BigInt,
    pub tree_depth_forest: usize,
    pub tree_depth_single_tree: usize,
}

#[derive(Serialize)]
struct TreeDepthJson {
    forest: usize,
    single_tree: usize,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    matrix_digest: String,
    r: &'a [usize],
    markov_max_type: &'a [usize],
    graver_max_type: Option<&'a [usize]>,
    lower_bound: usize,
    upper_bound_tree_depth: String,
    upper_bound_closed_form: String,
    tree_depth: TreeDepthJson,
}

impl ComplexityReport {
    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            matrix_digest: matrix_digest(&self.matrix),
            r: &self.r_values,
            markov_max_type: &self.per_r_max_type_markov,
            graver_max_type: self.per_r_max_type_graver.as_deref(),
            lower_bound: self.running_max,
            upper_bound_tree_depth: self.bound_td.to_string(),
            upper_bound_closed_form: self.bound_closed_form.to_string(),
            tree_depth: TreeDepthJson {
                forest: self.tree_depth_forest,
                single_tree: self.tree_depth_single_tree,
            },
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }
}

/// Per-`r` maximum types of a minimal Markov basis (and optionally the
/// Graver basis) of `A^(r)` for `r = 2..=r_max`.
pub fn markov_complexity_upto(
    a: &IntMatrix,
    r_max: usize,
    with_graver: bool,
    limits: &Limits,
) -> Result<ComplexityReport> {
    if r_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "--max-r must be >= 2, got {r_max}"
        )));
    }
    let r_values: Vec<usize> = (2..=r_max).collect();
    let per_r: Vec<Result<(usize, usize)>> = r_values
        .par_iter()
        .map(|&r| {
            let lift = lawrence_lift(a, r)?;
            let grading = crate::bases::Grading::of(&lift)?;
            let g = graver(&lift, limits)?;
            let mm = crate::bases::minimal_markov_from_graver(&lift, &grading, &g, limits)?;
            Ok((max_type(&mm, r), max_type(&g, r)))
        })
        .collect();
    let mut markov = Vec::new();
    let mut grav = Vec::new();
    for p in per_r {
        let (mk, gr) = p?;
        markov.push(mk);
        grav.push(gr);
    }
    let pruned = prune_rows(a);
    let t_graph = matrix_graph(&pruned.transpose());
    let amax = a.max_abs();
    let n = a.cols();
    Ok(ComplexityReport {
        matrix: a.clone(),
        running_max: markov.iter().copied().max().unwrap_or(0),
        per_r_max_type_markov: markov,
        per_r_max_type_graver: with_graver.then_some(grav),
        r_values,
        bound_td: graver_norm_bound(&amax, (n + pruned.rows()) as u32)? + 1,
        bound_closed_form: complexity_bound(&amax, n)?,
        tree_depth_forest: tree_depth(&t_graph, Convention::Forest, DEFAULT_TREE_DEPTH_CAP)?,
        tree_depth_single_tree: tree_depth(
            &t_graph,
            Convention::SingleTree,
            DEFAULT_TREE_DEPTH_CAP,
        )?,
    })
}

/// Per-`r` maximum type over the Graver basis of `A^(r)`, `r = 2..=r_max`.
pub fn graver_complexity_upto(a: &IntMatrix, r_max: usize, limits: &Limits) -> Result<Vec<usize>> {
    if r_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "--max-r must be >= 2, got {r_max}"
        )));
    }
    (2..=r_max)
        .into_par_iter()
        .map(|r| Ok(max_type(&graver(&lawrence_lift(a, r)?, limits)?, r)))
        .collect()
}

/// Outcome of checking one candidate tableau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub r: usize,
    pub tableau_type: usize,
    pub indispensable: bool,
}

impl WitnessCertificate {
    /// Indispensable elements lie in every minimal Markov basis, so an
    /// indispensable tableau certifies `m(A) ≥ type`.
    pub fn lower_bound(&self) -> usize {
        if self.indispensable {
            self.tableau_type
        } else {
            0
        }
    }
}

/// One fiber enumeration instead of a full Markov basis of `A^(r)`.
pub fn certify_witness(a: &IntMatrix, t: &Tableau, limits: &Limits) -> Result<WitnessCertificate> {
    if !t.is_kernel_element(a) {
        return Err(Error::Domain(format!(
            "tableau {t} is not in the kernel of the lifting"
        )));
    }
    let lift = lawrence_lift(a, t.r())?;
    let flat = t.to_flat();
    let indispensable = !flat.is_zero() && is_indispensable(&lift, &flat, limits)?;
    Ok(WitnessCertificate {
        r: t.r(),
        tableau_type: tableau_type(t),
        indispensable,
    })
}

/// Simple undirected graph on `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize) -> Self {
        SimpleGraph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    /// Loops are ignored; edges are stored as `(min, max)`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.edges.insert((u.min(v), u.max(v)));
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Disjoint edges `{2i, 2i+1}` on `2m` vertices.
    pub fn perfect_matching(m: usize) -> Self {
        let mut g = SimpleGraph::new(2 * m);
        for i in 0..m {
            g.add_edge(2 * i, 2 * i + 1);
        }
        g
    }
}

/// Graph on the columns of `M`: `{j, k}` is an edge iff some row has
/// nonzero entries in both.
pub fn matrix_graph(m: &IntMatrix) -> SimpleGraph {
    let mut g = SimpleGraph::new(m.cols());
    for i in 0..m.rows() {
        let support: Vec<usize> = (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).collect();
        for (x, &j) in support.iter().enumerate() {
            for &k in &support[x + 1..] {
                g.add_edge(j, k);
            }
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Rooted forests; a disconnected graph takes the maximum over components.
    Forest,
    /// One rooted tree spanning every vertex.
    SingleTree,
}

pub const DEFAULT_TREE_DEPTH_CAP: usize = 24;

/// Exact tree-depth by vertex elimination with memoization on vertex sets.
pub fn tree_depth(g: &SimpleGraph, convention: Convention, vertex_cap: usize) -> Result<usize> {
    let n = g.vertex_count;
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    if n > vertex_cap.min(63) {
        return Err(Error::ResourceLimit {
            what: "tree-depth vertices",
            cap: vertex_cap.min(63),
        });
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in &g.edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    let comps = components(&adj, all);
    Ok(match convention {
        Convention::Forest => forest_value(&adj, all, &mut memo),
        Convention::SingleTree if comps.len() == 1 => forest_value(&adj, all, &mut memo),
        Convention::SingleTree => {
            1 + bits(all)
                .map(|v| forest_value(&adj, all & !(1 << v), &mut memo))
                .min()
                .unwrap_or(0)
        }
    })
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            return None;
        }
        let v = set.trailing_zeros() as usize;
        set &= set - 1;
        Some(v)
    })
}

fn components(adj: &[u64], set: u64) -> Vec<u64> {
    let mut rest = set;
    let mut out = Vec::new();
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        loop {
            let grown = bits(comp).fold(comp, |acc, v| acc | (adj[v] & set));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

fn forest_value(adj: &[u64], set: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if set.count_ones() == 1 {
        return 1;
    }
    if let Some(&v) = memo.get(&set) {
        return v;
    }
    let comps = components(adj, set);
    let value = if comps.len() > 1 {
        comps
            .iter()
            .map(|&c| forest_value(adj, c, memo))
            .max()
            .unwrap_or(0)
    } else {
        1 + bits(set)
            .map(|v| forest_value(adj, set & !(1 << v), memo))
            .min()
            .unwrap_or(0)
    };
    memo.insert(set, value);
    value
}

/// Rooted tree given by a parent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub vertex_count: usize,
    pub parent: Vec<Option<usize>>,
    pub root: usize,
}

impl RootedTree {
    fn depth(&self, mut v: usize) -> Option<usize> {
        let mut d = 1;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
            if d > self.vertex_count {
                return None;
            }
        }
        (v == self.root).then_some(d)
    }

    /// Number of vertices on a longest root-to-leaf path.
    pub fn height(&self) -> usize {
        (0..self.vertex_count)
            .filter_map(|v| self.depth(v))
            .max()
            .unwrap_or(0)
    }

    /// Every vertex reaches the root without a cycle.
    pub fn is_spanning_tree(&self) -> bool {
        self.parent.len() == self.vertex_count
            && self.parent[self.root].is_none()
            && (0..self.vertex_count).all(|v| self.depth(v).is_some())
    }

    pub fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        loop {
            if v == a {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    /// Valid for `g`: spans `g` and every edge joins an ancestor and a
    /// descendant.
    pub fn is_valid_for(&self, g: &SimpleGraph) -> bool {
        self.vertex_count == g.vertex_count
            && self.is_spanning_tree()
            && g.edges
                .iter()
                .all(|&(u, v)| self.is_ancestor(u, v) || self.is_ancestor(v, u))
    }
}

/// Valid tree for the graph of the transpose of `A^(r)` with `A` of size
/// `m × n`. Vertices are the rows of `A^(r)`: copy `i` row `j` is `i·m + j`,
/// identity row `k` is `r·m + k`. The identity rows form a path from the
/// root, and each copy hangs below its last vertex as a path; height `n + m`.
pub fn lawrence_valid_tree(m: usize, n: usize, r: usize) -> Result<RootedTree> {
    if m == 0 || n == 0 || r < 2 {
        return Err(Error::InvalidArgument(format!(
            "need m, n >= 1 and r >= 2, got {m}, {n}, {r}"
        )));
    }
    let total = r * m + n;
    let mut parent = vec![None; total];
    let c = |k: usize| r * m + k;
    for k in 1..n {
        parent[c(k)] = Some(c(k - 1));
    }
    for i in 0..r {
        parent[i * m] = Some(c(n - 1));
        for j in 1..m {
            parent[i * m + j] = Some(i * m + j - 1);
        }
    }
    Ok(RootedTree {
        vertex_count: total,
        parent,
        root: c(0),
    })
}

/// `(2a+1)^(2^t - 1)`, the 1-norm bound for Graver elements.
pub fn graver_norm_bound(a: &BigInt, t: u32) -> Result<BigInt> {
    if t == 0 {
        return Err(Error::InvalidArgument("tree-depth must be >= 1".into()));
    }
    let base: BigInt = 2 * a + 1;
    if base.is_one() {
        return Ok(BigInt::one());
    }
    let exp = 1u64
        .checked_shl(t)
        .filter(|&e| e - 1 <= u32::MAX as u64)
        .ok_or(Error::ResourceLimit {
            what: "bound exponent 2^t - 1",
            cap: u32::MAX as usize,
        })?;
    Ok(base.pow((exp - 1) as u32))
}

/// `(2a+1)^(4^n - 1) + 1`, the upper bound on the Graver (hence Markov)
/// complexity of a matrix with `n` columns and `‖A‖∞ = a`.
pub fn complexity_bound(a: &BigInt, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one column".into()));
    }
    let t = u32::try_from(2 * n).map_err(|_| Error::ResourceLimit {
        what: "bound exponent 4^n - 1",
        cap: u32::MAX as usize,
    })?;
    Ok(graver_norm_bound(a, t)? + 1)
}

/// For the zero matrix every Graver element of a lifting has type 2.
pub fn complexity_bound_sharp(a: &BigInt, n: usize) -> Result<BigInt> {
    if a.is_zero() {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one column".into()));
        }
        return Ok(BigInt::from(2));
    }
    complexity_bound(a, n)
}

/// Drops redundant rows, keeping a basis of the row space; the kernel is
/// unchanged. A zero matrix keeps one row.
pub fn prune_rows(a: &IntMatrix) -> IntMatrix {
    let keep = row_space_rows(a);
    if keep.is_empty() {
        return a.select_rows(&[0]).expect("one row");
    }
    a.select_rows(&keep).expect("nonempty selection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lawrence::{family_as, witness_matrix};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn graphs() {
        let z = matrix_graph(&IntMatrix::zeros(2, 4).unwrap());
        assert!(z.edges.is_empty());
        let k = matrix_graph(&m(&[&[1, 1, 1, 1]]));
        assert_eq!(k.edges.len(), 6);
    }

    #[test]
    fn tree_depth_examples() {
        let single = SimpleGraph::new(1);
        assert_eq!(tree_depth(&single, Convention::Forest, 20).unwrap(), 1);
        assert_eq!(tree_depth(&single, Convention::SingleTree, 20).unwrap(), 1);
        for half in 2..6 {
            let g = SimpleGraph::perfect_matching(half);
            assert_eq!(tree_depth(&g, Convention::SingleTree, 20).unwrap(), 3);
            assert_eq!(tree_depth(&g, Convention::Forest, 20).unwrap(), 2);
        }
        // path on 7 vertices has tree-depth 3, K_4 has 4
        let mut p = SimpleGraph::new(7);
        for i in 0..6 {
            p.add_edge(i, i + 1);
        }
        assert_eq!(tree_depth(&p, Convention::Forest, 20).unwrap(), 3);
        assert_eq!(
            tree_depth(&matrix_graph(&m(&[&[1, 1, 1, 1]])), Convention::Forest, 20).unwrap(),
            4
        );
        assert!(matches!(
            tree_depth(&SimpleGraph::new(30), Convention::Forest, 20),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn valid_tree_for_lifting() {
        let t = lawrence_valid_tree(1, 2, 2).unwrap();
        assert_eq!((t.vertex_count, t.height()), (4, 3));
        let a = family_as(3).unwrap();
        let g = matrix_graph(&lawrence_lift(&a, 3).unwrap().transpose());
        let t = lawrence_valid_tree(2, 4, 3).unwrap();
        assert!(t.is_valid_for(&g));
        assert_eq!(t.height(), 6);
        // copies are never adjacent to each other
        assert!(!g.has_edge(0, 2) && !g.has_edge(1, 5));
    }

    #[test]
    fn bounds() {
        assert_eq!(
            graver_norm_bound(&BigInt::from(1), 2).unwrap(),
            BigInt::from(27)
        );
        assert_eq!(
            graver_norm_bound(&BigInt::zero(), 9).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            complexity_bound(&BigInt::from(1), 1).unwrap(),
            BigInt::from(28)
        );
        assert_eq!(
            complexity_bound_sharp(&BigInt::zero(), 3).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            complexity_bound(&BigInt::from(2), 2).unwrap(),
            BigInt::from(5).pow(15) + 1
        );
    }

    #[test]
    fn small_reports() {
        let l = Limits::default();
        let id = markov_complexity_upto(&IntMatrix::identity(2).unwrap(), 3, true, &l).unwrap();
        assert_eq!(id.per_r_max_type_markov, vec![0, 0]);
        assert_eq!(id.per_r_max_type_graver, Some(vec![0, 0]));
        let two = markov_complexity_upto(&m(&[&[1, 1]]), 3, false, &l).unwrap();
        assert_eq!(two.per_r_max_type_markov, vec![2, 2]);
        assert!(two.to_json().contains("\"graver_max_type\":null"));
        assert_eq!(
            graver_complexity_upto(&m(&[&[1, 1]]), 2, &l).unwrap(),
            vec![2]
        );
        assert!(markov_complexity_upto(&m(&[&[1, 1]]), 1, false, &l).is_err());
    }

    #[test]
    fn bound_chain_and_monotone_reports() {
        let l = Limits::default();
        let a = family_as(3).unwrap();
        let rep = markov_complexity_upto(&a, 3, true, &l).unwrap();
        let grav = rep.per_r_max_type_graver.clone().unwrap();
        for (mk, gr) in rep.per_r_max_type_markov.iter().zip(&grav) {
            assert!(mk <= gr);
            assert!(BigInt::from(*gr) <= rep.bound_closed_form);
        }
        assert!(rep.running_max >= 3);
        assert!(rep.bound_td <= rep.bound_closed_form);
        let shorter = markov_complexity_upto(&a, 2, false, &l).unwrap();
        assert!(shorter.running_max <= rep.running_max);
        assert_eq!(
            shorter.per_r_max_type_markov[..],
            rep.per_r_max_type_markov[..1]
        );
    }

    #[test]
    fn bouquet_matrix_never_exceeds_at_fixed_r() {
        let l = Limits::default();
        for a in [
            m(&[&[3, 3, 4, 5], &[2, 3, 0, 0]]),
            m(&[&[0, 0, 1, 2, 3], &[1, 0, 1, 1, 1], &[1, 1, 0, 0, 0]]),
        ] {
            let d = crate::bouquet::bouquets(&a);
            assert!(!d.has_free_bouquet());
            for r in 2..=3 {
                let big = markov_complexity_upto(&a, r, false, &l)
                    .unwrap()
                    .running_max;
                let small = markov_complexity_upto(&d.ab, r, false, &l)
                    .unwrap()
                    .running_max;
                assert!(big >= small, "r={r}: {big} < {small}");
            }
        }
    }

    #[test]
    fn witness_certifies_lower_bound() {
        let cert = certify_witness(
            &family_as(3).unwrap(),
            &witness_matrix(3).unwrap(),
            &Limits::default(),
        )
        .unwrap();
        assert!(cert.indispensable);
        assert_eq!(cert.lower_bound(), 3);
    }

    #[test]
    fn pruning_keeps_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let p = prune_rows(&a);
        assert_eq!(p.rows(), 2);
        assert!(crate::intlin::kernel_basis(&a).same_lattice(&crate::intlin::kernel_basis(&p)));
    }
}
