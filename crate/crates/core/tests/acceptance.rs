//! Acceptance suite: one PASS/FAIL line per criterion with its tolerance and
//! wall time. Runs as a plain binary so the lines always print.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricx::bases::{
    fiber_of, graver, graver_bruteforce, is_indispensable, is_markov_basis, minimal_markov,
    BasisKind, BasisSet, Grading, Limits,
};
use toricx::bouquet::{bouquets, lifted_bouquet_kernel_check};
use toricx::complexity::{
    certify_witness, complexity_bound, complexity_bound_sharp, graver_complexity_upto,
    graver_norm_bound, markov_complexity_upto, matrix_graph, max_type, tree_depth, Convention,
    SimpleGraph,
};
use toricx::intlin::{kernel_basis, rank, IntMatrix, IntVector};
use toricx::lawrence::{
    example61_inputs, family_as, fixture_example61, fixture_example62, generalized_lawrence,
    lawrence_lift, witness_matrix, BouquetSpec, Tableau,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn v(x: &[i64]) -> IntVector {
    IntVector::from_i64s(x)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn sorted_normalized(xs: &[IntVector]) -> Vec<IntVector> {
    let set: BTreeSet<IntVector> = xs.iter().map(IntVector::sign_normalized).collect();
    set.into_iter().collect()
}

fn c1_bouquet_example() -> Outcome {
    let lim = Limits::default();
    let a = m(&[&[3, 3, 4, 5], &[2, 3, 0, 0]]);
    let d = bouquets(&a);
    ensure(d.bouquets == vec![vec![0, 1], vec![2], vec![3]], || {
        format!("bouquets {:?}", d.bouquets)
    })?;
    ensure(
        d.cb == vec![v(&[3, -2, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
        || "cB mismatch".into(),
    )?;
    ensure(d.ab == m(&[&[3, 4, 5], &[0, 0, 0]]), || {
        format!("AB = {:?}", d.ab)
    })?;
    let mm = minimal_markov(&d.ab, &lim).map_err(e)?;
    let expected = sorted_normalized(&[v(&[1, -2, 1]), v(&[2, 1, -2]), v(&[3, -1, -1])]);
    ensure(mm.elements() == expected.as_slice(), || {
        "minimal Markov basis of AB mismatch".into()
    })?;
    let big = [
        v(&[0, 0, 5, -4]),
        v(&[3, -2, -2, 1]),
        v(&[3, -2, 3, -3]),
        v(&[6, -4, 1, -2]),
        v(&[9, -6, -1, -1]),
    ];
    let base = BasisSet::new(a.clone(), BasisKind::Markov, big.to_vec()).map_err(e)?;
    ensure(is_markov_basis(&a, &base, &lim).map_err(e)?, || {
        "5-element set is not Markov for A".into()
    })?;
    let images = d.markov_image_under_t(&base).map_err(e)?;
    let printed = sorted_normalized(&[
        v(&[0, 5, -4]),
        v(&[1, -2, 1]),
        v(&[1, 3, -3]),
        v(&[2, 1, -2]),
        v(&[3, -1, -1]),
    ]);
    ensure(images.elements() == printed.as_slice(), || {
        "T-images differ from printed images".into()
    })?;
    ensure(is_markov_basis(&d.ab, &images, &lim).map_err(e)?, || {
        "T-images not Markov".into()
    })?;
    ensure(mm.is_subset_of(&images) && images.len() > mm.len(), || {
        "T-images not strictly larger".into()
    })?;
    Ok(format!(
        "|T-images|={} |minimal|={}",
        images.len(),
        mm.len()
    ))
}

fn c2_as_indispensables() -> Outcome {
    let lim = Limits::default();
    let mut worst = Duration::ZERO;
    for s in 3..=7i64 {
        let t = Instant::now();
        let a = family_as(s as u64).map_err(e)?;
        for u in [
            v(&[1, -1, -1, 1]),
            v(&[2 - s, s - 1, -1, 0]),
            v(&[0, -1, s - 1, 2 - s]),
        ] {
            ensure(is_indispensable(&a, &u, &lim).map_err(e)?, || {
                format!("s={s} u={u} not indispensable")
            })?;
            let f = fiber_of(&a, &u, &lim).map_err(e)?;
            let two: BTreeSet<IntVector> = [u.neg_part(), u.pos_part()].into_iter().collect();
            let got: BTreeSet<IntVector> = f.members.iter().cloned().collect();
            ensure(got == two, || {
                format!("s={s} fiber of {u} has {} members", f.len())
            })?;
        }
        worst = worst.max(t.elapsed());
    }
    ensure(worst < Duration::from_secs(1), || {
        format!("slowest s took {worst:?}")
    })?;
    Ok(format!("s=3..7, slowest s {worst:.2?} (budget 1 s per s)"))
}

fn c3_witness() -> Outcome {
    let lim = Limits::default();
    let mut notes = Vec::new();
    for (s, budget) in [(3u64, 10u64), (4, 600), (5, 600)] {
        let t = Instant::now();
        let a = family_as(s).map_err(e)?;
        let w = witness_matrix(s).map_err(e)?;
        let cert = certify_witness(&a, &w, &lim).map_err(e)?;
        ensure(
            cert.indispensable && cert.lower_bound() == s as usize,
            || format!("s={s}: {cert:?}"),
        )?;
        let flat = w.to_flat();
        let f = fiber_of(&lawrence_lift(&a, s as usize).map_err(e)?, &flat, &lim).map_err(e)?;
        let expected: BTreeSet<IntVector> =
            [flat.pos_part(), flat.neg_part()].into_iter().collect();
        ensure(
            f.members.iter().cloned().collect::<BTreeSet<_>>() == expected,
            || format!("s={s} fiber size {}", f.len()),
        )?;
        let took = t.elapsed();
        ensure(took < Duration::from_secs(budget), || {
            format!("s={s} took {took:?}")
        })?;
        notes.push(format!("s={s} {took:.2?}"));
    }
    Ok(format!("lower_bound(m(A_s)) >= s; {}", notes.join(", ")))
}

fn c4_lifted_kernel() -> Outcome {
    let cases = [
        (m(&[&[3, 3, 4, 5], &[2, 3, 0, 0]]), 3),
        (family_as(3).unwrap(), 3),
        (family_as(3).unwrap(), 4),
    ];
    let mut notes = Vec::new();
    for (a, r) in cases {
        let t = Instant::now();
        ensure(lifted_bouquet_kernel_check(&a, r).map_err(e)?, || {
            format!("check false at r={r}")
        })?;
        let took = t.elapsed();
        ensure(took < Duration::from_secs(5), || {
            format!("r={r} took {took:?}")
        })?;
        notes.push(format!("{took:.2?}"));
    }
    Ok(format!(
        "HNF lattice equality, each < 5 s ({})",
        notes.join(", ")
    ))
}

fn c5_bouquet_inequality() -> Outcome {
    let lim = Limits::default();
    let base = family_as(3).map_err(e)?;
    let specs = vec![
        BouquetSpec::from_i64s(&[1, -1], &[1, 0]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
        BouquetSpec::from_i64s(&[1], &[1]),
    ];
    let l = generalized_lawrence(&base, &specs).map_err(e)?;
    ensure(l.rows() == 3 && l.cols() == 5, || {
        format!("L is {}x{}", l.rows(), l.cols())
    })?;
    let t = Instant::now();
    let d = bouquets(&l);
    let image = d.map_d_r(&witness_matrix(3).map_err(e)?).map_err(e)?;
    ensure(image.is_kernel_element(&l), || {
        "D_(3)(witness) not in kernel of L^(3)".into()
    })?;
    let ok =
        is_indispensable(&lawrence_lift(&l, 3).map_err(e)?, &image.to_flat(), &lim).map_err(e)?;
    let fiber_time = t.elapsed();
    ensure(ok, || {
        format!("D_(3)(witness) = {image} is not indispensable")
    })?;
    ensure(fiber_time < Duration::from_secs(60), || {
        format!("fiber test took {fiber_time:?}")
    })?;
    let ml = max_type(
        &minimal_markov(&lawrence_lift(&l, 3).map_err(e)?, &lim).map_err(e)?,
        3,
    );
    let ma = max_type(
        &minimal_markov(&lawrence_lift(&base, 3).map_err(e)?, &lim).map_err(e)?,
        3,
    );
    ensure(ml >= ma, || {
        format!("max type {ml} for L^(3) < {ma} for A_3^(3)")
    })?;
    Ok(format!(
        "max type L^(3)={ml} >= A_3^(3)={ma}; fiber test {fiber_time:.2?}"
    ))
}

fn c6_example61() -> Outcome {
    for s in 3..=7u64 {
        let (base, specs) = example61_inputs(s).map_err(e)?;
        let l = generalized_lawrence(&base, &specs).map_err(e)?;
        ensure(l == fixture_example61(s).map_err(e)?, || {
            format!("s={s}: matrix differs from printed one")
        })?;
        ensure(l.rows() == 6 && l.cols() == 17 && rank(&l) == 6, || {
            format!("s={s}: shape or rank")
        })?;
        let d = bouquets(&l);
        ensure(d.q() == 12 && !d.has_free_bouquet(), || {
            format!("s={s}: {} bouquets", d.q())
        })?;
        let mut start = 0;
        for (k, spec) in specs.iter().enumerate() {
            let mut padded = IntVector::zeros(17);
            padded.0[start..start + spec.len()].clone_from_slice(&spec.cprime.0);
            ensure(d.cb[k] == padded, || {
                format!("s={s}: cB of bouquet {} is {}", k + 1, d.cb[k])
            })?;
            start += spec.len();
        }
    }
    Ok("s=3..7 bit-exact, rank 6, 12 bouquets with cB = c' padded".into())
}

fn c7_example62() -> Outcome {
    let f = fixture_example62();
    ensure(f.rows() == 15 && f.cols() == 15, || "shape".into())?;
    ensure(
        f.entries()
            .iter()
            .all(|x| x.is_zero() || *x == BigInt::from(1)),
        || "entries not 0/1".into(),
    )?;
    let rk = rank(&f);
    ensure(rk == 13, || format!("rank {rk}"))?;
    let d = bouquets(&f);
    let same = kernel_basis(&d.ab).same_lattice(&kernel_basis(&family_as(5).map_err(e)?));
    ensure(same, || {
        "bouquet-matrix kernel differs from Ker(A_5)".into()
    })?;
    Ok(format!(
        "rank 13, {} bouquets, Ker(AB) = Ker(A_5) by HNF",
        d.q()
    ))
}

fn c8_boundary_rows() -> Outcome {
    let lim = Limits::default();
    let cases = [
        (IntMatrix::identity(3).unwrap(), 0usize),
        (m(&[&[1, 1]]), 2),
        (m(&[&[1, 0, 1], &[0, 1, 1]]), 2),
    ];
    for (a, want) in cases {
        let rep = markov_complexity_upto(&a, 4, false, &lim).map_err(e)?;
        ensure(rep.per_r_max_type_markov == vec![want; 3], || {
            format!("{:?} for want {want}", rep.per_r_max_type_markov)
        })?;
    }
    Ok("r=2..4: identity 0,0,0; [1 1] and [[1,0,1],[0,1,1]] 2,2,2".into())
}

fn c9_one_by_three() -> Outcome {
    let lim = Limits::default();
    let t = Instant::now();
    let mut notes = Vec::new();
    for row in [[1i64, 2, 3], [1, 2, 5], [2, 3, 5]] {
        let rep = markov_complexity_upto(&m(&[&row]), 4, false, &lim).map_err(e)?;
        let mx = rep.running_max;
        ensure((2..=3).contains(&mx), || format!("{row:?}: max type {mx}"))?;
        notes.push(format!("{row:?}->{:?}", rep.per_r_max_type_markov));
    }
    let took = t.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} (budget 2 min)", notes.join(" ")))
}

/// With `wide`, `2 ≤ n` and `m < n` so that most kernels are nontrivial.
fn random_matrix(
    rng: &mut ChaCha8Rng,
    max_m: usize,
    max_n: usize,
    bound: i64,
    wide: bool,
) -> IntMatrix {
    let cols = rng.gen_range(if wide { 2 } else { 1 }..=max_n);
    let rows = rng.gen_range(1..=if wide { max_m.min(cols - 1) } else { max_m });
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&data).unwrap()
}

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    // cofactor expansion; sizes here are at most 3
    if a.len() == 1 {
        return a.remove(0).remove(0);
    }
    let mut total = BigInt::zero();
    for j in 0..a.len() {
        let minor: Vec<Vec<BigInt>> = a[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &a[0][j] * det(minor);
        total += if j % 2 == 0 { term } else { -term };
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Graver elements are conformal sums of at most `n - d` circuits with
/// coefficients at most 1, and a circuit has at most `d + 1` nonzero entries,
/// each a subdeterminant of `A`. Hence `‖g‖₁ ≤ (n−d)(d+1)Δ`.
fn sufficient_norm_cap(a: &IntMatrix) -> u64 {
    let d = rank(a);
    let mut delta = BigInt::from(1);
    for k in 1..=d {
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let sub = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect())
                    .collect();
                delta = delta.max(det(sub).abs());
            }
        }
    }
    ((a.cols() - d) * (d + 1)) as u64 * delta.to_u64().unwrap()
}

fn c10_oracles() -> Outcome {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut graded, mut markov_elems) = (0, 0);
    for case in 0..100 {
        let a = random_matrix(&mut rng, 3, 4, 3, true);
        let g = graver(&a, &lim).map_err(e)?;
        let oracle = graver_bruteforce(&a, sufficient_norm_cap(&a)).map_err(e)?;
        ensure(g.elements() == oracle.elements(), || {
            format!("case {case}: graver differs from oracle on {a:?}")
        })?;
        if Grading::of(&a).is_err() {
            continue;
        }
        graded += 1;
        let mm = minimal_markov(&a, &lim).map_err(e)?;
        ensure(is_markov_basis(&a, &mm, &lim).map_err(e)?, || {
            format!("case {case}: not Markov")
        })?;
        for i in 0..mm.len() {
            ensure(
                !is_markov_basis(&a, &mm.without(i), &lim).map_err(e)?,
                || format!("case {case}: not minimal"),
            )?;
        }
        markov_elems += mm.len();
    }
    Ok(format!("seed 10, 100 graver = oracle; {graded} graded with minimal Markov checked ({markov_elems} removals)"))
}

fn c11_bounds() -> Outcome {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lifted = 0;
    for case in 0..200 {
        let a = random_matrix(&mut rng, 4, 4, 2, false);
        let t = tree_depth(&matrix_graph(&a.transpose()), Convention::Forest, 24).map_err(e)?;
        let bound = graver_norm_bound(&a.max_abs(), t as u32).map_err(e)?;
        let g = graver(&a, &lim).map_err(e)?;
        ensure(g.max_l1_norm() <= bound, || {
            format!("case {case}: norm {} > {bound}", g.max_l1_norm())
        })?;
        if a.cols() <= 3 {
            let cb = complexity_bound(&a.max_abs(), a.cols()).map_err(e)?;
            for gm in graver_complexity_upto(&a, 2, &lim).map_err(e)? {
                ensure(BigInt::from(gm) <= cb, || {
                    format!("case {case}: graver type {gm} > {cb}")
                })?;
            }
            lifted += 1;
        }
    }
    for row in [[1i64, 2, 3], [1, 2, 5], [2, 3, 5]] {
        let a = m(&[&row]);
        let cb = complexity_bound(&a.max_abs(), 3).map_err(e)?;
        let per_r = graver_complexity_upto(&a, 3, &lim).map_err(e)?;
        ensure(per_r.iter().all(|&x| BigInt::from(x) <= cb), || {
            format!("{row:?}: {per_r:?}")
        })?;
    }
    for half in 2..=5 {
        let pm = SimpleGraph::perfect_matching(half);
        ensure(
            tree_depth(&pm, Convention::SingleTree, 24).map_err(e)? == 3,
            || "matching single-tree".into(),
        )?;
        ensure(
            tree_depth(&pm, Convention::Forest, 24).map_err(e)? == 2,
            || "matching forest".into(),
        )?;
    }
    ensure(
        complexity_bound(&BigInt::from(1), 1).map_err(e)? == BigInt::from(28),
        || "bound(1,1)".into(),
    )?;
    ensure(
        complexity_bound_sharp(&BigInt::zero(), 3).map_err(e)? == BigInt::from(2),
        || "sharp a=0".into(),
    )?;
    let zero = IntMatrix::zeros(1, 3).unwrap();
    ensure(
        graver_complexity_upto(&zero, 3, &lim).map_err(e)? == vec![2, 2],
        || "zero matrix lifts".into(),
    )?;
    ensure(Tableau::parse("1,-1;-1,1").is_ok(), || {
        "tableau literal".into()
    })?;
    Ok(format!("seed 11, 200 norm bounds; {lifted} lifted r=2 Graver maxima under closed form; bound(1,1)=28; sharp 2"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("two-row bouquet example, AB, T-images", c1_bouquet_example),
        ("three indispensables of A_s, s=3..7", c2_as_indispensables),
        ("witness tableau indispensable in A_s^(s)", c3_witness),
        ("lifted bouquet kernel check", c4_lifted_kernel),
        ("bouquet inequality at r=3", c5_bouquet_inequality),
        ("6x17 generalized Lawrence matrix", c6_example61),
        ("15x15 0/1 fixture", c7_example62),
        ("boundary rows d=n and d=n-1", c8_boundary_rows),
        ("1x3 matrices, r <= 4", c9_one_by_three),
        ("oracle equivalence on random matrices", c10_oracles),
        ("norm and complexity bounds", c11_bounds),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = t.elapsed();
        match outcome {
            Ok(note) => println!(
                "criterion {:>2} PASS [{took:>10.2?}] {name} (tolerance: exact) {note}",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL [{took:>10.2?}] {name} (tolerance: exact) {why}",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
