//! Command-line front end. `run` parses arguments, dispatches one command and
//! returns the process exit code: 0 success, 2 invalid input, 3 matrix not
//! positively graded, 4 resource cap exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bases::{
    fiber_by_degree, fiber_of, graver, graver_bruteforce, indispensable_set, is_indispensable,
    is_markov_basis, minimal_markov, BasisKind, BasisSet, Grading, Limits,
};
use crate::bouquet::bouquets;
use crate::complexity::{
    certify_witness, complexity_bound, complexity_bound_sharp, graver_norm_bound,
    markov_complexity_upto, matrix_graph, prune_rows, tree_depth, Convention,
    DEFAULT_TREE_DEPTH_CAP,
};
use crate::error::{Error, Result};
use crate::intlin::text::{format_matrix, matrix_digest, parse_matrix, parse_vector};
use crate::intlin::{gale_transforms, kernel_basis, IntMatrix, IntVector};
use crate::lawrence::{
    family_as, family_kt, generalized_lawrence, lawrence_lift, verify_generalized_lawrence,
    witness_matrix, BouquetSpec, Tableau,
};

#[derive(Parser, Debug)]
#[command(
    name = "toricx",
    version,
    about = "Lawrence liftings, bouquets, Graver and Markov bases, Markov complexity"
)]
struct Cli {
    /// Input matrix file (`-` for stdin).
    #[arg(short = 'i', long = "input", global = true)]
    input: Option<PathBuf>,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    fiber_cap: Option<usize>,
    #[arg(long, global = true)]
    graver_cap: Option<usize>,
    /// Seed for `selftest`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Forest,
    SingleTree,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// HNF basis of the integer kernel.
    Kernel,
    /// Gale transforms: columns of the HNF kernel basis (convention-dependent).
    Gale,
    /// Bouquet decomposition and bouquet matrix.
    Bouquet,
    /// Lawrence lifting `A^(r)`.
    Lift {
        #[arg(short = 'r')]
        r: usize,
    },
    /// Generalized Lawrence matrix from a base matrix and bouquet specs.
    GenLawrence {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        specs: PathBuf,
        /// Fill missing lambda vectors by extended Euclid.
        #[arg(long)]
        solve_lambda: bool,
    },
    /// The 2×4 matrix A_s.
    FamilyAs {
        #[arg(short = 's')]
        s: u64,
    },
    /// `[1, s, s²−s, s²−1]` padded with `k` ones.
    FamilyKt {
        #[arg(short = 's')]
        s: u64,
        #[arg(short = 'k')]
        k: usize,
    },
    /// The s×4 witness tableau for A_s.
    Witness {
        #[arg(short = 's')]
        s: u64,
        /// Check indispensability in A_s^(s) by one fiber enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Fiber of a kernel element or of a degree.
    Fiber {
        #[arg(short = 'u', allow_hyphen_values = true, conflicts_with = "degree")]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<String>,
    },
    /// Graver basis.
    Graver {
        /// Brute force over the 1-norm ball instead of completion.
        #[arg(long, requires = "cap")]
        oracle: bool,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Minimal Markov basis, or a check of a supplied basis file.
    Markov {
        #[arg(long)]
        verify_against: Option<PathBuf>,
    },
    /// Indispensable set, or a test of one element.
    Indispensable {
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// Lower bounds from liftings up to `--max-r`, and the upper bounds.
    Complexity {
        #[arg(long, required_unless_present = "witness")]
        max_r: Option<usize>,
        #[arg(long)]
        graver: bool,
        /// Certify one tableau instead of computing bases.
        #[arg(long, allow_hyphen_values = true)]
        witness: Option<String>,
    },
    /// Tree-depth of the column graph (of the transpose with `--transpose`).
    Treedepth {
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long)]
        transpose: bool,
    },
    /// Graver norm bound and complexity bound.
    Bound,
    /// Randomized cross-check of `graver` against the brute-force oracle.
    Selftest {
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Runs one invocation; diagnostics go to `err` only.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Error::InvalidArgument("--jobs must be >= 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPositivelyGraded(_) => 3,
        Error::ResourceLimit { .. } => 4,
        _ => 2,
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidArgument(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<IntMatrix> {
    parse_matrix(&read_text(path)?)
}

fn strs(v: &IntVector) -> Vec<String> {
    v.0.iter().map(BigInt::to_string).collect()
}

fn matrix_json(a: &IntMatrix) -> Value {
    json!((0..a.rows())
        .map(|i| strs(&a.row_vector(i)))
        .collect::<Vec<_>>())
}

fn basis_json(s: &BasisSet) -> Value {
    json!({
        "kind": s.kind().as_str(),
        "matrix_digest": matrix_digest(s.matrix()),
        "count": s.len(),
        "elements": s.elements().iter().map(strs).collect::<Vec<_>>(),
    })
}

fn doc(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("plain data serializes");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<String> {
    let limits = Limits {
        fiber_cap: cli.fiber_cap.unwrap_or(Limits::default().fiber_cap),
        graver_cap: cli.graver_cap.unwrap_or(Limits::default().graver_cap),
    };
    let input = || -> Result<IntMatrix> {
        let path = cli
            .input
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("this command needs -i FILE".into()))?;
        read_matrix(path)
    };
    let json = cli.json;
    match &cli.command {
        Command::Kernel => {
            let a = input()?;
            let k = kernel_basis(&a);
            Ok(if json {
                let rows: Vec<Vec<String>> = k.basis_rows.iter().map(strs).collect();
                doc(json!({"matrix_digest": matrix_digest(&a), "dim": k.dim(), "kernel": rows}))
            } else {
                match k.to_matrix() {
                    Some(m) => format_matrix(&m),
                    // trivial kernel: header only
                    None => format!("0 {}\n", a.cols()),
                }
            })
        }
        Command::Gale => {
            let a = input()?;
            let g = gale_transforms(&a);
            Ok(if json {
                doc(
                    json!({"matrix_digest": matrix_digest(&a), "gale": g.iter().map(strs).collect::<Vec<_>>()}),
                )
            } else {
                let mut s =
                    String::from("# column j of the HNF kernel basis, one line per column of A\n");
                for v in &g {
                    s.push_str(&format!("{v}\n"));
                }
                s
            })
        }
        Command::Bouquet => {
            let a = input()?;
            let d = bouquets(&a);
            Ok(if json {
                let list: Vec<Value> = (0..d.q())
                    .map(|k| {
                        json!({
                            "free": d.free_flags[k],
                            "cols": d.bouquets[k].iter().map(|c| c + 1).collect::<Vec<_>>(),
                            "cB": strs(&d.cb[k]),
                        })
                    })
                    .collect();
                doc(
                    json!({"matrix_digest": matrix_digest(&a), "bouquets": list, "AB": matrix_json(&d.ab)}),
                )
            } else {
                format!("{}{}", d.describe(), format_matrix(&d.ab))
            })
        }
        Command::Lift { r } => {
            let l = lawrence_lift(&input()?, *r)?;
            Ok(if json {
                doc(json!({"r": r, "matrix": matrix_json(&l)}))
            } else {
                format_matrix(&l)
            })
        }
        Command::GenLawrence {
            base,
            specs,
            solve_lambda,
        } => {
            let base = read_matrix(base)?;
            let specs = parse_specs(&read_text(specs)?, *solve_lambda)?;
            let l = generalized_lawrence(&base, &specs)?;
            let verified = verify_generalized_lawrence(&base, &specs, &l);
            Ok(if json {
                let sj: Vec<Value> = specs
                    .iter()
                    .map(|s| json!({"cprime": strs(&s.cprime), "lambda": strs(&s.lambda)}))
                    .collect();
                doc(json!({
                    "specs": sj,
                    "matrix": matrix_json(&l),
                    "verified": verified.is_ok(),
                    "verify_error": verified.err().map(|e| e.to_string()),
                }))
            } else {
                let mut s = String::new();
                for (i, sp) in specs.iter().enumerate() {
                    s.push_str(&format!(
                        "# bouquet {} cprime={} lambda={}\n",
                        i + 1,
                        sp.cprime,
                        sp.lambda
                    ));
                }
                match verified {
                    Ok(()) => s.push_str("# verified: rank and bouquets as constructed\n"),
                    Err(e) => s.push_str(&format!("# not verified: {e}\n")),
                }
                s.push_str(&format_matrix(&l));
                s
            })
        }
        Command::FamilyAs { s } => emit_matrix(&family_as(*s)?, json),
        Command::FamilyKt { s, k } => emit_matrix(&family_kt(*s, *k)?, json),
        Command::Witness { s, verify } => {
            let t = witness_matrix(*s)?;
            if !verify {
                return Ok(if json {
                    doc(json!({"s": s, "tableau": t.to_string()}))
                } else {
                    format!("{t}\n")
                });
            }
            let a = family_as(*s)?;
            let cert = certify_witness(&a, &t, &limits)?;
            Ok(if json {
                doc(json!({
                    "s": s,
                    "tableau": t.to_string(),
                    "type": cert.tableau_type,
                    "indispensable": cert.indispensable,
                    "lower_bound": cert.lower_bound(),
                }))
            } else {
                format!(
                    "{t}\ntype={} indispensable={} lower_bound={}\n",
                    cert.tableau_type,
                    cert.indispensable,
                    cert.lower_bound()
                )
            })
        }
        Command::Fiber { u, degree } => {
            let a = input()?;
            let f = match (u, degree) {
                (Some(u), None) => fiber_of(&a, &parse_vector(u)?, &limits)?,
                (None, Some(b)) => fiber_by_degree(&a, &parse_vector(b)?, &limits)?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "give exactly one of -u or --degree".into(),
                    ))
                }
            };
            Ok(if json {
                doc(json!({
                    "matrix_digest": matrix_digest(&a),
                    "degree": strs(&f.degree),
                    "count": f.len(),
                    "members": f.members.iter().map(strs).collect::<Vec<_>>(),
                }))
            } else {
                let mut s = format!("# degree={} count={}\n", f.degree, f.len());
                for m in &f.members {
                    s.push_str(&format!("{m}\n"));
                }
                s
            })
        }
        Command::Graver { oracle, cap } => {
            let a = input()?;
            let g = if *oracle {
                graver_bruteforce(&a, cap.expect("clap requires cap"))?
            } else {
                graver(&a, &limits)?
            };
            emit_basis(&g, json)
        }
        Command::Markov { verify_against } => {
            let a = input()?;
            match verify_against {
                None => emit_graded_basis(&minimal_markov(&a, &limits)?, json),
                Some(path) => {
                    let given = BasisSet::parse(&read_text(path)?, &a, BasisKind::Markov)?;
                    let ok = is_markov_basis(&a, &given, &limits)?;
                    let minimal = minimal_markov(&a, &limits)?;
                    Ok(if json {
                        doc(json!({
                            "matrix_digest": matrix_digest(&a),
                            "markov": ok,
                            "count": given.len(),
                            "minimal_count": minimal.len(),
                        }))
                    } else {
                        format!(
                            "markov={ok} count={} minimal_count={}\n",
                            given.len(),
                            minimal.len()
                        )
                    })
                }
            }
        }
        Command::Indispensable { element } => {
            let a = input()?;
            match element {
                None => emit_graded_basis(&indispensable_set(&a, &limits)?, json),
                Some(e) => {
                    let v = parse_vector(e)?;
                    let ok = is_indispensable(&a, &v, &limits)?;
                    Ok(if json {
                        doc(
                            json!({"matrix_digest": matrix_digest(&a), "element": strs(&v), "indispensable": ok}),
                        )
                    } else {
                        format!("{ok}\n")
                    })
                }
            }
        }
        Command::Complexity {
            max_r,
            graver,
            witness,
        } => {
            let a = input()?;
            if let Some(w) = witness {
                return witness_report(&a, &Tableau::parse(w)?, &limits, json);
            }
            let rep =
                markov_complexity_upto(&a, max_r.expect("clap requires max-r"), *graver, &limits)?;
            Ok(if json {
                format!("{}\n", rep.to_json())
            } else {
                let list = |v: &[usize]| {
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                let mut s = format!(
                    "r={}\nmarkov_max_type={}\n",
                    list(&rep.r_values),
                    list(&rep.per_r_max_type_markov)
                );
                if let Some(g) = &rep.per_r_max_type_graver {
                    s.push_str(&format!("graver_max_type={}\n", list(g)));
                }
                s.push_str(&format!(
                    "lower_bound={}\nupper_bound_tree_depth={}\nupper_bound_closed_form={}\ntree_depth_forest={}\ntree_depth_single_tree={}\n",
                    rep.running_max, rep.bound_td, rep.bound_closed_form, rep.tree_depth_forest, rep.tree_depth_single_tree
                ));
                s
            })
        }
        Command::Treedepth {
            convention,
            transpose,
        } => {
            let a = input()?;
            let g = matrix_graph(&if *transpose { a.transpose() } else { a.clone() });
            let forest = tree_depth(&g, Convention::Forest, DEFAULT_TREE_DEPTH_CAP)?;
            let single = tree_depth(&g, Convention::SingleTree, DEFAULT_TREE_DEPTH_CAP)?;
            Ok(match (json, convention) {
                (true, _) => doc(json!({"forest": forest, "single_tree": single})),
                (false, Some(ConventionArg::Forest)) => format!("{forest}\n"),
                (false, Some(ConventionArg::SingleTree)) => format!("{single}\n"),
                (false, None) => format!("forest={forest}\nsingle_tree={single}\n"),
            })
        }
        Command::Bound => {
            let a = input()?;
            let amax = a.max_abs();
            let t = tree_depth(
                &matrix_graph(&a.transpose()),
                Convention::Forest,
                DEFAULT_TREE_DEPTH_CAP,
            )?;
            let norm = graver_norm_bound(&amax, t as u32)?;
            let closed = complexity_bound(&amax, a.cols())?;
            let sharp = complexity_bound_sharp(&amax, a.cols())?;
            let pruned = prune_rows(&a);
            let td_bound: BigInt = graver_norm_bound(&amax, (a.cols() + pruned.rows()) as u32)? + 1;
            Ok(if json {
                doc(json!({
                    "matrix_digest": matrix_digest(&a),
                    "a": amax.to_string(),
                    "tree_depth_forest": t,
                    "graver_norm_bound": norm.to_string(),
                    "upper_bound_tree_depth": td_bound.to_string(),
                    "upper_bound_closed_form": closed.to_string(),
                    "upper_bound_sharp": sharp.to_string(),
                }))
            } else {
                format!(
                    "a={amax} tree_depth_forest={t}\ngraver_norm_bound={norm}\nupper_bound_tree_depth={td_bound}\nupper_bound_closed_form={closed}\nupper_bound_sharp={sharp}\n"
                )
            })
        }
        Command::Selftest { cases } => selftest(cli.seed.unwrap_or(0), *cases, &limits, json),
    }
}

fn emit_matrix(a: &IntMatrix, json: bool) -> Result<String> {
    Ok(if json {
        doc(json!({"matrix": matrix_json(a)}))
    } else {
        format_matrix(a)
    })
}

fn emit_basis(s: &BasisSet, json: bool) -> Result<String> {
    Ok(if json {
        doc(basis_json(s))
    } else {
        s.to_file_string()
    })
}

/// Adds the positivity witness `y` that ordered the degrees.
fn emit_graded_basis(s: &BasisSet, json: bool) -> Result<String> {
    let g = Grading::of(s.matrix())?;
    Ok(if json {
        let mut v = basis_json(s);
        v["grading"] = json!(strs(&g.y));
        doc(v)
    } else {
        let text = s.to_file_string();
        let (kind_line, rest) = text.split_once('\n').expect("header present");
        format!("{kind_line}\n# grading={}\n{rest}", g.y)
    })
}

fn witness_report(a: &IntMatrix, t: &Tableau, limits: &Limits, json: bool) -> Result<String> {
    let cert = certify_witness(a, t, limits)?;
    let closed = complexity_bound(&a.max_abs(), a.cols())?;
    Ok(if json {
        doc(json!({
            "matrix_digest": matrix_digest(a),
            "r": [cert.r],
            "witness_type": cert.tableau_type,
            "indispensable": cert.indispensable,
            "lower_bound": cert.lower_bound(),
            "upper_bound_closed_form": closed.to_string(),
        }))
    } else {
        format!(
            "r={}\nwitness_type={}\nindispensable={}\nlower_bound={}\nupper_bound_closed_form={closed}\n",
            cert.r,
            cert.tableau_type,
            cert.indispensable,
            cert.lower_bound()
        )
    })
}

/// Specs file: one bouquet per line, `cprime = a,b,c ; lambda = x,y,z`.
/// `#` starts a comment line.
pub fn parse_specs(text: &str, solve_lambda: bool) -> Result<Vec<BouquetSpec>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: i + 1, msg };
        let mut cprime = None;
        let mut lambda = None;
        for part in line.split(';') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| perr(format!("expected `key = values`, found {:?}", part.trim())))?;
            let v = parse_vector(val).map_err(|e| perr(e.to_string()))?;
            match key.trim() {
                "cprime" => cprime = Some(v),
                "lambda" => lambda = Some(v),
                k => return Err(perr(format!("unknown key {k:?}"))),
            }
        }
        let cprime = cprime.ok_or_else(|| perr("missing cprime".into()))?;
        let spec = match lambda {
            Some(l) => BouquetSpec::new(cprime, l),
            None if solve_lambda => BouquetSpec::with_solved_lambda(cprime)?,
            None => return Err(perr("missing lambda (use --solve-lambda)".into())),
        };
        out.push(spec);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("specs file has no bouquets".into()));
    }
    Ok(out)
}

fn selftest(seed: u64, cases: usize, limits: &Limits, json: bool) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let a = IntMatrix::from_rows(&rows)?;
        let fast = graver(&a, limits)?;
        let cap = fast.max_l1_norm();
        let cap = u64::try_from(&cap).unwrap_or(u64::MAX).max(1);
        let slow = graver_bruteforce(&a, cap)?;
        if fast.elements() != slow.elements() {
            failures.push(json!({"case": case, "matrix": matrix_json(&a)}));
        }
    }
    let ok = failures.is_empty();
    let text = if json {
        doc(json!({"seed": seed, "cases": cases, "ok": ok, "failures": failures}))
    } else {
        format!(
            "seed={seed} cases={cases} failures={} ok={ok}\n",
            failures.len()
        )
    };
    if ok {
        Ok(text)
    } else {
        Err(Error::Domain(format!("selftest failed: {}", text.trim())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("toricx").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generators_need_no_input() {
        let (code, out, _) = call(&["family-as", "-s", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "2 4\n0 1 2 3\n1 1 1 1\n");
        let (code, out, _) = call(&["witness", "-s", "3", "--verify"]);
        assert_eq!(code, 0);
        assert!(out.contains("indispensable=true"));
    }

    #[test]
    fn error_codes() {
        assert_eq!(call(&["kernel"]).0, 2);
        assert_eq!(call(&["lift", "-r", "2", "--bogus"]).0, 2);
        assert_eq!(call(&["family-as", "-s", "1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn specs_format() {
        let s = parse_specs("# c\ncprime = 1,-1 ; lambda = 1,0\ncprime = 2,3\n", true).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].lambda.dot(&s[1].cprime), BigInt::from(1));
        assert!(parse_specs("cprime = 2\n", false).is_err());
        assert!(parse_specs("cp = 2 ; lambda = 1\n", false).is_err());
    }

    #[test]
    fn selftest_passes() {
        let (code, out, err) = call(&["selftest", "--seed", "7", "--cases", "5"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("ok=true"));
    }
}
