//! Batch front end: build constructions, run verification suites, apply Weyl
//! elements, and export/import JSON artifacts.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or IO error.

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use kantorlab_core::bc2;
use kantorlab_core::e6;
use kantorlab_core::field::Field;
use kantorlab_core::jsonio;
use kantorlab_core::kantor;
use kantorlab_core::lie::{GradedLieAlgebra, GradingKind};
use kantorlab_core::pairs::{Sign, TrilinearPair};
use kantorlab_core::skew;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "kantorlab", version, about = "Exact constructions and checks for Kantor pairs and their enveloping graded Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction and write it as a JSON artifact.
    Build {
        /// One of: jordan1d | double-alt | fskew | lambda3 | e6
        construction: String,
        /// Size parameter for double-alt and fskew.
        n: Option<usize>,
        /// Ground field: q or gf:<p> with prime p >= 5.
        #[arg(long, default_value = "q")]
        field: String,
        /// Attach the hyperbolic pair e (SP labels on pairs, BC2 degrees on e6).
        #[arg(long)]
        with_e: bool,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites against an artifact file.
    Verify {
        file: PathBuf,
        /// Comma-separated subset of:
        /// jacobi,grading,k1k2,jordan,obstruction,tight,central-simple,roots,cartan,chevalley
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Expected finding for the jordan check: jordan | not-jordan.
        #[arg(long)]
        expect: Option<String>,
        /// Seed for randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial count for randomized checks.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Extra report: roots | cartan | dims.
        #[arg(long)]
        report: Option<ReportKind>,
        /// Emit only the machine-readable JSON block.
        #[arg(long)]
        json: bool,
    },
    /// Apply a Weyl element to an SP-graded pair artifact.
    Weyl {
        file: PathBuf,
        /// Element name: 1, s1, s2, s2s1, -1, -s1, -s2, -s2s1.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Route: direct (product formulas), envelope (through the
        /// enveloping algebra), or both (cross-check).
        #[arg(long, default_value = "envelope")]
        via: ViaKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaKind {
    Direct,
    Envelope,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportKind {
    Roots,
    Cartan,
    Dims,
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn configure_threads() {
    if let Ok(v) = std::env::var("KANTORLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Build { construction, n, field, with_e, output } => {
            let value = build(&construction, n, &field, with_e)?;
            emit(&value, output.as_deref())?;
            Ok(true)
        }
        Command::Verify { file, checks, expect, seed, trials, report, json } => {
            verify(&file, &checks, expect.as_deref(), seed, trials, report, json)
        }
        Command::Weyl { file, element, via, output } => {
            weyl(&file, &element, via, output.as_deref())
        }
    }
}

fn build(construction: &str, n: Option<usize>, field: &str, with_e: bool) -> anyhow::Result<Value> {
    let field = Field::parse(field).map_err(|e| anyhow!("{e}"))?;
    match construction {
        "jordan1d" => {
            let mut p = TrilinearPair::new(field, 1, 1);
            for sigma in Sign::BOTH {
                p.set_basis_product(sigma, 0, 0, 0, vec![(0, field.from_i64(2))]);
            }
            Ok(jsonio::pair_to_json(&p))
        }
        "double-alt" => {
            let n = n.context("double-alt needs a size argument")?;
            if n < 2 {
                bail!("double-alt needs n >= 2");
            }
            Ok(jsonio::pair_to_json(&skew::double_alternating(field, n)))
        }
        "fskew" => {
            let n = n.context("fskew needs a size argument")?;
            if n < 2 {
                bail!("fskew needs n >= 2");
            }
            let fs = skew::FormSpace::standard(field, n, with_e);
            let p = if with_e {
                skew::sp_fskew(&fs).map_err(|e| anyhow!("{e}"))?
            } else {
                skew::fskew_pair(&fs).map_err(|e| anyhow!("{e}"))?
            };
            Ok(jsonio::pair_to_json(&p))
        }
        "lambda3" => {
            let fs = skew::FormSpace::standard(field, 6, with_e);
            let p = e6::lambda3_pair(&fs).map_err(|e| anyhow!("{e}"))?;
            Ok(jsonio::pair_to_json(&p))
        }
        "e6" => {
            let fs = skew::FormSpace::standard(field, 6, with_e);
            let alg = e6::build_e(&fs).map_err(|e| anyhow!("{e}"))?;
            let out = if with_e {
                e6::bc2_on_e(&alg).map_err(|e| anyhow!("{e}"))?
            } else {
                alg
            };
            Ok(jsonio::lie_to_json(&out.algebra))
        }
        other => bail!(
            "unknown construction {other:?} (expected jordan1d | double-alt | fskew | lambda3 | e6)"
        ),
    }
}

fn emit(value: &Value, output: Option<&std::path::Path>) -> anyhow::Result<()> {
    let text = jsonio::to_stable_string(value);
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
        None => print!("{text}"),
    }
    Ok(())
}

enum Artifact {
    Pair(TrilinearPair),
    Lie(GradedLieAlgebra),
}

fn load(file: &std::path::Path) -> anyhow::Result<Artifact> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {file:?}"))?;
    let v: Value = serde_json::from_str(&text).context("malformed JSON")?;
    if v.get("products").is_some() {
        Ok(Artifact::Pair(jsonio::pair_from_json(&v).map_err(|e| anyhow!("{e}"))?))
    } else if v.get("brackets").is_some() {
        let (l, _) = jsonio::lie_from_json(&v).map_err(|e| anyhow!("{e}"))?;
        Ok(Artifact::Lie(l))
    } else {
        bail!("file is neither a pair nor a Lie artifact");
    }
}

struct CheckOutcome {
    name: String,
    pass: bool,
    details: String,
    witness: Option<Value>,
}

fn verify(
    file: &std::path::Path,
    checks: &[String],
    expect: Option<&str>,
    seed: u64,
    trials: usize,
    report: Option<ReportKind>,
    json_only: bool,
) -> anyhow::Result<bool> {
    let started = Instant::now();
    let artifact = load(file)?;
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    let dims_table: Value;
    let mut extra_report: Value = Value::Null;
    let field;
    match &artifact {
        Artifact::Pair(p) => {
            field = p.field;
            dims_table = json!({"minus": p.dim(Sign::Minus), "plus": p.dim(Sign::Plus)});
            for check in checks {
                let outcome = run_pair_check(p, check, expect, seed, trials)
                    .with_context(|| format!("check {check:?}"))?;
                outcomes.push(outcome);
            }
        }
        Artifact::Lie(l) => {
            field = l.field;
            let dd = l.degree_dims_first();
            dims_table = json!(dd
                .iter()
                .map(|(d, n)| (d.to_string(), *n))
                .collect::<std::collections::BTreeMap<_, _>>());
            for check in checks {
                let outcome =
                    run_lie_check(l, check).with_context(|| format!("check {check:?}"))?;
                outcomes.push(outcome);
            }
            if let Some(kind) = report {
                extra_report = lie_report(l, kind)?;
            }
        }
    }
    let all = outcomes.iter().all(|o| o.pass);
    let report_json = json!({
        "input": file.display().to_string(),
        "field": field.to_string(),
        "checks": outcomes.iter().map(|o| json!({
            "name": o.name,
            "pass": o.pass,
            "details": o.details,
            "witness": o.witness,
        })).collect::<Vec<_>>(),
        "dims": dims_table,
        "report": extra_report,
        "seed": seed,
        "trials": trials,
        "timing_ms": started.elapsed().as_millis() as u64,
        "all_passed": all,
    });
    if json_only {
        print!("{}", jsonio::to_stable_string(&report_json));
    } else {
        for o in &outcomes {
            println!("{} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.details);
        }
        println!("--- report ---");
        print!("{}", jsonio::to_stable_string(&report_json));
    }
    Ok(all)
}

fn run_pair_check(
    p: &TrilinearPair,
    check: &str,
    expect: Option<&str>,
    seed: u64,
    trials: usize,
) -> anyhow::Result<CheckOutcome> {
    let name = check.to_string();
    let out = match check {
        "k1k2" => match kantor::check_kantor(p) {
            None => CheckOutcome {
                name,
                pass: true,
                details: "(K1) and (K2) hold on all basis tuples".into(),
                witness: None,
            },
            Some(v) => CheckOutcome {
                name,
                pass: false,
                details: format!("{:?} fails at {:?} {:?}", v.identity, v.sigma, v.indices),
                witness: Some(json!({
                    "identity": format!("{:?}", v.identity),
                    "sigma": v.sigma.symbol(),
                    "indices": v.indices.to_vec(),
                    "operand": v.operand,
                })),
            },
        },
        "jordan" => {
            let is = p.is_jordan();
            let expect_not = matches!(expect, Some("not-jordan"));
            let pass = if expect_not { !is } else { is };
            CheckOutcome {
                name,
                pass,
                details: format!(
                    "pair is {}Jordan{}",
                    if is { "" } else { "not " },
                    if expect_not { " (expected not-jordan)" } else { "" }
                ),
                witness: None,
            }
        }
        "grading" => match p.check_sp_grading() {
            Ok(rep) if rep.ok => CheckOutcome {
                name,
                pass: true,
                details: "short Peirce grading holds".into(),
                witness: None,
            },
            Ok(rep) => {
                let v = rep.violations.first().expect("violations listed");
                CheckOutcome {
                    name,
                    pass: false,
                    details: format!("grading violated at {:?}", (v.sigma, v.i, v.j, v.k, v.a)),
                    witness: Some(json!([v.sigma.symbol(), v.i, v.j, v.k, v.a])),
                }
            }
            Err(e) => CheckOutcome { name, pass: false, details: format!("{e}"), witness: None },
        },
        "obstruction" => {
            let j = kantor::jordan_obstruction(p).map_err(|e| anyhow!("{e}"))?;
            let ok = j.is_jordan() && kantor::check_kantor(&j).is_none();
            CheckOutcome {
                name,
                pass: ok,
                details: format!("obstruction dims {:?}", j.dims()),
                witness: None,
            }
        }
        "tight" => {
            let k = kantor::kantor_construct(p).map_err(|e| anyhow!("{e}"))?;
            let tight = kantor::tight_check(&k.algebra, &k.embedding).map_err(|e| anyhow!("{e}"))?;
            CheckOutcome {
                name,
                pass: tight,
                details: "constructed envelope tightness".into(),
                witness: None,
            }
        }
        "central-simple" => match p.field {
            Field::Q => {
                let verdict = kantor::central_simple_char0(p).map_err(|e| anyhow!("{e}"))?;
                CheckOutcome {
                    name,
                    pass: verdict == kantor::SimplicityVerdict::CentralSimple,
                    details: format!("char-0 oracle verdict: {verdict:?}"),
                    witness: None,
                }
            }
            Field::Gf(_) => {
                let rep = kantor::ideal_closure(p, &[], trials, seed).map_err(|e| anyhow!("{e}"))?;
                CheckOutcome {
                    name,
                    pass: rep.verdict == kantor::IdealClosureVerdict::NoCounterexample,
                    details: format!(
                        "randomized ideal search ({} trials, seed {}): {:?}",
                        rep.trials, rep.seed, rep.verdict
                    ),
                    witness: None,
                }
            }
        },
        other => bail!("check {other:?} does not apply to pair artifacts"),
    };
    Ok(out)
}

fn run_lie_check(l: &GradedLieAlgebra, check: &str) -> anyhow::Result<CheckOutcome> {
    let name = check.to_string();
    let out = match check {
        "jacobi" => match l.jacobi_check() {
            None => CheckOutcome {
                name,
                pass: true,
                details: format!("Jacobi holds on all {} basis triples", n_triples(l.dim)),
                witness: None,
            },
            Some((i, j, k)) => CheckOutcome {
                name,
                pass: false,
                details: format!("Jacobi fails on ({i}, {j}, {k})"),
                witness: Some(json!([i, j, k])),
            },
        },
        "grading" => {
            let rep = match l.grading {
                GradingKind::Z2 => l.grading_check(&bc2::bc2_support()),
                GradingKind::Z => {
                    let allowed = (-2..=2).map(|d| (d, 0)).collect();
                    l.grading_check(&allowed)
                }
            };
            CheckOutcome {
                name,
                pass: rep.ok,
                details: if rep.ok {
                    "support and degree additivity hold".into()
                } else {
                    format!("bad degrees {:?}, bad brackets {:?}", rep.bad_degrees, rep.bad_brackets)
                },
                witness: rep.bad_brackets.first().map(|t| json!([t.0, t.1, t.2])),
            }
        }
        "roots" | "cartan" | "chevalley" => {
            let e6alg = rebuilt_e6(l)?;
            let rd = e6::root_decomposition(&e6alg).map_err(|e| anyhow!("{e}"))?;
            match check {
                "roots" => CheckOutcome {
                    name,
                    pass: rd.roots.len() == 72,
                    details: format!("{} one-dimensional root spaces", rd.roots.len()),
                    witness: None,
                },
                "cartan" => CheckOutcome {
                    name,
                    pass: rd.cartan == e6::e6_cartan_matrix(),
                    details: "Cartan matrix comparison".into(),
                    witness: Some(json!(rd.cartan.iter().map(|r| r.to_vec()).collect::<Vec<_>>())),
                },
                _ => {
                    let rep = e6::chevalley_checks(&e6alg, &rd).map_err(|e| anyhow!("{e}"))?;
                    CheckOutcome {
                        name,
                        pass: rep.a_ok && rep.b_ok && rep.c_ok,
                        details: format!("(a) {} (b) {} (c) {}", rep.a_ok, rep.b_ok, rep.c_ok),
                        witness: None,
                    }
                }
            }
        }
        other => bail!("check {other:?} does not apply to Lie artifacts"),
    };
    Ok(out)
}

/// Root-level checks only make sense for the construction itself: rebuild it
/// over the same field and insist the file matches.
fn rebuilt_e6(l: &GradedLieAlgebra) -> anyhow::Result<e6::E6Algebra> {
    let fs = skew::FormSpace::standard(l.field, 6, false);
    let alg = e6::build_e(&fs).map_err(|e| anyhow!("{e}"))?;
    let same = alg.algebra.dim == l.dim
        && alg.algebra.stored_brackets() == l.stored_brackets()
        && l.degrees.iter().zip(alg.algebra.degrees.iter()).all(|(a, b)| a.0 == b.0);
    if !same {
        bail!("root checks need the 78-dimensional construction artifact (rebuild mismatch)");
    }
    Ok(alg)
}

fn n_triples(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn lie_report(l: &GradedLieAlgebra, kind: ReportKind) -> anyhow::Result<Value> {
    match kind {
        ReportKind::Dims => {
            let dd = l.degree_dims_first();
            Ok(json!({
                "degree_dims": dd.iter().map(|(d, n)| (d.to_string(), *n))
                    .collect::<std::collections::BTreeMap<_, _>>()
            }))
        }
        ReportKind::Roots | ReportKind::Cartan => {
            let e6alg = rebuilt_e6(l)?;
            let rd = e6::root_decomposition(&e6alg).map_err(|e| anyhow!("{e}"))?;
            match kind {
                ReportKind::Cartan => Ok(json!({
                    "cartan": rd.cartan.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                })),
                _ => Ok(json!({
                    "roots": rd.roots.iter().map(|r| json!({
                        "simple_coords": r.simple_coords.to_vec(),
                        "eps_coords": r.eps.iter().map(|c| c.to_canonical_string()).collect::<Vec<_>>(),
                        "vector_index": r.vector,
                    })).collect::<Vec<_>>(),
                })),
            }
        }
    }
}

fn weyl(
    file: &std::path::Path,
    element: &str,
    via: ViaKind,
    output: Option<&std::path::Path>,
) -> anyhow::Result<bool> {
    let Artifact::Pair(p) = load(file)? else {
        bail!("weyl needs an SP-graded pair artifact");
    };
    if p.sp_labels.is_none() {
        bail!("weyl needs SP labels on the pair");
    }
    if !bc2::is_canonical_sp(&p) {
        bail!("pair basis must list label-0 vectors first; rebuild or canonicalize the artifact");
    }
    let u = bc2::weyl_by_name(element).map_err(|e| anyhow!("{e}"))?;
    let enveloped =
        || -> anyhow::Result<TrilinearPair> { bc2::weyl_image(&p, &u).map_err(|e| anyhow!("{e}")) };
    let direct = || -> anyhow::Result<TrilinearPair> { direct_route(&p, element) };
    let (result, agree) = match via {
        ViaKind::Envelope => (enveloped()?, None),
        ViaKind::Direct => (direct()?, None),
        ViaKind::Both => {
            let a = enveloped()?;
            let b = direct()?;
            let agree = bc2::sp_tensor_equal(&a, &b);
            (a, Some(agree))
        }
    };
    if let Some(agree) = agree {
        eprintln!("paths {}", if agree { "agree" } else { "DISAGREE" });
        if !agree {
            return Ok(false);
        }
    }
    emit(&jsonio::pair_to_json(&result), output)?;
    Ok(true)
}

/// The elementary route: compose the reflection formula, the label shift and
/// the opposite according to the word for the element (rightmost acts first).
fn direct_route(p: &TrilinearPair, element: &str) -> anyhow::Result<TrilinearPair> {
    let step = |e: &str, q: &TrilinearPair| -> anyhow::Result<TrilinearPair> {
        match e {
            "s1" => bc2::reflection_direct(q).map_err(|e| anyhow!("{e}")),
            "s2" => bc2::sp_shift(q).map_err(|e| anyhow!("{e}")),
            "-1" => bc2::sp_opposite(q).map_err(|e| anyhow!("{e}")),
            _ => bail!("unknown factor {e:?}"),
        }
    };
    let word: &[&str] = match element {
        "1" => &[],
        "s1" => &["s1"],
        "s2" => &["s2"],
        "s2s1" => &["s2", "s1"],
        "-1" => &["-1"],
        "-s1" => &["-1", "s1"],
        "-s2" => &["-1", "s2"],
        "-s2s1" => &["-1", "s2", "s1"],
        other => bail!("unknown Weyl element {other:?}"),
    };
    let mut cur = p.clone();
    for e in word.iter().rev() {
        cur = step(e, &cur)?;
    }
    Ok(cur)
}
