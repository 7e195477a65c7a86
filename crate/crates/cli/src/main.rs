//! Command-line front end: JSON in, JSON out, strict exit-code contract.
//!
//! Exit codes: 0 = affirmative verdict, 1 = negative verdict,
//! 2 = error or refusal (bad input, cap exceeded, out-of-range exponent).
//! Diagnostics go to stderr; stdout carries exactly one JSON document on
//! success.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hardyball::classify::{
    congruence_test_with_cap, counterexample_construct_with_radius, default_collision_radius,
    hardy_equivalence, build_hardy_isomorphism, isometry_search_with_cap, isometry_test,
    CongruenceRefusal, CongruenceVerdict, HardyVerdict, IsometryOutcome, PointMap, SearchOutcome,
    DEFAULT_SEARCH_CAP,
};
use hardyball::geometry::BallPoint;
use hardyball::kernels::{gram, KernelSpaceSpec, WeightSequence};
use hardyball::linalg::TolerancePolicy;
use hardyball::selftest::run_selftest;

use hardyball_cli::documents::{
    pair, CounterexampleDocument, GramDocument, PointSetDocument, SelfTestDocument,
    VerdictDocument, WitnessDocument,
};
use hardyball_cli::CliError;

enum Outcome {
    Affirmative,
    Negative,
}

#[derive(Parser)]
#[command(
    name = "hardyball",
    version,
    about = "Isometry, congruence and weighted-Hardy equivalence decisions for kernel spaces on the complex ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the kernel Gram matrix of a point set.
    Gram {
        /// Point-set JSON file.
        #[arg(long)]
        points: PathBuf,
        /// Kernel exponent t of the space.
        #[arg(long)]
        t: f64,
        /// Entrywise tolerance override.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Decide whether a point assignment induces an isometric isomorphism.
    Isometry {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        t: f64,
        /// Comma-separated assignment (e.g. 0,2,1); default is the identity.
        #[arg(long, conflicts_with = "search")]
        assignment: Option<String>,
        /// Search all assignments instead of testing a single one.
        #[arg(long)]
        search: bool,
        #[arg(long)]
        tol: Option<f64>,
        /// Search cap override.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Decide whether two point sets are congruent under a ball automorphism.
    Congruence {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Construct an isometric-but-not-congruent pair of point sets (t > 2).
    Counterexample {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        d: usize,
        #[arg(long = "out-A")]
        out_a: PathBuf,
        #[arg(long = "out-B")]
        out_b: PathBuf,
        /// Collision radius override.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Compare two weighted Hardy spaces by their weight sequences.
    Hardy {
        /// Weight spec: const:C, power:S, binom:T, or file:PATH (JSON array).
        #[arg(long)]
        w: String,
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 256)]
        horizon: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the numerical invariant suites with a fixed seed.
    Selftest {
        #[arg(long, default_value_t = 12345)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

fn tolerances(tol: Option<f64>) -> Result<TolerancePolicy, CliError> {
    match tol {
        Some(value) => Ok(TolerancePolicy::with_tol_eq(value)?),
        None => Ok(TolerancePolicy::default()),
    }
}

fn read_points(path: &PathBuf) -> Result<Vec<BallPoint>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let doc: PointSetDocument = serde_json::from_str(&text)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    doc.to_points()
}

fn emit<T: serde::Serialize>(doc: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string(doc)?);
    Ok(())
}

fn parse_assignment(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|e| CliError(format!("assignment entry {part:?}: {e}")))
        })
        .collect()
}

fn parse_weight_spec(spec: &str, horizon: usize) -> Result<WeightSequence, CliError> {
    let Some((kind, value)) = spec.split_once(':') else {
        return Err(CliError(format!(
            "weight spec {spec:?} must look like const:C, power:S, binom:T or file:PATH"
        )));
    };
    match kind {
        "const" => Ok(WeightSequence::constant(value.parse()?, horizon)?),
        "power" => Ok(WeightSequence::power(value.parse()?, horizon)?),
        "binom" => Ok(WeightSequence::binomial(value.parse()?, horizon)?),
        "file" => {
            let text = fs::read_to_string(value)
                .map_err(|e| CliError(format!("{value}: {e}")))?;
            let values: Vec<f64> = serde_json::from_str(&text)
                .map_err(|e| CliError(format!("{value}: {e}")))?;
            Ok(WeightSequence::custom(values)?)
        }
        other => Err(CliError(format!("unknown weight family {other:?}"))),
    }
}

fn cmd_gram(points: PathBuf, t: f64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let tol = tolerances(tol)?;
    let points = read_points(&points)?;
    let Some(first) = points.first() else {
        return Err(CliError("point set is empty".to_string()));
    };
    let space = KernelSpaceSpec::new(first.dim(), t, tol)?;
    let matrix = gram(&points, &space)?;
    let n = points.len();
    let doc = GramDocument {
        command: "gram".to_string(),
        d: space.dimension(),
        t,
        matrix: (0..n)
            .map(|i| (0..n).map(|j| pair(matrix.matrix().entry(i, j))).collect())
            .collect(),
        tolerances: (&tol).into(),
    };
    emit(&doc)?;
    Ok(Outcome::Affirmative)
}

fn cmd_isometry(
    a: PathBuf,
    b: PathBuf,
    t: f64,
    assignment: Option<String>,
    search: bool,
    tol: Option<f64>,
    cap: Option<usize>,
) -> Result<Outcome, CliError> {
    let tol = tolerances(tol)?;
    let sources = read_points(&a)?;
    let targets = read_points(&b)?;
    let Some(first) = sources.first() else {
        return Err(CliError("source point set is empty".to_string()));
    };
    let space = KernelSpaceSpec::new(first.dim(), t, tol)?;
    let cap = cap.unwrap_or(DEFAULT_SEARCH_CAP);
    let mut doc = VerdictDocument::new("isometry", "not_isometric", &tol);

    if search {
        match isometry_search_with_cap(&sources, &targets, &space, cap)? {
            SearchOutcome::Found(witness) => {
                doc.verdict = "isometric".to_string();
                doc.residuals
                    .insert("ratio_reconstruction".to_string(), witness.residual);
                doc.witness = Some(WitnessDocument::Factors {
                    assignment: witness.map.assignment().to_vec(),
                    factors: witness.factors.iter().map(|&f| pair(f)).collect(),
                });
                emit(&doc)?;
                return Ok(Outcome::Affirmative);
            }
            SearchOutcome::NotIsometric => {
                doc.detail = Some("no assignment induces an isometry".to_string());
                emit(&doc)?;
                return Ok(Outcome::Negative);
            }
        }
    }

    if sources.len() != targets.len() {
        doc.detail = Some(format!(
            "no bijection exists between {} and {} points",
            sources.len(),
            targets.len()
        ));
        emit(&doc)?;
        return Ok(Outcome::Negative);
    }
    let assignment = match assignment {
        Some(text) => parse_assignment(&text)?,
        None => (0..sources.len()).collect(),
    };
    let map = PointMap::new(sources, targets, assignment)?;
    match isometry_test(&map, &space)? {
        IsometryOutcome::Witness(witness) => {
            doc.verdict = "isometric".to_string();
            doc.residuals
                .insert("ratio_reconstruction".to_string(), witness.residual);
            doc.witness = Some(WitnessDocument::Factors {
                assignment: witness.map.assignment().to_vec(),
                factors: witness.factors.iter().map(|&f| pair(f)).collect(),
            });
            emit(&doc)?;
            Ok(Outcome::Affirmative)
        }
        IsometryOutcome::NotIsometric { rank } => {
            doc.detail = Some(format!("ratio matrix has numerical rank {rank}"));
            emit(&doc)?;
            Ok(Outcome::Negative)
        }
    }
}

fn cmd_congruence(
    a: PathBuf,
    b: PathBuf,
    tol: Option<f64>,
    cap: Option<usize>,
) -> Result<Outcome, CliError> {
    let tol = tolerances(tol)?;
    let sources = read_points(&a)?;
    let targets = read_points(&b)?;
    let cap = cap.unwrap_or(DEFAULT_SEARCH_CAP);
    let mut doc = VerdictDocument::new("congruence", "not_congruent", &tol);
    match congruence_test_with_cap(&sources, &targets, &tol, cap)? {
        CongruenceVerdict::Congruent {
            witness,
            assignment,
            point_error,
        } => {
            doc.verdict = "congruent".to_string();
            doc.residuals.insert("point_error".to_string(), point_error);
            let u = witness.unitary();
            doc.witness = Some(WitnessDocument::Automorphism {
                assignment,
                unitary: (0..u.nrows())
                    .map(|i| (0..u.ncols()).map(|j| pair(u[(i, j)])).collect())
                    .collect(),
                base: witness.base().coords().iter().map(|&z| pair(z)).collect(),
            });
            emit(&doc)?;
            Ok(Outcome::Affirmative)
        }
        CongruenceVerdict::NotCongruent { refusal } => {
            doc.detail = Some(match refusal {
                CongruenceRefusal::SizeMismatch { left, right } => {
                    format!("no bijection exists between {left} and {right} points")
                }
                CongruenceRefusal::InnerProductMismatch { i, j, .. } => {
                    format!("normalized inner products disagree at pair ({i},{j})")
                }
                CongruenceRefusal::Exhausted { assignments_tried } => {
                    format!("no bijection survived ({assignments_tried} fully tested)")
                }
            });
            emit(&doc)?;
            Ok(Outcome::Negative)
        }
    }
}

fn cmd_counterexample(
    t: f64,
    d: usize,
    out_a: PathBuf,
    out_b: PathBuf,
    radius: Option<f64>,
) -> Result<Outcome, CliError> {
    let tol = TolerancePolicy::default();
    let radius = radius.unwrap_or_else(|| default_collision_radius(t));
    let cx = counterexample_construct_with_radius(t, d, radius)?;
    let space = KernelSpaceSpec::new(d, t, tol)?;

    // Self-check before anything is written: the pair must be isometric
    // and must not be congruent.
    let witness = match isometry_test(&cx.map, &space)? {
        IsometryOutcome::Witness(w) => w,
        IsometryOutcome::NotIsometric { rank } => {
            return Err(CliError(format!(
                "self-check failed: constructed pair not isometric (rank {rank})"
            )));
        }
    };
    let congruence = congruence_test_with_cap(&cx.sources, &cx.targets, &tol, DEFAULT_SEARCH_CAP)?;
    if congruence.is_congruent() {
        return Err(CliError(
            "self-check failed: constructed pair is congruent".to_string(),
        ));
    }

    let doc_a = PointSetDocument::from_points(&cx.sources);
    let doc_b = PointSetDocument::from_points(&cx.targets);
    fs::write(&out_a, serde_json::to_string(&doc_a)? + "\n")
        .map_err(|e| CliError(format!("{}: {e}", out_a.display())))?;
    fs::write(&out_b, serde_json::to_string(&doc_b)? + "\n")
        .map_err(|e| CliError(format!("{}: {e}", out_b.display())))?;

    let mut residuals = std::collections::BTreeMap::new();
    residuals.insert("ratio_reconstruction".to_string(), witness.residual);
    let doc = CounterexampleDocument {
        command: "counterexample".to_string(),
        t,
        d,
        z: pair(cx.collision.z),
        w: pair(cx.collision.w),
        radius,
        out_a: out_a.display().to_string(),
        out_b: out_b.display().to_string(),
        isometry_verdict: "isometric".to_string(),
        congruence_verdict: "not_congruent".to_string(),
        residuals,
    };
    emit(&doc)?;
    Ok(Outcome::Affirmative)
}

fn cmd_hardy(w: String, u: String, horizon: usize, tol: Option<f64>) -> Result<Outcome, CliError> {
    let tol = tolerances(tol)?;
    let w = parse_weight_spec(&w, horizon)?;
    let u = parse_weight_spec(&u, horizon)?;
    let verdict = hardy_equivalence(&w, &u, &tol);
    let mut doc = VerdictDocument::new("hardy", "inequivalent", &tol);
    doc.horizon = Some(verdict.horizon);
    doc.certified = Some(verdict.certified);
    match verdict.verdict {
        HardyVerdict::Isometric { ratio } => {
            doc.verdict = "isometric".to_string();
            doc.residuals.insert("c".to_string(), ratio);
        }
        HardyVerdict::Equivalent { lower, upper } => {
            doc.verdict = "equivalent".to_string();
            doc.residuals.insert("epsilon".to_string(), lower);
            doc.residuals.insert("M".to_string(), upper);
        }
        HardyVerdict::Inequivalent { witness_index } => {
            doc.detail = Some(format!(
                "weight ratio unbounded or vanishing (witness index {witness_index})"
            ));
            emit(&doc)?;
            return Ok(Outcome::Negative);
        }
    }
    let iso = build_hardy_isomorphism(&w, &u, &tol)?;
    doc.residuals.insert(
        "kernel_identity".to_string(),
        iso.kernel_identity_residual(&w, &u),
    );
    doc.witness = Some(WitnessDocument::Diagonal { alphas: iso.alphas });
    emit(&doc)?;
    Ok(Outcome::Affirmative)
}

fn cmd_selftest(seed: u64, cases: usize) -> Result<Outcome, CliError> {
    let report = run_selftest(seed, cases);
    let doc = SelfTestDocument::from_report(&report);
    emit(&doc)?;
    if report.all_passed() {
        Ok(Outcome::Affirmative)
    } else {
        Ok(Outcome::Negative)
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Gram { points, t, tol } => cmd_gram(points, t, tol),
        Command::Isometry {
            a,
            b,
            t,
            assignment,
            search,
            tol,
            cap,
        } => cmd_isometry(a, b, t, assignment, search, tol, cap),
        Command::Congruence { a, b, tol, cap } => cmd_congruence(a, b, tol, cap),
        Command::Counterexample {
            t,
            d,
            out_a,
            out_b,
            radius,
        } => cmd_counterexample(t, d, out_a, out_b, radius),
        Command::Hardy { w, u, horizon, tol } => cmd_hardy(w, u, horizon, tol),
        Command::Selftest { seed, cases } => cmd_selftest(seed, cases),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Affirmative) => ExitCode::from(0),
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
