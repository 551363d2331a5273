//! `ultraball`: validate, export and compare finite ultrametric spaces.
//!
//! Exit codes: 0 success or "yes", 1 a semantic "no" (not isomorphic, not
//! ball-preserving, self-check failure), 2 unreadable or invalid input,
//! 3 a fast decision disagreeing with its brute-force oracle.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ultraball::ballean::{enumerate_ballean, hasse};
use ultraball::ballmap::{
    brute_force_exists, brute_force_isometry, exists_ball_preserving_bijection, find_isometry, is_ball_preserving, Direction,
    PointBijection, Preservation, DEFAULT_BRUTE_FORCE_CAP,
};
use ultraball::export::{ballean_to_json, ballean_to_text, tree_to_dot, tree_to_json, tree_to_newick};
use ultraball::generate::{generate_random, GenConfig};
use ultraball::io::{read_space, read_space_file, space_to_csv, space_to_json, FormatError};
use ultraball::isomorphism::{brute_force_tree_iso, poset_isomorphism, DEFAULT_TREE_CAP};
use ultraball::selfcheck::{run_selfcheck, SelfcheckConfig};
use ultraball::space::{PointSet, UltrametricSpace, ValidationError};
use ultraball::{build_rep_tree, Execution};

const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ultraball",
    version,
    about = "Finite ultrametric spaces, their balls and ball-preserving maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a distance matrix is an ultrametric.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the representing tree.
    Tree {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
    },
    /// List the balls and their cover relation.
    Ballean {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two spaces are equivalent and print a witness.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = IsoMode::Ball)]
        mode: IsoMode,
        /// Cross-check against exhaustive search when the inputs are small.
        #[arg(long)]
        oracle: bool,
    },
    /// Check whether a given bijection preserves balls.
    CheckMap {
        a: PathBuf,
        b: PathBuf,
        /// JSON object sending each point label of A to a point label of B.
        map: PathBuf,
        /// Name the first ball whose image or preimage is not a ball.
        #[arg(long)]
        explain: bool,
    },
    /// Generate a random ultrametric space.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        depth_bound: usize,
        #[arg(long, default_value_t = 3)]
        label_pool: u32,
        #[arg(long, value_enum, default_value_t = SpaceFormat::Json)]
        format: SpaceFormat,
    },
    /// Run every invariant and oracle comparison on a generated corpus.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long)]
        json: bool,
        /// Run cases one after another on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeFormat {
    Json,
    Dot,
    Newick,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum IsoMode {
    Ball,
    Isometry,
    Poset,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<UltrametricSpace, Failure> {
    read_space(path).map_err(|e| Failure::input(format!("{}: {}: {e}", path.display(), e.code())))
}

fn labels(s: &UltrametricSpace, set: &PointSet) -> Vec<String> {
    set.iter().map(|p| s.label(p).to_string()).collect()
}

fn show_set(s: &UltrametricSpace, set: &PointSet) -> String {
    format!("{{{}}}", labels(s, set).join(", "))
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<&'a ultraball::space::ValidationReport>,
}

fn validate(file: &Path, json: bool) -> Result<u8, Failure> {
    let parsed = read_space_file(file);
    let outcome = parsed.map_err(|e| (e.code(), e.to_string(), None)).and_then(|f| {
        f.validate().map_err(|e| {
            let code = FormatError::Invalid(e.clone()).code();
            match e {
                ValidationError::Violations(r) => (code, "not an ultrametric".to_string(), Some(r)),
                other => (code, other.to_string(), None),
            }
        })
    });
    match outcome {
        Ok(s) => {
            if json {
                println!(
                    "{}",
                    pretty(&ValidateJson {
                        status: "pass",
                        points: Some(s.len()),
                        code: None,
                        message: None,
                        violations: None,
                    })
                );
            } else {
                println!(
                    "valid ultrametric space: {} points, {} distinct nonzero distances",
                    s.len(),
                    s.distance_values().len() - 1
                );
            }
            Ok(0)
        }
        Err((code, message, report)) => {
            if json {
                println!(
                    "{}",
                    pretty(&ValidateJson {
                        status: "fail",
                        points: None,
                        code: Some(code),
                        message: Some(message),
                        violations: report.as_deref(),
                    })
                );
            } else {
                println!("invalid ({code}): {message}");
                if let Some(r) = &report {
                    print!("{r}");
                }
            }
            Ok(EXIT_INPUT)
        }
    }
}

fn tree(file: &Path, format: TreeFormat) -> Result<u8, Failure> {
    let s = load(file)?;
    let t = build_rep_tree(&s);
    match format {
        TreeFormat::Json => println!("{}", tree_to_json(&t, &s)),
        TreeFormat::Dot => print!("{}", tree_to_dot(&t, &s)),
        TreeFormat::Newick => println!("{}", tree_to_newick(&t, &s)),
    }
    Ok(0)
}

fn ballean(file: &Path, json: bool) -> Result<u8, Failure> {
    let s = load(file)?;
    let b = enumerate_ballean(&s);
    if json {
        println!("{}", ballean_to_json(&b, &s));
    } else {
        print!("{}", ballean_to_text(&b, &s));
    }
    Ok(0)
}

#[derive(Serialize)]
struct BallPair {
    from: Vec<String>,
    to: Vec<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Witness {
    Points(BTreeMap<String, String>),
    Balls(Vec<BallPair>),
}

#[derive(Serialize)]
struct IsoJson {
    mode: IsoMode,
    isomorphic: bool,
    witness: Witness,
}

/// Exhaustive answer, or `None` when the inputs exceed the oracle's cap.
fn oracle_answer(mode: IsoMode, sx: &UltrametricSpace, sy: &UltrametricSpace) -> Option<bool> {
    match mode {
        IsoMode::Ball => brute_force_exists(sx, sy, DEFAULT_BRUTE_FORCE_CAP).ok().map(|d| d.equivalent),
        IsoMode::Isometry => brute_force_isometry(sx, sy, DEFAULT_BRUTE_FORCE_CAP).ok().map(|f| f.is_some()),
        IsoMode::Poset => {
            let hx = hasse(&enumerate_ballean(sx)).to_tree().ok()?;
            let hy = hasse(&enumerate_ballean(sy)).to_tree().ok()?;
            brute_force_tree_iso(&hx, &hy, DEFAULT_TREE_CAP).ok().map(|f| f.is_some())
        }
    }
}

fn iso(a: &Path, b: &Path, mode: IsoMode, oracle: bool) -> Result<u8, Failure> {
    let sx = load(a)?;
    let sy = load(b)?;
    let witness = match mode {
        IsoMode::Ball => exists_ball_preserving_bijection(&sx, &sy)
            .witness
            .map(|f| Witness::Points(f.to_labels(&sx, &sy))),
        IsoMode::Isometry => find_isometry(&sx, &sy).map(|f| Witness::Points(f.to_labels(&sx, &sy))),
        IsoMode::Poset => {
            let (bx, by) = (enumerate_ballean(&sx), enumerate_ballean(&sy));
            let found = poset_isomorphism(&hasse(&bx), &hasse(&by)).map_err(|e| Failure::input(e.to_string()))?;
            found.map(|f| {
                Witness::Balls(
                    bx.balls()
                        .iter()
                        .enumerate()
                        .map(|(i, ball)| BallPair {
                            from: labels(&sx, &ball.members),
                            to: labels(&sy, &by.balls()[f.apply(i)].members),
                        })
                        .collect(),
                )
            })
        }
    };
    let found = witness.is_some();
    if oracle {
        match oracle_answer(mode, &sx, &sy) {
            Some(expected) if expected != found => {
                return Err(Failure {
                    code: EXIT_ORACLE,
                    message: format!("oracle disagreement: fast decision {found}, exhaustive search {expected}"),
                });
            }
            Some(_) => eprintln!("oracle agrees"),
            None => eprintln!("oracle skipped: inputs exceed the exhaustive-search cap"),
        }
    }
    match witness {
        Some(witness) => {
            println!(
                "{}",
                pretty(&IsoJson {
                    mode,
                    isomorphic: true,
                    witness,
                })
            );
            Ok(0)
        }
        None => {
            println!("not isomorphic");
            Ok(EXIT_NO)
        }
    }
}

fn check_map(a: &Path, b: &Path, map: &Path, explain: bool) -> Result<u8, Failure> {
    let sx = load(a)?;
    let sy = load(b)?;
    let text = std::fs::read_to_string(map).map_err(|e| Failure::input(format!("{}: io: {e}", map.display())))?;
    let pairs: BTreeMap<String, String> =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: malformed-json: {e}", map.display())))?;
    let f = PointBijection::from_labels(&sx, &sy, &pairs).map_err(|e| Failure::input(format!("{}: {e}", map.display())))?;
    match is_ball_preserving(&f, &sx, &sy).map_err(|e| Failure::input(e.to_string()))? {
        Preservation::Preserving => {
            println!("ball-preserving");
            Ok(0)
        }
        Preservation::Violated(v) => {
            println!("not ball-preserving");
            if explain {
                match v.direction {
                    Direction::Image => println!(
                        "the ball {} of {} maps to {}, which is not a ball of {}",
                        show_set(&sx, &v.ball),
                        a.display(),
                        show_set(&sy, &f.image(&v.ball)),
                        b.display()
                    ),
                    Direction::Preimage => println!(
                        "the ball {} of {} has preimage {}, which is not a ball of {}",
                        show_set(&sy, &v.ball),
                        b.display(),
                        show_set(&sx, &f.inverse().image(&v.ball)),
                        a.display()
                    ),
                }
            }
            Ok(EXIT_NO)
        }
    }
}

fn gen(cfg: GenConfig, format: SpaceFormat) -> Result<u8, Failure> {
    if cfg.n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let s = generate_random(&cfg);
    match format {
        SpaceFormat::Json => println!("{}", space_to_json(&s)),
        SpaceFormat::Csv => print!("{}", space_to_csv(&s)),
    }
    Ok(0)
}

fn selfcheck(cfg: SelfcheckConfig, json: bool) -> Result<u8, Failure> {
    if cfg.max_n == 0 {
        return Err(Failure::input("--max-n must be at least 1"));
    }
    let report = run_selfcheck(&cfg);
    if json {
        println!("{}", pretty(&report));
    } else {
        println!("{report}");
    }
    Ok(if report.passed() { 0 } else { EXIT_NO })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { file, json } => validate(&file, json),
        Command::Tree { file, format } => tree(&file, format),
        Command::Ballean { file, json } => ballean(&file, json),
        Command::Iso { a, b, mode, oracle } => iso(&a, &b, mode, oracle),
        Command::CheckMap { a, b, map, explain } => check_map(&a, &b, &map, explain),
        Command::Gen {
            seed,
            n,
            depth_bound,
            label_pool,
            format,
        } => gen(
            GenConfig {
                seed,
                n,
                depth_bound,
                label_pool,
            },
            format,
        ),
        Command::Selfcheck {
            seed,
            count,
            max_n,
            json,
            sequential,
        } => {
            let mut cfg = SelfcheckConfig::new(seed, count, max_n);
            if sequential {
                cfg.exec = Execution::Sequential;
            }
            selfcheck(cfg, json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
