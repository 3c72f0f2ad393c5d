//! Command-line front end: heights, distance estimates, interpolation,
//! conjugation, certificate auditing, and the packaged experiments.
//!
//! Maps travel as JSON files {"N": .., "d": .., "coords": ["x0^2 + x1^2",
//! ..]}, points as colon syntax "x0:x1:..:xN" on the command line or JSON
//! integer arrays in files. Every command prints JSON; the experiment
//! reports also render as CSV under --format csv.
//!
//! Exit codes: 0 success, 2 degenerate or unparseable input, 3 certified
//! not-a-morphism (or a failed certificate audit), 4 resource ceiling.

use arithdist::{
    alpha_scan, bounded_complexity_search, canonical_height_detailed, conjugate,
    dynamical_distance_search, find_certificate, parse_rational_decimal, phi_a_experiment,
    prop9_slack, recover_map, sup_estimates, DistanceMode, Error, Morphism, OffsetCertificate,
    PglMap, ProjPoint, TateOpts, VerifiedMorphism,
};
use clap::{Parser, Subcommand, ValueEnum};
use num::BigInt;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "arithdist",
    version,
    about = "Certified canonical heights and arithmetic distances for self-maps of projective space"
)]
struct Cli {
    /// Working precision in bits for interval arithmetic.
    #[arg(long, global = true, default_value_t = 53)]
    precision: u32,

    /// Target enclosure width, as a decimal ("1e-6") or fraction ("1/1000").
    #[arg(long, global = true, default_value = "1e-6")]
    eps: String,

    /// Coordinate bound for sample-point enumeration.
    #[arg(long, global = true, default_value_t = 10)]
    bound: u32,

    /// Echoed into report provenance; no command is randomized.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; csv applies to experiment reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weil height enclosure of a rational point.
    Height {
        #[arg(long)]
        point: String,
    },
    /// Naive height enclosure of a map's coefficient vector.
    MapHeight {
        #[arg(long)]
        map: PathBuf,
    },
    /// Certified canonical-height enclosure of a point under a map.
    CanonicalHeight {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Certified bracket for a distance supremum between two maps.
    Distance {
        #[arg(long)]
        map_a: PathBuf,
        #[arg(long)]
        map_b: PathBuf,
        /// gap = sup |hhat_a - hhat_b|; defect = sup |(1/d_a) hhat_b(a(P)) - hhat_b(P)|.
        #[arg(long, value_enum, default_value_t = GapKind::Gap)]
        mode: GapKind,
    },
    /// Height gap against the power map of the same dimension and degree.
    Complexity {
        #[arg(long)]
        map: PathBuf,
    },
    /// Interpolate the unique degree-d map through point-value pairs.
    Recover {
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Signed degeneracy slack of a point configuration under a map.
    Prop9 {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Conjugate a map by an invertible integer matrix "a,b;c,d".
    Conjugate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        f: String,
    },
    /// Search coordinate changes minimizing the distance upper bound.
    ClassDistance {
        #[arg(long)]
        map_a: PathBuf,
        #[arg(long)]
        map_b: PathBuf,
        #[arg(long)]
        entry_bound: u32,
    },
    /// Compute and print a map's offset certificate.
    Certificate {
        #[arg(long)]
        map: PathBuf,
    },
    /// Re-verify a serialized certificate against a map.
    VerifyCert {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Desk-scale studies over map families.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GapKind {
    Gap,
    Defect,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// The family x^d + A x^(d-1) y against the power map.
    PhiA {
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Comma-separated family parameters, e.g. "10,100,1000".
        #[arg(long, value_delimiter = ',', required = true)]
        a_list: Vec<String>,
    },
    /// Naive height versus pullback defect over all small-coefficient maps.
    Alpha {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        coeff_bound: u32,
    },
    /// Bounded-distance finiteness enumeration against a reference map.
    Finiteness {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        coeff_bound: u32,
        #[arg(long)]
        complexity_bound: String,
    },
}

#[derive(Deserialize)]
struct PairsFile {
    #[serde(rename = "N")]
    n: usize,
    d: u32,
    pairs: Vec<PairEntry>,
}

#[derive(Deserialize)]
struct PairEntry {
    point: Vec<i128>,
    value: Vec<i128>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

enum CliError {
    Lib(Error),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::NotAMorphism(_)) | CliError::Lib(Error::InvalidCertificate(_)) => {
                3
            }
            CliError::Lib(Error::ResourceCeiling(_)) => 4,
            _ => 2,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let eps = parse_rational_decimal(&cli.eps)
        .ok_or_else(|| CliError::Input(format!("unparseable eps {:?}", cli.eps)))?;
    let precision = cli.precision;
    let bound = cli.bound;

    let text = match cli.command {
        Command::Height { point } => {
            let p = ProjPoint::parse(&point)?;
            pretty(&p.weil_height(precision))?
        }
        Command::MapHeight { map } => {
            let m = load_map(&map)?;
            pretty(&m.naive_height(precision))?
        }
        Command::CanonicalHeight { map, point } => {
            let vm = VerifiedMorphism::new(load_map(&map)?)?;
            let p = ProjPoint::parse(&point)?;
            let detail = canonical_height_detailed(
                vm.map(),
                vm.cert(),
                &p,
                &eps,
                precision,
                &TateOpts::default(),
            )?;
            pretty(&detail)?
        }
        Command::Distance { map_a, map_b, mode } => {
            let va = VerifiedMorphism::new(load_map(&map_a)?)?;
            let vb = VerifiedMorphism::new(load_map(&map_b)?)?;
            let mode = match mode {
                GapKind::Gap => DistanceMode::HeightGap,
                GapKind::Defect => DistanceMode::PullbackDefect,
            };
            pretty(&sup_estimates(mode, &va, Some(&vb), bound, &eps, precision)?)?
        }
        Command::Complexity { map } => {
            let vm = VerifiedMorphism::new(load_map(&map)?)?;
            pretty(&sup_estimates(DistanceMode::Complexity, &vm, None, bound, &eps, precision)?)?
        }
        Command::Recover { pairs } => {
            let file: PairsFile = load_json(&pairs)?;
            let data = file
                .pairs
                .into_iter()
                .map(|e| {
                    let point =
                        ProjPoint::from_integers(&e.point.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())?;
                    let value = e.value.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
                    Ok((point, value))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            pretty(&recover_map(file.n, file.d, &data)?)?
        }
        Command::Prop9 { map, points } => {
            let m = load_map(&map)?;
            let pts = load_points(&points)?;
            let slack = prop9_slack(&m, &pts, precision)?;
            pretty(&serde_json::json!({ "slack": slack, "points": pts.len() }))?
        }
        Command::Conjugate { map, f } => {
            let m = load_map(&map)?;
            let f = PglMap::parse(&f)?;
            pretty(&conjugate(&m, &f)?)?
        }
        Command::ClassDistance { map_a, map_b, entry_bound } => {
            let va = VerifiedMorphism::new(load_map(&map_a)?)?;
            let vb = VerifiedMorphism::new(load_map(&map_b)?)?;
            let (best, est, table) =
                dynamical_distance_search(&va, &vb, entry_bound, bound, &eps, precision)?;
            let table: Vec<serde_json::Value> = table
                .iter()
                .map(|(f, e)| serde_json::json!({ "f": f.render(), "estimate": e }))
                .collect();
            pretty(&serde_json::json!({
                "best_f": best.render(),
                "estimate": est,
                "table": table,
            }))?
        }
        Command::Certificate { map } => {
            let m = load_map(&map)?;
            pretty(&find_certificate(&m)?)?
        }
        Command::VerifyCert { map, cert } => {
            let m = load_map(&map)?;
            let c: OffsetCertificate = load_json(&cert)?;
            c.verify(&m)?;
            pretty(&serde_json::json!({ "verified": true }))?
        }
        Command::Experiment(exp) => {
            let mut report = match exp {
                ExperimentCmd::PhiA { degree, a_list } => {
                    let a_list = a_list
                        .iter()
                        .map(|s| {
                            s.trim().parse::<BigInt>().map_err(|_| {
                                CliError::Input(format!("unparseable family parameter {s:?}"))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    phi_a_experiment(degree, &a_list, bound, &eps, precision)?
                }
                ExperimentCmd::Alpha { dim, degree, coeff_bound } => {
                    alpha_scan(dim, degree, coeff_bound, bound, &eps, precision)?
                }
                ExperimentCmd::Finiteness {
                    dim,
                    degree,
                    reference,
                    coeff_bound,
                    complexity_bound,
                } => {
                    let psi = VerifiedMorphism::new(load_map(&reference)?)?;
                    let cb = parse_rational_decimal(&complexity_bound).ok_or_else(|| {
                        CliError::Input(format!(
                            "unparseable complexity bound {complexity_bound:?}"
                        ))
                    })?;
                    bounded_complexity_search(
                        dim,
                        degree,
                        &psi,
                        coeff_bound,
                        &cb,
                        bound,
                        &eps,
                        precision,
                    )?
                }
            };
            if let Some(seed) = cli.seed {
                report.config.push(("seed".into(), seed.to_string()));
            }
            match cli.format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.to_csv(),
            }
        }
    };

    match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Input(format!("serialization: {e}")))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("bad JSON in {}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<Morphism, CliError> {
    load_json(path)
}

fn load_points(path: &Path) -> Result<Vec<ProjPoint>, CliError> {
    let raw: Vec<Vec<i128>> = load_json(path)?;
    raw.iter()
        .map(|coords| {
            ProjPoint::from_integers(&coords.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
                .map_err(CliError::from)
        })
        .collect()
}
