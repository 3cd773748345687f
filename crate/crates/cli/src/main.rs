use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rsfactor::factor::{birkhoff_factorize, refined_factorize, BirkhoffFactors, BlockFactors};
use rsfactor::io::{matrix_to_json, parse_matrix, CoordsJson};
use rsfactor::measure::{sample_su_batch, sample_supq_batch};
use rsfactor::rootsys::{
    build_root_system, reduced_word_for, verify_delta_identity, ReducedWordData, RootKind, RootSystem, WeylElement,
};
use rsfactor::rsf::Chart;
use rsfactor::verify::{default_groups, run_all, CheckConfig, GroupSpec};
use rsfactor::Error;

const EXIT_SUITE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "rsfactor", version, about = "Birkhoff and root subgroup factorization for SU(n) and SU(p,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Debug)]
struct GroupArgs {
    /// Rank r of A_r; matrices are (r+1)x(r+1).
    #[arg(long)]
    rank: Option<usize>,
    /// Signature as p,q for SU(p,q).
    #[arg(long, value_parser = parse_signature)]
    signature: Option<(usize, usize)>,
}

impl GroupArgs {
    fn root_system(&self) -> Result<RootSystem, Error> {
        let rank = match (self.rank, self.signature) {
            (Some(r), _) => r,
            (None, Some((p, q))) => p + q - 1,
            (None, None) => return Err(Error::Config("--rank or --signature is required".into())),
        };
        build_root_system(rank, self.signature)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Fwd,
    Inv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleGroup {
    Su,
    Supq,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleFormat {
    Matrix,
    Coords,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots with heights, types and pairings.
    Roots {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced word data for a Weyl element.
    Word {
        #[command(flatten)]
        group: GroupArgs,
        /// Permutation in one-line notation, e.g. 213 or 2,1,3.
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Birkhoff factorization of a matrix (block refinement with --signature).
    Factor {
        #[arg(long)]
        signature: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Root subgroup coordinates to a matrix (fwd) or back (inv).
    Rsf {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        dir: Direction,
        /// Target Weyl element for inv; defaults to the identity.
        #[arg(long)]
        word: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs all verification suites; exit code 0 iff every suite passes.
    HaarCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples per sampler in the moment comparison.
        #[arg(long = "N", default_value_t = 100_000)]
        samples: usize,
        /// Tolerance override name=value, repeatable.
        #[arg(long)]
        tol: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of sampled group elements or coordinates.
    Sample {
        #[arg(long, value_enum)]
        group: SampleGroup,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse_signature)]
        signature: Option<(usize, usize)>,
        #[arg(long = "N", default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "matrix")]
        format: SampleFormat,
        /// Truncation radius for noncompact coordinates.
        #[arg(long, default_value_t = 0.9)]
        rmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_signature(text: &str) -> Result<(usize, usize), String> {
    let (p, q) = text
        .split_once(',')
        .ok_or_else(|| format!("signature '{text}' is not of the form p,q"))?;
    let p: usize = p.trim().parse().map_err(|_| format!("bad p in '{text}'"))?;
    let q: usize = q.trim().parse().map_err(|_| format!("bad q in '{text}'"))?;
    if p == 0 || q == 0 {
        return Err(format!("signature '{text}' needs p, q >= 1"));
    }
    Ok((p, q))
}

enum Failure {
    Error(Error),
    Io(String),
    Suites,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct RootRow {
    root: String,
    pair: [usize; 2],
    coeffs: Vec<i64>,
    height: i64,
    kind: RootKind,
    delta: i64,
    /// `root(h_sigma)` for every positive root `sigma`, in table order.
    pairings: Vec<i64>,
}

#[derive(Serialize)]
struct RootsOut {
    rank: usize,
    signature: Option<(usize, usize)>,
    roots: Vec<RootRow>,
}

fn cmd_roots(group: &GroupArgs) -> Result<String, Failure> {
    let rs = group.root_system()?;
    let roots = rs
        .positive_roots
        .iter()
        .zip(&rs.delta)
        .map(|(r, &delta)| RootRow {
            root: r.pair.to_string(),
            pair: [r.pair.i + 1, r.pair.j + 1],
            coeffs: r.coeffs.clone(),
            height: r.height,
            kind: r.kind,
            delta,
            pairings: rs.positive_roots.iter().map(|s| r.pair.pairing(s.pair)).collect(),
        })
        .collect();
    Ok(to_json(&RootsOut {
        rank: rs.rank,
        signature: rs.signature,
        roots,
    }))
}

#[derive(Serialize)]
struct WordOut {
    target: Vec<usize>,
    length: usize,
    word: Vec<usize>,
    taus: Vec<String>,
    noncompact: Vec<bool>,
    delta_identity: Vec<(i64, i64)>,
}

fn target(rs: &RootSystem, word: &Option<String>) -> Result<WeylElement, Error> {
    match word {
        Some(text) => WeylElement::parse(text, rs.n()),
        None => Ok(WeylElement::identity(rs.n())),
    }
}

fn cmd_word(group: &GroupArgs, word: &Option<String>) -> Result<String, Failure> {
    let rs = group.root_system()?;
    let w = target(&rs, word)?;
    let data = reduced_word_for(&rs, &w);
    Ok(to_json(&WordOut {
        target: w.one_line(),
        length: data.len(),
        word: data.gamma_indices(),
        taus: data.taus.iter().map(|t| t.to_string()).collect(),
        noncompact: data.taus.iter().map(|&t| rs.kind(t).is_noncompact()).collect(),
        delta_identity: verify_delta_identity(&rs, &data),
    }))
}

#[derive(Serialize)]
struct FactorOut {
    birkhoff: BirkhoffFactors,
    #[serde(skip_serializing_if = "Option::is_none")]
    block: Option<BlockFactors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_norm: Option<f64>,
}

fn cmd_factor(signature: &Option<String>, input: &PathBuf) -> Result<String, Failure> {
    let g = parse_matrix(&read(input)?)?;
    let out = match signature {
        None => FactorOut {
            birkhoff: birkhoff_factorize(&g)?,
            block: None,
            z_norm: None,
        },
        Some(text) => {
            let sig = parse_signature(text).map_err(Error::Config)?;
            let (block, birkhoff) = refined_factorize(&g, sig)?;
            let z_norm = block.z_norm();
            FactorOut {
                birkhoff,
                block: Some(block),
                z_norm: Some(z_norm),
            }
        }
    };
    Ok(to_json(&out))
}

fn cmd_rsf(group: &GroupArgs, dir: Direction, word: &Option<String>, input: &PathBuf) -> Result<String, Failure> {
    let text = read(input)?;
    match dir {
        Direction::Fwd => {
            let coords: CoordsJson = serde_json::from_str(&text)
                .map_err(|e| Error::Input(format!("bad coordinate JSON: {e}")))?;
            let mut group = group.clone();
            if group.rank.is_none() && group.signature.is_none() {
                group.rank = Some(coords.torus.len());
            }
            let rs = group.root_system()?;
            let data = ReducedWordData::from_gamma_indices(rs.rank, &coords.word)?;
            let chart = Chart::new(&rs, data)?;
            Ok(matrix_to_json(&chart.forward(&coords.zetas(), &coords.torus)?) + "\n")
        }
        Direction::Inv => {
            let g = parse_matrix(&text)?;
            let mut group = group.clone();
            if group.rank.is_none() && group.signature.is_none() {
                group.rank = Some(g.nrows().saturating_sub(1));
            }
            let rs = group.root_system()?;
            if rs.n() != g.nrows() {
                return Err(Error::Input(format!("matrix is {0}x{0}, group needs {1}x{1}", g.nrows(), rs.n())).into());
            }
            let chart = Chart::new(&rs, reduced_word_for(&rs, &target(&rs, word)?))?;
            let (zetas, torus) = chart.inverse(&g)?;
            Ok(to_json(&CoordsJson {
                word: chart.word().gamma_indices(),
                zeta: zetas.iter().map(|z| [z.re, z.im]).collect(),
                torus,
            }))
        }
    }
}

fn selected_groups(group: &GroupArgs) -> Result<Vec<GroupSpec>, Error> {
    let all = default_groups();
    let picked: Vec<GroupSpec> = match (group.rank, group.signature) {
        (None, None) => all,
        (rank, Some((p, q))) => {
            if rank.is_some_and(|r| r + 1 != p + q) {
                return Err(Error::Config(format!("signature ({p},{q}) does not match rank {}", rank.unwrap())));
            }
            vec![GroupSpec::supq(p, q)]
        }
        (Some(rank), None) => all.into_iter().filter(|g| g.rank() == rank).collect(),
    };
    if picked.is_empty() {
        return Err(Error::Config("no group in the verification grid matches the selection".into()));
    }
    for g in &picked {
        g.root_system()?;
    }
    Ok(picked)
}

fn cmd_haar_check(group: &GroupArgs, seed: u64, samples: usize, tol: &[String], out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut config = CheckConfig::new(selected_groups(group)?, seed);
    config.moment_samples = samples;
    for t in tol {
        config.tolerances.set(t)?;
    }
    let report = run_all(&config)?;
    for suite in &report.suites {
        eprintln!(
            "{:<20} {}  max error {:.3e} (tolerance {:.1e}, {} checks)",
            suite.name,
            if suite.passed { "pass" } else { "FAIL" },
            suite.max_error,
            suite.tolerance,
            suite.checks
        );
    }
    emit(out, &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Suites)
    }
}

fn csv_header(prefix: &[String], extra: &[&str]) -> String {
    let mut cols: Vec<String> = prefix.to_vec();
    cols.extend(extra.iter().map(|s| s.to_string()));
    cols.join(",") + "\n"
}

fn coord_columns(len: usize, torus: usize) -> Vec<String> {
    let mut cols = Vec::new();
    for j in 1..=len {
        cols.push(format!("zeta{j}_re"));
        cols.push(format!("zeta{j}_im"));
    }
    cols.extend((1..=torus).map(|k| format!("theta{k}")));
    cols
}

fn coord_row(zetas: &[rsfactor::Complex64], torus: &[f64]) -> Vec<String> {
    zetas
        .iter()
        .flat_map(|z| [z.re.to_string(), z.im.to_string()])
        .chain(torus.iter().map(|t| t.to_string()))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    group: SampleGroup,
    n: Option<usize>,
    signature: Option<(usize, usize)>,
    samples: usize,
    seed: u64,
    format: SampleFormat,
    rmax: f64,
) -> Result<String, Failure> {
    let mut csv = String::new();
    match group {
        SampleGroup::Su => {
            let n = n.ok_or_else(|| Error::Config("--n is required for --group su".into()))?;
            if n < 2 {
                return Err(Error::Config("--n must be at least 2".into()).into());
            }
            let batch = sample_su_batch(n, samples, seed)?;
            match format {
                SampleFormat::Matrix => {
                    let cols: Vec<String> = (1..=n)
                        .flat_map(|r| (1..=n).flat_map(move |c| [format!("re_{r}{c}"), format!("im_{r}{c}")]))
                        .collect();
                    csv += &csv_header(&cols, &[]);
                    for (_, g) in &batch {
                        let row: Vec<String> = (0..n)
                            .flat_map(|r| (0..n).flat_map(move |c| [g[(r, c)].re.to_string(), g[(r, c)].im.to_string()]))
                            .collect();
                        csv += &(row.join(",") + "\n");
                    }
                }
                SampleFormat::Coords => {
                    csv += &csv_header(&coord_columns(n * (n - 1) / 2, n - 1), &[]);
                    for (c, _) in &batch {
                        csv += &(coord_row(&c.zetas, &c.torus_angles).join(",") + "\n");
                    }
                }
            }
        }
        SampleGroup::Supq => {
            let (p, q) = signature.ok_or_else(|| Error::Config("--signature is required for --group supq".into()))?;
            if n.is_some_and(|n| n != p + q) {
                return Err(Error::Config("--n does not match --signature".into()).into());
            }
            if matches!(format, SampleFormat::Matrix) {
                return Err(Error::Config(
                    "SU(p,q) samples are weighted coordinates; use --format coords".into(),
                )
                .into());
            }
            let n = p + q;
            let batch = sample_supq_batch(p, q, samples, seed, rmax)?;
            csv += &csv_header(&coord_columns(n * (n - 1) / 2, n - 1), &["weight"]);
            for (c, w) in &batch {
                let mut row = coord_row(&c.zetas, &c.torus_angles);
                row.push(w.to_string());
                csv += &(row.join(",") + "\n");
            }
        }
    }
    Ok(csv)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Roots { group, out } => emit(out, &cmd_roots(group)?),
        Command::Word { group, word, out } => emit(out, &cmd_word(group, word)?),
        Command::Factor { signature, input, out } => emit(out, &cmd_factor(signature, input)?),
        Command::Rsf {
            group,
            dir,
            word,
            input,
            out,
        } => emit(out, &cmd_rsf(group, *dir, word, input)?),
        Command::HaarCheck {
            group,
            seed,
            samples,
            tol,
            out,
        } => cmd_haar_check(group, *seed, *samples, tol, out),
        Command::Sample {
            group,
            n,
            signature,
            samples,
            seed,
            format,
            rmax,
            out,
        } => emit(out, &cmd_sample(*group, *n, *signature, *samples, *seed, *format, *rmax)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suites) => {
            eprintln!("rsfactor: verification failed");
            ExitCode::from(EXIT_SUITE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("rsfactor: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Error(e)) => {
            eprintln!("rsfactor: {e}");
            match e {
                Error::Config(_) | Error::Input(_) => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_NUMERIC),
            }
        }
    }
}
