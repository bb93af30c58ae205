//! Command-line interface.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `equiv` and `similar`, equivalent |
//! | 1 | not equivalent (or a failed self-test) |
//! | 2 | unreadable, malformed or invalid input |
//! | 3 | inputs of different sizes |
//! | 4 | index out of range, or a missing cycle product |
//! | 5 | undecided: the reindexing search ran out of budget |
//!
//! Files use 0-based indices. `--format pretty` prints 1-based indices and
//! says so.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use frameq_core::harmonic::{self, AbelianGroup, CensusMode, CensusRow, SubsetJ};
use frameq_core::{
    build_frame_graph, determining_set, m_product, reconstruct_from_products,
    triangle_determining_set, triple_products, Error, FreePhases, GramMatrix, Scalar, Tolerance,
    DEFAULT_BUDGET,
};

use crate::io::{
    self, CycleEntry, FrameFile, GramFile, GraphFile, Input, ProductsFile, ReadError, VerdictFile,
};
use crate::{par, pretty, selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SIZE_MISMATCH: i32 = 3;
pub const EXIT_INDEX: i32 = 4;
pub const EXIT_UNKNOWN: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "frameq",
    version,
    about = "Unitary and projective unitary equivalence of finite frames"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Moduli at or below this count as zero.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_ABS_ZERO)]
    tol_zero: f64,
    /// Relative tolerance for matching nonzero values.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_REL_MATCH)]
    tol_match: f64,
    /// Node budget for reindexing searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Output format; census defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized self-tests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gramian of a frame.
    Gram { file: PathBuf },
    /// Bargmann invariants of a frame or Gramian.
    Products {
        file: PathBuf,
        /// Determining set: 1- and 2-products plus fundamental cycle products (default).
        #[arg(long, group = "what")]
        detset: bool,
        /// All triple products, one per rotation/reversal class.
        #[arg(long, group = "what")]
        triples: bool,
        /// A single product along the given indices, e.g. `0,1,2`.
        #[arg(long, group = "what", value_name = "J1,J2,...")]
        tuple: Option<String>,
    },
    /// Frame graph: an edge wherever an inner product is nonzero.
    Graph { file: PathBuf },
    /// Determining set of a frame or Gramian.
    Detset {
        file: PathBuf,
        /// Use a triangle basis (chordal frame graphs only).
        #[arg(long)]
        triangles: bool,
    },
    /// Decide equivalence of two frames or Gramians.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Allow a unit scalar per vector.
        #[arg(long)]
        projective: bool,
        /// Allow a permutation of the indices.
        #[arg(long)]
        reindex: bool,
        /// Similarity (invertible map) instead of unitary equivalence.
        #[arg(long, conflicts_with = "reindex")]
        similar: bool,
    },
    /// Rebuild a Gramian from a products file.
    Reconstruct {
        file: PathBuf,
        /// Phase of `<v_j, v_k>` on a tree edge, as `j-k=re,im`.
        #[arg(long = "phase", value_name = "J-K=RE,IM")]
        phases: Vec<String>,
        /// Spanning tree edges, as `j-k,j-k,...`.
        #[arg(long)]
        tree: Option<String>,
    },
    /// Decide similarity of two frames.
    Similar {
        a: PathBuf,
        b: PathBuf,
        /// Allow a unit scalar per vector.
        #[arg(long)]
        projective: bool,
    },
    /// Harmonic frames of finite abelian groups.
    Harmonic {
        #[command(subcommand)]
        command: HarmonicCommand,
    },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
enum HarmonicCommand {
    /// Harmonic frame of a subset of characters.
    Gen {
        /// Group as `n` or `n1xn2x...`.
        #[arg(long)]
        group: String,
        /// Character indices, e.g. `0,1`.
        #[arg(long)]
        subset: String,
    },
    /// Class counts of cyclic harmonic frames.
    Census {
        /// Values of n: `8`, `2..15` (inclusive) or `4,6,8`.
        #[arg(long)]
        n: String,
        /// Values of d, same syntax as `--n`.
        #[arg(long)]
        d: String,
        #[arg(long, value_enum, default_value_t = Mode::Orbits)]
        mode: Mode,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Orbits,
    Exact,
}

/// A failed command, with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeMismatch { .. } => EXIT_SIZE_MISMATCH,
        Error::IndexOutOfRange { .. } | Error::MissingCycleProduct { .. } => EXIT_INDEX,
        Error::SearchBudgetExceeded { .. } => EXIT_UNKNOWN,
        _ => EXIT_INVALID,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Invalid(e) => e.into(),
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Ctx {
    tol: Tolerance,
    budget: u64,
    format: Option<Format>,
    seed: u64,
}

impl Ctx {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    let ctx = Ctx {
        tol: Tolerance::new(g.tol_zero, g.tol_match)?,
        budget: g.budget,
        format: g.format,
        seed: g.seed,
    };
    if ctx.budget == 0 {
        return Err(Failure::invalid("--budget must be positive"));
    }
    if ctx.format == Some(Format::Csv)
        && !matches!(
            cli.command,
            Command::Harmonic {
                command: HarmonicCommand::Census { .. }
            }
        )
    {
        return Err(Failure::invalid(
            "csv output is only available for harmonic census",
        ));
    }
    match &cli.command {
        Command::Gram { file } => cmd_gram(&ctx, file, out),
        Command::Products {
            file,
            triples,
            tuple,
            ..
        } => cmd_products(&ctx, file, *triples, tuple.as_deref(), out),
        Command::Graph { file } => cmd_graph(&ctx, file, out),
        Command::Detset { file, triangles } => cmd_detset(&ctx, file, *triangles, out),
        Command::Equiv {
            a,
            b,
            projective,
            reindex,
            similar,
        } => cmd_equiv(&ctx, a, b, *projective, *reindex, *similar, out),
        Command::Reconstruct { file, phases, tree } => {
            cmd_reconstruct(&ctx, file, phases, tree.as_deref(), out, err)
        }
        Command::Similar { a, b, projective } => {
            cmd_equiv(&ctx, a, b, *projective, false, true, out)
        }
        Command::Harmonic { command } => match command {
            HarmonicCommand::Gen { group, subset } => cmd_gen(&ctx, group, subset, out),
            HarmonicCommand::Census { n, d, mode } => cmd_census(&ctx, n, d, *mode, out, err),
        },
        Command::Selftest { trials } => cmd_selftest(&ctx, *trials, out),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    io::parse_input(&read_text(path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn read_gram(ctx: &Ctx, path: &Path) -> Result<GramMatrix, Failure> {
    Ok(read_input(path)?.gram(&ctx.tol)?)
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::invalid(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_gram(ctx: &Ctx, file: &Path, out: &mut dyn Write) -> Outcome {
    let g = read_gram(ctx, file)?;
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::gram(&g))?,
        _ => emit_json(out, &GramFile::from_gram(&g))?,
    }
    Ok(EXIT_OK)
}

fn emit_products(ctx: &Ctx, p: &ProductsFile, out: &mut dyn Write) -> Outcome {
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::products(p))?,
        _ => emit_json(out, p)?,
    }
    Ok(EXIT_OK)
}

fn cmd_products(
    ctx: &Ctx,
    file: &Path,
    triples: bool,
    tuple: Option<&str>,
    out: &mut dyn Write,
) -> Outcome {
    let g = read_gram(ctx, file)?;
    let p = if let Some(t) = tuple {
        let indices = parse_list(t)?;
        let value = m_product(&g, &indices)?;
        ProductsFile::with_products(
            &g,
            vec![CycleEntry {
                indices,
                value: [value.re, value.im],
            }],
        )
    } else if triples {
        ProductsFile::from_triples(&g, &triple_products(&g))
    } else {
        ProductsFile::from_set(&determining_set(&g, &ctx.tol))
    };
    emit_products(ctx, &p, out)
}

fn cmd_detset(ctx: &Ctx, file: &Path, triangles: bool, out: &mut dyn Write) -> Outcome {
    let g = read_gram(ctx, file)?;
    let set = if triangles {
        triangle_determining_set(&g, &ctx.tol)
            .ok_or_else(|| Failure::invalid("frame graph is not chordal; no triangle basis"))?
    } else {
        determining_set(&g, &ctx.tol)
    };
    emit_products(ctx, &ProductsFile::from_set(&set), out)
}

fn cmd_graph(ctx: &Ctx, file: &Path, out: &mut dyn Write) -> Outcome {
    let g = read_gram(ctx, file)?;
    let graph = build_frame_graph(&g, &ctx.tol);
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::graph(&graph))?,
        _ => emit_json(out, &GraphFile::from_graph(&graph))?,
    }
    Ok(EXIT_OK)
}

fn cmd_equiv(
    ctx: &Ctx,
    a: &Path,
    b: &Path,
    projective: bool,
    reindex: bool,
    similar: bool,
    out: &mut dyn Write,
) -> Outcome {
    let (ia, ib) = (read_input(a)?, read_input(b)?);
    let verdict = if similar {
        let (fa, fb) = (ia.frame(&ctx.tol)?, ib.frame(&ctx.tol)?);
        let v = if projective {
            frameq_core::projectively_similar(&fa, &fb, &ctx.tol)
        } else {
            frameq_core::similar(&fa, &fb, &ctx.tol)
        };
        v.map(|v| VerdictFile::from_similarity(&v))
    } else {
        let (ga, gb) = (ia.gram(&ctx.tol)?, ib.gram(&ctx.tol)?);
        let v = match (projective, reindex) {
            (false, false) => frameq_core::unitary_equiv(&ga, &gb, &ctx.tol),
            (true, false) => frameq_core::projective_equiv(&ga, &gb, &ctx.tol),
            (false, true) => frameq_core::unitary_equiv_reindex(&ga, &gb, &ctx.tol, ctx.budget),
            (true, true) => frameq_core::projective_equiv_reindex(&ga, &gb, &ctx.tol, ctx.budget),
        };
        v.map(|v| VerdictFile::from_verdict(&v))
    };
    let verdict = match verdict {
        Ok(v) => v,
        Err(Error::SearchBudgetExceeded { nodes }) => VerdictFile::unknown(nodes),
        Err(e) => return Err(e.into()),
    };
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::verdict(&verdict))?,
        _ => emit_json(out, &verdict)?,
    }
    Ok(match verdict.equivalent {
        Some(true) => EXIT_OK,
        Some(false) => EXIT_NOT_EQUIVALENT,
        None => EXIT_UNKNOWN,
    })
}

fn cmd_reconstruct(
    ctx: &Ctx,
    file: &Path,
    phases: &[String],
    tree: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let products = io::parse_products(&read_text(file)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", file.display())))?;
    let set = products.to_set()?;
    let mut free = FreePhases::new();
    for p in phases {
        let (j, k, z) = parse_phase(p)?;
        free = free.with_phase(j, k, z);
    }
    if let Some(t) = tree {
        free = free.with_tree(parse_edges(t)?);
    }
    let r = reconstruct_from_products(&set, &free, &ctx.tol)?;
    if !r.realizable {
        writeln!(err, "warning: reconstructed matrix is not positive semidefinite; no frame has these products")?;
    }
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::gram(&r.gram))?,
        _ => emit_json(out, &GramFile::from_gram(&r.gram))?,
    }
    Ok(EXIT_OK)
}

fn cmd_gen(ctx: &Ctx, group: &str, subset: &str, out: &mut dyn Write) -> Outcome {
    let factors = group
        .split('x')
        .map(|f| {
            f.trim()
                .parse::<usize>()
                .map_err(|_| Failure::invalid(format!("bad group `{group}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let group = AbelianGroup::new(factors)?;
    let j = SubsetJ::new(&group, parse_list(subset)?).map_err(|e| match e {
        // an out-of-range character is an invalid subset here, not an index error
        Error::IndexOutOfRange { .. } => Failure::invalid(e.to_string()),
        other => other.into(),
    })?;
    let frame = harmonic::harmonic_frame(&group, &j);
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::frame(&frame))?,
        _ => emit_json(out, &FrameFile::from_frame(&frame))?,
    }
    Ok(EXIT_OK)
}

fn cmd_census(
    ctx: &Ctx,
    ns: &str,
    ds: &str,
    mode: Mode,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (ns, ds) = (parse_range(ns)?, parse_range(ds)?);
    let mode = match mode {
        Mode::Orbits => CensusMode::Orbits,
        Mode::Exact => CensusMode::Exact,
    };
    let format = ctx.format(Format::Csv);
    let pool = par::pool();
    match format {
        Format::Csv => {
            write_csv(out, io::CENSUS_HEADER)?;
        }
        Format::Pretty => write!(out, "{}", pretty::census_header())?,
        Format::Json => {}
    }
    for &n in &ns {
        for &d in ds.iter().filter(|&&d| d >= 1 && d <= n) {
            let row: CensusRow =
                harmonic::census_with(n, d, mode, ctx.budget, &ctx.tol, |count, job| {
                    par::run_pairs(&pool, count, job)
                })?;
            for a in harmonic::anomalies(&row) {
                writeln!(err, "anomaly at n={n}, d={d}: {a}")?;
            }
            match format {
                Format::Csv => {
                    write_csv(out, io::census_record(&row))?;
                }
                Format::Pretty => {
                    write!(out, "{}", pretty::census_row(&row))?;
                    out.flush()?;
                }
                Format::Json => {
                    emit_json(out, &io::census_json(&row))?;
                    out.flush()?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Writes and flushes one CSV record, so rows appear as they are computed.
fn write_csv<I, T>(out: &mut dyn Write, record: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(record)
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::invalid(e.to_string()))?;
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

fn cmd_selftest(ctx: &Ctx, trials: usize, out: &mut dyn Write) -> Outcome {
    let report = selftest::run(ctx.seed, trials, &ctx.tol, ctx.budget);
    match ctx.format(Format::Json) {
        Format::Pretty => write!(out, "{}", pretty::selftest(&report))?,
        _ => emit_json(out, &report)?,
    }
    Ok(if report.failed == 0 {
        EXIT_OK
    } else {
        EXIT_NOT_EQUIVALENT
    })
}

fn parse_usize(s: &str) -> Result<usize, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::invalid(format!("`{s}` is not a non-negative integer")))
}

fn parse_f64(s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::invalid(format!("`{s}` is not a number")))
}

/// `0,1,2`
fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_usize)
        .collect()
}

/// `8`, `2..15` (inclusive), `2..=15` or `4,6,8`.
fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (parse_usize(a)?, parse_usize(b)?);
        if a > b {
            return Err(Failure::invalid(format!("empty range `{s}`")));
        }
        Ok((a..=b).collect())
    } else {
        parse_list(s)
    }
}

fn parse_edge(s: &str) -> Result<(usize, usize), Failure> {
    let (j, k) = s
        .split_once('-')
        .ok_or_else(|| Failure::invalid(format!("edge `{s}` is not of the form j-k")))?;
    Ok((parse_usize(j)?, parse_usize(k)?))
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_edge)
        .collect()
}

/// `j-k=re,im`
fn parse_phase(s: &str) -> Result<(usize, usize, Scalar), Failure> {
    let (edge, value) = s
        .split_once('=')
        .ok_or_else(|| Failure::invalid(format!("phase `{s}` is not of the form j-k=re,im")))?;
    let (j, k) = parse_edge(edge)?;
    let (re, im) = value.split_once(',').unwrap_or((value, "0"));
    Ok((j, k, Scalar::new(parse_f64(re)?, parse_f64(im)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("8").unwrap(), vec![8]);
        assert_eq!(parse_range("4,6").unwrap(), vec![4, 6]);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn phases_and_edges() {
        let (j, k, z) = parse_phase("2-0=0.6,-0.8").unwrap();
        assert_eq!((j, k), (2, 0));
        assert_eq!(z, Scalar::new(0.6, -0.8));
        assert_eq!(parse_phase("0-1=1").unwrap().2, Scalar::new(1.0, 0.0));
        assert!(parse_phase("0-1").is_err());
        assert_eq!(parse_edges("0-2,1-2").unwrap(), vec![(0, 2), (1, 2)]);
        assert!(parse_edges("0:2").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::SizeMismatch { left: 1, right: 2 }), 3);
        assert_eq!(exit_code(&Error::IndexOutOfRange { index: 4, n: 3 }), 4);
        assert_eq!(
            exit_code(&Error::MissingCycleProduct {
                cycle: vec![0, 1, 2]
            }),
            4
        );
        assert_eq!(exit_code(&Error::SearchBudgetExceeded { nodes: 9 }), 5);
        assert_eq!(exit_code(&Error::NonFinite), 2);
    }
}
