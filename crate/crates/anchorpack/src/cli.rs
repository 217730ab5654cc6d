//! The `anchorpack` command line.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage error, 3 malformed
//! input, 4 oracle size limit exceeded, 5 I/O error, 6 invalid instance.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::algos::Algo;
use crate::bench::{run_bench, to_csv, BenchConfig};
use crate::generators::{default_eps, gen, Family, GenParams};
use crate::geometry::{format_rational, parse_rational, rat, to_f64, validate_packing, Mode, Rational, Rect};
use crate::greedy::{greedy_pack, GreedyMode};
use crate::io::{parse_instance, parse_packing, write_instance, write_packing, IoError, PackingFile};
use crate::oracle::{self, OracleError, OracleLimits, LIMIT_ENV};
use crate::reach::{check_triple_cover, reach_anchored_squares, reach_ll_rects, reach_ll_squares};
use crate::svg::{fmt9, render_svg};
use crate::two_point::verify_lemma3_grid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;
pub const EXIT_ORACLE_LIMIT: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_INVALID_INSTANCE: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] IoError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(e) if e.is_invalid_instance() => EXIT_INVALID_INSTANCE,
            CliError::Input(_) => EXIT_MALFORMED,
            CliError::Oracle(OracleError::TooManyPoints { .. } | OracleError::TooManyCandidates { .. }) => {
                EXIT_ORACLE_LIMIT
            }
            CliError::Oracle(OracleError::NotGeneralPosition { .. }) => EXIT_INVALID_INSTANCE,
            CliError::Oracle(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Anchored rectangle and square packings with exact rational arithmetic.
#[derive(Parser, Debug)]
#[command(name = "anchorpack", version, after_help = "Exit codes: 0 ok, 1 verification failed, 2 usage, 3 malformed input, 4 oracle limit, 5 I/O, 6 invalid instance.\nANCHORPACK_ORACLE_LIMIT=N or N,M caps oracle runs at N points and M candidates.")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Files {
    /// Input file; standard input when absent or "-".
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Ignore unknown JSON fields instead of rejecting them.
    #[arg(long)]
    lenient: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate an instance from a named family.
    Gen {
        /// prop1, prop2, fig1, fig2, fig6, diagonal, center, thirds or random.
        #[arg(long)]
        family: String,
        /// Number of points, for families that take one.
        #[arg(long)]
        n: Option<usize>,
        /// Family parameter eps as a rational, e.g. 1/16.
        #[arg(long)]
        eps: Option<String>,
        /// Seed of the random family.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinate denominator of the random family (at most 65536).
        #[arg(long, default_value_t = 1 << 16)]
        denominator: u32,
        /// Packing mode stored with the instance.
        #[arg(long)]
        mode: Option<String>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pack an instance.
    Pack {
        /// strip-basic, strip712, quadtree, quadtree-refined, greedy-sq or greedy-ll.
        /// Defaults to the best algorithm for the instance mode.
        #[arg(long)]
        algo: Option<String>,
        /// With --algo quadtree: use the refined case analysis.
        #[arg(long)]
        refined: bool,
        /// Include the greedy selection order in the output.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        files: Files,
    },
    /// Exact optimum: rectangles over the point grid, squares over eps-quantized areas.
    Oracle {
        /// rect-any, rect-ll, square-any or square-ll; defaults to the instance mode, else rect-any.
        #[arg(long)]
        mode: Option<String>,
        /// Area quantization for square modes.
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[command(flatten)]
        files: Files,
    },
    /// Check a packing, the two-point lemma grid, or the triple-cover property.
    Verify {
        #[arg(long, value_enum, default_value_t = Check::Packing)]
        check: Check,
        /// Grid spacing for --check lemma3.
        #[arg(long, default_value = "1/48")]
        step: String,
        #[command(flatten)]
        files: Files,
    },
    /// Reach regions of an instance.
    Reach {
        #[arg(long, value_enum, default_value_t = ReachKind::LlSquares)]
        kind: ReachKind,
        #[command(flatten)]
        files: Files,
    },
    /// Sweep families, sizes and algorithms; write CSV.
    Bench {
        /// Comma separated family names, or "all".
        #[arg(long, default_value = "prop1,prop2,diagonal")]
        families: String,
        /// Sizes: "3", "1..6" (inclusive) or "2,4,8".
        #[arg(long, default_value = "1..6")]
        n: String,
        /// Comma separated algorithm names, or "all".
        #[arg(long, default_value = "all")]
        algos: String,
        /// Seeds per size for the random family.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Area quantization of the square oracle.
        #[arg(long, default_value = "1/10")]
        eps: String,
        /// Skip oracle runs.
        #[arg(long)]
        no_oracle: bool,
        /// Worker threads; all cores when absent.
        #[arg(long)]
        threads: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a packing as SVG.
    Render {
        #[command(flatten)]
        files: Files,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Packing,
    Lemma3,
    TripleCover,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ReachKind {
    LlRects,
    LlSquares,
    Squares,
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn read(&mut self, path: &Option<PathBuf>) -> Result<String, CliError> {
        match path {
            Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn write(&mut self, path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, text)?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut ctx = Ctx { stdin, stdout, stderr };
    match dispatch(cli.cmd, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn rational_arg(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| usage(format!("--{name}: not a rational: {s:?}")))
}

fn mode_arg(s: &str) -> Result<Mode, CliError> {
    s.parse().map_err(|_| usage(format!("unknown mode {s:?}")))
}

fn limits() -> Result<OracleLimits, CliError> {
    match std::env::var(LIMIT_ENV) {
        Err(_) => Ok(OracleLimits::default()),
        Ok(v) => OracleLimits::parse(&v).ok_or_else(|| usage(format!("{LIMIT_ENV}: expected N or N,M, got {v:?}"))),
    }
}

/// Parses "3", "1..6" (inclusive) or "2,4,8".
pub fn parse_sizes(s: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.parse().ok()?;
            let b: usize = b.trim_start_matches('=').parse().ok()?;
            if a > b {
                return None;
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().ok()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn list<T, E: ToString>(s: &str, all: &[T], parse: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, CliError>
where
    T: Clone,
{
    if s == "all" {
        return Ok(all.to_vec());
    }
    s.split(',').map(|t| parse(t.trim()).map_err(usage)).collect()
}

fn dispatch(cmd: Cmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    match cmd {
        Cmd::Gen { family, n, eps, seed, denominator, mode, output } => {
            let family: Family = family.parse().map_err(usage)?;
            let eps = match eps {
                Some(e) => Some(rational_arg("eps", &e)?),
                None => default_eps(family),
            };
            let params = GenParams { n, eps, seed, denominator };
            let mut inst = gen(family, &params).map_err(usage)?;
            inst.mode = mode.as_deref().map(mode_arg).transpose()?;
            ctx.write(&output, &write_instance(&inst))?;
            Ok(EXIT_OK)
        }
        Cmd::Pack { algo, refined, trace, files } => {
            let inst = parse_instance(&ctx.read(&files.input)?, !files.lenient)?;
            let algo = match algo.as_deref() {
                Some("quadtree") if refined => Algo::QuadtreeRefined,
                Some(a) => a.parse().map_err(usage)?,
                None => Algo::for_mode(inst.mode.unwrap_or(Mode::RectAny)),
            };
            let (packing, steps) = algo.run(&inst.points);
            let mut file = PackingFile::new(algo.name(), &inst.points, packing);
            if trace {
                file.trace = steps;
            }
            ctx.write(&files.output, &write_packing(&file))?;
            Ok(EXIT_OK)
        }
        Cmd::Oracle { mode, eps, files } => {
            let inst = parse_instance(&ctx.read(&files.input)?, !files.lenient)?;
            let mode = match mode {
                Some(m) => mode_arg(&m)?,
                None => inst.mode.unwrap_or(Mode::RectAny),
            };
            let eps = rational_arg("eps", &eps)?;
            let sol = oracle::solve(&inst.points, mode, &eps, limits()?)?;
            let algo = if mode.squares() { format!("oracle-eps-{}", format_rational(&eps)) } else { "oracle".into() };
            let mut file = PackingFile::new(&algo, &inst.points, sol.packing);
            file.oracle_value = Some(sol.value);
            ctx.write(&files.output, &write_packing(&file))?;
            Ok(EXIT_OK)
        }
        Cmd::Verify { check, step, files } => match check {
            Check::Packing => verify_packing(ctx, &files),
            Check::Lemma3 => {
                let step = rational_arg("step", &step)?;
                let m = verify_lemma3_grid(&step).map_err(usage)?;
                let (a, b, c) = &m.argmin;
                let ok = m.min_value >= rat(7, 12);
                let text = format!(
                    "lemma3 step {}: min {} ({}) at ({}, {}, {}) over {} grid points: {}\n",
                    format_rational(&step),
                    format_rational(&m.min_value),
                    fmt9(to_f64(&m.min_value)),
                    format_rational(a),
                    format_rational(b),
                    format_rational(c),
                    m.points_checked,
                    if ok { "ok" } else { "VIOLATED" }
                );
                ctx.write(&files.output, &text)?;
                Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
            }
            Check::TripleCover => {
                let inst = parse_instance(&ctx.read(&files.input)?, !files.lenient)?;
                let g = greedy_pack(&inst.points, GreedyMode::LowerLeft);
                let t = check_triple_cover(&inst.points, &g.packing);
                let text = match &t.witness {
                    None => "triple cover: ok\n".to_string(),
                    Some(r) => format!("triple cover: VIOLATED, uncovered cell {r}\n"),
                };
                ctx.write(&files.output, &text)?;
                Ok(if t.holds { EXIT_OK } else { EXIT_VIOLATION })
            }
        },
        Cmd::Reach { kind, files } => {
            let inst = parse_instance(&ctx.read(&files.input)?, !files.lenient)?;
            let (name, region, extra) = match kind {
                ReachKind::LlRects => ("ll-rects", reach_ll_rects(&inst.points).region, None),
                ReachKind::LlSquares => ("ll-squares", reach_ll_squares(&inst.points), None),
                ReachKind::Squares => {
                    let r = reach_anchored_squares(&inst.points);
                    ("squares", r.region, Some(r.at_least_half))
                }
            };
            let boxes: Vec<[String; 4]> = region.boxes.iter().map(rect_strings).collect();
            let mut doc = json!({
                "version": crate::io::FORMAT_VERSION,
                "kind": name,
                "area": format_rational(&region.area),
                "area_float": fmt9(to_f64(&region.area)),
                "boxes": boxes,
            });
            if let Some(h) = extra {
                doc["at_least_half"] = json!(h);
            }
            let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
            text.push('\n');
            ctx.write(&files.output, &text)?;
            Ok(EXIT_OK)
        }
        Cmd::Bench { families, n, algos, seeds, eps, no_oracle, threads, output } => {
            let mut cfg = BenchConfig {
                families: list(&families, &Family::ALL, |s| s.parse::<Family>())?,
                sizes: parse_sizes(&n).ok_or_else(|| usage(format!("--n: bad sizes {n:?}")))?,
                algos: list(&algos, &Algo::ALL, |s| s.parse::<Algo>())?,
                seeds,
                eps: rational_arg("eps", &eps)?,
                oracle: !no_oracle,
                limits: limits()?,
                ..Default::default()
            };
            if let Some(t) = threads {
                cfg.threads = t;
            }
            let rows = run_bench(&cfg);
            ctx.write(&output, &to_csv(&rows))?;
            let bad = rows.iter().filter(|r| !r.ok).count();
            if bad > 0 {
                writeln!(ctx.stderr, "{bad} rows miss their guarantee")?;
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Cmd::Render { files } => {
            let file = parse_packing(&ctx.read(&files.input)?, !files.lenient)?;
            ctx.write(&files.output, &render_svg(&file.points, &file.packing))?;
            Ok(EXIT_OK)
        }
    }
}

fn rect_strings(r: &Rect) -> [String; 4] {
    [&r.x0, &r.y0, &r.x1, &r.y1].map(format_rational)
}

fn verify_packing(ctx: &mut Ctx, files: &Files) -> Result<i32, CliError> {
    let file = parse_packing(&ctx.read(&files.input)?, !files.lenient)?;
    let mode = file.packing.mode;
    let report = validate_packing(&file.points, &file.packing, mode).map_err(|e| CliError::Input(e.into()))?;
    let mut problems: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let area = &file.packing.total_area;
    if *area != file.stated_total {
        problems.push(format!(
            "stated total_area {} differs from the boxes' area {}",
            format_rational(&file.stated_total),
            format_rational(area)
        ));
    }
    if let Ok(algo) = file.algo.parse::<Algo>() {
        if let Some(g) = algo.area_guarantee(file.points.len()) {
            if *area < g {
                problems.push(format!("area {} below the {} guarantee {}", format_rational(area), algo, format_rational(&g)));
            }
        }
    }
    let mut text = String::new();
    for p in &problems {
        text.push_str(&format!("violation: {p}\n"));
    }
    let status = if problems.is_empty() { "valid" } else { "INVALID" };
    text.push_str(&format!(
        "{status}: {} {} packing of {} points, area {} ({})\n",
        file.algo,
        mode,
        file.points.len(),
        format_rational(area),
        fmt9(to_f64(area))
    ));
    ctx.write(&files.output, &text)?;
    Ok(if problems.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
}
