//! Command dispatch for the `gcantor` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gcantor::{
    decide_with, difference_system, find_codes_with, generations_with_limit, intersection_decision, is_sep_sets,
    parse_code, parse_rational, parse_system, pi_value, render_svg, render_text, sep_to_ifs, to_spec_text,
    translation_analysis, verify_ifs_with_limit, CantorSystem, CodeSearchOptions, CodeSearchResult, CodeStatus,
    DecideOptions, Error, HomogeneousIfs, IntersectionOutcome, Rational, TranslationReport, Verdict,
    DEFAULT_DEPTH, DEFAULT_MAX_CYLINDERS,
};

pub const EXIT_DEFINITIVE: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gcantor", version, about = "Self-similarity analysis of generalized Cantor sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Limits {
    /// Depth of covers used to verify certificates.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Maximum number of cylinders, images or search states.
    #[arg(long, default_value_t = DEFAULT_MAX_CYLINDERS)]
    max_cylinders: usize,
}

impl Limits {
    fn decide(&self) -> DecideOptions {
        DecideOptions {
            depth: self.depth,
            max_cylinders: self.max_cylinders,
        }
    }

    fn search(&self) -> CodeSearchOptions {
        CodeSearchOptions {
            depth: self.depth,
            max_states: self.max_cylinders,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide self-similarity of a system.
    Analyze {
        spec: PathBuf,
        /// Print the parsed system in spec syntax before the report.
        #[arg(long)]
        echo_spec: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Synthesize an IFS from a SEP decomposition.
    Ifs { spec: PathBuf },
    /// Check a user-supplied homogeneous IFS against a system.
    Verify {
        spec: PathBuf,
        /// `r;e1,e2,...` for the maps `x -> r x + e_i`.
        #[arg(long, allow_hyphen_values = true)]
        maps: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Draw the generations F_0..F_n.
    Render {
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// SVG width in pixels.
        #[arg(long, default_value_t = 800)]
        width: u32,
        /// SVG bar height in pixels.
        #[arg(long, default_value_t = 12)]
        row_height: u32,
        /// Text columns.
        #[arg(long, default_value_t = 81)]
        columns: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_CYLINDERS)]
        max_cylinders: usize,
    },
    /// Decide self-similarity of the intersection of two systems.
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Analyse the set intersected with its translate by t.
    Translate {
        spec: PathBuf,
        /// A rational `a/b` or a code literal such as `0,1(2,0)`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Search for codes of t.
    Codes {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Search in the difference system D_n - D_n.
        #[arg(long)]
        difference: bool,
        #[command(flatten)]
        limits: Limits,
    },
}

/// A failure that ends the run with a message and an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn from_core(err: Error, source: Option<&Path>) -> Self {
        match (&err, source) {
            (Error::Parse { line, .. }, Some(path)) => {
                let text = err.to_string();
                let detail = text.strip_prefix(&format!("line {line}: ")).unwrap_or(&text);
                Self::usage(format!("{}:{line}: {detail}", path.display()))
            }
            (Error::ResourceLimit { .. }, _) => Self {
                code: EXIT_RESOURCE,
                message: format!("{err}; raise --max-cylinders or lower the depth"),
            },
            _ => Self::usage(err.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn core<T>(result: gcantor::Result<T>) -> Result<T, Failure> {
    result.map_err(|e| Failure::from_core(e, None))
}

fn load(path: &Path) -> Result<CantorSystem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| Failure::from_core(e, Some(path)))
}

fn rational_arg(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_rational(text.trim()).ok_or_else(|| Failure::usage(format!("{what}: `{text}` is not a rational")))
}

fn verdict_exit(verdict: Verdict) -> i32 {
    if verdict.is_definitive() {
        EXIT_DEFINITIVE
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn outcome_exit(outcome: &IntersectionOutcome) -> i32 {
    outcome.decision().map_or(EXIT_DEFINITIVE, |d| verdict_exit(d.verdict))
}

fn search_exit(result: &CodeSearchResult) -> i32 {
    match result.status {
        CodeStatus::InconclusiveAtDepth => EXIT_INCONCLUSIVE,
        _ => EXIT_DEFINITIVE,
    }
}

/// Parses `r;e1,e2,...`.
fn parse_maps(text: &str) -> Result<HomogeneousIfs, Failure> {
    let (r, offsets) = text
        .split_once(';')
        .ok_or_else(|| Failure::usage(format!("--maps: expected `r;e1,e2,...`, got `{text}`")))?;
    let ratio = rational_arg(r, "--maps ratio")?;
    let offsets = offsets
        .split(',')
        .map(|e| rational_arg(e, "--maps offset"))
        .collect::<Result<Vec<_>, _>>()?;
    core(HomogeneousIfs::from_signed_ratio(ratio, offsets))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn analyze(out: &mut dyn Write, spec: &Path, echo: bool, limits: &Limits) -> Outcome {
    let system = load(spec)?;
    if echo {
        write_out(out, &to_spec_text(&system))?;
    }
    let decision = core(decide_with(&system, &limits.decide()))?;
    write_out(out, &decision.to_string())?;
    Ok(verdict_exit(decision.verdict))
}

fn ifs(out: &mut dyn Write, spec: &Path) -> Outcome {
    let system = load(spec)?;
    let (normalized, shift) = system.normalize();
    let Some(sep) = is_sep_sets(normalized.digits()) else {
        write_out(out, "sep: no\nnot SEP: no IFS can be synthesized\n")?;
        return Ok(EXIT_DEFINITIVE);
    };
    let maps = core(sep_to_ifs(&normalized, &sep))?.translated(&shift);
    write_out(
        out,
        &format!("{sep}shift: {shift}\nmaps: {} with ratio {}\n{maps}", maps.offsets().len(), maps.ratio()),
    )?;
    Ok(EXIT_DEFINITIVE)
}

fn verify(out: &mut dyn Write, spec: &Path, maps: &str, limits: &Limits) -> Outcome {
    let system = load(spec)?;
    let ifs = parse_maps(maps)?;
    let report = core(verify_ifs_with_limit(&system, &ifs, limits.depth, limits.max_cylinders))?;
    write_out(out, &format!("maps: {} with ratio {}\n{ifs}{report}", ifs.offsets().len(), ifs.ratio()))?;
    Ok(EXIT_DEFINITIVE)
}

#[allow(clippy::too_many_arguments)]
fn render(
    out: &mut dyn Write,
    spec: &Path,
    levels: usize,
    format: Format,
    output: Option<&Path>,
    width: u32,
    row_height: u32,
    columns: usize,
    max_cylinders: usize,
) -> Outcome {
    let system = load(spec)?;
    let gens = core(generations_with_limit(&system, levels, max_cylinders))?;
    let text = match format {
        Format::Svg => render_svg(&gens, width, row_height),
        Format::Text => core(render_text(&gens, columns))?,
    };
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            write_out(out, &format!("wrote {} levels to {}\n", levels + 1, path.display()))?;
        }
        None => write_out(out, &text)?,
    }
    Ok(EXIT_DEFINITIVE)
}

fn intersect(out: &mut dyn Write, first: &Path, second: &Path, limits: &Limits) -> Outcome {
    let (c, d) = (load(first)?, load(second)?);
    let outcome = core(intersection_decision(&c, &d, &limits.decide()))?;
    write_out(out, &outcome.to_string())?;
    Ok(outcome_exit(&outcome))
}

fn report_exit(report: &TranslationReport) -> i32 {
    outcome_exit(&report.outcome)
}

fn translate(out: &mut dyn Write, spec: &Path, t: &str, limits: &Limits) -> Outcome {
    let system = load(spec)?;
    let diff = difference_system(&system);
    if let Some(code) = t.contains('(').then(|| parse_code(t)) {
        let code = code.ok_or_else(|| Failure::usage(format!("--t: `{t}` is not a code literal")))?;
        let value = pi_value(&code, system.beta());
        let search = core(find_codes_with(&diff, &value, &limits.search()))?;
        let report = core(translation_analysis(&system, &code, Some(search.status), &limits.decide()))?;
        write_out(out, &report.to_string())?;
        return Ok(match search.status {
            CodeStatus::UniqueCode => report_exit(&report),
            _ => {
                write_out(out, "note: t has other codes; the result describes this code only\n")?;
                EXIT_INCONCLUSIVE
            }
        });
    }
    let value = rational_arg(t, "--t")?;
    let search = core(find_codes_with(&diff, &value, &limits.search()))?;
    match search.status {
        CodeStatus::UniqueCode => {
            let report = core(translation_analysis(
                &system,
                &search.codes[0],
                Some(CodeStatus::UniqueCode),
                &limits.decide(),
            ))?;
            write_out(out, &report.to_string())?;
            Ok(report_exit(&report))
        }
        CodeStatus::NoCode => {
            write_out(out, &format!("t: {value}\n{search}intersection: empty\n"))?;
            Ok(EXIT_DEFINITIVE)
        }
        _ => {
            write_out(
                out,
                &format!("t: {value}\n{search}note: t has no unique code in D - D; intersection not analysed\n"),
            )?;
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn codes(out: &mut dyn Write, spec: &Path, t: &str, difference: bool, limits: &Limits) -> Outcome {
    let mut system = load(spec)?;
    if difference {
        system = difference_system(&system);
    }
    let value = rational_arg(t, "--t")?;
    let result = core(find_codes_with(&system, &value, &limits.search()))?;
    write_out(out, &format!("t: {value}\n{result}"))?;
    Ok(search_exit(&result))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Analyze { spec, echo_spec, limits } => analyze(out, &spec, echo_spec, &limits),
        Command::Ifs { spec } => ifs(out, &spec),
        Command::Verify { spec, maps, limits } => verify(out, &spec, &maps, &limits),
        Command::Render {
            spec,
            levels,
            format,
            output,
            width,
            row_height,
            columns,
            max_cylinders,
        } => render(out, &spec, levels, format, output.as_deref(), width, row_height, columns, max_cylinders),
        Command::Intersect { first, second, limits } => intersect(out, &first, &second, &limits),
        Command::Translate { spec, t, limits } => translate(out, &spec, &t, &limits),
        Command::Codes {
            spec,
            t,
            difference,
            limits,
        } => codes(out, &spec, &t, difference, &limits),
    }
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_DEFINITIVE };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}
