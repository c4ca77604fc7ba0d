//! The `ida` command: disperse, reconstruct, analyze and attack.
//!
//! Exit codes: 0 success or strong, 1 weak, 2 usage or precondition,
//! 3 data corruption, 4 indeterminate.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ida_core::confidential::{certify_strong, SearchLimits, Verdict};
use ida_core::dispersal::{check_piece_set, segment_bit_range};
use ida_core::piece::{pack_symbols, packed_len};
use ida_core::{attack, disperse, reconstruct, Family, FieldWidth, GeneratorSpec, GfMatrix, IdaError, Piece};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_WEAK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CORRUPT: i32 = 3;
pub const EXIT_INDETERMINATE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ida(#[from] IdaError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ida(IdaError::Checksum { .. } | IdaError::MalformedPiece(_)) => EXIT_CORRUPT,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Parser)]
#[command(name = "ida", version, about = "Information dispersal with confidentiality analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a file into n pieces, any m of which rebuild it.
    Disperse(DisperseArgs),
    /// Rebuild a file from at least m pieces.
    Reconstruct(ReconstructArgs),
    /// Report whether a generator matrix leaks segments to fewer than m pieces.
    Analyze(AnalyzeArgs),
    /// Recover whatever segments fewer than m pieces give away.
    Attack(AttackArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeFamily {
    Cauchy,
    Vandermonde,
    #[value(name = "rs_strong")]
    RsStrong,
    Explicit,
}

impl From<CodeFamily> for Family {
    fn from(f: CodeFamily) -> Family {
        match f {
            CodeFamily::Cauchy => Family::Cauchy,
            CodeFamily::Vandermonde => Family::Vandermonde,
            CodeFamily::RsStrong => Family::RsStrong,
            CodeFamily::Explicit => Family::Explicit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct DisperseArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Field width w of GF(2^w): 4, 8 or 16.
    #[arg(long, default_value_t = 8)]
    pub field: u32,
    #[arg(long, value_enum, default_value = "cauchy")]
    pub code: CodeFamily,
    /// Comma-separated hex points (row-major entries for `explicit`).
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(required = true)]
    pub pieces: Vec<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = ArgGroup::new("source").required(true).multiple(false))]
pub struct AnalyzeArgs {
    /// Canonical generator spec `family:w:m:n:points`.
    #[arg(long, group = "source")]
    pub spec: Option<String>,
    /// Matrix file: `w rows cols` then hex entries.
    #[arg(long, group = "source")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long = "out")]
    pub out_dir: PathBuf,
    #[arg(required = true)]
    pub pieces: Vec<PathBuf>,
}

/// Run the CLI on `args`, writing to `out`/`err`, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Disperse(a) => cmd_disperse(a, out),
        Command::Reconstruct(a) => cmd_reconstruct(a, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Attack(a) => cmd_attack(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_points(list: &str) -> CliResult<Vec<u16>> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits = t.strip_prefix("0x").unwrap_or(t);
            u16::from_str_radix(digits, 16).map_err(|e| CliError::Usage(format!("bad point `{t}`: {e}")))
        })
        .collect()
}

fn out_line(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> CliResult<()> {
    writeln!(out, "{line}").map_err(io_err(Path::new("<stdout>")))
}

pub fn cmd_disperse(a: &DisperseArgs, out: &mut dyn Write) -> CliResult<i32> {
    let width = FieldWidth::try_from(a.field)?;
    let points = a.points.as_deref().map(parse_points).transpose()?.unwrap_or_default();
    let spec = GeneratorSpec::new(a.code.into(), width, a.m, a.n).with_points(points).resolved();
    let data = fs::read(&a.input).map_err(io_err(&a.input))?;
    let pieces = disperse(&data, &spec)?;

    fs::create_dir_all(&a.out_dir).map_err(io_err(&a.out_dir))?;
    let stem = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".into());
    let mut total = 0usize;
    let mut file_len = 0usize;
    for p in &pieces {
        let bytes = p.to_bytes()?;
        file_len = bytes.len();
        total += bytes.len();
        let path = a.out_dir.join(format!("{stem}.p{}.ida", p.header.piece_index));
        fs::write(&path, &bytes).map_err(io_err(&path))?;
    }
    let symbols = pieces.first().map_or(0, |p| p.payload.len());
    out_line(out, format_args!("dispersed {} ({} bytes) into {} pieces", a.input.display(), data.len(), spec.n))?;
    out_line(out, format_args!("m={} n={} family={} field=GF(2^{})", spec.m, spec.n, spec.family, width))?;
    out_line(out, format_args!("spec: {spec}"))?;
    out_line(
        out,
        format_args!(
            "per-piece payload: {symbols} symbols ({} bytes); piece file: {file_len} bytes",
            packed_len(symbols, width)
        ),
    )?;
    if data.is_empty() {
        out_line(out, format_args!("overhead ratio: n/a (empty input, {total} bytes stored)"))?;
    } else {
        out_line(
            out,
            format_args!(
                "overhead ratio: {:.4} ({} bytes stored, ideal n/m = {:.4})",
                total as f64 / data.len() as f64,
                total,
                spec.n as f64 / spec.m as f64
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn read_pieces(paths: &[PathBuf]) -> CliResult<Vec<Piece>> {
    paths
        .iter()
        .map(|path| {
            let bytes = fs::read(path).map_err(io_err(path))?;
            Piece::from_bytes(&bytes).map_err(|e| match e {
                IdaError::MalformedPiece(msg) => IdaError::MalformedPiece(format!("{}: {msg}", path.display())).into(),
                other => other.into(),
            })
        })
        .collect()
}

pub fn cmd_reconstruct(a: &ReconstructArgs, out: &mut dyn Write) -> CliResult<i32> {
    let pieces = read_pieces(&a.pieces)?;
    let data = reconstruct(&pieces)?;
    fs::write(&a.output, &data).map_err(io_err(&a.output))?;
    out_line(
        out,
        format_args!("reconstructed {} bytes from {} pieces into {}", data.len(), pieces.len(), a.output.display()),
    )?;
    Ok(EXIT_OK)
}

pub fn analyze_matrix(a: &AnalyzeArgs) -> CliResult<GfMatrix> {
    match (&a.spec, &a.matrix) {
        (Some(spec), None) => Ok(spec.parse::<GeneratorSpec>()?.build()?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            Ok(GfMatrix::parse_text(&text)?)
        }
        _ => Err(CliError::Usage("give exactly one of --spec or --matrix".into())),
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let g = analyze_matrix(a)?;
    let report = certify_strong(&g, SearchLimits::default())?;
    let rendered = match a.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Text => report.render_text(&g),
    };
    out.write_all(rendered.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(match report.verdict {
        Verdict::Weak => EXIT_WEAK,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
        Verdict::StrongCertified | Verdict::StrongByExhaustion => EXIT_OK,
    })
}

pub fn cmd_attack(a: &AttackArgs, out: &mut dyn Write) -> CliResult<i32> {
    let pieces = read_pieces(&a.pieces)?;
    let sorted = check_piece_set(&pieces)?;
    let h = sorted[0].header.clone();
    if sorted.len() >= h.m {
        return Err(IdaError::TooManyPieces { have: sorted.len(), m: h.m }.into());
    }
    let g = h.spec.build()?;
    let eavesdropped: Vec<(usize, Vec<u16>)> =
        sorted.iter().map(|p| (p.header.piece_index, p.payload.clone())).collect();
    let leaked = attack(&g, &eavesdropped)?;
    let indices: Vec<usize> = eavesdropped.iter().map(|(j, _)| *j).collect();
    out_line(out, format_args!("eavesdropped pieces {indices:?} of a {}-of-{} dispersal ({})", h.m, h.n, h.spec))?;
    if leaked.is_empty() {
        out_line(out, format_args!("no segments recoverable"))?;
        return Ok(EXIT_OK);
    }
    fs::create_dir_all(&a.out_dir).map_err(io_err(&a.out_dir))?;
    let segment_len = h.payload_len as usize;
    for (i, payload) in &leaked {
        let (start_bit, end_bit) = segment_bit_range(*i, segment_len, h.width, h.original_length);
        let mut bytes = pack_symbols(payload, h.width);
        bytes.truncate((end_bit - start_bit).div_ceil(8) as usize);
        let path = a.out_dir.join(format!("segment{i}.bin"));
        fs::write(&path, &bytes).map_err(io_err(&path))?;
        let range = if start_bit % 8 == 0 {
            format!("file bytes [{}, {})", start_bit / 8, end_bit.div_ceil(8))
        } else {
            format!("file bits [{start_bit}, {end_bit})")
        };
        out_line(out, format_args!("segment {i}: {range} -> {}", path.display()))?;
    }
    let list: Vec<usize> = leaked.iter().map(|(i, _)| *i).collect();
    out_line(out, format_args!("recovered segments {list:?}"))?;
    Ok(EXIT_OK)
}
