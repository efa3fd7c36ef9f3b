use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lcseq::correlation::{family_correlation, Method};
use lcseq::gold::{gold_bound, gold_family};
use lcseq::io::{self, AnalysisDocument, FamilyDocument, Format, GoldDocument};
use lcseq::table::{format_aligned, format_csv, table2};
use lcseq::verify::{verify, verify_document, VerifyReport};
use lcseq::{build_family, find_primitive_quadratic, FieldContext};

/// Largest n analysed without --force-large.
const LARGE_N: u32 = 10;

#[derive(Parser)]
#[command(
    name = "lcseq",
    version,
    about = "Low-correlation binary sequence families of length 2^n + 1"
)]
struct Cli {
    /// Worker threads for correlation analysis (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Allow correlation analysis for n > 10.
    #[arg(long, global = true)]
    force_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first primitive quadratic x^2 + ax + b over GF(2^n).
    FindPoly {
        n: u32,
        #[arg(long, value_name = "M", value_parser = parse_int)]
        modulus: Option<u32>,
    },
    /// Generate a family and write it to a file or standard output.
    Generate {
        n: u32,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Correlation report for a family file or a freshly generated family.
    Analyze {
        #[arg(required_unless_present = "n", conflicts_with = "n")]
        path: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Parameters, correlation and balance for a range of field sizes.
    Table2 {
        n_min: u32,
        n_max: u32,
        /// Also write the CSV rows to this file.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Gold family for odd n, for comparison.
    Gold {
        n: u32,
        #[arg(long, value_enum)]
        format: Option<GoldFormat>,
        #[arg(long, value_name = "PATH", requires = "format")]
        out: Option<PathBuf>,
    },
    /// Run the self-checks for GF(2^n), or check a family file.
    Verify {
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        n: Option<u32>,
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Args, Clone, Copy)]
struct Params {
    /// Coefficient a of x^2 + ax + b (integer encoding).
    #[arg(long, requires = "b", value_parser = parse_int)]
    a: Option<u32>,
    /// Coefficient b of x^2 + ax + b (integer encoding).
    #[arg(long, requires = "a", value_parser = parse_int)]
    b: Option<u32>,
    /// Binary modulus defining GF(2^n), e.g. 0x25.
    #[arg(long, value_name = "M", value_parser = parse_int)]
    modulus: Option<u32>,
}

impl Params {
    fn ab(&self) -> Option<(u32, u32)> {
        self.a.zip(self.b)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Seqbin,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Seqbin => Format::Seqbin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GoldFormat {
    Json,
    Csv,
}

fn parse_int(s: &str) -> std::result::Result<u32, String> {
    let parsed = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u32::from_str_radix(h, 16)
    } else if let Some(b) = s.strip_prefix("0b") {
        u32::from_str_radix(b, 2)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("{s:?}: {e}"))
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(k) = cli.threads {
        if k == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()?;
    }
    let force = cli.force_large;
    match cli.command {
        Command::FindPoly { n, modulus } => find_poly(n, modulus),
        Command::Generate {
            n,
            params,
            format,
            out,
        } => generate(n, params, format.into(), out.as_deref()),
        Command::Analyze {
            path,
            n,
            params,
            out,
        } => analyze(path.as_deref(), n, params, out.as_deref(), force),
        Command::Table2 { n_min, n_max, csv } => run_table2(n_min, n_max, csv.as_deref(), force),
        Command::Gold { n, format, out } => gold(n, format, out.as_deref()),
        Command::Verify { n, file, params } => run_verify(n, file.as_deref(), params, force),
    }
}

fn check_large(n: u32, force: bool) -> Result<()> {
    if n > LARGE_N {
        if !force {
            bail!("n = {n} exceeds {LARGE_N}; pass --force-large to analyse it anyway");
        }
        eprintln!(
            "warning: correlation analysis for n = {n} costs on the order of 2^{} word operations",
            3 * n
        );
    }
    Ok(())
}

fn build_document(n: u32, params: Params) -> Result<FamilyDocument> {
    let ctx = FieldContext::new(n, params.modulus)?;
    let ab = match params.ab() {
        Some((a, b)) => Some((ctx.element(a)?, ctx.element(b)?)),
        None => None,
    };
    let family = build_family(&ctx, ab)?;
    Ok(FamilyDocument::from_family(&family))
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn find_poly(n: u32, modulus: Option<u32>) -> Result<Outcome> {
    let ctx = FieldContext::new(n, modulus)?;
    let p = find_primitive_quadratic(&ctx);
    println!("n = {n}");
    println!("modulus = {} ({:#b})", ctx.modulus(), ctx.modulus());
    println!("a = {}", p.a().bits());
    println!("b = {}", p.b().bits());
    Ok(Outcome::Ok)
}

fn generate(n: u32, params: Params, format: Format, out: Option<&Path>) -> Result<Outcome> {
    let doc = build_document(n, params)?;
    emit(&io::encode(&doc, format), out)?;
    Ok(Outcome::Ok)
}

fn analyze(
    path: Option<&Path>,
    n: Option<u32>,
    params: Params,
    out: Option<&Path>,
    force: bool,
) -> Result<Outcome> {
    let doc = match (path, n) {
        (Some(path), _) => {
            if params.ab().is_some() || params.modulus.is_some() {
                bail!("--a, --b and --modulus apply only with --n");
            }
            let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            io::decode(&data).with_context(|| format!("loading {}", path.display()))?
        }
        (None, Some(n)) => {
            check_large(n, force)?;
            build_document(n, params)?
        }
        (None, None) => unreachable!("clap requires a path or --n"),
    };
    check_large(doc.n, force)?;
    let report = family_correlation(&doc.sequences, doc.bound, Method::Packed);
    emit(
        AnalysisDocument::new(&doc, report).to_json().as_bytes(),
        out,
    )?;
    Ok(Outcome::Ok)
}

fn run_table2(n_min: u32, n_max: u32, csv: Option<&Path>, force: bool) -> Result<Outcome> {
    if n_min < 1 || n_min > n_max {
        bail!("need 1 <= n_min <= n_max, got {n_min}..{n_max}");
    }
    check_large(n_max, force)?;
    let rows = table2(n_min, n_max)?;
    print!("{}", format_aligned(&rows));
    println!();
    println!(
        "balanced = sequences with |sum| = 1; this count depends on the chosen modulus (a, b)."
    );
    println!();
    let text = format_csv(&rows);
    print!("{text}");
    if let Some(path) = csv {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::Ok)
}

fn gold(n: u32, format: Option<GoldFormat>, out: Option<&Path>) -> Result<Outcome> {
    let g = gold_family(n)?;
    let report = family_correlation(&g.sequences, gold_bound(n), Method::Packed);
    let doc = GoldDocument::new(&g);
    match format {
        None => {
            println!("n = {n}");
            println!("taps = {:#b}", g.lfsr.taps);
            println!("length = {}", report.length);
            println!("family_size = {}", report.family_size);
            println!("max_correlation = {}", report.cor);
            println!("gold_bound = {}", gold_bound(n));
        }
        Some(GoldFormat::Json) => emit(doc.to_json().as_bytes(), out)?,
        Some(GoldFormat::Csv) => emit(doc.to_csv().as_bytes(), out)?,
    }
    Ok(Outcome::Ok)
}

fn run_verify(n: Option<u32>, file: Option<&Path>, params: Params, force: bool) -> Result<Outcome> {
    let report: VerifyReport = match (n, file) {
        (_, Some(path)) => {
            let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            match io::decode(&data) {
                Ok(doc) => {
                    check_large(doc.n, force)?;
                    verify_document(&doc)?
                }
                Err(e) => {
                    eprintln!("FAIL  {}: {e}", path.display());
                    return Ok(Outcome::VerificationFailed);
                }
            }
        }
        (Some(n), None) => {
            check_large(n, force)?;
            verify(n, params.modulus, params.ab())?
        }
        (None, None) => unreachable!("clap requires n or --file"),
    };
    print!("{report}");
    if report.passed() {
        println!("all checks passed");
        Ok(Outcome::Ok)
    } else {
        for c in report.failures() {
            eprintln!("verification failed: {}: {}", c.name, c.detail);
        }
        Ok(Outcome::VerificationFailed)
    }
}
