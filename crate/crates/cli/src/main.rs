//! `boomspec`: spectra, classification, verification and timing of power
//! permutations over GF(2^k).
//!
//! Exit codes: 0 pass, 1 verification mismatch, 2 invalid input, 3 refused by
//! a resource gate.

mod bench;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boomspec_core::closedform::{main_exponent, ClosedForm};
use boomspec_core::config::{parse_hex_u64, ModulusConfig};
use boomspec_core::field::parse_hex_elt;
use boomspec_core::report::{write_rows_csv, SpectrumReport, SuiteReport};
use boomspec_core::verify::{self, Sample, VerifyOptions};
use boomspec_core::{Elt, Error, FieldSpec, PermTable};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_GATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "boomspec",
    version,
    about = "Boomerang and differential spectra over GF(2^k)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boomerang row beta(a, b) and DDT row over every b, with spectra.
    Spectrum(SpectrumArgs),
    /// Region and predicted values of elements of GF(q^4).
    Classify(ClassifyArgs),
    /// Brute force against the closed form.
    Verify(VerifyArgs),
    /// Timing of the BCT routes and worker scaling.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(Args, Debug)]
struct ModulusArgs {
    /// Field modulus as hex bits, e.g. 0x11b.
    #[arg(long, value_parser = parse_hex_arg)]
    modulus: Option<u64>,
    /// File of `degree=0xHEX` modulus overrides.
    #[arg(long, value_name = "FILE")]
    modulus_config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WorkerArgs {
    #[arg(long, env = "BOOMSPEC_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..=1024))]
    workers: u32,
}

/// Exactly one of `--n`, `--k` (with `--exponent`) or `--table-file`.
#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false, args = ["n", "k", "table_file"])]
struct SourceArgs {
    /// Main power map over GF(2^(4n)).
    #[arg(long)]
    n: Option<u32>,
    /// Power map over GF(2^k); needs --exponent.
    #[arg(long, requires = "exponent")]
    k: Option<u32>,
    /// Permutation table, one `x f(x)` hex pair per line.
    #[arg(long, value_name = "FILE")]
    table_file: Option<PathBuf>,
    /// Power exponent (decimal or 0x hex). Defaults to the main exponent with --n.
    #[arg(long, value_parser = parse_exponent, conflicts_with = "table_file")]
    exponent: Option<u64>,
    #[command(flatten)]
    modulus: ModulusArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Input difference.
    #[arg(long, default_value = "0x1", value_parser = parse_elt_arg)]
    a: Elt,
    #[command(flatten)]
    workers: WorkerArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[command(flatten)]
    modulus: ModulusArgs,
    /// Elements in hex.
    #[arg(required = true, value_parser = parse_elt_arg)]
    b: Vec<Elt>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Suite,
    Boomerang,
    Differential,
    Decomposition,
    S2Witness,
    FieldFacts,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[command(flatten)]
    modulus: ModulusArgs,
    #[arg(long, value_enum, default_value_t = Check::Suite)]
    check: Check,
    /// Allow runs behind the resource gate (n = 4, exhaustive decomposition at n = 3).
    #[arg(long)]
    long: bool,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    /// List every mismatch instead of the first 100 per region.
    #[arg(long)]
    full_mismatches: bool,
    #[command(flatten)]
    workers: WorkerArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Largest worker count in the scaling table.
    #[command(flatten)]
    workers: WorkerArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_hex_arg(s: &str) -> Result<u64, String> {
    parse_hex_u64(s).ok_or_else(|| format!("`{s}` is not a hex number"))
}

fn parse_elt_arg(s: &str) -> Result<Elt, String> {
    parse_hex_elt(s).ok_or_else(|| format!("`{s}` is not a hex element"))
}

fn parse_exponent(s: &str) -> Result<u64, String> {
    if s.starts_with("0x") || s.starts_with("0X") {
        parse_hex_arg(s)
    } else {
        s.parse().map_err(|_| format!("`{s}` is not an exponent"))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceGate { .. } => EXIT_GATE,
        Error::Consistency(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

impl ModulusArgs {
    fn field(&self, k: u32) -> boomspec_core::Result<FieldSpec> {
        if let Some(m) = self.modulus {
            return FieldSpec::new(k, m)?.build_tables();
        }
        match &self.modulus_config {
            Some(path) => ModulusConfig::load(path)?.field(k),
            None => FieldSpec::default_for(k),
        }
    }
}

impl SourceArgs {
    fn permutation(&self) -> boomspec_core::Result<PermTable> {
        if let Some(path) = &self.table_file {
            let text = std::fs::read_to_string(path)?;
            let forward = boomspec_core::spectra::parse_table(text.as_bytes())?;
            let k = forward.len().trailing_zeros();
            let field = self.modulus.field(k)?;
            return PermTable::from_forward(&field, forward);
        }
        let (k, d) = match (self.n, self.k) {
            (Some(n), _) => {
                if !(1..=6).contains(&n) {
                    return Err(Error::Domain(format!("n = {n} is outside 1..=6")));
                }
                (4 * n, self.exponent.unwrap_or_else(|| main_exponent(n)))
            }
            (None, Some(k)) => (k, self.exponent.expect("clap requires --exponent with --k")),
            (None, None) => unreachable!("clap requires one source"),
        };
        let field = self.modulus.field(k)?;
        PermTable::power(&field, d)
    }
}

fn open_out(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn field_header(field: &FieldSpec) -> String {
    format!("# GF(2^{}) modulus {:#x}", field.degree(), field.modulus())
}

fn cmd_spectrum(args: &SpectrumArgs) -> boomspec_core::Result<u8> {
    let perm = args.source.permutation()?;
    log::info!(
        "spectrum over GF(2^{}) modulus {:#x}",
        perm.field().degree(),
        perm.field().modulus()
    );
    let report = SpectrumReport::build(&perm, args.a, args.workers.workers as usize)?;
    let mut w = open_out(args.output.out.as_deref())?;
    match args.output.format {
        Format::Table => w.write_all(report.render_table().as_bytes())?,
        Format::Structured => w.write_all(report.to_structured()?.as_bytes())?,
        Format::Csv => {
            writeln!(w, "{}", field_header(perm.field()))?;
            report.write_csv(&mut w)?;
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    n: u32,
    modulus: String,
    elements: &'a [boomspec_core::Classification],
}

fn cmd_classify(args: &ClassifyArgs) -> boomspec_core::Result<u8> {
    let field = args.modulus.field(4 * args.n)?;
    let cf = ClosedForm::new(&field)?;
    let found = args
        .b
        .iter()
        .map(|&b| cf.classify(b))
        .collect::<boomspec_core::Result<Vec<_>>>()?;
    let mut w = open_out(args.output.out.as_deref())?;
    match args.output.format {
        Format::Table => {
            writeln!(
                w,
                "GF(2^{}) modulus {:#x}, n = {}",
                field.degree(),
                field.modulus(),
                args.n
            )?;
            for c in &found {
                write!(
                    w,
                    "{}: {} predicted beta {} predicted N {}",
                    c.b, c.region, c.predicted_beta, c.predicted_diff_count
                )?;
                if let (Some(a), Some(u), Some(t)) =
                    (&c.witness_a, &c.witness_u, &c.witness_trace_a)
                {
                    write!(w, " A = {a} U = {u} Tr(A) = {t}")?;
                }
                writeln!(w)?;
            }
        }
        Format::Csv => {
            writeln!(w, "{}", field_header(&field))?;
            writeln!(
                w,
                "b_hex,region,predicted_beta,predicted_diff_count,a,u,trace_a"
            )?;
            for c in &found {
                let opt = |s: &Option<String>| s.clone().unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    c.b,
                    c.region,
                    c.predicted_beta,
                    c.predicted_diff_count,
                    opt(&c.witness_a),
                    opt(&c.witness_u),
                    opt(&c.witness_trace_a)
                )?;
            }
        }
        Format::Structured => {
            let out = ClassifyOutput {
                n: args.n,
                modulus: format!("{:#x}", field.modulus()),
                elements: &found,
            };
            writeln!(w, "{}", serde_json::to_string_pretty(&out)?)?;
        }
    }
    w.flush()?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> boomspec_core::Result<u8> {
    let field = args.modulus.field(4 * args.n)?;
    let opts = VerifyOptions {
        workers: args.workers.workers as usize,
        allow_long: args.long,
        full_mismatches: args.full_mismatches,
    };
    log::info!(
        "verify n = {} modulus {:#x} with {} worker(s)",
        args.n,
        field.modulus(),
        opts.workers
    );
    let mut suite = match args.check {
        Check::Suite => verify::verify_suite(&field, &opts)?,
        single => {
            let n = ClosedForm::new(&field)?.n();
            let r = match single {
                Check::Boomerang => verify::verify_boomerang(&field, &opts)?,
                Check::Differential => verify::verify_differential(&field, &opts)?,
                Check::Decomposition => {
                    let sample = if n <= 2 || args.long {
                        Sample::All
                    } else {
                        Sample::Elements(verify::representative_sample(
                            &ClosedForm::new(&field)?,
                            2,
                        )?)
                    };
                    verify::verify_decomposition(&field, &sample, &opts)?
                }
                Check::S2Witness => verify::verify_s2_witness(&field)?,
                Check::FieldFacts => verify::verify_field_facts(opts.workers)?,
                Check::Suite => unreachable!(),
            };
            SuiteReport::new(n, field.modulus(), vec![r])
        }
    };
    if !args.timings {
        suite.strip_timings();
    }
    let mut w = open_out(args.output.out.as_deref())?;
    match args.output.format {
        Format::Table => w.write_all(suite.render_table().as_bytes())?,
        Format::Structured => w.write_all(suite.to_structured()?.as_bytes())?,
        Format::Csv => {
            writeln!(w, "{}", field_header(&field))?;
            write_rows_csv(suite.rows(), &mut w)?;
        }
    }
    w.flush()?;
    Ok(if suite.passed { 0 } else { EXIT_MISMATCH })
}

fn run(cli: &Cli) -> boomspec_core::Result<u8> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => bench::cmd_bench(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("boomspec: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
