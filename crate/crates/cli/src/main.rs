use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qflt::circuit::text::{self, CircuitDocument};
use qflt::circuit::{analyze, analyze_decomposed, ResourceReport};
use qflt::compare::{compare_field, deltas_csv, text_table, to_csv, ComparisonRow};
use qflt::flt::{build, with_uncompute, BlockSummary, Variant};
use qflt::gf2x::{BinaryPoly, FieldSpec, Registry};
use qflt::verify::{inputs, verify, InputSet};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "qflt",
    version,
    about = "Quantum FLT inversion circuits over GF(2^n)"
)]
struct Cli {
    /// Curve registry file (`name,n,hex-modulus` lines) replacing the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an inversion circuit and write it in the text format.
    Synth(SynthArgs),
    /// Report width, gate counts, depth and T-depth of a circuit file.
    Analyze(AnalyzeArgs),
    /// Check a circuit against the extended-Euclid oracle by simulation.
    Verify(VerifyArgs),
    /// Tabulate baseline against waterfall resources for a list of fields.
    Compare(CompareArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Registry name (e.g. B-233) or degree.
    #[arg(long, required_unless_present = "modulus")]
    field: Option<String>,
    /// Explicit irreducible modulus in hex, bit i = coefficient of x^i.
    #[arg(long, value_name = "HEX")]
    modulus: Option<String>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    /// Append a result copy and the reverse computation.
    #[arg(long)]
    uncompute: bool,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Expand Toffolis into Clifford+T before measuring.
    #[arg(long)]
    decompose: bool,
    /// Append one row to this CSV file, writing the header if it is new.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    /// Every nonzero element (n <= 16).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of random nonzero inputs.
    #[arg(long, required_unless_present = "exhaustive")]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also require the input restored and all ancillas cleared.
    #[arg(long)]
    uncompute: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated registry names or degrees; all registry fields when omitted.
    #[arg(long, value_delimiter = ',')]
    fields: Vec<String>,
    /// Also write `<prefix>.csv`, `<prefix>.txt` and `<prefix>_deltas.csv`.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: qflt::flt::FltError| e.to_string())
}

/// Failures that map to exit status 1 rather than 2.
#[derive(Debug)]
struct Mismatch(usize);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} input(s) failed verification", self.0)
    }
}

impl std::error::Error for Mismatch {}

fn registry(path: Option<&Path>) -> Result<Registry> {
    match path {
        None => Ok(Registry::bundled()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Registry::parse(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn resolve_field(reg: &Registry, args: &FieldArgs) -> Result<FieldSpec> {
    let Some(hex) = &args.modulus else {
        let key = args.field.as_deref().unwrap_or_default();
        return reg.resolve(key).with_context(|| format!("field {key:?}"));
    };
    let m = BinaryPoly::from_hex(hex).with_context(|| format!("modulus {hex:?}"))?;
    let field = FieldSpec::new(m, None).with_context(|| format!("modulus {hex:?}"))?;
    if let Some(key) = &args.field {
        if key.parse::<usize>().ok() != Some(field.n()) {
            bail!(
                "--field {key} does not match the degree {} of --modulus",
                field.n()
            );
        }
    }
    Ok(field)
}

fn synth(reg: &Registry, args: &SynthArgs) -> Result<()> {
    let field = resolve_field(reg, &args.field)?;
    let mut ic = build(args.variant, &field)?;
    if args.uncompute {
        ic = with_uncompute(&ic)?;
    }
    let meta = vec![
        ("n".to_string(), field.n().to_string()),
        ("variant".to_string(), args.variant.to_string()),
        ("field".to_string(), field.label()),
        ("modulus".to_string(), field.modulus().to_hex()),
        ("result".to_string(), ic.output_register().name.clone()),
    ];
    let body = text::emit_with_meta(&ic.circuit, &meta);
    let summary = BlockSummary::of(&ic.circuit);
    match &args.out {
        Some(p) => {
            fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
            println!("{summary}");
        }
        None => {
            print!("{body}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn load(path: &Path) -> Result<CircuitDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

const ANALYZE_CSV_HEADER: &str = "n,variant,width,cnot,toffoli,t_count,depth,t_depth";

fn analyze_cmd(args: &AnalyzeArgs) -> Result<()> {
    let doc = load(&args.file)?;
    let r: ResourceReport = if args.decompose {
        analyze_decomposed(&doc.circuit)
    } else {
        analyze(&doc.circuit)
    };
    let n = doc.meta("n").unwrap_or("");
    let variant = doc.meta("variant").unwrap_or("");
    for (k, v) in doc
        .meta
        .iter()
        .filter(|(k, _)| k == "n" || k == "variant" || k == "field")
    {
        println!("{k}={v}");
    }
    println!("width={}", r.width);
    println!("gates={}", r.total_gates());
    for (kind, count) in &r.counts {
        println!("count.{}={count}", kind.mnemonic());
    }
    println!("cnot={}", r.cnot_count);
    println!("toffoli={}", r.toffoli_count);
    println!("t_count={}", r.t_count);
    println!("depth={}", r.overall_depth);
    println!("t_depth={}", r.t_depth);
    if let Some(p) = &args.csv {
        let fresh = fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .with_context(|| format!("opening {}", p.display()))?;
        if fresh {
            writeln!(f, "{ANALYZE_CSV_HEADER}")?;
        }
        writeln!(
            f,
            "{n},{variant},{},{},{},{},{},{}",
            r.width, r.cnot_count, r.toffoli_count, r.t_count, r.overall_depth, r.t_depth
        )?;
    }
    Ok(())
}

fn verify_cmd(reg: &Registry, args: &VerifyArgs) -> Result<()> {
    let field = resolve_field(reg, &args.field)?;
    let set = match (args.exhaustive, args.samples) {
        (true, _) => InputSet::Exhaustive,
        (false, Some(count)) => InputSet::Sampled {
            count,
            seed: args.seed,
        },
        (false, None) => bail!("either --exhaustive or --samples is required"),
    };
    let xs = inputs(&field, set)?;
    let mut ic = build(args.variant, &field)?;
    if args.uncompute {
        ic = with_uncompute(&ic)?;
    }
    let report = verify(&ic, &xs)?;
    println!(
        "field={} variant={} passed={}/{}",
        field.label(),
        args.variant,
        report.passed(),
        report.checked
    );
    for m in report.failures.iter().take(10) {
        println!(
            "FAIL input={} expected={} got={}{}",
            m.input,
            m.expected,
            m.got,
            if m.dirty {
                " (ancilla or input not restored)"
            } else {
                ""
            }
        );
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Mismatch(report.failures.len()).into())
    }
}

fn compare_cmd(reg: &Registry, args: &CompareArgs) -> Result<()> {
    let fields: Vec<FieldSpec> = if args.fields.is_empty() {
        reg.fields().to_vec()
    } else {
        args.fields
            .iter()
            .map(|k| reg.resolve(k).with_context(|| format!("field {k:?}")))
            .collect::<Result<_>>()?
    };
    let rows: Vec<ComparisonRow> = fields
        .par_iter()
        .map(|f| compare_field(f).with_context(|| format!("building {}", f.label())))
        .collect::<Result<_>>()?;
    let (csv, table) = (to_csv(&rows), text_table(&rows));
    if let Some(prefix) = &args.out {
        let with = |suffix: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        for (path, body) in [
            (with(".csv"), &csv),
            (with(".txt"), &table),
            (with("_deltas.csv"), &deltas_csv(&rows)),
        ] {
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    match args.format {
        Format::Text => print!("{table}"),
        Format::Csv => print!("{csv}"),
    }
    Ok(())
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QFLT_THREADS") {
        let n: usize = v.parse().with_context(|| format!("QFLT_THREADS={v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    init_threads()?;
    let reg = registry(cli.registry.as_deref())?;
    match &cli.command {
        Command::Synth(a) => synth(&reg, a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Verify(a) => verify_cmd(&reg, a),
        Command::Compare(a) => compare_cmd(&reg, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Mismatch>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
