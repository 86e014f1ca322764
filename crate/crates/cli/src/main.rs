use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfdual::analysis::{CodeRecord, InvariantOptions};
use selfdual::cyclic_field::{find_generators, FieldContext};
use selfdual::decomposition::{build_code, feasible_types, ConstructionParams};
use selfdual::gf2::{BitMatrix, Permutation};
use selfdual::search::{run_search, SearchPlan};
use selfdual::shadow_theory::{
    enumerator_family, family_hint, nonexistence_verdict, shadow_range_restriction, LengthShape, Pin, ShadowClass,
};
use selfdual::Error;

const SCHEMA_VERSION: u32 = 1;

const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "selfdual", version, about = "Binary self-dual codes with a dihedral automorphism group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// Worker threads; defaults to all logical cores.
    #[arg(long, global = true, env = "SELFDUAL_THREADS")]
    threads: Option<usize>,
    /// Seed for the primitive element search, used instead of the reference elements.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from construction parameters and compute its invariants.
    Construct(ConstructArgs),
    /// Compute the invariants of a code given by a generator matrix.
    Analyze(AnalyzeArgs),
    /// Run a parameter grid search described by a plan file.
    Search(SearchArgs),
    /// Nonexistence certificate for a shadow class.
    Certify(CertifyArgs),
    /// Solve for weight enumerator and shadow coefficients under pins.
    Gleason(GleasonArgs),
    /// Automorphism types of prime order p allowed for [n, n/2, d].
    Types(TypesArgs),
}

#[derive(Args)]
struct InvariantArgs {
    /// Weights counted beyond d.
    #[arg(long, default_value_t = 2)]
    extra_weights: usize,
    /// Shadow counts up to this weight (default d - 2; 0 skips).
    #[arg(long)]
    shadow_w_max: Option<usize>,
    /// Skip the intersection numbers.
    #[arg(long)]
    no_intersections: bool,
}

impl InvariantArgs {
    fn options(&self) -> InvariantOptions {
        InvariantOptions {
            extra_weights: self.extra_weights,
            shadow_w_max: self.shadow_w_max,
            intersections: !self.no_intersections,
            ..InvariantOptions::default()
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    f: usize,
    /// u1,u2,u3
    #[arg(long, value_delimiter = ',', required = true)]
    u: Vec<u64>,
    /// v1,v2
    #[arg(long, value_delimiter = ',', required = true)]
    v: Vec<u64>,
    /// Coset representative in cycle notation, e.g. "(1,2,3,4)".
    #[arg(long, default_value = "I")]
    s: String,
    /// d4, d6, d8 or a path to a matrix file.
    #[arg(long)]
    fixed_gen: Option<String>,
    /// Also write the generator matrix to this file.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    #[command(flatten)]
    inv: InvariantArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix file in the text format ("rows cols" then hex rows); "-" reads stdin.
    input: String,
    /// Construction parameters to attach, in the flat record form.
    #[arg(long)]
    params: Option<String>,
    #[command(flatten)]
    inv: InvariantArgs,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    plan: PathBuf,
    /// Override the plan's budget (grid points per run).
    #[arg(long)]
    budget: Option<u64>,
    /// Override the plan's checkpoint file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Progress lines on stderr.
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    /// e.g. near-extremal-minimal, extremal-near-minimal.
    #[arg(long)]
    class: String,
}

#[derive(Args)]
struct GleasonArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Extra conditions such as "B7=alpha" or "A14=3705+8*beta".
    #[arg(long)]
    pin: Vec<String>,
    /// A listed family such as "78,1"; supplies n, d and pins.
    #[arg(long)]
    family: Option<String>,
    /// Apply the range restriction from a shadow of minimum weight s.
    #[arg(long)]
    shadow_weight: Option<usize>,
    /// Largest weight shown in text output (default 2d + 4).
    #[arg(long)]
    w_max: Option<usize>,
}

#[derive(Args)]
struct TypesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: usize,
}

enum Failure {
    Usage(String),
    Unsupported(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnsupportedCase(_)
            | Error::NotApplicable(_)
            | Error::NeedsMoreConstraints(_)
            | Error::IncompleteCoverage(_)
            | Error::TooLarge(_)
            | Error::NoShadow
            | Error::HypothesisViolated(_) => Failure::Unsupported(msg),
            Error::ConstructionBug(_) => Failure::Internal(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Usage(format!("thread pool: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Unsupported(m)) => {
            eprintln!("unsupported: {m}");
            ExitCode::from(EXIT_UNSUPPORTED)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Construct(a) => construct(cli, a),
        Command::Analyze(a) => analyze(cli, a),
        Command::Search(a) => search(cli, a),
        Command::Certify(a) => certify(cli, a),
        Command::Gleason(a) => gleason(cli, a),
        Command::Types(a) => types(cli, a),
    }
}

fn context(p: usize, seed: Option<u64>) -> Result<FieldContext, Error> {
    match (FieldContext::reference(p), seed) {
        (Some(ctx), None) => Ok(ctx),
        _ => find_generators(p, seed),
    }
}

fn print_record(cli: &Cli, rec: &CodeRecord) -> Outcome {
    let mut out = io::stdout().lock();
    match cli.output.unwrap_or(Format::Json) {
        Format::Json => writeln!(out, "{}", rec.to_json()?)?,
        Format::Csv => writeln!(out, "{}\n{}", CodeRecord::CSV_HEADER, rec.csv_row())?,
        Format::Text => write!(out, "{}", rec.to_text())?,
    }
    Ok(())
}

fn construct(cli: &Cli, a: &ConstructArgs) -> Outcome {
    if a.u.len() != 3 || a.v.len() != 2 {
        return Err(Failure::Usage("--u takes u1,u2,u3 and --v takes v1,v2".into()));
    }
    let s = Permutation::from_cycles(4, &a.s)?;
    let mut params = ConstructionParams::new(a.p, a.f, [a.u[0], a.u[1], a.u[2]], (a.v[0], a.v[1]), s)?;
    if let Some(id) = &a.fixed_gen {
        params.fixed_gen_id = id.clone();
    }
    let ctx = context(a.p, cli.seed)?;
    let gen = build_code(&ctx, &params)?;
    if !gen.is_self_dual()? {
        return Err(Failure::Internal(format!("{params} did not give a self-dual code")));
    }
    if let Some(path) = &a.matrix_out {
        fs::write(path, gen.to_text())?;
    }
    let rec = CodeRecord::compute(&gen, Some(params), &a.inv.options())?;
    print_record(cli, &rec)
}

fn analyze(cli: &Cli, a: &AnalyzeArgs) -> Outcome {
    let text = if a.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(&a.input)?
    };
    let gen = BitMatrix::from_text(&text)?;
    let params = a.params.as_deref().map(str::parse::<ConstructionParams>).transpose()?;
    let rec = CodeRecord::compute(&gen, params, &a.inv.options())?;
    print_record(cli, &rec)
}

fn search(cli: &Cli, a: &SearchArgs) -> Outcome {
    let mut plan = SearchPlan::load(&a.plan)?;
    if a.budget.is_some() {
        plan.budget = a.budget;
    }
    if a.checkpoint.is_some() {
        plan.checkpoint = a.checkpoint.clone();
    }
    if cli.seed.is_some() {
        plan.seed = cli.seed;
    }
    let report = |done: u64, total: u64, codes: usize| eprintln!("{done}/{total} grid points, {codes} codes");
    let store = run_search(&plan, a.progress.then_some(&report as _))?;
    let mut buf: Vec<u8> = Vec::new();
    match cli.output.unwrap_or(Format::Text) {
        Format::Json => store.write_jsonl(&mut buf)?,
        Format::Csv => store.write_csv(&mut buf)?,
        Format::Text => buf.extend_from_slice(store.summary().as_bytes()),
    }
    match &a.out {
        Some(path) => fs::write(path, buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    if !store.stats.failures.is_empty() {
        return Err(Failure::Internal(format!("{} grid points failed: {}", store.stats.failures.len(), store.stats.failures[0])));
    }
    Ok(())
}

fn certify(cli: &Cli, a: &CertifyArgs) -> Outcome {
    let class = ShadowClass::parse(a.n, &a.class)?;
    let cert = nonexistence_verdict(&class)?;
    match cli.output.unwrap_or(Format::Text) {
        Format::Json => println!("{}", serde_json::to_string(&cert)?),
        Format::Csv => return Err(Failure::Usage("certify has no csv output".into())),
        Format::Text => print!("{}", cert.to_text()),
    }
    Ok(())
}

fn gleason(cli: &Cli, a: &GleasonArgs) -> Outcome {
    let (mut n, mut d, mut pins) = match &a.family {
        Some(name) => {
            let (n, d, pins) = family_hint(name)?;
            (Some(n), Some(d), pins)
        }
        None => (None, None, Vec::new()),
    };
    n = a.n.or(n);
    d = a.d.or(d);
    let (Some(n), Some(d)) = (n, d) else {
        return Err(Failure::Usage("gleason needs --n and --d, or --family".into()));
    };
    for p in &a.pin {
        pins.push(p.parse::<Pin>()?);
    }
    let shape = LengthShape::new(n)?;
    let fam = enumerator_family(shape, d, &pins)?;
    let range = a.shadow_weight.map(|s| shadow_range_restriction(&fam, s)).transpose()?;
    match cli.output.unwrap_or(Format::Text) {
        Format::Json => {
            let value = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "family": fam,
                "range_restriction": range,
            });
            println!("{value}");
        }
        Format::Csv => {
            println!("kind,weight,value");
            for (w, e) in &fam.a {
                println!("A,{w},{e}");
            }
            for (w, e) in &fam.b {
                println!("B,{w},{e}");
            }
        }
        Format::Text => {
            let w_max = a.w_max.unwrap_or(2 * d + 4).min(n);
            println!("n = {n} (m = {}, l = {}, r = {}), d = {d}", shape.m, shape.l, shape.r);
            let ps: Vec<String> = pins.iter().map(|p| p.to_string()).collect();
            println!("pins: {}", if ps.is_empty() { "-".into() } else { ps.join(", ") });
            println!("parameters: {}", if fam.params.is_empty() { "-".into() } else { fam.params.join(", ") });
            for (w, e) in fam.a.iter().filter(|(w, _)| (d..=w_max).contains(*w)) {
                println!("A{w} = {e}");
            }
            for (w, e) in fam.b.iter().filter(|(w, _)| **w <= w_max) {
                println!("B{w} = {e}");
            }
            for c in &fam.constraints {
                println!("constraint: {c} = 0");
            }
            if let Some(r) = &range {
                println!("B{} = {} with 0 ≤ B{} ≤ {n}", r.s, r.b_s, r.s);
                for p in r.bounds.keys() {
                    if let Some(line) = r.describe(p) {
                        println!("{line}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn types(cli: &Cli, a: &TypesArgs) -> Outcome {
    let list = feasible_types(a.n, a.d, a.p)?;
    match cli.output.unwrap_or(Format::Text) {
        Format::Json => {
            let names: Vec<String> = list.iter().map(|t| t.to_string()).collect();
            let value = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "n": a.n,
                "d": a.d,
                "p": a.p,
                "types": names,
            });
            println!("{value}");
        }
        Format::Csv => {
            println!("p,c,f");
            for t in &list {
                println!("{},{},{}", t.p, t.c, t.f);
            }
        }
        Format::Text => {
            for t in &list {
                println!("{t}");
            }
        }
    }
    Ok(())
}
