//! `nv`: dimensions, verdicts and scans for polynomial neural networks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neurovar::engine::{block_ranks, confirm_rational, generic_rank, DEFAULT_TRIES};
use neurovar::veronese::{
    classify_secant, composite_veronese, image_linear_relations, power_threshold_scan, AH_DEFECTIVE_ROWS,
    AH_NEIGHBOUR_ROWS, AH_SLOW_ROW, DEFAULT_OVERSAMPLE_MARGIN,
};
use neurovar::{
    emit_report, gauge_fix, neurovariety_stats_in, prime_for_seed, render_report, scan, theorem_verdict, Architecture,
    CoefficientDomain, Error, PrimeField, Rationals, ReportFormat, ReportRow, ScanSpec,
};

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(name = "nv", version, about = "Neurovariety dimensions by exact Jacobian rank sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected and sampled dimension of one architecture.
    Dims(DimsArgs),
    /// Theorem conditions and verdict for one architecture.
    Check(CheckArgs),
    /// Exhaustive scan over a bounded grid.
    Scan(ScanArgs),
    /// Secant dimensions of Veronese varieties.
    VeroneseSecant(SecantArgs),
    /// Independence of powers of random forms.
    PowerIndep(PowerArgs),
    /// Linear relations on the image of a composite Veronese map.
    Relations(RelationsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Rational,
    Prime,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ArchArgs {
    /// Widths n_0,...,n_L.
    #[arg(short = 'n', long = "widths", value_delimiter = ',', required = true)]
    widths: Vec<usize>,
    /// Activation degrees d_1,...,d_{L-1}; omit for L = 1.
    #[arg(short = 'd', long = "degrees", value_delimiter = ',')]
    degrees: Vec<u32>,
}

impl ArchArgs {
    fn arch(&self) -> Result<Architecture, CliError> {
        Ok(Architecture::new(self.widths.clone(), self.degrees.clone())?)
    }
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_TRIES)]
    tries: usize,
    /// Overridden by NV_SEED.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Field::Prime)]
    field: Field,
    /// `auto` or a prime in (2^60, 2^63).
    #[arg(long, default_value = "auto")]
    prime: String,
}

impl SamplingArgs {
    fn seed(&self) -> Result<u64, CliError> {
        match std::env::var("NV_SEED") {
            Ok(v) => v.trim().parse().map_err(|_| CliError::usage(format!("NV_SEED is not a u64: {v:?}"))),
            Err(_) => Ok(self.seed),
        }
    }

    fn domain(&self, seed: u64) -> Result<CoefficientDomain, CliError> {
        if self.tries == 0 {
            return Err(CliError::usage("--tries must be positive"));
        }
        Ok(match self.field {
            Field::Rational => CoefficientDomain::Rationals(Rationals),
            Field::Prime if self.prime == "auto" => CoefficientDomain::PrimeField(prime_for_seed(seed)),
            Field::Prime => {
                let p = self
                    .prime
                    .parse()
                    .map_err(|_| CliError::usage(format!("--prime: not a number: {}", self.prime)))?;
                CoefficientDomain::PrimeField(PrimeField::new(p)?)
            }
        })
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    json: bool,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    arch: ArchArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Re-evaluate the witness Jacobian over the rationals.
    #[arg(long)]
    confirm_rational: bool,
    /// Print column-block ranks at the witness point.
    #[arg(long)]
    blocks: bool,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    arch: ArchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    min_depth: usize,
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    #[arg(long, default_value_t = 1)]
    min_width: usize,
    #[arg(long, default_value_t = 4)]
    max_width: usize,
    #[arg(long, default_value_t = 4)]
    max_degree: u32,
    #[arg(long, default_value_t = 1)]
    min_outputs: usize,
    #[arg(long, default_value_t = 2)]
    max_outputs: usize,
    #[arg(long, default_value_t = neurovar::scan::DEFAULT_MAX_FREE_WEIGHTS)]
    max_free_weights: usize,
    #[arg(long, default_value_t = neurovar::scan::DEFAULT_MAX_AMBIENT)]
    max_ambient: u128,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SecantArgs {
    /// Variables of the Veronese source.
    #[arg(long, required_unless_present = "table")]
    nvars: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    degree: Option<u32>,
    /// Secant order.
    #[arg(short = 's', long, required_unless_present = "table")]
    order: Option<usize>,
    /// Run the defective rows and their neighbours.
    #[arg(long)]
    table: bool,
    /// Include the quartic row in four variables.
    #[arg(long)]
    slow: bool,
    #[arg(long, default_value_t = DEFAULT_TRIES)]
    tries: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PowerArgs {
    /// Variables.
    #[arg(short = 'd', long)]
    nvars: usize,
    /// Number of forms.
    #[arg(short = 'k', long)]
    forms: usize,
    /// Degree of the forms.
    #[arg(short = 's', long)]
    degree: u32,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long)]
    nvars: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u32>,
    /// Evaluation rows; defaults to the ambient count plus a margin.
    #[arg(long)]
    oversample: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SamplingExhausted { .. } => 3,
            Error::Io { .. } => 4,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() })?;
    }
    Ok(())
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run_dims(a: &DimsArgs) -> Result<(), CliError> {
    let arch = a.arch.arch()?;
    let seed = a.sampling.seed()?;
    let domain = a.sampling.domain(seed)?;
    let start = std::time::Instant::now();
    let report = neurovariety_stats_in(&arch, a.sampling.tries, seed, &domain)?;
    let wall = a.timing.then(|| start.elapsed().as_millis() as u64);
    let row = ReportRow::from_dims(&report, wall);
    let json = json_line(&row);
    write_out(&a.output.out, &json)?;

    let mut extra = Vec::new();
    if a.confirm_rational || a.blocks {
        let gmap = gauge_fix(&arch);
        match &domain {
            CoefficientDomain::PrimeField(f) => {
                let est = generic_rank(&gmap, a.sampling.tries, seed, f)?;
                if a.confirm_rational {
                    let q = confirm_rational(&gmap, f, &est.witness.point)?;
                    extra.push(format!("rational_rank   {q} (prime rank {})", est.rank));
                }
                if a.blocks {
                    extra.push(blocks_line(&block_ranks(&gmap, &est.witness.point, f)?));
                }
            }
            CoefficientDomain::Rationals(q) => {
                let est = generic_rank(&gmap, a.sampling.tries, seed, q)?;
                if a.confirm_rational {
                    extra.push(format!("rational_rank   {} (sampled over QQ)", est.rank));
                }
                if a.blocks {
                    extra.push(blocks_line(&block_ranks(&gmap, &est.witness.point, q)?));
                }
            }
        }
    }

    if a.output.json {
        print!("{json}");
        for l in &extra {
            eprintln!("{l}");
        }
    } else {
        let opt = |v: Option<u128>| v.map_or("-".to_string(), |x| x.to_string());
        println!("architecture    {arch}");
        println!("expdim          {}", report.expdim_general);
        println!("expdim_refined  {}", opt(report.expdim_refined));
        println!("dim_actual      {}", report.dim_actual);
        println!("fiber_dim       {}", report.fiber_dim);
        println!("defective       {}", report.defective);
        println!("verdict         {}", row.verdict.as_deref().unwrap_or("-"));
        println!("domain          {}", report.domain);
        println!("seed            {seed}");
        println!("trials          {} ({} evaluated)", report.trials, report.trials_run);
        println!("pivot           {:?}", report.pivots);
        for l in &extra {
            println!("{l}");
        }
    }
    Ok(())
}

fn blocks_line(b: &neurovar::BlockRankReport) -> String {
    format!(
        "blocks          layers {:?} normal {} last {} total {}",
        b.layer_ranks, b.normal_rank, b.last_rank, b.total
    )
}

fn run_check(a: &CheckArgs) -> Result<(), CliError> {
    let arch = a.arch.arch()?;
    let v = theorem_verdict(&arch)?;
    let json = json_line(&v);
    write_out(&a.output.out, &json)?;
    if a.output.json {
        print!("{json}");
        return Ok(());
    }
    println!("architecture    {arch}");
    for r in &v.room.records {
        let rel = if r.holds { "<" } else { ">=" };
        println!("room layer {}    {} {rel} {}", r.layer, r.lhs, r.rhs);
    }
    println!(
        "last secant     Sec_{} of degree-{} Veronese in {} variables: {}",
        v.secant.secant_order,
        v.secant.degree,
        v.secant.nvars,
        if v.secant.defective { "defective" } else { "not defective" }
    );
    if let Some(f) = &v.filling {
        println!(
            "single output   expdim {} vs {} parameters: {}",
            f.single_output_expdim,
            f.parameter_count,
            if f.holds { "equal" } else { "differ" }
        );
    }
    println!("verdict         {}", v.kind.label());
    Ok(())
}

fn run_scan(a: &ScanArgs) -> Result<(), CliError> {
    let seed = a.sampling.seed()?;
    let mut spec = ScanSpec::new(a.sampling.domain(seed)?, seed);
    spec.depths = a.min_depth..=a.max_depth;
    spec.widths = a.min_width..=a.max_width;
    spec.degrees = 2..=a.max_degree;
    spec.outputs = a.min_outputs..=a.max_outputs;
    spec.max_free_weights = a.max_free_weights;
    spec.max_ambient = a.max_ambient;
    spec.tries = a.sampling.tries;
    spec.timing = a.timing;
    spec.threads = match std::env::var("NV_THREADS") {
        Ok(v) => Some(v.trim().parse().map_err(|_| CliError::usage(format!("NV_THREADS is not a count: {v:?}")))?),
        Err(_) => None,
    };
    let rows = scan(&spec)?;
    let report = neurovar::scan::report_rows(&spec, &rows);
    let format = match a.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    match &a.out {
        Some(p) => emit_report(&report, format, p)?,
        None => print!("{}", render_report(&report, format)),
    }
    let disagreements: Vec<_> = rows.iter().filter(|r| !r.agreement).collect();
    let errors = rows.iter().filter(|r| r.report.is_err()).count();
    eprintln!("{} rows, {} disagreements, {} errors", rows.len(), disagreements.len(), errors);
    for r in disagreements {
        let v = r.verdict.map_or("-".to_string(), |v| v.label());
        eprintln!("  disagreement {} verdict {v}", r.arch);
    }
    Ok(())
}

fn run_secant(a: &SecantArgs) -> Result<(), CliError> {
    let cases: Vec<(usize, u32, usize)> = if a.table {
        let mut c: Vec<_> = AH_DEFECTIVE_ROWS.to_vec();
        if a.slow {
            c.push(AH_SLOW_ROW);
        }
        c.extend(AH_NEIGHBOUR_ROWS);
        c
    } else {
        vec![(a.nvars.unwrap(), a.degree.unwrap(), a.order.unwrap())]
    };
    let mut out = Vec::new();
    for (n, d, s) in cases {
        let c = classify_secant(n, d, s, a.tries, a.seed)?;
        let table = neurovar::ah_secant_defective(n, d, s);
        if !a.json {
            println!(
                "Sec_{s}(V^{}_{d})  dim {}  expected {}  {}  table {}",
                n - 1,
                c.dim,
                c.expected,
                if c.defective { "defective" } else { "non-defective" },
                if table == c.defective { "agrees" } else { "DISAGREES" }
            );
        }
        out.push(c);
    }
    if a.json {
        print!("{}", json_line(&out));
    }
    Ok(())
}

fn run_power(a: &PowerArgs) -> Result<(), CliError> {
    if a.trials == 0 || a.forms == 0 || a.nvars == 0 || a.degree == 0 {
        return Err(CliError::usage("trials, forms, variables and degree must be positive"));
    }
    let r = power_threshold_scan(a.nvars, a.forms, a.degree, a.trials, a.seed);
    if a.json {
        print!("{}", json_line(&r));
    } else {
        println!(
            "d={} k={} s={}: {}/{} independent at r={}, monotone {}",
            r.nvars,
            r.forms,
            r.degree,
            r.independent_at_bound,
            r.trials,
            (r.forms as u32).saturating_sub(1).max(1),
            r.monotone
        );
        let mut hist = std::collections::BTreeMap::new();
        for m in &r.minimal_r {
            *hist.entry(*m).or_insert(0usize) += 1;
        }
        for (m, c) in hist {
            println!("  minimal r {}: {c}", m.map_or("none".to_string(), |x| x.to_string()));
        }
    }
    Ok(())
}

fn run_relations(a: &RelationsArgs) -> Result<(), CliError> {
    let cv = composite_veronese(a.nvars, &a.degrees)?;
    let rows = a.oversample.unwrap_or(cv.ambient_coords() + DEFAULT_OVERSAMPLE_MARGIN);
    let rel = image_linear_relations(&cv, rows, a.seed)?;
    if a.json {
        let v: Vec<Vec<String>> = rel.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        print!(
            "{}",
            json_line(&serde_json::json!({
                "nvars": a.nvars,
                "degrees": a.degrees,
                "ambient": cv.ambient_coords(),
                "dimension": rel.len(),
                "relations": v,
                "polynomials": rel.iter().map(|r| cv.display_relation(r)).collect::<Vec<_>>(),
            }))
        );
    } else {
        println!("ambient coordinates {}", cv.ambient_coords());
        println!("relations           {}", rel.len());
        for r in &rel {
            println!("  {}", cv.display_relation(r));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dims(a) => run_dims(a),
        Command::Check(a) => run_check(a),
        Command::Scan(a) => run_scan(a),
        Command::VeroneseSecant(a) => run_secant(a),
        Command::PowerIndep(a) => run_power(a),
        Command::Relations(a) => run_relations(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nv: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
