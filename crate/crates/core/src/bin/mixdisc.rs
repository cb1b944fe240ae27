use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mixdisc::cubature::{
    cbc_search, worst_case_error, worst_case_error_closed_form, CubatureRule, ErrorReport,
};
use mixdisc::discretization::{default_block_cap, estimate_er_weighted};
use mixdisc::dyadic::{block_norms, h_seminorm_with, ClassFamily, ClassSpec};
use mixdisc::experiments::{fit_rows, read_csv, run_experiment, BMode, ExperimentConfig};
use mixdisc::kernels::KernelSpec;
use mixdisc::trig::io::{read_coeffs, write_coeffs};
use mixdisc::trig::DEFAULT_OVERSAMPLE;
use mixdisc::{Error, Result, TrigPoly64};

#[derive(Parser)]
#[command(name = "mixdisc", version, about = "Lattice cubature and L2 sampling discretization on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit kernel coefficients, or grid values with --values
    Kernel(KernelArgs),
    /// Block norms and block seminorm of a coefficient file
    Decompose(DecomposeArgs),
    /// Build a rule and report its worst-case error
    Cubature(CubatureArgs),
    /// Component-by-component generator search
    Cbc(CbcArgs),
    /// Sampled discretization error, witness and transferred bound
    Discretize(DiscretizeArgs),
    /// Fit the rate model to a results CSV
    Fit(FitArgs),
    /// Run a config-driven experiment
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Dirichlet,
    Fejer,
    Vp,
    Block,
    Bernoulli,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(value_enum)]
    kind: KernelKind,
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Block levels, comma separated (block kernels only)
    #[arg(long, value_delimiter = ',', default_value = "2")]
    levels: Vec<u32>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Frequency cutoff (Bernoulli kernels only)
    #[arg(long, default_value_t = 32)]
    truncation: usize,
    /// Print values on a grid of this many points per axis instead of coefficients
    #[arg(long)]
    values: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Coefficient file: `d N_1 .. N_d`, then `k_1 .. k_d re im` per line
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    oversample: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleKind {
    Fibonacci,
    Korobov,
    Random,
}

#[derive(Args)]
struct RuleArgs {
    #[arg(long, value_enum, default_value = "fibonacci")]
    rule: RuleKind,
    /// Fibonacci index n
    #[arg(long, default_value_t = 10)]
    n: u32,
    /// Node count for korobov and random rules
    #[arg(long, default_value_t = 89)]
    m: u64,
    #[arg(long, value_delimiter = ',')]
    generator: Vec<i64>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RuleArgs {
    fn build(&self) -> Result<CubatureRule<f64>> {
        match self.rule {
            RuleKind::Fibonacci => CubatureRule::fibonacci(self.n),
            RuleKind::Korobov => {
                if self.generator.is_empty() {
                    return Err(Error::Config {
                        key: "generator".into(),
                        reason: "required for korobov rules".into(),
                    });
                }
                CubatureRule::korobov(self.m, &self.generator)
            }
            RuleKind::Random => CubatureRule::uniform_random(self.m as usize, self.dim, self.seed),
        }
    }
}

#[derive(Args)]
struct CubatureArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, default_value = "fourier_hull")]
    family: ClassFamily,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Box half-width; omitted means the closed form for lattice rules
    #[arg(long)]
    truncation: Option<usize>,
    /// Also print the nodes
    #[arg(long)]
    points: bool,
}

#[derive(Args)]
struct CbcArgs {
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
}

#[derive(Args)]
struct DiscretizeArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    block_cap: Option<u32>,
    /// Quasi-algebra parameter for the transferred upper bound
    #[arg(long)]
    transfer_a: Option<f64>,
}

#[derive(Args)]
struct FitArgs {
    input: PathBuf,
    /// `free` or a fixed exponent of log m
    #[arg(long, default_value = "free")]
    b: String,
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    metric: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(Into::into),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn kernel(args: &KernelArgs) -> Result<()> {
    let spec = match args.kind {
        KernelKind::Dirichlet => KernelSpec::Dirichlet { order: args.order, dim: args.dim },
        KernelKind::Fejer => KernelSpec::Fejer { order: args.order, dim: args.dim },
        KernelKind::Vp => KernelSpec::ValleePoussin { order: args.order, dim: args.dim },
        KernelKind::Block => KernelSpec::Block { index: args.levels.clone() },
        KernelKind::Bernoulli => KernelSpec::Bernoulli {
            r: args.r,
            truncation: args.truncation,
            dim: args.dim,
        },
    };
    let f: TrigPoly64 = spec.build()?;
    let text = match args.values {
        None => write_coeffs(&f),
        Some(n) => {
            let grid = f.sample(&vec![n; f.dim()])?;
            let mut out = String::new();
            for (idx, v) in grid.values().iter().enumerate() {
                let x: Vec<String> = grid.node(idx).iter().map(|c| format!("{c:.12}")).collect();
                out.push_str(&format!("{} {:e} {:e}\n", x.join(" "), v.re, v.im));
            }
            out
        }
    };
    emit(&text, args.output.as_ref())
}

fn decompose(args: &DecomposeArgs) -> Result<()> {
    let f: TrigPoly64 = read_coeffs(&std::fs::read_to_string(&args.input)?)?;
    for (s, norm) in block_norms(&f, args.p, args.oversample)? {
        let levels: Vec<String> = s.levels().iter().map(u32::to_string).collect();
        let weighted = 2f64.powf(args.r * s.l1() as f64) * norm;
        println!("{} {norm:e} {weighted:e}", levels.join(" "));
    }
    println!("seminorm {:e}", h_seminorm_with(&f, args.r, args.p, args.oversample)?);
    Ok(())
}

fn print_report(report: &ErrorReport<f64>) {
    let k = report.truncation.map_or("none".to_string(), |k| k.to_string());
    println!(
        "value {:e}\ntail {:e}\nupper {:e}\ntruncation {k}\nexactness {}",
        report.value,
        report.tail,
        report.upper(),
        report.exactness
    );
}

fn cubature(args: &CubatureArgs) -> Result<()> {
    let rule = args.rule.build()?;
    let p = if args.family == ClassFamily::FourierHull { f64::INFINITY } else { 2.0 };
    let spec = ClassSpec::new(args.family, args.r, p, args.radius, 0.0)?;
    println!("nodes {}\ndim {}", rule.len(), rule.dim());
    if let Some(l) = rule.lattice() {
        println!("lattice {} {:?}", l.modulus(), l.generator());
    }
    let report = match args.truncation {
        Some(k) => worst_case_error(&rule, &spec, k)?,
        None => worst_case_error_closed_form(&rule, &spec)?,
    };
    print_report(&report);
    if args.points {
        for x in rule.points().iter() {
            let c: Vec<String> = x.iter().map(|v| format!("{v:.15}")).collect();
            println!("{}", c.join(" "));
        }
    }
    Ok(())
}

fn cbc(args: &CbcArgs) -> Result<()> {
    let res = cbc_search::<f64>(args.m, args.dim, args.r)?;
    let g: Vec<String> = res.generator.iter().map(i64::to_string).collect();
    println!("generator {}\ndual_sum {:e}", g.join(","), res.dual_sum);
    Ok(())
}

fn discretize(args: &DiscretizeArgs) -> Result<()> {
    let rule = args.rule.build()?;
    let spec = ClassSpec::hoelder(args.r, args.p, 1.0)?;
    let cap = args.block_cap.unwrap_or_else(|| default_block_cap(rule.dim()));
    let mut report = estimate_er_weighted(&rule, &spec, args.samples, args.rule.seed, cap)?;
    if let Some(a) = args.transfer_a {
        // unit H^r_2 balls sit inside the Fourier hull of radius 2^d
        let hull = ClassSpec::fourier_hull(args.r, 2f64.powi(rule.dim() as i32))?;
        let kappa = worst_case_error_closed_form(&rule, &hull)?;
        report = report.with_transfer(&kappa, a)?;
    }
    println!("nodes {}\nsamples {}\nblock_cap {cap}", report.points, args.samples);
    println!("supremum {:e}\nargmax {:?}", report.supremum, report.argmax);
    if let Some(w) = report.witness {
        println!(
            "witness_lower {:e}\nintegration_error {:e}\nidentity_residual {:e}",
            w.lower_bound, w.integration_error, w.residual
        );
    }
    if let Some(u) = report.transfer_upper {
        println!("transfer_upper {u:e}");
    }
    if let Some(label) = report.label {
        println!("note {label}");
    }
    Ok(())
}

fn fit(args: &FitArgs) -> Result<()> {
    let mode = match args.b.as_str() {
        "free" => BMode::Free,
        v => BMode::Frozen(v.parse().map_err(|_| Error::Config {
            key: "b".into(),
            reason: format!("expected `free` or a number, got `{v}`"),
        })?),
    };
    let rows: Vec<_> = read_csv(&args.input)?
        .into_iter()
        .filter(|r| args.rule.as_ref().is_none_or(|x| &r.rule == x))
        .filter(|r| args.metric.as_ref().is_none_or(|x| &r.metric == x))
        .collect();
    println!("{}", fit_rows(&rows, mode)?);
    Ok(())
}

fn run(args: &RunArgs) -> Result<()> {
    let cfg = ExperimentConfig::from_file(&args.config)?;
    let out = run_experiment(&cfg)?;
    println!("rows {}", out.rows.len());
    println!("csv {}", out.csv_path.display());
    println!("plot {}", out.svg_path.display());
    match &out.fit {
        Some(f) => println!("fit {f}"),
        None => println!("fit skipped (fewer than 4 usable points)"),
    }
    if let Some(label) = out.label {
        println!("note {label}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kernel(a) => kernel(a),
        Command::Decompose(a) => decompose(a),
        Command::Cubature(a) => cubature(a),
        Command::Cbc(a) => cbc(a),
        Command::Discretize(a) => discretize(a),
        Command::Fit(a) => fit(a),
        Command::Run(a) => run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
