mod config;

use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use modelgb::analytics::{predict, DEFAULT_TOL};
use modelgb::backtrack::solve_all;
use modelgb::generator::sample_instance;
use modelgb::harness::{csv_string, emit_csv, emit_plotdata, run_sweep, Measures};
use modelgb::uc::{run_uc, uc_success_rate, UcOutcome};
use modelgb::verify::run_verification;
use modelgb::{Instance, Params, SeedSpec, ValidParams};
use serde_json::json;

use config::PartialConfig;

#[derive(Parser)]
#[command(
    version,
    about = "Model GB random CSP instances, search-tree statistics and predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ModelArgs {
    /// Number of variables
    #[arg(long)]
    n: usize,
    /// Domain size
    #[arg(long)]
    d: u32,
    /// Constraint arity
    #[arg(long)]
    k: u32,
    /// Number of constraints
    #[arg(long)]
    t: u64,
    /// Incompatible tuples per constraint
    #[arg(long)]
    q: u64,
}

impl ModelArgs {
    fn validate(self) -> Result<ValidParams> {
        Ok(Params::new(self.n, self.d, self.k, self.t, self.q).validate()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample one instance and write it as JSON
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial index selecting the stream under the seed
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all solutions of an instance and report node counts
    Solve {
        /// Instance JSON file, `-` for stdin
        #[arg(long = "in")]
        input: PathBuf,
        /// Include every solution in the output
        #[arg(long)]
        collect: bool,
        /// Include the per-level node counts
        #[arg(long)]
        profile: bool,
    },
    /// Run the unit-constraint heuristic once on an instance
    Uc {
        /// Instance JSON file, `-` for stdin
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Estimate the unit-constraint success rate over sampled instances
    Ucrate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the analytic predictions for one parameter set
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        /// Root-finder tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Print JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo sweep over a grid of constraint counts
    Sweep(SweepArgs),
    /// Run the self-check suite against the oracles
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples for each Monte Carlo check
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with the sweep settings; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    /// Constraint counts, comma separated
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<u64>>,
    /// Densities, comma separated, each rounded to t = round(r n)
    #[arg(long, value_delimiter = ',')]
    r_grid: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot-data output file
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Measures to record, e.g. `nodes,sat,uc`
    #[arg(long)]
    measure: Option<String>,
}

fn read_instance(path: &Path) -> Result<Instance> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(Instance::from_json(&text)?)
    } else {
        Ok(Instance::read(path)?)
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(model: ModelArgs, seed: u64, trial: u64, out: Option<PathBuf>) -> Result<()> {
    let inst = sample_instance(&model.validate()?, SeedSpec::new(seed, trial));
    match out {
        Some(path) => inst.write(&path)?,
        None => print!("{}", inst.to_json()),
    }
    Ok(())
}

fn solve(input: &Path, collect: bool, profile: bool) -> Result<()> {
    let inst = read_instance(input)?;
    let stats = solve_all(&inst, collect)?;
    let mut report = json!({
        "n": inst.n(),
        "d": inst.d(),
        "t": inst.constraints().len(),
        "nodes": stats.nodes,
        "solution_count": stats.solution_count,
        "satisfiable": stats.is_satisfiable(),
    });
    if profile {
        report["level_counts"] = json!(stats.level_counts);
    }
    if let Some(solutions) = stats.solutions {
        report["solutions"] = json!(solutions);
    }
    print_json(&report)
}

fn uc(input: &Path, seed: u64, trial: u64) -> Result<()> {
    let inst = read_instance(input)?;
    let report = match run_uc(&inst, SeedSpec::new(seed, trial))? {
        UcOutcome::SolutionFound(values) => json!({"outcome": "solution", "assignment": values}),
        UcOutcome::Unknown => json!({"outcome": "unknown"}),
    };
    print_json(&report)
}

fn ucrate(model: ModelArgs, trials: u64, seed: u64) -> Result<()> {
    let params = model.validate()?;
    let rate = uc_success_rate(&params, trials, seed)?;
    let se = (rate * (1.0 - rate) / trials as f64).sqrt();
    println!(
        "r = {:.6}  trials = {trials}  uc_success = {rate:.6} +- {se:.6}",
        params.r()
    );
    Ok(())
}

fn predict_cmd(model: ModelArgs, tol: f64, as_json: bool) -> Result<()> {
    let params = model.validate()?;
    let pr = predict::<f64>(&params, tol)?;
    if as_json {
        return print_json(&serde_json::to_value(pr)?);
    }
    let log10 = std::f64::consts::LN_10;
    println!("regime          {:?}", pr.regime);
    println!("r               {:.10}", pr.r);
    println!("r0              {:.10}", pr.r0);
    println!("r_cr            {:.10}", pr.r_cr);
    println!("uc_bound        {:.10}", pr.uc_bound);
    println!("zeta            {:.10}", pr.zeta);
    println!("F(r)            {:.10}", pr.big_f);
    println!("log_prefactor   {:.10}", pr.log_prefactor);
    println!("{:<16}{:>22}{:>22}", "", "ln", "log10");
    let rows = [
        ("T exact", Some(pr.log_t_exact)),
        ("T asymptotic", Some(pr.log_t_asym)),
        ("T critical form", pr.log_t_asym_critical_form),
        ("E[solutions]", Some(pr.log_en)),
    ];
    for (name, value) in rows {
        if let Some(v) = value {
            println!("{name:<16}{v:>22.10}{:>22.10}", v / log10);
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => PartialConfig::read(path)?,
        None => PartialConfig::default(),
    };
    let measures = args.measure.as_deref().map(Measures::parse).transpose()?;
    let flags = PartialConfig {
        n: args.n,
        d: args.d,
        k: args.k,
        q: args.q,
        t_grid: args.t_grid,
        r_grid: args.r_grid,
        trials: args.trials,
        master_seed: args.seed,
        measures,
        out: args.out,
    };
    let cfg = file.merge(flags).finish()?;
    let report = run_sweep(&cfg)?;
    for (t, e) in &report.failures {
        eprintln!("skipped t={t}: {e}");
    }
    if report.rows.is_empty() {
        anyhow::bail!("no grid point could be run");
    }
    match &cfg.out {
        Some(path) => emit_csv(&report.rows, path)?,
        None => print!("{}", csv_string(&report.rows)?),
    }
    if let Some(path) = &args.plot {
        emit_plotdata(&report.rows, path)?;
    }
    Ok(())
}

fn use_color() -> bool {
    std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty())
}

fn verify(seed: u64, samples: u64) -> Result<bool> {
    let color = use_color();
    let tag = |passed: bool| match (passed, color) {
        (true, true) => "\x1b[32mPASS\x1b[0m",
        (false, true) => "\x1b[31mFAIL\x1b[0m",
        (true, false) => "PASS",
        (false, false) => "FAIL",
    };
    let checks = run_verification(seed, samples)?;
    for c in &checks {
        println!("{} {}: {}", tag(c.passed), c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            model,
            seed,
            trial,
            out,
        } => generate(model, seed, trial, out)?,
        Command::Solve {
            input,
            collect,
            profile,
        } => solve(&input, collect, profile)?,
        Command::Uc { input, seed, trial } => uc(&input, seed, trial)?,
        Command::Ucrate {
            model,
            trials,
            seed,
        } => ucrate(model, trials, seed)?,
        Command::Predict { model, tol, json } => predict_cmd(model, tol, json)?,
        Command::Sweep(args) => sweep(args)?,
        Command::Verify { seed, samples } => return verify(seed, samples),
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
