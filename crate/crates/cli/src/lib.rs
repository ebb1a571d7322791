//! Command implementations behind the `sesq` binary.
//!
//! Exit codes: 0 yes/accepted, 1 no/rejected, 2 usage or parse error,
//! 3 reduction infeasible, 4 resource limit.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use sesq_core::files::{
    load_classical, load_instance, parse_split_certificate, parse_subset_certificate, read_limited,
    to_json_pretty, Bundle, ClassicalFile, ClassicalKind, QuantumInstance,
};
use sesq_core::reductions::SourceKind;
use sesq_core::solvers::DEFAULT_LIMIT_N;
use sesq_core::{
    lift_to_real, normalize, reduce_to_ses_entropy, reduce_to_ses_magnetization, reduce_to_sessp, solve_ses,
    solve_sessp, verify_ses, verify_sessp, Certificate, Decimal, Error, ReductionMap, SolveOptions, Strategy,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::WindowTooNarrow(_) | Error::TargetExceedsSetSize(_) => 3,
                Error::InstanceTooLarge { .. }
                | Error::TableTooLarge { .. }
                | Error::FileTooLarge { .. }
                | Error::BlockCapExceeded { .. } => 4,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sesq", version, about = "Generate, reduce, solve and verify SES/SESSP instances")]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random classical instance.
    Gen(GenArgs),
    /// Compile a classical instance into a quantum instance bundle.
    Reduce(ReduceArgs),
    /// Decide an instance; exit 0 on yes, 1 on no.
    Solve(SolveArgs),
    /// Check a certificate; exit 0 when accepted, 1 when rejected.
    Verify(VerifyArgs),
    /// Print the structure of an instance.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    SubsetSum,
    Partition,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long = "max", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_value: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceTarget {
    Ses,
    Sessp,
    SesEntropy,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long)]
    pub target: ReduceTarget,
    /// Window half-width used when lifting integer SUBSET SUM.
    #[arg(long, default_value = "0.25")]
    pub epsilon: Decimal,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub parallel: u32,
    /// Report the lexicographically smallest witness and no timings.
    #[arg(long)]
    pub deterministic: bool,
    /// Largest qubit count for exhaustive search.
    #[arg(long, default_value_t = DEFAULT_LIMIT_N)]
    pub limit_n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Certificate file, bare or as written by `solve`.
    #[arg(short, long)]
    pub certificate: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(short, long)]
    pub input: PathBuf,
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| 0),
        Command::Reduce(a) => cmd_reduce(a, cli.json).map(|_| 0),
        Command::Solve(a) => cmd_solve(a, cli.json).map(|yes| if yes { 0 } else { 1 }),
        Command::Verify(a) => cmd_verify(a, cli.json).map(|ok| if ok { 0 } else { 1 }),
        Command::Inspect(a) => cmd_inspect(a, cli.json).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let sizes: Vec<u64> = (0..args.n).map(|_| rng.random_range(1..=args.max_value)).collect();
    let file = match args.kind {
        GenKind::SubsetSum => {
            let total: u64 = sizes.iter().sum();
            let target = rng.random_range(1..=total);
            ClassicalFile::from_subset_sum(&sesq_core::SubsetSumInstance::new(sizes, target)?)
        }
        GenKind::Partition => ClassicalFile::from_partition(&sesq_core::PartitionInstance::new(sizes)?),
    };
    emit(args.output.as_deref(), &to_json_pretty(&file))
}

pub fn cmd_reduce(args: &ReduceArgs, json: bool) -> CliResult<()> {
    let classical = load_classical(&args.input)?;
    let (instance, map) = match (args.target, classical.problem) {
        (ReduceTarget::Sessp, ClassicalKind::Partition) => {
            let (inst, map) = reduce_to_sessp(&classical.to_partition()?)?;
            (QuantumInstance::Sessp(inst), map)
        }
        (ReduceTarget::Sessp, other) => {
            return Err(CliError::Usage(format!("target sessp needs a partition instance, got {other:?}")))
        }
        (target, kind) => {
            let (real, source) = match kind {
                ClassicalKind::SubsetSum => {
                    (lift_to_real(&classical.to_subset_sum()?, args.epsilon.clone())?, SourceKind::SubsetSum)
                }
                ClassicalKind::RealSubsetSum => (classical.to_real()?, SourceKind::RealSubsetSum),
                ClassicalKind::Partition => {
                    return Err(CliError::Usage("partition instances reduce to sessp only".into()))
                }
            };
            let norm = normalize(&real)?;
            let (inst, map) = match target {
                ReduceTarget::Ses => reduce_to_ses_magnetization(&norm)?,
                _ => reduce_to_ses_entropy(&norm)?,
            };
            let map = map.with_source(source).with_source_sizes(real.sizes().to_vec());
            (QuantumInstance::Ses(inst), map)
        }
    };
    let report = json!({
        "n": instance.state().n(),
        "chi": instance.state().max_bipartite_rank(),
        "weight": instance.weight().name(),
        "items": map.items,
    });
    let bundle = Bundle { instance: instance.to_file(), map };
    match &args.output {
        Some(path) => {
            emit(Some(path), &to_json_pretty(&bundle))?;
            if json {
                print!("{}", to_json_pretty(&report));
            } else {
                println!("n = {}  chi = {}  weight = {}", report["n"], report["chi"], instance.weight().name());
            }
        }
        None => emit(None, &to_json_pretty(&bundle))?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ClassicalWitness {
    items: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<Decimal>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum: Option<Decimal>,
}

#[derive(Debug, Serialize)]
struct ResultFile {
    problem: &'static str,
    decision: bool,
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical: Option<ClassicalWitness>,
    strategy: Strategy,
    subsets_examined: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

fn back_map(map: &ReductionMap, cert: &Certificate) -> ClassicalWitness {
    let qubits = match cert {
        Certificate::Subset(c) => c.sites(),
        Certificate::Split(c) => c.side_a(),
    };
    let items = map.back(qubits);
    let sizes = map.source_sizes.as_ref().map(|all| items.iter().map(|&i| all[i].clone()).collect::<Vec<_>>());
    let sum = sizes.as_ref().map(|s| s.iter().sum());
    ClassicalWitness { items, sizes, sum }
}

/// Returns the decision.
pub fn cmd_solve(args: &SolveArgs, json: bool) -> CliResult<bool> {
    let (instance, map) = load_instance(&args.input)?;
    let opts = SolveOptions {
        strategy: args.strategy,
        workers: args.parallel as usize,
        deterministic: args.deterministic,
        limit_n: args.limit_n,
    };
    let (problem, result) = match &instance {
        QuantumInstance::Ses(i) => ("ses", solve_ses(i, &opts)?),
        QuantumInstance::Sessp(i) => ("sessp", solve_sessp(i, &opts)?),
    };
    let classical = match (&map, &result.certificate) {
        (Some(m), Some(c)) => Some(back_map(m, c)),
        _ => None,
    };
    let file = ResultFile {
        problem,
        decision: result.decision,
        certificate: result.certificate.clone(),
        classical,
        strategy: result.strategy,
        subsets_examined: result.stats.subsets_examined,
        wall_time_ms: (!args.deterministic).then_some(result.stats.wall_time.as_secs_f64() * 1e3),
    };
    let text = to_json_pretty(&file);
    match &args.output {
        Some(path) => {
            emit(Some(path), &text)?;
            if json {
                print!("{text}");
            } else {
                println!("{}", if result.decision { "yes" } else { "no" });
            }
        }
        None => emit(None, &text)?,
    }
    Ok(result.decision)
}

/// Returns whether the certificate is accepted.
pub fn cmd_verify(args: &VerifyArgs, json: bool) -> CliResult<bool> {
    let (instance, _) = load_instance(&args.input)?;
    let text = read_limited(&args.certificate)?;
    let accepted = match &instance {
        QuantumInstance::Ses(i) => verify_ses(i, &parse_subset_certificate(&text)?)?,
        QuantumInstance::Sessp(i) => verify_sessp(i, &parse_split_certificate(&text)?)?,
    };
    if json {
        print!("{}", to_json_pretty(&json!({ "accepted": accepted })));
    } else {
        println!("{}", if accepted { "accepted" } else { "rejected" });
    }
    Ok(accepted)
}

pub fn cmd_inspect(args: &InspectArgs, json: bool) -> CliResult<()> {
    let (instance, map) = load_instance(&args.input)?;
    let state = instance.state();
    let (problem, target, epsilon) = match &instance {
        QuantumInstance::Ses(i) => ("ses", Some(i.target().clone()), i.epsilon().clone()),
        QuantumInstance::Sessp(i) => ("sessp", None, i.epsilon().clone()),
    };
    let norm = state.norm_squared();
    let report = json!({
        "problem": problem,
        "n": state.n(),
        "chi": state.max_bipartite_rank(),
        "cut_ranks": state.cut_ranks(),
        "norm_squared": norm,
        "normalized": (norm - 1.0).abs() <= 1e-10,
        "weight": instance.weight(),
        "B": target,
        "epsilon": epsilon,
        "map": map,
    });
    if json {
        print!("{}", to_json_pretty(&report));
        return Ok(());
    }
    println!("problem     {problem}");
    println!("qubits      {}", state.n());
    println!("chi         {}", state.max_bipartite_rank());
    let ranks: Vec<String> = state.cut_ranks().iter().map(usize::to_string).collect();
    println!("cut ranks   {}", ranks.join(" "));
    println!("norm^2      {norm:.12}");
    println!("weight      {}", instance.weight().name());
    if let Some(b) = target {
        println!("B           {b}");
    }
    println!("epsilon     {epsilon}");
    if let Some(m) = map {
        println!("items       {}", m.items);
    }
    Ok(())
}
