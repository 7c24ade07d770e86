//! Command-line front end for the root-counting engine.
//!
//! Exit codes: 0 = exact count, 1 = usage or input error, 2 = the Las Vegas
//! isolation failed somewhere and the reported count is a lower bound.

mod expr;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pkroots::{
    brute_force_count, build_tree, count_integer_roots, count_roots, tree_stats, CountConfig,
    CountResult, CountStats, PolyMod, PrimePowerRing, DEFAULT_BRUTE_FORCE_GUARD,
};
use report::{render_dot, tree_to_json, Report, TreeSummary};

#[derive(Parser)]
#[command(
    name = "pkroots",
    version,
    about = "Count the roots of an integer polynomial in Z/(p^k)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count roots in Z/(p^k)
    Count(CountArgs),
    /// Count roots and render the recursion tree (DOT or JSON)
    Tree(TreeArgs),
    /// Brute-force count by enumerating every residue
    Oracle(OracleArgs),
    /// Time the engine on products of random cubics
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PolyInput {
    /// Polynomial expression, e.g. "x^10 - 10*x + 738" or "(x-1)^2(x-2)^3"
    #[arg(long, value_name = "EXPR")]
    poly: Option<String>,
    /// Comma-separated integer coefficients, constant term first
    #[arg(long, value_name = "CSV")]
    coeffs: Option<String>,
}

#[derive(Args)]
struct RingArgs {
    /// Prime base of the modulus
    #[arg(long)]
    p: u64,
    /// Exponent: the modulus is p^k
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct SeedArgs {
    /// Seed for the randomized root isolation (runs are reproducible)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use an OS-entropy seed instead of --seed
    #[arg(long)]
    random_seed: bool,
}

impl SeedArgs {
    fn resolve(&self) -> u64 {
        if self.random_seed {
            rand::random()
        } else {
            self.seed
        }
    }
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Stream the count without materializing the tree
    #[arg(long)]
    stream: bool,
    /// Override the per-split attempt budget
    #[arg(long, value_name = "N")]
    split_budget: Option<u32>,
    /// Emit the machine-readable JSON record
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Write the tree here (.dot for Graphviz, .json for a JSON rendering);
    /// without this flag the DOT goes to standard output
    #[arg(long, value_name = "PATH")]
    tree_out: Option<PathBuf>,
    /// Override the per-split attempt budget
    #[arg(long, value_name = "N")]
    split_budget: Option<u32>,
    /// Emit the machine-readable JSON record
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: PolyInput,
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Largest modulus the oracle will enumerate
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_GUARD, value_name = "N")]
    max_brute: u64,
    /// Emit the machine-readable JSON record
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Number of random instances
    #[arg(long, default_value_t = 5)]
    instances: u64,
    /// Number of random cubics multiplied per instance
    #[arg(long, default_value_t = 5)]
    cubics: u32,
    /// Override the per-split attempt budget
    #[arg(long, value_name = "N")]
    split_budget: Option<u32>,
    /// Emit JSON records (one per line) instead of CSV
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version print to stdout and exit 0; real usage
            // errors exit 1 (2 is reserved for announced under-counts).
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Count(args) => run_count(args),
        Command::Tree(args) => run_tree(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn parse_input(input: &PolyInput) -> Result<Vec<BigInt>> {
    if let Some(text) = &input.poly {
        Ok(expr::expand_poly(text)?)
    } else if let Some(csv) = &input.coeffs {
        let coeffs: Vec<BigInt> = csv
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .with_context(|| format!("invalid coefficient {s:?}"))
            })
            .collect::<Result<_>>()?;
        if coeffs.is_empty() {
            bail!("--coeffs needs at least one coefficient");
        }
        Ok(coeffs)
    } else {
        bail!("one of --poly or --coeffs is required");
    }
}

fn build_poly(ring_args: &RingArgs, coeffs: &[BigInt]) -> Result<PolyMod> {
    let ring = PrimePowerRing::new(ring_args.p, ring_args.k)?;
    Ok(PolyMod::from_integer_coeffs(ring, coeffs)?)
}

fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.human());
    }
}

fn finish_status(result: &CountResult) -> ExitCode {
    if result.exact {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "warning: root isolation failed at {} tree node(s); the reported \
             count is a lower bound. Re-run with a different seed.",
            result.failures.len()
        );
        ExitCode::from(2)
    }
}

fn run_count(args: CountArgs) -> Result<ExitCode> {
    let coeffs = parse_input(&args.input)?;
    let f = build_poly(&args.ring, &coeffs)?;
    let seed = args.seed.resolve();
    let config = CountConfig {
        split_budget: args.split_budget,
    };

    let start = Instant::now();
    let (result, summary) = if args.stream {
        (count_roots(&f, seed, &config), None)
    } else {
        match build_tree(&f, seed, &config) {
            Ok((root, result)) => {
                let stats = tree_stats(&root);
                (
                    result,
                    Some(TreeSummary {
                        depth: stats.depth,
                        nodes: stats.nodes,
                    }),
                )
            }
            // A polynomial that vanishes mod p^k has no tree but a clear
            // count: every residue is a root.
            Err(pkroots::Error::TreeUndefined) => (count_roots(&f, seed, &config), None),
            Err(err) => return Err(err.into()),
        }
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = Report::new(
        args.ring.p,
        args.ring.k,
        f.formal_degree(),
        &result,
        summary,
        seed,
        elapsed_ms,
    );
    emit(&report, args.json);
    Ok(finish_status(&result))
}

fn run_tree(args: TreeArgs) -> Result<ExitCode> {
    let coeffs = parse_input(&args.input)?;
    let f = build_poly(&args.ring, &coeffs)?;
    let seed = args.seed.resolve();
    let config = CountConfig {
        split_budget: args.split_budget,
    };

    let start = Instant::now();
    let (root, result) =
        build_tree(&f, seed, &config).context("cannot build the recursion tree")?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let stats = tree_stats(&root);
    let report = Report::new(
        args.ring.p,
        args.ring.k,
        f.formal_degree(),
        &result,
        Some(TreeSummary {
            depth: stats.depth,
            nodes: stats.nodes,
        }),
        seed,
        elapsed_ms,
    );

    match &args.tree_out {
        Some(path) => {
            let rendered = if path.extension().is_some_and(|e| e == "json") {
                let mut s = serde_json::to_string_pretty(&tree_to_json(&root))?;
                s.push('\n');
                s
            } else {
                render_dot(&root, args.ring.p)
            };
            fs::write(path, rendered)
                .with_context(|| format!("cannot write {}", path.display()))?;
            emit(&report, args.json);
        }
        None => {
            // DOT owns stdout; the run record goes to stderr.
            print!("{}", render_dot(&root, args.ring.p));
            if args.json {
                eprintln!("{}", report.to_json());
            } else {
                eprint!("{}", report.human());
            }
        }
    }
    Ok(finish_status(&result))
}

fn run_oracle(args: OracleArgs) -> Result<ExitCode> {
    let coeffs = parse_input(&args.input)?;
    let f = build_poly(&args.ring, &coeffs)?;

    let start = Instant::now();
    let count = brute_force_count(&f, args.max_brute)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let result = CountResult {
        count,
        exact: true,
        failures: Vec::new(),
        stats: CountStats::default(),
    };
    let report = Report::new(
        args.ring.p,
        args.ring.k,
        f.formal_degree(),
        &result,
        None,
        args.seed.resolve(),
        elapsed_ms,
    );
    emit(&report, args.json);
    Ok(ExitCode::SUCCESS)
}

fn run_bench(args: BenchArgs) -> Result<ExitCode> {
    let ring = PrimePowerRing::new(args.ring.p, args.ring.k)?;
    let seed0 = args.seed.resolve();
    let config = CountConfig {
        split_budget: args.split_budget,
    };

    let mut clean = true;
    if !args.json {
        println!("instance,seed,degree,k,count_decimal,exact,recount_agree,elapsed_ms");
    }
    for i in 0..args.instances {
        let inst_seed = seed0.wrapping_add(i);
        let mut gen = ChaCha8Rng::seed_from_u64(inst_seed ^ 0x6e6_5bc);
        let mut coeffs = vec![BigInt::from(1)];
        for _ in 0..args.cubics {
            let cubic: Vec<BigInt> = (0..4)
                .map(|_| BigInt::from(gen.gen_biguint_below(ring.modulus())))
                .collect();
            coeffs = mul_integer_polys(&coeffs, &cubic);
        }

        let start = Instant::now();
        let result = count_integer_roots(&coeffs, args.ring.p, args.ring.k, inst_seed, &config)?;
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

        // Same instance under an independent seed: exact runs must agree.
        let reseed = inst_seed ^ 0x9e37_79b9_7f4a_7c15;
        let recount = count_integer_roots(&coeffs, args.ring.p, args.ring.k, reseed, &config)?;
        let agree = result.count == recount.count;

        if !result.exact {
            clean = false;
            eprintln!("warning: instance {i} under-counted");
        }
        if result.exact && recount.exact && !agree {
            clean = false;
            eprintln!("error: instance {i}: two exact runs disagree");
        }

        if args.json {
            let report = Report::new(
                args.ring.p,
                args.ring.k,
                coeffs.len() - 1,
                &result,
                None,
                inst_seed,
                elapsed_ms,
            );
            println!("{}", report.to_json());
        } else {
            println!(
                "{i},{inst_seed},{},{},{},{},{agree},{elapsed_ms:.3}",
                coeffs.len() - 1,
                args.ring.k,
                result.count,
                result.exact,
            );
        }
    }
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn mul_integer_polys(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
