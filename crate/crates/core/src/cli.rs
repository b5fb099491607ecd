//! Command-line front end. Every command writes one JSON document, except
//! `product`, which writes the product graph in DIMACS format.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chromatic::{chromatic_number, Budget};
use crate::error::{Error, Result};
use crate::exponential::ExponentialContext;
use crate::fractional::{fractional_chromatic_number, Rational};
use crate::graph::io::{parse_graph, serialize_graph, Format};
use crate::graph::{Graph, Guard};
use crate::products::{strong_product_kq, tensor_product};
use crate::verifier::{build_clique_m, build_nu, verify_argument, ClaimReport, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hedetniemi",
    version,
    about = "Certify colorings of tensor products and exponential graphs"
)]
pub struct Cli {
    /// Worker threads for parallel materialization (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex and edge counts, girth, χ and χ_f of a graph.
    Invariants(InvariantsArgs),
    /// Tensor product of two graphs, or the strong product of a graph with K_q.
    Product(ProductArgs),
    /// Run every step of the counterexample argument on a graph.
    Verify(VerifyArgs),
    /// Build the clique M or the mapping ν around a vertex.
    Construct(ConstructArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input graph; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "dimacs")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Wall-clock limit for each exact coloring search.
    #[arg(long)]
    pub budget_ms: Option<u64>,
    /// Search-node limit for each exact coloring search.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Largest number of vertices any materialized graph may have.
    #[arg(long)]
    pub guard: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            nodes: self.node_budget,
            time: self.budget_ms.map(Duration::from_millis),
        }
    }

    fn guard(&self) -> Guard {
        self.guard
            .map_or_else(Guard::default, Guard::with_max_vertices)
    }
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub limits: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    Tensor,
    StrongKq,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, value_enum)]
    pub kind: ProductKind,
    #[command(flatten)]
    pub input: InputArgs,
    /// Second factor, for tensor products.
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub guard: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub q: usize,
    /// Palette size; defaults to ⌈3.1 q⌉ or ⌈threshold · q⌉.
    #[arg(long)]
    pub c: Option<u32>,
    /// Fractional threshold as `a/b`.
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[command(flatten)]
    pub limits: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    CliqueM,
    Nu,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub what: Construction,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub c: u32,
    /// Centre vertex, 1-based.
    #[arg(long)]
    pub v: usize,
    #[arg(long)]
    pub tau: Option<u32>,
    #[arg(long)]
    pub sigma: Option<u32>,
    #[arg(long)]
    pub guard: Option<u64>,
}

/// The outcome of a command: bytes to emit and the process exit code.
#[derive(Debug)]
pub struct Output {
    pub body: Vec<u8>,
    pub code: i32,
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Error::input(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| Error::input(format!("reading {}: {e}", path.display())))
    }
}

fn parse_file(path: &PathBuf, format: Format) -> Result<Graph> {
    parse_graph(&read_input(path)?, format).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn load(input: &InputArgs) -> Result<Graph> {
    parse_file(&input.input, input.format)
}

fn json_output(value: &Value, code: i32) -> Output {
    let mut body = serde_json::to_vec_pretty(value).expect("json serializes");
    body.push(b'\n');
    Output { body, code }
}

fn vertex_arg(g: &Graph, v: usize) -> Result<usize> {
    if v == 0 || v > g.n() {
        return Err(Error::input(format!("--v must lie in 1..={}", g.n())));
    }
    Ok(v - 1)
}

fn invariants(args: &InvariantsArgs) -> Result<Output> {
    let g = load(&args.input)?;
    let girth = match g.girth() {
        Ok(l) => json!(l),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let chi = match chromatic_number(&g, args.limits.budget()) {
        Ok(cert) => json!(cert.value),
        Err(Error::Timeout { lower, upper }) => {
            json!({ "timeout": true, "lower": lower, "upper": upper })
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    let chi_f = match fractional_chromatic_number(&g) {
        Ok(cert) => json!(cert.value.to_string()),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json_output(
        &json!({
            "schema": crate::verifier::SCHEMA_VERSION,
            "n": g.n(),
            "m": g.edge_count(),
            "girth": girth,
            "chi": chi,
            "chi_f": chi_f,
        }),
        EXIT_OK,
    ))
}

fn product(args: &ProductArgs) -> Result<Output> {
    let g = load(&args.input)?;
    let guard = args
        .guard
        .map_or_else(Guard::default, Guard::with_max_vertices);
    let p = match args.kind {
        ProductKind::Tensor => {
            let right = args
                .right
                .as_ref()
                .ok_or_else(|| Error::input("tensor products need --right"))?;
            let h = parse_file(right, args.input.format)?;
            tensor_product(&g, &h, &guard)?
        }
        ProductKind::StrongKq => {
            let q = args
                .q
                .ok_or_else(|| Error::input("strong products need --q"))?;
            strong_product_kq(&g, q, &guard)?
        }
    };
    Ok(Output {
        body: serialize_graph(&p, Format::Dimacs)?,
        code: EXIT_OK,
    })
}

pub fn verify_config(args: &VerifyArgs) -> Result<VerifyConfig> {
    if args.q == 0 {
        return Err(Error::input("--q must be at least 1"));
    }
    let mut config = VerifyConfig::new(args.q);
    config.c = args.c;
    if let Some(t) = &args.threshold {
        config.threshold = Rational::parse(t)
            .ok_or_else(|| Error::input(format!("--threshold: cannot parse {t:?}")))?;
    }
    config.seed = args.seed;
    config.samples = args.samples;
    if args.limits.budget_ms.is_some() || args.limits.node_budget.is_some() {
        config.budget = args.limits.budget();
    }
    config.guard = args.limits.guard();
    if config.palette() == 0 {
        return Err(Error::input("palette size must be at least 1"));
    }
    Ok(config)
}

/// Exit code for a finished report: nonzero only when a claim step fails.
pub fn report_exit_code(report: &ClaimReport) -> i32 {
    if report.claim_failures().is_empty() {
        EXIT_OK
    } else {
        EXIT_CLAIM_FAILED
    }
}

fn verify(args: &VerifyArgs) -> Result<Output> {
    let g = load(&args.input)?;
    let config = verify_config(args)?;
    let report = verify_argument(&g, &config);
    let mut body = report.to_json().into_bytes();
    body.push(b'\n');
    Ok(Output {
        body,
        code: report_exit_code(&report),
    })
}

fn construct(args: &ConstructArgs) -> Result<Output> {
    let g = load(&args.input)?;
    let guard = args
        .guard
        .map_or_else(Guard::default, Guard::with_max_vertices);
    let v = vertex_arg(&g, args.v)?;
    match args.what {
        Construction::CliqueM => {
            let m = build_clique_m(&g, args.q, args.c, v, &guard)?;
            let code = if m.is_clique() {
                EXIT_OK
            } else {
                EXIT_CLAIM_FAILED
            };
            Ok(json_output(
                &json!({
                    "schema": crate::verifier::SCHEMA_VERSION,
                    "v": args.v,
                    "q": args.q,
                    "c": args.c,
                    "girth": m.girth,
                    "warnings": m.warnings,
                    "mappings": m.mappings.iter().map(|(t, mu)| json!({ "t": t, "values": mu })).collect::<Vec<_>>(),
                    "pairs_checked": m.pairs_checked,
                    "clique": m.is_clique(),
                    "violation": m.violation.as_ref().map(|x| json!({
                        "s": x.s,
                        "t": x.t,
                        "reason": x.reason,
                        "edge": x.edge.map(|(a, b)| [a.to_string(), b.to_string()]),
                    })),
                }),
                code,
            ))
        }
        Construction::Nu => {
            let tau = args.tau.ok_or_else(|| Error::input("ν needs --tau"))?;
            let sigma = args.sigma.ok_or_else(|| Error::input("ν needs --sigma"))?;
            let nu = build_nu(&g, args.q, args.c, v, tau, sigma, &guard)?;
            let code = if nu.adjacent_to_mu() {
                EXIT_OK
            } else {
                EXIT_CLAIM_FAILED
            };
            let ctx = ExponentialContext::new(
                crate::products::strong_product_kq(&g, args.q, &guard)?,
                args.c,
                guard,
            )?;
            Ok(json_output(
                &json!({
                    "schema": crate::verifier::SCHEMA_VERSION,
                    "v": args.v,
                    "q": args.q,
                    "c": args.c,
                    "tau": tau,
                    "sigma": sigma,
                    "values": nu.mapping,
                    "image": nu.mapping.image(),
                    "index": ctx.encode(&nu.mapping).ok(),
                    "adjacent_to_mu_tau": nu.adjacent_to_mu(),
                    "reason": nu.nonadjacent,
                    "edge": nu.edge.map(|(a, b)| [a.to_string(), b.to_string()]),
                }),
                code,
            ))
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Product(a) => product(a),
        Command::Verify(a) => verify(a),
        Command::Construct(a) => construct(a),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource(_) | Error::Timeout { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

/// Entry point behind the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = (|| {
        if let Some(threads) = cli.threads {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::input(format!("thread pool: {e}")))?;
            pool.install(|| execute(&cli))
        } else {
            execute(&cli)
        }
    })();
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.body).map_err(|e| e.to_string()),
                None => io::stdout().write_all(&out.body).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("{}", json!({ "error": "input", "detail": e }));
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            let body = json!({ "error": e.kind(), "detail": e.to_string() });
            println!("{body}");
            exit_code(&e)
        }
    }
}
