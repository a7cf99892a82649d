use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use cayley_capacity::capacity::{DEFAULT_MATRIX_BUDGET, DEFAULT_MAX_N, DEFAULT_VERTEX_CAP};
use cayley_capacity::report::{GraphInfo, DEFAULT_NODE_BUDGET, SCHEMA};
use cayley_capacity::theta::DEFAULT_TOLERANCE;
use cayley_capacity::{
    alpha_exact_with, alpha_lin_exact, capacity_report, certify_code, hoffman_bound, lovasz_theta,
    rho_lin, rho_lin_exponent, run_separation, AlphaLinOptions, AlphaOptions, CapacityReport,
    CayleyGraph, Error, FieldCtx, FieldSpec, LinearCode, ReportOptions, Verdict,
};
use clap::{Args, Parser, Subcommand};

mod selftest;

/// Linear Shannon capacity of Cayley graphs over finite fields.
///
/// A graph is given by exactly one of --field/--set, --paley or
/// --interval, optionally followed by --complement. Exit codes: 0 success,
/// 1 usage or input error, 2 a solver cap or budget was hit (partial
/// output is still printed and written).
#[derive(Parser, Debug)]
#[command(name = "cayley-capacity", version, max_term_width = 100)]
struct Cli {
    #[command(flatten)]
    graph: GraphArgs,

    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, env = "CAYLEY_CAPACITY_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GraphArgs {
    /// Field: "p", "p^m" or "p^m/c_m,...,c_0" to pin the modulus.
    #[arg(long, global = true, value_name = "SPEC")]
    field: Option<String>,

    /// Connection set S as comma-separated canonical element indices.
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    set: Option<String>,

    /// Paley graph on F_q (q = 1 mod 4); accepts a field spec.
    #[arg(long, global = true, value_name = "Q")]
    paley: Option<String>,

    /// Interval separation graph on F_p (p prime, p = 1 mod 4).
    #[arg(long, global = true, value_name = "P")]
    interval: Option<u64>,

    /// Replace S by its complement F_q \ (S ∪ {0}).
    #[arg(long, global = true)]
    complement: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper bound rho_lin = q^(1 - |S|/(q-1)) on the linear Shannon capacity.
    Bound,
    /// Exact independence number alpha(G^k) with a witness.
    Alpha {
        #[arg(long, value_name = "K", default_value_t = 1)]
        power: usize,
        /// Largest q^k accepted.
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: u64,
        /// Stop branch and bound after this many nodes.
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Exact linear independence number alpha_lin(G^n) with a generator.
    AlphaLin {
        #[arg(long, value_name = "N")]
        power: usize,
        /// Candidate matrices examined before giving up.
        #[arg(long, default_value_t = DEFAULT_MATRIX_BUDGET)]
        budget: u64,
        /// Enumerate every matrix instead of rows in sorted order only.
        #[arg(long)]
        all_rows: bool,
    },
    /// Lovász theta via the character LP, with the Hoffman bound.
    Theta {
        /// Accuracy demanded of the re-verified solution.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Write b, its Fourier transform and residuals as JSON.
        #[arg(long, value_name = "PATH")]
        dump_certificate: Option<PathBuf>,
    },
    /// Replay the polynomial-method proof on a concrete linear code.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// The (n-m) x m matrix A, rows separated by ';', entries by ','.
        #[arg(long, value_name = "ROWS", allow_hyphen_values = true)]
        matrix: String,
        /// Print the certificate as JSON instead of the stage log.
        #[arg(long)]
        json: bool,
    },
    /// Aggregate bounds: rho_lin, theta, alpha(G^k), alpha_lin(G^n).
    Report {
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        #[arg(long, default_value_t = DEFAULT_MATRIX_BUDGET)]
        budget: u64,
    },
    /// Regenerate the CSV table from a JSON report.
    Csv {
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Gap between linear capacity and alpha for the interval family.
    Separation {
        p: u64,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Randomized consistency checks against brute-force oracles.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn cap(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VertexCapExceeded { .. }
            | Error::TermCapExceeded { .. }
            | Error::NonConvergence(_)
            | Error::ThetaVerification { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bound => bound(&build_graph(&cli.graph)?),
        Command::Alpha { power, vertex_cap, node_budget } => {
            alpha(&build_graph(&cli.graph)?, power, &AlphaOptions { vertex_cap, node_budget })
        }
        Command::AlphaLin { power, budget, all_rows } => alpha_lin(
            &build_graph(&cli.graph)?,
            power,
            &AlphaLinOptions { budget, sorted_rows: !all_rows },
        ),
        Command::Theta { tolerance, dump_certificate } => {
            theta(&build_graph(&cli.graph)?, tolerance, dump_certificate.as_deref())
        }
        Command::Certify { n, m, matrix, json } => certify(&build_graph(&cli.graph)?, n, m, &matrix, json),
        Command::Report { max_n, json, csv, vertex_cap, node_budget, budget } => {
            if max_n == 0 {
                return Err(Failure::usage("--max-n must be at least 1"));
            }
            let opts = ReportOptions {
                max_n,
                vertex_cap,
                node_budget: Some(node_budget),
                matrix_budget: budget,
                ..ReportOptions::default()
            };
            report(&build_graph(&cli.graph)?, &opts, json.as_deref(), csv.as_deref())
        }
        Command::Csv { input, out } => {
            no_graph(&cli.graph, "csv")?;
            let r = CapacityReport::from_json(&fs::read_to_string(input)?)?;
            emit(out.as_deref(), &r.to_csv()?)
        }
        Command::Separation { p, json } => {
            no_graph(&cli.graph, "separation")?;
            separation(p, json.as_deref())
        }
        Command::Selftest { seed, cases } => {
            no_graph(&cli.graph, "selftest")?;
            selftest::run(seed, cases).map_err(Failure::usage)
        }
    }
}

fn no_graph(g: &GraphArgs, cmd: &str) -> Outcome {
    if g.field.is_some() || g.set.is_some() || g.paley.is_some() || g.interval.is_some() || g.complement {
        return Err(Failure::usage(format!("`{cmd}` takes no graph specification")));
    }
    Ok(())
}

fn build_graph(args: &GraphArgs) -> std::result::Result<CayleyGraph, Failure> {
    let given = [args.field.is_some(), args.paley.is_some(), args.interval.is_some()];
    match given.iter().filter(|&&b| b).count() {
        0 => return Err(Failure::usage("missing graph: give --field/--set, --paley or --interval")),
        1 => {}
        _ => return Err(Failure::usage("conflicting graph specifications: give exactly one")),
    }
    if args.set.is_some() && args.field.is_none() {
        return Err(Failure::usage("--set requires --field"));
    }
    let g = if let Some(spec) = &args.field {
        let field = Arc::new(spec.parse::<FieldSpec>()?.build()?);
        let set = args
            .set
            .as_deref()
            .ok_or_else(|| Failure::usage("--field requires --set (use --set \"\" for the edgeless graph)"))?;
        let indices = parse_list(set, "--set")?;
        CayleyGraph::from_indices(field, &indices)?
    } else if let Some(spec) = &args.paley {
        CayleyGraph::paley(Arc::new(spec.parse::<FieldSpec>()?.build()?))?
    } else {
        CayleyGraph::interval(args.interval.expect("one spec is present"))?
    };
    Ok(if args.complement { g.complement() } else { g })
}

fn parse_list(text: &str, flag: &str) -> std::result::Result<Vec<u64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::usage(format!("{flag}: `{t}` is not a nonnegative integer"))))
        .collect()
}

fn parse_matrix(field: &FieldCtx, text: &str, n: usize, m: usize) -> std::result::Result<LinearCode, Failure> {
    if m == 0 || m > n {
        return Err(Failure::usage(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    let rows: Vec<Vec<_>> = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(';')
            .map(|row| {
                parse_list(row, "--matrix")?
                    .into_iter()
                    .map(|i| field.elem(i).map_err(Failure::from))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<_, _>>()?
    };
    Ok(LinearCode::from_rows(n, m, &rows)?)
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(g: &CayleyGraph) {
    let info = GraphInfo::of(g);
    println!("graph      {} over GF({}), q = {}, |S| = {}", info.label, info.field, info.q, info.s);
}

fn bound(g: &CayleyGraph) -> Outcome {
    header(g);
    let e = rho_lin_exponent(g);
    println!("rho_lin    {} = {}^({e})", rho_lin::<f64>(g), g.q());
    Ok(())
}

fn alpha(g: &CayleyGraph, k: usize, opts: &AlphaOptions) -> Outcome {
    if k == 0 {
        return Err(Failure::usage("--power must be at least 1"));
    }
    header(g);
    let a = alpha_exact_with(g, k, opts)?;
    let tag = if a.exhaustive { "exact" } else { "lower bound, node budget exhausted" };
    println!("alpha(G^{k}) {} ({tag}, {} nodes)", a.size, a.nodes);
    println!("witness    {:?}", a.witness_codes(g.q()));
    if a.exhaustive {
        Ok(())
    } else {
        Err(Failure::cap("branch and bound stopped on its node budget"))
    }
}

fn alpha_lin(g: &CayleyGraph, n: usize, opts: &AlphaLinOptions) -> Outcome {
    if n == 0 {
        return Err(Failure::usage("--power must be at least 1"));
    }
    header(g);
    let r = alpha_lin_exact(g, n, opts)?;
    let tag = if r.exhaustive { "exact" } else { "lower bound, budget exhausted" };
    println!("alpha_lin(G^{n}) {} = {}^{} ({tag}, {} candidates)", r.size(g.q()), g.q(), r.m, r.candidates);
    match &r.witness {
        Some(c) => println!("witness A  {:?}", c.rows_as_indices()),
        None => println!("witness    zero subspace"),
    }
    println!("rate       {} vs rho_lin exponent {}", r.rate(), rho_lin_exponent(g));
    if r.exhaustive {
        Ok(())
    } else {
        Err(Failure::cap("matrix enumeration stopped on its budget"))
    }
}

fn theta(g: &CayleyGraph, tolerance: f64, dump: Option<&Path>) -> Outcome {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Failure::usage("--tolerance must be positive"));
    }
    header(g);
    let t = lovasz_theta::<f64>(g, tolerance)?;
    println!("theta      {} (residual {:.3e}, {} pivots)", t.value, t.residual, t.iterations);
    match hoffman_bound::<f64>(g) {
        Ok(h) => println!("hoffman    {h}"),
        Err(_) => println!("hoffman    undefined for the edgeless graph"),
    }
    if let Some(path) = dump {
        let cert = serde_json::json!({
            "schema": SCHEMA,
            "graph": GraphInfo::of(g),
            "tolerance": tolerance,
            "theta": t,
        });
        let text = serde_json::to_string_pretty(&cert).map_err(|e| Failure::usage(e.to_string()))?;
        emit(Some(path), &(text + "\n"))?;
    }
    Ok(())
}

fn certify(g: &CayleyGraph, n: usize, m: usize, matrix: &str, json: bool) -> Outcome {
    let code = parse_matrix(g.field(), matrix, n, m)?;
    let cert = certify_code(g, &code)?;
    if json {
        let text = serde_json::to_string_pretty(&cert).map_err(|e| Failure::usage(e.to_string()))?;
        println!("{text}");
        return Ok(());
    }
    header(g);
    println!("code       n = {n}, m = {m}, A = {:?}", cert.matrix);
    for s in &cert.stages {
        let mark = if s.passed { "ok  " } else { "FAIL" };
        println!("[{mark}] stage {} {:?}: {}", s.index, s.stage, s.detail);
    }
    match &cert.verdict {
        Verdict::Pass => println!("verdict    PASS"),
        Verdict::Fail { index, reason, witness, .. } => {
            let w = witness.as_ref().map_or(String::new(), |w| format!(" (witness {w:?})"));
            println!("verdict    FAIL at stage {index}: {reason}{w}");
        }
    }
    Ok(())
}

fn report(g: &CayleyGraph, opts: &ReportOptions, json: Option<&Path>, csv: Option<&Path>) -> Outcome {
    let r = capacity_report(g, opts)?;
    header(g);
    println!("rho_lin    {} = {}^({})", r.rho_lin.value, r.graph.q, r.rho_lin.exponent);
    match &r.theta {
        Some(t) => println!("theta      {} (residual {:.3e})", t.value, t.residual),
        None => println!("theta      unavailable"),
    }
    for a in &r.alpha_by_power {
        let tag = if a.exhaustive { "" } else { " (budget hit, lower bound)" };
        println!("alpha      k = {}: {}{tag}  witness {:?}", a.k, a.size, a.witness);
    }
    for s in &r.alpha_skipped {
        println!("alpha      k = {}: skipped, {}", s.k, s.reason);
    }
    for a in &r.alpha_lin_by_power {
        let tag = if a.exhaustive { "" } else { " (budget hit, lower bound)" };
        let w = a.witness.as_ref().map_or("zero subspace".to_string(), |w| format!("A = {w:?}"));
        println!("alpha_lin  n = {}: {} = {}^{}, rate {}{tag}  {w}", a.n, a.size, r.graph.q, a.m, a.rate);
    }
    let lb = &r.lower_bound_theta_lin;
    println!("lower      Theta_lin >= {} = {}^({})", lb.value, r.graph.q, lb.exponent);
    for note in &r.notes {
        println!("note       {note}");
    }
    if let Some(p) = json {
        emit(Some(p), &(r.to_json()? + "\n"))?;
    }
    if let Some(p) = csv {
        emit(Some(p), &r.to_csv()?)?;
    }
    if r.complete() {
        Ok(())
    } else {
        Err(Failure::cap("a solver budget was hit; the report holds partial results"))
    }
}

fn separation(p: u64, json: Option<&Path>) -> Outcome {
    let s = run_separation(p)?;
    println!("graph      {} over GF({p}), |S| = {}", s.graph.label, s.graph.s);
    println!(
        "witness    {:?} independent: {}  size (p+3)/4 = {}",
        s.interval_witness, s.witness_independent, s.alpha_lower
    );
    let tag = if s.alpha.exhaustive { "exact" } else { "lower bound" };
    println!("alpha(G)   {} ({tag})", s.alpha.size);
    println!("rho_lin    {} = {p}^({})", s.rho_lin.value, s.rho_lin.exponent);
    if let Some(t) = &s.theta {
        println!("theta      {}", t.value);
    }
    println!("chain      {}", s.chain);
    match &s.warning {
        Some(w) => println!("warning    {w}"),
        None => println!("separation strict: sqrt(p) < (p+3)/4"),
    }
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&s).map_err(|e| Failure::usage(e.to_string()))?;
        emit(Some(path), &(text + "\n"))?;
    }
    Ok(())
}
