//! Command-line front end: dualize monotone CNFs, check and certify
//! duality, verify certificates, analyze structure, and benchmark
//! enumeration delay.
//!
//! Exit codes: 0 success, 1 negative answer (NOT-DUAL, or a certificate
//! that does not confirm), 2 usage or parse error, 3 resource guard hit.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read as _, Write as _};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dualize::enumerate::{measure_delay, Dualizer, EnumerateError, RhoStrategy};
use dualize::fk::{
    check_dual_a, check_dual_b, parse_certificate, replay_certificate, BOutcome, DualPair,
    DualityOutcome, ReplayOutcome,
};
use dualize::generate::{
    alpha_acyclic_random, path_two_cnf, random_kcnf, random_prime_cnf, read_k_random, star_cnf,
};
use dualize::structure::{
    analyze, gyo_reduce, ordering_from_gyo, ordering_from_td2, parse_td, smallest_last_ordering,
    td1_to_td2, validate_td, TdKind, TreeDecomposition,
};
use dualize::{CnfError, CompactionMap, MonotoneCnf, Term, VarSet, VariableOrdering};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "dualize",
    about = "Dualization of monotone CNFs: minimal transversal enumeration, \
             duality checking with compact certificates, and structural analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the dual (all minimal transversals), one term per line
    Dualize(DualizeArgs),
    /// Decide whether two monotone CNFs are dual to each other
    Check(CheckArgs),
    /// Replay a non-duality certificate against a pair of CNFs
    Verify(VerifyArgs),
    /// Report structural parameters and the enumeration guarantee they buy
    Analyze(AnalyzeArgs),
    /// Measure enumeration delay across instance families
    Bench(BenchArgs),
}

#[derive(Args)]
struct DualizeArgs {
    /// Input hypergraph file (`-` for stdin)
    input: String,
    /// Variable ordering: `smallest-last`, `gyo`, `td:<file>`, or
    /// `given:<v1,v2,...>` (a permutation of the input universe)
    #[arg(long, default_value = "smallest-last")]
    ordering: String,
    /// Collect all terms before printing instead of streaming
    #[arg(long)]
    buffer: bool,
    /// Stop after this many terms
    #[arg(long)]
    max_outputs: Option<usize>,
    /// Write a JSON run report to this file
    #[arg(long)]
    report: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// First CNF (phi)
    phi: String,
    /// Second CNF (psi)
    psi: String,
    /// Which decision procedure to run
    #[arg(long, value_enum, default_value_t = Algorithm::B)]
    algorithm: Algorithm,
    /// Write a replayable non-duality certificate here (algorithm `b` only)
    #[arg(long)]
    emit_cert: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    A,
    B,
}

#[derive(Args)]
struct VerifyArgs {
    /// First CNF (phi)
    phi: String,
    /// Second CNF (psi)
    psi: String,
    /// Certificate file produced by `check --emit-cert`
    certificate: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input hypergraph file (`-` for stdin)
    input: String,
    /// Tree decomposition file to evaluate as an ordering candidate
    #[arg(long)]
    td: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance family to generate
    #[arg(long, value_enum, default_value_t = Family::Path)]
    family: Family,
    /// Comma-separated list of variable counts
    #[arg(long, default_value = "8,16,32,64")]
    sizes: String,
    /// Width parameter for the read-k and k-cnf families
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Clause count for the random and acyclic families (default: n)
    #[arg(long)]
    count: Option<usize>,
    /// Base RNG seed; each run adds its index
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Measured runs per size
    #[arg(long, default_value_t = 3)]
    runs: usize,
    /// Stop each run after this many terms
    #[arg(long)]
    max_outputs: Option<usize>,
    /// Write CSV rows here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// x1 paired with each other variable
    Star,
    /// Chain of two-variable clauses (read-2)
    Path,
    /// Random CNF where every variable occurs at most k times
    ReadK,
    /// Random k-CNF patched to an antichain
    KCnf,
    /// Random prime CNF
    Random,
    /// Random alpha-acyclic CNF
    Acyclic,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(classify_error(&err));
        }
    }
}

/// Resource guards (universe caps, recursion budgets) exit 3; everything
/// else that reaches here is a usage or parse problem and exits 2.
fn classify_error(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(c) = cause.downcast_ref::<CnfError>() {
            if matches!(c, CnfError::UniverseTooLarge { .. }) {
                return 3;
            }
        }
        if let Some(e) = cause.downcast_ref::<EnumerateError>() {
            if matches!(e, EnumerateError::DepthLimit { .. }) {
                return 3;
            }
        }
    }
    2
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Dualize(args) => cmd_dualize(args),
        Command::Check(args) => cmd_check(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// ---------------------------------------------------------------------------
// input format

/// Read a file, or stdin when the path is `-`.
fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

/// Parse the hypergraph text format: an optional `p mhg <n> <m>` header,
/// `#` comment lines, and one clause per line as strictly ascending
/// 1-based variable indices. Without a header the universe is the largest
/// index that occurs.
fn parse_hypergraph(text: &str, what: &str) -> Result<MonotoneCnf> {
    let mut declared: Option<(usize, usize)> = None;
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if s.starts_with('p') && s[1..].starts_with(char::is_whitespace) {
            let fields: Vec<&str> = s.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "mhg" {
                bail!("{what}:{line}: header must be `p mhg <n> <m>`");
            }
            if declared.is_some() {
                bail!("{what}:{line}: duplicate header");
            }
            if !lists.is_empty() {
                bail!("{what}:{line}: header must precede all clauses");
            }
            let n: usize = fields[2]
                .parse()
                .with_context(|| format!("{what}:{line}: bad variable count"))?;
            let m: usize = fields[3]
                .parse()
                .with_context(|| format!("{what}:{line}: bad clause count"))?;
            declared = Some((n, m));
            continue;
        }
        let mut vars = Vec::new();
        for tok in s.split_whitespace() {
            let v: usize = tok
                .parse()
                .with_context(|| format!("{what}:{line}: bad variable index `{tok}`"))?;
            if v == 0 {
                bail!("{what}:{line}: variables are numbered from 1");
            }
            if vars.last().is_some_and(|&prev| v <= prev) {
                bail!("{what}:{line}: indices must be strictly ascending");
            }
            vars.push(v);
        }
        lists.push(vars);
    }
    let n = match declared {
        Some((n, m)) => {
            if lists.len() != m {
                bail!(
                    "{what}: header declares {m} clauses but {} appear",
                    lists.len()
                );
            }
            n
        }
        None => lists.iter().flatten().copied().max().unwrap_or(0),
    };
    let refs: Vec<&[usize]> = lists.iter().map(|l| l.as_slice()).collect();
    MonotoneCnf::from_lists(n, &refs).with_context(|| format!("{what}: invalid clause set"))
}

fn load_cnf(path: &str) -> Result<MonotoneCnf> {
    let label = if path == "-" { "<stdin>" } else { path };
    parse_hypergraph(&read_input(path)?, label)
}

/// Rebuild a CNF over a larger universe so two inputs can share one.
fn embed(cnf: &MonotoneCnf, n: usize) -> Result<MonotoneCnf> {
    if cnf.n() == n {
        return Ok(cnf.clone());
    }
    let sets: Vec<VarSet> = cnf
        .clauses()
        .iter()
        .map(|c| VarSet::from_vars(n, &c.vars().to_vec()))
        .collect();
    Ok(MonotoneCnf::from_sets_minimized(n, sets)?)
}

fn load_pair(phi_path: &str, psi_path: &str) -> Result<DualPair> {
    let phi = load_cnf(phi_path)?;
    let psi = load_cnf(psi_path)?;
    let n = phi.n().max(psi.n());
    Ok(DualPair::new(embed(&phi, n)?, embed(&psi, n)?)?)
}

fn format_term(term: &Term) -> String {
    term.vars()
        .to_vec()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// dualize

#[derive(Serialize)]
struct RunReport {
    n: usize,
    used_vars: usize,
    clauses: usize,
    literals: usize,
    ordering: String,
    ordering_source: String,
    terms: usize,
    max_rho_size: usize,
    truncated: bool,
    elapsed_ms: f64,
}

/// Restrict an ordering over the original universe to the variables that
/// survive compaction, renaming them through `map`.
fn compact_ordering(full: &VariableOrdering, map: &CompactionMap) -> Result<VariableOrdering> {
    let kept: Vec<usize> = full
        .as_slice()
        .iter()
        .filter_map(|&v| map.to_new(v))
        .collect();
    Ok(VariableOrdering::new(kept)?)
}

fn build_ordering(
    spec: &str,
    pruned: &MonotoneCnf,
    compact: &MonotoneCnf,
    map: &CompactionMap,
) -> Result<(VariableOrdering, String)> {
    if spec == "smallest-last" {
        return Ok((smallest_last_ordering(compact).ordering, spec.to_string()));
    }
    if spec == "gyo" {
        let trace = gyo_reduce(compact);
        if !trace.success {
            bail!("the input is not alpha-acyclic, so no GYO ordering exists");
        }
        return Ok((ordering_from_gyo(&trace, compact.n())?, spec.to_string()));
    }
    if let Some(path) = spec.strip_prefix("td:") {
        let td = parse_td(&fs::read_to_string(path).with_context(|| format!("reading {path}"))?)?;
        let t2;
        let t2_ref = if td.kind == TdKind::TypeI {
            t2 = td1_to_td2(&td, pruned)?;
            &t2
        } else {
            validate_td(&td, pruned)?;
            &td
        };
        let full = ordering_from_td2(t2_ref, pruned)?;
        return Ok((compact_ordering(&full, map)?, format!("td (width {})", t2_ref.width())));
    }
    if let Some(perm) = spec.strip_prefix("given:") {
        let vars: Vec<usize> = perm
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .context("--ordering given: expects comma-separated indices")?;
        let full = VariableOrdering::new(vars)
            .context("--ordering given: must be a permutation of the input universe")?;
        if full.as_slice().len() != pruned.n() {
            bail!(
                "--ordering given: lists {} variables but the universe has {}",
                full.as_slice().len(),
                pruned.n()
            );
        }
        return Ok((compact_ordering(&full, map)?, "given".to_string()));
    }
    bail!("unknown --ordering `{spec}` (use smallest-last, gyo, td:<file>, or given:<perm>)");
}

fn cmd_dualize(args: DualizeArgs) -> Result<i32> {
    let original = load_cnf(&args.input)?;
    let pruned = original.minimize();
    let (compact, map) = pruned.compact();
    let (ord, source) = build_ordering(&args.ordering, &pruned, &compact, &map)?;

    let start = Instant::now();
    let mut dualizer = Dualizer::new(&compact, &ord, RhoStrategy::Auto)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut buffered: Vec<Term> = Vec::new();
    let mut emitted = 0usize;
    let mut truncated = false;
    while let Some(term) = dualizer.next_term()? {
        let term = map.term_to_old(&term, original.n());
        if args.buffer {
            buffered.push(term);
        } else {
            writeln!(out, "{}", format_term(&term))?;
        }
        emitted += 1;
        if args.max_outputs.is_some_and(|cap| emitted >= cap) {
            truncated = true;
            break;
        }
    }
    for term in &buffered {
        writeln!(out, "{}", format_term(term))?;
    }
    out.flush()?;
    let elapsed = start.elapsed();

    let stats = dualizer.stats();
    let report = RunReport {
        n: original.n(),
        used_vars: compact.n(),
        clauses: pruned.len(),
        literals: pruned.literal_count(),
        ordering: ord
            .as_slice()
            .iter()
            .map(|&p| map.to_old(p).to_string())
            .collect::<Vec<_>>()
            .join(","),
        ordering_source: source,
        terms: emitted,
        max_rho_size: stats.max_rho_size,
        truncated,
        elapsed_ms: elapsed.as_secs_f64() * 1e3,
    };
    if let Some(path) = &args.report {
        fs::write(path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {path}"))?;
    }
    eprintln!(
        "{} terms in {:.1} ms (n={}, m={}, ordering={}{})",
        report.terms,
        report.elapsed_ms,
        report.n,
        report.clauses,
        report.ordering_source,
        if truncated { ", truncated" } else { "" }
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// check / verify

fn cmd_check(args: CheckArgs) -> Result<i32> {
    if args.emit_cert.is_some() && args.algorithm == Algorithm::A {
        bail!("--emit-cert requires --algorithm b");
    }
    let pair = load_pair(&args.phi, &args.psi)?;
    match args.algorithm {
        Algorithm::A => {
            let (outcome, stats) = check_dual_a(&pair)?;
            eprintln!(
                "algorithm a: volume {}, {} nodes, depth {}+{}",
                stats.root_volume, stats.nodes, stats.max_left_moves, stats.max_right_moves
            );
            match outcome {
                DualityOutcome::Dual => {
                    println!("DUAL");
                    Ok(0)
                }
                DualityOutcome::NotDual { witness } => {
                    println!("NOT-DUAL");
                    println!("witness: {}", witness.to_bitstring());
                    Ok(1)
                }
            }
        }
        Algorithm::B => {
            let (outcome, stats) = check_dual_b(&pair)?;
            eprintln!(
                "algorithm b: volume {}, {} nodes, moves a<={} b<={} c<={}",
                stats.root_volume, stats.nodes, stats.max_a, stats.max_b, stats.max_c
            );
            match outcome {
                BOutcome::Dual => {
                    println!("DUAL");
                    Ok(0)
                }
                BOutcome::NotDual {
                    witness,
                    certificate,
                } => {
                    println!("NOT-DUAL");
                    println!("witness: {}", witness.to_bitstring());
                    if let Some(path) = &args.emit_cert {
                        let text = format!(
                            "# non-duality certificate ({} bits)\n{}",
                            certificate.bit_length(),
                            certificate.to_text()
                        );
                        fs::write(path, text).with_context(|| format!("writing {path}"))?;
                        eprintln!("certificate written to {path}");
                    }
                    Ok(1)
                }
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let pair = load_pair(&args.phi, &args.psi)?;
    let text = fs::read_to_string(&args.certificate)
        .with_context(|| format!("reading {}", args.certificate))?;
    let certificate =
        parse_certificate(&text).with_context(|| format!("parsing {}", args.certificate))?;
    match replay_certificate(&pair, &certificate)? {
        ReplayOutcome::Confirmed { witness, moves } => {
            println!("CONFIRMED");
            println!("witness: {}", witness.to_bitstring());
            eprintln!("replayed {moves} moves");
            Ok(0)
        }
        ReplayOutcome::Refuted => {
            println!("REFUTED");
            Ok(1)
        }
        ReplayOutcome::Invalid { reason } => {
            println!("INVALID: {reason}");
            Ok(1)
        }
    }
}

// ---------------------------------------------------------------------------
// analyze

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let cnf = load_cnf(&args.input)?.minimize();
    let td: Option<TreeDecomposition> = match &args.td {
        None => None,
        Some(path) => Some(parse_td(
            &fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        )?),
    };
    let report = analyze(&cnf, td.as_ref())?;
    println!("n: {}", report.n);
    println!("m: {}", report.m);
    println!("literals: {}", report.literals);
    println!("read: {}", report.read);
    println!("degeneracy: {}", report.degeneracy.k);
    println!(
        "alpha-acyclic: {}",
        if report.alpha_acyclic { "yes" } else { "no" }
    );
    if let Some(ord) = &report.gyo_ordering {
        println!("gyo-ordering: {}", join_ordering(ord));
    }
    if let Some(w) = report.td_width {
        println!("td-width: {w}");
    }
    if let Some(ord) = &report.td_ordering {
        println!("td-ordering: {}", join_ordering(ord));
    }
    println!("ordering: {}", join_ordering(&report.chosen));
    println!("ordering-source: {}", report.chosen_source);
    println!("max-group: {}", report.chosen_max_group);
    for g in &report.guarantees {
        println!("guarantee: {g}");
    }
    Ok(0)
}

fn join_ordering(ord: &VariableOrdering) -> String {
    ord.as_slice()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// bench

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .context("--sizes expects comma-separated variable counts")?;
    if sizes.is_empty() {
        bail!("--sizes lists no sizes");
    }
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }

    let mut csv = String::from(
        "family,n,run,outputs,truncated,pre_first_ns,max_gap_ns,max_delay_ns,\
         mean_gap_ns,p50_ns,p90_ns,p99_ns,total_ns\n",
    );
    let mut medians: BTreeMap<usize, Vec<u128>> = BTreeMap::new();
    let family_name = match args.family {
        Family::Star => "star",
        Family::Path => "path",
        Family::ReadK => "read-k",
        Family::KCnf => "k-cnf",
        Family::Random => "random",
        Family::Acyclic => "acyclic",
    };
    for &n in &sizes {
        for run in 0..args.runs {
            let seed = args.seed.wrapping_add(run as u64);
            let cnf = make_instance(args.family, n, args.k, args.count, seed)?;
            let (compact, _) = cnf.minimize().compact();
            let ord = smallest_last_ordering(&compact).ordering;
            let (_, delay) = measure_delay(&compact, &ord, RhoStrategy::Auto, args.max_outputs)?;
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                family_name,
                n,
                run,
                delay.outputs,
                delay.truncated,
                delay.pre_first.as_nanos(),
                delay.max_gap.as_nanos(),
                delay.max_delay().as_nanos(),
                delay.mean_gap.as_nanos(),
                delay.p50_gap.as_nanos(),
                delay.p90_gap.as_nanos(),
                delay.p99_gap.as_nanos(),
                delay.total.as_nanos(),
            ));
            medians
                .entry(n)
                .or_default()
                .push(delay.max_delay().as_nanos());
        }
    }
    match &args.out {
        Some(path) => fs::write(path, &csv).with_context(|| format!("writing {path}"))?,
        None => print!("{csv}"),
    }

    let points: Vec<(f64, f64)> = medians
        .iter()
        .map(|(&n, runs)| {
            let mut r = runs.clone();
            r.sort_unstable();
            let med = r[r.len() / 2].max(1) as f64;
            ((n as f64).log2(), med.log2())
        })
        .collect();
    if points.len() >= 2 {
        eprintln!(
            "max-delay growth exponent across sizes: {:.2}",
            fit_slope(&points)
        );
    }
    Ok(0)
}

fn make_instance(
    family: Family,
    n: usize,
    k: usize,
    count: Option<usize>,
    seed: u64,
) -> Result<MonotoneCnf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = count.unwrap_or(n);
    if n < 2 {
        bail!("--sizes entries must be at least 2");
    }
    Ok(match family {
        Family::Star => star_cnf(n),
        Family::Path => path_two_cnf(n),
        Family::ReadK => read_k_random(&mut rng, n, k),
        Family::KCnf => random_kcnf(&mut rng, n, m, k),
        Family::Random => random_prime_cnf(&mut rng, n, m),
        Family::Acyclic => alpha_acyclic_random(&mut rng, n, m),
    })
}

/// Least-squares slope through (x, y) points.
fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}
