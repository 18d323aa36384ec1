//! Command-line front end: build indexes, query them, verify against the
//! expanded text, benchmark, and generate hard instances.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.

mod bench;
mod io;
mod verify;

use clap::{Args, Parser, Subcommand};
use io::{fmt_sym, fmt_syms, load, load_grammar, load_index, parse_sym, write, InputKind, Loaded};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlslg::access::{build_index, plan, AccessIndex, BuildConfig, BuildReport, TopReport};
use rlslg::aggregates::RankSelect;
use rlslg::grammar::{derive_stats, write_text, Flavor, Grammar};
use rlslg::hardgen::{generate_hard, hard_from_params, pick_params, HardInstance, HardParams};
use rlslg::traversal::extract;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(rlslg::error::Error),
}

impl From<rlslg::error::Error> for CliError {
    fn from(e: rlslg::error::Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "rlslg", version, about = "Random access, rank and select over grammar-compressed strings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index and print its JSON report.
    Build(BuildArgs),
    /// Characters at weighted positions, one per line.
    Access {
        #[arg(long)]
        index: PathBuf,
        #[arg(required = true)]
        positions: Vec<u64>,
    },
    /// Characters [i, i + m) on one line.
    Extract {
        #[arg(long)]
        index: PathBuf,
        i: u64,
        m: u64,
    },
    /// Occurrences of a character among the first i characters.
    Rank {
        #[arg(long)]
        index: PathBuf,
        /// A single character or `#id`.
        c: String,
        #[arg(required = true)]
        i: Vec<u64>,
    },
    /// Position of the occurrence of a character with rank r (0-based).
    Select {
        #[arg(long)]
        index: PathBuf,
        c: String,
        #[arg(required = true)]
        r: Vec<u64>,
    },
    /// Check every query type against the expanded text.
    Verify(VerifyArgs),
    /// CSV of index size and depth over a tau grid.
    Bench(BenchArgs),
    /// Generate a hard instance and its ground truth.
    GenHard(GenArgs),
}

#[derive(Args, Clone)]
struct BuildOpts {
    #[arg(long, value_enum, default_value = "grammar")]
    kind: InputKind,
    /// Fan-out parameter.
    #[arg(long, conflicts_with = "budget")]
    tau: Option<f64>,
    /// Memory budget in words; tau and b are planned from it and the build
    /// fails if the index does not fit.
    #[arg(long)]
    budget: Option<u64>,
    /// Word size in bits, used with --budget.
    #[arg(long, default_value_t = 64)]
    word_bits: u64,
    /// Do not build the leafy index.
    #[arg(long)]
    no_leafy: bool,
    /// Leaf block size.
    #[arg(long)]
    b: Option<usize>,
    /// Also store the packed text.
    #[arg(long)]
    explicit: bool,
}

#[derive(Args)]
struct BuildArgs {
    input: PathBuf,
    #[command(flatten)]
    opts: BuildOpts,
    /// Where to write the index.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grammars, texts or index files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    opts: BuildOpts,
    /// Check every position up to this length.
    #[arg(long, default_value_t = 10_000)]
    exhaustive: u64,
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Parallel instances; defaults to RLSLG_JOBS or 1.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of grammar files, or single files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.0, 4.0, 16.0, 64.0, 256.0])]
    taus: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    queries: u64,
    #[arg(long)]
    no_leafy: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, requires_all = ["p", "q"], conflicts_with_all = ["n", "g"])]
    b: Option<u32>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Target length; picks b, p, q with --g, --w and --eps.
    #[arg(long, requires = "g")]
    n: Option<u64>,
    #[arg(long)]
    g: Option<u64>,
    #[arg(long, default_value_t = 64)]
    w: u32,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Probability that an element is in a block's set.
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sampled queries in the ground truth.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, short)]
    output: PathBuf,
    /// Ground truth JSON; defaults to the output path with `.truth.json`.
    #[arg(long)]
    truth: Option<PathBuf>,
}

fn jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("RLSLG_JOBS").ok().and_then(|v| v.parse().ok())).unwrap_or(1).max(1)
}

/// Applies `f` to every item on `jobs` threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let slots: Vec<std::sync::Mutex<&mut Option<R>>> = out.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.min(items.len()).max(1) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                **slots[k].lock().unwrap() = Some(r);
            });
        }
    });
    drop(slots);
    out.into_iter().map(|r| r.expect("every item is processed")).collect()
}

fn config_for(g: &Grammar, o: &BuildOpts) -> Result<(BuildConfig, Option<Value>), CliError> {
    let mut cfg = BuildConfig { leafy: !o.no_leafy, b: o.b, explicit: o.explicit, ..Default::default() };
    if let Some(t) = o.tau {
        cfg.tau = t;
        return Ok((cfg, None));
    }
    let Some(m) = o.budget else { return Ok((cfg, None)) };
    let st = derive_stats(g)?;
    let choice = plan(st.start_len(g), g.size() as u64, g.terminal_count() as u64, m, o.word_bits)?;
    cfg.tau = choice.tau;
    cfg.b = o.b.or(Some(choice.b));
    cfg.explicit |= choice.explicit;
    cfg.budget_bits = Some(m.saturating_mul(o.word_bits));
    let planned = json!({
        "budget_words": m,
        "word_bits": o.word_bits,
        "tau": choice.tau,
        "b": choice.b,
        "predicted_depth": choice.predicted_depth,
        "explicit": choice.explicit,
    });
    Ok((cfg, Some(planned)))
}

fn top_json(t: &TopReport) -> Value {
    json!({
        "size": t.size,
        "variables": t.variables,
        "height": t.height,
        "bits": t.bits,
        "max_bucket_load": t.max_bucket_load,
        "sparsity_violations": t.sparsity_violations,
    })
}

/// JSON form of a build report.
fn report_json(r: &BuildReport) -> Value {
    json!({
        "input_size": r.input_size,
        "length": r.length,
        "weight": r.weight,
        "sigma": r.sigma,
        "tau": r.tau,
        "tau_root": r.tau_root,
        "d": r.d,
        "route": r.route.name(),
        "total_bits": r.total_bits,
        "bits_constant": r.bits_constant,
        "explicit_bits": r.explicit_bits,
        "weighted": top_json(&r.weighted),
        "leafy": r.leafy.as_ref().map(|l| json!({
            "b": l.b,
            "d": l.d,
            "leaves": l.leaves,
            "leaf_bits": l.leaf_bits,
            "unrolled": l.unrolled,
            "top": top_json(&l.top),
        })),
    })
}

fn cmd_build(a: &BuildArgs) -> Result<(), CliError> {
    let g = load_grammar(&a.input, a.opts.kind)?;
    let (cfg, planned) = config_for(&g, &a.opts)?;
    let ix = build_index(&g, &cfg)?;
    let mut rep = report_json(&ix.report());
    if let Some(p) = planned {
        rep["plan"] = p;
    }
    if let Some(out) = &a.output {
        write(out, &ix.to_bytes())?;
    }
    let text = serde_json::to_string_pretty(&rep).expect("report serializes");
    if let Some(path) = &a.report {
        write(path, text.as_bytes())?;
    }
    println!("{text}");
    Ok(())
}

fn cmd_access(index: &Path, positions: &[u64]) -> Result<(), CliError> {
    let ix = load_index(index)?;
    for &i in positions {
        println!("{}", fmt_sym(ix.access(i)?.terminal));
    }
    Ok(())
}

fn cmd_extract(index: &Path, i: u64, m: u64) -> Result<(), CliError> {
    let ix = load_index(index)?;
    println!("{}", fmt_syms(&extract(&ix, i, m)?));
    Ok(())
}

fn cmd_rank(index: &Path, c: &str, is: &[u64]) -> Result<(), CliError> {
    let ix = load_index(index)?;
    let c = parse_sym(c)?;
    let rs = RankSelect::new(&ix);
    for &i in is {
        println!("{}", rs.rank(c, i)?);
    }
    Ok(())
}

fn cmd_select(index: &Path, c: &str, rs_: &[u64]) -> Result<(), CliError> {
    let ix = load_index(index)?;
    let c = parse_sym(c)?;
    let rs = RankSelect::new(&ix);
    for &r in rs_ {
        println!("{}", rs.select(c, r)?);
    }
    Ok(())
}

fn verify_one(path: &Path, a: &VerifyArgs) -> Result<verify::Tally, CliError> {
    let ix: AccessIndex = match load(path, a.opts.kind)? {
        Loaded::Index(ix) => *ix,
        Loaded::Grammar(g) => {
            let (cfg, _) = config_for(&g, &a.opts)?;
            build_index(&g, &cfg)?
        }
    };
    let opts = verify::VerifyOptions { exhaustive: a.exhaustive, samples: a.samples, seed: a.seed };
    verify::verify_index(&ix, &opts)
}

fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let rd = std::fs::read_dir(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut files: Vec<PathBuf> = rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool, CliError> {
    let files = expand_inputs(&a.inputs)?;
    println!("seed {}", a.seed);
    let results = par_map(&files, jobs(a.jobs), |p| verify_one(p, a));
    let mut ok = true;
    for (p, r) in files.iter().zip(results) {
        let tally = r?;
        for (name, checked, bad) in &tally.rows {
            println!("{}\t{name}\t{checked} checked\t{bad} mismatches", p.display());
        }
        ok &= tally.mismatches() == 0;
    }
    println!("{}", if ok { "verify: ok" } else { "verify: MISMATCH" });
    Ok(ok)
}

fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    let files = expand_inputs(&a.inputs)?;
    let results = par_map(&files, jobs(a.jobs), |p| -> Result<Vec<bench::BenchRow>, CliError> {
        let g = load_grammar(p, InputKind::Grammar)?;
        let name = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
        bench::bench_grammar(&name, &g, &a.taus, a.queries, !a.no_leafy, a.seed)
    });
    let mut csv = String::from(bench::HEADER);
    csv.push('\n');
    for r in results {
        for row in r? {
            csv.push_str(&row.csv());
            csv.push('\n');
        }
    }
    match &a.output {
        Some(p) => write(p, csv.as_bytes()),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn truth_json(hi: &HardInstance, seed: u64, samples: usize, rng: &mut ChaCha8Rng) -> Result<Value, CliError> {
    use rand::Rng;
    let mut queries = Vec::with_capacity(samples);
    for _ in 0..samples {
        let pick: Vec<u32> = (0..hi.p * hi.q).map(|_| rng.gen_range(0..hi.b)).collect();
        let pos = hi.query_eval(&pick)?;
        let bits: Vec<u8> = hi.expected_bits(&pick).into_iter().map(u8::from).collect();
        queries.push(json!({
            "pick": pick,
            "positions": pos,
            "bits": bits,
            "answer": hi.blsd.answer(&pick),
        }));
    }
    Ok(json!({
        "seed": seed,
        "b": hi.b,
        "p": hi.p,
        "q": hi.q,
        "core_length": hi.core_len(),
        "size_bound": hi.size_bound(),
        "grammar_size": hi.grammar.size(),
        "sets": hi.blsd.sets,
        "queries": queries,
    }))
}

fn cmd_gen_hard(a: &GenArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let hi = match (a.b, a.n) {
        (Some(b), _) => {
            let hp = HardParams::explicit(b, a.p.expect("clap requires p"), a.q.expect("clap requires q"))?;
            hard_from_params(&mut rng, &hp, None, a.density)?
        }
        (None, Some(n)) => {
            let g = a.g.expect("clap requires g");
            pick_params(n, g, a.w, a.eps)?;
            generate_hard(&mut rng, n, g, a.w, a.eps, a.density)?
        }
        (None, None) => return Err(CliError::Usage("give --b --p --q or --n --g".into())),
    };
    debug_assert_eq!(hi.grammar.flavor, Flavor::Slg);
    write(&a.output, write_text(&hi.grammar).as_bytes())?;
    let truth = truth_json(&hi, a.seed, a.samples, &mut rng)?;
    let tpath = a.truth.clone().unwrap_or_else(|| a.output.with_extension("truth.json"));
    write(&tpath, serde_json::to_string_pretty(&truth).expect("truth serializes").as_bytes())?;
    println!("{}\t{}", a.output.display(), tpath.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match &cli.cmd {
        Cmd::Build(a) => cmd_build(a)?,
        Cmd::Access { index, positions } => cmd_access(index, positions)?,
        Cmd::Extract { index, i, m } => cmd_extract(index, *i, *m)?,
        Cmd::Rank { index, c, i } => cmd_rank(index, c, i)?,
        Cmd::Select { index, c, r } => cmd_select(index, c, r)?,
        Cmd::Verify(a) => return cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a)?,
        Cmd::GenHard(a) => cmd_gen_hard(a)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
