use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linform_core::bestapprox::{
    best_approximations_with, BestApproxSequence, NormConvention, SearchOptions, Strategy,
    DEFAULT_DEPTH,
};
use linform_core::constructions::{
    build_cf_pair, build_k_lattice, build_theorem8, build_theorem_neu, TheoremNeuInstance,
};
use linform_core::dimension::{
    gamma_dims, misc_bounds, sun_dimension, template_rates, theta_lower_bounds, v_of_w,
    TemplateSpec,
};
use linform_core::exponents::estimate_exponents;
use linform_core::lattice::tools::{
    fractional_combination_counterexample, min_two_plane_cover, primitive_pair_check, r_estimate,
    span_dimension, two_minors, LatticeBasis,
};
use linform_core::minkowski::{
    lemur_check, lemur_sweep, successive_minima, theorem_neu_box_audit, BoxSpec,
};
use linform_core::numeric::{format_rational, parse_rational, to_strings, Rational};
use linform_core::real_enclosure::{LinearFormTarget, TargetSpec};
use linform_core::verify::{
    default_neu_tail, run_report_dims, run_verify_cf, run_verify_klattice, run_verify_neu,
    run_verify_t8, RunStats, VerificationReport,
};
use linform_core::Error;
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "linform",
    version,
    about = "Best approximations of linear forms",
    args_override_self = true
)]
struct Cli {
    /// JSON file whose keys mirror the command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction instance.
    #[command(subcommand)]
    Construct(Construct),
    /// Best approximations of a target up to a norm bound.
    Bestapprox(BestapproxArgs),
    /// Run the full check suite for one construction.
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Minkowski(MinkowskiCmd),
    /// Exponent estimates from a stored sequence.
    Exponents(ExponentsArgs),
    #[command(subcommand)]
    Dims(DimsCmd),
    /// Table of dimension values over a range of `n` and `k`.
    Report(ReportArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn bigint(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not an integer: {s:?}"))
}

fn int_list(s: &str) -> Result<Vec<BigInt>, String> {
    s.split(',').map(bigint).collect()
}

#[derive(Args)]
struct OutArg {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construct {
    /// Two-prime lacunary pair.
    T8 {
        #[arg(long, value_parser = rational)]
        tau: Rational,
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Continued-fraction pair with coprime alternating denominators.
    Cf {
        #[arg(long, value_parser = rational)]
        tau: Rational,
        #[arg(long, alias = "depth", default_value_t = 6)]
        terms: usize,
        #[arg(long, default_value_t = 64)]
        window: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Lacunary series over the first `k` primes.
    Klattice {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rational)]
        tau: Rational,
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Lacunary pair completed by a badly approximable tail.
    Neu {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        tau: Rational,
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Exhaustive,
    Lattice,
}

#[derive(Args)]
struct BestapproxArgs {
    /// Target JSON, or any JSON object with a `target` field.
    #[arg(long)]
    target: PathBuf,
    #[arg(long, value_parser = bigint)]
    qmax: BigInt,
    /// Measure records by the norm of all coordinates.
    #[arg(long)]
    full_norm: bool,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    #[command(flatten)]
    out: OutArg,
    /// CSV table; defaults to the output path with extension `csv`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCommon {
    #[arg(long, value_parser = rational)]
    tau: Rational,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long, value_parser = bigint)]
    qmax: Option<BigInt>,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u64,
    /// Report file; timings go to a `.stats.json` sidecar.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verify {
    T8 {
        #[command(flatten)]
        common: VerifyCommon,
    },
    Cf {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long, default_value_t = 64)]
        window: usize,
    },
    Klattice {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Neu {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        sigma: Option<Rational>,
        /// Index `j` of the box audit.
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank of the tails of a stored sequence.
    REstimate {
        seq: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Smallest cover of a sequence tail by named 2-planes (`H<i>`).
    Cover {
        seq: PathBuf,
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        /// One-based index of the first tail record.
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Primitivity of the pair `u, v` (comma-separated integers).
    Primitive {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 30)]
        max_den: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Dimension of the span of vectors separated by `;`.
    Span {
        #[arg(long)]
        vectors: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum MinkowskiCmd {
    /// Successive minima of the box `|x̂| <= Q`, `|x·ξ*| <= c Q^-exp`.
    Minima {
        #[arg(long)]
        target: PathBuf,
        #[arg(long = "Q", value_parser = rational)]
        q: Rational,
        #[arg(long, value_parser = rational, default_value = "1")]
        c: Rational,
        #[arg(long = "exp", value_parser = rational)]
        exponent: Rational,
        /// Enumeration radius for `x̂`; defaults to `⌈Q⌉`.
        #[arg(long)]
        search_bound: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Independent solutions of `|x̂| <= Q`, `|x·ξ*| <= c Q^-n`.
    Lemur {
        #[arg(long)]
        target: PathBuf,
        #[arg(long = "Q")]
        q: u64,
        #[arg(long, value_parser = rational, default_value = "1/8")]
        c: Rational,
        /// Halve `c` this many times and report each step.
        #[arg(long)]
        sweep: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Box audit of a stored tail-completed instance.
    NeuAudit {
        inst: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long, value_parser = rational)]
        sigma: Option<Rational>,
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct ExponentsArgs {
    seq: PathBuf,
    /// Number of trailing records summarized, or `auto`.
    #[arg(long, default_value = "auto")]
    window: String,
    #[command(flatten)]
    out: OutArg,
    /// CSV table; defaults to the output path with extension `csv`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DimsCmd {
    Gamma {
        #[arg(long)]
        n: usize,
    },
    Theta {
        #[arg(long)]
        n: usize,
        /// Exponent `w`; defaults to `n`.
        #[arg(long)]
        w: Option<f64>,
    },
    Template {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        tau: Rational,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
    Misc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Dimension attached to a growth rate `tau`.
    Sun {
        #[arg(long, value_parser = rational)]
        tau: Rational,
    },
    /// The function `v(w)`.
    V {
        #[arg(long)]
        w: f64,
    },
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[command(flatten)]
    out: OutArg,
    /// CSV table; defaults to the output path with extension `csv`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Expands `--config file.json` into flags placed before the explicit ones.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(args);
    };
    let (path, skip) = match args[pos].strip_prefix("--config=") {
        Some(p) => (p.to_string(), 1),
        None => (args.get(pos + 1).ok_or("--config needs a file")?.clone(), 2),
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let cfg: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let obj = cfg
        .as_object()
        .ok_or_else(|| format!("{path}: expected a JSON object"))?;
    let mut rest: Vec<String> = args[..pos]
        .iter()
        .chain(&args[pos + skip..])
        .cloned()
        .collect();
    let mut out = vec![rest.remove(0)];
    let explicit_command = rest.first().is_some_and(|a| !a.starts_with('-'));
    let mut positional = Vec::new();
    let mut flags = Vec::new();
    for (key, val) in obj {
        if key == "command" {
            if !explicit_command {
                match val {
                    Value::String(s) => out.extend(s.split_whitespace().map(String::from)),
                    Value::Array(a) => out.extend(a.iter().map(scalar)),
                    _ => return Err("`command` must be a string or an array".into()),
                }
            }
            continue;
        }
        if key == "input" {
            positional.push(scalar(val));
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match val {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(a) => {
                flags.push(flag);
                flags.push(a.iter().map(scalar).collect::<Vec<_>>().join(","));
            }
            v => {
                flags.push(flag);
                flags.push(scalar(v));
            }
        }
    }
    if explicit_command {
        let cmd_len = rest.iter().take_while(|a| !a.starts_with('-')).count();
        out.extend(rest.drain(..cmd_len));
    }
    out.extend(positional);
    out.extend(flags);
    out.extend(rest);
    Ok(out)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Usage(format!("not a {what}: {e}")))
}

fn load_target(path: &Path) -> Result<LinearFormTarget, Failure> {
    let mut v = read_json(path)?;
    if let Some(t) = v.get_mut("target") {
        v = t.take();
    }
    let spec: TargetSpec = from_value(v, "target")?;
    Ok(spec.build()?)
}

fn load_sequence(path: &Path) -> Result<BestApproxSequence, Failure> {
    from_value(read_json(path)?, "best-approximation sequence")
}

/// Prints to standard output, ignoring a closed pipe.
fn print_stdout(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(out: &OutArg, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match &out.out {
        Some(p) => fs::write(p, text + "\n")?,
        None => print_stdout(&text),
    }
    Ok(())
}

fn emit_csv(out: &OutArg, csv: &Option<PathBuf>, table: String) -> Result<(), Failure> {
    let path = csv
        .clone()
        .or_else(|| out.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(p) = path {
        fs::write(p, table)?;
    }
    Ok(())
}

fn emit_report(out: &Option<PathBuf>, report: &VerificationReport, stats: &RunStats) -> Outcome {
    let stats_text = serde_json::to_string_pretty(stats).expect("serializable");
    match out {
        Some(p) => {
            fs::write(p, report.to_json() + "\n")?;
            fs::write(p.with_extension("stats.json"), stats_text + "\n")?;
        }
        None => {
            print_stdout(&report.to_json());
            eprintln!("{stats_text}");
        }
    }
    for c in &report.checks {
        eprintln!("{:<24} {}", c.name, scalar(&json!(c.status)));
    }
    Ok(report.ok())
}

fn construct(cmd: Construct) -> Outcome {
    match cmd {
        Construct::T8 { tau, terms, out } => emit(&out, &build_theorem8(&tau, terms)?)?,
        Construct::Cf {
            tau,
            terms,
            window,
            out,
        } => emit(&out, &build_cf_pair(&tau, terms, window)?)?,
        Construct::Klattice {
            n,
            k,
            tau,
            terms,
            out,
        } => emit(&out, &build_k_lattice(n, k, &tau, terms)?)?,
        Construct::Neu { n, tau, terms, out } => {
            let tail = default_neu_tail(n.saturating_sub(2))?;
            emit(&out, &build_theorem_neu(n, &tau, &tail, terms)?)?
        }
    }
    Ok(true)
}

fn bestapprox(a: BestapproxArgs) -> Outcome {
    let target = load_target(&a.target)?;
    let opts = SearchOptions {
        depth: a.depth,
        strategy: match a.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Lattice => Strategy::Lattice,
        },
        norm: if a.full_norm {
            NormConvention::Full
        } else {
            NormConvention::Restricted
        },
        ..SearchOptions::default()
    };
    let seq = best_approximations_with(&target, &a.qmax, opts)?;
    emit(&a.out, &seq)?;
    emit_csv(&a.out, &a.csv, seq.to_csv())?;
    if let Some(e) = seq.error() {
        return Err(e.into());
    }
    Ok(true)
}

fn verify(cmd: Verify) -> Outcome {
    let (report, stats, out) = match cmd {
        Verify::T8 { common: c } => {
            let (r, s) = run_verify_t8(&c.tau, c.terms.unwrap_or(4), c.qmax, c.depth);
            (r, s, c.out)
        }
        Verify::Cf { common: c, window } => {
            let (r, s) = run_verify_cf(&c.tau, c.terms.unwrap_or(6), window, c.qmax, c.depth);
            (r, s, c.out)
        }
        Verify::Klattice { common: c, n, k } => {
            let (r, s) = run_verify_klattice(n, k, &c.tau, c.terms.unwrap_or(2), c.qmax, c.depth);
            (r, s, c.out)
        }
        Verify::Neu {
            common: c,
            n,
            sigma,
            j,
        } => {
            let (r, s) = run_verify_neu(n, &c.tau, c.terms.unwrap_or(3), c.qmax, c.depth, sigma, j);
            (r, s, c.out)
        }
    };
    emit_report(&out, &report, &stats)
}

fn named_plane(name: &str, n: usize) -> Result<LatticeBasis, Failure> {
    let bad = || Failure::Usage(format!("unknown candidate {name:?}; expected H1..H{n}"));
    let i: usize = name
        .strip_prefix(['H', 'h'])
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    if i == 0 || i > n {
        return Err(bad());
    }
    Ok(LatticeBasis::h(i, n))
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<BigInt>>, Failure> {
    s.split(';')
        .map(|v| int_list(v.trim()).map_err(Failure::Usage))
        .collect()
}

fn lattice(cmd: LatticeCmd) -> Outcome {
    match cmd {
        LatticeCmd::REstimate { seq, window, out } => {
            let seq = load_sequence(&seq)?;
            let m = seq.len();
            let window = window.unwrap_or_else(|| m.saturating_sub(3).max(1));
            emit(&out, &r_estimate(&seq.vectors(), window)?)?;
        }
        LatticeCmd::Cover {
            seq,
            candidates,
            from,
            out,
        } => {
            let seq = load_sequence(&seq)?;
            let n = seq.target.n;
            let cands = candidates
                .iter()
                .map(|c| named_plane(c, n))
                .collect::<Result<Vec<_>, _>>()?;
            let vectors = seq.vectors();
            let tail = vectors.get(from.max(1) - 1..).unwrap_or_default();
            let rep = min_two_plane_cover(tail, &cands)?;
            let ok = rep.min_cover.is_some();
            emit(&out, &rep)?;
            return Ok(ok);
        }
        LatticeCmd::Primitive { u, v, max_den, out } => {
            let u = int_list(&u).map_err(Failure::Usage)?;
            let v = int_list(&v).map_err(Failure::Usage)?;
            let primitive = primitive_pair_check(&u, &v)?;
            let counter = fractional_combination_counterexample(&u, &v, max_den);
            let ok = primitive && counter.is_none();
            emit(
                &out,
                &json!({
                    "u": to_strings(&u),
                    "v": to_strings(&v),
                    "minors": to_strings(&two_minors(&u, &v)),
                    "primitive": primitive,
                    "max_denominator": max_den,
                    "counterexample": counter.map(|(g, h)| [format_rational(&g), format_rational(&h)]),
                }),
            )?;
            return Ok(ok);
        }
        LatticeCmd::Span { vectors, out } => {
            let vs = parse_vectors(&vectors)?;
            emit(
                &out,
                &json!({"count": vs.len(), "dimension": span_dimension(&vs)?}),
            )?;
        }
    }
    Ok(true)
}

fn minkowski(cmd: MinkowskiCmd) -> Outcome {
    match cmd {
        MinkowskiCmd::Minima {
            target,
            q,
            c,
            exponent,
            search_bound,
            depth,
            out,
        } => {
            let target = load_target(&target)?;
            let bound = match search_bound {
                Some(b) => b,
                None => u64::try_from(linform_core::numeric::ceil_rat(&q))
                    .map_err(|_| Failure::Usage("Q too large".into()))?,
            };
            let bx = BoxSpec::new(q, exponent, c)?;
            let res = successive_minima(&target, &bx, bound, depth)?;
            let ok = res.within_bounds != Some(false);
            emit(&out, &res)?;
            return Ok(ok);
        }
        MinkowskiCmd::Lemur {
            target,
            q,
            c,
            sweep,
            depth,
            out,
        } => {
            let target = load_target(&target)?;
            match sweep {
                Some(k) => emit(&out, &lemur_sweep(&target, q, &c, k, depth)?)?,
                None => emit(&out, &lemur_check(&target, q, &c, depth)?)?,
            }
        }
        MinkowskiCmd::NeuAudit {
            inst,
            j,
            sigma,
            eps,
            depth,
            out,
        } => {
            let inst: TheoremNeuInstance =
                from_value(read_json(&inst)?, "tail-completed instance")?;
            let sigma = sigma.unwrap_or_else(|| linform_core::verify::default_sigma(&inst));
            let rep = theorem_neu_box_audit(&inst, j, &sigma, eps, depth)?;
            let ok = rep.pass;
            emit(&out, &rep)?;
            return Ok(ok);
        }
    }
    Ok(true)
}

fn exponents(a: ExponentsArgs) -> Outcome {
    let seq = load_sequence(&a.seq)?;
    let window = match a.window.as_str() {
        "auto" => None,
        w => Some(
            w.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad window {w:?}")))?,
        ),
    };
    let est = estimate_exponents(&seq, window)?;
    emit(&a.out, &est)?;
    emit_csv(&a.out, &a.csv, est.to_csv())?;
    Ok(true)
}

fn dims(cmd: DimsCmd) -> Outcome {
    let stdout = OutArg { out: None };
    match cmd {
        DimsCmd::Gamma { n } => emit(&stdout, &gamma_dims(n)?)?,
        DimsCmd::Theta { n, w } => emit(&stdout, &theta_lower_bounds(n, w.unwrap_or(n as f64))?)?,
        DimsCmd::Template { n, tau, eps } => {
            emit(&stdout, &template_rates(&TemplateSpec { n, tau, eps })?)?
        }
        DimsCmd::Misc { n, k } => emit(&stdout, &misc_bounds(n, k)?)?,
        DimsCmd::Sun { tau } => {
            let d = sun_dimension(&tau)?;
            emit(
                &stdout,
                &json!({"tau": format_rational(&tau), "dimension": format!("{:.12}", linform_core::numeric::rat_to_f64(&d)), "exact": format_rational(&d)}),
            )?
        }
        DimsCmd::V { w } => emit(
            &stdout,
            &json!({"w": w, "v": format!("{:.12}", v_of_w(w)?)}),
        )?,
    }
    Ok(true)
}

fn report(a: ReportArgs) -> Outcome {
    if a.n_min > a.n_max {
        return Err(Failure::Usage("--n-min exceeds --n-max".into()));
    }
    let ks = match (a.k_min, a.k_max) {
        (None, None) => None,
        (lo, hi) => Some(lo.unwrap_or(2)..=hi.unwrap_or(a.n_max)),
    };
    let table = run_report_dims(a.n_min..=a.n_max, ks)?;
    emit(&a.out, &table)?;
    emit_csv(&a.out, &a.csv, table.to_csv())?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct(c) => construct(c),
        Command::Bestapprox(a) => bestapprox(a),
        Command::Verify(v) => verify(v),
        Command::Lattice(l) => lattice(l),
        Command::Minkowski(m) => minkowski(m),
        Command::Exponents(a) => exponents(a),
        Command::Dims(d) => dims(d),
        Command::Report(a) => report(a),
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
