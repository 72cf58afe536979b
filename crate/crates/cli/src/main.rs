//! Command-line front end: set-family queries, averages, gauge profiles,
//! norm evaluation, scanners, and the verification suites.
//!
//! Machine-readable output goes to files (or stdout when no path is given);
//! the human summary goes to standard output. Exit code 0 means every
//! requested check passed, 1 a computation failure or failed suite, 2 a
//! usage error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use schreierlab_core::averages;
use schreierlab_core::budget::Budget;
use schreierlab_core::config::RunConfig;
use schreierlab_core::gauge::{build_profile, GaugeParams, GaugeProfile};
use schreierlab_core::greedy;
use schreierlab_core::ordinal::Ordinal;
use schreierlab_core::schreier;
use schreierlab_core::sets::FiniteSet;
use schreierlab_core::spaces::{Caps, Space};
use schreierlab_core::vector::BlockVector;
use schreierlab_core::verify;

#[derive(Parser)]
#[command(
    name = "schreierlab",
    version,
    about = "Set-family combinatorics, gauge functions, and norm verification"
)]
struct Cli {
    /// Decimal-digit cap distinguishing desk-scale from full-scale integers.
    #[arg(long, global = true, default_value_t = 2000)]
    digit_cap: usize,
    /// Working precision of the certified real arithmetic.
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Seed for every randomized scanner.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Membership, maximality, partitions, packing and shift indices.
    Schreier {
        #[command(subcommand)]
        cmd: SchreierCmd,
    },
    /// Repeated averages and block sums.
    Averages {
        #[command(subcommand)]
        cmd: AveragesCmd,
    },
    /// Gauge profiles: build, dump, check.
    Gauge {
        #[command(subcommand)]
        cmd: GaugeCmd,
    },
    /// Evaluate a norm on a vector file (JSON lines).
    Norm(NormArgs),
    /// Randomized scanners with CSV reports.
    Scan(ScanArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SchreierCmd {
    /// Is the set a member of the order-`alpha` family?
    Member {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        set: String,
    },
    /// Is the set maximal in the family?
    Maximal {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        set: String,
    },
    /// Partition indices anchored at a point.
    Partition {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        anchor: String,
        #[arg(long, default_value_t = 5)]
        count: u64,
    },
    /// Packing number of a set.
    Tpack {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 14)]
        cap: usize,
    },
    /// Least anchor placing an interval of the given size in the family.
    Mstar {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        size: String,
    },
}

#[derive(Subcommand)]
enum AveragesCmd {
    /// The repeated average over an explicit maximal set (JSON).
    Build {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        set: String,
    },
    /// Averages over consecutive partition blocks (JSON lines).
    Along {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        anchor: String,
        #[arg(long, default_value_t = 3)]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact block sum of consecutive averages over a member set.
    Blocksum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        anchor: String,
        #[arg(long, default_value_t = 3)]
        count: u64,
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand)]
enum GaugeCmd {
    /// Build a profile and write its structured text form.
    Build {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_delimiter = ',')]
        m_seq: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        n_seq: Vec<u64>,
        /// Window as a decimal integer or `B*2^S`.
        #[arg(long)]
        window: String,
        #[arg(long)]
        desk_relax: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a stored profile.
    Dump {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Re-run the property checks of a stored profile.
    Check {
        #[arg(long)]
        profile: PathBuf,
    },
}

#[derive(Args)]
struct NormArgs {
    /// Which space: s3, s4aa, or s4ab.
    #[arg(long)]
    space: String,
    /// Gauge profile file (s3; defaults to the reference desk profile).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Partition order for s4aa / s4ab.
    #[arg(long)]
    alpha: Option<String>,
    /// Lower order for s4ab.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, value_delimiter = ',')]
    m_seq: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    n_seq: Vec<u64>,
    #[arg(long)]
    desk_relax: bool,
    /// Vector file in JSON lines (`-` for stdin).
    vector: String,
}

#[derive(Args)]
struct ScanArgs {
    /// qg, democracy, or uncond.
    kind: String,
    #[arg(long)]
    space: String,
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, value_delimiter = ',')]
    m_seq: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    n_seq: Vec<u64>,
    #[arg(long)]
    desk_relax: bool,
    /// Projection/comparison family order.
    #[arg(long, default_value = "0")]
    gamma: String,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or a suite id.
    suite: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let budget = Budget::with_digit_cap(cli.digit_cap);
    let caps = Caps {
        support_cap: 12,
        budget,
    };
    let globals = (cli.digit_cap, cli.precision_bits, cli.seed);
    match cli.command {
        Command::Schreier { cmd } => run_schreier(cmd, &budget),
        Command::Averages { cmd } => run_averages(cmd, &budget),
        Command::Gauge { cmd } => run_gauge(cmd, cli.precision_bits, &budget),
        Command::Norm(args) => run_norm(args, cli.precision_bits, caps, &budget),
        Command::Scan(args) => run_scan(args, cli.precision_bits, caps, cli.seed, &budget),
        Command::Verify(args) => run_verify(args, globals),
    }
}

fn parse_ordinal(s: &str) -> Result<Ordinal> {
    s.parse().map_err(|e| anyhow!("bad ordinal `{s}`: {e}"))
}

fn parse_set(s: &str) -> Result<FiniteSet> {
    s.parse().map_err(|e| anyhow!("bad set `{s}`: {e}"))
}

fn parse_big(s: &str) -> Result<BigUint> {
    if let Some((base, shift)) = s.split_once("*2^") {
        let b: BigUint = base
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad base in `{s}`"))?;
        let e: u64 = shift.trim().parse().context("bad shift")?;
        return Ok(b << e);
    }
    s.trim().parse().map_err(|_| anyhow!("bad integer `{s}`"))
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).context("creating output file")?,
        )),
        None => Box::new(std::io::stdout()),
    })
}

fn run_schreier(cmd: SchreierCmd, budget: &Budget) -> Result<bool> {
    match cmd {
        SchreierCmd::Member { alpha, set } => {
            let a = parse_ordinal(&alpha)?;
            let e = parse_set(&set)?;
            println!("{}", schreier::is_member(&e, &a));
            Ok(true)
        }
        SchreierCmd::Maximal { alpha, set } => {
            let a = parse_ordinal(&alpha)?;
            let e = parse_set(&set)?;
            println!("{}", schreier::is_maximal(&e, &a));
            Ok(true)
        }
        SchreierCmd::Partition {
            alpha,
            anchor,
            count,
        } => {
            let a = parse_ordinal(&alpha)?;
            let mut q = parse_big(&anchor)?;
            println!("s(0) = {q}");
            for i in 1..=count {
                q = schreier::next_point(&a, &q, budget)?;
                println!("s({i}) = {q}");
            }
            Ok(true)
        }
        SchreierCmd::Tpack { alpha, set, cap } => {
            let a = parse_ordinal(&alpha)?;
            let e = parse_set(&set)?;
            println!("{}", schreier::t_alpha(&e, &a, cap)?);
            Ok(true)
        }
        SchreierCmd::Mstar { alpha, size } => {
            let a = parse_ordinal(&alpha)?;
            let n = parse_big(&size)?;
            println!("{}", schreier::m_star(&n, &a, budget)?);
            Ok(true)
        }
    }
}

fn run_averages(cmd: AveragesCmd, budget: &Budget) -> Result<bool> {
    match cmd {
        AveragesCmd::Build { alpha, set } => {
            let a = parse_ordinal(&alpha)?;
            let e = parse_set(&set)?;
            let avg = averages::repeated_average(&a, &e)?;
            avg.write_json(std::io::stdout())?;
            Ok(true)
        }
        AveragesCmd::Along {
            alpha,
            anchor,
            count,
            out,
        } => {
            let a = parse_ordinal(&alpha)?;
            let m = parse_big(&anchor)?;
            let avgs = averages::averages_along(&a, &m, count, budget)?;
            let mut w = out_writer(&out)?;
            for avg in &avgs {
                avg.write_json(&mut w)?;
            }
            Ok(true)
        }
        AveragesCmd::Blocksum {
            alpha,
            anchor,
            count,
            f,
        } => {
            let a = parse_ordinal(&alpha)?;
            let m = parse_big(&anchor)?;
            let fset = parse_set(&f)?;
            let blocks = averages::averages_along(&a, &m, count, budget)?;
            let sum = averages::block_sum(&a, &blocks, &fset)?;
            println!("{sum}");
            Ok(true)
        }
    }
}

fn run_gauge(cmd: GaugeCmd, precision_bits: u32, budget: &Budget) -> Result<bool> {
    match cmd {
        GaugeCmd::Build {
            alpha,
            m_seq,
            n_seq,
            window,
            desk_relax,
            out,
        } => {
            let a = parse_ordinal(&alpha)?;
            let params = GaugeParams {
                m_seq,
                n_seq,
                window_max: parse_big(&window)?,
                precision_bits,
                desk_relax,
            };
            let profile = build_profile(&a, params, budget)?;
            let mut w = out_writer(&out)?;
            profile.write_text(&mut w)?;
            eprintln!(
                "profile: {} breakpoints, window {}",
                profile.breakpoints.len(),
                profile.window
            );
            Ok(true)
        }
        GaugeCmd::Dump { profile } => {
            let p = load_profile(&profile)?;
            p.write_text(std::io::stdout())?;
            Ok(true)
        }
        GaugeCmd::Check { profile } => {
            let p = load_profile(&profile)?;
            let mut ok = true;
            for (id, n, worst) in p.check_properties() {
                let verdict = if worst.verified() { "pass" } else { "FAIL" };
                ok &= worst.verified();
                println!("{verdict} {id} ({n} breakpoints, worst {worst})");
            }
            for (id, n, worst) in p.full_scale_checks() {
                println!("skip {id} (full-scale-only; desk outcome {worst} over {n})");
            }
            Ok(ok)
        }
    }
}

fn load_profile(path: &PathBuf) -> Result<GaugeProfile> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(GaugeProfile::read_text(BufReader::new(f))?)
}

#[allow(clippy::too_many_arguments)]
fn build_space(
    space: &str,
    profile: &Option<PathBuf>,
    alpha: &Option<String>,
    beta: &Option<String>,
    m_seq: &[u64],
    n_seq: &[u64],
    desk_relax: bool,
    precision_bits: u32,
    caps: Caps,
    budget: &Budget,
) -> Result<Space> {
    match space {
        "s3" => {
            let p = match profile {
                Some(path) => load_profile(path)?,
                None => schreierlab_core::gauge::desk_profile(budget)?,
            };
            Ok(Space::section_three(p, caps))
        }
        "s4aa" => {
            let a = parse_ordinal(alpha.as_deref().unwrap_or("w*1"))?;
            Ok(Space::section_four_aa(a, precision_bits, caps)?)
        }
        "s4ab" => {
            let a = parse_ordinal(alpha.as_deref().unwrap_or("2"))?;
            let b = parse_ordinal(beta.as_deref().unwrap_or("0"))?;
            let (m, n, relax) = if m_seq.is_empty() {
                (vec![2, 3, 4], vec![3, 4, 5], true)
            } else {
                (m_seq.to_vec(), n_seq.to_vec(), desk_relax)
            };
            Ok(Space::section_four_ab(
                a,
                b,
                m,
                n,
                relax,
                precision_bits,
                caps,
            )?)
        }
        other => bail!("unknown space `{other}` (expected s3, s4aa, s4ab)"),
    }
}

fn run_norm(args: NormArgs, precision_bits: u32, caps: Caps, budget: &Budget) -> Result<bool> {
    let space = build_space(
        &args.space,
        &args.profile,
        &args.alpha,
        &args.beta,
        &args.m_seq,
        &args.n_seq,
        args.desk_relax,
        precision_bits,
        caps,
        budget,
    )?;
    let x = if args.vector == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        BlockVector::read_jsonl(std::io::Cursor::new(buf))?
    } else {
        let f = File::open(&args.vector).with_context(|| format!("opening {}", args.vector))?;
        BlockVector::read_jsonl(BufReader::new(f))?
    };
    let n = space.norm(&x)?;
    let cert = match &n.cert {
        schreierlab_core::spaces::Cert::Exact => "exact".to_string(),
        schreierlab_core::spaces::Cert::LowerBound { upper } => {
            format!("lower-bound (upper {})", upper.to_decimal(12))
        }
    };
    println!("{}", n.value.to_decimal(20));
    println!("certificate: {cert}");
    println!("argmax: {}", n.argmax);
    for c in space.components(&x)? {
        println!("component {}: {}", c.argmax, c.value.to_decimal(16));
    }
    Ok(true)
}

fn run_scan(
    args: ScanArgs,
    precision_bits: u32,
    caps: Caps,
    seed: u64,
    budget: &Budget,
) -> Result<bool> {
    let space = build_space(
        &args.space,
        &args.profile,
        &args.alpha,
        &args.beta,
        &args.m_seq,
        &args.n_seq,
        args.desk_relax,
        precision_bits,
        caps,
        budget,
    )?;
    let gamma = parse_ordinal(&args.gamma)?;
    let report = match args.kind.as_str() {
        "qg" => greedy::qg_scan(&space, args.trials, seed)?,
        "democracy" => greedy::democracy_scan(&space, &gamma, args.trials, seed)?,
        "uncond" => greedy::uncond_scan(&space, &gamma, args.trials, seed)?,
        other => bail!("unknown scan `{other}` (expected qg, democracy, uncond)"),
    };
    let mut w = out_writer(&args.out)?;
    report.write_csv(&mut w)?;
    drop(w);
    println!(
        "scan {} on {}: {} instances, {} failures, {} indeterminate{}",
        report.scan,
        report.space,
        report.instances.len(),
        report.failures(),
        report.indeterminate(),
        report
            .max_ratio
            .map(|r| format!(", max ratio {r:.6}"))
            .unwrap_or_default()
    );
    if !report.trend_note.is_empty() {
        println!("{}", report.trend_note);
    }
    Ok(report.all_passed())
}

fn run_verify(
    args: VerifyArgs,
    (digit_cap, precision_bits, seed): (usize, u32, u64),
) -> Result<bool> {
    let mut cfg = match &args.config {
        Some(path) => {
            let mut buf = String::new();
            File::open(path)
                .with_context(|| format!("opening {}", path.display()))?
                .read_to_string(&mut buf)?;
            buf.parse::<RunConfig>()?
        }
        None => RunConfig::default(),
    };
    if args.config.is_none() {
        cfg.seed = seed;
        cfg.precision_bits = precision_bits;
        cfg.digit_cap = digit_cap;
    }
    let results = if args.suite == "all" {
        verify::run_all(&cfg)?
    } else {
        vec![verify::run_suite(&args.suite, &cfg)?]
    };
    let mut all_ok = true;
    for r in &results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        all_ok &= r.passed();
        println!(
            "{status} {:32} {:6} instances {:3} skipped {:6} ms",
            r.id,
            r.instances,
            r.skipped.len(),
            r.wall_ms
        );
        for f in &r.failures {
            println!(
                "    failure: {} [{}] observed {} required {}",
                f.instance, f.replay, f.observed, f.required
            );
        }
    }
    if let Some(out) = &args.out {
        let mut w = BufWriter::new(File::create(out).context("creating results file")?);
        w.write_all(verify::canonical_json(&results).as_bytes())?;
    }
    if !all_ok {
        let failing: Vec<&str> = results
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.id.as_str())
            .collect();
        eprintln!("failing suites: {}", failing.join(", "));
    }
    Ok(all_ok)
}
