//! `bouncing-tower`: solve, count, verify and cross-check towers from the
//! command line.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on a usage
//! error (bad flags, unreadable input, a scale cap exceeded).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bouncing_tower::diskpile::{self, SizeProfile};
use bouncing_tower::oracle::{self, GraphFormat, DEFAULT_SCALE_CAP, MAX_SCALE};
use bouncing_tower::solver::{self, CountTable};
use bouncing_tower::trace_io::{self, TraceDocument, TraceFormat, TraceHeader, TraceVariant};
use bouncing_tower::{CountFunction, RuleSet, SolverVariant};
use clap::{Args, Parser, Subcommand, ValueEnum};

const CAP_ENV: &str = "BOUNCING_TOWER_ORACLE_CAP";

#[derive(Parser)]
#[command(
    name = "bouncing-tower",
    version,
    about = "Bouncing Tower solver and oracle toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the move sequence taking n disks from A to C.
    Solve {
        #[arg(long, value_parser = parse_variant)]
        variant: TraceVariant,
        #[arg(long)]
        n: usize,
        /// Required for `levitating`, which replays a BFS shortest path.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<RuleSet>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Print one step count.
    Count {
        #[arg(long, value_parser = parse_function)]
        function: CountFunction,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "recurrence")]
        method: Method,
    },
    /// Tabulate f010, f100, f000 and 3^ceil(n/2) for n = 0..=max_n.
    Table {
        #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(0..=60))]
        max_n: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Replay a trace read from --input or stdin.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Defaults to json when the input starts with `{`, text otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Text traces only.
        #[arg(long)]
        n: Option<usize>,
        /// Text traces only.
        #[arg(long, value_parser = parse_variant)]
        variant: Option<TraceVariant>,
        /// Text traces of the levitating variant only.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<RuleSet>,
    },
    /// Export the configuration graph.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: RuleSet,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormatArg,
        #[arg(long, alias = "out")]
        output: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Compare a solver with BFS, or report BFS alone for a given alpha.
    OracleCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_solver, conflicts_with = "alpha", required_unless_present = "alpha")]
        variant: Option<SolverVariant>,
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<RuleSet>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Disk Pile tools for towers with repeated sizes.
    Diskpile {
        /// Counts per size, smallest first, e.g. `3,1,2`.
        #[arg(long, value_parser = parse_profile)]
        profile: SizeProfile,
        #[arg(long, value_enum)]
        action: PileAction,
        /// Largest total disk count for `--action oracle`.
        #[arg(long, default_value_t = diskpile::DEFAULT_PILE_CAP)]
        cap: u64,
    },
}

#[derive(Args)]
struct CapArgs {
    /// Largest n for which the full configuration graph is built.
    #[arg(long = "cap", env = CAP_ENV, default_value_t = DEFAULT_SCALE_CAP)]
    value: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for TraceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => TraceFormat::Text,
            Format::Json => TraceFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recurrence,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum PileAction {
    Solve,
    Count,
    Oracle,
    Worst,
}

fn parse_variant(s: &str) -> Result<TraceVariant, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_solver(s: &str) -> Result<SolverVariant, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_alpha(s: &str) -> Result<RuleSet, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_function(s: &str) -> Result<CountFunction, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_profile(s: &str) -> Result<SizeProfile, String> {
    s.parse().map_err(|e| format!("{e}"))
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1, after the report has been printed.
    Verification,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            variant,
            n,
            alpha,
            format,
            output,
            cap,
        } => cmd_solve(variant, n, alpha, format, cap.value).and_then(|s| emit(s, output)),
        Command::Count {
            function,
            n,
            method,
        } => cmd_count(function, n, method),
        Command::Table { max_n, csv } => cmd_table(max_n as usize, csv),
        Command::Verify {
            input,
            format,
            n,
            variant,
            alpha,
        } => cmd_verify(input, format, n, variant, alpha),
        Command::Graph {
            n,
            alpha,
            format,
            output,
            cap,
        } => cmd_graph(n, alpha, format, cap.value).and_then(|s| emit(s, output)),
        Command::OracleCheck {
            n,
            variant,
            alpha,
            cap,
        } => cmd_oracle_check(n, variant, alpha, cap.value),
        Command::Diskpile {
            profile,
            action,
            cap,
        } => cmd_diskpile(&profile, action, cap),
    };
    match result {
        Ok(out) => match write_stdout(&out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_stdout(s: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(s.as_bytes())?;
    out.flush()
}

/// Writes to `path` when given, otherwise hands the text back for stdout.
fn emit(text: String, path: Option<PathBuf>) -> CmdResult {
    match path {
        Some(p) => {
            fs::write(&p, text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn effective_cap(n: usize, cap: usize) -> Result<usize, Failure> {
    if cap > MAX_SCALE {
        return Err(usage(format!(
            "cap {cap} exceeds the hard limit {MAX_SCALE}"
        )));
    }
    if n > cap {
        return Err(usage(format!(
            "n = {n} exceeds the oracle cap {cap} (raise it with --cap or {CAP_ENV})"
        )));
    }
    if n > DEFAULT_SCALE_CAP {
        // offsets, targets and two distance arrays, roughly
        let mib = 3f64.powi(n as i32) * 28.0 / (1024.0 * 1024.0);
        eprintln!("warning: n = {n} builds 3^{n} states, about {mib:.0} MiB");
    }
    Ok(cap)
}

fn cmd_solve(
    variant: TraceVariant,
    n: usize,
    alpha: Option<RuleSet>,
    format: Format,
    cap: usize,
) -> CmdResult {
    let doc = match variant.solver() {
        Some(v) => {
            if alpha.is_some_and(|a| a != v.rules()) {
                return Err(usage(format!(
                    "variant {variant} runs only under alpha = {}",
                    v.rules()
                )));
            }
            TraceDocument::from_solver(v, n).map_err(usage)?
        }
        None => {
            let rules = alpha.ok_or_else(|| usage("--variant levitating needs --alpha p/q"))?;
            let cap = effective_cap(n, cap)?;
            let g = oracle::build_graph_with_cap(n, rules, cap).map_err(usage)?;
            let (s, t) = ("A".repeat(n), "C".repeat(n));
            let moves = oracle::shortest_path(&g, &s, &t)
                .map_err(usage)?
                .ok_or_else(|| usage(format!("C^{n} is unreachable under alpha = {rules}")))?;
            let header = TraceHeader::tower(variant, rules, n).map_err(usage)?;
            TraceDocument::new(header, moves)
        }
    };
    Ok(trace_io::serialize_trace(&doc, format.into()))
}

fn cmd_count(function: CountFunction, n: usize, method: Method) -> CmdResult {
    let value = match method {
        Method::Recurrence => solver::count_recurrence(function, n),
        Method::Closed => solver::count_closed_form(function, n),
    }
    .map_err(usage)?;
    Ok(format!("{value}\n"))
}

fn cmd_table(max_n: usize, csv: bool) -> CmdResult {
    let t = CountTable::up_to(max_n).map_err(usage)?;
    let pow: Vec<u128> = (0..=max_n)
        .map(|n| 3u128.pow(n.div_ceil(2) as u32))
        .collect();
    let ns: Vec<u128> = (0..=max_n as u128).collect();
    let rows: [(&str, &[u128]); 5] = [
        ("n", &ns),
        ("f010", &t.f010),
        ("f100", &t.f100),
        ("f000", &t.f000),
        ("3^ceil(n/2)", &pow),
    ];
    let mut out = String::new();
    if csv {
        for (label, values) in rows {
            let cells: Vec<String> = values.iter().map(u128::to_string).collect();
            let _ = writeln!(out, "{label},{}", cells.join(","));
        }
        return Ok(out);
    }
    let label_w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..=max_n)
        .map(|i| {
            rows.iter()
                .map(|(_, v)| v[i].to_string().len())
                .max()
                .unwrap_or(1)
        })
        .collect();
    for (label, values) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for (v, w) in values.iter().zip(&widths) {
            let _ = write!(out, " {v:>w$}");
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_verify(
    input: Option<PathBuf>,
    format: Option<Format>,
    n: Option<usize>,
    variant: Option<TraceVariant>,
    alpha: Option<RuleSet>,
) -> CmdResult {
    let text = match &input {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(usage)?;
            s
        }
    };
    let format = format.unwrap_or(if text.trim_start().starts_with('{') {
        Format::Json
    } else {
        Format::Text
    });
    let header = match format {
        Format::Json => None,
        Format::Text => {
            let (Some(n), Some(variant)) = (n, variant) else {
                return Err(usage("text traces need --n and --variant"));
            };
            let rules = match (variant.fixed_rules(), alpha) {
                (Some(r), None) => r,
                (Some(r), Some(a)) if a == r => r,
                (None, Some(a)) => a,
                (None, None) => return Err(usage("--variant levitating needs --alpha p/q")),
                (Some(r), Some(_)) => {
                    return Err(usage(format!(
                        "variant {variant} runs only under alpha = {r}"
                    )))
                }
            };
            Some(TraceHeader::tower(variant, rules, n).map_err(usage)?)
        }
    };
    let doc = match trace_io::parse_trace(&text, format.into(), header) {
        Ok(doc) => doc,
        Err(e) => {
            println!("rejected: {e}");
            println!("solved=false");
            return Err(Failure::Verification);
        }
    };
    let report = trace_io::replay_verify(&doc);
    let mut out = String::new();
    let _ = writeln!(out, "variant={}", doc.header.variant());
    let _ = writeln!(out, "alpha={}", doc.header.rules());
    let _ = writeln!(out, "n={}", doc.header.disk_count());
    let _ = writeln!(out, "moves={}", report.total_moves);
    let _ = writeln!(out, "legal_prefix_len={}", report.legal_prefix_len);
    let _ = writeln!(out, "final_word={}", report.final_word);
    if let Some(e) = &report.failure {
        let _ = writeln!(out, "illegal_move={}: {e}", report.legal_prefix_len + 1);
    }
    let _ = writeln!(out, "solved={}", report.solved);
    if report.solved {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn cmd_graph(n: usize, alpha: RuleSet, format: GraphFormatArg, cap: usize) -> CmdResult {
    let cap = effective_cap(n, cap)?;
    let g = oracle::build_graph_with_cap(n, alpha, cap).map_err(usage)?;
    let format = match format {
        GraphFormatArg::Dot => GraphFormat::Dot,
        GraphFormatArg::Json => GraphFormat::Json,
    };
    Ok(oracle::export_graph(&g, format))
}

fn cmd_oracle_check(
    n: usize,
    variant: Option<SolverVariant>,
    alpha: Option<RuleSet>,
    cap: usize,
) -> CmdResult {
    let cap = effective_cap(n, cap)?;
    let mut out = String::new();
    let Some(variant) = variant else {
        let rules = alpha.expect("clap requires --variant or --alpha");
        let g = oracle::build_graph_with_cap(n, rules, cap).map_err(usage)?;
        let (s, t) = ("A".repeat(n), "C".repeat(n));
        let bfs = oracle::bfs_distance(&g, &s, &t).map_err(usage)?;
        let paths = oracle::shortest_path_count(&g, &s, &t).map_err(usage)?;
        let _ = writeln!(out, "alpha={rules} n={n}");
        match bfs {
            Some(d) => {
                let _ = writeln!(out, "bfs_length={d}");
            }
            None => {
                let _ = writeln!(out, "bfs_length=unreachable");
            }
        }
        let _ = writeln!(out, "shortest_paths={paths}");
        let _ = writeln!(out, "informational: no solver claim for this alpha");
        return Ok(out);
    };
    let r = oracle::verify_solver_with_cap(n, variant, cap).map_err(usage)?;
    let bfs = r
        .bfs_len
        .map_or("unreachable".to_string(), |d| d.to_string());
    let _ = writeln!(out, "variant={variant} alpha={} n={n}", variant.rules());
    let _ = writeln!(out, "trace_length={}", r.trace_len);
    let _ = writeln!(out, "bfs_length={bfs}");
    let _ = writeln!(out, "shortest_paths={}", r.shortest_paths);
    let _ = writeln!(out, "legal={}", r.legal && r.terminal);
    let _ = writeln!(out, "optimal={}", r.optimal());
    let _ = writeln!(out, "unique={}", r.unique());
    // The alternative strategy is only claimed to be correct, not optimal.
    let passed = match variant {
        SolverVariant::BouncingAlternative => r.legal && r.terminal,
        _ => r.passed(),
    };
    let _ = writeln!(out, "result={}", if passed { "PASS" } else { "FAIL" });
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn cmd_diskpile(profile: &SizeProfile, action: PileAction, cap: u64) -> CmdResult {
    Ok(match action {
        PileAction::Solve => {
            use bouncing_tower::PegId::{A, B, C};
            let trace = diskpile::solve_diskpile(profile, A, B, C).map_err(usage)?;
            trace.iter().map(|m| format!("{m}\n")).collect()
        }
        PileAction::Count => format!("{}\n", diskpile::count_diskpile(profile)),
        PileAction::Oracle => {
            let d = diskpile::diskpile_oracle_with_cap(profile, cap).map_err(usage)?;
            format!("{d}\n")
        }
        PileAction::Worst => {
            let s = profile.distinct_sizes() as u64;
            let w = diskpile::worst_case_count(profile.total(), s).map_err(usage)?;
            format!("{w}\n")
        }
    })
}
