//! `circuit`: simulate, verify, bound and search ration-caching schedules.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or input
//! error, 3 search refused by its size ceiling.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use circuit_core::bounds::{
    self, build_system, compose_total, default_composition_lines, implies, known_lines, min_t,
    parse_families, Axis, BoundLine, BoundsError, Extent, NamedSystem, Verdict,
};
use circuit_core::schedule::BUILTINS;
use circuit_core::search::{self, GridSpec, SearchError};
use circuit_core::{builtin, format_schedule, parse_schedule, simulate, Ratio, RuleSet, Schedule, SimReport};

#[derive(Parser)]
#[command(name = "circuit", version, about = "Exact verification and bounds for ration-caching circuit walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a schedule and report its timeline ledger.
    Simulate {
        #[command(flatten)]
        input: ScheduleInput,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check that a schedule is feasible and takes exactly the claimed time.
    Verify {
        #[command(flatten)]
        input: ScheduleInput,
        #[command(flatten)]
        rules: RuleArgs,
        #[arg(long, value_name = "P/Q")]
        claim: Ratio,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide whether an inequality system implies a bound line.
    Bound {
        /// A, AC, AB, B, roundtrip, roundtrip-late or roundtrip-late-swapped.
        #[arg(long)]
        part: String,
        /// Slope and intercept, e.g. `14,-11`; part-B lines are over 5 - gamma.
        #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
        line: LineArg,
        /// Replace the part's families, e.g. `gamm+siAB:2..4+sd:0..1`.
        #[arg(long)]
        families: Option<String>,
        /// Write the certificate (or refutation) as JSON to this path.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample min t over gamma for a part's system.
    Envelope {
        #[arg(long)]
        part: String,
        #[arg(long)]
        families: Option<String>,
        #[arg(long, default_value = "0", value_name = "P/Q", allow_hyphen_values = true)]
        from: Ratio,
        #[arg(long, default_value = "5", value_name = "P/Q", allow_hyphen_values = true)]
        to: Ratio,
        #[arg(long, default_value_t = 20)]
        steps: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimize the total over part-A and part-B lines.
    Optimum {
        /// Part-A line `a,b` (t >= a*gamma + b); repeatable.
        #[arg(long = "a-line", value_name = "A,B", allow_hyphen_values = true)]
        a_lines: Vec<LineArg>,
        /// Part-B line `a,b` (t >= a*(5 - gamma) + b); repeatable.
        #[arg(long = "b-line", value_name = "A,B", allow_hyphen_values = true)]
        b_lines: Vec<LineArg>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force search on a grid.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// List or print the built-in schedules.
    Builtin {
        #[arg(long, conflicts_with = "name")]
        list: bool,
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum SearchKind {
    /// Farthest one-way distance within a budget.
    Reach {
        #[arg(long, value_name = "P/Q")]
        budget: Ratio,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fastest round trip out to gamma units and back.
    Roundtrip {
        #[arg(long, value_name = "P/Q")]
        gamma: Ratio,
        #[arg(long = "max-days", value_name = "P/Q")]
        max_days: Ratio,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        rules: RuleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct ScheduleInput {
    /// Schedule file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args)]
struct RuleArgs {
    /// FREE, ANTS or DAWN.
    #[arg(long, default_value = "FREE")]
    rules: String,
    #[arg(long, value_name = "BOOL")]
    ants: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    dawn: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    discard: Option<bool>,
    #[arg(long, value_name = "P/Q")]
    capacity: Option<Ratio>,
    #[arg(long = "circuit-miles", value_name = "P/Q")]
    circuit_miles: Option<Ratio>,
    #[arg(long = "daily-miles", value_name = "P/Q")]
    daily_miles: Option<Ratio>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long = "den", default_value_t = 12)]
    denominator: u32,
    #[arg(long = "max-boxes")]
    max_boxes: Option<u32>,
    #[arg(long = "max-actions")]
    max_actions: Option<u32>,
    #[arg(long, default_value = "0", value_name = "P/Q")]
    phase: Ratio,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Same as `--format json`.
    #[arg(long)]
    json: bool,
}

impl OutputArgs {
    fn mode(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone)]
struct LineArg(Ratio, Ratio);

impl FromStr for LineArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
        let a = a.trim().parse::<Ratio>().map_err(|e| format!("slope `{a}`: {e}"))?;
        let b = b.trim().parse::<Ratio>().map_err(|e| format!("intercept `{b}`: {e}"))?;
        Ok(LineArg(a, b))
    }
}

enum Failure {
    Usage(String),
    Limit(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load_schedule(input: &ScheduleInput) -> Result<Schedule, Failure> {
    match (&input.file, &input.builtin) {
        (_, Some(name)) => builtin(name).map_err(usage),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            parse_schedule(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        (None, None) => Err(usage("give a schedule file or --builtin")),
    }
}

fn load_rules(args: &RuleArgs) -> Result<RuleSet, Failure> {
    let mut r = RuleSet::by_name(&args.rules).map_err(usage)?;
    if let Some(v) = args.ants {
        r.ants_active = v;
    }
    if let Some(v) = args.dawn {
        r.require_dawn_start = v;
    }
    if let Some(v) = args.discard {
        r.allow_discard = v;
    }
    if let Some(v) = &args.capacity {
        r.capacity_ration_days = v.clone();
    }
    if let Some(v) = &args.circuit_miles {
        r.circuit_miles = v.clone();
    }
    if let Some(v) = &args.daily_miles {
        r.daily_miles = v.clone();
    }
    r.validate().map_err(usage)?;
    Ok(r)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn human_report(r: &SimReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "feasible: {}", yes_no(r.feasible));
    let _ = writeln!(s, "total_time: {}", r.total_time);
    let _ = writeln!(s, "circuit_covered: {}", yes_no(r.circuit_covered));
    let l = &r.ledger;
    let _ = writeln!(
        s,
        "ledger: taken {} = consumed {} + ants {} + discarded {} + cached {} + carried {}",
        l.boxes_taken, l.consumed, l.ants_lost, l.discarded, l.left_in_caches, l.carried_at_end
    );
    for (label, t) in &r.marks {
        let _ = writeln!(s, "mark {label}: {t}");
    }
    for v in &r.violations {
        let _ = writeln!(s, "violation at clock {} mile {}: {}: {}", v.clock, v.position, v.kind, v.detail);
    }
    s
}

fn csv_report(r: &SimReport) -> String {
    let mut s = String::from("clock,position,kind,detail\n");
    for v in &r.violations {
        let _ = writeln!(s, "{},{},{},\"{}\"", v.clock, v.position, v.kind, v.detail.replace('"', "\"\""));
    }
    s
}

fn print_report(r: &SimReport, mode: Format) {
    match mode {
        Format::Human => print!("{}", human_report(r)),
        Format::Json => println!("{}", r.to_json()),
        Format::Csv => print!("{}", csv_report(r)),
    }
}

fn part_system(part: &str, families: Option<&str>) -> Result<(Vec<bounds::LinIneq>, Axis, NamedSystem), Failure> {
    let named = NamedSystem::from_str(part).map_err(usage)?;
    let axis = if matches!(named, NamedSystem::PartB(_)) { Axis::Complement } else { Axis::Gamma };
    let system = match families {
        Some(spec) => build_system(&parse_families(spec).map_err(usage)?).map_err(usage)?,
        None => named.build(),
    };
    Ok((system, axis, named))
}

fn cmd_bound(
    part: &str,
    line: &LineArg,
    families: Option<&str>,
    certificate: Option<&PathBuf>,
    mode: Format,
) -> Outcome {
    let (system, axis, named) = part_system(part, families)?;
    let line = BoundLine { a: line.0.clone(), b: line.1.clone(), axis };
    let verdict = implies(&system, &line, &[]).map_err(usage)?;
    let doc = match &verdict {
        Verdict::Implied(c) => {
            let mut c = c.clone();
            c.note = known_lines()
                .into_iter()
                .find(|k| k.line == line && std::mem::discriminant(&k.system) == std::mem::discriminant(&named))
                .and_then(|k| k.note.map(str::to_string));
            if let Err(e) = c.verify() {
                return Err(usage(format!("certificate failed re-verification: {e}")));
            }
            json!({ "implied": true, "line": line.to_string(), "certificate": c })
        }
        Verdict::Refuted(r) => {
            r.verify(&system).map_err(|e| usage(format!("witness failed re-verification: {e}")))?;
            json!({ "implied": false, "line": line.to_string(), "refutation": r })
        }
    };
    if let Some(path) = certificate {
        let body = serde_json::to_string_pretty(doc.get("certificate").or(doc.get("refutation")).unwrap())
            .expect("serializes");
        fs::write(path, body + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    match mode {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializes")),
        Format::Csv => {
            println!("line,implied,slack_or_gap");
            match &verdict {
                Verdict::Implied(c) => println!("\"{line}\",true,{}", c.slack),
                Verdict::Refuted(r) => println!("\"{line}\",false,{}", r.gap),
            }
        }
        Format::Human => match &verdict {
            Verdict::Implied(c) => {
                println!("implied: {line}");
                println!("slack: {}", c.slack);
                for (i, y) in c.support() {
                    println!("  {y} x [{}] {}", c.system[i].label, c.system[i].expr);
                }
            }
            Verdict::Refuted(r) => {
                println!("refuted: {line}");
                println!("gap: {}", r.gap);
                for (v, x) in &r.point {
                    println!("  {v} = {x}");
                }
            }
        },
    }
    Ok(verdict.is_implied())
}

fn cmd_envelope(part: &str, families: Option<&str>, from: &Ratio, to: &Ratio, steps: u32, mode: Format) -> Outcome {
    if steps == 0 || from > to {
        return Err(usage("need --steps >= 1 and --from <= --to"));
    }
    let (system, _, _) = part_system(part, families)?;
    let mut rows = Vec::new();
    for i in 0..=steps {
        let gamma = from + &((to - from) * Ratio::new(i as i64, steps as i64));
        let value = match min_t(&system, &gamma) {
            Ok(Extent::Finite(t)) => t.to_string(),
            Ok(Extent::Unbounded) => "unbounded".to_string(),
            Err(BoundsError::InfeasibleSystem) => "infeasible".to_string(),
            Err(e) => return Err(usage(e)),
        };
        rows.push((gamma, value));
    }
    match mode {
        Format::Json => {
            let v: Vec<_> = rows.iter().map(|(g, t)| json!({ "gamma": g.to_string(), "min_t": t })).collect();
            println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
        }
        _ => {
            println!("gamma,min_t");
            for (g, t) in rows {
                println!("{g},{t}");
            }
        }
    }
    Ok(true)
}

fn cmd_optimum(a: &[LineArg], b: &[LineArg], mode: Format) -> Outcome {
    let (mut a_lines, mut b_lines) = default_composition_lines();
    if !a.is_empty() {
        a_lines = a.iter().map(|l| BoundLine::gamma(l.0.clone(), l.1.clone())).collect();
    }
    if !b.is_empty() {
        b_lines = b.iter().map(|l| BoundLine::complement(l.0.clone(), l.1.clone())).collect();
    }
    let (gamma, total) = compose_total(&a_lines, &b_lines).map_err(usage)?;
    match mode {
        Format::Json => println!("{}", json!({ "gamma": gamma.to_string(), "total": total.to_string() })),
        Format::Csv => println!("gamma,total\n{gamma},{total}"),
        Format::Human => println!("gamma = {gamma}, total = {total}"),
    }
    Ok(true)
}

fn grid(args: &GridArgs, days: &Ratio) -> GridSpec {
    let mut g = GridSpec::new(args.denominator, days.clone()).with_phase(args.phase.clone());
    if let Some(n) = args.max_boxes {
        g = g.with_max_boxes(n);
    }
    if let Some(n) = args.max_actions {
        g = g.with_max_actions(n);
    }
    g
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::TooLarge { .. } => Failure::Limit(e.to_string()),
        other => usage(other),
    }
}

fn print_found(kind: &str, f: &search::Found, mode: Format) {
    eprintln!("states explored: {}", f.states_explored);
    if let Some(b) = &f.bound {
        eprintln!("certified bound: {b}");
    }
    match mode {
        Format::Json => println!(
            "{}",
            json!({
                kind: f.value.to_string(),
                "time": f.report.total_time.to_string(),
                "bound": f.bound.as_ref().map(|b| b.to_string()),
                "schedule": format_schedule(&f.schedule),
            })
        ),
        Format::Csv => println!("{kind},time\n{},{}", f.value, f.report.total_time),
        Format::Human => {
            println!("# {kind} {} in {} days", f.value, f.report.total_time);
            print!("{}", format_schedule(&f.schedule));
        }
    }
}

fn cmd_search(kind: &SearchKind) -> Outcome {
    match kind {
        SearchKind::Reach { budget, grid: ga, rules, out } => {
            let rules = load_rules(rules)?;
            let g = grid(ga, budget);
            let f = search::best_reach(budget, &g, &rules).map_err(search_failure)?;
            print_found("reach", &f, out.mode());
            Ok(true)
        }
        SearchKind::Roundtrip { gamma, max_days, grid: ga, rules, out } => {
            let rules = load_rules(rules)?;
            let g = grid(ga, max_days);
            match search::roundtrip_search(gamma, &g, &rules).map_err(search_failure)? {
                Some(f) => {
                    print_found("roundtrip", &f, out.mode());
                    Ok(true)
                }
                None => {
                    match out.mode() {
                        Format::Json => println!("{}", json!({ "roundtrip": null })),
                        _ => println!("no round trip to {gamma} within {max_days} days on this grid"),
                    }
                    Ok(false)
                }
            }
        }
    }
}

fn cmd_builtin(list: bool, name: Option<&str>) -> Outcome {
    match (list, name) {
        (_, Some(n)) => {
            print!("{}", format_schedule(&builtin(n).map_err(usage)?));
            Ok(true)
        }
        (true, None) => {
            for b in BUILTINS.iter() {
                println!("{}\t{}\t{}", b.name, Ratio::new(b.total_days.0, b.total_days.1), b.summary);
            }
            Ok(true)
        }
        (false, None) => Err(usage("give --list or a builtin name")),
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Simulate { input, rules, out } => {
            let s = load_schedule(input)?;
            let r = simulate(&s, &load_rules(rules)?);
            print_report(&r, out.mode());
            Ok(r.feasible)
        }
        Command::Verify { input, rules, claim, out } => {
            let s = load_schedule(input)?;
            let r = simulate(&s, &load_rules(rules)?);
            let ok = r.feasible && &r.total_time == claim;
            match out.mode() {
                Format::Json => println!(
                    "{}",
                    json!({ "verified": ok, "claim": claim.to_string(), "report": r.to_json_value() })
                ),
                Format::Csv => println!("verified,claim,total_time,feasible\n{ok},{claim},{},{}", r.total_time, r.feasible),
                Format::Human => {
                    println!("verified: {} (claim {claim})", yes_no(ok));
                    print!("{}", human_report(&r));
                }
            }
            Ok(ok)
        }
        Command::Bound { part, line, families, certificate, out } => {
            cmd_bound(part, line, families.as_deref(), certificate.as_ref(), out.mode())
        }
        Command::Envelope { part, families, from, to, steps, out } => {
            cmd_envelope(part, families.as_deref(), from, to, *steps, out.mode())
        }
        Command::Optimum { a_lines, b_lines, out } => cmd_optimum(a_lines, b_lines, out.mode()),
        Command::Search { kind } => cmd_search(kind),
        Command::Builtin { list, name } => cmd_builtin(*list, name.as_deref()),
    }
}

fn main() -> ExitCode {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
