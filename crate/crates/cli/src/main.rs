use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use smallprog::ca::{center_column, evolve, Boundary, Configuration, RuleTable};
use smallprog::causal::{self, generators, GraphFile, InvarianceConfig, RuleSet, Schedule, SpaceGraph, UpdateRule};
use smallprog::games;
use smallprog::machines::{
    busy_beaver_search_with, run_cyclic_tag, run_tm, CyclicTagSystem, EnumMode, MachineRow, Strategy, TuringMachine,
    Word, DEFAULT_WORD_CEILING,
};
use smallprog::preimage::{
    exists_initial_exact_t_with_budget, predecessor_count_stats, solve_init, InitProblem, Predicate, StatsMode,
    DEFAULT_BLOCK_BUDGET,
};

#[derive(Parser, Serialize)]
#[command(name = "smallprog", version, about = "Cellular automata, small machines, graph rewriting and nonlocal games")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Memory budget in table entries for the block-table preimage test.
    #[arg(long, global = true)]
    budget_mem: Option<u64>,
    /// Print nothing on standard output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock time in the envelope (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Pgm,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Elementary cellular automata.
    #[command(subcommand)]
    Ca(CaCmd),
    /// Ancestor tests and initial-condition search.
    #[command(subcommand)]
    Preimage(PreimageCmd),
    /// Turing machines and busy beaver search.
    #[command(subcommand)]
    Tm(TmCmd),
    /// Cyclic tag systems.
    #[command(subcommand)]
    Tag(TagCmd),
    /// Graph rewriting and causal networks.
    #[command(subcommand)]
    Causal(CausalCmd),
    /// CHSH and GHZ games and thread protocols.
    #[command(subcommand)]
    Games(GamesCmd),
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CaCmd {
    Run(CaRun),
}

#[derive(Args, Serialize)]
struct CaRun {
    #[arg(long)]
    rule: i64,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value = "cyclic")]
    boundary: Boundary,
    /// single, random, or an explicit bitstring.
    #[arg(long, default_value = "single")]
    init: String,
    /// Plain-text P1 bitmap instead of binary P4.
    #[arg(long)]
    ascii: bool,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PreimageCmd {
    /// Level-by-level search for an initial row satisfying a predicate.
    Solve {
        #[arg(long, default_value_t = 110)]
        rule: i64,
        #[arg(long)]
        ending: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value = "always_true")]
        predicate: Predicate,
        #[arg(long, default_value = "cyclic")]
        boundary: Boundary,
    },
    /// Whether some ring reaches the ending in exactly `steps` steps.
    Exact {
        #[arg(long, default_value_t = 110)]
        rule: i64,
        #[arg(long)]
        ending: String,
        #[arg(long)]
        steps: usize,
    },
    /// Predecessor-count statistics over endings.
    Stats {
        #[arg(long, default_value_t = 110)]
        rule: i64,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        steps: usize,
        /// exhaustive or sample:<count>:<seed>.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 10)]
        threshold: u64,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TmCmd {
    /// Longest-running halting machine from a blank tape.
    Bb {
        #[arg(long)]
        states: u8,
        #[arg(long)]
        symbols: u8,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        /// Enumerate one table per symmetry orbit instead of the tree search.
        #[arg(long, conflicts_with = "raw")]
        canonical: bool,
        /// Enumerate every table.
        #[arg(long)]
        raw: bool,
    },
    /// Runs one machine from a blank tape.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TagCmd {
    Run {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = DEFAULT_WORD_CEILING)]
        ceiling: usize,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CausalCmd {
    /// Writes a standard graph: k4, k33, theta, prism:<n>, hex:<w>:<h> or random:<n>.
    Generate {
        #[arg(long)]
        kind: String,
    },
    /// Applies rules under a schedule and records the causal network.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        /// fixed, random, random:<seed> or explicit:<i>,<j>,...
        #[arg(long, default_value = "fixed")]
        schedule: String,
        #[arg(long)]
        steps: usize,
    },
    /// Overlap freedom of a rule set.
    Check {
        #[arg(long)]
        rules: PathBuf,
    },
    /// Compares complete causal networks across schedules.
    Invariance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Ball-growth dimension over a radius window.
    Dimension {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rmin: usize,
        #[arg(long)]
        rmax: usize,
        /// Centre vertices, comma separated; default every vertex.
        #[arg(long, value_delimiter = ',')]
        centers: Vec<u32>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GamesCmd {
    /// Bell-pair protocol with rotation angles for input 1.
    Chsh {
        #[arg(long, num_args = 2, value_names = ["A1", "B1"], allow_negative_numbers = true)]
        angles: Option<Vec<f64>>,
    },
    /// The fixed GHZ protocol on every promise input.
    Ghz,
    /// Best deterministic strategies.
    Classical {
        #[arg(long, value_enum)]
        game: Game,
    },
    /// Runs a thread protocol under both schedules.
    OrderCheck {
        #[arg(long)]
        protocol: PathBuf,
    },
    /// Local strategy of a discrepancy-free protocol.
    Lhv {
        #[arg(long)]
        protocol: PathBuf,
    },
    /// Hidden-bit marginals before and after Alice's updates.
    Marginal {
        #[arg(long)]
        protocol: PathBuf,
    },
    /// Every protocol of the bounded family.
    Sweep,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Game {
    Chsh,
    Ghz,
}

/// Errors that are the caller's fault rather than the computation's.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

enum Artifact {
    Bitmap(Vec<u8>),
    Csv(String),
}

struct Outcome {
    result: Value,
    seed: Option<u64>,
    artifact: Option<Artifact>,
}

impl Outcome {
    fn plain(result: impl Serialize) -> Result<Self> {
        Ok(Outcome { result: serde_json::to_value(result)?, seed: None, artifact: None })
    }

    fn seeded(result: impl Serialize, seed: u64) -> Result<Self> {
        Ok(Outcome { seed: Some(seed), ..Outcome::plain(result)? })
    }
}

/// A bare document, or the `result` of an envelope written by `--out`.
fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if v.get("tool_version").is_some() {
        if let Some(result) = v.get_mut("result") {
            v = result.take();
        }
    }
    serde_json::from_value(v).with_context(|| format!("parsing {}", path.display()))
}

fn read_graph(path: &Path) -> Result<SpaceGraph> {
    Ok(SpaceGraph::from_file(&read_json::<GraphFile>(path)?)?)
}

/// `{"rules": [...]}` or a bare list of rules.
fn read_rules(path: &Path) -> Result<RuleSet> {
    let v: Value = read_json(path)?;
    let set = if v.is_array() { RuleSet::new(serde_json::from_value::<Vec<UpdateRule>>(v)?) } else { serde_json::from_value(v)? };
    Ok(set)
}

fn read_protocol(path: &Path) -> Result<games::ThreadProtocol> {
    let v: Value = read_json(path)?;
    Ok(games::ThreadProtocol::from_json(&v.to_string())?)
}

fn rule(k: i64) -> Result<RuleTable> {
    Ok(RuleTable::from_number(k)?)
}

fn bits(s: &str, boundary: Boundary) -> Result<Configuration> {
    match Configuration::parse(s, boundary) {
        Ok(c) => Ok(c),
        Err(e) => usage(e.to_string()),
    }
}

fn ca_run(a: &CaRun, cli: &Cli, format: Format) -> Result<Outcome> {
    let r = rule(a.rule)?;
    let (initial, seed) = match a.init.as_str() {
        "single" => (Configuration::single(a.width, a.boundary)?, None),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            (Configuration::from_bits((0..a.width).map(|_| rng.gen::<bool>()), a.boundary)?, Some(cli.seed))
        }
        s => {
            let c = bits(s, a.boundary)?;
            if c.len() != a.width {
                return usage(format!("--init has {} cells but --width is {}", c.len(), a.width));
            }
            (c, None)
        }
    };
    let d = evolve(&initial, &r, a.steps);
    let rows: Vec<String> = d.rows().iter().map(Configuration::to_bitstring).collect();
    let column = center_column(&d, None).ok().map(|c| c.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
    let artifact = match format {
        Format::Pgm => Some(Artifact::Bitmap(d.to_pbm(a.ascii))),
        Format::Csv => Some(Artifact::Csv(
            d.rows()
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let cells: Vec<String> = row.iter().map(|b| u8::from(b).to_string()).collect();
                    format!("{i},{}\n", cells.join(","))
                })
                .collect(),
        )),
        Format::Json => None,
    };
    // rows go in the envelope only when no other artifact carries them
    let result = json!({
        "rule": r.number(),
        "width": a.width,
        "steps": a.steps,
        "boundary": a.boundary,
        "first_repeat": d.first_repeat(),
        "center_column": column,
        "rows": if artifact.is_none() { Some(rows) } else { None },
    });
    Ok(Outcome { result, seed, artifact })
}

fn preimage(cmd: &PreimageCmd, cli: &Cli) -> Result<Outcome> {
    match cmd {
        PreimageCmd::Solve { rule: k, ending, steps, bound, predicate, boundary } => {
            let p = InitProblem {
                ending: bits(ending, *boundary)?,
                steps: *steps,
                predicate: predicate.clone(),
                bound: *bound,
                rule: rule(*k)?,
            };
            Outcome::plain(solve_init(&p)?)
        }
        PreimageCmd::Exact { rule: k, ending, steps } => {
            let e = bits(ending, Boundary::Cyclic)?;
            let budget = cli.budget_mem.unwrap_or(DEFAULT_BLOCK_BUDGET);
            let exists = exists_initial_exact_t_with_budget(&e, &rule(*k)?, *steps, budget)?;
            Outcome::plain(json!({ "exists": exists, "budget": budget }))
        }
        PreimageCmd::Stats { rule: k, width, steps, mode, threshold } => {
            let mode = match mode.split(':').collect::<Vec<_>>()[..] {
                ["exhaustive"] => StatsMode::Exhaustive,
                ["sample", count, seed] => match (count.parse(), seed.parse()) {
                    (Ok(count), Ok(seed)) => StatsMode::Sampled { count, seed },
                    _ => return usage(format!("bad --mode {mode:?}")),
                },
                _ => return usage(format!("bad --mode {mode:?}; expected exhaustive or sample:<count>:<seed>")),
            };
            let stats = predecessor_count_stats(*width, *steps, &rule(*k)?, mode, *threshold)?;
            match mode {
                StatsMode::Sampled { seed, .. } => Outcome::seeded(stats, seed),
                StatsMode::Exhaustive => Outcome::plain(stats),
            }
        }
    }
}

fn tm(cmd: &TmCmd) -> Result<Outcome> {
    match cmd {
        TmCmd::Bb { states, symbols, cap, canonical, raw } => {
            let strategy = match (canonical, raw) {
                (true, _) => Strategy::Enumerate(EnumMode::Canonical),
                (_, true) => Strategy::Enumerate(EnumMode::Raw),
                _ => Strategy::Tree,
            };
            Outcome::plain(busy_beaver_search_with(*states, *symbols, *cap, strategy)?)
        }
        TmCmd::Run { machine, cap } => {
            let rows: Vec<MachineRow> = read_json(machine)?;
            let m = TuringMachine::from_rows(&rows)?;
            Outcome::plain(json!({ "machine": m.to_string(), "run": run_tm(&m, *cap) }))
        }
    }
}

fn tag(cmd: &TagCmd) -> Result<Outcome> {
    let TagCmd::Run { system, word, steps, ceiling } = cmd;
    let sys: CyclicTagSystem = read_json(system)?;
    let w: Word = match word.parse() {
        Ok(w) => w,
        Err(e) => return usage(format!("--word: {e}")),
    };
    Outcome::plain(run_cyclic_tag(&sys, &w, *steps, *ceiling)?)
}

fn generate(kind: &str, seed: u64) -> Result<(SpaceGraph, Option<u64>)> {
    let parts: Vec<&str> = kind.split(':').collect();
    let num = |s: &str| -> Result<u32> { s.parse().map_err(|_| Usage(format!("bad number {s:?} in --kind")).into()) };
    let g = match parts[..] {
        ["k4"] => generators::complete4(),
        ["k33"] => generators::complete_bipartite33(),
        ["theta"] => generators::theta(),
        ["prism", n] if num(n)? >= 3 => generators::prism_ladder(num(n)?),
        ["hex", w, h] if [num(w)?, num(h)?].iter().all(|&x| x >= 4 && x % 2 == 0) => {
            generators::hex_torus(num(w)?, num(h)?)
        }
        ["random", n] if num(n)? % 2 == 0 => return Ok((generators::random_trivalent(num(n)?, seed), Some(seed))),
        _ => return usage(format!("bad --kind {kind:?}; expected k4, k33, theta, prism:<n >= 3>, hex:<w>:<h> (even, >= 4) or random:<even n>")),
    };
    Ok((g, None))
}

fn causal(cmd: &CausalCmd, cli: &Cli) -> Result<Outcome> {
    match cmd {
        CausalCmd::Generate { kind } => {
            let (g, seed) = generate(kind, cli.seed)?;
            Ok(Outcome { seed, ..Outcome::plain(g.to_file())? })
        }
        CausalCmd::Build { graph, rules, schedule, steps } => {
            let schedule = match schedule.as_str() {
                "random" => Schedule::Random(cli.seed),
                s => match s.parse() {
                    Ok(s) => s,
                    Err(e) => return usage(format!("--schedule: {e}")),
                },
            };
            let r = causal::build_causal_network(&read_graph(graph)?, &read_rules(rules)?, &schedule, *steps)?;
            let result = json!({
                "schedule": schedule,
                "network": r.network,
                "choices": r.choices,
                "terminated": r.terminated,
                "graph": r.graph.to_file(),
            });
            match schedule {
                Schedule::Random(seed) => Outcome::seeded(result, seed),
                _ => Outcome::plain(result),
            }
        }
        CausalCmd::Check { rules } => Outcome::plain(causal::check_overlap_freedom(&read_rules(rules)?)),
        CausalCmd::Invariance { graph, rules, steps, samples } => {
            let cfg = InvarianceConfig { steps: *steps, samples: *samples, seed: cli.seed, ..InvarianceConfig::default() };
            let v = causal::causal_invariance_test(&read_graph(graph)?, &read_rules(rules)?, &cfg)?;
            Outcome::seeded(v, cli.seed)
        }
        CausalCmd::Dimension { graph, rmin, rmax, centers } => {
            let g = read_graph(graph)?;
            let centers = if centers.is_empty() { g.vertices().collect() } else { centers.clone() };
            Outcome::plain(causal::estimate_dimension(&g, &centers, *rmin, *rmax)?)
        }
    }
}

fn games_cmd(cmd: &GamesCmd) -> Result<Outcome> {
    match cmd {
        GamesCmd::Chsh { angles } => {
            let [a, b] = match angles.as_deref() {
                Some(&[a, b]) => [a, b],
                _ => games::DEFAULT_ANGLES,
            };
            let q = games::chsh_quantum(a, b);
            let closed_form = ([a, b] == games::DEFAULT_ANGLES).then_some("(5+sqrt(2))/8");
            Outcome::plain(json!({ "quantum": q, "closed_form": closed_form }))
        }
        GamesCmd::Ghz => {
            let q = games::ghz_quantum();
            let outside = games::ghz_success(games::GHZ_PROTOCOL, [true; 3]).err().map(|e| e.to_string());
            Outcome::plain(json!({ "quantum": q, "input_111": outside }))
        }
        GamesCmd::Classical { game: Game::Chsh } => Outcome::plain(games::chsh_classical_optimum()),
        GamesCmd::Classical { game: Game::Ghz } => Outcome::plain(games::ghz_classical_exhaustive()),
        GamesCmd::OrderCheck { protocol } => Outcome::plain(games::order_robustness_check(&read_protocol(protocol)?)?),
        GamesCmd::Lhv { protocol } => Outcome::plain(games::lhv_bound_theorem_check(&read_protocol(protocol)?)?),
        GamesCmd::Marginal { protocol } => Outcome::plain(games::marginal_invariance_check(&read_protocol(protocol)?)?),
        GamesCmd::Sweep => Outcome::plain(games::family_sweep()),
    }
}

fn infer_format(cli: &Cli) -> Format {
    cli.format.unwrap_or_else(|| match cli.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("pgm" | "pbm") => Format::Pgm,
        Some("csv") => Format::Csv,
        _ => Format::Json,
    })
}

fn run(cli: &Cli) -> Result<()> {
    let format = infer_format(cli);
    let is_ca = matches!(cli.command, Command::Ca(_));
    if format != Format::Json && !is_ca {
        return usage("--format csv and pgm apply to `ca run` only");
    }
    if format == Format::Pgm && cli.out.is_none() {
        return usage("--format pgm needs --out");
    }
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Ca(CaCmd::Run(a)) => ca_run(a, cli, format)?,
        Command::Preimage(c) => preimage(c, cli)?,
        Command::Tm(c) => tm(c)?,
        Command::Tag(c) => tag(c)?,
        Command::Causal(c) => causal(c, cli)?,
        Command::Games(c) => games_cmd(c)?,
    };
    let wall_time = cli.timing.then(|| start.elapsed().as_secs_f64());
    let envelope = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config": serde_json::to_value(&cli.command)?,
        "seed": outcome.seed,
        "result": outcome.result,
        "wall_time": wall_time,
    });
    let text = serde_json::to_string_pretty(&envelope)? + "\n";
    match (outcome.artifact, &cli.out) {
        (Some(Artifact::Bitmap(b)), Some(path)) => {
            fs::write(path, b).with_context(|| format!("writing {}", path.display()))?;
            if !cli.quiet {
                print!("{text}");
            }
        }
        (Some(Artifact::Csv(s)), Some(path)) => fs::write(path, s).with_context(|| format!("writing {}", path.display()))?,
        (Some(Artifact::Csv(s)), None) => {
            if !cli.quiet {
                print!("{s}");
            }
        }
        (None, Some(path)) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        (None, None) => {
            if !cli.quiet {
                print!("{text}");
            }
        }
        (Some(Artifact::Bitmap(_)), None) => unreachable!("checked above"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}\n\nRun with --help for usage.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
