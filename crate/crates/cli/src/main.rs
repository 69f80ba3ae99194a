use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use timetrail::bench::{self, BenchConfig, Suite};
use timetrail::debruijn::{build_dbg, Alphabet};
use timetrail::format;
use timetrail::generate::{self, DbgProfile, Profile};
use timetrail::privacy::{self, AnonymityQuery};
use timetrail::reductions::{self, DEFAULT_REDUCTION_BUDGET};
use timetrail::solve::{Distinct, EngineChoice, SolveOptions, Solver};
use timetrail::{Error, Orientation, TimedGraph, TrailResult};

#[derive(Parser)]
#[command(
    name = "timetrail",
    version,
    about = "Eulerian trails under time-window and cost constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct EngineArgs {
    /// Instance file (`-` for stdin).
    instance: PathBuf,
    /// general, dbg, oracle or auto.
    #[arg(long, default_value = "auto")]
    solver: String,
    /// Count trails by node sequence (`nodes`) or by edge ids (`edges`).
    #[arg(long, default_value = "nodes")]
    distinct: String,
    /// Give up after building this many states.
    #[arg(long)]
    max_states: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HardKind {
    Dhp,
    Uhp,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Graph,
    Dbg,
}

#[derive(Subcommand)]
enum Command {
    /// Print YES if a valid trail exists (within the budget, if any).
    Decide(EngineArgs),
    /// Print a minimum-cost trail.
    Solve(EngineArgs),
    /// Print the minimum cost and the number of trails attaining it.
    Count(EngineArgs),
    /// List minimum-cost trails.
    Enumerate {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check a trail file against an instance.
    Verify { instance: PathBuf, trail: PathBuf },
    /// Build the de Bruijn graph of a strings file.
    BuildDbg {
        strings: PathBuf,
        #[arg(short)]
        k: usize,
        /// `<kmer> <lo>:<hi>` lines.
        #[arg(long)]
        knowledge: Option<PathBuf>,
        /// Letters in order, e.g. `ACGT`; inferred when omitted.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a hardness instance from a source graph.
    GenHard {
        kind: HardKind,
        source: PathBuf,
        /// Hamiltonian path (node tokens) to turn into a witness trail.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Maximum number of edges of a directed instance.
        #[arg(long, default_value_t = DEFAULT_REDUCTION_BUDGET)]
        budget: usize,
    },
    /// Generate a random instance with a planted trail.
    GenRandom {
        #[arg(long, value_enum, default_value = "graph")]
        kind: RandomKind,
        #[arg(long)]
        undirected: bool,
        #[arg(long, default_value_t = 5)]
        nodes: usize,
        #[arg(long, default_value_t = 8)]
        edges: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// Cost range `lo:hi`; produces a cost instance.
        #[arg(long, allow_hyphen_values = true)]
        costs: Option<String>,
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[arg(short, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the planted trail here.
        #[arg(long)]
        trail: Option<PathBuf>,
    },
    /// Run a benchmark suite (`bounds` or `perf`).
    Bench {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        no_timing: bool,
        #[arg(long, default_value_t = 4_000_000)]
        max_states: usize,
    },
    /// Release a z-anonymous reconstruction of the string in a file.
    Anonymize {
        secret: PathBuf,
        #[arg(short)]
        z: u64,
        #[arg(long)]
        knowledge: Option<PathBuf>,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn load(path: &Path) -> Result<TimedGraph, Failure> {
    Ok(format::parse_instance(&read(path)?)?)
}

fn solver_options(args: &EngineArgs) -> Result<SolveOptions, Failure> {
    Ok(SolveOptions {
        engine: args.solver.parse::<EngineChoice>()?,
        distinct: args.distinct.parse::<Distinct>()?,
        max_states: args.max_states,
    })
}

fn trail_line(g: &TimedGraph, t: &TrailResult) -> String {
    let ids = format::write_trail(&t.edges);
    match (g.is_directed(), t.walk.first()) {
        (false, Some(&start)) => format!("{}: {ids}", g.node_token(start)),
        _ => ids,
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Lib(Error::Unsupported(format!("cost range `{s}`")));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Decide(args) => {
            let g = load(&args.instance)?;
            let yes = Solver::new(&g, &solver_options(&args)?)?.decide()?;
            emit(None, if yes { "YES\n" } else { "NO\n" })?;
            Ok(yes)
        }
        Command::Solve(args) => {
            let g = load(&args.instance)?;
            match Solver::new(&g, &solver_options(&args)?)?.solve()? {
                Some(t) => {
                    emit(
                        None,
                        &format!("cost {}\n{}", t.cost.unwrap_or(0), trail_line(&g, &t)),
                    )?;
                    Ok(true)
                }
                None => {
                    emit(None, "INFEASIBLE\n")?;
                    Ok(false)
                }
            }
        }
        Command::Count(args) => {
            let g = load(&args.instance)?;
            let opt = Solver::new(&g, &solver_options(&args)?)?.count()?;
            let cost = opt.cost.map_or("INFEASIBLE".to_string(), |c| c.to_string());
            emit(None, &format!("{}\ncost {cost}\n", opt.count))?;
            Ok(opt.feasible())
        }
        Command::Enumerate { engine, limit } => {
            let g = load(&engine.instance)?;
            let trails = Solver::new(&g, &solver_options(&engine)?)?.enumerate(limit)?;
            let text: String = trails.iter().map(|t| trail_line(&g, t)).collect();
            emit(None, &text)?;
            Ok(!trails.is_empty())
        }
        Command::Verify { instance, trail } => {
            let g = load(&instance)?;
            let edges = format::parse_trail(&read(&trail)?)?;
            let r = g.validate_trail(&edges)?;
            match r.cost {
                Some(c) if r.valid => emit(None, &format!("VALID cost {c}\n"))?,
                _ => emit(None, "INVALID\n")?,
            }
            Ok(r.valid)
        }
        Command::BuildDbg {
            strings,
            k,
            knowledge,
            alphabet,
            output,
        } => {
            let strings = format::parse_strings(&read(&strings)?)?;
            let alphabet = alphabet.map(|a| Alphabet::new(a.chars())).transpose()?;
            let mut dbg = build_dbg(&strings, k, alphabet.as_ref())?;
            if let Some(path) = knowledge {
                let know = format::parse_knowledge(&read(&path)?)?;
                dbg = dbg.knowledge_to_intervals(&know)?;
            }
            emit(output.as_deref(), &format::write_instance(dbg.base()))?;
            Ok(true)
        }
        Command::GenHard {
            kind,
            source,
            path,
            output,
            witness,
            budget,
        } => {
            let mut src = format::parse_source_graph(&read(&source)?)?;
            src.directed = matches!(kind, HardKind::Dhp);
            let art = match kind {
                HardKind::Dhp => reductions::reduce_dhp_to_diet(&src, budget)?,
                HardKind::Uhp => reductions::reduce_uhp_to_uicet(&src)?,
            };
            emit(output.as_deref(), &format::write_instance(art.graph()))?;
            if let Some(p) = path {
                let hampath = format::parse_node_path(&read(&p)?, &src)?;
                let trail = match kind {
                    HardKind::Dhp => reductions::dhp_witness(&art, &hampath)?,
                    HardKind::Uhp => reductions::uhp_witness(&art, &hampath)?,
                };
                let text = format::write_trail(&trail.edges);
                match witness {
                    Some(w) => emit(Some(&w), &text)?,
                    None => eprint!("witness: {text}"),
                }
            }
            Ok(true)
        }
        Command::GenRandom {
            kind,
            undirected,
            nodes,
            edges,
            width,
            costs,
            simple,
            alphabet,
            k,
            seed,
            output,
            trail,
        } => {
            let costs = costs.as_deref().map(parse_range).transpose()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, planted) = match kind {
                RandomKind::Graph => {
                    let profile = Profile {
                        orientation: if undirected {
                            Orientation::Undirected
                        } else {
                            Orientation::Directed
                        },
                        nodes,
                        edges,
                        width,
                        costs,
                        simple,
                        allow_loops: !simple,
                    };
                    let p = generate::planted_instance(&profile, &mut rng)?;
                    (p.graph, p.trail)
                }
                RandomKind::Dbg => {
                    let profile = DbgProfile {
                        alphabet: Alphabet::new(alphabet.chars())?,
                        k,
                        edges,
                        width,
                        costs,
                        blocks: None,
                        exact_width: false,
                    };
                    let p = generate::planted_dbg(&profile, &mut rng)?;
                    let dbg = generate::equalize_parallel_costs(&p.dbg)?;
                    (dbg.into_base(), p.trail)
                }
            };
            emit(output.as_deref(), &format::write_instance(&g))?;
            if let Some(t) = trail {
                emit(Some(&t), &format::write_trail(&planted))?;
            }
            Ok(true)
        }
        Command::Bench {
            suite,
            seed,
            no_timing,
            max_states,
        } => {
            let suite: Suite = suite.parse()?;
            let rows = bench::run_suite(suite, &BenchConfig { seed, max_states })?;
            emit(None, &bench::render(&rows, !no_timing))?;
            Ok(true)
        }
        Command::Anonymize {
            secret,
            z,
            knowledge,
            k_min,
            k_max,
            seed,
        } => {
            let text = read(&secret)?;
            let secret = format::parse_strings(&text)?
                .into_iter()
                .next()
                .ok_or_else(|| Failure::Io("secret file is empty".into()))?;
            let len = secret.chars().count();
            let mut q = AnonymityQuery::new(secret, z);
            q.seed = seed;
            q.k_range = Some((k_min.unwrap_or(2), k_max.unwrap_or(len.saturating_sub(1))));
            if let Some(p) = knowledge {
                q.knowledge = format::parse_knowledge(&read(&p)?)?;
            }
            match privacy::anonymize(&q) {
                Ok(r) => {
                    emit(
                        None,
                        &format!(
                            "k {}\ncount {}\nreleased {}\nengine {}\n",
                            r.k, r.count, r.released, r.engine
                        ),
                    )?;
                    Ok(true)
                }
                Err(Error::NoSuchK { .. }) => {
                    emit(None, "NONE\n")?;
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let budget = matches!(
                e,
                Error::SolverBudgetExceeded(_)
                    | Error::SizeBudgetExceeded(_)
                    | Error::CapExceeded { .. }
            );
            ExitCode::from(if budget { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
