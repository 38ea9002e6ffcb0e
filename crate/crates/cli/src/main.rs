//! `foresight`: command-line front end for `foresight-core`.
//!
//! Results go to stdout in the formats below; diagnostics go to stderr.
//! Exit codes: 0 success, 1 usage, 2 bad input or unreadable file,
//! 3 an `unknown` or exhausted verdict.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use foresight_core::bundled::parse_word_list;
use foresight_core::distance::Compressor;
use foresight_core::dsl::{parse_dsl, run_dsl_game};
use foresight_core::predict::{cis, randomness_proxy, PredictorSpec, Schedule, DEFAULT_RANDOMNESS_THRESHOLD};
use foresight_core::qim::{
    format_trace, machine_membership, qil_check, qilt_member, sl_search, sw_decide, QilInstance, QimError, SearchMode,
    SearchOutcome,
};
use foresight_core::sim::{run_game, sweep, sweep_csv, trace_csv, GameConfig, Motion, Strategy};
use foresight_core::tm::{enumerate_words, parse_tm, BlockPowers, CanonicalWords, TmSpec, WordList, WordSource};
use foresight_core::{Decision, DistanceOracle, DistanceTable, QimConfig, SelfSimilarState, Threshold, TmVerdict};

#[derive(Parser)]
#[command(name = "foresight", version, about = "Compression-distance acceptors, predictors and a delayed-perception game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Turing machine on one word.
    TmRun {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// List words over an alphabet in length-then-lexicographic order.
    Enum {
        /// Symbols, e.g. `abc`; sorted before use.
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long)]
        count: usize,
    },
    /// Normalized compression distance between two files.
    Ncd {
        #[arg(long)]
        file_a: PathBuf,
        #[arg(long)]
        file_b: PathBuf,
        #[arg(long, default_value = "deflate")]
        compressor: String,
    },
    /// Feed words through a quasi-intuitive acceptor, growing the accepted set.
    Selfsim {
        #[arg(long)]
        machine: PathBuf,
        #[command(flatten)]
        seed: SeedWord,
        /// Word list, one word per line.
        #[arg(long)]
        inputs: PathBuf,
        #[command(flatten)]
        distance: DistanceArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Check an acceptance chain followed by a query word.
    Qil {
        #[arg(long)]
        machine: PathBuf,
        /// Word list, one word per line.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        query: String,
        #[command(flatten)]
        distance: DistanceArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Decide whether (x, y) is a similar-words pair: the machine (a decider) accepts x and d(x, y) < p.
    Sw {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        distance: DistanceArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Search the machine's language for a word within distance p of the query.
    Sl {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        query: String,
        #[command(flatten)]
        distance: DistanceArgs,
        /// Candidate source: `canonical` (all words over the input alphabet),
        /// `powers` (a^n b^n ... over the sorted input alphabet), or a word-list file.
        #[arg(long, default_value = "canonical")]
        source: String,
        /// `filtered` (each candidate run once with --steps) or `dovetailed`.
        #[arg(long, default_value = "filtered")]
        mode: String,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long)]
        search_budget: u64,
        /// Answer membership in level K of the similarity closure instead.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Play one game and print the scores.
    Game {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 0)]
        delay: u64,
        /// Overrides --delay for player P.
        #[arg(long)]
        delay_p: Option<u64>,
        /// Overrides --delay for player Q.
        #[arg(long)]
        delay_q: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-tick trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Mean combined score per delay over a set of seeds.
    Sweep {
        #[command(flatten)]
        game: GameArgs,
        /// Comma-separated, e.g. `0,1,2,5`.
        #[arg(long)]
        delays: String,
        /// Comma-separated values or inclusive ranges, e.g. `1..10` or `1,4,9..12`.
        #[arg(long)]
        seeds: String,
    },
    /// Indicator bits of predicted against real values, one value per line.
    Cis {
        #[arg(long)]
        predicted: PathBuf,
        #[arg(long)]
        real: PathBuf,
        /// Numeric match within this tolerance; exact text match when absent.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compression-ratio randomness proxy for a file of 0/1 characters.
    Randproxy {
        #[arg(long)]
        bits: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANDOMNESS_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value = "deflate")]
        compressor: String,
    },
    /// Play a game with player P driven by a ConsciousJ-lite program.
    DslRun {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value_t = 0)]
        delay: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random_walk")]
        motion: String,
        #[arg(long, default_value_t = 1000)]
        lifespan: u64,
        /// Strategy of the opposing player Q.
        #[arg(long, default_value = "reactive")]
        strategy_q: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeedWord {
    #[arg(long)]
    seed_word: Option<String>,
    /// File whose first line is the seed word.
    #[arg(long)]
    seed_file: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long)]
    p: f64,
    /// Distance table (TSV with a `default:` line).
    #[arg(long, conflicts_with = "compressor")]
    oracle: Option<PathBuf>,
    /// Compressor for NCD when no table is given.
    #[arg(long)]
    compressor: Option<String>,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long, default_value_t = 1000)]
    lifespan: u64,
    /// `random_walk` or `smooth_bounce:VX,VY`.
    #[arg(long, default_value = "random_walk")]
    motion: String,
    /// `reactive` or a predictor: `simple_past`, `ar:ORDER`, `kalman:Q,R`.
    #[arg(long, default_value = "reactive")]
    strategy: String,
    /// Overrides --strategy for player P.
    #[arg(long)]
    strategy_p: Option<String>,
    /// Overrides --strategy for player Q.
    #[arg(long)]
    strategy_q: Option<String>,
    #[arg(long, default_value_t = 80)]
    field_x: i32,
    #[arg(long, default_value_t = 24)]
    field_y: i32,
}

enum Failure {
    Input(String),
    Undetermined(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn machine(path: &Path) -> Result<TmSpec, Failure> {
    parse_tm(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn word_list(path: &Path) -> Result<Vec<Vec<u8>>, Failure> {
    Ok(parse_word_list(&read(path)?))
}

fn oracle(args: &DistanceArgs) -> Result<(Threshold, DistanceOracle), Failure> {
    let p = Threshold::new(args.p)?;
    let oracle = match (&args.oracle, &args.compressor) {
        (Some(path), _) => DistanceOracle::Table(
            DistanceTable::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        ),
        (None, Some(name)) => DistanceOracle::Ncd(Compressor::by_name(name)?),
        (None, None) => DistanceOracle::Ncd(Compressor::default()),
    };
    Ok((p, oracle))
}

fn qim_failure(e: QimError) -> Failure {
    match e {
        QimError::Undetermined(_) | QimError::DeciderContract(_) => Failure::Undetermined(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn decision(d: Decision) -> Outcome {
    match d {
        Decision::Unknown => Err(Failure::Undetermined("unknown".into())),
        other => Ok(format!("{other}\n")),
    }
}

fn motion(text: &str) -> Result<Motion, Failure> {
    let bad = || Failure::Input(format!("bad motion `{text}` (expected random_walk or smooth_bounce:VX,VY)"));
    if text == "random_walk" {
        return Ok(Motion::RandomWalk);
    }
    let (vx, vy) = text.strip_prefix("smooth_bounce:").and_then(|v| v.split_once(',')).ok_or_else(bad)?;
    Ok(Motion::SmoothBounce {
        vx: vx.trim().parse().map_err(|_| bad())?,
        vy: vy.trim().parse().map_err(|_| bad())?,
    })
}

fn strategy(text: &str) -> Result<Strategy, Failure> {
    if text == "reactive" {
        return Ok(Strategy::Reactive);
    }
    let spec: PredictorSpec = text.parse()?;
    Ok(Strategy::Intuitive(Schedule::constant(spec)?))
}

fn base_game(args: &GameArgs) -> Result<GameConfig, Failure> {
    Ok(GameConfig {
        field_x: args.field_x,
        field_y: args.field_y,
        lifespan: args.lifespan,
        motion: motion(&args.motion)?,
        strategy_p: strategy(args.strategy_p.as_deref().unwrap_or(&args.strategy))?,
        strategy_q: strategy(args.strategy_q.as_deref().unwrap_or(&args.strategy))?,
        ..GameConfig::default()
    })
}

fn integers(text: &str, ranges: bool) -> Result<Vec<u64>, Failure> {
    let bad = |part: &str| Failure::Input(format!("bad number or range `{part}` in `{text}`"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) if ranges => {
                let a: u64 = a.parse().map_err(|_| bad(part))?;
                let b: u64 = b.parse().map_err(|_| bad(part))?;
                if a > b {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            _ => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    Ok(out)
}

fn write_trace(path: &Option<PathBuf>, result: &foresight_core::GameResult) -> Result<(), Failure> {
    if let (Some(path), Some(trace)) = (path, &result.trace) {
        fs::write(path, trace_csv(trace)).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn scores(result: &foresight_core::GameResult) -> String {
    format!("points_p,points_q\n{},{}\n", result.points_p, result.points_q)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::TmRun { machine: path, word, budget } => {
            let m = machine(&path)?;
            let outcome = m.run(word.as_bytes(), budget)?;
            let line = format!("{} steps={}\n", outcome.verdict, outcome.steps_used);
            if outcome.verdict == TmVerdict::BudgetExhausted {
                print!("{line}");
                return Err(Failure::Undetermined(format!("budget of {budget} steps exhausted")));
            }
            Ok(line)
        }
        Command::Enum { alphabet, start, count } => {
            let mut symbols = alphabet.into_bytes();
            symbols.sort_unstable();
            let mut out = String::new();
            for w in enumerate_words(&symbols, start, count)? {
                out.push_str(&String::from_utf8_lossy(&w));
                out.push('\n');
            }
            Ok(out)
        }
        Command::Ncd { file_a, file_b, compressor } => {
            let read_bytes = |p: &Path| fs::read(p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())));
            let (a, b) = (read_bytes(&file_a)?, read_bytes(&file_b)?);
            let c = Compressor::by_name(&compressor)?;
            Ok(format!("{}\n", foresight_core::ncd(&c, &a, &b)?))
        }
        Command::Selfsim { machine: path, seed, inputs, distance, budget } => {
            let m = machine(&path)?;
            let seed_word = match (seed.seed_word, seed.seed_file) {
                (Some(w), _) => w.into_bytes(),
                (None, Some(f)) => word_list(&f)?.into_iter().next().unwrap_or_default(),
                (None, None) => unreachable!("clap requires one of the seed flags"),
            };
            let inputs = word_list(&inputs)?;
            let (p, oracle) = oracle(&distance)?;
            let config = QimConfig::new(m, p, oracle, budget).map_err(qim_failure)?;
            // stream the trace so a later undetermined step still shows the earlier ones
            let mut state = SelfSimilarState::new(Arc::new(config), &seed_word).map_err(qim_failure)?;
            let mut steps = Vec::new();
            for (i, r) in inputs.iter().enumerate() {
                match state.advance(r) {
                    Ok((next, outcome)) => {
                        state = next;
                        steps.push(foresight_core::qim::TraceStep {
                            index: i + 1,
                            input: r.clone(),
                            indicator: outcome.indicator,
                            via: outcome.via,
                            accepted: state.accepted().to_vec(),
                        });
                    }
                    Err(e) => {
                        print!("{}", format_trace(&steps));
                        return Err(qim_failure(e));
                    }
                }
            }
            Ok(format_trace(&steps))
        }
        Command::Qil { machine: path, chain, query, distance, budget } => {
            let m = machine(&path)?;
            let (p, oracle) = oracle(&distance)?;
            let instance = QilInstance { chain: word_list(&chain)?, query: query.into_bytes(), machine: m, p };
            decision(qil_check(&instance, &oracle, budget).map_err(qim_failure)?)
        }
        Command::Sw { machine: path, x, y, distance, budget } => {
            let m = machine(&path)?;
            let (p, oracle) = oracle(&distance)?;
            let yes = sw_decide(&m, p, &oracle, x.as_bytes(), y.as_bytes(), budget).map_err(qim_failure)?;
            Ok(if yes { "yes\n" } else { "no\n" }.to_string())
        }
        Command::Sl { machine: path, query, distance, source, mode, steps, search_budget, level } => {
            let m = machine(&path)?;
            let (p, oracle) = oracle(&distance)?;
            let alphabet: Vec<u8> = m.input_alphabet().iter().copied().collect();
            let generator: Box<dyn WordSource> = match source.as_str() {
                "canonical" => Box::new(CanonicalWords::new(&alphabet)?),
                "powers" => Box::new(BlockPowers::new(&alphabet)?),
                file => Box::new(WordList(word_list(Path::new(file))?)),
            };
            if let Some(level) = level {
                let config = QimConfig::new(m, p, oracle, steps).map_err(qim_failure)?;
                let d = qilt_member(&config, query.as_bytes(), level, search_budget, generator.as_ref()).map_err(qim_failure)?;
                return decision(d);
            }
            let mode = match mode.as_str() {
                "filtered" => SearchMode::Filtered { steps },
                "dovetailed" => SearchMode::Dovetailed,
                other => return Err(Failure::Input(format!("unknown search mode `{other}`"))),
            };
            let membership = machine_membership(&m);
            match sl_search(generator.words(), membership, mode, p, &oracle, query.as_bytes(), search_budget) {
                SearchOutcome::Found { witness, index } => {
                    Ok(format!("found\t{}\t{index}\n", String::from_utf8_lossy(&witness)))
                }
                SearchOutcome::Exhausted => {
                    println!("exhausted");
                    Err(Failure::Undetermined(format!("no witness within {search_budget} search units")))
                }
            }
        }
        Command::Game { game, delay, delay_p, delay_q, seed, trace } => {
            let config = GameConfig {
                delay_p: delay_p.unwrap_or(delay),
                delay_q: delay_q.unwrap_or(delay),
                seed,
                record_trace: trace.is_some(),
                ..base_game(&game)?
            };
            let result = run_game(&config)?;
            write_trace(&trace, &result)?;
            Ok(scores(&result))
        }
        Command::Sweep { game, delays, seeds } => {
            let rows = sweep(&base_game(&game)?, &integers(&delays, false)?, &integers(&seeds, true)?)?;
            Ok(sweep_csv(&rows))
        }
        Command::Cis { predicted, real, tol } => {
            let lines = |p: &Path| -> Result<Vec<String>, Failure> {
                Ok(read(p)?.lines().map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect())
            };
            let (pred, real) = (lines(&predicted)?, lines(&real)?);
            let bits = match tol {
                None => cis(&pred, &real, |a, b| a == b),
                Some(t) => {
                    let nums = |v: &[String]| -> Result<Vec<f64>, Failure> {
                        v.iter().map(|s| s.parse().map_err(|_| Failure::Input(format!("not a number: `{s}`")))).collect()
                    };
                    foresight_core::predict::cis_tolerance(&nums(&pred)?, &nums(&real)?, t)
                }
            };
            let hits = bits.iter().filter(|&&b| b).count();
            let mut out: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let rate = if bits.is_empty() { 0.0 } else { hits as f64 / bits.len() as f64 };
            let _ = writeln!(out, "\nlength={} hits={hits} hit_rate={rate:.6}", bits.len());
            Ok(out)
        }
        Command::Randproxy { bits, threshold, compressor } => {
            let text = read(&bits)?;
            let mut values = Vec::new();
            for c in text.chars().filter(|c| !c.is_whitespace()) {
                match c {
                    '0' => values.push(false),
                    '1' => values.push(true),
                    other => return Err(Failure::Input(format!("unexpected character {other:?} in bit file"))),
                }
            }
            let report = randomness_proxy(&values, &Compressor::by_name(&compressor)?, threshold)?;
            Ok(format!("{report}\n"))
        }
        Command::DslRun { program, delay, seed, motion: m, lifespan, strategy_q, trace } => {
            let text = read(&program)?;
            let program = parse_dsl(&text).map_err(|e| Failure::Input(format!("{}:{e}", program.display())))?;
            let base = GameConfig {
                lifespan,
                delay_p: delay,
                delay_q: delay,
                seed,
                motion: motion(&m)?,
                strategy_q: strategy(&strategy_q)?,
                record_trace: trace.is_some(),
                ..GameConfig::default()
            };
            let result = run_dsl_game(&program, &base)?;
            write_trace(&trace, &result)?;
            Ok(scores(&result))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Undetermined(msg)) => {
            eprintln!("undetermined: {msg}");
            ExitCode::from(3)
        }
    }
}
