use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gr1synth::corefind::{find_core, CoreError, CoreOptions, Engine};
use gr1synth::game::CompiledSpec;
use gr1synth::gr1solve::{solve_gr1, SolverOptions};
use gr1synth::harness::{
    family_text, load_corpus, load_file, run_bench, validate_all, write_plan, BenchConfig, CorpusEntry,
    EngineChoice, Family, Symbolic, ValidateOptions,
};
use gr1synth::rabinsolve::solve_rabin;
use gr1synth::strategy::{build_counterstrategy, build_strategy};
use gr1synth::symcore::ExplicitGame;

#[derive(Parser)]
#[command(name = "gr1synth", version, about = "GR(1) realizability, synthesis and unrealizable cores")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct HeuristicFlags {
    /// Early fixed-point detection
    #[arg(long)]
    efp: bool,
    /// Early unrealizability detection
    #[arg(long)]
    eun: bool,
    /// Fixed-point recycling
    #[arg(long)]
    fpr: bool,
}

impl HeuristicFlags {
    fn options(self) -> SolverOptions {
        SolverOptions {
            efp: self.efp,
            eun: self.eun,
            fpr: self.fpr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckWith {
    Gr1,
    Rabin,
}

#[derive(Subcommand)]
enum Cmd {
    /// Realizability verdict and solver counters; exits 1 when unrealizable
    Check {
        #[command(flatten)]
        h: HeuristicFlags,
        /// Solve the environment's dual game instead
        #[arg(long)]
        rabin: bool,
        spec: PathBuf,
    },
    /// Strategy (or counterstrategy when unrealizable) as JSON
    Synth {
        #[command(flatten)]
        h: HeuristicFlags,
        spec: PathBuf,
    },
    /// Locally minimal unrealizable subset of the guarantees
    Core {
        #[command(flatten)]
        h: HeuristicFlags,
        /// Skip candidates contained in a known realizable set
        #[arg(long)]
        sets: bool,
        /// Seed checks from earlier results
        #[arg(long)]
        inc: bool,
        #[arg(long, value_enum, default_value = "gr1")]
        check_with: CheckWith,
        /// Print the check trace instead of the summary
        #[arg(long)]
        trace: bool,
        spec: PathBuf,
    },
    /// Repeated runs over spec files or directories, with ratio quartiles
    Bench {
        #[command(flatten)]
        h: HeuristicFlags,
        /// Benchmark the dual game
        #[arg(long)]
        rabin: bool,
        /// Benchmark both games
        #[arg(long, conflicts_with = "rabin")]
        both: bool,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
        /// Shuffle the order of specifications
        #[arg(long)]
        seed: Option<u64>,
        /// Write per-run rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the full report as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        paths: Vec<PathBuf>,
    },
    /// Cross-checks every heuristic combination; exits 1 on any violation
    Validate {
        /// Skip the core checks
        #[arg(long)]
        no_cores: bool,
        paths: Vec<PathBuf>,
    },
    /// Emits a family member, or the whole corpus with --corpus
    Gen {
        #[arg(required_unless_present = "corpus")]
        family: Option<Family>,
        #[arg(default_value_t = 0)]
        n: u64,
        /// Write the planned corpus below this directory
        #[arg(long, conflicts_with = "family")]
        corpus: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Unrealizable,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unrealizable | Failure::Violations) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path) -> Result<CorpusEntry, Failure> {
    load_file(path).map_err(usage)
}

fn load_paths(paths: &[PathBuf]) -> Result<Vec<CorpusEntry>, Failure> {
    let paths = if paths.is_empty() {
        vec![gr1synth::harness::default_corpus_dir()]
    } else {
        paths.to_vec()
    };
    let mut out = Vec::new();
    for p in &paths {
        if p.is_dir() {
            out.extend(load_corpus(p).map_err(usage)?);
        } else {
            out.push(load(p)?);
        }
    }
    Ok(out)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Check { h, rabin, spec } => {
            let e = load(&spec)?;
            let mut cs = CompiledSpec::compile(&e.spec).map_err(usage)?;
            let g = cs.game();
            let opts = h.options();
            let (realizable, stats, engine) = if rabin {
                let r = solve_rabin(&mut cs.mgr, &g, opts);
                (!r.env_realizable, r.stats, "rabin")
            } else {
                let r = solve_gr1(&mut cs.mgr, &g, opts);
                (r.realizable, r.stats, "gr1")
            };
            let out = json!({
                "spec": e.name,
                "engine": engine,
                "options": opts,
                "realizable": realizable,
                "stats": stats,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            if realizable {
                Ok(())
            } else {
                Err(Failure::Unrealizable)
            }
        }
        Cmd::Synth { h, spec } => {
            let e = load(&spec)?;
            let eg = ExplicitGame::build(&e.spec).map_err(usage)?;
            let mut cs = CompiledSpec::compile(&e.spec).map_err(usage)?;
            let g = cs.game();
            let opts = h.options();
            let r = solve_gr1(&mut cs.mgr, &g, opts);
            if r.realizable {
                let s = build_strategy(&cs.mgr, &g, &eg, &r).map_err(usage)?;
                println!("{}", serde_json::to_string_pretty(&s.to_json(&eg.layout)).expect("json"));
                Ok(())
            } else {
                // early unrealizability leaves the dual memory incomplete
                let opts = SolverOptions { eun: false, ..opts };
                let r = solve_rabin(&mut cs.mgr, &g, opts);
                let s = build_counterstrategy(&mut cs.mgr, &g, &eg, &r).map_err(usage)?;
                println!("{}", serde_json::to_string_pretty(&s.to_json(&eg.layout)).expect("json"));
                Err(Failure::Unrealizable)
            }
        }
        Cmd::Core {
            h,
            sets,
            inc,
            check_with,
            trace,
            spec,
        } => {
            let e = load(&spec)?;
            let opts = CoreOptions {
                sets,
                inc,
                check_with: match check_with {
                    CheckWith::Gr1 => Engine::Gr1,
                    CheckWith::Rabin => Engine::Rabin,
                },
                solver: h.options(),
                retain: None,
            };
            match find_core(&e.spec, opts) {
                Ok(res) => {
                    if trace {
                        println!("{}", res.trace_json());
                    } else {
                        println!("{}", serde_json::to_string_pretty(&res).expect("json"));
                    }
                    Ok(())
                }
                Err(CoreError::NotUnrealizable) => {
                    eprintln!("{}: specification is realizable, no core", e.name);
                    Err(Failure::Unrealizable)
                }
                Err(err) => Err(usage(err)),
            }
        }
        Cmd::Bench {
            h,
            rabin,
            both,
            reps,
            seed,
            csv,
            json,
            paths,
        } => {
            let entries = load_paths(&paths)?;
            let opts = h.options();
            let matrix = if opts == SolverOptions::BASELINE {
                SolverOptions::all()
            } else {
                vec![opts]
            };
            let cfg = BenchConfig {
                engine: match (rabin, both) {
                    (_, true) => EngineChoice::Both,
                    (true, _) => EngineChoice::Rabin,
                    _ => EngineChoice::Gr1,
                },
                matrix,
                reps: reps as usize,
                order_seed: seed,
            };
            let report = run_bench(&entries, &cfg).map_err(usage)?;
            if let Some(p) = csv {
                let f = fs::File::create(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                report.write_csv(f).map_err(usage)?;
            }
            if let Some(p) = json {
                fs::write(&p, report.to_json()).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            }
            print!("{}", report.quartile_table());
            Ok(())
        }
        Cmd::Validate { no_cores, paths } => {
            let entries = load_paths(&paths)?;
            let vo = ValidateOptions {
                cores: !no_cores,
                ..Default::default()
            };
            let report = validate_all(&entries, &Symbolic, vo);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", report.to_json());
            if report.pass() {
                Ok(())
            } else {
                Err(Failure::Violations)
            }
        }
        Cmd::Gen {
            family,
            n,
            corpus,
            out,
        } => {
            if let Some(root) = corpus {
                for p in write_plan(&root).map_err(usage)? {
                    println!("{}", p.display());
                }
                return Ok(());
            }
            let family = family.expect("clap requires a family");
            emit(family_text(n, family).trim_end(), out.as_deref())
        }
    }
}
