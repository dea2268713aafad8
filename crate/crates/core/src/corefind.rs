//! Unrealizable-core search: delta debugging over the system guarantees,
//! with contained-set skipping, incremental solver seeding and an option to
//! decide each check with the dual game.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{check_initial_win_env, check_initial_win_sys, CompileError, CompiledSpec, GameStructure};
use crate::gr1solve::{solve_gr1_seeded, Gr1Seed, JusticeRecord, SolveStats, SolverOptions};
use crate::rabinsolve::{solve_rabin_seeded, RabinSeed};
use crate::speclang::{Specification, Temporal};
use crate::symcore::{Bdd, DdManager};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Gr1,
    Rabin,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreOptions {
    pub sets: bool,
    pub inc: bool,
    pub check_with: Engine,
    pub solver: SolverOptions,
    /// Upper bound on realizable winning sets kept for seeding; `None`
    /// keeps all of them.
    pub retain: Option<usize>,
}

impl CoreOptions {
    /// The eight combinations of sets, inc and check_with.
    pub fn all(solver: SolverOptions) -> Vec<CoreOptions> {
        (0..8u8)
            .map(|b| CoreOptions {
                sets: b & 1 != 0,
                inc: b & 2 != 0,
                check_with: if b & 4 != 0 { Engine::Rabin } else { Engine::Gr1 },
                solver,
                retain: None,
            })
            .collect()
    }
}

/// Which loop of the minimization issued a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DdLine {
    Subset,
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Unreal,
    Real,
    SkippedSubset,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeedKind {
    #[default]
    None,
    ReuseZ,
    SeedY,
    ReusePrefix,
    SeedZ,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub candidate: Vec<String>,
    pub line: DdLine,
    pub n: usize,
    pub verdict: Verdict,
    pub seed: SeedKind,
    pub stats: Option<SolveStats>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreResult {
    pub core: Vec<String>,
    pub trace: Vec<CheckEntry>,
    pub checks_run: usize,
    pub checks_skipped: usize,
}

impl CoreResult {
    pub fn trace_json(&self) -> String {
        serde_json::to_string_pretty(&self.trace).expect("trace serializes")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("specification is not unrealizable")]
    NotUnrealizable,
}

/// Splits `e` into `n` contiguous chunks; the first `|e| mod n` chunks get
/// one extra element.
pub fn partition<T: Clone>(e: &[T], n: usize) -> Vec<Vec<T>> {
    let n = n.clamp(1, e.len().max(1));
    let (base, extra) = (e.len() / n, e.len() % n);
    let mut out = Vec::with_capacity(n);
    let mut at = 0;
    for k in 0..n {
        let len = base + usize::from(k < extra);
        out.push(e[at..at + len].to_vec());
        at += len;
    }
    out
}

/// Delta debugging: a locally minimal subset of `e` on which `check` holds,
/// assuming it holds on `e` and is monotone. `check` also receives the
/// loop that issued it and the current granularity.
pub fn ddmin<T: Clone + PartialEq>(e: &[T], mut check: impl FnMut(&[T], DdLine, usize) -> bool) -> Vec<T> {
    let mut e = e.to_vec();
    let mut n = 2usize;
    'search: loop {
        if n > e.len() {
            return e;
        }
        let parts = partition(&e, n);
        for part in &parts {
            if check(part, DdLine::Subset, n) {
                e = part.clone();
                n = 2;
                continue 'search;
            }
        }
        for part in &parts {
            let rest: Vec<T> = e.iter().filter(|x| !part.contains(x)).cloned().collect();
            if check(&rest, DdLine::Complement, n) {
                e = rest;
                n = (n - 1).max(2);
                continue 'search;
            }
        }
        if n >= e.len() {
            return e;
        }
        n = (2 * n).min(e.len());
    }
}

/// Plain unrealizability check of the game with all assumptions and the
/// given guarantees.
pub fn check_unrealizable(
    cs: &mut CompiledSpec,
    guarantees: &[usize],
    engine: Engine,
    opts: SolverOptions,
) -> (bool, SolveStats) {
    let g = cs.game_for(guarantees);
    match engine {
        Engine::Gr1 => {
            let r = solve_gr1_seeded(&mut cs.mgr, &g, opts, Gr1Seed::None);
            (!r.realizable, r.stats)
        }
        Engine::Rabin => {
            let r = solve_rabin_seeded(&mut cs.mgr, &g, opts, RabinSeed::None);
            (r.env_realizable, r.stats)
        }
    }
}

/// What a solved candidate leaves behind for later checks.
#[derive(Debug, Clone)]
struct Solved {
    unreal: bool,
    /// System winning states (GR(1)) or environment winning states
    /// (Rabin(1)); only kept when exact.
    winning: Option<Bdd>,
    js_source: Vec<Option<usize>>,
    first_sweep: Vec<JusticeRecord>,
}

enum Directive {
    None,
    ReuseZ(Bdd),
    SeedY(Bdd),
    Prefix(Vec<JusticeRecord>),
    SeedZ(Bdd),
}

impl Directive {
    fn kind(&self) -> SeedKind {
        match self {
            Directive::None => SeedKind::None,
            Directive::ReuseZ(_) => SeedKind::ReuseZ,
            Directive::SeedY(_) => SeedKind::SeedY,
            Directive::Prefix(_) => SeedKind::ReusePrefix,
            Directive::SeedZ(_) => SeedKind::SeedZ,
        }
    }
}

pub struct CoreSearch<'a> {
    cs: &'a mut CompiledSpec,
    opts: CoreOptions,
    trace: Vec<CheckEntry>,
    realizable: Vec<Vec<usize>>,
    solved: HashMap<Vec<usize>, Solved>,
    /// Realizable candidates with an exact winning set, oldest first.
    seeds: Vec<(Vec<usize>, Bdd)>,
}

impl<'a> CoreSearch<'a> {
    pub fn new(cs: &'a mut CompiledSpec, opts: CoreOptions) -> Self {
        CoreSearch {
            cs,
            opts,
            trace: Vec::new(),
            realizable: Vec::new(),
            solved: HashMap::new(),
            seeds: Vec::new(),
        }
    }

    /// Minimizes the full guarantee set.
    pub fn run(mut self) -> Result<CoreResult, CoreError> {
        let all = self.cs.spec.guarantee_indices();
        let (unreal, _) = self.solve(&all, Directive::None);
        if !unreal {
            return Err(CoreError::NotUnrealizable);
        }
        let mut parent = all.clone();
        // ddmin only narrows to sets found unrealizable, so the last such set
        // contains every later candidate
        let core = ddmin(&all, |cand, line, n| {
            let unreal = self.check(cand, line, n, &parent);
            if unreal {
                parent = cand.to_vec();
            }
            unreal
        });
        let spec = &self.cs.spec;
        let checks_skipped = self
            .trace
            .iter()
            .filter(|t| t.verdict == Verdict::SkippedSubset)
            .count();
        Ok(CoreResult {
            core: core.iter().map(|&i| spec.label(i)).collect(),
            checks_run: self.trace.len() - checks_skipped,
            checks_skipped,
            trace: self.trace,
        })
    }

    fn check(&mut self, cand: &[usize], line: DdLine, n: usize, parent: &[usize]) -> bool {
        let labels: Vec<String> = cand.iter().map(|&i| self.cs.spec.label(i)).collect();
        if self.opts.sets && self.realizable.iter().any(|r| cand.iter().all(|c| r.contains(c))) {
            self.trace.push(CheckEntry {
                candidate: labels,
                line,
                n,
                verdict: Verdict::SkippedSubset,
                seed: SeedKind::None,
                stats: None,
            });
            return false;
        }
        let directive = if self.opts.inc {
            self.directive(cand, line, parent)
        } else {
            Directive::None
        };
        let seed = directive.kind();
        let (unreal, stats) = self.solve(cand, directive);
        self.trace.push(CheckEntry {
            candidate: labels,
            line,
            n,
            verdict: if unreal { Verdict::Unreal } else { Verdict::Real },
            seed,
            stats: Some(stats),
        });
        unreal
    }

    fn directive(&mut self, cand: &[usize], line: DdLine, parent: &[usize]) -> Directive {
        if line == DdLine::Complement {
            let found: Vec<Bdd> = self
                .seeds
                .iter()
                .filter(|(s, _)| s.iter().all(|x| cand.contains(x)))
                .map(|(_, w)| *w)
                .collect();
            if !found.is_empty() {
                let m = &mut self.cs.mgr;
                let seed = match self.opts.check_with {
                    Engine::Gr1 => found.iter().fold(m.one(), |acc, &w| m.and(acc, w)),
                    Engine::Rabin => found.iter().fold(m.zero(), |acc, &w| m.or(acc, w)),
                };
                return Directive::SeedZ(seed);
            }
        }
        let Some(p) = self.solved.get(parent).cloned() else {
            return Directive::None;
        };
        let removed: Vec<Temporal> = parent
            .iter()
            .filter(|x| !cand.contains(x))
            .map(|&x| self.cs.spec.constraints[x].temporal)
            .collect();
        let only = |t: Temporal| !removed.is_empty() && removed.iter().all(|&r| r == t);
        let gr1 = self.opts.check_with == Engine::Gr1;
        if only(Temporal::Init) {
            p.winning.map_or(Directive::None, Directive::ReuseZ)
        } else if only(Temporal::Safety) && gr1 {
            p.winning.map_or(Directive::None, Directive::SeedY)
        } else if only(Temporal::Justice) && gr1 {
            let child = self.cs.game_for(cand);
            let k = p
                .js_source
                .iter()
                .zip(&child.js_source)
                .take_while(|(a, b)| a == b)
                .count()
                .min(p.first_sweep.len());
            if k == 0 {
                Directive::None
            } else {
                Directive::Prefix(p.first_sweep[..k].to_vec())
            }
        } else {
            Directive::None
        }
    }

    /// Runs the configured engine on one candidate and records what later
    /// checks may reuse.
    fn solve(&mut self, cand: &[usize], directive: Directive) -> (bool, SolveStats) {
        let g = self.cs.game_for(cand);
        let opts = self.opts.solver;
        let mgr = &mut self.cs.mgr;
        let solved = match (self.opts.check_with, directive) {
            (engine, Directive::ReuseZ(w)) => reuse_z(mgr, &g, engine, w),
            (Engine::Gr1, d) => {
                let (seed, seeded_z) = match d {
                    Directive::SeedY(w) => (Gr1Seed::YInit(w), false),
                    Directive::Prefix(p) => (Gr1Seed::Prefix(p), false),
                    Directive::SeedZ(w) => (Gr1Seed::ZInit(w), true),
                    _ => (Gr1Seed::None, false),
                };
                let r = solve_gr1_seeded(mgr, &g, opts, seed);
                let solved = Solved {
                    unreal: !r.realizable,
                    winning: r.memory.complete.then_some(r.winning),
                    js_source: g.js_source.clone(),
                    first_sweep: if seeded_z { Vec::new() } else { r.first_sweep },
                };
                (solved, r.stats)
            }
            (Engine::Rabin, d) => {
                let seed = match d {
                    Directive::SeedZ(w) => RabinSeed::ZInit(w),
                    _ => RabinSeed::None,
                };
                let r = solve_rabin_seeded(mgr, &g, opts, seed);
                let solved = Solved {
                    unreal: r.env_realizable,
                    winning: r.memory.complete.then_some(r.winning),
                    js_source: g.js_source.clone(),
                    first_sweep: Vec::new(),
                };
                (solved, r.stats)
            }
        };
        let (solved, stats) = solved;
        let unreal = solved.unreal;
        if !unreal {
            self.realizable.push(cand.to_vec());
            if let Some(w) = solved.winning {
                self.seeds.push((cand.to_vec(), w));
                if let Some(cap) = self.opts.retain {
                    while self.seeds.len() > cap {
                        self.seeds.remove(0);
                    }
                }
            }
        }
        self.solved.insert(cand.to_vec(), solved);
        (unreal, stats)
    }
}

/// Only initial guarantees differ from the parent, so the winning states
/// are the parent's and only the initial check needs redoing.
fn reuse_z(mgr: &mut DdManager, g: &GameStructure, engine: Engine, w: Bdd) -> (Solved, SolveStats) {
    let unreal = match engine {
        Engine::Gr1 => !check_initial_win_sys(mgr, g, w),
        Engine::Rabin => check_initial_win_env(mgr, g, w),
    };
    let solved = Solved {
        unreal,
        winning: Some(w),
        js_source: g.js_source.clone(),
        first_sweep: Vec::new(),
    };
    (solved, SolveStats::default())
}

/// Compiles `spec` and minimizes its guarantees.
pub fn find_core(spec: &Specification, opts: CoreOptions) -> Result<CoreResult, CoreError> {
    let mut cs = CompiledSpec::compile(spec)?;
    CoreSearch::new(&mut cs, opts).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speclang::parse_spec;

    #[test]
    fn partition_is_contiguous() {
        assert_eq!(partition(&[1, 2, 3, 4, 5], 2), vec![vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(partition(&[1, 2, 3], 3), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(partition(&[1, 2, 3, 4, 5], 3), vec![vec![1, 2], vec![3, 4], vec![5]]);
    }

    #[test]
    fn singleton_needs_no_checks() {
        let mut calls = 0;
        let out = ddmin(&["g1"], |_, _, _| {
            calls += 1;
            true
        });
        assert_eq!(out, vec!["g1"]);
        assert_eq!(calls, 0);
    }

    #[test]
    fn ddmin_finds_pair() {
        let e: Vec<u32> = (0..8).collect();
        let out = ddmin(&e, |c, _, _| c.contains(&2) && c.contains(&6));
        assert_eq!(out, vec![2, 6]);
    }

    #[test]
    fn realizable_spec_is_rejected() {
        let spec = parse_spec("sys boolean g; gar GF g;").unwrap();
        assert_eq!(find_core(&spec, CoreOptions::default()), Err(CoreError::NotUnrealizable));
    }

    #[test]
    fn empty_subset_is_realizable() {
        let spec = parse_spec("env boolean r; sys boolean g; gar G g = next(r);").unwrap();
        let mut cs = CompiledSpec::compile(&spec).unwrap();
        for engine in [Engine::Gr1, Engine::Rabin] {
            assert!(!check_unrealizable(&mut cs, &[], engine, SolverOptions::BASELINE).0);
            assert!(check_unrealizable(&mut cs, &[0], engine, SolverOptions::BASELINE).0);
        }
    }
}
