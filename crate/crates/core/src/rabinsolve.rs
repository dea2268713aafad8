//! Environment winning states of the dual (Rabin(1)) game, with the same
//! three heuristics as the GR(1) solver.

use crate::game::{check_initial_win_env, cpre_env, GameStructure};
use crate::gr1solve::{SolveStats, SolverOptions, StopReason, XCellTrace};
use crate::symcore::{Bdd, DdManager};

#[derive(Debug, Clone)]
pub struct RabinMemory {
    /// `z_cells[cz]`: the Y fixed point added to Z at step `cz`.
    pub z_cells: Vec<Bdd>,
    /// Guarantee justice handled at each step.
    pub z_justice: Vec<usize>,
    /// Z after each step.
    pub union_history: Vec<Bdd>,
    /// `x_cells[cz][i]`: increasing X chain of the last Y iteration.
    pub x_cells: Vec<Vec<Vec<Bdd>>>,
    /// `recycle_cache[j][i][cy]`: X chain from the last time (j, i, cy)
    /// ran; only filled with fpr.
    pub recycle_cache: Vec<Vec<Vec<Vec<Bdd>>>>,
    /// Z the run started from; ⊥ unless seeded.
    pub z_init: Bdd,
    pub complete: bool,
}

impl RabinMemory {
    /// Union of all cells before step `cz`, including the start value.
    pub fn z_before(&self, mgr: &mut DdManager, cz: usize) -> Bdd {
        if cz == 0 {
            self.z_init
        } else {
            mgr.or(self.union_history[cz - 1], self.z_init)
        }
    }
}

#[derive(Debug, Clone)]
pub enum RabinSeed {
    None,
    /// Start Z above ⊥ from a known under-approximation of the
    /// environment winning states.
    ZInit(Bdd),
}

#[derive(Debug, Clone)]
pub struct RabinResult {
    pub winning: Bdd,
    /// True iff the environment wins from some initial input.
    pub env_realizable: bool,
    pub memory: RabinMemory,
    pub stats: SolveStats,
}

pub fn solve_rabin(mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> RabinResult {
    solve_rabin_seeded(mgr, g, opts, RabinSeed::None)
}

pub fn solve_rabin_seeded(mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions, seed: RabinSeed) -> RabinResult {
    let z_init = match seed {
        RabinSeed::None => mgr.zero(),
        RabinSeed::ZInit(s) => s,
    };
    let run = Run {
        mgr,
        g,
        opts,
        stats: SolveStats::default(),
        memory: RabinMemory {
            z_cells: Vec::new(),
            z_justice: Vec::new(),
            union_history: Vec::new(),
            x_cells: Vec::new(),
            recycle_cache: vec![vec![Vec::new(); g.n()]; g.m()],
            z_init,
            complete: true,
        },
    };
    run.solve()
}

struct Run<'a> {
    mgr: &'a mut DdManager,
    g: &'a GameStructure,
    opts: SolverOptions,
    stats: SolveStats,
    memory: RabinMemory,
}

impl Run<'_> {
    fn cpre(&mut self, r: Bdd) -> Bdd {
        self.stats.cpre_calls += 1;
        cpre_env(self.mgr, self.g, r)
    }

    fn finish(self, winning: Bdd, stop: StopReason) -> RabinResult {
        let Run {
            mgr,
            g,
            mut stats,
            mut memory,
            ..
        } = self;
        stats.stop_reason = stop;
        let env_realizable = match stop {
            StopReason::EarlyUnreal => {
                memory.complete = false;
                true
            }
            _ => check_initial_win_env(mgr, g, winning),
        };
        RabinResult {
            winning,
            env_realizable,
            memory,
            stats,
        }
    }

    fn solve(mut self) -> RabinResult {
        let m = self.g.m();
        let mut z = self.memory.z_init;
        if !self.mgr.is_zero(z) && check_initial_win_env(self.mgr, self.g, z) {
            return self.finish(z, StopReason::EarlyUnreal);
        }
        let mut sweep = 0u32;
        loop {
            sweep += 1;
            self.stats.z_sweeps += 1;
            let sweep_start = z;
            for j in 0..m {
                self.stats.js_body_executions += 1;
                let (y, chains) = self.justice(sweep, j, z);
                z = self.mgr.or(z, y);
                self.memory.z_cells.push(y);
                self.memory.z_justice.push(j);
                self.memory.union_history.push(z);
                self.memory.x_cells.push(chains);
                let cz = self.memory.union_history.len() - 1;
                if self.opts.efp && cz >= m && self.memory.union_history[cz - m] == z {
                    return self.finish(z, StopReason::EarlyFixpoint);
                }
                if self.opts.eun && check_initial_win_env(self.mgr, self.g, z) {
                    return self.finish(z, StopReason::EarlyUnreal);
                }
            }
            if z == sweep_start {
                return self.finish(z, StopReason::Fixpoint);
            }
        }
    }

    /// One body of the loop over system justices: the Y fixed point and
    /// the X chains of its last iteration.
    fn justice(&mut self, sweep: u32, j: usize, z: Bdd) -> (Bdd, Vec<Vec<Bdd>>) {
        let n = self.g.n();
        let pz = self.cpre(z);
        let not_js = self.mgr.not(self.g.js[j]);
        let recycle = self.opts.fpr && sweep > 1;
        let mut cache: Vec<Vec<Vec<Bdd>>> = vec![Vec::new(); if self.opts.fpr { n } else { 0 }];
        let mut y = self.mgr.one();
        let mut cy = 0usize;
        loop {
            self.stats.y_iterations += 1;
            let py = self.cpre(y);
            let start = self.mgr.and(not_js, py);
            let mut new_y = self.mgr.one();
            let mut chains = Vec::with_capacity(n);
            for i in 0..n {
                let ej = self.mgr.and(self.g.je[i], start);
                let pre = self.mgr.or(pz, ej);
                let mut chain = match self.memory.recycle_cache[j].get(i) {
                    Some(old) if recycle && !old.is_empty() => old[cy.min(old.len() - 1)].clone(),
                    _ => Vec::new(),
                };
                let mut x = chain.last().copied().unwrap_or_else(|| self.mgr.zero());
                let mut iterations = 0u32;
                loop {
                    iterations += 1;
                    self.stats.x_iterations += 1;
                    let px = self.cpre(x);
                    let stay = self.mgr.and(not_js, px);
                    let nx = self.mgr.or(pre, stay);
                    if chain.last() != Some(&nx) {
                        chain.push(nx);
                    }
                    if nx == x {
                        break;
                    }
                    x = nx;
                }
                new_y = self.mgr.and(new_y, x);
                if let Some(c) = cache.get_mut(i) {
                    c.push(chain.clone());
                }
                chains.push(chain);
                self.stats.x_trace.push(XCellTrace {
                    sweep,
                    j: j as u32,
                    i: i as u32,
                    cy: cy as u32,
                    iterations,
                });
            }
            if new_y == y {
                if self.opts.fpr {
                    self.memory.recycle_cache[j] = cache;
                }
                return (y, chains);
            }
            y = new_y;
            cy += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CompiledSpec;
    use crate::gr1solve::solve_gr1;
    use crate::speclang::parse_spec;

    fn both(text: &str, opts: SolverOptions) -> (bool, bool, bool) {
        let spec = parse_spec(text).unwrap();
        let mut cs = CompiledSpec::compile(&spec).unwrap();
        let g = cs.game();
        let s = solve_gr1(&mut cs.mgr, &g, opts);
        let e = solve_rabin(&mut cs.mgr, &g, opts);
        let nw = cs.mgr.not(s.winning);
        let complement = e.memory.complete && s.memory.complete;
        (s.realizable, e.env_realizable, !complement || nw == e.winning)
    }

    #[test]
    fn determinacy_on_small_specs() {
        let specs = [
            "env boolean r; sys boolean g; gar G g = next(r);",
            "env boolean r; sys boolean g; gar G next(g) = r; gar GF g;",
            "env boolean r; sys boolean g; asm GF r; gar GF g & r;",
            "env boolean r; sys boolean g; gar GF g; gar GF !g; gar G next(r) -> !next(g);",
        ];
        for text in specs {
            for opts in SolverOptions::all() {
                let (sys, env, compl) = both(text, opts);
                assert_ne!(sys, env, "{text} {}", opts.label());
                assert!(compl, "{text} {}", opts.label());
            }
        }
    }

    #[test]
    fn seed_that_already_wins_stops_immediately() {
        let spec = parse_spec("env boolean r; sys boolean g; gar G g = next(r);").unwrap();
        let mut cs = CompiledSpec::compile(&spec).unwrap();
        let g = cs.game();
        let one = cs.mgr.one();
        let r = solve_rabin_seeded(&mut cs.mgr, &g, SolverOptions::BASELINE, RabinSeed::ZInit(one));
        assert!(r.env_realizable);
        assert_eq!(r.stats.z_sweeps, 0);
    }
}
