//! System winning states of a GR(1) game by the nested Z/Y/X fixed point,
//! with early fixed-point detection (efp), early unrealizability (eun) and
//! fixed-point recycling (fpr).

use serde::{Deserialize, Serialize};

use crate::game::{check_initial_win_sys, cpre_sys, GameStructure};
use crate::symcore::{Bdd, DdManager};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolverOptions {
    pub efp: bool,
    pub eun: bool,
    pub fpr: bool,
}

impl SolverOptions {
    pub const BASELINE: SolverOptions = SolverOptions {
        efp: false,
        eun: false,
        fpr: false,
    };

    /// All eight combinations, baseline first.
    pub fn all() -> Vec<SolverOptions> {
        (0..8u8)
            .map(|b| SolverOptions {
                efp: b & 1 != 0,
                eun: b & 2 != 0,
                fpr: b & 4 != 0,
            })
            .collect()
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.efp {
            parts.push("efp");
        }
        if self.eun {
            parts.push("eun");
        }
        if self.fpr {
            parts.push("fpr");
        }
        if parts.is_empty() {
            "baseline".to_string()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    #[default]
    Fixpoint,
    EarlyFixpoint,
    EarlyUnreal,
}

/// Iteration count of one inner fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XCellTrace {
    pub sweep: u32,
    pub j: u32,
    pub i: u32,
    pub cy: u32,
    pub iterations: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub z_sweeps: u64,
    pub js_body_executions: u64,
    pub y_iterations: u64,
    pub x_iterations: u64,
    pub cpre_calls: u64,
    pub stop_reason: StopReason,
    /// Justice bodies taken over from a previous run instead of computed.
    pub reused_justices: u64,
    #[serde(skip)]
    pub x_trace: Vec<XCellTrace>,
}

impl SolveStats {
    /// Iterations of the X fixed point at one cell, if it was computed.
    pub fn x_cell(&self, sweep: u32, j: u32, i: u32, cy: u32) -> Option<u32> {
        self.x_trace
            .iter()
            .find(|t| t.sweep == sweep && t.j == j && t.i == i && t.cy == cy)
            .map(|t| t.iterations)
    }
}

/// Everything one justice body produced during the first Z sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JusticeRecord {
    pub z_after: Bdd,
    pub y_layers: Vec<Bdd>,
    pub x_cells: Vec<Vec<Bdd>>,
}

#[derive(Debug, Clone)]
pub struct Gr1Memory {
    /// Z after each justice in the latest sweep that reached it.
    pub z_by_j: Vec<Option<Bdd>>,
    /// `y_layers[j][cy]`: Y after each changing iteration.
    pub y_layers: Vec<Vec<Bdd>>,
    /// `x_cells[j][i][cy]`: X fixed point of every Y iteration, including
    /// the final one that leaves Y unchanged.
    pub x_cells: Vec<Vec<Vec<Bdd>>>,
    /// Snapshot of `x_cells` taken at the start of the current sweep; only
    /// kept with fpr.
    pub prev_x_cells: Vec<Vec<Vec<Bdd>>>,
    /// False when the run stopped before reaching the fixed point.
    pub complete: bool,
    /// False when Y was seeded, so layers are not attractor rings.
    pub strategy_grade: bool,
}

impl Gr1Memory {
    fn new(n: usize, m: usize) -> Self {
        Gr1Memory {
            z_by_j: vec![None; m],
            y_layers: vec![Vec::new(); m],
            x_cells: vec![vec![Vec::new(); n]; m],
            prev_x_cells: Vec::new(),
            complete: true,
            strategy_grade: true,
        }
    }

    /// Over-approximation to start the X fixed point of cell (j, i, cy)
    /// from, taken from a snapshot of the previous sweep's cells. Falls
    /// back to `z` when the snapshot has nothing for (j, i).
    pub fn recycle_seed(
        prev: &[Vec<Vec<Bdd>>],
        mgr: &mut DdManager,
        j: usize,
        i: usize,
        cy: usize,
        z: Bdd,
    ) -> Bdd {
        match prev.get(j).and_then(|c| c.get(i)) {
            Some(cells) if !cells.is_empty() => {
                let cell = cells[cy.min(cells.len() - 1)];
                mgr.and(cell, z)
            }
            _ => z,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Gr1Seed {
    None,
    /// Start Z below ⊤ from a known over-approximation of the winning
    /// states.
    ZInit(Bdd),
    /// Start every Y from a known under-approximation of the winning
    /// states instead of ⊥.
    YInit(Bdd),
    /// Take over the first-sweep justice bodies of an earlier run whose
    /// game agrees on everything up to these justices.
    Prefix(Vec<JusticeRecord>),
}

#[derive(Debug, Clone)]
pub struct Gr1Result {
    pub winning: Bdd,
    pub realizable: bool,
    pub memory: Gr1Memory,
    pub stats: SolveStats,
    pub first_sweep: Vec<JusticeRecord>,
}

pub fn solve_gr1(mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> Gr1Result {
    solve_gr1_seeded(mgr, g, opts, Gr1Seed::None)
}

pub fn solve_gr1_seeded(mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions, seed: Gr1Seed) -> Gr1Result {
    let run = Run {
        mgr,
        g,
        opts,
        stats: SolveStats::default(),
        memory: Gr1Memory::new(g.n(), g.m()),
        first_sweep: Vec::new(),
        y_seed: None,
    };
    run.solve(seed)
}

struct Run<'a> {
    mgr: &'a mut DdManager,
    g: &'a GameStructure,
    opts: SolverOptions,
    stats: SolveStats,
    memory: Gr1Memory,
    first_sweep: Vec<JusticeRecord>,
    y_seed: Option<Bdd>,
}

impl Run<'_> {
    fn cpre(&mut self, r: Bdd) -> Bdd {
        self.stats.cpre_calls += 1;
        cpre_sys(self.mgr, self.g, r)
    }

    fn finish(self, winning: Bdd, stop: StopReason) -> Gr1Result {
        let Run {
            mgr,
            g,
            mut stats,
            mut memory,
            first_sweep,
            ..
        } = self;
        stats.stop_reason = stop;
        let realizable = match stop {
            StopReason::EarlyUnreal => {
                memory.complete = false;
                false
            }
            _ => check_initial_win_sys(mgr, g, winning),
        };
        Gr1Result {
            winning,
            realizable,
            memory,
            stats,
            first_sweep,
        }
    }

    fn solve(mut self, seed: Gr1Seed) -> Gr1Result {
        let m = self.g.m();
        let mut z = self.mgr.one();
        let mut start_j = 0;
        match seed {
            Gr1Seed::None => {}
            Gr1Seed::ZInit(s) => {
                z = s;
                if !check_initial_win_sys(self.mgr, self.g, z) {
                    return self.finish(z, StopReason::EarlyUnreal);
                }
            }
            Gr1Seed::YInit(s) => {
                self.y_seed = Some(s);
                self.memory.strategy_grade = false;
            }
            Gr1Seed::Prefix(records) => {
                for (j, rec) in records.into_iter().take(m).enumerate() {
                    z = rec.z_after;
                    self.memory.z_by_j[j] = Some(rec.z_after);
                    self.memory.y_layers[j] = rec.y_layers.clone();
                    self.memory.x_cells[j] = rec.x_cells.clone();
                    self.first_sweep.push(rec);
                    start_j = j + 1;
                }
                self.stats.reused_justices = start_j as u64;
                if self.opts.eun && start_j > 0 && !check_initial_win_sys(self.mgr, self.g, z) {
                    return self.finish(z, StopReason::EarlyUnreal);
                }
            }
        }
        let mut sweep_start = z;
        if start_j > 0 {
            sweep_start = self.mgr.one();
        }
        let mut sweep = 0u32;
        loop {
            sweep += 1;
            self.stats.z_sweeps += 1;
            let recycle = self.opts.fpr && sweep > 1;
            if recycle {
                self.memory.prev_x_cells = self.memory.x_cells.clone();
            }
            let first = if sweep == 1 { start_j } else { 0 };
            for j in first..m {
                self.stats.js_body_executions += 1;
                z = self.justice(sweep, j, z, recycle);
                let repeated = self.memory.z_by_j[j] == Some(z);
                self.memory.z_by_j[j] = Some(z);
                if sweep == 1 {
                    self.first_sweep.push(JusticeRecord {
                        z_after: z,
                        y_layers: self.memory.y_layers[j].clone(),
                        x_cells: self.memory.x_cells[j].clone(),
                    });
                }
                if self.opts.efp && sweep > 1 && repeated {
                    return self.finish(z, StopReason::EarlyFixpoint);
                }
                if self.opts.eun && !check_initial_win_sys(self.mgr, self.g, z) {
                    return self.finish(z, StopReason::EarlyUnreal);
                }
            }
            if z == sweep_start {
                return self.finish(z, StopReason::Fixpoint);
            }
            sweep_start = z;
        }
    }

    /// One body of the loop over system justices; returns the new Z.
    fn justice(&mut self, sweep: u32, j: usize, z: Bdd, recycle: bool) -> Bdd {
        let n = self.g.n();
        let cz = self.cpre(z);
        let goal = self.mgr.and(self.g.js[j], cz);
        let not_je: Vec<Bdd> = self.g.je.iter().map(|&e| self.mgr.not(e)).collect();
        let mut y = self.y_seed.unwrap_or_else(|| self.mgr.zero());
        let mut layers = Vec::new();
        let mut cells = vec![Vec::new(); n];
        let mut cy = 0usize;
        loop {
            self.stats.y_iterations += 1;
            let cyp = self.cpre(y);
            let start = self.mgr.or(goal, cyp);
            let mut new_y = self.mgr.zero();
            for (i, cell) in cells.iter_mut().enumerate() {
                let mut x = if recycle {
                    Gr1Memory::recycle_seed(&self.memory.prev_x_cells, self.mgr, j, i, cy, z)
                } else {
                    z
                };
                let mut iterations = 0u32;
                loop {
                    iterations += 1;
                    self.stats.x_iterations += 1;
                    self.stats.cpre_calls += 1;
                    let cx = cpre_sys(self.mgr, self.g, x);
                    let stay = self.mgr.and(not_je[i], cx);
                    let nx = self.mgr.or(start, stay);
                    if nx == x {
                        break;
                    }
                    x = nx;
                }
                new_y = self.mgr.or(new_y, x);
                cell.push(x);
                self.stats.x_trace.push(XCellTrace {
                    sweep,
                    j: j as u32,
                    i: i as u32,
                    cy: cy as u32,
                    iterations,
                });
            }
            if new_y == y {
                break;
            }
            layers.push(new_y);
            y = new_y;
            cy += 1;
        }
        self.memory.y_layers[j] = layers;
        self.memory.x_cells[j] = cells;
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CompiledSpec;
    use crate::speclang::parse_spec;

    fn run(text: &str, opts: SolverOptions) -> (CompiledSpec, Gr1Result) {
        let spec = parse_spec(text).unwrap();
        let mut cs = CompiledSpec::compile(&spec).unwrap();
        let g = cs.game();
        let r = solve_gr1(&mut cs.mgr, &g, opts);
        (cs, r)
    }

    #[test]
    fn vacuous_environment() {
        let (cs, r) = run("env boolean x; sys boolean y; asm false; gar G false;", SolverOptions::BASELINE);
        // no initial input exists, although no state is winning
        assert!(r.realizable);
        assert!(cs.mgr.is_zero(r.winning));
    }

    #[test]
    fn options_enumeration() {
        let all = SolverOptions::all();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], SolverOptions::BASELINE);
        assert_eq!(all[7].label(), "efp+eun+fpr");
    }

    #[test]
    fn unrealizable_prediction() {
        let text = "env boolean r; sys boolean g; gar G g = next(r);";
        for opts in SolverOptions::all() {
            let (_, r) = run(text, opts);
            assert!(!r.realizable, "{}", opts.label());
        }
    }

    #[test]
    fn recycle_seed_without_cells_is_z() {
        let mut m = DdManager::new(1);
        let z = m.current(0);
        assert_eq!(Gr1Memory::recycle_seed(&[], &mut m, 0, 0, 0, z), z);
        let one = m.one();
        let prev = vec![vec![vec![one, z]]];
        let nz = m.not(z);
        // clamps to the last stored cell and intersects with Z
        let s = Gr1Memory::recycle_seed(&prev, &mut m, 0, 0, 5, nz);
        assert!(m.is_zero(s));
    }
}
