//! Symbolic game structure and the two controlled-predecessor operators.

pub mod compile;

use std::sync::Arc;

pub use compile::{CompileError, CompiledSpec};

use crate::speclang::Owner;
use crate::symcore::{Bdd, DdManager, Layout, VarSet};

/// Quantification groups of one layout.
#[derive(Debug, Clone)]
pub struct GameVars {
    pub env_cur: VarSet,
    pub sys_cur: VarSet,
    pub env_next: VarSet,
    pub sys_next: VarSet,
    pub cur: VarSet,
}

impl GameVars {
    pub fn new(mgr: &mut DdManager, layout: &Layout) -> GameVars {
        let env = layout.bits_of(Owner::Env);
        let sys = layout.bits_of(Owner::Sys);
        let mut set = |bits: &[u32], primed: u32| {
            mgr.var_set(bits.iter().map(|b| 2 * b + primed))
                .expect("layout bits fit the manager")
        };
        GameVars {
            env_cur: set(&env, 0),
            sys_cur: set(&sys, 0),
            env_next: set(&env, 1),
            sys_next: set(&sys, 1),
            cur: mgr.var_set((0..layout.total_bits).map(|b| 2 * b)).expect("in range"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GameStructure {
    pub layout: Arc<Layout>,
    pub vars: GameVars,
    pub theta_e: Bdd,
    pub theta_s: Bdd,
    pub rho_e: Bdd,
    pub rho_s: Bdd,
    pub je: Vec<Bdd>,
    pub js: Vec<Bdd>,
    /// Constraint index behind each `js` entry; `None` for the default.
    pub js_source: Vec<Option<usize>>,
    /// Constraint indices of the guarantees included, ascending.
    pub guarantees: Vec<usize>,
}

impl GameStructure {
    pub fn n(&self) -> usize {
        self.je.len()
    }

    pub fn m(&self) -> usize {
        self.js.len()
    }
}

/// ⬦(R): states from which the system can force the next state into R.
pub fn cpre_sys(mgr: &mut DdManager, g: &GameStructure, r: Bdd) -> Bdd {
    let rp = mgr.prime_swap(r).expect("target set over current bits");
    let t = mgr.and_exists(g.rho_s, rp, &g.vars.sys_next);
    let u = mgr.implies(g.rho_e, t);
    mgr.forall(&g.vars.env_next, u)
}

/// ⬓(R): states from which the environment can force the next state into
/// R (or leave the system without a legal move).
pub fn cpre_env(mgr: &mut DdManager, g: &GameStructure, r: Bdd) -> Bdd {
    let rp = mgr.prime_swap(r).expect("target set over current bits");
    let nrp = mgr.not(rp);
    let escape = mgr.and_exists(g.rho_s, nrp, &g.vars.sys_next);
    let trapped = mgr.not(escape);
    mgr.and_exists(g.rho_e, trapped, &g.vars.env_next)
}

/// ∀x (θe → ∃y (θs ∧ W)).
pub fn check_initial_win_sys(mgr: &mut DdManager, g: &GameStructure, w: Bdd) -> bool {
    let t = mgr.and_exists(g.theta_s, w, &g.vars.sys_cur);
    let u = mgr.implies(g.theta_e, t);
    let r = mgr.forall(&g.vars.env_cur, u);
    mgr.is_one(r)
}

/// ∃x (θe ∧ ∀y (θs → W)).
pub fn check_initial_win_env(mgr: &mut DdManager, g: &GameStructure, w: Bdd) -> bool {
    let nw = mgr.not(w);
    let bad = mgr.and_exists(g.theta_s, nw, &g.vars.sys_cur);
    let good = mgr.not(bad);
    let r = mgr.and_exists(g.theta_e, good, &g.vars.env_cur);
    !mgr.is_zero(r)
}
