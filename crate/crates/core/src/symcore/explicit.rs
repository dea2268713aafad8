//! Explicit-state game built by evaluating the AST directly on concrete
//! states. Independent of the decision-diagram compiler; used as an oracle
//! and for strategy verification.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::layout::{Layout, LayoutError};
use crate::speclang::{ArithOp, CmpOp, Expr, Kind, LogicOp, Owner, Specification, Temporal, VarType};

pub const MAX_EXPLICIT_BITS: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplicitError {
    #[error("{0} state bits exceed the explicit-state cap of {MAX_EXPLICIT_BITS}")]
    TooLarge(u32),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Evaluates a boolean expression over a current and a next state.
pub fn eval_bool(layout: &Layout, e: &Expr, cur: u64, next: u64) -> bool {
    match e {
        Expr::Bool(b) => *b,
        Expr::Var(r) => cur >> layout.bool_bit(r) & 1 == 1,
        Expr::Next(r) => next >> layout.bool_bit(r) & 1 == 1,
        Expr::Not(a) => !eval_bool(layout, a, cur, next),
        Expr::Logic(op, a, b) => {
            let x = eval_bool(layout, a, cur, next);
            let y = eval_bool(layout, b, cur, next);
            match op {
                LogicOp::And => x && y,
                LogicOp::Or => x || y,
                LogicOp::Implies => !x || y,
                LogicOp::Iff => x == y,
            }
        }
        Expr::Cmp(op, a, b) => {
            if is_int(layout, a) {
                let (Some(x), Some(y)) = (eval_int(layout, a, cur, next), eval_int(layout, b, cur, next)) else {
                    return false;
                };
                match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                }
            } else {
                let x = eval_bool(layout, a, cur, next);
                let y = eval_bool(layout, b, cur, next);
                match op {
                    CmpOp::Eq => x == y,
                    _ => x != y,
                }
            }
        }
        Expr::Int(_) | Expr::Arith(..) => panic!("integer term in boolean position"),
    }
}

fn is_int(layout: &Layout, e: &Expr) -> bool {
    match e {
        Expr::Int(_) | Expr::Arith(..) => true,
        Expr::Var(r) | Expr::Next(r) => {
            matches!(layout.slot(&r.name).map(|s| s.vtype), Some(VarType::IntRange(..)))
        }
        _ => false,
    }
}

/// Integer value of a term; `None` when some `+`/`-` leaves the range of
/// the leftmost variable below it.
fn eval_int(layout: &Layout, e: &Expr, cur: u64, next: u64) -> Option<i64> {
    match e {
        Expr::Int(v) => Some(*v),
        Expr::Var(r) => Some(layout.int_value(cur, &r.name)),
        Expr::Next(r) => Some(layout.int_value(next, &r.name)),
        Expr::Arith(op, a, b) => {
            let x = eval_int(layout, a, cur, next)?;
            let y = eval_int(layout, b, cur, next)?;
            let v = match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
            };
            if let Some(r) = e.leftmost_var() {
                if let Some(VarType::IntRange(lo, hi)) = layout.slot(&r.name).map(|s| s.vtype) {
                    if v < lo || v > hi {
                        return None;
                    }
                }
            }
            Some(v)
        }
        _ => panic!("boolean term in integer position"),
    }
}

/// All assignments of the bits in `mask` (as subsets of the mask).
fn patterns(mask: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone)]
pub struct ExplicitGame {
    pub layout: Layout,
    pub bits: u32,
    pub env_mask: u64,
    pub sys_mask: u64,
    pub theta_e: FixedBitSet,
    pub theta_s: FixedBitSet,
    env_start: Vec<u32>,
    env_moves: Vec<u32>,
    sys_start: Vec<u32>,
    sys_moves: Vec<u32>,
    pub je: Vec<FixedBitSet>,
    pub js: Vec<FixedBitSet>,
}

impl ExplicitGame {
    /// Builds the game of `spec` after default completion.
    pub fn build(spec: &Specification) -> Result<ExplicitGame, ExplicitError> {
        let spec = spec.default_completion();
        let layout = Layout::from_spec(&spec)?;
        let bits = layout.total_bits;
        if bits > MAX_EXPLICIT_BITS {
            return Err(ExplicitError::TooLarge(bits));
        }
        let n = 1usize << bits;
        let env_mask = layout.mask_of(Owner::Env);
        let sys_mask = layout.mask_of(Owner::Sys);
        let env_pats: Vec<u64> = patterns(env_mask)
            .into_iter()
            .filter(|&p| layout.valid_for(p, &[Owner::Env]))
            .collect();
        let sys_pats: Vec<u64> = patterns(sys_mask)
            .into_iter()
            .filter(|&p| layout.valid_for(p, &[Owner::Sys]))
            .collect();

        let pick = |kind: Kind, t: Temporal| -> Vec<&Expr> {
            spec.constraints
                .iter()
                .filter(|c| c.kind == kind && c.temporal == t)
                .map(|c| &c.expr)
                .collect()
        };
        let init_e = pick(Kind::Asm, Temporal::Init);
        let init_s = pick(Kind::Gar, Temporal::Init);
        let safe_e = pick(Kind::Asm, Temporal::Safety);
        let safe_s = pick(Kind::Gar, Temporal::Safety);
        let all = |es: &[&Expr], cur: u64, next: u64| es.iter().all(|e| eval_bool(&layout, e, cur, next));

        let mut theta_e = FixedBitSet::with_capacity(n);
        let mut theta_s = FixedBitSet::with_capacity(n);
        for q in 0..n as u64 {
            theta_e.set(q as usize, layout.valid_for(q, &[Owner::Env]) && all(&init_e, q, 0));
            theta_s.set(q as usize, layout.valid_for(q, &[Owner::Sys]) && all(&init_s, q, 0));
        }

        let mut env_start = Vec::with_capacity(n + 1);
        let mut env_moves = Vec::new();
        let mut sys_start = Vec::new();
        let mut sys_moves = Vec::new();
        for q in 0..n as u64 {
            env_start.push(env_moves.len() as u32);
            if !layout.valid(q) {
                continue;
            }
            for &x in &env_pats {
                if !all(&safe_e, q, x) {
                    continue;
                }
                env_moves.push(x as u32);
                sys_start.push(sys_moves.len() as u32);
                for &y in &sys_pats {
                    if all(&safe_s, q, x | y) {
                        sys_moves.push((x | y) as u32);
                    }
                }
            }
        }
        env_start.push(env_moves.len() as u32);
        sys_start.push(sys_moves.len() as u32);

        let justice = |kind: Kind| -> Vec<FixedBitSet> {
            pick(kind, Temporal::Justice)
                .into_iter()
                .map(|e| {
                    let mut s = FixedBitSet::with_capacity(n);
                    for q in 0..n as u64 {
                        s.set(q as usize, eval_bool(&layout, e, q, 0));
                    }
                    s
                })
                .collect()
        };
        let je = justice(Kind::Asm);
        let js = justice(Kind::Gar);
        Ok(ExplicitGame {
            layout: layout.clone(),
            bits,
            env_mask,
            sys_mask,
            theta_e,
            theta_s,
            env_start,
            env_moves,
            sys_start,
            sys_moves,
            je,
            js,
        })
    }

    pub fn num_states(&self) -> usize {
        1usize << self.bits
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.num_states())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Indices of the legal environment moves from `q`; pass each to
    /// [`Self::env_input`] and [`Self::responses`].
    pub fn env_move_ids(&self, q: u64) -> std::ops::Range<usize> {
        self.env_start[q as usize] as usize..self.env_start[q as usize + 1] as usize
    }

    /// The primed environment assignment of move `id` (environment bits only).
    pub fn env_input(&self, id: usize) -> u64 {
        self.env_moves[id] as u64
    }

    /// Legal full successor states of environment move `id`.
    pub fn responses(&self, id: usize) -> &[u32] {
        &self.sys_moves[self.sys_start[id] as usize..self.sys_start[id + 1] as usize]
    }

    pub fn env_legal(&self, q: u64, x: u64) -> bool {
        self.env_move_ids(q).any(|id| self.env_input(id) == x)
    }

    pub fn sys_legal(&self, q: u64, next: u64) -> bool {
        self.env_move_ids(q)
            .filter(|&id| self.env_input(id) == next & self.env_mask)
            .any(|id| self.responses(id).contains(&(next as u32)))
    }

    /// ⬦ on explicit sets.
    pub fn cpre_sys(&self, r: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for q in 0..self.num_states() as u64 {
            let ok = self
                .env_move_ids(q)
                .all(|id| self.responses(id).iter().any(|&s| r.contains(s as usize)));
            out.set(q as usize, ok);
        }
        out
    }

    /// ⬓ on explicit sets.
    pub fn cpre_env(&self, r: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for q in 0..self.num_states() as u64 {
            let ok = self
                .env_move_ids(q)
                .any(|id| self.responses(id).iter().all(|&s| r.contains(s as usize)));
            out.set(q as usize, ok);
        }
        out
    }

    fn env_part_states(&self) -> impl Iterator<Item = u64> + '_ {
        patterns(self.env_mask).into_iter()
    }

    fn sys_part_states(&self) -> Vec<u64> {
        patterns(self.sys_mask)
    }

    /// For every initial environment input there is an initial system
    /// output inside `w`.
    pub fn init_win_sys(&self, w: &FixedBitSet) -> bool {
        let ys = self.sys_part_states();
        self.env_part_states()
            .filter(|&x| self.theta_e.contains(x as usize))
            .all(|x| {
                ys.iter()
                    .any(|&y| self.theta_s.contains((x | y) as usize) && w.contains((x | y) as usize))
            })
    }

    /// Some initial environment input has every initial system output
    /// inside `w`.
    pub fn init_win_env(&self, w: &FixedBitSet) -> bool {
        let ys = self.sys_part_states();
        self.env_part_states()
            .filter(|&x| self.theta_e.contains(x as usize))
            .any(|x| {
                ys.iter()
                    .all(|&y| !self.theta_s.contains((x | y) as usize) || w.contains((x | y) as usize))
            })
    }

    pub fn valid_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        for q in 0..self.num_states() as u64 {
            s.set(q as usize, self.layout.valid(q));
        }
        s
    }

    /// Initial environment inputs (environment bits only) satisfying θe.
    pub fn initial_inputs(&self) -> Vec<u64> {
        self.env_part_states()
            .filter(|&x| self.theta_e.contains(x as usize))
            .collect()
    }

    /// Initial full states for input `x` satisfying θs.
    pub fn initial_outputs(&self, x: u64) -> Vec<u64> {
        self.sys_part_states()
            .into_iter()
            .map(|y| x | y)
            .filter(|&s| self.theta_s.contains(s as usize))
            .collect()
    }
}
