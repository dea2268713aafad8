use std::sync::Arc;

use thiserror::Error;

use super::{GameStructure, GameVars};
use crate::speclang::{ArithOp, CmpOp, Expr, Kind, LogicOp, Owner, Specification, Temporal, VarType};
use crate::symcore::{Bdd, DdManager, Layout, LayoutError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("integer constants too large to encode")]
    Overflow,
}

/// A specification with one decision diagram per constraint, from which
/// games for any subset of guarantees can be assembled.
#[derive(Debug)]
pub struct CompiledSpec {
    pub spec: Specification,
    pub layout: Arc<Layout>,
    pub mgr: DdManager,
    pub vars: GameVars,
    constraints: Vec<Bdd>,
    valid_env: Bdd,
    valid_sys: Bdd,
    valid_env_next: Bdd,
    valid_sys_next: Bdd,
}

impl CompiledSpec {
    pub fn compile(spec: &Specification) -> Result<CompiledSpec, CompileError> {
        let layout = Arc::new(Layout::from_spec(spec)?);
        let mut mgr = DdManager::new(layout.total_bits);
        let vars = GameVars::new(&mut mgr, &layout);
        let mut constraints = Vec::with_capacity(spec.constraints.len());
        for c in &spec.constraints {
            let b = ExprCompiler {
                layout: &layout,
                mgr: &mut mgr,
            }
            .bool_expr(&c.expr)?;
            constraints.push(b);
        }
        let valid = |owner: Owner, primed: bool, mgr: &mut DdManager| {
            let mut acc = mgr.one();
            for s in layout.vars.iter().filter(|s| s.owner == owner) {
                if let VarType::IntRange(lo, hi) = s.vtype {
                    let bits: Vec<Bdd> = (0..s.width)
                        .map(|k| {
                            let b = s.first_bit + k;
                            if primed {
                                mgr.primed(b)
                            } else {
                                mgr.current(b)
                            }
                        })
                        .collect();
                    let ok = ule_const(mgr, &bits, (hi - lo) as u64);
                    acc = mgr.and(acc, ok);
                }
            }
            acc
        };
        let valid_env = valid(Owner::Env, false, &mut mgr);
        let valid_sys = valid(Owner::Sys, false, &mut mgr);
        let valid_env_next = valid(Owner::Env, true, &mut mgr);
        let valid_sys_next = valid(Owner::Sys, true, &mut mgr);
        Ok(CompiledSpec {
            spec: spec.clone(),
            layout,
            mgr,
            vars,
            constraints,
            valid_env,
            valid_sys,
            valid_env_next,
            valid_sys_next,
        })
    }

    pub fn constraint(&self, idx: usize) -> Bdd {
        self.constraints[idx]
    }

    /// States whose integer encodings are all in range.
    pub fn valid_states(&mut self) -> Bdd {
        self.mgr.and(self.valid_env, self.valid_sys)
    }

    /// Game with every guarantee.
    pub fn game(&mut self) -> GameStructure {
        let all = self.spec.guarantee_indices();
        self.game_for(&all)
    }

    /// Game with all assumptions and the guarantees whose constraint
    /// indices are listed, after default completion.
    pub fn game_for(&mut self, guarantees: &[usize]) -> GameStructure {
        let m = &mut self.mgr;
        let mut theta_e = self.valid_env;
        let mut theta_s = self.valid_sys;
        let cur_valid = m.and(self.valid_env, self.valid_sys);
        let mut rho_e = m.and(cur_valid, self.valid_env_next);
        let mut rho_s = m.and(rho_e, self.valid_sys_next);
        let mut je = Vec::new();
        let mut js = Vec::new();
        let mut js_source = Vec::new();
        for (i, c) in self.spec.constraints.iter().enumerate() {
            if c.kind == Kind::Gar && !guarantees.contains(&i) {
                continue;
            }
            let b = self.constraints[i];
            match (c.kind, c.temporal) {
                (Kind::Asm, Temporal::Init) => theta_e = m.and(theta_e, b),
                (Kind::Gar, Temporal::Init) => theta_s = m.and(theta_s, b),
                (Kind::Asm, Temporal::Safety) => rho_e = m.and(rho_e, b),
                (Kind::Gar, Temporal::Safety) => rho_s = m.and(rho_s, b),
                (Kind::Asm, Temporal::Justice) => je.push(b),
                (Kind::Gar, Temporal::Justice) => {
                    js.push(b);
                    js_source.push(Some(i));
                }
            }
        }
        if je.is_empty() {
            je.push(m.one());
        }
        if js.is_empty() {
            js.push(m.one());
            js_source.push(None);
        }
        let mut guarantees = guarantees.to_vec();
        guarantees.sort_unstable();
        GameStructure {
            layout: Arc::clone(&self.layout),
            vars: self.vars.clone(),
            theta_e,
            theta_s,
            rho_e,
            rho_s,
            je,
            js,
            js_source,
            guarantees,
        }
    }
}

/// Unsigned `bits <= k` (bits LSB first).
fn ule_const(m: &mut DdManager, bits: &[Bdd], k: u64) -> Bdd {
    if bits.len() < 64 && k >= (1u64 << bits.len()) - 1 {
        return m.one();
    }
    let mut acc = m.one();
    for (i, &b) in bits.iter().enumerate() {
        let nb = m.not(b);
        acc = if k >> i & 1 == 1 { m.or(nb, acc) } else { m.and(nb, acc) };
    }
    acc
}

struct ExprCompiler<'a> {
    layout: &'a Layout,
    mgr: &'a mut DdManager,
}

impl ExprCompiler<'_> {
    fn bool_expr(&mut self, e: &Expr) -> Result<Bdd, CompileError> {
        Ok(match e {
            Expr::Bool(b) => self.mgr.constant(*b),
            Expr::Var(r) => self.mgr.current(self.layout.bool_bit(r)),
            Expr::Next(r) => self.mgr.primed(self.layout.bool_bit(r)),
            Expr::Not(a) => {
                let x = self.bool_expr(a)?;
                self.mgr.not(x)
            }
            Expr::Logic(op, a, b) => {
                let x = self.bool_expr(a)?;
                let y = self.bool_expr(b)?;
                match op {
                    LogicOp::And => self.mgr.and(x, y),
                    LogicOp::Or => self.mgr.or(x, y),
                    LogicOp::Implies => self.mgr.implies(x, y),
                    LogicOp::Iff => self.mgr.iff(x, y),
                }
            }
            Expr::Cmp(op, a, b) if self.is_int(a) => self.int_cmp(*op, a, b)?,
            Expr::Cmp(op, a, b) => {
                let x = self.bool_expr(a)?;
                let y = self.bool_expr(b)?;
                match op {
                    CmpOp::Eq => self.mgr.iff(x, y),
                    _ => self.mgr.xor(x, y),
                }
            }
            Expr::Int(_) | Expr::Arith(..) => unreachable!("parser rejects integer constraints"),
        })
    }

    fn is_int(&self, e: &Expr) -> bool {
        match e {
            Expr::Int(_) | Expr::Arith(..) => true,
            Expr::Var(r) | Expr::Next(r) => {
                matches!(self.layout.slot(&r.name).map(|s| s.vtype), Some(VarType::IntRange(..)))
            }
            _ => false,
        }
    }

    fn var_range(&self, name: &str) -> (i64, i64, i64) {
        let s = self.layout.slot(name).expect("declared");
        match s.vtype {
            VarType::IntRange(lo, hi) => {
                let raw_max = if s.width == 0 { 0 } else { (1i64 << s.width) - 1 };
                (lo, hi, lo + raw_max)
            }
            _ => unreachable!("integer reference"),
        }
    }

    /// Largest magnitude of any value (or range bound) in the term.
    fn magnitude(&self, e: &Expr) -> Result<(i64, i64, i64), CompileError> {
        Ok(match e {
            Expr::Int(v) => (*v, *v, v.checked_abs().ok_or(CompileError::Overflow)?),
            Expr::Var(r) | Expr::Next(r) => {
                let (lo, hi, raw_hi) = self.var_range(&r.name);
                (lo, raw_hi, lo.abs().max(hi.abs()).max(raw_hi.abs()))
            }
            Expr::Arith(op, a, b) => {
                let (alo, ahi, am) = self.magnitude(a)?;
                let (blo, bhi, bm) = self.magnitude(b)?;
                let (lo, hi) = match op {
                    ArithOp::Add => (alo.checked_add(blo), ahi.checked_add(bhi)),
                    ArithOp::Sub => (alo.checked_sub(bhi), ahi.checked_sub(blo)),
                };
                let (lo, hi) = (lo.ok_or(CompileError::Overflow)?, hi.ok_or(CompileError::Overflow)?);
                (lo, hi, am.max(bm).max(lo.abs()).max(hi.abs()))
            }
            _ => unreachable!("integer term"),
        })
    }

    fn int_cmp(&mut self, op: CmpOp, a: &Expr, b: &Expr) -> Result<Bdd, CompileError> {
        let m = self.magnitude(a)?.2.max(self.magnitude(b)?.2);
        if m > (1i64 << 60) {
            return Err(CompileError::Overflow);
        }
        // differences of two values of magnitude <= m need one more bit
        let width = (64 - (2 * m + 1).leading_zeros()) + 1;
        let (x, gx) = self.int_vec(a, width);
        let (y, gy) = self.int_vec(b, width);
        let rel = match op {
            CmpOp::Eq => self.eq(&x, &y),
            CmpOp::Ne => {
                let e = self.eq(&x, &y);
                self.mgr.not(e)
            }
            CmpOp::Lt => self.slt(&x, &y),
            CmpOp::Gt => self.slt(&y, &x),
            CmpOp::Le => {
                let g = self.slt(&y, &x);
                self.mgr.not(g)
            }
            CmpOp::Ge => {
                let l = self.slt(&x, &y);
                self.mgr.not(l)
            }
        };
        let guards = self.mgr.and(gx, gy);
        Ok(self.mgr.and(guards, rel))
    }

    /// Two's complement bit vector (LSB first) and the range guard of every
    /// `+`/`-` node below `e`.
    fn int_vec(&mut self, e: &Expr, w: u32) -> (Vec<Bdd>, Bdd) {
        match e {
            Expr::Int(v) => (self.constant(*v, w), self.mgr.one()),
            Expr::Var(r) | Expr::Next(r) => {
                let s = self.layout.slot(&r.name).expect("declared").clone();
                let primed = matches!(e, Expr::Next(_));
                let mut bits: Vec<Bdd> = (0..s.width)
                    .map(|k| {
                        if primed {
                            self.mgr.primed(s.first_bit + k)
                        } else {
                            self.mgr.current(s.first_bit + k)
                        }
                    })
                    .collect();
                bits.resize(w as usize, self.mgr.zero());
                let (lo, _, _) = self.var_range(&r.name);
                let off = self.constant(lo, w);
                (self.add(&bits, &off, false), self.mgr.one())
            }
            Expr::Arith(op, a, b) => {
                let (x, gx) = self.int_vec(a, w);
                let (y, gy) = self.int_vec(b, w);
                let v = match op {
                    ArithOp::Add => self.add(&x, &y, false),
                    ArithOp::Sub => {
                        let ny: Vec<Bdd> = y.iter().map(|&b| self.mgr.not(b)).collect();
                        self.add(&x, &ny, true)
                    }
                };
                let mut guard = self.mgr.and(gx, gy);
                if let Some(r) = e.leftmost_var() {
                    let (lo, hi, _) = self.var_range(&r.name);
                    let lo_v = self.constant(lo, w);
                    let hi_v = self.constant(hi, w);
                    let below = self.slt(&v, &lo_v);
                    let above = self.slt(&hi_v, &v);
                    let out = self.mgr.or(below, above);
                    let inside = self.mgr.not(out);
                    guard = self.mgr.and(guard, inside);
                }
                (v, guard)
            }
            _ => unreachable!("integer term"),
        }
    }

    fn constant(&self, v: i64, w: u32) -> Vec<Bdd> {
        (0..w).map(|k| self.mgr.constant((v >> k.min(63)) & 1 == 1)).collect()
    }

    fn add(&mut self, a: &[Bdd], b: &[Bdd], carry_in: bool) -> Vec<Bdd> {
        let mut carry = self.mgr.constant(carry_in);
        let mut out = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let xy = self.mgr.xor(x, y);
            out.push(self.mgr.xor(xy, carry));
            let both = self.mgr.and(x, y);
            let prop = self.mgr.and(xy, carry);
            carry = self.mgr.or(both, prop);
        }
        out
    }

    fn eq(&mut self, a: &[Bdd], b: &[Bdd]) -> Bdd {
        let mut acc = self.mgr.one();
        for (&x, &y) in a.iter().zip(b) {
            let e = self.mgr.iff(x, y);
            acc = self.mgr.and(acc, e);
        }
        acc
    }

    /// Signed `a < b`; the width leaves room for the difference.
    fn slt(&mut self, a: &[Bdd], b: &[Bdd]) -> Bdd {
        let nb: Vec<Bdd> = b.iter().map(|&x| self.mgr.not(x)).collect();
        let d = self.add(a, &nb, true);
        *d.last().expect("nonzero width")
    }
}
