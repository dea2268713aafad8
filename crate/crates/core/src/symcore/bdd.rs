//! Hash-consed reduced ordered BDDs over an interleaved current/primed
//! variable order.
//!
//! Level `2k` is current state bit `k`, level `2k + 1` is its primed twin.
//! Nodes are never freed; the computed caches can be dropped between runs
//! with [`DdManager::clear_caches`].

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;
use thiserror::Error;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

const FALSE: u32 = 0;
const TRUE: u32 = 1;
const TERMINAL_LEVEL: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DdError {
    #[error("sets belong to different managers ({0} vs {1})")]
    ManagerMismatch(u32, u32),
    #[error("unknown variable level {0}")]
    UnknownVariable(u32),
    #[error("set mixes current and primed variables")]
    MixedPolarity,
}

/// Handle to a node of one [`DdManager`]. Equality of handles is semantic
/// equality of the represented functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    node: u32,
    mgr: u32,
}

impl Bdd {
    pub fn node_id(self) -> u32 {
        self.node
    }

    pub fn manager_id(self) -> u32 {
        self.mgr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl BinOp {
    fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
            BinOp::Implies => !a || b,
            BinOp::Iff => a == b,
        }
    }

    fn commutative(self) -> bool {
        !matches!(self, BinOp::Implies)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    lo: u32,
    hi: u32,
}

/// A set of variable levels, kept both as a sorted list and as a positive
/// cube (the form the quantifier caches are keyed on).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    levels: Vec<u32>,
    cube: Bdd,
}

impl VarSet {
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn cube(&self) -> Bdd {
        self.cube
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn contains(&self, level: u32) -> bool {
        self.levels.binary_search(&level).is_ok()
    }
}

/// Node store plus computed caches. Single-threaded; distinct managers are
/// independent.
pub struct DdManager {
    id: u32,
    state_bits: u32,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    apply_cache: FxHashMap<(BinOp, u32, u32), u32>,
    not_cache: FxHashMap<u32, u32>,
    exists_cache: FxHashMap<(u32, u32), u32>,
    and_exists_cache: FxHashMap<(u32, u32, u32), u32>,
    swap_cache: FxHashMap<u32, u32>,
}

impl std::fmt::Debug for DdManager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DdManager")
            .field("id", &self.id)
            .field("state_bits", &self.state_bits)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl DdManager {
    /// A manager for `state_bits` current bits (and as many primed twins).
    pub fn new(state_bits: u32) -> Self {
        let terminal = |v| Node {
            level: TERMINAL_LEVEL,
            lo: v,
            hi: v,
        };
        DdManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            state_bits,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: FxHashMap::default(),
            apply_cache: FxHashMap::default(),
            not_cache: FxHashMap::default(),
            exists_cache: FxHashMap::default(),
            and_exists_cache: FxHashMap::default(),
            swap_cache: FxHashMap::default(),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn state_bits(&self) -> u32 {
        self.state_bits
    }

    pub fn num_levels(&self) -> u32 {
        2 * self.state_bits
    }

    /// Total number of internal nodes ever created (terminals excluded).
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn clear_caches(&mut self) {
        self.apply_cache.clear();
        self.not_cache.clear();
        self.exists_cache.clear();
        self.and_exists_cache.clear();
        self.swap_cache.clear();
    }

    fn wrap(&self, node: u32) -> Bdd {
        Bdd { node, mgr: self.id }
    }

    fn check(&self, a: Bdd) -> Result<u32, DdError> {
        if a.mgr == self.id {
            Ok(a.node)
        } else {
            Err(DdError::ManagerMismatch(self.id, a.mgr))
        }
    }

    fn own(&self, a: Bdd) -> u32 {
        match self.check(a) {
            Ok(n) => n,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.wrap(if value { TRUE } else { FALSE })
    }

    pub fn zero(&self) -> Bdd {
        self.constant(false)
    }

    pub fn one(&self) -> Bdd {
        self.constant(true)
    }

    pub fn is_zero(&self, a: Bdd) -> bool {
        self.own(a) == FALSE
    }

    pub fn is_one(&self, a: Bdd) -> bool {
        self.own(a) == TRUE
    }

    /// Positive literal of the variable at `level`.
    pub fn var(&mut self, level: u32) -> Result<Bdd, DdError> {
        if level >= self.num_levels() {
            return Err(DdError::UnknownVariable(level));
        }
        let n = self.mk(level, FALSE, TRUE);
        Ok(self.wrap(n))
    }

    pub fn current(&mut self, bit: u32) -> Bdd {
        self.var(2 * bit).expect("state bit out of range")
    }

    pub fn primed(&mut self, bit: u32) -> Bdd {
        self.var(2 * bit + 1).expect("state bit out of range")
    }

    pub fn literal(&mut self, level: u32, positive: bool) -> Result<Bdd, DdError> {
        let v = self.var(level)?;
        Ok(if positive { v } else { self.not(v) })
    }

    /// Builds the variable set for the given levels; duplicates are merged.
    pub fn var_set(&mut self, levels: impl IntoIterator<Item = u32>) -> Result<VarSet, DdError> {
        let mut levels: Vec<u32> = levels.into_iter().collect();
        levels.sort_unstable();
        levels.dedup();
        if let Some(&bad) = levels.iter().find(|&&l| l >= self.num_levels()) {
            return Err(DdError::UnknownVariable(bad));
        }
        let mut cube = TRUE;
        for &l in levels.iter().rev() {
            cube = self.mk(l, FALSE, cube);
        }
        Ok(VarSet {
            levels,
            cube: self.wrap(cube),
        })
    }

    fn mk(&mut self, level: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { level, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    #[inline]
    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].level
    }

    #[inline]
    fn cofactors(&self, n: u32, level: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.level == level {
            (node.lo, node.hi)
        } else {
            (n, n)
        }
    }

    pub fn not(&mut self, a: Bdd) -> Bdd {
        let n = self.own(a);
        let r = self.not_rec(n);
        self.wrap(r)
    }

    fn not_rec(&mut self, a: u32) -> u32 {
        match a {
            FALSE => return TRUE,
            TRUE => return FALSE,
            _ => {}
        }
        if let Some(&r) = self.not_cache.get(&a) {
            return r;
        }
        let Node { level, lo, hi } = self.nodes[a as usize];
        let l = self.not_rec(lo);
        let h = self.not_rec(hi);
        let r = self.mk(level, l, h);
        self.not_cache.insert(a, r);
        r
    }

    /// Checked binary operation.
    pub fn apply(&mut self, op: BinOp, a: Bdd, b: Bdd) -> Result<Bdd, DdError> {
        let x = self.check(a)?;
        let y = self.check(b)?;
        let r = self.apply_rec(op, x, y);
        Ok(self.wrap(r))
    }

    fn apply_rec(&mut self, op: BinOp, a: u32, b: u32) -> u32 {
        if a <= TRUE && b <= TRUE {
            return if op.eval(a == TRUE, b == TRUE) { TRUE } else { FALSE };
        }
        match op {
            BinOp::And => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE || a == b {
                    return b;
                }
                if b == TRUE {
                    return a;
                }
            }
            BinOp::Or => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE || a == b {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
            }
            BinOp::Xor => {
                if a == b {
                    return FALSE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
            }
            BinOp::Implies => {
                if a == FALSE || b == TRUE || a == b {
                    return TRUE;
                }
                if a == TRUE {
                    return b;
                }
            }
            BinOp::Iff => {
                if a == b {
                    return TRUE;
                }
                if a == TRUE {
                    return b;
                }
                if b == TRUE {
                    return a;
                }
            }
        }
        let key = if op.commutative() && b < a {
            (op, b, a)
        } else {
            (op, a, b)
        };
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let level = self.level(a).min(self.level(b));
        let (a0, a1) = self.cofactors(a, level);
        let (b0, b1) = self.cofactors(b, level);
        let lo = self.apply_rec(op, a0, b0);
        let hi = self.apply_rec(op, a1, b1);
        let r = self.mk(level, lo, hi);
        self.apply_cache.insert(key, r);
        r
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::And, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Or, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn xor(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Xor, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn implies(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Implies, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn iff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(BinOp::Iff, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `a ∧ ¬b`
    pub fn diff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let nb = self.not(b);
        self.and(a, nb)
    }

    pub fn ite(&mut self, c: Bdd, t: Bdd, e: Bdd) -> Bdd {
        let ct = self.and(c, t);
        let nc = self.not(c);
        let ce = self.and(nc, e);
        self.or(ct, ce)
    }

    pub fn and_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut acc = self.one();
        for b in items {
            acc = self.and(acc, b);
        }
        acc
    }

    pub fn or_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut acc = self.zero();
        for b in items {
            acc = self.or(acc, b);
        }
        acc
    }

    /// `a ⊆ b` as sets of assignments.
    pub fn leq(&mut self, a: Bdd, b: Bdd) -> bool {
        let d = self.diff(a, b);
        self.is_zero(d)
    }

    pub fn quantify(&mut self, q: Quantifier, vars: &VarSet, s: Bdd) -> Result<Bdd, DdError> {
        let n = self.check(s)?;
        let cube = self.check(vars.cube)?;
        let r = match q {
            Quantifier::Exists => self.exists_rec(n, cube),
            Quantifier::Forall => {
                let ns = self.not_rec(n);
                let e = self.exists_rec(ns, cube);
                self.not_rec(e)
            }
        };
        Ok(self.wrap(r))
    }

    pub fn exists(&mut self, vars: &VarSet, s: Bdd) -> Bdd {
        self.quantify(Quantifier::Exists, vars, s)
            .unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn forall(&mut self, vars: &VarSet, s: Bdd) -> Bdd {
        self.quantify(Quantifier::Forall, vars, s)
            .unwrap_or_else(|e| panic!("{e}"))
    }

    fn exists_rec(&mut self, f: u32, cube: u32) -> u32 {
        if f <= TRUE || cube == TRUE {
            return f;
        }
        let fl = self.level(f);
        let mut c = cube;
        while c != TRUE && self.level(c) < fl {
            c = self.nodes[c as usize].hi;
        }
        if c == TRUE {
            return f;
        }
        if let Some(&r) = self.exists_cache.get(&(f, c)) {
            return r;
        }
        let Node { level, lo, hi } = self.nodes[f as usize];
        let r = if self.level(c) == level {
            let rest = self.nodes[c as usize].hi;
            let l = self.exists_rec(lo, rest);
            if l == TRUE {
                TRUE
            } else {
                let h = self.exists_rec(hi, rest);
                self.apply_rec(BinOp::Or, l, h)
            }
        } else {
            let l = self.exists_rec(lo, c);
            let h = self.exists_rec(hi, c);
            self.mk(level, l, h)
        };
        self.exists_cache.insert((f, c), r);
        r
    }

    /// Relational product `∃vars. a ∧ b` without building the conjunction.
    pub fn and_exists(&mut self, a: Bdd, b: Bdd, vars: &VarSet) -> Bdd {
        let x = self.own(a);
        let y = self.own(b);
        let c = self.own(vars.cube);
        let r = self.and_exists_rec(x, y, c);
        self.wrap(r)
    }

    fn and_exists_rec(&mut self, a: u32, b: u32, cube: u32) -> u32 {
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        if a == TRUE && b == TRUE {
            return TRUE;
        }
        if a == TRUE || a == b {
            return self.exists_rec(b, cube);
        }
        if b == TRUE {
            return self.exists_rec(a, cube);
        }
        let level = self.level(a).min(self.level(b));
        let mut c = cube;
        while c != TRUE && self.level(c) < level {
            c = self.nodes[c as usize].hi;
        }
        if c == TRUE {
            return self.apply_rec(BinOp::And, a, b);
        }
        let (x, y) = if b < a { (b, a) } else { (a, b) };
        if let Some(&r) = self.and_exists_cache.get(&(x, y, c)) {
            return r;
        }
        let (a0, a1) = self.cofactors(a, level);
        let (b0, b1) = self.cofactors(b, level);
        let r = if self.level(c) == level {
            let rest = self.nodes[c as usize].hi;
            let l = self.and_exists_rec(a0, b0, rest);
            if l == TRUE {
                TRUE
            } else {
                let h = self.and_exists_rec(a1, b1, rest);
                self.apply_rec(BinOp::Or, l, h)
            }
        } else {
            let l = self.and_exists_rec(a0, b0, c);
            let h = self.and_exists_rec(a1, b1, c);
            self.mk(level, l, h)
        };
        self.and_exists_cache.insert((x, y, c), r);
        r
    }

    /// Levels the function depends on, ascending.
    pub fn support(&self, a: Bdd) -> Vec<u32> {
        let n = self.own(a);
        let mut seen = rustc_hash::FxHashSet::default();
        let mut levels = std::collections::BTreeSet::new();
        let mut stack = vec![n];
        while let Some(x) = stack.pop() {
            if x <= TRUE || !seen.insert(x) {
                continue;
            }
            let node = self.nodes[x as usize];
            levels.insert(node.level);
            stack.push(node.lo);
            stack.push(node.hi);
        }
        levels.into_iter().collect()
    }

    /// Replaces every current bit by its primed twin or vice versa. The
    /// input must mention only one polarity.
    pub fn prime_swap(&mut self, a: Bdd) -> Result<Bdd, DdError> {
        let n = self.check(a)?;
        let support = self.support(a);
        if let Some(&first) = support.first() {
            let parity = first & 1;
            if support.iter().any(|l| l & 1 != parity) {
                return Err(DdError::MixedPolarity);
            }
        }
        let r = self.swap_rec(n);
        Ok(self.wrap(r))
    }

    fn swap_rec(&mut self, a: u32) -> u32 {
        if a <= TRUE {
            return a;
        }
        if let Some(&r) = self.swap_cache.get(&a) {
            return r;
        }
        let Node { level, lo, hi } = self.nodes[a as usize];
        let l = self.swap_rec(lo);
        let h = self.swap_rec(hi);
        let r = self.mk(level ^ 1, l, h);
        self.swap_cache.insert(a, r);
        r
    }

    /// Evaluates the function under an assignment of levels.
    pub fn eval(&self, a: Bdd, assignment: impl Fn(u32) -> bool) -> bool {
        let mut n = self.own(a);
        while n > TRUE {
            let node = self.nodes[n as usize];
            n = if assignment(node.level) { node.hi } else { node.lo };
        }
        n == TRUE
    }

    /// Evaluates a function over current bits (`cur`) and primed bits
    /// (`next`); bit `k` of each mask is state bit `k`.
    pub fn eval_state(&self, a: Bdd, cur: u64, next: u64) -> bool {
        self.eval(a, |level| {
            let bit = level / 2;
            let word = if level & 1 == 0 { cur } else { next };
            (word >> bit) & 1 == 1
        })
    }

    /// Number of satisfying assignments over the variables of `group`.
    /// Variables outside the group are existentially projected away first.
    pub fn sat_count(&mut self, s: Bdd, group: &VarSet) -> u128 {
        let n = self.own(s);
        let outside: Vec<u32> = self
            .support(s)
            .into_iter()
            .filter(|l| !group.contains(*l))
            .collect();
        let projected = if outside.is_empty() {
            n
        } else {
            let vs = self.var_set(outside).expect("levels come from support");
            let c = self.own(vs.cube);
            self.exists_rec(n, c)
        };
        let mut memo = FxHashMap::default();
        self.count_rec(projected, 0, group.levels(), &mut memo)
    }

    // Counts over group[pos..], where `f` depends only on group variables.
    fn count_rec(
        &self,
        f: u32,
        pos: usize,
        group: &[u32],
        memo: &mut FxHashMap<(u32, usize), u128>,
    ) -> u128 {
        if f == FALSE {
            return 0;
        }
        let remaining = group.len() - pos;
        if f == TRUE {
            return 1u128 << remaining;
        }
        if let Some(&c) = memo.get(&(f, pos)) {
            return c;
        }
        let level = self.level(f);
        let idx = pos + group[pos..].partition_point(|&l| l < level);
        let skipped = idx - pos;
        let Node { lo, hi, .. } = self.nodes[f as usize];
        let sub = self.count_rec(lo, idx + 1, group, memo) + self.count_rec(hi, idx + 1, group, memo);
        let c = sub << skipped;
        memo.insert((f, pos), c);
        c
    }

    /// Every node reachable from `a` satisfies `lo != hi` and the unique
    /// table holds no duplicate triple. Used by tests.
    pub fn check_canonical(&self, a: Bdd) -> bool {
        let n = self.own(a);
        let mut stack = vec![n];
        let mut seen = rustc_hash::FxHashSet::default();
        while let Some(x) = stack.pop() {
            if x <= TRUE || !seen.insert(x) {
                continue;
            }
            let node = self.nodes[x as usize];
            if node.lo == node.hi {
                return false;
            }
            if self.unique.get(&node) != Some(&x) {
                return false;
            }
            for child in [node.lo, node.hi] {
                if child > TRUE && self.level(child) <= node.level {
                    return false;
                }
            }
            stack.push(node.lo);
            stack.push(node.hi);
        }
        true
    }

    /// Graphviz rendering of one function, for debugging.
    pub fn to_dot(&self, a: Bdd, level_name: impl Fn(u32) -> String) -> String {
        let root = self.own(a);
        let mut out = String::from("digraph bdd {\n  node [shape=circle];\n");
        out.push_str("  t0 [shape=box,label=\"0\"];\n  t1 [shape=box,label=\"1\"];\n");
        let name = |n: u32| match n {
            FALSE => "t0".to_string(),
            TRUE => "t1".to_string(),
            _ => format!("n{n}"),
        };
        let mut stack = vec![root];
        let mut seen = rustc_hash::FxHashSet::default();
        while let Some(x) = stack.pop() {
            if x <= TRUE || !seen.insert(x) {
                continue;
            }
            let node = self.nodes[x as usize];
            let _ = writeln!(out, "  n{x} [label=\"{}\"];", level_name(node.level));
            let _ = writeln!(out, "  n{x} -> {} [style=dashed];", name(node.lo));
            let _ = writeln!(out, "  n{x} -> {};", name(node.hi));
            stack.push(node.lo);
            stack.push(node.hi);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_complement() {
        let mut m = DdManager::new(3);
        let a = m.current(0);
        let b = m.current(1);
        let s = m.or(a, b);
        let one = m.one();
        assert_eq!(m.and(s, one), s);
        let ns = m.not(s);
        let z = m.and(s, ns);
        assert!(m.is_zero(z));
        assert!(m.check_canonical(s));
    }

    #[test]
    fn manager_mismatch_is_reported() {
        let mut m1 = DdManager::new(1);
        let mut m2 = DdManager::new(1);
        let a = m1.current(0);
        let b = m2.current(0);
        assert!(matches!(
            m1.apply(BinOp::And, a, b),
            Err(DdError::ManagerMismatch(_, _))
        ));
    }

    #[test]
    fn unknown_variable() {
        let mut m = DdManager::new(2);
        assert_eq!(m.var(4), Err(DdError::UnknownVariable(4)));
        assert!(m.var_set([0, 9]).is_err());
    }

    #[test]
    fn quantifier_edge_cases() {
        let mut m = DdManager::new(2);
        let all = m.var_set(0..4).unwrap();
        let a = m.current(0);
        let b = m.primed(1);
        let s = m.and(a, b);
        let e = m.exists(&all, s);
        assert!(m.is_one(e));
        let one = m.one();
        let f1 = m.forall(&all, one);
        assert!(m.is_one(f1));
        let f2 = m.forall(&all, s);
        assert!(m.is_zero(f2));
    }

    #[test]
    fn prime_swap_rejects_mixed() {
        let mut m = DdManager::new(2);
        let a = m.current(0);
        let b = m.primed(1);
        let s = m.and(a, b);
        assert_eq!(m.prime_swap(s), Err(DdError::MixedPolarity));
        let one = m.one();
        assert_eq!(m.prime_swap(one).unwrap(), one);
    }

    #[test]
    fn sat_count_basics() {
        let mut m = DdManager::new(3);
        let cur = m.var_set([0, 2, 4]).unwrap();
        let zero = m.zero();
        let one = m.one();
        assert_eq!(m.sat_count(zero, &cur), 0);
        assert_eq!(m.sat_count(one, &cur), 8);
        let a = m.current(1);
        assert_eq!(m.sat_count(a, &cur), 4);
    }

    #[test]
    fn and_exists_matches_two_step() {
        let mut m = DdManager::new(3);
        let vs = m.var_set([1, 3]).unwrap();
        let x0 = m.current(0);
        let p0 = m.primed(0);
        let p1 = m.primed(1);
        let x2 = m.current(2);
        let f = m.iff(x0, p0);
        let g0 = m.xor(p1, x2);
        let g = m.or(g0, p0);
        let conj = m.and(f, g);
        let two_step = m.exists(&vs, conj);
        assert_eq!(m.and_exists(f, g, &vs), two_step);
    }
}
