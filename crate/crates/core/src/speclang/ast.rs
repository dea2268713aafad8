use std::collections::HashSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Env,
    Sys,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarType {
    Bool,
    BoolArray(u32),
    IntRange(i64, i64),
}

impl VarType {
    /// Number of state bits the type occupies.
    pub fn bit_width(self) -> u32 {
        match self {
            VarType::Bool => 1,
            VarType::BoolArray(n) => n,
            VarType::IntRange(lo, hi) => {
                let span = (hi - lo) as u64;
                if span == 0 {
                    0
                } else {
                    64 - span.leading_zeros()
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub owner: Owner,
    pub name: String,
    pub vtype: VarType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Asm,
    Gar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Temporal {
    Init,
    Safety,
    Justice,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarRef {
    pub name: String,
    pub index: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicOp {
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Var(VarRef),
    Next(VarRef),
    Not(Box<Expr>),
    Logic(LogicOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn mentions_next(&self) -> bool {
        match self {
            Expr::Next(_) => true,
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) => false,
            Expr::Not(e) => e.mentions_next(),
            Expr::Logic(_, a, b) | Expr::Cmp(_, a, b) | Expr::Arith(_, a, b) => {
                a.mentions_next() || b.mentions_next()
            }
        }
    }

    /// The first variable reference in left-to-right order, if any.
    pub fn leftmost_var(&self) -> Option<&VarRef> {
        match self {
            Expr::Var(r) | Expr::Next(r) => Some(r),
            Expr::Bool(_) | Expr::Int(_) => None,
            Expr::Not(e) => e.leftmost_var(),
            Expr::Logic(_, a, b) | Expr::Cmp(_, a, b) | Expr::Arith(_, a, b) => {
                a.leftmost_var().or_else(|| b.leftmost_var())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: Kind,
    pub temporal: Temporal,
    pub name: Option<String>,
    pub expr: Expr,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specification {
    pub decls: Vec<VarDecl>,
    pub constraints: Vec<Constraint>,
}

impl Specification {
    pub fn decl(&self, name: &str) -> Option<&VarDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn total_bits(&self) -> u32 {
        self.decls.iter().map(|d| d.vtype.bit_width()).sum()
    }

    /// Report name of constraint `idx`: its own name, or `gar_<k>` /
    /// `asm_<k>` with `k` counting constraints of the same kind.
    pub fn label(&self, idx: usize) -> String {
        let c = &self.constraints[idx];
        if let Some(n) = &c.name {
            return n.clone();
        }
        let k = self.constraints[..idx]
            .iter()
            .filter(|o| o.kind == c.kind)
            .count();
        match c.kind {
            Kind::Asm => format!("asm_{k}"),
            Kind::Gar => format!("gar_{k}"),
        }
    }

    /// Indices of all guarantees, in declaration order.
    pub fn guarantee_indices(&self) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| self.constraints[i].kind == Kind::Gar)
            .collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        (0..self.constraints.len()).find(|&i| self.label(i) == label)
    }

    /// Labels that occur more than once (explicit names clashing with each
    /// other or with synthetic ones).
    pub fn duplicate_labels(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut dups = Vec::new();
        for i in 0..self.constraints.len() {
            let l = self.label(i);
            if !seen.insert(l.clone()) && !dups.contains(&l) {
                dups.push(l);
            }
        }
        dups
    }

    pub fn count(&self, kind: Kind, temporal: Temporal) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.kind == kind && c.temporal == temporal)
            .count()
    }

    /// Keeps all assumptions and only the guarantees whose constraint index
    /// is in `keep`. Explicit names are preserved; unnamed guarantees get
    /// their original synthetic label as name so reports stay stable.
    pub fn restrict_guarantees(&self, keep: &[usize]) -> Specification {
        let mut constraints = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.kind == Kind::Asm || keep.contains(&i) {
                let mut c = c.clone();
                if c.kind == Kind::Gar && c.name.is_none() {
                    c.name = Some(self.label(i));
                }
                constraints.push(c);
            }
        }
        Specification {
            decls: self.decls.clone(),
            constraints,
        }
    }

    /// Appends a trivially true justice assumption and/or guarantee when
    /// the spec has none. Empty initial and safety parts already mean true.
    pub fn default_completion(&self) -> Specification {
        let mut out = self.clone();
        for kind in [Kind::Asm, Kind::Gar] {
            if self.count(kind, Temporal::Justice) == 0 {
                out.constraints.push(Constraint {
                    kind,
                    temporal: Temporal::Justice,
                    name: None,
                    expr: Expr::Bool(true),
                });
            }
        }
        out
    }
}
