use std::fmt;

use super::ast::*;

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(k) => write!(f, "{}[{k}]", self.name),
            None => write!(f, "{}", self.name),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(r) => write!(f, "{r}"),
            Expr::Next(r) => write!(f, "next({r})"),
            Expr::Not(e) => write!(f, "!{}", Atomic(e)),
            Expr::Logic(op, a, b) => {
                let s = match op {
                    LogicOp::And => "&",
                    LogicOp::Or => "|",
                    LogicOp::Implies => "->",
                    LogicOp::Iff => "<->",
                };
                write!(f, "{} {s} {}", Atomic(a), Atomic(b))
            }
            Expr::Cmp(op, a, b) => {
                let s = match op {
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "!=",
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Gt => ">",
                    CmpOp::Ge => ">=",
                };
                write!(f, "{} {s} {}", Atomic(a), Atomic(b))
            }
            Expr::Arith(op, a, b) => {
                let s = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                };
                write!(f, "{} {s} {}", Atomic(a), Atomic(b))
            }
        }
    }
}

// Parenthesizes anything that is not a leaf.
struct Atomic<'a>(&'a Expr);

impl fmt::Display for Atomic<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) | Expr::Next(_) => write!(f, "{}", self.0),
            other => write!(f, "({other})"),
        }
    }
}

impl fmt::Display for VarDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let owner = match self.owner {
            Owner::Env => "env",
            Owner::Sys => "sys",
        };
        match self.vtype {
            VarType::Bool => write!(f, "{owner} boolean {};", self.name),
            VarType::BoolArray(n) => write!(f, "{owner} boolean[{n}] {};", self.name),
            VarType::IntRange(lo, hi) => write!(f, "{owner} Int({lo}..{hi}) {};", self.name),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Asm => write!(f, "asm ")?,
            Kind::Gar => write!(f, "gar ")?,
        }
        if let Some(n) = &self.name {
            write!(f, "{n}: ")?;
        }
        match self.temporal {
            Temporal::Init => {}
            Temporal::Safety => write!(f, "G ")?,
            Temporal::Justice => write!(f, "GF ")?,
        }
        write!(f, "{};", self.expr)
    }
}

impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        if !self.decls.is_empty() && !self.constraints.is_empty() {
            writeln!(f)?;
        }
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
