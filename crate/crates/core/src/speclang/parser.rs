use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{ErrorKind, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Bool,
    Int,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    spec: Specification,
    ctx: Option<(Kind, Temporal)>,
}

pub fn parse_spec(text: &str) -> Result<Specification, SpecError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        spec: Specification::default(),
        ctx: None,
    };
    while p.peek() != &Tok::Eof {
        match p.peek() {
            Tok::Env | Tok::Sys => p.decl()?,
            Tok::Asm | Tok::Gar => p.constraint()?,
            other => {
                let msg = format!("expected a declaration or constraint, found {}", other.describe());
                return Err(p.error_here(ErrorKind::Syntax, msg));
            }
        }
    }
    Ok(p.spec)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ErrorKind, msg: impl Into<String>) -> SpecError {
        let (line, col) = self.here();
        SpecError::new(kind, line, col, msg)
    }

    fn expect(&mut self, want: Tok) -> Result<Token, SpecError> {
        if *self.peek() == want {
            Ok(self.bump())
        } else {
            let msg = format!("expected {}, found {}", want.describe(), self.peek().describe());
            Err(self.error_here(ErrorKind::Syntax, msg))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), SpecError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, line, col))
            }
            other => Err(self.error_here(
                ErrorKind::Syntax,
                format!("expected identifier, found {}", other.describe()),
            )),
        }
    }

    fn int_literal(&mut self) -> Result<i64, SpecError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            other => Err(self.error_here(
                ErrorKind::Syntax,
                format!("expected integer, found {}", other.describe()),
            )),
        }
    }

    fn decl(&mut self) -> Result<(), SpecError> {
        let owner = match self.bump().tok {
            Tok::Env => Owner::Env,
            _ => Owner::Sys,
        };
        let (line, col) = self.here();
        let vtype = match self.peek() {
            Tok::Boolean => {
                self.bump();
                if *self.peek() == Tok::LBracket {
                    self.bump();
                    let (l, c) = self.here();
                    let n = self.int_literal()?;
                    self.expect(Tok::RBracket)?;
                    if n < 1 || n > u32::MAX as i64 {
                        return Err(SpecError::new(ErrorKind::Declaration, l, c, "array length must be at least 1"));
                    }
                    VarType::BoolArray(n as u32)
                } else {
                    VarType::Bool
                }
            }
            Tok::IntKw => {
                self.bump();
                self.expect(Tok::LParen)?;
                let lo = self.int_literal()?;
                self.expect(Tok::DotDot)?;
                let hi = self.int_literal()?;
                self.expect(Tok::RParen)?;
                if hi < lo {
                    return Err(SpecError::new(ErrorKind::Declaration, line, col, format!("empty range {lo}..{hi}")));
                }
                if hi.checked_sub(lo).is_none_or(|s| s > (1i64 << 40)) {
                    return Err(SpecError::new(ErrorKind::Declaration, line, col, format!("range {lo}..{hi} too large")));
                }
                VarType::IntRange(lo, hi)
            }
            other => {
                let msg = format!("expected a type, found {}", other.describe());
                return Err(self.error_here(ErrorKind::Syntax, msg));
            }
        };
        let (name, l, c) = self.ident()?;
        if self.spec.decl(&name).is_some() {
            return Err(SpecError::new(ErrorKind::Declaration, l, c, format!("`{name}` declared twice")));
        }
        self.expect(Tok::Semi)?;
        self.spec.decls.push(VarDecl { owner, name, vtype });
        Ok(())
    }

    fn constraint(&mut self) -> Result<(), SpecError> {
        let kind = match self.bump().tok {
            Tok::Asm => Kind::Asm,
            _ => Kind::Gar,
        };
        let mut name = None;
        if matches!(self.peek(), Tok::Ident(_)) && self.toks[self.pos + 1].tok == Tok::Colon {
            let (n, l, c) = self.ident()?;
            self.bump();
            if self.spec.constraints.iter().any(|k| k.name.as_deref() == Some(n.as_str())) {
                return Err(SpecError::new(ErrorKind::Declaration, l, c, format!("constraint name `{n}` used twice")));
            }
            name = Some(n);
        }
        let temporal = match self.peek() {
            Tok::Always => {
                self.bump();
                Temporal::Safety
            }
            Tok::AlwaysEventually => {
                self.bump();
                Temporal::Justice
            }
            _ => Temporal::Init,
        };
        self.ctx = Some((kind, temporal));
        let (line, col) = self.here();
        let (expr, ty) = self.expr()?;
        if ty != Ty::Bool {
            return Err(SpecError::new(ErrorKind::Type, line, col, "constraint must be boolean"));
        }
        self.expect(Tok::Semi)?;
        self.ctx = None;
        self.spec.constraints.push(Constraint {
            kind,
            temporal,
            name,
            expr,
        });
        Ok(())
    }

    fn expr(&mut self) -> Result<(Expr, Ty), SpecError> {
        self.iff()
    }

    fn logic_operand(&self, ty: Ty, line: usize, col: usize, op: &str) -> Result<(), SpecError> {
        if ty == Ty::Bool {
            Ok(())
        } else {
            Err(SpecError::new(ErrorKind::Type, line, col, format!("operand of `{op}` must be boolean")))
        }
    }

    fn iff(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (mut lhs, t) = self.implies()?;
        while *self.peek() == Tok::DoubleArrow {
            self.logic_operand(t, l0, c0, "<->")?;
            self.bump();
            let (l, c) = self.here();
            let (rhs, rt) = self.implies()?;
            self.logic_operand(rt, l, c, "<->")?;
            lhs = Expr::Logic(LogicOp::Iff, Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, t))
    }

    fn implies(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (lhs, t) = self.or()?;
        if *self.peek() != Tok::Arrow {
            return Ok((lhs, t));
        }
        self.logic_operand(t, l0, c0, "->")?;
        self.bump();
        let (l, c) = self.here();
        let (rhs, rt) = self.implies()?;
        self.logic_operand(rt, l, c, "->")?;
        Ok((Expr::Logic(LogicOp::Implies, Box::new(lhs), Box::new(rhs)), Ty::Bool))
    }

    fn or(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (mut lhs, t) = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.logic_operand(t, l0, c0, "|")?;
            self.bump();
            let (l, c) = self.here();
            let (rhs, rt) = self.and()?;
            self.logic_operand(rt, l, c, "|")?;
            lhs = Expr::Logic(LogicOp::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, t))
    }

    fn and(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (mut lhs, t) = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.logic_operand(t, l0, c0, "&")?;
            self.bump();
            let (l, c) = self.here();
            let (rhs, rt) = self.unary()?;
            self.logic_operand(rt, l, c, "&")?;
            lhs = Expr::Logic(LogicOp::And, Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, t))
    }

    fn unary(&mut self) -> Result<(Expr, Ty), SpecError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            let (l, c) = self.here();
            let (e, t) = self.unary()?;
            self.logic_operand(t, l, c, "!")?;
            return Ok((Expr::Not(Box::new(e)), Ty::Bool));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (lhs, lt) = self.additive()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Ok((lhs, lt)),
        };
        self.bump();
        let (rhs, rt) = self.additive()?;
        if lt != rt {
            return Err(SpecError::new(ErrorKind::Type, l0, c0, "comparison mixes boolean and integer terms"));
        }
        if lt == Ty::Bool && !matches!(op, CmpOp::Eq | CmpOp::Ne) {
            return Err(SpecError::new(ErrorKind::Type, l0, c0, "ordering comparison on boolean terms"));
        }
        if matches!(
            self.peek(),
            Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
        ) {
            return Err(self.error_here(ErrorKind::Syntax, "comparisons do not chain; add parentheses"));
        }
        Ok((Expr::Cmp(op, Box::new(lhs), Box::new(rhs)), Ty::Bool))
    }

    fn additive(&mut self) -> Result<(Expr, Ty), SpecError> {
        let (l0, c0) = self.here();
        let (mut lhs, t) = self.atom()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => break,
            };
            if t != Ty::Int {
                return Err(SpecError::new(ErrorKind::Type, l0, c0, "arithmetic on a boolean term"));
            }
            self.bump();
            let (l, c) = self.here();
            let (rhs, rt) = self.atom()?;
            if rt != Ty::Int {
                return Err(SpecError::new(ErrorKind::Type, l, c, "arithmetic on a boolean term"));
            }
            lhs = Expr::Arith(op, Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, t))
    }

    fn atom(&mut self) -> Result<(Expr, Ty), SpecError> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => Ok((Expr::Int(self.int_literal()?), Ty::Int)),
            Tok::True => {
                self.bump();
                Ok((Expr::Bool(true), Ty::Bool))
            }
            Tok::False => {
                self.bump();
                Ok((Expr::Bool(false), Ty::Bool))
            }
            Tok::LParen => {
                self.bump();
                let r = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            Tok::Next => {
                let (line, col) = self.here();
                self.bump();
                self.expect(Tok::LParen)?;
                if *self.peek() == Tok::Next {
                    return Err(self.error_here(ErrorKind::Syntax, "nested `next` is not allowed"));
                }
                let (r, ty, owner) = self.var_ref()?;
                self.expect(Tok::RParen)?;
                self.check_next(owner, line, col)?;
                Ok((Expr::Next(r), ty))
            }
            Tok::Ident(_) => {
                let (line, col) = self.here();
                let (r, ty, owner) = self.var_ref()?;
                if let Some((Kind::Asm, Temporal::Init)) = self.ctx {
                    if owner == Owner::Sys {
                        return Err(SpecError::new(
                            ErrorKind::Constraint,
                            line,
                            col,
                            format!("initial assumption refers to system variable `{}`", r.name),
                        ));
                    }
                }
                Ok((Expr::Var(r), ty))
            }
            other => Err(self.error_here(
                ErrorKind::Syntax,
                format!("expected an expression, found {}", other.describe()),
            )),
        }
    }

    fn check_next(&self, owner: Owner, line: usize, col: usize) -> Result<(), SpecError> {
        match self.ctx {
            Some((_, Temporal::Init)) => Err(SpecError::new(
                ErrorKind::Constraint,
                line,
                col,
                "`next` in an initial constraint",
            )),
            Some((_, Temporal::Justice)) => Err(SpecError::new(
                ErrorKind::Constraint,
                line,
                col,
                "`next` in a justice constraint",
            )),
            Some((Kind::Asm, Temporal::Safety)) if owner == Owner::Sys => Err(SpecError::new(
                ErrorKind::Constraint,
                line,
                col,
                "assumption applies `next` to a system variable",
            )),
            _ => Ok(()),
        }
    }

    fn var_ref(&mut self) -> Result<(VarRef, Ty, Owner), SpecError> {
        let (name, line, col) = self.ident()?;
        let decl = self
            .spec
            .decl(&name)
            .cloned()
            .ok_or_else(|| SpecError::new(ErrorKind::UnknownIdentifier, line, col, format!("unknown identifier `{name}`")))?;
        let index = if *self.peek() == Tok::LBracket {
            self.bump();
            let (l, c) = self.here();
            let k = self.int_literal()?;
            self.expect(Tok::RBracket)?;
            match decl.vtype {
                VarType::BoolArray(n) if k >= 0 && k < n as i64 => Some(k as u32),
                VarType::BoolArray(n) => {
                    return Err(SpecError::new(ErrorKind::Type, l, c, format!("index {k} out of bounds for `{name}` of length {n}")));
                }
                _ => return Err(SpecError::new(ErrorKind::Type, line, col, format!("`{name}` is not an array"))),
            }
        } else {
            None
        };
        let ty = match (decl.vtype, index) {
            (VarType::Bool, _) => Ty::Bool,
            (VarType::BoolArray(_), Some(_)) => Ty::Bool,
            (VarType::BoolArray(_), None) => {
                return Err(SpecError::new(ErrorKind::Type, line, col, format!("array `{name}` used without index")));
            }
            (VarType::IntRange(..), _) => Ty::Int,
        };
        Ok((VarRef { name, index }, ty, decl.owner))
    }
}
