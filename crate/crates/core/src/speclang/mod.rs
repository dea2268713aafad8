//! Parser and AST for the `env`/`sys`/`asm`/`gar` specification language.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;

use std::fmt;

pub use ast::*;
pub use parser::parse_spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    UnknownIdentifier,
    Type,
    Declaration,
    Constraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SpecError {
    pub fn new(kind: ErrorKind, line: usize, col: usize, message: impl Into<String>) -> Self {
        SpecError {
            kind,
            line,
            col,
            message: message.into(),
        }
    }

    pub(crate) fn lex(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Lexical, line, col, message)
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for SpecError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_and_justice() {
        let s = parse_spec("sys boolean[4] a; gar GF a[0];").unwrap();
        assert_eq!(s.decls.len(), 1);
        assert_eq!(s.decls[0].owner, Owner::Sys);
        assert_eq!(s.decls[0].vtype, VarType::BoolArray(4));
        assert_eq!(s.constraints.len(), 1);
        assert_eq!(s.constraints[0].kind, Kind::Gar);
        assert_eq!(s.constraints[0].temporal, Temporal::Justice);
    }

    #[test]
    fn counter_declaration() {
        let s = parse_spec("env Int(0..10000) c;").unwrap();
        assert_eq!(s.decls[0].owner, Owner::Env);
        assert_eq!(s.decls[0].vtype, VarType::IntRange(0, 10000));
        assert_eq!(s.decls[0].vtype.bit_width(), 14);
    }

    #[test]
    fn unknown_identifier_position() {
        let e = parse_spec("sys boolean x;\ngar G next(c)=c+1;").unwrap_err();
        assert_eq!(e.kind, ErrorKind::UnknownIdentifier);
        assert_eq!((e.line, e.col), (2, 12));
    }

    #[test]
    fn nested_next_is_syntax_error() {
        let e = parse_spec("env boolean x; asm G next(next(x));").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
    }

    #[test]
    fn next_rules() {
        assert!(parse_spec("env boolean x; asm G next(x) = x;").is_ok());
        assert!(parse_spec("env boolean x; sys boolean y; gar G next(y) = next(x);").is_ok());
        let e = parse_spec("sys boolean y; asm G next(y);").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Constraint);
        let e = parse_spec("env boolean x; gar GF next(x);").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Constraint);
        let e = parse_spec("env boolean x; gar next(x);").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Constraint);
    }

    #[test]
    fn initial_assumption_scope() {
        let e = parse_spec("env boolean x; sys boolean y; asm x & y;").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Constraint);
        assert!(parse_spec("env boolean x; sys boolean y; asm GF x & y;").is_ok());
        assert!(parse_spec("env boolean x; sys boolean y; gar x & y;").is_ok());
    }

    #[test]
    fn type_errors() {
        for bad in [
            "sys Int(0..3) c; gar c;",
            "sys Int(0..3) c; sys boolean b; gar c = b;",
            "sys boolean b; gar b + 1 = 2;",
            "sys boolean b; sys boolean d; gar b < d;",
            "sys boolean[2] a; gar a;",
            "sys boolean[2] a; gar a[2];",
            "sys boolean b; gar b[0];",
        ] {
            let e = parse_spec(bad).unwrap_err();
            assert_eq!(e.kind, ErrorKind::Type, "{bad}");
        }
    }

    #[test]
    fn declaration_errors() {
        for bad in ["sys boolean[0] a;", "sys Int(3..2) c;", "env boolean x; sys boolean x;"] {
            assert_eq!(parse_spec(bad).unwrap_err().kind, ErrorKind::Declaration, "{bad}");
        }
        let e = parse_spec("sys boolean x; gar g: x; gar g: !x;").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Declaration);
    }

    #[test]
    fn precedence() {
        let s = parse_spec("sys boolean a; sys boolean b; sys boolean c; gar a | b & c -> a <-> b;").unwrap();
        assert_eq!(s.constraints[0].expr.to_string(), "((a | (b & c)) -> a) <-> b");
        let s = parse_spec("sys boolean a; sys boolean b; sys boolean c; gar a -> b -> c;").unwrap();
        assert_eq!(s.constraints[0].expr.to_string(), "a -> (b -> c)");
        let s = parse_spec("sys boolean a; sys boolean b; gar !a = b;").unwrap();
        assert_eq!(s.constraints[0].expr.to_string(), "!(a = b)");
        let s = parse_spec("sys Int(0..9) c; gar c - 1 + 2 = -3;").unwrap();
        assert_eq!(s.constraints[0].expr.to_string(), "((c - 1) + 2) = -3");
    }

    #[test]
    fn comparisons_do_not_chain() {
        let e = parse_spec("sys Int(0..9) c; gar 1 < c < 3;").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
    }

    #[test]
    fn labels_and_completion() {
        let s = parse_spec("sys boolean x; gar x; gar g1: G x; gar GF x; asm GF true;").unwrap();
        assert_eq!(s.label(0), "gar_0");
        assert_eq!(s.label(1), "g1");
        assert_eq!(s.label(2), "gar_2");
        assert_eq!(s.label(3), "asm_0");
        assert_eq!(s.default_completion(), s);

        let bare = parse_spec("env boolean x; sys boolean y;").unwrap();
        let c = bare.default_completion();
        assert_eq!(c.count(Kind::Asm, Temporal::Justice), 1);
        assert_eq!(c.count(Kind::Gar, Temporal::Justice), 1);

        let four = parse_spec("sys boolean[4] a; gar GF a[0]; gar GF a[1]; gar GF a[2]; gar GF a[3];").unwrap();
        let c = four.default_completion();
        assert_eq!(c.count(Kind::Gar, Temporal::Justice), 4);
        assert_eq!(c.count(Kind::Asm, Temporal::Justice), 1);
    }

    #[test]
    fn restriction_keeps_labels() {
        let s = parse_spec("sys boolean x; gar x; gar g1: G x; gar GF x; asm GF x;").unwrap();
        let r = s.restrict_guarantees(&[2]);
        assert_eq!(r.constraints.len(), 2);
        assert_eq!(r.label(0), "gar_2");
        assert_eq!(r.label(1), "asm_0");
    }

    #[test]
    fn round_trip_listing() {
        let text = "env boolean req;\nsys boolean grant;\nsys Int(-2..5) c;\n\
                    gar g1: GF grant;\nasm G next(req) -> !(c = -2);\ngar G next(c) = c + 1 | (c = 5 & next(c) = 0);\n";
        let s = parse_spec(text).unwrap();
        let again = parse_spec(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }
}
