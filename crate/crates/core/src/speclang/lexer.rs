use super::SpecError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Env,
    Sys,
    Asm,
    Gar,
    Always,
    AlwaysEventually,
    Next,
    Boolean,
    IntKw,
    True,
    False,
    Semi,
    Colon,
    LBracket,
    RBracket,
    LParen,
    RParen,
    DotDot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Env => "env",
            Tok::Sys => "sys",
            Tok::Asm => "asm",
            Tok::Gar => "gar",
            Tok::Always => "G",
            Tok::AlwaysEventually => "GF",
            Tok::Next => "next",
            Tok::Boolean => "boolean",
            Tok::IntKw => "Int",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::DotDot => "..",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        let at = |k: usize| chars.get(i + k).copied();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "env" => Tok::Env,
                "sys" => Tok::Sys,
                "asm" => Tok::Asm,
                "gar" => Tok::Gar,
                "G" => Tok::Always,
                "GF" => Tok::AlwaysEventually,
                "next" => Tok::Next,
                "boolean" => Tok::Boolean,
                "Int" => Tok::IntKw,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let v = digits
                .parse::<i64>()
                .map_err(|_| SpecError::lex(line, start_col, format!("integer `{digits}` out of range")))?;
            (Tok::Int(v), j - i)
        } else {
            match (c, at(1), at(2)) {
                ('<', Some('-'), Some('>')) => (Tok::DoubleArrow, 3),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('.', Some('.'), _) => (Tok::DotDot, 2),
                ('!', Some('='), _) => (Tok::Ne, 2),
                ('<', Some('='), _) => (Tok::Le, 2),
                ('>', Some('='), _) => (Tok::Ge, 2),
                (';', _, _) => (Tok::Semi, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('!', _, _) => (Tok::Bang, 1),
                ('&', _, _) => (Tok::Amp, 1),
                ('|', _, _) => (Tok::Pipe, 1),
                ('=', _, _) => (Tok::Eq, 1),
                ('<', _, _) => (Tok::Lt, 1),
                ('>', _, _) => (Tok::Gt, 1),
                ('+', _, _) => (Tok::Plus, 1),
                ('-', _, _) => (Tok::Minus, 1),
                _ => return Err(SpecError::lex(line, col, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Token {
            tok,
            line,
            col: start_col,
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_positions() {
        let toks = tokenize("a <-> b -> !c != 3\n  // note\n x..y").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("a".into()),
                Tok::DoubleArrow,
                Tok::Ident("b".into()),
                Tok::Arrow,
                Tok::Bang,
                Tok::Ident("c".into()),
                Tok::Ne,
                Tok::Int(3),
                Tok::Ident("x".into()),
                Tok::DotDot,
                Tok::Ident("y".into()),
                Tok::Eof,
            ]
        );
        assert_eq!((toks[8].line, toks[8].col), (3, 2));
    }

    #[test]
    fn bad_character() {
        let err = tokenize("gar G x # y;").unwrap_err();
        assert_eq!((err.line, err.col), (1, 9));
    }
}
