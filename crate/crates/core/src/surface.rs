//! Text syntax for formulas.
//!
//! ```text
//! formula := quant | disj ( "->" formula )?
//! disj    := conj ( "|" disj )?
//! conj    := unary ( "&" conj )?
//! unary   := ( "~" | "[]" | "<>" | "prf" ) unary | quant | primary
//! quant   := ( "forall" | "exists" ) IDENT "." formula
//! primary := "bot" | "(" formula ")" | term "=" term | IDENT ( "(" terms ")" )?
//! term    := NUMERAL | IDENT ( "(" terms ")" )?
//! ```
//!
//! All binary connectives associate to the right. A quantifier body extends
//! as far to the right as possible. `~A` is read as `A -> bot` and `<>A` as
//! `~[]~A`; the printer restores both abbreviations.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, FormulaKind, Symbol, Term};

pub(crate) const KEYWORDS: [&str; 4] = ["bot", "forall", "exists", "prf"];

/// Parse failure. `position` is the byte offset just past the offending
/// lexeme (the input length when input ended early), so the text before it
/// is never a complete formula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Bot,
    Forall,
    Exists,
    Prf,
    Tilde,
    Box,
    Diamond,
    And,
    Or,
    Arrow,
    Equals,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Num(s) => format!("`{s}`"),
            Tok::Bot => "`bot`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Prf => "`prf`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &[u8]| bytes.get(i..i + 2) == Some(s);
        let tok = if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &text[start..i] {
                "bot" => Tok::Bot,
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "prf" => Tok::Prf,
                word => Tok::Ident(word.to_owned()),
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Num(text[start..i].to_owned())
        } else if two(b"[]") {
            i += 2;
            Tok::Box
        } else if two(b"<>") {
            i += 2;
            Tok::Diamond
        } else if two(b"->") {
            i += 2;
            Tok::Arrow
        } else {
            i += 1;
            match c {
                b'~' => Tok::Tilde,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'=' => Tok::Equals,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                _ => {
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError {
                        position: start + ch.len_utf8(),
                        expected: "a token".into(),
                        found: format!("`{ch}`"),
                    });
                }
            }
        };
        out.push(Token { tok, end: i });
    }
    out.push(Token {
        tok: Tok::Eof,
        end: text.len(),
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError {
            position: t.end,
            expected: expected.to_owned(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conj()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.disj()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.conj()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Prf => {
                self.bump();
                Ok(Formula::prf(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.peek() {
                    Tok::Ident(name) => Symbol::new(name).expect("lexer yields identifiers"),
                    _ => return Err(self.error("a variable")),
                };
                self.bump();
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(Formula::new(if universal {
                    FormulaKind::Forall(var, body)
                } else {
                    FormulaKind::Exists(var, body)
                }))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bot => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Num(_) => {
                let lhs = self.term()?;
                self.equation(lhs)
            }
            Tok::Ident(name) => {
                self.bump();
                let name = Symbol::new(&name).expect("lexer yields identifiers");
                let args = if *self.peek() == Tok::LParen {
                    self.term_list()?
                } else {
                    Vec::new()
                };
                if *self.peek() == Tok::Equals {
                    let lhs = if args.is_empty() {
                        Term::Var(name)
                    } else {
                        Term::App(name, args)
                    };
                    return self.equation(lhs);
                }
                Ok(Formula::new(FormulaKind::Atom(name, args)))
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn equation(&mut self, lhs: Term) -> Result<Formula, ParseError> {
        self.expect(Tok::Equals)?;
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Num(digits) => {
                let value = digits
                    .parse()
                    .map_err(|_| self.error("a numeral below 2^64"))?;
                self.bump();
                Ok(Term::Const(value))
            }
            Tok::Ident(name) => {
                self.bump();
                let name = Symbol::new(&name).expect("lexer yields identifiers");
                if *self.peek() == Tok::LParen {
                    Ok(Term::App(name, self.term_list()?))
                } else {
                    Ok(Term::Var(name))
                }
            }
            _ => Err(self.error("a term")),
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }
}

/// Parses one formula; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {error}")]
pub struct CorpusError {
    pub line: usize,
    pub error: ParseError,
}

/// Parses a corpus: one formula per line, blank lines and lines starting
/// with `#` skipped. Line numbers in errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse(l).map_err(|error| CorpusError { line: i + 1, error }))
        .collect()
}

// Binding strength of a position; higher binds tighter.
const IMP: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

fn level(f: &Formula) -> u8 {
    match f.kind() {
        FormulaKind::Implies(_, b) if b.is_bot() => UNARY,
        FormulaKind::Implies(..) => IMP,
        FormulaKind::Or(..) => OR,
        FormulaKind::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(out: &mut String, f: &Formula, min_level: u8, followed: bool) {
    let quantified = matches!(f.kind(), FormulaKind::Forall(..) | FormulaKind::Exists(..));
    if (quantified && followed) || level(f) < min_level {
        out.push('(');
        write_formula(out, f, IMP, false);
        out.push(')');
        return;
    }
    match f.kind() {
        FormulaKind::Bot => out.push_str("bot"),
        FormulaKind::Eq(s, t) => {
            write_term(out, s);
            out.push_str(" = ");
            write_term(out, t);
        }
        FormulaKind::Atom(name, args) => {
            out.push_str(name.as_str());
            if !args.is_empty() {
                write_args(out, args);
            }
        }
        FormulaKind::Implies(a, b) if b.is_bot() => {
            if let Some(inner) = f.as_diamond() {
                out.push_str("<>");
                write_formula(out, inner, UNARY, followed);
            } else {
                out.push('~');
                write_formula(out, a, UNARY, followed);
            }
        }
        FormulaKind::Implies(a, b) => {
            write_formula(out, a, OR, true);
            out.push_str(" -> ");
            write_formula(out, b, IMP, followed);
        }
        FormulaKind::Or(a, b) => {
            write_formula(out, a, AND, true);
            out.push_str(" | ");
            write_formula(out, b, OR, followed);
        }
        FormulaKind::And(a, b) => {
            write_formula(out, a, UNARY, true);
            out.push_str(" & ");
            write_formula(out, b, AND, followed);
        }
        FormulaKind::Box(a) => {
            out.push_str("[]");
            write_formula(out, a, UNARY, followed);
        }
        FormulaKind::Prf(a) => {
            out.push_str("prf ");
            write_formula(out, a, UNARY, followed);
        }
        FormulaKind::Forall(x, a) | FormulaKind::Exists(x, a) => {
            out.push_str(if matches!(f.kind(), FormulaKind::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(x.as_str());
            out.push_str(". ");
            write_formula(out, a, IMP, false);
        }
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    out.push('(');
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_term(out, t);
    }
    out.push(')');
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Const(n) => out.push_str(&n.to_string()),
        Term::App(name, args) => {
            out.push_str(name.as_str());
            write_args(out, args);
        }
    }
}

/// Canonical text with minimal parentheses.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, IMP, false);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_term(&mut out, self);
        f.write_str(&out)
    }
}

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}
