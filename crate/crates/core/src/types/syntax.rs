//! Abstract syntax and parser for the textual type grammar.
//!
//! Precedence, loosest first: `rec X.`, `->` (right-assoc), `*`
//! (right-assoc), `|`, `&` and `\` (left-assoc), `~`.

use num_bigint::BigInt;

use crate::error::SyntaxError;
use crate::lexer::{tokenize, Cursor, Tok};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExprKind {
    Int,
    Bool,
    IntLit(BigInt),
    BoolLit(bool),
    Bot,
    Empty,
    Any,
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Or(Box<TypeExpr>, Box<TypeExpr>),
    And(Box<TypeExpr>, Box<TypeExpr>),
    Diff(Box<TypeExpr>, Box<TypeExpr>),
    Not(Box<TypeExpr>),
    Rec(String, Box<TypeExpr>),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeExprKind,
    pub line: usize,
    pub col: usize,
}

impl TypeExpr {
    pub fn new(kind: TypeExprKind, line: usize, col: usize) -> Self {
        TypeExpr { kind, line, col }
    }

    /// Top-level conjuncts of an `&`-chain.
    pub fn conjuncts(&self) -> Vec<&TypeExpr> {
        match &self.kind {
            TypeExprKind::And(a, b) => {
                let mut out = a.conjuncts();
                out.extend(b.conjuncts());
                out
            }
            _ => vec![self],
        }
    }
}

const KEYWORDS: &[&str] = &[
    "Int", "Bool", "Bot", "Empty", "Any", "true", "false", "tt", "ff", "rec",
];

pub fn is_type_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a complete type from text.
pub fn parse_type_expr(src: &str) -> Result<TypeExpr, SyntaxError> {
    let mut cur = Cursor::new(tokenize(src, false)?);
    let t = parse_type(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error(format!("unexpected {} after type", cur.peek())));
    }
    Ok(t)
}

/// Parses a type from a token cursor, stopping at the first token that
/// cannot continue it.
pub fn parse_type(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    parse_arrow(cur)
}

fn binary(
    kind: fn(Box<TypeExpr>, Box<TypeExpr>) -> TypeExprKind,
    a: TypeExpr,
    b: TypeExpr,
) -> TypeExpr {
    let (line, col) = (a.line, a.col);
    TypeExpr::new(kind(Box::new(a), Box::new(b)), line, col)
}

fn parse_arrow(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let lhs = parse_prod(cur)?;
    if *cur.peek() == Tok::Arrow {
        cur.advance();
        let rhs = parse_arrow(cur)?;
        return Ok(binary(TypeExprKind::Arrow, lhs, rhs));
    }
    Ok(lhs)
}

fn parse_prod(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let lhs = parse_or(cur)?;
    if *cur.peek() == Tok::Star {
        cur.advance();
        let rhs = parse_prod(cur)?;
        return Ok(binary(TypeExprKind::Prod, lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let mut lhs = parse_and(cur)?;
    while *cur.peek() == Tok::Bar {
        cur.advance();
        let rhs = parse_and(cur)?;
        lhs = binary(TypeExprKind::Or, lhs, rhs);
    }
    Ok(lhs)
}

fn parse_and(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let mut lhs = parse_not(cur)?;
    loop {
        match cur.peek() {
            Tok::Amp => {
                cur.advance();
                let rhs = parse_not(cur)?;
                lhs = binary(TypeExprKind::And, lhs, rhs);
            }
            Tok::Backslash => {
                cur.advance();
                let rhs = parse_not(cur)?;
                lhs = binary(TypeExprKind::Diff, lhs, rhs);
            }
            _ => return Ok(lhs),
        }
    }
}

fn parse_not(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    if *cur.peek() == Tok::Tilde {
        let (line, col) = (cur.here().line, cur.here().col);
        cur.advance();
        let inner = parse_not(cur)?;
        return Ok(TypeExpr::new(TypeExprKind::Not(Box::new(inner)), line, col));
    }
    parse_atom(cur)
}

fn parse_atom(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let (line, col) = (cur.here().line, cur.here().col);
    let kind = match cur.advance() {
        Tok::Int(n) => TypeExprKind::IntLit(n),
        Tok::LParen => {
            let t = parse_type(cur)?;
            cur.expect(Tok::RParen)?;
            return Ok(t);
        }
        Tok::Ident(s) => match s.as_str() {
            "Int" => TypeExprKind::Int,
            "Bool" => TypeExprKind::Bool,
            "Bot" => TypeExprKind::Bot,
            "Empty" => TypeExprKind::Empty,
            "Any" => TypeExprKind::Any,
            "true" | "tt" => TypeExprKind::BoolLit(true),
            "false" | "ff" => TypeExprKind::BoolLit(false),
            "rec" => {
                let name = match cur.advance() {
                    Tok::Ident(n) if !is_type_keyword(&n) => n,
                    other => {
                        return Err(SyntaxError::new(
                            line,
                            col,
                            format!("expected a binder after `rec`, found {other}"),
                        ))
                    }
                };
                cur.expect(Tok::Dot)?;
                let body = parse_type(cur)?;
                TypeExprKind::Rec(name, Box::new(body))
            }
            _ => TypeExprKind::Var(s),
        },
        other => {
            return Err(SyntaxError::new(
                line,
                col,
                format!("expected a type, found {other}"),
            ))
        }
    };
    Ok(TypeExpr::new(kind, line, col))
}
