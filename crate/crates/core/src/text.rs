//! Concrete text syntax.
//!
//! ```text
//! T ::= "int" | S
//! S ::= "end" | "?" M "." S | "!" M "." S | Ident | "~" Ident | "rec" Ident "." S | "(" S ")"
//! M ::= "int" | "end" | Ident | "~" Ident | "(" T ")"
//! ```
//!
//! Identifiers start with an uppercase letter. Bodies of `rec` and
//! continuations extend as far right as possible, so compound message types
//! have to be parenthesized. Parsed types come back with distinct binder
//! names (see [`TypeExpr::canonicalize`]); the printer restores readable
//! names and never introduces capture.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{free_names, Name, TypeExpr};

/// Half-open byte range into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }

    fn join(self, other: SourceSpan) -> Self {
        SourceSpan { start: self.start.min(other.start), end: self.end.max(other.end) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { message: String, span: SourceSpan },
    #[error("non-contractive type at {span}")]
    NonContractive { span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::NonContractive { span } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Question,
    Bang,
    Dot,
    Tilde,
    LParen,
    RParen,
    End,
    Int,
    Rec,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Question => f.write_str("`?`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("`end`"),
            Tok::Int => f.write_str("`int`"),
            Tok::Rec => f.write_str("`rec`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b'?' => Some(Tok::Question),
            b'!' => Some(Tok::Bang),
            b'.' => Some(Tok::Dot),
            b'~' => Some(Tok::Tilde),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, SourceSpan::new(i, i + 1)));
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word = &text[start..i];
            let span = SourceSpan::new(start, i);
            let tok = match word {
                "end" => Tok::End,
                "int" => Tok::Int,
                "rec" => Tok::Rec,
                w if c.is_ascii_uppercase() => Tok::Ident(w.to_string()),
                w => {
                    return Err(ParseError::Syntax {
                        message: format!("unknown keyword `{w}` (variables start with an uppercase letter)"),
                        span,
                    })
                }
            };
            out.push((tok, span));
            continue;
        }
        // step over a whole UTF-8 character so the span stays on a boundary
        let len = text[i..].chars().next().map_or(1, char::len_utf8);
        return Err(ParseError::Syntax {
            message: format!("unexpected character `{}`", &text[i..i + len]),
            span: SourceSpan::new(i, i + len),
        });
    }
    out.push((Tok::Eof, SourceSpan::new(text.len(), text.len())));
    Ok(out)
}

// Parse tree with spans and user names, before contractivity checking and
// renaming.
#[derive(Debug)]
struct Raw {
    node: RawNode,
    span: SourceSpan,
}

#[derive(Debug)]
enum RawNode {
    Int,
    End,
    In(Box<Raw>, Box<Raw>),
    Out(Box<Raw>, Box<Raw>),
    Var(String),
    Neg(String),
    Rec(String, Box<Raw>),
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { message: message.into(), span: self.span() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(format!("expected {what}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().1;
                Ok((name, span))
            }
            other => self.error(format!("expected a variable name, found {other}")),
        }
    }

    /// T ::= "int" | S
    fn ty(&mut self) -> Result<Raw, ParseError> {
        match self.peek() {
            Tok::Int => {
                let span = self.bump().1;
                Ok(Raw { node: RawNode::Int, span })
            }
            Tok::LParen => {
                let open = self.bump().1;
                let inner = self.ty()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Raw { node: inner.node, span: open.join(close) })
            }
            _ => self.session(),
        }
    }

    fn session(&mut self) -> Result<Raw, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::End => {
                self.bump();
                Ok(Raw { node: RawNode::End, span: start })
            }
            Tok::Question | Tok::Bang => {
                let (dir, _) = self.bump();
                let msg = self.message()?;
                self.expect(Tok::Dot, "`.` before the continuation")?;
                let cont = self.session()?;
                let span = start.join(cont.span);
                let node = if dir == Tok::Question {
                    RawNode::In(Box::new(msg), Box::new(cont))
                } else {
                    RawNode::Out(Box::new(msg), Box::new(cont))
                };
                Ok(Raw { node, span })
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Raw { node: RawNode::Var(name), span: start })
            }
            Tok::Tilde => {
                self.bump();
                let (name, span) = self.ident()?;
                Ok(Raw { node: RawNode::Neg(name), span: start.join(span) })
            }
            Tok::Rec => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(Tok::Dot, "`.` after the bound variable")?;
                let body = self.session()?;
                let span = start.join(body.span);
                Ok(Raw { node: RawNode::Rec(name, Box::new(body)), span })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.session()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Raw { node: inner.node, span: start.join(close) })
            }
            Tok::Int => self.error("`int` is not a session type; it may only be a message or a whole type"),
            other => self.error(format!("expected a session type, found {other}")),
        }
    }

    fn message(&mut self) -> Result<Raw, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int => {
                self.bump();
                Ok(Raw { node: RawNode::Int, span: start })
            }
            Tok::End | Tok::Ident(_) | Tok::Tilde => self.session(),
            Tok::LParen => {
                self.bump();
                let inner = self.ty()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Raw { node: inner.node, span: start.join(close) })
            }
            Tok::Question | Tok::Bang | Tok::Rec => self.error("compound message types must be parenthesized"),
            other => self.error(format!("expected a message type, found {other}")),
        }
    }
}

fn check_contractive(raw: &Raw) -> Result<(), ParseError> {
    match &raw.node {
        RawNode::Int | RawNode::End | RawNode::Var(_) | RawNode::Neg(_) => Ok(()),
        RawNode::In(m, c) | RawNode::Out(m, c) => {
            check_contractive(m)?;
            check_contractive(c)
        }
        RawNode::Rec(..) => {
            let mut chain = Vec::new();
            let mut cur = raw;
            while let RawNode::Rec(x, b) = &cur.node {
                chain.push(x.as_str());
                cur = b;
            }
            match &cur.node {
                RawNode::Var(y) | RawNode::Neg(y) if chain.contains(&y.as_str()) => {
                    Err(ParseError::NonContractive { span: raw.span.join(cur.span) })
                }
                _ => check_contractive(cur),
            }
        }
    }
}

fn lower(raw: &Raw) -> TypeExpr {
    match &raw.node {
        RawNode::Int => TypeExpr::Int,
        RawNode::End => TypeExpr::End,
        RawNode::In(m, c) => TypeExpr::input(lower(m), lower(c)),
        RawNode::Out(m, c) => TypeExpr::output(lower(m), lower(c)),
        RawNode::Var(x) => TypeExpr::var(x),
        RawNode::Neg(x) => TypeExpr::neg_var(x),
        RawNode::Rec(x, b) => TypeExpr::rec(x, lower(b)),
    }
}

/// Parses a type and renames its binders apart.
pub fn parse(text: &str) -> Result<TypeExpr, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let raw = parser.ty()?;
    if *parser.peek() != Tok::Eof {
        return parser.error(format!("unexpected {} after the end of the type", parser.peek()));
    }
    check_contractive(&raw)?;
    Ok(lower(&raw).canonicalize())
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Prints with the fewest parentheses `parse` accepts.
///
/// Binders keep their base name unless that would capture a free variable of
/// the body, in which case a numeric suffix is added.
pub fn print(t: &TypeExpr) -> String {
    let mut out = String::new();
    let mut env: Vec<(Name, String)> = Vec::new();
    print_session(t, &mut env, &mut out);
    out
}

fn display(env: &[(Name, String)], x: &Name) -> String {
    env.iter().rev().find(|(n, _)| n == x).map(|(_, s)| s.clone()).unwrap_or_else(|| x.base().to_string())
}

fn print_session(t: &TypeExpr, env: &mut Vec<(Name, String)>, out: &mut String) {
    match t {
        TypeExpr::Int => out.push_str("int"),
        TypeExpr::End => out.push_str("end"),
        TypeExpr::Var(x) => out.push_str(&display(env, x)),
        TypeExpr::NegVar(x) => {
            out.push('~');
            out.push_str(&display(env, x));
        }
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
            out.push(if matches!(t, TypeExpr::In(..)) { '?' } else { '!' });
            print_message(m, env, out);
            out.push('.');
            print_session(c, env, out);
        }
        TypeExpr::Rec(x, b) => {
            let avoid: Vec<String> = free_names(b).iter().filter(|y| *y != x).map(|y| display(env, y)).collect();
            let base = if valid_ident(x.base()) { x.base() } else { "X" };
            let chosen = std::iter::once(base.to_string())
                .chain((1..).map(|i| format!("{base}{i}")))
                .find(|cand| !avoid.contains(cand))
                .expect("an unused suffix exists");
            out.push_str("rec ");
            out.push_str(&chosen);
            out.push('.');
            env.push((x.clone(), chosen));
            print_session(b, env, out);
            env.pop();
        }
    }
}

fn print_message(m: &TypeExpr, env: &mut Vec<(Name, String)>, out: &mut String) {
    match m {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => print_session(m, env, out),
        _ => {
            out.push('(');
            print_session(m, env, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;

    #[test]
    fn parses_running_example() {
        let t = parse("rec X.!X.X").unwrap();
        match &t {
            TypeExpr::Rec(x, b) => {
                assert_eq!(**b, TypeExpr::output(TypeExpr::Var(x.clone()), TypeExpr::Var(x.clone())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_parenthesized_message() {
        let t = parse("rec X.!(?int.X).end").unwrap();
        let expected =
            TypeExpr::rec("X", TypeExpr::output(TypeExpr::input(TypeExpr::Int, TypeExpr::var("X")), TypeExpr::End));
        assert!(alpha_eq(&t, &expected));
    }

    #[test]
    fn missing_continuation_is_an_error() {
        let err = parse("?int").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        assert_eq!(err.span(), SourceSpan::new(4, 4));
    }

    #[test]
    fn non_contractive_span_covers_chain() {
        let err = parse("!int.rec X.rec Y.X").unwrap_err();
        assert_eq!(err, ParseError::NonContractive { span: SourceSpan::new(5, 18) });
        let err = parse("rec X.~X").unwrap_err();
        assert!(matches!(err, ParseError::NonContractive { .. }));
    }

    #[test]
    fn unparenthesized_compound_message() {
        let err = parse("?rec X.!int.X.end").unwrap_err();
        assert!(err.to_string().contains("parenthesized"));
        assert!(parse("?!int.end.end").is_err());
    }

    #[test]
    fn int_is_not_a_continuation() {
        assert!(parse("?int.int").is_err());
        assert_eq!(parse("int").unwrap(), TypeExpr::Int);
        assert_eq!(parse("(int)").unwrap(), TypeExpr::Int);
        assert_eq!(parse("?(int).end").unwrap(), parse("?int.end").unwrap());
    }

    #[test]
    fn bad_tokens() {
        let err = parse("rec x.end").unwrap_err();
        assert_eq!(err.span(), SourceSpan::new(4, 5));
        let err = parse("?μ.end").unwrap_err();
        assert_eq!(err.span(), SourceSpan::new(1, 3));
        assert!(parse("end end").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&parse("rec X.?(rec Y.!Y.X).X").unwrap()), "rec X.?(rec Y.!Y.X).X");
        assert_eq!(print(&TypeExpr::End), "end");
        assert_eq!(print(&parse("((end))").unwrap()), "end");
        assert_eq!(print(&parse("? int . ~Y").unwrap()), "?int.~Y");
        assert_eq!(print(&parse("!end.end").unwrap()), "!end.end");
    }

    #[test]
    fn printer_reuses_names_when_safe() {
        let t = parse("rec X.?(rec Z.!Z.Z).X").unwrap();
        assert_eq!(print(&t), "rec X.?(rec Z.!Z.Z).X");
        let shadow = TypeExpr::rec(
            "X",
            TypeExpr::input(
                TypeExpr::rec("X", TypeExpr::output(TypeExpr::var("X"), TypeExpr::var("X"))),
                TypeExpr::var("X"),
            ),
        )
        .canonicalize();
        assert_eq!(print(&shadow), "rec X.?(rec X.!X.X).X");
    }

    #[test]
    fn printer_renames_to_avoid_capture() {
        // inner binder based on X that refers to the outer X
        let outer = Name::with_tag("X", 1);
        let inner = Name::with_tag("X", 2);
        let t = TypeExpr::Rec(
            outer.clone(),
            Box::new(TypeExpr::Rec(
                inner.clone(),
                Box::new(TypeExpr::output(TypeExpr::Var(outer), TypeExpr::Var(inner))),
            )),
        );
        let s = print(&t);
        assert_eq!(s, "rec X.rec X1.!X.X1");
        assert!(alpha_eq(&parse(&s).unwrap(), &t));
    }
}
