//! Term syntax: lexer, parser and printer.
//!
//! ```text
//! term := atom | term ";" term | term "(x)" term
//! atom := IDENT | "id[" IDENT "]" | "copy[" IDENT "]" | "discard[" IDENT "]"
//!       | "swap[" IDENT "," IDENT "]" | "(" term ")"
//! ```
//!
//! `;` binds looser than `(x)` and both associate to the left. The three
//! characters `(x)` always lex as the tensor, so a parenthesized name `x`
//! needs a space: `( x )`.

use std::fmt;

use crate::error::{Error, Result};

pub const KEYWORDS: [&str; 4] = ["id", "copy", "discard", "swap"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    Name(String),
    Id(String),
    Copy(String),
    Discard(String),
    Swap(String, String),
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
}

/// A term with the byte offset where it starts. Positions are ignored by
/// equality.
#[derive(Debug, Clone, Eq)]
pub struct Term {
    pub kind: TermKind,
    pub pos: usize,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        Term { kind, pos: 0 }
    }

    pub fn name(n: &str) -> Self {
        Term::new(TermKind::Name(n.into()))
    }

    pub fn seq(a: Term, b: Term) -> Self {
        Term::new(TermKind::Seq(Box::new(a), Box::new(b)))
    }

    pub fn par(a: Term, b: Term) -> Self {
        Term::new(TermKind::Par(Box::new(a), Box::new(b)))
    }

    /// Every kernel or term name used, with its position.
    pub fn names(&self) -> Vec<(&str, usize)> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<(&'a str, usize)>) {
        match &self.kind {
            TermKind::Name(n) => out.push((n, self.pos)),
            TermKind::Seq(a, b) | TermKind::Par(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Semi,
    Tensor,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char)
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if src[pos..].starts_with("(x)") {
            out.push((Tok::Tensor, pos));
            for _ in 0..3 {
                it.next();
            }
            continue;
        }
        if is_ident_start(c) {
            let mut end = pos;
            while let Some(&(i, c)) = it.peek() {
                if !is_ident_char(c) {
                    break;
                }
                end = i + c.len_utf8();
                it.next();
            }
            out.push((Tok::Ident(src[pos..end].to_string()), pos));
            continue;
        }
        let tok = match c {
            ';' => Tok::Semi,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            _ => {
                return Err(Error::Lex {
                    pos,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((tok, pos));
        it.next();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(Error::Syntax {
                pos: self.pos(),
                msg: "expected an object name".into(),
            }),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut left = self.factor()?;
        while self.peek() == Some(&Tok::Semi) {
            self.at += 1;
            let right = self.factor()?;
            let pos = left.pos;
            left = Term {
                kind: TermKind::Seq(Box::new(left), Box::new(right)),
                pos,
            };
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Term> {
        let mut left = self.atom()?;
        while self.peek() == Some(&Tok::Tensor) {
            self.at += 1;
            let right = self.atom()?;
            let pos = left.pos;
            left = Term {
                kind: TermKind::Par(Box::new(left), Box::new(right)),
                pos,
            };
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let mut inner = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                inner.pos = pos;
                Ok(inner)
            }
            Some(Tok::Ident(word)) => {
                self.at += 1;
                let kind = if KEYWORDS.contains(&word.as_str()) {
                    self.expect(Tok::LBracket, &format!("'[' after {word}"))?;
                    let a = self.ident()?;
                    let kind = match word.as_str() {
                        "id" => TermKind::Id(a),
                        "copy" => TermKind::Copy(a),
                        "discard" => TermKind::Discard(a),
                        _ => {
                            self.expect(Tok::Comma, "','")?;
                            TermKind::Swap(a, self.ident()?)
                        }
                    };
                    self.expect(Tok::RBracket, "']'")?;
                    kind
                } else {
                    TermKind::Name(word)
                };
                Ok(Term { kind, pos })
            }
            _ => Err(Error::Syntax {
                pos,
                msg: "expected a term".into(),
            }),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let t = p.term()?;
    if p.at < p.toks.len() {
        return Err(Error::Syntax {
            pos: p.pos(),
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(t)
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, t: &Term, paren: bool| {
            if paren {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match &self.kind {
            TermKind::Name(n) => write!(f, "{n}"),
            TermKind::Id(x) => write!(f, "id[{x}]"),
            TermKind::Copy(x) => write!(f, "copy[{x}]"),
            TermKind::Discard(x) => write!(f, "discard[{x}]"),
            TermKind::Swap(x, y) => write!(f, "swap[{x},{y}]"),
            TermKind::Seq(a, b) => {
                wrap(f, a, false)?;
                write!(f, " ; ")?;
                wrap(f, b, matches!(b.kind, TermKind::Seq(..)))
            }
            TermKind::Par(a, b) => {
                wrap(f, a, matches!(a.kind, TermKind::Seq(..)))?;
                write!(f, " (x) ")?;
                wrap(
                    f,
                    b,
                    matches!(b.kind, TermKind::Seq(..) | TermKind::Par(..)),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(n: &str) -> Term {
        Term::name(n)
    }

    fn obj(kind: fn(String) -> TermKind, x: &str) -> Term {
        Term::new(kind(x.into()))
    }

    #[test]
    fn copy_then_tensor() {
        let t = parse_term("copy[X] ; (f (x) id[X])").unwrap();
        let expected = Term::seq(
            obj(TermKind::Copy, "X"),
            Term::par(name("f"), obj(TermKind::Id, "X")),
        );
        assert_eq!(t, expected);
        assert_eq!(t.to_string(), "copy[X] ; f (x) id[X]");
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_term("a ; b (x) c ; d").unwrap();
        let expected = Term::seq(
            Term::seq(name("a"), Term::par(name("b"), name("c"))),
            name("d"),
        );
        assert_eq!(t, expected);
        let t = parse_term("a (x) b (x) c").unwrap();
        assert_eq!(t, Term::par(Term::par(name("a"), name("b")), name("c")));
        let t = parse_term("a (x) (b (x) c)").unwrap();
        assert_eq!(t.to_string(), "a (x) (b (x) c)");
        let t = parse_term("a ; (b ; c)").unwrap();
        assert_eq!(t.to_string(), "a ; (b ; c)");
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn parenthesized_x_needs_spaces() {
        assert_eq!(
            parse_term("( x ) ; y").unwrap(),
            Term::seq(name("x"), name("y"))
        );
        assert!(matches!(
            parse_term("(x) ; y"),
            Err(Error::Syntax { pos: 0, .. })
        ));
        assert_eq!(parse_term("(xy)").unwrap(), name("xy"));
    }

    #[test]
    fn swap_and_positions() {
        let t = parse_term("swap[A, B] ; g").unwrap();
        assert_eq!(t.to_string(), "swap[A,B] ; g");
        assert_eq!(t.names(), vec![("g", 13)]);
    }

    #[test]
    fn error_categories() {
        assert!(matches!(
            parse_term("f $ g"),
            Err(Error::Lex { pos: 2, .. })
        ));
        assert!(matches!(
            parse_term("f ;"),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_term("copy X"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("id[copy]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("(f ; g"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_term("f g"),
            Err(Error::Syntax { pos: 2, .. })
        ));
    }
}
