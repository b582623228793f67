use std::collections::HashMap;

use thiserror::Error;

use super::{Equation, Hypothesis, RelationKind, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    /// `v` is the join operator and cannot name a variable.
    ReservedVariable,
    /// Hypotheses must read `x _|_ y` with plain variables.
    HypothesisForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {}", describe(.kind))]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::UnexpectedToken { found, expected } => {
            format!("expected {expected}, found {found}")
        }
        ParseErrorKind::UnexpectedEnd { expected } => {
            format!("expected {expected}, found end of input")
        }
        ParseErrorKind::ReservedVariable => {
            "'v' is the join operator and cannot be a variable".into()
        }
        ParseErrorKind::HypothesisForm => {
            "hypotheses must have the form x _|_ y with variables x and y".into()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(char),
    Zero,
    One,
    Prime,
    Meet,
    Join,
    Imp,
    LParen,
    RParen,
    Eq,
    Le,
    Perp,
    And,
    Turnstile,
}

impl Tok {
    fn text(self) -> String {
        match self {
            Tok::Var(c) => c.to_string(),
            Tok::Zero => "0".into(),
            Tok::One => "1".into(),
            Tok::Prime => "'".into(),
            Tok::Meet => "^".into(),
            Tok::Join => "v".into(),
            Tok::Imp => "->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eq => "=".into(),
            Tok::Le => "=<".into(),
            Tok::Perp => "_|_".into(),
            Tok::And => "&".into(),
            Tok::Turnstile => "|=".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let next = chars.get(i + 1).copied();
        let (tok, width) = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'v' => (Tok::Join, 1),
            'a'..='z' | 'A'..='Z' => (Tok::Var(c), 1),
            '0' => (Tok::Zero, 1),
            '1' => (Tok::One, 1),
            '\'' => (Tok::Prime, 1),
            '^' => (Tok::Meet, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '&' => (Tok::And, 1),
            '-' if next == Some('>') => (Tok::Imp, 2),
            '=' if next == Some('<') => (Tok::Le, 2),
            '=' => (Tok::Eq, 1),
            '|' if next == Some('=') => (Tok::Turnstile, 2),
            '_' if next == Some('|') && chars.get(i + 2) == Some(&'_') => (Tok::Perp, 3),
            _ => {
                return Err(ParseError {
                    column,
                    kind: ParseErrorKind::UnexpectedChar(c),
                })
            }
        };
        out.push((tok, column));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
    names: Vec<String>,
    index: HashMap<char, usize>,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.1)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            column: self.column(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken {
                found: t.text(),
                expected,
            }),
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn var(&mut self, c: char) -> usize {
        let next = self.names.len();
        let idx = *self.index.entry(c).or_insert(next);
        if idx == next {
            self.names.push(c.to_string());
        }
        idx
    }

    fn hypothesis_var(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Var(c)) => {
                self.pos += 1;
                Ok(self.var(c))
            }
            Some(Tok::Join) => Err(self.err(ParseErrorKind::ReservedVariable)),
            Some(_) => Err(self.err(ParseErrorKind::HypothesisForm)),
            None => Err(self.unexpected("a variable")),
        }
    }

    fn hypotheses(&mut self) -> Result<Vec<Hypothesis>, ParseError> {
        let mut out = Vec::new();
        loop {
            let mut left = self.hypothesis_var()?;
            if self.peek() != Some(Tok::Perp) {
                return Err(self.err(ParseErrorKind::HypothesisForm));
            }
            while self.peek() == Some(Tok::Perp) {
                self.pos += 1;
                let right = self.hypothesis_var()?;
                out.push(Hypothesis(left, right));
                left = right;
            }
            match self.peek() {
                Some(Tok::And) => self.pos += 1,
                Some(Tok::Turnstile) => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(ParseErrorKind::HypothesisForm)),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let left = self.join()?;
        if self.peek() == Some(Tok::Imp) {
            self.pos += 1;
            let right = self.term()?;
            return Ok(Term::imp(left, right));
        }
        Ok(left)
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut t = self.meet()?;
        while self.peek() == Some(Tok::Join) {
            self.pos += 1;
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while self.peek() == Some(Tok::Meet) {
            self.pos += 1;
            t = Term::meet(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.peek() == Some(Tok::Prime) {
            self.pos += 1;
            t = Term::ortho(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let t = match self.peek() {
            Some(Tok::Var(c)) => Term::Var(self.var(c)),
            Some(Tok::Zero) => Term::Zero,
            Some(Tok::One) => Term::One,
            Some(Tok::Join) => return Err(self.err(ParseErrorKind::ReservedVariable)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                inner
            }
            _ => return Err(self.unexpected("a term")),
        };
        self.pos += 1;
        Ok(t)
    }
}

/// Parses an equation from the text syntax described in the module docs.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let toks = lex(text)?;
    let has_hypotheses = toks.iter().any(|t| t.0 == Tok::Turnstile);
    let mut p = Parser {
        toks,
        pos: 0,
        end_column: text.chars().count() + 1,
        names: Vec::new(),
        index: HashMap::new(),
    };
    let hypotheses = if has_hypotheses {
        p.hypotheses()?
    } else {
        Vec::new()
    };
    let lhs = p.term()?;
    let kind = match p.peek() {
        Some(Tok::Eq) => RelationKind::Eq,
        Some(Tok::Le) => RelationKind::Le,
        _ => return Err(p.unexpected("'=' or '=<'")),
    };
    p.pos += 1;
    let rhs = p.term()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    Ok(Equation::new(p.names, hypotheses, lhs, kind, rhs)
        .expect("parser only emits declared variables"))
}
