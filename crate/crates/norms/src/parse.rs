use std::collections::HashSet;
use std::fmt::Write as _;

use ngrl_ddl::{Atom, Literal};
use thiserror::Error;

use crate::ast::{ConstitutiveNorm, NormKind, NormativeSystem, RegulativeNorm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("priority references unknown label `{0}`")]
    UnknownLabel(String),
    #[error("constitutive norm `{0}` has identical source and target")]
    SelfCountsAs(String),
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Pipe,
    Comma,
    LParen,
    RParen,
    Gt,
    Minus,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Minus => "`-`".into(),
        }
    }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn lex(line_no: usize, text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            ':' => Tok::Colon,
            '|' => Tok::Pipe,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '>' => Tok::Gt,
            '-' => Tok::Minus,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => return Err(syntax(line_no, col, format!("unexpected character `{other}`"))),
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = self
            .peek()
            .map_or_else(|| "end of line".to_string(), Tok::describe);
        syntax(self.line, self.col(), format!("expected {expected}, found {found}"))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(usize, String), ParseError> {
        match self.toks.get(self.pos) {
            Some((c, Tok::Ident(s))) => {
                self.pos += 1;
                Ok((*c, s.clone()))
            }
            _ => Err(self.error(what)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (col, name) = self.ident("an atom")?;
        if name == "true" {
            return Err(syntax(self.line, col, "`true` is reserved and cannot be an atom"));
        }
        let mut text = name;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            text.push('(');
            loop {
                let (_, arg) = self.ident("an argument")?;
                text.push_str(&arg);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.pos += 1;
                        text.push(',');
                    }
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        text.push(')');
                        break;
                    }
                    _ => return Err(self.error("`,` or `)`")),
                }
            }
        }
        Ok(Atom::new(text))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let positive = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            false
        } else {
            true
        };
        Ok(Literal {
            atom: self.atom()?,
            positive,
        })
    }

    fn conditions(&mut self) -> Result<Vec<Literal>, ParseError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "true" {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut out = vec![self.literal()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.literal()?);
        }
        Ok(out)
    }
}

enum Stmt {
    Regulative(RegulativeNorm),
    Constitutive(ConstitutiveNorm),
    Priority(String, String),
}

fn statement(cur: &mut Cursor<'_>) -> Result<Stmt, ParseError> {
    let (_, label) = cur.ident("a label")?;
    match cur.peek() {
        Some(Tok::Gt) => {
            cur.pos += 1;
            let (_, loser) = cur.ident("a label")?;
            cur.finish()?;
            Ok(Stmt::Priority(label, loser))
        }
        Some(Tok::Colon) => {
            cur.pos += 1;
            let head_col = cur.col();
            let (_, head) = cur.ident("one of `O`, `F`, `P`, `C`")?;
            cur.expect(Tok::LParen)?;
            let stmt = match head.as_str() {
                "O" | "F" | "P" => {
                    let kind = match head.as_str() {
                        "O" => NormKind::Obligation,
                        "F" => NormKind::Prohibition,
                        _ => NormKind::Permission,
                    };
                    let target = cur.literal()?;
                    cur.expect(Tok::Pipe)?;
                    let conditions = cur.conditions()?;
                    Stmt::Regulative(RegulativeNorm {
                        label,
                        kind,
                        target,
                        conditions,
                    })
                }
                "C" => {
                    let source = cur.literal()?;
                    cur.expect(Tok::Comma)?;
                    let target = cur.literal()?;
                    let conditions = if cur.peek() == Some(&Tok::Pipe) {
                        cur.pos += 1;
                        cur.conditions()?
                    } else {
                        Vec::new()
                    };
                    if source == target {
                        return Err(ParseError {
                            line: cur.line,
                            column: head_col,
                            kind: ParseErrorKind::SelfCountsAs(label),
                        });
                    }
                    Stmt::Constitutive(ConstitutiveNorm {
                        label,
                        source,
                        target,
                        conditions,
                    })
                }
                _ => {
                    return Err(syntax(
                        cur.line,
                        head_col,
                        format!("unknown norm operator `{head}`, expected O, F, P or C"),
                    ))
                }
            };
            cur.expect(Tok::RParen)?;
            cur.finish()?;
            Ok(stmt)
        }
        _ => Err(cur.error("`:` or `>`")),
    }
}

/// Parses a norm file. Priorities may mention labels defined later in the file.
pub fn parse(text: &str) -> Result<NormativeSystem, ParseError> {
    let mut system = NormativeSystem::default();
    let mut labels = HashSet::new();
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks = lex(line, raw)?;
        let mut cur = Cursor {
            line,
            toks: &toks,
            pos: 0,
            end_col: raw.chars().count() + 1,
        };
        let label_col = cur.col();
        match statement(&mut cur)? {
            Stmt::Priority(w, l) => pending.push((line, toks.clone(), w, l)),
            stmt => {
                let label = match &stmt {
                    Stmt::Regulative(n) => &n.label,
                    Stmt::Constitutive(n) => &n.label,
                    Stmt::Priority(..) => unreachable!(),
                };
                if !labels.insert(label.clone()) {
                    return Err(ParseError {
                        line,
                        column: label_col,
                        kind: ParseErrorKind::DuplicateLabel(label.clone()),
                    });
                }
                match stmt {
                    Stmt::Regulative(n) => system.regulative.push(n),
                    Stmt::Constitutive(n) => system.constitutive.push(n),
                    Stmt::Priority(..) => unreachable!(),
                }
            }
        }
    }
    for (line, toks, w, l) in pending {
        for (label, tok_ix) in [(&w, 0), (&l, 2)] {
            if !labels.contains(label) {
                return Err(ParseError {
                    line,
                    column: toks[tok_ix].0,
                    kind: ParseErrorKind::UnknownLabel(label.clone()),
                });
            }
        }
        system.priorities.push((w, l));
    }
    Ok(system)
}

fn write_literal(out: &mut String, l: &Literal) {
    if !l.positive {
        out.push('-');
    }
    out.push_str(l.atom.as_str());
}

fn write_conditions(out: &mut String, conds: &[Literal]) {
    if conds.is_empty() {
        out.push_str("true");
    }
    for (i, c) in conds.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_literal(out, c);
    }
}

/// Renders a system in the norm-file syntax: regulative norms, then
/// constitutive norms, then priorities, each in their original order.
pub fn serialize(system: &NormativeSystem) -> String {
    let mut out = String::new();
    for n in &system.regulative {
        let _ = write!(out, "{}: {}(", n.label, n.kind.symbol());
        write_literal(&mut out, &n.target);
        out.push_str(" | ");
        write_conditions(&mut out, &n.conditions);
        out.push_str(")\n");
    }
    for n in &system.constitutive {
        let _ = write!(out, "{}: C(", n.label);
        write_literal(&mut out, &n.source);
        out.push_str(", ");
        write_literal(&mut out, &n.target);
        if !n.conditions.is_empty() {
            out.push_str(" | ");
            write_conditions(&mut out, &n.conditions);
        }
        out.push_str(")\n");
    }
    for (w, l) in &system.priorities {
        let _ = writeln!(out, "{w} > {l}");
    }
    out
}
