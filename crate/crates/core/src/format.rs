//! The `.bq` text format.
//!
//! ```text
//! # the commutative Kronecker chain
//! quiver kronecker_chain_comm
//! points 1 2 3
//! arrow a1 1 2
//! arrow b1 1 2
//! arrow a2 2 3
//! arrow b2 2 3
//! rel a1*a2 - b1*b2
//! truncate 4
//! ```
//!
//! `field <p>` selects the prime field of order `p` (`field 0`, the
//! default, means the rationals). Without `truncate` the truncation starts
//! at the longest relation branch plus two and is raised until the ideal is
//! admissible, giving up at [`AUTO_TRUNCATION_CAP`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{AlgebraError, LinComb, TruncatedAlgebra};
use crate::quiver::{BoundQuiver, Path, Quiver, QuiverError};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A parsed file; `explicit_truncation` records whether `truncate` was given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFile {
    pub bound: BoundQuiver,
    pub explicit_truncation: bool,
}

/// Highest truncation tried when the file does not fix one.
pub const AUTO_TRUNCATION_CAP: usize = 12;

impl ParsedFile {
    /// An explicit `truncate` is taken as given and must be admissible;
    /// otherwise the truncation is raised until it is, up to
    /// [`AUTO_TRUNCATION_CAP`].
    pub fn build(&self) -> Result<TruncatedAlgebra, AlgebraError> {
        if self.explicit_truncation {
            TruncatedAlgebra::build_admissible(&self.bound)
        } else {
            TruncatedAlgebra::build_auto(&self.bound, AUTO_TRUNCATION_CAP.max(self.bound.truncation))
        }
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, col, message: message.into() }
    }

    /// Whitespace-separated words with their 1-based columns.
    fn words(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }
}

fn is_arrow_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn is_point_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse(text: &str) -> Result<ParsedFile, ParseError> {
    let mut name: Option<String> = None;
    let mut quiver: Option<Quiver> = None;
    let mut rel_lines: Vec<(Line, usize)> = Vec::new();
    let mut truncation: Option<usize> = None;
    let mut field = Field::Rationals;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line { number: i + 1, text: body };
        last_line = i + 1;
        let words = line.words();
        let Some(&(col, keyword)) = words.first() else {
            continue;
        };
        let args = &words[1..];
        match keyword {
            "quiver" => {
                if name.is_some() {
                    return Err(line.err(col, "duplicate `quiver` line"));
                }
                let [(_, n)] = args else {
                    return Err(line.err(col, "expected `quiver <name>`"));
                };
                name = Some(n.to_string());
            }
            "points" => {
                if args.is_empty() {
                    return Err(line.err(col, "expected at least one point"));
                }
                for &(c, p) in args {
                    if !is_point_name(p) {
                        return Err(line.err(c, format!("invalid point name `{p}`")));
                    }
                    let added = match quiver.as_mut() {
                        Some(q) => q.add_point(p.to_string()).is_ok(),
                        None => {
                            quiver = Some(Quiver::new(vec![p.to_string()], Vec::new()).expect("one point"));
                            true
                        }
                    };
                    if !added {
                        return Err(line.err(c, format!("duplicate point `{p}`")));
                    }
                }
            }
            "arrow" => {
                let [(ca, a), (cs, s), (ct, t)] = args else {
                    return Err(line.err(col, "expected `arrow <name> <source> <target>`"));
                };
                if !is_arrow_name(a) {
                    return Err(line.err(*ca, format!("invalid arrow name `{a}`: start with a letter or `_`")));
                }
                let Some(q) = quiver.as_mut() else {
                    return Err(line.err(col, "`arrow` before any `points` line"));
                };
                let src = q.point(s).map_err(|_| line.err(*cs, format!("unknown point `{s}`")))?;
                let tgt = q.point(t).map_err(|_| line.err(*ct, format!("unknown point `{t}`")))?;
                q.add_arrow(a.to_string(), src, tgt).map_err(|_| line.err(*ca, format!("duplicate arrow `{a}`")))?;
            }
            "rel" => {
                if args.is_empty() {
                    return Err(line.err(col, "expected `rel <expression>`"));
                }
                let offset = args[0].0 - 1;
                rel_lines.push((line, offset));
            }
            "truncate" => {
                let [(c, n)] = args else {
                    return Err(line.err(col, "expected `truncate <N>`"));
                };
                let n: usize = n.parse().map_err(|_| line.err(*c, format!("invalid truncation `{n}`")))?;
                if n < 2 {
                    return Err(line.err(*c, "truncation must be at least 2"));
                }
                truncation = Some(n);
            }
            "field" => {
                let [(c, p)] = args else {
                    return Err(line.err(col, "expected `field <p>`"));
                };
                let p: u64 = p.parse().map_err(|_| line.err(*c, format!("invalid characteristic `{p}`")))?;
                field = match p {
                    0 => Field::Rationals,
                    p if crate::scalar::is_prime(p) => Field::Prime(p),
                    _ => return Err(line.err(*c, format!("{p} is not prime"))),
                };
            }
            other => return Err(line.err(col, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or(ParseError { line: 1, col: 1, message: "missing `quiver <name>` line".into() })?;
    let quiver = quiver.ok_or(ParseError { line: last_line.max(1), col: 1, message: "no points declared".into() })?;
    let mut relations = Vec::new();
    for (line, offset) in &rel_lines {
        let rel = parse_relation(&quiver, line, *offset)?;
        if rel.in_field(field).is_none() {
            return Err(line.err(offset + 1, format!("coefficient cannot be read in characteristic {}", field.characteristic())));
        }
        relations.push(rel);
    }
    let explicit_truncation = truncation.is_some();
    let longest = relations.iter().map(LinComb::max_len).max().unwrap_or(0);
    let truncation = truncation.unwrap_or(longest.max(1) + 2);
    let bound = BoundQuiver::new(name, quiver, relations, truncation, field).map_err(|e: QuiverError| ParseError { line: 1, col: 1, message: e.to_string() })?;
    Ok(ParsedFile { bound, explicit_truncation })
}

#[derive(Clone, Debug, PartialEq)]
enum Token<'a> {
    Num(BigRational),
    Ident(&'a str),
    Star,
    Plus,
    Minus,
}

fn tokenize<'a>(line: &Line<'a>, offset: usize) -> Result<Vec<(usize, Token<'a>)>, ParseError> {
    let text = line.text;
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = offset;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '*' {
            out.push((col, Token::Star));
            i += 1;
        } else if c == '+' {
            out.push((col, Token::Plus));
            i += 1;
        } else if c == '-' {
            out.push((col, Token::Minus));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                i += 1;
            }
            let lit = &text[start..i];
            let value = match lit.split_once('/') {
                None => lit.parse::<BigInt>().ok().map(BigRational::from_integer),
                Some((n, d)) => match (n.parse::<BigInt>(), d.parse::<BigInt>()) {
                    (Ok(n), Ok(d)) if d != BigInt::from(0) => Some(BigRational::new(n, d)),
                    _ => None,
                },
            };
            let value = value.ok_or_else(|| line.err(col, format!("malformed scalar `{lit}`")))?;
            out.push((col, Token::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((col, Token::Ident(&text[start..i])));
        } else {
            return Err(line.err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// `[+|-] [scalar [*]] arrow (* arrow)*`, repeated with `+` or `-`.
fn parse_relation(q: &Quiver, line: &Line, offset: usize) -> Result<LinComb, ParseError> {
    let tokens = tokenize(line, offset)?;
    let end_col = line.text.len() + 1;
    let mut pos = 0;
    let mut terms: Vec<(usize, Scalar, Path)> = Vec::new();
    while pos < tokens.len() || terms.is_empty() {
        let mut sign = Scalar::one();
        match tokens.get(pos) {
            Some((_, Token::Plus)) if !terms.is_empty() => pos += 1,
            Some((_, Token::Minus)) => {
                sign = -&sign;
                pos += 1;
            }
            Some((c, t)) if !terms.is_empty() => return Err(line.err(*c, format!("expected `+` or `-`, found {}", describe(t)))),
            None => return Err(line.err(end_col, "empty relation")),
            _ => {}
        }
        let term_col = tokens.get(pos).map_or(end_col, |(c, _)| *c);
        let mut coeff = sign;
        if let Some((_, Token::Num(n))) = tokens.get(pos) {
            coeff = &coeff * &Scalar::Rat(n.clone());
            pos += 1;
            if let Some((_, Token::Star)) = tokens.get(pos) {
                pos += 1;
            }
        }
        let mut arrows = Vec::new();
        loop {
            match tokens.get(pos) {
                Some((c, Token::Ident(name))) => {
                    arrows.push(q.arrow_by_name(name).map_err(|_| line.err(*c, format!("unknown arrow `{name}`")))?);
                    pos += 1;
                }
                Some((c, t)) => return Err(line.err(*c, format!("expected an arrow, found {}", describe(t)))),
                None => return Err(line.err(end_col, "expected an arrow")),
            }
            match tokens.get(pos) {
                Some((_, Token::Star)) => pos += 1,
                _ => break,
            }
        }
        let path = Path::from_arrows(q, arrows).map_err(|e| line.err(term_col, e.to_string()))?;
        if path.len() < 2 {
            return Err(line.err(term_col, format!("relation branch shorter than two: `{}`", path.display(q))));
        }
        terms.push((term_col, coeff, path));
    }
    let first = &terms[0].2;
    if let Some((c, _, p)) = terms.iter().find(|(_, _, p)| p.source() != first.source() || p.target() != first.target()) {
        return Err(line.err(*c, format!("relation paths are not parallel: `{}`", p.display(q))));
    }
    let mut rel = LinComb::zero(first.source(), first.target());
    for (_, x, p) in terms {
        rel.add_term(p, x);
    }
    if rel.is_zero() {
        return Err(line.err(offset + 1, "relation is zero"));
    }
    Ok(rel)
}

fn describe(t: &Token) -> String {
    match t {
        Token::Num(n) => format!("scalar `{n}`"),
        Token::Ident(s) => format!("`{s}`"),
        Token::Star => "`*`".into(),
        Token::Plus => "`+`".into(),
        Token::Minus => "`-`".into(),
    }
}

/// Writes `b` in the file format; `parse(&emit(b))` gives back `b`.
pub fn emit(b: &BoundQuiver) -> String {
    let q = &b.quiver;
    let mut out = String::new();
    writeln!(out, "quiver {}", b.name).unwrap();
    if let Field::Prime(p) = b.field {
        writeln!(out, "field {p}").unwrap();
    }
    writeln!(out, "points {}", q.points().join(" ")).unwrap();
    for ar in q.arrows() {
        writeln!(out, "arrow {} {} {}", ar.name, q.point_name(ar.source), q.point_name(ar.target)).unwrap();
    }
    for r in &b.relations {
        writeln!(out, "rel {}", r.display(q)).unwrap();
    }
    writeln!(out, "truncate {}", b.truncation).unwrap();
    out
}

/// Graphviz rendering of the quiver.
pub fn dot(q: &Quiver, name: &str) -> String {
    let mut out = format!("digraph \"{name}\" {{\n");
    for p in q.points() {
        writeln!(out, "  \"{p}\";").unwrap();
    }
    for ar in q.arrows() {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", q.point_name(ar.source), q.point_name(ar.target), ar.name).unwrap();
    }
    out.push_str("}\n");
    out
}
