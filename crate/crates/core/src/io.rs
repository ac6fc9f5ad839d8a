//! The `.paf` text format.
//!
//! ```text
//! # comment lines are kept as a header
//! arg a 0.8
//! arg b 1
//! att a b 0.7
//! set a
//! query b
//! ```
//!
//! Probabilities are decimal literals or fractions `n/d` in `(0, 1]`. Every
//! `att` endpoint must be declared by an earlier `arg` line. A bare `set`
//! line declares the empty query set.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::af::ArgSet;
use crate::error::{Error, Result};
use crate::paf::Paf;
use crate::scalar::{format_exact, parse_exact};

/// A parsed `.paf` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PafDocument {
    /// Comment lines, verbatim (including the leading `#`).
    pub comments: Vec<String>,
    pub paf: Paf,
    pub set: Option<ArgSet>,
    pub query: Option<usize>,
}

impl PafDocument {
    pub fn new(paf: Paf) -> Self {
        PafDocument { comments: Vec::new(), paf, set: None, query: None }
    }
}

struct Cursor<'a> {
    line: usize,
    raw: &'a str,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, raw: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in raw.split_whitespace() {
            let at = raw[offset..].find(tok).map_or(offset, |p| p + offset);
            tokens.push((at + 1, tok));
            offset = at + tok.len();
        }
        Cursor { line, raw, tokens }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column, message: message.into() }
    }

    fn expect_len(&self, n: usize, usage: &str) -> Result<()> {
        if self.tokens.len() == n {
            Ok(())
        } else {
            let col = self.tokens.get(n).map_or(self.raw.len() + 1, |t| t.0);
            Err(self.error(col, format!("expected `{usage}`")))
        }
    }

    fn probability(&self, k: usize, what: &str) -> Result<BigRational> {
        let (col, tok) = self.tokens[k];
        let p = parse_exact(tok).ok_or_else(|| self.error(col, format!("invalid probability `{tok}`")))?;
        if p.is_zero() {
            return Err(self.error(col, format!("zero-probability {what}; remove it")));
        }
        if p > BigRational::one() {
            return Err(self.error(col, format!("probability `{tok}` is greater than 1")));
        }
        Ok(p)
    }
}

/// Parses a `.paf` document. Errors carry 1-based line and column.
pub fn parse_paf(text: &str) -> Result<PafDocument> {
    let mut comments = Vec::new();
    let mut args: Vec<(&str, BigRational)> = Vec::new();
    let mut atts: Vec<(&str, &str, BigRational)> = Vec::new();
    let mut declared: HashSet<&str> = HashSet::new();
    let mut attack_pairs: HashSet<(&str, &str)> = HashSet::new();
    // (line, column, name) of query references, resolved once all arguments are known
    let mut set: Option<Vec<(usize, usize, &str)>> = None;
    let mut query: Option<(usize, usize, &str)> = None;

    for (i, raw) in text.lines().enumerate() {
        let c = Cursor::new(i + 1, raw);
        let Some(&(col, head)) = c.tokens.first() else { continue };
        if head.starts_with('#') {
            comments.push(raw.to_string());
            continue;
        }
        match head {
            "arg" => {
                c.expect_len(3, "arg <name> <probability>")?;
                let (ncol, name) = c.tokens[1];
                crate::af::ArgId::new(name).map_err(|e| c.error(ncol, e.to_string()))?;
                if !declared.insert(name) {
                    return Err(c.error(ncol, format!("duplicate argument `{name}`")));
                }
                args.push((name, c.probability(2, "argument")?));
            }
            "att" => {
                c.expect_len(4, "att <source> <target> <probability>")?;
                for k in [1, 2] {
                    let (ecol, name) = c.tokens[k];
                    if !declared.contains(name) {
                        return Err(c.error(ecol, format!("undeclared argument `{name}`")));
                    }
                }
                let (s, t) = (c.tokens[1].1, c.tokens[2].1);
                if !attack_pairs.insert((s, t)) {
                    return Err(c.error(c.tokens[1].0, format!("duplicate attack ({s}, {t})")));
                }
                atts.push((s, t, c.probability(3, "attack")?));
            }
            "set" => {
                if set.is_some() {
                    return Err(c.error(col, "more than one `set` line"));
                }
                set = Some(c.tokens[1..].iter().map(|&(col, name)| (c.line, col, name)).collect());
            }
            "query" => {
                c.expect_len(2, "query <name>")?;
                if query.is_some() {
                    return Err(c.error(col, "more than one `query` line"));
                }
                query = Some((c.line, c.tokens[1].0, c.tokens[1].1));
            }
            other => return Err(c.error(col, format!("unknown directive `{other}`"))),
        }
    }

    let paf = Paf::new(args, atts)?;
    let af = paf.af();
    let resolve = |(line, column, name): (usize, usize, &str)| {
        af.arg(name)
            .map_err(|_| Error::Parse { line, column, message: format!("undeclared argument `{name}`") })
    };
    let set = match set {
        None => None,
        Some(members) => {
            let mut s = af.empty_set();
            for m in members {
                s.insert(resolve(m)?);
            }
            Some(s)
        }
    };
    let query = query.map(resolve).transpose()?;
    Ok(PafDocument { comments, paf, set, query })
}

/// Canonical text: comments, then arguments and attacks in canonical order, then queries.
pub fn serialize_paf(doc: &PafDocument) -> String {
    let mut out = String::new();
    for c in &doc.comments {
        out.push_str(c);
        out.push('\n');
    }
    let af = doc.paf.af();
    for a in 0..af.len() {
        let _ = writeln!(out, "arg {} {}", af.name(a), format_exact(doc.paf.arg_prob(a)));
    }
    for (i, att) in af.attacks().iter().enumerate() {
        let _ = writeln!(
            out,
            "att {} {} {}",
            af.name(att.source),
            af.name(att.target),
            format_exact(doc.paf.att_prob(i))
        );
    }
    if let Some(set) = &doc.set {
        out.push_str("set");
        for name in af.set_names(set) {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
    }
    if let Some(q) = doc.query {
        let _ = writeln!(out, "query {}", af.name(q));
    }
    out
}
