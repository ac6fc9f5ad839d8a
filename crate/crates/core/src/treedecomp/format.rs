//! Text form of (nice) tree decompositions.
//!
//! ```text
//! bag 0
//! bag 1 a
//! edge 1 0
//! type 0 leaf
//! type 1 intro:a
//! ```
//!
//! `type` lines make the decomposition nice; either every node has one or none does.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{NiceNode, NiceTd, NodeKind, TreeDecomposition};
use crate::af::Af;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedTd {
    Plain(TreeDecomposition),
    Nice(NiceTd),
}

impl ParsedTd {
    pub fn width(&self) -> usize {
        match self {
            ParsedTd::Plain(td) => td.width(),
            ParsedTd::Nice(td) => td.width(),
        }
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Parses decomposition text, resolving argument names against `af`.
pub fn parse_td(text: &str, af: &Af) -> Result<ParsedTd> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut bags: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut kinds: Vec<(usize, usize, usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // column of each whitespace-separated token, 1-based
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in raw.split_whitespace() {
            let at = raw[offset..].find(tok).map_or(offset, |p| p + offset);
            tokens.push((at + 1, tok));
            offset = at + tok.len();
        }
        let id_at = |k: usize| -> Result<usize> {
            let (col, tok) = *tokens.get(k).ok_or_else(|| parse_error(line_no, raw.len() + 1, "missing node id"))?;
            tok.parse().map_err(|_| parse_error(line_no, col, format!("invalid node id `{tok}`")))
        };
        match tokens[0].1 {
            "bag" => {
                let id = id_at(1)?;
                if ids.insert(id, bags.len()).is_some() {
                    return Err(parse_error(line_no, tokens[1].0, format!("duplicate bag {id}")));
                }
                let mut bag = Vec::new();
                for &(col, name) in &tokens[2..] {
                    bag.push(af.arg(name).map_err(|_| parse_error(line_no, col, format!("unknown argument `{name}`")))?);
                }
                bags.push((id, bag));
            }
            "edge" => {
                if tokens.len() != 3 {
                    return Err(parse_error(line_no, 1, "expected `edge <parent> <child>`"));
                }
                edges.push((line_no, id_at(1)?, id_at(2)?));
            }
            "type" => {
                if tokens.len() != 3 {
                    return Err(parse_error(line_no, 1, "expected `type <id> <kind>`"));
                }
                kinds.push((line_no, tokens[2].0, id_at(1)?, tokens[2].1.to_string()));
            }
            other => return Err(parse_error(line_no, tokens[0].0, format!("unknown directive `{other}`"))),
        }
    }

    let resolve = |line: usize, id: usize| {
        ids.get(&id).copied().ok_or_else(|| parse_error(line, 1, format!("undeclared bag {id}")))
    };
    let mut pos_edges = Vec::with_capacity(edges.len());
    let mut has_parent = vec![false; bags.len()];
    for &(line, p, c) in &edges {
        let (p, c) = (resolve(line, p)?, resolve(line, c)?);
        if std::mem::replace(&mut has_parent[c], true) {
            return Err(parse_error(line, 1, format!("bag {} has two parents", bags[c].0)));
        }
        pos_edges.push((p, c));
    }
    if kinds.is_empty() {
        return Ok(ParsedTd::Plain(TreeDecomposition::from_parts(bags, &pos_edges)));
    }

    let mut kind_of: Vec<Option<NodeKind>> = vec![None; bags.len()];
    for (line, col, id, spec) in kinds {
        let pos = resolve(line, id)?;
        let arg = |name: &str| af.arg(name).map_err(|_| parse_error(line, col, format!("unknown argument `{name}`")));
        let kind = match spec.split_once(':') {
            None if spec == "leaf" => NodeKind::Leaf,
            None if spec == "join" => NodeKind::Join,
            Some(("intro", a)) => NodeKind::Introduce(arg(a)?),
            Some(("forget", a)) => NodeKind::Forget(arg(a)?),
            _ => return Err(parse_error(line, col, format!("unknown node type `{spec}`"))),
        };
        if kind_of[pos].replace(kind).is_some() {
            return Err(parse_error(line, 1, format!("duplicate type for bag {id}")));
        }
    }
    let mut nodes = Vec::with_capacity(bags.len());
    for (pos, (id, mut bag)) in bags.into_iter().enumerate() {
        let kind = kind_of[pos].ok_or_else(|| parse_error(0, 0, format!("bag {id} has no type line")))?;
        bag.sort_unstable();
        bag.dedup();
        nodes.push(NiceNode { id, bag, kind, children: Vec::new() });
    }
    for &(p, c) in &pos_edges {
        nodes[p].children.push(c);
    }
    let root = has_parent.iter().position(|&h| !h).unwrap_or(0);
    Ok(ParsedTd::Nice(NiceTd::from_nodes(nodes, root)))
}

fn write_bag(out: &mut String, af: &Af, id: usize, bag: &[usize]) {
    let _ = write!(out, "bag {id}");
    for &x in bag {
        let _ = write!(out, " {}", af.name(x));
    }
    out.push('\n');
}

pub fn write_td(td: &TreeDecomposition, af: &Af) -> String {
    let mut out = String::new();
    for n in td.nodes() {
        write_bag(&mut out, af, n.id, &n.bag);
    }
    for n in td.nodes() {
        for &c in &n.children {
            let _ = writeln!(out, "edge {} {}", n.id, td.nodes()[c].id);
        }
    }
    out
}

pub fn write_nice_td(td: &NiceTd, af: &Af) -> String {
    let mut out = String::new();
    for n in td.nodes() {
        write_bag(&mut out, af, n.id, &n.bag);
    }
    for n in td.nodes() {
        for &c in &n.children {
            let _ = writeln!(out, "edge {} {}", n.id, td.nodes()[c].id);
        }
    }
    for n in td.nodes() {
        let kind = match n.kind {
            NodeKind::Leaf => "leaf".to_string(),
            NodeKind::Join => "join".to_string(),
            NodeKind::Introduce(a) => format!("intro:{}", af.name(a)),
            NodeKind::Forget(a) => format!("forget:{}", af.name(a)),
        };
        let _ = writeln!(out, "type {} {kind}", n.id);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::treedecomp::{decompose, make_nice, validate, Heuristic};

    #[test]
    fn nice_round_trip() {
        let paf = fixtures::example2();
        let nice = fixtures::figure3_td(&paf);
        let text = write_nice_td(&nice, paf.af());
        match parse_td(&text, paf.af()).unwrap() {
            ParsedTd::Nice(back) => {
                assert_eq!(back, nice);
                assert_eq!(write_nice_td(&back, paf.af()), text);
            }
            ParsedTd::Plain(_) => panic!("type lines were dropped"),
        }
    }

    #[test]
    fn plain_round_trip() {
        let af = fixtures::example1();
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        let text = write_td(&td, &af);
        let ParsedTd::Plain(back) = parse_td(&text, &af).unwrap() else { panic!("expected plain") };
        assert!(validate(&back, &af).is_empty());
        assert_eq!(write_td(&back, &af), text);
        assert!(make_nice(&back).unwrap().validate(&af).is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let af = fixtures::example1();
        let err = parse_td("bag 0 a\nbag 1 a zz\n", &af).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 9, .. }), "{err}");
        let err = parse_td("bag 0\nedge 0 7\n", &af).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_td("bag 0\ntype 0 weird\n", &af).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 8, .. }));
        assert!(parse_td("tree 0\n", &af).is_err());
    }
}
