//! Tree decompositions of the undirected attack graph.

mod format;
mod heuristics;
mod nice;

use std::fmt;

use crate::af::Af;

pub use format::{parse_td, write_nice_td, write_td, ParsedTd};
pub use heuristics::{decompose, grid_elimination_order, Heuristic};
pub use nice::{make_nice, NiceNode, NiceTd, NodeKind};

/// One node of a tree decomposition. `bag` is sorted by argument index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdNode {
    pub id: usize,
    pub bag: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// A rooted tree decomposition; node references are positions in `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    nodes: Vec<TdNode>,
    root: usize,
}

impl TreeDecomposition {
    /// Builds a decomposition from `(id, bag)` nodes and `(parent position, child position)` edges.
    /// Bags are sorted and deduplicated. Structural problems surface in [`validate`].
    pub fn from_parts(bags: Vec<(usize, Vec<usize>)>, edges: &[(usize, usize)]) -> Self {
        let mut nodes: Vec<TdNode> = bags
            .into_iter()
            .map(|(id, mut bag)| {
                bag.sort_unstable();
                bag.dedup();
                TdNode { id, bag, parent: None, children: Vec::new() }
            })
            .collect();
        for &(p, c) in edges {
            nodes[p].children.push(c);
            nodes[c].parent = Some(p);
        }
        let root = nodes.iter().position(|n| n.parent.is_none()).unwrap_or(0);
        TreeDecomposition { nodes, root }
    }

    pub fn nodes(&self) -> &[TdNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest bag size minus one (0 when all bags are empty).
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node positions, children before parents. `None` if the parent links do not form a tree.
    pub fn post_order(&self) -> Option<Vec<usize>> {
        post_order(self.nodes.len(), self.root, |i| &self.nodes[i].children)
    }
}

pub(crate) fn post_order<'a, F>(n: usize, root: usize, children: F) -> Option<Vec<usize>>
where
    F: Fn(usize) -> &'a [usize],
{
    if n == 0 {
        return Some(Vec::new());
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![(root, false)];
    while let Some((u, expanded)) = stack.pop() {
        if expanded {
            order.push(u);
            continue;
        }
        if seen[u] {
            return None;
        }
        seen[u] = true;
        stack.push((u, true));
        for &c in children(u).iter().rev() {
            if c >= n {
                return None;
            }
            stack.push((c, false));
        }
    }
    (order.len() == n).then_some(order)
}

/// A violated decomposition condition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    UnknownArgument(usize),
    MissingArgument(String),
    MissingAttack(String, String),
    Disconnected(String),
    NiceRule { node: usize, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(m) => write!(f, "not a rooted tree: {m}"),
            Violation::UnknownArgument(i) => write!(f, "bag mentions unknown argument #{i}"),
            Violation::MissingArgument(a) => write!(f, "argument {a} is in no bag"),
            Violation::MissingAttack(a, b) => write!(f, "attack ({a}, {b}) is covered by no bag"),
            Violation::Disconnected(a) => write!(f, "bags containing {a} are not connected"),
            Violation::NiceRule { node, message } => write!(f, "node {node}: {message}"),
        }
    }
}

/// Structural checks that need no framework: rooted tree and connectedness.
pub(crate) fn structural_violations(
    td: &TreeDecomposition,
    num_args: Option<usize>,
    name: &dyn Fn(usize) -> String,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let roots: Vec<usize> = (0..td.nodes.len()).filter(|&i| td.nodes[i].parent.is_none()).collect();
    if td.nodes.is_empty() {
        out.push(Violation::NotATree("no nodes".into()));
        return out;
    }
    if roots.len() != 1 {
        out.push(Violation::NotATree(format!("{} roots", roots.len())));
        return out;
    }
    for (i, n) in td.nodes.iter().enumerate() {
        for &c in &n.children {
            if td.nodes.get(c).and_then(|x| x.parent) != Some(i) {
                out.push(Violation::NotATree(format!("inconsistent edge {} -> {}", n.id, c)));
            }
        }
    }
    if td.post_order().is_none() {
        out.push(Violation::NotATree("cycle or unreachable node".into()));
    }
    if !out.is_empty() {
        return out;
    }
    let max_arg = td.nodes.iter().flat_map(|n| n.bag.iter().copied()).max().map_or(0, |m| m + 1);
    let n_args = num_args.unwrap_or(max_arg).max(max_arg);
    let mut count = vec![0usize; n_args];
    let mut links = vec![0usize; n_args];
    for n in &td.nodes {
        for &x in &n.bag {
            if num_args.is_some_and(|k| x >= k) {
                continue;
            }
            count[x] += 1;
            if let Some(p) = n.parent {
                if td.nodes[p].bag.binary_search(&x).is_ok() {
                    links[x] += 1;
                }
            }
        }
    }
    for x in 0..n_args {
        // a forest with c nodes and c - 1 edges is a single tree
        if count[x] > 0 && links[x] + 1 != count[x] {
            out.push(Violation::Disconnected(name(x)));
        }
    }
    out
}

/// Reports every violated decomposition condition for `af`'s undirected graph.
pub fn validate(td: &TreeDecomposition, af: &Af) -> Vec<Violation> {
    let mut out = structural_violations(td, Some(af.len()), &|x| af.name(x).to_string());
    if out.iter().any(|v| matches!(v, Violation::NotATree(_))) {
        return out;
    }
    let mut covered = vec![false; af.len()];
    for n in &td.nodes {
        for &x in &n.bag {
            if x >= af.len() {
                out.push(Violation::UnknownArgument(x));
            } else {
                covered[x] = true;
            }
        }
    }
    for (x, c) in covered.iter().enumerate() {
        if !c {
            out.push(Violation::MissingArgument(af.name(x).to_string()));
        }
    }
    for att in af.attacks() {
        let ok = td.nodes.iter().any(|n| {
            n.bag.binary_search(&att.source).is_ok() && n.bag.binary_search(&att.target).is_ok()
        });
        if !ok {
            out.push(Violation::MissingAttack(
                af.name(att.source).to_string(),
                af.name(att.target).to_string(),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_bag_with_everything_is_valid() {
        let af = fixtures::example1();
        let td = TreeDecomposition::from_parts(vec![(0, (0..af.len()).collect())], &[]);
        assert!(validate(&td, &af).is_empty());
        assert_eq!(td.width(), 4);
    }

    #[test]
    fn missing_edge_is_named() {
        let af = Af::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let td = TreeDecomposition::from_parts(vec![(0, vec![0, 1]), (1, vec![1, 2])], &[(0, 1)]);
        let v = validate(&td, &af);
        assert_eq!(v, vec![Violation::MissingAttack("c".into(), "a".into())]);
    }

    #[test]
    fn disconnected_and_uncovered() {
        let af = Af::new(["a", "b", "c"], [("a", "b")]).unwrap();
        let td = TreeDecomposition::from_parts(
            vec![(0, vec![0, 1]), (1, vec![1]), (2, vec![0])],
            &[(0, 1), (1, 2)],
        );
        let v = validate(&td, &af);
        assert!(v.contains(&Violation::Disconnected("a".into())));
        assert!(v.contains(&Violation::MissingArgument("c".into())));
    }

    #[test]
    fn two_roots_is_not_a_tree() {
        let af = Af::new(["a"], []).unwrap();
        let td = TreeDecomposition::from_parts(vec![(0, vec![0]), (1, vec![0])], &[]);
        assert!(matches!(validate(&td, &af)[0], Violation::NotATree(_)));
    }

    #[test]
    fn figure3_is_valid_with_width_two() {
        let paf = fixtures::example2();
        let nice = fixtures::figure3_td(&paf);
        assert!(nice.validate(paf.af()).is_empty());
        assert_eq!(nice.width(), 2);
    }
}
