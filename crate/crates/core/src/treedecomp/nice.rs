use super::{post_order, structural_violations, validate, TreeDecomposition, Violation};
use crate::af::Af;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub id: usize,
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// A nice tree decomposition: empty root and leaf bags; introduce and forget
/// nodes change the bag by exactly one argument; join nodes have two children
/// with identical bags. Node references are positions in `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTd {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTd {
    /// Assembles a nice decomposition from explicit nodes. Use [`NiceTd::validate`] to check it.
    pub fn from_nodes(nodes: Vec<NiceNode>, root: usize) -> Self {
        NiceTd { nodes, root }
    }

    pub fn nodes(&self) -> &[NiceNode] {
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

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Positions in children-before-parent order.
    pub fn post_order(&self) -> Option<Vec<usize>> {
        post_order(self.nodes.len(), self.root, |i| &self.nodes[i].children)
    }

    /// The underlying plain decomposition (same node order and ids).
    pub fn as_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| (n.id, n.bag.clone())).collect();
        let mut edges = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if c < self.nodes.len() {
                    edges.push((i, c));
                }
            }
        }
        let mut td = TreeDecomposition::from_parts(bags, &edges);
        td.root = self.root;
        td
    }

    /// Decomposition conditions for `af` plus the node-type rules.
    pub fn validate(&self, af: &Af) -> Vec<Violation> {
        let mut out = validate(&self.as_decomposition(), af);
        if out.iter().any(|v| matches!(v, Violation::NotATree(_))) {
            return out;
        }
        out.extend(self.nice_violations());
        out
    }

    fn nice_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut rule = |node: &NiceNode, message: String| {
            out.push(Violation::NiceRule { node: node.id, message });
        };
        let root = &self.nodes[self.root];
        if !root.bag.is_empty() {
            rule(root, "root bag is not empty".into());
        }
        for node in &self.nodes {
            let kids: Vec<&NiceNode> = node.children.iter().map(|&c| &self.nodes[c]).collect();
            match node.kind {
                NodeKind::Leaf => {
                    if !kids.is_empty() {
                        rule(node, "leaf has children".into());
                    }
                    if !node.bag.is_empty() {
                        rule(node, "leaf bag is not empty".into());
                    }
                }
                NodeKind::Introduce(a) | NodeKind::Forget(a) => {
                    if kids.len() != 1 {
                        rule(node, format!("expected one child, found {}", kids.len()));
                        continue;
                    }
                    let child = &kids[0].bag;
                    let (with, without, what) = match node.kind {
                        NodeKind::Introduce(_) => (&node.bag, child, "introduce"),
                        _ => (child, &node.bag, "forget"),
                    };
                    let mut expected = without.clone();
                    if expected.binary_search(&a).is_ok() {
                        rule(node, format!("{what} argument #{a} already present on the smaller side"));
                        continue;
                    }
                    let pos = expected.binary_search(&a).unwrap_err();
                    expected.insert(pos, a);
                    if *with != expected {
                        rule(node, format!("{what} of #{a} does not match the child bag"));
                    }
                }
                NodeKind::Join => {
                    if kids.len() != 2 {
                        rule(node, format!("join needs two children, found {}", kids.len()));
                    } else if kids.iter().any(|k| k.bag != node.bag) {
                        rule(node, "join children bags differ".into());
                    }
                }
            }
            if node.kind != NodeKind::Leaf && node.children.is_empty() {
                rule(node, "childless node is not a leaf".into());
            }
        }
        out
    }
}

/// Converts a decomposition into nice form, preserving width.
///
/// Each node's children are brought to the node's bag by forgetting what the
/// parent lacks and introducing what the child lacks, then combined by a
/// chain of binary joins. Childless nodes start from an empty leaf; the root
/// forgets down to the empty bag. New node ids are positions, children before
/// parents.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTd> {
    let problems = structural_violations(td, None, &|x| format!("#{x}"));
    if !problems.is_empty() {
        return Err(Error::InvalidDecomposition(problems));
    }
    let order = td.post_order().expect("checked above");
    let mut builder = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.len()];
    for &u in &order {
        let node = &td.nodes()[u];
        let bag = &node.bag;
        let mut branches = Vec::with_capacity(node.children.len().max(1));
        if node.children.is_empty() {
            let leaf = builder.push(Vec::new(), NodeKind::Leaf, vec![]);
            branches.push(builder.introduce_up_to(leaf, bag));
        }
        for &c in &node.children {
            let t = builder.forget_down_to(top[c], bag);
            branches.push(builder.introduce_up_to(t, bag));
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = builder.push(bag.clone(), NodeKind::Join, vec![acc, b]);
        }
        top[u] = acc;
    }
    let root = builder.forget_down_to(top[td.root()], &[]);
    Ok(NiceTd { nodes: builder.nodes, root })
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(NiceNode { id, bag, kind, children });
        id
    }

    /// Forgets every argument of `from`'s bag not in `keep`.
    fn forget_down_to(&mut self, mut from: usize, keep: &[usize]) -> usize {
        let drop: Vec<usize> = self.nodes[from]
            .bag
            .iter()
            .copied()
            .filter(|x| keep.binary_search(x).is_err())
            .collect();
        for x in drop {
            let bag: Vec<usize> = self.nodes[from].bag.iter().copied().filter(|&y| y != x).collect();
            from = self.push(bag, NodeKind::Forget(x), vec![from]);
        }
        from
    }

    /// Introduces every argument of `target` missing from `from`'s bag.
    fn introduce_up_to(&mut self, mut from: usize, target: &[usize]) -> usize {
        for &x in target {
            let bag = &self.nodes[from].bag;
            if let Err(pos) = bag.binary_search(&x) {
                let mut bag = bag.clone();
                bag.insert(pos, x);
                from = self.push(bag, NodeKind::Introduce(x), vec![from]);
            }
        }
        from
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::treedecomp::{decompose, Heuristic};

    #[test]
    fn empty_framework_is_single_leaf_root() {
        let af = Af::new([], []).unwrap();
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        let nice = make_nice(&td).unwrap();
        assert_eq!(nice.len(), 1);
        assert_eq!(nice.nodes()[0].kind, NodeKind::Leaf);
        assert!(nice.validate(&af).is_empty());
    }

    #[test]
    fn example1_nice_preserves_width() {
        let af = fixtures::example1();
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        let nice = make_nice(&td).unwrap();
        assert!(nice.validate(&af).is_empty(), "{:?}", nice.validate(&af));
        assert_eq!(nice.width(), td.width());
    }

    #[test]
    fn figure3_shape_validates() {
        let paf = fixtures::example2();
        let nice = fixtures::figure3_td(&paf);
        assert!(nice.validate(paf.af()).is_empty());
        assert_eq!(nice.len(), 16);
    }

    #[test]
    fn broken_nice_rules_are_reported() {
        let af = Af::new(["a", "b"], [("a", "b")]).unwrap();
        let nodes = vec![
            NiceNode { id: 0, bag: vec![], kind: NodeKind::Leaf, children: vec![] },
            NiceNode { id: 1, bag: vec![0, 1], kind: NodeKind::Introduce(0), children: vec![0] },
            NiceNode { id: 2, bag: vec![], kind: NodeKind::Forget(0), children: vec![1] },
        ];
        let nice = NiceTd::from_nodes(nodes, 2);
        let v = nice.validate(&af);
        assert!(v.iter().any(|x| matches!(x, Violation::NiceRule { node: 1, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::NiceRule { node: 2, .. })));
    }

    #[test]
    fn invalid_input_is_rejected() {
        let td = TreeDecomposition::from_parts(vec![(0, vec![0]), (1, vec![1])], &[]);
        assert!(matches!(make_nice(&td), Err(Error::InvalidDecomposition(_))));
        let td = TreeDecomposition::from_parts(
            vec![(0, vec![0]), (1, vec![1]), (2, vec![0])],
            &[(0, 1), (1, 2)],
        );
        assert!(matches!(make_nice(&td), Err(Error::InvalidDecomposition(_))));
    }
}
