use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TreeDecomposition;
use crate::af::Af;
use crate::error::{Error, Result};

/// How the elimination ordering is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Heuristic {
    /// Eliminate the vertex adding the fewest fill edges.
    MinFill,
    /// Eliminate the vertex of smallest current degree.
    MinDegree,
    /// Eliminate in this order (argument indices, a permutation).
    GivenOrder(Vec<usize>),
}

/// Decomposes the undirected attack graph of `af` along an elimination ordering.
///
/// Ties in the greedy heuristics go to the canonically smallest argument, or
/// to a seeded random priority when `tie_seed` is given. Each eliminated
/// vertex contributes the bag `{v} ∪ N(v)`, hung below the bag of its
/// earliest-eliminated neighbour. Components are joined under an empty root.
pub fn decompose(af: &Af, heuristic: &Heuristic, tie_seed: Option<u64>) -> Result<TreeDecomposition> {
    let n = af.len();
    if n == 0 {
        return Ok(TreeDecomposition::from_parts(vec![(0, Vec::new())], &[]));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for att in af.attacks() {
        if att.source != att.target {
            adj[att.source].insert(att.target);
            adj[att.target].insert(att.source);
        }
    }

    let mut priority: Vec<usize> = (0..n).collect();
    if let Some(seed) = tie_seed {
        priority.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let order = match heuristic {
        Heuristic::GivenOrder(order) => {
            let mut seen = vec![false; n];
            if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::InvalidDecomposition(vec![super::Violation::NotATree(
                    "elimination order is not a permutation of the arguments".into(),
                )]));
            }
            order.clone()
        }
        Heuristic::MinFill | Heuristic::MinDegree => greedy_order(&adj, heuristic, &priority),
    };

    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut bags = Vec::with_capacity(n + 1);
    let mut edges = Vec::with_capacity(n);
    let mut roots = Vec::new();
    let mut graph = adj;
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<usize> = graph[v].iter().copied().collect();
        eliminate(&mut graph, v);
        let mut bag = nbrs.clone();
        bag.push(v);
        bags.push((i, bag));
        match nbrs.iter().min_by_key(|&&u| position[u]) {
            Some(&u) => edges.push((position[u], i)),
            None => roots.push(i),
        }
    }
    if roots.len() > 1 {
        let root = bags.len();
        bags.push((root, Vec::new()));
        edges.extend(roots.iter().map(|&r| (root, r)));
    }
    Ok(TreeDecomposition::from_parts(bags, &edges))
}

fn eliminate(graph: &mut [BTreeSet<usize>], v: usize) {
    let nbrs: Vec<usize> = std::mem::take(&mut graph[v]).into_iter().collect();
    for (i, &a) in nbrs.iter().enumerate() {
        graph[a].remove(&v);
        for &b in &nbrs[i + 1..] {
            graph[a].insert(b);
            graph[b].insert(a);
        }
    }
}

fn fill_in(graph: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = graph[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !graph[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn greedy_order(adj: &[BTreeSet<usize>], heuristic: &Heuristic, priority: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut graph = adj.to_vec();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let cost = match heuristic {
                    Heuristic::MinFill => (fill_in(&graph, v), graph[v].len()),
                    _ => (graph[v].len(), 0),
                };
                (cost, priority[v])
            })
            .expect("a live vertex remains");
        alive[best] = false;
        eliminate(&mut graph, best);
        order.push(best);
    }
    order
}

/// Elimination order for a `k × n` grid whose arguments are indexed row-major
/// (`row * n + col`): sweeps along the longer side so that the elimination
/// frontier holds `min(k, n)` vertices, giving width at most `min(k, n)`.
pub fn grid_elimination_order(k: usize, n: usize) -> Vec<usize> {
    if k <= n {
        (0..n).flat_map(|c| (0..k).map(move |r| r * n + c)).collect()
    } else {
        (0..k * n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedecomp::validate;

    fn path(len: usize) -> Af {
        let names: Vec<String> = (0..len).map(|i| format!("v{i:02}")).collect();
        let atts: Vec<(&str, &str)> = (1..len).map(|i| (names[i - 1].as_str(), names[i].as_str())).collect();
        Af::new(names.iter().map(String::as_str), atts).unwrap()
    }

    #[test]
    fn edgeless_graph_has_width_zero() {
        let af = Af::new(["a", "b", "c"], []).unwrap();
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        assert!(validate(&td, &af).is_empty());
        assert_eq!(td.width(), 0);
        assert_eq!(td.len(), 4);
    }

    #[test]
    fn example1_min_fill_width_two() {
        let af = crate::fixtures::example1();
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let td = decompose(&af, &h, None).unwrap();
            assert!(validate(&td, &af).is_empty());
            assert_eq!(td.width(), 2);
        }
    }

    #[test]
    fn trees_get_width_one() {
        let af = path(12);
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        assert!(validate(&td, &af).is_empty());
        assert_eq!(td.width(), 1);
        let star = Af::new(["c", "x", "y", "z"], [("c", "x"), ("y", "c"), ("c", "z"), ("z", "c")]).unwrap();
        assert_eq!(decompose(&star, &Heuristic::MinFill, None).unwrap().width(), 1);
    }

    #[test]
    fn given_order_must_be_permutation() {
        let af = path(3);
        assert!(decompose(&af, &Heuristic::GivenOrder(vec![0, 1]), None).is_err());
        assert!(decompose(&af, &Heuristic::GivenOrder(vec![0, 1, 1]), None).is_err());
        let td = decompose(&af, &Heuristic::GivenOrder(vec![1, 0, 2]), None).unwrap();
        assert!(validate(&td, &af).is_empty());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn seeded_ties_stay_valid() {
        let af = crate::fixtures::example1();
        for seed in 0..10 {
            let td = decompose(&af, &Heuristic::MinDegree, Some(seed)).unwrap();
            assert!(validate(&td, &af).is_empty());
        }
    }

    #[test]
    fn self_loops_do_not_count_as_edges() {
        let af = Af::new(["a"], [("a", "a")]).unwrap();
        let td = decompose(&af, &Heuristic::MinFill, None).unwrap();
        assert!(validate(&td, &af).is_empty());
        assert_eq!(td.width(), 0);
    }
}
