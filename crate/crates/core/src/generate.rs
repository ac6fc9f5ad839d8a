//! Seeded grid instances.
//!
//! Arguments sit on a `k × n` grid and are named `r<row>c<col>` with
//! zero-padded indices, so canonical (lexicographic) order is row-major.
//! Every horizontal or vertical neighbour pair gets no attack, one of the two
//! directions, or both, each with probability 1/4. Every argument and every
//! created attack draws its probability from 0.1, …, 0.9 (10/91 each) or 1
//! (1/91). Each argument joins the query set with probability 0.04.
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit seed; stream 0 drives
//! the topology, stream 1 the probabilities, stream 2 the query set.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::io::PafDocument;
use crate::paf::Paf;

/// Probability that an argument is put into the generated query set.
pub const QUERY_MEMBER_PROBABILITY: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn new(k: usize, n: usize, seed: u64) -> Self {
        assert!(k >= 1 && n >= 1, "grid dimensions must be positive");
        GridSpec { k, n, seed }
    }

    /// Name of the argument at `(row, col)`.
    pub fn name(&self, row: usize, col: usize) -> String {
        let rw = digits(self.k - 1);
        let cw = digits(self.n - 1);
        format!("r{row:0rw$}c{col:0cw$}")
    }
}

fn digits(mut x: usize) -> usize {
    let mut d = 1;
    while x >= 10 {
        x /= 10;
        d += 1;
    }
    d
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// One draw from the marginal distribution: tenths 0.1–0.9 with weight 10/91 each, 1 with weight 1/91.
pub fn draw_probability<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let v = rng.random_range(0..91u32);
    if v == 90 {
        BigRational::from_integer(BigInt::from(1))
    } else {
        BigRational::new(BigInt::from(v / 10 + 1), BigInt::from(10))
    }
}

/// The attack option for one neighbour pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link {
    None,
    Forward,
    Backward,
    Both,
}

/// Generates the instance for `spec`, including its query set.
pub fn generate_grid(spec: GridSpec) -> Result<PafDocument> {
    let GridSpec { k, n, seed } = spec;
    let mut topo = stream(seed, 0);
    let mut probs = stream(seed, 1);
    let mut query = stream(seed, 2);

    let names: Vec<String> = (0..k).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| spec.name(r, c)).collect();
    let mut pairs = Vec::new();
    for r in 0..k {
        for c in 0..n {
            let here = r * n + c;
            if c + 1 < n {
                pairs.push((here, here + 1));
            }
            if r + 1 < k {
                pairs.push((here, here + n));
            }
        }
    }
    let mut attacks = Vec::new();
    for (x, y) in pairs {
        let link = match topo.random_range(0..4u32) {
            0 => Link::None,
            1 => Link::Forward,
            2 => Link::Backward,
            _ => Link::Both,
        };
        if matches!(link, Link::Forward | Link::Both) {
            attacks.push((x, y));
        }
        if matches!(link, Link::Backward | Link::Both) {
            attacks.push((y, x));
        }
    }
    let arg_probs: Vec<BigRational> = names.iter().map(|_| draw_probability(&mut probs)).collect();
    let att_probs: Vec<BigRational> = attacks.iter().map(|_| draw_probability(&mut probs)).collect();
    let paf = Paf::new(
        names.iter().map(String::as_str).zip(arg_probs),
        attacks.iter().zip(att_probs).map(|(&(x, y), p)| (names[x].as_str(), names[y].as_str(), p)),
    )?;
    let mut set = paf.af().empty_set();
    for (i, name) in names.iter().enumerate() {
        if query.random_bool(QUERY_MEMBER_PROBABILITY) {
            set.insert(paf.af().arg(name).expect("generated name"));
            debug_assert_eq!(paf.af().arg(name).ok(), Some(i));
        }
    }
    let comments = vec![
        format!("# grid k={k} n={n} seed={seed}"),
        "# attacks: none, forward, backward, both with probability 1/4 each".to_string(),
        "# marginals: 0.1..0.9 with weight 10/91 each, 1 with weight 1/91; query member probability 0.04"
            .to_string(),
    ];
    Ok(PafDocument { comments, paf, set: Some(set), query: None })
}

/// The four instances of a `(k, n)` family: seeds `seed`, …, `seed + 3`.
pub fn grid_family(k: usize, n: usize, seed: u64) -> Result<Vec<PafDocument>> {
    (0..4).map(|i| generate_grid(GridSpec::new(k, n, seed.wrapping_add(i)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_paf, serialize_paf};

    #[test]
    fn small_grid_shape() {
        let doc = generate_grid(GridSpec::new(3, 5, 7)).unwrap();
        let af = doc.paf.af();
        assert_eq!(af.len(), 15);
        assert!(af.attacks().len() <= 2 * 22);
        assert!(af.attacks().iter().all(|a| a.source != a.target));
        // neighbours only
        for a in af.attacks() {
            let (r1, c1) = (a.source / 5, a.source % 5);
            let (r2, c2) = (a.target / 5, a.target % 5);
            assert_eq!(r1.abs_diff(r2) + c1.abs_diff(c2), 1);
        }
    }

    #[test]
    fn names_sort_row_major() {
        let spec = GridSpec::new(11, 12, 0);
        let doc = generate_grid(spec).unwrap();
        let af = doc.paf.af();
        for r in 0..11 {
            for c in 0..12 {
                assert_eq!(af.arg(&spec.name(r, c)).unwrap(), r * 12 + c);
            }
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let a = serialize_paf(&generate_grid(GridSpec::new(3, 5, 7)).unwrap());
        let b = serialize_paf(&generate_grid(GridSpec::new(3, 5, 7)).unwrap());
        assert_eq!(a, b);
        assert_eq!(serialize_paf(&parse_paf(&a).unwrap()), a);
        let c = serialize_paf(&generate_grid(GridSpec::new(3, 5, 8)).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn family_uses_consecutive_seeds() {
        let fam = grid_family(3, 4, 100).unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam[2], generate_grid(GridSpec::new(3, 4, 102)).unwrap());
    }
}
