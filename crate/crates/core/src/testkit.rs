//! Random small instances for property tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::af::ArgSet;
use crate::paf::Paf;

const MARGINALS: [(i64, i64); 7] = [(1, 10), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (9, 10)];

fn marginal<R: Rng>(rng: &mut R) -> BigRational {
    let &(n, d) = MARGINALS.choose(rng).expect("non-empty");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random PAF with `1..=max_args` arguments, attacks drawn with probability
/// `density` per ordered pair (self-attacks included, at a fifth of that
/// rate), and at most `max_uncertain` elements with marginal below 1.
pub fn random_paf<R: Rng>(rng: &mut R, max_args: usize, density: f64, max_uncertain: usize) -> Paf {
    let n = rng.random_range(1..=max_args);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut budget = max_uncertain;
    let mut draw = |rng: &mut R| {
        if budget > 0 && rng.random_bool(0.5) {
            budget -= 1;
            marginal(rng)
        } else {
            BigRational::from_integer(BigInt::from(1))
        }
    };
    let args: Vec<(&str, BigRational)> = names.iter().map(|s| (s.as_str(), draw(rng))).collect();
    let mut atts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = if i == j { density / 5.0 } else { density };
            if rng.random_bool(p) {
                atts.push((names[i].as_str(), names[j].as_str(), draw(rng)));
            }
        }
    }
    Paf::new(args, atts).expect("generated names are valid")
}

/// All arguments at probability 1/2, all attacks certain.
pub fn uniform_paf<R: Rng>(rng: &mut R, max_args: usize, density: f64) -> Paf {
    let n = rng.random_range(1..=max_args);
    let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut atts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                atts.push((names[i].as_str(), names[j].as_str(), one.clone()));
            }
        }
    }
    Paf::new(names.iter().map(|s| (s.as_str(), half.clone())), atts).expect("generated names are valid")
}

/// A random subset, each argument with probability `p`.
pub fn random_set<R: Rng>(rng: &mut R, paf: &Paf, p: f64) -> ArgSet {
    let mut s = paf.af().empty_set();
    for a in 0..paf.af().len() {
        if rng.random_bool(p) {
            s.insert(a);
        }
    }
    s
}
