use paftd::dp::{p_ext, SolveOptions};
use paftd::testkit::{random_paf, random_set};
use paftd::treedecomp::{decompose, make_nice, Heuristic};
use paftd::{Exact, Semantics};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn results_do_not_depend_on_the_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..25 {
        let paf = random_paf(&mut rng, 8, 0.35, 10);
        let s = random_set(&mut rng, &paf, 0.3);
        let n = paf.af().len();
        let mut heuristics = vec![Heuristic::MinFill, Heuristic::MinDegree, Heuristic::GivenOrder((0..n).collect())];
        for _ in 0..5 {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            heuristics.push(Heuristic::GivenOrder(order));
        }
        for sigma in [Semantics::Admissible, Semantics::Complete, Semantics::Stable] {
            let results: Vec<Exact> = heuristics
                .iter()
                .map(|h| {
                    let nice = make_nice(&decompose(paf.af(), h, None).unwrap()).unwrap();
                    assert!(nice.validate(paf.af()).is_empty());
                    p_ext::<Exact>(&paf, sigma, &s, Some(&nice), &SolveOptions::default()).unwrap().probability
                })
                .collect();
            assert!(results.windows(2).all(|w| w[0] == w[1]), "{sigma}: {results:?}");
        }
    }
}
