use paftd::generate::{draw_probability, generate_grid, GridSpec};
use paftd::io::{parse_paf, serialize_paf};
use paftd::treedecomp::{decompose, grid_elimination_order, validate, Heuristic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn marginal_frequencies_match_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = [0usize; 10];
    let draws = 10_000;
    for _ in 0..draws {
        let p = draw_probability(&mut rng);
        let tenths = (p * paftd::Exact::from_integer(10.into())).to_integer();
        counts[tenths.to_string().parse::<usize>().unwrap() - 1] += 1;
    }
    for (i, &c) in counts.iter().enumerate() {
        let freq = c as f64 / draws as f64;
        let want = if i == 9 { 1.0 / 91.0 } else { 10.0 / 91.0 };
        assert!((freq - want).abs() <= 0.01, "value {}: {freq} vs {want}", i + 1);
    }
}

#[test]
fn grid_width_is_at_most_the_short_side() {
    for (k, n) in [(3, 5), (3, 12), (4, 7), (6, 3), (5, 5), (1, 9)] {
        for seed in 0..3 {
            let doc = generate_grid(GridSpec::new(k, n, seed)).unwrap();
            let af = doc.paf.af();
            let td = decompose(af, &Heuristic::GivenOrder(grid_elimination_order(k, n)), None).unwrap();
            assert!(validate(&td, af).is_empty());
            assert!(td.width() <= k.min(n), "({k},{n}) width {}", td.width());
        }
    }
}

#[test]
fn generated_instances_round_trip_byte_identically() {
    for seed in 0..100 {
        let doc = generate_grid(GridSpec::new(2 + (seed % 4) as usize, 3 + (seed % 5) as usize, seed)).unwrap();
        assert!(doc.paf.af().attacks().iter().all(|a| a.source != a.target));
        let text = serialize_paf(&doc);
        let back = parse_paf(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serialize_paf(&back), text);
    }
}
