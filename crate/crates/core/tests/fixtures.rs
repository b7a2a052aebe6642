mod common;

use common::*;
use freetrack::currents::{counting_current, pushforward_rational, PathIndex};
use freetrack::dsl::{format_map_file, parse_map_file};
use freetrack::dynamics::AutomorphismPair;
use freetrack::graph::{random_cyclic_word, CyclicWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture() -> impl Strategy<Value = &'static str> {
    prop::sample::select(FIXTURES.to_vec())
}

fn random_reduced(n: u32, len: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<u32> = Vec::new();
    while w.len() < len {
        let e = rand::Rng::gen_range(&mut rng, 0..n);
        if w.last() != Some(&(e ^ 1)) {
            w.push(e);
        }
    }
    w
}

#[test]
fn fixture_files_round_trip() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture_path(&format!("{name}.map"))).unwrap();
        let m = parse_map_file(&text).unwrap();
        let again = parse_map_file(&format_map_file(&m.name, &m.map, m.fixed_vertex)).unwrap();
        assert_eq!(again.map, m.map, "{name}");
    }
}

#[test]
fn fixture_pairs_are_inverse() {
    for (f, g) in [("fib", "fib_inv"), ("plastic", "plastic_inv"), ("wedge", "wedge_inv")] {
        let (a, b) = (load(f), load(g));
        for e in a.graph().positive_edges() {
            let x = reduce(&expand(b.base(), a.base().image(e)));
            assert_eq!(x, vec![e], "{f}");
        }
        assert!(AutomorphismPair::on_rose(a, b).is_ok());
    }
}

#[test]
fn expanding_powers() {
    let powers: Vec<usize> = FIXTURES.iter().map(|n| load(n).power()).collect();
    assert_eq!(powers, vec![2, 2, 3, 3, 1, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iterates_of_edges_are_legal(name in fixture(), t in 1usize..5) {
        let f = load_map(name);
        let turns = Turns::new(&f);
        for e in 0..num_edges(&f) {
            let w = expand_iter(&f, &[e], t);
            prop_assert_eq!(reduce(&w).len(), w.len());
            prop_assert!(turns.is_legal_path(&w));
        }
    }

    #[test]
    fn goodness_matches_oracle(name in fixture(), seed in any::<u64>(), len in 1usize..80) {
        let t = load(name);
        let turns = Turns::new(t.map());
        let w = random_cyclic_word(t.graph(), len, &mut ChaCha8Rng::seed_from_u64(seed));
        let r = t.goodness(&w).unwrap();
        prop_assert_eq!(r.good, turns.good(w.edges(), t.cutoff()));
        prop_assert_eq!(r.ilt, turns.ilt(w.edges()));
    }

    #[test]
    fn cancellation_at_reduced_splits(name in fixture(), seed in any::<u64>(), len in 2usize..40, cut in 1usize..39) {
        let t = load(name);
        let f = t.map();
        let p = random_reduced(num_edges(f), len, seed);
        let (p1, p2) = p.split_at(cut.min(len - 1));
        let whole = reduce(&expand(f, &p)).len();
        let parts = reduce(&expand(f, p1)).len() + reduce(&expand(f, p2)).len();
        prop_assert!(whole + 2 * t.cancellation_bound() as usize >= parts, "{:?} | {:?}", p1, p2);
    }

    #[test]
    fn counting_current_is_natural(name in fixture(), seed in any::<u64>(), len in 1usize..30) {
        let t = load(name);
        let f = t.base();
        let w = random_cyclic_word(t.graph(), len, &mut ChaCha8Rng::seed_from_u64(seed));
        let fw = pushforward_rational(f, &w).unwrap();
        prop_assert_eq!(canonical(fw.edges()), canonical(&apply_cyclic(f, w.edges())));
        let index = PathIndex::new(t.graph(), 2);
        let mu = counting_current(&index, &fw).unwrap();
        let host = CyclicWord::new(t.graph(), apply_cyclic(f, w.edges())).unwrap();
        for p in index.paths() {
            let n = host.len();
            let e = host.edges();
            let occ = |q: &[u32]| (0..n).filter(|&i| (0..q.len()).all(|k| e[(i + k) % n] == q[k])).count();
            prop_assert_eq!(mu.get(p), (occ(p) + occ(&inverse(p))) as f64);
        }
    }
}
