mod common;

use common::Oracle;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlslg::access::{build_index, AccessIndex, BuildConfig};
use rlslg::corpus::{fibonacci, random_rlslg, random_slg};
use rlslg::grammar::{expand, parse_text, read_binary, write_binary, write_text};
use rlslg::traversal::Traversal;

#[test]
fn cursors_walk_the_whole_text_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut grammars = vec![fibonacci(14)];
    for k in 0..10 {
        grammars.push(if k % 2 == 0 {
            random_slg(&mut rng, 3, 20, 4, k % 4 == 0, 3_000)
        } else {
            random_rlslg(&mut rng, 3, 20, 4, k % 4 == 1, 3_000)
        });
    }
    for g in &grammars {
        let o = Oracle::new(g);
        let ix = build_index(g, &BuildConfig::with_tau(4.0)).unwrap();
        let tr = Traversal::new(&ix).unwrap();
        let tree = tr.tree();
        let n = o.len() as usize;
        let mut c = tree.char_at(0).unwrap();
        for step in 0..=n {
            let j = step % n;
            assert_eq!((c.symbol(), c.pos()), (o.text[j], j as u64));
            assert_eq!(c.offset(), o.cum[j]);
            c = tree.forward(&c).unwrap();
        }
        let mut c = tree.char_at(0).unwrap();
        for step in 1..=n {
            c = tree.backward(&c).unwrap();
            assert_eq!(c.symbol(), o.text[n - step]);
        }
    }
}

#[test]
fn files_round_trip_into_the_same_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..20 {
        let g = random_rlslg(&mut rng, 5, 15, 4, k % 2 == 0, 2_000);
        let from_text = parse_text(&write_text(&g)).unwrap();
        let from_bin = read_binary(&write_binary(&g)).unwrap();
        assert_eq!(from_text, g);
        assert_eq!(from_bin, g);
        let ix = build_index(&g, &BuildConfig::with_tau(8.0)).unwrap();
        let bytes = ix.to_bytes();
        assert_eq!(AccessIndex::from_bytes(&bytes).unwrap(), ix);
        assert_eq!(build_index(&from_bin, &BuildConfig::with_tau(8.0)).unwrap().to_bytes(), bytes);
    }
}

#[test]
fn truncated_index_files_are_rejected() {
    let ix = build_index(&fibonacci(10), &BuildConfig::with_tau(2.0)).unwrap();
    let bytes = ix.to_bytes();
    for cut in [0, 3, 4, bytes.len() / 2, bytes.len() - 1] {
        assert!(AccessIndex::from_bytes(&bytes[..cut]).is_err(), "cut at {cut}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extract_equals_slices(seed in any::<u64>(), tau in 2.0f64..40.0, leafy in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_slg(&mut rng, 4, 12, 4, false, 1_500);
        let text = expand(&g, g.start, 1 << 20).unwrap();
        let ix = build_index(&g, &BuildConfig { tau, leafy, ..Default::default() }).unwrap();
        let tr = Traversal::new(&ix).unwrap();
        let n = text.len() as u64;
        for i in (0..n).step_by(7) {
            let m = (n - i).min(23);
            prop_assert_eq!(tr.extract(i, m).unwrap(), text[i as usize..(i + m) as usize].to_vec());
        }
        prop_assert!(tr.extract(n, 1).is_err());
    }
}
