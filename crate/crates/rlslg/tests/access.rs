use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlslg::access::{build_index, BuildConfig, Route};
use rlslg::corpus::{fibonacci, random_rlslg, random_slg, random_text, thue_morse};
use rlslg::grammar::{expand, trivial_builder};
use rlslg::Grammar;

fn check(g: &Grammar, tau: f64, samples: usize, rng: &mut ChaCha8Rng) {
    let text = expand(g, g.start, 1 << 24).unwrap();
    let mut cum = vec![0u64];
    for &c in &text {
        cum.push(cum.last().unwrap() + g.terminal_weights[c as usize]);
    }
    let ix = build_index(g, &BuildConfig::with_tau(tau)).unwrap();
    let rep = ix.report();
    assert_eq!(rep.weighted.sparsity_violations, 0, "{rep:?}");
    if let Some(l) = &rep.leafy {
        assert_eq!(l.top.sparsity_violations, 0, "{rep:?}");
    }
    for r in [Route::Weighted, Route::Leafy] {
        let mut ix = ix.clone();
        ix.set_route(r).unwrap();
        for _ in 0..samples {
            let i = rng.gen_range(0..ix.weight());
            let (h, steps) = ix.access_traced(i).unwrap();
            let j = cum.partition_point(|&x| x <= i) - 1;
            assert_eq!((h.terminal, h.pos, h.offset), (text[j], j as u64, cum[j]));
            assert!(ix.steps_within_bound(steps), "{steps} steps, route {r:?}");
        }
    }
}

#[test]
fn large_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let fib = fibonacci(28);
    let tm = thue_morse(19);
    let triv = random_text(&mut rng, 4, 200_000);
    let t: Vec<u32> = (0..5000).map(|i| (i * i % 7) as u32).collect();
    let triv2 = trivial_builder(&t).unwrap();
    for g in [fib, tm, triv, triv2] {
        for tau in [2.0, 16.0, 256.0] {
            check(&g, tau, 20_000, &mut rng);
        }
    }
    for it in 0..20 {
        let g = if it % 2 == 0 {
            random_slg(&mut rng, 3, 40, 5, it % 4 == 0, 1_000_000)
        } else {
            random_rlslg(&mut rng, 3, 40, 5, it % 4 == 1, 1_000_000)
        };
        check(&g, [2.0, 4.0, 64.0][it % 3], 5_000, &mut rng);
    }
}
