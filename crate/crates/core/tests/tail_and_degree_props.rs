//! Statistical sanity of the binomial tail bound and the degree-window
//! check: the closed-form bound must upper-bound measured frequencies, and
//! the degree window must hold on moderate random graphs.

use hamcover_core::random::{
    binomial_tail_bound, check_degree_window, sample_gnp, SampleSpec, TailBoundInput, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

#[test]
fn tail_bound_dominates_empirical_frequencies() {
    // Configurations chosen so the bound is meaningful (< 1) and the
    // preconditions pn >= 1, hqn >= 3 hold.
    let configs = [
        (2_000u64, 0.05f64, 3.0f64),
        (5_000, 0.01, 4.0),
        (1_000, 0.1, 3.5),
    ];
    let trials = 20_000u64;
    for (i, &(n, p, sigmas)) in configs.iter().enumerate() {
        let mean = p * n as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        let h = sigmas * sd;
        let input = TailBoundInput { n, p, h };
        let bound = binomial_tail_bound(&input).unwrap();
        assert!(bound < 1.0, "config {i}: bound {bound} not informative");
        let dist = Binomial::new(n, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xB10 + i as u64);
        let hits = (0..trials)
            .filter(|_| dist.sample(&mut rng) as f64 >= mean + h)
            .count();
        let freq = hits as f64 / trials as f64;
        assert!(
            freq <= bound,
            "config {i}: empirical {freq} exceeds bound {bound}"
        );
    }
}

#[test]
fn tail_bound_rejects_out_of_range_inputs() {
    assert!(binomial_tail_bound(&TailBoundInput { n: 10, p: 0.01, h: 5.0 }).is_err()); // pn < 1
    assert!(binomial_tail_bound(&TailBoundInput { n: 100, p: 0.5, h: -1.0 }).is_err());
    assert!(binomial_tail_bound(&TailBoundInput { n: 100, p: 1.5, h: 5.0 }).is_err());
}

#[test]
fn degree_window_holds_on_moderate_random_graphs() {
    let mut holds = 0;
    for seed in 0..10u64 {
        let n = 3_000usize;
        let p = 100.0 * (n as f64).ln() / n as f64;
        let g = sample_gnp(&SampleSpec::new(n, p, 0xDE6 + seed)).unwrap();
        let report = check_degree_window(&g, p);
        if report.verdict == Verdict::Holds {
            holds += 1;
        }
    }
    assert!(holds >= 9, "degree window held on only {holds}/10 samples");
}
