//! Shared fixtures for the criterion benchmarks: deterministic graphs of the
//! shapes the pipeline stages care about.

use hamcover_core::forest::Bipartition;
use hamcover_core::graph::Graph;
use hamcover_core::random::{sample_gnp, SampleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded `G(n, p)` sample.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp(&SampleSpec::new(n, p, seed)).expect("valid sampling parameters")
}

/// A random bipartite graph with `half` vertices a side and roughly 40% of
/// the cross pairs present, plus its bipartition.
pub fn bipartite(half: usize, seed: u64) -> (Graph, Bipartition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * half;
    let mut edges = Vec::new();
    for a in 0..half as u32 {
        for b in half as u32..n as u32 {
            if rng.random_range(0..10) < 4 {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::from_edges_unchecked(n, edges);
    let bp = Bipartition {
        a: (0..half as u32).collect(),
        b: (half as u32..n as u32).collect(),
    };
    (g, bp)
}
