//! Validates the exact expansion checker against an independently written
//! enumerator that works straight from the definition: every nonempty set
//! `X` of at most `s` vertices must keep at least `2 d |X|` external
//! neighbours after an adversary deletes up to a `alpha` fraction of the
//! edges at each member of `X`.

use hamcover_core::graph::Graph;
use hamcover_core::random::{
    check_expansion, verify_expansion_witness, CheckMode, ExpansionParams, ExpansionWitness,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest feasible kill set: how many external neighbours of `x` the
/// adversary can disconnect entirely within the per-vertex budgets.
/// Straightforward recursion over the neighbours, no bit tricks.
fn max_killable(g: &Graph, x: &[u32], nbrs: &[u32], idx: usize, budgets: &mut Vec<usize>) -> usize {
    if idx == nbrs.len() {
        return 0;
    }
    // Option 1: keep neighbour idx alive.
    let mut best = max_killable(g, x, nbrs, idx + 1, budgets);
    // Option 2: kill it, which costs one budget unit at every member of x
    // adjacent to it.
    let members: Vec<usize> = x
        .iter()
        .enumerate()
        .filter(|&(_, &v)| g.has_edge(v, nbrs[idx]))
        .map(|(i, _)| i)
        .collect();
    if members.iter().all(|&i| budgets[i] > 0) {
        for &i in &members {
            budgets[i] -= 1;
        }
        best = best.max(1 + max_killable(g, x, nbrs, idx + 1, budgets));
        for &i in &members {
            budgets[i] += 1;
        }
    }
    best
}

/// Definition-level expansion check by full enumeration. Returns `true`
/// when the property holds for every candidate set.
fn expansion_by_definition(g: &Graph, params: &ExpansionParams) -> bool {
    let n = g.vertex_count();
    let mut x: Vec<u32> = Vec::new();
    fn subsets(
        g: &Graph,
        params: &ExpansionParams,
        start: u32,
        x: &mut Vec<u32>,
    ) -> bool {
        if !x.is_empty() {
            let mut nbrs: Vec<u32> = Vec::new();
            for &v in x.iter() {
                for &y in g.neighbors(v) {
                    if !x.contains(&y) && !nbrs.contains(&y) {
                        nbrs.push(y);
                    }
                }
            }
            let mut budgets: Vec<usize> = x
                .iter()
                .map(|&v| (params.alpha * g.degree(v) as f64).floor() as usize)
                .collect();
            let killed = max_killable(g, x, &nbrs, 0, &mut budgets);
            if nbrs.len() - killed < 2 * params.d * x.len() {
                return false;
            }
        }
        if x.len() == params.s {
            return true;
        }
        for v in start..g.vertex_count() as u32 {
            x.push(v);
            if !subsets(g, params, v + 1, x) {
                return false;
            }
            x.pop();
        }
        true
    }
    let _ = n;
    subsets(g, params, 0, &mut x)
}

fn agree_on(g: &Graph, params: &ExpansionParams, label: &str) {
    let report = check_expansion(g, params, CheckMode::Exact, 1_000_000_000).unwrap();
    assert_ne!(report.verdict, Verdict::Inconclusive, "{label}: budget too small");
    let expected = expansion_by_definition(g, params);
    let got = report.verdict == Verdict::Holds;
    assert_eq!(
        got, expected,
        "{label}: checker says {:?}, definition says {}",
        report.verdict, expected
    );
    if report.verdict == Verdict::Violated {
        let witness: ExpansionWitness =
            serde_json::from_value(report.witness.clone()).expect("violated verdicts carry a witness");
        assert!(
            verify_expansion_witness(g, params, &witness),
            "{label}: witness does not replay"
        );
    }
}

#[test]
fn agrees_with_definition_on_all_graphs_up_to_four_vertices() {
    let pool4 = [(0u32, 1u32), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let param_grid = [
        ExpansionParams { s: 2, d: 1, alpha: 0.5 },
        ExpansionParams { s: 3, d: 1, alpha: 0.34 },
        ExpansionParams { s: 4, d: 2, alpha: 0.75 },
    ];
    for mask in 0u32..64 {
        let edges: Vec<(u32, u32)> = (0..6)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| pool4[i])
            .collect();
        let g = Graph::from_edges_unchecked(4, edges);
        for params in &param_grid {
            agree_on(&g, params, &format!("n=4 mask={mask} params={params:?}"));
        }
    }
}

#[test]
fn agrees_with_definition_on_random_graphs_up_to_eight_vertices() {
    let param_grid = [
        ExpansionParams { s: 3, d: 1, alpha: 0.5 },
        ExpansionParams { s: 8, d: 2, alpha: 0.6 },
        ExpansionParams { s: 4, d: 3, alpha: 0.9 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xE5A);
    for case in 0..60 {
        let n = rng.random_range(5..=8usize);
        let p = [0.2, 0.5, 0.8][case % 3];
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .filter(|_| rng.random_range(0.0..1.0) < p)
            .collect();
        let g = Graph::from_edges_unchecked(n, edges);
        for params in &param_grid {
            agree_on(&g, params, &format!("case={case} n={n} params={params:?}"));
        }
    }
}

#[test]
fn dense_graphs_with_generous_budgets_expand() {
    // K8 with s=1, d=1: a single vertex has 7 neighbours; the adversary
    // may delete floor(0.25 * 7) = 1 of them, leaving 6 >= 2.
    let g = hamcover_core::graph::standard::complete(8);
    let params = ExpansionParams { s: 1, d: 1, alpha: 0.25 };
    let report = check_expansion(&g, &params, CheckMode::Exact, 1_000_000).unwrap();
    assert_eq!(report.verdict, Verdict::Holds);
    assert!(expansion_by_definition(&g, &params));
}
