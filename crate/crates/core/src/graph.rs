//! Graph representation and structural verifiers.
//!
//! Graphs are simple and undirected, with vertices `0..n`. Adjacency is kept
//! in compressed sparse rows so that neighbour scans are cache-friendly even
//! for samples with tens of millions of edges. Edges are always reported in
//! canonical `(min, max)` form.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Validation failures when building a graph from an explicit edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

/// Builds a graph from an edge list, rejecting malformed input.
///
/// Edges may be given in either endpoint order. Self-loops, out-of-range
/// endpoints and duplicates (in either order) are errors rather than being
/// silently repaired.
pub fn build_graph(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
    let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u as usize >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v as usize >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        canon.push((u.min(v), u.max(v)));
    }
    canon.sort_unstable();
    for w in canon.windows(2) {
        if w[0] == w[1] {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
    }
    Ok(Graph::from_sorted_canonical(n, canon))
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Graph::from_sorted_canonical(n, Vec::new())
    }

    /// Builds from edges already known to be valid; canonicalises and sorts.
    ///
    /// Intended for internal construction where the edge set is produced by
    /// an algorithm rather than parsed from input. Duplicates and loops are
    /// caught only by debug assertions.
    pub fn from_edges_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut canon = edges;
        for e in canon.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        if !canon.is_sorted() {
            canon.sort_unstable();
        }
        Graph::from_sorted_canonical(n, canon)
    }

    fn from_sorted_canonical(n: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.iter().all(|&(u, v)| u < v && (v as usize) < n));
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let m = edges.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut adj = vec![0u32; 2 * m];
        for &(u, v) in &edges {
            adj[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adj[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Neighbour lists come out sorted because edges are sorted by (u, v)
        // and the reverse direction is appended in increasing u as well, but
        // only for the first endpoint; sort each row to be safe.
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { n, m, offsets, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v as u32)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v as u32)).min().unwrap_or(0)
    }

    /// Canonical `(u, v)` edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// New graph keeping only edges for which `keep` returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(u32, u32) -> bool) -> Graph {
        let edges: Vec<(u32, u32)> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_sorted_canonical(self.n, edges)
    }

    /// Union of this graph with extra edges (duplicates are merged).
    pub fn union_with_edges(&self, extra: &[(u32, u32)]) -> Graph {
        let mut edges: Vec<(u32, u32)> = self.edges().collect();
        for &(u, v) in extra {
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        Graph::from_sorted_canonical(self.n, edges)
    }
}

/// Degree summary of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// `histogram[d]` is the number of vertices of degree `d`.
    pub histogram: Vec<usize>,
}

/// Minimum, maximum, mean degree and the full degree histogram.
pub fn degree_stats(g: &Graph) -> DegreeStats {
    let n = g.vertex_count();
    if n == 0 {
        return DegreeStats {
            min: 0,
            max: 0,
            mean: 0.0,
            histogram: Vec::new(),
        };
    }
    let max = g.max_degree();
    let mut histogram = vec![0usize; max + 1];
    let mut min = usize::MAX;
    let mut total = 0usize;
    for v in 0..n as u32 {
        let d = g.degree(v);
        histogram[d] += 1;
        min = min.min(d);
        total += d;
    }
    DegreeStats {
        min,
        max,
        mean: total as f64 / n as f64,
        histogram,
    }
}

/// SHA-256 of the canonical edge listing, as lowercase hex.
///
/// The digest covers `n` followed by every edge in sorted `(min, max)` order,
/// so isomorphic relabelings hash differently but re-serialisation does not.
pub fn graph_hash(g: &Graph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(g.vertex_count().to_string().as_bytes());
    hasher.update(b"\n");
    for (u, v) in g.edges() {
        hasher.update(u.to_string().as_bytes());
        hasher.update(b" ");
        hasher.update(v.to_string().as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// A cyclic vertex order visiting every vertex exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HamiltonCycle {
    pub order: Vec<u32>,
}

impl HamiltonCycle {
    pub fn new(order: Vec<u32>) -> Self {
        HamiltonCycle { order }
    }

    /// Edges of the cycle in canonical form (unsorted).
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let k = self.order.len();
        (0..k)
            .map(|i| {
                let u = self.order[i];
                let v = self.order[(i + 1) % k];
                (u.min(v), u.max(v))
            })
            .collect()
    }
}

/// Why a claimed Hamilton cycle failed verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleDefect {
    WrongLength { expected: usize, found: usize },
    VertexOutOfRange { vertex: u32 },
    RepeatedVertex { vertex: u32 },
    MissingEdge { u: u32, v: u32 },
}

/// Checks a Hamilton cycle and reports the first defect found.
pub fn check_hamilton_cycle(g: &Graph, cycle: &HamiltonCycle) -> Result<(), CycleDefect> {
    let n = g.vertex_count();
    if cycle.order.len() != n || n < 3 {
        return Err(CycleDefect::WrongLength {
            expected: n,
            found: cycle.order.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in &cycle.order {
        if v as usize >= n {
            return Err(CycleDefect::VertexOutOfRange { vertex: v });
        }
        if seen[v as usize] {
            return Err(CycleDefect::RepeatedVertex { vertex: v });
        }
        seen[v as usize] = true;
    }
    for i in 0..n {
        let u = cycle.order[i];
        let v = cycle.order[(i + 1) % n];
        if !g.has_edge(u, v) {
            return Err(CycleDefect::MissingEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
    }
    Ok(())
}

/// True if `cycle` is a Hamilton cycle of `g`. Use [`check_hamilton_cycle`]
/// for the reason when it is not.
pub fn verify_hamilton_cycle(g: &Graph, cycle: &HamiltonCycle) -> bool {
    check_hamilton_cycle(g, cycle).is_ok()
}

/// A vertex-disjoint collection of simple paths, stored as vertex sequences.
///
/// Single-vertex paths are allowed; they carry no edges but do occupy their
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct LinearForest {
    pub paths: Vec<Vec<u32>>,
}

impl LinearForest {
    pub fn new() -> Self {
        LinearForest { paths: Vec::new() }
    }

    pub fn from_paths(paths: Vec<Vec<u32>>) -> Self {
        LinearForest { paths }
    }

    /// Forest consisting of one single-vertex path.
    pub fn singleton(v: u32) -> Self {
        LinearForest {
            paths: vec![vec![v]],
        }
    }

    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(|p| p.len().saturating_sub(1)).sum()
    }

    /// All edges of the forest in canonical form.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for p in &self.paths {
            for w in p.windows(2) {
                out.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        out
    }

    /// Every vertex appearing on some path (including single-vertex paths).
    pub fn vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.paths.iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of paths, counting single-vertex paths.
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Degree of each vertex within the forest, as a dense vector.
    pub fn degrees(&self, n: usize) -> Vec<u8> {
        let mut deg = vec![0u8; n];
        for p in &self.paths {
            let k = p.len();
            for (i, &v) in p.iter().enumerate() {
                if k == 1 {
                    continue;
                }
                deg[v as usize] += if i == 0 || i == k - 1 { 1 } else { 2 };
            }
        }
        deg
    }

    /// Structural validity: paths are simple, vertex-disjoint, in range.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for p in &self.paths {
            if p.is_empty() {
                return false;
            }
            for &v in p {
                if v as usize >= n || seen[v as usize] {
                    return false;
                }
                seen[v as usize] = true;
            }
        }
        true
    }
}

/// True if `edges` forms a linear forest on `0..n`: every degree is at most 2
/// and no cycle exists. Out-of-range or duplicated edges return false.
pub fn is_linear_forest(n: usize, edges: &[(u32, u32)]) -> bool {
    let mut deg = vec![0u32; n];
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], v: u32) -> u32 {
        let mut root = v;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = v;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut sorted: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v || u as usize >= n || v as usize >= n {
            return false;
        }
        sorted.push((u.min(v), u.max(v)));
    }
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for &(u, v) in &sorted {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        if deg[u as usize] > 2 || deg[v as usize] > 2 {
            return false;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru as usize] = rv;
    }
    true
}

/// Converts an edge set already known to have max degree <= 2 and no cycles
/// into explicit paths. Panics (debug) if the edge set is not a linear forest.
pub fn paths_from_forest_edges(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    debug_assert!(is_linear_forest(n, edges));
    let mut nbr: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        nbr[u as usize].push(v);
        nbr[v as usize].push(u);
    }
    let mut visited = vec![false; n];
    let mut paths = Vec::new();
    for start in 0..n as u32 {
        if visited[start as usize] || nbr[start as usize].len() != 1 {
            continue;
        }
        // Walk from one endpoint of a path to the other.
        let mut path = vec![start];
        visited[start as usize] = true;
        let mut prev = start;
        let mut cur = nbr[start as usize][0];
        loop {
            path.push(cur);
            visited[cur as usize] = true;
            let next = nbr[cur as usize].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        paths.push(path);
    }
    paths
}

/// A path of two edges sharing a centre vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cherry {
    pub center: u32,
    pub leaves: (u32, u32),
}

/// A claimed cover of a graph by Hamilton cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub n: usize,
    pub graph_hash: String,
    pub cycles: Vec<HamiltonCycle>,
    /// The optimal count `ceil(max_degree / 2)` recorded at construction.
    /// `None` for certificates loaded from disk; verification recomputes it.
    pub target_count: Option<usize>,
}

/// One invalid cycle inside a cover, with its defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleIssue {
    pub index: usize,
    pub defect: CycleDefect,
}

/// Full result of checking a cover certificate against a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Every cycle is a Hamilton cycle of the graph and every edge is covered.
    pub valid: bool,
    /// Valid and the cycle count equals `ceil(max_degree / 2)`.
    pub optimal: bool,
    pub cycle_count: usize,
    /// `ceil(max_degree / 2)` of the graph being verified.
    pub target_count: usize,
    /// Whether the certificate hash matches the graph.
    pub hash_matches: bool,
    pub invalid_cycles: Vec<CycleIssue>,
    pub uncovered_edges: Vec<(u32, u32)>,
}

/// Checks a cover certificate. Never fails: all problems are reported in the
/// returned structure.
pub fn verify_cover(g: &Graph, cert: &CoverCertificate) -> VerificationReport {
    let target_count = g.max_degree().div_ceil(2);
    let hash_matches = cert.n == g.vertex_count() && cert.graph_hash == graph_hash(g);
    let mut invalid_cycles = Vec::new();
    let mut covered = vec![false; g.edge_count()];
    // Map canonical edge -> index for coverage marking.
    let edge_index: std::collections::BTreeMap<(u32, u32), usize> =
        g.edges().enumerate().map(|(i, e)| (e, i)).collect();
    for (index, cycle) in cert.cycles.iter().enumerate() {
        match check_hamilton_cycle(g, cycle) {
            Ok(()) => {
                for e in cycle.edges() {
                    if let Some(&i) = edge_index.get(&e) {
                        covered[i] = true;
                    }
                }
            }
            Err(defect) => invalid_cycles.push(CycleIssue { index, defect }),
        }
    }
    let uncovered_edges: Vec<(u32, u32)> = g
        .edges()
        .enumerate()
        .filter(|&(i, _)| !covered[i])
        .map(|(_, e)| e)
        .collect();
    let valid = hash_matches && invalid_cycles.is_empty() && uncovered_edges.is_empty();
    let optimal = valid && cert.cycles.len() == target_count;
    VerificationReport {
        valid,
        optimal,
        cycle_count: cert.cycles.len(),
        target_count,
        hash_matches,
        invalid_cycles,
        uncovered_edges,
    }
}

/// Builds a certificate for `g` from cycles produced by the pipeline.
pub fn make_certificate(g: &Graph, cycles: Vec<HamiltonCycle>) -> CoverCertificate {
    CoverCertificate {
        n: g.vertex_count(),
        graph_hash: graph_hash(g),
        target_count: Some(g.max_degree().div_ceil(2)),
        cycles,
    }
}

/// Convenience constructors for standard test graphs.
pub mod standard {
    use super::{build_graph, Graph};

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        build_graph(n, &edges).expect("cycle edges are valid")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        build_graph(n, &edges).expect("complete graph edges are valid")
    }

    /// Path graph on `n` vertices.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
        build_graph(n, &edges).expect("path edges are valid")
    }

    /// The Petersen graph: 3-regular, 10 vertices, not Hamiltonian.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
            edges.push((i, 5 + i)); // spokes
        }
        build_graph(10, &edges).expect("petersen edges are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_graph_rejects_malformed_input() {
        assert_eq!(
            build_graph(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0)),
        );
        assert_eq!(
            build_graph(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange(3)),
        );
        assert_eq!(
            build_graph(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1)),
        );
    }

    #[test]
    fn adjacency_and_degrees() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(0), 2);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.neighbors(0), &[1, 3]);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn degree_stats_histogram() {
        // Star K_{1,3}: one vertex of degree 3, three of degree 1.
        let g = build_graph(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = degree_stats(&g);
        assert_eq!(s.min, 1);
        assert_eq!(s.max, 3);
        assert!((s.mean - 1.5).abs() < 1e-12);
        assert_eq!(s.histogram, vec![0, 3, 0, 1]);
    }

    #[test]
    fn hamilton_cycle_verification() {
        let g = standard::cycle(5);
        let good = HamiltonCycle::new(vec![0, 1, 2, 3, 4]);
        assert!(verify_hamilton_cycle(&g, &good));
        // Rotation and reflection are still the same cycle.
        let rotated = HamiltonCycle::new(vec![2, 3, 4, 0, 1]);
        assert!(verify_hamilton_cycle(&g, &rotated));
        let reflected = HamiltonCycle::new(vec![0, 4, 3, 2, 1]);
        assert!(verify_hamilton_cycle(&g, &reflected));

        let bad_edge = HamiltonCycle::new(vec![0, 2, 1, 3, 4]);
        assert_eq!(
            check_hamilton_cycle(&g, &bad_edge),
            Err(CycleDefect::MissingEdge { u: 0, v: 2 })
        );
        let short = HamiltonCycle::new(vec![0, 1, 2]);
        assert!(matches!(
            check_hamilton_cycle(&g, &short),
            Err(CycleDefect::WrongLength { .. })
        ));
        let repeated = HamiltonCycle::new(vec![0, 1, 2, 3, 0]);
        assert_eq!(
            check_hamilton_cycle(&g, &repeated),
            Err(CycleDefect::RepeatedVertex { vertex: 0 })
        );
    }

    #[test]
    fn linear_forest_checks() {
        // Two disjoint paths.
        assert!(is_linear_forest(6, &[(0, 1), (1, 2), (3, 4)]));
        // Degree 3 at vertex 1.
        assert!(!is_linear_forest(6, &[(0, 1), (1, 2), (1, 3)]));
        // Triangle.
        assert!(!is_linear_forest(3, &[(0, 1), (1, 2), (2, 0)]));
        // Empty edge set.
        assert!(is_linear_forest(4, &[]));
        // Duplicate edge.
        assert!(!is_linear_forest(3, &[(0, 1), (1, 0)]));
    }

    #[test]
    fn forest_paths_roundtrip() {
        let edges = [(0, 1), (1, 2), (4, 5)];
        let paths = paths_from_forest_edges(6, &edges);
        let f = LinearForest::from_paths(paths);
        assert!(f.is_valid(6));
        let mut got = f.edges();
        got.sort_unstable();
        assert_eq!(got, vec![(0, 1), (1, 2), (4, 5)]);
        assert_eq!(f.path_count(), 2);
        let deg = f.degrees(6);
        assert_eq!(deg[1], 2);
        assert_eq!(deg[3], 0);
    }

    #[test]
    fn verify_cover_reports_problems() {
        let g = standard::cycle(4);
        let cert = make_certificate(&g, vec![HamiltonCycle::new(vec![0, 1, 2, 3])]);
        let report = verify_cover(&g, &cert);
        assert!(report.valid);
        assert!(report.optimal);
        assert_eq!(report.target_count, 1);

        // Certificate against the wrong graph.
        let other = standard::cycle(5);
        let report = verify_cover(&other, &cert);
        assert!(!report.valid);
        assert!(!report.hash_matches);

        // Missing coverage: K4 needs 2 cycles, one leaves a perfect matching.
        let k4 = standard::complete(4);
        let cert = make_certificate(&k4, vec![HamiltonCycle::new(vec![0, 1, 2, 3])]);
        let report = verify_cover(&k4, &cert);
        assert!(!report.valid);
        assert_eq!(report.uncovered_edges, vec![(0, 2), (1, 3)]);
        assert_eq!(report.target_count, 2);
    }

    #[test]
    fn hash_is_stable_and_input_order_independent() {
        let g1 = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        let g2 = build_graph(4, &[(3, 2), (1, 0)]).unwrap();
        assert_eq!(graph_hash(&g1), graph_hash(&g2));
        let g3 = build_graph(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        assert_ne!(graph_hash(&g1), graph_hash(&g3));
    }

    #[test]
    fn petersen_shape() {
        let p = standard::petersen();
        assert_eq!(p.vertex_count(), 10);
        assert_eq!(p.edge_count(), 15);
        assert_eq!(p.max_degree(), 3);
        assert_eq!(p.min_degree(), 3);
    }
}
