//! Linear forest machinery: bipartite edge colourings, cherry matchings,
//! core-aware decompositions, the forest-merging step, and an approximate
//! linear arboricity construction with an exhaustive small-case oracle.
//!
//! A linear forest is a vertex-disjoint union of simple paths. Any graph of
//! maximum degree `D` needs at least `ceil(D/2)` linear forests to partition
//! its edges; the constructions here come within a small factor of that and
//! hit it exactly on favourable instances.

use crate::graph::{
    is_linear_forest, paths_from_forest_edges, Cherry, Graph, LinearForest,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForestError {
    #[error("graph is not bipartite with the given sides: edge ({}, {}) does not cross{}",
        offending_edge.0, offending_edge.1,
        if odd_cycle.is_some() { " (odd cycle witness attached)" } else { "" })]
    NotBipartite {
        offending_edge: (u32, u32),
        /// Present when the graph itself contains an odd cycle, i.e. no
        /// bipartition could work.
        odd_cycle: Option<Vec<u32>>,
    },
    #[error("precondition violated: {detail}")]
    PreconditionViolated { detail: String, vertex: Option<u32> },
    #[error("construction infeasible at stage {stage}: {detail}")]
    ConstructionInfeasible { stage: String, detail: String },
    #[error("no forest with both endpoints isolated for edge ({}, {})", edge.0, edge.1)]
    NoIsolatedForest { edge: (u32, u32) },
    #[error("instance too large: {actual} exceeds limit {limit}")]
    TooLarge { limit: usize, actual: usize },
}

/// Two disjoint vertex sides. Their union need not cover the whole vertex
/// range, but operations require every edge to have both endpoints inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

/// Which side a vertex is on: 0 = A, 1 = B, 2 = neither.
fn side_map(n: usize, bp: &Bipartition) -> Result<Vec<u8>, ForestError> {
    let mut side = vec![2u8; n];
    for &v in &bp.a {
        if v as usize >= n {
            return Err(ForestError::PreconditionViolated {
                detail: format!("side A vertex {v} out of range"),
                vertex: Some(v),
            });
        }
        side[v as usize] = 0;
    }
    for &v in &bp.b {
        if v as usize >= n {
            return Err(ForestError::PreconditionViolated {
                detail: format!("side B vertex {v} out of range"),
                vertex: Some(v),
            });
        }
        if side[v as usize] == 0 {
            return Err(ForestError::PreconditionViolated {
                detail: format!("vertex {v} appears on both sides"),
                vertex: Some(v),
            });
        }
        side[v as usize] = 1;
    }
    Ok(side)
}

/// Searches for an odd cycle; `None` means the graph is bipartite.
fn find_odd_cycle(g: &Graph) -> Option<Vec<u32>> {
    let n = g.vertex_count();
    let mut colour = vec![u8::MAX; n];
    let mut parent = vec![u32::MAX; n];
    for start in 0..n as u32 {
        if colour[start as usize] != u8::MAX {
            continue;
        }
        colour[start as usize] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if colour[v as usize] == u8::MAX {
                    colour[v as usize] = 1 - colour[u as usize];
                    parent[v as usize] = u;
                    queue.push_back(v);
                } else if colour[v as usize] == colour[u as usize] {
                    // Walk both vertices up to their common ancestor.
                    let mut pu = vec![u];
                    let mut pv = vec![v];
                    let mut cu = u;
                    let mut cv = v;
                    let mut seen = std::collections::BTreeMap::new();
                    seen.insert(cu, 0usize);
                    while parent[cu as usize] != u32::MAX {
                        cu = parent[cu as usize];
                        pu.push(cu);
                        seen.insert(cu, pu.len() - 1);
                    }
                    while !seen.contains_key(&cv) {
                        cv = parent[cv as usize];
                        pv.push(cv);
                    }
                    let cut = seen[&cv];
                    let mut cycle: Vec<u32> = pu[..=cut].to_vec();
                    let mut tail: Vec<u32> = pv;
                    tail.pop(); // common ancestor already included
                    tail.reverse();
                    cycle.extend(tail);
                    debug_assert!(cycle.len() % 2 == 1);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn require_crossing(g: &Graph, side: &[u8]) -> Result<(), ForestError> {
    for (u, v) in g.edges() {
        let (su, sv) = (side[u as usize], side[v as usize]);
        if su == 2 || sv == 2 || su == sv {
            return Err(ForestError::NotBipartite {
                offending_edge: (u, v),
                odd_cycle: find_odd_cycle(g),
            });
        }
    }
    Ok(())
}

/// Mutable adjacency used by the colouring rounds.
struct MutAdj {
    nbr: Vec<Vec<u32>>,
}

impl MutAdj {
    fn of(g: &Graph) -> Self {
        let nbr = (0..g.vertex_count() as u32)
            .map(|v| g.neighbors(v).to_vec())
            .collect();
        MutAdj { nbr }
    }

    fn degree(&self, v: u32) -> usize {
        self.nbr[v as usize].len()
    }

    fn remove_edge(&mut self, u: u32, v: u32) {
        for (x, y) in [(u, v), (v, u)] {
            let row = &mut self.nbr[x as usize];
            if let Ok(i) = row.binary_search(&y) {
                row.remove(i);
            }
        }
    }
}

/// One round's matching that saturates a required vertex set, built from two
/// one-sided saturating matchings via component-wise selection.
fn matching_saturating(
    adj: &MutAdj,
    side: &[u8],
    required: &[bool],
) -> Option<Vec<(u32, u32)>> {
    let n = adj.nbr.len();
    // Kuhn augmenting search saturating required vertices of one side.
    let one_sided = |from_side: u8| -> Option<Vec<u32>> {
        let mut partner = vec![u32::MAX; n]; // for both sides
        let mut visited = vec![0u32; n];
        let mut stamp = 0u32;
        fn try_augment(
            adj: &MutAdj,
            v: u32,
            partner: &mut [u32],
            visited: &mut [u32],
            stamp: u32,
        ) -> bool {
            for &w in &adj.nbr[v as usize] {
                if visited[w as usize] == stamp {
                    continue;
                }
                visited[w as usize] = stamp;
                if partner[w as usize] == u32::MAX
                    || try_augment(adj, partner[w as usize], partner, visited, stamp)
                {
                    partner[w as usize] = v;
                    partner[v as usize] = w;
                    return true;
                }
            }
            false
        }
        for v in 0..n as u32 {
            if side[v as usize] == from_side && required[v as usize] {
                stamp += 1;
                if !try_augment(adj, v, &mut partner, &mut visited, stamp) {
                    return None;
                }
            }
        }
        Some(partner)
    };
    let pa = one_sided(0)?;
    let pb = one_sided(1)?;
    // Union of the two matchings: components are alternating paths and
    // cycles; pick a sub-matching per component covering every required
    // vertex on it.
    let mut union_nbr: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut add = |x: u32, y: u32| {
        if !union_nbr[x as usize].contains(&y) {
            union_nbr[x as usize].push(y);
            union_nbr[y as usize].push(x);
        }
    };
    for v in 0..n as u32 {
        if pa[v as usize] != u32::MAX && side[v as usize] == 0 {
            add(v, pa[v as usize]);
        }
        if pb[v as usize] != u32::MAX && side[v as usize] == 1 {
            add(v, pb[v as usize]);
        }
    }
    let mut chosen: Vec<(u32, u32)> = Vec::new();
    let mut visited = vec![false; n];
    for start in 0..n as u32 {
        if visited[start as usize] || union_nbr[start as usize].is_empty() {
            continue;
        }
        if union_nbr[start as usize].len() == 2 {
            continue; // handle path endpoints first; cycles later
        }
        // Path component starting at `start`.
        let mut path = vec![start];
        visited[start as usize] = true;
        let mut prev = start;
        let mut cur = union_nbr[start as usize][0];
        loop {
            path.push(cur);
            visited[cur as usize] = true;
            match union_nbr[cur as usize].iter().copied().find(|&w| w != prev) {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        let sel = select_path_matching(&path, required)?;
        chosen.extend(sel);
    }
    for start in 0..n as u32 {
        if visited[start as usize] || union_nbr[start as usize].is_empty() {
            continue;
        }
        // Cycle component: walk it and take alternate edges.
        let mut cyc = vec![start];
        visited[start as usize] = true;
        let mut prev = start;
        let mut cur = union_nbr[start as usize][0];
        while cur != start {
            cyc.push(cur);
            visited[cur as usize] = true;
            let next = union_nbr[cur as usize]
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("cycle continues");
            prev = cur;
            cur = next;
        }
        debug_assert!(cyc.len() % 2 == 0);
        for i in (0..cyc.len()).step_by(2) {
            chosen.push((cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }
    Some(chosen)
}

/// Picks pairwise non-adjacent edges along `path` covering every vertex with
/// `required` set. Forward feasibility scan over the two states of the
/// previous edge.
fn select_path_matching(path: &[u32], required: &[bool]) -> Option<Vec<(u32, u32)>> {
    let k = path.len() - 1; // number of edges
    if k == 0 {
        return if required[path[0] as usize] {
            None
        } else {
            Some(Vec::new())
        };
    }
    // states: after deciding edge i, was it taken? Track reachable states
    // with parent pointers for reconstruction.
    let mut reach: Vec<[bool; 2]> = vec![[false; 2]; k];
    let mut from: Vec<[u8; 2]> = vec![[u8::MAX; 2]; k];
    for take in [true, false] {
        // Vertex 0 must be covered if required: only edge 0 can do it.
        if required[path[0] as usize] && !take {
            continue;
        }
        reach[0][take as usize] = true;
    }
    for i in 1..k {
        for prev in 0..2usize {
            if !reach[i - 1][prev] {
                continue;
            }
            for take in [true, false] {
                if take && prev == 1 {
                    continue; // adjacent edges share vertex i
                }
                // Vertex i is covered by edge i-1 or edge i.
                if required[path[i] as usize] && prev == 0 && !take {
                    continue;
                }
                if !reach[i][take as usize] {
                    reach[i][take as usize] = true;
                    from[i][take as usize] = prev as u8;
                }
            }
        }
    }
    let mut last: Option<usize> = None;
    for take in [1usize, 0] {
        if reach[k - 1][take] && (take == 1 || !required[path[k] as usize]) {
            last = Some(take);
            break;
        }
    }
    let mut state = last?;
    let mut picks = vec![false; k];
    let mut i = k - 1;
    loop {
        picks[i] = state == 1;
        if i == 0 {
            break;
        }
        state = from[i][state] as usize;
        i -= 1;
    }
    Some(
        picks
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t)
            .map(|(i, _)| (path[i], path[i + 1]))
            .collect(),
    )
}

/// Partitions the edges of a bipartite graph into exactly `max_degree`
/// matchings.
///
/// Each round finds a matching that saturates every current maximum-degree
/// vertex (two one-sided saturating matchings combined component-wise), so
/// the maximum degree drops by exactly one per round. Empty matchings appear
/// only for the edgeless graph, which yields an empty list.
pub fn konig_edge_coloring(
    g: &Graph,
    bp: &Bipartition,
) -> Result<Vec<Vec<(u32, u32)>>, ForestError> {
    let side = side_map(g.vertex_count(), bp)?;
    require_crossing(g, &side)?;
    let mut adj = MutAdj::of(g);
    let mut colours: Vec<Vec<(u32, u32)>> = Vec::new();
    let delta = g.max_degree();
    for round in 0..delta {
        let cur = (0..g.vertex_count() as u32)
            .map(|v| adj.degree(v))
            .max()
            .unwrap_or(0);
        debug_assert_eq!(cur, delta - round);
        let required: Vec<bool> = (0..g.vertex_count() as u32)
            .map(|v| adj.degree(v) == cur)
            .collect();
        let matching = matching_saturating(&adj, &side, &required).ok_or_else(|| {
            ForestError::ConstructionInfeasible {
                stage: "saturating matching".into(),
                detail: "no matching saturating all maximum-degree vertices".into(),
            }
        })?;
        for &(u, v) in &matching {
            adj.remove_edge(u, v);
        }
        let mut canon: Vec<(u32, u32)> = matching
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        canon.sort_unstable();
        colours.push(canon);
    }
    debug_assert!((0..g.vertex_count() as u32).all(|v| adj.degree(v) == 0));
    Ok(colours)
}

/// A system of vertex-disjoint cherries whose centres cover side B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CherryMatching {
    pub cherries: Vec<Cherry>,
}

impl CherryMatching {
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(2 * self.cherries.len());
        for c in &self.cherries {
            let (l0, l1) = c.leaves;
            out.push((c.center.min(l0), c.center.max(l0)));
            out.push((c.center.min(l1), c.center.max(l1)));
        }
        out
    }
}

/// Finds vertex-disjoint cherries centred at every B-vertex with leaves in A.
///
/// Requires the bipartite degree condition `deg(b) >= 2 deg(a)` for all
/// `a` in A and `b` in B (and `deg(b) >= 2`); under it, a matching argument
/// on two copies of B guarantees the cherries exist.
pub fn cherry_matching(g: &Graph, bp: &Bipartition) -> Result<CherryMatching, ForestError> {
    let side = side_map(g.vertex_count(), bp)?;
    require_crossing(g, &side)?;
    let max_a = bp.a.iter().map(|&a| g.degree(a)).max().unwrap_or(0);
    for &b in &bp.b {
        let d = g.degree(b);
        if d < 2 || d < 2 * max_a {
            return Err(ForestError::PreconditionViolated {
                detail: format!(
                    "centre {b} has degree {d}, needs at least max(2, 2 * max A-degree = {})",
                    2 * max_a
                ),
                vertex: Some(b),
            });
        }
    }
    // Match two pseudo-copies of each B-vertex into A with Kuhn augmentation.
    let n = g.vertex_count();
    let mut a_partner: Vec<u32> = vec![u32::MAX; n]; // A vertex -> copy id
    let copies: Vec<u32> = bp.b.iter().flat_map(|&b| [2 * b, 2 * b + 1]).collect();
    let mut copy_leaf: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
    fn augment(
        g: &Graph,
        copy: u32,
        a_partner: &mut [u32],
        copy_leaf: &mut std::collections::BTreeMap<u32, u32>,
        visited: &mut std::collections::BTreeSet<u32>,
    ) -> bool {
        let b = copy / 2;
        for &a in g.neighbors(b) {
            if visited.contains(&a) {
                continue;
            }
            // The sibling copy may not reuse this leaf.
            if copy_leaf.get(&(copy ^ 1)) == Some(&a) {
                continue;
            }
            visited.insert(a);
            let holder = a_partner[a as usize];
            if holder == u32::MAX
                || augment(g, holder, a_partner, copy_leaf, visited)
            {
                if let Some(old) = copy_leaf.insert(copy, a) {
                    debug_assert_ne!(old, a);
                }
                a_partner[a as usize] = copy;
                return true;
            }
        }
        false
    }
    for &copy in &copies {
        let mut visited = std::collections::BTreeSet::new();
        if !augment(g, copy, &mut a_partner, &mut copy_leaf, &mut visited) {
            return Err(ForestError::ConstructionInfeasible {
                stage: "cherry matching".into(),
                detail: format!(
                    "could not match copy of centre {} despite degree condition",
                    copy / 2
                ),
            });
        }
    }
    let mut cherries = Vec::with_capacity(bp.b.len());
    for &b in &bp.b {
        let l0 = copy_leaf[&(2 * b)];
        let l1 = copy_leaf[&(2 * b + 1)];
        debug_assert_ne!(l0, l1);
        cherries.push(Cherry {
            center: b,
            leaves: (l0.min(l1), l0.max(l1)),
        });
    }
    Ok(CherryMatching { cherries })
}

/// A list of linear forests with a provenance tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestCollection {
    pub provenance: Provenance,
    pub forests: Vec<LinearForest>,
}

/// Which pipeline stage produced a forest collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    F0,
    F1,
    Merged,
    Generic,
}

impl ForestCollection {
    pub fn new(provenance: Provenance, forests: Vec<LinearForest>) -> Self {
        ForestCollection {
            provenance,
            forests,
        }
    }

    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    /// All edges across all forests.
    pub fn all_edges(&self) -> Vec<(u32, u32)> {
        self.forests.iter().flat_map(|f| f.edges()).collect()
    }

    /// Degree of each vertex in the union of all forests.
    pub fn union_degrees(&self, n: usize) -> Vec<u32> {
        let mut deg = vec![0u32; n];
        for f in &self.forests {
            for (u, v) in f.edges() {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Every forest is structurally valid and forests are edge-disjoint.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.forests {
            if !f.is_valid(n) {
                return false;
            }
            for e in f.edges() {
                if !seen.insert(e) {
                    return false;
                }
            }
        }
        true
    }
}

/// Fraction of the maximum degree defining the well-attached B-vertices that
/// receive a cherry in every colour round.
const HIGH_ATTACHMENT_RATIO: f64 = 0.25;

/// Decomposes a graph whose edges all touch the side-B "core" into exactly
/// `ceil(max_degree / 2)` linear forests.
///
/// Preconditions: side A is independent; every vertex has at most
/// `core_ratio * max_degree` neighbours inside B. The construction colours
/// the B-internal edges into matchings, tops well-attached B-vertices up to
/// degree two per matching via edge-disjoint cherry systems, and splits the
/// remaining A-B edges through a two-copies-of-B doubling followed by a
/// bipartite edge colouring.
pub fn decompose_with_core(
    g: &Graph,
    bp: &Bipartition,
    core_ratio: f64,
) -> Result<ForestCollection, ForestError> {
    let n = g.vertex_count();
    let side = side_map(n, bp)?;
    let delta = g.max_degree();
    if g.edge_count() == 0 {
        return Ok(ForestCollection::new(Provenance::Generic, Vec::new()));
    }
    // Side A independent; every edge inside A ∪ B.
    for (u, v) in g.edges() {
        let (su, sv) = (side[u as usize], side[v as usize]);
        if su == 2 || sv == 2 {
            let w = if su == 2 { u } else { v };
            return Err(ForestError::PreconditionViolated {
                detail: format!("edge ({u}, {v}) touches vertex {w} outside both sides"),
                vertex: Some(w),
            });
        }
        if su == 0 && sv == 0 {
            return Err(ForestError::PreconditionViolated {
                detail: format!("side A is not independent: edge ({u}, {v})"),
                vertex: Some(u),
            });
        }
    }
    let in_b = |v: u32| side[v as usize] == 1;
    let cap = core_ratio * delta as f64;
    for v in 0..n as u32 {
        let db = g.neighbors(v).iter().filter(|&&w| in_b(w)).count();
        if db as f64 > cap {
            return Err(ForestError::PreconditionViolated {
                detail: format!(
                    "vertex {v} has {db} neighbours in the core, above {cap:.2}"
                ),
                vertex: Some(v),
            });
        }
    }

    // Stage 1: greedy proper edge colouring of the B-internal edges.
    let bb_edges: Vec<(u32, u32)> = g
        .edges()
        .filter(|&(u, v)| in_b(u) && in_b(v))
        .collect();
    let matchings_bb = greedy_edge_colouring(g, &bb_edges);
    let t = matchings_bb.len();

    // Stage 2: well-attached B-vertices get a cherry in every matching round.
    let high_threshold = HIGH_ATTACHMENT_RATIO * delta as f64;
    let b_high: Vec<u32> = bp
        .b
        .iter()
        .copied()
        .filter(|&b| {
            let da = g.neighbors(b).iter().filter(|&&w| !in_b(w)).count();
            da as f64 >= high_threshold
        })
        .collect();
    let mut cherry_rounds: Vec<CherryMatching> = Vec::with_capacity(t);
    let mut cross_used: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
    if t > 0 && !b_high.is_empty() {
        // Residual cross graph between A and the well-attached centres.
        let mut residual: Vec<(u32, u32)> = g
            .edges()
            .filter(|&(u, v)| {
                (in_b(u) != in_b(v)) && {
                    let b = if in_b(u) { u } else { v };
                    b_high.binary_search(&b).is_ok() || b_high.contains(&b)
                }
            })
            .collect();
        let a_side: Vec<u32> = bp.a.clone();
        for round in 0..t {
            let rg = Graph::from_edges_unchecked(n, residual.clone());
            let rbp = Bipartition {
                a: a_side.clone(),
                b: b_high.clone(),
            };
            let cm = cherry_matching(&rg, &rbp).map_err(|e| match e {
                ForestError::PreconditionViolated { detail, vertex } => {
                    ForestError::ConstructionInfeasible {
                        stage: format!("cherry round {round}"),
                        detail,
                    }
                    .tag_vertex(vertex)
                }
                other => other,
            })?;
            for e in cm.edges() {
                cross_used.insert(e);
                residual.retain(|&r| r != e);
            }
            cherry_rounds.push(cm);
        }
    } else if t > 0 {
        for _ in 0..t {
            cherry_rounds.push(CherryMatching { cherries: Vec::new() });
        }
    }

    // Stage 3: forests F_i: matching M_i plus cherry edges topping each
    // well-attached centre up to degree exactly two.
    let mut forests: Vec<LinearForest> = Vec::new();
    let mut consumed: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
    for (mi, cm) in matchings_bb.iter().zip(cherry_rounds.iter()) {
        let mut edges: Vec<(u32, u32)> = mi.clone();
        let mut deg_in_mi = vec![0u8; n];
        for &(u, v) in mi {
            deg_in_mi[u as usize] += 1;
            deg_in_mi[v as usize] += 1;
        }
        for c in &cm.cherries {
            let want = 2 - deg_in_mi[c.center as usize].min(2);
            let (l0, l1) = c.leaves;
            for leaf in [l0, l1].into_iter().take(want as usize) {
                edges.push((c.center.min(leaf), c.center.max(leaf)));
            }
        }
        debug_assert!(is_linear_forest(n, &edges));
        for &e in &edges {
            consumed.insert(e);
        }
        forests.push(LinearForest::from_paths(paths_from_forest_edges(n, &edges)));
    }

    // Stage 4: remaining edges are A-B only; double B and colour.
    let remaining: Vec<(u32, u32)> = g.edges().filter(|e| !consumed.contains(e)).collect();
    debug_assert!(remaining
        .iter()
        .all(|&(u, v)| in_b(u) != in_b(v)));
    let half = delta.div_ceil(2);
    if t > half {
        return Err(ForestError::ConstructionInfeasible {
            stage: "accounting".into(),
            detail: format!(
                "core-internal colouring used {t} matchings, above the ceil(degree/2) = {half} budget"
            ),
        });
    }
    let k = half - t;
    let mut tail = decompose_cross_by_doubling(n, &remaining, &side, k)?;
    forests.append(&mut tail);
    debug_assert_eq!(forests.len(), half);
    Ok(ForestCollection::new(Provenance::Generic, forests))
}

impl ForestError {
    fn tag_vertex(self, vertex: Option<u32>) -> ForestError {
        match (self, vertex) {
            (ForestError::ConstructionInfeasible { stage, detail }, Some(v)) => {
                ForestError::ConstructionInfeasible {
                    stage,
                    detail: format!("{detail} (vertex {v})"),
                }
            }
            (e, _) => e,
        }
    }
}

/// Splits edges that all cross between A and B into exactly `k` linear
/// forests by giving each B-vertex two slots of capacity `k` and colouring
/// the resulting bipartite graph.
fn decompose_cross_by_doubling(
    n: usize,
    cross: &[(u32, u32)],
    side: &[u8],
    k: usize,
) -> Result<Vec<LinearForest>, ForestError> {
    if cross.is_empty() {
        return Ok(vec![LinearForest::new(); k]);
    }
    if k == 0 {
        return Err(ForestError::ConstructionInfeasible {
            stage: "doubling".into(),
            detail: "no forest budget left for the crossing edges".into(),
        });
    }
    let mut deg = vec![0usize; n];
    for &(u, v) in cross {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    for v in 0..n as u32 {
        let limit = if side[v as usize] == 1 { 2 * k } else { k };
        if deg[v as usize] > limit {
            return Err(ForestError::ConstructionInfeasible {
                stage: "doubling".into(),
                detail: format!(
                    "vertex {v} has {} crossing edges, above its capacity {limit}",
                    deg[v as usize]
                ),
            });
        }
    }
    // Doubled graph: A keeps its ids; B-vertex b becomes n + 2b / n + 2b + 1.
    let mut seen_at = vec![0usize; n];
    let mut dedges: Vec<(u32, u32)> = Vec::with_capacity(cross.len());
    for &(u, v) in cross {
        let (a, b) = if side[u as usize] == 0 { (u, v) } else { (v, u) };
        let used = seen_at[b as usize];
        let copy = if used < deg[b as usize].div_ceil(2) { 0 } else { 1 };
        seen_at[b as usize] += 1;
        dedges.push((a, (n + 2 * b as usize + copy) as u32));
    }
    let dn = n + 2 * n;
    let dg = Graph::from_edges_unchecked(dn, dedges);
    let dbp = Bipartition {
        a: (0..n as u32).filter(|&v| side[v as usize] == 0).collect(),
        b: (n as u32..dn as u32).collect(),
    };
    let colours = konig_edge_coloring(&dg, &dbp)?;
    if colours.len() > k {
        return Err(ForestError::ConstructionInfeasible {
            stage: "doubling".into(),
            detail: format!("needed {} colours, budget {k}", colours.len()),
        });
    }
    let mut out = Vec::with_capacity(k);
    for colour in colours {
        let edges: Vec<(u32, u32)> = colour
            .iter()
            .map(|&(x, y)| {
                let (a, copy) = if x < n as u32 { (x, y) } else { (y, x) };
                let b = ((copy as usize - n) / 2) as u32;
                (a.min(b), a.max(b))
            })
            .collect();
        debug_assert!(is_linear_forest(n, &edges));
        out.push(LinearForest::from_paths(paths_from_forest_edges(n, &edges)));
    }
    out.resize(k, LinearForest::new());
    Ok(out)
}

/// Greedy proper edge colouring; edges are processed from busiest endpoints
/// to least busy, ties broken lexicographically. Uses at most
/// `2 * max_degree - 1` colours.
fn greedy_edge_colouring(g: &Graph, edges: &[(u32, u32)]) -> Vec<Vec<(u32, u32)>> {
    let mut order: Vec<(u32, u32)> = edges.to_vec();
    order.sort_by_key(|&(u, v)| {
        (
            std::cmp::Reverse(g.degree(u).max(g.degree(v))),
            u,
            v,
        )
    });
    let n = g.vertex_count();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut classes: Vec<Vec<(u32, u32)>> = Vec::new();
    for (u, v) in order {
        let mut c = 0usize;
        while used[u as usize].contains(&c) || used[v as usize].contains(&c) {
            c += 1;
        }
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push((u, v));
        used[u as usize].push(c);
        used[v as usize].push(c);
    }
    for class in classes.iter_mut() {
        class.sort_unstable();
    }
    classes
}

/// Inserts every edge of `h` into some forest of the collection in which both
/// endpoints are currently isolated.
///
/// Preconditions: the collection holds at least `4d + 1` forests, and every
/// vertex of `h` has degree at most `d` both in `h` and in the union of the
/// collection. A counting argument then guarantees a suitable forest always
/// exists; [`ForestError::NoIsolatedForest`] is a guarded assertion for the
/// relaxed-configuration case.
pub fn merge_edges_into_forests(
    collection: ForestCollection,
    h: &Graph,
    d: usize,
) -> Result<ForestCollection, ForestError> {
    let n = h.vertex_count();
    if collection.forests.len() < 4 * d + 1 {
        return Err(ForestError::PreconditionViolated {
            detail: format!(
                "need at least 4d + 1 = {} forests, have {}",
                4 * d + 1,
                collection.forests.len()
            ),
            vertex: None,
        });
    }
    let union_deg = collection.union_degrees(n);
    for v in 0..n as u32 {
        if h.degree(v) == 0 {
            continue;
        }
        if h.degree(v) > d {
            return Err(ForestError::PreconditionViolated {
                detail: format!("vertex {v} has degree {} in the new edges, above d = {d}", h.degree(v)),
                vertex: Some(v),
            });
        }
        if union_deg[v as usize] as usize > d {
            return Err(ForestError::PreconditionViolated {
                detail: format!(
                    "vertex {v} has degree {} in the existing forests, above d = {d}",
                    union_deg[v as usize]
                ),
                vertex: Some(v),
            });
        }
    }
    let mut forests = collection.forests;
    let mut degs: Vec<Vec<u8>> = forests.iter().map(|f| f.degrees(n)).collect();
    let mut edges: Vec<(u32, u32)> = h.edges().collect();
    edges.sort_by_key(|&(u, v)| (std::cmp::Reverse(h.degree(u).max(h.degree(v))), u, v));
    for (u, v) in edges {
        let slot = (0..forests.len())
            .find(|&i| degs[i][u as usize] == 0 && degs[i][v as usize] == 0);
        let Some(i) = slot else {
            return Err(ForestError::NoIsolatedForest { edge: (u, v) });
        };
        insert_isolated_edge(&mut forests[i], u, v);
        degs[i][u as usize] = 1;
        degs[i][v as usize] = 1;
    }
    Ok(ForestCollection::new(collection.provenance, forests))
}

/// Adds edge (u, v) to a forest in which both endpoints have degree zero;
/// absorbs single-vertex paths at the endpoints if present.
fn insert_isolated_edge(f: &mut LinearForest, u: u32, v: u32) {
    f.paths.retain(|p| !(p.len() == 1 && (p[0] == u || p[0] == v)));
    f.paths.push(vec![u, v]);
}

/// How the approximate arboricity construction reinserted its broken-cycle
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReinsertMechanism {
    /// No cycles were broken, nothing to reinsert.
    None,
    /// The counting-guaranteed merge into fresh spare forests.
    MergeLemma,
    /// First-fit endpoint extension across all forests (small-instance
    /// fallback, reported rather than hidden).
    FirstFit,
}

/// Result of [`approx_linear_arboricity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArbResult {
    pub forests: ForestCollection,
    /// `max(ceil((1 + eps) * max_degree / 2), 1)` for a non-empty graph.
    pub target: usize,
    /// Whether the produced count stayed within the target.
    pub achieved: bool,
    pub mechanism: ReinsertMechanism,
    /// Number of cycle edges that had to be relocated.
    pub cycle_edges_removed: usize,
}

/// Smallest maximum degree at which the merge-based reinsertion is available
/// for slack `eps`, given the worst vertex multiplicity `d` among relocated
/// edges.
pub fn merge_guarantee_threshold(eps: f64, d: usize) -> usize {
    ((2.0 * (4 * d + 1) as f64) / eps).ceil() as usize
}

/// Partitions the edges of `g` into close to `(1 + eps) * max_degree / 2`
/// linear forests.
///
/// The edges are oriented along Euler circuits so that in- and out-degrees
/// are balanced, split into `ceil(max_degree / 2)` subgraphs of maximum
/// degree two via a bipartite edge colouring of the orientation, and each
/// cycle in those subgraphs is broken at its lexicographically smallest edge.
/// Broken-off edges are reinserted into spare forests; when the spare budget
/// is below the counting guarantee the reinsertion falls back to first-fit
/// endpoint extension and says so in the result.
pub fn approx_linear_arboricity(g: &Graph, eps: f64) -> ArbResult {
    assert!(eps > 0.0, "slack must be positive");
    let n = g.vertex_count();
    let delta = g.max_degree();
    if g.edge_count() == 0 {
        return ArbResult {
            forests: ForestCollection::new(Provenance::Generic, Vec::new()),
            target: 1,
            achieved: true,
            mechanism: ReinsertMechanism::None,
            cycle_edges_removed: 0,
        };
    }
    let target = ((1.0 + eps) * delta as f64 / 2.0).ceil().max(1.0) as usize;

    // Degree-two subgraphs via balanced orientation + doubling.
    let oriented = balanced_orientation(g);
    let mut dedges: Vec<(u32, u32)> = oriented
        .iter()
        .map(|&(u, v)| (u, (n as u32) + v))
        .collect();
    dedges.sort_unstable();
    let dg = Graph::from_edges_unchecked(2 * n, dedges);
    let dbp = Bipartition {
        a: (0..n as u32).collect(),
        b: (n as u32..2 * n as u32).collect(),
    };
    let mut colours = konig_edge_coloring(&dg, &dbp).expect("doubled orientation is bipartite");
    // Iterated matchings leave the late classes near-perfect, and a
    // near-perfect class maps back to a rigid, nearly spanning forest.
    // Evening the classes out keeps slack in every forest instead.
    equalize_matchings(&mut colours, 2 * n);

    let mut forests: Vec<LinearForest> = Vec::new();
    let mut dropped: Vec<(u32, u32)> = Vec::new();
    for colour in &colours {
        let mut edges: Vec<(u32, u32)> = colour
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (u, v - n as u32);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup(); // an oriented 2-cycle cannot occur in simple graphs
        let removed = break_cycles(n, &mut edges);
        dropped.extend(removed);
        forests.push(LinearForest::from_paths(paths_from_forest_edges(n, &edges)));
    }
    let produced_base = forests.len();
    debug_assert!(produced_base <= delta.div_ceil(2));

    let cycle_edges_removed = dropped.len();
    let mechanism;
    if dropped.is_empty() {
        mechanism = ReinsertMechanism::None;
    } else {
        dropped.sort_unstable();
        let hd = Graph::from_edges_unchecked(n, dropped.clone());
        let d_need = hd.max_degree();
        let spares_allowed = target.saturating_sub(produced_base);
        if spares_allowed >= 4 * d_need + 1 {
            let spares = ForestCollection::new(
                Provenance::Generic,
                vec![LinearForest::new(); 4 * d_need + 1],
            );
            let merged = merge_edges_into_forests(spares, &hd, d_need)
                .expect("spare budget satisfies the counting precondition");
            forests.extend(
                merged
                    .forests
                    .into_iter()
                    .filter(|f| f.edge_count() > 0),
            );
            mechanism = ReinsertMechanism::MergeLemma;
        } else {
            first_fit_reinsert(n, &dropped, &mut forests);
            mechanism = ReinsertMechanism::FirstFit;
        }
    }
    let achieved = forests.len() <= target;
    debug_assert!({
        let mut all: Vec<(u32, u32)> = forests.iter().flat_map(|f| f.edges()).collect();
        all.sort_unstable();
        let mut expect: Vec<(u32, u32)> = g.edges().collect();
        expect.sort_unstable();
        all == expect
    });
    ArbResult {
        forests: ForestCollection::new(Provenance::Generic, forests),
        target,
        achieved,
        mechanism,
        cycle_edges_removed,
    }
}

/// Balances matching sizes to within one edge of each other by repeatedly
/// moving an edge from the heaviest matching to the lightest.
fn equalize_matchings(colours: &mut [Vec<(u32, u32)>], nn: usize) {
    if colours.len() < 2 {
        return;
    }
    loop {
        let mut big = 0;
        let mut small = 0;
        for (i, c) in colours.iter().enumerate() {
            if c.len() > colours[big].len() {
                big = i;
            }
            if c.len() < colours[small].len() {
                small = i;
            }
        }
        if colours[big].len() <= colours[small].len() + 1
            || !transfer_matched_edge(colours, big, small, nn)
        {
            return;
        }
    }
}

/// Swaps colours along one path of `colours[from] ∪ colours[to]` whose end
/// edges both lie in `from`, which nets the lighter class a single edge
/// while both classes stay matchings. When `from` has at least two edges
/// more than `to`, such a path always exists: components of the union are
/// alternating paths and cycles, cycles hold equally many of each, and a
/// path holds at most one extra. Returns false when no path qualifies.
fn transfer_matched_edge(
    colours: &mut [Vec<(u32, u32)>],
    from: usize,
    to: usize,
    nn: usize,
) -> bool {
    const NONE: u32 = u32::MAX;
    let mut pf = vec![NONE; nn];
    for &(u, w) in &colours[from] {
        pf[u as usize] = w;
        pf[w as usize] = u;
    }
    let mut pt = vec![NONE; nn];
    for &(u, w) in &colours[to] {
        pt[u as usize] = w;
        pt[w as usize] = u;
    }
    let norm = |a: u32, b: u32| (a.min(b), a.max(b));
    // A qualifying path starts at a vertex matched in `from` but not `to`.
    for s in 0..nn as u32 {
        if pf[s as usize] == NONE || pt[s as usize] != NONE {
            continue;
        }
        let mut from_edges: Vec<(u32, u32)> = Vec::new();
        let mut to_edges: Vec<(u32, u32)> = Vec::new();
        let mut v = s;
        let good = loop {
            let a = pf[v as usize];
            from_edges.push(norm(v, a));
            let b = pt[a as usize];
            if b == NONE {
                break true; // the far end also finishes on a `from` edge
            }
            to_edges.push(norm(a, b));
            v = b;
            if pf[v as usize] == NONE {
                break false; // finishes on a `to` edge: no net gain
            }
        };
        if good {
            let swap_f: std::collections::BTreeSet<(u32, u32)> =
                from_edges.iter().copied().collect();
            let swap_t: std::collections::BTreeSet<(u32, u32)> =
                to_edges.iter().copied().collect();
            colours[from].retain(|&(u, w)| !swap_f.contains(&norm(u, w)));
            colours[to].retain(|&(u, w)| !swap_t.contains(&norm(u, w)));
            colours[from].extend(to_edges);
            colours[to].extend(from_edges);
            return true;
        }
    }
    false
}

/// Orients every edge so each vertex has in- and out-degree at most
/// `ceil(degree / 2)`: odd-degree vertices are paired with virtual edges,
/// every component then has an Euler circuit, and edges inherit the circuit
/// direction.
fn balanced_orientation(g: &Graph) -> Vec<(u32, u32)> {
    let n = g.vertex_count();
    // Edge-indexed adjacency supporting O(1) "used" checks during the walk.
    let mut edge_id = std::collections::BTreeMap::new();
    let mut incident: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    let mut next_id = 0usize;
    for (u, v) in g.edges() {
        edge_id.insert((u, v), next_id);
        incident[u as usize].push((v, next_id));
        incident[v as usize].push((u, next_id));
        next_id += 1;
    }
    // Pair odd vertices within each component with virtual edges.
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0usize;
    for s in 0..n as u32 {
        if comp[s as usize] != usize::MAX || g.degree(s) == 0 {
            continue;
        }
        let mut stack = vec![s];
        comp[s as usize] = ncomp;
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if comp[v as usize] == usize::MAX {
                    comp[v as usize] = ncomp;
                    stack.push(v);
                }
            }
        }
        ncomp += 1;
    }
    let mut odd_by_comp: Vec<Vec<u32>> = vec![Vec::new(); ncomp];
    for v in 0..n as u32 {
        if g.degree(v) % 2 == 1 {
            odd_by_comp[comp[v as usize]].push(v);
        }
    }
    for odds in &odd_by_comp {
        debug_assert!(odds.len() % 2 == 0);
        for pair in odds.chunks(2) {
            incident[pair[0] as usize].push((pair[1], next_id));
            incident[pair[1] as usize].push((pair[0], next_id));
            next_id += 1;
        }
    }
    // Hierholzer walk per component; real edges keep the walk direction.
    let mut used = vec![false; next_id];
    let mut cursor = vec![0usize; n];
    let mut oriented: Vec<(u32, u32)> = Vec::with_capacity(g.edge_count());
    let real_edges = g.edge_count();
    for start in 0..n as u32 {
        if incident[start as usize].is_empty() {
            continue;
        }
        loop {
            // Find a vertex on the current tour with unused incident edges.
            let s = start;
            if cursor[s as usize] >= incident[s as usize].len() {
                break;
            }
            let mut stack: Vec<u32> = vec![s];
            while let Some(&u) = stack.last() {
                let row = &incident[u as usize];
                let mut advanced = false;
                while cursor[u as usize] < row.len() {
                    let (v, id) = row[cursor[u as usize]];
                    if used[id] {
                        cursor[u as usize] += 1;
                        continue;
                    }
                    used[id] = true;
                    if id < real_edges {
                        oriented.push((u, v));
                    }
                    stack.push(v);
                    advanced = true;
                    break;
                }
                if !advanced {
                    stack.pop();
                }
            }
        }
    }
    debug_assert_eq!(oriented.len(), real_edges);
    oriented
}

/// Removes the lexicographically smallest edge of every cycle in a
/// degree-at-most-two edge set; returns the removed edges.
fn break_cycles(n: usize, edges: &mut Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    let mut nbr: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges.iter() {
        nbr[u as usize].push(v);
        nbr[v as usize].push(u);
    }
    let mut on_path = vec![false; n];
    // Vertices of degree <= 1 and everything reachable from them are paths.
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| nbr[v as usize].len() == 1).collect();
    for &v in &stack {
        on_path[v as usize] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &nbr[u as usize] {
            if !on_path[v as usize] {
                on_path[v as usize] = true;
                stack.push(v);
            }
        }
    }
    let mut removed = Vec::new();
    let mut visited = vec![false; n];
    for s in 0..n as u32 {
        if visited[s as usize] || nbr[s as usize].len() != 2 || on_path[s as usize] {
            continue;
        }
        // Walk the cycle containing s, recording its edges.
        let mut cyc_edges = Vec::new();
        let mut prev = s;
        let mut cur = nbr[s as usize][0];
        visited[s as usize] = true;
        cyc_edges.push((s.min(cur), s.max(cur)));
        while cur != s {
            visited[cur as usize] = true;
            let next = nbr[cur as usize]
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("cycle continues");
            cyc_edges.push((cur.min(next), cur.max(next)));
            prev = cur;
            cur = next;
        }
        let min_edge = *cyc_edges.iter().min().expect("cycle has edges");
        removed.push(min_edge);
    }
    edges.retain(|e| !removed.contains(e));
    removed
}

/// First-fit reinsertion: place each edge into the first forest where both
/// endpoints have degree at most one and lie in different components; opens
/// a fresh forest when nothing fits.
fn first_fit_reinsert(n: usize, dropped: &[(u32, u32)], forests: &mut Vec<LinearForest>) {
    for &(u, v) in dropped {
        let mut placed = false;
        for f in forests.iter_mut() {
            if try_extend_with_edge(f, n, u, v) {
                placed = true;
                break;
            }
        }
        if !placed {
            forests.push(LinearForest::from_paths(vec![vec![u, v]]));
        }
    }
}

/// Adds edge (u, v) to the forest if it keeps it a linear forest: both
/// endpoints must be path ends (or absent), and not ends of the same path.
pub(crate) fn try_extend_with_edge(f: &mut LinearForest, _n: usize, u: u32, v: u32) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Spot {
        Absent,
        Single(usize),
        Front(usize),
        Back(usize),
        Interior,
    }
    let locate = |f: &LinearForest, x: u32| -> Spot {
        for (i, p) in f.paths.iter().enumerate() {
            if p.len() == 1 && p[0] == x {
                return Spot::Single(i);
            }
            if *p.first().unwrap() == x {
                return Spot::Front(i);
            }
            if *p.last().unwrap() == x {
                return Spot::Back(i);
            }
            if p.contains(&x) {
                return Spot::Interior;
            }
        }
        Spot::Absent
    };
    let su = locate(f, u);
    let sv = locate(f, v);
    let idx = |s: Spot| match s {
        Spot::Single(i) | Spot::Front(i) | Spot::Back(i) => Some(i),
        _ => None,
    };
    if su == Spot::Interior || sv == Spot::Interior {
        return false;
    }
    if let (Some(i), Some(j)) = (idx(su), idx(sv)) {
        if i == j {
            return false; // would close a cycle
        }
    }
    // Normalise both endpoints to path fragments ending appropriately.
    let take_fragment = |f: &mut LinearForest, s: Spot, x: u32| -> Vec<u32> {
        match s {
            Spot::Absent => vec![x],
            Spot::Single(i) => {
                f.paths.remove(i);
                vec![x]
            }
            Spot::Front(i) => {
                let mut p = f.paths.remove(i);
                p.reverse();
                p
            }
            Spot::Back(i) => f.paths.remove(i),
            Spot::Interior => unreachable!(),
        }
    };
    // Remove the higher index first so positions stay valid.
    let (first, second, swapped) = match (idx(su), idx(sv)) {
        (Some(i), Some(j)) if j > i => ((sv, v), (su, u), true),
        _ => ((su, u), (sv, v), false),
    };
    let mut left = take_fragment(f, first.0, first.1);
    let frag = {
        // Re-locate the second endpoint after the first removal.
        let s2 = locate(f, second.1);
        take_fragment(f, s2, second.1)
    };
    // left ends at first.1; frag ends at second.1; join as left + reversed frag.
    let mut right = frag;
    right.reverse();
    left.extend(right);
    if swapped {
        left.reverse();
    }
    f.paths.push(left);
    true
}

/// Exhaustive minimum linear-forest partition for graphs with at most
/// [`BRUTE_FORCE_EDGE_LIMIT`] edges. Returns the count and a witness.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 20;

pub fn brute_force_linear_arboricity(
    g: &Graph,
) -> Result<(usize, ForestCollection), ForestError> {
    let m = g.edge_count();
    if m > BRUTE_FORCE_EDGE_LIMIT {
        return Err(ForestError::TooLarge {
            limit: BRUTE_FORCE_EDGE_LIMIT,
            actual: m,
        });
    }
    let n = g.vertex_count();
    if m == 0 {
        return Ok((0, ForestCollection::new(Provenance::Generic, Vec::new())));
    }
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    edges.sort_by_key(|&(u, v)| (std::cmp::Reverse(g.degree(u).max(g.degree(v))), u, v));
    let lower = g.max_degree().div_ceil(2).max(1);
    for k in lower..=m {
        let mut assignment = vec![usize::MAX; m];
        if assign_edges(n, &edges, 0, k, 0, &mut assignment) {
            let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k];
            for (i, &f) in assignment.iter().enumerate() {
                buckets[f].push(edges[i]);
            }
            let forests = buckets
                .into_iter()
                .filter(|b| !b.is_empty())
                .map(|b| LinearForest::from_paths(paths_from_forest_edges(n, &b)))
                .collect::<Vec<_>>();
            let count = forests.len();
            return Ok((count, ForestCollection::new(Provenance::Generic, forests)));
        }
    }
    unreachable!("one forest per edge always succeeds");
}

fn assign_edges(
    n: usize,
    edges: &[(u32, u32)],
    i: usize,
    k: usize,
    used: usize,
    assignment: &mut [usize],
) -> bool {
    if i == edges.len() {
        return true;
    }
    // Symmetry break: an edge may open at most the next unused forest.
    let limit = k.min(used + 1);
    for f in 0..limit {
        assignment[i] = f;
        // Incremental validity: check the partial class f stays a linear forest.
        let class: Vec<(u32, u32)> = (0..=i)
            .filter(|&j| assignment[j] == f)
            .map(|j| edges[j])
            .collect();
        if is_linear_forest(n, &class)
            && assign_edges(n, edges, i + 1, k, used.max(f + 1), assignment)
        {
            return true;
        }
    }
    assignment[i] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, standard};

    fn collect_sorted(classes: &[Vec<(u32, u32)>]) -> Vec<(u32, u32)> {
        let mut all: Vec<(u32, u32)> = classes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    #[test]
    fn konig_colours_even_cycle_into_two_matchings() {
        let g = standard::cycle(6);
        let bp = Bipartition {
            a: vec![0, 2, 4],
            b: vec![1, 3, 5],
        };
        let colours = konig_edge_coloring(&g, &bp).unwrap();
        assert_eq!(colours.len(), 2);
        for class in &colours {
            assert_eq!(class.len(), 3);
            let mut seen = std::collections::BTreeSet::new();
            for &(u, v) in class {
                assert!(seen.insert(u) && seen.insert(v), "not a matching");
            }
        }
        let mut expect: Vec<(u32, u32)> = g.edges().collect();
        expect.sort_unstable();
        assert_eq!(collect_sorted(&colours), expect);
    }

    #[test]
    fn konig_star_uses_degree_many_colours() {
        let g = build_graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let bp = Bipartition {
            a: vec![0],
            b: vec![1, 2, 3, 4, 5],
        };
        let colours = konig_edge_coloring(&g, &bp).unwrap();
        assert_eq!(colours.len(), 5);
        assert!(colours.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn konig_rejects_non_crossing_partitions() {
        // Triangle: no bipartition works, witness is an odd cycle.
        let g = standard::complete(3);
        let bp = Bipartition {
            a: vec![0],
            b: vec![1, 2],
        };
        let err = konig_edge_coloring(&g, &bp).unwrap_err();
        match err {
            ForestError::NotBipartite { odd_cycle, .. } => {
                let cyc = odd_cycle.expect("triangle has an odd cycle");
                assert_eq!(cyc.len() % 2, 1);
                for i in 0..cyc.len() {
                    assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
                }
            }
            other => panic!("unexpected error {other:?}"),
        }
        // Bipartite graph with a wrong partition: no odd cycle to blame.
        let p4 = standard::path(4);
        let bp = Bipartition {
            a: vec![0, 1],
            b: vec![2, 3],
        };
        let err = konig_edge_coloring(&p4, &bp).unwrap_err();
        match err {
            ForestError::NotBipartite {
                offending_edge,
                odd_cycle,
            } => {
                assert_eq!(offending_edge, (0, 1));
                assert!(odd_cycle.is_none());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn konig_random_bipartite_partitions_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..30 {
            let na = rng.random_range(2..8usize);
            let nb = rng.random_range(2..8usize);
            let n = na + nb;
            let mut edges = Vec::new();
            for u in 0..na as u32 {
                for v in na as u32..n as u32 {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let g = build_graph(n, &edges).unwrap();
            let bp = Bipartition {
                a: (0..na as u32).collect(),
                b: (na as u32..n as u32).collect(),
            };
            let colours = konig_edge_coloring(&g, &bp).unwrap();
            assert_eq!(colours.len(), g.max_degree(), "trial {trial}");
            let mut expect: Vec<(u32, u32)> = g.edges().collect();
            expect.sort_unstable();
            assert_eq!(collect_sorted(&colours), expect, "trial {trial}");
            for class in &colours {
                let mut seen = std::collections::BTreeSet::new();
                for &(u, v) in class {
                    assert!(seen.insert(u) && seen.insert(v));
                }
            }
        }
    }

    #[test]
    fn cherry_matching_single_centre() {
        let g = build_graph(3, &[(2, 0), (2, 1)]).unwrap();
        let bp = Bipartition {
            a: vec![0, 1],
            b: vec![2],
        };
        let cm = cherry_matching(&g, &bp).unwrap();
        assert_eq!(cm.cherries.len(), 1);
        assert_eq!(cm.cherries[0].center, 2);
        assert_eq!(cm.cherries[0].leaves, (0, 1));
    }

    #[test]
    fn cherry_matching_disjoint_leaves() {
        // Two centres sharing a pool of four leaves.
        let mut edges = Vec::new();
        for b in [4u32, 5u32] {
            for a in 0..4u32 {
                edges.push((b, a));
            }
        }
        let g = build_graph(6, &edges).unwrap();
        let bp = Bipartition {
            a: vec![0, 1, 2, 3],
            b: vec![4, 5],
        };
        let cm = cherry_matching(&g, &bp).unwrap();
        assert_eq!(cm.cherries.len(), 2);
        let mut used = std::collections::BTreeSet::new();
        for c in &cm.cherries {
            assert!(used.insert(c.leaves.0));
            assert!(used.insert(c.leaves.1));
            assert!(g.has_edge(c.center, c.leaves.0));
            assert!(g.has_edge(c.center, c.leaves.1));
        }
    }

    #[test]
    fn cherry_matching_rejects_low_degree_centres() {
        // Centre degree 2 but an A-vertex of degree 2 as well: 2 < 2*2.
        let g = build_graph(4, &[(3, 0), (3, 1), (0, 2)]).unwrap();
        let bp = Bipartition {
            a: vec![0, 1],
            b: vec![2, 3],
        };
        let err = cherry_matching(&g, &bp).unwrap_err();
        assert!(matches!(err, ForestError::NotBipartite { .. } | ForestError::PreconditionViolated { .. }));
    }

    #[test]
    fn decompose_single_centre_star() {
        // One core vertex with 100 leaves: 50 cherry forests.
        let leaves = 100u32;
        let edges: Vec<(u32, u32)> = (0..leaves).map(|a| (100, a)).collect();
        let g = build_graph(101, &edges).unwrap();
        let bp = Bipartition {
            a: (0..100).collect(),
            b: vec![100],
        };
        let fc = decompose_with_core(&g, &bp, 0.01).unwrap();
        assert_eq!(fc.len(), 50);
        assert!(fc.is_valid(101));
        let mut all = fc.all_edges();
        all.sort_unstable();
        let mut expect: Vec<(u32, u32)> = g.edges().collect();
        expect.sort_unstable();
        assert_eq!(all, expect);
        for f in &fc.forests {
            assert_eq!(f.edge_count(), 2, "each forest is one cherry");
        }
    }

    #[test]
    fn decompose_two_centres() {
        let mut edges = Vec::new();
        for a in 0..10u32 {
            edges.push((20, a));
        }
        for a in 10..20u32 {
            edges.push((21, a));
        }
        let g = build_graph(22, &edges).unwrap();
        let bp = Bipartition {
            a: (0..20).collect(),
            b: vec![20, 21],
        };
        let fc = decompose_with_core(&g, &bp, 0.25).unwrap();
        assert_eq!(fc.len(), 5);
        assert!(fc.is_valid(22));
        for f in &fc.forests {
            assert_eq!(f.edge_count(), 4, "one cherry at each centre");
        }
    }

    #[test]
    fn decompose_with_core_internal_edges() {
        // Core of two adjacent vertices, each with enough leaves.
        let mut edges = vec![(20u32, 21u32)];
        for a in 0..10u32 {
            edges.push((20, a));
        }
        for a in 10..20u32 {
            edges.push((21, a));
        }
        let g = build_graph(22, &edges).unwrap();
        let bp = Bipartition {
            a: (0..20).collect(),
            b: vec![20, 21],
        };
        let fc = decompose_with_core(&g, &bp, 0.25).unwrap();
        assert_eq!(fc.len(), g.max_degree().div_ceil(2));
        assert!(fc.is_valid(22));
        let mut all = fc.all_edges();
        all.sort_unstable();
        let mut expect: Vec<(u32, u32)> = g.edges().collect();
        expect.sort_unstable();
        assert_eq!(all, expect);
    }

    #[test]
    fn decompose_rejects_dependent_a_side() {
        let g = build_graph(4, &[(0, 1), (0, 3), (1, 3)]).unwrap();
        let bp = Bipartition {
            a: vec![0, 1, 2],
            b: vec![3],
        };
        let err = decompose_with_core(&g, &bp, 0.5).unwrap_err();
        assert!(matches!(err, ForestError::PreconditionViolated { .. }));
    }

    #[test]
    fn decompose_rejects_heavy_core_attachment() {
        let g = build_graph(3, &[(0, 2), (1, 2)]).unwrap();
        let bp = Bipartition {
            a: vec![0, 1],
            b: vec![2],
        };
        // max degree 2, cap 0.01 * 2: leaves each have one core neighbour.
        let err = decompose_with_core(&g, &bp, 0.01).unwrap_err();
        match err {
            ForestError::PreconditionViolated { vertex, .. } => assert!(vertex.is_some()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn merge_places_every_edge() {
        let base = ForestCollection::new(
            Provenance::Generic,
            vec![LinearForest::new(); 5], // 4d + 1 with d = 1
        );
        let h = build_graph(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let merged = merge_edges_into_forests(base, &h, 1).unwrap();
        assert!(merged.is_valid(6));
        let mut all = merged.all_edges();
        all.sort_unstable();
        assert_eq!(all, vec![(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn merge_respects_occupied_forests() {
        // Forests where vertex 0 is busy force edge (0, 3) elsewhere.
        let mut forests = vec![LinearForest::from_paths(vec![vec![0, 1]])];
        forests.extend(vec![LinearForest::new(); 4]);
        let base = ForestCollection::new(Provenance::Generic, forests);
        let h = build_graph(4, &[(0, 3)]).unwrap();
        let merged = merge_edges_into_forests(base, &h, 1).unwrap();
        assert_eq!(merged.forests[0].edges(), vec![(0, 1)]);
        assert_eq!(merged.forests[1].edges(), vec![(0, 3)]);
    }

    #[test]
    fn merge_absorbs_singleton_paths() {
        let mut forests = vec![LinearForest::singleton(0)];
        forests.extend(vec![LinearForest::new(); 4]);
        let base = ForestCollection::new(Provenance::Generic, forests);
        let h = build_graph(2, &[(0, 1)]).unwrap();
        let merged = merge_edges_into_forests(base, &h, 1).unwrap();
        assert_eq!(merged.forests[0].paths, vec![vec![0, 1]]);
    }

    #[test]
    fn merge_rejects_precondition_violations() {
        let base = ForestCollection::new(Provenance::Generic, vec![LinearForest::new(); 4]);
        let h = build_graph(2, &[(0, 1)]).unwrap();
        let err = merge_edges_into_forests(base, &h, 1).unwrap_err();
        assert!(matches!(err, ForestError::PreconditionViolated { .. }));

        // Degree in h above d.
        let base = ForestCollection::new(Provenance::Generic, vec![LinearForest::new(); 5]);
        let h = build_graph(3, &[(0, 1), (0, 2)]).unwrap();
        let err = merge_edges_into_forests(base, &h, 1).unwrap_err();
        assert!(matches!(err, ForestError::PreconditionViolated { vertex: Some(0), .. }));

        // Degree in the union above d.
        let mut forests = vec![LinearForest::from_paths(vec![vec![1, 0, 2]])];
        forests.extend(vec![LinearForest::new(); 4]);
        let base = ForestCollection::new(Provenance::Generic, forests);
        let h = build_graph(4, &[(0, 3)]).unwrap();
        let err = merge_edges_into_forests(base, &h, 1).unwrap_err();
        assert!(matches!(err, ForestError::PreconditionViolated { vertex: Some(0), .. }));
    }

    #[test]
    fn arboricity_even_cycle() {
        let g = standard::cycle(6);
        let res = approx_linear_arboricity(&g, 0.5);
        assert!(res.forests.len() <= 2);
        assert!(res.achieved);
        assert!(res.forests.is_valid(6));
    }

    #[test]
    fn arboricity_complete_four() {
        let g = standard::complete(4);
        let res = approx_linear_arboricity(&g, 0.4);
        // Exact linear arboricity of K4 is 2; the construction matches it.
        let (opt, _) = brute_force_linear_arboricity(&g).unwrap();
        assert_eq!(opt, 2);
        assert_eq!(res.forests.len(), 2);
        assert!(res.forests.is_valid(4));
    }

    #[test]
    fn arboricity_close_to_oracle_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = rng.random_range(4..9usize);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.len() > BRUTE_FORCE_EDGE_LIMIT {
                continue;
            }
            let g = build_graph(n, &edges).unwrap();
            let res = approx_linear_arboricity(&g, 0.2);
            assert!(res.forests.is_valid(n), "trial {trial}");
            let mut all = res.forests.all_edges();
            all.sort_unstable();
            let mut expect: Vec<(u32, u32)> = g.edges().collect();
            expect.sort_unstable();
            assert_eq!(all, expect, "trial {trial}");
            let (opt, witness) = brute_force_linear_arboricity(&g).unwrap();
            assert!(witness.is_valid(n));
            assert!(
                res.forests.len() <= opt + 1,
                "trial {trial}: approx {} vs optimal {opt}",
                res.forests.len()
            );
        }
    }

    #[test]
    fn brute_force_known_values() {
        assert_eq!(brute_force_linear_arboricity(&standard::cycle(3)).unwrap().0, 2);
        assert_eq!(brute_force_linear_arboricity(&standard::cycle(5)).unwrap().0, 2);
        assert_eq!(brute_force_linear_arboricity(&standard::complete(4)).unwrap().0, 2);
        assert_eq!(brute_force_linear_arboricity(&standard::path(5)).unwrap().0, 1);
        let star = build_graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(brute_force_linear_arboricity(&star).unwrap().0, 2);
        let empty = Graph::empty(3);
        assert_eq!(brute_force_linear_arboricity(&empty).unwrap().0, 0);
    }

    #[test]
    fn brute_force_rejects_large_instances() {
        let g = standard::complete(7); // 21 edges
        assert!(matches!(
            brute_force_linear_arboricity(&g),
            Err(ForestError::TooLarge { .. })
        ));
    }

    #[test]
    fn forest_collection_serialises_with_provenance() {
        let fc = ForestCollection::new(
            Provenance::F0,
            vec![LinearForest::from_paths(vec![vec![0, 1, 2]])],
        );
        let json = serde_json::to_string(&fc).unwrap();
        assert_eq!(json, r#"{"provenance":"f0","forests":[[[0,1,2]]]}"#);
        let back: ForestCollection = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fc);
    }

    #[test]
    fn try_extend_edge_cases() {
        // Join two paths end to end.
        let mut f = LinearForest::from_paths(vec![vec![0, 1], vec![2, 3]]);
        assert!(try_extend_with_edge(&mut f, 4, 1, 2));
        assert_eq!(f.paths.len(), 1);
        assert!(f.is_valid(4));
        // Refuse to close a cycle.
        let mut f = LinearForest::from_paths(vec![vec![0, 1, 2]]);
        assert!(!try_extend_with_edge(&mut f, 3, 0, 2));
        // Refuse interior attachment.
        let mut f = LinearForest::from_paths(vec![vec![0, 1, 2]]);
        assert!(!try_extend_with_edge(&mut f, 4, 1, 3));
        // Extend at a front endpoint.
        let mut f = LinearForest::from_paths(vec![vec![0, 1]]);
        assert!(try_extend_with_edge(&mut f, 3, 2, 0));
        assert!(f.is_valid(3));
        assert_eq!(f.edge_count(), 2);
    }
}
