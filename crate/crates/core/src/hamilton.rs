//! Hamilton-cycle search: rotation-extension engines for single cycles and
//! endpoint-pinned paths, edge-disjoint cycle packing with rollback,
//! vertex-disjoint pair connection, and the extension of a linear forest
//! into a Hamilton cycle containing every forest edge.
//!
//! All searches are heuristic: failure means the budget ran out, not that no
//! solution exists. Every search is deterministic in (input, seed, budget).

use crate::graph::{check_hamilton_cycle, Graph, HamiltonCycle, LinearForest};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonError {
    #[error("search exhausted its budget after {steps_used} steps")]
    Failure { steps_used: u64 },
    #[error("connected {completed_pairs} pairs before getting stuck")]
    PairsIncomplete { completed_pairs: usize },
    #[error("invalid arguments: {detail}")]
    InvalidArguments { detail: String },
}

/// Mixes a salt into a base seed so derived searches get independent and
/// reproducible randomness.
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    // splitmix64 finalizer over the combined value.
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reasonable step budget for a rotation search on `n` vertices.
pub fn default_search_budget(n: usize) -> u64 {
    let n = n.max(2) as u64;
    let log = 64 - n.leading_zeros() as u64;
    (150 * n * log).max(30_000)
}

/// Read-only adjacency access shared by [`Graph`] and the packing residual.
trait Adj {
    fn n(&self) -> usize;
    fn row(&self, v: u32) -> &[u32];
    fn deg(&self, v: u32) -> usize {
        self.row(v).len()
    }
    fn has(&self, u: u32, v: u32) -> bool {
        self.row(u).binary_search(&v).is_ok()
    }
}

impl Adj for Graph {
    fn n(&self) -> usize {
        self.vertex_count()
    }
    fn row(&self, v: u32) -> &[u32] {
        self.neighbors(v)
    }
}

/// Mutable residual adjacency for packing: sorted rows, binary-search
/// removal, re-insertion on rollback.
struct WorkGraph {
    rows: Vec<Vec<u32>>,
    m: usize,
}

impl WorkGraph {
    fn from_graph(g: &Graph) -> Self {
        WorkGraph {
            rows: (0..g.vertex_count() as u32)
                .map(|v| g.neighbors(v).to_vec())
                .collect(),
            m: g.edge_count(),
        }
    }

    fn remove_edge(&mut self, u: u32, v: u32) {
        for (x, y) in [(u, v), (v, u)] {
            let row = &mut self.rows[x as usize];
            let i = row.binary_search(&y).expect("edge present");
            row.remove(i);
        }
        self.m -= 1;
    }

    fn add_edge(&mut self, u: u32, v: u32) {
        for (x, y) in [(u, v), (v, u)] {
            let row = &mut self.rows[x as usize];
            if let Err(i) = row.binary_search(&y) {
                row.insert(i, y);
            }
        }
        self.m += 1;
    }

    fn to_graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.m);
        for u in 0..self.rows.len() as u32 {
            for &v in &self.rows[u as usize] {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges_unchecked(self.rows.len(), edges)
    }
}

impl Adj for WorkGraph {
    fn n(&self) -> usize {
        self.rows.len()
    }
    fn row(&self, v: u32) -> &[u32] {
        &self.rows[v as usize]
    }
}

/// Rotation-extension state: a simple path, O(1) membership via positions,
/// and seeded randomness for every choice.
struct Search<'a, A: Adj> {
    g: &'a A,
    rng: ChaCha8Rng,
    path: Vec<u32>,
    pos: Vec<u32>, // u32::MAX when off the path
    steps: u64,
    budget: u64,
    stalled: u32,
}

const OFF: u32 = u32::MAX;

impl<'a, A: Adj> Search<'a, A> {
    fn new(g: &'a A, seed: u64, budget: u64) -> Self {
        Search {
            g,
            rng: ChaCha8Rng::seed_from_u64(seed),
            path: Vec::new(),
            pos: vec![OFF; g.n()],
            steps: 0,
            budget,
            stalled: 0,
        }
    }

    fn reset_to(&mut self, start: u32) {
        for &v in &self.path {
            self.pos[v as usize] = OFF;
        }
        self.path.clear();
        self.path.push(start);
        self.pos[start as usize] = 0;
        self.stalled = 0;
    }

    fn tail(&self) -> u32 {
        *self.path.last().expect("path non-empty")
    }

    fn push(&mut self, v: u32) {
        self.pos[v as usize] = self.path.len() as u32;
        self.path.push(v);
        self.stalled = 0;
    }

    /// Extends the tail by a uniformly random unused neighbour, skipping
    /// `banned` if given.
    fn try_extend(&mut self, banned: Option<u32>) -> bool {
        let tail = self.tail();
        let row = self.g.row(tail);
        let mut count = 0usize;
        let mut pick = OFF;
        for &w in row {
            if self.pos[w as usize] != OFF || Some(w) == banned {
                continue;
            }
            count += 1;
            // Reservoir sample of size one keeps a single pass uniform.
            if self.rng.random_range(0..count) == 0 {
                pick = w;
            }
        }
        if pick == OFF {
            return false;
        }
        self.push(pick);
        true
    }

    /// Standard rotation: for a neighbour of the tail at path index `i`,
    /// reverse the suffix after `i`; the vertex at `i + 1` becomes the new
    /// tail. The head never moves.
    fn rotate_random(&mut self) -> bool {
        let tail = self.tail();
        let k = self.path.len() - 1;
        let mut count = 0usize;
        let mut pick = usize::MAX;
        for &w in self.g.row(tail) {
            let i = self.pos[w as usize];
            if i == OFF || i as usize >= k.saturating_sub(1) {
                continue; // off-path, predecessor, or the tail itself
            }
            count += 1;
            if self.rng.random_range(0..count) == 0 {
                pick = i as usize;
            }
        }
        if pick == usize::MAX {
            return false;
        }
        self.path[pick + 1..].reverse();
        for j in pick + 1..self.path.len() {
            self.pos[self.path[j] as usize] = j as u32;
        }
        self.stalled += 1;
        true
    }

    /// When the tail is adjacent to the head, the path closes into a cycle on
    /// its vertex set; reopen it at a vertex with an unused neighbour and
    /// extend there. Moves the head, so only the free-cycle search uses it.
    fn absorb_through_cycle(&mut self, banned: Option<u32>) -> Option<bool> {
        let len = self.path.len();
        let offset = self.rng.random_range(0..len);
        for step in 0..len {
            let j = (offset + step) % len;
            let u = self.path[j];
            let w = self
                .g
                .row(u)
                .iter()
                .copied()
                .find(|&w| self.pos[w as usize] == OFF && Some(w) != banned);
            if let Some(w) = w {
                // New path: walk the cycle starting after j, wrapping through
                // the closing edge, ending at j; then extend to w.
                let mut rebuilt = Vec::with_capacity(len + 1);
                rebuilt.extend_from_slice(&self.path[j + 1..]);
                rebuilt.extend_from_slice(&self.path[..=j]);
                self.path = rebuilt;
                for (i, &v) in self.path.iter().enumerate() {
                    self.pos[v as usize] = i as u32;
                }
                self.push(w);
                return Some(true);
            }
        }
        // No path vertex has any neighbour outside: the component is exactly
        // the path set, so growth is impossible from here.
        None
    }

    fn spend_step(&mut self) -> bool {
        self.steps += 1;
        #[cfg(debug_assertions)]
        if self.steps % 512 == 0 {
            self.debug_validate();
        }
        self.steps <= self.budget
    }

    #[cfg(debug_assertions)]
    fn debug_validate(&self) {
        let mut seen = std::collections::BTreeSet::new();
        for (i, &v) in self.path.iter().enumerate() {
            assert!(seen.insert(v), "path repeats vertex {v}");
            assert_eq!(self.pos[v as usize], i as u32);
            if i > 0 {
                assert!(
                    self.g.has(self.path[i - 1], v),
                    "path uses a missing edge ({}, {v})",
                    self.path[i - 1]
                );
            }
        }
    }
}

/// Searches for a Hamilton cycle; returns the vertex order or the steps
/// spent when the budget runs out.
fn cycle_search<A: Adj>(g: &A, seed: u64, budget: u64) -> Result<Vec<u32>, u64> {
    let n = g.n();
    if n < 3 || (0..n as u32).any(|v| g.deg(v) < 2) {
        return Err(0);
    }
    let stall_limit = 4 * n as u32 + 64;
    let mut s = Search::new(g, seed, budget);
    let start = s.rng.random_range(0..n as u32);
    s.reset_to(start);
    loop {
        if !s.spend_step() {
            return Err(s.steps);
        }
        if s.try_extend(None) {
            continue;
        }
        let tail = s.tail();
        let head = s.path[0];
        let closes = g.has(tail, head);
        if s.path.len() == n {
            if closes {
                #[cfg(debug_assertions)]
                s.debug_validate();
                return Ok(s.path);
            }
        } else if closes {
            match s.absorb_through_cycle(None) {
                Some(_) => continue,
                // Disconnected from the rest: no Hamilton cycle exists.
                None => return Err(s.steps),
            }
        }
        if !s.rotate_random() || s.stalled > stall_limit {
            let start = s.rng.random_range(0..n as u32);
            s.reset_to(start);
        }
    }
}

/// Searches for a Hamilton path from `x` to `y`: grows rotations from `x`
/// with `y` excluded, then attaches `y` once the rest is spanned and the
/// tail neighbours it.
fn path_search<A: Adj>(g: &A, x: u32, y: u32, seed: u64, budget: u64) -> Result<Vec<u32>, u64> {
    let n = g.n();
    if g.deg(x) == 0 || g.deg(y) == 0 {
        return Err(0);
    }
    let stall_limit = 4 * n as u32 + 64;
    let mut s = Search::new(g, seed, budget);
    s.reset_to(x);
    loop {
        if !s.spend_step() {
            return Err(s.steps);
        }
        if s.path.len() == n - 1 && g.has(s.tail(), y) {
            s.push(y);
            #[cfg(debug_assertions)]
            s.debug_validate();
            return Ok(s.path);
        }
        if s.try_extend(Some(y)) {
            continue;
        }
        // The head is pinned at x, so cycle reopening is off the table;
        // rotations and restarts carry the search.
        if !s.rotate_random() || s.stalled > stall_limit {
            s.reset_to(x);
        }
    }
}

/// Finds a Hamilton cycle of `g` within a step budget.
///
/// Failure only means the budget was exhausted (or a trivial obstruction
/// like a vertex of degree below two was found); it is not a proof that no
/// Hamilton cycle exists.
pub fn find_hamilton_cycle(g: &Graph, seed: u64, budget: u64) -> Result<HamiltonCycle, HamiltonError> {
    cycle_search(g, seed, budget)
        .map(|order| HamiltonCycle { order })
        .map_err(|steps_used| HamiltonError::Failure { steps_used })
}

/// Finds a path from `x` to `y` visiting every vertex of `g` exactly once.
pub fn hamilton_path_between(
    g: &Graph,
    x: u32,
    y: u32,
    seed: u64,
    budget: u64,
) -> Result<Vec<u32>, HamiltonError> {
    let n = g.vertex_count();
    if x == y || x as usize >= n || y as usize >= n {
        return Err(HamiltonError::InvalidArguments {
            detail: format!("endpoints {x}, {y} must be distinct vertices of the graph"),
        });
    }
    path_search(g, x, y, seed, budget).map_err(|steps_used| HamiltonError::Failure { steps_used })
}

/// Outcome of [`pack_hamilton_cycles`]: the extracted cycles, the residual
/// graph of unused edges, and how the count compares to the target.
#[derive(Debug, Clone)]
pub struct PackingResult {
    pub cycles: Vec<HamiltonCycle>,
    /// `g` minus every packed cycle's edges, on the same vertex set.
    pub leftover: Graph,
    /// `cycles.len()`, kept explicit for reports.
    pub achieved: usize,
    pub target: usize,
}

/// How many trailing cycles a packing rollback unwinds before retrying.
pub const PACKING_ROLLBACK_DEPTH: usize = 2;

/// Greedily extracts edge-disjoint Hamilton cycles from `g`.
///
/// The default target is `floor(min_degree / 2)`. When an extraction fails,
/// the last [`PACKING_ROLLBACK_DEPTH`] cycles are returned to the residual
/// and the search retries with a derived seed, up to `retries` times.
/// Falling short of the target is reported, not treated as an error.
pub fn pack_hamilton_cycles(
    g: &Graph,
    target: Option<usize>,
    seed: u64,
    retries: u32,
) -> PackingResult {
    let target = target.unwrap_or(g.min_degree() / 2);
    let mut work = WorkGraph::from_graph(g);
    let mut cycles: Vec<HamiltonCycle> = Vec::with_capacity(target);
    let budget = default_search_budget(g.vertex_count());
    let mut salt = 0u64;
    let mut retries_left = retries;
    while cycles.len() < target {
        salt += 1;
        match cycle_search(&work, derive_seed(seed, salt), budget) {
            Ok(order) => {
                let cycle = HamiltonCycle { order };
                for (u, v) in cycle.edges() {
                    work.remove_edge(u, v);
                }
                cycles.push(cycle);
            }
            Err(_) => {
                if retries_left == 0 {
                    break;
                }
                retries_left -= 1;
                for cycle in cycles.split_off(cycles.len().saturating_sub(PACKING_ROLLBACK_DEPTH)) {
                    for (u, v) in cycle.edges() {
                        work.add_edge(u, v);
                    }
                }
            }
        }
    }
    PackingResult {
        achieved: cycles.len(),
        leftover: work.to_graph(),
        cycles,
        target,
    }
}

/// Endpoint pairs to be connected by internally-disjoint paths, plus
/// vertices that must not appear as path interiors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSet {
    pub pairs: Vec<(u32, u32)>,
    pub forbidden_interior: Vec<u32>,
}

/// Connects every pair by a path; paths share no interior vertices, avoid
/// the forbidden set, and never route through another pair's endpoints.
///
/// Pairs are processed in order with a randomized breadth-first search;
/// `budget` caps the total number of vertex expansions. On failure the
/// number of already-connected pairs is reported.
pub fn connect_pairs_disjoint(
    g: &Graph,
    ps: &PairSet,
    seed: u64,
    budget: u64,
) -> Result<Vec<Vec<u32>>, HamiltonError> {
    let n = g.vertex_count();
    let mut endpoint = vec![false; n];
    for (i, &(a, b)) in ps.pairs.iter().enumerate() {
        for v in [a, b] {
            if v as usize >= n {
                return Err(HamiltonError::InvalidArguments {
                    detail: format!("pair endpoint {v} out of range"),
                });
            }
            if endpoint[v as usize] {
                return Err(HamiltonError::InvalidArguments {
                    detail: format!("endpoint {v} appears in more than one pair (pair {i})"),
                });
            }
            endpoint[v as usize] = true;
        }
        if a == b {
            return Err(HamiltonError::InvalidArguments {
                detail: format!("pair {i} joins vertex {a} to itself"),
            });
        }
    }
    let mut blocked = vec![false; n];
    for &v in &ps.forbidden_interior {
        if (v as usize) < n {
            blocked[v as usize] = true;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0u64;
    let mut result: Vec<Vec<u32>> = Vec::with_capacity(ps.pairs.len());
    let mut parent = vec![OFF; n];
    let mut seen = vec![0u32; n];
    let mut stamp = 0u32;
    for (idx, &(s, t)) in ps.pairs.iter().enumerate() {
        stamp += 1;
        seen[s as usize] = stamp;
        let mut queue = std::collections::VecDeque::from([s]);
        let mut found = false;
        'bfs: while let Some(u) = queue.pop_front() {
            spent += 1;
            if spent > budget {
                return Err(HamiltonError::PairsIncomplete {
                    completed_pairs: idx,
                });
            }
            let mut order: Vec<u32> = g.neighbors(u).to_vec();
            order.shuffle(&mut rng);
            for w in order {
                if seen[w as usize] == stamp {
                    continue;
                }
                if w == t {
                    parent[w as usize] = u;
                    seen[w as usize] = stamp;
                    found = true;
                    break 'bfs;
                }
                // Interior candidates must be free and unreserved.
                if blocked[w as usize] || endpoint[w as usize] {
                    continue;
                }
                seen[w as usize] = stamp;
                parent[w as usize] = u;
                queue.push_back(w);
            }
        }
        if !found {
            return Err(HamiltonError::PairsIncomplete {
                completed_pairs: idx,
            });
        }
        let mut path = vec![t];
        while *path.last().unwrap() != s {
            path.push(parent[*path.last().unwrap() as usize]);
        }
        path.reverse();
        for &v in &path[1..path.len() - 1] {
            blocked[v as usize] = true; // reserve interiors for disjointness
        }
        result.push(path);
    }
    Ok(result)
}

/// Free-vertex split and tuning knobs for [`extend_forest_to_hamilton`].
///
/// The three parts partition the vertices outside the forest: the first
/// feeds the absorb phase, the second supplies connector-path interiors,
/// and the third is held back so the closing sweep has room to work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPlan {
    pub u1: Vec<u32>,
    pub u2: Vec<u32>,
    pub u3: Vec<u32>,
    pub seed: u64,
    /// The join phase stops once this many path components remain.
    pub limit_1: usize,
    /// The absorb phase stops once this many components remain; kept at or
    /// below `limit_1` so every phase sees a shrinking component count.
    pub limit_2: usize,
    /// Per-phase step budgets; zeros mean "derive from the call's budget".
    pub phase_budgets: [u64; 4],
    /// Hypothesis floor: free vertices required outside the forest.
    pub min_free_vertices: usize,
    /// Hypothesis floor: neighbours outside the forest required per vertex.
    pub min_degree_outside: usize,
    /// Whether violated hypothesis floors abort the run (they are always
    /// evaluated; relaxed callers still attempt the construction).
    pub enforce_hypotheses: bool,
}

impl ExtensionPlan {
    /// Splits the vertices outside `f` into three random parts and fills in
    /// component-count thresholds scaled for `g`.
    pub fn for_forest(g: &Graph, f: &LinearForest, seed: u64) -> ExtensionPlan {
        let n = g.vertex_count();
        let mut on_forest = vec![false; n];
        for p in &f.paths {
            for &v in p {
                if (v as usize) < n {
                    on_forest[v as usize] = true;
                }
            }
        }
        let mut free: Vec<u32> = (0..n as u32).filter(|&v| !on_forest[v as usize]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x706c616e));
        free.shuffle(&mut rng);
        let third = free.len() / 3;
        let u3 = free.split_off(2 * third);
        let u2 = free.split_off(third);
        let u1 = free;
        // Joining along endpoint edges costs nothing, so the join phase runs
        // as deep as the absorb phase's target; absorbers then only have to
        // break genuine stalls.
        let limit_2 = (n / 80).max(3);
        let limit_1 = limit_2;
        ExtensionPlan {
            u1,
            u2,
            u3,
            seed,
            limit_1,
            limit_2,
            phase_budgets: [0; 4],
            min_free_vertices: 0,
            min_degree_outside: 0,
            enforce_hypotheses: false,
        }
    }

    /// Enables hypothesis enforcement with explicit floors.
    pub fn enforcing(mut self, min_free_vertices: usize, min_degree_outside: usize) -> Self {
        self.min_free_vertices = min_free_vertices;
        self.min_degree_outside = min_degree_outside;
        self.enforce_hypotheses = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError {
    #[error("hypothesis violated: {detail}")]
    PreconditionViolated { detail: String },
    #[error("phase {phase} failed with {components_remaining} components and {free_remaining} free vertices left: {detail}")]
    PhaseFailure {
        phase: u8,
        components_remaining: usize,
        free_remaining: usize,
        detail: String,
    },
    #[error("invalid forest: {detail}")]
    InvalidForest { detail: String },
    #[error("invalid plan: {detail}")]
    InvalidPlan { detail: String },
}

/// Extends a linear forest to a Hamilton cycle of `g ∪ f` containing every
/// edge of `f`.
///
/// Two greedy phases shrink the component count first: (1) join path
/// components along edges between their endpoints until at most `limit_1`
/// remain, then (2) bridge endpoint pairs through first-part free vertices
/// until at most `limit_2` remain. A rotation–extension search then absorbs
/// the surviving components (whole, through their endpoints) and the
/// remaining free vertices into one spine and rotates its ends together,
/// never severing a forest edge. Failures report the phase reached: 3 while
/// components were still separate, 4 once only closing remained.
pub fn extend_forest_to_hamilton(
    g: &Graph,
    f: &LinearForest,
    plan: &ExtensionPlan,
    budget: u64,
) -> Result<HamiltonCycle, ExtensionError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(ExtensionError::PreconditionViolated {
            detail: format!("no Hamilton cycle exists on {n} vertices"),
        });
    }
    if !f.is_valid(n) {
        return Err(ExtensionError::InvalidForest {
            detail: "not a valid linear forest on the graph's vertex set".into(),
        });
    }
    // Work in the union so forest edges absent from g are still usable.
    let mut f_edges = f.edges();
    let owned: Option<Graph> = if f_edges.iter().any(|&(u, v)| !g.has_edge(u, v)) {
        Some(g.union_with_edges(&f_edges))
    } else {
        None
    };
    let gf: &Graph = owned.as_ref().unwrap_or(g);

    let mut on_forest = vec![false; n];
    for p in &f.paths {
        for &v in p {
            on_forest[v as usize] = true;
        }
    }
    // Plan sanity: parts disjoint, off-forest, and jointly covering.
    let mut part_of = vec![0u8; n];
    for (tag, part) in [(1u8, &plan.u1), (2, &plan.u2), (3, &plan.u3)] {
        for &v in part {
            if v as usize >= n {
                return Err(ExtensionError::InvalidPlan {
                    detail: format!("plan vertex {v} out of range"),
                });
            }
            if on_forest[v as usize] {
                return Err(ExtensionError::InvalidPlan {
                    detail: format!("plan vertex {v} lies on the forest"),
                });
            }
            if part_of[v as usize] != 0 {
                return Err(ExtensionError::InvalidPlan {
                    detail: format!("plan vertex {v} appears in two parts"),
                });
            }
            part_of[v as usize] = tag;
        }
    }
    if (0..n).any(|v| !on_forest[v] && part_of[v] == 0) {
        return Err(ExtensionError::InvalidPlan {
            detail: "plan parts do not cover every vertex outside the forest".into(),
        });
    }

    // Hypothesis floors: always evaluated, fatal only when enforced.
    let free_total = plan.u1.len() + plan.u2.len() + plan.u3.len();
    if plan.enforce_hypotheses {
        if free_total < plan.min_free_vertices {
            return Err(ExtensionError::PreconditionViolated {
                detail: format!(
                    "{free_total} free vertices, need {}",
                    plan.min_free_vertices
                ),
            });
        }
        if plan.min_degree_outside > 0 {
            for v in 0..n as u32 {
                let outside = gf
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| !on_forest[w as usize])
                    .count();
                if outside < plan.min_degree_outside {
                    return Err(ExtensionError::PreconditionViolated {
                        detail: format!(
                            "vertex {v} has {outside} neighbours outside the forest, need {}",
                            plan.min_degree_outside
                        ),
                    });
                }
            }
        }
    }

    // Degree-2 vertices of the host have no routing freedom: every Hamilton
    // cycle uses both their edges. Adopting those edges into the forest up
    // front turns stray low-degree vertices into path interiors the later
    // phases absorb whole, and a conflict here proves no extension exists.
    let mut forest_paths: Vec<Vec<u32>> = f.paths.clone();
    {
        for v in 0..n as u32 {
            if gf.degree(v) < 2 {
                return Err(ExtensionError::PreconditionViolated {
                    detail: format!(
                        "vertex {v} has degree {} in the host graph; no Hamilton cycle exists",
                        gf.degree(v)
                    ),
                });
            }
        }
        let mut forced: Vec<(u32, u32)> = Vec::new();
        for v in 0..n as u32 {
            if gf.degree(v) == 2 {
                for &w in gf.neighbors(v) {
                    forced.push((v.min(w), v.max(w)));
                }
            }
        }
        forced.sort_unstable();
        forced.dedup();
        let have: std::collections::BTreeSet<(u32, u32)> = f_edges.iter().copied().collect();
        forced.retain(|e| !have.contains(e));
        if !forced.is_empty() {
            let mut union = f_edges.clone();
            union.extend(forced);
            let mut deg = vec![0u8; n];
            for &(u, v) in &union {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
            if deg.iter().any(|&d| d > 2) {
                return Err(ExtensionError::PreconditionViolated {
                    detail: "edges forced by degree-2 vertices would give some vertex three \
                             required edges; no Hamilton cycle contains this forest"
                        .into(),
                });
            }
            if crate::graph::is_linear_forest(n, &union) {
                forest_paths = crate::graph::paths_from_forest_edges(n, &union);
                f_edges = union;
            } else {
                // Degrees are all at most two, so the forced edges closed a
                // cycle. Only a cycle through every vertex survives — and
                // then it is the answer itself.
                if union.len() == n && deg.iter().all(|&d| d == 2) {
                    let mut nbr: Vec<Vec<u32>> = vec![Vec::new(); n];
                    for &(u, v) in &union {
                        nbr[u as usize].push(v);
                        nbr[v as usize].push(u);
                    }
                    let mut order: Vec<u32> = Vec::with_capacity(n);
                    let mut prev = u32::MAX;
                    let mut cur = 0u32;
                    for _ in 0..n {
                        order.push(cur);
                        let next = nbr[cur as usize]
                            .iter()
                            .copied()
                            .find(|&w| w != prev)
                            .expect("degree-2 walk always continues");
                        prev = cur;
                        cur = next;
                    }
                    let cycle = HamiltonCycle { order };
                    if cur == 0 && check_hamilton_cycle(gf, &cycle).is_ok() {
                        return Ok(cycle);
                    }
                }
                return Err(ExtensionError::PreconditionViolated {
                    detail: "edges forced by degree-2 vertices close a cycle smaller than \
                             the graph; no Hamilton cycle contains this forest"
                        .into(),
                });
            }
        }
    }
    // Vertices on an edge path are pinned; everything else — plan vertices
    // and single-vertex paths alike — is free to absorb anywhere.
    let mut on_paths = vec![false; n];
    for p in &forest_paths {
        if p.len() >= 2 {
            for &v in p {
                on_paths[v as usize] = true;
            }
        }
    }
    let singles: Vec<u32> = (0..n as u32)
        .filter(|&v| on_forest[v as usize] && !on_paths[v as usize])
        .collect();

    // Phases 1–2 are bounded greedy scans; the search covering phases 3–4
    // takes the whole step budget (or the plan's explicit override).
    let pb = plan.phase_budgets[2].saturating_add(plan.phase_budgets[3]);
    let search_budget = if pb > 0 {
        pb
    } else {
        budget.max(default_search_budget(n))
    };

    // Degenerate case: nothing to cover, any Hamilton cycle will do.
    let mut paths: Vec<Vec<u32>> = forest_paths.iter().filter(|p| p.len() >= 2).cloned().collect();
    if paths.is_empty() {
        return cycle_search(gf, derive_seed(plan.seed, 4), search_budget)
            .map(|order| HamiltonCycle { order })
            .map_err(|steps| ExtensionError::PhaseFailure {
                phase: 4,
                components_remaining: 0,
                free_remaining: free_total,
                detail: format!("empty forest: direct cycle search spent {steps} steps"),
            });
    }

    let original_paths = paths.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(plan.seed, 1));
    // end_at[v] = index of the path having v as an endpoint.
    let mut end_at: Vec<u32> = vec![OFF; n];
    let mut alive: Vec<bool> = vec![true; paths.len()];
    for (i, p) in paths.iter().enumerate() {
        end_at[p[0] as usize] = i as u32;
        end_at[*p.last().unwrap() as usize] = i as u32;
    }
    let mut comps = paths.len();

    // Phase 1: join components along edges between their endpoints.
    while comps > plan.limit_1 {
        let mut endpoints: Vec<u32> = (0..n as u32).filter(|&v| end_at[v as usize] != OFF).collect();
        endpoints.shuffle(&mut rng);
        let mut joined = false;
        'scan: for &u in &endpoints {
            let i = end_at[u as usize];
            if i == OFF {
                continue; // consumed earlier in this pass
            }
            for &v in gf.neighbors(u) {
                let j = end_at[v as usize];
                if j != OFF && j != i {
                    join_paths(&mut paths, &mut alive, &mut end_at, i as usize, u, j as usize, v, None);
                    comps -= 1;
                    joined = true;
                    break 'scan;
                }
            }
        }
        if !joined {
            break;
        }
    }

    // Phase 2: absorb free vertices adjacent to endpoints of two components.
    let mut u1_avail: Vec<u32> = plan
        .u1
        .iter()
        .copied()
        .filter(|&v| !on_paths[v as usize])
        .collect();
    while comps > plan.limit_2 && !u1_avail.is_empty() {
        u1_avail.shuffle(&mut rng);
        let mut used_idx = None;
        'absorb: for (ai, &u) in u1_avail.iter().enumerate() {
            let mut first: Option<(u32, u32)> = None;
            for &v in gf.neighbors(u) {
                let j = end_at[v as usize];
                if j == OFF {
                    continue;
                }
                match first {
                    None => first = Some((j, v)),
                    Some((j0, v0)) if j0 != j => {
                        join_paths(
                            &mut paths, &mut alive, &mut end_at, j0 as usize, v0, j as usize, v,
                            Some(u),
                        );
                        comps -= 1;
                        used_idx = Some(ai);
                        break 'absorb;
                    }
                    _ => {}
                }
            }
        }
        match used_idx {
            Some(ai) => {
                u1_avail.swap_remove(ai);
            }
            None => break,
        }
    }

    // Phases 3–4: one rotation–extension search absorbs the surviving
    // components and leftover free vertices into a spine grown from the
    // longest component, then rotates its ends together.
    let live: Vec<usize> = (0..paths.len()).filter(|&i| alive[i]).collect();
    debug_assert_eq!(live.len(), comps);
    let base = live.iter().copied().max_by_key(|&i| paths[i].len()).unwrap();
    let spine = std::mem::take(&mut paths[base]);
    let others: Vec<Vec<u32>> = live
        .iter()
        .filter(|&&i| i != base)
        .map(|&i| std::mem::take(&mut paths[i]))
        .collect();
    let free: Vec<u32> = plan
        .u2
        .iter()
        .chain(&plan.u3)
        .copied()
        .filter(|&v| !on_paths[v as usize])
        .chain(u1_avail.iter().copied())
        .chain(singles.iter().copied())
        .collect();
    let f_set: std::collections::BTreeSet<(u32, u32)> = f_edges.iter().copied().collect();
    let order = constrained_cycle_search(
        gf,
        spine,
        others,
        &free,
        &f_set,
        derive_seed(plan.seed, 3),
        search_budget,
    )
    .or_else(|(components_remaining, free_remaining, detail)| {
        // Last resort: contract every path to a single mandatory edge and
        // solve the small instance that remains, where the forest is a
        // plain matching and rotations are barely constrained.
        let all_free: Vec<u32> = (0..n as u32).filter(|&v| !on_paths[v as usize]).collect();
        contract_and_extend(gf, &original_paths, &all_free, plan.seed, search_budget).map_err(
            |contracted| ExtensionError::PhaseFailure {
                phase: if components_remaining > 1 { 3 } else { 4 },
                components_remaining,
                free_remaining,
                detail: format!("{detail}; {contracted}"),
            },
        )
    })?;
    let cycle = HamiltonCycle { order };
    debug_assert!(check_hamilton_cycle(gf, &cycle).is_ok());
    debug_assert!({
        let cycle_edges: std::collections::BTreeSet<(u32, u32)> = cycle.edges().into_iter().collect();
        f_edges.iter().all(|e| cycle_edges.contains(e))
    });
    Ok(cycle)
}

/// Joins two paths by an edge between endpoint `u` of path `i` and endpoint
/// `v` of path `j`, optionally threading a free vertex between them.
#[allow(clippy::too_many_arguments)]
fn join_paths(
    paths: &mut [Vec<u32>],
    alive: &mut [bool],
    end_at: &mut [u32],
    i: usize,
    u: u32,
    j: usize,
    v: u32,
    via: Option<u32>,
) {
    let mut a = std::mem::take(&mut paths[i]);
    let mut b = std::mem::take(&mut paths[j]);
    if a[0] == u {
        a.reverse(); // u moves to the back
    }
    if *b.last().unwrap() == v {
        b.reverse(); // v moves to the front
    }
    end_at[u as usize] = OFF;
    end_at[v as usize] = OFF;
    end_at[a[0] as usize] = i as u32;
    end_at[*b.last().unwrap() as usize] = i as u32;
    if let Some(w) = via {
        a.push(w);
    }
    a.extend_from_slice(&b);
    paths[i] = a;
    alive[j] = false;
}

/// Contracts every forest path to one mandatory edge between its endpoints,
/// extends the resulting matching to a Hamilton cycle of the contracted
/// graph, and expands the paths back. Interior path vertices disappear from
/// the contracted instance, so any cycle found there traverses each path in
/// one piece.
fn contract_and_extend(
    gf: &Graph,
    paths: &[Vec<u32>],
    free: &[u32],
    seed: u64,
    budget: u64,
) -> Result<Vec<u32>, String> {
    let n = gf.vertex_count();
    let mut kept: Vec<u32> = free.to_vec();
    for p in paths {
        kept.push(p[0]);
        kept.push(*p.last().unwrap());
    }
    kept.sort_unstable();
    let n2 = kept.len();
    if n2 >= n || n2 < 3 {
        return Err("contraction would not shrink the instance".into());
    }
    let mut new_id = vec![OFF; n];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v as usize] = i as u32;
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for &v in &kept {
        let nv = new_id[v as usize];
        for &w in gf.neighbors(v) {
            let nw = new_id[w as usize];
            if nw != OFF && nv < nw {
                edges.push((nv, nw));
            }
        }
    }
    // owner[c] = index of the path whose endpoint the contracted vertex c is.
    let mut owner = vec![OFF; n2];
    let mut fpaths: Vec<Vec<u32>> = Vec::with_capacity(paths.len());
    for (pi, p) in paths.iter().enumerate() {
        let a = new_id[p[0] as usize];
        let b = new_id[*p.last().unwrap() as usize];
        edges.push((a.min(b), a.max(b)));
        owner[a as usize] = pi as u32;
        owner[b as usize] = pi as u32;
        fpaths.push(vec![a, b]);
    }
    edges.sort_unstable();
    edges.dedup();
    let cg = Graph::from_edges_unchecked(n2, edges);
    let cf = LinearForest { paths: fpaths };
    let cplan = ExtensionPlan::for_forest(&cg, &cf, derive_seed(seed, 11));
    let cyc = extend_forest_to_hamilton(&cg, &cf, &cplan, budget)
        .map_err(|e| format!("contracted instance ({n2} vertices): {e}"))?;

    // Expand. Rotate the cycle first so no endpoint pair straddles the seam.
    let mut ord = cyc.order;
    let first = ord[0] as usize;
    let last = *ord.last().unwrap() as usize;
    if owner[first] != OFF && owner[first] == owner[last] {
        ord.rotate_left(1);
    }
    let mut full = Vec::with_capacity(n);
    let mut i = 0;
    while i < ord.len() {
        let cv = ord[i] as usize;
        if owner[cv] == OFF {
            full.push(kept[cv]);
            i += 1;
        } else {
            let p = &paths[owner[cv] as usize];
            debug_assert_eq!(owner[ord[i + 1] as usize], owner[cv]);
            if new_id[p[0] as usize] == ord[i] {
                full.extend_from_slice(p);
            } else {
                full.extend(p.iter().rev());
            }
            i += 2;
        }
    }
    Ok(full)
}

/// Grows `spine` into a Hamilton cycle of `g` that keeps every forest edge:
/// absorbs whole leftover forest paths through their endpoints and free
/// vertices one at a time, rotating the spine tail between absorptions with
/// pivots restricted to non-forest spine edges, and finally rotates the two
/// ends together. The whole spine is flipped when the tail runs dry (and
/// periodically, so both ends see action). On failure reports
/// `(components, free, detail)` for the state it died in, counting the
/// spine itself as one component.
fn constrained_cycle_search(
    g: &Graph,
    mut spine: Vec<u32>,
    mut paths: Vec<Vec<u32>>,
    free: &[u32],
    f_set: &std::collections::BTreeSet<(u32, u32)>,
    seed: u64,
    budget: u64,
) -> Result<Vec<u32>, (usize, usize, String)> {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let is_f = |a: u32, b: u32| f_set.contains(&(a.min(b), a.max(b)));
    let mut pos = vec![OFF; n];
    for (i, &v) in spine.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    // end_of[v] = index of the not-yet-absorbed path having v as an endpoint.
    let mut end_of = vec![OFF; n];
    for (i, p) in paths.iter().enumerate() {
        end_of[p[0] as usize] = i as u32;
        end_of[*p.last().unwrap() as usize] = i as u32;
    }
    let mut alive = paths.len();
    let mut is_free = vec![false; n];
    for &v in free {
        is_free[v as usize] = true;
    }
    let mut free_left = free.len();

    let stall_limit = 4 * (n as u64) + 64;
    // Closing makes no absorption "progress" until the single step that
    // finishes, so it gets a far longer leash before stalling out.
    let closing_stall = 64 * (n as u64) + 1024;
    let mut steps = 0u64;
    let mut last_progress = 0u64;
    let mut forced_flips = 0u8;
    loop {
        let len = spine.len();
        let tail = *spine.last().unwrap();
        let closing = alive == 0 && free_left == 0;
        if closing && g.has_edge(tail, spine[0]) {
            return Ok(spine);
        }
        if steps >= budget {
            return Err((
                alive + 1,
                free_left,
                format!("search budget of {budget} steps exhausted"),
            ));
        }
        let drought = steps.saturating_sub(last_progress);
        if drought > if closing { closing_stall } else { stall_limit } {
            let what = if closing { "closing rotation" } else { "absorption" };
            return Err((alive + 1, free_left, format!("no {what} in {drought} steps")));
        }
        steps += 1;

        // Absorption: a free vertex appends alone; a path endpoint pulls in
        // its whole path, oriented to start there. Paths go first — free
        // vertices are the flexible glue and are worth saving for later.
        if alive > 0 || free_left > 0 {
            let mut count = 0usize;
            let mut pick = OFF;
            for &v in g.neighbors(tail) {
                if end_of[v as usize] != OFF {
                    count += 1;
                    if rng.random_range(0..count) == 0 {
                        pick = v;
                    }
                }
            }
            if pick == OFF {
                for &v in g.neighbors(tail) {
                    if is_free[v as usize] {
                        count += 1;
                        if rng.random_range(0..count) == 0 {
                            pick = v;
                        }
                    }
                }
            }
            if pick != OFF {
                if is_free[pick as usize] {
                    is_free[pick as usize] = false;
                    free_left -= 1;
                    pos[pick as usize] = spine.len() as u32;
                    spine.push(pick);
                } else {
                    let mut p = std::mem::take(&mut paths[end_of[pick as usize] as usize]);
                    end_of[p[0] as usize] = OFF;
                    end_of[*p.last().unwrap() as usize] = OFF;
                    if p[0] != pick {
                        p.reverse();
                    }
                    for &w in &p {
                        pos[w as usize] = spine.len() as u32;
                        spine.push(w);
                    }
                    alive -= 1;
                }
                last_progress = steps;
                forced_flips = 0;
                continue;
            }
        }

        // Closing: if one rotation leaves the tail adjacent to the head,
        // take it now instead of waiting for the random walk to find it.
        if closing {
            let head = spine[0];
            let mut done = usize::MAX;
            for &v in g.neighbors(tail) {
                let i = pos[v as usize];
                if i == OFF || i as usize + 3 > len {
                    continue;
                }
                let i = i as usize;
                if !is_f(spine[i], spine[i + 1]) && g.has_edge(head, spine[i + 1]) {
                    done = i;
                    break;
                }
            }
            if done != usize::MAX {
                spine[done + 1..].reverse();
                for (i, &v) in spine.iter().enumerate().skip(done + 1) {
                    pos[v as usize] = i as u32;
                }
                continue; // the loop head sees the tail–head edge and returns
            }
        }

        // Rotation: break the non-forest spine edge after a neighbour of the
        // tail, reversing the suffix so that edge's far end becomes the tail.
        let flip_now = steps % 97 == 0;
        let mut pick = usize::MAX;
        if !flip_now {
            let mut count = 0usize;
            for &v in g.neighbors(tail) {
                let i = pos[v as usize];
                if i == OFF || i as usize + 3 > len {
                    continue;
                }
                let i = i as usize;
                if is_f(spine[i], spine[i + 1]) {
                    continue; // severing it would drop a forest edge
                }
                count += 1;
                if rng.random_range(0..count) == 0 {
                    pick = i;
                }
            }
        }
        if !closing && !flip_now && (pick == usize::MAX || drought % 61 == 60) {
            // Dry tail (or a long drought): splice into a breakable spine
            // edge instead, which needs no tail adjacency — a free vertex w
            // turns (a, b) into (a, w, b), a whole path does the same
            // through its endpoints.
            enum Splice {
                Free(u32),
                Path(usize, bool),
            }
            let mut count = 0usize;
            let mut hit: Option<(usize, Splice)> = None;
            for j in 0..len - 1 {
                let (a, b) = (spine[j], spine[j + 1]);
                if is_f(a, b) {
                    continue;
                }
                for &w in g.neighbors(a) {
                    if is_free[w as usize] && g.has_edge(w, b) {
                        count += 1;
                        if rng.random_range(0..count) == 0 {
                            hit = Some((j, Splice::Free(w)));
                        }
                    }
                }
                for (pi, p) in paths.iter().enumerate() {
                    if p.is_empty() {
                        continue; // already absorbed
                    }
                    let (e1, e2) = (p[0], *p.last().unwrap());
                    if g.has_edge(a, e1) && g.has_edge(e2, b) {
                        count += 1;
                        if rng.random_range(0..count) == 0 {
                            hit = Some((j, Splice::Path(pi, false)));
                        }
                    }
                    if g.has_edge(a, e2) && g.has_edge(e1, b) {
                        count += 1;
                        if rng.random_range(0..count) == 0 {
                            hit = Some((j, Splice::Path(pi, true)));
                        }
                    }
                }
            }
            if let Some((j, what)) = hit {
                match what {
                    Splice::Free(w) => {
                        is_free[w as usize] = false;
                        free_left -= 1;
                        spine.insert(j + 1, w);
                    }
                    Splice::Path(pi, reversed) => {
                        let mut p = std::mem::take(&mut paths[pi]);
                        end_of[p[0] as usize] = OFF;
                        end_of[*p.last().unwrap() as usize] = OFF;
                        if reversed {
                            p.reverse();
                        }
                        spine.splice(j + 1..j + 1, p);
                        alive -= 1;
                    }
                }
                for (i, &v) in spine.iter().enumerate() {
                    pos[v as usize] = i as u32;
                }
                last_progress = steps;
                forced_flips = 0;
                continue;
            }
        }
        if pick == usize::MAX {
            if forced_flips >= 2 {
                return Err((
                    alive + 1,
                    free_left,
                    "neither spine end can absorb, rotate, or splice".into(),
                ));
            }
            if !flip_now {
                forced_flips += 1;
            }
            spine.reverse();
            for (i, &v) in spine.iter().enumerate() {
                pos[v as usize] = i as u32;
            }
            continue;
        }
        forced_flips = 0;
        spine[pick + 1..].reverse();
        for (i, &v) in spine.iter().enumerate().skip(pick + 1) {
            pos[v as usize] = i as u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, standard, verify_hamilton_cycle};
    use crate::random::{sample_gnp, SampleSpec};

    #[test]
    fn finds_the_unique_cycle_of_c5() {
        let g = standard::cycle(5);
        let c = find_hamilton_cycle(&g, 1, 50_000).unwrap();
        assert!(verify_hamilton_cycle(&g, &c));
    }

    #[test]
    fn finds_a_cycle_in_k5() {
        let g = standard::complete(5);
        let c = find_hamilton_cycle(&g, 9, 50_000).unwrap();
        assert!(verify_hamilton_cycle(&g, &c));
    }

    #[test]
    fn fails_on_a_path_graph() {
        let g = standard::path(4);
        match find_hamilton_cycle(&g, 3, 10_000) {
            Err(HamiltonError::Failure { steps_used }) => assert_eq!(steps_used, 0),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn fails_on_petersen_within_budget() {
        let g = standard::petersen();
        let budget = 30_000;
        match find_hamilton_cycle(&g, 5, budget) {
            Err(HamiltonError::Failure { steps_used }) => assert!(steps_used >= budget),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn cycle_search_is_deterministic_per_seed() {
        let g = sample_gnp(&SampleSpec {
            n: 40,
            p: 0.3,
            seed: 11,
        })
        .unwrap();
        let a = find_hamilton_cycle(&g, 77, 200_000).unwrap();
        let b = find_hamilton_cycle(&g, 77, 200_000).unwrap();
        assert_eq!(a, b);
        assert!(verify_hamilton_cycle(&g, &a));
    }

    #[test]
    fn path_between_forced_route_on_c4() {
        let g = standard::cycle(4);
        let p = hamilton_path_between(&g, 0, 1, 123, 10_000).unwrap();
        assert_eq!(p, vec![0, 3, 2, 1]);
    }

    #[test]
    fn path_between_on_k4_and_a_path_graph() {
        let g = standard::complete(4);
        let p = hamilton_path_between(&g, 0, 3, 5, 10_000).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!((p[0], p[3]), (0, 3));
        for w in p.windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
        let line = standard::path(4);
        let p = hamilton_path_between(&line, 0, 3, 5, 10_000).unwrap();
        assert_eq!(p, vec![0, 1, 2, 3]);
    }

    #[test]
    fn path_between_rejects_bad_endpoints_and_disconnection() {
        let g = standard::cycle(4);
        assert!(matches!(
            hamilton_path_between(&g, 2, 2, 0, 1_000),
            Err(HamiltonError::InvalidArguments { .. })
        ));
        // Two disjoint edges: no spanning path exists.
        let h = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            hamilton_path_between(&h, 0, 3, 0, 5_000),
            Err(HamiltonError::Failure { .. })
        ));
    }

    #[test]
    fn packs_k5_into_two_cycles_with_empty_leftover() {
        let g = standard::complete(5);
        let r = pack_hamilton_cycles(&g, Some(2), 4, 5);
        assert_eq!(r.achieved, 2);
        assert_eq!(r.target, 2);
        assert_eq!(r.leftover.edge_count(), 0);
        let mut seen = std::collections::BTreeSet::new();
        for c in &r.cycles {
            assert!(verify_hamilton_cycle(&g, c));
            for e in c.edges() {
                assert!(seen.insert(e), "cycles share edge {e:?}");
            }
        }
    }

    #[test]
    fn packs_c6_trivially() {
        let g = standard::cycle(6);
        let r = pack_hamilton_cycles(&g, None, 0, 3);
        assert_eq!(r.target, 1);
        assert_eq!(r.achieved, 1);
        assert_eq!(r.leftover.edge_count(), 0);
    }

    #[test]
    fn packs_k7_to_full_target_with_rollback() {
        let g = standard::complete(7);
        let r = pack_hamilton_cycles(&g, None, 2, 40);
        assert_eq!(r.target, 3);
        assert_eq!(r.achieved, 3, "K7 splits into three Hamilton cycles");
        assert_eq!(r.leftover.edge_count(), 0);
    }

    #[test]
    fn packing_reports_shortfall_and_leftover_consistency() {
        let g = sample_gnp(&SampleSpec {
            n: 60,
            p: 0.5,
            seed: 3,
        })
        .unwrap();
        let r = pack_hamilton_cycles(&g, Some(5), 8, 10);
        assert_eq!(r.achieved, r.cycles.len());
        // Edge bookkeeping: leftover plus cycle edges partition E(g).
        let mut all: Vec<(u32, u32)> = r.leftover.edges().collect();
        for c in &r.cycles {
            all.extend(c.edges());
        }
        all.sort_unstable();
        let mut expect: Vec<(u32, u32)> = g.edges().collect();
        expect.sort_unstable();
        assert_eq!(all, expect);
        assert_eq!(r.achieved, 5);
    }

    #[test]
    fn connects_single_pair_in_k6() {
        let g = standard::complete(6);
        let ps = PairSet {
            pairs: vec![(0, 5)],
            forbidden_interior: vec![],
        };
        let paths = connect_pairs_disjoint(&g, &ps, 9, 10_000).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].first(), Some(&0));
        assert_eq!(paths[0].last(), Some(&5));
        for w in paths[0].windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
    }

    #[test]
    fn empty_pair_set_yields_no_paths() {
        let g = standard::complete(4);
        let paths = connect_pairs_disjoint(&g, &PairSet::default(), 0, 100).unwrap();
        assert!(paths.is_empty());
    }

    #[test]
    fn pair_connection_respects_disjoint_interiors() {
        // Star through a single hub: the second pair cannot reuse it.
        let star = build_graph(5, &[(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
        let ps = PairSet {
            pairs: vec![(0, 1), (2, 3)],
            forbidden_interior: vec![],
        };
        match connect_pairs_disjoint(&star, &ps, 1, 10_000) {
            Err(HamiltonError::PairsIncomplete { completed_pairs }) => {
                assert_eq!(completed_pairs, 1)
            }
            other => panic!("expected exhaustion after one pair, got {other:?}"),
        }
        // A second hub unblocks it.
        let two_hubs = build_graph(6, &[(0, 4), (1, 4), (2, 4), (3, 4), (2, 5), (3, 5)]).unwrap();
        let paths = connect_pairs_disjoint(&two_hubs, &ps, 1, 10_000).unwrap();
        let mut interiors = std::collections::BTreeSet::new();
        for p in &paths {
            for &v in &p[1..p.len() - 1] {
                assert!(interiors.insert(v), "interior {v} reused");
            }
        }
    }

    #[test]
    fn pair_connection_honours_forbidden_interiors() {
        let star = build_graph(5, &[(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
        let ps = PairSet {
            pairs: vec![(0, 1)],
            forbidden_interior: vec![4],
        };
        match connect_pairs_disjoint(&star, &ps, 0, 10_000) {
            Err(HamiltonError::PairsIncomplete { completed_pairs }) => {
                assert_eq!(completed_pairs, 0)
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn pair_connection_rejects_shared_endpoints() {
        let g = standard::complete(5);
        let ps = PairSet {
            pairs: vec![(0, 1), (1, 2)],
            forbidden_interior: vec![],
        };
        assert!(matches!(
            connect_pairs_disjoint(&g, &ps, 0, 100),
            Err(HamiltonError::InvalidArguments { .. })
        ));
    }

    #[test]
    fn extends_empty_forest_to_any_cycle() {
        let g = standard::cycle(5);
        let f = LinearForest::new();
        let plan = ExtensionPlan::for_forest(&g, &f, 2);
        let c = extend_forest_to_hamilton(&g, &f, &plan, 50_000).unwrap();
        assert!(verify_hamilton_cycle(&g, &c));
    }

    #[test]
    fn extends_single_edge_in_k5() {
        let g = standard::complete(5);
        let f = LinearForest::from_paths(vec![vec![0, 1]]);
        let plan = ExtensionPlan::for_forest(&g, &f, 7);
        let c = extend_forest_to_hamilton(&g, &f, &plan, 50_000).unwrap();
        assert!(verify_hamilton_cycle(&g, &c));
        let edges: std::collections::BTreeSet<_> = c.edges().into_iter().collect();
        assert!(edges.contains(&(0, 1)));
    }

    #[test]
    fn extends_a_matching_in_k6() {
        let g = standard::complete(6);
        let f = LinearForest::from_paths(vec![vec![0, 1], vec![2, 3]]);
        let plan = ExtensionPlan::for_forest(&g, &f, 13);
        let c = extend_forest_to_hamilton(&g, &f, &plan, 50_000).unwrap();
        assert!(verify_hamilton_cycle(&g, &c));
        let edges: std::collections::BTreeSet<_> = c.edges().into_iter().collect();
        assert!(edges.contains(&(0, 1)) && edges.contains(&(2, 3)));
    }

    #[test]
    fn extension_fails_across_components() {
        // Two disjoint triangles, one forest edge in each. Every vertex has
        // degree 2, so the forced-edge closure proves the impossibility
        // outright: the forced edges close two short cycles.
        let g = build_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let f = LinearForest::from_paths(vec![vec![0, 1], vec![3, 4]]);
        let plan = ExtensionPlan::for_forest(&g, &f, 0);
        match extend_forest_to_hamilton(&g, &f, &plan, 20_000) {
            Err(ExtensionError::PreconditionViolated { detail }) => {
                assert!(detail.contains("cycle smaller"), "unexpected detail: {detail}");
            }
            other => panic!("expected a precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn extension_enforces_hypotheses_when_asked() {
        let g = standard::complete(5);
        let f = LinearForest::from_paths(vec![vec![0, 1, 2, 3]]);
        let plan = ExtensionPlan::for_forest(&g, &f, 0).enforcing(3, 0);
        match extend_forest_to_hamilton(&g, &f, &plan, 10_000) {
            Err(ExtensionError::PreconditionViolated { .. }) => {}
            other => panic!("expected hypothesis rejection, got {other:?}"),
        }
    }

    #[test]
    fn extension_rejects_inconsistent_plans() {
        let g = standard::complete(5);
        let f = LinearForest::from_paths(vec![vec![0, 1]]);
        let mut plan = ExtensionPlan::for_forest(&g, &f, 0);
        plan.u1.clear(); // drop part of the cover
        plan.u2.clear();
        plan.u3.clear();
        assert!(matches!(
            extend_forest_to_hamilton(&g, &f, &plan, 1_000),
            Err(ExtensionError::InvalidPlan { .. })
        ));
    }

    #[test]
    fn extends_forests_carved_from_random_graphs() {
        for seed in 0..5u64 {
            let g = sample_gnp(&SampleSpec {
                n: 80,
                p: 0.3,
                seed: 100 + seed,
            })
            .unwrap();
            // Carve a few vertex-disjoint paths out of g greedily.
            let mut used = vec![false; 80];
            let mut paths = Vec::new();
            for start in [0u32, 20, 40] {
                if used[start as usize] {
                    continue;
                }
                let mut p = vec![start];
                used[start as usize] = true;
                let mut cur = start;
                for _ in 0..6 {
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&w| !used[w as usize]);
                    match next {
                        Some(w) => {
                            used[w as usize] = true;
                            p.push(w);
                            cur = w;
                        }
                        None => break,
                    }
                }
                if p.len() >= 2 {
                    paths.push(p);
                }
            }
            let f = LinearForest::from_paths(paths);
            let plan = ExtensionPlan::for_forest(&g, &f, 999 + seed);
            let c = extend_forest_to_hamilton(&g, &f, &plan, 400_000)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(verify_hamilton_cycle(&g, &c));
            let cycle_edges: std::collections::BTreeSet<_> = c.edges().into_iter().collect();
            for e in f.edges() {
                assert!(cycle_edges.contains(&e), "seed {seed}: forest edge {e:?} missing");
            }
        }
    }

    #[test]
    fn extension_uses_forest_edges_missing_from_g() {
        // Forest edge (0, 2) is absent from g = K4 minus (0, 2); the cycle
        // is built in the union and must still contain it.
        let g = build_graph(4, &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let f = LinearForest::from_paths(vec![vec![0, 2]]);
        let plan = ExtensionPlan::for_forest(&g, &f, 21);
        let c = extend_forest_to_hamilton(&g, &f, &plan, 50_000).unwrap();
        let edges: std::collections::BTreeSet<_> = c.edges().into_iter().collect();
        assert!(edges.contains(&(0, 2)));
        assert_eq!(c.order.len(), 4);
    }
}
