//! End-to-end construction of near-minimum Hamilton cycle covers.
//!
//! The pipeline runs in phases: pack edge-disjoint Hamilton cycles until the
//! greedy target is met, carve the leftover graph and its high-degree core,
//! decompose the leftover into linear forests, extend every forest to a
//! Hamilton cycle containing it, and emit a [`CoverCertificate`] together
//! with a structured [`PipelineReport`]. Every phase is a pure function of
//! its arguments and the configured seed, so identical inputs produce
//! byte-identical certificates and reports.
//!
//! Quality checks along the way (degree windows, core size, reservoir
//! degrees) yield verdicts that are recorded in the report but never abort
//! the run; only structural impossibilities (budget overruns, reinsertion
//! groups too small, graphs without enough Hamilton cycles) surface as
//! [`CoverError`]s.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::forest::{
    approx_linear_arboricity, decompose_with_core, merge_edges_into_forests, Bipartition,
    ForestCollection, ForestError, Provenance,
};
use crate::graph::{
    make_certificate, verify_cover, CoverCertificate, Graph, HamiltonCycle, LinearForest,
};
use crate::hamilton::{
    default_search_budget, derive_seed, extend_forest_to_hamilton, pack_hamilton_cycles,
    ExtensionPlan, PackingResult,
};
use crate::random::{PropertyReport, Verdict};

/// Largest vertex count the exact cover oracle will accept.
pub const MAX_ORACLE_VERTICES: usize = 8;

/// Slack used when the leftover is decomposed in one piece: small enough
/// that the forest count target collapses to exactly `ceil(degree / 2)`.
const DIRECT_SLACK: f64 = 1e-9;

/// Desk-scale factor on the per-piece max-degree bound. At the asymptotic
/// parameter point the bound has room to spare; at a few hundred vertices
/// the per-piece degrees concentrate around `degree / (t - 2)` with
/// fluctuations of the same order, so the check gets this much headroom.
const SPLIT_DEGREE_FACTOR: f64 = 3.0;

/// Desk-scale factors on the leftover max-degree window `[low * base,
/// high * base]` with `base = sqrt(2 p n ln n)`.
const WINDOW_LOW_FACTOR: f64 = 0.5;
const WINDOW_HIGH_FACTOR: f64 = 4.0;

/// Desk-scale factor on the core-attachment bound: every vertex should send
/// at most this fraction of the leftover max degree into the core and its
/// leftover neighbourhoods.
const ATTACHMENT_FACTOR: f64 = 0.5;

/// Fraction of the pieces whose reservoir every vertex must reach for the
/// reservoir-degree conclusion to hold.
const RESERVOIR_GOOD_FRACTION: f64 = 0.8;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("invalid configuration: {detail}")]
    BadConfig { detail: String },
    #[error("forest budget exceeded: the pieces decompose into {needed} linear forests but only {allowed} are allowed")]
    BudgetExceeded { needed: usize, allowed: usize },
    #[error("merge infeasible: displaced edges reach degree {delta_lprime} but a reinsertion group holds only {group_size} forests (need {})", 4 * delta_lprime + 1)]
    MergeInfeasible {
        delta_lprime: usize,
        group_size: usize,
    },
    #[error("precondition violated in {stage}: {detail}")]
    Precondition { stage: &'static str, detail: String },
    #[error("instance too large: {actual} vertices exceeds the exact-search limit of {limit}")]
    TooLarge { limit: usize, actual: usize },
    #[error("cover construction failed: {detail}")]
    Failure { detail: String },
}

/// Tunable parameters of the cover pipeline.
///
/// Two built-in profiles exist: [`PipelineConfig::desk`] with constants
/// sized for graphs of a few hundred to a few thousand vertices, and
/// [`PipelineConfig::paper`] with the asymptotic constants, which are
/// meaningful only for astronomically large graphs and are provided for
/// reference and extrapolation experiments. Profiles are named and
/// versioned; the active profile is echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Profile name, echoed into reports.
    pub profile: String,
    /// Number of pieces the leftover is split into.
    pub t: usize,
    /// High-degree margin: the core collects vertices of leftover degree at
    /// least `(1 - alpha)` times the leftover max degree.
    pub alpha: f64,
    /// Margin used by the standalone high-degree-set property check.
    pub prop_alpha: f64,
    /// Slack of the per-piece linear forest decomposition.
    pub eps_arb: f64,
    /// Extension pre-check ratio: fraction of `n * p` neighbours a vertex
    /// should keep outside any single forest.
    pub rho_v: f64,
    /// Reservoir-degree ratio: fraction of `n * p` edges a vertex should
    /// send into each piece's reservoir.
    pub rho_d: f64,
    /// Cap on the fraction of the max degree a vertex may send into the
    /// core during the core decomposition.
    pub core_ratio: f64,
    /// Reporting threshold on the displaced-edge degree during the merge,
    /// as a fraction of the leftover max degree.
    pub c_merge: f64,
    /// Packing rollback retries.
    pub pack_retries: u32,
    /// Fresh attempts at a leftover split before settling for the best.
    pub split_retries: u32,
    /// Extension attempts per forest before the forest counts as failed.
    pub extension_attempts: u32,
    /// Full pack-and-decompose retries after an extension failure.
    pub repack_rounds: u32,
    /// Multiplier on the default rotation-search budget.
    pub budget_factor: u32,
    /// Master seed; every phase derives its own stream from it.
    pub seed: u64,
}

impl PipelineConfig {
    /// Profile sized for desk-scale instances (hundreds to thousands of
    /// vertices).
    pub fn desk(seed: u64) -> Self {
        PipelineConfig {
            profile: "desk-v1".into(),
            t: 10,
            alpha: 0.05,
            prop_alpha: 0.01,
            eps_arb: 0.1,
            rho_v: 0.05,
            rho_d: 0.01,
            core_ratio: 0.25,
            c_merge: 0.2,
            pack_retries: 12,
            split_retries: 8,
            extension_attempts: 5,
            repack_rounds: 3,
            budget_factor: 4,
            seed,
        }
    }

    /// Profile with the asymptotic constants. The split and budget
    /// conclusions it encodes only hold for extremely large `n`; on desk
    /// instances expect the budget check to fail honestly.
    pub fn paper(seed: u64) -> Self {
        PipelineConfig {
            profile: "paper-v1".into(),
            t: 10_000,
            alpha: 1.0 / 450.0,
            prop_alpha: 0.01,
            eps_arb: 0.01,
            rho_v: 1e-9,
            rho_d: 5e-7,
            core_ratio: 0.25,
            c_merge: 1e-20,
            pack_retries: 12,
            split_retries: 8,
            extension_attempts: 5,
            repack_rounds: 3,
            budget_factor: 4,
            seed,
        }
    }

    /// Looks up a built-in profile by name.
    pub fn builtin(name: &str, seed: u64) -> Option<Self> {
        match name {
            "desk" | "desk-v1" => Some(Self::desk(seed)),
            "paper" | "paper-v1" => Some(Self::paper(seed)),
            _ => None,
        }
    }

    /// Checks the structural invariants every phase relies on.
    pub fn validate(&self) -> Result<(), CoverError> {
        let bad = |detail: String| Err(CoverError::BadConfig { detail });
        if self.t < 3 {
            return bad(format!("t = {} but the split needs at least 3 pieces", self.t));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} outside (0, 1)", self.alpha));
        }
        if !(self.prop_alpha > 0.0 && self.prop_alpha < 1.0) {
            return bad(format!("prop_alpha = {} outside (0, 1)", self.prop_alpha));
        }
        if !(self.eps_arb > 0.0) {
            return bad(format!("eps_arb = {} must be positive", self.eps_arb));
        }
        for (name, v) in [
            ("rho_v", self.rho_v),
            ("rho_d", self.rho_d),
            ("core_ratio", self.core_ratio),
            ("c_merge", self.c_merge),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} = {v} outside (0, 1]"));
            }
        }
        if self.extension_attempts == 0 {
            return bad("extension_attempts must be at least 1".into());
        }
        if self.budget_factor == 0 {
            return bad("budget_factor must be at least 1".into());
        }
        Ok(())
    }
}

/// The leftover graph after packing, its high-degree core, and the forest
/// count the rest of the pipeline works towards.
#[derive(Debug, Clone)]
pub struct LeftoverPlan {
    /// The input graph minus every packed cycle.
    pub leftover: Graph,
    /// Vertices whose leftover degree is at least `(1 - alpha)` times the
    /// leftover max degree, sorted.
    pub core: Vec<u32>,
    /// `ceil(leftover max degree / 2)`: how many extension cycles cover the
    /// leftover.
    pub k: usize,
    /// Quality verdicts on the leftover shape; informational only.
    pub diagnostics: Vec<PropertyReport>,
}

/// An edge partition of the leftover-minus-core into pieces, with one
/// reservoir of helper vertices per piece.
#[derive(Debug, Clone)]
pub struct PartitionPlan {
    /// Piece `i` holds the edges labelled `i`; all pieces share the full
    /// vertex set.
    pub pieces: Vec<Graph>,
    /// Reservoir of piece `i`: its vertex class minus the core, disjoint
    /// from the piece's covered vertices, sorted.
    pub reservoirs: Vec<Vec<u32>>,
    /// `reservoir_degrees[i][v]`: edges from `v` into reservoir `i` after
    /// removing vertices that the leftover attaches to the core away from
    /// `v`.
    pub reservoir_degrees: Vec<Vec<usize>>,
    /// Verdicts of the three split conclusions for the returned attempt.
    pub verdicts: Vec<PropertyReport>,
    /// Number of split attempts consumed (1 means the first one was kept).
    pub attempts: u32,
}

/// One phase line of a [`PipelineReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEntry {
    pub name: String,
    pub verdict: Verdict,
    pub metrics: Value,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingSummary {
    pub target: usize,
    pub achieved: usize,
    pub shortfall: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeftoverSummary {
    pub edges: usize,
    pub max_degree: usize,
    pub core_size: usize,
    pub k: usize,
}

/// Structured description of one pipeline run. Serialises with stable key
/// order and contains no wall-clock data, so identical runs serialise to
/// identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub profile: PipelineConfig,
    pub n: usize,
    pub edge_count: usize,
    pub p: f64,
    pub max_degree: usize,
    pub min_degree: usize,
    /// `ceil(max_degree / 2)`: the cycle count the pipeline aims for.
    pub target: usize,
    pub cycles: usize,
    pub valid: bool,
    pub optimal: bool,
    /// Which construction produced the forests: `packing-only`,
    /// `split-merge`, or `direct`.
    pub route: String,
    pub repack_rounds_used: u32,
    pub packing: PackingSummary,
    pub leftover: LeftoverSummary,
    pub phases: Vec<PhaseEntry>,
    pub notes: Vec<String>,
}

const SALT_PACK: u64 = 0x7061_636b;
const SALT_SPLIT: u64 = 0x7370_6c69;
const SALT_ROUND: u64 = 0x726f_756e;
const SALT_EXTEND: u64 = 0x6578_7464;

/// Packs Hamilton cycles out of `g` and describes what is left.
///
/// The packing target is the greedy `floor(min_degree / 2)`; a shortfall is
/// recorded, not raised. The core collects the leftover's high-degree
/// vertices, and three diagnostics judge whether the leftover looks the way
/// a random instance should: max degree inside a `sqrt(2 p n ln n)` window,
/// core no larger than `n^(1/10)`, and no vertex attaching too heavily to
/// the core and its leftover neighbourhoods. Their verdicts are data for
/// the report; construction continues regardless.
pub fn compute_leftover(
    g: &Graph,
    p: f64,
    cfg: &PipelineConfig,
) -> Result<(PackingResult, LeftoverPlan), CoverError> {
    cfg.validate()?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(CoverError::BadConfig {
            detail: format!("edge probability {p} outside (0, 1]"),
        });
    }
    let n = g.vertex_count();
    let packing = pack_hamilton_cycles(g, None, derive_seed(cfg.seed, SALT_PACK), cfg.pack_retries);
    let leftover = packing.leftover.clone();
    debug_assert_eq!(
        g.edge_count(),
        packing.achieved * n + leftover.edge_count(),
        "packed cycles and leftover must partition the edge set"
    );
    let dl = leftover.max_degree();
    let threshold = (1.0 - cfg.alpha) * dl as f64;
    let core: Vec<u32> = if dl == 0 {
        Vec::new()
    } else {
        (0..n as u32)
            .filter(|&v| leftover.degree(v) as f64 >= threshold)
            .collect()
    };

    let nf = n as f64;
    let base = (2.0 * p * nf * nf.max(2.0).ln()).sqrt();
    let (low, high) = (WINDOW_LOW_FACTOR * base, WINDOW_HIGH_FACTOR * base);
    let window_verdict = if (dl as f64) >= low && (dl as f64) <= high {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    let mut diagnostics = vec![PropertyReport {
        property: "leftover-max-degree-window".into(),
        verdict: window_verdict,
        witness: json!({ "max_degree": dl }),
        stats: json!({ "low": low, "high": high, "edges": leftover.edge_count() }),
        params: json!({
            "low_factor": WINDOW_LOW_FACTOR,
            "high_factor": WINDOW_HIGH_FACTOR,
            "p": p,
        }),
    }];

    let core_cap = nf.powf(0.1);
    diagnostics.push(PropertyReport {
        property: "core-size".into(),
        verdict: if (core.len() as f64) <= core_cap {
            Verdict::Holds
        } else {
            Verdict::Violated
        },
        witness: json!({ "core": core }),
        stats: json!({ "core_size": core.len(), "cap": core_cap }),
        params: json!({ "alpha": cfg.alpha, "degree_threshold": threshold }),
    });

    // Max over v of the edges from v into the core plus the leftover
    // neighbourhoods of the other core vertices.
    let core_bits = core_bitmasks(&leftover, &core);
    let mut worst = 0usize;
    let mut worst_v = 0u32;
    for v in 0..n as u32 {
        let vbit = core_bits.bit_of(v);
        let count = g
            .neighbors(v)
            .iter()
            .filter(|&&w| core_bits.in_core(w) || core_bits.attached(w) & !vbit != 0)
            .count();
        if count > worst {
            worst = count;
            worst_v = v;
        }
    }
    let attach_cap = ATTACHMENT_FACTOR * dl as f64;
    diagnostics.push(PropertyReport {
        property: "core-attachment".into(),
        verdict: if worst as f64 <= attach_cap {
            Verdict::Holds
        } else {
            Verdict::Violated
        },
        witness: json!({ "vertex": worst_v, "attachment": worst }),
        stats: json!({ "max_attachment": worst, "cap": attach_cap }),
        params: json!({ "factor": ATTACHMENT_FACTOR }),
    });

    let plan = LeftoverPlan {
        leftover,
        core,
        k: dl.div_ceil(2),
        diagnostics,
    };
    Ok((packing, plan))
}

/// Per-vertex bitmask bookkeeping for core adjacency: bit `j` of
/// `attached(w)` says whether `w` is a leftover-neighbour of the `j`-th core
/// vertex. Cores beyond 64 vertices saturate into a single overflow bit,
/// which only makes the recorded attachment counts conservative.
struct CoreBits {
    index: Vec<u32>,
    attached: Vec<u64>,
    in_core: Vec<bool>,
}

const CORE_NONE: u32 = u32::MAX;

impl CoreBits {
    fn bit_of(&self, v: u32) -> u64 {
        match self.index[v as usize] {
            CORE_NONE => 0,
            j if j >= 63 => 0,
            j => 1u64 << j,
        }
    }
    fn attached(&self, w: u32) -> u64 {
        self.attached[w as usize]
    }
    fn in_core(&self, w: u32) -> bool {
        self.in_core[w as usize]
    }
}

fn core_bitmasks(leftover: &Graph, core: &[u32]) -> CoreBits {
    let n = leftover.vertex_count();
    let mut index = vec![CORE_NONE; n];
    let mut in_core = vec![false; n];
    for (j, &b) in core.iter().enumerate() {
        index[b as usize] = (j as u32).min(63);
        in_core[b as usize] = true;
    }
    let mut attached = vec![0u64; n];
    for &b in core {
        let bit = 1u64 << index[b as usize].min(63);
        for &w in leftover.neighbors(b) {
            attached[w as usize] |= bit;
        }
    }
    CoreBits {
        index,
        attached,
        in_core,
    }
}

/// Splits the leftover-minus-core edges into `t` pieces with one reservoir
/// per piece.
///
/// Vertices are first classed uniformly into `t` groups; an edge then draws
/// its piece label uniformly from the labels that avoid both endpoints'
/// classes, so no piece covers a vertex of its own class and the class
/// minus the core can serve as the piece's reservoir. Attempts are retried
/// with fresh derived seeds until three conclusions hold — per-piece max
/// degree within a scaled `degree / (t - 2)` bound, reservoirs of size at
/// least `n / 2t`, and every vertex keeping usable reservoir degree in most
/// pieces — otherwise the best attempt is returned with its verdicts.
/// Split quality is data, not an error.
pub fn split_leftover(
    plan: &LeftoverPlan,
    g: &Graph,
    cfg: &PipelineConfig,
) -> Result<PartitionPlan, CoverError> {
    cfg.validate()?;
    let n = g.vertex_count();
    let t = cfg.t;
    if n == 0 {
        return Err(CoverError::Precondition {
            stage: "split",
            detail: "cannot split an empty graph".into(),
        });
    }
    let leftover = &plan.leftover;
    let in_core: Vec<bool> = {
        let mut m = vec![false; n];
        for &b in &plan.core {
            m[b as usize] = true;
        }
        m
    };
    let body_edges: Vec<(u32, u32)> = leftover
        .edges()
        .filter(|&(u, v)| !in_core[u as usize] && !in_core[v as usize])
        .collect();
    let core_bits = core_bitmasks(leftover, &plan.core);

    let mut best: Option<(usize, PartitionPlan)> = None;
    for attempt in 0..=cfg.split_retries {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.seed,
            SALT_SPLIT.wrapping_add(attempt as u64),
        ));
        let class: Vec<usize> = (0..n).map(|_| rng.random_range(0..t)).collect();
        let mut piece_edges: Vec<Vec<(u32, u32)>> = vec![Vec::new(); t];
        for &(u, v) in &body_edges {
            let (cu, cv) = (class[u as usize], class[v as usize]);
            let excluded = if cu == cv { 1 } else { 2 };
            let mut pick = rng.random_range(0..t - excluded);
            let mut label = usize::MAX;
            for l in 0..t {
                if l == cu || l == cv {
                    continue;
                }
                if pick == 0 {
                    label = l;
                    break;
                }
                pick -= 1;
            }
            piece_edges[label].push((u, v));
        }
        let pieces: Vec<Graph> = piece_edges
            .iter()
            .map(|es| Graph::from_edges_unchecked(n, es.clone()))
            .collect();
        debug_assert_eq!(
            pieces.iter().map(Graph::edge_count).sum::<usize>(),
            body_edges.len(),
            "pieces must partition the leftover-minus-core edges"
        );
        let reservoirs: Vec<Vec<u32>> = (0..t)
            .map(|i| {
                (0..n as u32)
                    .filter(|&v| class[v as usize] == i && !in_core[v as usize])
                    .collect()
            })
            .collect();
        #[cfg(debug_assertions)]
        for (i, r) in reservoirs.iter().enumerate() {
            for &v in r {
                debug_assert!(!in_core[v as usize] && pieces[i].degree(v) == 0);
            }
        }

        // Conclusion 1: every piece keeps its max degree under the scaled
        // even-share bound.
        let piece_bound = SPLIT_DEGREE_FACTOR * (1.0 - 0.75 * cfg.alpha)
            * leftover.max_degree() as f64
            / (t - 2) as f64;
        let worst_piece_degree = pieces.iter().map(Graph::max_degree).max().unwrap_or(0);
        let c1 = worst_piece_degree as f64 <= piece_bound;

        // Conclusion 2: reservoirs hold at least n / 2t vertices.
        let min_reservoir = reservoirs.iter().map(Vec::len).min().unwrap_or(0);
        let c2 = min_reservoir as f64 >= n as f64 / (2 * t) as f64;

        // Conclusion 3: for most pieces, each vertex keeps enough edges into
        // the reservoir after discarding reservoir vertices that the
        // leftover attaches to the core away from the vertex itself.
        let mut reservoir_degrees: Vec<Vec<usize>> = Vec::with_capacity(t);
        for r in &reservoirs {
            let mut in_r = vec![false; n];
            for &v in r {
                in_r[v as usize] = true;
            }
            let row: Vec<usize> = (0..n as u32)
                .map(|v| {
                    let vbit = core_bits.bit_of(v);
                    g.neighbors(v)
                        .iter()
                        .filter(|&&w| in_r[w as usize] && core_bits.attached(w) & !vbit == 0)
                        .count()
                })
                .collect();
            reservoir_degrees.push(row);
        }
        let need = (cfg.rho_d * n as f64 * plan_density(g)).max(1.0);
        let good_pieces_needed = (RESERVOIR_GOOD_FRACTION * t as f64).ceil() as usize;
        let min_good = (0..n)
            .map(|v| {
                (0..t)
                    .filter(|&i| reservoir_degrees[i][v] as f64 >= need)
                    .count()
            })
            .min()
            .unwrap_or(t);
        let c3 = min_good >= good_pieces_needed;

        let verdicts = vec![
            PropertyReport {
                property: "split-piece-degree".into(),
                verdict: verdict_of(c1),
                witness: json!({ "worst_piece_degree": worst_piece_degree }),
                stats: json!({ "bound": piece_bound }),
                params: json!({ "t": t, "alpha": cfg.alpha, "factor": SPLIT_DEGREE_FACTOR }),
            },
            PropertyReport {
                property: "split-reservoir-size".into(),
                verdict: verdict_of(c2),
                witness: json!({ "min_reservoir": min_reservoir }),
                stats: json!({ "bound": n as f64 / (2 * t) as f64 }),
                params: json!({ "t": t }),
            },
            PropertyReport {
                property: "split-reservoir-degree".into(),
                verdict: verdict_of(c3),
                witness: json!({ "min_good_pieces": min_good }),
                stats: json!({ "per_piece_need": need, "good_pieces_needed": good_pieces_needed }),
                params: json!({ "rho_d": cfg.rho_d, "good_fraction": RESERVOIR_GOOD_FRACTION }),
            },
        ];
        let score = [c1, c2, c3].iter().filter(|&&c| c).count();
        let candidate = PartitionPlan {
            pieces,
            reservoirs,
            reservoir_degrees,
            verdicts,
            attempts: attempt + 1,
        };
        if score == 3 {
            return Ok(candidate);
        }
        if best.as_ref().map_or(true, |(s, _)| score > *s) {
            best = Some((score, candidate));
        }
    }
    let (_, mut kept) = best.expect("at least one split attempt ran");
    kept.attempts = cfg.split_retries + 1;
    Ok(kept)
}

fn verdict_of(ok: bool) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// Edge density of `g`, used to scale reservoir thresholds when the caller
/// did not thread `p` through; falls back to 1/2 on tiny graphs.
fn plan_density(g: &Graph) -> f64 {
    let n = g.vertex_count();
    if n < 2 {
        return 0.5;
    }
    (2.0 * g.edge_count() as f64) / (n as f64 * (n - 1) as f64)
}

/// Decomposes every piece into linear forests and pads the collection to
/// exactly `ceil((1 - alpha/2) * k)` forests.
///
/// Padding uses single-vertex forests on non-core vertices so each padded
/// forest still admits an extension. If the pieces need more forests than
/// the budget allows — which is the expected outcome at desk scale, where
/// `t / (t - 2)` times the decomposition slack always exceeds
/// `1 - alpha/2` — the call fails with the exact counts so the caller can
/// fall back to decomposing the leftover in one piece.
pub fn build_f0(
    pp: &PartitionPlan,
    plan: &LeftoverPlan,
    cfg: &PipelineConfig,
) -> Result<ForestCollection, CoverError> {
    cfg.validate()?;
    if plan.k == 0 {
        return Err(CoverError::Precondition {
            stage: "forests-low",
            detail: "the leftover has no edges, so there is no forest budget to fill".into(),
        });
    }
    let allowed = ((1.0 - cfg.alpha / 2.0) * plan.k as f64).ceil() as usize;
    let mut forests: Vec<LinearForest> = Vec::new();
    for piece in &pp.pieces {
        if piece.edge_count() == 0 {
            continue;
        }
        let arb = approx_linear_arboricity(piece, cfg.eps_arb);
        forests.extend(arb.forests.forests);
    }
    if forests.len() > allowed {
        return Err(CoverError::BudgetExceeded {
            needed: forests.len(),
            allowed,
        });
    }
    let n = plan.leftover.vertex_count();
    let in_core: std::collections::BTreeSet<u32> = plan.core.iter().copied().collect();
    let mut pad_pool = (0..n as u32).filter(|v| !in_core.contains(v)).cycle();
    while forests.len() < allowed {
        match pad_pool.next() {
            Some(v) => forests.push(LinearForest::singleton(v)),
            None => forests.push(LinearForest::new()),
        }
    }
    Ok(ForestCollection::new(Provenance::F0, forests))
}

/// Decomposes the core-incident leftover edges into exactly `k` linear
/// forests, padding with empty forests.
///
/// The vertex set splits into the core and the rest; the rest is
/// independent in the core-incident subgraph by construction, so the
/// star-and-cherry decomposition applies. An empty core yields `k` empty
/// forests.
pub fn build_f1(plan: &LeftoverPlan, cfg: &PipelineConfig) -> Result<ForestCollection, CoverError> {
    cfg.validate()?;
    let n = plan.leftover.vertex_count();
    let in_core: Vec<bool> = {
        let mut m = vec![false; n];
        for &b in &plan.core {
            m[b as usize] = true;
        }
        m
    };
    let core_graph = plan
        .leftover
        .filter_edges(|u, v| in_core[u as usize] || in_core[v as usize]);
    if plan.core.is_empty() || core_graph.edge_count() == 0 {
        return Ok(ForestCollection::new(
            Provenance::F1,
            vec![LinearForest::new(); plan.k],
        ));
    }
    let bp = Bipartition {
        a: (0..n as u32).filter(|&v| !in_core[v as usize]).collect(),
        b: plan.core.clone(),
    };
    let decomposed =
        decompose_with_core(&core_graph, &bp, cfg.core_ratio).map_err(forest_error("forests-core"))?;
    let mut forests = decomposed.forests;
    if forests.len() > plan.k {
        return Err(CoverError::Precondition {
            stage: "forests-core",
            detail: format!(
                "core decomposition produced {} forests, above the overall budget k = {}",
                forests.len(),
                plan.k
            ),
        });
    }
    forests.resize(plan.k, LinearForest::new());
    Ok(ForestCollection::new(Provenance::F1, forests))
}

fn forest_error(stage: &'static str) -> impl Fn(ForestError) -> CoverError {
    move |e| CoverError::Precondition {
        stage,
        detail: e.to_string(),
    }
}

/// Merges the piece forests into the core forests index by index.
///
/// Where a piece forest touches its partner's vertices, the piece edges at
/// those vertices are displaced; the union of what remains is again a
/// linear forest. Displaced edges are regrouped by their original piece and
/// reinserted into the unpaired core forests, which are partitioned into
/// `t` groups for that purpose. A group smaller than four times the
/// displaced degree plus one cannot absorb its share and fails with the
/// exact numbers.
pub fn merge_f0_f1(
    f0: &ForestCollection,
    f1: &ForestCollection,
    plan: &LeftoverPlan,
    pp: &PartitionPlan,
    cfg: &PipelineConfig,
) -> Result<ForestCollection, CoverError> {
    cfg.validate()?;
    if f1.forests.len() != plan.k {
        return Err(CoverError::Precondition {
            stage: "merge",
            detail: format!(
                "expected exactly k = {} core forests, got {}",
                plan.k,
                f1.forests.len()
            ),
        });
    }
    if f0.forests.len() > f1.forests.len() {
        return Err(CoverError::Precondition {
            stage: "merge",
            detail: format!(
                "{} piece forests cannot pair into {} core forests",
                f0.forests.len(),
                f1.forests.len()
            ),
        });
    }
    if f0.forests.is_empty() {
        return Ok(ForestCollection::new(Provenance::Merged, f1.forests.clone()));
    }
    let n = plan.leftover.vertex_count();
    let m = f0.forests.len();
    let mut merged: Vec<LinearForest> = Vec::with_capacity(plan.k);
    let mut displaced: Vec<(u32, u32)> = Vec::new();
    for j in 0..m {
        let touched: std::collections::BTreeSet<u32> =
            f1.forests[j].edges().iter().flat_map(|&(u, v)| [u, v]).collect();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for &(u, v) in &f0.forests[j].edges() {
            if touched.contains(&u) || touched.contains(&v) {
                displaced.push((u, v));
            } else {
                edges.push((u, v));
            }
        }
        edges.extend(f1.forests[j].edges());
        debug_assert!(
            crate::graph::is_linear_forest(n, &edges),
            "a pairwise merge must stay a linear forest"
        );
        merged.push(LinearForest::from_paths(
            crate::graph::paths_from_forest_edges(n, &edges),
        ));
    }

    let mut mult = vec![0usize; n];
    for &(u, v) in &displaced {
        mult[u as usize] += 1;
        mult[v as usize] += 1;
    }
    let delta_lprime = mult.iter().copied().max().unwrap_or(0);

    let spare = &f1.forests[m..];
    if displaced.is_empty() {
        merged.extend_from_slice(spare);
        return Ok(ForestCollection::new(Provenance::Merged, merged));
    }

    // Regroup the displaced edges by originating piece and hand piece i's
    // share to group i of the spare forests.
    let t = pp.pieces.len();
    let mut shares: Vec<Vec<(u32, u32)>> = vec![Vec::new(); t];
    'edges: for &(u, v) in &displaced {
        for (i, piece) in pp.pieces.iter().enumerate() {
            if piece.has_edge(u, v) {
                shares[i].push((u, v));
                continue 'edges;
            }
        }
        shares[0].push((u, v));
    }
    let group_size = spare.len() / t;
    for (i, share) in shares.iter().enumerate() {
        if share.is_empty() {
            continue;
        }
        if group_size < 4 * delta_lprime + 1 {
            return Err(CoverError::MergeInfeasible {
                delta_lprime,
                group_size,
            });
        }
        let group = spare[i * group_size..(i + 1) * group_size].to_vec();
        let h = Graph::from_edges_unchecked(n, share.clone());
        let reinserted = merge_edges_into_forests(
            ForestCollection::new(Provenance::F1, group),
            &h,
            delta_lprime,
        )
        .map_err(forest_error("merge"))?;
        merged.extend(reinserted.forests);
    }
    // Groups that received nothing, and the remainder of the division, pass
    // through unchanged.
    for (i, share) in shares.iter().enumerate() {
        if share.is_empty() && group_size > 0 {
            merged.extend_from_slice(&spare[i * group_size..(i + 1) * group_size]);
        }
    }
    merged.extend_from_slice(&spare[t * group_size..]);
    debug_assert_eq!(merged.len(), plan.k);
    Ok(ForestCollection::new(Provenance::Merged, merged))
}

/// Result of the exact minimum-cover search on tiny graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinCover {
    /// Minimum number of Hamilton cycles whose union covers every edge.
    Exact(usize),
    /// Some edge lies on no Hamilton cycle, so no cover exists.
    Infeasible,
}

/// Computes the exact minimum Hamilton cycle cover size by enumeration.
///
/// Enumerates every Hamilton cycle (each once, up to rotation and
/// reflection), then solves minimum set cover over the edge set by
/// branching on the least-coverable edge with a `ceil(uncovered degree /
/// 2)` bound. Graphs above [`MAX_ORACLE_VERTICES`] vertices are refused.
pub fn brute_force_min_cover(g: &Graph) -> Result<MinCover, CoverError> {
    let n = g.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(CoverError::TooLarge {
            limit: MAX_ORACLE_VERTICES,
            actual: n,
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(MinCover::Exact(0));
    }
    if n < 3 {
        return Ok(MinCover::Infeasible);
    }
    let edge_index: std::collections::BTreeMap<(u32, u32), usize> =
        g.edges().enumerate().map(|(i, e)| (e, i)).collect();

    // Enumerate cycles as bitmasks over the edge index space. Fixing vertex
    // 0 first and orienting so the second vertex is smaller than the last
    // visits each cycle exactly once.
    let mut cycles: Vec<u32> = Vec::new();
    let mut order: Vec<u32> = (1..n as u32).collect();
    permute_cycles(g, &edge_index, &mut order, 0, &mut cycles);
    let all_mask: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut coverable: u32 = 0;
    for &c in &cycles {
        coverable |= c;
    }
    if coverable != all_mask {
        return Ok(MinCover::Infeasible);
    }

    // Iterative deepening from the degree lower bound.
    let lower = g.max_degree().div_ceil(2);
    let mut edge_cycles: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (ci, &c) in cycles.iter().enumerate() {
        for (e, ec) in edge_cycles.iter_mut().enumerate() {
            if c & (1 << e) != 0 {
                ec.push(ci);
            }
        }
    }
    let degree_bound = |mask: u32| -> usize {
        let mut deg = vec![0usize; n];
        for (&(u, v), &e) in &edge_index {
            if mask & (1 << e) == 0 {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
        }
        deg.iter().max().copied().unwrap_or(0).div_ceil(2)
    };
    for budget in lower..=cycles.len().max(lower) {
        if cover_search(all_mask, 0, budget, &cycles, &edge_cycles, &degree_bound) {
            return Ok(MinCover::Exact(budget));
        }
    }
    Ok(MinCover::Infeasible)
}

fn permute_cycles(
    g: &Graph,
    edge_index: &std::collections::BTreeMap<(u32, u32), usize>,
    order: &mut Vec<u32>,
    depth: usize,
    out: &mut Vec<u32>,
) {
    let k = order.len();
    if depth == k {
        if order[0] > order[k - 1] {
            return; // mirror image; the reversed orientation was counted
        }
        let mut prev = 0u32;
        let mut mask = 0u32;
        for &v in order.iter() {
            if !g.has_edge(prev, v) {
                return;
            }
            mask |= 1 << edge_index[&(prev.min(v), prev.max(v))];
            prev = v;
        }
        if !g.has_edge(prev, 0) {
            return;
        }
        mask |= 1 << edge_index[&(0, prev)];
        out.push(mask);
        return;
    }
    for i in depth..k {
        order.swap(depth, i);
        // Prune: the partial walk must already be a path from vertex 0.
        let prev = if depth == 0 { 0 } else { order[depth - 1] };
        if g.has_edge(prev, order[depth]) {
            permute_cycles(g, edge_index, order, depth + 1, out);
        }
        order.swap(depth, i);
    }
}

fn cover_search(
    uncovered: u32,
    used: usize,
    budget: usize,
    cycles: &[u32],
    edge_cycles: &[Vec<usize>],
    degree_bound: &impl Fn(u32) -> usize,
) -> bool {
    if uncovered == 0 {
        return true;
    }
    if used >= budget || used + degree_bound(!uncovered) > budget {
        return false;
    }
    // Branch on the uncovered edge with the fewest covering cycles.
    let pick = (0..edge_cycles.len())
        .filter(|&e| uncovered & (1 << e) != 0)
        .min_by_key(|&e| edge_cycles[e].len())
        .expect("some edge is uncovered");
    for &ci in &edge_cycles[pick] {
        if cover_search(
            uncovered & !cycles[ci],
            used + 1,
            budget,
            cycles,
            edge_cycles,
            degree_bound,
        ) {
            return true;
        }
    }
    false
}

/// Builds a cover of `g` by Hamilton cycles and reports how it went.
///
/// The construction packs cycles greedily, then covers the leftover with
/// `ceil(leftover degree / 2)` extension cycles, one per linear forest of a
/// leftover decomposition, for `ceil(degree / 2)` cycles in total. The
/// piecewise split-and-merge decomposition is attempted first and its
/// verdicts recorded; whenever its budget arithmetic fails — the norm away
/// from asymptotic sizes — the leftover is decomposed in one piece
/// instead. Extension failures trigger fresh packings, and as a last
/// resort a stubborn forest is split in two and covered by two cycles,
/// trading optimality for a valid certificate. Certificates always verify;
/// `Err` means no full cover was constructed at all.
pub fn cover(
    g: &Graph,
    p: f64,
    cfg: &PipelineConfig,
) -> Result<(CoverCertificate, PipelineReport), CoverError> {
    cfg.validate()?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(CoverError::BadConfig {
            detail: format!("edge probability {p} outside (0, 1]"),
        });
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut notes: Vec<String> = Vec::new();
    if n > 0 && p > (n as f64).powf(-2.0 / 3.0) {
        notes.push(format!(
            "p = {p} exceeds n^(-2/3); the construction runs heuristically in this density regime"
        ));
    }
    if m == 0 {
        let cert = make_certificate(g, Vec::new());
        let report = assemble_report(g, p, cfg, &cert, "packing-only", 0, None, None, Vec::new(), notes);
        return Ok((cert, report));
    }
    if n < 3 {
        return Err(CoverError::Failure {
            detail: format!("{n} vertices cannot carry a Hamilton cycle, yet edges need covering"),
        });
    }

    let mut phases: Vec<PhaseEntry> = Vec::new();
    let mut last_failure = String::new();
    for round in 0..=cfg.repack_rounds {
        let mut cfg_r = cfg.clone();
        cfg_r.seed = derive_seed(cfg.seed, SALT_ROUND.wrapping_add(round as u64));
        let (packing, plan) = compute_leftover(g, p, &cfg_r)?;
        phases.push(PhaseEntry {
            name: "pack".into(),
            verdict: verdict_of(packing.achieved >= packing.target),
            metrics: json!({
                "round": round,
                "target": packing.target,
                "achieved": packing.achieved,
                "shortfall": packing.target - packing.achieved,
            }),
            seed: cfg_r.seed,
        });
        phases.push(PhaseEntry {
            name: "leftover".into(),
            verdict: summary_verdict(&plan.diagnostics),
            metrics: json!({
                "round": round,
                "edges": plan.leftover.edge_count(),
                "max_degree": plan.leftover.max_degree(),
                "core_size": plan.core.len(),
                "k": plan.k,
                "diagnostics": plan.diagnostics,
            }),
            seed: cfg_r.seed,
        });

        if plan.leftover.edge_count() == 0 {
            let cert = make_certificate(g, packing.cycles.clone());
            let report = assemble_report(
                g,
                p,
                cfg,
                &cert,
                "packing-only",
                round,
                Some(&packing),
                Some(&plan),
                phases,
                notes,
            );
            return Ok((cert, report));
        }

        let (forests, route) = decompose_leftover(g, &plan, &cfg_r, round, &mut phases)?;
        if forests.forests.len() > plan.k && round < cfg.repack_rounds {
            // A different packing usually leaves a leftover that fits the
            // budget; settle for an over-budget decomposition only once the
            // retries are spent.
            notes.push(format!(
                "round {round}: the leftover decomposed into {} forests against a budget of {}; repacking",
                forests.forests.len(),
                plan.k,
            ));
            continue;
        }
        precheck_extension(g, p, &forests, &cfg_r, round, &mut phases);

        match extend_forests(g, &forests, &cfg_r, round, round == cfg.repack_rounds, &mut phases) {
            Ok((cycles, split_count)) => {
                let mut all = packing.cycles.clone();
                all.extend(cycles);
                let cert = make_certificate(g, all);
                if !verify_cover(g, &cert).valid {
                    // Soundness guard: never emit a certificate that fails
                    // its own verifier. Treat it like an extension failure
                    // and let the remaining rounds or the fallback run.
                    let detail = "assembled certificate failed verification".to_string();
                    notes.push(format!("round {round}: {detail}"));
                    last_failure = detail;
                    continue;
                }
                if split_count > 0 {
                    notes.push(format!(
                        "{split_count} forest(s) were split in two during extension; the cover is valid but above the target count"
                    ));
                }
                let report = assemble_report(
                    g,
                    p,
                    cfg,
                    &cert,
                    route,
                    round,
                    Some(&packing),
                    Some(&plan),
                    phases,
                    notes,
                );
                debug_assert!(report.valid, "emitted certificates must verify");
                return Ok((cert, report));
            }
            Err(detail) => {
                notes.push(format!("round {round}: {detail}"));
                last_failure = detail;
            }
        }
    }

    // Last resort: cover the leftover one matching at a time. A matching
    // leaves every vertex a spare slot, so forests never collide with the
    // edges that degree-2 vertices force into every cycle. Roughly twice as
    // many cycles as the target, but a valid cover beats none.
    let mut cfg_m = cfg.clone();
    cfg_m.seed = derive_seed(cfg.seed, SALT_ROUND.wrapping_add(0x4d41));
    let (packing, plan) = compute_leftover(g, p, &cfg_m)?;
    let matchings = greedy_matchings(&plan.leftover);
    phases.push(PhaseEntry {
        name: "decompose".into(),
        verdict: verdict_of(matchings.len() <= plan.k),
        metrics: json!({
            "route": "matching-fallback",
            "forests": matchings.len(),
            "k": plan.k,
        }),
        seed: cfg_m.seed,
    });
    let collection = ForestCollection::new(
        Provenance::Generic,
        matchings
            .into_iter()
            .map(|m| LinearForest::from_paths(crate::graph::paths_from_forest_edges(n, &m)))
            .collect(),
    );
    match extend_forests(g, &collection, &cfg_m, cfg.repack_rounds + 1, true, &mut phases) {
        Ok((cycles, _)) => {
            let mut all = packing.cycles.clone();
            all.extend(cycles);
            let cert = make_certificate(g, all);
            if !verify_cover(g, &cert).valid {
                return Err(CoverError::Failure {
                    detail: format!(
                        "matching fallback assembled a certificate that fails verification; last failures: {last_failure}"
                    ),
                });
            }
            notes.push(
                "piecework extension failed; the leftover was covered one matching at a time"
                    .into(),
            );
            let report = assemble_report(
                g,
                p,
                cfg,
                &cert,
                "matching-fallback",
                cfg.repack_rounds,
                Some(&packing),
                Some(&plan),
                phases,
                notes,
            );
            debug_assert!(report.valid, "emitted certificates must verify");
            Ok((cert, report))
        }
        Err(detail) => Err(CoverError::Failure {
            detail: format!(
                "no cover after {} packing rounds and a matching fallback; last failures: {last_failure}; {detail}",
                cfg.repack_rounds + 1
            ),
        }),
    }
}

/// Greedy proper edge colouring: each colour class is a matching. Uses at
/// most `2 * max_degree - 1` classes and usually close to `max_degree`.
fn greedy_matchings(g: &Graph) -> Vec<Vec<(u32, u32)>> {
    let n = g.vertex_count();
    let mut colour_used: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut classes: Vec<Vec<(u32, u32)>> = Vec::new();
    for (u, v) in g.edges() {
        let mut c = 0usize;
        loop {
            let u_free = colour_used[u as usize].get(c).map_or(true, |&b| !b);
            let v_free = colour_used[v as usize].get(c).map_or(true, |&b| !b);
            if u_free && v_free {
                break;
            }
            c += 1;
        }
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push((u, v));
        for w in [u, v] {
            let used = &mut colour_used[w as usize];
            if used.len() <= c {
                used.resize(c + 1, false);
            }
            used[c] = true;
        }
    }
    classes
}

/// Chooses the forest decomposition for one round: the piecewise
/// split-and-merge route when its budgets work out, otherwise the direct
/// one-piece route.
fn decompose_leftover(
    g: &Graph,
    plan: &LeftoverPlan,
    cfg: &PipelineConfig,
    round: u32,
    phases: &mut Vec<PhaseEntry>,
) -> Result<(ForestCollection, &'static str), CoverError> {
    let attempt: Result<ForestCollection, CoverError> = (|| {
        let pp = split_leftover(plan, g, cfg)?;
        phases.push(PhaseEntry {
            name: "split".into(),
            verdict: summary_verdict(&pp.verdicts),
            metrics: json!({
                "round": round,
                "attempts": pp.attempts,
                "pieces": pp.pieces.len(),
                "verdicts": pp.verdicts,
            }),
            seed: cfg.seed,
        });
        let f0 = build_f0(&pp, plan, cfg)?;
        let f1 = build_f1(plan, cfg)?;
        merge_f0_f1(&f0, &f1, plan, &pp, cfg)
    })();
    match attempt {
        Ok(forests) => {
            phases.push(PhaseEntry {
                name: "decompose".into(),
                verdict: Verdict::Holds,
                metrics: json!({
                    "round": round,
                    "route": "split-merge",
                    "forests": forests.forests.len(),
                    "k": plan.k,
                }),
                seed: cfg.seed,
            });
            Ok((forests, "split-merge"))
        }
        Err(CoverError::BadConfig { detail }) => Err(CoverError::BadConfig { detail }),
        Err(route_error) => {
            let arb = approx_linear_arboricity(&plan.leftover, DIRECT_SLACK);
            let count = arb.forests.forests.len();
            phases.push(PhaseEntry {
                name: "decompose".into(),
                verdict: verdict_of(count <= plan.k),
                metrics: json!({
                    "round": round,
                    "route": "direct",
                    "piecewise_error": route_error.to_string(),
                    "forests": count,
                    "k": plan.k,
                    "cycle_edges_relocated": arb.cycle_edges_removed,
                }),
                seed: cfg.seed,
            });
            Ok((arb.forests, "direct"))
        }
    }
}

/// Records, per forest, how many vertices fall below the neighbours-outside
/// floor the extension hypothesis asks for. Informational only.
fn precheck_extension(
    g: &Graph,
    p: f64,
    forests: &ForestCollection,
    cfg: &PipelineConfig,
    round: u32,
    phases: &mut Vec<PhaseEntry>,
) {
    let n = g.vertex_count();
    let floor = cfg.rho_v * n as f64 * p;
    let mut worst_min = usize::MAX;
    let mut forests_below = 0usize;
    for f in &forests.forests {
        let mut on = vec![false; n];
        for path in &f.paths {
            for &v in path {
                on[v as usize] = true;
            }
        }
        let min_outside = (0..n as u32)
            .map(|v| g.neighbors(v).iter().filter(|&&w| !on[w as usize]).count())
            .min()
            .unwrap_or(0);
        worst_min = worst_min.min(min_outside);
        if (min_outside as f64) < floor {
            forests_below += 1;
        }
    }
    phases.push(PhaseEntry {
        name: "extension-precheck".into(),
        verdict: verdict_of(forests_below == 0),
        metrics: json!({
            "round": round,
            "floor": floor,
            "min_neighbours_outside": if worst_min == usize::MAX { 0 } else { worst_min },
            "forests_below_floor": forests_below,
        }),
        seed: cfg.seed,
    });
}

/// Extends every forest to a Hamilton cycle, retrying with fresh seeds, and
/// on the final round splitting stubborn forests in two. Returns the cycles
/// in forest order plus how many forests were split.
fn extend_forests(
    g: &Graph,
    forests: &ForestCollection,
    cfg: &PipelineConfig,
    round: u32,
    allow_split: bool,
    phases: &mut Vec<PhaseEntry>,
) -> Result<(Vec<HamiltonCycle>, usize), String> {
    let n = g.vertex_count();
    let budget = cfg.budget_factor as u64 * default_search_budget(n);
    let ext_seed = derive_seed(cfg.seed, SALT_EXTEND);
    let mut cycles: Vec<HamiltonCycle> = Vec::new();
    let mut attempts_used = 0u64;
    let mut split_count = 0usize;
    for (idx, f) in forests.forests.iter().enumerate() {
        match extend_one(g, f, cfg, ext_seed, idx, budget, &mut attempts_used) {
            Ok(c) => cycles.push(c),
            Err(err) => {
                if !allow_split {
                    record_extension(phases, round, idx, &cycles, attempts_used, split_count, Some(&err));
                    return Err(format!("forest {idx} failed to extend: {err}"));
                }
                let halves = split_forest(f);
                if halves.len() < 2 {
                    record_extension(phases, round, idx, &cycles, attempts_used, split_count, Some(&err));
                    return Err(format!(
                        "forest {idx} failed to extend and is too small to split: {err}"
                    ));
                }
                let mut ok = true;
                let mut half_cycles = Vec::new();
                for (hi, half) in halves.iter().enumerate() {
                    let salt = 0x8000_0000u64 + (idx as u64) * 8 + hi as u64;
                    match extend_one(
                        g,
                        half,
                        cfg,
                        derive_seed(ext_seed, salt),
                        idx,
                        budget,
                        &mut attempts_used,
                    ) {
                        Ok(c) => half_cycles.push(c),
                        Err(half_err) => {
                            record_extension(
                                phases,
                                round,
                                idx,
                                &cycles,
                                attempts_used,
                                split_count,
                                Some(&half_err),
                            );
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    return Err(format!(
                        "forest {idx} failed to extend even after splitting: {err}"
                    ));
                }
                split_count += 1;
                cycles.extend(half_cycles);
            }
        }
    }
    record_extension(
        phases,
        round,
        forests.forests.len(),
        &cycles,
        attempts_used,
        split_count,
        None,
    );
    Ok((cycles, split_count))
}

fn extend_one(
    g: &Graph,
    f: &LinearForest,
    cfg: &PipelineConfig,
    ext_seed: u64,
    idx: usize,
    budget: u64,
    attempts_used: &mut u64,
) -> Result<HamiltonCycle, String> {
    let mut last = String::new();
    for attempt in 0..cfg.extension_attempts {
        *attempts_used += 1;
        let seed = derive_seed(ext_seed, (idx as u64) * 977 + attempt as u64);
        let plan = ExtensionPlan::for_forest(g, f, seed);
        match extend_forest_to_hamilton(g, f, &plan, budget) {
            Ok(c) => return Ok(c),
            Err(e) => last = e.to_string(),
        }
    }
    Err(last)
}

fn record_extension(
    phases: &mut Vec<PhaseEntry>,
    round: u32,
    progressed: usize,
    cycles: &[HamiltonCycle],
    attempts_used: u64,
    split_count: usize,
    failure: Option<&str>,
) {
    let mut metrics = json!({
        "round": round,
        "forests_done": progressed,
        "cycles": cycles.len(),
        "attempts": attempts_used,
        "split_forests": split_count,
    });
    if let Some(err) = failure {
        metrics["failure"] = Value::String(err.to_string());
    }
    phases.push(PhaseEntry {
        name: "extend".into(),
        verdict: verdict_of(failure.is_none()),
        metrics,
        seed: 0,
    });
}

/// Splits a forest into two halves, each still a linear forest: by paths
/// when there are several, otherwise down the middle of its single path.
fn split_forest(f: &LinearForest) -> Vec<LinearForest> {
    if f.paths.len() >= 2 {
        let mid = f.paths.len() / 2;
        vec![
            LinearForest::from_paths(f.paths[..mid].to_vec()),
            LinearForest::from_paths(f.paths[mid..].to_vec()),
        ]
    } else if f.paths.len() == 1 && f.paths[0].len() >= 3 {
        // Both halves keep the cut vertex so the edge across the cut stays
        // in the first half; a split must never lose an edge.
        let p = &f.paths[0];
        let mid = p.len() / 2;
        vec![
            LinearForest::from_paths(vec![p[..=mid].to_vec()]),
            LinearForest::from_paths(vec![p[mid..].to_vec()]),
        ]
    } else {
        // A single edge cannot be split into two smaller pieces.
        Vec::new()
    }
}

fn summary_verdict(reports: &[PropertyReport]) -> Verdict {
    if reports.iter().all(|r| r.verdict == Verdict::Holds) {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble_report(
    g: &Graph,
    p: f64,
    cfg: &PipelineConfig,
    cert: &CoverCertificate,
    route: &str,
    rounds_used: u32,
    packing: Option<&PackingResult>,
    plan: Option<&LeftoverPlan>,
    phases: Vec<PhaseEntry>,
    notes: Vec<String>,
) -> PipelineReport {
    let verification = verify_cover(g, cert);
    PipelineReport {
        profile: cfg.clone(),
        n: g.vertex_count(),
        edge_count: g.edge_count(),
        p,
        max_degree: g.max_degree(),
        min_degree: g.min_degree(),
        target: g.max_degree().div_ceil(2),
        cycles: cert.cycles.len(),
        valid: verification.valid,
        optimal: verification.optimal,
        route: route.into(),
        repack_rounds_used: rounds_used,
        packing: packing.map_or(
            PackingSummary {
                target: 0,
                achieved: 0,
                shortfall: 0,
            },
            |pk| PackingSummary {
                target: pk.target,
                achieved: pk.achieved,
                shortfall: pk.target - pk.achieved,
            },
        ),
        leftover: plan.map_or(
            LeftoverSummary {
                edges: 0,
                max_degree: 0,
                core_size: 0,
                k: 0,
            },
            |pl| LeftoverSummary {
                edges: pl.leftover.edge_count(),
                max_degree: pl.leftover.max_degree(),
                core_size: pl.core.len(),
                k: pl.k,
            },
        ),
        phases,
        notes,
    }
}
