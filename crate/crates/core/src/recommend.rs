//! Edge recommendations driven by Perron-root sensitivity.
//!
//! Insertions (or weight increases) are ranked by the largest entries of
//! the sensitivity matrix, removals (or decreases) by the smallest entries
//! among existing edges. Scores are first-order; experiments re-solve the
//! eigenproblem on each modified network.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigensolver::{perron, PerronOptions, PerronTriple};
use crate::error::{Error, Result};
use crate::graph::{is_strongly_connected, EditScope, EdgeKey, Network};
use crate::operator::{dot, supra_operator, LinearOperator, RankOneUpdate};

/// Which positions may be proposed as insertions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateSet {
    /// Any editable position, present or not.
    #[default]
    AllPairs,
    /// Only positions without an edge.
    AbsentOnly,
    /// Only existing edges (weight increases).
    ExistingOnly,
    /// Only existing intra-layer edges: the structured pattern cone.
    Pattern,
}

/// Whether `(a, b)` and `(b, a)` are ranked separately or as one link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Ordered,
    /// One entry per unordered pair, labelled by its better-scoring orientation.
    Unordered,
}

impl Pairing {
    /// `Unordered` for undirected networks, `Ordered` otherwise.
    pub fn for_network(net: &Network) -> Self {
        if net.is_directed() {
            Pairing::Ordered
        } else {
            Pairing::Unordered
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEdge {
    pub edge: EdgeKey,
    pub score: f64,
    pub rho_before: f64,
    pub rho_after: Option<f64>,
    pub connected_after: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionOptions {
    pub top_k: usize,
    pub candidates: CandidateSet,
    pub pairing: Pairing,
    pub allow_self_loops: bool,
}

impl InsertionOptions {
    pub fn new(top_k: usize, net: &Network) -> Self {
        Self {
            top_k,
            candidates: CandidateSet::AllPairs,
            pairing: Pairing::for_network(net),
            allow_self_loops: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemovalOptions {
    pub top_k: usize,
    pub require_connected: bool,
    /// Skip inter-layer edges (always the case for a multiplex).
    pub intra_layer_only: bool,
    pub pairing: Pairing,
    pub scope: EditScope,
}

impl RemovalOptions {
    pub fn new(top_k: usize, net: &Network) -> Self {
        Self {
            top_k,
            require_connected: true,
            intra_layer_only: false,
            pairing: Pairing::for_network(net),
            scope: EditScope::Entry,
        }
    }
}

fn score(t: &PerronTriple, a: usize, b: usize) -> f64 {
    t.kappa * t.y[a] * t.x[b]
}

fn unordered_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Descending by score, then ascending by `(k, l, i, j)`.
fn by_score_desc(a: &RankedEdge, b: &RankedEdge) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.edge.tie_key().cmp(&b.edge.tie_key()))
}

fn by_score_asc(a: &RankedEdge, b: &RankedEdge) -> Ordering {
    a.score
        .total_cmp(&b.score)
        .then_with(|| a.edge.tie_key().cmp(&b.edge.tie_key()))
}

#[derive(Debug, PartialEq)]
struct Frontier {
    score: f64,
    tie: Reverse<(usize, usize, usize, usize)>,
    group: usize,
    p: usize,
    q: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| self.tie.cmp(&other.tie))
            .then_with(|| (other.group, other.p, other.q).cmp(&(self.group, self.p, self.q)))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index groups whose cross products are the admissible positions:
/// rows sorted by `y` descending, columns by `x` descending.
struct Groups {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl Groups {
    fn new(t: &PerronTriple, net: &Network) -> Self {
        let n = net.nodes();
        let spans: Vec<Vec<usize>> = match net {
            Network::Multiplex(_) => (0..net.layers()).map(|l| (l * n..(l + 1) * n).collect()).collect(),
            Network::Multilayer(_) => vec![(0..net.dim()).collect()],
        };
        let sorted = |span: &Vec<usize>, v: &[f64]| {
            let mut s = span.clone();
            s.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
            s
        };
        Self {
            rows: spans.iter().map(|s| sorted(s, &t.y)).collect(),
            cols: spans.iter().map(|s| sorted(s, &t.x)).collect(),
        }
    }

    fn item(&self, t: &PerronTriple, n: usize, group: usize, p: usize, q: usize) -> Option<Frontier> {
        let a = *self.rows[group].get(p)?;
        let b = *self.cols[group].get(q)?;
        Some(Frontier {
            score: score(t, a, b),
            tie: Reverse(EdgeKey::from_flat(a, b, n).tie_key()),
            group,
            p,
            q,
        })
    }
}

/// The `top_k` best insertion candidates, best first.
///
/// Positions are visited lazily in nonincreasing order of `y_a x_b` by a
/// frontier over the two sorted Perron vectors, so only as many products
/// are formed as the filters reject plus `top_k`.
pub fn rank_insertions(t: &PerronTriple, net: &Network, opts: &InsertionOptions) -> Result<Vec<RankedEdge>> {
    if opts.top_k == 0 {
        return Err(Error::InvalidParameter("top_k must be at least 1".into()));
    }
    check_triple(t, net)?;
    let n = net.nodes();
    let mut seen = HashSet::new();
    let mut accepted: Vec<RankedEdge> = Vec::new();

    if matches!(opts.candidates, CandidateSet::ExistingOnly | CandidateSet::Pattern) {
        let intra_only = opts.candidates == CandidateSet::Pattern;
        let mut all: Vec<RankedEdge> = net
            .editable_edges()
            .into_iter()
            .filter(|(e, _)| opts.allow_self_loops || !e.is_self_loop())
            .filter(|(e, _)| !intra_only || e.is_intra_layer())
            .map(|(e, _)| ranked(e, score(t, e.source(n), e.target(n)), t.rho))
            .collect();
        all.sort_by(by_score_desc);
        for r in all {
            if opts.pairing == Pairing::Unordered
                && !seen.insert(unordered_key(r.edge.source(n), r.edge.target(n)))
            {
                continue;
            }
            accepted.push(r);
            if accepted.len() == opts.top_k {
                break;
            }
        }
        return Ok(accepted);
    }

    let mut first_of_pair = HashMap::new();
    let groups = Groups::new(t, net);
    let mut heap: BinaryHeap<Frontier> = (0..groups.rows.len())
        .filter_map(|g| groups.item(t, n, g, 0, 0))
        .collect();
    while let Some(top) = heap.pop() {
        if accepted.len() >= opts.top_k && top.score < accepted[opts.top_k - 1].score {
            break;
        }
        if let Some(next) = groups.item(t, n, top.group, top.p, top.q + 1) {
            heap.push(next);
        }
        if top.q == 0 {
            if let Some(next) = groups.item(t, n, top.group, top.p + 1, 0) {
                heap.push(next);
            }
        }
        let a = groups.rows[top.group][top.p];
        let b = groups.cols[top.group][top.q];
        let edge = EdgeKey::from_flat(a, b, n);
        if a == b && !opts.allow_self_loops {
            continue;
        }
        if !net.is_editable(&edge) {
            continue;
        }
        if opts.candidates == CandidateSet::AbsentOnly {
            let absent = match opts.pairing {
                Pairing::Ordered => net.weight(&edge) == 0.0,
                Pairing::Unordered => net.weight(&edge) == 0.0 && net.weight(&edge.reversed()) == 0.0,
            };
            if !absent {
                continue;
            }
        }
        if opts.pairing == Pairing::Unordered {
            // Exact ties between orientations can surface out of tie order.
            match first_of_pair.entry(unordered_key(a, b)) {
                Entry::Occupied(slot) => {
                    let kept: &mut RankedEdge = &mut accepted[*slot.get()];
                    if kept.score == top.score && edge.tie_key() < kept.edge.tie_key() {
                        kept.edge = edge;
                    }
                    continue;
                }
                Entry::Vacant(slot) => {
                    slot.insert(accepted.len());
                }
            }
        }
        accepted.push(ranked(edge, top.score, t.rho));
    }
    accepted.sort_by(by_score_desc);
    accepted.truncate(opts.top_k);
    Ok(accepted)
}

/// Existing edges in increasing order of sensitivity. With
/// `require_connected`, edges whose removal breaks strong connectivity are
/// skipped. Multiplex coupling entries are never candidates.
pub fn rank_removals(t: &PerronTriple, net: &Network, opts: &RemovalOptions) -> Result<Vec<RankedEdge>> {
    if opts.top_k == 0 {
        return Err(Error::InvalidParameter("top_k must be at least 1".into()));
    }
    check_triple(t, net)?;
    let n = net.nodes();
    let edges: Vec<_> = net
        .editable_edges()
        .into_iter()
        .filter(|(e, _)| !opts.intra_layer_only || e.is_intra_layer())
        .collect();
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut all: Vec<RankedEdge> = edges
        .into_iter()
        .map(|(e, _)| ranked(e, score(t, e.source(n), e.target(n)), t.rho))
        .collect();
    all.sort_by(by_score_asc);

    let mut seen = HashSet::new();
    let mut accepted = Vec::new();
    for mut r in all {
        if opts.pairing == Pairing::Unordered && !seen.insert(unordered_key(r.edge.source(n), r.edge.target(n))) {
            continue;
        }
        let connected = is_strongly_connected(&net.remove_edge(&r.edge, opts.scope)?);
        r.connected_after = Some(connected);
        if opts.require_connected && !connected {
            continue;
        }
        accepted.push(r);
        if accepted.len() == opts.top_k {
            break;
        }
    }
    if accepted.is_empty() {
        return Err(Error::NoFeasibleRemoval);
    }
    Ok(accepted)
}

fn ranked(edge: EdgeKey, score: f64, rho: f64) -> RankedEdge {
    RankedEdge {
        edge,
        score,
        rho_before: rho,
        rho_after: None,
        connected_after: None,
    }
}

fn check_triple(t: &PerronTriple, net: &Network) -> Result<()> {
    if t.dim() != net.dim() || t.y.len() != net.dim() {
        return Err(Error::Dimension {
            expected: net.dim(),
            actual: t.dim(),
        });
    }
    Ok(())
}

/// A single-edge modification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeAction {
    Increase(f64),
    Decrease(f64),
    Remove,
}

/// Applies `action` to `edge`, editing the entries selected by `scope`.
pub fn perturb(net: &Network, edge: &EdgeKey, action: EdgeAction, scope: EditScope) -> Result<Network> {
    match action {
        EdgeAction::Increase(eps) => net.apply_edge_delta_with(edge, eps, scope),
        EdgeAction::Decrease(eps) => {
            for target in net.edit_targets(edge, scope) {
                let w = net.weight(&target);
                if !(eps < w) {
                    return Err(Error::InvalidEdge {
                        edge: target,
                        reason: format!("decrease by {eps} needs a weight above it, found {w}"),
                    });
                }
            }
            net.apply_edge_delta_with(edge, -eps, scope)
        }
        EdgeAction::Remove => {
            if net.weight(edge) == 0.0 {
                return Err(Error::InvalidEdge {
                    edge: *edge,
                    reason: "edge is not present".into(),
                });
            }
            net.remove_edge(edge, scope)
        }
    }
}

/// First-order root shift predicted for `action` on `edge`.
pub fn predicted_shift(t: &PerronTriple, net: &Network, edge: &EdgeKey, action: EdgeAction, scope: EditScope) -> f64 {
    let n = net.nodes();
    net.edit_targets(edge, scope)
        .iter()
        .map(|e| {
            let delta = match action {
                EdgeAction::Increase(eps) => eps,
                EdgeAction::Decrease(eps) => -eps,
                EdgeAction::Remove => -net.weight(e),
            };
            delta * score(t, e.source(n), e.target(n))
        })
        .sum()
}

/// Perron root of the network after `action` on `edge`.
pub fn recompute_root(
    net: &Network,
    edge: &EdgeKey,
    action: EdgeAction,
    scope: EditScope,
    opts: &PerronOptions,
) -> Result<f64> {
    let modified = perturb(net, edge, action, scope)?;
    Ok(perron(&supra_operator(&modified), opts)?.rho)
}

/// Fills `rho_after` (and `connected_after` for removals) by full re-solves.
pub fn recompute_ranked(
    net: &Network,
    ranked: &mut [RankedEdge],
    action: EdgeAction,
    scope: EditScope,
    opts: &PerronOptions,
) -> Result<()> {
    for r in ranked.iter_mut() {
        let modified = perturb(net, &r.edge, action, scope)?;
        r.rho_after = Some(perron(&supra_operator(&modified), opts)?.rho);
        if action == EdgeAction::Remove {
            r.connected_after = Some(is_strongly_connected(&modified));
        }
    }
    Ok(())
}

/// Where random baseline edges are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselinePool {
    /// Any editable position (present or absent), excluding self-loops.
    AllPairs,
    /// Existing editable edges.
    Existing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub action: EdgeAction,
    pub scope: EditScope,
    /// Random baseline: seed and pool. `None` disables baseline columns.
    pub baseline: Option<(u64, BaselinePool)>,
    pub solver: PerronOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub edge: EdgeKey,
    pub score: f64,
    pub rho_new: Option<f64>,
    pub predicted_shift: f64,
    pub baseline_edge: Option<EdgeKey>,
    pub baseline_rho_new: Option<f64>,
    /// Why a row (or its baseline) could not be evaluated.
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rho_before: f64,
    pub rows: Vec<ExperimentRow>,
}

/// Applies `action` to each edge in turn and re-solves for the Perron root,
/// pairing each row with a seeded random baseline edge when requested.
/// Rows whose edit is invalid are flagged rather than aborting the run.
pub fn perturbation_experiment(net: &Network, edges: &[EdgeKey], cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.action {
        EdgeAction::Increase(eps) | EdgeAction::Decrease(eps) if !(eps > 0.0) => {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
        }
        _ => {}
    }
    let t = perron(&supra_operator(net), &cfg.solver)?;
    let n = net.nodes();
    let baselines = match cfg.baseline {
        Some((seed, pool)) => draw_baseline(net, pool, edges.len(), seed)
            .into_iter()
            .map(Some)
            .chain(std::iter::repeat(None))
            .take(edges.len())
            .collect(),
        None => vec![None; edges.len()],
    };

    let mut rows = Vec::with_capacity(edges.len());
    for (edge, base) in edges.iter().zip(baselines) {
        let mut flags = Vec::new();
        let score = match edge.check(n, net.layers()) {
            Ok(()) => score(&t, edge.source(n), edge.target(n)),
            Err(e) => {
                flags.push(e.to_string());
                f64::NAN
            }
        };
        let rho_new = evaluate(net, edge, cfg, &mut flags);
        let predicted = if score.is_nan() {
            f64::NAN
        } else {
            predicted_shift(&t, net, edge, cfg.action, cfg.scope)
        };
        let baseline_rho_new = base.and_then(|b| evaluate(net, &b, cfg, &mut flags));
        rows.push(ExperimentRow {
            edge: *edge,
            score,
            rho_new,
            predicted_shift: predicted,
            baseline_edge: base,
            baseline_rho_new,
            flag: (!flags.is_empty()).then(|| flags.join("; ")),
        });
    }
    Ok(ExperimentReport { rho_before: t.rho, rows })
}

fn evaluate(net: &Network, edge: &EdgeKey, cfg: &ExperimentConfig, flags: &mut Vec<String>) -> Option<f64> {
    match recompute_root(net, edge, cfg.action, cfg.scope, &cfg.solver) {
        Ok(rho) => Some(rho),
        Err(e) => {
            flags.push(format!("{edge}: {e}"));
            None
        }
    }
}

/// Distinct random edges from `pool`, reproducible for a given seed.
pub fn draw_baseline(net: &Network, pool: BaselinePool, count: usize, seed: u64) -> Vec<EdgeKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match pool {
        BaselinePool::Existing => {
            let mut edges: Vec<EdgeKey> = net.editable_edges().into_iter().map(|(e, _)| e).collect();
            edges.sort_by_key(EdgeKey::tie_key);
            let amount = count.min(edges.len());
            sample(&mut rng, edges.len(), amount).into_iter().map(|i| edges[i]).collect()
        }
        BaselinePool::AllPairs => {
            let (n, layers) = (net.nodes(), net.layers());
            let multiplex = net.as_multiplex().is_some();
            let capacity = if multiplex { layers * n * (n - 1) } else { (n * layers).pow(2) - n * layers };
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            while out.len() < count.min(capacity) {
                let k = rng.gen_range(1..=layers);
                let l = if multiplex { k } else { rng.gen_range(1..=layers) };
                let e = EdgeKey::new(rng.gen_range(1..=n), rng.gen_range(1..=n), k, l);
                if e.is_self_loop() || !net.is_editable(&e) {
                    continue;
                }
                if seen.insert(e) {
                    out.push(e);
                }
            }
            out
        }
    }
}

/// Root of `A + ε u vᵀ` next to its first-order prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneShift {
    pub rho_before: f64,
    pub rho_after: f64,
    pub shift: f64,
    pub predicted: f64,
}

/// Re-solves for `A + ε u vᵀ` (with `u vᵀ` of unit Frobenius norm).
pub fn rank_one_shift<O: LinearOperator>(
    op: O,
    t: &PerronTriple,
    eps: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    opts: &PerronOptions,
) -> Result<RankOneShift> {
    let predicted = eps * dot(&t.y, &u) * dot(&v, &t.x) / t.cos_theta();
    let after = perron(&RankOneUpdate::new(op, eps, u, v), opts)?;
    Ok(RankOneShift {
        rho_before: t.rho,
        rho_after: after.rho,
        shift: after.rho - t.rho,
        predicted,
    })
}

/// `ρ(A + εW)` for the Wilkinson perturbation `W = y xᵀ`.
pub fn wilkinson_shift<O: LinearOperator>(op: O, t: &PerronTriple, eps: f64, opts: &PerronOptions) -> Result<RankOneShift> {
    rank_one_shift(op, t, eps, t.y.clone(), t.x.clone(), opts)
}

/// `ρ(A + εE)` for the all-ones matrix `E` scaled to unit Frobenius norm.
pub fn uniform_shift<O: LinearOperator>(op: O, t: &PerronTriple, eps: f64, opts: &PerronOptions) -> Result<RankOneShift> {
    let d = t.dim();
    let u = vec![1.0 / (d as f64).sqrt(); d];
    rank_one_shift(op, t, eps, u.clone(), u, opts)
}
