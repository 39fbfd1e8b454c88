//! Edge-weighted graphs, homomorphism densities and a single-edge Metropolis
//! sampler for the exponential measure
//! `P(G) ∝ exp(n^2 (beta1 t(H1, G) + beta2 t(H2, G))) P_prior(G)`.
//!
//! Densities are the step-graphon integrals: every vertex map `[k] -> [n]`
//! counts, including non-injective ones, and diagonal weights `x_ii` are
//! ordinary entries of the weight matrix.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::{exp, pow, sqrt};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cramer::EdgeDistribution;
use crate::error::{Error, Result};
use crate::variational::{solve_psi, Classification, ModelParams};

/// Sweeps between from-scratch recomputations of the tracked statistics.
pub const RESYNC_EVERY: usize = 100;

fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidArgument { module: "graphs", name, reason }
}

/// Undirected graph on `n` vertices with a symmetric weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Build from a row-major `n x n` matrix, which must be symmetric.
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", "need at least 2 vertices"));
        }
        if weights.len() != n * n {
            return Err(invalid("weights", "matrix must be n x n"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(invalid("weights", "entries must be finite"));
        }
        let g = Self { n, weights };
        if !g.is_symmetric() {
            return Err(invalid("weights", "matrix must be symmetric"));
        }
        Ok(g)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(n, alloc::vec![value; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    /// Row-major weights.
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn set_pair(&mut self, i: usize, j: usize, value: f64) {
        self.weights[i * self.n + j] = value;
        self.weights[j * self.n + i] = value;
    }

    /// Mean of all `n^2` entries, diagonal included; equals the edge density.
    pub fn mean_entry(&self) -> f64 {
        // row sums first, the order in which hom_density visits the entries
        let total: f64 = (0..self.n).map(|i| self.row(i).iter().sum::<f64>()).sum();
        total / (self.n * self.n) as f64
    }
}

/// A finite simple graph `H` on vertices `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphSpec {
    k: usize,
    edges: Vec<(usize, usize)>,
    name: String,
}

/// Shapes with closed-form densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// One center joined to `leaves` other vertices (a single edge is one leaf).
    Star { leaves: u32 },
    Triangle,
    Other,
}

impl SubgraphSpec {
    pub fn new(name: &str, k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(invalid("edges", "subgraph needs at least one edge"));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(invalid("edges", "endpoint outside the vertex set"));
            }
            if a == b {
                return Err(invalid("edges", "self-loops are not allowed"));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(invalid("edges", "duplicate edge"));
            }
            normalized.push(e);
        }
        Ok(Self { k, edges: normalized, name: name.to_string() })
    }

    /// `H1`, a single edge.
    pub fn edge() -> Self {
        Self::star(1)
    }

    pub fn two_star() -> Self {
        Self::star(2)
    }

    pub fn triangle() -> Self {
        Self { k: 3, edges: alloc::vec![(0, 1), (0, 2), (1, 2)], name: "triangle".to_string() }
    }

    /// Star with `leaves` edges around vertex 0.
    pub fn star(leaves: usize) -> Self {
        let name = match leaves {
            1 => "edge".to_string(),
            l => alloc::format!("{l}-star"),
        };
        Self { k: leaves + 1, edges: (1..=leaves).map(|j| (0, j)).collect(), name }
    }

    /// Built-in `H2` with `p` edges: the 2-star for `p = 2`, the triangle for
    /// `p = 3`, and the `p`-star otherwise.
    pub fn with_edge_count(p: u32) -> Result<Self> {
        match p {
            0 | 1 => Err(Error::InvalidEdgeCount { p }),
            3 => Ok(Self::triangle()),
            p => Ok(Self::star(p as usize)),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn shape(&self) -> Shape {
        let p = self.edges.len();
        if self.k == p + 1 {
            if let Some(center) = (0..self.k).find(|&c| self.edges.iter().all(|&(a, b)| a == c || b == c)) {
                let _ = center;
                return Shape::Star { leaves: p as u32 };
            }
        }
        if self.k == 3 && p == 3 {
            return Shape::Triangle;
        }
        Shape::Other
    }
}

/// `t(H, G)`: the normalized sum over all maps `[k] -> [n]` of the product of
/// edge weights along `H`. Brute force, `O(n^k)`.
pub fn hom_density(h: &SubgraphSpec, g: &WeightedGraph) -> f64 {
    // closing[v] lists the earlier endpoints of edges whose larger endpoint is v
    let mut closing: Vec<Vec<usize>> = alloc::vec![Vec::new(); h.k];
    for &(a, b) in &h.edges {
        closing[b].push(a);
    }
    let mut assignment = alloc::vec![0usize; h.k];
    let total = hom_sum(&closing, g, &mut assignment, 0, 1.0);
    total / pow(g.n as f64, h.k as f64)
}

fn hom_sum(closing: &[Vec<usize>], g: &WeightedGraph, map: &mut [usize], v: usize, acc: f64) -> f64 {
    if v == closing.len() {
        return acc;
    }
    let mut sum = 0.0;
    for x in 0..g.n {
        map[v] = x;
        let row = g.row(x);
        let factor: f64 = closing[v].iter().map(|&u| row[map[u]]).product();
        if factor != 0.0 {
            sum += hom_sum(closing, g, map, v + 1, acc * factor);
        }
    }
    sum
}

/// Star density `n^-(L+1) sum_i d_i^L` with `d_i` the row sums.
pub fn star_density(g: &WeightedGraph, leaves: u32) -> f64 {
    let n = g.n as f64;
    let total: f64 = (0..g.n).map(|i| pow(g.row(i).iter().sum::<f64>(), leaves as f64)).sum();
    total / pow(n, leaves as f64 + 1.0)
}

/// Triangle density `n^-3 tr(W^3)`.
pub fn triangle_density(g: &WeightedGraph) -> f64 {
    let n = g.n;
    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            let wij = g.get(i, j);
            if wij == 0.0 {
                continue;
            }
            let jk: f64 = (0..n).map(|k| g.get(j, k) * g.get(k, i)).sum();
            trace += wij * jk;
        }
    }
    trace / pow(n as f64, 3.0)
}

/// Density of `h`, using a closed form when the shape has one.
pub fn density(h: &SubgraphSpec, g: &WeightedGraph) -> f64 {
    match h.shape() {
        Shape::Star { leaves } => star_density(g, leaves),
        Shape::Triangle => triangle_density(g),
        Shape::Other => hom_density(h, g),
    }
}

/// iid draws from `dist` on the diagonal and upper triangle, mirrored below.
pub fn sample_prior(dist: &EdgeDistribution, n: usize, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_prior_with(dist, n, &mut rng)
}

fn sample_prior_with<R: Rng + ?Sized>(dist: &EdgeDistribution, n: usize, rng: &mut R) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(invalid("n", "need at least 2 vertices"));
    }
    let mut g = WeightedGraph { n, weights: alloc::vec![0.0; n * n] };
    for i in 0..n {
        for j in i..n {
            g.set_pair(i, j, dist.sample(rng));
        }
    }
    Ok(g)
}

/// Incrementally maintained sufficient statistics: the sum of all entries and
/// the unnormalized `H2` count.
#[derive(Debug, Clone)]
enum Tracker {
    Star { leaves: u32, degrees: Vec<f64>, edge_sum: f64, h2_sum: f64 },
    Triangle { edge_sum: f64, trace: f64 },
    Generic { edge_sum: f64, h2_density: f64 },
}

impl Tracker {
    fn new(shape: Shape, h2: &SubgraphSpec, g: &WeightedGraph) -> Self {
        let edge_sum = g.weights.iter().sum();
        match shape {
            Shape::Star { leaves } => {
                let degrees: Vec<f64> = (0..g.n).map(|i| g.row(i).iter().sum()).collect();
                let h2_sum = degrees.iter().map(|&d| pow(d, leaves as f64)).sum();
                Tracker::Star { leaves, degrees, edge_sum, h2_sum }
            }
            Shape::Triangle => {
                Tracker::Triangle { edge_sum, trace: triangle_density(g) * pow(g.n as f64, 3.0) }
            }
            Shape::Other => Tracker::Generic { edge_sum, h2_density: hom_density(h2, g) },
        }
    }

    fn edge_sum(&self) -> f64 {
        match self {
            Tracker::Star { edge_sum, .. }
            | Tracker::Triangle { edge_sum, .. }
            | Tracker::Generic { edge_sum, .. } => *edge_sum,
        }
    }

    fn densities(&self, n: usize, k: usize) -> (f64, f64) {
        let nf = n as f64;
        let t1 = self.edge_sum() / (nf * nf);
        let t2 = match self {
            Tracker::Star { h2_sum, .. } => *h2_sum / pow(nf, k as f64),
            Tracker::Triangle { trace, .. } => *trace / (nf * nf * nf),
            Tracker::Generic { h2_density, .. } => *h2_density,
        };
        (t1, t2)
    }
}

/// Proposed change of `(sum of entries, t(H2))` for setting entry `(i, j)` to a new value.
#[derive(Debug, Clone, Copy)]
struct Delta {
    edge_sum: f64,
    h2_raw: f64,
    h2_density: f64,
}

/// Single-edge Metropolis chain. Proposals are fresh draws from the prior, so
/// the acceptance probability is `min(1, exp(n^2 (beta1 dt1 + beta2 dt2)))`.
#[derive(Debug, Clone)]
pub struct MetropolisChain {
    beta1: f64,
    beta2: f64,
    dist: EdgeDistribution,
    h2: SubgraphSpec,
    graph: WeightedGraph,
    tracker: Tracker,
    rng: ChaCha8Rng,
    order: Vec<(usize, usize)>,
    cursor: usize,
    proposed: u64,
    accepted: u64,
    max_drift: f64,
}

impl MetropolisChain {
    /// Chain for `params` with `H2 = h2`, started from `graph`.
    pub fn new(params: &ModelParams, h2: SubgraphSpec, graph: WeightedGraph, seed: u64) -> Result<Self> {
        Self::with_rng(params, h2, graph, ChaCha8Rng::seed_from_u64(seed))
    }

    fn with_rng(params: &ModelParams, h2: SubgraphSpec, graph: WeightedGraph, rng: ChaCha8Rng) -> Result<Self> {
        params.validate()?;
        if h2.edge_count() != params.p as usize {
            return Err(invalid("h2", "edge count must equal p"));
        }
        let tracker = Tracker::new(h2.shape(), &h2, &graph);
        let n = graph.n;
        let order = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut chain = Self {
            beta1: params.beta1,
            beta2: params.beta2,
            dist: params.dist.clone(),
            h2,
            graph,
            tracker,
            rng,
            order,
            cursor: 0,
            proposed: 0,
            accepted: 0,
            max_drift: 0.0,
        };
        chain.order.shuffle(&mut chain.rng);
        Ok(chain)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// Current `(t(H1), t(H2))` from the tracked statistics.
    pub fn densities(&self) -> (f64, f64) {
        self.tracker.densities(self.graph.n, self.h2.k)
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Largest `|incremental t(H2) - recomputed t(H2)|` seen at a resync.
    pub fn max_resync_drift(&self) -> f64 {
        self.max_drift
    }

    /// Entries per sweep: the diagonal and upper triangle.
    pub fn sweep_len(&self) -> usize {
        self.order.len()
    }

    /// One proposal at the next entry of the current randomly ordered sweep.
    pub fn step(&mut self) -> bool {
        if self.cursor == self.order.len() {
            self.order.shuffle(&mut self.rng);
            self.cursor = 0;
        }
        let (i, j) = self.order[self.cursor];
        self.cursor += 1;
        self.propose(i, j)
    }

    /// One sweep: every distinct entry proposed once, in random order.
    pub fn sweep(&mut self) {
        for _ in 0..self.order.len() {
            self.step();
        }
    }

    /// Propose a fresh prior value for entry `(i, j)` and accept or reject it.
    pub fn propose(&mut self, i: usize, j: usize) -> bool {
        let new = self.dist.sample(&mut self.rng);
        let delta = self.delta(i, j, new);
        let n = self.graph.n as f64;
        let (t2_old, t2_new) = match &self.tracker {
            Tracker::Generic { h2_density, .. } => (*h2_density, delta.h2_density),
            _ => (0.0, delta.h2_raw / pow(n, self.h2.k as f64)),
        };
        let log_ratio = self.beta1 * delta.edge_sum + self.beta2 * n * n * (t2_new - t2_old);
        self.proposed += 1;
        // exp() only of non-positive arguments
        let accept = log_ratio >= 0.0 || self.rng.random::<f64>() < exp(log_ratio);
        if accept {
            self.apply(i, j, new, delta);
            self.accepted += 1;
        }
        accept
    }

    fn delta(&mut self, i: usize, j: usize, new: f64) -> Delta {
        let old = self.graph.get(i, j);
        let d = new - old;
        let diagonal = i == j;
        let edge_sum = if diagonal { d } else { 2.0 * d };
        match &self.tracker {
            Tracker::Star { leaves, degrees, .. } => {
                let l = *leaves as f64;
                let change = |deg: f64| pow(deg + d, l) - pow(deg, l);
                let h2_raw = if diagonal { change(degrees[i]) } else { change(degrees[i]) + change(degrees[j]) };
                Delta { edge_sum, h2_raw, h2_density: 0.0 }
            }
            Tracker::Triangle { .. } => {
                let g = &self.graph;
                let w2: f64 = g.row(i).iter().zip(g.row(j)).map(|(a, b)| a * b).sum();
                let h2_raw = if diagonal {
                    3.0 * d * w2 + 3.0 * d * d * old + d * d * d
                } else {
                    6.0 * d * w2 + 3.0 * d * d * (g.get(i, i) + g.get(j, j))
                };
                Delta { edge_sum, h2_raw, h2_density: 0.0 }
            }
            Tracker::Generic { .. } => {
                self.graph.set_pair(i, j, new);
                let h2_density = hom_density(&self.h2, &self.graph);
                self.graph.set_pair(i, j, old);
                Delta { edge_sum, h2_raw: 0.0, h2_density }
            }
        }
    }

    fn apply(&mut self, i: usize, j: usize, new: f64, delta: Delta) {
        let d = new - self.graph.get(i, j);
        self.graph.set_pair(i, j, new);
        match &mut self.tracker {
            Tracker::Star { degrees, edge_sum, h2_sum, .. } => {
                degrees[i] += d;
                if i != j {
                    degrees[j] += d;
                }
                *edge_sum += delta.edge_sum;
                *h2_sum += delta.h2_raw;
            }
            Tracker::Triangle { edge_sum, trace } => {
                *edge_sum += delta.edge_sum;
                *trace += delta.h2_raw;
            }
            Tracker::Generic { edge_sum, h2_density } => {
                *edge_sum += delta.edge_sum;
                *h2_density = delta.h2_density;
            }
        }
    }

    /// Recompute the statistics from the weight matrix, recording the drift
    /// of the incremental `t(H2)`.
    pub fn resync(&mut self) -> f64 {
        let before = self.densities().1;
        self.tracker = Tracker::new(self.h2.shape(), &self.h2, &self.graph);
        let drift = (before - self.densities().1).abs();
        self.max_drift = self.max_drift.max(drift);
        drift
    }
}

/// Recorded densities of a sampler run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub n: usize,
    /// Recorded (post burn-in) sweeps.
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub h2_name: String,
    pub edge_series: Vec<f64>,
    pub h2_series: Vec<f64>,
    pub edge_mean: f64,
    pub h2_mean: f64,
    /// Batch-means standard errors.
    pub edge_se: f64,
    pub h2_se: f64,
    pub acceptance_rate: f64,
    pub max_resync_drift: f64,
}

/// Mean and batch-means standard error (20 batches when the series allows).
pub fn mean_and_se(series: &[f64]) -> (f64, f64) {
    let len = series.len();
    if len == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = series.iter().sum::<f64>() / len as f64;
    if len < 2 {
        return (mean, f64::NAN);
    }
    let batches = if len >= 40 { 20 } else { len };
    let size = len / batches;
    let batch_means: Vec<f64> = (0..batches)
        .map(|b| series[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = batch_means.iter().sum::<f64>() / batches as f64;
    let var = batch_means.iter().map(|x| (x - bm) * (x - bm)).sum::<f64>() / (batches - 1) as f64;
    (mean, sqrt(var / batches as f64))
}

/// Run the chain for `burn_in + sweeps` sweeps from a prior draw, recording
/// densities after every post burn-in sweep. `H2` is the built-in graph with
/// `params.p` edges.
pub fn run_sampler(params: &ModelParams, n: usize, sweeps: usize, burn_in: usize, seed: u64) -> Result<TrajectoryStats> {
    run_sampler_with(params, SubgraphSpec::with_edge_count(params.p)?, n, sweeps, burn_in, seed)
}

/// [`run_sampler`] with an explicit `H2`.
pub fn run_sampler_with(
    params: &ModelParams,
    h2: SubgraphSpec,
    n: usize,
    sweeps: usize,
    burn_in: usize,
    seed: u64,
) -> Result<TrajectoryStats> {
    params.validate()?;
    if sweeps == 0 {
        return Err(invalid("sweeps", "need at least one recorded sweep"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = sample_prior_with(&params.dist, n, &mut rng)?;
    let h2_name = h2.name().to_string();
    let mut chain = MetropolisChain::with_rng(params, h2, graph, rng)?;

    let mut edge_series = Vec::with_capacity(sweeps);
    let mut h2_series = Vec::with_capacity(sweeps);
    for s in 1..=burn_in + sweeps {
        chain.sweep();
        if s % RESYNC_EVERY == 0 {
            chain.resync();
        }
        if s > burn_in {
            let (t1, t2) = chain.densities();
            edge_series.push(t1);
            h2_series.push(t2);
        }
    }
    let (edge_mean, edge_se) = mean_and_se(&edge_series);
    let (h2_mean, h2_se) = mean_and_se(&h2_series);
    Ok(TrajectoryStats {
        n,
        sweeps,
        burn_in,
        seed,
        h2_name,
        edge_series,
        h2_series,
        edge_mean,
        h2_mean,
        edge_se,
        h2_se,
        acceptance_rate: chain.acceptance_rate(),
        max_resync_drift: chain.max_resync_drift(),
    })
}

/// Distance of the trajectory means from one candidate constant graphon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationTarget {
    pub u_star: f64,
    pub u_star_pow_p: f64,
    pub edge_deviation: f64,
    pub h2_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub classification: Classification,
    /// One target off the transition curve, both maximizers on it.
    pub targets: Vec<ConcentrationTarget>,
    pub edge_se: f64,
    pub h2_se: f64,
}

/// Compare trajectory means with `(u*, u*^p)` for every global maximizer.
/// On the transition curve both candidates are listed without choosing one.
pub fn concentration_report(stats: &TrajectoryStats, params: &ModelParams) -> Result<ConcentrationReport> {
    let solution = solve_psi(params)?;
    let p = params.p as f64;
    let targets = solution
        .maximizers
        .iter()
        .map(|&u| {
            let up = pow(u, p);
            ConcentrationTarget {
                u_star: u,
                u_star_pow_p: up,
                edge_deviation: (stats.edge_mean - u).abs(),
                h2_deviation: (stats.h2_mean - up).abs(),
            }
        })
        .collect();
    Ok(ConcentrationReport {
        classification: solution.classification,
        targets,
        edge_se: stats.edge_se,
        h2_se: stats.h2_se,
    })
}
