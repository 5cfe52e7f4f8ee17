//! Loss-sequence environments and the online shortest-path instantiation.
//!
//! Environments are oblivious: the loss sequence is fixed before play.
//! The bandit interface exposes only the scalar loss of the played point;
//! the full vectors are reachable separately for regret accounting and
//! full-information baselines.
//!
//! Shortest-path problems are reduced to a path-mixture simplex: paths are
//! enumerated explicitly (desk scale), the decision body is the
//! full-dimensional simplex over the first `p - 1` path weights, and edge
//! delays map to an affine loss in reduced coordinates whose constant
//! offset cancels in regret.

use crate::error::{Error, Result};
use crate::geometry::ConvexPolytope;
use crate::linalg::{self, Matrix};
use crate::rng::RoundRng;

/// Bandit-vs-full-information environment interface.
///
/// `observe` is the only member a bandit algorithm may call during play.
/// `loss_vector`/`affine_offset` exist for accounting and baselines; tests
/// wrap environments to certify the play loop never touches them.
pub trait Environment {
    fn dimension(&self) -> usize;

    /// Declared bound L on |loss of any point of the body|.
    fn loss_bound(&self) -> f64;

    /// Scalar loss of playing `y` at round `t` (1-based).
    fn observe(&mut self, round: usize, play: &[f64]) -> f64;

    /// Linear part of round `t`'s loss.
    fn loss_vector(&self, round: usize) -> Vec<f64>;

    /// Constant offset of round `t`'s loss (affine environments).
    fn affine_offset(&self, _round: usize) -> f64 {
        0.0
    }
}

/// Fixed, oblivious loss sequence; ignores the played point beyond taking
/// the inner product.
#[derive(Debug, Clone)]
pub struct FixedSequenceEnv {
    vectors: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    bound: f64,
    dimension: usize,
}

impl FixedSequenceEnv {
    pub fn from_sequence(seq: &LossSequence) -> Self {
        FixedSequenceEnv {
            dimension: seq.dimension(),
            offsets: vec![0.0; seq.len()],
            bound: seq.declared_bound(),
            vectors: seq.vectors().to_vec(),
        }
    }

    /// Affine environment `loss_t(x) = offset_t + f_t^T x`; the bound is
    /// computed exactly over the body's vertices.
    pub fn new_affine(
        vectors: Vec<Vec<f64>>,
        offsets: Vec<f64>,
        body: &ConvexPolytope,
    ) -> Result<Self> {
        if vectors.len() != offsets.len() {
            return Err(Error::InvalidShape(
                "one offset per loss vector required".into(),
            ));
        }
        let verts = body.vertices()?;
        let mut bound: f64 = 0.0;
        for (f, c) in vectors.iter().zip(&offsets) {
            if f.len() != body.dimension() {
                return Err(Error::InvalidShape("loss vector dimension mismatch".into()));
            }
            for v in &verts {
                bound = bound.max((c + linalg::dot(f, v)).abs());
            }
        }
        Ok(FixedSequenceEnv {
            dimension: body.dimension(),
            vectors,
            offsets,
            bound,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl Environment for FixedSequenceEnv {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn loss_bound(&self) -> f64 {
        self.bound
    }

    fn observe(&mut self, round: usize, play: &[f64]) -> f64 {
        self.offsets[round - 1] + linalg::dot(&self.vectors[round - 1], play)
    }

    fn loss_vector(&self, round: usize) -> Vec<f64> {
        self.vectors[round - 1].clone()
    }

    fn affine_offset(&self, round: usize) -> f64 {
        self.offsets[round - 1]
    }
}

/// A validated loss sequence: `max_t max_vertex |f_t^T v| <= declared_bound`.
#[derive(Debug, Clone)]
pub struct LossSequence {
    vectors: Vec<Vec<f64>>,
    declared_bound: f64,
    dimension: usize,
}

impl LossSequence {
    /// Wraps the vectors with the exact bound computed over the body's
    /// vertices.
    pub fn new(vectors: Vec<Vec<f64>>, body: &ConvexPolytope) -> Result<Self> {
        let bound = Self::exact_bound(&vectors, body)?;
        Ok(LossSequence {
            dimension: body.dimension(),
            vectors,
            declared_bound: bound,
        })
    }

    /// Wraps the vectors, checking they honor a declared bound.
    pub fn with_declared_bound(
        vectors: Vec<Vec<f64>>,
        body: &ConvexPolytope,
        bound: f64,
    ) -> Result<Self> {
        let exact = Self::exact_bound(&vectors, body)?;
        if exact > bound * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::ContractViolation(format!(
                "loss sequence attains |f^T v| = {exact}, above declared bound {bound}"
            )));
        }
        Ok(LossSequence {
            dimension: body.dimension(),
            vectors,
            declared_bound: bound,
        })
    }

    fn exact_bound(vectors: &[Vec<f64>], body: &ConvexPolytope) -> Result<f64> {
        let verts = body.vertices()?;
        let mut bound: f64 = 0.0;
        for f in vectors {
            if f.len() != body.dimension() {
                return Err(Error::InvalidShape("loss vector dimension mismatch".into()));
            }
            for v in &verts {
                bound = bound.max(linalg::dot(f, v).abs());
            }
        }
        Ok(bound)
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn declared_bound(&self) -> f64 {
        self.declared_bound
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
}

/// Oblivious sequence generators.
#[derive(Debug, Clone)]
pub enum SequenceKind {
    /// Repeats one vector every round.
    Constant(Vec<f64>),
    /// Cycles through a fixed list.
    Rotating(Vec<Vec<f64>>),
    /// I.i.d. uniform [-1, 1] components, rescaled as a whole sequence so
    /// the exact vertex bound is 1.
    RandomSigned,
}

pub fn make_oblivious_sequence(
    kind: &SequenceKind,
    body: &ConvexPolytope,
    horizon: usize,
    seed: u64,
) -> Result<LossSequence> {
    let n = body.dimension();
    let vectors: Vec<Vec<f64>> = match kind {
        SequenceKind::Constant(f) => {
            if f.len() != n {
                return Err(Error::InvalidShape("constant vector dimension mismatch".into()));
            }
            (0..horizon).map(|_| f.clone()).collect()
        }
        SequenceKind::Rotating(set) => {
            if set.is_empty() || set.iter().any(|f| f.len() != n) {
                return Err(Error::InvalidShape("rotating set malformed".into()));
            }
            (0..horizon).map(|t| set[t % set.len()].clone()).collect()
        }
        SequenceKind::RandomSigned => {
            let mut raw: Vec<Vec<f64>> = Vec::with_capacity(horizon);
            for t in 0..horizon {
                let mut rng = RoundRng::labeled(seed, t as u64);
                raw.push((0..n).map(|_| rng.uniform_in(-1.0, 1.0)).collect());
            }
            let verts = body.vertices()?;
            let mut max: f64 = 0.0;
            for f in &raw {
                for v in &verts {
                    max = max.max(linalg::dot(f, v).abs());
                }
            }
            if max > 1e-12 {
                for f in &mut raw {
                    for c in f.iter_mut() {
                        *c /= max;
                    }
                }
            }
            raw
        }
    };
    LossSequence::new(vectors, body)
}

// ---------------------------------------------------------------------------
// Online shortest path
// ---------------------------------------------------------------------------

/// Directed acyclic graph with a source-sink pair; every edge must lie on
/// some source-to-sink path.
#[derive(Debug, Clone)]
pub struct GraphSpec {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
    sink: usize,
}

impl GraphSpec {
    pub fn new(
        node_count: usize,
        edges: Vec<(usize, usize)>,
        source: usize,
        sink: usize,
    ) -> Result<Self> {
        if source >= node_count || sink >= node_count || source == sink {
            return Err(Error::InvalidShape("bad source/sink".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidShape("graph has no edges".into()));
        }
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidShape("edge endpoint out of range".into()));
            }
            if u == v {
                return Err(Error::InvalidShape("self-loop".into()));
            }
        }
        let g = GraphSpec {
            node_count,
            edges,
            source,
            sink,
        };
        g.check_acyclic()?;
        g.check_edges_usable()?;
        Ok(g)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.0 == v)
            .map(|(i, _)| i)
    }

    fn in_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.1 == v)
            .map(|(i, _)| i)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm.
        let mut indeg = vec![0usize; self.node_count];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut queue: Vec<usize> = (0..self.node_count).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for e in self.out_edges(v) {
                let w = self.edges[e].1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if seen != self.node_count {
            return Err(Error::InvalidShape("graph has a cycle".into()));
        }
        Ok(())
    }

    fn check_edges_usable(&self) -> Result<()> {
        let from_source = self.reachable_from(self.source, false);
        let to_sink = self.reachable_from(self.sink, true);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if !(from_source[u] && to_sink[v]) {
                return Err(Error::InvalidShape(format!(
                    "edge {i} ({u} -> {v}) lies on no source-sink path"
                )));
            }
        }
        Ok(())
    }

    fn reachable_from(&self, start: usize, reversed: bool) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            let next: Vec<usize> = if reversed {
                self.in_edges(v).map(|e| self.edges[e].0).collect()
            } else {
                self.out_edges(v).map(|e| self.edges[e].1).collect()
            };
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// All source-to-sink paths as edge-index lists, in depth-first
    /// edge-index order. Errors beyond `MAX_PATHS`.
    pub fn enumerate_paths(&self) -> Result<Vec<Vec<usize>>> {
        const MAX_PATHS: usize = 10_000;
        let mut paths = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        self.dfs_paths(self.source, &mut stack, &mut paths)?;
        if paths.len() > MAX_PATHS {
            return Err(Error::SizeLimit(format!(
                "more than {MAX_PATHS} source-sink paths"
            )));
        }
        Ok(paths)
    }

    fn dfs_paths(
        &self,
        node: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if node == self.sink {
            out.push(stack.clone());
            if out.len() > 10_000 {
                return Err(Error::SizeLimit("more than 10000 source-sink paths".into()));
            }
            return Ok(());
        }
        for e in self.out_edges(node) {
            stack.push(e);
            self.dfs_paths(self.edges[e].1, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
}

/// Conversion between reduced path-mixture coordinates and edge space.
///
/// Reduced coordinates are the weights of paths `0..p-1`; the last path
/// carries the remaining mass.
#[derive(Debug, Clone)]
pub struct FlowMap {
    paths: Vec<Vec<usize>>,
    path_vectors: Vec<Vec<f64>>,
    edge_count: usize,
}

impl FlowMap {
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn reduced_dim(&self) -> usize {
        self.paths.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    /// Edge-space flow of a reduced point.
    pub fn to_edge(&self, reduced: &[f64]) -> Vec<f64> {
        debug_assert_eq!(reduced.len(), self.reduced_dim());
        let mut flow = vec![0.0; self.edge_count];
        let mut rest = 1.0;
        for (w, pv) in reduced.iter().zip(&self.path_vectors) {
            rest -= w;
            linalg::add_scaled(&mut flow, *w, pv);
        }
        linalg::add_scaled(&mut flow, rest, self.path_vectors.last().expect("p >= 2"));
        flow
    }

    /// Reduced coordinates of an edge-space flow, by least squares over the
    /// path-difference basis. Exact (and a true inverse of `to_edge`) when
    /// the path vectors are affinely independent; errors otherwise.
    pub fn to_reduced(&self, edge_flow: &[f64]) -> Result<Vec<f64>> {
        if edge_flow.len() != self.edge_count {
            return Err(Error::InvalidShape("edge flow dimension mismatch".into()));
        }
        let k = self.reduced_dim();
        let last = self.path_vectors.last().expect("p >= 2");
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|i| linalg::sub(&self.path_vectors[i], last))
            .collect();
        let rhs_vec = linalg::sub(edge_flow, last);
        let mut gram = Matrix::zeros(k, k);
        let mut rhs = vec![0.0; k];
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, linalg::dot(&cols[i], &cols[j]));
            }
            rhs[i] = linalg::dot(&cols[i], &rhs_vec);
        }
        linalg::solve_spd(&gram, &rhs).map_err(|_| {
            Error::DegenerateBody("path vectors are affinely dependent".into())
        })
    }

    /// Total delay of path `i` under per-edge delays.
    pub fn path_delay(&self, delays: &[f64], path: usize) -> f64 {
        self.paths[path].iter().map(|&e| delays[e]).sum()
    }
}

/// Builds the reduced decision body (a `(p-1)`-dimensional simplex) and the
/// coordinate map for a graph. A single-path graph has no decision and is
/// rejected.
pub fn build_flow_polytope(graph: &GraphSpec) -> Result<(ConvexPolytope, FlowMap)> {
    let paths = graph.enumerate_paths()?;
    if paths.is_empty() {
        return Err(Error::InvalidShape("no source-sink path".into()));
    }
    if paths.len() == 1 {
        return Err(Error::DegenerateBody(
            "single-path graph leaves no decision".into(),
        ));
    }
    let path_vectors: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| {
            let mut v = vec![0.0; graph.edge_count()];
            for &e in p {
                v[e] = 1.0;
            }
            v
        })
        .collect();
    let body = ConvexPolytope::simplex(paths.len() - 1)?;
    Ok((
        body,
        FlowMap {
            edge_count: graph.edge_count(),
            paths,
            path_vectors,
        },
    ))
}

/// Maps nonnegative edge delays to an affine loss in reduced coordinates:
/// `loss(w) = offset + linear^T w`. Every path's total delay must be at
/// most 1.
pub fn delays_to_loss(map: &FlowMap, edge_delays: &[f64]) -> Result<(Vec<f64>, f64)> {
    if edge_delays.len() != map.edge_count() {
        return Err(Error::InvalidShape("delay vector dimension mismatch".into()));
    }
    if edge_delays.iter().any(|&d| !(d >= 0.0)) {
        return Err(Error::ContractViolation("negative edge delay".into()));
    }
    let p = map.path_count();
    let path_delays: Vec<f64> = (0..p).map(|i| map.path_delay(edge_delays, i)).collect();
    for (i, &d) in path_delays.iter().enumerate() {
        if d > 1.0 + 1e-12 {
            return Err(Error::ContractViolation(format!(
                "path {i} has total delay {d} > 1"
            )));
        }
    }
    let offset = path_delays[p - 1];
    let linear: Vec<f64> = path_delays[..p - 1].iter().map(|d| d - offset).collect();
    Ok((linear, offset))
}

const PEEL_DUST: f64 = 1e-11;

/// Decomposes a unit source-sink flow into weighted paths by repeatedly
/// peeling the path through the minimum positive residual edge.
pub fn decompose_flow(
    graph: &GraphSpec,
    edge_flow: &[f64],
) -> Result<Vec<(Vec<usize>, f64)>> {
    if edge_flow.len() != graph.edge_count() {
        return Err(Error::InvalidShape("edge flow dimension mismatch".into()));
    }
    if edge_flow.iter().any(|&f| f < -1e-9) {
        return Err(Error::ContractViolation("negative edge flow".into()));
    }
    // Conservation: source emits 1, sink absorbs 1, others balance.
    for v in 0..graph.node_count {
        let out: f64 = graph.out_edges(v).map(|e| edge_flow[e]).sum();
        let inn: f64 = graph.in_edges(v).map(|e| edge_flow[e]).sum();
        let expected = if v == graph.source {
            1.0
        } else if v == graph.sink {
            -1.0
        } else {
            0.0
        };
        if (out - inn - expected).abs() > 1e-9 {
            return Err(Error::ContractViolation(format!(
                "flow conservation violated at node {v} by {:.3e}",
                (out - inn - expected).abs()
            )));
        }
    }

    let mut residual: Vec<f64> = edge_flow.iter().map(|&f| f.max(0.0)).collect();
    let mut parts: Vec<(Vec<usize>, f64)> = Vec::new();
    for _ in 0..graph.edge_count() + 1 {
        let seed_edge = residual
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > PEEL_DUST)
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite residual"))
            .map(|(i, _)| i);
        let Some(seed_edge) = seed_edge else { break };

        let mut path = vec![seed_edge];
        // Extend backward to the source.
        let mut node = graph.edges[seed_edge].0;
        while node != graph.source {
            let Some(e) = graph.in_edges(node).find(|&e| residual[e] > PEEL_DUST) else {
                return Err(Error::ContractViolation(format!(
                    "no positive residual into node {node} while peeling"
                )));
            };
            path.insert(0, e);
            node = graph.edges[e].0;
        }
        // Extend forward to the sink.
        let mut node = graph.edges[seed_edge].1;
        while node != graph.sink {
            let Some(e) = graph.out_edges(node).find(|&e| residual[e] > PEEL_DUST) else {
                return Err(Error::ContractViolation(format!(
                    "no positive residual out of node {node} while peeling"
                )));
            };
            path.push(e);
            node = graph.edges[e].1;
        }

        let weight = path
            .iter()
            .map(|&e| residual[e])
            .fold(f64::INFINITY, f64::min);
        for &e in &path {
            residual[e] -= weight;
            if residual[e].abs() < PEEL_DUST {
                residual[e] = 0.0;
            }
        }
        parts.push((path, weight));
    }

    let total: f64 = parts.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::ContractViolation(format!(
            "peeled path weights sum to {total}, expected 1"
        )));
    }
    Ok(parts)
}
