//! Metric-graph model: vertices, oriented edges with exact lengths,
//! structural predicates, metric diameter, pendant attachment, and random
//! tree generation.
//!
//! Graphs are immutable after construction and may be built in an invalid
//! state (disconnected, nonpositive lengths, dangling endpoints); `validate`
//! reports violations instead of failing, and the spectral operations reject
//! invalid input.

use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::ExactLength;

/// An oriented edge `o(e) -> t(e)` with an exact length.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub length: ExactLength,
}

/// A finite metric graph. Edge order is preserved from construction so that
/// bond indexing downstream is reproducible.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Disconnected,
    NonpositiveLength { edge_index: usize },
    DanglingEndpoint { edge_index: usize, vertex: String },
    DuplicateVertex { vertex: String },
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected => write!(f, "graph is not connected"),
            Violation::NonpositiveLength { edge_index } => {
                write!(f, "edge #{edge_index} has nonpositive length")
            }
            Violation::DanglingEndpoint { edge_index, vertex } => {
                write!(f, "edge #{edge_index} references unknown vertex {vertex:?}")
            }
            Violation::DuplicateVertex { vertex } => {
                write!(f, "vertex {vertex:?} declared more than once")
            }
            Violation::Empty => write!(f, "graph has no vertices"),
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("graph file: {0}")]
    Parse(String),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl MetricGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = impl Into<String>>,
        edges: impl IntoIterator<Item = (impl Into<String>, impl Into<String>, ExactLength)>,
    ) -> Self {
        Self {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(from, to, length)| Edge {
                    from: from.into(),
                    to: to.into(),
                    length,
                })
                .collect(),
        }
    }

    /// Star with the given leg lengths: central vertex `c`, leaves `l1..`.
    pub fn star(legs: &[ExactLength]) -> Self {
        let mut vertices = vec!["c".to_string()];
        let mut edges = Vec::new();
        for (i, len) in legs.iter().enumerate() {
            let leaf = format!("l{}", i + 1);
            vertices.push(leaf.clone());
            edges.push(("c".to_string(), leaf, len.clone()));
        }
        Self::new(vertices, edges)
    }

    /// Path `v0 - v1 - ... - vn` with the given segment lengths.
    pub fn path(segments: &[ExactLength]) -> Self {
        let vertices: Vec<String> = (0..=segments.len()).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String, ExactLength)> = segments
            .iter()
            .enumerate()
            .map(|(i, len)| (format!("v{i}"), format!("v{}", i + 1), len.clone()))
            .collect();
        Self::new(vertices, edges)
    }

    /// One vertex with a single loop edge of the given circumference.
    pub fn loop_graph(circumference: ExactLength) -> Self {
        Self::new(["v"], [("v", "v", circumference)])
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect()
    }

    /// Edge endpoints resolved to vertex indices, in edge order. `None` for
    /// edges with dangling endpoints.
    pub(crate) fn resolved_edges(&self) -> Vec<Option<(usize, usize)>> {
        let index = self.vertex_index();
        self.edges
            .iter()
            .map(|e| {
                Some((
                    *index.get(e.from.as_str())?,
                    *index.get(e.to.as_str())?,
                ))
            })
            .collect()
    }

    /// Vertex degrees; a loop contributes two to its vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices.len()];
        for resolved in self.resolved_edges().into_iter().flatten() {
            deg[resolved.0] += 1;
            deg[resolved.1] += 1;
        }
        deg
    }

    /// Degree-one vertices.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::Empty);
            return violations;
        }
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                violations.push(Violation::DuplicateVertex { vertex: v.clone() });
            }
        }
        let resolved = self.resolved_edges();
        for (i, (edge, r)) in self.edges.iter().zip(&resolved).enumerate() {
            if r.is_none() {
                let vertex = if seen.contains_key(edge.from.as_str()) {
                    edge.to.clone()
                } else {
                    edge.from.clone()
                };
                violations.push(Violation::DanglingEndpoint {
                    edge_index: i,
                    vertex,
                });
            }
            if !edge.length.is_positive() {
                violations.push(Violation::NonpositiveLength { edge_index: i });
            }
        }
        if !self.is_connected() {
            violations.push(Violation::Disconnected);
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub(crate) fn require_valid(&self) -> Result<(), GraphError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// Connectivity over the resolvable edges (union-find).
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for resolved in self.resolved_edges().into_iter().flatten() {
            let (a, b) = (find(&mut parent, resolved.0), find(&mut parent, resolved.1));
            if a != b {
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (1..n).all(|i| find(&mut parent, i) == root)
    }

    /// True iff connected and `|V| = |E| + 1`.
    pub fn is_tree(&self) -> Result<bool, GraphError> {
        self.require_valid()?;
        Ok(self.vertices.len() == self.edges.len() + 1)
    }

    /// Exact sum of edge lengths.
    pub fn total_length(&self) -> ExactLength {
        self.edges
            .iter()
            .fold(ExactLength::zero(), |acc, e| acc + &e.length)
    }

    pub fn total_length_f64(&self) -> f64 {
        self.total_length().to_f64()
    }

    /// Length of the longest edge.
    pub fn longest_edge(&self) -> Option<ExactLength> {
        self.edges.iter().map(|e| e.length.clone()).max()
    }

    /// True iff some vertex is incident to every edge, all lengths are equal
    /// and `|E| >= 2`.
    pub fn is_equilateral_star(&self) -> Result<bool, GraphError> {
        self.require_valid()?;
        if self.edges.len() < 2 {
            return Ok(false);
        }
        let first = &self.edges[0].length;
        if !self.edges.iter().all(|e| &e.length == first) {
            return Ok(false);
        }
        let resolved: Vec<(usize, usize)> =
            self.resolved_edges().into_iter().flatten().collect();
        // No loops allowed in a star, and a common vertex must exist.
        if resolved.iter().any(|(a, b)| a == b) {
            return Ok(false);
        }
        let hub_exists = (0..self.vertices.len())
            .any(|v| resolved.iter().all(|&(a, b)| a == v || b == v));
        Ok(hub_exists)
    }

    /// All-pairs shortest vertex distances, exact (Dijkstra from each vertex).
    pub fn vertex_distances(&self) -> Result<Vec<Vec<ExactLength>>, GraphError> {
        self.require_valid()?;
        let n = self.vertices.len();
        let resolved: Vec<(usize, usize)> =
            self.resolved_edges().into_iter().flatten().collect();
        let mut adjacency: Vec<Vec<(usize, ExactLength)>> = vec![Vec::new(); n];
        for ((a, b), edge) in resolved.iter().zip(&self.edges) {
            adjacency[*a].push((*b, edge.length.clone()));
            adjacency[*b].push((*a, edge.length.clone()));
        }
        let mut all = Vec::with_capacity(n);
        for source in 0..n {
            let mut dist: Vec<Option<ExactLength>> = vec![None; n];
            dist[source] = Some(ExactLength::zero());
            // Binary heap keyed by exact length (reversed for min-heap).
            let mut heap = BinaryHeap::new();
            heap.push(std::cmp::Reverse((ExactLength::zero(), source)));
            while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
                if dist[u].as_ref() != Some(&d) {
                    continue;
                }
                for (v, w) in &adjacency[u] {
                    let candidate = d.clone() + w;
                    let better = match &dist[*v] {
                        None => true,
                        Some(existing) => candidate < *existing,
                    };
                    if better {
                        dist[*v] = Some(candidate.clone());
                        heap.push(std::cmp::Reverse((candidate, *v)));
                    }
                }
            }
            all.push(
                dist.into_iter()
                    .map(|d| d.expect("connected graph"))
                    .collect(),
            );
        }
        Ok(all)
    }

    /// Metric diameter: the supremum of distances between arbitrary points of
    /// the graph. For a tree this is the longest boundary-to-boundary path;
    /// in general the supremum may be attained at interior points of edges,
    /// which the edge-pair analysis below handles exactly.
    pub fn diameter(&self) -> Result<ExactLength, GraphError> {
        self.require_valid()?;
        if self.edges.is_empty() {
            return Ok(ExactLength::zero());
        }
        let dist = self.vertex_distances()?;
        if self.vertices.len() == self.edges.len() + 1 {
            // Tree: restrict to boundary vertices (a maximal path ends at
            // leaves). A single-edge tree has exactly its two leaves.
            let boundary = self.boundary_vertices();
            let mut best = ExactLength::zero();
            for (i, &u) in boundary.iter().enumerate() {
                for &v in &boundary[i + 1..] {
                    if dist[u][v] > best {
                        best = dist[u][v].clone();
                    }
                }
            }
            return Ok(best);
        }
        Ok(continuous_diameter(self, &dist))
    }

    /// Glue `pendant` onto this graph, identifying `pendant_root` with `at`.
    /// Pendant vertex names that collide with host names are prefixed.
    pub fn attach_pendant(
        &self,
        at: &str,
        pendant: &MetricGraph,
        pendant_root: &str,
    ) -> Result<MetricGraph, GraphError> {
        if !self.vertices.iter().any(|v| v == at) {
            return Err(GraphError::UnknownVertex(at.to_string()));
        }
        if !pendant.vertices.iter().any(|v| v == pendant_root) {
            return Err(GraphError::UnknownVertex(pendant_root.to_string()));
        }
        let mut vertices = self.vertices.clone();
        let mut taken: HashMap<String, ()> =
            vertices.iter().cloned().map(|v| (v, ())).collect();
        let mut rename: HashMap<&str, String> = HashMap::new();
        rename.insert(pendant_root, at.to_string());
        for v in &pendant.vertices {
            if v == pendant_root {
                continue;
            }
            let mut name = v.clone();
            while taken.contains_key(&name) {
                name = format!("p.{name}");
            }
            taken.insert(name.clone(), ());
            rename.insert(v.as_str(), name.clone());
            vertices.push(name);
        }
        let mut edges = self.edges.clone();
        for e in &pendant.edges {
            edges.push(Edge {
                from: rename
                    .get(e.from.as_str())
                    .cloned()
                    .unwrap_or_else(|| e.from.clone()),
                to: rename
                    .get(e.to.as_str())
                    .cloned()
                    .unwrap_or_else(|| e.to.clone()),
                length: e.length.clone(),
            });
        }
        Ok(MetricGraph { vertices, edges })
    }

    /// Scale every edge length by a positive field element.
    pub fn scaled(&self, factor: &ExactLength) -> MetricGraph {
        assert!(factor.is_positive(), "scale factor must be positive");
        MetricGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    length: e.length.field_mul(factor),
                })
                .collect(),
        }
    }

    /// Insert a degree-2 vertex on edge `edge_index`, splitting it into
    /// fractions `alpha : 1 - alpha` of its length (0 < alpha < 1, rational).
    pub fn subdivide_edge(
        &self,
        edge_index: usize,
        alpha: &BigRational,
    ) -> Result<MetricGraph, GraphError> {
        use num_traits::{One, Signed};
        if edge_index >= self.edges.len() {
            return Err(GraphError::InvalidConfig(format!(
                "edge index {edge_index} out of range"
            )));
        }
        if !alpha.is_positive() || *alpha >= BigRational::one() {
            return Err(GraphError::InvalidConfig(
                "subdivision fraction must lie in (0, 1)".into(),
            ));
        }
        let mut vertices = self.vertices.clone();
        let mut name = format!("s{edge_index}");
        while vertices.contains(&name) {
            name = format!("s.{name}");
        }
        vertices.push(name.clone());
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        for (i, e) in self.edges.iter().enumerate() {
            if i == edge_index {
                let first = e.length.scale(alpha);
                let second = e.length.clone() - &first;
                edges.push(Edge {
                    from: e.from.clone(),
                    to: name.clone(),
                    length: first,
                });
                edges.push(Edge {
                    from: name.clone(),
                    to: e.to.clone(),
                    length: second,
                });
            } else {
                edges.push(e.clone());
            }
        }
        Ok(MetricGraph { vertices, edges })
    }

    /// Subdivide every loop edge once at its midpoint. Degree-2 vertices are
    /// spectrally transparent, so the spectrum is unchanged; the edge count
    /// is not, which matters for edge-counting bounds.
    pub fn subdivide_loops(&self) -> MetricGraph {
        let resolved = self.resolved_edges();
        let mut out = self.clone();
        // Walk from the back so indices stay stable while splitting.
        let half = BigRational::new(1.into(), 2.into());
        for i in (0..resolved.len()).rev() {
            if let Some((a, b)) = resolved[i] {
                if a == b {
                    out = out
                        .subdivide_edge(i, &half)
                        .expect("loop subdivision cannot fail");
                }
            }
        }
        out
    }
}

/// Exact continuous diameter for graphs that are not trees.
///
/// For points `x` on edge `e` (offset `s`) and `y` on edge `f` (offset `t`),
/// the distance is the minimum over the ways of leaving `e` and entering `f`,
/// each a linear function of `(s, t)` with slopes ±1. The max of that concave
/// piecewise-linear envelope over the offset rectangle is attained at a
/// rectangle corner, at a crossing of two route functions on the rectangle
/// boundary, or at a crossing of two equality lines in the interior; all such
/// candidates stay inside Q + Q·√2 and are enumerated exhaustively.
fn continuous_diameter(graph: &MetricGraph, dist: &[Vec<ExactLength>]) -> ExactLength {
    let resolved: Vec<(usize, usize)> =
        graph.resolved_edges().into_iter().flatten().collect();
    let mut best = ExactLength::zero();
    for (i, &(u1, u2)) in resolved.iter().enumerate() {
        let le = &graph.edges()[i].length;
        for (j, &(v1, v2)) in resolved.iter().enumerate().skip(i) {
            let lf = &graph.edges()[j].length;
            let candidate = if i == j {
                same_edge_max(le, &dist[u1][u2])
            } else {
                cross_edge_max(
                    le,
                    lf,
                    &dist[u1][v1],
                    &dist[u1][v2],
                    &dist[u2][v1],
                    &dist[u2][v2],
                )
            };
            if candidate > best {
                best = candidate;
            }
        }
    }
    best
}

/// A linear form `a·s + b·t + c` with integer slope coefficients.
#[derive(Clone)]
struct Route {
    a: i64,
    b: i64,
    c: ExactLength,
}

impl Route {
    fn eval(&self, s: &ExactLength, t: &ExactLength) -> ExactLength {
        let mut v = self.c.clone();
        v = v + &s.scale(&BigRational::from_integer(self.a.into()));
        v + &t.scale(&BigRational::from_integer(self.b.into()))
    }
}

fn route_min(routes: &[Route], s: &ExactLength, t: &ExactLength) -> ExactLength {
    routes
        .iter()
        .map(|r| r.eval(s, t))
        .min()
        .expect("route set nonempty")
}

/// Max over the rectangle `[0, le] x [0, lf]` of the route-envelope minimum.
fn cross_edge_max(
    le: &ExactLength,
    lf: &ExactLength,
    d11: &ExactLength,
    d12: &ExactLength,
    d21: &ExactLength,
    d22: &ExactLength,
) -> ExactLength {
    let routes = vec![
        // s + t + d(u1, v1)
        Route { a: 1, b: 1, c: d11.clone() },
        // s + (lf - t) + d(u1, v2)
        Route { a: 1, b: -1, c: d12.clone() + lf },
        // (le - s) + t + d(u2, v1)
        Route { a: -1, b: 1, c: d21.clone() + le },
        // (le - s) + (lf - t) + d(u2, v2)
        Route { a: -1, b: -1, c: d22.clone() + le + lf },
    ];
    let corners_s = [ExactLength::zero(), le.clone()];
    let corners_t = [ExactLength::zero(), lf.clone()];
    let mut candidates: Vec<(ExactLength, ExactLength)> = Vec::new();
    for s in &corners_s {
        for t in &corners_t {
            candidates.push((s.clone(), t.clone()));
        }
    }
    // Crossings of route pairs restricted to rectangle sides.
    for (p, q) in route_pairs(&routes) {
        for s in &corners_s {
            if let Some(t) = solve_on_line(&p, &q, Axis::FixedS, s) {
                candidates.push((s.clone(), t));
            }
        }
        for t in &corners_t {
            if let Some(s) = solve_on_line(&p, &q, Axis::FixedT, t) {
                candidates.push((s, t.clone()));
            }
        }
    }
    // Interior crossings of two equality lines.
    let pairs = route_pairs(&routes);
    for (idx, (p1, q1)) in pairs.iter().enumerate() {
        for (p2, q2) in pairs.iter().skip(idx + 1) {
            if let Some((s, t)) = solve_two_lines(p1, q1, p2, q2) {
                candidates.push((s, t));
            }
        }
    }
    let zero = ExactLength::zero();
    candidates
        .into_iter()
        .filter(|(s, t)| *s >= zero && *s <= *le && *t >= zero && *t <= *lf)
        .map(|(s, t)| route_min(&routes, &s, &t))
        .max()
        .expect("corner candidates always present")
}

/// Max distance between two points of the same edge (includes loops), over
/// offsets `0 <= s <= t <= le`: the direct segment competes with the two
/// detours through the endpoints.
fn same_edge_max(le: &ExactLength, d_endpoints: &ExactLength) -> ExactLength {
    let routes = vec![
        // t - s (direct along the edge)
        Route { a: -1, b: 1, c: ExactLength::zero() },
        // s + d(u1,u2) + (le - t)
        Route { a: 1, b: -1, c: d_endpoints.clone() + le },
        // (le - s) + d(u2,u1) + t  -- dominated on s <= t, kept for safety
        Route { a: -1, b: 1, c: d_endpoints.clone() + le },
    ];
    // Triangle corners (0,0), (0,le), (le,le).
    let mut candidates = vec![
        (ExactLength::zero(), ExactLength::zero()),
        (ExactLength::zero(), le.clone()),
        (le.clone(), le.clone()),
    ];
    for (p, q) in route_pairs(&routes) {
        // Sides s = 0, t = le, and the diagonal s = t.
        if let Some(t) = solve_on_line(&p, &q, Axis::FixedS, &ExactLength::zero()) {
            candidates.push((ExactLength::zero(), t));
        }
        if let Some(s) = solve_on_line(&p, &q, Axis::FixedT, le) {
            candidates.push((s, le.clone()));
        }
        let (da, db) = (p.a - q.a, p.b - q.b);
        let sum = da + db;
        if sum != 0 {
            // On the diagonal s = t: (da+db)·s = q.c - p.c
            let s = (q.c.clone() - &p.c).div_int(sum);
            candidates.push((s.clone(), s));
        }
    }
    let zero = ExactLength::zero();
    candidates
        .into_iter()
        .filter(|(s, t)| *s >= zero && s <= t && *t <= *le)
        .map(|(s, t)| route_min(&routes, &s, &t))
        .max()
        .expect("corner candidates always present")
}

fn route_pairs(routes: &[Route]) -> Vec<(Route, Route)> {
    let mut pairs = Vec::new();
    for i in 0..routes.len() {
        for j in i + 1..routes.len() {
            pairs.push((routes[i].clone(), routes[j].clone()));
        }
    }
    pairs
}

enum Axis {
    FixedS,
    FixedT,
}

/// Solve `p = q` along a rectangle side with one coordinate fixed.
fn solve_on_line(p: &Route, q: &Route, axis: Axis, fixed: &ExactLength) -> Option<ExactLength> {
    let (da, db) = (p.a - q.a, p.b - q.b);
    let dc = q.c.clone() - &p.c;
    match axis {
        Axis::FixedS => {
            if db == 0 {
                return None;
            }
            Some((dc - &fixed.scale(&BigRational::from_integer(da.into()))).div_int(db))
        }
        Axis::FixedT => {
            if da == 0 {
                return None;
            }
            Some((dc - &fixed.scale(&BigRational::from_integer(db.into()))).div_int(da))
        }
    }
}

/// Intersection of the two equality lines `p1 = q1` and `p2 = q2`.
fn solve_two_lines(p1: &Route, q1: &Route, p2: &Route, q2: &Route) -> Option<(ExactLength, ExactLength)> {
    let a1 = p1.a - q1.a;
    let b1 = p1.b - q1.b;
    let c1 = q1.c.clone() - &p1.c;
    let a2 = p2.a - q2.a;
    let b2 = p2.b - q2.b;
    let c2 = q2.c.clone() - &p2.c;
    let det = a1 * b2 - a2 * b1;
    if det == 0 {
        return None;
    }
    let s = (c1.scale(&BigRational::from_integer(b2.into()))
        - &c2.scale(&BigRational::from_integer(b1.into())))
    .div_int(det);
    let t = (c2.scale(&BigRational::from_integer(a1.into()))
        - &c1.scale(&BigRational::from_integer(a2.into())))
    .div_int(det);
    Some((s, t))
}

/// Edge-length distribution for generated trees.
///
/// Rational lengths are `p/q` with `p, q` uniform in `1..=16`; with
/// `rad2_probability > 0` an additional `(r/s)·√2` component (same ranges)
/// is mixed in with that probability, which exercises both the equality and
/// the strictness regimes of the Dirichlet comparison.
#[derive(Clone, Debug)]
pub struct LengthModel {
    pub max_numerator: i64,
    pub max_denominator: i64,
    pub rad2_probability: f64,
}

impl LengthModel {
    pub fn rational() -> Self {
        Self {
            max_numerator: 16,
            max_denominator: 16,
            rad2_probability: 0.0,
        }
    }

    pub fn mixed() -> Self {
        Self {
            rad2_probability: 0.25,
            ..Self::rational()
        }
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.max_numerator < 1 || self.max_denominator < 1 {
            return Err(GraphError::InvalidConfig(
                "length bounds must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.rad2_probability) {
            return Err(GraphError::InvalidConfig(
                "rad2 probability must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> ExactLength {
        let p = rng.gen_range(1..=self.max_numerator);
        let q = rng.gen_range(1..=self.max_denominator);
        let mut len = ExactLength::from_rational(p, q);
        if self.rad2_probability > 0.0 && rng.gen_bool(self.rad2_probability) {
            let r = rng.gen_range(1..=self.max_numerator);
            let s = rng.gen_range(1..=self.max_denominator);
            len = len + &ExactLength::from_parts(0, 1, r, s);
        }
        len
    }
}

/// Uniformly random labeled tree on `vertex_count >= 2` vertices via
/// Prüfer-sequence decoding; deterministic for a fixed seed.
pub fn random_tree(
    vertex_count: usize,
    length_model: &LengthModel,
    seed: u64,
) -> Result<MetricGraph, GraphError> {
    if vertex_count < 2 {
        return Err(GraphError::InvalidConfig(
            "random tree needs at least 2 vertices".into(),
        ));
    }
    length_model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topology = if vertex_count == 2 {
        vec![(0usize, 1usize)]
    } else {
        let prufer: Vec<usize> = (0..vertex_count - 2)
            .map(|_| rng.gen_range(0..vertex_count))
            .collect();
        decode_prufer(&prufer)
    };
    let vertices: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, ExactLength)> = topology
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (a.min(b), a.max(b));
            (format!("v{a}"), format!("v{b}"), length_model.sample(&mut rng))
        })
        .collect();
    Ok(MetricGraph::new(vertices, edges))
}

fn decode_prufer(prufer: &[usize]) -> Vec<(usize, usize)> {
    let n = prufer.len() + 2;
    let mut degree = vec![1u32; n];
    for &a in prufer {
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&i| degree[i] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in prufer {
        let u = leaves.pop().expect("leaf available").0;
        degree[u] -= 1;
        degree[a] -= 1;
        edges.push((u, a));
        if degree[a] == 1 {
            leaves.push(std::cmp::Reverse(a));
        }
    }
    let u = leaves.pop().expect("two leaves remain").0;
    let v = leaves.pop().expect("two leaves remain").0;
    edges.push((u, v));
    edges
}

// ---------------------------------------------------------------------------
// Graph file format
// ---------------------------------------------------------------------------

mod file {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    pub struct GraphFile {
        pub vertices: Vec<String>,
        pub edges: Vec<EdgeFile>,
    }

    #[derive(Serialize, Deserialize)]
    pub struct EdgeFile {
        pub from: String,
        pub to: String,
        pub length: LengthFile,
    }

    #[derive(Serialize, Deserialize)]
    pub struct LengthFile {
        pub rat: (i64, i64),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub rad2: Option<(i64, i64)>,
    }
}

/// Parse the graph file format: `{"vertices": [...], "edges": [{"from", "to",
/// "length": {"rat": [p, q], "rad2": [r, s]}}]}` where `"rad2"` defaults to
/// `[0, 1]`. Rejects `q <= 0`, `s <= 0` and nonpositive edge lengths.
pub fn parse_graph(text: &str) -> Result<MetricGraph, GraphError> {
    let parsed: file::GraphFile =
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    let mut edges = Vec::with_capacity(parsed.edges.len());
    for (i, e) in parsed.edges.iter().enumerate() {
        let (p, q) = e.length.rat;
        if q <= 0 {
            return Err(GraphError::Parse(format!(
                "edge #{i}: rational denominator must be positive, got {q}"
            )));
        }
        let (r, s) = e.length.rad2.unwrap_or((0, 1));
        if s <= 0 {
            return Err(GraphError::Parse(format!(
                "edge #{i}: sqrt2 denominator must be positive, got {s}"
            )));
        }
        let length = ExactLength::from_parts(p, q, r, s);
        if !length.is_positive() {
            return Err(GraphError::Parse(format!(
                "edge #{i}: nonpositive length {length}"
            )));
        }
        edges.push((e.from.clone(), e.to.clone(), length));
    }
    Ok(MetricGraph::new(parsed.vertices, edges))
}

/// Serialize to the graph file format. Only graphs whose lengths have
/// numerators/denominators within i64 range are writable, which covers
/// everything this crate generates.
pub fn write_graph(graph: &MetricGraph) -> Result<String, GraphError> {
    use num_traits::{ToPrimitive, Zero};
    let mut edges = Vec::with_capacity(graph.edges().len());
    for e in graph.edges() {
        let rat = e.length.rational_part();
        let rad2 = e.length.rad2_part();
        let to_pair = |r: &BigRational| -> Result<(i64, i64), GraphError> {
            Ok((
                r.numer().to_i64().ok_or_else(|| {
                    GraphError::Parse("length numerator out of range".into())
                })?,
                r.denom().to_i64().ok_or_else(|| {
                    GraphError::Parse("length denominator out of range".into())
                })?,
            ))
        };
        edges.push(file::EdgeFile {
            from: e.from.clone(),
            to: e.to.clone(),
            length: file::LengthFile {
                rat: to_pair(rat)?,
                rad2: if rad2.is_zero() {
                    None
                } else {
                    Some(to_pair(rad2)?)
                },
            },
        });
    }
    let out = file::GraphFile {
        vertices: graph.vertices().to_vec(),
        edges,
    };
    serde_json::to_string_pretty(&out).map_err(|e| GraphError::Parse(e.to_string()))
}
