//! Undirected simple graphs with bitset adjacency rows.
//!
//! [`SmallGraph`] is an immutable value; all mutation goes through
//! [`GraphBuilder`]. Vertices are `0..n`. The graph remembers the order in
//! which edges were added so that the edge-list text format round-trips
//! byte-for-byte.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// Default upper bound on the number of vertices of any graph.
pub const DEFAULT_VERTEX_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph would need {requested} vertices, limit is {limit}")]
    Capacity { requested: usize, limit: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("blowup factor must be at least 1")]
    ZeroBlowup,
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A set of vertex indices stored as 64-bit blocks.
#[derive(Clone, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    fn significant(&self) -> &[u64] {
        let len = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        &self.words[..len]
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.significant() == other.significant()
    }
}

impl Eq for VertexSet {}

impl std::hash::Hash for VertexSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.significant().hash(state)
    }
}

impl VertexSet {
    /// Empty set able to hold indices `< capacity` without reallocating.
    pub fn with_capacity(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::with_capacity(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(n);
            *w = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(w) = self.words.get_mut(v / 64) {
            *w &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
    }

    /// Smallest element.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::default();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Minimum, maximum and average degree. The average is kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub average: BigRational,
}

/// Undirected simple graph on `0..n`.
#[derive(Clone)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<VertexSet>,
    /// Edges in insertion order, with the orientation they were given in.
    edges: Vec<(usize, usize)>,
}

impl SmallGraph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Ok(GraphBuilder::new(n)?.build())
    }

    /// Builds a graph from an edge list, rejecting loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v)?;
            }
        }
        Ok(b.build())
    }

    /// `K_{s,t}` with sides `0..s` and `s..s+t`.
    pub fn complete_bipartite(s: usize, t: usize) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(s + t)?;
        for u in 0..s {
            for v in s..s + t {
                b.add_edge(u, v)?;
            }
        }
        Ok(b.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Replaces every vertex by `t` clones; vertex `(u, i)` gets index `u*t + i`.
    pub fn blowup(&self, t: usize) -> Result<SmallGraph, GraphError> {
        self.blowup_with_limit(t, DEFAULT_VERTEX_LIMIT)
    }

    pub fn blowup_with_limit(&self, t: usize, limit: usize) -> Result<SmallGraph, GraphError> {
        if t == 0 {
            return Err(GraphError::ZeroBlowup);
        }
        let n = self.n.checked_mul(t).ok_or(GraphError::Capacity {
            requested: usize::MAX,
            limit,
        })?;
        let mut b = GraphBuilder::with_limit(n, limit)?;
        for &(u, v) in &self.edges {
            for i in 0..t {
                for j in 0..t {
                    b.add_edge(u * t + i, v * t + j)?;
                }
            }
        }
        Ok(b.build())
    }

    /// Number of edges with both ends in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        let twice: usize = s
            .iter()
            .filter(|&v| v < self.n)
            .map(|v| self.adj[v].intersection_len(s))
            .sum();
        twice / 2
    }

    /// Number of edges with one end in `s` and the other in `t`.
    pub fn cross_edge_count(&self, s: &VertexSet, t: &VertexSet) -> Result<usize, GraphError> {
        if !s.is_disjoint(t) {
            return Err(GraphError::OverlappingSets);
        }
        Ok(s.iter()
            .filter(|&v| v < self.n)
            .map(|v| self.adj[v].intersection_len(t))
            .sum())
    }

    pub fn degree_stats(&self) -> DegreeStats {
        if self.n == 0 {
            return DegreeStats {
                min: 0,
                max: 0,
                average: BigRational::zero(),
            };
        }
        let degrees = (0..self.n).map(|v| self.degree(v));
        let min = degrees.clone().min().unwrap_or(0);
        let max = degrees.max().unwrap_or(0);
        let average = BigRational::new((2 * self.edge_count()).into(), self.n.into());
        DegreeStats { min, max, average }
    }

    /// Induced subgraph on `keep`, relabelled to `0..keep.len()` in increasing order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> SmallGraph {
        let order: Vec<usize> = keep.iter().filter(|&v| v < self.n).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        let mut b = GraphBuilder::with_limit(order.len(), usize::MAX).expect("unbounded limit");
        for (u, v) in self.sorted_edges() {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                b.add_edge(index[u], index[v]).expect("edges of a simple graph");
            }
        }
        b.build()
    }

    /// Copy of this graph with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<SmallGraph, GraphError> {
        let mut b = GraphBuilder::from_graph(self);
        b.add_edge(u, v)?;
        Ok(b.build())
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format: a header `n m`, then `m` lines `u v`.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<SmallGraph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut b = GraphBuilder::new(n)?;
        let mut seen = 0;
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            b.add_edge(u, v).map_err(|e| GraphError::Parse {
                line,
                msg: e.to_string(),
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {seen}"),
            });
        }
        Ok(b.build())
    }
}

fn parse_pair(line: usize, s: &str) -> Result<(usize, usize), GraphError> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or(GraphError::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

impl FromStr for SmallGraph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SmallGraph::parse_edge_list(s)
    }
}

impl PartialEq for SmallGraph {
    /// Same vertex count and edge set (insertion order ignored).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for SmallGraph {}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmallGraph")
            .field("n", &self.n)
            .field("edges", &self.sorted_edges())
            .finish()
    }
}

/// Single-owner builder for [`SmallGraph`].
#[derive(Debug)]
pub struct GraphBuilder {
    n: usize,
    adj: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        Self::with_limit(n, DEFAULT_VERTEX_LIMIT)
    }

    pub fn with_limit(n: usize, limit: usize) -> Result<Self, GraphError> {
        if n > limit {
            return Err(GraphError::Capacity {
                requested: n,
                limit,
            });
        }
        Ok(GraphBuilder {
            n,
            adj: vec![VertexSet::with_capacity(n); n],
            edges: Vec::new(),
        })
    }

    pub fn from_graph(g: &SmallGraph) -> Self {
        GraphBuilder {
            n: g.n,
            adj: g.adj.clone(),
            edges: g.edges.clone(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u].contains(v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edges.push((u, v));
        Ok(self)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn build(self) -> SmallGraph {
        SmallGraph {
            n: self.n,
            adj: self.adj,
            edges: self.edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn h_graph() -> SmallGraph {
        SmallGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap()
    }

    #[test]
    fn blowup_of_k2_is_k33() {
        let k2 = SmallGraph::complete(2).unwrap();
        let b = k2.blowup(3).unwrap();
        assert_eq!(b.vertex_count(), 6);
        assert_eq!(b.edge_count(), 9);
        assert_eq!(b, SmallGraph::complete_bipartite(3, 3).unwrap());
    }

    #[test]
    fn blowup_identity_and_layout() {
        let h = h_graph();
        assert_eq!(h.blowup(1).unwrap(), h);
        let b = h.blowup(2).unwrap();
        // (u=0, 1) -> 1 and (v=1, 0) -> 2
        assert!(b.has_edge(1, 2));
        assert!(!b.has_edge(0, 1));
        assert_eq!(h.blowup(0).unwrap_err(), GraphError::ZeroBlowup);
    }

    #[test]
    fn blowup_capacity_error() {
        let k2 = SmallGraph::complete(2).unwrap();
        assert!(matches!(
            k2.blowup_with_limit(10, 15),
            Err(GraphError::Capacity { requested: 20, .. })
        ));
    }

    #[test]
    fn induced_and_cross_counts() {
        let k4 = SmallGraph::complete(4).unwrap();
        assert_eq!(k4.induced_edge_count(&VertexSet::full(4)), 6);
        assert_eq!(k4.induced_edge_count(&VertexSet::default()), 0);
        let k33 = SmallGraph::complete_bipartite(3, 3).unwrap();
        let a: VertexSet = (0..3).collect();
        let b: VertexSet = (3..6).collect();
        assert_eq!(k33.cross_edge_count(&a, &b).unwrap(), 9);
        let overlap: VertexSet = [2, 3].into_iter().collect();
        assert_eq!(
            k33.cross_edge_count(&a, &overlap).unwrap_err(),
            GraphError::OverlappingSets
        );
    }

    #[test]
    fn degree_stats_examples() {
        let s = h_graph().degree_stats();
        assert_eq!((s.min, s.max), (1, 3));
        assert_eq!(s.average, BigRational::new(10.into(), 6.into()));
        let s = SmallGraph::complete(5).unwrap().degree_stats();
        assert_eq!((s.min, s.max), (4, 4));
        assert_eq!(s.average, BigRational::from_u32(4).unwrap());
        let s = SmallGraph::empty(3).unwrap().degree_stats();
        assert_eq!((s.min, s.max), (0, 0));
        assert!(s.average.is_zero());
    }

    #[test]
    fn builder_rejects_bad_edges() {
        let mut b = GraphBuilder::new(3).unwrap();
        b.add_edge(0, 1).unwrap();
        assert_eq!(b.add_edge(1, 0).unwrap_err(), GraphError::DuplicateEdge(1, 0));
        assert_eq!(b.add_edge(2, 2).unwrap_err(), GraphError::SelfLoop(2));
        assert!(matches!(
            b.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn edge_list_round_trip_is_exact() {
        let text = "# a comment\n4 3\n2 0\n1 3\n\n0 1\n";
        let g = SmallGraph::parse_edge_list(text).unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n2 0\n1 3\n0 1\n");
        let again = SmallGraph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(again.to_edge_list(), g.to_edge_list());
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        assert!(SmallGraph::parse_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(SmallGraph::parse_edge_list("3 1\n0 0\n").is_err());
        assert!(SmallGraph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(SmallGraph::parse_edge_list("3 1\n0 x\n").is_err());
        assert!(SmallGraph::parse_edge_list("3 1\n0 5\n").is_err());
        assert!(SmallGraph::parse_edge_list("").is_err());
        assert!(SmallGraph::parse_edge_list("5000 0\n").is_err());
    }

    #[test]
    fn vertex_set_basics() {
        let mut s = VertexSet::with_capacity(130);
        s.insert(3);
        s.insert(129);
        assert_eq!(s.len(), 2);
        assert_eq!(s.first(), Some(3));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        s.remove(3);
        assert!(!s.contains(3));
        assert_eq!(VertexSet::full(65).len(), 65);
    }
}
