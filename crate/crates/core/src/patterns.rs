//! Pattern graphs, subgraph-copy enumeration, covering numbers and rigidity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Mask;
use crate::graph::{SmallGraph, VertexSet};

/// Patterns above this size are rejected by the exhaustive routines.
pub const MAX_PATTERN_VERTICES: usize = 16;

pub const H_LABELS: [&str; 6] = ["u", "v", "a", "b", "c", "d"];
pub const H_EDGES: [(usize, usize); 5] = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];

pub const HHAT_LABELS: [&str; 7] = ["u", "v", "w", "a", "b", "c", "d"];
pub const HHAT_EDGES: [(usize, usize); 7] =
    [(0, 1), (0, 3), (0, 4), (1, 5), (1, 6), (2, 4), (2, 5)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("covering number index must be 1 or 2, got {0}")]
    BadIndex(usize),
    #[error("pattern has {0} vertices, at most {MAX_PATTERN_VERTICES} supported")]
    TooLarge(usize),
    #[error("unknown pattern name {0:?}")]
    UnknownName(String),
    #[error("embedding has {got} entries, pattern has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("embedding maps two pattern vertices to host vertex {0}")]
    NotInjective(usize),
    #[error("host vertex {0} out of range")]
    OutOfRange(usize),
    #[error("pattern edge {0}-{1} is not a host edge")]
    MissingEdge(usize, usize),
}

/// A pattern graph together with its canonical vertex labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternKind {
    H,
    Hhat,
    K2,
    CompleteBipartite(usize, usize),
    Custom(SmallGraph),
}

impl PatternKind {
    pub fn graph(&self) -> SmallGraph {
        let built = match self {
            PatternKind::H => SmallGraph::from_edges(6, &H_EDGES),
            PatternKind::Hhat => SmallGraph::from_edges(7, &HHAT_EDGES),
            PatternKind::K2 => SmallGraph::complete(2),
            PatternKind::CompleteBipartite(s, t) => SmallGraph::complete_bipartite(*s, *t),
            PatternKind::Custom(g) => return g.clone(),
        };
        built.expect("built-in patterns are valid")
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            PatternKind::H => 6,
            PatternKind::Hhat => 7,
            PatternKind::K2 => 2,
            PatternKind::CompleteBipartite(s, t) => s + t,
            PatternKind::Custom(g) => g.vertex_count(),
        }
    }

    /// Canonical vertex labels, index `i` naming pattern vertex `i`.
    pub fn labels(&self) -> Vec<String> {
        match self {
            PatternKind::H => H_LABELS.iter().map(|s| s.to_string()).collect(),
            PatternKind::Hhat => HHAT_LABELS.iter().map(|s| s.to_string()).collect(),
            PatternKind::K2 => vec!["x".into(), "y".into()],
            PatternKind::CompleteBipartite(s, t) => (0..*s)
                .map(|i| format!("x{i}"))
                .chain((0..*t).map(|i| format!("y{i}")))
                .collect(),
            PatternKind::Custom(g) => (0..g.vertex_count()).map(|i| i.to_string()).collect(),
        }
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> String {
        match self {
            PatternKind::H => "H".into(),
            PatternKind::Hhat => "Hhat".into(),
            PatternKind::K2 => "K2".into(),
            PatternKind::CompleteBipartite(s, t) => format!("K{s},{t}"),
            PatternKind::Custom(_) => "custom".into(),
        }
    }

    /// Parses `H`, `Hhat`, `K2` or `K<s>,<t>`.
    pub fn from_name(name: &str) -> Result<Self, PatternError> {
        match name {
            "H" => Ok(PatternKind::H),
            "Hhat" => Ok(PatternKind::Hhat),
            "K2" => Ok(PatternKind::K2),
            _ => {
                let bad = || PatternError::UnknownName(name.to_string());
                let rest = name.strip_prefix('K').ok_or_else(bad)?;
                let (s, t) = rest.split_once(',').ok_or_else(bad)?;
                let s = s.parse().map_err(|_| bad())?;
                let t = t.parse().map_err(|_| bad())?;
                Ok(PatternKind::CompleteBipartite(s, t))
            }
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An injective placement of a pattern in a host: `map[p]` is the host vertex
/// of pattern vertex `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub pattern: PatternKind,
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn new(pattern: PatternKind, map: Vec<usize>) -> Self {
        Embedding { pattern, map }
    }

    /// Checks injectivity and that every pattern edge lands on a host edge.
    pub fn validate(&self, host: &SmallGraph) -> Result<(), PatternError> {
        let expected = self.pattern.vertex_count();
        if self.map.len() != expected {
            return Err(PatternError::WrongLength {
                expected,
                got: self.map.len(),
            });
        }
        let mut seen = VertexSet::with_capacity(host.vertex_count());
        for &x in &self.map {
            if x >= host.vertex_count() {
                return Err(PatternError::OutOfRange(x));
            }
            if seen.contains(x) {
                return Err(PatternError::NotInjective(x));
            }
            seen.insert(x);
        }
        for &(p, q) in self.pattern.graph().edges() {
            let (x, y) = (self.map[p], self.map[q]);
            if !host.has_edge(x, y) {
                return Err(PatternError::MissingEdge(x, y));
            }
        }
        Ok(())
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    /// Image of the pattern's edge set as sorted `(min, max)` pairs.
    pub fn edge_image(&self) -> Vec<(usize, usize)> {
        edge_image(&self.pattern.graph(), &self.map)
    }
}

fn edge_image(pattern: &SmallGraph, map: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = pattern
        .edges()
        .iter()
        .map(|&(p, q)| {
            let (x, y) = (map[p], map[q]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort_unstable();
    e
}

/// Serialized form of an embedding: pattern name and image vertices in
/// canonical label order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub pattern: String,
    pub vertices: Vec<usize>,
}

impl From<&Embedding> for EmbeddingRecord {
    fn from(e: &Embedding) -> Self {
        EmbeddingRecord {
            pattern: e.pattern.name(),
            vertices: e.map.clone(),
        }
    }
}

/// Vertex order and adjacency constraints for backtracking a pattern into a
/// host. Each pattern vertex after the first in a component has an earlier
/// neighbour, which keeps candidate sets small.
#[derive(Debug, Clone)]
pub struct EmbedPlan {
    /// Pattern vertices in placement order.
    pub order: Vec<usize>,
    /// For each position, the positions of earlier-placed pattern neighbours.
    pub back: Vec<Vec<usize>>,
}

impl EmbedPlan {
    /// Breadth-first order starting from `root`; further components start at
    /// their highest-degree vertex.
    pub fn rooted(pattern: &SmallGraph, root: usize) -> Self {
        let n = pattern.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        let mut next_root = Some(root);
        while order.len() < n {
            let r = next_root.take().unwrap_or_else(|| {
                (0..n)
                    .filter(|&v| !placed[v])
                    .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
                    .expect("unplaced vertex exists")
            });
            placed[r] = true;
            let start = order.len();
            order.push(r);
            let mut head = start;
            while head < order.len() {
                let x = order[head];
                head += 1;
                for y in pattern.neighbors(x).iter() {
                    if !placed[y] {
                        placed[y] = true;
                        order.push(y);
                    }
                }
            }
        }
        let mut position = vec![0; n];
        for (i, &p) in order.iter().enumerate() {
            position[p] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                pattern
                    .neighbors(p)
                    .iter()
                    .map(|q| position[q])
                    .filter(|&j| j < i)
                    .collect()
            })
            .collect();
        EmbedPlan { order, back }
    }

    /// Plan rooted at a maximum-degree vertex.
    pub fn new(pattern: &SmallGraph) -> Self {
        let root = (0..pattern.vertex_count())
            .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap_or(0);
        Self::rooted(pattern, root)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Enumerates injective homomorphisms into the host given by `rows`.
    ///
    /// Only vertices in `allowed` are used. `first` optionally pins the first
    /// pattern vertex of the plan. `refine` may shrink each candidate set; it
    /// receives the raw candidates and the host vertices already used. The
    /// callback receives host vertices indexed by plan position.
    pub fn for_each<M: Mask, B>(
        &self,
        rows: &[M],
        allowed: &M,
        first: Option<usize>,
        refine: &mut dyn FnMut(M, &M) -> M,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if self.order.is_empty() {
            return visit(&[]);
        }
        let mut image = Vec::with_capacity(self.len());
        let used = M::empty(rows.len());
        let root_cands = match first {
            Some(x) if allowed.test(x) => M::singleton(rows.len(), x),
            Some(_) => return ControlFlow::Continue(()),
            None => allowed.clone(),
        };
        self.extend(rows, allowed, root_cands, used, &mut image, refine, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend<M: Mask, B>(
        &self,
        rows: &[M],
        allowed: &M,
        root_cands: M,
        used: M,
        image: &mut Vec<usize>,
        refine: &mut dyn FnMut(M, &M) -> M,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let pos = image.len();
        if pos == self.len() {
            return visit(image);
        }
        let mut cands = if pos == 0 {
            root_cands.clone()
        } else {
            allowed.and_not(&used)
        };
        for &j in &self.back[pos] {
            cands = cands.and(&rows[image[j]]);
        }
        cands = refine(cands, &used);
        for x in cands.ones() {
            image.push(x);
            let mut next = used.clone();
            next.set(x);
            self.extend(rows, allowed, root_cands.clone(), next, image, refine, visit)?;
            image.pop();
        }
        ControlFlow::Continue(())
    }
}

/// Adjacency rows of a host as [`VertexSet`]s sized to the host.
pub(crate) fn vertex_set_rows(g: &SmallGraph) -> Vec<VertexSet> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let mut s = VertexSet::with_capacity(n);
            for y in g.neighbors(v).iter() {
                s.insert(y);
            }
            s
        })
        .collect()
}

/// All distinct copies of `pattern` in `host`, one representative per image
/// edge set, ordered by (sorted image vertex set, sorted image edge set).
/// With a `limit`, the search stops once that many distinct copies are
/// found, so the result is a deterministic subset rather than a prefix of
/// the full list.
pub fn enumerate_copies(
    pattern: &PatternKind,
    host: &SmallGraph,
    limit: Option<usize>,
) -> Vec<Embedding> {
    let pg = pattern.graph();
    let n = host.vertex_count();
    if pg.vertex_count() > n || limit == Some(0) {
        return Vec::new();
    }
    let plan = EmbedPlan::new(&pg);
    let rows = vertex_set_rows(host);
    let allowed = VertexSet::full(n);
    let mut found: BTreeMap<(Vec<usize>, Vec<(usize, usize)>), Vec<usize>> = BTreeMap::new();
    let mut map = vec![0; pg.vertex_count()];
    let _ = plan.for_each::<VertexSet, ()>(
        &rows,
        &allowed,
        None,
        &mut |c, _| c,
        &mut |image| {
            for (i, &p) in plan.order.iter().enumerate() {
                map[p] = image[i];
            }
            let mut verts = map.clone();
            verts.sort_unstable();
            let edges = edge_image(&pg, &map);
            found.entry((verts, edges)).or_insert_with(|| map.clone());
            if limit.is_some_and(|l| found.len() >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    );
    found
        .into_values()
        .map(|m| Embedding::new(pattern.clone(), m))
        .collect()
}

/// Orbit index of every vertex under the automorphism group (orbits numbered
/// by their smallest vertex, in increasing order).
pub fn automorphism_orbits(g: &SmallGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut orbit = vec![usize::MAX; n];
    let mut next = 0;
    for r in 0..n {
        if orbit[r] != usize::MAX {
            continue;
        }
        orbit[r] = next;
        for s in r + 1..n {
            if orbit[s] == usize::MAX && maps_to(g, r, s) {
                orbit[s] = next;
            }
        }
        next += 1;
    }
    orbit
}

/// Whether some automorphism of `g` sends `r` to `s`.
fn maps_to(g: &SmallGraph, r: usize, s: usize) -> bool {
    if g.degree(r) != g.degree(s) {
        return false;
    }
    let plan = EmbedPlan::rooted(g, r);
    let rows = vertex_set_rows(g);
    let allowed = VertexSet::full(g.vertex_count());
    // An injective edge-preserving self-map is an automorphism.
    plan.for_each(&rows, &allowed, Some(s), &mut |c, _| c, &mut |_| {
        ControlFlow::Break(())
    })
    .is_break()
}

/// Number of automorphisms, by exhaustive enumeration.
pub fn automorphism_count(g: &SmallGraph) -> usize {
    let plan = EmbedPlan::new(g);
    let rows = vertex_set_rows(g);
    let allowed = VertexSet::full(g.vertex_count());
    let mut count = 0;
    let _ = plan.for_each::<VertexSet, ()>(&rows, &allowed, None, &mut |c, _| c, &mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

fn check_size(g: &SmallGraph) -> Result<(), PatternError> {
    if g.vertex_count() > MAX_PATTERN_VERTICES {
        return Err(PatternError::TooLarge(g.vertex_count()));
    }
    Ok(())
}

fn edge_masks(g: &SmallGraph) -> Vec<u32> {
    g.edges()
        .iter()
        .map(|&(u, v)| (1u32 << u) | (1u32 << v))
        .collect()
}

/// Minimum vertex cover size by exhaustive search.
pub fn vertex_cover_number(g: &SmallGraph) -> Result<usize, PatternError> {
    check_size(g)?;
    let edges = edge_masks(g);
    let n = g.vertex_count();
    let best = (0u32..1 << n)
        .filter(|&s| edges.iter().all(|&e| e & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// The `i`-covering number for graphs: `i = 1` is the vertex cover number,
/// `i = 2` is the vertex count.
pub fn covering_number(pattern: &PatternKind, i: usize) -> Result<usize, PatternError> {
    let g = pattern.graph();
    match i {
        1 => vertex_cover_number(&g),
        2 => {
            check_size(&g)?;
            Ok(g.vertex_count())
        }
        _ => Err(PatternError::BadIndex(i)),
    }
}

/// Whether `pattern` sits inside `K_{s1,s2}` under some bipartition with the
/// given side sizes.
pub fn fits_bipartition(g: &SmallGraph, s1: usize, s2: usize) -> Result<bool, PatternError> {
    check_size(g)?;
    let n = g.vertex_count();
    if s1 + s2 != n {
        return Ok(false);
    }
    let edges = edge_masks(g);
    let full = (1u32 << n) - 1;
    Ok((0u32..1 << n)
        .filter(|s| s.count_ones() as usize == s1)
        .any(|side| {
            let other = full & !side;
            edges
                .iter()
                .all(|&e| e & side != 0 && e & other != 0)
        }))
}

/// For graphs, a pattern that fits `K_{s1,s2}` (with `s1 <= s2`) is rigid when
/// its vertex cover number equals `s1`.
pub fn is_rigid(pattern: &PatternKind, sizes: (usize, usize)) -> Result<bool, PatternError> {
    let (s1, s2) = sizes;
    let g = pattern.graph();
    if s1 > s2 || !fits_bipartition(&g, s1, s2)? {
        return Ok(false);
    }
    Ok(vertex_cover_number(&g)? == s1)
}
