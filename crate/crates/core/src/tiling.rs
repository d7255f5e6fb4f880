//! Exact maximum tilings and mixed-family covers, plus the explicit tilings
//! of small blowups and the greedy helpers.
//!
//! The solver branches on the lowest free vertex: either one of the copies
//! containing it is taken, or it stays uncovered. Vertices with identical
//! neighbourhoods are interchangeable, so copies always use the lowest free
//! member of such a class and leaving a vertex uncovered leaves its whole
//! remaining class uncovered.

use std::ops::ControlFlow;

use num_rational::BigRational;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Mask;
use crate::graph::{GraphError, SmallGraph, VertexSet};
use crate::patterns::{
    automorphism_orbits, enumerate_copies, vertex_set_rows, EmbedPlan, Embedding,
    EmbeddingRecord, PatternError, PatternKind,
};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
const DEFAULT_MEMO_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("member {index} ({pattern}) is not a valid copy: {source}")]
    InvalidMember {
        index: usize,
        pattern: String,
        source: PatternError,
    },
    #[error("members {0} and {1} share a vertex")]
    Overlap(usize, usize),
    #[error("pattern {0} cannot be lifted; only K2, H and Hhat are supported")]
    Unliftable(String),
    #[error("host has no vertices")]
    EmptyHost,
    #[error("no pattern families given")]
    NoFamilies,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A collection of vertex-disjoint pattern copies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tiling {
    pub members: Vec<Embedding>,
}

impl Tiling {
    pub fn new(members: Vec<Embedding>) -> Self {
        Tiling { members }
    }

    /// Total number of vertices covered.
    pub fn coverage(&self) -> usize {
        self.members.iter().map(|m| m.map.len()).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Checks every member against `host` and pairwise disjointness.
    pub fn validate(&self, host: &SmallGraph) -> Result<(), TilingError> {
        let mut owner: Vec<Option<usize>> = vec![None; host.vertex_count()];
        for (index, m) in self.members.iter().enumerate() {
            m.validate(host).map_err(|source| TilingError::InvalidMember {
                index,
                pattern: m.pattern.name(),
                source,
            })?;
            for &x in &m.map {
                if let Some(prev) = owner[x] {
                    return Err(TilingError::Overlap(prev, index));
                }
                owner[x] = Some(index);
            }
        }
        Ok(())
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.members.iter().flat_map(|m| m.map.iter().copied()).collect()
    }

    pub fn to_records(&self) -> Vec<EmbeddingRecord> {
        self.members.iter().map(EmbeddingRecord::from).collect()
    }
}

/// Outcome of a tiling or cover search.
#[derive(Debug, Clone)]
pub struct CoverResult {
    pub coverage: usize,
    pub witness: Tiling,
    /// False only when the node budget ran out; `coverage` is then a lower bound.
    pub exact: bool,
    /// The search stopped early because the requested target was reached.
    pub reached_target: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub node_budget: u64,
    pub target: Option<usize>,
    pub memo_limit: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: DEFAULT_NODE_BUDGET,
            target: None,
            memo_limit: DEFAULT_MEMO_LIMIT,
        }
    }
}

impl SearchLimits {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchLimits {
            node_budget,
            ..Default::default()
        }
    }
}

struct CompiledPattern {
    kind: PatternKind,
    size: usize,
    /// One plan per automorphism orbit, rooted at the orbit's representative.
    plans: Vec<EmbedPlan>,
}

/// Raw member as found by the search: pattern index and host vertex per
/// pattern vertex.
type RawMember = (usize, Vec<usize>);

/// Precompiled pattern family, reusable across many hosts.
pub struct CoverSolver {
    patterns: Vec<CompiledPattern>,
}

impl CoverSolver {
    pub fn new(families: &[PatternKind]) -> Result<Self, TilingError> {
        if families.is_empty() {
            return Err(TilingError::NoFamilies);
        }
        let mut patterns: Vec<CompiledPattern> = Vec::new();
        for kind in families {
            if patterns.iter().any(|p| &p.kind == kind) {
                continue;
            }
            let g = kind.graph();
            let orbits = automorphism_orbits(&g);
            let mut plans = Vec::new();
            for (v, &o) in orbits.iter().enumerate() {
                if orbits[..v].iter().all(|&p| p != o) {
                    plans.push(EmbedPlan::rooted(&g, v));
                }
            }
            patterns.push(CompiledPattern {
                kind: kind.clone(),
                size: g.vertex_count(),
                plans,
            });
        }
        patterns.sort_by(|a, b| b.size.cmp(&a.size));
        Ok(CoverSolver { patterns })
    }

    /// Solves on a [`SmallGraph`], picking the narrowest mask type that fits.
    pub fn solve(&self, host: &SmallGraph, limits: SearchLimits) -> CoverResult {
        let n = host.vertex_count();
        if n <= 64 {
            self.solve_rows(&int_rows::<u64>(host), limits)
        } else if n <= 128 {
            self.solve_rows(&int_rows::<u128>(host), limits)
        } else {
            self.solve_rows(&vertex_set_rows(host), limits)
        }
    }

    /// Solves on a host given by adjacency rows.
    pub fn solve_rows<M: Mask>(&self, rows: &[M], limits: SearchLimits) -> CoverResult {
        let raw = self.search(rows, limits, 0);
        let members = raw
            .members
            .into_iter()
            .map(|(p, map)| Embedding::new(self.patterns[p].kind.clone(), map))
            .collect();
        CoverResult {
            coverage: raw.coverage,
            witness: Tiling::new(members),
            exact: !raw.aborted,
            reached_target: raw.reached_target,
            nodes: raw.nodes,
        }
    }

    /// Whether a cover of at least `target` vertices exists. Returns `None`
    /// when the budget runs out first.
    pub fn reaches<M: Mask>(&self, rows: &[M], target: usize, node_budget: u64) -> Option<bool> {
        let limits = SearchLimits {
            node_budget,
            target: Some(target),
            memo_limit: DEFAULT_MEMO_LIMIT,
        };
        let raw = self.search(rows, limits, target);
        if raw.coverage >= target {
            Some(true)
        } else if raw.aborted {
            None
        } else {
            Some(false)
        }
    }

    /// Branches whose bound falls below `floor` are cut even if they could
    /// improve the best cover so far.
    fn search<M: Mask>(&self, rows: &[M], limits: SearchLimits, floor: usize) -> RawOutcome {
        let n = rows.len();
        let twins = TwinClasses::new(rows);
        let single = (self.patterns.len() == 1).then(|| self.patterns[0].size);
        let max_size = self.patterns[0].size;
        let all = full_mask::<M>(n);
        let reachable = non_isolated(rows, &all).count();
        let ceiling = match single {
            Some(s) => reachable / s * s,
            None => reachable,
        };
        let mut s = Search {
            solver: self,
            rows,
            twins: &twins,
            single,
            max_size,
            ceiling,
            floor,
            limits,
            best_coverage: 0,
            best_members: Vec::new(),
            stack: Vec::new(),
            nodes: 0,
            aborted: false,
            finished: false,
            reached_target: false,
            memo: FxHashMap::default(),
        };
        s.dfs(all, 0);
        RawOutcome {
            coverage: s.best_coverage,
            members: s.best_members,
            aborted: s.aborted,
            reached_target: s.reached_target,
            nodes: s.nodes,
        }
    }
}

struct RawOutcome {
    coverage: usize,
    members: Vec<RawMember>,
    aborted: bool,
    reached_target: bool,
    nodes: u64,
}

pub(crate) fn int_rows<M: Mask>(g: &SmallGraph) -> Vec<M> {
    let n = g.vertex_count();
    assert!(n <= M::CAPACITY);
    (0..n)
        .map(|v| {
            let mut m = M::empty(n);
            for y in g.neighbors(v).iter() {
                m.set(y);
            }
            m
        })
        .collect()
}

fn full_mask<M: Mask>(n: usize) -> M {
    let mut m = M::empty(n);
    for v in 0..n {
        m.set(v);
    }
    m
}

fn non_isolated<M: Mask>(rows: &[M], free: &M) -> M {
    let mut out = M::empty(rows.len());
    for v in free.ones() {
        if rows[v].intersects(free) {
            out.set(v);
        }
    }
    out
}

/// Vertices partitioned by identical open neighbourhood (non-adjacent twins)
/// or identical closed neighbourhood (adjacent twins). Swapping two members
/// of a class is an automorphism of the host.
struct TwinClasses<M> {
    class_mask: Vec<M>,
    /// Members of the vertex's class with a smaller index.
    lower: Vec<M>,
}

impl<M: Mask> TwinClasses<M> {
    fn new(rows: &[M]) -> Self {
        let n = rows.len();
        let mut class_of = vec![usize::MAX; n];
        let mut masks: Vec<M> = Vec::new();
        for v in 0..n {
            if class_of[v] != usize::MAX {
                continue;
            }
            let id = masks.len();
            let mut members = M::singleton(n, v);
            class_of[v] = id;
            let closed_v = rows[v].or(&M::singleton(n, v));
            for w in v + 1..n {
                if class_of[w] != usize::MAX {
                    continue;
                }
                let open_twin = !rows[v].test(w) && rows[v] == rows[w];
                let closed_twin =
                    rows[v].test(w) && closed_v == rows[w].or(&M::singleton(n, w));
                if open_twin || closed_twin {
                    class_of[w] = id;
                    members.set(w);
                }
            }
            masks.push(members);
        }
        let class_mask: Vec<M> = (0..n).map(|v| masks[class_of[v]].clone()).collect();
        let lower = (0..n)
            .map(|v| {
                let mut below = M::empty(n);
                for w in class_mask[v].ones() {
                    if w < v {
                        below.set(w);
                    }
                }
                below
            })
            .collect();
        TwinClasses { class_mask, lower }
    }
}

struct Search<'a, M: Mask> {
    solver: &'a CoverSolver,
    rows: &'a [M],
    twins: &'a TwinClasses<M>,
    single: Option<usize>,
    max_size: usize,
    ceiling: usize,
    floor: usize,
    limits: SearchLimits,
    best_coverage: usize,
    best_members: Vec<RawMember>,
    stack: Vec<RawMember>,
    nodes: u64,
    aborted: bool,
    finished: bool,
    reached_target: bool,
    /// Free set -> best (coverage, member count) seen on entry.
    memo: FxHashMap<M, (usize, usize)>,
}

impl<M: Mask> Search<'_, M> {
    fn better(&self, coverage: usize, members: usize) -> bool {
        coverage > self.best_coverage
            || (self.single.is_none()
                && coverage == self.best_coverage
                && members < self.best_members.len())
    }

    fn dfs(&mut self, free: M, covered: usize) {
        if self.finished || self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            self.aborted = true;
            return;
        }
        let used = self.stack.len();
        if self.better(covered, used) {
            self.best_coverage = covered;
            self.best_members = self.stack.clone();
        }
        if self.limits.target.is_some_and(|t| covered >= t) {
            self.reached_target = true;
            self.finished = true;
            return;
        }
        if covered == self.ceiling && used <= covered.div_ceil(self.max_size) {
            self.finished = true;
            return;
        }

        let free = non_isolated(self.rows, &free);
        let left = free.count();
        let bound = match self.single {
            Some(s) => covered + left / s * s,
            None => covered + left,
        };
        if bound < self.best_coverage || bound < self.floor {
            return;
        }
        if bound == self.best_coverage {
            // Only a cover with fewer members could still improve.
            let fewest = used + (self.best_coverage - covered).div_ceil(self.max_size);
            if self.single.is_some() || fewest >= self.best_members.len() {
                return;
            }
        }
        if let Some(&(c, m)) = self.memo.get(&free) {
            if c > covered || (c == covered && (self.single.is_some() || m <= used)) {
                return;
            }
        }
        if self.memo.len() < self.limits.memo_limit || self.memo.contains_key(&free) {
            self.memo.insert(free.clone(), (covered, used));
        }

        let Some(x) = self.pick_vertex(&free) else {
            return;
        };
        if self.branch_on(&free, x, covered).is_break() {
            return;
        }
        let rest = free.and_not(&self.twins.class_mask[x]);
        self.dfs(rest, covered);
    }

    /// A free vertex of least free degree, lowest among its free twins.
    fn pick_vertex(&self, free: &M) -> Option<usize> {
        let x = free
            .ones()
            .into_iter()
            .min_by_key(|&v| self.rows[v].and(free).count())?;
        self.twins.class_mask[x].and(free).first()
    }

    /// Recurses on every copy through `x` inside `free`, one per vertex set,
    /// larger patterns first. Copies are generated lazily so that a search
    /// stopping at its target never enumerates the rest.
    fn branch_on(&mut self, free: &M, x: usize, covered: usize) -> ControlFlow<()> {
        let n = self.rows.len();
        let (solver, rows, twins) = (self.solver, self.rows, self.twins);
        let mut seen: FxHashSet<M> = FxHashSet::default();
        for (p, pat) in solver.patterns.iter().enumerate() {
            for plan in &pat.plans {
                let mut refine = |cands: M, used: &M| {
                    let open = free.and_not(used);
                    let mut keep = cands.clone();
                    for y in cands.ones() {
                        if twins.lower[y].intersects(&open) {
                            keep.clear(y);
                        }
                    }
                    keep
                };
                plan.for_each::<M, ()>(rows, free, Some(x), &mut refine, &mut |image| {
                    let mut mask = M::empty(n);
                    for &y in image {
                        mask.set(y);
                    }
                    if !seen.insert(mask.clone()) {
                        return ControlFlow::Continue(());
                    }
                    let mut map = vec![0; image.len()];
                    for (i, &q) in plan.order.iter().enumerate() {
                        map[q] = image[i];
                    }
                    self.stack.push((p, map));
                    self.dfs(free.and_not(&mask), covered + pat.size);
                    self.stack.pop();
                    if self.finished || self.aborted {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Maximum number of vertex-disjoint copies of `pattern` in `host`.
#[derive(Debug, Clone)]
pub struct TilingResult {
    pub count: usize,
    pub witness: Tiling,
    pub exact: bool,
}

pub fn max_tiling(pattern: &PatternKind, host: &SmallGraph, node_budget: u64) -> TilingResult {
    let solver = CoverSolver::new(std::slice::from_ref(pattern)).expect("one family");
    let r = solver.solve(host, SearchLimits::with_budget(node_budget));
    TilingResult {
        count: r.witness.len(),
        witness: r.witness,
        exact: r.exact,
    }
}

/// The default mixed family `{K2, H, Hhat}`.
pub fn default_families() -> Vec<PatternKind> {
    vec![PatternKind::K2, PatternKind::H, PatternKind::Hhat]
}

/// Maximum number of vertices covered by disjoint copies drawn from `families`.
pub fn max_mixed_cover(
    families: &[PatternKind],
    host: &SmallGraph,
    limits: SearchLimits,
) -> Result<CoverResult, TilingError> {
    Ok(CoverSolver::new(families)?.solve(host, limits))
}

/// Fraction of host vertices covered by a maximum tiling.
pub fn covering_ratio(
    pattern: &PatternKind,
    host: &SmallGraph,
    node_budget: u64,
) -> Result<(BigRational, bool), TilingError> {
    if host.vertex_count() == 0 {
        return Err(TilingError::EmptyHost);
    }
    let r = max_tiling(pattern, host, node_budget);
    let covered = r.count * pattern.vertex_count();
    Ok((
        BigRational::new(covered.into(), host.vertex_count().into()),
        r.exact,
    ))
}

/// Copies of `H` inside `K2[6]` covering all 12 vertices, in the blowup
/// layout `(part, clone) -> part*6 + clone`.
pub fn k2_blowup_tiling() -> Vec<[usize; 6]> {
    vec![[0, 6, 7, 8, 1, 2], [3, 9, 10, 11, 4, 5]]
}

/// Copies of `H` inside `H[6]`: copy `i` takes clone `i` of every vertex.
pub fn h_blowup_tiling() -> Vec<[usize; 6]> {
    (0..6)
        .map(|i| std::array::from_fn(|p| p * 6 + i))
        .collect()
}

/// The embeddings of `H` into `Hhat` used to tile its blowups, as the `Hhat`
/// vertex receiving each of `u, v, a, b, c, d`.
const HHAT_SPLITS: [[usize; 6]; 4] = [
    // u, d -> u^; v -> v^; a, b -> b^; c -> c^
    [0, 1, 4, 4, 5, 0],
    // u -> u^; v, a -> v^; b -> b^; c, d -> c^
    [0, 1, 1, 4, 5, 5],
    // u, c, d -> w^; v -> c^; a, b -> b^
    [2, 5, 4, 4, 2, 2],
    // u -> b^; v, a, b -> w^; c, d -> c^
    [4, 2, 2, 2, 5, 5],
];

/// Disjoint copies of `H` in `Hhat[t]`: `floor(t/2)` copies using the
/// pendant vertices, then `floor(t/6)` copies along each of four embeddings
/// that wrap around the five-cycle.
pub fn hhat_blowup_tiling(t: usize) -> Result<Tiling, TilingError> {
    if t == 0 {
        return Err(GraphError::ZeroBlowup.into());
    }
    let mut next = [0usize; 7];
    let take = |class: usize, next: &mut [usize; 7]| {
        let i = next[class];
        next[class] += 1;
        class * t + i
    };
    let mut members = Vec::new();
    // u -> u^, v -> v^, a, b -> a^, c, d -> d^
    for _ in 0..t / 2 {
        let map = [0, 1, 3, 3, 6, 6]
            .iter()
            .map(|&c| take(c, &mut next))
            .collect();
        members.push(Embedding::new(PatternKind::H, map));
    }
    for split in HHAT_SPLITS {
        for _ in 0..t / 6 {
            let map = split.iter().map(|&c| take(c, &mut next)).collect();
            members.push(Embedding::new(PatternKind::H, map));
        }
    }
    Ok(Tiling::new(members))
}

/// Replaces every member of a `{K2, H, Hhat}` tiling of `host` by the
/// corresponding perfect `H`-tiling of its 6-blowup inside `host[6]`.
pub fn lift_tiling(tiling: &Tiling, host: &SmallGraph) -> Result<Tiling, TilingError> {
    tiling.validate(host)?;
    let hhat = hhat_blowup_tiling(6)?;
    let hhat_copies: Vec<Vec<usize>> = hhat.members.iter().map(|m| m.map.clone()).collect();
    let mut out = Vec::new();
    for m in &tiling.members {
        let local: Vec<Vec<usize>> = match m.pattern {
            PatternKind::K2 => k2_blowup_tiling().iter().map(|c| c.to_vec()).collect(),
            PatternKind::H => h_blowup_tiling().iter().map(|c| c.to_vec()).collect(),
            PatternKind::Hhat => hhat_copies.clone(),
            ref other => return Err(TilingError::Unliftable(other.name())),
        };
        for copy in local {
            let map = copy
                .iter()
                .map(|&z| m.map[z / 6] * 6 + z % 6)
                .collect();
            out.push(Embedding::new(PatternKind::H, map));
        }
    }
    Ok(Tiling::new(out))
}

/// Finds a copy of `H`, using a fast greedy on the minimum-degree-6 core and
/// falling back to exhaustive search when the core is empty.
pub fn find_h_in_dense(g: &SmallGraph) -> Option<Embedding> {
    let n = g.vertex_count();
    let mut alive = VertexSet::full(n);
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] <= 5).collect();
    let mut queued: Vec<bool> = degree.iter().map(|&d| d <= 5).collect();
    while let Some(v) = queue.pop() {
        alive.remove(v);
        for w in g.neighbors(v).iter() {
            if alive.contains(w) {
                degree[w] -= 1;
                if degree[w] <= 5 && !queued[w] {
                    queued[w] = true;
                    queue.push(w);
                }
            }
        }
    }
    if let Some(u) = alive.first() {
        let core_nbrs = |x: usize| {
            let mut s = g.neighbors(x).clone();
            s.intersect_with(&alive);
            s
        };
        let nu = core_nbrs(u);
        let v = nu.first()?;
        let mut leaves_u = nu.iter().filter(|&x| x != v);
        let a = leaves_u.next()?;
        let b = leaves_u.next()?;
        let nv = core_nbrs(v);
        let mut leaves_v = nv.iter().filter(|&x| x != u && x != a && x != b);
        let c = leaves_v.next()?;
        let d = leaves_v.next()?;
        return Some(Embedding::new(PatternKind::H, vec![u, v, a, b, c, d]));
    }
    let pattern = PatternKind::H.graph();
    let plan = EmbedPlan::new(&pattern);
    let rows = vertex_set_rows(g);
    let found = plan.for_each(
        &rows,
        &VertexSet::full(n),
        None,
        &mut |c, _| c,
        &mut |image| ControlFlow::Break(image.to_vec()),
    );
    match found {
        ControlFlow::Break(image) => {
            let mut map = vec![0; 6];
            for (i, &p) in plan.order.iter().enumerate() {
                map[p] = image[i];
            }
            Some(Embedding::new(PatternKind::H, map))
        }
        ControlFlow::Continue(()) => None,
    }
}

/// Picks one member from each family, greedily in family order, so that the
/// picks are pairwise disjoint. Returns `None` when some family has no member
/// disjoint from the earlier picks.
pub fn disjoint_representatives(families: &[Vec<Vec<usize>>]) -> Option<Vec<Vec<usize>>> {
    let mut taken: FxHashSet<usize> = FxHashSet::default();
    let mut picks = Vec::with_capacity(families.len());
    for family in families {
        let pick = family
            .iter()
            .find(|e| e.iter().all(|x| !taken.contains(x)))?;
        taken.extend(pick.iter().copied());
        picks.push(pick.clone());
    }
    Some(picks)
}

/// Serialized tiling witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingRecord {
    pub members: Vec<EmbeddingRecord>,
    pub coverage: usize,
}

impl From<&Tiling> for TilingRecord {
    fn from(t: &Tiling) -> Self {
        TilingRecord {
            members: t.to_records(),
            coverage: t.coverage(),
        }
    }
}

/// All copies of every family, for callers that need the full list.
pub fn all_copies(families: &[PatternKind], host: &SmallGraph) -> Vec<Embedding> {
    families
        .iter()
        .flat_map(|f| enumerate_copies(f, host, None))
        .collect()
}
