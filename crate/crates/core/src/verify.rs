//! Finite checks for pairs of `H` copies: the extendability oracle, the
//! boundary-edge-count verification of the pairwise edge bounds, and the
//! curated decomposition fixtures.
//!
//! A configuration consists of two labelled copies `H_i` (host vertices
//! `0..6`) and `H_j` (`6..12`), a 36-bit set of cross edges, and a set of
//! designated vertices in each copy. Every designated vertex gets its own
//! pendant vertex (indices `12..`, anchors of `H_i` first, each copy in label
//! order) adjacent to nothing but its anchor. Cross edge `(r, c)` between
//! label `r` of `H_i` and label `c` of `H_j` is bit `6r + c`.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{binom, colex_range, split_range};
use crate::graph::{GraphBuilder, GraphError, SmallGraph};
use crate::patterns::{Embedding, PatternKind, H_EDGES, H_LABELS};
use crate::tiling::{default_families, CoverSolver, SearchLimits, Tiling, TilingError};

pub const SCHEMA_VERSION: u32 = 1;

/// Vertices needed in a cover for a pair to count as extendable.
pub const EXTENDABLE_COVER: usize = 13;

const CROSS_BITS: u32 = 36;
const CROSS_MASK: u64 = (1 << CROSS_BITS) - 1;
const ORACLE_NODE_BUDGET: u64 = 1_000_000;
const MAX_RECORDED_FAILURES: usize = 1000;

pub const U: usize = 0;
pub const V: usize = 1;
pub const A: usize = 2;
pub const B: usize = 3;
pub const C: usize = 4;
pub const D: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("cross-edge mask {0:#x} uses bits beyond 36")]
    MaskTooWide(u64),
    #[error("designated set {0:?} is not an admissible pattern")]
    Inadmissible(Vec<String>),
    #[error("exhaustive mode is only available for L51")]
    ExhaustiveNotAllowed,
    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),
    #[error("unknown host vertex name {0:?}")]
    UnknownVertex(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Set of `H` labels as a 6-bit mask (`u` is bit 0, `d` is bit 5).
pub type LabelSet = u8;

pub fn label_set(labels: &[usize]) -> LabelSet {
    labels.iter().fold(0, |m, &l| m | 1 << l)
}

pub fn label_names(set: LabelSet) -> Vec<String> {
    (0..6)
        .filter(|l| set >> l & 1 == 1)
        .map(|l| H_LABELS[l].to_string())
        .collect()
}

fn has(set: LabelSet, l: usize) -> bool {
    set >> l & 1 == 1
}

/// The three structural conditions a designated set must satisfy: never
/// both `{a,b}` and `{c,d}`, never `{a,b}` together with `u`, never `{c,d}`
/// together with `v`. Returns which of them are violated.
pub fn violated_conditions(set: LabelSet) -> [bool; 3] {
    let ab = has(set, A) || has(set, B);
    let cd = has(set, C) || has(set, D);
    [ab && cd, ab && has(set, U), cd && has(set, V)]
}

/// Swaps the two halves of `H` (`u↔v`, `a↔c`, `b↔d`).
pub fn mirror(set: LabelSet) -> LabelSet {
    const IMAGE: [usize; 6] = [V, U, C, D, A, B];
    (0..6)
        .filter(|&l| has(set, l))
        .fold(0, |m, l| m | 1 << IMAGE[l])
}

/// An admissible designated set with the name of its symmetry class under
/// the automorphisms of `H` that fix `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissiblePattern {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub set: LabelSet,
    pub class: String,
}

/// Designated sets avoiding `{c, d}`: subsets of `{u, v, a, b}` of size at
/// most 2 that violate none of the structural conditions, plus `{v, a, b}`.
pub fn admissible_l_patterns() -> Vec<AdmissiblePattern> {
    let mut sets: Vec<LabelSet> = (0u8..16)
        .filter(|s| s.count_ones() <= 2)
        .filter(|&s| violated_conditions(s).iter().all(|&v| !v))
        .collect();
    sets.push(label_set(&[V, A, B]));
    sets.sort_by_key(|s| (s.count_ones(), s.reverse_bits()));
    sets.into_iter()
        .map(|s| {
            // swapping a and b is the only nontrivial relabelling that keeps c, d out
            let swapped = (s & !0b1100) | (s & 0b0100) << 1 | (s & 0b1000) >> 1;
            let rep = s.min(swapped);
            let class = if rep == 0 {
                "empty".to_string()
            } else {
                let names = label_names(rep).concat();
                if swapped != s {
                    format!("{names}~{}", label_names(s.max(swapped)).concat())
                } else {
                    names
                }
            };
            AdmissiblePattern {
                labels: label_names(s),
                set: s,
                class,
            }
        })
        .collect()
}

pub fn is_admissible(set: LabelSet) -> bool {
    admissible_l_patterns().iter().any(|p| p.set == set)
}

/// A pair of labelled `H` copies with cross edges and designated vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairConfig {
    pub bip: u64,
    pub l_i: LabelSet,
    pub l_j: LabelSet,
}

impl PairConfig {
    pub fn new(bip: u64, l_i: LabelSet, l_j: LabelSet) -> Self {
        PairConfig { bip, l_i, l_j }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.bip & !CROSS_MASK != 0 {
            return Err(VerifyError::MaskTooWide(self.bip));
        }
        for set in [self.l_i, self.l_j] {
            if !is_admissible(set) {
                return Err(VerifyError::Inadmissible(label_names(set)));
            }
        }
        Ok(())
    }

    /// Host vertices carrying a pendant, in pendant order.
    pub fn anchors(&self) -> Vec<usize> {
        (0..6)
            .filter(|&l| has(self.l_i, l))
            .chain((0..6).filter(|&l| has(self.l_j, l)).map(|l| l + 6))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        12 + self.anchors().len()
    }

    pub fn edge_count(&self) -> u32 {
        self.bip.count_ones()
    }

    /// Adjacency rows of the assembled host, without validation.
    pub fn rows(&self) -> Vec<u64> {
        let anchors = self.anchors();
        let mut rows = vec![0u64; 12 + anchors.len()];
        let mut link = |x: usize, y: usize| {
            rows[x] |= 1 << y;
            rows[y] |= 1 << x;
        };
        for off in [0, 6] {
            for &(p, q) in &H_EDGES {
                link(off + p, off + q);
            }
        }
        let mut m = self.bip;
        while m != 0 {
            let bit = m.trailing_zeros() as usize;
            link(bit / 6, 6 + bit % 6);
            m &= m - 1;
        }
        for (k, &x) in anchors.iter().enumerate() {
            link(x, 12 + k);
        }
        rows
    }

    /// `bip` as nine hex digits.
    pub fn bip_hex(&self) -> String {
        format!("{:09x}", self.bip)
    }

    /// Name of a host vertex: `u_i`, `c_j`, or `w:a_i` for a pendant.
    pub fn vertex_name(&self, x: usize) -> String {
        match x {
            0..=5 => format!("{}_i", H_LABELS[x]),
            6..=11 => format!("{}_j", H_LABELS[x - 6]),
            _ => format!("w:{}", self.vertex_name(self.anchors()[x - 12])),
        }
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, VerifyError> {
        (0..self.vertex_count())
            .find(|&x| self.vertex_name(x) == name)
            .ok_or_else(|| VerifyError::UnknownVertex(name.to_string()))
    }

    fn record(&self) -> FailureRecord {
        FailureRecord {
            bip_hex: self.bip_hex(),
            l_i: label_names(self.l_i),
            l_j: label_names(self.l_j),
            pendants: self
                .anchors()
                .iter()
                .map(|&x| self.vertex_name(x))
                .collect(),
        }
    }
}

/// Worst-case host: the two copies' own edges, the cross edges and one
/// pendant edge per designated vertex.
pub fn assemble_host(config: &PairConfig) -> Result<SmallGraph, VerifyError> {
    config.validate()?;
    let anchors = config.anchors();
    let mut g = GraphBuilder::new(12 + anchors.len())?;
    for off in [0, 6] {
        for &(p, q) in &H_EDGES {
            g.add_edge(off + p, off + q)?;
        }
    }
    for bit in 0..36 {
        if config.bip >> bit & 1 == 1 {
            g.add_edge(bit / 6, 6 + bit % 6)?;
        }
    }
    for (k, &x) in anchors.iter().enumerate() {
        g.add_edge(x, 12 + k)?;
    }
    Ok(g.build())
}

fn default_solver() -> &'static CoverSolver {
    static SOLVER: OnceLock<CoverSolver> = OnceLock::new();
    SOLVER.get_or_init(|| CoverSolver::new(&default_families()).expect("non-empty family"))
}

/// Whether the assembled host has a `{K2, H, Hhat}` cover of at least 13
/// vertices. `None` if the search budget ran out (never observed on these
/// hosts, which have at most 18 vertices).
pub fn extendable(config: &PairConfig) -> Option<bool> {
    default_solver().reaches(&config.rows(), EXTENDABLE_COVER, ORACLE_NODE_BUDGET)
}

pub fn is_extendable(config: &PairConfig) -> Result<bool, VerifyError> {
    config.validate()?;
    Ok(extendable(config).unwrap_or(false))
}

/// A cover witnessing extendability, if one exists.
pub fn extension_witness(config: &PairConfig) -> Result<Option<Tiling>, VerifyError> {
    config.validate()?;
    let r = default_solver().solve_rows(
        &config.rows(),
        SearchLimits {
            target: Some(EXTENDABLE_COVER),
            ..SearchLimits::with_budget(ORACLE_NODE_BUDGET)
        },
    );
    Ok((r.coverage >= EXTENDABLE_COVER).then_some(r.witness))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    L51,
    L52,
    L53,
    L54,
    L55,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [LemmaId::L51, LemmaId::L52, LemmaId::L53, LemmaId::L54, LemmaId::L55];

    pub fn parse(s: &str) -> Result<Self, VerifyError> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::UnknownLemma(s.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::L51 => "L51",
            LemmaId::L52 => "L52",
            LemmaId::L53 => "L53",
            LemmaId::L54 => "L54",
            LemmaId::L55 => "L55",
        }
    }

    /// Largest cross-edge count compatible with non-extendability.
    pub fn bound(self) -> u32 {
        match self {
            LemmaId::L51 => 30,
            LemmaId::L52 | LemmaId::L53 => 24,
            LemmaId::L54 => 21,
            LemmaId::L55 => 18,
        }
    }

    /// The designated-set pairs `(L_i, L_j)` to check, one per case up to
    /// symmetry.
    pub fn configurations(self) -> Vec<(LabelSet, LabelSet)> {
        let single = [label_set(&[U]), label_set(&[A])];
        let pairs = [
            label_set(&[U, V]),
            label_set(&[A, B]),
            label_set(&[V, A]),
            label_set(&[V, B]),
        ];
        let vab = label_set(&[V, A, B]);
        match self {
            LemmaId::L51 => single.iter().map(|&s| (s, 0)).collect(),
            LemmaId::L52 => single
                .iter()
                .flat_map(|&s| single.iter().map(move |&t| (s, t)))
                .collect(),
            LemmaId::L53 => pairs.iter().map(|&s| (s, 0)).collect(),
            LemmaId::L54 => pairs.iter().map(|&t| (vab, t)).collect(),
            LemmaId::L55 => vec![(vab, vab)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub bip_hex: String,
    #[serde(rename = "L_i")]
    pub l_i: Vec<String>,
    #[serde(rename = "L_j")]
    pub l_j: Vec<String>,
    pub pendants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LConfigRecord {
    #[serde(rename = "L_i")]
    pub l_i: Vec<String>,
    #[serde(rename = "L_j")]
    pub l_j: Vec<String>,
    pub checked: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub lemma: String,
    pub bound: u32,
    pub cross_edges_checked: u32,
    pub mode: String,
    pub l_configs: Vec<LConfigRecord>,
    pub checked: u64,
    /// Checks where the search budget ran out.
    pub undecided: u64,
    pub failure_count: u64,
    /// The first failures in checking order (at most 1000).
    pub failures: Vec<FailureRecord>,
    pub seed: Option<u64>,
    pub samples_per_config: Option<u64>,
    pub verdict: String,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Masks to check for one configuration.
enum Work {
    Range { start: u64, end: u64 },
    List(Vec<u64>),
}

struct ChunkResult {
    checked: u64,
    undecided: u64,
    failures: Vec<u64>,
}

fn check_chunk(config: (LabelSet, LabelSet), masks: impl Iterator<Item = u64>, progress: &AtomicU64) -> ChunkResult {
    let solver = default_solver();
    let mut out = ChunkResult {
        checked: 0,
        undecided: 0,
        failures: Vec::new(),
    };
    for bip in masks {
        let cfg = PairConfig::new(bip, config.0, config.1);
        match solver.reaches(&cfg.rows(), EXTENDABLE_COVER, ORACLE_NODE_BUDGET) {
            Some(true) => {}
            Some(false) => out.failures.push(bip),
            None => out.undecided += 1,
        }
        out.checked += 1;
        if out.checked % 4096 == 0 {
            progress.fetch_add(4096, Ordering::Relaxed);
        }
    }
    progress.fetch_add(out.checked % 4096, Ordering::Relaxed);
    out
}

/// Uniform random `k`-subsets of the 36 cross pairs, from a ChaCha8 stream
/// selected by `stream` under `seed`.
pub fn sample_masks(seed: u64, stream: u64, k: u32, count: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count)
        .map(|_| {
            sample(&mut rng, CROSS_BITS as usize, k as usize)
                .into_iter()
                .fold(0u64, |m, b| m | 1 << b)
        })
        .collect()
}

/// Progress callback: `(done, total)`.
pub type ProgressFn<'a> = &'a (dyn Fn(u64, u64) + Sync);

/// Checks that every cross-edge set of size `bound + 1` makes the pair
/// extendable, for each designated-set configuration of the lemma.
pub fn verify_lemma(
    id: LemmaId,
    mode: Mode,
    jobs: usize,
    progress: Option<ProgressFn<'_>>,
) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let k = id.bound() + 1;
    let configs = id.configurations();
    let jobs = jobs.max(1);
    let mut items: Vec<(usize, Work)> = Vec::new();
    match mode {
        Mode::Exhaustive => {
            if id != LemmaId::L51 {
                return Err(VerifyError::ExhaustiveNotAllowed);
            }
            let total = binom(u64::from(CROSS_BITS), u64::from(k)).expect("fits");
            for ci in 0..configs.len() {
                for (start, end) in split_range(total, jobs * 8) {
                    items.push((ci, Work::Range { start, end }));
                }
            }
        }
        Mode::Sampled { count, seed } => {
            for ci in 0..configs.len() {
                let masks = sample_masks(seed, ci as u64, k, count);
                let per = (masks.len() / (jobs * 8)).max(1);
                for chunk in masks.chunks(per) {
                    items.push((ci, Work::List(chunk.to_vec())));
                }
            }
        }
    }
    let total_checks: u64 = items
        .iter()
        .map(|(_, w)| match w {
            Work::Range { start, end } => end - start,
            Work::List(v) => v.len() as u64,
        })
        .sum();
    let done = AtomicU64::new(0);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<ChunkResult>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some((ci, work)) = items.get(idx) else {
                    break;
                };
                let cfg = configs[*ci];
                let r = match work {
                    Work::Range { start, end } => {
                        check_chunk(cfg, colex_range(CROSS_BITS, k, *start, *end), &done)
                    }
                    Work::List(v) => check_chunk(cfg, v.iter().copied(), &done),
                };
                results.lock().expect("no poisoned workers")[idx] = Some(r);
                if let Some(p) = progress {
                    p(done.load(Ordering::Relaxed), total_checks);
                }
            });
        }
    });
    let results = results.into_inner().expect("no poisoned workers");

    let mut per_config: Vec<LConfigRecord> = configs
        .iter()
        .map(|&(li, lj)| LConfigRecord {
            l_i: label_names(li),
            l_j: label_names(lj),
            checked: 0,
            failures: 0,
        })
        .collect();
    let (mut checked, mut undecided, mut failure_count) = (0, 0, 0);
    let mut failures = Vec::new();
    for ((ci, _), r) in items.iter().zip(results) {
        let r = r.expect("every chunk was processed");
        checked += r.checked;
        undecided += r.undecided;
        failure_count += r.failures.len() as u64;
        per_config[*ci].checked += r.checked;
        per_config[*ci].failures += r.failures.len() as u64;
        for bip in r.failures {
            if failures.len() < MAX_RECORDED_FAILURES {
                let (li, lj) = configs[*ci];
                failures.push(PairConfig::new(bip, li, lj).record());
            }
        }
    }
    let verdict = if failure_count > 0 {
        "fail"
    } else if undecided > 0 {
        "inconclusive"
    } else {
        "pass"
    };
    let (mode_name, seed, samples) = match mode {
        Mode::Exhaustive => ("exhaustive", None, None),
        Mode::Sampled { count, seed } => ("sampled", Some(seed), Some(count)),
    };
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        lemma: id.name().to_string(),
        bound: id.bound(),
        cross_edges_checked: k,
        mode: mode_name.to_string(),
        l_configs: per_config,
        checked,
        undecided,
        failure_count,
        failures,
        seed,
        samples_per_config: samples,
        verdict: verdict.to_string(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

/// Looks for a non-extendable configuration with exactly `bound` cross edges
/// by random sampling, trying at most `budget` masks per configuration.
pub fn tightness_probe(id: LemmaId, budget: u64, seed: u64) -> Option<PairConfig> {
    for (ci, (li, lj)) in id.configurations().into_iter().enumerate() {
        for bip in sample_masks(seed, ci as u64, id.bound(), budget) {
            let cfg = PairConfig::new(bip, li, lj);
            if extendable(&cfg) == Some(false) {
                return Some(cfg);
            }
        }
    }
    None
}

/// A decomposition drawn in a figure: the configuration's depicted cross
/// edges and the cover it shows.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub key: &'static str,
    pub caption: &'static str,
    pub config: PairConfig,
    pub members: Vec<(PatternKind, Vec<&'static str>)>,
}

impl Fixture {
    pub fn tiling(&self) -> Result<Tiling, VerifyError> {
        let mut members = Vec::new();
        for (kind, names) in &self.members {
            let map = names
                .iter()
                .map(|n| self.config.vertex_index(n))
                .collect::<Result<Vec<_>, _>>()?;
            members.push(Embedding::new(kind.clone(), map));
        }
        Ok(Tiling::new(members))
    }

    pub fn host(&self) -> Result<SmallGraph, VerifyError> {
        assemble_host(&self.config)
    }

    /// Same fixture with one depicted cross edge removed.
    pub fn without_cross_edge(&self, bit: u32) -> Fixture {
        let mut f = self.clone();
        f.config.bip &= !(1 << bit);
        f
    }
}

fn cross(pairs: &[(usize, usize)]) -> u64 {
    pairs.iter().fold(0, |m, &(r, c)| m | 1 << (6 * r + c))
}

const CAPTION_HHAT: &str =
    "Decomposition of V(H_i ∪ H_j) ∪ {w} into Ĥ and three pairwise disjoint edges.";
const CAPTION_H_FOUR: &str = "Decomposition of W into a copy of H and four disjoint edges.";
const CAPTION_TWO_H: &str = "Decomposition of W into two disjoint copies of H and one edge.";

/// Every figure whose caption starts with "Decomposition of".
pub fn figure_fixtures() -> Vec<Fixture> {
    use PatternKind::{Hhat, H, K2};
    let k2 = |x: &'static str, y: &'static str| (K2, vec![x, y]);
    vec![
        Fixture {
            key: "hhat-three-edges/pendant-at-u",
            caption: CAPTION_HHAT,
            config: PairConfig::new(
                cross(&[(C, A), (D, D), (B, D), (A, U), (V, B)]),
                label_set(&[U]),
                0,
            ),
            members: vec![
                (Hhat, vec!["u_i", "v_i", "d_j", "w:u_i", "b_i", "d_i", "b_j"]),
                k2("c_j", "v_j"),
                k2("a_j", "c_i"),
                k2("u_j", "a_i"),
            ],
        },
        Fixture {
            key: "hhat-three-edges/pendant-at-a",
            caption: CAPTION_HHAT,
            config: PairConfig::new(cross(&[(D, A), (B, A), (U, D)]), label_set(&[A]), 0),
            members: vec![
                (Hhat, vec!["u_i", "v_i", "a_j", "d_j", "b_i", "d_i", "c_i"]),
                k2("c_j", "v_j"),
                k2("u_j", "b_j"),
                k2("w:a_i", "a_i"),
            ],
        },
        Fixture {
            key: "h-four-edges/pendants-at-u-u",
            caption: CAPTION_H_FOUR,
            config: PairConfig::new(
                cross(&[(D, B), (B, D), (A, C), (C, V), (D, U)]),
                label_set(&[U]),
                label_set(&[U]),
            ),
            members: vec![
                (H, vec!["u_j", "d_i", "a_j", "w:u_j", "v_i", "b_j"]),
                k2("w:u_i", "u_i"),
                k2("d_j", "b_i"),
                k2("c_j", "a_i"),
                k2("v_j", "c_i"),
            ],
        },
        Fixture {
            key: "two-h-one-edge/pendants-at-u-a",
            caption: CAPTION_TWO_H,
            config: PairConfig::new(
                cross(&[(A, A), (D, A), (D, U), (V, B), (D, D)]),
                label_set(&[U]),
                label_set(&[A]),
            ),
            members: vec![
                (H, vec!["u_i", "v_i", "b_i", "w:u_i", "c_i", "b_j"]),
                (H, vec!["d_i", "a_j", "u_j", "d_j", "a_i", "w:a_j"]),
                k2("v_j", "c_j"),
            ],
        },
        Fixture {
            key: "two-h-one-edge/pendants-at-v-a",
            caption: CAPTION_TWO_H,
            config: PairConfig::new(
                cross(&[(C, C), (V, C), (U, U), (U, D)]),
                label_set(&[V, A]),
                0,
            ),
            members: vec![
                (H, vec!["u_j", "u_i", "a_j", "b_j", "b_i", "d_j"]),
                (H, vec!["c_j", "v_i", "v_j", "c_i", "d_i", "w:v_i"]),
                k2("w:a_i", "a_i"),
            ],
        },
        Fixture {
            key: "two-h-one-edge/pendants-at-vab-uv",
            caption: CAPTION_TWO_H,
            config: PairConfig::new(
                cross(&[(A, V), (B, U), (B, D)]),
                label_set(&[V, A, B]),
                label_set(&[U, V]),
            ),
            members: vec![
                (H, vec!["v_j", "a_i", "c_j", "w:v_j", "u_i", "w:a_i"]),
                (H, vec!["u_j", "b_i", "b_j", "w:u_j", "d_j", "w:b_i"]),
                k2("w:v_i", "v_i"),
            ],
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub key: String,
    pub caption: String,
    pub valid: bool,
    pub error: Option<String>,
    pub cover: usize,
    pub extendable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub key: String,
    pub removed_edge: String,
    pub member_validation_failed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub schema_version: u32,
    pub fixtures: Vec<FixtureOutcome>,
    pub negative_control: NegativeControl,
    pub verdict: String,
}

pub fn check_fixture(f: &Fixture) -> Result<FixtureOutcome, VerifyError> {
    let host = f.host()?;
    let tiling = f.tiling()?;
    let validation = tiling.validate(&host);
    Ok(FixtureOutcome {
        key: f.key.to_string(),
        caption: f.caption.to_string(),
        valid: validation.is_ok(),
        error: validation.err().map(|e| e.to_string()),
        cover: tiling.coverage(),
        extendable: is_extendable(&f.config)?,
    })
}

/// Validates every fixture, and checks that deleting the lowest depicted
/// cross edge of the first fixture breaks its drawn decomposition.
pub fn verify_figure_fixtures() -> Result<FixtureReport, VerifyError> {
    let fixtures = figure_fixtures();
    let outcomes = fixtures
        .iter()
        .map(check_fixture)
        .collect::<Result<Vec<_>, _>>()?;
    let base = &fixtures[0];
    let bit = base.config.bip.trailing_zeros();
    let broken = base.without_cross_edge(bit);
    let validation = broken.tiling()?.validate(&broken.host()?);
    let negative_control = NegativeControl {
        key: base.key.to_string(),
        removed_edge: format!(
            "{}-{}",
            base.config.vertex_name(bit as usize / 6),
            base.config.vertex_name(6 + bit as usize % 6)
        ),
        member_validation_failed: validation.is_err(),
        error: validation.err().map(|e| e.to_string()),
    };
    let ok = outcomes
        .iter()
        .all(|o| o.valid && o.extendable && o.cover >= EXTENDABLE_COVER)
        && negative_control.member_validation_failed;
    Ok(FixtureReport {
        schema_version: SCHEMA_VERSION,
        fixtures: outcomes,
        negative_control,
        verdict: if ok { "pass" } else { "fail" }.to_string(),
    })
}
