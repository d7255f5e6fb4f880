//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's search code; copies are found by plain backtracking over
//! injective maps and maxima by dynamic programming over vertex subsets.
#![allow(dead_code)]

use std::collections::HashSet;

pub mod sweeps;

use htiling::graph::SmallGraph;
use htiling::patterns::{enumerate_copies, PatternKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// G(n, p) with `p = num / den`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, num: u32, den: u32) -> SmallGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_ratio(num, den) {
                edges.push((u, v));
            }
        }
    }
    SmallGraph::from_edges(n, &edges).unwrap()
}

/// Uniform graph with exactly `m` edges.
pub fn random_graph_with_edges(rng: &mut ChaCha8Rng, n: usize, m: usize) -> SmallGraph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let picked = rand::seq::index::sample(rng, pairs.len(), m);
    let edges: Vec<_> = picked.into_iter().map(|i| pairs[i]).collect();
    SmallGraph::from_edges(n, &edges).unwrap()
}

/// Pattern vertices ordered so that each one after the first of its
/// component has an earlier neighbour.
fn connected_order(p: &SmallGraph) -> Vec<usize> {
    let k = p.vertex_count();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .find(|&v| order.iter().any(|&w| p.has_edge(v, w)))
            .or_else(|| (0..k).find(|&v| !placed[v]))
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Vertex sets (as bitmasks) of all copies of `pattern` in `host`, found by
/// trying every injective map and checking every pattern edge.
pub fn naive_copy_masks(pattern: &SmallGraph, host: &SmallGraph) -> Vec<u64> {
    let order = connected_order(pattern);
    let mut image = vec![usize::MAX; pattern.vertex_count()];
    let mut found = HashSet::new();
    extend(pattern, host, &order, 0, &mut image, &mut found);
    let mut out: Vec<u64> = found.into_iter().collect();
    out.sort_unstable();
    out
}

fn extend(
    p: &SmallGraph,
    host: &SmallGraph,
    order: &[usize],
    depth: usize,
    image: &mut Vec<usize>,
    found: &mut HashSet<u64>,
) {
    if depth == order.len() {
        found.insert(image.iter().fold(0u64, |m, &x| m | 1 << x));
        return;
    }
    let v = order[depth];
    for x in 0..host.vertex_count() {
        if image.contains(&x) {
            continue;
        }
        let fits = order[..depth]
            .iter()
            .all(|&w| !p.has_edge(v, w) || host.has_edge(x, image[w]));
        if fits {
            image[v] = x;
            extend(p, host, order, depth + 1, image, found);
            image[v] = usize::MAX;
        }
    }
}

/// Vertex sets of copies found through the library enumerator, for hosts
/// too dense for [`naive_copy_masks`].
pub fn enumerated_copy_masks(pattern: &PatternKind, host: &SmallGraph) -> Vec<u64> {
    let mut out: Vec<u64> = enumerate_copies(pattern, host, None)
        .iter()
        .map(|e| e.map.iter().fold(0u64, |m, &x| m | 1 << x))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest number of vertices covered by pairwise disjoint masks from
/// `copies`. `best[s]` is the optimum inside `s`: either the lowest vertex
/// of `s` stays uncovered, or some copy through it is used.
pub fn dp_max_cover(n: usize, copies: &[u64]) -> usize {
    assert!(n <= 20);
    let full = (1usize << n) - 1;
    let mut through: Vec<Vec<u64>> = vec![Vec::new(); n];
    for &c in copies {
        through[c.trailing_zeros() as usize].push(c);
    }
    // each copy is listed under its lowest vertex, so scanning subsets in
    // increasing order only needs copies whose lowest vertex is the subset's
    let mut best = vec![0usize; full + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        let mut b = best[s & (s - 1)];
        for &c in &through[low] {
            let c = c as usize;
            if c & s == c {
                b = b.max(c.count_ones() as usize + best[s & !c]);
            }
        }
        best[s] = b;
    }
    best[full]
}

/// Maximum number of disjoint copies when every copy has the same size.
pub fn dp_max_tiling(n: usize, copies: &[u64], size: usize) -> usize {
    dp_max_cover(n, copies) / size
}

/// Coverage-maximal mixed cover over the given families, by brute force.
pub fn naive_mixed_cover(families: &[PatternKind], host: &SmallGraph) -> usize {
    let mut masks = Vec::new();
    for f in families {
        masks.extend(naive_copy_masks(&f.graph(), host));
    }
    dp_max_cover(host.vertex_count(), &masks)
}
