//! Randomized property sweeps. Each returns the number of instances checked
//! or a description of the first violation.

use htiling::graph::SmallGraph;
use htiling::patterns::{enumerate_copies, PatternKind};
use htiling::tiling::{
    all_copies, default_families, find_h_in_dense, lift_tiling, max_mixed_cover, max_tiling,
    SearchLimits, Tiling,
};
use htiling::verify::{extendable, label_set, LemmaId, PairConfig, A, U};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dp_max_cover, dp_max_tiling, enumerated_copy_masks, naive_copy_masks, random_graph, random_graph_with_edges};

const BUDGET: u64 = 10_000_000;

fn mixed(host: &SmallGraph) -> (usize, bool) {
    let r = max_mixed_cover(&default_families(), host, SearchLimits::with_budget(BUDGET)).unwrap();
    if let Err(e) = r.witness.validate(host) {
        panic!("invalid mixed witness: {e}");
    }
    (r.coverage, r.exact)
}

/// Solver values against subset dynamic programming over naively found
/// copies, on `count` random graphs with at most 12 vertices.
pub fn solver_matches_brute_force(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = PatternKind::H.graph();
    let families: Vec<SmallGraph> = default_families().iter().map(|f| f.graph()).collect();
    for case in 0..count {
        let n = rng.gen_range(1..=12);
        let dens = if n >= 11 { rng.gen_range(2..=5) } else { rng.gen_range(2..=8) };
        let g = random_graph(&mut rng, n, dens, 10);
        let r = max_tiling(&PatternKind::H, &g, BUDGET);
        let expected = dp_max_tiling(n, &naive_copy_masks(&h, &g), 6);
        if !r.exact || r.count != expected || r.witness.validate(&g).is_err() {
            return Err(format!("case {case}: max_tiling {} (exact {}) vs brute force {expected}\n{}", r.count, r.exact, g.to_edge_list()));
        }
        let masks: Vec<u64> = families.iter().flat_map(|f| naive_copy_masks(f, &g)).collect();
        let expected = dp_max_cover(n, &masks);
        let (got, exact) = mixed(&g);
        if !exact || got != expected {
            return Err(format!("case {case}: mixed cover {got} vs brute force {expected}\n{}", g.to_edge_list()));
        }
        if got < 6 * r.count {
            return Err(format!("case {case}: mixed cover below 6·nu"));
        }
    }
    Ok(count)
}

/// Adding an edge never lowers `nu(H, ·)` or the mixed cover.
pub fn adding_edges_is_monotone(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.gen_range(2..=10);
        let dens = rng.gen_range(2..=7);
        let g = random_graph(&mut rng, n, dens, 10);
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        let Some(&(u, v)) = missing.choose(&mut rng) else {
            continue;
        };
        let g2 = g.with_edge(u, v).unwrap();
        let (a, b) = (max_tiling(&PatternKind::H, &g, BUDGET), max_tiling(&PatternKind::H, &g2, BUDGET));
        let (ma, _) = mixed(&g);
        let (mb, _) = mixed(&g2);
        if b.count < a.count || mb < ma {
            return Err(format!("case {case}: adding {u}-{v} lowered nu {}->{} or cover {ma}->{mb}", a.count, b.count));
        }
    }
    Ok(count)
}

/// Lifting a random valid `{K2, H, Hhat}` tiling into the 6-blowup gives a
/// valid `H`-tiling covering exactly six times as many vertices.
pub fn lift_multiplies_coverage_by_six(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.gen_range(1..=8);
        let dens = rng.gen_range(3..=9);
        let g = random_graph(&mut rng, n, dens, 10);
        let mut copies = all_copies(&default_families(), &g);
        copies.shuffle(&mut rng);
        let mut used = 0u64;
        let mut members = Vec::new();
        for c in copies {
            let m = c.map.iter().fold(0u64, |m, &x| m | 1 << x);
            if m & used == 0 && rng.gen_bool(0.7) {
                used |= m;
                members.push(c);
            }
        }
        let t = Tiling::new(members);
        let lifted = lift_tiling(&t, &g).map_err(|e| format!("case {case}: {e}"))?;
        let host = g.blowup(6).unwrap();
        if let Err(e) = lifted.validate(&host) {
            return Err(format!("case {case}: lifted tiling invalid: {e}"));
        }
        let pure = lifted.members.iter().all(|m| m.pattern == PatternKind::H);
        if !pure || lifted.coverage() != 6 * t.coverage() {
            return Err(format!("case {case}: coverage {} vs 6·{}", lifted.coverage(), t.coverage()));
        }
    }
    Ok(count)
}

/// Random graphs with at least `5n` edges always contain `H`, and the dense
/// finder returns a valid copy that the enumerator also sees.
pub fn dense_graphs_contain_h(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.gen_range(11..=60);
        let max = n * (n - 1) / 2;
        let m = rng.gen_range(5 * n..=max.min(8 * n));
        let g = random_graph_with_edges(&mut rng, n, m);
        let found = find_h_in_dense(&g).ok_or(format!("case {case}: no copy found, n = {n}, m = {m}"))?;
        found.validate(&g).map_err(|e| format!("case {case}: {e}"))?;
        let inside = found.vertex_set();
        if enumerate_copies(&PatternKind::H, &g.induced_subgraph(&inside), Some(1)).is_empty() {
            return Err(format!("case {case}: enumeration sees no copy on {:?}", found.map));
        }
        if enumerate_copies(&PatternKind::H, &g, Some(1)).is_empty() {
            return Err(format!("case {case}: enumeration finds no copy at all"));
        }
    }
    Ok(count)
}

/// Returns `None` from the finder exactly when the enumerator finds nothing,
/// on sparse graphs where both outcomes occur.
pub fn sparse_finder_agrees_with_enumeration(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let n = rng.gen_range(1..=14);
        let dens = rng.gen_range(1..=4);
        let g = random_graph(&mut rng, n, dens, 10);
        let found = find_h_in_dense(&g).is_some();
        let exists = !enumerate_copies(&PatternKind::H, &g, Some(1)).is_empty();
        if found != exists {
            return Err(format!("case {case}: finder {found}, enumeration {exists}\n{}", g.to_edge_list()));
        }
    }
    Ok(count)
}

fn random_config(rng: &mut ChaCha8Rng) -> (u8, u8) {
    let ids = LemmaId::ALL;
    let id = ids[rng.gen_range(0..ids.len())];
    *id.configurations().choose(rng).unwrap()
}

fn random_mask(rng: &mut ChaCha8Rng, k: usize) -> u64 {
    rand::seq::index::sample(rng, 36, k)
        .into_iter()
        .fold(0u64, |m, b| m | 1 << b)
}

/// Extendability never switches off when cross edges are added.
pub fn extendability_is_monotone(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let (li, lj) = random_config(&mut rng);
        let (k, extra) = (rng.gen_range(0..=30), rng.gen_range(1..=10));
        let small = random_mask(&mut rng, k);
        let big = small | random_mask(&mut rng, extra);
        let a = extendable(&PairConfig::new(small, li, lj));
        let b = extendable(&PairConfig::new(big, li, lj));
        if a.is_none() || b.is_none() || (a == Some(true) && b == Some(false)) {
            return Err(format!("case {case}: {small:09x} -> {a:?}, {big:09x} -> {b:?}"));
        }
    }
    Ok(count)
}

/// The oracle against subset dynamic programming on hosts of at most 13
/// vertices (no pendant, or one pendant on `u` or `a`).
pub fn extendability_matches_brute_force(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = [0, label_set(&[U]), label_set(&[A])];
    for case in 0..count {
        let li = *choices.choose(&mut rng).unwrap();
        let k = rng.gen_range(0..=31);
        let bip = random_mask(&mut rng, k);
        let cfg = PairConfig::new(bip, li, 0);
        let host = htiling::verify::assemble_host(&cfg).unwrap();
        let masks: Vec<u64> = default_families()
            .iter()
            .flat_map(|f| enumerated_copy_masks(f, &host))
            .collect();
        let expected = dp_max_cover(host.vertex_count(), &masks) >= 13;
        if extendable(&cfg) != Some(expected) {
            return Err(format!("case {case}: bip {} L_i {li:#b}: oracle {:?}, brute force {expected}", cfg.bip_hex(), extendable(&cfg)));
        }
    }
    Ok(count)
}
