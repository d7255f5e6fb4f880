//! Extremal constructions, the density formulas and the matching-number
//! checks that show where a construction does or does not avoid `βn`
//! disjoint copies of `H`.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphBuilder, GraphError, SmallGraph};
use crate::patterns::PatternKind;
use crate::simplex::{rat, to_decimal, Rational};
use crate::tiling::max_tiling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("beta = {beta} is outside [0, {max}]")]
    BetaOutOfRange { beta: Rational, max: Rational },
    #[error("blowup factor must be at least 1")]
    ZeroBlowup,
    #[error("planted set would have negative size")]
    NegativePlantedSet,
    #[error("threshold i = {i} must satisfy 1 <= i <= {r}")]
    BadThreshold { i: usize, r: usize },
    #[error("part sizes must be positive and nondecreasing")]
    BadSizes,
    #[error("only 2-uniform constructions can be built as graphs")]
    NotAGraph,
    #[error("curve range must satisfy 0 <= from < to <= 1/6 with at least one step")]
    BadRange,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `3β(1 − 3β)` up to `β = 1/9`, then `18β²` up to `β = 1/6`.
pub fn xi(beta: &Rational) -> Result<Rational, ConstructionError> {
    xi_blowup(1, beta)
}

/// `max{3tβ(1 − 3tβ), 18t²β²}` for `0 ≤ β ≤ 1/(6t)`.
pub fn xi_blowup(t: u64, beta: &Rational) -> Result<Rational, ConstructionError> {
    if t == 0 {
        return Err(ConstructionError::ZeroBlowup);
    }
    let max = rat(1, 6 * t as i64);
    if beta.is_negative() || *beta > max {
        return Err(ConstructionError::BetaOutOfRange {
            beta: beta.clone(),
            max,
        });
    }
    let tb = beta * Rational::from_integer(t.into());
    let three = Rational::from_integer(3.into());
    let low = &tb * &three * (Rational::from_integer(1.into()) - &tb * &three);
    let high = &tb * &tb * Rational::from_integer(18.into());
    Ok(low.max(high))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionKind {
    /// Complete bipartite graph with one side of size `⌊3βn⌋ − 1`.
    BipartiteLower,
    /// All `r`-sets meeting a planted set `V1` of size `⌊β(s1+…+si)n⌋ − 1`
    /// in at least `i` vertices, where `r` is the number of part sizes.
    Planted { i: usize, sizes: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    #[serde(flatten)]
    pub kind: ConstructionKind,
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl ConstructionSpec {
    pub fn bipartite_lower(n: usize, beta: Rational) -> Self {
        ConstructionSpec {
            kind: ConstructionKind::BipartiteLower,
            n,
            beta,
        }
    }

    pub fn planted(i: usize, sizes: Vec<usize>, n: usize, beta: Rational) -> Self {
        ConstructionSpec {
            kind: ConstructionKind::Planted { i, sizes },
            n,
            beta,
        }
    }

    /// Uniformity of the construction.
    pub fn uniformity(&self) -> usize {
        match &self.kind {
            ConstructionKind::BipartiteLower => 2,
            ConstructionKind::Planted { sizes, .. } => sizes.len(),
        }
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        if let ConstructionKind::Planted { i, sizes } = &self.kind {
            let r = sizes.len();
            if *i < 1 || *i > r {
                return Err(ConstructionError::BadThreshold { i: *i, r });
            }
            if sizes.contains(&0) || sizes.windows(2).any(|w| w[0] > w[1]) {
                return Err(ConstructionError::BadSizes);
            }
        }
        if self.beta.is_negative() {
            return Err(ConstructionError::BetaOutOfRange {
                beta: self.beta.clone(),
                max: Rational::zero(),
            });
        }
        Ok(())
    }

    /// `βn` as an exact rational.
    pub fn beta_n(&self) -> Rational {
        &self.beta * Rational::from_integer(self.n.into())
    }

    /// Size of the planted set `V1` (for the bipartite construction, its
    /// smaller side).
    pub fn planted_size(&self) -> Result<usize, ConstructionError> {
        self.validate()?;
        let weight: usize = match &self.kind {
            ConstructionKind::BipartiteLower => 3,
            ConstructionKind::Planted { i, sizes } => sizes[..*i].iter().sum(),
        };
        let scaled = (self.beta_n() * Rational::from_integer(weight.into())).floor();
        let k = scaled.to_integer() - num_bigint::BigInt::from(1);
        if k.is_negative() {
            return Err(ConstructionError::NegativePlantedSet);
        }
        let k = k.to_usize().ok_or(ConstructionError::NegativePlantedSet)?;
        Ok(k.min(self.n))
    }
}

/// Materializes a 2-uniform construction. `V1` occupies indices `0..|V1|`.
pub fn build_construction(spec: &ConstructionSpec) -> Result<SmallGraph, ConstructionError> {
    if spec.uniformity() != 2 {
        return Err(ConstructionError::NotAGraph);
    }
    let k = spec.planted_size()?;
    let n = spec.n;
    let mut b = GraphBuilder::new(n)?;
    match &spec.kind {
        ConstructionKind::BipartiteLower => {
            for u in 0..k {
                for v in k..n {
                    b.add_edge(u, v)?;
                }
            }
        }
        ConstructionKind::Planted { i, .. } => {
            for u in 0..n {
                for v in u + 1..n {
                    let inside = usize::from(u < k) + usize::from(v < k);
                    if inside >= *i {
                        b.add_edge(u, v)?;
                    }
                }
            }
        }
    }
    Ok(b.build())
}

/// Closed-form edge count: the number of `r`-sets meeting `V1` in at least
/// `i` vertices, or `|V1|·(n − |V1|)` for the bipartite construction.
pub fn construction_edge_count(spec: &ConstructionSpec) -> Result<BigUint, ConstructionError> {
    let k = spec.planted_size()?;
    let n = spec.n;
    Ok(match &spec.kind {
        ConstructionKind::BipartiteLower => BigUint::from(k) * BigUint::from(n - k),
        ConstructionKind::Planted { i, sizes } => {
            planted_edge_count(n, k, sizes.len(), *i)
        }
    })
}

/// `Σ_{j ≥ i} C(k, j)·C(n − k, r − j)`.
pub fn planted_edge_count(n: usize, k: usize, r: usize, i: usize) -> BigUint {
    (i..=r)
        .filter(|&j| j <= k && r - j <= n - k)
        .map(|j| binomial(BigUint::from(k), BigUint::from(j)) * binomial(BigUint::from(n - k), BigUint::from(r - j)))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The construction has fewer than `βn` disjoint copies of `H`.
    Holds,
    /// It has at least `βn` of them.
    Fails,
    /// The solver ran out of budget.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingCheck {
    pub spec: ConstructionSpec,
    pub nu: usize,
    #[serde(serialize_with = "ser_rational")]
    pub beta_n: Rational,
    pub exact: bool,
    pub verdict: Verdict,
}

impl MatchingCheck {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Computes the maximum number of disjoint `H` copies in the construction
/// and compares it with `βn`.
pub fn verify_construction_matching(
    spec: &ConstructionSpec,
    node_budget: u64,
) -> Result<MatchingCheck, ConstructionError> {
    let g = build_construction(spec)?;
    let r = max_tiling(&PatternKind::H, &g, node_budget);
    let beta_n = spec.beta_n();
    let below = Rational::from_integer(r.count.into()) < beta_n;
    let verdict = match (r.exact, below) {
        (true, true) => Verdict::Holds,
        // A valid witness with at least βn copies settles the question.
        (_, false) => Verdict::Fails,
        (false, true) => Verdict::Inconclusive,
    };
    Ok(MatchingCheck {
        spec: spec.clone(),
        nu: r.count,
        beta_n,
        exact: r.exact,
        verdict,
    })
}

/// The fixed scenarios: two constructions that stay below `βn` copies of `H`
/// and the planted construction with threshold 1 that does not.
pub fn refutation_scenarios() -> Vec<(ConstructionSpec, Verdict)> {
    vec![
        (ConstructionSpec::bipartite_lower(18, rat(1, 9)), Verdict::Holds),
        (ConstructionSpec::planted(2, vec![3, 3], 24, rat(1, 8)), Verdict::Holds),
        (ConstructionSpec::planted(1, vec![3, 3], 20, rat(1, 10)), Verdict::Fails),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRow {
    pub beta: Rational,
    pub xi: Rational,
}

/// `steps + 1` evenly spaced samples of `ξ` on `[from, to]`.
pub fn curve(from: &Rational, to: &Rational, steps: u32) -> Result<Vec<CurveRow>, ConstructionError> {
    if from.is_negative() || from >= to || *to > rat(1, 6) || steps == 0 {
        return Err(ConstructionError::BadRange);
    }
    let width = to - from;
    (0..=steps)
        .map(|j| {
            let beta = from + &width * rat(j as i64, steps as i64);
            Ok(CurveRow {
                xi: xi(&beta)?,
                beta,
            })
        })
        .collect()
}

/// CSV with header `beta,xi,xi_exact`.
pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("beta,xi,xi_exact\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            to_decimal(&r.beta, 12),
            to_decimal(&r.xi, 12),
            r.xi
        ));
    }
    out
}
