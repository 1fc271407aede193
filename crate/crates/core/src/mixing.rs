//! Expander mixing lemma checks: |e(B) - k|B|^2 / 2n| <= λ|B| / 2 for a
//! k-regular graph on n vertices with second eigenvalue λ.
//!
//! The combinatorial side is evaluated in exact rational arithmetic; only λ
//! is floating point.

use num_rational::Ratio;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::SchemeGraph;
use crate::spectra::lit;

/// Slack added to the right side per element of B, absorbing eigensolver
/// error in λ.
pub const MIXING_TOLERANCE: f64 = 1e-6;

/// Subsets up to this size are also counted by the quadratic pair scan.
pub const PAIR_SCAN_LIMIT: usize = 200;

fn sorted_subset(graph: &SchemeGraph, subset: &[usize]) -> Result<Vec<usize>> {
    let n = graph.n();
    if let Some(&bad) = subset.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { index: bad, n });
    }
    let mut b = subset.to_vec();
    b.sort_unstable();
    b.dedup();
    Ok(b)
}

/// Number of edges with both ends in `subset`, by merging each member's
/// sorted neighbor list with the members after it.
pub fn induced_edge_count(graph: &SchemeGraph, subset: &[usize]) -> Result<u64> {
    let b = sorted_subset(graph, subset)?;
    let mut count = 0u64;
    for (pos, &v) in b.iter().enumerate() {
        let rest = &b[pos + 1..];
        let nb = graph.neighbors(v);
        let (mut i, mut j) = (nb.partition_point(|&w| (w as usize) <= v), 0);
        while i < nb.len() && j < rest.len() {
            let w = nb[i] as usize;
            match w.cmp(&rest[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Same count by testing every pair against the packed adjacency bits.
pub fn induced_edge_count_pairs(graph: &SchemeGraph, subset: &[usize]) -> Result<u64> {
    let b = sorted_subset(graph, subset)?;
    let bits = graph.bits();
    let mut count = 0;
    for (i, &u) in b.iter().enumerate() {
        count += b[i + 1..].iter().filter(|&&v| bits.has_edge(u, v)).count() as u64;
    }
    Ok(count)
}

/// Both sides of the mixing inequality for one subset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCheck<T> {
    pub subset_size: usize,
    pub e_b: u64,
    /// valency |B|^2 / (2n)
    #[serde(serialize_with = "ratio_as_f64")]
    pub expected: Ratio<i64>,
    /// |e_B - expected|
    #[serde(serialize_with = "ratio_as_f64")]
    pub gap: Ratio<i64>,
    /// λ |B| / 2
    pub bound: T,
    pub pass: bool,
}

fn ratio_as_f64<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(r.to_f64().unwrap_or(f64::NAN))
}

impl<T: Float> MixingCheck<T> {
    pub fn expected_f64(&self) -> f64 {
        self.expected.to_f64().unwrap_or(f64::NAN)
    }

    pub fn gap_f64(&self) -> f64 {
        self.gap.to_f64().unwrap_or(f64::NAN)
    }
}

fn require_valency(graph: &SchemeGraph) -> Result<usize> {
    graph.valency().ok_or_else(|| {
        let degrees = (0..graph.n()).map(|v| graph.degree(v));
        Error::Irregular {
            relation: graph.relation(),
            min: degrees.clone().min().unwrap_or(0),
            max: degrees.max().unwrap_or(0),
        }
    })
}

/// Evaluates the mixing inequality on `subset` with second eigenvalue
/// `lambda`.
pub fn mixing_gap<T: Float>(graph: &SchemeGraph, subset: &[usize], lambda: T) -> Result<MixingCheck<T>> {
    let valency = require_valency(graph)?;
    let b = sorted_subset(graph, subset)?;
    let e_b = induced_edge_count(graph, &b)?;
    Ok(evaluate(graph.n(), valency, b.len(), e_b, lambda))
}

pub(crate) fn evaluate<T: Float>(n: usize, valency: usize, size: usize, e_b: u64, lambda: T) -> MixingCheck<T> {
    let expected = if n == 0 {
        Ratio::zero()
    } else {
        Ratio::new((valency * size * size) as i64, (2 * n) as i64)
    };
    let gap = (Ratio::from_integer(e_b as i64) - expected).abs();
    let size_t = lit::<T>(size as f64);
    let bound = lambda * size_t / lit(2.0);
    let limit = bound + lit::<T>(MIXING_TOLERANCE) * size_t;
    let gap_t = lit::<T>(gap.to_f64().unwrap_or(f64::INFINITY));
    MixingCheck {
        subset_size: size,
        e_b,
        expected,
        gap,
        bound,
        pass: gap_t <= limit,
    }
}

/// One row of a mixing fuzz run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingTrial<T> {
    pub trial: usize,
    pub check: MixingCheck<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport<T> {
    pub relation: usize,
    pub n: usize,
    pub valency: usize,
    pub lambda: T,
    pub seed: u64,
    pub trials: Vec<MixingTrial<T>>,
    pub pass: bool,
}

/// Number of fixed subsets (full set, empty set, a singleton) evaluated
/// before the random ones.
pub const FORCED_TRIALS: usize = 3;

/// RNG for random trial `trial`, keyed by (seed, trial) so each trial's
/// subset does not depend on the others.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform subset size in 1..=n, then a uniform subset of that size.
pub fn random_subset(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let size = rng.random_range(1..=n);
    let mut b = index::sample(rng, n, size).into_vec();
    b.sort_unstable();
    b
}

/// Checks the mixing inequality on the full vertex set, the empty set and
/// the singleton {0}, then on `trials` random subsets. Trials up to
/// [`PAIR_SCAN_LIMIT`] elements also cross-check the edge count against
/// the pair scan; a mismatch is an error.
pub fn mixing_fuzz<T: Float>(graph: &SchemeGraph, lambda: T, trials: usize, seed: u64) -> Result<MixingReport<T>> {
    let valency = require_valency(graph)?;
    let n = graph.n();
    let mut subsets: Vec<Vec<usize>> = vec![(0..n).collect(), Vec::new(), (0..n.min(1)).collect()];
    subsets.extend((0..trials).map(|t| random_subset(n, &mut trial_rng(seed, t as u64))));

    let mut rows = Vec::with_capacity(subsets.len());
    for (trial, b) in subsets.iter().enumerate() {
        let e_b = induced_edge_count(graph, b)?;
        if b.len() <= PAIR_SCAN_LIMIT {
            let brute = induced_edge_count_pairs(graph, b)?;
            if brute != e_b {
                return Err(Error::InvariantViolated(format!(
                    "trial {trial}: merge count {e_b} != pair scan {brute}"
                )));
            }
        }
        rows.push(MixingTrial {
            trial,
            check: evaluate(n, valency, b.len(), e_b, lambda),
        });
    }
    let pass = rows.iter().all(|r| r.check.pass);
    Ok(MixingReport {
        relation: graph.relation(),
        n,
        valency,
        lambda,
        seed,
        trials: rows,
        pass,
    })
}
