//! Distance sets of random subsets of the unit sphere, checked against the
//! relation graphs on Ω.
//!
//! For each sampled E ⊂ S^{d-1} a trial computes Δ(E), lifts E to
//! E₁ ⊂ Ω, and counts the edges of every relation graph inside E₁. An edge
//! of R_i between [U] and [V] forces Q(U - V) or Q(U + V) = Q(U - (-V)) into
//! Δ(E), and both values lie in {2 + α_i, 2 - α_i}. The value pairs are
//! disjoint, so |Δ(E)| is at least the number of relations with an edge in
//! E₁. The mixing inequality bounds each count from above.

use std::collections::HashSet;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::seq::index;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{FieldHeader, FieldSpec};
use crate::geometry::{
    distance_set, lift, omega_from_sphere, quad_form, sphere_enumerate, DistanceSet, OmegaSet, PointVec, Sphere,
};
use crate::mixing::{induced_edge_count, trial_rng, MIXING_TOLERANCE};
use crate::scheme::{relation_values, RelationTable, RelationValue, SchemeGraph};
use crate::spectra::{graph_spectra, second_eigenvalue, SolverChoice, Spectrum};

/// Parameters of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub q: u32,
    pub d: usize,
    /// |E| = min(ceil(C q^{d/2}), |S^{d-1}|).
    pub c_mult: f64,
    pub trials: usize,
    pub seed: u64,
    /// Threshold on (relations with an edge in E₁) / ((q+1)/2).
    pub min_relation_fraction: f64,
    /// Threshold on |Δ(E)| / q.
    pub min_delta_ratio: f64,
}

impl ExperimentConfig {
    pub const DEFAULT_C: f64 = 1.0;
    pub const DEFAULT_TRIALS: usize = 50;
    pub const DEFAULT_THRESHOLD: f64 = 0.5;

    pub fn new(q: u32, d: usize) -> Self {
        ExperimentConfig {
            q,
            d,
            c_mult: Self::DEFAULT_C,
            trials: Self::DEFAULT_TRIALS,
            seed: 0,
            min_relation_fraction: Self::DEFAULT_THRESHOLD,
            min_delta_ratio: Self::DEFAULT_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::DimensionTooSmall { got: self.d, min: 3 });
        }
        if !(self.c_mult > 0.0 && self.c_mult.is_finite()) {
            return Err(Error::InvalidConfig(format!("C must be positive, got {}", self.c_mult)));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.min_relation_fraction > 0.0 && self.min_delta_ratio > 0.0) {
            return Err(Error::InvalidConfig("thresholds must be positive".into()));
        }
        Ok(())
    }

    /// Subset size for a sphere of `sphere_len` points.
    pub fn subset_size(&self, sphere_len: usize) -> usize {
        let target = (self.c_mult * (self.q as f64).powf(self.d as f64 / 2.0)).ceil();
        (target as usize).clamp(1, sphere_len.max(1))
    }
}

/// Everything a trial reads: the sphere, Ω, the relation graphs, their
/// value pairs and second eigenvalues.
#[derive(Clone, Debug)]
pub struct ExperimentContext {
    pub field: FieldSpec,
    pub d: usize,
    pub sphere: Sphere,
    pub omega: OmegaSet,
    pub graphs: Vec<SchemeGraph>,
    pub values: Vec<RelationValue>,
    pub lambdas: Vec<f64>,
}

impl ExperimentContext {
    pub fn build(field: FieldSpec, d: usize, solver: SolverChoice) -> Result<Self> {
        let sphere = sphere_enumerate(&field, d)?;
        let omega = omega_from_sphere(&field, &sphere);
        let graphs = RelationTable::build(&field, &omega).graphs(&field, d);
        let spectra = graph_spectra::<f64>(&graphs, solver)?;
        Self::from_parts(field, d, sphere, omega, graphs, &spectra)
    }

    /// Assembles a context from precomputed graphs and spectra.
    pub fn from_parts(
        field: FieldSpec,
        d: usize,
        sphere: Sphere,
        omega: OmegaSet,
        graphs: Vec<SchemeGraph>,
        spectra: &[Spectrum<f64>],
    ) -> Result<Self> {
        if graphs.len() != spectra.len() {
            return Err(Error::DimensionMismatch {
                left: graphs.len(),
                right: spectra.len(),
            });
        }
        let lambdas = graphs
            .iter()
            .zip(spectra)
            .map(|(g, s)| {
                let k = g.valency().ok_or(Error::Irregular {
                    relation: g.relation(),
                    min: 0,
                    max: 0,
                })?;
                second_eigenvalue(s, k)
            })
            .collect::<Result<Vec<_>>>()?;
        let values = relation_values(&field, d);
        Ok(ExperimentContext {
            field,
            d,
            sphere,
            omega,
            graphs,
            values,
            lambdas,
        })
    }
}

/// Uniform sample of `size` sphere points without replacement, in sphere
/// order.
pub fn sample_subset(sphere: &Sphere, size: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<PointVec>> {
    if size < 1 || size > sphere.len() {
        return Err(Error::SubsetSize {
            size,
            max: sphere.len(),
        });
    }
    let mut idx = index::sample(rng, sphere.len(), size).into_vec();
    idx.sort_unstable();
    Ok(idx.into_iter().map(|i| sphere.points[i].clone()).collect())
}

/// Independent distance-set oracle: every ordered pair, collected in a
/// hash set.
pub fn brute_oracle_distance(field: &FieldSpec, points: &[PointVec]) -> Result<DistanceSet> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut seen = HashSet::new();
    for x in points {
        for y in points {
            let diff: Vec<_> = x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(&a, &b)| field.sub(a, b))
                .collect();
            if x.dim() != y.dim() {
                return Err(Error::DimensionMismatch {
                    left: x.dim(),
                    right: y.dim(),
                });
            }
            seen.insert(quad_form(field, &PointVec::new(diff)));
        }
    }
    Ok(DistanceSet {
        values: seen.into_iter().collect(),
    })
}

/// Per-relation outcome of [`edge_budget_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetRow {
    pub i: usize,
    pub edges: u64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetReport {
    pub subset_size: usize,
    pub rows: Vec<BudgetRow>,
}

/// Checks e_i(E₁) <= (k_i / 2n)|E₁|^2 + λ_i|E₁|/2 for every relation. A
/// violation contradicts the mixing inequality and is returned as an error.
pub fn edge_budget_check(lifted: &[usize], graphs: &[SchemeGraph], lambdas: &[f64]) -> Result<BudgetReport> {
    if graphs.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            left: graphs.len(),
            right: lambdas.len(),
        });
    }
    let size = lifted.len();
    let mut rows = Vec::with_capacity(graphs.len());
    for (g, &lambda) in graphs.iter().zip(lambdas) {
        let k = g.valency().ok_or(Error::Irregular {
            relation: g.relation(),
            min: 0,
            max: 0,
        })?;
        let edges = induced_edge_count(g, lifted)?;
        let expected = if g.n() == 0 {
            0.0
        } else {
            Ratio::new((k * size * size) as i64, (2 * g.n()) as i64)
                .to_f64()
                .unwrap_or(f64::NAN)
        };
        let bound = expected + 0.5 * lambda * size as f64;
        let slack = bound + MIXING_TOLERANCE * size as f64 - edges as f64;
        if slack < 0.0 {
            return Err(Error::InvariantViolated(format!(
                "relation {}: e(E1) = {edges} exceeds the mixing bound {bound}",
                g.relation()
            )));
        }
        rows.push(BudgetRow {
            i: g.relation(),
            edges,
            bound,
            slack,
        });
    }
    Ok(BudgetReport {
        subset_size: size,
        rows,
    })
}

/// Result of one Falconer trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub e_size: usize,
    pub e1_size: usize,
    /// Δ(E) as enumeration indices, ascending.
    pub delta: Vec<u32>,
    /// e_i(E₁) for i = 1..=(q+1)/2.
    pub edge_counts: Vec<u64>,
    pub nonempty_relations: usize,
    pub implication_pass: bool,
    pub budget_pass: bool,
    pub delta_full_field: bool,
}

impl TrialResult {
    pub fn delta_size(&self) -> usize {
        self.delta.len()
    }
}

/// Runs the pipeline on one subset. Any failed invariant is an error, since
/// each follows from the construction.
pub fn falconer_trial(ctx: &ExperimentContext, trial: usize, points: &[PointVec]) -> Result<TrialResult> {
    let field = &ctx.field;
    let delta = distance_set(field, points)?;
    let e1 = lift(field, points, &ctx.omega)?;
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    if 2 * e1.len() < distinct.len() {
        return Err(Error::InvariantViolated(format!("|E1| = {} < |E|/2", e1.len())));
    }

    let edge_counts = ctx
        .graphs
        .iter()
        .map(|g| induced_edge_count(g, &e1.lines))
        .collect::<Result<Vec<_>>>()?;
    let m = e1.len() as u64;
    let total: u64 = edge_counts.iter().sum();
    if total != m * m.saturating_sub(1) / 2 {
        return Err(Error::InvariantViolated(format!(
            "relation edge counts sum to {total}, expected C({m}, 2)"
        )));
    }

    let mut nonempty = 0;
    for (rv, &count) in ctx.values.iter().zip(&edge_counts) {
        if count == 0 {
            continue;
        }
        nonempty += 1;
        if !rv.pair.iter().any(|&v| delta.contains(v)) {
            return Err(Error::InvariantViolated(format!(
                "relation {} has an edge in E1 but Δ(E) misses its value pair",
                rv.i.get()
            )));
        }
    }
    if delta.len() < nonempty {
        return Err(Error::InvariantViolated(format!(
            "|Δ(E)| = {} < {nonempty} nonempty relations",
            delta.len()
        )));
    }

    edge_budget_check(&e1.lines, &ctx.graphs, &ctx.lambdas)?;

    Ok(TrialResult {
        trial,
        e_size: distinct.len(),
        e1_size: e1.len(),
        delta_full_field: delta.len() == field.q() as usize,
        delta: delta.values.iter().map(|a| a.index()).collect(),
        edge_counts,
        nonempty_relations: nonempty,
        implication_pass: true,
        budget_pass: true,
    })
}

/// min / median / max of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats {
                min: f64::NAN,
                median: f64::NAN,
                max: f64::NAN,
            };
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let mid = v.len() / 2;
        let median = if v.len() % 2 == 1 {
            v[mid]
        } else {
            (v[mid - 1] + v[mid]) / 2.0
        };
        Stats {
            min: v[0],
            median,
            max: v[v.len() - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub sphere_size: usize,
    pub omega_size: usize,
    pub relation_count: usize,
    pub subset_size: usize,
    pub delta_over_q: Stats,
    pub relation_fraction: Stats,
    pub full_field_trials: usize,
    pub invariants_pass: bool,
    pub meets_delta_threshold: bool,
    pub meets_relation_threshold: bool,
    pub pass: bool,
}

/// Output of [`run_experiment`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub field: FieldHeader,
    pub trials: Vec<TrialResult>,
    pub summary: Summary,
}

/// One CSV row per trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    #[serde(rename = "E_size")]
    pub e_size: usize,
    #[serde(rename = "E1_size")]
    pub e1_size: usize,
    pub delta_size: usize,
    pub delta_over_q: f64,
    pub nonempty_relations: usize,
    pub relation_fraction: f64,
    pub implication_pass: bool,
    pub budget_pass: bool,
    pub delta_full_field: bool,
}

impl Report {
    pub fn rows(&self) -> Vec<TrialRow> {
        let q = self.field.q as f64;
        let r = self.summary.relation_count as f64;
        self.trials
            .iter()
            .map(|t| TrialRow {
                trial: t.trial,
                e_size: t.e_size,
                e1_size: t.e1_size,
                delta_size: t.delta_size(),
                delta_over_q: t.delta_size() as f64 / q,
                nonempty_relations: t.nonempty_relations,
                relation_fraction: t.nonempty_relations as f64 / r,
                implication_pass: t.implication_pass,
                budget_pass: t.budget_pass,
                delta_full_field: t.delta_full_field,
            })
            .collect()
    }
}

/// Runs `config.trials` seeded trials. Threshold misses are reported in the
/// summary; invariant failures abort with an error.
pub fn run_experiment(ctx: &ExperimentContext, config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    if ctx.field.q() != config.q || ctx.d != config.d {
        return Err(Error::InvalidConfig(format!(
            "context is for q={}, d={} but config asks for q={}, d={}",
            ctx.field.q(),
            ctx.d,
            config.q,
            config.d
        )));
    }
    let size = config.subset_size(ctx.sphere.len());
    let trials = (0..config.trials)
        .map(|t| {
            let points = sample_subset(&ctx.sphere, size, &mut trial_rng(config.seed, t as u64))?;
            falconer_trial(ctx, t, &points)
        })
        .collect::<Result<Vec<_>>>()?;

    let q = ctx.field.q() as f64;
    let r = ctx.values.len();
    let delta_ratios: Vec<f64> = trials.iter().map(|t| t.delta_size() as f64 / q).collect();
    let fractions: Vec<f64> = trials.iter().map(|t| t.nonempty_relations as f64 / r as f64).collect();
    let delta_over_q = Stats::of(&delta_ratios);
    let relation_fraction = Stats::of(&fractions);
    let invariants_pass = trials.iter().all(|t| t.implication_pass && t.budget_pass);
    let meets_delta_threshold = delta_over_q.min >= config.min_delta_ratio;
    let meets_relation_threshold = relation_fraction.min >= config.min_relation_fraction;
    let summary = Summary {
        sphere_size: ctx.sphere.len(),
        omega_size: ctx.omega.len(),
        relation_count: r,
        subset_size: size,
        delta_over_q,
        relation_fraction,
        full_field_trials: trials.iter().filter(|t| t.delta_full_field).count(),
        invariants_pass,
        meets_delta_threshold,
        meets_relation_threshold,
        pass: invariants_pass && meets_delta_threshold && meets_relation_threshold,
    };
    Ok(Report {
        config: config.clone(),
        field: ctx.field.header(),
        trials,
        summary,
    })
}
