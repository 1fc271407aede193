use std::path::Path;

use anyhow::{bail, Context};
use efsphere::experiments::{run_experiment, ExperimentConfig, ExperimentContext};
use efsphere::geometry::{distance_set, omega_from_sphere, sphere_enumerate};
use efsphere::mixing::mixing_fuzz;
use efsphere::records::{FieldInfo, GraphRecord, OmegaRecord, SpectrumRecord, SphereRecord};
use efsphere::scheme::{partition_check, regular_check, scheme_axiom_check, RelationTable};
use efsphere::spectra::{second_eigenvalue, spectral_bound_report};
use efsphere::{FieldSpec, PointVec};
use log::info;
use serde::Serialize;
use serde_json::json;

use crate::args::{CheckCmd, Command, DistanceCmd, ExperimentCmd, FieldCmd, GraphCmd, OmegaCmd, Space, SphereCmd};
use crate::cache::Cache;
use crate::config::RunConfig;
use crate::emit::{Emission, Table};

pub const MIXING_COLUMNS: [&str; 7] = ["trial", "B_size", "e_B", "expected", "gap", "bound", "pass"];
pub const FALCONER_COLUMNS: [&str; 10] = [
    "trial",
    "E_size",
    "E1_size",
    "delta_size",
    "delta_over_q",
    "nonempty_relations",
    "relation_fraction",
    "implication_pass",
    "budget_pass",
    "delta_full_field",
];
pub const SPECTRAL_COLUMNS: [&str; 8] = [
    "i",
    "n",
    "valency",
    "lambda",
    "lambda_ratio",
    "valency_ratio",
    "exceeds_slack",
    "valency_ratio_in_range",
];

/// What a command produced and whether its checks held.
pub struct Outcome {
    pub emission: Emission,
    pub pass: bool,
}

impl Outcome {
    fn ok(emission: Emission) -> Self {
        Outcome { emission, pass: true }
    }
}

fn field_of(q: u64) -> anyhow::Result<FieldSpec> {
    FieldSpec::with_order(q).with_context(|| format!("q = {q}"))
}

pub fn execute(command: &Command, cfg: &RunConfig, cache: &Cache) -> anyhow::Result<Outcome> {
    match command {
        Command::Field(FieldCmd::Info { p, e, modulus }) => {
            let field = FieldSpec::new(*p, *e, modulus.as_deref())?;
            Ok(Outcome::ok(Emission::record(&FieldInfo::new(&field))?))
        }
        Command::Sphere(SphereCmd::Enumerate(Space { q, d })) => {
            let field = field_of(*q)?;
            let rec = SphereRecord::new(&field, &sphere_enumerate(&field, *d)?);
            let table = point_table(*d, &rec.points);
            Ok(Outcome::ok(Emission::record(&rec)?.with_table(table)))
        }
        Command::Omega(OmegaCmd::Build(Space { q, d })) => {
            let field = field_of(*q)?;
            let sphere = sphere_enumerate(&field, *d)?;
            let rec = OmegaRecord::new(&field, &omega_from_sphere(&field, &sphere));
            let table = point_table(*d, &rec.representatives);
            Ok(Outcome::ok(Emission::record(&rec)?.with_table(table)))
        }
        Command::Distance(DistanceCmd::Set { q, points }) => distance(&field_of(*q)?, points),
        Command::Graph(GraphCmd::Build { space, relation }) => {
            let field = field_of(space.q)?;
            let sphere = sphere_enumerate(&field, space.d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let graph = cache.graph(&field, &omega, *relation)?;
            let rec = GraphRecord::from_graph(&graph);
            let table = Table {
                columns: vec!["u".into(), "v".into()],
                rows: rec
                    .edges
                    .iter()
                    .map(|(u, v)| vec![u.to_string(), v.to_string()])
                    .collect(),
            };
            Ok(Outcome::ok(Emission::record(&rec)?.with_table(table)))
        }
        Command::Graph(GraphCmd::Spectrum { input }) => {
            let text = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
            let rec: GraphRecord =
                serde_json::from_slice(&text).with_context(|| format!("parsing {}", input.display()))?;
            let graph = rec.into_graph()?;
            let spectrum = cache.spectrum(&graph)?;
            let rec = SpectrumRecord::new(&graph.header, &spectrum);
            let table = Table {
                columns: vec!["index".into(), "eigenvalue".into()],
                rows: rec
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(i, x)| vec![i.to_string(), json!(x).to_string()])
                    .collect(),
            };
            Ok(Outcome::ok(Emission::record(&rec)?.with_table(table)))
        }
        Command::Check(check) => run_check(check, cfg, cache),
        Command::Experiment(ExperimentCmd::Falconer {
            space,
            c_mult,
            trials,
            seed,
            report,
            min_delta_ratio,
            min_relation_fraction,
        }) => {
            let field = field_of(space.q)?;
            let mut config = ExperimentConfig::new(field.q(), space.d);
            config.c_mult = c_mult.unwrap_or(cfg.c_mult);
            config.trials = trials.unwrap_or(cfg.experiment_trials);
            config.seed = *seed;
            config.min_delta_ratio = min_delta_ratio.unwrap_or(cfg.min_delta_ratio);
            config.min_relation_fraction = min_relation_fraction.unwrap_or(cfg.min_relation_fraction);
            config.validate()?;

            let sphere = sphere_enumerate(&field, space.d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let graphs = cache.graphs(&field, &omega);
            let spectra = cache.spectra(&graphs)?;
            let ctx = ExperimentContext::from_parts(field, space.d, sphere, omega, graphs, &spectra)?;
            let result = run_experiment(&ctx, &config)?;
            info!(
                "min |Δ|/q = {}, full-field trials {}/{}",
                result.summary.delta_over_q.min, result.summary.full_field_trials, config.trials
            );
            let rows = result.rows();
            let table = Table::from_rows(&FALCONER_COLUMNS, &rows)?;
            if let Some(path) = report {
                crate::emit::write_output(Some(path), &table.to_csv()?)?;
            }
            let record = json!({
                "config": result.config,
                "field": result.field,
                "summary": result.summary,
                "trials": rows,
            });
            Ok(Outcome {
                emission: Emission {
                    record,
                    table: Some(table),
                },
                pass: result.summary.pass,
            })
        }
    }
}

fn run_check(check: &CheckCmd, cfg: &RunConfig, cache: &Cache) -> anyhow::Result<Outcome> {
    match check {
        CheckCmd::Partition(Space { q, d }) => {
            let field = field_of(*q)?;
            let sphere = sphere_enumerate(&field, *d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let graphs = cache.graphs(&field, &omega);
            let partition = partition_check(&field, &omega, &graphs);
            let mut regular = Vec::new();
            let mut all_regular = true;
            for g in &graphs {
                match regular_check(g) {
                    Ok(r) => regular.push(serde_json::to_value(r)?),
                    Err(e) => {
                        all_regular = false;
                        regular.push(json!({ "i": g.relation(), "error": e.to_string() }));
                    }
                }
            }
            let pass = partition.pass && all_regular;
            let record = json!({
                "field": field.header(),
                "partition": partition,
                "regularity": regular,
                "pass": pass,
            });
            Ok(Outcome {
                emission: Emission { record, table: None },
                pass,
            })
        }
        CheckCmd::SchemeAxioms(Space { q, d }) => {
            let field = field_of(*q)?;
            let sphere = sphere_enumerate(&field, *d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let report = scheme_axiom_check(&RelationTable::build(&field, &omega), field.q(), *d)?;
            let pass = report.pass;
            let record = json!({ "field": field.header(), "report": report, "pass": pass });
            Ok(Outcome {
                emission: Emission { record, table: None },
                pass,
            })
        }
        CheckCmd::SpectralBound { space, slack } => {
            let field = field_of(space.q)?;
            let sphere = sphere_enumerate(&field, space.d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let graphs = cache.graphs(&field, &omega);
            let spectra = cache.spectra(&graphs)?;
            let slack = slack.unwrap_or(cfg.slack);
            if slack.is_nan() || slack <= 0.0 {
                bail!("slack must be positive, got {slack}");
            }
            let report = spectral_bound_report(field.q(), space.d, &graphs, &spectra, slack)?;
            let table = Table::from_rows(&SPECTRAL_COLUMNS, &report.rows)?;
            let pass = report.pass;
            let record = json!({ "field": field.header(), "report": report, "pass": pass });
            Ok(Outcome {
                emission: Emission {
                    record,
                    table: Some(table),
                },
                pass,
            })
        }
        CheckCmd::Mixing {
            space,
            relation,
            trials,
            seed,
        } => {
            let field = field_of(space.q)?;
            let sphere = sphere_enumerate(&field, space.d)?;
            let omega = omega_from_sphere(&field, &sphere);
            let graph = cache.graph(&field, &omega, *relation)?;
            let spectrum = cache.spectrum(&graph)?;
            let valency = graph.valency().context("relation graph is not regular")?;
            let lambda = second_eigenvalue(&spectrum, valency)?;
            let report = mixing_fuzz(&graph, lambda, trials.unwrap_or(cfg.mixing_trials), *seed)?;
            let rows: Vec<MixingRow> = report
                .trials
                .iter()
                .map(|t| MixingRow {
                    trial: t.trial,
                    b_size: t.check.subset_size,
                    e_b: t.check.e_b,
                    expected: t.check.expected_f64(),
                    gap: t.check.gap_f64(),
                    bound: t.check.bound,
                    pass: t.check.pass,
                })
                .collect();
            let table = Table::from_rows(&MIXING_COLUMNS, &rows)?;
            let record = json!({
                "field": field.header(),
                "d": space.d,
                "relation": report.relation,
                "n": report.n,
                "valency": report.valency,
                "lambda": report.lambda,
                "seed": report.seed,
                "trials": rows,
                "pass": report.pass,
            });
            Ok(Outcome {
                emission: Emission {
                    record,
                    table: Some(table),
                },
                pass: report.pass,
            })
        }
    }
}

#[derive(Serialize)]
struct MixingRow {
    trial: usize,
    #[serde(rename = "B_size")]
    b_size: usize,
    #[serde(rename = "e_B")]
    e_b: u64,
    expected: f64,
    gap: f64,
    bound: f64,
    pass: bool,
}

/// One column per coordinate; prime-field coordinates print as integers,
/// extension-field ones as coefficient lists.
fn point_table(d: usize, points: &[Vec<Vec<u32>>]) -> Table {
    let fmt = |c: &Vec<u32>| match c.as_slice() {
        [x] => x.to_string(),
        _ => json!(c).to_string(),
    };
    Table {
        columns: (1..=d).map(|k| format!("x{k}")).collect(),
        rows: points.iter().map(|p| p.iter().map(fmt).collect()).collect(),
    }
}

/// Reads one point per line. A line is either comma-separated integers
/// (reduced into the prime field) or comma-separated coefficient lists such
/// as `[1,1],[0,2],[1,0]`. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_points(field: &FieldSpec, text: &str) -> anyhow::Result<Vec<PointVec>> {
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = || format!("line {}: {line:?}", lineno + 1);
        let point = if line.contains('[') {
            let coeffs: Vec<Vec<u32>> = serde_json::from_str(&format!("[{line}]")).with_context(at)?;
            PointVec::from_coeffs(field, &coeffs).with_context(at)?
        } else {
            let ints = line
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(at)?;
            PointVec::from_ints(field, &ints)
        };
        points.push(point);
    }
    Ok(points)
}

fn distance(field: &FieldSpec, path: &Path) -> anyhow::Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let points = parse_points(field, &text)?;
    let delta = distance_set(field, &points)?;
    let values: Vec<Vec<u32>> = delta.values.iter().map(|&a| field.coeffs(a)).collect();
    let record = json!({
        "field": field.header(),
        "d": points[0].dim(),
        "point_count": points.len(),
        "size": delta.len(),
        "values": values,
        "full_field": delta.len() == field.q() as usize,
    });
    Ok(Outcome::ok(Emission { record, table: None }))
}
