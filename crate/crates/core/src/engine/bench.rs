//! Budget-matched comparison of LP-QuTS against standalone samplers on
//! random Erdős-Rényi instances.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    approximation_ratio, exact_mwis_with, lp_quts, optimality_gap, stt, EngineConfig, ExactOptions, IterationRecord,
    EXACT_GUARD,
};
use crate::error::{Error, Result};
use crate::generate::gen_erdos_renyi;
use crate::graph::{VertexSet, WeightedGraph};
use crate::io::content_lines;
use crate::rydberg::rydberg_sample;
use crate::samplers::{greedy_sample, maximalize, sa_sample, SamplerKind};

pub const THREADS_ENV: &str = "LPQUTS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LpQuts,
    Greedy,
    Sa,
    Rydberg,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::LpQuts, Method::Greedy, Method::Sa, Method::Rydberg];

    pub fn name(self) -> &'static str {
        match self {
            Method::LpQuts => "lp-quts",
            Method::Greedy => "greedy",
            Method::Sa => "sa",
            Method::Rydberg => "rydberg",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let valid: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
            Error::InvalidParameter(format!("unknown method {s:?}; valid methods: {}", valid.join(", ")))
        })
    }
}

/// Instance grid, methods and engine settings for one bench run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub weighted: Vec<bool>,
    /// Instances per `(n, p, weighted)` cell; instance `k` uses seed `seed + k`.
    pub instances: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub engine: EngineConfig,
    pub exact_guard: usize,
    /// Seconds allowed per exact solve.
    pub exact_budget: Option<f64>,
    /// Fill `wall_ms`; off by default so output is reproducible byte for byte.
    pub timing: bool,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            n: vec![30],
            p: vec![0.2],
            weighted: vec![false],
            instances: 10,
            seed: 0,
            methods: vec![Method::LpQuts, Method::Sa, Method::Greedy],
            engine: EngineConfig::default(),
            exact_guard: EXACT_GUARD,
            exact_budget: None,
            timing: false,
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad value {s:?} in {key}")))
        })
        .collect()
}

impl BenchSpec {
    /// Parses `key=value` lines; list keys take comma-separated values and
    /// any other key is forwarded to [`EngineConfig::set`].
    pub fn parse(text: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let origin = origin.as_ref();
        let mut spec = BenchSpec::default();
        for (line, content) in content_lines(text) {
            let wrap = |e: Error| Error::Parse {
                path: origin.to_path_buf(),
                line,
                message: match e {
                    Error::InvalidParameter(m) => m,
                    other => other.to_string(),
                },
            };
            let (key, value) = content.split_once('=').ok_or_else(|| {
                wrap(Error::InvalidParameter(format!("expected key=value, got {content:?}")))
            })?;
            spec.set(key.trim(), value.trim()).map_err(wrap)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let one = |v: &str| -> Result<u64> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad value {v:?} for {key}")))
        };
        match key {
            "n" => self.n = list(key, value)?,
            "p" => self.p = list(key, value)?,
            "weighted" => self.weighted = list(key, value)?,
            "instances" => self.instances = one(value)? as usize,
            "seed" => self.seed = one(value)?,
            "methods" => {
                self.methods = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "exact_guard" => self.exact_guard = one(value)? as usize,
            "exact_budget" => {
                self.exact_budget = Some(
                    value
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad value {value:?} for {key}")))?,
                )
            }
            "timing" => {
                self.timing = value
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad value {value:?} for {key}")))?
            }
            _ => self.engine.set(key, value)?,
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&p) = self.p.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
        }
        if self.n.contains(&0) {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        self.engine.validate()
    }
}

/// One `(instance, method)` line of the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance_id: usize,
    pub n: usize,
    pub p: f64,
    pub weighted: bool,
    pub seed: u64,
    pub method: Method,
    pub iteration: Option<usize>,
    pub upper: Option<f64>,
    pub lower: f64,
    pub cuts_added: Option<usize>,
    pub reduced_edge_ratio: Option<f64>,
    pub gap: Option<f64>,
    pub stt_1pct: Option<f64>,
    pub stt_5pct: Option<f64>,
    pub approx_ratio: Option<f64>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    #[serde(flatten)]
    pub row: BenchRow,
    pub shots: usize,
    pub best_set: VertexSet,
    /// Per-iteration records (LP-QuTS only).
    pub trace: Vec<IterationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub instance_id: usize,
    pub n: usize,
    pub p: f64,
    pub weighted: bool,
    pub seed: u64,
    pub m: usize,
    pub c_opt: Option<f64>,
    /// Why the optimum is unknown, if it is.
    pub exact_error: Option<String>,
    pub methods: Vec<MethodResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub instances: Vec<InstanceResult>,
}

impl BenchReport {
    pub fn rows(&self) -> impl Iterator<Item = &BenchRow> {
        self.instances.iter().flat_map(|i| i.methods.iter().map(|m| &m.row))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.instances.iter().all(|i| i.methods.is_empty()) {
            w.write_record(CSV_HEADER)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        }
        for row in self.rows() {
            w.serialize(row)
                .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(format!("json: {e}")))
    }
}

pub const CSV_HEADER: [&str; 16] = [
    "instance_id",
    "n",
    "p",
    "weighted",
    "seed",
    "method",
    "iteration",
    "upper",
    "lower",
    "cuts_added",
    "reduced_edge_ratio",
    "gap",
    "stt_1pct",
    "stt_5pct",
    "approx_ratio",
    "wall_ms",
];

struct Instance {
    id: usize,
    n: usize,
    p: f64,
    weighted: bool,
    seed: u64,
}

/// Runs every method on every instance. Instances run concurrently on a pool
/// sized by `LPQUTS_THREADS` when set; results are ordered by instance id.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    spec.validate()?;
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t >= 1)
                .ok_or_else(|| Error::InvalidParameter(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| run_instances(spec)),
        None => run_instances(spec),
    }
}

fn run_instances(spec: &BenchSpec) -> Result<BenchReport> {
    let mut grid = Vec::new();
    for &n in &spec.n {
        for &p in &spec.p {
            for &weighted in &spec.weighted {
                for k in 0..spec.instances {
                    grid.push(Instance {
                        id: grid.len(),
                        n,
                        p,
                        weighted,
                        seed: spec.seed.wrapping_add(k as u64),
                    });
                }
            }
        }
    }
    let instances = grid
        .par_iter()
        .map(|inst| run_instance(spec, inst))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport { instances })
}

fn run_instance(spec: &BenchSpec, inst: &Instance) -> Result<InstanceResult> {
    let graph = gen_erdos_renyi(inst.n, inst.p, inst.weighted, inst.seed)?;
    let opts = ExactOptions {
        max_n: spec.exact_guard,
        time_budget: spec.exact_budget.map(Duration::from_secs_f64),
    };
    let (c_opt, exact_error) = match exact_mwis_with(&graph, &opts) {
        Ok(s) => (Some(s.value), None),
        Err(e @ (Error::TooLarge { .. } | Error::TimeBudget(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let engine = EngineConfig {
        seed: inst.seed,
        ..spec.engine.clone()
    };

    let base = |method: Method| BenchRow {
        instance_id: inst.id,
        n: inst.n,
        p: inst.p,
        weighted: inst.weighted,
        seed: inst.seed,
        method,
        iteration: None,
        upper: None,
        lower: 0.0,
        cuts_added: None,
        reduced_edge_ratio: None,
        gap: None,
        stt_1pct: None,
        stt_5pct: None,
        approx_ratio: None,
        wall_ms: None,
    };
    let fill = |row: &mut BenchRow, best: f64, costs: &[f64]| {
        row.lower = best;
        if let Some(c) = c_opt {
            row.gap = Some(optimality_gap(best, c));
            row.stt_1pct = stt(costs, c, 0.01);
            row.stt_5pct = stt(costs, c, 0.05);
            row.approx_ratio = approximation_ratio(costs, c).ok();
        }
    };

    let mut results = Vec::new();
    let mut budget = (1..=engine.max_iterations).map(|it| engine.shots_at(it)).sum::<usize>();
    if spec.methods.contains(&Method::LpQuts) {
        let started = Instant::now();
        let mut report = lp_quts(&graph, &engine)?;
        let elapsed = started.elapsed();
        budget = report.shots_used;
        let mut row = base(Method::LpQuts);
        row.iteration = Some(report.iterations_used());
        row.upper = Some(report.upper_bound());
        row.cuts_added = Some(report.total_cuts());
        row.reduced_edge_ratio = report.iterations.last().map(|r| r.reduced_edge_ratio);
        fill(&mut row, report.lower_bound(), &report.sample_costs);
        if spec.timing {
            row.wall_ms = Some(elapsed.as_secs_f64() * 1e3);
        } else {
            report.iterations.iter_mut().for_each(|r| r.wall_ms = 0.0);
        }
        results.push((
            Method::LpQuts,
            MethodResult {
                row,
                shots: report.shots_used,
                best_set: report.best_set,
                trace: report.iterations,
            },
        ));
    }

    for &method in &spec.methods {
        if method == Method::LpQuts {
            continue;
        }
        if method == Method::Rydberg && graph.n() > engine.quantum_cap {
            continue;
        }
        let started = Instant::now();
        let samples = baseline_samples(&graph, method, budget, &engine)?;
        let elapsed = started.elapsed();
        let costs: Vec<f64> = samples.iter().map(VertexSet::weight).collect();
        let best = samples
            .iter()
            .max_by(|a, b| a.weight().total_cmp(&b.weight()))
            .cloned()
            .unwrap_or_else(VertexSet::empty);
        let mut row = base(method);
        fill(&mut row, best.weight(), &costs);
        if spec.timing {
            row.wall_ms = Some(elapsed.as_secs_f64() * 1e3);
        }
        results.push((
            method,
            MethodResult {
                row,
                shots: samples.len(),
                best_set: best,
                trace: Vec::new(),
            },
        ));
    }
    // Report methods in the order the spec lists them.
    let methods = spec
        .methods
        .iter()
        .filter_map(|m| results.iter().position(|(k, _)| k == m).map(|i| results[i].1.clone()))
        .collect();

    Ok(InstanceResult {
        instance_id: inst.id,
        n: inst.n,
        p: inst.p,
        weighted: inst.weighted,
        seed: inst.seed,
        m: graph.m(),
        c_opt,
        exact_error,
        methods,
    })
}

/// `shots` samples of a standalone sampler on the whole graph, each passed
/// through the same maximalize step LP-QuTS applies.
pub fn baseline_samples(
    graph: &WeightedGraph,
    method: Method,
    shots: usize,
    engine: &EngineConfig,
) -> Result<Vec<VertexSet>> {
    let raw = match method {
        Method::Greedy => greedy_sample(graph, shots, engine.seed),
        Method::Sa => sa_sample(
            graph,
            &EngineConfig {
                sampler: SamplerKind::Sa,
                ..engine.clone()
            }
            .sampler_config(shots, engine.seed),
        ),
        Method::Rydberg => rydberg_sample(graph, &vec![1.0; graph.m()], shots, engine.seed, &engine.rydberg)?,
        Method::LpQuts => {
            return Err(Error::InvalidParameter("lp-quts is not a standalone sampler".into()));
        }
    };
    Ok(raw.iter().map(|s| maximalize(graph, s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> BenchSpec {
        BenchSpec {
            n: vec![12],
            p: vec![0.3],
            instances: 2,
            engine: EngineConfig {
                shots: 10,
                max_iterations: 5,
                ..EngineConfig::default()
            },
            ..BenchSpec::default()
        }
    }

    #[test]
    fn budget_matches_lp_quts() {
        let r = run_bench(&small_spec()).unwrap();
        for inst in &r.instances {
            let lq = &inst.methods[0];
            assert_eq!(lq.row.method, Method::LpQuts);
            assert_eq!(lq.shots, lq.trace.iter().map(|t| t.shots).sum::<usize>());
            for m in &inst.methods[1..] {
                assert_eq!(m.shots, lq.shots);
            }
        }
        assert_eq!(r.rows().count(), 6);
    }

    #[test]
    fn empty_method_list_gives_header_only() {
        let spec = BenchSpec {
            methods: vec![],
            ..small_spec()
        };
        let csv = run_bench(&spec).unwrap().to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("instance_id,n,p,weighted,seed,method,iteration,upper,lower"));
    }

    #[test]
    fn csv_is_reproducible() {
        let a = run_bench(&small_spec()).unwrap().to_csv().unwrap();
        let b = run_bench(&small_spec()).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().next().unwrap(), CSV_HEADER.join(","));
    }

    #[test]
    fn spec_parsing() {
        let s = BenchSpec::parse("n=30,50\np=0.2, 0.5\nweighted=true\ninstances=3\nmethods=lp-quts,sa\nshots=50 # c\n", "s")
            .unwrap();
        assert_eq!(s.n, vec![30, 50]);
        assert_eq!(s.p, vec![0.2, 0.5]);
        assert_eq!(s.engine.shots, 50);
        let e = BenchSpec::parse("n=5\nmethods=sa,quantum\n", "s").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("lp-quts, greedy, sa, rydberg") && msg.contains(":2:"), "{msg}");
        assert!(BenchSpec::parse("bogus=1\n", "s").is_err());
    }
}
