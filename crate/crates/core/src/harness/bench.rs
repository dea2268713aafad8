//! Repeated solver runs with median aggregation and ratio-to-baseline
//! quartiles.

use std::io;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::corpus::CorpusEntry;
use crate::corefind::Engine;
use crate::game::{CompileError, CompiledSpec};
use crate::gr1solve::{solve_gr1, SolveStats, SolverOptions};
use crate::rabinsolve::solve_rabin;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Gr1,
    Rabin,
    Both,
}

impl EngineChoice {
    fn engines(self) -> Vec<Engine> {
        match self {
            EngineChoice::Gr1 => vec![Engine::Gr1],
            EngineChoice::Rabin => vec![Engine::Rabin],
            EngineChoice::Both => vec![Engine::Gr1, Engine::Rabin],
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub engine: EngineChoice,
    /// Heuristic combinations; the baseline is always run as well.
    pub matrix: Vec<SolverOptions>,
    pub reps: usize,
    /// Shuffles the order in which specifications are run.
    pub order_seed: Option<u64>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            engine: EngineChoice::Gr1,
            matrix: SolverOptions::all(),
            reps: 50,
            order_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub spec: String,
    pub engine: Engine,
    pub efp: bool,
    pub eun: bool,
    pub fpr: bool,
    pub rep: usize,
    pub wall_ns: u64,
    pub z_sweeps: u64,
    pub js_body: u64,
    pub y_iters: u64,
    pub x_iters: u64,
    pub cpre_calls: u64,
    pub verdict: String,
}

impl BenchRow {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            efp: self.efp,
            eun: self.eun,
            fpr: self.fpr,
        }
    }

    fn counters(&self) -> [u64; 5] {
        [self.z_sweeps, self.js_body, self.y_iters, self.x_iters, self.cpre_calls]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub spec: String,
    pub engine: Engine,
    pub config: String,
    pub median_ns: f64,
    pub z_sweeps: u64,
    pub js_body: u64,
    pub y_iters: u64,
    pub x_iters: u64,
    pub cpre_calls: u64,
    pub verdict: String,
    /// Counters agreed across all repetitions.
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub engine: Engine,
    pub config: String,
    pub specs: usize,
    pub ratios: Option<Quartiles>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<SpecSummary>,
    pub ratios: Vec<RatioSummary>,
}

/// Value at fraction `p` of the sorted `v`, interpolating linearly between
/// neighbours.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> Option<f64> {
    quartiles(values).map(|q| q.q2)
}

pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(Quartiles {
        min: v[0],
        q1: percentile(&v, 0.25),
        q2: percentile(&v, 0.5),
        q3: percentile(&v, 0.75),
        max: v[v.len() - 1],
    })
}

fn run_once(cs: &mut CompiledSpec, engine: Engine, opts: SolverOptions) -> (u64, SolveStats, bool) {
    let g = cs.game();
    cs.mgr.clear_caches();
    let t = Instant::now();
    let (stats, realizable) = match engine {
        Engine::Gr1 => {
            let r = solve_gr1(&mut cs.mgr, &g, opts);
            (r.stats, r.realizable)
        }
        Engine::Rabin => {
            let r = solve_rabin(&mut cs.mgr, &g, opts);
            (r.stats, !r.env_realizable)
        }
    };
    (t.elapsed().as_nanos() as u64, stats, realizable)
}

pub fn run_bench(entries: &[CorpusEntry], cfg: &BenchConfig) -> Result<BenchReport, CompileError> {
    let mut matrix = vec![SolverOptions::BASELINE];
    matrix.extend(cfg.matrix.iter().copied().filter(|o| *o != SolverOptions::BASELINE));
    let mut order: Vec<&CorpusEntry> = entries.iter().collect();
    if let Some(seed) = cfg.order_seed {
        order.shuffle(&mut StdRng::seed_from_u64(seed));
    }
    let reps = cfg.reps.max(1);
    let mut rows = Vec::new();
    for entry in order {
        let mut cs = CompiledSpec::compile(&entry.spec)?;
        for engine in cfg.engine.engines() {
            for &opts in &matrix {
                for rep in 0..reps {
                    let (wall_ns, s, realizable) = run_once(&mut cs, engine, opts);
                    rows.push(BenchRow {
                        spec: entry.name.clone(),
                        engine,
                        efp: opts.efp,
                        eun: opts.eun,
                        fpr: opts.fpr,
                        rep,
                        wall_ns,
                        z_sweeps: s.z_sweeps,
                        js_body: s.js_body_executions,
                        y_iters: s.y_iterations,
                        x_iters: s.x_iterations,
                        cpre_calls: s.cpre_calls,
                        verdict: if realizable { "realizable" } else { "unrealizable" }.to_string(),
                    });
                }
            }
        }
    }
    Ok(summarize(rows, &matrix))
}

/// Medians per (spec, engine, config) and ratio quartiles per (engine,
/// config) over specifications.
pub fn summarize(rows: Vec<BenchRow>, matrix: &[SolverOptions]) -> BenchReport {
    let mut summaries: Vec<SpecSummary> = Vec::new();
    let mut keys: Vec<(String, Engine, SolverOptions)> = Vec::new();
    for r in &rows {
        let k = (r.spec.clone(), r.engine, r.options());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    for (spec, engine, opts) in &keys {
        let group: Vec<&BenchRow> = rows
            .iter()
            .filter(|r| &r.spec == spec && r.engine == *engine && r.options() == *opts)
            .collect();
        let times: Vec<f64> = group.iter().map(|r| r.wall_ns as f64).collect();
        let first = group[0];
        summaries.push(SpecSummary {
            spec: spec.clone(),
            engine: *engine,
            config: opts.label(),
            median_ns: median(&times).unwrap_or(0.0),
            z_sweeps: first.z_sweeps,
            js_body: first.js_body,
            y_iters: first.y_iters,
            x_iters: first.x_iters,
            cpre_calls: first.cpre_calls,
            verdict: first.verdict.clone(),
            deterministic: group.iter().all(|r| r.counters() == first.counters()),
        });
    }
    let mut ratios = Vec::new();
    let mut engines: Vec<Engine> = Vec::new();
    for s in &summaries {
        if !engines.contains(&s.engine) {
            engines.push(s.engine);
        }
    }
    for engine in engines {
        for opts in matrix {
            let label = opts.label();
            let mut values = Vec::new();
            for s in summaries.iter().filter(|s| s.engine == engine && s.config == label) {
                let base = summaries
                    .iter()
                    .find(|b| b.engine == engine && b.spec == s.spec && b.config == "baseline");
                if let Some(b) = base.filter(|b| b.median_ns > 0.0) {
                    values.push(s.median_ns / b.median_ns);
                }
            }
            ratios.push(RatioSummary {
                engine,
                config: label,
                specs: values.len(),
                ratios: quartiles(&values),
            });
        }
    }
    BenchReport {
        rows,
        summaries,
        ratios,
    }
}

impl BenchReport {
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Ratio quartiles as a fixed-width table, one row per configuration.
    pub fn quartile_table(&self) -> String {
        let mut s = format!(
            "{:<6} {:<14} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
            "engine", "config", "specs", "MIN", "Q1", "Q2", "Q3", "MAX"
        );
        for r in &self.ratios {
            let engine = match r.engine {
                Engine::Gr1 => "gr1",
                Engine::Rabin => "rabin",
            };
            match r.ratios {
                Some(q) => s.push_str(&format!(
                    "{:<6} {:<14} {:>5} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}\n",
                    engine, r.config, r.specs, q.min, q.q1, q.q2, q.q3, q.max
                )),
                None => s.push_str(&format!("{:<6} {:<14} {:>5}\n", engine, r.config, 0)),
            }
        }
        s
    }
}
