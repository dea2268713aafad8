//! Cross-validation of the solvers and the core search over a corpus:
//! heuristic conservativeness, determinacy, monotone work, strategy
//! verification and core stability.

use serde::Serialize;

use super::corpus::CorpusEntry;
use crate::corefind::{check_unrealizable, find_core, CoreOptions, CoreResult, Engine, SeedKind, Verdict};
use crate::game::{CompiledSpec, GameStructure};
use crate::gr1solve::{solve_gr1, Gr1Result, SolverOptions};
use crate::rabinsolve::{solve_rabin, RabinResult};
use crate::strategy::{build_counterstrategy, build_strategy, verify_on_graph};
use crate::symcore::{DdManager, ExplicitGame};

/// Source of solver results under validation.
pub trait SolverBackend {
    fn gr1(&self, mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> Gr1Result;
    fn rabin(&self, mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> RabinResult;
}

/// The solvers of this crate.
pub struct Symbolic;

impl SolverBackend for Symbolic {
    fn gr1(&self, mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> Gr1Result {
        solve_gr1(mgr, g, opts)
    }

    fn rabin(&self, mgr: &mut DdManager, g: &GameStructure, opts: SolverOptions) -> RabinResult {
        solve_rabin(mgr, g, opts)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Strategies are built and verified only up to this many state bits.
    pub strategy_bits: u32,
    pub cores: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            strategy_bits: 16,
            cores: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub spec: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub specs: usize,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
    pub strategies_verified: usize,
    pub cores_checked: usize,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, check: &str) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Ctx<'a> {
    spec: &'a str,
    report: &'a mut ValidationReport,
}

impl Ctx<'_> {
    fn fail(&mut self, check: &'static str, detail: String) {
        self.report.violations.push(Violation {
            spec: self.spec.to_string(),
            check,
            detail,
        });
    }

    fn expect(&mut self, ok: bool, check: &'static str, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(check, detail());
        }
    }
}

pub fn validate_all(entries: &[CorpusEntry], backend: &dyn SolverBackend, vo: ValidateOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    if entries.is_empty() {
        report.warnings.push("empty corpus: nothing validated".to_string());
        return report;
    }
    for e in entries {
        report.specs += 1;
        let mut ctx = Ctx {
            spec: &e.name,
            report: &mut report,
        };
        validate_entry(e, backend, vo, &mut ctx);
    }
    report
}

fn validate_entry(e: &CorpusEntry, backend: &dyn SolverBackend, vo: ValidateOptions, ctx: &mut Ctx) {
    let mut cs = match CompiledSpec::compile(&e.spec) {
        Ok(cs) => cs,
        Err(err) => {
            ctx.fail("compile", err.to_string());
            return;
        }
    };
    let g = cs.game();
    let valid = cs.valid_states();
    let all = SolverOptions::all();
    let sys: Vec<Gr1Result> = all.iter().map(|&o| backend.gr1(&mut cs.mgr, &g, o)).collect();
    let env: Vec<RabinResult> = all.iter().map(|&o| backend.rabin(&mut cs.mgr, &g, o)).collect();
    let base_s = &sys[0];
    let base_e = &env[0];
    let realizable = base_s.realizable;

    for (k, o) in all.iter().enumerate() {
        let label = o.label();
        let (s, r) = (&sys[k], &env[k]);
        ctx.expect(s.realizable == realizable, "verdict", || {
            format!("gr1 {label}: realizable={} vs baseline {realizable}", s.realizable)
        });
        ctx.expect(r.env_realizable != realizable, "verdict", || {
            format!("rabin {label}: env_realizable={} vs gr1 baseline {realizable}", r.env_realizable)
        });
        if o.eun {
            let sup = cs.mgr.leq(base_s.winning, s.winning);
            ctx.expect(sup, "eun-containment", || format!("gr1 {label}: winning set misses baseline states"));
            let sub = cs.mgr.leq(r.winning, base_e.winning);
            ctx.expect(sub, "eun-containment", || format!("rabin {label}: winning set exceeds baseline"));
            if realizable {
                ctx.expect(s.winning == base_s.winning && r.winning == base_e.winning, "eun-equality", || {
                    format!("{label}: winning set differs on a realizable spec")
                });
            }
        } else {
            ctx.expect(s.winning == base_s.winning, "winning-identity", || format!("gr1 {label}"));
            ctx.expect(r.winning == base_e.winning, "winning-identity", || format!("rabin {label}"));
            let ns = cs.mgr.not(s.winning);
            let lhs = cs.mgr.and(ns, valid);
            let rhs = cs.mgr.and(r.winning, valid);
            ctx.expect(lhs == rhs, "determinacy", || format!("{label}: W_env differs from ¬W_sys"));
        }
        for (heur, off) in [("fpr", SolverOptions { fpr: false, ..*o }), ("efp", SolverOptions { efp: false, ..*o })] {
            let on = (heur == "fpr" && o.fpr) || (heur == "efp" && o.efp);
            if !on {
                continue;
            }
            let j = all.iter().position(|x| *x == off).expect("all combinations present");
            for (engine, a, b) in [
                ("gr1", &sys[k].stats, &sys[j].stats),
                ("rabin", &env[k].stats, &env[j].stats),
            ] {
                let (got, limit, base) = if heur == "fpr" {
                    (a.x_iterations, b.x_iterations, sys_or_env(engine, &sys[0], &env[0]).x_iterations)
                } else {
                    (
                        a.js_body_executions,
                        b.js_body_executions,
                        sys_or_env(engine, &sys[0], &env[0]).js_body_executions,
                    )
                };
                ctx.expect(got <= limit && got <= base, "monotone-work", || {
                    format!("{engine} {label}: {heur} counter {got} exceeds {limit} (without {heur}) or {base} (baseline)")
                });
            }
        }
    }

    if e.spec.total_bits() <= vo.strategy_bits {
        check_strategies(e, &mut cs, &g, &all, &sys, &env, ctx);
    }
    if vo.cores && !realizable {
        check_cores(e, &mut cs, ctx);
    }
}

fn sys_or_env<'a>(engine: &str, s: &'a Gr1Result, e: &'a RabinResult) -> &'a crate::gr1solve::SolveStats {
    if engine == "gr1" {
        &s.stats
    } else {
        &e.stats
    }
}

fn check_strategies(
    e: &CorpusEntry,
    cs: &mut CompiledSpec,
    g: &GameStructure,
    all: &[SolverOptions],
    sys: &[Gr1Result],
    env: &[RabinResult],
    ctx: &mut Ctx,
) {
    let eg = match ExplicitGame::build(&e.spec) {
        Ok(eg) => eg,
        Err(err) => {
            ctx.fail("explicit", err.to_string());
            return;
        }
    };
    // the counterstrategy needs a complete Rabin memory, so an early
    // unrealizability stop gives nothing to build from
    for (k, o) in all.iter().enumerate() {
        let label = o.label();
        let built = if sys[k].realizable {
            build_strategy(&cs.mgr, g, &eg, &sys[k]).map_err(|err| err.to_string())
        } else if o.eun {
            continue;
        } else {
            build_counterstrategy(&mut cs.mgr, g, &eg, &env[k]).map_err(|err| err.to_string())
        };
        match built {
            Ok(s) => {
                let v = verify_on_graph(&eg, &s);
                ctx.expect(v.pass, "strategy", || {
                    format!("{label}: {}", v.failure.clone().unwrap_or_default())
                });
                ctx.report.strategies_verified += 1;
            }
            Err(err) => ctx.fail("strategy", format!("{label}: construction failed: {err}")),
        }
    }
}

fn labels_to_indices(spec: &crate::speclang::Specification, labels: &[String]) -> Vec<usize> {
    labels.iter().filter_map(|l| spec.index_of_label(l)).collect()
}

fn check_cores(e: &CorpusEntry, cs: &mut CompiledSpec, ctx: &mut Ctx) {
    let mut reference: Option<Vec<String>> = None;
    let combos: Vec<CoreOptions> = CoreOptions::all(SolverOptions::BASELINE)
        .into_iter()
        .chain(CoreOptions::all(SolverOptions {
            efp: true,
            eun: true,
            fpr: true,
        }))
        .collect();
    for co in combos {
        let tag = format!(
            "sets={} inc={} check_with={:?} solver={}",
            co.sets,
            co.inc,
            co.check_with,
            co.solver.label()
        );
        let res: CoreResult = match find_core(&e.spec, co) {
            Ok(r) => r,
            Err(err) => {
                ctx.fail("core", format!("{tag}: {err}"));
                continue;
            }
        };
        ctx.report.cores_checked += 1;
        match &reference {
            None => reference = Some(res.core.clone()),
            Some(r) => ctx.expect(*r == res.core, "core-identity", || {
                format!("{tag}: {:?} vs {:?}", res.core, r)
            }),
        }
        for entry in &res.trace {
            let idx = labels_to_indices(&e.spec, &entry.candidate);
            match entry.verdict {
                Verdict::SkippedSubset => {
                    let (unreal, _) = check_unrealizable(cs, &idx, Engine::Gr1, SolverOptions::BASELINE);
                    ctx.expect(!unreal, "skip-soundness", || {
                        format!("{tag}: skipped {:?} is unrealizable", entry.candidate)
                    });
                }
                v if entry.seed != SeedKind::None => {
                    let (unreal, _) = check_unrealizable(cs, &idx, Engine::Gr1, SolverOptions::BASELINE);
                    ctx.expect(unreal == (v == Verdict::Unreal), "seeded-verdict", || {
                        format!("{tag}: {:?} seeded with {:?} says {v:?}", entry.candidate, entry.seed)
                    });
                }
                _ => {}
            }
        }
    }
    let Some(core) = reference else { return };
    let idx = labels_to_indices(&e.spec, &core);
    let (unreal, _) = check_unrealizable(cs, &idx, Engine::Gr1, SolverOptions::BASELINE);
    ctx.expect(unreal, "core-unrealizable", || format!("{core:?}"));
    for k in 0..idx.len() {
        let mut rest = idx.clone();
        let dropped = rest.remove(k);
        let (unreal, _) = check_unrealizable(cs, &rest, Engine::Gr1, SolverOptions::BASELINE);
        ctx.expect(!unreal, "local-minimality", || {
            format!("{core:?} without {} is still unrealizable", e.spec.label(dropped))
        });
    }
    let restricted = e.spec.restrict_guarantees(&idx);
    match find_core(&restricted, CoreOptions::default()) {
        Ok(again) => ctx.expect(again.core == core, "re-minimization", || {
            format!("{core:?} minimizes to {:?}", again.core)
        }),
        Err(err) => ctx.fail("re-minimization", err.to_string()),
    }
}
