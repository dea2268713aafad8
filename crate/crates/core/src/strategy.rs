//! Strategies from solver memory and their verification on the explicit
//! product graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::game::{cpre_env, GameStructure};
use crate::gr1solve::Gr1Result;
use crate::rabinsolve::RabinResult;
use crate::speclang::Owner;
use crate::symcore::{Bdd, DdManager, ExplicitGame, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Sys,
    Env,
}

/// A finite-memory strategy over the reachable part of the explicit game.
///
/// Nodes are (state, memory). For the system the memory is the justice
/// guarantee currently pursued; for the environment it is the justice
/// assumption to be visited next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyAutomaton {
    pub role: Role,
    pub memory_size: u32,
    pub initial: Vec<(u64, u32)>,
    /// Environment role only: the initial input chosen.
    pub initial_input: Option<u64>,
    /// (state, j, next input) → (next state, j').
    pub sys_choice: BTreeMap<(u64, u32, u64), (u64, u32)>,
    /// (state, i) → (next input, i').
    pub env_choice: BTreeMap<(u64, u32), (u64, u32)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("specification is {0}")]
    WrongVerdict(&'static str),
    #[error("memory incomplete")]
    MemoryIncomplete,
    #[error("memory comes from a seeded run")]
    SeededMemory,
    #[error("no choice satisfies the memory at state {0}")]
    NoChoice(u64),
}

fn has(mgr: &DdManager, s: Bdd, q: u64) -> bool {
    mgr.eval_state(s, q, 0)
}

/// System strategy from the memory of a realizable GR(1) run.
pub fn build_strategy(
    mgr: &DdManager,
    g: &GameStructure,
    eg: &ExplicitGame,
    res: &Gr1Result,
) -> Result<StrategyAutomaton, StrategyError> {
    if !res.realizable {
        return Err(StrategyError::WrongVerdict("unrealizable"));
    }
    if !res.memory.complete {
        return Err(StrategyError::MemoryIncomplete);
    }
    if !res.memory.strategy_grade {
        return Err(StrategyError::SeededMemory);
    }
    let w = res.winning;
    let m = g.m() as u32;
    let layers = &res.memory.y_layers;
    let cells = &res.memory.x_cells;
    let rank = |q: u64, j: usize| layers[j].iter().position(|&l| has(mgr, l, q));

    let mut initial = Vec::new();
    for x in eg.initial_inputs() {
        let Some(s) = eg.initial_outputs(x).into_iter().find(|&s| has(mgr, w, s)) else {
            return Err(StrategyError::NoChoice(x));
        };
        initial.push((s, 0));
    }
    let mut out = StrategyAutomaton {
        role: Role::Sys,
        memory_size: m,
        initial: initial.clone(),
        initial_input: None,
        sys_choice: BTreeMap::new(),
        env_choice: BTreeMap::new(),
    };
    let mut seen: BTreeSet<(u64, u32)> = initial.iter().copied().collect();
    let mut queue: VecDeque<(u64, u32)> = initial.into_iter().collect();
    while let Some((q, j)) = queue.pop_front() {
        let ju = j as usize;
        let goal = has(mgr, g.js[ju], q);
        let r = rank(q, ju);
        // minimal i with q in the X cell of its rank
        let cell_i = r.and_then(|r| (0..g.n()).find(|&i| has(mgr, cells[ju][i][r], q)));
        for id in eg.env_move_ids(q) {
            let x = eg.env_input(id);
            let resp = eg.responses(id);
            let pick = if goal {
                resp.iter().map(|&s| s as u64).find(|&s| has(mgr, w, s)).map(|s| (s, (j + 1) % m))
            } else {
                let lower = resp
                    .iter()
                    .filter_map(|&s| rank(s as u64, ju).map(|k| (k, s as u64)))
                    .filter(|&(k, _)| r.is_some_and(|r| k < r))
                    .min();
                match (lower, cell_i, r) {
                    (Some((_, s)), _, _) => Some((s, j)),
                    (None, Some(i), Some(r)) => resp
                        .iter()
                        .map(|&s| s as u64)
                        .find(|&s| has(mgr, cells[ju][i][r], s))
                        .map(|s| (s, j)),
                    _ => None,
                }
            };
            let Some((s, nj)) = pick else {
                return Err(StrategyError::NoChoice(q));
            };
            out.sys_choice.insert((q, j, x), (s, nj));
            if seen.insert((s, nj)) {
                queue.push_back((s, nj));
            }
        }
    }
    Ok(out)
}

/// Environment counterstrategy from the memory of a Rabin(1) run in which
/// the environment wins.
pub fn build_counterstrategy(
    mgr: &mut DdManager,
    g: &GameStructure,
    eg: &ExplicitGame,
    res: &RabinResult,
) -> Result<StrategyAutomaton, StrategyError> {
    if !res.env_realizable {
        return Err(StrategyError::WrongVerdict("realizable"));
    }
    if !res.memory.complete {
        return Err(StrategyError::MemoryIncomplete);
    }
    if !mgr.is_zero(res.memory.z_init) {
        return Err(StrategyError::SeededMemory);
    }
    let mem = &res.memory;
    let n = g.n() as u32;
    let mut below = Vec::with_capacity(mem.z_cells.len());
    let mut push_below = Vec::with_capacity(mem.z_cells.len());
    let mut visit = Vec::with_capacity(mem.z_cells.len());
    for (cz, &y) in mem.z_cells.iter().enumerate() {
        let zb = mem.z_before(mgr, cz);
        below.push(zb);
        push_below.push(cpre_env(mgr, g, zb));
        let py = cpre_env(mgr, g, y);
        let not_js = mgr.not(g.js[mem.z_justice[cz]]);
        let stay = mgr.and(not_js, py);
        visit.push(g.je.iter().map(|&e| mgr.and(e, stay)).collect::<Vec<_>>());
    }
    let mgr: &DdManager = mgr;
    let rank = |q: u64| mem.z_cells.iter().position(|&c| has(mgr, c, q));
    let forces = |id: usize, target: Bdd| eg.responses(id).iter().all(|&s| has(mgr, target, s as u64));

    let w = res.winning;
    let x0 = eg
        .initial_inputs()
        .into_iter()
        .find(|&x| eg.initial_outputs(x).iter().all(|&s| has(mgr, w, s)))
        .ok_or(StrategyError::NoChoice(0))?;
    let initial: Vec<(u64, u32)> = eg.initial_outputs(x0).into_iter().map(|s| (s, 0)).collect();
    let mut out = StrategyAutomaton {
        role: Role::Env,
        memory_size: n,
        initial: initial.clone(),
        initial_input: Some(x0),
        sys_choice: BTreeMap::new(),
        env_choice: BTreeMap::new(),
    };
    let mut seen: BTreeSet<(u64, u32)> = initial.iter().copied().collect();
    let mut queue: VecDeque<(u64, u32)> = initial.into_iter().collect();
    while let Some((q, i)) = queue.pop_front() {
        let cz = rank(q).ok_or(StrategyError::NoChoice(q))?;
        let (target, ni) = if has(mgr, push_below[cz], q) {
            (below[cz], i)
        } else if has(mgr, visit[cz][i as usize], q) {
            (mem.z_cells[cz], (i + 1) % n)
        } else {
            let chain = &mem.x_cells[cz][i as usize];
            match chain.iter().position(|&c| has(mgr, c, q)) {
                Some(cx) if cx > 0 => (chain[cx - 1], i),
                _ => return Err(StrategyError::NoChoice(q)),
            }
        };
        let id = eg
            .env_move_ids(q)
            .find(|&id| forces(id, target))
            .ok_or(StrategyError::NoChoice(q))?;
        out.env_choice.insert((q, i), (eg.env_input(id), ni));
        for &s in eg.responses(id) {
            if seen.insert((s as u64, ni)) {
                queue.push_back((s as u64, ni));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub pass: bool,
    pub nodes: usize,
    pub failure: Option<String>,
}

impl Verification {
    fn fail(nodes: usize, why: String) -> Self {
        Verification {
            pass: false,
            nodes,
            failure: Some(why),
        }
    }
}

type Node = (u64, u32);

/// Whether some strongly connected part of `graph` restricted to `keep`
/// can be traversed forever while visiting every set in `sets`.
fn fair_cycle(graph: &DiGraphMap<Node, ()>, keep: impl Fn(Node) -> bool, sets: &[FixedBitSet]) -> bool {
    let mut sub = DiGraphMap::<Node, ()>::new();
    for n in graph.nodes().filter(|&n| keep(n)) {
        sub.add_node(n);
    }
    for (a, b, _) in graph.all_edges() {
        if keep(a) && keep(b) {
            sub.add_edge(a, b, ());
        }
    }
    tarjan_scc(&sub).into_iter().any(|scc| {
        let cyclic = scc.len() > 1 || sub.contains_edge(scc[0], scc[0]);
        cyclic && sets.iter().all(|set| scc.iter().any(|n| set.contains(n.0 as usize)))
    })
}

/// Checks `s` on the product with the explicit game.
///
/// System role: every move is legal, every environment input is answered,
/// and no reachable cycle that visits all justice assumptions avoids a
/// justice guarantee. Environment role: inputs are legal, the initial
/// input is covered for every initial output, every reachable cycle visits
/// all justice assumptions and misses some justice guarantee.
pub fn verify_on_graph(eg: &ExplicitGame, s: &StrategyAutomaton) -> Verification {
    let mut graph = DiGraphMap::<Node, ()>::new();
    let mut queue: VecDeque<Node> = VecDeque::new();
    match s.role {
        Role::Sys => {
            let inputs = eg.initial_inputs();
            for x in &inputs {
                let ok = s
                    .initial
                    .iter()
                    .any(|&(q, j)| j == 0 && q & eg.env_mask == *x && eg.theta_s.contains(q as usize));
                if !ok {
                    return Verification::fail(0, format!("initial input {x} not answered"));
                }
            }
        }
        Role::Env => {
            let Some(x0) = s.initial_input else {
                return Verification::fail(0, "no initial input".into());
            };
            if !eg.initial_inputs().contains(&x0) {
                return Verification::fail(0, format!("initial input {x0} violates the assumptions"));
            }
            for q in eg.initial_outputs(x0) {
                if !s.initial.contains(&(q, 0)) {
                    return Verification::fail(0, format!("initial state {q} not covered"));
                }
            }
        }
    }
    for &n in &s.initial {
        if !graph.contains_node(n) {
            graph.add_node(n);
            queue.push_back(n);
        }
    }
    let step = |graph: &mut DiGraphMap<Node, ()>, queue: &mut VecDeque<Node>, a: Node, b: Node| {
        if !graph.contains_node(b) {
            queue.push_back(b);
        }
        graph.add_edge(a, b, ());
    };
    while let Some((q, k)) = queue.pop_front() {
        let nodes = graph.node_count();
        match s.role {
            Role::Sys => {
                for id in eg.env_move_ids(q) {
                    let x = eg.env_input(id);
                    let Some(&(next, nk)) = s.sys_choice.get(&(q, k, x)) else {
                        return Verification::fail(nodes, format!("no answer at state {q}, memory {k}, input {x}"));
                    };
                    if !eg.responses(id).contains(&(next as u32)) || nk >= s.memory_size {
                        return Verification::fail(nodes, format!("illegal move {q} -> {next}"));
                    }
                    step(&mut graph, &mut queue, (q, k), (next, nk));
                }
            }
            Role::Env => {
                let Some(&(x, nk)) = s.env_choice.get(&(q, k)) else {
                    return Verification::fail(nodes, format!("no input at state {q}, memory {k}"));
                };
                let Some(id) = eg.env_move_ids(q).find(|&id| eg.env_input(id) == x) else {
                    return Verification::fail(nodes, format!("illegal input {x} at state {q}"));
                };
                if nk >= s.memory_size {
                    return Verification::fail(nodes, format!("bad memory {nk}"));
                }
                for &next in eg.responses(id) {
                    step(&mut graph, &mut queue, (q, k), (next as u64, nk));
                }
            }
        }
    }
    let nodes = graph.node_count();
    match s.role {
        Role::Sys => {
            for (k, f) in eg.js.iter().enumerate() {
                if fair_cycle(&graph, |n| !f.contains(n.0 as usize), &eg.je) {
                    return Verification::fail(nodes, format!("fair cycle avoids guarantee justice {k}"));
                }
            }
        }
        Role::Env => {
            if fair_cycle(&graph, |_| true, &eg.js) {
                return Verification::fail(nodes, "cycle visits every guarantee justice".into());
            }
            for (i, f) in eg.je.iter().enumerate() {
                if fair_cycle(&graph, |n| !f.contains(n.0 as usize), &[]) {
                    return Verification::fail(nodes, format!("cycle avoids assumption justice {i}"));
                }
            }
        }
    }
    Verification {
        pass: true,
        nodes,
        failure: None,
    }
}

fn assignment(layout: &Layout, state: u64, owners: &[Owner]) -> Json {
    let mut m = Map::new();
    for (name, v) in layout.assignment(state, owners) {
        m.insert(name, serde_json::to_value(v).expect("values serialize"));
    }
    Json::Object(m)
}

impl StrategyAutomaton {
    pub fn len(&self) -> usize {
        match self.role {
            Role::Sys => self.sys_choice.len(),
            Role::Env => self.env_choice.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One JSON object per chooser entry, values decoded by variable.
    pub fn to_json(&self, layout: &Layout) -> Json {
        let both = [Owner::Env, Owner::Sys];
        let entries: Vec<Json> = match self.role {
            Role::Sys => self
                .sys_choice
                .iter()
                .map(|(&(q, j, x), &(next, nj))| {
                    json!({
                        "state": assignment(layout, q, &both),
                        "j": j,
                        "input": assignment(layout, x, &[Owner::Env]),
                        "output": assignment(layout, next, &[Owner::Sys]),
                        "next_j": nj,
                    })
                })
                .collect(),
            Role::Env => self
                .env_choice
                .iter()
                .map(|(&(q, i), &(x, ni))| {
                    json!({
                        "state": assignment(layout, q, &both),
                        "i": i,
                        "input": assignment(layout, x, &[Owner::Env]),
                        "next_i": ni,
                    })
                })
                .collect(),
        };
        json!({
            "role": self.role,
            "memory_size": self.memory_size,
            "initial_input": self.initial_input.map(|x| assignment(layout, x, &[Owner::Env])),
            "initial": self.initial.iter().map(|&(q, k)| json!({"state": assignment(layout, q, &both), "memory": k})).collect::<Vec<_>>(),
            "entries": entries,
        })
    }

    /// Redirects the `k`-th chooser entry (modulo the entry count) to a
    /// different choice, preferring another legal one. Returns false when
    /// there is no entry.
    pub fn mutate(&mut self, eg: &ExplicitGame, k: usize) -> bool {
        if self.is_empty() {
            return false;
        }
        let k = k % self.len();
        match self.role {
            Role::Sys => {
                let (&(q, j, x), &(next, nj)) = self.sys_choice.iter().nth(k).expect("k in range");
                let legal: Vec<u64> = eg
                    .env_move_ids(q)
                    .filter(|&id| eg.env_input(id) == x)
                    .flat_map(|id| eg.responses(id).iter().map(|&s| s as u64))
                    .filter(|&s| s != next)
                    .collect();
                let other = legal.first().copied().unwrap_or(next ^ eg.sys_mask.max(1));
                self.sys_choice.insert((q, j, x), (other, nj));
            }
            Role::Env => {
                let (&(q, i), &(x, ni)) = self.env_choice.iter().nth(k).expect("k in range");
                let other = eg
                    .env_move_ids(q)
                    .map(|id| eg.env_input(id))
                    .find(|&y| y != x)
                    .unwrap_or(x ^ eg.env_mask.max(1));
                self.env_choice.insert((q, i), (other, ni));
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CompiledSpec;
    use crate::gr1solve::{solve_gr1, SolverOptions};
    use crate::rabinsolve::solve_rabin;
    use crate::speclang::parse_spec;

    fn setup(text: &str) -> (CompiledSpec, GameStructure, ExplicitGame) {
        let spec = parse_spec(text).unwrap();
        let mut cs = CompiledSpec::compile(&spec).unwrap();
        let g = cs.game();
        let eg = ExplicitGame::build(&spec).unwrap();
        (cs, g, eg)
    }

    #[test]
    fn single_state_self_loop() {
        let (mut cs, g, eg) = setup("sys boolean a; gar a; gar G next(a); gar GF a; gar GF true;");
        let r = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
        let s = build_strategy(&cs.mgr, &g, &eg, &r).unwrap();
        assert_eq!(s.initial, vec![(1, 0)]);
        assert_eq!(s.sys_choice.get(&(1, 0, 0)), Some(&(1, 1)));
        assert_eq!(s.sys_choice.get(&(1, 1, 0)), Some(&(1, 0)));
        assert!(verify_on_graph(&eg, &s).pass);
    }

    #[test]
    fn deadlock_counterstrategy_drives_to_top() {
        let (mut cs, g, eg) = setup("env boolean y; sys Int(0..15) x; gar G next(y) -> next(x)=x+1;");
        let r = solve_rabin(&mut cs.mgr, &g, SolverOptions::BASELINE);
        let s = build_counterstrategy(&mut cs.mgr, &g, &eg, &r).unwrap();
        assert!(verify_on_graph(&eg, &s).pass);
        let y = cs.layout.slot("y").unwrap().first_bit;
        assert!(s.env_choice.values().all(|&(x, _)| x == 1 << y));
        let gr = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
        assert_eq!(build_strategy(&cs.mgr, &g, &eg, &gr), Err(StrategyError::WrongVerdict("unrealizable")));
    }

    #[test]
    fn realizable_spec_has_no_counterstrategy() {
        let (mut cs, g, eg) = setup("sys boolean a; gar GF a;");
        let r = solve_rabin(&mut cs.mgr, &g, SolverOptions::BASELINE);
        assert_eq!(
            build_counterstrategy(&mut cs.mgr, &g, &eg, &r),
            Err(StrategyError::WrongVerdict("realizable"))
        );
    }

    #[test]
    fn trivially_true_spec_passes() {
        let (mut cs, g, eg) = setup("env boolean e; sys boolean a;");
        let r = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
        let s = build_strategy(&cs.mgr, &g, &eg, &r).unwrap();
        assert!(verify_on_graph(&eg, &s).pass);
    }

    #[test]
    fn corrupted_answer_fails() {
        let (mut cs, g, eg) = setup("env boolean r; sys boolean g; gar G next(g) = next(r); gar GF g | !r;");
        let r = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
        let mut s = build_strategy(&cs.mgr, &g, &eg, &r).unwrap();
        assert!(verify_on_graph(&eg, &s).pass);
        assert!(s.mutate(&eg, 0));
        assert!(!verify_on_graph(&eg, &s).pass);
    }

    #[test]
    fn dump_names_variables() {
        let (mut cs, g, eg) = setup("env boolean r; sys boolean g; gar G next(g) = next(r);");
        let r = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
        let s = build_strategy(&cs.mgr, &g, &eg, &r).unwrap();
        let j = s.to_json(&cs.layout);
        let e = &j["entries"][0];
        assert!(e["input"].get("r").is_some() && e["output"].get("g").is_some());
    }
}
