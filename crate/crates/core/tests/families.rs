mod common;

use common::{naive_w_sys, spec};
use gr1synth::corefind::{find_core, CoreOptions, SeedKind};
use gr1synth::game::CompiledSpec;
use gr1synth::gr1solve::{solve_gr1, SolveStats, SolverOptions};
use gr1synth::harness::{family_text, generate_counter_family, Family};
use gr1synth::symcore::ExplicitGame;

const EFP: SolverOptions = SolverOptions { efp: true, eun: false, fpr: false };
const EUN: SolverOptions = SolverOptions { efp: false, eun: true, fpr: false };
const FPR: SolverOptions = SolverOptions { efp: false, eun: false, fpr: true };

fn stats(family: Family, n: u64, opts: SolverOptions) -> (SolveStats, bool) {
    let mut cs = CompiledSpec::compile(&generate_counter_family(n, family)).unwrap();
    let g = cs.game();
    let r = solve_gr1(&mut cs.mgr, &g, opts);
    (r.stats, r.realizable)
}

#[test]
fn verdicts_agree_with_explicit_oracle() {
    for f in Family::ALL {
        // for the EFP families n is the justice count, which the naive
        // nesting pays for exponentially
        let sizes: &[u64] = match f {
            Family::EfpGood | Family::EfpBad => &[2, 4, 6],
            _ => &[7, 15],
        };
        for &n in sizes.iter().chain([f.min_n()].iter()) {
            let s = generate_counter_family(n, f);
            let eg = ExplicitGame::build(&s).unwrap();
            let want = eg.init_win_sys(&naive_w_sys(&eg));
            let (_, got) = stats(f, n, SolverOptions::BASELINE);
            assert_eq!(got, want, "{} n={n}", f.name());
        }
    }
}

#[test]
fn expected_verdicts() {
    let realizable = [Family::EfpGood, Family::EfpBad, Family::FprGood, Family::FprBad];
    for f in Family::ALL {
        let (_, r) = stats(f, 15, SolverOptions::BASELINE);
        assert_eq!(r, realizable.contains(&f), "{}", f.name());
    }
}

#[test]
fn efp_counts() {
    for m in 2..=8u64 {
        assert_eq!(stats(Family::EfpGood, m, SolverOptions::BASELINE).0.js_body_executions, 2 * m);
        assert_eq!(stats(Family::EfpGood, m, EFP).0.js_body_executions, m + 1);
        assert_eq!(stats(Family::EfpBad, m, SolverOptions::BASELINE).0.js_body_executions, 2 * m);
        assert_eq!(stats(Family::EfpBad, m, EFP).0.js_body_executions, 2 * m);
    }
}

#[test]
fn eun_counts() {
    for n in [8u64, 16, 100, 1000] {
        let (base, r) = stats(Family::EunGood, n, SolverOptions::BASELINE);
        assert!(!r);
        assert_eq!(base.z_sweeps, n / 2);
        assert_eq!(stats(Family::EunGood, n, EUN).0.z_sweeps, 2);
        assert_eq!(stats(Family::EunBad, n, SolverOptions::BASELINE).0.z_sweeps, n / 2);
        assert_eq!(stats(Family::EunBad, n, EUN).0.z_sweeps, n / 2 - 1);
    }
}

#[test]
fn eun_baseline_removes_two_states_per_sweep() {
    let n = 20;
    let mut cs = CompiledSpec::compile(&generate_counter_family(n, Family::EunGood)).unwrap();
    let g = cs.game();
    let r = solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE);
    let z: Vec<_> = r.memory.z_by_j.iter().flatten().copied().collect();
    assert_eq!(z.len(), 1);
    // the fixed point keeps only the states that can stay below 3
    let w = common::bits(&cs, r.winning);
    assert_eq!(w.ones().filter(|&q| q <= n as usize).collect::<Vec<_>>(), vec![0, 1, 2]);
}

#[test]
fn fpr_counts() {
    for n in [4u64, 7, 15, 31] {
        let (base, _) = stats(Family::FprGood, n, SolverOptions::BASELINE);
        let (fpr, _) = stats(Family::FprGood, n, FPR);
        assert_eq!(base.x_cell(2, 0, 0, 0), Some(n as u32 + 1), "n={n}");
        assert_eq!(fpr.x_cell(2, 0, 0, 0), Some(1), "n={n}");
        assert!(fpr.x_iterations < base.x_iterations);
        let (base, _) = stats(Family::FprBad, n, SolverOptions::BASELINE);
        let (fpr, _) = stats(Family::FprBad, n, FPR);
        assert_eq!(base.x_iterations, fpr.x_iterations, "n={n}");
    }
}

#[test]
fn deadlock_top_value_has_no_successor_under_y() {
    let s = generate_counter_family(127, Family::Deadlock);
    let eg = ExplicitGame::build(&s).unwrap();
    let layout = &eg.layout;
    let y = layout.vars.iter().find(|v| v.name == "y").unwrap();
    let x = layout.vars.iter().find(|v| v.name == "x").unwrap();
    for q in 0..eg.num_states() as u64 {
        if !layout.valid(q) {
            continue;
        }
        let xv = q >> x.first_bit & ((1 << x.width) - 1);
        for id in eg.env_move_ids(q) {
            let input_y = eg.env_input(id) >> y.first_bit & 1 == 1;
            let stuck = eg.responses(id).is_empty();
            assert_eq!(stuck, input_y && xv == 127, "x={xv} y'={input_y}");
        }
    }
}

#[test]
fn inc_seeded_check_skips_the_game() {
    let opts = CoreOptions { inc: true, ..Default::default() };
    for (f, zero) in [(Family::IncGood, true), (Family::IncBad, false)] {
        let r = find_core(&generate_counter_family(0, f), opts).unwrap();
        let e = r
            .trace
            .iter()
            .find(|c| c.candidate == ["g2", "g3", "g4"])
            .unwrap_or_else(|| panic!("{}: no check of g2,g3,g4", f.name()));
        assert_eq!(e.seed, SeedKind::SeedZ);
        let sweeps = e.stats.as_ref().unwrap().z_sweeps;
        assert_eq!(sweeps == 0, zero, "{}: {sweeps} sweeps", f.name());
    }
}

#[test]
fn family_texts_are_stable() {
    assert_eq!(
        family_text(6, Family::EunGood),
        "sys Int(0..6) c;\ngar start: c = 4;\ngar step: G next(c) = c + 2 | (c <= 2 & next(c) <= 2);\n"
    );
    let s = spec(&family_text(4, Family::EfpGood));
    assert_eq!(s.guarantee_indices().len(), 4 + 4);
}
