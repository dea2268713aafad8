mod common;

use std::time::Instant;

use common::{bits, naive_w_env, naive_w_sys, spec};
use gr1synth::game::CompiledSpec;
use gr1synth::gr1solve::{solve_gr1, SolverOptions};
use gr1synth::rabinsolve::solve_rabin;
use gr1synth::symcore::ExplicitGame;
use common::random_spec;
use proptest::prelude::*;

fn agrees_with_oracle(text: &str) -> Result<(), String> {
    let s = spec(text);
    let eg = ExplicitGame::build(&s).map_err(|e| e.to_string())?;
    let mut cs = CompiledSpec::compile(&s).map_err(|e| e.to_string())?;
    let g = cs.game();
    let want_sys = naive_w_sys(&eg);
    let want_env = naive_w_env(&eg);
    for opts in SolverOptions::all().into_iter().filter(|o| !o.eun) {
        let ws = solve_gr1(&mut cs.mgr, &g, opts).winning;
        let we = solve_rabin(&mut cs.mgr, &g, opts).winning;
        if bits(&cs, ws) != want_sys {
            return Err(format!("W_sys differs under {}", opts.label()));
        }
        if bits(&cs, we) != want_env {
            return Err(format!("W_env differs under {}", opts.label()));
        }
    }
    let realizable = eg.init_win_sys(&want_sys);
    if realizable == eg.init_win_env(&want_env) {
        return Err("oracle verdicts are not complementary".into());
    }
    Ok(())
}

#[test]
fn corpus_matches_naive_evaluation() {
    let t = Instant::now();
    let mut checked = 0;
    for e in common::corpus().iter().filter(|e| e.spec.total_bits() <= 16) {
        agrees_with_oracle(&e.text).unwrap_or_else(|m| panic!("{}: {m}", e.name));
        checked += 1;
    }
    assert!(checked > 20);
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn hand_picked_games() {
    let texts = [
        "env boolean r; sys boolean g; gar G next(g) = r; gar GF g;",
        "env boolean r; sys boolean g; asm GF r; gar GF g & r;",
        "env boolean r; sys boolean g; asm GF r; asm GF !r; gar G next(g) = r; gar GF g; gar GF !g;",
        "env Int(0..2) e; sys Int(0..2) s; gar G next(s) != next(e); gar GF s = 2;",
        "env boolean a; sys boolean[2] b; asm G next(a) != a; gar GF b[0] & a; gar GF b[1] & !a;",
    ];
    for t in texts {
        agrees_with_oracle(t).unwrap_or_else(|m| panic!("{t}: {m}"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_specs_match_naive_evaluation(text in random_spec()) {
        prop_assert!(agrees_with_oracle(&text).is_ok(), "{}\n{:?}", text, agrees_with_oracle(&text));
    }
}
