mod common;

use common::random_spec;
use gr1synth::game::CompiledSpec;
use gr1synth::symcore::explicit::eval_bool;
use proptest::prelude::*;

fn relations_agree(text: &str) -> Result<(), String> {
    let s = common::spec(text);
    let cs = CompiledSpec::compile(&s).map_err(|e| e.to_string())?;
    let n = 1u64 << cs.layout.total_bits;
    for (k, c) in s.constraints.iter().enumerate() {
        let b = cs.constraint(k);
        for cur in 0..n {
            for next in 0..n {
                let want = eval_bool(&cs.layout, &c.expr, cur, next);
                if cs.mgr.eval_state(b, cur, next) != want {
                    return Err(format!("{} at cur={cur} next={next}", s.label(k)));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn integer_arithmetic_matches_evaluation() {
    let texts = [
        "env Int(0..5) a; sys Int(2..6) b; gar G next(b) = a + 1; gar G b - 2 <= next(a); gar GF a != b;",
        "sys Int(0..7) c; gar G next(c) = c + 1 | (c = 7 & next(c) = 0);",
        "env Int(3..3) k; sys Int(0..2) v; gar G v + k >= 4 -> next(v) < v;",
        "sys boolean[3] a; sys Int(0..4) c; gar G a[1] <-> c > 2; gar G next(a[2]) = a[0];",
    ];
    for t in texts {
        relations_agree(t).unwrap_or_else(|m| panic!("{t}: {m}"));
    }
}

#[test]
fn corpus_relations_match_evaluation() {
    for e in common::corpus().iter().filter(|e| e.spec.total_bits() <= 7) {
        relations_agree(&e.text).unwrap_or_else(|m| panic!("{}: {m}", e.name));
    }
}

proptest! {
    #[test]
    fn random_relations_match_evaluation(text in random_spec()) {
        prop_assert_eq!(relations_agree(&text), Ok(()));
    }
}
