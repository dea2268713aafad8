mod common;

use common::random_spec;
use gr1synth::game::CompiledSpec;
use gr1synth::gr1solve::{solve_gr1, SolverOptions};
use gr1synth::harness::{validate_all, CorpusEntry, Symbolic, ValidateOptions};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

#[test]
fn generator_covers_both_verdicts() {
    let mut runner = TestRunner::deterministic();
    let (mut real, mut unreal) = (0, 0);
    for _ in 0..200 {
        let text = random_spec().new_tree(&mut runner).unwrap().current();
        let mut cs = CompiledSpec::compile(&common::spec(&text)).unwrap();
        let g = cs.game();
        if solve_gr1(&mut cs.mgr, &g, SolverOptions::BASELINE).realizable {
            real += 1;
        } else {
            unreal += 1;
        }
    }
    assert!(real >= 20 && unreal >= 20, "{real} realizable, {unreal} unrealizable");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // verdicts, winning-set identities, determinacy, monotone work,
    // strategies and cores in one pass
    #[test]
    fn random_specs_validate(text in random_spec()) {
        let e = CorpusEntry::from_text("random", &text).unwrap();
        let report = validate_all(&[e], &Symbolic, ValidateOptions::default());
        prop_assert!(report.pass(), "{}\n{:#?}", text, report.violations);
    }
}
