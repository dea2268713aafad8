#![allow(dead_code)]

use fixedbitset::FixedBitSet;
use gr1synth::game::CompiledSpec;
use gr1synth::harness::{default_corpus_dir, load_corpus, CorpusEntry};
use gr1synth::speclang::{parse_spec, Specification};
use gr1synth::symcore::{to_bitset, Bdd, ExplicitGame};
use proptest::prelude::*;

pub fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&default_corpus_dir()).expect("corpus loads")
}

pub fn spec(text: &str) -> Specification {
    parse_spec(text).expect("spec parses")
}

pub fn bits(cs: &CompiledSpec, b: Bdd) -> FixedBitSet {
    to_bitset(&cs.mgr, b, cs.layout.total_bits)
}

fn not(eg: &ExplicitGame, s: &FixedBitSet) -> FixedBitSet {
    let mut out = eg.full_set();
    out.difference_with(s);
    out
}

fn and(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.intersect_with(b);
    out
}

fn or(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.union_with(b);
    out
}

fn iterate(start: FixedBitSet, mut f: impl FnMut(&FixedBitSet) -> FixedBitSet) -> FixedBitSet {
    let mut x = start;
    loop {
        let nx = f(&x);
        if nx == x {
            return x;
        }
        x = nx;
    }
}

/// Textbook evaluation of the system winning states: every fixed point is
/// restarted from its bound and all conjuncts see the same outer Z.
pub fn naive_w_sys(eg: &ExplicitGame) -> FixedBitSet {
    let top = eg.full_set();
    let bot = eg.empty_set();
    iterate(top.clone(), |z| {
        let pz = eg.cpre_sys(z);
        let mut conj = top.clone();
        for js in &eg.js {
            let goal = and(js, &pz);
            let y = iterate(bot.clone(), |y| {
                let py = eg.cpre_sys(y);
                let mut disj = bot.clone();
                for je in &eg.je {
                    let x = iterate(top.clone(), |x| {
                        let px = eg.cpre_sys(x);
                        or(&or(&goal, &py), &and(&not(eg, je), &px))
                    });
                    disj = or(&disj, &x);
                }
                disj
            });
            conj = and(&conj, &y);
        }
        conj
    })
}

/// Textbook evaluation of the environment winning states, as the literal
/// dual formula with ⬓.
pub fn naive_w_env(eg: &ExplicitGame) -> FixedBitSet {
    let top = eg.full_set();
    let bot = eg.empty_set();
    iterate(bot.clone(), |z| {
        let pz = eg.cpre_env(z);
        let mut disj = bot.clone();
        for js in &eg.js {
            let left = or(&not(eg, js), &pz);
            let y = iterate(top.clone(), |y| {
                let py = eg.cpre_env(y);
                let mut conj = top.clone();
                for je in &eg.je {
                    let x = iterate(bot.clone(), |x| {
                        let px = eg.cpre_env(x);
                        and(&and(&left, &py), &or(je, &px))
                    });
                    conj = and(&conj, &x);
                }
                conj
            });
            disj = or(&disj, &y);
        }
        disj
    })
}

fn atom(env_only: bool) -> impl Strategy<Value = String> {
    let names: &[&str] = if env_only { &["e", "f", "true"] } else { &["e", "f", "s", "t", "true"] };
    proptest::sample::select(names).prop_map(str::to_string)
}

fn expr_over(env_only: bool, allow_next: bool) -> impl Strategy<Value = String> {
    let leaf = if allow_next {
        prop_oneof![
            atom(env_only),
            atom(env_only).prop_map(|a| if a == "true" { a } else { format!("next({a})") })
        ]
        .boxed()
    } else {
        atom(env_only).boxed()
    };
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("!({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} & {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} | {b})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a} -> {b})")),
        ]
    })
}

fn expr(allow_next: bool) -> impl Strategy<Value = String> {
    expr_over(false, allow_next)
}

/// Environment safety may only constrain environment successors, so the
/// generated assumptions prime only `e` and `f`.
fn env_safety() -> impl Strategy<Value = String> {
    (expr(false), prop_oneof![Just("e"), Just("f")], any::<bool>())
        .prop_map(|(a, v, neg)| format!("({a}) -> {}next({v})", if neg { "!" } else { "" }))
}

prop_compose! {
    /// Small random specifications over two input and two output bits.
    pub fn random_spec()(
        ai in proptest::collection::vec(expr_over(true, false), 0..2),
        asf in proptest::collection::vec(env_safety(), 0..2),
        aj in proptest::collection::vec(expr(false), 0..3),
        gi in proptest::collection::vec(expr(false), 0..2),
        gs in proptest::collection::vec(expr(true), 0..3),
        gj in proptest::collection::vec(expr(false), 0..3),
    ) -> String {
        let mut t = String::from("env boolean e;\nenv boolean f;\nsys boolean s;\nsys boolean t;\n");
        for a in ai { t += &format!("asm {a};\n"); }
        for a in asf { t += &format!("asm G {a};\n"); }
        for a in aj { t += &format!("asm GF {a};\n"); }
        for g in gi { t += &format!("gar {g};\n"); }
        for g in gs { t += &format!("gar G {g};\n"); }
        for g in gj { t += &format!("gar GF {g};\n"); }
        t
    }
}
