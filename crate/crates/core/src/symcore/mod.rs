//! Decision-diagram kernel plus an explicit-state backend.

pub mod bdd;
pub mod explicit;
pub mod layout;

use fixedbitset::FixedBitSet;

pub use bdd::{BinOp, Bdd, DdError, DdManager, Quantifier, VarSet};
pub use explicit::{ExplicitError, ExplicitGame};
pub use layout::{Layout, LayoutError, Value, VarSlot};

/// Enumerates a set over current bits into a bitset of `2^bits` states.
pub fn to_bitset(mgr: &DdManager, s: Bdd, bits: u32) -> FixedBitSet {
    let n = 1usize << bits;
    let mut out = FixedBitSet::with_capacity(n);
    for q in 0..n {
        if mgr.eval_state(s, q as u64, 0) {
            out.insert(q);
        }
    }
    out
}

/// Builds the current-bit set containing exactly the states of `set`.
pub fn from_bitset(mgr: &mut DdManager, set: &FixedBitSet, bits: u32) -> Bdd {
    let mut acc = mgr.zero();
    for q in set.ones() {
        let mut cube = mgr.one();
        for b in 0..bits {
            let lit = mgr.literal(2 * b, q >> b & 1 == 1).expect("bit in range");
            cube = mgr.and(cube, lit);
        }
        acc = mgr.or(acc, cube);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Random formula over `bits` levels, as a tree of ops.
    #[derive(Debug, Clone)]
    enum F {
        Var(u32),
        Not(Box<F>),
        Op(BinOp, Box<F>, Box<F>),
    }

    fn formula(levels: u32) -> impl Strategy<Value = F> {
        let leaf = (0..levels).prop_map(F::Var);
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|f| F::Not(Box::new(f))),
                (
                    prop_oneof![
                        Just(BinOp::And),
                        Just(BinOp::Or),
                        Just(BinOp::Xor),
                        Just(BinOp::Implies),
                        Just(BinOp::Iff)
                    ],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, a, b)| F::Op(op, Box::new(a), Box::new(b))),
            ]
        })
    }

    fn build(m: &mut DdManager, f: &F) -> Bdd {
        match f {
            F::Var(l) => m.var(*l).unwrap(),
            F::Not(a) => {
                let x = build(m, a);
                m.not(x)
            }
            F::Op(op, a, b) => {
                let x = build(m, a);
                let y = build(m, b);
                m.apply(*op, x, y).unwrap()
            }
        }
    }

    fn eval(f: &F, asg: u32) -> bool {
        match f {
            F::Var(l) => asg >> l & 1 == 1,
            F::Not(a) => !eval(a, asg),
            F::Op(op, a, b) => {
                let (x, y) = (eval(a, asg), eval(b, asg));
                match op {
                    BinOp::And => x && y,
                    BinOp::Or => x || y,
                    BinOp::Xor => x != y,
                    BinOp::Implies => !x || y,
                    BinOp::Iff => x == y,
                }
            }
        }
    }

    /// Truth table over `levels` level variables, bit `l` of an assignment
    /// being level `l`.
    fn table(m: &DdManager, s: Bdd, levels: u32) -> Vec<bool> {
        (0..1u32 << levels).map(|a| m.eval(s, |l| a >> l & 1 == 1)).collect()
    }

    proptest! {
        #[test]
        fn or_matches_bitmask(a in any::<u8>(), b in any::<u8>()) {
            // 8-bit sets over current levels 0,2,4 (3 state bits = 8 states)
            let mut m = DdManager::new(3);
            let mut sa = FixedBitSet::with_capacity(8);
            let mut sb = FixedBitSet::with_capacity(8);
            for q in 0..8 {
                sa.set(q, a >> q & 1 == 1);
                sb.set(q, b >> q & 1 == 1);
            }
            let x = from_bitset(&mut m, &sa, 3);
            let y = from_bitset(&mut m, &sb, 3);
            let o = m.or(x, y);
            let got = to_bitset(&m, o, 3);
            for q in 0..8 {
                prop_assert_eq!(got.contains(q), (a | b) >> q & 1 == 1);
            }
        }

        #[test]
        fn canonical_and_matches_table(f in formula(12), g in formula(12)) {
            let mut m = DdManager::new(6);
            let x = build(&mut m, &f);
            let y = build(&mut m, &g);
            prop_assert!(m.check_canonical(x));
            let tx = table(&m, x, 12);
            let expect: Vec<bool> = (0..1u32 << 12).map(|a| eval(&f, a)).collect();
            prop_assert_eq!(&tx, &expect);
            // semantic equality iff handle equality
            let ty = table(&m, y, 12);
            prop_assert_eq!(tx == ty, x == y);
        }

        #[test]
        fn boolean_laws(f in formula(8), g in formula(8), h in formula(8)) {
            let mut m = DdManager::new(4);
            let a = build(&mut m, &f);
            let b = build(&mut m, &g);
            let c = build(&mut m, &h);
            // absorption
            let ab = m.and(a, b);
            prop_assert_eq!(m.or(a, ab), a);
            // De Morgan
            let nab = m.not(ab);
            let na = m.not(a);
            let nb = m.not(b);
            prop_assert_eq!(nab, m.or(na, nb));
            // distributivity
            let bc = m.or(b, c);
            let lhs = m.and(a, bc);
            let ac = m.and(a, c);
            prop_assert_eq!(lhs, m.or(ab, ac));
        }

        #[test]
        fn quantifiers_match_projection(f in formula(6), v in 0u32..6) {
            let mut m = DdManager::new(3);
            let s = build(&mut m, &f);
            let vs = m.var_set([v]).unwrap();
            let e = m.exists(&vs, s);
            let a = m.forall(&vs, s);
            for asg in 0..64u32 {
                let lo = eval(&f, asg & !(1 << v));
                let hi = eval(&f, asg | (1 << v));
                prop_assert_eq!(m.eval(e, |l| asg >> l & 1 == 1), lo || hi);
                prop_assert_eq!(m.eval(a, |l| asg >> l & 1 == 1), lo && hi);
            }
            let ns = m.not(s);
            let ens = m.exists(&vs, ns);
            prop_assert_eq!(a, m.not(ens));
        }

        #[test]
        fn prime_swap_relabels(f in formula(6).prop_map(|f| f)) {
            // map the formula onto current levels only: level l -> 2*(l % 3)
            fn cur(f: &F) -> F {
                match f {
                    F::Var(l) => F::Var(2 * (l % 3)),
                    F::Not(a) => F::Not(Box::new(cur(a))),
                    F::Op(op, a, b) => F::Op(*op, Box::new(cur(a)), Box::new(cur(b))),
                }
            }
            let f = cur(&f);
            let mut m = DdManager::new(3);
            let s = build(&mut m, &f);
            let p = m.prime_swap(s).unwrap();
            prop_assert_eq!(m.prime_swap(p).unwrap(), s);
            for asg in 0..64u32 {
                // move primed bits onto current positions
                let moved = (0..3).fold(0u32, |acc, k| acc | ((asg >> (2 * k + 1) & 1) << (2 * k)));
                prop_assert_eq!(m.eval(p, |l| asg >> l & 1 == 1), eval(&f, moved));
            }
        }

        #[test]
        fn sat_count_matches_enumeration(f in formula(10)) {
            let mut m = DdManager::new(5);
            let s = build(&mut m, &f);
            let all = m.var_set(0..10).unwrap();
            let count = (0..1u32 << 10).filter(|&a| eval(&f, a)).count() as u128;
            prop_assert_eq!(m.sat_count(s, &all), count);
        }

        #[test]
        fn and_exists_is_relational_product(f in formula(8), g in formula(8), vars in proptest::collection::vec(0u32..8, 0..4)) {
            let mut m = DdManager::new(4);
            let a = build(&mut m, &f);
            let b = build(&mut m, &g);
            let vs = m.var_set(vars).unwrap();
            let conj = m.and(a, b);
            let expect = m.exists(&vs, conj);
            prop_assert_eq!(m.and_exists(a, b, &vs), expect);
        }
    }

    #[test]
    fn sat_count_over_group_projects() {
        let mut m = DdManager::new(2);
        let cur = m.var_set([0, 2]).unwrap();
        // x0 & x0' counted over current bits only: x0 must hold, x1 free
        let a = m.current(0);
        let b = m.primed(0);
        let s = m.and(a, b);
        assert_eq!(m.sat_count(s, &cur), 2);
    }

    #[test]
    fn dot_dump_mentions_levels() {
        let mut m = DdManager::new(2);
        let a = m.current(0);
        let b = m.primed(1);
        let s = m.or(a, b);
        let dot = m.to_dot(s, |l| format!("v{l}"));
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("v0") && dot.contains("v3"));
    }
}
