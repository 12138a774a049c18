use std::cmp::Ordering;

use idyll::{OagValue, Rat, Scalar};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| Rat::from_ratio(n, d))
}

fn value(rank: usize) -> impl Strategy<Value = OagValue> {
    prop::collection::vec(rat(), rank).prop_map(OagValue::Finite)
}

fn triple() -> impl Strategy<Value = (OagValue, OagValue, OagValue)> {
    (1usize..=3).prop_flat_map(|r| (value(r), value(r), value(r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn lex_order_is_total_and_translation_invariant((a, b, c) in triple()) {
        let ab = a.try_cmp(&b).unwrap();
        prop_assert_eq!(ab.reverse(), b.try_cmp(&a).unwrap());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let (ac, bc) = (a.add(&c).unwrap(), b.add(&c).unwrap());
        prop_assert_eq!(ac.try_cmp(&bc).unwrap(), ab);
    }
}

proptest! {
    #[test]
    fn lex_order_is_lexicographic((a, b) in (1usize..=3).prop_flat_map(|r| (value(r), value(r)))) {
        let (x, y) = (a.coords().unwrap(), b.coords().unwrap());
        prop_assert_eq!(a.try_cmp(&b).unwrap(), x.cmp(y));
    }

    #[test]
    fn head_and_tail_reassemble(v in (1usize..=4).prop_flat_map(value)) {
        let (head, tail) = v.project_head().unwrap();
        prop_assert_eq!(OagValue::with_head(head.unwrap(), &tail), v);
    }

    #[test]
    fn infinity_is_top(v in (1usize..=3).prop_flat_map(value)) {
        prop_assert_eq!(v.try_cmp(&OagValue::Infinity).unwrap(), Ordering::Less);
    }
}

#[test]
fn mixed_ranks_do_not_compare() {
    let a = OagValue::from_ints(&[1]);
    let b = OagValue::from_ints(&[1, 0]);
    assert!(a.try_cmp(&b).is_err());
    assert!(a.add(&b).is_err());
}
