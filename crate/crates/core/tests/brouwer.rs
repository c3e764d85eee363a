mod common;

use common::*;
use muchnik_core::order::random_poset;
use muchnik_core::{interval_algebra, quotient, upset_algebra, verify_brouwer, BrouwerAlgebra};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `a → b` is the least `c` with `b ≤ a ⊕ c`, found by scanning the carrier.
fn residual_by_search(b: &BrouwerAlgebra, x: usize, y: usize) -> usize {
    let candidates: Vec<usize> = (0..b.len()).filter(|&c| b.leq(y, b.join(x, c))).collect();
    let least: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| candidates.iter().all(|&d| b.leq(c, d)))
        .collect();
    assert_eq!(least.len(), 1);
    least[0]
}

fn arb_algebra() -> impl Strategy<Value = BrouwerAlgebra> {
    (1usize..=6, 0.0f64..1.0, any::<u64>()).prop_map(|(n, d, seed)| {
        let p = random_poset(n, d, &mut ChaCha8Rng::seed_from_u64(seed));
        upset_algebra(&p).unwrap().algebra
    })
}

proptest! {
    #[test]
    fn implication_is_the_least_residual(b in arb_algebra()) {
        for x in 0..b.len() {
            for y in 0..b.len() {
                prop_assert_eq!(b.imp(x, y), residual_by_search(&b, x, y));
            }
        }
    }

    #[test]
    fn quotients_are_brouwer_and_match_intervals(b in arb_algebra(), pick in any::<prop::sample::Index>()) {
        let x = pick.index(b.len());
        let q = quotient(&b, x).unwrap();
        prop_assert!(verify_brouwer(&q.algebra).is_valid());
        let (interval, hom) = interval_algebra(&b, x).unwrap();
        prop_assert!(verify_brouwer(&interval).is_valid());
        prop_assert!(hom.verify(&interval, &q.algebra).is_empty());
        // classes are exactly the fibres of y ↦ y ⊗ x
        for y in 0..b.len() {
            for z in 0..b.len() {
                prop_assert_eq!(q.projection[y] == q.projection[z], b.meet(y, x) == b.meet(z, x));
            }
        }
    }
}

#[test]
fn algebra_sizes_match_upset_counts() {
    for p in posets_up_to(4) {
        assert_eq!(
            upset_algebra(&p).unwrap().algebra.len(),
            upset_masks(&p).len()
        );
    }
}

#[test]
fn quotient_by_bottom_is_trivial_and_by_top_is_identity() {
    let b = upset_algebra(&muchnik_core::Poset::binary_tree(2))
        .unwrap()
        .algebra;
    assert_eq!(quotient(&b, b.bottom()).unwrap().algebra.len(), 1);
    assert_eq!(quotient(&b, b.top()).unwrap().algebra.len(), b.len());
}

#[test]
fn json_round_trip() {
    let b = upset_algebra(&muchnik_core::Poset::binary_tree(2))
        .unwrap()
        .algebra;
    let text = serde_json::to_string(&b.to_json()).unwrap();
    let j: muchnik_core::AlgebraJson = serde_json::from_str(&text).unwrap();
    let back = BrouwerAlgebra::try_from(j).unwrap();
    assert_eq!(back, b);
}
