mod common;

use common::*;
use muchnik_core::morphism::PMorphism;
use muchnik_core::{search_pmorphism, verify_pmorphism, Poset};

#[test]
fn search_is_complete_and_lexicographically_first() {
    let posets = posets_up_to(3);
    for src in &posets {
        for tgt in &posets {
            let first = all_maps(src.len(), tgt.len()).find(|m| is_pmorphism(src, tgt, m));
            let found = search_pmorphism(src, tgt).unwrap().map(|m| m.map);
            assert_eq!(found, first, "{:?} -> {:?}", src.labels(), tgt.labels());
        }
    }
}

#[test]
fn verifier_agrees_with_oracle_on_every_map() {
    let fork = Poset::binary_tree(2);
    let diamond = Poset::from_labeled_pairs(
        &["b", "l", "r", "t"],
        &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")],
    )
    .unwrap();
    for (src, tgt) in [
        (&diamond, &fork),
        (&fork, &fork),
        (&diamond, &Poset::chain(["x", "y"])),
    ] {
        for map in all_maps(src.len(), tgt.len()) {
            let m = PMorphism::new(src.clone(), tgt.clone(), map.clone()).unwrap();
            assert_eq!(
                verify_pmorphism(&m).is_empty(),
                is_pmorphism(src, tgt, &map),
                "{map:?}"
            );
        }
    }
}

#[test]
fn composites_are_pmorphisms() {
    let posets = posets_up_to(3);
    let mut composed = 0;
    for a in posets.iter().filter(|p| p.len() == 3) {
        for b in &posets {
            let Some(f) = search_pmorphism(a, b).unwrap() else {
                continue;
            };
            for c in &posets {
                let Some(g) = search_pmorphism(b, c).unwrap() else {
                    continue;
                };
                let h = f.then(&g).unwrap();
                assert!(verify_pmorphism(&h).is_empty());
                composed += 1;
            }
        }
    }
    assert!(composed > 0);
}
