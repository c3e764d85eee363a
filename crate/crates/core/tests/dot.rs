use muchnik_core::dot::{countermodel_dot, frame_dot, pmorphism_dot};
use muchnik_core::logic::frame_countermodel;
use muchnik_core::{parse, search_pmorphism, Poset};

fn fork() -> Poset {
    Poset::binary_tree(2)
}

#[test]
fn fork_frame() {
    assert_eq!(frame_dot(&fork()), include_str!("golden/fork.dot"));
}

#[test]
fn fork_onto_chain() {
    let m = search_pmorphism(&fork(), &Poset::chain(["a", "b"]))
        .unwrap()
        .unwrap();
    assert_eq!(pmorphism_dot(&m), include_str!("golden/fork_chain.dot"));
}

#[test]
fn excluded_middle_countermodel() {
    let cm = frame_countermodel(&fork(), &parse("p | ~p").unwrap())
        .unwrap()
        .unwrap();
    assert_eq!(
        countermodel_dot(&cm),
        include_str!("golden/lem_countermodel.dot")
    );
}
