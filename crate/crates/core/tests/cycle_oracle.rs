mod common;

use common::{edges, random_graph, shortest_catastrophic, simple_cycle_catastrophic};
use pafas_core::find_catastrophic_cycle;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn small_graphs_match_simple_cycle_enumeration() {
    let mut rng = StdRng::seed_from_u64(0xc1c1e);
    let (mut yes, mut no) = (0, 0);
    for i in 0..600 {
        let lts = random_graph(&mut rng, 12);
        let expected = simple_cycle_catastrophic(lts.num_states(), &edges(&lts));
        let found = find_catastrophic_cycle(&lts);
        assert_eq!(found.is_some(), expected, "graph #{i}");
        if let Some(lasso) = found {
            assert!(lasso.replays_in(&lts), "graph #{i}");
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 50 && no > 50, "{yes} catastrophic, {no} not");
}

#[test]
fn large_graphs_match_simple_cycle_enumeration() {
    let mut rng = StdRng::seed_from_u64(0xb16);
    let (mut yes, mut no) = (0, 0);
    for i in 0..500 {
        let lts = random_graph(&mut rng, 200);
        let expected = simple_cycle_catastrophic(lts.num_states(), &edges(&lts));
        assert_eq!(find_catastrophic_cycle(&lts).is_some(), expected, "graph #{i}");
        if expected { yes += 1 } else { no += 1 }
    }
    assert!(yes > 50 && no > 50, "{yes} catastrophic, {no} not");
}

#[test]
fn witnesses_are_shortest_cycles() {
    let mut rng = StdRng::seed_from_u64(0x5407);
    for i in 0..600 {
        let lts = random_graph(&mut rng, 200);
        let expected = shortest_catastrophic(lts.num_states(), &edges(&lts));
        let found = find_catastrophic_cycle(&lts);
        assert_eq!(found.as_ref().map(|l| l.cycle.len()), expected, "graph #{i}");
        if let Some(lasso) = found {
            assert!(lasso.replays_in(&lts), "graph #{i}");
        }
    }
}
