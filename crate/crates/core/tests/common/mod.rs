#![allow(dead_code)]

use ergcftp::{AdjacencyState, Dyad, GraphSpace};
use rand::Rng;

/// Sets free dyads from `bits`, cycling if shorter than the free-dyad list.
pub fn state_from_bits(space: &GraphSpace, bits: &[bool]) -> AdjacencyState {
    let mut y = space.empty_state();
    for (k, &d) in space.free_dyads().iter().enumerate() {
        if bits[k % bits.len()] {
            y = y.with_edge(d, true).unwrap();
        }
    }
    y
}

pub fn random_state<R: Rng>(space: &GraphSpace, density: f64, rng: &mut R) -> AdjacencyState {
    let mut y = space.empty_state();
    for &d in space.free_dyads() {
        if rng.gen::<f64>() < density {
            y = y.with_edge(d, true).unwrap();
        }
    }
    y
}

/// Random state with `lower ⊆ y ⊆ upper`.
pub fn random_between<R: Rng>(
    lower: &AdjacencyState,
    upper: &AdjacencyState,
    rng: &mut R,
) -> AdjacencyState {
    let mut y = lower.clone();
    for &d in lower.space().free_dyads() {
        if upper.has_dyad(d) && !lower.has_dyad(d) && rng.gen::<bool>() {
            y = y.with_edge(d, true).unwrap();
        }
    }
    y
}

/// Every state `y` with `lower ⊆ y ⊆ upper`.
pub fn all_between(lower: &AdjacencyState, upper: &AdjacencyState) -> Vec<AdjacencyState> {
    let open: Vec<Dyad> = lower
        .space()
        .free_dyads()
        .iter()
        .copied()
        .filter(|&d| upper.has_dyad(d) && !lower.has_dyad(d))
        .collect();
    (0..1u64 << open.len())
        .map(|mask| {
            let mut y = lower.clone();
            for (k, &d) in open.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    y = y.with_edge(d, true).unwrap();
                }
            }
            y
        })
        .collect()
}

pub fn spaces_small() -> Vec<GraphSpace> {
    vec![
        GraphSpace::undirected(3).unwrap(),
        GraphSpace::undirected(4).unwrap(),
        GraphSpace::new(3, false, true).unwrap(),
        GraphSpace::directed(3).unwrap(),
        GraphSpace::new(3, true, true).unwrap(),
        GraphSpace::bipartite(2, 3, false).unwrap(),
        GraphSpace::egocentric(5, 0, false).unwrap(),
    ]
}
