mod common;

use common::{spaces_small, state_from_bits};
use ergcftp::{AdjacencyState, GraphSpace};
use proptest::prelude::*;

fn space_strategy() -> impl Strategy<Value = GraphSpace> {
    (0..spaces_small().len()).prop_map(|k| spaces_small()[k].clone())
}

proptest! {
    #[test]
    fn perturbations_are_ordered(space in space_strategy(), bits in prop::collection::vec(any::<bool>(), 1..20), pick in 0usize..64) {
        let y = state_from_bits(&space, &bits);
        let d = space.free_dyads()[pick % space.free_dyads().len()];
        let minus = y.with_edge(d, false).unwrap();
        let plus = y.with_edge(d, true).unwrap();
        prop_assert!(minus.is_subgraph(&y).unwrap());
        prop_assert!(y.is_subgraph(&plus).unwrap());
        prop_assert_eq!(plus.with_edge(d, true).unwrap(), plus.clone());
        prop_assert!(plus.caches_consistent() && minus.caches_consistent());
    }

    #[test]
    fn with_edge_commutes(space in space_strategy(), bits in prop::collection::vec(any::<bool>(), 1..20),
                          a in 0usize..64, b in 0usize..64, pa: bool, pb: bool) {
        let y = state_from_bits(&space, &bits);
        let free = space.free_dyads();
        let (da, db) = (free[a % free.len()], free[b % free.len()]);
        prop_assume!(da != db);
        let ab = y.with_edge(da, pa).unwrap().with_edge(db, pb).unwrap();
        let ba = y.with_edge(db, pb).unwrap().with_edge(da, pa).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn differing_dyads_is_a_metric(space in space_strategy(),
                                   x in prop::collection::vec(any::<bool>(), 1..20),
                                   y in prop::collection::vec(any::<bool>(), 1..20),
                                   z in prop::collection::vec(any::<bool>(), 1..20)) {
        let (x, y, z) = (state_from_bits(&space, &x), state_from_bits(&space, &y), state_from_bits(&space, &z));
        let dxy = x.differing_dyads(&y).unwrap();
        prop_assert_eq!(dxy == 0, x == y);
        prop_assert_eq!(dxy, y.differing_dyads(&x).unwrap());
        prop_assert!(dxy <= x.differing_dyads(&z).unwrap() + z.differing_dyads(&y).unwrap());
        let brute = space.all_dyads().filter(|&d| x.has_dyad(d) != y.has_dyad(d)).count();
        prop_assert_eq!(dxy, brute);
    }

    #[test]
    fn edge_list_round_trips(space in space_strategy(), bits in prop::collection::vec(any::<bool>(), 1..20)) {
        let y = state_from_bits(&space, &bits);
        let back = AdjacencyState::read_edge_lists(&space, &y.to_edge_list()).unwrap();
        prop_assert_eq!(back, vec![y]);
    }
}

#[test]
fn bounds_are_extremes_exhaustively() {
    let spaces = [
        GraphSpace::undirected(5).unwrap(),
        GraphSpace::new(4, false, true).unwrap(),
        GraphSpace::directed(3).unwrap(),
        GraphSpace::new(3, true, true).unwrap(),
        GraphSpace::bipartite(3, 4, false).unwrap(),
        GraphSpace::egocentric(6, 2, false).unwrap(),
        GraphSpace::egocentric(4, 1, true).unwrap(),
    ];
    for space in spaces {
        let m = space.free_dyads().len();
        assert!(m <= 12, "{m}");
        let (lo, hi) = space.bounds();
        for mask in 0..1u64 << m {
            let y = AdjacencyState::from_free_mask(&space, mask).unwrap();
            assert!(lo.is_subgraph(&y).unwrap() && y.is_subgraph(&hi).unwrap());
            assert!(y.caches_consistent());
        }
    }
}
