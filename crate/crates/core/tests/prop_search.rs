use anyonforge_core::arith::Ctx;
use anyonforge_core::search::{enumerate_rank, Search, SearchSpec};
use proptest::prelude::*;

mod common;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The symmetry-breaking inequalities only prune redundant labellings:
    /// with them disabled the deduplicated output is identical.
    #[test]
    fn symmetry_constraints_lose_no_rings(r in 1usize..=4, m in 1u32..=2, seed in any::<u64>()) {
        let s = {
            // Pick an admissible self-dual count (same parity as the rank).
            let choices: Vec<usize> = (1..=r).filter(|s| (r - s) % 2 == 0).collect();
            choices[(seed as usize) % choices.len()]
        };
        let cx = Ctx::new(64);
        let on = Search::new(SearchSpec::new(r, m, s)).unwrap().enumerate(&cx).unwrap();
        let mut spec = SearchSpec::new(r, m, s);
        spec.symmetry = false;
        let off = Search::new(spec).unwrap().enumerate(&cx).unwrap();
        prop_assert_eq!(on.len(), off.len());
        for (x, y) in on.iter().zip(&off) {
            prop_assert_eq!(x.tensor(), y.tensor());
            prop_assert_eq!(x.dual_map(), y.dual_map());
        }
    }

    /// Splitting the top levels into subtasks and merging reproduces the
    /// sequential result regardless of split depth.
    #[test]
    fn split_runs_merge_deterministically(levels in 0usize..=4) {
        let cx = Ctx::new(64);
        let search = Search::new(SearchSpec::new(4, 1, 4)).unwrap();
        let whole = search.enumerate(&cx).unwrap();
        let mut merged = Vec::new();
        for task in search.subtasks(levels) {
            merged.extend(search.run(&task).unwrap());
        }
        let merged = search.finalize(merged, &cx);
        prop_assert_eq!(merged.len(), whole.len());
        for (x, y) in merged.iter().zip(&whole) {
            prop_assert_eq!(x.tensor(), y.tensor());
        }
    }
}

#[test]
fn every_emitted_ring_is_valid_and_unique() {
    let cx = Ctx::new(64);
    for r in 1..=4 {
        let rings = enumerate_rank(r, 1, &cx).unwrap();
        let mut keys: Vec<Vec<u32>> = rings
            .iter()
            .map(|ring| ring.canonical_form(&cx).key)
            .collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), rings.len(), "rank {r}");
    }
}

#[test]
fn fixture_rings_reappear_in_their_census() {
    let cx = Ctx::new(64);
    let rings = enumerate_rank(4, 1, &cx).unwrap();
    let keys: Vec<Vec<u32>> = rings
        .iter()
        .map(|ring| ring.canonical_form(&cx).key)
        .collect();
    let klein = common::zk(2).direct_product(&common::zk(2));
    for fixture in [common::zk(4), klein, common::fib().direct_product(&common::fib())] {
        assert!(keys.contains(&fixture.canonical_form(&cx).key));
    }
}
