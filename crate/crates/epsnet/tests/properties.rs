//! Property suites for the combinatorial core, each checked against a
//! brute-force oracle that never calls the code path under test.

use epsnet::rangespace::{NetVerdict, RangeSpace};
use epsnet::rational::Rational;
use epsnet::solver::{
    exact_min_hitting_set, greedy_hitting_set, min_epsilon_net, DEFAULT_NODE_BUDGET,
};
use proptest::prelude::*;
use std::collections::HashSet;

fn space_from_masks(n: usize, masks: &[u32]) -> RangeSpace {
    let ranges = masks
        .iter()
        .map(|&m| (0..n as u32).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    RangeSpace::from_incidences(n, ranges).unwrap()
}

fn arb_space(max_n: usize, max_ranges: usize) -> impl Strategy<Value = RangeSpace> {
    (0..=max_n).prop_flat_map(move |n| {
        let mask_cap = 1u32 << n;
        proptest::collection::vec(0..mask_cap, 0..=max_ranges)
            .prop_map(move |masks| space_from_masks(n, &masks))
    })
}

fn arb_eps() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=12).prop_map(|(a, b)| {
        let (num, den) = if a <= b { (a, b) } else { (b, a) };
        Rational::new(num, den)
    })
}

/// Exhaustive VC-dimension: try every subset of the ground set.
fn brute_force_vc(rs: &RangeSpace) -> usize {
    let n = rs.ground_size();
    assert!(n <= 16);
    let range_masks: Vec<u32> = rs
        .ranges()
        .iter()
        .map(|r| r.iter().fold(0u32, |acc, &e| acc | 1 << e))
        .collect();
    let mut best = 0;
    for subset in 1u32..1 << n {
        let k = subset.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mut traces: HashSet<u32> = HashSet::new();
        for &m in &range_masks {
            traces.insert(m & subset);
        }
        if traces.len() == 1 << k {
            best = k;
        }
    }
    best
}

proptest! {
    #[test]
    fn normalization_is_idempotent(space in arb_space(12, 10)) {
        let again =
            RangeSpace::from_incidences(space.ground_size(), space.ranges().to_vec()).unwrap();
        prop_assert_eq!(&again, &space);
    }

    #[test]
    fn heavy_ranges_equivalent_to_unminimalized_filter(
        space in arb_space(8, 8),
        eps in arb_eps(),
    ) {
        let n = space.ground_size();
        let minimal = space.heavy_ranges(&eps);
        let threshold = &eps * &Rational::from(n);
        let heavy_raw: Vec<&Vec<u32>> = space
            .ranges()
            .iter()
            .filter(|r| !r.is_empty() && Rational::from(r.len()) >= threshold)
            .collect();
        // A set hits all minimal heavy ranges iff it hits all heavy ranges.
        for candidate in 0u32..1 << n {
            let hits = |range: &[u32]| range.iter().any(|&e| candidate >> e & 1 == 1);
            let hits_minimal = minimal.ranges().iter().all(|r| hits(r));
            let hits_all = heavy_raw.iter().all(|r| hits(r));
            prop_assert_eq!(hits_minimal, hits_all, "candidate {:b}", candidate);
        }
    }

    #[test]
    fn vc_dimension_matches_exhaustive_shattering(space in arb_space(12, 9)) {
        let n = space.ground_size();
        prop_assert_eq!(space.vc_dimension(n.max(1)), brute_force_vc(&space));
    }

    #[test]
    fn nets_are_monotone_in_eps(
        space in arb_space(10, 8),
        eps_a in arb_eps(),
        eps_b in arb_eps(),
    ) {
        let (lo, hi) = if eps_a <= eps_b { (eps_a, eps_b) } else { (eps_b, eps_a) };
        // Every lo-net is a hi-net.
        let lo_net = min_epsilon_net(&space, &lo, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(matches!(
            space.is_epsilon_net(&hi, &lo_net.solution),
            NetVerdict::Net
        ));
        // The exact minimum size is nonincreasing in eps.
        let hi_net = min_epsilon_net(&space, &hi, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(hi_net.size <= lo_net.size);
    }

    #[test]
    fn greedy_never_beats_exact_and_bounds_hold(space in arb_space(10, 8)) {
        prop_assume!(space.ranges().iter().all(|r| !r.is_empty()));
        if space.ranges().is_empty() {
            return Ok(());
        }
        let greedy = greedy_hitting_set(&space).unwrap();
        let exact = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(exact.size <= greedy.len());
        prop_assert!(exact.lower_bound <= exact.size);
        prop_assert!(exact.optimal);
        prop_assert_eq!(exact.lower_bound, exact.size);
    }

    #[test]
    fn json_round_trip_is_lossless(space in arb_space(12, 10)) {
        let text = serde_json::to_string(&space).unwrap();
        let back: RangeSpace = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, space);
    }
}

mod independence_cross_check {
    use super::*;
    use epsnet::construction::{build_family, IndependenceMode};

    proptest! {
        /// A set is r-independent iff its complement hits every
        /// inclusion-minimal dual hyperedge of size at least r.
        #[test]
        fn independence_equals_complement_hitting(mask in 0u32..512, r in 2usize..4) {
            let family = build_family(3, 2).unwrap();
            let n = family.len();
            prop_assert_eq!(n, 9);
            let set: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
            let verdict = family
                .is_r_independent(&set, r, IndependenceMode::AtLeastR)
                .unwrap()
                .is_independent();
            let dual = family.dual_space().unwrap();
            let eps = Rational::from(r) / Rational::from(n);
            let minimal = dual.heavy_ranges(&eps);
            let complement_hits = minimal
                .ranges()
                .iter()
                .all(|range| range.iter().any(|e| !set.contains(e)));
            prop_assert_eq!(verdict, complement_hits);
        }
    }
}
