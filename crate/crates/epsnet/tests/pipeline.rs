//! Cross-module integration: geometric invariants of the families, blow-up
//! behavior, the half-space pipeline on several parameter pairs, and the
//! point-replication argument.

use epsnet::construction::{build_family, dual_space_over_grid, precedes};
use epsnet::duality::{halfspace_incidence_space, theorem3_instance};
use epsnet::rational::Rational;
use epsnet::solver::{max_r_independent, min_epsilon_net, DEFAULT_NODE_BUDGET};
use epsnet::staged::theorem4_instance;

#[test]
fn family_members_have_equal_area() {
    for c in 2..=5u32 {
        for d in 1..=4u32 {
            let f = build_family(c, d).unwrap();
            let area = Rational::pow(c as i64, -(d as i32));
            assert!(
                f.rects().iter().all(|r| r.area() == area),
                "unequal areas in ({c},{d})"
            );
        }
    }
}

#[test]
fn no_rectangle_contains_anothers_corner() {
    for (c, d) in [(3u32, 1u32), (3, 2), (4, 2), (3, 3)] {
        let f = build_family(c, d).unwrap();
        for (i, a) in f.rects().iter().enumerate() {
            for (j, b) in f.rects().iter().enumerate() {
                if i == j {
                    continue;
                }
                for corner in b.corners() {
                    assert!(
                        !a.interior_contains(&corner),
                        "({c},{d}): rect {i} holds a corner of rect {j}"
                    );
                }
            }
        }
    }
}

#[test]
fn intersecting_members_are_comparable() {
    for (c, d) in [(3u32, 1u32), (3, 2), (4, 2), (3, 3)] {
        let f = build_family(c, d).unwrap();
        for (i, a) in f.rects().iter().enumerate() {
            for b in f.rects().iter().skip(i + 1) {
                if a.interiors_intersect(b) {
                    assert!(
                        precedes(a, b) || precedes(b, a),
                        "({c},{d}): intersecting incomparable pair"
                    );
                }
            }
        }
    }
}

#[test]
fn projection_order_is_a_partial_order() {
    let f = build_family(3, 2).unwrap();
    let rects = f.rects();
    for a in rects {
        assert!(precedes(a, a));
    }
    for (i, a) in rects.iter().enumerate() {
        for (j, b) in rects.iter().enumerate() {
            if i != j && precedes(a, b) && precedes(b, a) {
                // Antisymmetry over closures: both directions force equal
                // closures, impossible for distinct members.
                panic!("distinct members with mutual containment");
            }
            for c in rects {
                if precedes(a, b) && precedes(b, c) {
                    assert!(precedes(a, c), "transitivity violated");
                }
            }
        }
    }
}

#[test]
fn blowup_preserves_vc_dimensions() {
    for (c, d) in [(3u32, 1u32), (3, 2), (4, 2)] {
        let f = build_family(c, d).unwrap();
        let base_primal = f.primal_space().unwrap().vc_dimension(4);
        let base_dual = f.dual_space().unwrap().vc_dimension(4);
        for t in [2usize, 3] {
            let blown = f.chain_blowup(t).unwrap();
            let inc = epsnet::construction::DualIncidences::over_grid(&blown, c, d).unwrap();
            let primal = inc.primal_space().vc_dimension(4);
            let dual = inc.range_space().vc_dimension(4);
            assert_eq!(primal, base_primal, "({c},{d}) t={t} primal changed");
            assert_eq!(dual, base_dual, "({c},{d}) t={t} dual changed");
        }
        if (c, d) != (3, 1) {
            assert_eq!(base_primal, 2);
        }
        assert_eq!(base_dual, 2);
    }
}

#[test]
fn blowup_multiplies_witness_depth_exactly() {
    let f = build_family(4, 2).unwrap();
    let witnesses = f.witness_points();
    for t in [2usize, 3] {
        let blown = f.chain_blowup(t).unwrap();
        for w in witnesses.iter().step_by(17) {
            let base_depth = f.rects().iter().filter(|r| r.contains(w)).count();
            let blown_depth = blown.iter().filter(|r| r.contains(w)).count();
            assert_eq!(blown_depth, t * base_depth);
        }
    }
}

#[test]
fn halfspace_pipeline_is_isomorphic_across_families() {
    for (c, d) in [(3u32, 1u32), (3, 2), (4, 2)] {
        let f = build_family(c, d).unwrap();
        let inst = theorem3_instance(&f).unwrap();
        let space = halfspace_incidence_space(&inst.points, &inst.halfspaces).unwrap();
        let dual = f.dual_space().unwrap();
        assert_eq!(
            space.ranges(),
            dual.ranges(),
            "({c},{d}): half-space ranges differ from the rectangle dual"
        );
    }
}

#[test]
fn independence_and_hitting_sets_partition_the_family() {
    for (c, d, r) in [(3u32, 1u32, 2usize), (3, 2, 2), (4, 2, 2), (4, 2, 3)] {
        let f = build_family(c, d).unwrap();
        let n = f.len();
        let dual = f.dual_space().unwrap();
        let eps = Rational::from(r) / Rational::from(n);
        let heavy = dual.heavy_ranges(&eps);
        let independent = max_r_independent(&f, r, DEFAULT_NODE_BUDGET).unwrap();
        assert!(independent.optimal);
        if heavy.ranges().is_empty() {
            assert_eq!(independent.size, n);
            continue;
        }
        let hitting = epsnet::solver::exact_min_hitting_set(&heavy, DEFAULT_NODE_BUDGET).unwrap();
        assert!(hitting.optimal);
        assert_eq!(independent.size + hitting.size, n, "({c},{d}) r={r}");
    }
}

#[test]
fn point_replication_preserves_minimum_net() {
    let (_, space) = theorem4_instance(8, 2, 21).unwrap();
    let eps = Rational::new(2, 8);
    let base = min_epsilon_net(&space, &eps, DEFAULT_NODE_BUDGET).unwrap();
    assert!(base.optimal);
    for t in [2usize, 3] {
        let replicated = space.replicate_ground(t);
        // Same eps: every range grew by the same factor as the ground set.
        for (orig, grown) in space.ranges().iter().zip(replicated.ranges()) {
            assert_eq!(grown.len(), t * orig.len());
        }
        let res = min_epsilon_net(&replicated, &eps, DEFAULT_NODE_BUDGET).unwrap();
        assert!(res.optimal);
        assert_eq!(res.size, base.size, "replication x{t} moved the optimum");
    }
}

#[test]
fn random_instance_defeats_half_sized_candidates() {
    use epsnet::rangespace::NetVerdict;
    use rand::{Rng, SeedableRng};
    let n = 32usize;
    let (_, space) = theorem4_instance(n, 2, 1).unwrap();
    let eps = Rational::new(2, 32);
    let exact = min_epsilon_net(&space, &eps, DEFAULT_NODE_BUDGET).unwrap();
    if exact.size > n / 2 {
        // This seed realizes the headline event: no half-sized net exists, so
        // every random candidate of size n/2 must fail.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut candidate: Vec<u32> = Vec::new();
            while candidate.len() < n / 2 {
                let e = rng.gen_range(0..n as u32);
                if !candidate.contains(&e) {
                    candidate.push(e);
                }
            }
            candidate.sort_unstable();
            assert!(matches!(
                space.is_epsilon_net(&eps, &candidate),
                NetVerdict::Violated(_)
            ));
        }
    }
}

#[test]
fn all_nonempty_hyperedges_minimalize_to_singletons() {
    // Every rectangle of (4,2) owns a private witness cell, so at a threshold
    // keeping all nonempty hyperedges the minimal ones are the 12 singletons.
    let f = build_family(4, 2).unwrap();
    let dual = f.dual_space().unwrap();
    let heavy = dual.heavy_ranges(&Rational::new(1, 12));
    let expected: Vec<Vec<u32>> = (0..12u32).map(|i| vec![i]).collect();
    assert_eq!(heavy.ranges(), &expected[..]);
}

#[test]
fn every_five_subset_fails_the_hard_instance() {
    use epsnet::rangespace::NetVerdict;
    let f = build_family(4, 2).unwrap();
    let dual = f.dual_space().unwrap();
    let eps = Rational::pow(2, -7);
    let mut checked = 0usize;
    for mask in 0u32..1 << 12 {
        if mask.count_ones() != 5 {
            continue;
        }
        let s: Vec<u32> = (0..12u32).filter(|i| mask >> i & 1 == 1).collect();
        assert!(matches!(
            dual.is_epsilon_net(&eps, &s),
            NetVerdict::Violated(_)
        ));
        checked += 1;
    }
    assert_eq!(checked, 792);
}

#[test]
fn random_independent_sets_satisfy_the_counting_inequality() {
    use epsnet::construction::IndependenceMode;
    use rand::{Rng, SeedableRng};
    let f = build_family(4, 2).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
    let mut found = 0usize;
    while found < 40 {
        let mask: u16 = rng.gen_range(0..1 << 12);
        let set: Vec<u32> = (0..12u32).filter(|i| mask >> i & 1 == 1).collect();
        if f.is_r_independent(&set, 2, IndependenceMode::AtLeastR)
            .unwrap()
            .is_independent()
        {
            assert!(f
                .verify_inequality_x(&set, 2, IndependenceMode::AtLeastR)
                .unwrap());
            found += 1;
        }
    }
}

#[test]
fn greedy_stays_above_the_exact_depth_two_optimum() {
    use epsnet::solver::{exact_min_hitting_set, greedy_hitting_set};
    let f = build_family(4, 2).unwrap();
    let dual = f.dual_space().unwrap();
    let heavy = dual.heavy_ranges(&Rational::new(2, 12));
    let exact = exact_min_hitting_set(&heavy, DEFAULT_NODE_BUDGET).unwrap();
    assert!(exact.optimal);
    assert_eq!(exact.size, 7); // 12 minus the maximum 2-independent set (5)
    let greedy = greedy_hitting_set(&heavy).unwrap();
    assert!(greedy.len() >= exact.size);
}

#[test]
fn survival_frequency_stays_under_the_analytic_bound() {
    use epsnet::staged::survival_estimate;
    let set: Vec<usize> = (0..32).collect();
    let report = survival_estimate(64, 2, &set, 10_000, 12).unwrap();
    assert_eq!(report.stages, 4);
    assert!(report.count_checks_all_passed);
    assert!(
        report.survival_frequency <= report.analytic_all_stages_bound + report.three_sigma,
        "survival {} exceeds bound {} + {}",
        report.survival_frequency,
        report.analytic_all_stages_bound,
        report.three_sigma
    );
}

#[test]
fn dual_of_no_rectangles_is_the_empty_hyperedge() {
    let space = dual_space_over_grid(&[], 3, 1).unwrap();
    assert_eq!(space.ground_size(), 0);
    assert_eq!(space.ranges(), &[Vec::<u32>::new()]);
}
