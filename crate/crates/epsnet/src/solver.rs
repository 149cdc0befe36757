//! Exact and approximate minimum hitting sets, epsilon-net optimization, and
//! the random-sampling baseline.
//!
//! The exact solver is a deterministic branch and bound: it branches on every
//! element of a currently-unhit minimum-cardinality range, bounds from below
//! with a greedy packing of pairwise-disjoint unhit ranges, and starts from
//! the greedy incumbent. Identical inputs give identical results, node counts
//! included. A node budget turns exhaustion into a first-class outcome: the
//! incumbent is returned with `optimal = false` and the best proven lower
//! bound.

use crate::construction::{max_independent_bound, ConstructionError, Family, IndependenceMode};
use crate::rangespace::{NetVerdict, RangeSpace};
use crate::rational::Rational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("instance contains an empty range; no hitting set exists")]
    EmptyRange,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Outcome of an optimization run.
///
/// `solution` hits every target range, `lower_bound <= size`, and
/// `optimal` implies `lower_bound == size`. For maximization wrappers the
/// same invariants hold with `size` the achieved value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptResult {
    pub solution: Vec<u32>,
    pub size: usize,
    pub lower_bound: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Repeatedly pick the element covering the most unhit ranges (ties broken
/// toward the lowest index). Every range must be nonempty.
pub fn greedy_hitting_set(rs: &RangeSpace) -> Result<Vec<u32>, SolverError> {
    let ranges = rs.ranges();
    if ranges.iter().any(|r| r.is_empty()) {
        return Err(SolverError::EmptyRange);
    }
    let n = rs.ground_size();
    let mut unhit: Vec<bool> = vec![true; ranges.len()];
    let mut remaining = ranges.len();
    let mut picked = Vec::new();
    while remaining > 0 {
        let mut cover = vec![0usize; n];
        for (ri, range) in ranges.iter().enumerate() {
            if unhit[ri] {
                for &e in range {
                    cover[e as usize] += 1;
                }
            }
        }
        let best = (0..n)
            .max_by_key(|&e| (cover[e], std::cmp::Reverse(e)))
            .expect("nonempty ranges imply a coverable element");
        picked.push(best as u32);
        for (ri, range) in ranges.iter().enumerate() {
            if unhit[ri] && range.binary_search(&(best as u32)).is_ok() {
                unhit[ri] = false;
                remaining -= 1;
            }
        }
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Fixed-width bit set over the ground elements.
#[derive(Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn set(&mut self, i: u32) {
        self.words[i as usize / 64] |= 1 << (i % 64);
    }

    fn disjoint(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn union_in(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

struct Search<'a> {
    ranges: &'a [Vec<u32>],
    range_bits: Vec<Bits>,
    /// Ranges sorted by (size, index): branching and packing order.
    by_size: Vec<usize>,
    /// Ranges containing each element.
    element_ranges: Vec<Vec<usize>>,
    /// How many chosen elements hit each range.
    hits: Vec<u32>,
    chosen: Vec<u32>,
    incumbent: Vec<u32>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    /// Best lower bound among subtrees abandoned by the budget.
    abandoned_lb: Option<usize>,
}

impl<'a> Search<'a> {
    fn packing_bound(&self) -> usize {
        let mut used = Bits::new(self.element_ranges.len());
        let mut bound = 0;
        for &ri in &self.by_size {
            if self.hits[ri] == 0 && self.range_bits[ri].disjoint(&used) {
                bound += 1;
                used.union_in(&self.range_bits[ri]);
            }
        }
        bound
    }

    fn fold_abandoned(&mut self, node_lb: usize) {
        self.abandoned_lb = Some(match self.abandoned_lb {
            Some(cur) => cur.min(node_lb),
            None => node_lb,
        });
    }

    fn recurse(&mut self) {
        self.nodes += 1;
        let lb = self.chosen.len() + self.packing_bound();
        if self.exhausted {
            self.fold_abandoned(lb);
            return;
        }
        if self.nodes > self.budget {
            self.exhausted = true;
            self.fold_abandoned(lb);
            return;
        }
        if lb >= self.incumbent.len() {
            return;
        }
        let unhit = self.by_size.iter().copied().find(|&ri| self.hits[ri] == 0);
        let Some(branch_range) = unhit else {
            // Everything hit: lb == chosen.len() < incumbent.len().
            self.incumbent = self.chosen.clone();
            self.incumbent.sort_unstable();
            return;
        };
        for &e in &self.ranges[branch_range] {
            self.chosen.push(e);
            for &ri in &self.element_ranges[e as usize] {
                self.hits[ri] += 1;
            }
            self.recurse();
            for &ri in &self.element_ranges[e as usize] {
                self.hits[ri] -= 1;
            }
            self.chosen.pop();
            if self.exhausted {
                // The loop's remaining branches are descendants of this node;
                // its bound already covers them.
                self.fold_abandoned(lb);
                return;
            }
        }
    }
}

/// Exact minimum hitting set by branch and bound, within a node budget.
pub fn exact_min_hitting_set(rs: &RangeSpace, node_budget: u64) -> Result<OptResult, SolverError> {
    let start = Instant::now();
    let greedy = greedy_hitting_set(rs)?;
    let n = rs.ground_size();
    let ranges = rs.ranges();
    let range_bits: Vec<Bits> = ranges
        .iter()
        .map(|r| {
            let mut b = Bits::new(n);
            for &e in r {
                b.set(e);
            }
            b
        })
        .collect();
    let mut by_size: Vec<usize> = (0..ranges.len()).collect();
    by_size.sort_by_key(|&ri| (ranges[ri].len(), ri));
    let mut element_ranges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ri, range) in ranges.iter().enumerate() {
        for &e in range {
            element_ranges[e as usize].push(ri);
        }
    }
    let mut search = Search {
        ranges,
        range_bits,
        by_size,
        element_ranges,
        hits: vec![0; ranges.len()],
        chosen: Vec::new(),
        incumbent: greedy,
        nodes: 0,
        budget: node_budget,
        exhausted: false,
        abandoned_lb: None,
    };
    search.recurse();

    let size = search.incumbent.len();
    let optimal = !search.exhausted;
    let lower_bound = if optimal {
        size
    } else {
        search.abandoned_lb.map_or(size, |lb| lb.min(size))
    };
    Ok(OptResult {
        solution: search.incumbent,
        size,
        lower_bound,
        optimal,
        nodes_explored: search.nodes,
        wall_time: start.elapsed(),
    })
}

/// Exact minimum epsilon-net: the minimum hitting set of the inclusion-minimal
/// heavy ranges. With no heavy range the empty set is optimal.
pub fn min_epsilon_net(
    rs: &RangeSpace,
    eps: &Rational,
    node_budget: u64,
) -> Result<OptResult, SolverError> {
    let start = Instant::now();
    let heavy = rs.heavy_ranges(eps);
    if heavy.ranges().is_empty() {
        return Ok(OptResult {
            solution: vec![],
            size: 0,
            lower_bound: 0,
            optimal: true,
            nodes_explored: 0,
            wall_time: start.elapsed(),
        });
    }
    exact_min_hitting_set(&heavy, node_budget)
}

/// Largest r-independent subfamily, as `n` minus the exact minimum hitting
/// set of the inclusion-minimal dual hyperedges of size `>= r`. The returned
/// solution is the witness independent set (complement of the hitting set);
/// when the node budget ran out it is still independent but possibly not
/// maximum, and `optimal` is false.
pub fn max_r_independent(
    family: &Family,
    r: usize,
    node_budget: u64,
) -> Result<OptResult, SolverError> {
    assert!(r >= 2, "independence is trivial for r < 2");
    let start = Instant::now();
    let n = family.len();
    if r > n {
        // No hyperedge can reach size r, so the whole family is independent.
        let all: Vec<u32> = (0..n as u32).collect();
        return Ok(OptResult {
            solution: all,
            size: n,
            lower_bound: n,
            optimal: true,
            nodes_explored: 0,
            wall_time: start.elapsed(),
        });
    }
    let dual = family.dual_space()?;
    let eps = Rational::from(r) / Rational::from(n);
    let targets = dual.heavy_ranges(&eps);
    if targets.ranges().is_empty() {
        let all: Vec<u32> = (0..n as u32).collect();
        return Ok(OptResult {
            solution: all,
            size: n,
            lower_bound: n,
            optimal: true,
            nodes_explored: 0,
            wall_time: start.elapsed(),
        });
    }
    let hs = exact_min_hitting_set(&targets, node_budget)?;
    let solution: Vec<u32> = (0..n as u32)
        .filter(|i| hs.solution.binary_search(i).is_err())
        .collect();
    let size = solution.len();
    debug_assert!(family
        .is_r_independent(&solution, r, IndependenceMode::AtLeastR)?
        .is_independent());
    Ok(OptResult {
        solution,
        size,
        lower_bound: size,
        optimal: hs.optimal,
        nodes_explored: hs.nodes_explored,
        wall_time: start.elapsed(),
    })
}

/// A certified lower bound on the minimum epsilon-net size of the family's
/// dual space at `eps = r / n`: `n` minus the independence bound. Any net
/// must leave an r-independent complement, which the bound caps.
pub fn certified_net_lower_bound(family: &Family, r: usize) -> Result<usize, SolverError> {
    let bound = max_independent_bound(family.c(), family.d(), r)?;
    let cap = bound
        .floor_bigint()
        .to_usize()
        .unwrap_or(family.len())
        .min(family.len());
    Ok(family.len() - cap)
}

/// Result of the random-sampling baseline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleNet {
    pub net: Vec<u32>,
    pub attempts: u64,
    pub sample_size: usize,
}

/// Sample `m = ceil((8d/eps) * log2(8d/eps))` elements uniformly with
/// replacement (`d` = VC-dimension capped at 4, floored at 1), verify, and
/// resample until a verified net appears. Deterministic in the seed.
pub fn hw_sample_net(rs: &RangeSpace, eps: &Rational, seed: u64) -> SampleNet {
    assert!(
        eps.is_positive() && *eps <= Rational::one(),
        "eps must be in (0, 1]"
    );
    if rs.ranges().iter().all(|r| !rs.is_heavy(r.len(), eps)) || rs.ground_size() == 0 {
        return SampleNet {
            net: vec![],
            attempts: 1,
            sample_size: 0,
        };
    }
    let dim = rs.vc_dimension(4).max(1);
    let ratio = Rational::from(8 * dim) / eps;
    let ratio_f = ratio.to_f64();
    let m = (ratio_f * ratio_f.log2()).ceil().max(1.0) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rs.ground_size();
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        let mut net: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n) as u32).collect();
        net.sort_unstable();
        net.dedup();
        if matches!(rs.is_epsilon_net(eps, &net), NetVerdict::Net) {
            return SampleNet {
                sample_size: net.len(),
                net,
                attempts,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_family;

    fn rs(n: usize, ranges: &[&[u32]]) -> RangeSpace {
        RangeSpace::from_incidences(n, ranges.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn greedy_tie_break_and_forced_picks() {
        let space = rs(6, &[&[3, 5]]);
        assert_eq!(greedy_hitting_set(&space).unwrap(), vec![3]);
        let space = rs(2, &[&[0], &[1]]);
        assert_eq!(greedy_hitting_set(&space).unwrap(), vec![0, 1]);
        let empty = rs(2, &[&[]]);
        assert!(matches!(
            greedy_hitting_set(&empty),
            Err(SolverError::EmptyRange)
        ));
    }

    #[test]
    fn exact_common_element() {
        let space = rs(3, &[&[0, 1], &[1, 2]]);
        let res = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.size, 1);
        assert_eq!(res.solution, vec![1]);
        assert!(res.optimal);
        assert_eq!(res.lower_bound, 1);
    }

    #[test]
    fn exact_disjoint_ranges_need_one_each() {
        let space = rs(9, &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
        let res = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.size, 3);
        assert!(res.optimal);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        // Five-cycle: optimum 3, packing bound 2, so the root cannot be pruned
        // and a one-node budget must run out.
        let space = rs(5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[0, 4]]);
        let res = exact_min_hitting_set(&space, 1).unwrap();
        assert!(!res.optimal);
        assert_eq!(res.size, 3);
        assert_eq!(res.lower_bound, 2);
        // The incumbent is still a valid hitting set.
        for range in space.ranges() {
            assert!(range.iter().any(|e| res.solution.contains(e)));
        }
        // With budget to spare the same instance is solved outright.
        let full = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        assert!(full.optimal);
        assert_eq!(full.size, 3);
    }

    #[test]
    fn min_net_with_no_heavy_ranges() {
        let space = rs(4, &[&[0]]);
        let res = min_epsilon_net(&space, &Rational::new(1, 2), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.size, 0);
        assert!(res.optimal);
    }

    #[test]
    fn min_net_threshold_two() {
        let space = rs(3, &[&[0, 1], &[1, 2]]);
        let res = min_epsilon_net(&space, &Rational::new(2, 3), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.solution, vec![1]);
        assert_eq!(res.size, 1);
    }

    #[test]
    fn max_independent_depth_one() {
        let f = build_family(3, 1).unwrap();
        let res = max_r_independent(&f, 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(res.size, 1);
        assert!(res.optimal);
    }

    #[test]
    fn deterministic_replay() {
        let space = rs(
            10,
            &[
                &[0, 1, 2],
                &[2, 3, 4],
                &[4, 5, 6],
                &[6, 7, 8],
                &[8, 9, 0],
                &[1, 5, 9],
            ],
        );
        let a = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        let b = exact_min_hitting_set(&space, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn sampling_returns_verified_net() {
        let space = rs(4, &[&[0, 1, 2, 3]]);
        let out = hw_sample_net(&space, &Rational::one(), 1);
        assert!(out.attempts >= 1);
        assert!(space.is_epsilon_net(&Rational::one(), &out.net).is_net());

        let empty = rs(4, &[]);
        let out = hw_sample_net(&empty, &Rational::new(1, 2), 7);
        assert!(out.net.is_empty());
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let f = build_family(4, 2).unwrap();
        let dual = f.dual_space().unwrap();
        let eps = Rational::new(1, 128);
        let a = hw_sample_net(&dual, &eps, 1);
        let b = hw_sample_net(&dual, &eps, 1);
        assert_eq!(a, b);
        assert!(dual.is_epsilon_net(&eps, &a.net).is_net());
    }
}
