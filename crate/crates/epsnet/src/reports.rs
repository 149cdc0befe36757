//! Growth-curve experiments and falsification logs.
//!
//! A growth row fixes `r`, builds the family at `(c, d) = (4, 3r - 4)`, sets
//! `eps = r / n` so that heavy means "at least r deep", and certifies a lower
//! bound on the minimum epsilon-net of the dual space: exactly for `r = 2`
//! (the solver settles the maximum 2-independent set), via the proven
//! independence bound for `r = 3` (its exact form is machine-checked at small
//! scale elsewhere in this crate). The normalized column `eps * lower_bound`
//! then grows like `r / 2`.

use crate::construction::{build_family, ConstructionError};
use crate::rangespace::{NetVerdict, RangeSpace};
use crate::rational::Rational;
use crate::solver::{
    certified_net_lower_bound, exact_min_hitting_set, greedy_hitting_set, hw_sample_net,
    SolverError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("growth rows are certified only for 2 <= r <= 3, got {0}")]
    RowOutOfRange(usize),
    #[error(
        "candidate {candidate:?} of size {size} is an epsilon-net, contradicting the certificate"
    )]
    CandidatePassed { size: usize, candidate: Vec<u32> },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthModes {
    pub greedy: bool,
    pub exact: bool,
    pub sample: bool,
}

impl Default for GrowthModes {
    fn default() -> Self {
        GrowthModes {
            greedy: true,
            exact: true,
            sample: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub r: usize,
    pub eps: Rational,
    pub c: u32,
    pub d: u32,
    pub n_rects: usize,
    /// Certified lower bound on the minimum epsilon-net size.
    pub lower_bound: usize,
    /// "solver" when settled exactly, "independence-bound" otherwise.
    pub certificate: String,
    pub greedy_size: Option<usize>,
    pub exact_size: Option<usize>,
    pub sample_size: Option<usize>,
    /// `eps * lower_bound`, the normalized growth quantity (at least `r/2`).
    pub eps_times_lower: Rational,
    pub millis: u128,
}

/// One row per `r` in `r_min..=r_max` (certified range: 2..=3).
pub fn growth_table(
    r_min: usize,
    r_max: usize,
    modes: GrowthModes,
    budget: u64,
    seed: u64,
) -> Result<Vec<GrowthRow>, ReportError> {
    if !(2..=3).contains(&r_min) || !(2..=3).contains(&r_max) {
        return Err(ReportError::RowOutOfRange(if !(2..=3).contains(&r_min) {
            r_min
        } else {
            r_max
        }));
    }
    let mut rows = Vec::new();
    for r in r_min..=r_max {
        let started = Instant::now();
        let c = 4u32;
        let d = 3 * r as u32 - 4;
        let family = build_family(c, d)?;
        let n = family.len();
        let eps = Rational::from(r) / Rational::from(n);
        let dual = family.dual_space()?;
        let heavy = dual.heavy_ranges(&eps);

        let (lower_bound, certificate, exact_size) = if r == 2 {
            let exact = exact_min_hitting_set(&heavy, budget)?;
            let lb = if exact.optimal {
                exact.size
            } else {
                exact.lower_bound
            };
            let exact_size = (modes.exact && exact.optimal).then_some(exact.size);
            (
                lb,
                if exact.optimal {
                    "solver"
                } else {
                    "solver-bound"
                }
                .to_string(),
                exact_size,
            )
        } else {
            (
                certified_net_lower_bound(&family, r)?,
                "independence-bound".to_string(),
                None,
            )
        };

        let greedy_size = if modes.greedy {
            Some(greedy_hitting_set(&heavy)?.len())
        } else {
            None
        };
        let sample_size = if modes.sample {
            Some(hw_sample_net(&dual, &eps, seed).sample_size)
        } else {
            None
        };
        let eps_times_lower = &eps * &Rational::from(lower_bound);
        rows.push(GrowthRow {
            r,
            eps,
            c,
            d,
            n_rects: n,
            lower_bound,
            certificate,
            greedy_size,
            exact_size,
            sample_size,
            eps_times_lower,
            millis: started.elapsed().as_millis(),
        });
    }
    Ok(rows)
}

/// Plain CSV, reproducible bit for bit from (parameters, seed): timings stay
/// out of it.
pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from(
        "r,eps,c,d,n_rects,lower_bound,certificate,greedy_size,exact_size,sample_size,eps_times_lower\n",
    );
    let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.r,
            row.eps,
            row.c,
            row.d,
            row.n_rects,
            row.lower_bound,
            row.certificate,
            opt(row.greedy_size),
            opt(row.exact_size),
            opt(row.sample_size),
            row.eps_times_lower,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsifyWitness {
    pub candidate: Vec<u32>,
    pub violated_range: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub size: usize,
    pub samples: usize,
    pub failures: usize,
    /// The first few (candidate, violated range) pairs.
    pub witnesses: Vec<FalsifyWitness>,
}

const WITNESS_LOG_CAP: usize = 10;

/// Sample random candidate sets of the given size; every one must fail the
/// net check (the caller promises `size` is below the certified minimum).
/// Any candidate that passes is a hard error: it contradicts the certificate.
pub fn falsify_small_nets(
    rs: &RangeSpace,
    eps: &Rational,
    size: usize,
    samples: usize,
    seed: u64,
) -> Result<FalsifyReport, ReportError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rs.ground_size();
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let mut candidate: Vec<u32> = rand::seq::index::sample(&mut rng, n, size.min(n))
            .into_iter()
            .map(|i| i as u32)
            .collect();
        candidate.sort_unstable();
        match rs.is_epsilon_net(eps, &candidate) {
            NetVerdict::Net => {
                return Err(ReportError::CandidatePassed { size, candidate });
            }
            NetVerdict::Violated(range) => {
                if witnesses.len() < WITNESS_LOG_CAP {
                    witnesses.push(FalsifyWitness {
                        candidate,
                        violated_range: range,
                    });
                }
            }
        }
    }
    Ok(FalsifyReport {
        size,
        samples,
        failures: samples,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::max_independent_bound;

    #[test]
    fn growth_row_r2_matches_solver() {
        let rows = growth_table(2, 2, GrowthModes::default(), 1_000_000, 1).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!((row.c, row.d, row.n_rects), (4, 2, 12));
        assert_eq!(row.eps, Rational::new(1, 6));
        // Certified exactly; at least half the family.
        assert!(row.lower_bound >= 6);
        assert_eq!(row.exact_size, Some(row.lower_bound));
        assert!(row.greedy_size.unwrap() >= row.lower_bound);
        assert!(row.eps_times_lower >= Rational::one());
    }

    #[test]
    fn growth_rejects_uncertified_r() {
        assert!(matches!(
            growth_table(2, 4, GrowthModes::default(), 1000, 0),
            Err(ReportError::RowOutOfRange(4))
        ));
        assert!(matches!(
            growth_table(1, 2, GrowthModes::default(), 1000, 0),
            Err(ReportError::RowOutOfRange(1))
        ));
    }

    #[test]
    fn csv_is_deterministic_and_timing_free() {
        let rows = growth_table(2, 2, GrowthModes::default(), 1_000_000, 7).unwrap();
        let a = growth_csv(&rows);
        let rows2 = growth_table(2, 2, GrowthModes::default(), 1_000_000, 7).unwrap();
        let b = growth_csv(&rows2);
        assert_eq!(a, b);
        assert!(!a.contains("millis"));
        assert!(a.starts_with("r,eps,"));
    }

    #[test]
    fn falsify_rejects_sub_minimum_candidates() {
        let family = build_family(4, 2).unwrap();
        let dual = family.dual_space().unwrap();
        let eps = Rational::pow(2, -7);
        let report = falsify_small_nets(&dual, &eps, 5, 50, 3).unwrap();
        assert_eq!(report.failures, 50);
        assert!(!report.witnesses.is_empty());
        for w in &report.witnesses {
            assert!(!w.violated_range.is_empty());
            assert!(w.violated_range.iter().all(|e| !w.candidate.contains(e)));
        }
    }

    #[test]
    fn falsify_size_zero_fails_iff_heavy_ranges_exist() {
        let family = build_family(3, 1).unwrap();
        let dual = family.dual_space().unwrap();
        let report = falsify_small_nets(&dual, &Rational::new(1, 4), 0, 5, 1).unwrap();
        assert_eq!(report.failures, 5);
    }

    #[test]
    fn falsify_flags_a_passing_candidate() {
        let family = build_family(3, 1).unwrap();
        let dual = family.dual_space().unwrap();
        // Size 2 = whole ground set: always a net, so the certificate is
        // contradicted immediately.
        let out = falsify_small_nets(&dual, &Rational::new(1, 4), 2, 1, 1);
        assert!(matches!(out, Err(ReportError::CandidatePassed { .. })));
    }

    #[test]
    fn independence_bound_certificate_for_r3() {
        // The r=3 certificate equals n minus the independence bound: spot
        // check the arithmetic without building the large family.
        assert_eq!(
            max_independent_bound(4, 5, 3).unwrap(),
            Rational::from(768i64)
        );
    }
}
