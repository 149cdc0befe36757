//! Random planar point sets built digit by digit, and the interval machinery
//! that defeats candidate nets of half the points.
//!
//! Points have fixed y-order (`y_i = (i + 1/2)/n`) and x-coordinates drawn as
//! binary fractions, one digit per stage. At stage `t` the indices partition
//! by the truncation of their first `t-1` digits; each part is carved greedily
//! into intervals holding exactly `r` indices outside the candidate set `I`.
//! An interval of size below `4r` is good. A good interval fails when its
//! stage-`t` digits separate it: outside-of-`I` members draw 0 and members of
//! `I` draw 1, leaving a dyadic column rectangle that contains exactly `r`
//! points, none of them in `I`.

use crate::geometry::{Point2, Rect};
use crate::rangespace::RangeSpace;
use crate::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StagedError {
    #[error("digit {0} is not binary")]
    BadDigit(u8),
    #[error("digit rows must all have the same length")]
    RaggedDigits,
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("stage {t} outside the valid range 1..={max}")]
    StageOutOfRange { t: usize, max: usize },
    #[error("two points share their length-{0} truncation; increase the stage count")]
    DuplicateTruncations(usize),
    #[error("point index {index} out of bounds for {n} points")]
    BadIndex { index: usize, n: usize },
    #[error("could not draw distinct truncations after {0} attempts")]
    RetriesExhausted(usize),
}

/// A point set with explicit per-stage binary digits. Point `i` has the
/// `i`-th smallest y-coordinate, fixed to `(i + 1/2)/n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedPointSet {
    n: usize,
    stages: usize,
    /// `digits[i][s]` is the digit of point `i` at stage `s + 1`.
    digits: Vec<Vec<u8>>,
}

impl StagedPointSet {
    /// Draw all digits uniformly and independently from a seeded generator.
    pub fn sample(n: usize, stages: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample_with(n, stages, &mut rng)
    }

    pub fn sample_with(n: usize, stages: usize, rng: &mut impl Rng) -> Self {
        assert!(n >= 2, "need at least two points");
        assert!(stages >= 1, "need at least one stage");
        let digits = (0..n)
            .map(|_| (0..stages).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        StagedPointSet { n, stages, digits }
    }

    pub fn from_digits(digits: Vec<Vec<u8>>) -> Result<Self, StagedError> {
        let n = digits.len();
        if n < 2 {
            return Err(StagedError::TooFewPoints { min: 2, got: n });
        }
        let stages = digits[0].len();
        if stages == 0 {
            return Err(StagedError::StageOutOfRange { t: 0, max: 0 });
        }
        for row in &digits {
            if row.len() != stages {
                return Err(StagedError::RaggedDigits);
            }
            if let Some(&bad) = row.iter().find(|&&d| d > 1) {
                return Err(StagedError::BadDigit(bad));
            }
        }
        Ok(StagedPointSet { n, stages, digits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    /// Digit at 1-based stage `t`.
    pub fn digit(&self, i: usize, t: usize) -> u8 {
        self.digits[i][t - 1]
    }

    pub fn set_digit(&mut self, i: usize, t: usize, bit: u8) {
        assert!(bit <= 1);
        self.digits[i][t - 1] = bit;
    }

    /// Truncation key at stage `t`: the first `t-1` digits packed as an
    /// integer, so the truncation value is `key / 2^(t-1)`.
    fn truncation_key(&self, i: usize, t: usize) -> u64 {
        self.digits[i][..t - 1]
            .iter()
            .fold(0u64, |acc, &d| acc << 1 | d as u64)
    }

    /// The binary fraction of the first `t-1` digits; `t = 1` gives 0 and
    /// `t = stages + 1` the full x-coordinate.
    pub fn truncation(&self, i: usize, t: usize) -> Result<Rational, StagedError> {
        if i >= self.n {
            return Err(StagedError::BadIndex {
                index: i,
                n: self.n,
            });
        }
        if t < 1 || t > self.stages + 1 {
            return Err(StagedError::StageOutOfRange {
                t,
                max: self.stages + 1,
            });
        }
        let key = self.truncation_key(i, t);
        Ok(Rational::from(key as i64) * Rational::pow(2, -(t as i32 - 1)))
    }

    pub fn x_value(&self, i: usize) -> Rational {
        self.truncation(i, self.stages + 1)
            .expect("full truncation is always in range")
    }

    pub fn y_value(&self, i: usize) -> Rational {
        Rational::from(2 * i as i64 + 1) / Rational::from(2 * self.n as i64)
    }

    pub fn point(&self, i: usize) -> Point2 {
        Point2::new(self.x_value(i), self.y_value(i))
    }

    pub fn points(&self) -> Vec<Point2> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Group indices by their stage-`t` truncation, parts ordered by
    /// truncation value. At most `2^(t-1)` nonempty parts.
    pub fn h_partition(&self, t: usize) -> Result<Vec<Part>, StagedError> {
        if t < 1 || t > self.stages {
            return Err(StagedError::StageOutOfRange {
                t,
                max: self.stages,
            });
        }
        let mut keyed: Vec<(u64, usize)> = (0..self.n)
            .map(|i| (self.truncation_key(i, t), i))
            .collect();
        keyed.sort_unstable();
        let mut parts: Vec<Part> = Vec::new();
        for (key, i) in keyed {
            match parts.last_mut() {
                Some(part) if part.key == key => part.members.push(i),
                _ => parts.push(Part {
                    key,
                    truncation: Rational::from(key as i64) * Rational::pow(2, -(t as i32 - 1)),
                    members: vec![i],
                }),
            }
        }
        Ok(parts)
    }

    /// Partition and carve one stage against the candidate set.
    pub fn carve_stage(
        &self,
        t: usize,
        in_set: &[bool],
        r: usize,
    ) -> Result<CarvedStage, StagedError> {
        assert_eq!(in_set.len(), self.n, "candidate mask must cover all points");
        let parts = self.h_partition(t)?;
        let mut intervals = Vec::new();
        for part in &parts {
            for carved in carve_intervals(&part.members, in_set, r) {
                intervals.push(CarvedInterval {
                    part_key: part.key,
                    truncation: part.truncation.clone(),
                    members: carved.0,
                    outside: carved.1,
                });
            }
        }
        Ok(CarvedStage {
            t,
            parts,
            intervals,
        })
    }

    /// The stage-`t` digit pattern that turns an interval into an unhit
    /// witness rectangle: every member outside the set draws 0 and every
    /// member inside draws 1.
    pub fn interval_fails(&self, interval: &CarvedInterval, in_set: &[bool], t: usize) -> bool {
        interval.members.iter().all(|&i| {
            let want = if in_set[i] { 1 } else { 0 };
            self.digit(i, t) == want
        })
    }

    /// Overwrite the stage-`t` digits of the interval's members with the
    /// failure pattern.
    pub fn force_failure(&mut self, interval: &CarvedInterval, in_set: &[bool], t: usize) {
        for &i in &interval.members {
            let bit = if in_set[i] { 1 } else { 0 };
            self.set_digit(i, t, bit);
        }
    }

    /// The dyadic column of the interval's part at stage `t`, spanning the
    /// y-range of its members: `[x, x + 2^-t) x [y_first, y_last]`.
    ///
    /// If the interval failed at stage `t`, this rectangle meets the point
    /// set in exactly the members outside the candidate set.
    pub fn witness_rectangle(&self, interval: &CarvedInterval, t: usize) -> Rect {
        let x = interval.truncation.clone();
        let width = Rational::pow(2, -(t as i32));
        let first = *interval.members.first().expect("intervals are nonempty");
        let last = *interval.members.last().expect("intervals are nonempty");
        Rect::with_sides(
            x.clone(),
            x + width,
            self.y_value(first),
            self.y_value(last),
            [true, false, true, true],
        )
    }

    /// Ranges over the points: for every dyadic column at levels `0..=stages`
    /// and every window of exactly `m` y-consecutive in-column points, one
    /// range. Hitting all windows hits every dyadic rectangle holding at
    /// least `m` points. Requires distinct x-values at full resolution.
    pub fn dyadic_canonical_ranges(&self, m: usize) -> Result<RangeSpace, StagedError> {
        assert!(m >= 1);
        let finest = self.h_partition(self.stages)?;
        // Level `stages` groups by the first `stages - 1` digits; the last
        // digit splits each group, so distinctness needs a direct check.
        for part in &finest {
            let mut last_digits: Vec<u8> = part
                .members
                .iter()
                .map(|&i| self.digit(i, self.stages))
                .collect();
            last_digits.sort_unstable();
            if last_digits.windows(2).any(|w| w[0] == w[1]) {
                return Err(StagedError::DuplicateTruncations(self.stages));
            }
        }
        let mut ranges: Vec<Vec<u32>> = Vec::new();
        for t in 0..=self.stages {
            // Columns of width 2^-t fix the first t digits: the parts of
            // h_partition at stage t + 1.
            let parts = if t == self.stages {
                self.full_resolution_parts()
            } else {
                self.h_partition(t + 1)?
            };
            for part in parts {
                for window in part.members.windows(m) {
                    ranges.push(window.iter().map(|&i| i as u32).collect());
                }
            }
        }
        Ok(RangeSpace::from_incidences(self.n, ranges).expect("window indices are in bounds"))
    }

    fn full_resolution_parts(&self) -> Vec<Part> {
        let mut keyed: Vec<(u64, usize)> = (0..self.n)
            .map(|i| {
                (
                    self.truncation_key(i, self.stages) << 1 | self.digit(i, self.stages) as u64,
                    i,
                )
            })
            .collect();
        keyed.sort_unstable();
        keyed
            .into_iter()
            .map(|(key, i)| Part {
                key,
                truncation: Rational::from(key as i64) * Rational::pow(2, -(self.stages as i32)),
                members: vec![i],
            })
            .collect()
    }
}

/// One part of the stage partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub key: u64,
    pub truncation: Rational,
    pub members: Vec<usize>,
}

/// A carved interval: a contiguous run of part members holding exactly `r`
/// indices outside the candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarvedInterval {
    pub part_key: u64,
    pub truncation: Rational,
    pub members: Vec<usize>,
    pub outside: Vec<usize>,
}

impl CarvedInterval {
    /// Good means small: fewer than `4r` members in total.
    pub fn is_good(&self, r: usize) -> bool {
        self.members.len() < 4 * r
    }
}

/// One fully carved stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarvedStage {
    pub t: usize,
    pub parts: Vec<Part>,
    pub intervals: Vec<CarvedInterval>,
}

/// Interval counts with the proof's three inequalities, checked whenever the
/// preconditions (`|I| <= n/2` and `r * 2^(t+1) <= n`) hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub total: usize,
    pub good: usize,
    pub bad: usize,
    pub checks: Option<CountChecks>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountChecks {
    /// `total > n / (4r)`
    pub total_above_quarter: bool,
    /// `bad <= |I| / (3r)`
    pub bad_within_third: bool,
    /// `good > n / (12r)`
    pub good_above_twelfth: bool,
}

impl CountChecks {
    pub fn all(&self) -> bool {
        self.total_above_quarter && self.bad_within_third && self.good_above_twelfth
    }
}

/// Greedy left-to-right carving: open an interval, close it as soon as it
/// holds exactly `r` members outside the set, repeat; the trailing remainder
/// stays unassigned. Produces exactly `floor(|part outside set| / r)`
/// intervals, each returned as `(members, outside_members)`.
pub fn carve_intervals(part: &[usize], in_set: &[bool], r: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    assert!(r >= 1);
    let mut intervals = Vec::new();
    let mut members = Vec::new();
    let mut outside = Vec::new();
    for &i in part {
        members.push(i);
        if !in_set[i] {
            outside.push(i);
        }
        if outside.len() == r {
            intervals.push((std::mem::take(&mut members), std::mem::take(&mut outside)));
        }
    }
    intervals
}

/// Counts and inequality checks for one carved stage.
pub fn classify_and_count(stage: &CarvedStage, set_size: usize, r: usize, n: usize) -> StageCounts {
    let total = stage.intervals.len();
    let good = stage.intervals.iter().filter(|g| g.is_good(r)).count();
    let bad = total - good;
    let preconditions = 2 * set_size <= n && (r as u128) * (1u128 << (stage.t + 1)) <= n as u128;
    let checks = preconditions.then(|| CountChecks {
        total_above_quarter: 4 * r * total > n,
        bad_within_third: 3 * r * bad <= set_size,
        good_above_twelfth: 12 * r * good > n,
    });
    StageCounts {
        total,
        good,
        bad,
        checks,
    }
}

/// Largest stage `t >= 1` with `r * 2^(t+1) <= n`; 0 when even stage 1 is out
/// of range.
pub fn stage_limit(n: usize, r: usize) -> usize {
    let mut t = 0usize;
    while (r as u128) * (1u128 << (t + 2)) <= n as u128 {
        t += 1;
    }
    t
}

/// Monte Carlo estimate of the probability that the candidate set survives
/// all stages (no good interval fails), against the analytic per-stage bound
/// `(1 - 2^-4r)^(n/12r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub n: usize,
    pub r: usize,
    pub set_size: usize,
    pub trials: u64,
    pub stages: usize,
    pub survived: u64,
    pub survival_frequency: f64,
    pub analytic_stage_bound: f64,
    pub analytic_all_stages_bound: f64,
    /// Three-sigma binomial half-width around the observed frequency.
    pub three_sigma: f64,
    /// Did every simulated stage satisfy the three count inequalities
    /// (whenever their preconditions held)?
    pub count_checks_all_passed: bool,
}

pub fn survival_estimate(
    n: usize,
    r: usize,
    set: &[usize],
    trials: u64,
    seed: u64,
) -> Result<SurvivalReport, StagedError> {
    assert!(r >= 1);
    let mut in_set = vec![false; n];
    for &i in set {
        if i >= n {
            return Err(StagedError::BadIndex { index: i, n });
        }
        in_set[i] = true;
    }
    let stages = stage_limit(n, r);
    let mut survived = 0u64;
    let mut checks_ok = true;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let points = StagedPointSet::sample_with(n, stages.max(1), &mut rng);
        let mut alive = true;
        for t in 1..=stages {
            let stage = points.carve_stage(t, &in_set, r)?;
            let counts = classify_and_count(&stage, set.len(), r, n);
            if let Some(c) = counts.checks {
                checks_ok &= c.all();
            }
            if stage
                .intervals
                .iter()
                .any(|g| g.is_good(r) && points.interval_fails(g, &in_set, t))
            {
                alive = false;
                break;
            }
        }
        if alive {
            survived += 1;
        }
    }
    let freq = survived as f64 / trials.max(1) as f64;
    let stage_bound = (1.0 - 0.5f64.powi(4 * r as i32)).powf(n as f64 / (12.0 * r as f64));
    Ok(SurvivalReport {
        n,
        r,
        set_size: set.len(),
        trials,
        stages,
        survived,
        survival_frequency: freq,
        analytic_stage_bound: stage_bound,
        analytic_all_stages_bound: stage_bound.powi(stages as i32),
        three_sigma: 3.0 * (freq * (1.0 - freq) / trials.max(1) as f64).sqrt(),
        count_checks_all_passed: checks_ok,
    })
}

/// Estimate how often a single interval fails under fresh stage-`t` digits.
pub fn interval_failure_frequency(
    points: &StagedPointSet,
    interval: &CarvedInterval,
    in_set: &[bool],
    t: usize,
    trials: u64,
    seed: u64,
) -> f64 {
    let mut scratch = points.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..trials {
        for &i in &interval.members {
            scratch.set_digit(i, t, rng.gen_range(0..2u8));
        }
        if scratch.interval_fails(interval, in_set, t) {
            failures += 1;
        }
    }
    failures as f64 / trials.max(1) as f64
}

/// Sample a point set with `2 * ceil(log2 n)` stages, redrawing on truncation
/// collisions, and build its window ranges with heaviness count `m = r`. The
/// instance is ready for exact net computation at `eps = r / n`.
pub fn theorem4_instance(
    n: usize,
    r: usize,
    seed: u64,
) -> Result<(StagedPointSet, RangeSpace), StagedError> {
    if n < 4 {
        return Err(StagedError::TooFewPoints { min: 4, got: n });
    }
    assert!(r >= 1);
    let stages = 2 * (usize::BITS - (n - 1).leading_zeros()) as usize;
    const MAX_ATTEMPTS: u64 = 1000;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let points = StagedPointSet::sample_with(n, stages, &mut rng);
        match points.dyadic_canonical_ranges(r) {
            Ok(ranges) => return Ok((points, ranges)),
            Err(StagedError::DuplicateTruncations(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(StagedError::RetriesExhausted(MAX_ATTEMPTS as usize))
}
