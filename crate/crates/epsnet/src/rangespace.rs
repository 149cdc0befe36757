//! Finite range spaces as incidence hypergraphs.
//!
//! A [`RangeSpace`] is a ground set `0..n` together with a canonical list of
//! ranges (index sets). Construction normalizes: each range is sorted and
//! deduplicated, the range list is sorted lexicographically, and equal ranges
//! are merged. All operations are pure; values are immutable once built and
//! safe to share across threads.

use crate::rational::Rational;
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RangeSpaceError {
    #[error("range element {index} out of bounds for ground set of size {ground_size}")]
    IndexOutOfBounds { index: u32, ground_size: usize },
    #[error("{labels} labels for a ground set of size {ground_size}")]
    LabelCountMismatch { labels: usize, ground_size: usize },
}

/// Verdict of an epsilon-net check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetVerdict {
    /// Every heavy range is hit.
    Net,
    /// Some heavy range is missed; carries one such range as a witness.
    Violated(Vec<u32>),
}

impl NetVerdict {
    pub fn is_net(&self) -> bool {
        matches!(self, NetVerdict::Net)
    }

    pub fn witness(&self) -> Option<&[u32]> {
        match self {
            NetVerdict::Net => None,
            NetVerdict::Violated(w) => Some(w),
        }
    }
}

/// A finite range space in canonical form.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct RangeSpace {
    #[serde(rename = "n")]
    ground_size: usize,
    ranges: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for RangeSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "RangeSpace(n={}, ranges={})",
            self.ground_size,
            self.ranges.len()
        )
    }
}

impl RangeSpace {
    /// Build a normalized range space from raw incidence lists.
    pub fn from_incidences(
        ground_size: usize,
        ranges: Vec<Vec<u32>>,
    ) -> Result<Self, RangeSpaceError> {
        let mut normalized: Vec<Vec<u32>> = Vec::with_capacity(ranges.len());
        for mut range in ranges {
            range.sort_unstable();
            range.dedup();
            if let Some(&bad) = range.iter().find(|&&i| (i as usize) >= ground_size) {
                return Err(RangeSpaceError::IndexOutOfBounds {
                    index: bad,
                    ground_size,
                });
            }
            normalized.push(range);
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(RangeSpace {
            ground_size,
            ranges: normalized,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, RangeSpaceError> {
        if labels.len() != self.ground_size {
            return Err(RangeSpaceError::LabelCountMismatch {
                labels: labels.len(),
                ground_size: self.ground_size,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Dual construction: ground set = `shapes`, one range per point listing
    /// the shapes that contain it. Equal ranges collapse.
    pub fn dualize<P, S>(
        points: &[P],
        shapes: &[S],
        contains: impl Fn(&S, &P) -> bool,
    ) -> RangeSpace {
        let ranges = points
            .iter()
            .map(|p| {
                shapes
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| contains(s, p))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        RangeSpace::from_incidences(shapes.len(), ranges)
            .expect("dual incidences are in bounds by construction")
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ranges(&self) -> &[Vec<u32>] {
        &self.ranges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn nonempty_range_count(&self) -> usize {
        self.ranges.iter().filter(|r| !r.is_empty()).count()
    }

    /// Does `|range| >= eps * n` hold, under exact comparison?
    pub fn is_heavy(&self, range_len: usize, eps: &Rational) -> bool {
        Rational::from(range_len) >= eps * &Rational::from(self.ground_size)
    }

    /// The subspace of ranges of size `>= eps * n`, reduced to its
    /// inclusion-minimal members. Empty ranges are never heavy.
    ///
    /// Hitting the minimal heavy ranges is equivalent to hitting all heavy
    /// ranges, so solvers work on the reduced space.
    pub fn heavy_ranges(&self, eps: &Rational) -> RangeSpace {
        assert!(
            eps.is_positive() && *eps <= Rational::one(),
            "eps must be in (0, 1]"
        );
        let heavy: Vec<&Vec<u32>> = self
            .ranges
            .iter()
            .filter(|r| !r.is_empty() && self.is_heavy(r.len(), eps))
            .collect();
        let minimal = inclusion_minimal(&heavy);
        RangeSpace {
            ground_size: self.ground_size,
            ranges: minimal,
            labels: self.labels.clone(),
        }
    }

    /// Check whether `candidate` hits every range of size `>= eps * n`.
    /// On failure returns one violated heavy range.
    pub fn is_epsilon_net(&self, eps: &Rational, candidate: &[u32]) -> NetVerdict {
        assert!(
            eps.is_positive() && *eps <= Rational::one(),
            "eps must be in (0, 1]"
        );
        let mut in_candidate = vec![false; self.ground_size];
        for &i in candidate {
            assert!(
                (i as usize) < self.ground_size,
                "candidate element {i} out of bounds"
            );
            in_candidate[i as usize] = true;
        }
        let threshold = eps * &Rational::from(self.ground_size);
        for range in &self.ranges {
            // Empty ranges are never heavy, even when the threshold is zero.
            if !range.is_empty()
                && Rational::from(range.len()) >= threshold
                && !range.iter().any(|&i| in_candidate[i as usize])
            {
                return NetVerdict::Violated(range.clone());
            }
        }
        NetVerdict::Net
    }

    /// Largest `k <= cap` such that some k-subset of the ground set is
    /// shattered, by brute-force trace collection.
    ///
    /// Ground elements with identical range-membership signatures are
    /// interchangeable for shattering, so only one representative per
    /// signature enters the search.
    pub fn vc_dimension(&self, cap: usize) -> usize {
        if self.ranges.is_empty() || cap == 0 {
            return 0;
        }
        let words = self.ground_size.div_ceil(64);
        let range_bits: Vec<Vec<u64>> = self
            .ranges
            .iter()
            .map(|r| {
                let mut bits = vec![0u64; words];
                for &i in r {
                    bits[i as usize / 64] |= 1 << (i % 64);
                }
                bits
            })
            .collect();

        // One representative element per distinct membership signature.
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        for e in 0..self.ground_size as u32 {
            let sig: Vec<u32> = (0..self.ranges.len() as u32)
                .filter(|&ri| {
                    let bits = &range_bits[ri as usize];
                    bits[e as usize / 64] >> (e % 64) & 1 == 1
                })
                .collect();
            if seen.insert(sig, ()).is_none() {
                reps.push(e);
            }
        }

        let mut dim = 0;
        for k in 1..=cap.min(reps.len()) {
            if self.exists_shattered(&reps, &range_bits, k) {
                dim = k;
            } else {
                break;
            }
        }
        dim
    }

    fn exists_shattered(&self, reps: &[u32], range_bits: &[Vec<u64>], k: usize) -> bool {
        let full: u32 = (1u32 << k) - 1;
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let elems: Vec<u32> = subset.iter().map(|&i| reps[i]).collect();
            let mut seen_patterns = vec![false; 1 << k];
            let mut count: u32 = 0;
            for bits in range_bits {
                let mut pattern = 0usize;
                for (b, &e) in elems.iter().enumerate() {
                    if bits[e as usize / 64] >> (e % 64) & 1 == 1 {
                        pattern |= 1 << b;
                    }
                }
                if !seen_patterns[pattern] {
                    seen_patterns[pattern] = true;
                    count += 1;
                    if count == full + 1 {
                        return true;
                    }
                }
            }
            // Advance to the next k-combination of reps in lexicographic order.
            let mut i = k;
            while i > 0 {
                i -= 1;
                if subset[i] != i + reps.len() - k {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    return false;
                }
            }
        }
    }

    /// Replace every ground element by `t` copies, each range by the union of
    /// the copies of its members. Relabels element `i` to copies
    /// `t*i .. t*i + t - 1`.
    pub fn replicate_ground(&self, t: usize) -> RangeSpace {
        assert!(t >= 1);
        let ranges = self
            .ranges
            .iter()
            .map(|r| {
                r.iter()
                    .flat_map(|&i| (0..t as u32).map(move |j| i * t as u32 + j))
                    .collect()
            })
            .collect();
        RangeSpace::from_incidences(self.ground_size * t, ranges)
            .expect("replicated incidences stay in bounds")
    }
}

/// Keep only ranges with no other listed range as a strict subset.
fn inclusion_minimal(ranges: &[&Vec<u32>]) -> Vec<Vec<u32>> {
    let mut order: Vec<usize> = (0..ranges.len()).collect();
    order
        .sort_unstable_by(|&a, &b| (ranges[a].len(), ranges[a]).cmp(&(ranges[b].len(), ranges[b])));
    let mut kept: Vec<Vec<u32>> = Vec::new();
    // Kept ranges indexed by their smallest element: a subset of `r` must have
    // its own minimum inside `r`, so only those buckets need scanning.
    let mut by_min: HashMap<u32, Vec<usize>> = HashMap::new();
    'cand: for &ri in &order {
        let r = ranges[ri];
        for &e in r {
            if let Some(bucket) = by_min.get(&e) {
                for &ki in bucket {
                    if is_sorted_subset(&kept[ki], r) {
                        continue 'cand;
                    }
                }
            }
        }
        if let Some(&min) = r.first() {
            by_min.entry(min).or_default().push(kept.len());
        }
        kept.push(r.clone());
    }
    kept.sort_unstable();
    kept
}

/// Is sorted `a` a subset of sorted `b`?
fn is_sorted_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut bi = 0;
    'outer: for &x in a {
        while bi < b.len() {
            match b[bi].cmp(&x) {
                std::cmp::Ordering::Less => bi += 1,
                std::cmp::Ordering::Equal => {
                    bi += 1;
                    continue 'outer;
                }
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

impl<'de> Deserialize<'de> for RangeSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            ranges: Vec<Vec<u32>>,
            #[serde(default)]
            labels: Option<Vec<String>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let rs =
            RangeSpace::from_incidences(raw.n, raw.ranges).map_err(serde::de::Error::custom)?;
        match raw.labels {
            Some(labels) => rs.with_labels(labels).map_err(serde::de::Error::custom),
            None => Ok(rs),
        }
    }
}
