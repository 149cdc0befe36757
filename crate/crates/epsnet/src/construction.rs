//! The deterministic grid-aligned rectangle families.
//!
//! For parameters `c >= 2`, `d >= 1` the family contains, for every level
//! `0 <= k <= d` and every pair of digit strings `u` (length `k`) and `v`
//! (length `d - k`) over `{0..c-1}` whose last digits agree (an absent last
//! digit counts as 0), the open rectangle
//!
//! ```text
//!   (u*, u* + c^-k) x (v*, v* + c^(k-d))
//! ```
//!
//! where `u*`, `v*` are the base-`c` fractional values of the strings. All
//! members have area exactly `c^-d`, the family has `(d+1) * c^(d-1)`
//! members, and its dual range space (over the cell-center witness grid)
//! forces epsilon-nets of size at least half the family.

use crate::geometry::{Point2, Rect, RectTag};
use crate::rangespace::RangeSpace;
use crate::rational::Rational;
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("digit {digit} out of range for base {base}")]
    BadDigit { digit: u32, base: u32 },
    #[error("digit string of length {got} where {expected} was required")]
    LengthMismatch { expected: usize, got: usize },
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("depth must be at least 1, got {0}")]
    InvalidDepth(u32),
    #[error("level {level} exceeds depth {d}")]
    LevelOutOfRange { level: usize, d: u32 },
    #[error("witness grid {c}^{d} per axis does not fit in 31 bits")]
    GridOverflow { c: u32, d: u32 },
    #[error("independence bound undefined for c = {0} (division by c - 2)")]
    BoundUndefined(u32),
    #[error("eps must satisfy 0 < eps < 1/64, got {0}")]
    EpsOutOfRange(String),
    #[error("chain multiplier must be at least 1")]
    BadMultiplier,
    #[error("the index set is not {r}-independent")]
    NotIndependent { r: usize },
    #[error("index {index} out of bounds for a family of {len} rectangles")]
    BadIndex { index: u32, len: usize },
}

/// A digit string over `{0..base-1}`; the empty string evaluates to 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u32,
    digits: Vec<u32>,
}

impl DigitString {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self, ConstructionError> {
        if base < 2 {
            return Err(ConstructionError::InvalidBase(base));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= base) {
            return Err(ConstructionError::BadDigit { digit: bad, base });
        }
        Ok(DigitString { base, digits })
    }

    pub fn empty(base: u32) -> Self {
        DigitString {
            base,
            digits: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Last digit, with the convention that an empty string yields 0.
    pub fn last_digit_or_zero(&self) -> u32 {
        self.digits.last().copied().unwrap_or(0)
    }

    /// The base-`c` fraction `sum_j digits[j] / c^(j+1)`.
    pub fn value(&self) -> Rational {
        let mut acc = Rational::zero();
        for (j, &digit) in self.digits.iter().enumerate() {
            acc = acc
                + Rational::from(digit as i64) * Rational::pow(self.base as i64, -(j as i32) - 1);
        }
        acc
    }
}

/// Build one open rectangle of the construction from its level and digit
/// strings. `u` must have length `k` and `v` length `d - k`.
pub fn build_rect(
    k: usize,
    u: &DigitString,
    v: &DigitString,
    c: u32,
    d: u32,
) -> Result<Rect, ConstructionError> {
    if c < 2 {
        return Err(ConstructionError::InvalidBase(c));
    }
    if d < 1 {
        return Err(ConstructionError::InvalidDepth(d));
    }
    if k > d as usize {
        return Err(ConstructionError::LevelOutOfRange { level: k, d });
    }
    if u.len() != k {
        return Err(ConstructionError::LengthMismatch {
            expected: k,
            got: u.len(),
        });
    }
    if v.len() != d as usize - k {
        return Err(ConstructionError::LengthMismatch {
            expected: d as usize - k,
            got: v.len(),
        });
    }
    let x_lo = u.value();
    let x_hi = &x_lo + &Rational::pow(c as i64, -(k as i32));
    let y_lo = v.value();
    let y_hi = &y_lo + &Rational::pow(c as i64, k as i32 - d as i32);
    Ok(Rect::open(x_lo, x_hi, y_lo, y_hi).with_tag(RectTag {
        level: k,
        x_digits: u.digits().to_vec(),
        y_digits: v.digits().to_vec(),
        copy: 0,
    }))
}

/// Which dual hyperedges disqualify an index set from independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndependenceMode {
    /// No witness realizes a hyperedge of size `>= r` inside the set. This is
    /// the reading under which "eps * n < r implies the complement of a net is
    /// independent" is sound, and the default everywhere.
    #[default]
    AtLeastR,
    /// Only hyperedges of size exactly `r` disqualify.
    ExactlyR,
}

/// The full rectangle family for parameters `(c, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    c: u32,
    d: u32,
    rects: Vec<Rect>,
}

/// Enumerate all digit strings of the given length in lexicographic order.
fn for_each_string(c: u32, len: usize, mut f: impl FnMut(&[u32])) {
    let mut digits = vec![0u32; len];
    loop {
        f(&digits);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < c {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Construct the family; `(d+1) * c^(d-1)` rectangles in a deterministic
/// order (by level, then by digit strings).
pub fn build_family(c: u32, d: u32) -> Result<Family, ConstructionError> {
    if c < 2 {
        return Err(ConstructionError::InvalidBase(c));
    }
    if d < 1 {
        return Err(ConstructionError::InvalidDepth(d));
    }
    let mut rects = Vec::new();
    let mut push = |k: usize, u: &[u32], v: &[u32]| {
        let us = DigitString::new(c, u.to_vec()).expect("digits in range");
        let vs = DigitString::new(c, v.to_vec()).expect("digits in range");
        rects.push(build_rect(k, &us, &vs, c, d).expect("valid by enumeration"));
    };
    for k in 0..=d as usize {
        if k == 0 {
            // u is empty, so v must end in 0.
            for_each_string(c, d as usize - 1, |prefix| {
                let mut v = prefix.to_vec();
                v.push(0);
                push(0, &[], &v);
            });
        } else if k == d as usize {
            for_each_string(c, d as usize - 1, |prefix| {
                let mut u = prefix.to_vec();
                u.push(0);
                push(k, &u, &[]);
            });
        } else {
            for_each_string(c, k, |u| {
                let last = u[k - 1];
                for_each_string(c, d as usize - k - 1, |vpre| {
                    let mut v = vpre.to_vec();
                    v.push(last);
                    push(k, u, &v);
                });
            });
        }
    }
    Ok(Family { c, d, rects })
}

impl Family {
    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Side length of the witness grid: `c^d` cells per axis.
    pub fn grid(&self) -> Result<i64, ConstructionError> {
        grid_size(self.c, self.d)
    }

    /// The `(c^d)^2` cell centers `((2i+1)/(2c^d), (2j+1)/(2c^d))`. Every
    /// arrangement cell of the family contains one of them, so every
    /// realizable dual hyperedge is realized here.
    pub fn witness_points(&self) -> Vec<Point2> {
        let g = self.grid().expect("grid bounded at construction scale");
        let two_g = Rational::from(2 * g);
        let mut pts = Vec::with_capacity((g * g) as usize);
        for i in 0..g {
            for j in 0..g {
                pts.push(Point2::new(
                    Rational::from(2 * i + 1) / &two_g,
                    Rational::from(2 * j + 1) / &two_g,
                ));
            }
        }
        pts
    }

    /// Incidences between this family's rectangles and the witness grid.
    pub fn dual_incidences(&self) -> Result<DualIncidences, ConstructionError> {
        DualIncidences::over_grid(&self.rects, self.c, self.d)
    }

    /// The dual range space: ground set = rectangles, one hyperedge per
    /// witness cell listing the rectangles covering it, deduplicated.
    pub fn dual_space(&self) -> Result<RangeSpace, ConstructionError> {
        Ok(self.dual_incidences()?.range_space())
    }

    /// The primal range space over the witness grid: ground set = witness
    /// cells (row-major), one range per rectangle.
    pub fn primal_space(&self) -> Result<RangeSpace, ConstructionError> {
        let inc = self.dual_incidences()?;
        Ok(inc.primal_space())
    }

    /// Partition of the level `1..d-1` rectangles into groups of `c`
    /// siblings: members sharing everything but the common last digit of
    /// their two strings. Level 0 and level d rectangles have no siblings.
    pub fn sibling_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: HashMap<(usize, Vec<u32>, Vec<u32>), Vec<usize>> = HashMap::new();
        for (idx, rect) in self.rects.iter().enumerate() {
            let tag = rect.tag.as_ref().expect("family rectangles are tagged");
            if tag.level == 0 || tag.level == self.d as usize {
                continue;
            }
            let key = (
                tag.level,
                tag.x_digits[..tag.x_digits.len() - 1].to_vec(),
                tag.y_digits[..tag.y_digits.len() - 1].to_vec(),
            );
            groups.entry(key).or_default().push(idx);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        for g in &mut out {
            g.sort_unstable();
        }
        out.sort_unstable();
        out
    }

    /// The rectangles outside `set` all of whose `c - 1` siblings lie inside
    /// `set`. Rectangles with no siblings are never bad.
    pub fn bad_rectangles(&self, set: &[u32]) -> Vec<u32> {
        let members: HashSet<u32> = set.iter().copied().collect();
        let mut bad = Vec::new();
        for group in self.sibling_groups() {
            for &idx in &group {
                let idx32 = idx as u32;
                if !members.contains(&idx32)
                    && group
                        .iter()
                        .all(|&s| s == idx || members.contains(&(s as u32)))
                {
                    bad.push(idx32);
                }
            }
        }
        bad.sort_unstable();
        bad
    }

    /// Does no witness cell realize a disqualifying hyperedge inside `set`?
    /// On failure returns the witness cell center and its hyperedge.
    pub fn is_r_independent(
        &self,
        set: &[u32],
        r: usize,
        mode: IndependenceMode,
    ) -> Result<IndependenceVerdict, ConstructionError> {
        let inc = self.dual_incidences()?;
        inc.check_independent(self.len(), set, r, mode)
    }

    /// Check `|I| <= (r-1)|B| + (r-1)c^(d-1)` for an r-independent `I`,
    /// where `B` is the bad set for `I`.
    pub fn verify_inequality_x(
        &self,
        set: &[u32],
        r: usize,
        mode: IndependenceMode,
    ) -> Result<bool, ConstructionError> {
        match self.is_r_independent(set, r, mode)? {
            IndependenceVerdict::Independent => {}
            IndependenceVerdict::Dependent { .. } => {
                return Err(ConstructionError::NotIndependent { r });
            }
        }
        let bad = self.bad_rectangles(set);
        let r = r as i128;
        let lhs = set.len() as i128;
        let rhs = (r - 1) * bad.len() as i128 + (r - 1) * (self.c as i128).pow(self.d - 1);
        Ok(lhs <= rhs)
    }

    /// Replace each rectangle by a nested chain of `t` near-copies, ordered
    /// by the projection order. Copy `i` (1-based) shrinks the x-sides inward
    /// by `(t-i) * delta` and the y-sides by `(i-1) * delta`, with
    /// `delta = c^-d / (4t)`: small enough that every witness cell center
    /// keeps its memberships, so depth at each witness multiplies by `t`.
    pub fn chain_blowup(&self, t: usize) -> Result<Vec<Rect>, ConstructionError> {
        if t == 0 {
            return Err(ConstructionError::BadMultiplier);
        }
        let delta = Rational::pow(self.c as i64, -(self.d as i32)) / Rational::from(4 * t as i64);
        let mut out = Vec::with_capacity(self.rects.len() * t);
        for rect in &self.rects {
            for i in 1..=t {
                let dx = Rational::from((t - i) as i64) * &delta;
                let dy = Rational::from((i - 1) as i64) * &delta;
                let mut copy = Rect::open(
                    &rect.x_lo + &dx,
                    &rect.x_hi - &dx,
                    &rect.y_lo + &dy,
                    &rect.y_hi - &dy,
                );
                copy.tag = rect.tag.clone().map(|mut tag| {
                    tag.copy = i as u32;
                    tag
                });
                out.push(copy);
            }
        }
        Ok(out)
    }
}

/// `(r-1) * (c-1)/(c-2) * c^(d-1)`: the proven ceiling on the size of any
/// r-independent subfamily.
pub fn max_independent_bound(c: u32, d: u32, r: usize) -> Result<Rational, ConstructionError> {
    if c <= 2 {
        return Err(ConstructionError::BoundUndefined(c));
    }
    if d < 1 {
        return Err(ConstructionError::InvalidDepth(d));
    }
    assert!(r >= 2, "independence bound needs r >= 2");
    Ok(Rational::from(r as i64 - 1)
        * Rational::new(c as i64 - 1, c as i64 - 2)
        * Rational::pow(c as i64, d as i32 - 1))
}

/// Schedule parameters derived from the target threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theorem1Params {
    pub r: usize,
    pub c: u32,
    pub d: u32,
}

/// For `0 < eps < 2^-6`: the smallest `r` with `eps >= 2^-6r` (so `r >= 2`),
/// `c = 4`, `d = 3r - 4`. Guarantees `eps * (d+1) * c^(d-1) < r`.
pub fn theorem1_parameters(eps: &Rational) -> Result<Theorem1Params, ConstructionError> {
    if !eps.is_positive() || *eps >= Rational::pow(2, -6) {
        return Err(ConstructionError::EpsOutOfRange(eps.to_string()));
    }
    let mut r = 1usize;
    while *eps < Rational::pow(2, -6 * r as i32) {
        r += 1;
    }
    let c = 4u32;
    let d = 3 * r as u32 - 4;
    let family_size = Rational::from(d as i64 + 1) * Rational::pow(c as i64, d as i32 - 1);
    assert!(
        eps * &family_size < Rational::from(r as i64),
        "schedule must keep eps * |family| below r"
    );
    Ok(Theorem1Params { r, c, d })
}

/// `a` precedes `b` when the x-projection of `a`'s closure is contained in
/// `b`'s and the y-projection contains `b`'s. Intersecting family members are
/// always comparable under this order.
pub fn precedes(a: &Rect, b: &Rect) -> bool {
    a.x_lo >= b.x_lo && a.x_hi <= b.x_hi && a.y_lo <= b.y_lo && a.y_hi >= b.y_hi
}

/// Outcome of an independence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceVerdict {
    Independent,
    Dependent {
        witness: Point2,
        hyperedge: Vec<u32>,
    },
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent)
    }
}

/// Exact incidences between a rectangle list and the `c^d` by `c^d` witness
/// grid, stored sparsely per covered cell.
///
/// Each rectangle covers a contiguous block of cells, so incidences are
/// enumerated rectangle by rectangle and bucketed by cell; no per-pair
/// membership tests are ever run.
pub struct DualIncidences {
    grid: i64,
    /// Sorted by cell key (row-major: `x_index * grid + y_index`); each entry
    /// is a covered cell with its sorted list of covering rectangles.
    cells: Vec<(i64, Vec<u32>)>,
    ground: usize,
}

fn grid_size(c: u32, d: u32) -> Result<i64, ConstructionError> {
    let g = (c as i64).checked_pow(d);
    match g {
        Some(g) if g < (1 << 31) => Ok(g),
        _ => Err(ConstructionError::GridOverflow { c, d }),
    }
}

/// The cell indices `i` whose centers `(i + 1/2)/grid` lie strictly inside
/// `(lo, hi)`, as a half-open span clamped to `[0, grid)`.
fn cell_span(lo: &Rational, hi: &Rational, grid: i64) -> (i64, i64) {
    let half = Rational::new(1, 2);
    let g = Rational::from(grid);
    let start = (lo * &g - &half)
        .floor_i64()
        .expect("grid coordinates fit in i64")
        + 1;
    let end = (hi * &g - &half)
        .ceil_i64()
        .expect("grid coordinates fit in i64");
    (start.max(0), end.min(grid))
}

impl DualIncidences {
    /// Incidences of arbitrary rectangles (all four sides open) against the
    /// `(c, d)` witness grid. Cell centers never lie on a boundary of any
    /// family or blown-up rectangle, so open/closed flags cannot matter here.
    pub fn over_grid(rects: &[Rect], c: u32, d: u32) -> Result<Self, ConstructionError> {
        let grid = grid_size(c, d)?;
        let mut pairs: Vec<(i64, u32)> = Vec::new();
        for (idx, rect) in rects.iter().enumerate() {
            let (x0, x1) = cell_span(&rect.x_lo, &rect.x_hi, grid);
            let (y0, y1) = cell_span(&rect.y_lo, &rect.y_hi, grid);
            for i in x0..x1 {
                for j in y0..y1 {
                    pairs.push((i * grid + j, idx as u32));
                }
            }
        }
        pairs.sort_unstable();
        let mut cells: Vec<(i64, Vec<u32>)> = Vec::new();
        for (key, idx) in pairs {
            match cells.last_mut() {
                Some((k, members)) if *k == key => members.push(idx),
                _ => cells.push((key, vec![idx])),
            }
        }
        Ok(DualIncidences {
            grid,
            cells,
            ground: rects.len(),
        })
    }

    pub fn grid(&self) -> i64 {
        self.grid
    }

    pub fn covered_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_center(&self, key: i64) -> Point2 {
        let (i, j) = (key / self.grid, key % self.grid);
        let two_g = Rational::from(2 * self.grid);
        Point2::new(
            Rational::from(2 * i + 1) / &two_g,
            Rational::from(2 * j + 1) / &two_g,
        )
    }

    /// Depth of each covered cell's hyperedge, keyed by cell.
    pub fn cells(&self) -> &[(i64, Vec<u32>)] {
        &self.cells
    }

    /// Deduplicated dual hyperedges as a range space over the rectangles.
    /// An empty hyperedge is included when some cell is uncovered.
    pub fn range_space(&self) -> RangeSpace {
        let mut distinct: HashSet<&[u32]> = HashSet::new();
        for (_, members) in &self.cells {
            distinct.insert(members);
        }
        let mut ranges: Vec<Vec<u32>> = distinct.into_iter().map(|r| r.to_vec()).collect();
        if (self.cells.len() as i64) < self.grid * self.grid {
            ranges.push(Vec::new());
        }
        RangeSpace::from_incidences(self.ground, ranges)
            .expect("incidence indices are in bounds by construction")
    }

    /// The primal space: ground = all grid cells (row-major), one range per
    /// rectangle listing the cells it covers.
    pub fn primal_space(&self) -> RangeSpace {
        assert!(
            self.grid * self.grid <= u32::MAX as i64,
            "primal ground set must fit 32-bit element ids"
        );
        let n = (self.grid * self.grid) as usize;
        let mut ranges: Vec<Vec<u32>> = vec![Vec::new(); self.ground];
        for (key, members) in &self.cells {
            for &m in members {
                ranges[m as usize].push(*key as u32);
            }
        }
        RangeSpace::from_incidences(n, ranges).expect("cell keys fit the ground set")
    }

    /// Independence of `set` against the witnessed hyperedges.
    pub fn check_independent(
        &self,
        ground: usize,
        set: &[u32],
        r: usize,
        mode: IndependenceMode,
    ) -> Result<IndependenceVerdict, ConstructionError> {
        let mut members = vec![false; ground];
        for &i in set {
            if i as usize >= ground {
                return Err(ConstructionError::BadIndex {
                    index: i,
                    len: ground,
                });
            }
            members[i as usize] = true;
        }
        for (key, edge) in &self.cells {
            let size_ok = match mode {
                IndependenceMode::AtLeastR => edge.len() >= r,
                IndependenceMode::ExactlyR => edge.len() == r,
            };
            if size_ok && edge.iter().all(|&i| members[i as usize]) {
                return Ok(IndependenceVerdict::Dependent {
                    witness: self.cell_center(*key),
                    hyperedge: edge.clone(),
                });
            }
        }
        Ok(IndependenceVerdict::Independent)
    }
}

/// Dual range space of an arbitrary rectangle list over the `(c, d)` witness
/// grid, with ground labels taken from the rectangle tags.
pub fn dual_space_over_grid(
    rects: &[Rect],
    c: u32,
    d: u32,
) -> Result<RangeSpace, ConstructionError> {
    let space = DualIncidences::over_grid(rects, c, d)?.range_space();
    let labels = rects
        .iter()
        .enumerate()
        .map(|(i, r)| r.tag.as_ref().map_or(format!("r{i}"), |t| t.label()))
        .collect();
    Ok(space.with_labels(labels).expect("one label per rectangle"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ds(base: u32, digits: &[u32]) -> DigitString {
        DigitString::new(base, digits.to_vec()).unwrap()
    }

    #[test]
    fn fraction_values() {
        assert_eq!(DigitString::empty(3).value(), Rational::zero());
        assert_eq!(ds(4, &[1, 2]).value(), rat(3, 8));
        assert_eq!(ds(3, &[2, 2]).value(), rat(8, 9));
    }

    #[test]
    fn bad_digits_rejected() {
        assert!(matches!(
            DigitString::new(3, vec![0, 3]),
            Err(ConstructionError::BadDigit { digit: 3, base: 3 })
        ));
    }

    #[test]
    fn rect_formula() {
        let r0 = build_rect(0, &DigitString::empty(3), &ds(3, &[0]), 3, 1).unwrap();
        assert_eq!(
            (
                r0.x_lo.clone(),
                r0.x_hi.clone(),
                r0.y_lo.clone(),
                r0.y_hi.clone()
            ),
            (rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 3))
        );
        let r1 = build_rect(1, &ds(3, &[0]), &DigitString::empty(3), 3, 1).unwrap();
        assert_eq!(
            (
                r1.x_lo.clone(),
                r1.x_hi.clone(),
                r1.y_lo.clone(),
                r1.y_hi.clone()
            ),
            (rat(0, 1), rat(1, 3), rat(0, 1), rat(1, 1))
        );
        let r = build_rect(1, &ds(4, &[2]), &ds(4, &[2]), 4, 2).unwrap();
        assert_eq!(
            (
                r.x_lo.clone(),
                r.x_hi.clone(),
                r.y_lo.clone(),
                r.y_hi.clone()
            ),
            (rat(1, 2), rat(3, 4), rat(1, 2), rat(3, 4))
        );
        assert_eq!(r.area(), rat(1, 16));
        assert!(build_rect(1, &ds(3, &[0, 1]), &DigitString::empty(3), 3, 1).is_err());
    }

    #[test]
    fn family_sizes() {
        assert_eq!(build_family(4, 2).unwrap().len(), 12);
        assert_eq!(build_family(3, 1).unwrap().len(), 2);
        assert_eq!(build_family(4, 5).unwrap().len(), 1536);
    }

    #[test]
    fn family_of_depth_one() {
        let f = build_family(3, 1).unwrap();
        let coords: Vec<_> = f
            .rects()
            .iter()
            .map(|r| {
                (
                    r.x_lo.clone(),
                    r.x_hi.clone(),
                    r.y_lo.clone(),
                    r.y_hi.clone(),
                )
            })
            .collect();
        assert_eq!(
            coords,
            vec![
                (rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 3)),
                (rat(0, 1), rat(1, 3), rat(0, 1), rat(1, 1)),
            ]
        );
    }

    #[test]
    fn sibling_groups_by_level() {
        assert!(build_family(3, 1).unwrap().sibling_groups().is_empty());
        let g42 = build_family(4, 2).unwrap().sibling_groups();
        assert_eq!(g42.len(), 1);
        assert_eq!(g42[0].len(), 4);
        let f33 = build_family(3, 3).unwrap();
        let g33 = f33.sibling_groups();
        assert_eq!(g33.len(), 6);
        assert!(g33.iter().all(|g| g.len() == 3));
        for level in [1usize, 2] {
            let count = g33
                .iter()
                .filter(|g| f33.rects()[g[0]].tag.as_ref().unwrap().level == level)
                .count();
            assert_eq!(count, 3);
        }
    }

    #[test]
    fn projection_order() {
        let f = build_family(3, 1).unwrap();
        let (narrow, wide) = (&f.rects()[1], &f.rects()[0]);
        assert!(precedes(narrow, wide));
        assert!(!precedes(wide, narrow));
        assert!(precedes(narrow, narrow));
        let a = Rect::open(rat(0, 1), rat(1, 4), rat(0, 1), rat(1, 1));
        let b = Rect::open(rat(1, 2), rat(3, 4), rat(0, 1), rat(1, 1));
        assert!(!precedes(&a, &b) && !precedes(&b, &a));
    }

    #[test]
    fn witness_grid() {
        let f = build_family(3, 1).unwrap();
        let pts = f.witness_points();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], Point2::new(rat(1, 6), rat(1, 6)));
        assert!(f.rects().iter().all(|r| r.contains(&pts[0])));
        assert_eq!(build_family(4, 2).unwrap().witness_points().len(), 256);
    }

    #[test]
    fn dual_space_depth_one() {
        let f = build_family(3, 1).unwrap();
        let dual = f.dual_space().unwrap();
        assert_eq!(dual.ground_size(), 2);
        assert_eq!(dual.ranges(), &[vec![], vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn dual_space_matches_pointwise_dualization() {
        for (c, d) in [(3u32, 1u32), (3, 2), (4, 2)] {
            let f = build_family(c, d).unwrap();
            let fast = f.dual_space().unwrap();
            let slow = RangeSpace::dualize(&f.witness_points(), f.rects(), |r, p| r.contains(p));
            assert_eq!(fast.ranges(), slow.ranges(), "mismatch at ({c},{d})");
        }
    }

    #[test]
    fn dual_depth_is_at_most_levels() {
        let f = build_family(4, 2).unwrap();
        let dual = f.dual_space().unwrap();
        assert_eq!(dual.ground_size(), 12);
        let max = dual.ranges().iter().map(|r| r.len()).max().unwrap();
        assert_eq!(max, 3);
    }

    #[test]
    fn independent_bound_values() {
        assert_eq!(max_independent_bound(4, 2, 2).unwrap(), rat(6, 1));
        assert_eq!(max_independent_bound(3, 3, 2).unwrap(), rat(18, 1));
        assert_eq!(max_independent_bound(4, 5, 3).unwrap(), rat(768, 1));
        assert!(max_independent_bound(2, 3, 2).is_err());
    }

    #[test]
    fn independence_checks() {
        let f = build_family(3, 1).unwrap();
        let empty: &[u32] = &[];
        assert!(f
            .is_r_independent(empty, 2, IndependenceMode::AtLeastR)
            .unwrap()
            .is_independent());
        match f
            .is_r_independent(&[0, 1], 2, IndependenceMode::AtLeastR)
            .unwrap()
        {
            IndependenceVerdict::Dependent { witness, hyperedge } => {
                assert_eq!(witness, Point2::new(rat(1, 6), rat(1, 6)));
                assert_eq!(hyperedge, vec![0, 1]);
            }
            IndependenceVerdict::Independent => panic!("both rectangles share a cell"),
        }
        assert!(f
            .is_r_independent(&[0], 2, IndependenceMode::AtLeastR)
            .unwrap()
            .is_independent());
    }

    #[test]
    fn bad_rectangles_rules() {
        let f = build_family(4, 2).unwrap();
        assert!(f.bad_rectangles(&[]).is_empty());
        let level1: Vec<u32> = f
            .rects()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.tag.as_ref().unwrap().level == 1)
            .map(|(i, _)| i as u32)
            .collect();
        assert_eq!(level1.len(), 4);
        let all_but_one: Vec<u32> = level1[1..].to_vec();
        assert_eq!(f.bad_rectangles(&all_but_one), vec![level1[0]]);
        let full: Vec<u32> = (0..f.len() as u32).collect();
        assert!(f.bad_rectangles(&full).is_empty());
    }

    #[test]
    fn inequality_certificate() {
        let f = build_family(4, 2).unwrap();
        assert!(f
            .verify_inequality_x(&[], 2, IndependenceMode::AtLeastR)
            .unwrap());
        let full: Vec<u32> = (0..f.len() as u32).collect();
        assert!(matches!(
            f.verify_inequality_x(&full, 2, IndependenceMode::AtLeastR),
            Err(ConstructionError::NotIndependent { r: 2 })
        ));
    }

    #[test]
    fn schedule_parameters() {
        let p = theorem1_parameters(&Rational::pow(2, -7)).unwrap();
        assert_eq!((p.r, p.c, p.d), (2, 4, 2));
        let p = theorem1_parameters(&Rational::pow(2, -13)).unwrap();
        assert_eq!((p.r, p.c, p.d), (3, 4, 5));
        let p = theorem1_parameters(&Rational::pow(2, -12)).unwrap();
        assert_eq!((p.r, p.c, p.d), (2, 4, 2));
        assert!(theorem1_parameters(&rat(1, 64)).is_err());
        assert!(theorem1_parameters(&rat(1, 2)).is_err());
        assert!(theorem1_parameters(&rat(0, 1)).is_err());
    }

    #[test]
    fn blowup_identity_at_one() {
        let f = build_family(3, 1).unwrap();
        let blown = f.chain_blowup(1).unwrap();
        for (orig, copy) in f.rects().iter().zip(&blown) {
            assert_eq!(orig.x_lo, copy.x_lo);
            assert_eq!(orig.x_hi, copy.x_hi);
            assert_eq!(orig.y_lo, copy.y_lo);
            assert_eq!(orig.y_hi, copy.y_hi);
        }
        assert!(f.chain_blowup(0).is_err());
    }

    #[test]
    fn blowup_multiplies_depth() {
        let f = build_family(3, 1).unwrap();
        let blown = f.chain_blowup(2).unwrap();
        let witness = Point2::new(rat(1, 6), rat(1, 6));
        let depth = blown.iter().filter(|r| r.contains(&witness)).count();
        assert_eq!(depth, 4);
    }

    #[test]
    fn blowup_chains_are_ordered_and_nested_in_the_parent() {
        let f = build_family(4, 2).unwrap();
        let t = 3;
        let blown = f.chain_blowup(t).unwrap();
        for (parent, chain) in f.rects().iter().zip(blown.chunks(t)) {
            for w in chain.windows(2) {
                assert!(precedes(&w[0], &w[1]));
                assert!(!precedes(&w[1], &w[0]));
            }
            for copy in chain {
                assert!(copy.x_lo >= parent.x_lo && copy.x_hi <= parent.x_hi);
                assert!(copy.y_lo >= parent.y_lo && copy.y_hi <= parent.y_hi);
            }
        }
    }
}
