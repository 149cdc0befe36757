//! Planar points and axis-parallel rectangles with exact coordinates.

use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point in the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Provenance of a rectangle generated by the grid construction: its level,
/// its two digit strings, and (after a chain blow-up) which copy it is.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectTag {
    pub level: usize,
    pub x_digits: Vec<u32>,
    pub y_digits: Vec<u32>,
    /// 0 for an original family member, 1..=t for chain copies.
    #[serde(default)]
    pub copy: u32,
}

impl RectTag {
    pub fn label(&self) -> String {
        let join = |ds: &[u32]| {
            if ds.is_empty() {
                "-".to_string()
            } else {
                ds.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("")
            }
        };
        let mut s = format!(
            "L{} x={} y={}",
            self.level,
            join(&self.x_digits),
            join(&self.y_digits)
        );
        if self.copy > 0 {
            s.push_str(&format!(" #{}", self.copy));
        }
        s
    }
}

/// An axis-parallel rectangle `(x_lo, x_hi) x (y_lo, y_hi)` where each of the
/// four sides is independently open or closed.
///
/// `closed` lists the sides in the order left, right, bottom, top.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    pub closed: [bool; 4],
    pub tag: Option<RectTag>,
}

impl Rect {
    /// Open rectangle; panics unless `x_lo < x_hi` and `y_lo < y_hi`.
    pub fn open(x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational) -> Self {
        Rect::with_sides(x_lo, x_hi, y_lo, y_hi, [false; 4])
    }

    /// Closed rectangle.
    pub fn closed(x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational) -> Self {
        Rect::with_sides(x_lo, x_hi, y_lo, y_hi, [true; 4])
    }

    /// A zero-extent side is allowed only when closed on both ends (a
    /// segment), which the single-point witness rectangles need.
    pub fn with_sides(
        x_lo: Rational,
        x_hi: Rational,
        y_lo: Rational,
        y_hi: Rational,
        closed: [bool; 4],
    ) -> Self {
        let x_ok = x_lo < x_hi || (x_lo == x_hi && closed[0] && closed[1]);
        let y_ok = y_lo < y_hi || (y_lo == y_hi && closed[2] && closed[3]);
        assert!(x_ok && y_ok, "degenerate rectangle");
        Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            closed,
            tag: None,
        }
    }

    pub fn with_tag(mut self, tag: RectTag) -> Self {
        self.tag = Some(tag);
        self
    }

    /// Exact membership, honoring the per-side flags.
    pub fn contains(&self, p: &Point2) -> bool {
        let lo_ok = |v: &Rational, lo: &Rational, closed: bool| {
            if closed {
                v >= lo
            } else {
                v > lo
            }
        };
        let hi_ok = |v: &Rational, hi: &Rational, closed: bool| {
            if closed {
                v <= hi
            } else {
                v < hi
            }
        };
        lo_ok(&p.x, &self.x_lo, self.closed[0])
            && hi_ok(&p.x, &self.x_hi, self.closed[1])
            && lo_ok(&p.y, &self.y_lo, self.closed[2])
            && hi_ok(&p.y, &self.y_hi, self.closed[3])
    }

    pub fn area(&self) -> Rational {
        (&self.x_hi - &self.x_lo) * (&self.y_hi - &self.y_lo)
    }

    /// Translate by `(offset, offset)` and close all four sides.
    pub fn translated_closed(&self, offset: &Rational) -> Rect {
        Rect {
            x_lo: &self.x_lo + offset,
            x_hi: &self.x_hi + offset,
            y_lo: &self.y_lo + offset,
            y_hi: &self.y_hi + offset,
            closed: [true; 4],
            tag: self.tag.clone(),
        }
    }

    /// Is the corner-point of `other`'s closure strictly inside this
    /// rectangle's open interior?
    pub fn interior_contains(&self, p: &Point2) -> bool {
        p.x > self.x_lo && p.x < self.x_hi && p.y > self.y_lo && p.y < self.y_hi
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x_lo.clone(), self.y_lo.clone()),
            Point2::new(self.x_lo.clone(), self.y_hi.clone()),
            Point2::new(self.x_hi.clone(), self.y_lo.clone()),
            Point2::new(self.x_hi.clone(), self.y_hi.clone()),
        ]
    }

    /// Do the open interiors intersect?
    pub fn interiors_intersect(&self, other: &Rect) -> bool {
        self.x_lo < other.x_hi
            && other.x_lo < self.x_hi
            && self.y_lo < other.y_hi
            && other.y_lo < self.y_hi
    }
}

impl fmt::Debug for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |closed: bool, open_ch: char, closed_ch: char| {
            if closed {
                closed_ch
            } else {
                open_ch
            }
        };
        write!(
            f,
            "{}{}, {}{} x {}{}, {}{}",
            b(self.closed[0], '(', '['),
            self.x_lo,
            self.x_hi,
            b(self.closed[1], ')', ']'),
            b(self.closed[2], '(', '['),
            self.y_lo,
            self.y_hi,
            b(self.closed[3], ')', ']'),
        )
    }
}
