//! Instance files: the JSON interchange format tying generators to solvers.
//!
//! Every file carries a `version`, a `kind` tag, the kind-specific geometry
//! with exact rationals as `{"num", "den"}` string pairs, and optionally a
//! precomputed range space. Files round-trip losslessly.

use crate::construction::{build_family, dual_space_over_grid, ConstructionError};
use crate::duality::{
    box_incidence_space, halfspace_incidence_space, query_box, rect_to_point4, shift_rects,
    theorem3_from_rects, CornerBox, DualityError, HalfSpace, PointD,
};
use crate::geometry::{Point2, Rect};
use crate::rangespace::RangeSpace;
use crate::rational::Rational;
use crate::staged::{StagedError, StagedPointSet};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("unsupported instance version {0} (this build reads version {FORMAT_VERSION})")]
    Version(u32),
    #[error("operation {op} does not apply to a {kind} instance")]
    WrongKind { op: &'static str, kind: String },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Staged(#[from] StagedError),
}

/// Kind-specific payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstancePayload {
    /// The deterministic family for parameters `(c, d)`.
    Pat { c: u32, d: u32, rects: Vec<Rect> },
    /// The family after a chain blow-up by `t`.
    PatBlowup {
        c: u32,
        d: u32,
        t: usize,
        rects: Vec<Rect>,
    },
    /// Points in 4-space against origin-cornered boxes.
    Dual4 {
        points: Vec<PointD>,
        boxes: Vec<CornerBox>,
    },
    /// Points in 4-space against half-spaces.
    Halfspace {
        points: Vec<PointD>,
        halfspaces: Vec<HalfSpace>,
    },
    /// A staged random planar point set with its window parameter.
    Random {
        n: usize,
        r: usize,
        seed: u64,
        stages: usize,
        digits: Vec<Vec<u8>>,
    },
}

impl InstancePayload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            InstancePayload::Pat { .. } => "pat",
            InstancePayload::PatBlowup { .. } => "pat-blowup",
            InstancePayload::Dual4 { .. } => "dual4",
            InstancePayload::Halfspace { .. } => "halfspace",
            InstancePayload::Random { .. } => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    #[serde(flatten)]
    pub payload: InstancePayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_space: Option<RangeSpace>,
}

impl InstanceFile {
    fn new(payload: InstancePayload) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            payload,
            range_space: None,
        }
    }

    pub fn pat(c: u32, d: u32) -> Result<Self, InstanceError> {
        let family = build_family(c, d)?;
        Ok(Self::new(InstancePayload::Pat {
            c,
            d,
            rects: family.rects().to_vec(),
        }))
    }

    pub fn pat_blowup(c: u32, d: u32, t: usize) -> Result<Self, InstanceError> {
        let family = build_family(c, d)?;
        Ok(Self::new(InstancePayload::PatBlowup {
            c,
            d,
            t,
            rects: family.chain_blowup(t)?,
        }))
    }

    pub fn random(n: usize, r: usize, seed: u64) -> Result<Self, InstanceError> {
        let (points, ranges) = crate::staged::theorem4_instance(n, r, seed)?;
        let digits = (0..n)
            .map(|i| (1..=points.stages()).map(|t| points.digit(i, t)).collect())
            .collect();
        let mut file = Self::new(InstancePayload::Random {
            n,
            r,
            seed,
            stages: points.stages(),
            digits,
        });
        file.range_space = Some(ranges);
        Ok(file)
    }

    /// Corner-box dualization of a rectangle instance: points are the mapped
    /// (unit-shifted, closed) rectangles, one box per distinct witness query.
    pub fn dual4_from(&self) -> Result<Self, InstanceError> {
        let (rects, c, d) = self.rectangles()?;
        let offset = Rational::one();
        let family = build_family(c, d)?;
        let shifted = shift_rects(rects, &offset)?;
        let points = shifted
            .iter()
            .map(rect_to_point4)
            .collect::<Result<Vec<_>, _>>()?;
        let mut boxes = Vec::new();
        let mut seen: HashSet<Vec<Rational>> = HashSet::new();
        for w in family.witness_points() {
            let q = Point2::new(&w.x + &offset, &w.y + &offset);
            let b = query_box(&q)?;
            if seen.insert(b.uppers.clone()) {
                boxes.push(b);
            }
        }
        Ok(Self::new(InstancePayload::Dual4 { points, boxes }))
    }

    /// Half-space emulation of a rectangle instance.
    pub fn halfspace_from(&self) -> Result<Self, InstanceError> {
        let (rects, c, d) = self.rectangles()?;
        let family = build_family(c, d)?;
        let inst = theorem3_from_rects(rects, &family.witness_points())?;
        Ok(Self::new(InstancePayload::Halfspace {
            points: inst.points,
            halfspaces: inst.halfspaces,
        }))
    }

    fn rectangles(&self) -> Result<(&[Rect], u32, u32), InstanceError> {
        match &self.payload {
            InstancePayload::Pat { c, d, rects } => Ok((rects, *c, *d)),
            InstancePayload::PatBlowup { c, d, rects, .. } => Ok((rects, *c, *d)),
            other => Err(InstanceError::WrongKind {
                op: "rectangle dualization",
                kind: other.kind_name().to_string(),
            }),
        }
    }

    /// The range space this instance denotes: the witness-grid dual for
    /// rectangle kinds, the incidence space for point kinds, the window
    /// space for random kinds. A precomputed space takes precedence.
    pub fn to_range_space(&self) -> Result<RangeSpace, InstanceError> {
        if let Some(rs) = &self.range_space {
            return Ok(rs.clone());
        }
        match &self.payload {
            InstancePayload::Pat { c, d, rects }
            | InstancePayload::PatBlowup { c, d, rects, .. } => {
                Ok(dual_space_over_grid(rects, *c, *d)?)
            }
            InstancePayload::Dual4 { points, boxes } => Ok(box_incidence_space(points, boxes)?),
            InstancePayload::Halfspace { points, halfspaces } => {
                Ok(halfspace_incidence_space(points, halfspaces)?)
            }
            InstancePayload::Random { r, digits, .. } => {
                let points = StagedPointSet::from_digits(digits.clone())?;
                Ok(points.dyadic_canonical_ranges(*r)?)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|source| InstanceError::Parse {
                path: origin.to_string(),
                source,
            })?;
        if file.version != FORMAT_VERSION {
            return Err(InstanceError::Version(file.version));
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<(), InstanceError> {
        std::fs::write(path, self.to_json()).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }
}
