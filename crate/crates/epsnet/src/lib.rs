//! Range spaces that certifiably need large epsilon-nets, at desk scale.
//!
//! The crate builds three kinds of hard instances and the machinery to check
//! their claimed properties exactly:
//!
//! - [`construction`]: deterministic grid-aligned rectangle families whose
//!   dual range spaces have VC-dimension 2 yet force epsilon-nets of size at
//!   least half the family, plus the chain blow-up that scales the instances.
//! - [`duality`]: the corner-box dualization that turns those rectangle
//!   families into point sets in 4-space against boxes anchored at the
//!   origin, and the rescaling that emulates every such box by a half-space.
//! - [`staged`]: random planar point sets built digit by digit, whose dyadic
//!   column ranges defeat every candidate net of half the points.
//!
//! [`rangespace`] holds the shared combinatorial core (dedup, heaviness,
//! epsilon-net checking, VC-dimension by brute-force shattering), and
//! [`solver`] the exact branch-and-bound hitting-set machinery that turns
//! claims into certificates. [`reports`] produces growth tables and
//! falsification logs; [`cli`] wires everything to files.
//!
//! Start with the `examples/` directory: each file exercises one capability
//! end to end. The core flow in three lines:
//!
//! ```
//! use epsnet::{build_family, Rational, solver};
//!
//! let family = build_family(4, 2)?;
//! let dual = family.dual_space()?;
//! let net = solver::min_epsilon_net(&dual, &Rational::pow(2, -7), 1 << 20)?;
//! assert!(net.optimal && net.size >= family.len() / 2);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod construction;
pub mod duality;
pub mod geometry;
pub mod instance;
pub mod rangespace;
pub mod rational;
pub mod reports;
pub mod solver;
pub mod staged;

pub use construction::{build_family, Family, IndependenceMode};
pub use geometry::{Point2, Rect, RectTag};
pub use rangespace::{NetVerdict, RangeSpace};
pub use rational::Rational;
pub use solver::OptResult;
