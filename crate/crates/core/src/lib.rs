//! # gridorder
//!
//! Construct, verify and count labeled order types of planar point sets whose
//! coordinates live on small integer grids.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: exact integer predicates (orientation, segment intersection,
//!   line/square incidence), normalized lines, primality and the point-set
//!   text format.
//! - [`ordertype`]: labeled order-type signatures, λ-matrices, signature
//!   digests and distinctness counting.
//! - [`constructions`]: the parabola set `{(i, i² mod p)}`, the cross layout
//!   and the regular-polygon layout together with their separating lines and
//!   square families, plus the two polygon lemma checks.
//! - [`placement`]: the alive/dead square engine that extends a layout point
//!   by point and records traces.
//! - [`oracles`]: brute-force ground truth (grid enumeration, arrangement cell
//!   census) and the closed-form counting formulas.
//! - [`cli`]: the command-line surface (`gridorder` binary).
//!
//! All predicates are exact. Coordinates are arbitrary-precision integers;
//! small values take an `i128` fast path and fall back to big integers on
//! overflow, so every sign is decided exactly.
//!
//! ```
//! use gridorder::geometry::{orientation, Orientation, Point};
//!
//! let o = orientation(&Point::new(0, 0), &Point::new(1, 0), &Point::new(0, 1));
//! assert_eq!(o, Orientation::CounterClockwise);
//! ```

pub mod cli;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod oracles;
pub mod ordertype;
pub mod placement;

pub use error::{Error, Result};

/// Version string embedded in fixtures and reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
