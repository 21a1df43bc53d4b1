//! Exact computation in finitely generated groups of piecewise
//! fractional-linear homeomorphisms of the line or of a compact interval.
//!
//! Elements act on the right throughout: `x·(fg) = (x·f)·g`.

pub mod analyze;
pub mod catalog;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod flmap;
pub mod interval;
pub mod germ;
pub mod pmap;
pub mod point;
pub mod rational;
pub mod search;
pub mod spec;
pub mod text;
pub mod witness;
pub mod word;

pub use error::{Error, ParseErrorKind, Result};
pub use flmap::FracLinearMap;
pub use pmap::{Domain, FixedComponent, OpenInterval, Piece, PiecewiseMap};
pub use point::{ExtPoint, Point, QuadraticIrrational};
pub use rational::Rational;
pub use spec::{Generator, GroupSpec, Metadata};
pub use word::{Letter, Word};
