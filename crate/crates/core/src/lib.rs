//! Special means, the ratio functions `(a^x - b^x)/(c^x - d^x)` and their
//! logarithm, and slack-valued predicates for the inequalities built on them.
//!
//! Everything here is pure binary64 arithmetic on top of `libm`, usable
//! without `std`. Sampling, the high-precision oracle, report files and the
//! command line live in the `meanbound` crate.
#![no_std]

extern crate alloc;

mod math;

pub mod catalog;
pub mod error;
pub mod kyfan;
pub mod means;
pub mod ratio;
pub mod report;
pub mod sequence;

pub use error::{DomainError, EvalError};
pub use means::{ExponentKind, MeanId, MeanValue, PExponent, PositivePair};
pub use ratio::{ConvexityClass, DiscClass, OrderedQuad, RatioFn, RelaxedQuad};
pub use report::{Inputs, Link, MarginDomain, SlackReport, Verdict};
