//! The chapters of `book/src`, included verbatim so that every `rust` block
//! in the guide runs as a doc-test.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}
#[doc = include_str!("../../../book/src/convergents.md")]
pub mod convergents {}
#[doc = include_str!("../../../book/src/classifiers.md")]
pub mod classifiers {}
#[doc = include_str!("../../../book/src/condition-b.md")]
pub mod condition_b {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}
#[doc = include_str!("../../../book/src/dyadic.md")]
pub mod dyadic {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
