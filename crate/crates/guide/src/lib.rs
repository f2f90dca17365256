//! Runs the book's code blocks as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/pathloss.md")]
pub mod pathloss {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/guarantees.md")]
pub mod guarantees {}
#[doc = include_str!("../../../book/src/hexnet.md")]
pub mod hexnet {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
