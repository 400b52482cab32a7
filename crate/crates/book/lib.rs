//! Compiles the guide's code listings as doc tests.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod chapter1 {}

#[doc = include_str!("../../book/src/grammars.md")]
pub mod chapter2 {}

#[doc = include_str!("../../book/src/automata.md")]
pub mod chapter3 {}

#[doc = include_str!("../../book/src/planning.md")]
pub mod chapter4 {}

#[doc = include_str!("../../book/src/oracles.md")]
pub mod chapter5 {}

#[doc = include_str!("../../book/src/command-line.md")]
pub mod chapter6 {}
