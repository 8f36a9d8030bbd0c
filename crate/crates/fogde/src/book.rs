//! The guide under book/src compiled as doctests. mdbook itself cannot run
//! example code against the crate, so each chapter is included here as a doc
//! comment and `cargo test --doc` keeps every snippet honest. One module per
//! chapter so a failing test names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}
#[doc = include_str!("../../../book/src/spectral.md")]
pub mod spectral {}
#[doc = include_str!("../../../book/src/hamiltonian.md")]
pub mod hamiltonian {}
#[doc = include_str!("../../../book/src/conservation.md")]
pub mod conservation {}
#[doc = include_str!("../../../book/src/electromagnetic.md")]
pub mod electromagnetic {}
#[doc = include_str!("../../../book/src/causality.md")]
pub mod causality {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
