// The book's code blocks, compiled as doc tests. One module per chapter so
// a failure points at its file.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/diagrams.md")]
mod diagrams {}
#[doc = include_str!("../../../book/src/cellular.md")]
mod cellular {}
#[doc = include_str!("../../../book/src/seminormal.md")]
mod seminormal {}
#[doc = include_str!("../../../book/src/truncation.md")]
mod truncation {}
#[doc = include_str!("../../../book/src/kl.md")]
mod kl {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
#[doc = include_str!("../../../README.md")]
mod readme {}
