//! Cyclic string rewriting over finitely presented monoids.
//!
//! The crate layers a cyclic reduction relation on top of classical string
//! rewriting: a word cyclically reduces to `v` when some rotation of it
//! rewrites to `v` in one step. On top of that relation it provides cyclically
//! irreducible forms, static analysis of rule pairs, a cyclical completion
//! procedure and conjugacy tests.

pub mod analysis;
pub mod cli;
pub mod completion;
pub mod conjugacy;
pub mod cyclic;
pub mod error;
pub mod presentation;
pub mod rewrite;

pub use error::{Error, ParseError, ParseErrorKind, Result};
