//! Solvers, a rule engine and brute-force oracles for the Bouncing Tower,
//! its alpha-levitating generalization and the Disk Pile variant of the
//! Tower of Hanoi.
//!
//! - [`rules`]: configurations, insertion/removal geometry, legality.
//! - [`solver`]: recursive move generation and step counts.
//! - [`oracle`]: configuration graph, BFS distances and path counts.
//! - [`diskpile`]: towers with repeated disk sizes.
//! - [`trace_io`]: trace documents, text/JSON formats and replay.
//!
//! The guide in `book/` walks through each of these with runnable snippets.

pub mod diskpile;
pub mod oracle;
pub mod rules;
pub mod solver;
pub mod trace_io;

pub use rules::{
    fixed_disk_parity, Configuration, Move, MoveError, MoveTrace, ParityContext, PegId, PegStack,
    RuleError, RuleSet,
};
pub use solver::{CountFunction, SolverError, SolverVariant};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rules.md")]
    mod rules {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/diskpile.md")]
    mod diskpile {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
