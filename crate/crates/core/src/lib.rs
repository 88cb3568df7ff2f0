//! Small programs with complicated behaviour, and the tools to check claims
//! about them exhaustively.
//!
//! - [`ca`]: elementary cellular automata.
//! - [`preimage`]: ancestor tests, preimage enumeration and the
//!   level-by-level initial-condition solver.
//! - [`machines`]: Turing machines, busy beaver search and cyclic tag
//!   systems.
//! - [`causal`]: trivalent graph rewriting, causal networks, causal
//!   invariance and ball-growth dimension.
//! - [`games`]: CHSH and GHZ games, and the order-robustness check for
//!   deterministic thread protocols.
//!
//! The `book/` directory next to the workspace walks through each of these
//! with runnable examples; its chapters are compiled as doctests below.

pub mod ca;
pub mod causal;
pub mod games;
pub mod machines;
pub mod preimage;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/preimages.md")]
    mod preimages {}
    #[doc = include_str!("../../../book/src/machines.md")]
    mod machines {}
    #[doc = include_str!("../../../book/src/causal.md")]
    mod causal {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
