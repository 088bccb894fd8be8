//! Invariant heap games, modular games, restricted cellular automata, and
//! bracket (NOR) circuits, together with the compilation steps that connect
//! them: circuits compile to modular games that emulate an automaton, a
//! pattern check turns one circuit into a pair of games that are P-equivalent
//! exactly when the pattern never appears, and a gadget turns any modular
//! game into an invariant game with the same embedded P-positions.
//!
//! Every stage can be cross-checked at bounded scale against an independent
//! oracle; see the [`verify`] module.

pub mod bits;
pub mod cellular;
pub mod circuits;
pub mod games;
pub mod reductions;
pub mod verify;
