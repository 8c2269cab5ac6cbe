//! Grammar-based validation toolkit.
//!
//! The crate builds validators out of small formal languages: context-free
//! grammars for counting and comparison idioms (length fields, chunk framing,
//! positionwise equality and ordering), regular expressions for flat value
//! shapes, and a boolean composer that combines per-language membership atoms
//! into whole-message verdicts. An HTTP profile wires the pieces to concrete
//! header and body checks, and an oracle harness cross-checks every generated
//! grammar against direct definitional predicates.

pub mod composer;
pub mod earley;
pub mod grammar;
pub mod http;
pub mod idioms;
pub mod oracle;
pub mod regex;
