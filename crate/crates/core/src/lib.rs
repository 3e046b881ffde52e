//! A workbench for the Lolli fragment of linear logic.
//!
//! The crate bundles a simply typed term language, Lolli formulas and their
//! clause elaboration, a proof kernel for the full sequent calculus and for
//! the backchaining system, proof normalization, a backchaining search
//! engine, a small imperative language with a reference interpreter, and an
//! encoding of that language's evaluation into Lolli.

pub mod encoding;
pub mod engine;
pub mod formula;
pub mod kernel;
pub mod lang;
pub mod normalize;
pub mod term;
pub mod text;

pub use formula::{BuiltinRel, Class, ClauseTriple, Formula, View};
pub use term::{SimpleType, Term};
pub use text::{ParseError, Signature};
