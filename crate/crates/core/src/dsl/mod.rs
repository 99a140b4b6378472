//! A small language for composite kernels over declared objects.

pub mod document;
pub mod program;
pub mod term;

pub use document::Document;
pub use program::Program;
pub use term::{parse_term, Term, TermKind};
