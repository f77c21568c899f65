//! Normative systems written as labelled norm lines:
//!
//! ```text
//! # Pac-Man must be benevolent at all times
//! benev: O(benevolent | true)
//! notbenev: C(eat(person), -benevolent)
//! f1: F(eat(blueGhost) | scared(blueGhost))
//! p1: P(eat(blueGhost) | true)
//! p1 > f1
//! ```
//!
//! [`parse`] and [`serialize`] convert between text and [`NormativeSystem`];
//! [`compile`] lowers a system plus an action alphabet into DDL rules.

mod ast;
mod compile;
mod parse;

pub use ast::{ConstitutiveNorm, NormKind, NormativeSystem, RegulativeNorm};
pub use compile::{compile, non_concurrence_label, CompileError, CompiledNorms};
pub use parse::{parse, serialize, ParseError, ParseErrorKind};
