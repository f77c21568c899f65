//! Defeasible deontic logic with constitutive (`C`) and deontic (`O`)
//! modes: validated theories, contraposition of strict constitutive rules,
//! and a prover producing ±Δ/±∂ conclusions.

mod conclusions;
mod literal;
#[cfg(feature = "oracle")]
pub mod oracle;
mod prove;
mod rule;
mod theory;

pub use conclusions::{query, ConclusionSet, ProofTag, Status};
pub use literal::{Atom, Literal, Mode};
pub use prove::prove;
pub use rule::{contrapositive_closure, Antecedent, Rule, RuleKind};
pub use theory::{DefeasibleTheory, TheoryError};
