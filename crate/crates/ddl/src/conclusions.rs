use std::collections::BTreeMap;
use std::fmt;

use crate::literal::{Literal, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProofTag {
    /// +Δ: definitely provable.
    PlusDelta,
    /// −Δ: definitely refutable.
    MinusDelta,
    /// +∂: defeasibly provable.
    PlusPartial,
    /// −∂: defeasibly refutable.
    MinusPartial,
}

impl ProofTag {
    pub const ALL: [ProofTag; 4] = [
        ProofTag::PlusDelta,
        ProofTag::MinusDelta,
        ProofTag::PlusPartial,
        ProofTag::MinusPartial,
    ];

    fn symbol(self) -> &'static str {
        match self {
            ProofTag::PlusDelta => "+Δ",
            ProofTag::MinusDelta => "-Δ",
            ProofTag::PlusPartial => "+∂",
            ProofTag::MinusPartial => "-∂",
        }
    }
}

impl fmt::Display for ProofTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The definite and defeasible verdict for one `(literal, mode)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Status {
    pub definite: bool,
    pub defeasible: bool,
}

impl Status {
    pub fn tags(self) -> [ProofTag; 2] {
        [
            if self.definite {
                ProofTag::PlusDelta
            } else {
                ProofTag::MinusDelta
            },
            if self.defeasible {
                ProofTag::PlusPartial
            } else {
                ProofTag::MinusPartial
            },
        ]
    }

    pub fn has(self, tag: ProofTag) -> bool {
        self.tags().contains(&tag)
    }
}

/// Output of the prover. Each recorded pair carries exactly one of ±Δ and
/// one of ±∂; pairs that were never mentioned read as −Δ/−∂.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConclusionSet {
    entries: BTreeMap<(Literal, Mode), Status>,
}

impl ConclusionSet {
    pub(crate) fn from_entries(entries: BTreeMap<(Literal, Mode), Status>) -> Self {
        ConclusionSet { entries }
    }

    pub fn status(&self, literal: &Literal, mode: Mode) -> Status {
        // BTreeMap lookup needs an owned key; literals are cheap to clone.
        self.entries
            .get(&(literal.clone(), mode))
            .copied()
            .unwrap_or_default()
    }

    pub fn holds(&self, literal: &Literal, mode: Mode, tag: ProofTag) -> bool {
        self.status(literal, mode).has(tag)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Literal, Mode, Status)> {
        self.entries.iter().map(|((l, m), s)| (l, *m, *s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Literals carrying `tag` in `mode`, in sorted order.
    pub fn with_tag(&self, mode: Mode, tag: ProofTag) -> impl Iterator<Item = &Literal> {
        self.iter()
            .filter(move |(_, m, s)| *m == mode && s.has(tag))
            .map(|(l, _, _)| l)
    }

    /// One conclusion per line, e.g. `+∂_O ¬move(north)`, ordered by
    /// literal, then mode, then tag.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (l, m, s) in self.iter() {
            for tag in s.tags() {
                out.push_str(&format!("{tag}_{m} {l}\n"));
            }
        }
        out
    }
}

/// True iff `tag` was recorded for `(literal, mode)`.
pub fn query(conclusions: &ConclusionSet, literal: &Literal, mode: Mode, tag: ProofTag) -> bool {
    conclusions.holds(literal, mode, tag)
}
