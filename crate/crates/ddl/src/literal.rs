use std::fmt;
use std::sync::Arc;

/// An opaque propositional token. `eat(blueGhost)` is a single atom: the
/// parenthesized part is part of the name, not a term structure.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Panics on an empty name; use [`Atom::try_new`] for untrusted input.
    pub fn new(name: impl AsRef<str>) -> Self {
        Self::try_new(name).expect("atom names are non-empty")
    }

    pub fn try_new(name: impl AsRef<str>) -> Option<Self> {
        let name = name.as_ref();
        if name.is_empty() {
            None
        } else {
            Some(Atom(Arc::from(name)))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A signed atom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: impl AsRef<str>) -> Self {
        Literal {
            atom: Atom::new(atom),
            positive: true,
        }
    }

    pub fn neg(atom: impl AsRef<str>) -> Self {
        Literal {
            atom: Atom::new(atom),
            positive: false,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.atom == other.atom && self.positive != other.positive
    }
}

/// Logical notation: `p` / `¬p`.
impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "¬{}", self.atom)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Constitutive (factual) or deontic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    C,
    O,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::C, Mode::O];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::C => "C",
            Mode::O => "O",
        })
    }
}
