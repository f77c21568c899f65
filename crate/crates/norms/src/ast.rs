use ngrl_ddl::Literal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// `O(p | q)`
    Obligation,
    /// `F(p | q)`, i.e. `O(¬p | q)`
    Prohibition,
    /// `P(p | q)`, a strong permission
    Permission,
}

impl NormKind {
    pub fn symbol(self) -> char {
        match self {
            NormKind::Obligation => 'O',
            NormKind::Prohibition => 'F',
            NormKind::Permission => 'P',
        }
    }
}

/// `kind(target | conditions)`; empty conditions mean ⊤.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegulativeNorm {
    pub label: String,
    pub kind: NormKind,
    pub target: Literal,
    pub conditions: Vec<Literal>,
}

/// `C(source, target | conditions)`: in context `conditions`, `source`
/// counts as `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstitutiveNorm {
    pub label: String,
    pub source: Literal,
    pub target: Literal,
    pub conditions: Vec<Literal>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormativeSystem {
    pub constitutive: Vec<ConstitutiveNorm>,
    pub regulative: Vec<RegulativeNorm>,
    /// `(winner, loser)` label pairs in file order.
    pub priorities: Vec<(String, String)>,
}

impl NormativeSystem {
    pub fn is_empty(&self) -> bool {
        self.constitutive.is_empty() && self.regulative.is_empty() && self.priorities.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.regulative
            .iter()
            .map(|n| n.label.as_str())
            .chain(self.constitutive.iter().map(|n| n.label.as_str()))
    }

    pub fn regulative_norm(&self, label: &str) -> Option<&RegulativeNorm> {
        self.regulative.iter().find(|n| n.label == label)
    }
}
