use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::literal::{Literal, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Strict,
    Defeasible,
    /// Blocks conclusions for the complement of its head; never concludes.
    Defeater,
}

impl RuleKind {
    fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }
}

/// A rule premise. A deontic premise must hold as an obligation `O(l)`;
/// a plain one must hold factually.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antecedent {
    pub literal: Literal,
    pub deontic: bool,
}

impl Antecedent {
    pub fn fact(literal: Literal) -> Self {
        Antecedent {
            literal,
            deontic: false,
        }
    }

    pub fn obligation(literal: Literal) -> Self {
        Antecedent {
            literal,
            deontic: true,
        }
    }

    /// Mode in which the premise has to be proven (ignoring conversion).
    pub fn required_mode(&self) -> Mode {
        if self.deontic {
            Mode::O
        } else {
            Mode::C
        }
    }
}

impl fmt::Display for Antecedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deontic {
            write!(f, "O({})", self.literal)
        } else {
            write!(f, "{}", self.literal)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub label: Arc<str>,
    pub mode: Mode,
    pub kind: RuleKind,
    pub antecedents: Vec<Antecedent>,
    pub consequent: Literal,
}

impl Rule {
    pub fn new(
        label: impl AsRef<str>,
        mode: Mode,
        kind: RuleKind,
        antecedents: Vec<Antecedent>,
        consequent: Literal,
    ) -> Self {
        Rule {
            label: Arc::from(label.as_ref()),
            mode,
            kind,
            antecedents,
            consequent,
        }
    }

    /// Shorthand for rules whose premises are all factual.
    pub fn factual(
        label: impl AsRef<str>,
        mode: Mode,
        kind: RuleKind,
        body: impl IntoIterator<Item = Literal>,
        consequent: Literal,
    ) -> Self {
        Self::new(
            label,
            mode,
            kind,
            body.into_iter().map(Antecedent::fact).collect(),
            consequent,
        )
    }

    /// Strict and defeasible rules can support a conclusion; defeaters cannot.
    pub fn is_supportive(&self) -> bool {
        self.kind != RuleKind::Defeater
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        for (i, a) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.antecedents.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "{}{} {}", self.kind.arrow(), self.mode, self.consequent)
    }
}

/// Adds the contrapositives of every strict constitutive rule with purely
/// factual premises: from `a1..an ->C c` derive, for each `i`,
/// `a1..¬c..an ->C ¬ai` (with `¬c` in position `i`). Defeasible rules and
/// defeaters are direction-sensitive and are left alone.
///
/// Derived labels are `<label>/cp<i>`, suffixed with `'` until unique.
pub fn contrapositive_closure(rules: &[Rule]) -> Vec<Rule> {
    let mut taken: HashSet<Arc<str>> = rules.iter().map(|r| r.label.clone()).collect();
    let mut out = rules.to_vec();
    for rule in rules {
        if rule.mode != Mode::C
            || rule.kind != RuleKind::Strict
            || rule.antecedents.iter().any(|a| a.deontic)
        {
            continue;
        }
        for i in 0..rule.antecedents.len() {
            let body = rule
                .antecedents
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    if j == i {
                        Antecedent::fact(rule.consequent.complement())
                    } else {
                        a.clone()
                    }
                })
                .collect();
            let mut label = format!("{}/cp{}", rule.label, i);
            while taken.contains(label.as_str()) {
                label.push('\'');
            }
            let label: Arc<str> = Arc::from(label);
            taken.insert(label.clone());
            out.push(Rule {
                label,
                mode: Mode::C,
                kind: RuleKind::Strict,
                antecedents: body,
                consequent: rule.antecedents[i].literal.complement(),
            });
        }
    }
    out
}
