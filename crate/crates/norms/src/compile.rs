use std::collections::HashSet;

use ngrl_ddl::{Atom, Literal, Mode, Rule, RuleKind};
use thiserror::Error;

use crate::ast::{NormKind, NormativeSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("the action alphabet is empty")]
    NoActions,
}

/// Rules and superiority pairs produced by [`compile`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompiledNorms {
    pub rules: Vec<Rule>,
    pub superiority: Vec<(String, String)>,
}

/// Label of the non-concurrence rule `a ->C ¬b`. Norm labels are
/// identifiers and cannot contain `:`, so these never collide.
pub fn non_concurrence_label(a: &Atom, b: &Atom) -> String {
    format!("nc:{a}:{b}")
}

/// Lowers a normative system into DDL rules:
///
/// - `O(p|q)` becomes `q =>O p`, `F(p|q)` becomes `q =>O ¬p`
/// - `P(p|q)` becomes the defeater `q ~>O p`
/// - `C(x,y|q)` becomes `x, q ->C y`
/// - each ordered pair of distinct actions `(a, b)` becomes `a ->C ¬b`
///
/// Explicit priorities are passed through. Each permission is additionally
/// made superior to every obligation/prohibition rule concluding the
/// complement of its target, unless an explicit priority already relates
/// the two.
pub fn compile(system: &NormativeSystem, actions: &[Atom]) -> Result<CompiledNorms, CompileError> {
    if actions.is_empty() {
        return Err(CompileError::NoActions);
    }
    let mut rules = Vec::new();
    for n in &system.regulative {
        let (kind, head) = match n.kind {
            NormKind::Obligation => (RuleKind::Defeasible, n.target.clone()),
            NormKind::Prohibition => (RuleKind::Defeasible, n.target.complement()),
            NormKind::Permission => (RuleKind::Defeater, n.target.clone()),
        };
        rules.push(Rule::factual(&n.label, Mode::O, kind, n.conditions.iter().cloned(), head));
    }
    for n in &system.constitutive {
        let body = std::iter::once(n.source.clone()).chain(n.conditions.iter().cloned());
        rules.push(Rule::factual(&n.label, Mode::C, RuleKind::Strict, body, n.target.clone()));
    }
    for a in actions {
        for b in actions {
            if a != b {
                rules.push(Rule::factual(
                    non_concurrence_label(a, b),
                    Mode::C,
                    RuleKind::Strict,
                    [Literal {
                        atom: a.clone(),
                        positive: true,
                    }],
                    Literal {
                        atom: b.clone(),
                        positive: false,
                    },
                ));
            }
        }
    }

    let mut superiority = system.priorities.clone();
    let explicit: HashSet<(&str, &str)> = system
        .priorities
        .iter()
        .flat_map(|(w, l)| [(w.as_str(), l.as_str()), (l.as_str(), w.as_str())])
        .collect();
    let mut auto = Vec::new();
    for p in system
        .regulative
        .iter()
        .filter(|n| n.kind == NormKind::Permission)
    {
        let against = p.target.complement();
        for r in &rules {
            if r.mode == Mode::O
                && r.kind != RuleKind::Defeater
                && r.consequent == against
                && !explicit.contains(&(p.label.as_str(), &*r.label))
            {
                auto.push((p.label.clone(), r.label.to_string()));
            }
        }
    }
    superiority.extend(auto);
    Ok(CompiledNorms { rules, superiority })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn actions(names: &[&str]) -> Vec<Atom> {
        names.iter().map(Atom::new).collect()
    }

    const BENEVOLENT_CORE: &str = "\
benev: O(benevolent | true)
notbenev: C(eat(person), -benevolent)
blueperson: C(eat(blueGhost), eat(person))
";

    #[test]
    fn benevolent_core_counts() {
        let s = parse(BENEVOLENT_CORE).unwrap();
        let c = compile(&s, &actions(&["north", "south", "east", "west", "stop"])).unwrap();
        let nc = c.rules.iter().filter(|r| r.label.starts_with("nc:")).count();
        assert_eq!(c.rules.len() - nc, 3);
        assert_eq!(nc, 20);
        assert!(c.superiority.is_empty());
    }

    #[test]
    fn singleton_alphabet_has_no_non_concurrence() {
        let c = compile(&NormativeSystem::default(), &actions(&["a"])).unwrap();
        assert!(c.rules.is_empty());
    }

    #[test]
    fn empty_alphabet_is_rejected() {
        assert_eq!(
            compile(&NormativeSystem::default(), &[]),
            Err(CompileError::NoActions)
        );
    }

    #[test]
    fn encodings() {
        let s = parse("o: O(p | q)\nf: F(p | q1)\nperm: P(p | q2)\nc: C(x, y | z)").unwrap();
        let c = compile(&s, &actions(&["a"])).unwrap();
        let by = |l: &str| c.rules.iter().find(|r| &*r.label == l).unwrap();
        assert_eq!(by("o").to_string(), "o: q =>O p");
        assert_eq!(by("f").to_string(), "f: q1 =>O ¬p");
        assert_eq!(by("perm").to_string(), "perm: q2 ~>O p");
        assert_eq!(by("c").to_string(), "c: x, z ->C y");
    }

    #[test]
    fn permission_is_made_superior_to_conflicting_prohibition() {
        let s = parse("f: F(p | q1)\nperm: P(p | q2)").unwrap();
        let c = compile(&s, &actions(&["a"])).unwrap();
        assert_eq!(c.superiority, vec![("perm".to_string(), "f".to_string())]);
    }

    #[test]
    fn explicit_priority_overrides_auto_superiority() {
        let s = parse("f: F(p | q1)\nperm: P(p | q2)\ng: F(p | q3)\nf > perm").unwrap();
        let c = compile(&s, &actions(&["a"])).unwrap();
        assert_eq!(
            c.superiority,
            vec![
                ("f".to_string(), "perm".to_string()),
                ("perm".to_string(), "g".to_string())
            ]
        );
    }
}
