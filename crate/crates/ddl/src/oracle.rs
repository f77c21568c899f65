//! Reference implementation for testing: re-evaluates every proof condition
//! over every `(literal, mode)` pair, scanning all rules each time, until no
//! tag changes. Quadratic and slow; shares nothing with [`crate::prove`]
//! beyond the public data types.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::conclusions::{ConclusionSet, Status};
use crate::literal::{Literal, Mode};
use crate::rule::{Rule, RuleKind};
use crate::theory::DefeasibleTheory;

type Key = (Literal, Mode);

fn premise_mode(deontic: bool) -> Mode {
    if deontic {
        Mode::O
    } else {
        Mode::C
    }
}

/// How a rule relates to a target mode: directly, via conversion, or not.
fn route(r: &Rule, m: Mode) -> Option<bool> {
    if r.mode == m {
        Some(false)
    } else if m == Mode::O && r.mode == Mode::C && r.kind == RuleKind::Strict {
        Some(true)
    } else {
        None
    }
}

fn body_holds(r: &Rule, converted: bool, set: &HashSet<Key>) -> bool {
    let has = |l: &Literal, m: Mode| set.contains(&(l.clone(), m));
    if converted {
        let mut any_o = false;
        for a in &r.antecedents {
            let o = has(&a.literal, Mode::O);
            let c = has(&a.literal, Mode::C);
            let ok = if a.deontic { o } else { o || c };
            if !ok {
                return false;
            }
            any_o |= o;
        }
        any_o
    } else {
        r.antecedents
            .iter()
            .all(|a| has(&a.literal, premise_mode(a.deontic)))
    }
}

fn body_refuted(r: &Rule, converted: bool, minus: &HashSet<Key>) -> bool {
    let has = |l: &Literal, m: Mode| minus.contains(&(l.clone(), m));
    if converted {
        let some_fails = r.antecedents.iter().any(|a| {
            if a.deontic {
                has(&a.literal, Mode::O)
            } else {
                has(&a.literal, Mode::O) && has(&a.literal, Mode::C)
            }
        });
        let no_obligation = r.antecedents.iter().all(|a| has(&a.literal, Mode::O));
        some_fails || no_obligation
    } else {
        r.antecedents
            .iter()
            .any(|a| has(&a.literal, premise_mode(a.deontic)))
    }
}

pub fn prove_naive(theory: &DefeasibleTheory) -> ConclusionSet {
    let universe: Vec<Key> = theory.universe().collect();
    let rules = theory.rules();
    let beats = |t: &Rule, s: &Rule| {
        theory
            .superiority()
            .iter()
            .any(|(w, l)| *w == t.label && *l == s.label)
    };

    let mut definite: HashSet<Key> = HashSet::new();
    loop {
        let mut next = definite.clone();
        for (l, m) in &universe {
            let fact = *m == Mode::C && theory.facts().contains(l);
            let by_rule = rules.iter().any(|r| {
                r.kind == RuleKind::Strict
                    && r.consequent == *l
                    && route(r, *m).is_some_and(|conv| body_holds(r, conv, &definite))
            });
            if fact || by_rule {
                next.insert((l.clone(), *m));
            }
        }
        if next == definite {
            break;
        }
        definite = next;
    }

    let mut plus: HashSet<Key> = HashSet::new();
    let mut minus: HashSet<Key> = HashSet::new();
    loop {
        let mut next_plus = plus.clone();
        let mut next_minus = minus.clone();
        for (l, m) in &universe {
            let m = *m;
            let neg = l.complement();
            let def_l = definite.contains(&(l.clone(), m));
            let def_neg = definite.contains(&(neg.clone(), m));
            let supporters: Vec<(&Rule, bool)> = rules
                .iter()
                .filter(|r| r.kind != RuleKind::Defeater && r.consequent == *l)
                .filter_map(|r| route(r, m).map(|c| (r, c)))
                .collect();
            let attackers: Vec<(&Rule, bool)> = rules
                .iter()
                .filter(|r| r.consequent == neg)
                .filter_map(|r| route(r, m).map(|c| (r, c)))
                .collect();

            let proved = def_l
                || (!def_neg
                    && supporters.iter().any(|(r, c)| body_holds(r, *c, &plus))
                    && attackers.iter().all(|(s, sc)| {
                        body_refuted(s, *sc, &minus)
                            || supporters
                                .iter()
                                .any(|(t, tc)| beats(t, s) && body_holds(t, *tc, &plus))
                    }));
            let refuted = !def_l
                && (def_neg
                    || supporters.iter().all(|(r, c)| body_refuted(r, *c, &minus))
                    || attackers.iter().any(|(s, sc)| {
                        body_holds(s, *sc, &plus)
                            && supporters
                                .iter()
                                .all(|(t, tc)| !beats(t, s) || body_refuted(t, *tc, &minus))
                    }));
            if proved {
                next_plus.insert((l.clone(), m));
            }
            if refuted {
                next_minus.insert((l.clone(), m));
            }
        }
        if next_plus == plus && next_minus == minus {
            break;
        }
        plus = next_plus;
        minus = next_minus;
    }

    let entries: BTreeMap<Key, Status> = universe
        .into_iter()
        .map(|k| {
            let s = Status {
                definite: definite.contains(&k),
                defeasible: plus.contains(&k),
            };
            (k, s)
        })
        .collect();
    ConclusionSet::from_entries(entries)
}

/// Bounds for [`random_theory`].
#[derive(Clone, Copy, Debug)]
pub struct TheoryBounds {
    pub max_rules: usize,
    pub max_atoms: usize,
    pub max_superiority: usize,
    pub max_body: usize,
    pub max_facts: usize,
}

impl Default for TheoryBounds {
    fn default() -> Self {
        TheoryBounds {
            max_rules: 6,
            max_atoms: 4,
            max_superiority: 2,
            max_body: 2,
            max_facts: 2,
        }
    }
}

/// A random valid theory with only factual premises, both modes and all
/// three rule kinds.
pub fn random_theory<R: Rng>(rng: &mut R, b: TheoryBounds) -> DefeasibleTheory {
    let atoms = ["p", "q", "r", "s", "t", "u"];
    let n_atoms = rng.gen_range(1..=b.max_atoms.min(atoms.len()));
    let lit = |rng: &mut R| Literal {
        atom: crate::literal::Atom::new(atoms[rng.gen_range(0..n_atoms)]),
        positive: rng.gen_bool(0.5),
    };
    let n_rules = rng.gen_range(0..=b.max_rules);
    let mut rules = Vec::with_capacity(n_rules);
    for i in 0..n_rules {
        let mode = if rng.gen_bool(0.5) { Mode::C } else { Mode::O };
        let kind = *[RuleKind::Strict, RuleKind::Defeasible, RuleKind::Defeater]
            .choose(rng)
            .unwrap();
        let body: Vec<Literal> = (0..rng.gen_range(0..=b.max_body)).map(|_| lit(rng)).collect();
        rules.push(Rule::factual(format!("r{i}"), mode, kind, body, lit(rng)));
    }
    let facts: Vec<Literal> = (0..rng.gen_range(0..=b.max_facts)).map(|_| lit(rng)).collect();

    let mut candidates = Vec::new();
    for w in &rules {
        for l in &rules {
            if w.mode == l.mode && w.consequent.is_complement_of(&l.consequent) {
                candidates.push((w.label.to_string(), l.label.to_string()));
            }
        }
    }
    candidates.shuffle(rng);
    let mut sup: Vec<(String, String)> = Vec::new();
    for c in candidates {
        if sup.len() >= b.max_superiority {
            break;
        }
        let mut trial = sup.clone();
        trial.push(c);
        if DefeasibleTheory::new(facts.clone(), rules.clone(), trial.clone()).is_ok() {
            sup = trial;
        }
    }
    DefeasibleTheory::new(facts, rules, sup).expect("generated theory is valid")
}
