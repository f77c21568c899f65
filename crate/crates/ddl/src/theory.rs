use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::literal::{Literal, Mode};
use crate::rule::Rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("superiority pair references unknown rule `{0}`")]
    UnknownLabel(String),
    #[error("rule `{0}` cannot be superior to itself")]
    Reflexive(String),
    #[error("superiority `{winner} > {loser}` relates rules of different modes")]
    CrossMode { winner: String, loser: String },
    #[error("superiority `{winner} > {loser}` relates rules without complementary consequents")]
    NotConflicting { winner: String, loser: String },
    #[error("superiority relation is cyclic through `{0}`")]
    Cyclic(String),
}

/// Facts, rules of both modes and a superiority relation, validated once at
/// construction and immutable afterwards.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefeasibleTheory {
    facts: BTreeSet<Literal>,
    rules: Vec<Rule>,
    superiority: Vec<(Arc<str>, Arc<str>)>,
}

impl DefeasibleTheory {
    pub fn new<F, S, L>(facts: F, rules: Vec<Rule>, superiority: S) -> Result<Self, TheoryError>
    where
        F: IntoIterator<Item = Literal>,
        S: IntoIterator<Item = (L, L)>,
        L: AsRef<str>,
    {
        let mut by_label: HashMap<&str, usize> = HashMap::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            if by_label.insert(&r.label, i).is_some() {
                return Err(TheoryError::DuplicateLabel(r.label.to_string()));
            }
        }

        let mut pairs = Vec::new();
        let mut edges: HashMap<usize, Vec<usize>> = HashMap::new();
        for (w, l) in superiority {
            let (w, l) = (w.as_ref(), l.as_ref());
            let wi = *by_label
                .get(w)
                .ok_or_else(|| TheoryError::UnknownLabel(w.to_string()))?;
            let li = *by_label
                .get(l)
                .ok_or_else(|| TheoryError::UnknownLabel(l.to_string()))?;
            if wi == li {
                return Err(TheoryError::Reflexive(w.to_string()));
            }
            let (rw, rl) = (&rules[wi], &rules[li]);
            if rw.mode != rl.mode {
                return Err(TheoryError::CrossMode {
                    winner: w.to_string(),
                    loser: l.to_string(),
                });
            }
            if !rw.consequent.is_complement_of(&rl.consequent) {
                return Err(TheoryError::NotConflicting {
                    winner: w.to_string(),
                    loser: l.to_string(),
                });
            }
            edges.entry(wi).or_default().push(li);
            pairs.push((rw.label.clone(), rl.label.clone()));
        }
        pairs.sort();
        pairs.dedup();

        if let Some(i) = find_cycle(&edges, rules.len()) {
            return Err(TheoryError::Cyclic(rules[i].label.to_string()));
        }

        Ok(DefeasibleTheory {
            facts: facts.into_iter().collect(),
            rules,
            superiority: pairs,
        })
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Sorted, deduplicated `(winner, loser)` label pairs.
    pub fn superiority(&self) -> &[(Arc<str>, Arc<str>)] {
        &self.superiority
    }

    /// Every literal mentioned by the theory, closed under complement.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        let mut add = |l: &Literal| {
            out.insert(l.clone());
            out.insert(l.complement());
        };
        self.facts.iter().for_each(&mut add);
        for r in &self.rules {
            add(&r.consequent);
            r.antecedents.iter().for_each(|a| add(&a.literal));
        }
        out
    }

    /// `(literal, mode)` pairs the prover assigns tags to.
    pub fn universe(&self) -> impl Iterator<Item = (Literal, Mode)> {
        self.literals()
            .into_iter()
            .flat_map(|l| Mode::ALL.into_iter().map(move |m| (l.clone(), m)))
    }
}

fn find_cycle(edges: &HashMap<usize, Vec<usize>>, n: usize) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn visit(v: usize, edges: &HashMap<usize, Vec<usize>>, state: &mut [u8]) -> Option<usize> {
        state[v] = 1;
        for &w in edges.get(&v).into_iter().flatten() {
            match state[w] {
                1 => return Some(w),
                0 => {
                    if let Some(c) = visit(w, edges, state) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        state[v] = 2;
        None
    }
    let mut roots: Vec<usize> = edges.keys().copied().collect();
    roots.sort_unstable();
    for v in roots {
        if state[v] == 0 {
            if let Some(c) = visit(v, edges, &mut state) {
                return Some(c);
            }
        }
    }
    None
}
