//! Worklist evaluation of the proof conditions.
//!
//! Literals are interned so that index `i ^ 1` is the complement of `i`, and
//! each `(literal, mode)` pair becomes a node `2 * literal + mode`. The
//! definite layer (±Δ) is the least fixpoint of the strict-rule conditions;
//! −Δ is failure to prove +Δ. The defeasible layer (±∂) is then the least
//! fixpoint of the usual ambiguity-blocking conditions with team defeat,
//! evaluated only at nodes whose inputs changed. Nodes left undecided by that
//! fixpoint (positive loops) are assigned −∂: the search for a proof failed.
//!
//! Conversion: a strict constitutive rule also supports its head in the
//! deontic mode when every premise holds (a factual premise may hold either
//! factually or as an obligation) and at least one premise holds as an
//! obligation. Converted rules attack in the deontic mode in the same way.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::conclusions::{ConclusionSet, Status};
use crate::literal::{Literal, Mode};
use crate::rule::RuleKind;
use crate::theory::DefeasibleTheory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RuleRef {
    rule: usize,
    converted: bool,
}

struct Premise {
    lit: usize,
    deontic: bool,
}

struct IRule {
    mode: Mode,
    kind: RuleKind,
    body: Vec<Premise>,
    head: usize,
}

struct Index {
    literals: Vec<Literal>,
    rules: Vec<IRule>,
    support: Vec<Vec<RuleRef>>,
    attack: Vec<Vec<RuleRef>>,
    /// `beaten_by[r]` = rules `t` with `t > r`.
    beaten_by: Vec<Vec<usize>>,
    /// Nodes whose conditions mention a given literal.
    dependents: Vec<Vec<usize>>,
    /// Rules mentioning a given literal in their body.
    occurs_in: Vec<Vec<usize>>,
    facts: Vec<usize>,
}

fn node(lit: usize, mode: Mode) -> usize {
    2 * lit
        + match mode {
            Mode::C => 0,
            Mode::O => 1,
        }
}

fn mode_of(node: usize) -> Mode {
    if node.is_multiple_of(2) {
        Mode::C
    } else {
        Mode::O
    }
}

impl Index {
    fn build(theory: &DefeasibleTheory) -> Self {
        let literals: Vec<Literal> = theory.literals().into_iter().collect();
        let lit_ix: HashMap<&Literal, usize> =
            literals.iter().enumerate().map(|(i, l)| (l, i)).collect();
        debug_assert!(literals
            .chunks(2)
            .all(|p| p.len() == 2 && p[0].is_complement_of(&p[1])));

        let rules: Vec<IRule> = theory
            .rules()
            .iter()
            .map(|r| IRule {
                mode: r.mode,
                kind: r.kind,
                body: r
                    .antecedents
                    .iter()
                    .map(|a| Premise {
                        lit: lit_ix[&a.literal],
                        deontic: a.deontic,
                    })
                    .collect(),
                head: lit_ix[&r.consequent],
            })
            .collect();

        let nodes = 2 * literals.len();
        let mut support = vec![Vec::new(); nodes];
        let mut attack = vec![Vec::new(); nodes];
        let mut dependents = vec![Vec::new(); literals.len()];
        let mut occurs_in = vec![Vec::new(); literals.len()];
        for (i, r) in rules.iter().enumerate() {
            let mut targets = vec![(r.mode, false)];
            if r.mode == Mode::C && r.kind == RuleKind::Strict {
                targets.push((Mode::O, true));
            }
            for (m, converted) in targets {
                let rr = RuleRef { rule: i, converted };
                if r.kind != RuleKind::Defeater {
                    support[node(r.head, m)].push(rr);
                }
                attack[node(r.head ^ 1, m)].push(rr);
                for p in &r.body {
                    dependents[p.lit].push(node(r.head, m));
                    dependents[p.lit].push(node(r.head ^ 1, m));
                }
            }
            for p in &r.body {
                occurs_in[p.lit].push(i);
            }
        }
        for d in dependents.iter_mut().chain(occurs_in.iter_mut()) {
            d.sort_unstable();
            d.dedup();
        }

        let label_ix: HashMap<&str, usize> = theory
            .rules()
            .iter()
            .enumerate()
            .map(|(i, r)| (&*r.label, i))
            .collect();
        let mut beaten_by = vec![Vec::new(); rules.len()];
        for (w, l) in theory.superiority() {
            beaten_by[label_ix[&**l]].push(label_ix[&**w]);
        }

        let facts = theory.facts().iter().map(|f| lit_ix[f]).collect();
        Index {
            literals,
            rules,
            support,
            attack,
            beaten_by,
            dependents,
            occurs_in,
            facts,
        }
    }
}

/// Truth of a premise set under one layer's positive or negative tags.
struct Layer<'a> {
    tags: &'a [bool],
}

impl Layer<'_> {
    fn at(&self, lit: usize, mode: Mode) -> bool {
        self.tags[node(lit, mode)]
    }

    /// All premises hold positively (for conversion: factual premises may
    /// hold in either mode, and one premise must hold deontically).
    fn all_hold(&self, r: &IRule, converted: bool) -> bool {
        if !converted {
            return r
                .body
                .iter()
                .all(|p| self.at(p.lit, if p.deontic { Mode::O } else { Mode::C }));
        }
        let each = r.body.iter().all(|p| {
            if p.deontic {
                self.at(p.lit, Mode::O)
            } else {
                self.at(p.lit, Mode::C) || self.at(p.lit, Mode::O)
            }
        });
        each && r.body.iter().any(|p| self.at(p.lit, Mode::O))
    }

    /// Some premise is refuted (this layer holds negative tags).
    fn some_fails(&self, r: &IRule, converted: bool) -> bool {
        if !converted {
            return r
                .body
                .iter()
                .any(|p| self.at(p.lit, if p.deontic { Mode::O } else { Mode::C }));
        }
        let one_fails = r.body.iter().any(|p| {
            if p.deontic {
                self.at(p.lit, Mode::O)
            } else {
                self.at(p.lit, Mode::C) && self.at(p.lit, Mode::O)
            }
        });
        one_fails || r.body.iter().all(|p| self.at(p.lit, Mode::O))
    }
}

fn definite_layer(ix: &Index) -> Vec<bool> {
    let mut proved = vec![false; 2 * ix.literals.len()];
    let mut queue = VecDeque::new();
    for &f in &ix.facts {
        let n = node(f, Mode::C);
        if !proved[n] {
            proved[n] = true;
            queue.push_back(f);
        }
    }
    let try_rule = |i: usize, proved: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
        let r = &ix.rules[i];
        if r.kind != RuleKind::Strict {
            return;
        }
        let mut hits = Vec::with_capacity(2);
        {
            let layer = Layer { tags: proved };
            if layer.all_hold(r, false) {
                hits.push(node(r.head, r.mode));
            }
            if r.mode == Mode::C && layer.all_hold(r, true) {
                hits.push(node(r.head, Mode::O));
            }
        }
        for n in hits {
            if !proved[n] {
                proved[n] = true;
                queue.push_back(n / 2);
            }
        }
    };
    for i in 0..ix.rules.len() {
        try_rule(i, &mut proved, &mut queue);
    }
    while let Some(lit) = queue.pop_front() {
        for &i in &ix.occurs_in[lit] {
            try_rule(i, &mut proved, &mut queue);
        }
    }
    proved
}

struct Defeasible<'a> {
    ix: &'a Index,
    definite: &'a [bool],
    plus: Vec<bool>,
    minus: Vec<bool>,
}

impl Defeasible<'_> {
    fn applicable(&self, rr: RuleRef) -> bool {
        Layer { tags: &self.plus }.all_hold(&self.ix.rules[rr.rule], rr.converted)
    }

    fn discarded(&self, rr: RuleRef) -> bool {
        Layer { tags: &self.minus }.some_fails(&self.ix.rules[rr.rule], rr.converted)
    }

    /// Supporting rules of `n` that beat attacker `a`.
    fn winners_over(&self, n: usize, a: RuleRef) -> impl Iterator<Item = RuleRef> + '_ {
        let support = &self.ix.support[n];
        self.ix.beaten_by[a.rule]
            .iter()
            .filter_map(move |&t| support.iter().copied().find(|s| s.rule == t))
    }

    fn can_plus(&self, n: usize) -> bool {
        if self.definite[n] {
            return true;
        }
        if self.definite[n ^ 2] {
            return false;
        }
        self.ix.support[n].iter().any(|&s| self.applicable(s))
            && self.ix.attack[n].iter().all(|&a| {
                self.discarded(a) || self.winners_over(n, a).any(|t| self.applicable(t))
            })
    }

    fn can_minus(&self, n: usize) -> bool {
        if self.definite[n] {
            return false;
        }
        if self.definite[n ^ 2] {
            return true;
        }
        self.ix.support[n].iter().all(|&s| self.discarded(s))
            || self.ix.attack[n].iter().any(|&a| {
                self.applicable(a) && self.winners_over(n, a).all(|t| self.discarded(t))
            })
    }

    fn run(&mut self) {
        let nodes = self.plus.len();
        let mut queued = vec![true; nodes];
        let mut queue: VecDeque<usize> = (0..nodes).collect();
        while let Some(n) = queue.pop_front() {
            queued[n] = false;
            let mut changed = false;
            if !self.plus[n] && self.can_plus(n) {
                self.plus[n] = true;
                changed = true;
            }
            if !self.minus[n] && self.can_minus(n) {
                self.minus[n] = true;
                changed = true;
            }
            debug_assert!(!(self.plus[n] && self.minus[n]));
            if changed {
                for &d in &self.ix.dependents[n / 2] {
                    if !queued[d] {
                        queued[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
    }
}

/// Computes the conclusions of a (validated) theory.
pub fn prove(theory: &DefeasibleTheory) -> ConclusionSet {
    let ix = Index::build(theory);
    let definite = definite_layer(&ix);
    let nodes = definite.len();
    let mut d = Defeasible {
        ix: &ix,
        definite: &definite,
        plus: vec![false; nodes],
        minus: vec![false; nodes],
    };
    d.run();

    let entries: BTreeMap<(Literal, Mode), Status> = (0..nodes)
        .map(|n| {
            (
                (ix.literals[n / 2].clone(), mode_of(n)),
                Status {
                    definite: definite[n],
                    defeasible: d.plus[n],
                },
            )
        })
        .collect();
    ConclusionSet::from_entries(entries)
}
