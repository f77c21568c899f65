//! The normative supervisor: turns a state plus a normative system into a
//! defeasible theory, answers compliance queries against its conclusions and
//! filters an agent's preferred actions at execution time.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::sync::Arc;

use ngrl_ddl::{
    contrapositive_closure, prove, Atom, ConclusionSet, DefeasibleTheory, Literal, Mode,
    ProofTag, Rule, TheoryError,
};
use ngrl_norms::{compile, CompileError, NormativeSystem};
use ngrl_pacman::{Action, GameState, PacmanEnv};
use parking_lot::{Mutex, RwLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SupervisorError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("generated theory is invalid: {0}")]
    Theory(#[from] TheoryError),
    #[error("cannot filter an empty ranking")]
    EmptyRanking,
}

/// Maps environment states to fact literals and actions to atoms.
pub trait Labelling {
    type State: Hash;
    type Action: Clone + PartialEq + fmt::Display;

    /// The action alphabet, in a fixed order.
    fn actions(&self) -> Vec<Self::Action>;
    fn atom(&self, action: &Self::Action) -> Atom;
    fn facts(&self, state: &Self::State) -> BTreeSet<Literal>;
}

/// Labelling for theories given directly as fact sets; actions are atoms.
#[derive(Clone, Debug)]
pub struct FactLabelling {
    pub actions: Vec<Atom>,
}

impl Labelling for FactLabelling {
    type State = BTreeSet<Literal>;
    type Action = Atom;

    fn actions(&self) -> Vec<Atom> {
        self.actions.clone()
    }

    fn atom(&self, action: &Atom) -> Atom {
        action.clone()
    }

    fn facts(&self, state: &BTreeSet<Literal>) -> BTreeSet<Literal> {
        state.clone()
    }
}

/// Pac-Man vocabulary: `move(d)` actions, `scared(G)` while a ghost's timer
/// runs and `at(G,d)` when moving in direction `d` could meet ghost `G` —
/// Pac-Man's target cell is the ghost's cell or one the ghost can step to.
/// `at(G,stop)` thus means the ghost is next to Pac-Man.
#[derive(Clone, Debug)]
pub struct PacmanLabelling {
    env: PacmanEnv,
}

impl PacmanLabelling {
    pub fn new(env: PacmanEnv) -> Self {
        PacmanLabelling { env }
    }

    pub fn env(&self) -> &PacmanEnv {
        &self.env
    }
}

pub fn action_atom(a: Action) -> Atom {
    Atom::new(format!("move({})", a.name()))
}

impl Labelling for PacmanLabelling {
    type State = GameState;
    type Action = Action;

    fn actions(&self) -> Vec<Action> {
        Action::ALL.to_vec()
    }

    fn atom(&self, action: &Action) -> Atom {
        action_atom(*action)
    }

    fn facts(&self, s: &GameState) -> BTreeSet<Literal> {
        let mut facts = BTreeSet::new();
        for g in s.active_ghosts() {
            let name = g.color.ghost_name();
            if g.is_scared() {
                facts.insert(Literal::pos(format!("scared({name})")));
            }
            for a in Action::ALL {
                let Some(to) = self.env.target(s.pacman, a) else {
                    continue;
                };
                if to == g.cell || self.env.neighbors(g.cell).any(|c| c == to) {
                    facts.insert(Literal::pos(format!("at({name},{})", a.name())));
                }
            }
        }
        facts
    }
}

/// Compliance of one action in one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport<A> {
    pub action: A,
    pub compliant: bool,
    pub violations: usize,
}

/// Per-action compliance for a state; `compliant` iff `violations == 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceReport<A> {
    pub state_hash: u64,
    pub actions: Vec<ActionReport<A>>,
}

/// Compliance oracle for one normative system. Conclusions are cached per
/// fact set, since the same situations recur constantly during training;
/// the cache is safe to share between threads.
pub struct Supervisor<L: Labelling> {
    labelling: L,
    rules: Vec<Rule>,
    superiority: Vec<(String, String)>,
    alphabet: Vec<(L::Action, Literal)>,
    cache: RwLock<HashMap<BTreeSet<Literal>, Arc<ConclusionSet>>>,
    trace: Option<Mutex<Box<dyn Write + Send>>>,
}

impl<L: Labelling> fmt::Debug for Supervisor<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Supervisor")
            .field("rules", &self.rules.len())
            .field("superiority", &self.superiority.len())
            .field("cached", &self.cache.read().len())
            .finish()
    }
}

impl<L: Labelling> Supervisor<L> {
    pub fn new(labelling: L, system: &NormativeSystem) -> Result<Self, SupervisorError> {
        let actions = labelling.actions();
        let atoms: Vec<Atom> = actions.iter().map(|a| labelling.atom(a)).collect();
        let compiled = compile(system, &atoms)?;
        let rules = contrapositive_closure(&compiled.rules);
        let alphabet = actions
            .into_iter()
            .zip(atoms)
            .map(|(a, atom)| {
                (
                    a,
                    Literal {
                        atom,
                        positive: true,
                    },
                )
            })
            .collect();
        let sup = Supervisor {
            labelling,
            rules,
            superiority: compiled.superiority,
            alphabet,
            cache: RwLock::new(HashMap::new()),
            trace: None,
        };
        // Reject bad priorities up front rather than on the first query.
        sup.theory_for(BTreeSet::new())?;
        Ok(sup)
    }

    /// Writes one line per compliance query:
    /// `query|exec <state hash> <action> <compliant> <violations>`.
    pub fn with_trace(mut self, sink: Box<dyn Write + Send>) -> Self {
        self.trace = Some(Mutex::new(sink));
        self
    }

    pub fn labelling(&self) -> &L {
        &self.labelling
    }

    /// Compiled rules including contrapositives.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn superiority(&self) -> &[(String, String)] {
        &self.superiority
    }

    pub fn cached_theories(&self) -> usize {
        self.cache.read().len()
    }

    fn theory_for(&self, facts: BTreeSet<Literal>) -> Result<DefeasibleTheory, TheoryError> {
        DefeasibleTheory::new(facts, self.rules.clone(), self.superiority.iter().cloned())
    }

    /// `Th(s, N)`: the state's facts, the compiled norms and the
    /// non-concurrence constraints.
    pub fn build_theory(&self, s: &L::State) -> Result<DefeasibleTheory, SupervisorError> {
        Ok(self.theory_for(self.labelling.facts(s))?)
    }

    pub fn conclusions(&self, s: &L::State) -> Arc<ConclusionSet> {
        let facts = self.labelling.facts(s);
        if let Some(c) = self.cache.read().get(&facts) {
            return c.clone();
        }
        let theory = self
            .theory_for(facts.clone())
            .expect("rules and superiority were validated at construction");
        let c = Arc::new(prove(&theory));
        self.cache.write().entry(facts).or_insert(c).clone()
    }

    fn literal(&self, a: &L::Action) -> Literal {
        match self.alphabet.iter().find(|(b, _)| b == a) {
            Some((_, l)) => l.clone(),
            None => Literal {
                atom: self.labelling.atom(a),
                positive: true,
            },
        }
    }

    fn count(&self, c: &ConclusionSet, a: &L::Action) -> usize {
        let own = self.literal(a);
        let mut n = usize::from(c.holds(&own.complement(), Mode::O, ProofTag::PlusPartial));
        for (_, other) in &self.alphabet {
            if *other != own && c.holds(other, Mode::O, ProofTag::PlusPartial) {
                n += 1;
            }
        }
        n
    }

    fn is_compliant_in(c: &ConclusionSet, lit: &Literal) -> bool {
        !c.holds(&lit.complement(), Mode::O, ProofTag::PlusPartial)
    }

    fn log(&self, kind: &str, s: &L::State, a: &L::Action, compliant: bool, violations: usize) {
        if let Some(t) = &self.trace {
            let line = format!(
                "{kind} {:016x} {a} {compliant} {violations}\n",
                state_hash(s)
            );
            // Tracing is best-effort; a failing sink must not stop an experiment.
            let _ = t.lock().write_all(line.as_bytes());
        }
    }

    /// False iff `+∂_O ¬a` is provable in the state's theory.
    pub fn is_compliant(&self, s: &L::State, a: &L::Action) -> bool {
        let c = self.conclusions(s);
        let ok = Self::is_compliant_in(&c, &self.literal(a));
        if self.trace.is_some() {
            self.log("query", s, a, ok, self.count(&c, a));
        }
        ok
    }

    /// Deontic action conclusions contradicted by taking `a`: `+∂_O ¬a`,
    /// and `+∂_O a'` for every other action `a'`.
    pub fn violation_count(&self, s: &L::State, a: &L::Action) -> usize {
        let c = self.conclusions(s);
        let n = self.count(&c, a);
        if self.trace.is_some() {
            self.log("query", s, a, Self::is_compliant_in(&c, &self.literal(a)), n);
        }
        n
    }

    /// The subset of `legal` that complies; one theory per state.
    pub fn compliant_actions(&self, s: &L::State, legal: &[L::Action]) -> Vec<L::Action> {
        let c = self.conclusions(s);
        legal
            .iter()
            .filter(|a| Self::is_compliant_in(&c, &self.literal(a)))
            .cloned()
            .collect()
    }

    pub fn report(&self, s: &L::State, legal: &[L::Action]) -> ComplianceReport<L::Action> {
        let c = self.conclusions(s);
        ComplianceReport {
            state_hash: state_hash(s),
            actions: legal
                .iter()
                .map(|a| ActionReport {
                    action: a.clone(),
                    compliant: Self::is_compliant_in(&c, &self.literal(a)),
                    violations: self.count(&c, a),
                })
                .collect(),
        }
    }

    /// First compliant action of `ranking`; if there is none, the first of
    /// those with the fewest violations.
    pub fn monitor_filter(
        &self,
        s: &L::State,
        ranking: &[L::Action],
    ) -> Result<L::Action, SupervisorError> {
        let c = self.conclusions(s);
        let mut best: Option<(&L::Action, usize)> = None;
        for a in ranking {
            if Self::is_compliant_in(&c, &self.literal(a)) {
                return Ok(a.clone());
            }
            let n = self.count(&c, a);
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((a, n));
            }
        }
        best.map(|(a, _)| a.clone())
            .ok_or(SupervisorError::EmptyRanking)
    }

    /// Records that `a` was executed in `s`; returns whether it complied.
    pub fn record_execution(&self, s: &L::State, a: &L::Action) -> bool {
        let c = self.conclusions(s);
        let ok = Self::is_compliant_in(&c, &self.literal(a));
        if self.trace.is_some() {
            self.log("exec", s, a, ok, self.count(&c, a));
        }
        ok
    }
}

impl<L: Labelling> Drop for Supervisor<L> {
    fn drop(&mut self) {
        if let Some(t) = &self.trace {
            let _ = t.lock().flush();
        }
    }
}

pub fn state_hash<S: Hash>(s: &S) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

pub type PacmanSupervisor = Supervisor<PacmanLabelling>;

#[cfg(test)]
mod tests {
    use super::*;
    use ngrl_pacman::{Cell, Layout, EnvConfig, MINI_LAYOUT};

    fn env() -> PacmanEnv {
        PacmanEnv::new(Arc::new(Layout::parse(MINI_LAYOUT).unwrap()), EnvConfig::default())
    }

    #[test]
    fn at_is_pessimistic() {
        let l = PacmanLabelling::new(env());
        let mut s = l.env().initial_state();
        s.pacman = Cell::new(2, 1);
        s.ghosts[0].cell = Cell::new(3, 0);
        let facts: Vec<String> = l.facts(&s).iter().map(|f| f.to_string()).collect();
        // North lands next to the ghost, east likewise; neither south, west nor stop can meet it.
        assert_eq!(facts, ["at(blueGhost,east)", "at(blueGhost,north)"]);
        s.ghosts[0].scared = 2;
        assert!(l.facts(&s).contains(&Literal::pos("scared(blueGhost)")));
    }

    #[test]
    fn stop_is_flagged_when_ghost_is_adjacent() {
        let l = PacmanLabelling::new(env());
        let mut s = l.env().initial_state();
        s.pacman = Cell::new(3, 0);
        let facts = l.facts(&s);
        assert!(facts.contains(&Literal::pos("at(blueGhost,stop)")));
        assert!(facts.contains(&Literal::pos("at(blueGhost,east)")));
    }
}
