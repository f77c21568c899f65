use std::collections::HashMap;

use ngrl_pacman::{Action, GameState};

use super::hyper::Hyperparams;
use super::select::QVec;
use super::{Learner, QFunction};

/// Tabular state identity: Pac-Man's cell, each ghost's cell, whether it is
/// active and whether it is scared, then the food and capsule bitsets.
/// Scared timers are coarsened to scared/not scared to keep tables small.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Box<[u64]>);

impl StateKey {
    pub fn of(s: &GameState) -> Self {
        let mut w = Vec::with_capacity(1 + s.ghosts.len() + s.food.words().len() + 1);
        w.push(s.pacman.x as u64 | (s.pacman.y as u64) << 16);
        for g in &s.ghosts {
            w.push(
                g.cell.x as u64
                    | (g.cell.y as u64) << 16
                    | (g.active as u64) << 32
                    | (g.is_scared() as u64) << 33,
            );
        }
        w.extend_from_slice(s.food.words());
        w.extend_from_slice(s.capsules.words());
        StateKey(w.into_boxed_slice())
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        StateKey(words.into_boxed_slice())
    }
}

pub type QRow = [QVec; 5];

/// Vector Q-table, zero for pairs never updated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TabularQ {
    table: HashMap<StateKey, QRow>,
}

impl TabularQ {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn row(&self, key: &StateKey) -> Option<&QRow> {
        self.table.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateKey, &QRow)> {
        self.table.iter()
    }

    pub fn insert(&mut self, key: StateKey, row: QRow) {
        self.table.insert(key, row);
    }

    /// Row values for the given actions of a stored key.
    pub fn values_at(&self, key: &StateKey, legal: &[Action]) -> Vec<(Action, QVec)> {
        let row = self.table.get(key);
        legal
            .iter()
            .map(|&a| (a, row.map_or_else(QVec::default, |r| r[a.index()])))
            .collect()
    }

    fn best(&self, key: &StateKey, legal: &[Action]) -> QVec {
        if legal.is_empty() {
            return QVec::default();
        }
        let row = self.table.get(key);
        let get = |a: Action| row.map_or_else(QVec::default, |r| r[a.index()]);
        legal.iter().fold(
            QVec::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            |m, &a| {
                let q = get(a);
                QVec::new(m.x.max(q.x), m.n.max(q.n))
            },
        )
    }
}

impl QFunction for TabularQ {
    fn q(&self, s: &GameState, a: Action) -> QVec {
        self.table
            .get(&StateKey::of(s))
            .map_or_else(QVec::default, |r| r[a.index()])
    }

    fn values(&self, s: &GameState, legal: &[Action]) -> Vec<(Action, QVec)> {
        self.values_at(&StateKey::of(s), legal)
    }
}

impl Learner for TabularQ {
    /// Per objective: `Q_i(s,a) += α(r_i + γ·max_a' Q_i(s',a') − Q_i(s,a))`,
    /// with no bootstrap from terminal states.
    fn update(
        &mut self,
        s: &GameState,
        a: Action,
        r: QVec,
        next: &GameState,
        next_legal: &[Action],
        hp: &Hyperparams,
    ) {
        let boot = if next.is_terminal() {
            QVec::default()
        } else {
            self.best(&StateKey::of(next), next_legal)
        };
        let q = &mut self.table.entry(StateKey::of(s)).or_default()[a.index()];
        q.x += hp.alpha * (r.x + hp.gamma * boot.x - q.x);
        q.n += hp.alpha * (r.n + hp.gamma * boot.n - q.n);
    }
}
