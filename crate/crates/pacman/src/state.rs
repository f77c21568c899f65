use std::fmt;

use crate::layout::{Cell, GhostColor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    North,
    South,
    East,
    West,
    Stop,
}

impl Action {
    /// Fixed order, also used for tie-breaking.
    pub const ALL: [Action; 5] = [
        Action::North,
        Action::South,
        Action::East,
        Action::West,
        Action::Stop,
    ];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Action::North => (0, -1),
            Action::South => (0, 1),
            Action::East => (1, 0),
            Action::West => (-1, 0),
            Action::Stop => (0, 0),
        }
    }

    pub fn reverse(self) -> Action {
        match self {
            Action::North => Action::South,
            Action::South => Action::North,
            Action::East => Action::West,
            Action::West => Action::East,
            Action::Stop => Action::Stop,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::North => "north",
            Action::South => "south",
            Action::East => "east",
            Action::West => "west",
            Action::Stop => "stop",
        }
    }

    pub fn from_name(name: &str) -> Option<Action> {
        Action::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed-capacity bitset over the layout's food or capsule list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Bits(words)
    }

    pub fn get(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn clear(&mut self, i: usize) {
        if let Some(w) = self.0.get_mut(i / 64) {
            *w &= !(1u64 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        Bits(words)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhostState {
    pub color: GhostColor,
    pub cell: Cell,
    /// Steps of fright remaining; 0 when not scared.
    pub scared: u32,
    /// Last move, for the no-reversal rule.
    pub heading: Option<Action>,
    /// False once eaten when eaten ghosts are removed rather than respawned.
    pub active: bool,
}

impl GhostState {
    pub fn is_scared(&self) -> bool {
        self.scared > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Ongoing,
    Win,
    Lose,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub pacman: Cell,
    pub ghosts: Vec<GhostState>,
    pub food: Bits,
    pub capsules: Bits,
    pub score: i64,
    pub steps: u32,
    pub outcome: Outcome,
}

impl GameState {
    pub fn is_terminal(&self) -> bool {
        self.outcome != Outcome::Ongoing
    }

    /// The same state with path-dependent counters zeroed, for use as an
    /// MDP state identity.
    pub fn markov(&self) -> GameState {
        GameState {
            score: 0,
            steps: 0,
            ..self.clone()
        }
    }

    pub fn active_ghosts(&self) -> impl Iterator<Item = &GhostState> {
        self.ghosts.iter().filter(|g| g.active)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    AteFood,
    AteCapsule,
    AteGhost(GhostColor),
    Died,
    Won,
}

impl Event {
    pub const FOOD: i64 = 10;
    pub const GHOST: i64 = 200;
    pub const WIN: i64 = 500;
    pub const LOSE: i64 = -500;
    pub const TIME_PENALTY: i64 = -1;

    pub fn value(self) -> i64 {
        match self {
            Event::AteFood => Self::FOOD,
            Event::AteCapsule => 0,
            Event::AteGhost(_) => Self::GHOST,
            Event::Died => Self::LOSE,
            Event::Won => Self::WIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub next: GameState,
    /// Task reward: event values plus the time penalty.
    pub reward: i64,
    pub events: Vec<Event>,
}
