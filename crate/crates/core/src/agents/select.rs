use std::cmp::Ordering;

use ngrl_pacman::Action;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Estimates for the task objective `x` and the compliance objective `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QVec {
    pub x: f64,
    pub n: f64,
}

impl QVec {
    pub fn new(x: f64, n: f64) -> Self {
        QVec { x, n }
    }
}

/// How an agent turns vector Q-values into a choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selector {
    /// Task objective only.
    PlainQ,
    /// `argmax Q_x + w·Q_N`.
    Scalarized { weight: f64 },
    /// Lexicographic on `min(Q_N, C_N)` then `Q_x`.
    Tlq { threshold: f64 },
}

impl Selector {
    pub fn name(&self) -> &'static str {
        match self {
            Selector::PlainQ => "plainQ",
            Selector::Scalarized { .. } => "scalarized",
            Selector::Tlq { .. } => "tlq",
        }
    }

    /// Whether learning needs the non-compliance reward at all.
    pub fn uses_compliance(&self) -> bool {
        !matches!(self, Selector::PlainQ)
    }

    /// Preference key, compared lexicographically; larger is better.
    pub fn key(&self, q: QVec) -> (f64, f64) {
        match *self {
            Selector::PlainQ => (q.x, 0.0),
            Selector::Scalarized { weight } => (q.x + weight * q.n, 0.0),
            Selector::Tlq { threshold } => (q.n.min(threshold), q.x),
        }
    }

    fn cmp(&self, a: QVec, b: QVec) -> Ordering {
        let (ka, kb) = (self.key(a), self.key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    }

    /// Best action; ties go to the earliest entry, so callers pass actions
    /// in the fixed order north, south, east, west, stop.
    pub fn select(&self, values: &[(Action, QVec)]) -> Option<Action> {
        let mut best: Option<(Action, QVec)> = None;
        for &(a, q) in values {
            if best.is_none_or(|(_, b)| self.cmp(q, b) == Ordering::Greater) {
                best = Some((a, q));
            }
        }
        best.map(|(a, _)| a)
    }

    /// All actions from most to least preferred, ties in input order.
    pub fn rank(&self, values: &[(Action, QVec)]) -> Vec<Action> {
        let mut v = values.to_vec();
        v.sort_by(|a, b| self.cmp(b.1, a.1));
        v.into_iter().map(|(a, _)| a).collect()
    }
}

pub fn scalarized_select(values: &[(Action, QVec)], weight: f64) -> Option<Action> {
    Selector::Scalarized { weight }.select(values)
}

pub fn tlq_select(values: &[(Action, QVec)], threshold: f64) -> Option<Action> {
    Selector::Tlq { threshold }.select(values)
}

/// `eth(s)`: actions maximizing `min(Q_N, C_N)`.
pub fn eth(values: &[(Action, QVec)], threshold: f64) -> Vec<Action> {
    let best = values
        .iter()
        .map(|(_, q)| q.n.min(threshold))
        .fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .filter(|(_, q)| q.n.min(threshold) == best)
        .map(|&(a, _)| a)
        .collect()
}

/// `opt(s)`: members of `eth(s)` maximizing `Q_x`.
pub fn opt(values: &[(Action, QVec)], threshold: f64) -> Vec<Action> {
    let e = eth(values, threshold);
    let inside: Vec<(Action, QVec)> = values
        .iter()
        .filter(|(a, _)| e.contains(a))
        .copied()
        .collect();
    let best = inside
        .iter()
        .map(|(_, q)| q.x)
        .fold(f64::NEG_INFINITY, f64::max);
    inside
        .iter()
        .filter(|(_, q)| q.x == best)
        .map(|&(a, _)| a)
        .collect()
}

/// With probability `epsilon` a uniformly random legal action, otherwise
/// `greedy()`. One uniform draw is always consumed, so runs whose greedy
/// choices agree consume the stream identically.
pub fn epsilon_greedy<R, G>(greedy: G, legal: &[Action], epsilon: f64, rng: &mut R) -> Action
where
    R: Rng + ?Sized,
    G: FnOnce() -> Action,
{
    if rng.gen::<f64>() < epsilon {
        *legal.choose(rng).expect("no legal actions")
    } else {
        greedy()
    }
}
