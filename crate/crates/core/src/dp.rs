//! Exact dynamic programming on small layouts, used as an oracle for the
//! learners: the game is enumerated into an explicit MDP with the ghosts
//! marginalized into transition probabilities, and the compliance and task
//! objectives are solved lexicographically.

use std::collections::HashMap;

use ngrl_pacman::{Action, GameState, PacmanEnv};

use crate::agents::QVec;
use crate::supervisor::PacmanSupervisor;

const TERMINAL: u32 = u32::MAX;

/// A set of actions as a bitmask over [`Action::index`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ActionSet(u8);

impl ActionSet {
    pub fn insert(&mut self, a: Action) {
        self.0 |= 1 << a.index();
    }

    pub fn contains(self, a: Action) -> bool {
        self.0 & (1 << a.index()) != 0
    }

    pub fn is_subset(self, other: ActionSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Action> {
        Action::ALL.into_iter().filter(move |&a| self.contains(a))
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        let mut s = ActionSet::default();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

/// Enumerated compliance MDP. State-action pairs are stored flat: state `i`
/// owns pairs `sa_start[i]..sa_start[i+1]`, pair `j` owns transitions
/// `tr_start[j]..tr_start[j+1]`.
#[derive(Debug)]
pub struct ExplicitMdp {
    states: Vec<GameState>,
    sa_start: Vec<u32>,
    sa_action: Vec<Action>,
    sa_compliant: Vec<bool>,
    sa_reward: Vec<f64>,
    tr_start: Vec<u32>,
    tr_prob: Vec<f64>,
    tr_next: Vec<u32>,
}

/// Lexicographic optimum: `Q_N*` first, then the best task values among
/// policies that attain it.
#[derive(Clone, Debug)]
pub struct Solution {
    pub q_n: Vec<f64>,
    pub q_x: Vec<f64>,
    /// Per state: actions attaining `max Q_N*`.
    pub eth: Vec<ActionSet>,
    /// Per state: members of `eth` attaining the best `Q_x`.
    pub opt: Vec<ActionSet>,
}

impl ExplicitMdp {
    /// Enumerates every state reachable from the start. `None` if there are
    /// more than `limit`.
    pub fn build(env: &PacmanEnv, supervisor: &PacmanSupervisor, limit: usize) -> Option<Self> {
        let states = env.reachable_states(limit)?;
        let index: HashMap<&GameState, u32> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let mut m = ExplicitMdp {
            sa_start: Vec::with_capacity(states.len() + 1),
            sa_action: Vec::new(),
            sa_compliant: Vec::new(),
            sa_reward: Vec::new(),
            tr_start: Vec::new(),
            tr_prob: Vec::new(),
            tr_next: Vec::new(),
            states: Vec::new(),
        };
        for s in &states {
            m.sa_start.push(m.sa_action.len() as u32);
            let compliant = supervisor.compliant_actions(s, &env.legal_actions(s));
            for a in env.legal_actions(s) {
                m.tr_start.push(m.tr_prob.len() as u32);
                m.sa_action.push(a);
                m.sa_compliant.push(compliant.contains(&a));
                let mut reward = 0.0;
                for (p, o) in env.transitions(s, a).expect("legal action") {
                    reward += p * o.reward as f64;
                    let next = if o.next.is_terminal() {
                        TERMINAL
                    } else {
                        index[&o.next.markov()]
                    };
                    m.tr_prob.push(p);
                    m.tr_next.push(next);
                }
                m.sa_reward.push(reward);
            }
        }
        m.sa_start.push(m.sa_action.len() as u32);
        m.tr_start.push(m.tr_prob.len() as u32);
        drop(index);
        m.states = states;
        Some(m)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &GameState {
        &self.states[i]
    }

    fn pairs(&self, i: usize) -> std::ops::Range<usize> {
        self.sa_start[i] as usize..self.sa_start[i + 1] as usize
    }

    pub fn actions(&self, i: usize) -> &[Action] {
        &self.sa_action[self.pairs(i)]
    }

    pub fn compliant(&self, i: usize) -> ActionSet {
        self.pairs(i)
            .filter(|&j| self.sa_compliant[j])
            .map(|j| self.sa_action[j])
            .collect()
    }

    fn expect(&self, j: usize, v: &[f64]) -> f64 {
        let r = self.tr_start[j] as usize..self.tr_start[j + 1] as usize;
        self.tr_prob[r.clone()]
            .iter()
            .zip(&self.tr_next[r])
            .map(|(&p, &n)| if n == TERMINAL { 0.0 } else { p * v[n as usize] })
            .sum()
    }

    fn reward_n(&self, j: usize, penalty: f64) -> f64 {
        if self.sa_compliant[j] {
            0.0
        } else {
            penalty
        }
    }

    /// In-place value iteration over the actions in `within` until the
    /// largest change is below `tol`; returns the Q-values of all pairs.
    fn iterate(
        &self,
        reward: impl Fn(usize) -> f64,
        within: &[ActionSet],
        gamma: f64,
        tol: f64,
    ) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        loop {
            let mut delta: f64 = 0.0;
            for i in 0..self.len() {
                let best = self
                    .pairs(i)
                    .filter(|&j| within[i].contains(self.sa_action[j]))
                    .map(|j| reward(j) + gamma * self.expect(j, &v))
                    .fold(f64::NEG_INFINITY, f64::max);
                delta = delta.max((best - v[i]).abs());
                v[i] = best;
            }
            if delta < tol {
                break;
            }
        }
        (0..self.sa_action.len())
            .map(|j| reward(j) + gamma * self.expect(j, &v))
            .collect()
    }

    /// Sets of pairs within `tol` of the per-state maximum among `within`.
    fn argmax_sets(&self, q: &[f64], within: &[ActionSet], tol: f64) -> Vec<ActionSet> {
        (0..self.len())
            .map(|i| {
                let inside = || self.pairs(i).filter(|&j| within[i].contains(self.sa_action[j]));
                let best = inside().map(|j| q[j]).fold(f64::NEG_INFINITY, f64::max);
                inside()
                    .filter(|&j| q[j] >= best - tol)
                    .map(|j| self.sa_action[j])
                    .collect()
            })
            .collect()
    }

    /// Solves `Q_N*` for penalty `p`, then `Q_x` over the actions attaining
    /// it. `tol` bounds both the iteration residual and set membership; the
    /// compliance tolerance scales with `|p|`.
    pub fn solve(&self, penalty: f64, gamma: f64, tol: f64) -> Solution {
        let all: Vec<ActionSet> = (0..self.len())
            .map(|i| self.actions(i).iter().copied().collect())
            .collect();
        let q_n = self.iterate(|j| self.reward_n(j, penalty), &all, gamma, tol * penalty.abs());
        let eth = self.argmax_sets(&q_n, &all, 1e3 * tol * penalty.abs());
        let q_x = self.iterate(|j| self.sa_reward[j], &eth, gamma, tol);
        let opt = self.argmax_sets(&q_x, &eth, 1e3 * tol);
        Solution { q_n, q_x, eth, opt }
    }

    /// Vector Q-values of state `i` under a solution, in legal order.
    pub fn values(&self, sol: &Solution, i: usize) -> Vec<(Action, QVec)> {
        self.pairs(i)
            .map(|j| (self.sa_action[j], QVec::new(sol.q_x[j], sol.q_n[j])))
            .collect()
    }

    /// State values `(V_x, V_N)` of a deterministic policy.
    pub fn evaluate(
        &self,
        policy: &[Action],
        penalty: f64,
        gamma: f64,
        tol: f64,
    ) -> (Vec<f64>, Vec<f64>) {
        let chosen: Vec<usize> = (0..self.len())
            .map(|i| {
                self.pairs(i)
                    .find(|&j| self.sa_action[j] == policy[i])
                    .expect("policy picks a legal action")
            })
            .collect();
        let run = |reward: &dyn Fn(usize) -> f64, scale: f64| {
            let mut v = vec![0.0; self.len()];
            loop {
                let mut delta: f64 = 0.0;
                for (i, &j) in chosen.iter().enumerate() {
                    let nv = reward(j) + gamma * self.expect(j, &v);
                    delta = delta.max((nv - v[i]).abs());
                    v[i] = nv;
                }
                if delta < tol * scale {
                    return v;
                }
            }
        };
        let vx = run(&|j| self.sa_reward[j], 1.0);
        let vn = run(&|j| self.reward_n(j, penalty), penalty.abs());
        (vx, vn)
    }

    /// Per-state maxima of `q` over the actions in `within`.
    pub fn state_values(&self, q: &[f64], within: &[ActionSet]) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                self.pairs(i)
                    .filter(|&j| within[i].contains(self.sa_action[j]))
                    .map(|j| q[j])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }
}
