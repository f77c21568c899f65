//! Multi-objective Q-learning over the compliance MDP: the task reward
//! `R_x` from the game and the non-compliance reward `R_N,p` from the
//! supervisor, learned side by side and combined at selection time.

mod approx;
mod checkpoint;
mod hyper;
mod select;
mod tabular;

use ngrl_pacman::{run_episode, Action, Event, GameState, GhostColor, PacmanEnv, Trace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::supervisor::PacmanSupervisor;

pub use approx::{ApproxError, ConstantFeature, FeatureExtractor, LinearQ, PacmanFeatures};
pub use checkpoint::{CheckpointError, Checkpoint};
pub use hyper::{EpsilonSchedule, HyperError, Hyperparams};
pub use select::{epsilon_greedy, eth, opt, scalarized_select, tlq_select, QVec, Selector};
pub use tabular::{QRow, StateKey, TabularQ};

/// Read access to vector Q-values.
pub trait QFunction: Sync {
    fn q(&self, s: &GameState, a: Action) -> QVec;

    /// Values for `legal`, in the given order.
    fn values(&self, s: &GameState, legal: &[Action]) -> Vec<(Action, QVec)> {
        legal.iter().map(|&a| (a, self.q(s, a))).collect()
    }
}

pub trait Learner: QFunction {
    /// One Q-learning step on both objectives from the same transition.
    fn update(
        &mut self,
        s: &GameState,
        a: Action,
        r: QVec,
        next: &GameState,
        next_legal: &[Action],
        hp: &Hyperparams,
    );
}

/// The compliance MDP: an environment plus the supervisor's verdicts
/// turned into the reward `R_N,p(s,a) ∈ {p, 0}`.
#[derive(Clone, Copy)]
pub struct ComplianceMdp<'a> {
    pub env: &'a PacmanEnv,
    pub supervisor: &'a PacmanSupervisor,
    pub penalty: f64,
}

impl ComplianceMdp<'_> {
    /// `p` if `a` is not compliant in `s`, else 0. Depends on the state and
    /// action only, not on the outcome.
    pub fn noncompliance_reward(&self, s: &GameState, a: Action) -> f64 {
        if self.supervisor.is_compliant(s, &a) {
            0.0
        } else {
            self.penalty
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrainSummary {
    pub episodes: usize,
    pub steps: usize,
    pub wins: usize,
}

/// Epsilon-greedy Q-learning for `hp.train_episodes` episodes. The plain
/// learner never consults the supervisor, so its compliance estimates stay 0.
pub fn train<Q: Learner, R: Rng>(
    mdp: &ComplianceMdp<'_>,
    q: &mut Q,
    selector: Selector,
    hp: &Hyperparams,
    rng: &mut R,
) -> TrainSummary {
    let env = mdp.env;
    let mut summary = TrainSummary::default();
    for ep in 0..hp.train_episodes {
        let epsilon = hp.epsilon.at(ep);
        let mut s = env.initial_state();
        let mut legal = env.legal_actions(&s);
        for _ in 0..hp.max_steps {
            let a = epsilon_greedy(
                || selector.select(&q.values(&s, &legal)).expect("legal actions"),
                &legal,
                epsilon,
                rng,
            );
            let rn = if selector.uses_compliance() {
                mdp.noncompliance_reward(&s, a)
            } else {
                0.0
            };
            let out = env.step(&s, a, rng).expect("chosen action is legal");
            let next_legal = env.legal_actions(&out.next);
            q.update(&s, a, QVec::new(out.reward as f64, rn), &out.next, &next_legal, hp);
            summary.steps += 1;
            s = out.next;
            legal = next_legal;
            if s.is_terminal() {
                break;
            }
        }
        summary.wins += usize::from(s.outcome == ngrl_pacman::Outcome::Win);
        summary.episodes += 1;
    }
    summary
}

/// Deterministic policy from a Q-function and selector, optionally wrapped
/// by the supervisor's monitor filter.
pub struct GreedyPolicy<'a, Q: ?Sized> {
    pub q: &'a Q,
    pub selector: Selector,
    pub monitor: Option<&'a PacmanSupervisor>,
}

impl<Q: QFunction + ?Sized> GreedyPolicy<'_, Q> {
    pub fn act(&self, s: &GameState, legal: &[Action]) -> Action {
        let values = self.q.values(s, legal);
        match self.monitor {
            None => self.selector.select(&values).expect("legal actions"),
            Some(sup) => sup
                .monitor_filter(s, &self.selector.rank(&values))
                .expect("legal actions"),
        }
    }
}

/// Aggregate test results; sums only, so merging is order-independent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub games: usize,
    pub wins: usize,
    pub total_score: i64,
    pub steps: usize,
    /// Ghosts eaten per color, in layout color order.
    pub ghosts_eaten: Vec<(GhostColor, usize)>,
    /// Executed actions the supervisor deemed non-compliant.
    pub violations: usize,
}

impl EvalStats {
    pub fn merge(mut self, other: EvalStats) -> EvalStats {
        self.games += other.games;
        self.wins += other.wins;
        self.total_score += other.total_score;
        self.steps += other.steps;
        self.violations += other.violations;
        for (c, n) in other.ghosts_eaten {
            match self.ghosts_eaten.iter_mut().find(|(d, _)| *d == c) {
                Some(e) => e.1 += n,
                None => self.ghosts_eaten.push((c, n)),
            }
        }
        self.ghosts_eaten.sort();
        self
    }

    pub fn of_trace(env: &PacmanEnv, trace: &Trace, sup: Option<&PacmanSupervisor>) -> Self {
        let mut colors: Vec<(GhostColor, usize)> =
            env.layout().ghosts.iter().map(|g| (g.0, 0)).collect();
        colors.sort();
        colors.dedup();
        for e in trace.events() {
            if let Event::AteGhost(c) = e {
                if let Some(slot) = colors.iter_mut().find(|(d, _)| *d == c) {
                    slot.1 += 1;
                }
            }
        }
        let violations = sup.map_or(0, |sup| {
            trace
                .steps
                .iter()
                .filter(|t| !sup.record_execution(&t.state, &t.action))
                .count()
        });
        EvalStats {
            games: 1,
            wins: usize::from(trace.won()),
            total_score: trace.score(),
            steps: trace.steps.len(),
            ghosts_eaten: colors,
            violations,
        }
    }

    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.games as f64
    }

    pub fn avg_score(&self) -> f64 {
        self.total_score as f64 / self.games as f64
    }

    pub fn avg_ghosts(&self, color: GhostColor) -> f64 {
        self.ghosts_eaten
            .iter()
            .find(|(c, _)| *c == color)
            .map_or(0.0, |&(_, n)| n as f64 / self.games as f64)
    }

    pub fn avg_ghosts_total(&self) -> f64 {
        self.ghosts_eaten.iter().map(|(_, n)| *n).sum::<usize>() as f64 / self.games as f64
    }
}

/// Random stream `index` of the family rooted at `seed`. Episode `i` of an
/// evaluation always uses stream `i`, so parallel and sequential runs agree.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn play<Q: QFunction + ?Sized>(
    env: &PacmanEnv,
    policy: &GreedyPolicy<'_, Q>,
    rng: &mut ChaCha8Rng,
    max_steps: usize,
) -> Trace {
    run_episode(env, |s, legal, _| policy.act(s, legal), rng, max_steps)
}

/// Plays `episodes` test games in parallel. Violations are counted against
/// `audit` when given, whether or not the policy is monitored.
pub fn evaluate<Q: QFunction + ?Sized>(
    env: &PacmanEnv,
    policy: &GreedyPolicy<'_, Q>,
    audit: Option<&PacmanSupervisor>,
    episodes: usize,
    seed: u64,
    max_steps: usize,
) -> EvalStats {
    (0..episodes)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let trace = play(env, policy, &mut rng, max_steps);
            EvalStats::of_trace(env, &trace, audit)
        })
        .reduce(EvalStats::default, EvalStats::merge)
}
