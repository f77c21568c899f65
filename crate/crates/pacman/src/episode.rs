use rand::Rng;

use crate::env::PacmanEnv;
use crate::state::{Action, Event, GameState, StepOutcome};

/// One transition of an episode.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub state: GameState,
    pub action: Action,
    pub outcome: StepOutcome,
}

#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn final_state(&self) -> Option<&GameState> {
        self.steps.last().map(|s| &s.outcome.next)
    }

    pub fn score(&self) -> i64 {
        self.final_state().map_or(0, |s| s.score)
    }

    pub fn total_reward(&self) -> i64 {
        self.steps.iter().map(|s| s.outcome.reward).sum()
    }

    pub fn won(&self) -> bool {
        self.final_state()
            .is_some_and(|s| s.outcome == crate::state::Outcome::Win)
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        self.steps.iter().flat_map(|s| s.outcome.events.iter().copied())
    }
}

/// Plays from the initial state until the game ends or `max_steps` moves
/// were made. The policy sees the state and its legal actions.
pub fn run_episode<P, R>(env: &PacmanEnv, mut policy: P, rng: &mut R, max_steps: usize) -> Trace
where
    P: FnMut(&GameState, &[Action], &mut R) -> Action,
    R: Rng,
{
    let mut trace = Trace::default();
    let mut s = env.initial_state();
    while !s.is_terminal() && trace.steps.len() < max_steps {
        let legal = env.legal_actions(&s);
        let a = policy(&s, &legal, rng);
        let outcome = env.step(&s, a, rng).expect("policy chose a legal action");
        let next = outcome.next.clone();
        trace.steps.push(TraceStep {
            state: s,
            action: a,
            outcome,
        });
        s = next;
    }
    trace
}
