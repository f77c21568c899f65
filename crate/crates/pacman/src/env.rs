use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::layout::{Cell, Layout};
use crate::state::{Action, Bits, Event, GameState, GhostState, Outcome, StepOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("action `{0}` is not legal in this state")]
    IllegalAction(Action),
    #[error("the game is over")]
    Terminal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvConfig {
    /// Steps ghosts stay scared after a capsule is eaten.
    pub scared_duration: u32,
    /// Ghosts never reverse direction unless it is their only move.
    pub ghost_no_reversal: bool,
    /// Eaten ghosts return to their start cell; otherwise they leave the game.
    pub respawn_eaten_ghosts: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            scared_duration: 40,
            ghost_no_reversal: true,
            respawn_eaten_ghosts: true,
        }
    }
}

/// Game rules over a fixed layout. Each step Pac-Man moves first, then
/// every ghost moves uniformly at random among its options; collisions are
/// checked after each phase, so a ghost swapping cells with Pac-Man collides
/// in the first phase and a ghost stepping onto Pac-Man in the second.
#[derive(Clone, Debug)]
pub struct PacmanEnv {
    layout: Arc<Layout>,
    config: EnvConfig,
}

/// Result of Pac-Man's half of a step, before ghosts move.
struct Partial {
    state: GameState,
    reward: i64,
    events: Vec<Event>,
}

impl PacmanEnv {
    pub fn new(layout: Arc<Layout>, config: EnvConfig) -> Self {
        PacmanEnv { layout, config }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn layout_arc(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn initial_state(&self) -> GameState {
        GameState {
            pacman: self.layout.pacman_start,
            ghosts: self
                .layout
                .ghosts
                .iter()
                .map(|&(color, cell)| GhostState {
                    color,
                    cell,
                    scared: 0,
                    heading: None,
                    active: true,
                })
                .collect(),
            food: Bits::full(self.layout.food.len()),
            capsules: Bits::full(self.layout.capsules.len()),
            score: 0,
            steps: 0,
            outcome: Outcome::Ongoing,
        }
    }

    /// Cell reached from `cell` by `a`, or `None` if a wall is in the way.
    pub fn target(&self, cell: Cell, a: Action) -> Option<Cell> {
        let (dx, dy) = a.delta();
        let (x, y) = (cell.x as i32 + dx, cell.y as i32 + dy);
        (!self.layout.is_wall(x, y)).then(|| Cell::new(x as u16, y as u16))
    }

    /// Open cells one move away (excluding `cell` itself).
    pub fn neighbors(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        Action::ALL[..4].iter().filter_map(move |&a| self.target(cell, a))
    }

    /// Pac-Man's moves in fixed order; `Stop` is always legal. Empty once
    /// the game is over.
    pub fn legal_actions(&self, s: &GameState) -> Vec<Action> {
        if s.is_terminal() {
            return Vec::new();
        }
        Action::ALL
            .into_iter()
            .filter(|&a| self.target(s.pacman, a).is_some())
            .collect()
    }

    /// Moves available to a ghost: no stopping, no reversing unless forced.
    pub fn ghost_options(&self, g: &GhostState) -> Vec<Action> {
        let mut moves: Vec<Action> = Action::ALL[..4]
            .iter()
            .copied()
            .filter(|&a| self.target(g.cell, a).is_some())
            .collect();
        if self.config.ghost_no_reversal {
            if let Some(h) = g.heading {
                if moves.len() > 1 {
                    moves.retain(|&a| a != h.reverse());
                }
            }
        }
        if moves.is_empty() {
            moves.push(Action::Stop);
        }
        moves
    }

    fn ghost_eaten(&self, g: &mut GhostState, start: Cell) {
        g.scared = 0;
        g.heading = None;
        if self.config.respawn_eaten_ghosts {
            g.cell = start;
        } else {
            g.active = false;
        }
    }

    /// Resolves collisions at Pac-Man's cell. Returns false if Pac-Man died.
    fn collide(&self, p: &mut Partial) -> bool {
        let pac = p.state.pacman;
        let mut alive = true;
        for (i, g) in p.state.ghosts.iter_mut().enumerate() {
            if !g.active || g.cell != pac {
                continue;
            }
            if g.is_scared() {
                p.reward += Event::GHOST;
                p.events.push(Event::AteGhost(g.color));
                self.ghost_eaten(g, self.layout.ghosts[i].1);
            } else {
                alive = false;
            }
        }
        if !alive {
            p.reward += Event::LOSE;
            p.events.push(Event::Died);
            p.state.outcome = Outcome::Lose;
        }
        alive
    }

    fn pacman_phase(&self, s: &GameState, a: Action) -> Result<Partial, EnvError> {
        if s.is_terminal() {
            return Err(EnvError::Terminal);
        }
        let to = self.target(s.pacman, a).ok_or(EnvError::IllegalAction(a))?;
        let mut p = Partial {
            state: s.clone(),
            reward: Event::TIME_PENALTY,
            events: Vec::new(),
        };
        p.state.pacman = to;
        p.state.steps += 1;
        if let Some(i) = self.layout.food_index(to).filter(|&i| p.state.food.get(i)) {
            p.state.food.clear(i);
            p.reward += Event::FOOD;
            p.events.push(Event::AteFood);
        }
        if let Some(i) = self.layout.capsule_index(to).filter(|&i| p.state.capsules.get(i)) {
            p.state.capsules.clear(i);
            p.events.push(Event::AteCapsule);
            for g in p.state.ghosts.iter_mut().filter(|g| g.active) {
                g.scared = self.config.scared_duration;
            }
        }
        if self.collide(&mut p) && p.state.food.is_empty() {
            p.reward += Event::WIN;
            p.events.push(Event::Won);
            p.state.outcome = Outcome::Win;
        }
        Ok(p)
    }

    /// Per-ghost move options after Pac-Man's phase; empty if the game ended.
    fn ghost_choices(&self, p: &Partial) -> Vec<Vec<Action>> {
        if p.state.is_terminal() {
            return Vec::new();
        }
        p.state
            .ghosts
            .iter()
            .map(|g| {
                if g.active {
                    self.ghost_options(g)
                } else {
                    vec![Action::Stop]
                }
            })
            .collect()
    }

    fn ghost_phase(&self, mut p: Partial, moves: &[Action]) -> StepOutcome {
        if !p.state.is_terminal() {
            for (g, &m) in p.state.ghosts.iter_mut().zip(moves) {
                if !g.active {
                    continue;
                }
                if let Some(c) = self.target(g.cell, m) {
                    g.cell = c;
                }
                g.heading = (self.config.ghost_no_reversal && m != Action::Stop).then_some(m);
            }
            self.collide(&mut p);
            for g in p.state.ghosts.iter_mut() {
                g.scared = g.scared.saturating_sub(1);
            }
        }
        p.state.score += p.reward;
        StepOutcome {
            next: p.state,
            reward: p.reward,
            events: p.events,
        }
    }

    pub fn step<R: Rng + ?Sized>(
        &self,
        s: &GameState,
        a: Action,
        rng: &mut R,
    ) -> Result<StepOutcome, EnvError> {
        let p = self.pacman_phase(s, a)?;
        let moves: Vec<Action> = self
            .ghost_choices(&p)
            .iter()
            .map(|opts| opts[rng.gen_range(0..opts.len())])
            .collect();
        Ok(self.ghost_phase(p, &moves))
    }

    /// Step with the ghosts' moves given explicitly.
    pub fn step_with(
        &self,
        s: &GameState,
        a: Action,
        ghost_moves: &[Action],
    ) -> Result<StepOutcome, EnvError> {
        let p = self.pacman_phase(s, a)?;
        Ok(self.ghost_phase(p, ghost_moves))
    }

    /// Every outcome of `(s, a)` with its probability. Outcomes reached by
    /// different ghost moves are listed separately; probabilities sum to 1.
    pub fn transitions(&self, s: &GameState, a: Action) -> Result<Vec<(f64, StepOutcome)>, EnvError> {
        let p = self.pacman_phase(s, a)?;
        let choices = self.ghost_choices(&p);
        if choices.is_empty() {
            return Ok(vec![(1.0, self.ghost_phase(p, &[]))]);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        let prob: f64 = choices.iter().map(|c| 1.0 / c.len() as f64).product();
        loop {
            let moves: Vec<Action> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let partial = Partial {
                state: p.state.clone(),
                reward: p.reward,
                events: p.events.clone(),
            };
            out.push((prob, self.ghost_phase(partial, &moves)));
            // odometer increment
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Breadth-first enumeration of every non-terminal state reachable from
    /// the start under any policy, as Markov states (score and step count
    /// zeroed). Returns `None` if more than `limit` states are found.
    pub fn reachable_states(&self, limit: usize) -> Option<Vec<GameState>> {
        let start = self.initial_state().markov();
        let mut seen: HashSet<GameState> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        while let Some(s) = queue.pop_front() {
            for a in self.legal_actions(&s) {
                for (_, o) in self.transitions(&s, a).expect("legal action") {
                    let n = o.next.markov();
                    if n.is_terminal() || seen.contains(&n) {
                        continue;
                    }
                    if seen.len() >= limit {
                        return None;
                    }
                    seen.insert(n.clone());
                    queue.push_back(n);
                }
            }
            order.push(s);
        }
        Some(order)
    }
}
