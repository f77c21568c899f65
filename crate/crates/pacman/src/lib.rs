//! A small Pac-Man: walls, food, capsules and randomly moving ghosts that
//! can be eaten while scared.
//!
//! Rewards: +10 food, +200 scared ghost, +500 win (all food eaten), −500
//! caught by a ghost, −1 per step.

mod env;
mod episode;
mod layout;
mod state;

pub use env::{EnvConfig, EnvError, PacmanEnv};
pub use episode::{run_episode, Trace, TraceStep};
pub use layout::{Cell, GhostColor, Layout, LayoutError, CLASSIC2G_LAYOUT, MINI_FOOD, MINI_LAYOUT};
pub use state::{Action, Bits, Event, GameState, GhostState, Outcome, StepOutcome};
