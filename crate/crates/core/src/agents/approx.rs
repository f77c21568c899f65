use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use ngrl_pacman::{Action, Cell, GameState, GhostColor, PacmanEnv};
use thiserror::Error;

use super::hyper::Hyperparams;
use super::select::QVec;
use super::{Learner, QFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("extractor yields {expected} features but {got} weights were given")]
    Arity { expected: usize, got: usize },
}

/// Real-valued features of a state-action pair.
pub trait FeatureExtractor: Send + Sync {
    fn name(&self) -> &str;
    fn names(&self) -> Vec<String>;
    fn extract(&self, s: &GameState, a: Action) -> Vec<f64>;
}

/// All features are scaled down by this factor, as in the classic teaching
/// framework, to keep linear updates stable against point-sized rewards.
const SCALE: f64 = 10.0;

/// Extractor over a layout. `basic` has a bias, the number of unscared and
/// of scared ghosts within one step of Pac-Man's next cell, whether that
/// cell has food (only when no unscared ghost is near) and the normalized
/// maze distance from it to the closest food. `blue` splits both ghost
/// counts per ghost color.
#[derive(Clone)]
pub struct PacmanFeatures {
    env: PacmanEnv,
    per_color: bool,
    colors: Vec<GhostColor>,
}

impl fmt::Debug for PacmanFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PacmanFeatures {
    pub fn basic(env: PacmanEnv) -> Self {
        Self::build(env, false)
    }

    pub fn blue(env: PacmanEnv) -> Self {
        Self::build(env, true)
    }

    fn build(env: PacmanEnv, per_color: bool) -> Self {
        let mut colors: Vec<GhostColor> = env.layout().ghosts.iter().map(|g| g.0).collect();
        colors.sort();
        colors.dedup();
        PacmanFeatures {
            env,
            per_color,
            colors,
        }
    }

    fn near(&self, ghost: Cell, cell: Cell) -> bool {
        ghost == cell || self.env.neighbors(ghost).any(|c| c == cell)
    }

    fn slot(&self, cell: Cell) -> usize {
        cell.y as usize * self.env.layout().width as usize + cell.x as usize
    }

    /// Maze distances from `from` to every cell, `u32::MAX` if unreachable.
    fn distances(&self, from: Cell) -> Vec<u32> {
        let layout = self.env.layout();
        let mut dist = vec![u32::MAX; layout.width as usize * layout.height as usize];
        let mut queue = VecDeque::from([from]);
        dist[self.slot(from)] = 0;
        while let Some(c) = queue.pop_front() {
            let d = dist[self.slot(c)];
            for n in self.env.neighbors(c) {
                let i = self.slot(n);
                if dist[i] == u32::MAX {
                    dist[i] = d + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }
}

impl FeatureExtractor for PacmanFeatures {
    fn name(&self) -> &str {
        if self.per_color {
            "blue"
        } else {
            "basic"
        }
    }

    fn names(&self) -> Vec<String> {
        let mut v = vec!["bias".to_string()];
        let prefixes: Vec<String> = if self.per_color {
            self.colors.iter().map(|c| format!("{}-", c.name())).collect()
        } else {
            vec![String::new()]
        };
        for p in prefixes {
            v.push(format!("{p}ghosts-1-step"));
            v.push(format!("{p}scared-ghosts-1-step"));
        }
        v.push("eats-food".into());
        v.push("closest-food".into());
        v
    }

    fn extract(&self, s: &GameState, a: Action) -> Vec<f64> {
        let to = self.env.target(s.pacman, a).unwrap_or(s.pacman);
        let dist = self.distances(to);
        let groups = if self.per_color { self.colors.len() } else { 1 };
        // Per group: unscared and scared ghosts next to the target cell.
        let mut ghosts = vec![[0.0f64; 2]; groups];
        for g in s.active_ghosts().filter(|g| self.near(g.cell, to)) {
            let slot = if self.per_color {
                self.colors.iter().position(|&c| c == g.color).unwrap_or(0)
            } else {
                0
            };
            ghosts[slot][usize::from(g.is_scared())] += 1.0;
        }
        let danger: f64 = ghosts.iter().map(|g| g[0]).sum();
        let mut f = vec![1.0];
        for g in &ghosts {
            f.extend_from_slice(g);
        }
        let layout = self.env.layout();
        let food_here = layout.food_index(to).is_some_and(|i| s.food.get(i));
        f.push(if danger == 0.0 && food_here { 1.0 } else { 0.0 });
        let area = f64::from(layout.width) * f64::from(layout.height);
        let closest_food = s
            .food
            .ones()
            .filter_map(|i| layout.food.get(i))
            .map(|&c| dist[self.slot(c)])
            .min()
            .filter(|&d| d != u32::MAX);
        f.push(closest_food.map_or(0.0, |d| f64::from(d) / area));
        f.iter().map(|v| v / SCALE).collect()
    }
}

/// A single constant feature; linear Q then degenerates to one table cell
/// shared by every state-action pair.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantFeature;

impl FeatureExtractor for ConstantFeature {
    fn name(&self) -> &str {
        "constant"
    }

    fn names(&self) -> Vec<String> {
        vec!["bias".into()]
    }

    fn extract(&self, _: &GameState, _: Action) -> Vec<f64> {
        vec![1.0]
    }
}

/// Separate linear approximations `Q_x = θ_x·f` and `Q_N = θ_N·f` over one
/// extractor.
#[derive(Clone)]
pub struct LinearQ {
    extractor: Arc<dyn FeatureExtractor>,
    pub theta_x: Vec<f64>,
    pub theta_n: Vec<f64>,
}

impl fmt::Debug for LinearQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearQ")
            .field("extractor", &self.extractor.name())
            .field("theta_x", &self.theta_x)
            .field("theta_n", &self.theta_n)
            .finish()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearQ {
    pub fn new(extractor: Arc<dyn FeatureExtractor>) -> Self {
        let k = extractor.names().len();
        LinearQ {
            extractor,
            theta_x: vec![0.0; k],
            theta_n: vec![0.0; k],
        }
    }

    pub fn with_weights(
        extractor: Arc<dyn FeatureExtractor>,
        theta_x: Vec<f64>,
        theta_n: Vec<f64>,
    ) -> Result<Self, ApproxError> {
        let expected = extractor.names().len();
        for got in [theta_x.len(), theta_n.len()] {
            if got != expected {
                return Err(ApproxError::Arity { expected, got });
            }
        }
        Ok(LinearQ {
            extractor,
            theta_x,
            theta_n,
        })
    }

    pub fn extractor(&self) -> &dyn FeatureExtractor {
        &*self.extractor
    }

    /// `θ_i += α·δ_i·f(s,a)` per objective, given the bootstrapped targets.
    pub fn apply(&mut self, features: &[f64], target: QVec, alpha: f64) {
        let dx = target.x - dot(&self.theta_x, features);
        let dn = target.n - dot(&self.theta_n, features);
        for ((tx, tn), f) in self.theta_x.iter_mut().zip(&mut self.theta_n).zip(features) {
            *tx += alpha * dx * f;
            *tn += alpha * dn * f;
        }
    }
}

impl QFunction for LinearQ {
    fn q(&self, s: &GameState, a: Action) -> QVec {
        let f = self.extractor.extract(s, a);
        QVec::new(dot(&self.theta_x, &f), dot(&self.theta_n, &f))
    }
}

impl Learner for LinearQ {
    fn update(
        &mut self,
        s: &GameState,
        a: Action,
        r: QVec,
        next: &GameState,
        next_legal: &[Action],
        hp: &Hyperparams,
    ) {
        let boot = if next.is_terminal() || next_legal.is_empty() {
            QVec::default()
        } else {
            next_legal.iter().fold(
                QVec::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
                |m, &b| {
                    let q = self.q(next, b);
                    QVec::new(m.x.max(q.x), m.n.max(q.n))
                },
            )
        };
        let target = QVec::new(r.x + hp.gamma * boot.x, r.n + hp.gamma * boot.n);
        let f = self.extractor.extract(s, a);
        self.apply(&f, target, hp.alpha);
    }
}
