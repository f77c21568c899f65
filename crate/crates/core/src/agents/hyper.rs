use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("gamma must lie in [0, 1], got {0}")]
    Gamma(f64),
    #[error("epsilon values must lie in [0, 1]")]
    Epsilon,
    #[error("penalty must be negative, got {0}")]
    Penalty(f64),
    #[error("weight must be positive, got {0}")]
    Weight(f64),
    #[error("max_steps must be positive")]
    MaxSteps,
}

/// Linear decay from `start` to `end` over `decay_episodes`, then flat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub decay_episodes: usize,
}

impl EpsilonSchedule {
    pub fn constant(epsilon: f64) -> Self {
        EpsilonSchedule {
            start: epsilon,
            end: epsilon,
            decay_episodes: 0,
        }
    }

    pub fn at(&self, episode: usize) -> f64 {
        if episode >= self.decay_episodes {
            return self.end;
        }
        let t = episode as f64 / self.decay_episodes as f64;
        self.start + (self.end - self.start) * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: EpsilonSchedule,
    /// Non-compliance penalty `p < 0`.
    pub penalty: f64,
    /// Scalarization weight `w` on the compliance objective.
    pub weight: f64,
    /// TLQ threshold `C_N` on the compliance objective.
    pub threshold: f64,
    pub train_episodes: usize,
    pub test_episodes: usize,
    /// Episode length cap, for training and testing alike.
    pub max_steps: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            alpha: 0.2,
            gamma: 0.95,
            epsilon: EpsilonSchedule {
                start: 1.0,
                end: 0.05,
                decay_episodes: 9000,
            },
            penalty: -1.0,
            weight: 10_000.0,
            threshold: 0.0,
            train_episodes: 9000,
            test_episodes: 1000,
            max_steps: 500,
        }
    }
}

impl Hyperparams {
    // Negated comparisons so that NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), HyperError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(HyperError::Alpha(self.alpha));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(HyperError::Gamma(self.gamma));
        }
        let e = self.epsilon;
        if !(0.0..=1.0).contains(&e.start) || !(0.0..=1.0).contains(&e.end) {
            return Err(HyperError::Epsilon);
        }
        if !(self.penalty < 0.0) {
            return Err(HyperError::Penalty(self.penalty));
        }
        if !(self.weight > 0.0) {
            return Err(HyperError::Weight(self.weight));
        }
        if self.max_steps == 0 {
            return Err(HyperError::MaxSteps);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_is_linear_then_flat() {
        let s = EpsilonSchedule {
            start: 1.0,
            end: 0.0,
            decay_episodes: 4,
        };
        let v: Vec<f64> = (0..6).map(|e| s.at(e)).collect();
        assert_eq!(v, [1.0, 0.75, 0.5, 0.25, 0.0, 0.0]);
        assert_eq!(EpsilonSchedule::constant(0.3).at(0), 0.3);
    }

    #[test]
    fn validation() {
        assert!(Hyperparams::default().validate().is_ok());
        let bad = Hyperparams {
            penalty: 0.0,
            ..Hyperparams::default()
        };
        assert_eq!(bad.validate(), Err(HyperError::Penalty(0.0)));
        let bad = Hyperparams {
            alpha: 0.0,
            ..Hyperparams::default()
        };
        assert!(bad.validate().is_err());
    }
}
