//! Norm-guided reinforcement learning on Pac-Man.
//!
//! A [`supervisor::Supervisor`] decides which actions comply with a
//! normative system by proving a defeasible deontic theory per state. The
//! [`agents`] learn a task objective and a non-compliance objective side by
//! side and combine them by scalarization or thresholded lexicographic
//! ordering; [`dp`] solves the small layout exactly for reference, and
//! [`harness`] runs configured experiments and reports them.

pub mod agents;
pub mod assets;
pub mod dp;
pub mod harness;
pub mod supervisor;
