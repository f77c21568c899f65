use std::fmt::Write as _;

use thiserror::Error;

use super::select::QVec;
use super::tabular::{QRow, StateKey, TabularQ};
use super::LinearQ;

const MAGIC: &str = "ngrl-checkpoint 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckpointError {
    #[error("not a version-1 checkpoint")]
    Header,
    #[error("line {0}: malformed entry")]
    Malformed(usize),
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
}

/// Learned values as deterministic text: entries sorted by key, floats in
/// shortest round-trip form, so equal tables give byte-equal files.
#[derive(Clone, Debug, PartialEq)]
pub enum Checkpoint {
    Tabular(TabularQ),
    Linear {
        extractor: String,
        names: Vec<String>,
        theta_x: Vec<f64>,
        theta_n: Vec<f64>,
    },
}

impl Checkpoint {
    pub fn of_linear(q: &LinearQ) -> Self {
        Checkpoint::Linear {
            extractor: q.extractor().name().to_string(),
            names: q.extractor().names(),
            theta_x: q.theta_x.clone(),
            theta_n: q.theta_n.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC}\n");
        match self {
            Checkpoint::Tabular(t) => {
                let mut rows: Vec<(&StateKey, &QRow)> = t.iter().collect();
                rows.sort_by(|a, b| a.0.cmp(b.0));
                let _ = writeln!(out, "tabular {}", rows.len());
                for (k, row) in rows {
                    let key: Vec<String> = k.words().iter().map(|w| format!("{w:x}")).collect();
                    out.push_str(&key.join(":"));
                    for q in row {
                        let _ = write!(out, " {} {}", q.x, q.n);
                    }
                    out.push('\n');
                }
            }
            Checkpoint::Linear {
                extractor,
                names,
                theta_x,
                theta_n,
            } => {
                let _ = writeln!(out, "linear {extractor}");
                for ((n, x), y) in names.iter().zip(theta_x).zip(theta_n) {
                    let _ = writeln!(out, "{n} {x} {y}");
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CheckpointError> {
        let mut lines = text.lines().enumerate();
        if lines.next().map(|l| l.1) != Some(MAGIC) {
            return Err(CheckpointError::Header);
        }
        let (i, kind) = lines.next().ok_or(CheckpointError::Header)?;
        let mut head = kind.split_whitespace();
        match (head.next(), head.next()) {
            (Some("tabular"), Some(n)) => {
                let expected: usize = n.parse().map_err(|_| CheckpointError::Malformed(i + 1))?;
                let mut t = TabularQ::new();
                for (i, line) in lines {
                    let bad = || CheckpointError::Malformed(i + 1);
                    let mut parts = line.split_whitespace();
                    let key = parts
                        .next()
                        .ok_or_else(bad)?
                        .split(':')
                        .map(|w| u64::from_str_radix(w, 16))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    let nums = parts
                        .map(str::parse::<f64>)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    if nums.len() != 10 {
                        return Err(bad());
                    }
                    let mut row = [QVec::default(); 5];
                    for (q, pair) in row.iter_mut().zip(nums.chunks(2)) {
                        *q = QVec::new(pair[0], pair[1]);
                    }
                    t.insert(StateKey::from_words(key), row);
                }
                if t.len() != expected {
                    return Err(CheckpointError::Count {
                        expected,
                        found: t.len(),
                    });
                }
                Ok(Checkpoint::Tabular(t))
            }
            (Some("linear"), Some(extractor)) => {
                let (mut names, mut theta_x, mut theta_n) = (Vec::new(), Vec::new(), Vec::new());
                for (i, line) in lines {
                    let bad = || CheckpointError::Malformed(i + 1);
                    let p: Vec<&str> = line.split_whitespace().collect();
                    let [n, x, y] = p[..] else {
                        return Err(bad());
                    };
                    names.push(n.to_string());
                    theta_x.push(x.parse().map_err(|_| bad())?);
                    theta_n.push(y.parse().map_err(|_| bad())?);
                }
                Ok(Checkpoint::Linear {
                    extractor: extractor.to_string(),
                    names,
                    theta_x,
                    theta_n,
                })
            }
            _ => Err(CheckpointError::Malformed(i + 1)),
        }
    }
}
