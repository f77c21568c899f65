use std::fmt::Display;
use std::time::Duration;

use ngrl_pacman::GhostColor;

use super::{AgentKind, ExperimentConfig, FeatureKind};
use crate::agents::EvalStats;

/// One line of a results table; averages are over every test game of every
/// repetition.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultsRow {
    pub name: String,
    pub agent: AgentKind,
    pub monitored: bool,
    pub features: FeatureKind,
    pub games: usize,
    pub win_pct: f64,
    pub avg_score: f64,
    pub avg_ghosts: f64,
    pub ghosts_by_color: Vec<(GhostColor, f64)>,
    /// Executed actions the supervisor found non-compliant, in total.
    pub violations: usize,
    pub wall_time: Duration,
}

impl ResultsRow {
    pub fn new(
        config: &ExperimentConfig,
        stats: &EvalStats,
        colors: &[GhostColor],
        wall_time: Duration,
    ) -> Self {
        ResultsRow {
            name: config.name.clone(),
            agent: config.agent,
            monitored: config.monitored,
            features: config.features,
            games: stats.games,
            win_pct: 100.0 * stats.win_rate(),
            avg_score: stats.avg_score(),
            avg_ghosts: stats.avg_ghosts_total(),
            ghosts_by_color: colors.iter().map(|&c| (c, stats.avg_ghosts(c))).collect(),
            violations: stats.violations,
            wall_time,
        }
    }

    pub fn ghosts(&self, color: GhostColor) -> f64 {
        self.ghosts_by_color
            .iter()
            .find(|(c, _)| *c == color)
            .map_or(0.0, |&(_, g)| g)
    }

    /// The row with wall time zeroed, for reproducibility comparisons.
    pub fn untimed(&self) -> Self {
        ResultsRow {
            wall_time: Duration::ZERO,
            ..self.clone()
        }
    }

    fn agent_label(&self) -> &'static str {
        match self.agent {
            AgentKind::PlainQ => "Q-learning",
            AgentKind::Scalarized => "Scalarized",
            AgentKind::Tlq => "TLQL",
        }
    }

    fn features_label(&self) -> &'static str {
        match self.features {
            FeatureKind::None => "tabular",
            FeatureKind::Basic => "basic",
            FeatureKind::Blue => "blue",
        }
    }
}

const CSV_HEADER: [&str; 13] = [
    "name",
    "agent",
    "monitored",
    "features",
    "games",
    "win_pct",
    "avg_score",
    "avg_ghosts",
    "ghosts_blue",
    "ghosts_orange",
    "violations",
    "wall_time_s",
    "error",
];

/// Machine-readable results, one record per experiment.
pub fn to_csv<E: Display>(rows: &[Result<ResultsRow, E>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        let record: Vec<String> = match row {
            Ok(r) => {
                let color = |c| {
                    r.ghosts_by_color
                        .iter()
                        .find(|(d, _)| *d == c)
                        .map_or(String::new(), |(_, g)| format!("{g:.4}"))
                };
                vec![
                    r.name.clone(),
                    r.agent_label().into(),
                    r.monitored.to_string(),
                    r.features_label().into(),
                    r.games.to_string(),
                    format!("{:.2}", r.win_pct),
                    format!("{:.2}", r.avg_score),
                    format!("{:.4}", r.avg_ghosts),
                    color(GhostColor::Blue),
                    color(GhostColor::Orange),
                    r.violations.to_string(),
                    format!("{:.3}", r.wall_time.as_secs_f64()),
                    String::new(),
                ]
            }
            Err(e) => {
                let mut v = vec![String::new(); CSV_HEADER.len()];
                v[12] = e.to_string();
                v
            }
        };
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Human-readable table in the usual results layout: agent,
/// monitoring, win rate, score and ghosts eaten (per color when a layout
/// has several), plus the logged violations.
pub fn to_markdown<E: Display>(rows: &[Result<ResultsRow, E>]) -> String {
    let per_color = rows
        .iter()
        .flatten()
        .any(|r| r.ghosts_by_color.len() > 1);
    let with_features = rows
        .iter()
        .flatten()
        .any(|r| r.features != FeatureKind::None);
    let mut header = vec!["Agent", "Monitored?"];
    if with_features {
        header.push("Feature Extractor");
    }
    header.extend(["% Games Won", "Avg Game Score"]);
    header.push(if per_color {
        "Avg Ghosts Eaten (Blue / Orange)"
    } else {
        "Avg Ghosts Eaten"
    });
    header.push("Violations");

    let mut table: Vec<Vec<String>> = Vec::new();
    for row in rows {
        let cells = match row {
            Ok(r) => {
                let mut c = vec![
                    r.agent_label().to_string(),
                    if r.monitored { "yes" } else { "no" }.to_string(),
                ];
                if with_features {
                    c.push(r.features_label().into());
                }
                c.push(format!("{:.1}%", r.win_pct));
                c.push(format!("{:.2}", r.avg_score));
                c.push(if per_color {
                    format!("{:.3} / {:.3}", r.ghosts(GhostColor::Blue), r.ghosts(GhostColor::Orange))
                } else {
                    format!("{:.3}", r.avg_ghosts)
                });
                c.push(r.violations.to_string());
                c
            }
            Err(e) => {
                let mut c = vec![String::new(); header.len()];
                c[0] = format!("error: {e}");
                c
            }
        };
        table.push(cells);
    }

    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            table
                .iter()
                .map(|r| r[i].chars().count())
                .chain([header[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let mut out = line(&head);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(&rule));
    for r in &table {
        out.push_str(&line(r));
    }
    out
}
