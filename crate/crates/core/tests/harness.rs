use std::path::{Path, PathBuf};
use std::time::Duration;

use ngrl::harness::*;
use ngrl_pacman::GhostColor;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn small(agent: AgentKind, monitored: bool) -> ExperimentConfig {
    ExperimentConfig {
        name: "small".into(),
        agent,
        monitored,
        seed: 5,
        repetitions: 2,
        train_episodes: 300,
        test_episodes: 100,
        ..ExperimentConfig::default()
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ngrl-harness-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn identical_configs_give_identical_rows() {
    let c = small(AgentKind::Scalarized, false);
    let a = run_experiment(&c).unwrap();
    let b = run_experiment(&c).unwrap();
    assert_eq!(a.untimed(), b.untimed());
    assert_eq!(a.games, 200);
    let other = run_experiment(&ExperimentConfig { seed: 6, ..c }).unwrap();
    assert_ne!(a.untimed(), other.untimed());
}

#[test]
fn zero_test_episodes_is_a_config_error() {
    let c = ExperimentConfig {
        test_episodes: 0,
        ..small(AgentKind::PlainQ, false)
    };
    let err = run_experiment(&c).unwrap_err();
    assert!(matches!(err, ExperimentError::Invalid(_)));
    assert!(err.is_config());
}

#[test]
fn missing_files_and_bad_norms_are_reported() {
    let dir = scratch("bad");
    std::fs::write(dir.join("broken.norms"), "this is not a norm\n").unwrap();
    let base = ExperimentConfig {
        base_dir: dir.clone(),
        ..small(AgentKind::PlainQ, false)
    };
    let missing = ExperimentConfig {
        layout: "nowhere.lay".into(),
        ..base.clone()
    };
    assert!(matches!(run_experiment(&missing), Err(ExperimentError::Io { .. })));
    let broken = ExperimentConfig {
        norms: "broken.norms".into(),
        ..base
    };
    assert!(matches!(run_experiment(&broken), Err(ExperimentError::Norms { .. })));
    assert!(ExperimentConfig::load(&dir.join("absent.toml")).is_err());
}

#[test]
fn tabular_agents_are_kept_off_large_layouts() {
    let c = ExperimentConfig {
        layout: "classic2g".into(),
        ..small(AgentKind::PlainQ, false)
    };
    assert!(matches!(Prepared::new(&c), Err(ExperimentError::Invalid(_))));
    let allowed = ExperimentConfig {
        allow_large_tabular: true,
        ..c.clone()
    };
    assert!(Prepared::new(&allowed).is_ok());
    let linear = ExperimentConfig {
        features: FeatureKind::Basic,
        ..c
    };
    assert!(Prepared::new(&linear).is_ok());
}

#[test]
fn config_files_are_flat_toml() {
    let c = ExperimentConfig::from_toml("agent = \"tlq\"\nmonitored = true\nweight = 50.0\n", Path::new(".")).unwrap();
    assert_eq!(c.agent, AgentKind::Tlq);
    assert!(c.monitored);
    assert_eq!(c.weight, 50.0);
    assert_eq!(c.layout, "mini");
    assert!(ExperimentConfig::from_toml("agnet = \"tlq\"\n", Path::new(".")).is_err());
    assert!(ExperimentConfig::from_toml("agent = \"sarsa\"\n", Path::new(".")).is_err());
    let back = ExperimentConfig::from_toml(&c.to_toml(), Path::new(".")).unwrap();
    assert_eq!(back, c);
}

#[test]
fn bundled_suites_load_in_file_order() {
    let table1 = load_suite(&configs_dir().join("table1")).unwrap();
    let names: Vec<&str> = table1.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "1_qlearning",
            "2_scalarized",
            "3_tlq",
            "4_qlearning_monitored",
            "5_scalarized_monitored",
            "6_tlq_monitored"
        ]
    );
    for dir in ["table1", "table2", "table3", "table4"] {
        for c in load_suite(&configs_dir().join(dir)).unwrap() {
            Prepared::new(&c).unwrap_or_else(|e| panic!("{}: {e}", c.name));
        }
    }
}

#[test]
fn suite_keeps_going_past_failures_and_keeps_order() {
    let good = small(AgentKind::PlainQ, false);
    let bad = ExperimentConfig {
        name: "bad".into(),
        layout: "nowhere.lay".into(),
        ..good.clone()
    };
    let rows = run_suite(&[bad, good.clone(), ExperimentConfig { name: "second".into(), ..good }]);
    assert!(rows[0].is_err());
    assert_eq!(rows[1].as_ref().unwrap().name, "small");
    assert_eq!(rows[2].as_ref().unwrap().name, "second");
    let csv = to_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with(",,") && lines[1].contains("nowhere.lay"));
    assert!(to_markdown(&rows).contains("error: "));
}

fn row(agent: AgentKind, monitored: bool, win: f64, ghosts: f64) -> ResultsRow {
    ResultsRow {
        name: format!("{agent:?}"),
        agent,
        monitored,
        features: FeatureKind::None,
        games: 1000,
        win_pct: win,
        avg_score: 400.0,
        avg_ghosts: ghosts,
        ghosts_by_color: vec![(GhostColor::Blue, ghosts)],
        violations: 0,
        wall_time: Duration::from_secs(1),
    }
}

#[test]
fn markdown_has_the_results_table_layout() {
    let rows: Vec<Result<ResultsRow, String>> = vec![
        Ok(row(AgentKind::PlainQ, false, 68.5, 0.851)),
        Ok(row(AgentKind::Scalarized, false, 70.0, 0.142)),
        Ok(row(AgentKind::Tlq, true, 70.0, 0.001)),
    ];
    let md = to_markdown(&rows);
    let lines: Vec<&str> = md.lines().collect();
    assert_eq!(lines.len(), 5);
    let header: Vec<&str> = lines[0].trim_matches('|').split('|').map(str::trim).collect();
    assert_eq!(
        header,
        ["Agent", "Monitored?", "% Games Won", "Avg Game Score", "Avg Ghosts Eaten", "Violations"]
    );
    let first: Vec<&str> = lines[2].trim_matches('|').split('|').map(str::trim).collect();
    assert_eq!(first, ["Q-learning", "no", "68.5%", "400.00", "0.851", "0"]);
    assert!(lines[4].starts_with("| TLQL "));
    // Columns are aligned.
    assert!(lines.iter().all(|l| l.chars().count() == lines[0].chars().count()));

    let single = to_markdown(&rows[..1]);
    assert_eq!(single.lines().count(), 3);
}

#[test]
fn two_ghost_tables_report_each_color() {
    let mut r = row(AgentKind::Scalarized, false, 90.0, 0.5);
    r.features = FeatureKind::Blue;
    r.ghosts_by_color = vec![(GhostColor::Blue, 0.4), (GhostColor::Orange, 0.1)];
    let md = to_markdown(&[Ok::<_, String>(r.clone())]);
    assert!(md.contains("Feature Extractor"));
    assert!(md.contains("Avg Ghosts Eaten (Blue / Orange)"));
    assert!(md.contains("0.400 / 0.100"));
    let csv = to_csv(&[Ok::<_, String>(r)]);
    assert!(csv.starts_with("name,agent,monitored,features,games,win_pct,avg_score,avg_ghosts,ghosts_blue,ghosts_orange,violations,wall_time_s,error\n"));
    assert!(csv.contains(",0.4000,0.1000,"));
}

#[test]
fn trace_logs_exactly_the_counted_violations() {
    let dir = scratch("trace");
    let path = dir.join("trace.log");
    let c = ExperimentConfig {
        repetitions: 1,
        trace: Some(path.clone()),
        ..small(AgentKind::PlainQ, false)
    };
    let r = run_experiment(&c).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let exec: Vec<&str> = text.lines().filter(|l| l.starts_with("exec ")).collect();
    let steps = exec.len();
    let bad = exec.iter().filter(|l| l.split(' ').nth(3) == Some("false")).count();
    assert_eq!(bad, r.violations);
    assert!(steps >= r.games);

    let unwritable = ExperimentConfig {
        trace: Some(dir.join("missing-dir").join("trace.log")),
        ..c
    };
    let err = run_experiment(&unwritable).unwrap_err();
    assert!(!err.is_config());
}

#[test]
fn monitored_plain_q_executes_no_violations_on_mini() {
    let r = run_experiment(&small(AgentKind::PlainQ, true)).unwrap();
    assert_eq!(r.violations, 0);
}
