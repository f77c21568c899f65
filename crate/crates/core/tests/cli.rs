use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ngrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngrl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn norms(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("norms")
        .join(name)
        .display()
        .to_string()
}

fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ngrl-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    std::fs::write(
        &path,
        "agent = \"scalarized\"\nmonitored = true\nseed = 3\nrepetitions = 1\ntrain_episodes = 200\ntest_episodes = 50\n",
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn check_norms_prints_the_compiled_theory() {
    let o = ngrl(&["check-norms", &norms("benevolent.norms")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("# 14 norms, 34 rules, 0 superiority pairs\n"), "{out}");
    let o = ngrl(&["check-norms", &norms("benevolent_permit.norms")]);
    assert!(stdout(&o).ends_with("# 15 norms, 35 rules, 0 superiority pairs\n"));
}

#[test]
fn prove_derives_the_prohibition() {
    let o = ngrl(&[
        "prove",
        &norms("benevolent.norms"),
        "--facts",
        "at(blueGhost,north),scared(blueGhost)",
        "--actions",
        "move(north),move(south)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "+∂_O ¬move(north)"), "{out}");
    assert!(out.lines().any(|l| l == "-∂_O ¬move(south)"));
}

#[test]
fn configuration_problems_exit_with_one() {
    let dir = scratch("configuration");
    let bad = dir.join("bad.norms");
    std::fs::write(&bad, "x: Q(nonsense)\n").unwrap();
    assert_eq!(ngrl(&["check-norms", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ngrl(&["eval", "--config", "/no/such/config.toml"]).status.code(), Some(1));
    let zero = dir.join("zero.toml");
    std::fs::write(&zero, "test_episodes = 0\n").unwrap();
    assert_eq!(ngrl(&["eval", "--config", zero.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ngrl(&["prove", &norms("benevolent.norms"), "--facts", "bad fact"]).status.code(), Some(1));
    assert_eq!(ngrl(&["suite", dir.join("empty-dir").to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn runtime_problems_exit_with_two() {
    let dir = scratch("runtime");
    let config = small_config(&dir);
    let o = ngrl(&["eval", "--config", &config, "--trace", "/no/such/dir/trace.log"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn train_then_eval_a_checkpoint() {
    let dir = scratch("train");
    let config = small_config(&dir);
    let ckpt = dir.join("small.ckpt");
    let o = ngrl(&["train", "--config", &config, "--checkpoint", ckpt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&ckpt).unwrap().starts_with("ngrl-checkpoint 1\n"));

    let o = ngrl(&["eval", "--config", &config, "--checkpoint", ckpt.to_str().unwrap(), "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("name,agent,"));
    assert!(out.lines().nth(1).unwrap().starts_with("small,Scalarized,true,tabular,50,"));

    let garbage = dir.join("garbage.ckpt");
    std::fs::write(&garbage, "nope").unwrap();
    let o = ngrl(&["eval", "--config", &config, "--checkpoint", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_prints_markdown_and_is_reproducible() {
    let dir = scratch("eval");
    let config = small_config(&dir);
    let a = ngrl(&["eval", "--config", &config]);
    let b = ngrl(&["eval", "--config", &config]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("| Agent "));
    // Markdown carries no wall time, so reruns print the same bytes.
    assert_eq!(stdout(&a), stdout(&b));
    let c = ngrl(&["eval", "--config", &config, "--seed", "4"]);
    assert_eq!(c.status.code(), Some(0));
}
