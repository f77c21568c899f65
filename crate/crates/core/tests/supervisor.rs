use std::collections::BTreeSet;
use std::io::Write;
use std::sync::{Arc, Mutex};

use ngrl::assets::{BENEVOLENT_NORMS, BENEVOLENT_PERMIT_NORMS};
use ngrl::supervisor::{FactLabelling, Labelling, PacmanLabelling, PacmanSupervisor, Supervisor};
use ngrl_ddl::{Atom, Literal};
use ngrl_norms::{parse, NormativeSystem};
use ngrl_pacman::{Action, Cell, EnvConfig, Layout, PacmanEnv, MINI_LAYOUT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn moves() -> Vec<Atom> {
    Action::ALL
        .iter()
        .map(|a| Atom::new(format!("move({})", a.name())))
        .collect()
}

fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(Atom::new).collect()
}

fn facts(lits: &[&str]) -> BTreeSet<Literal> {
    lits.iter()
        .map(|l| match l.strip_prefix('-') {
            Some(a) => Literal::neg(a),
            None => Literal::pos(l),
        })
        .collect()
}

fn sup(text: &str, actions: Vec<Atom>) -> Supervisor<FactLabelling> {
    Supervisor::new(FactLabelling { actions }, &parse(text).unwrap()).unwrap()
}

fn mv(d: &str) -> Atom {
    Atom::new(format!("move({d})"))
}

#[test]
fn scared_ghost_north_prohibits_north_only() {
    let s = sup(BENEVOLENT_NORMS, moves());
    let f = facts(&["at(blueGhost,north)", "scared(blueGhost)"]);
    assert!(!s.is_compliant(&f, &mv("north")));
    assert_eq!(s.violation_count(&f, &mv("north")), 1);
    let ok = s.compliant_actions(&f, &moves());
    assert_eq!(ok, atoms(&["move(south)", "move(east)", "move(west)", "move(stop)"]));
}

#[test]
fn unscared_ghost_or_no_adjacency_prohibits_nothing() {
    let s = sup(BENEVOLENT_NORMS, moves());
    for f in [
        facts(&["at(blueGhost,north)"]),
        facts(&["scared(blueGhost)"]),
        facts(&["at(orangeGhost,east)", "scared(blueGhost)"]),
        facts(&[]),
    ] {
        assert_eq!(s.compliant_actions(&f, &moves()), moves(), "{f:?}");
    }
}

#[test]
fn empty_system_permits_everything() {
    let s = sup("", moves());
    let f = facts(&["at(blueGhost,north)", "scared(blueGhost)"]);
    assert_eq!(s.compliant_actions(&f, &moves()), moves());
}

#[test]
fn permission_reinstates_eating_the_blue_ghost() {
    let s = sup(BENEVOLENT_PERMIT_NORMS, moves());
    let f = facts(&["at(blueGhost,north)", "scared(blueGhost)"]);
    assert!(s.is_compliant(&f, &mv("north")));
    // The orange ghost is still protected.
    let f = facts(&["at(orangeGhost,west)", "scared(orangeGhost)"]);
    assert!(!s.is_compliant(&f, &mv("west")));
}

#[test]
fn defeated_obligation_does_not_count() {
    let s = sup("r1: O(b | a)\nr2: F(b | a)\nr1 > r2\n", atoms(&["b", "c"]));
    let f = facts(&["a"]);
    assert_eq!(s.violation_count(&f, &Atom::new("b")), 0);
    // Taking c violates both `O b` and the converted `O ¬c`.
    assert_eq!(s.violation_count(&f, &Atom::new("c")), 2);
}

#[test]
fn contrary_to_duty_leaves_only_the_primary_obligation() {
    let s = sup("r1: O(a | true)\nr2: O(b | -a)\n", atoms(&["a", "b", "c"]));
    let ok = s.compliant_actions(&facts(&[]), &atoms(&["a", "b", "c"]));
    assert_eq!(ok, atoms(&["a"]));
}

#[test]
fn monitor_prefers_the_first_compliant_action() {
    let s = sup(BENEVOLENT_NORMS, moves());
    let f = facts(&["at(blueGhost,north)", "scared(blueGhost)"]);
    assert_eq!(s.monitor_filter(&f, &[mv("north"), mv("east")]).unwrap(), mv("east"));
    assert_eq!(s.monitor_filter(&f, &[mv("west"), mv("north")]).unwrap(), mv("west"));
    assert!(s.monitor_filter(&f, &[]).is_err());
}

#[test]
fn permitted_action_beats_a_prohibited_one_despite_open_obligation() {
    // `O west` is not converted into `O ¬east` because the permission
    // blocks it, so east complies but still contradicts `O west`.
    let text = "o: O(move(west) | true)\nf: F(move(north) | true)\np: P(move(east) | true)\n";
    let s = sup(text, vec![mv("north"), mv("east"), mv("west")]);
    let f = facts(&[]);
    assert_eq!(s.violation_count(&f, &mv("north")), 2);
    assert_eq!(s.violation_count(&f, &mv("east")), 1);
    assert!(s.is_compliant(&f, &mv("east")));
    assert_eq!(s.monitor_filter(&f, &[mv("north"), mv("east")]).unwrap(), mv("east"));
}

#[test]
fn without_compliant_actions_the_head_of_the_fewest_violations_wins() {
    let s = sup("f: F(move(north) | true)\ng: F(move(east) | true)\n", moves());
    let f = facts(&[]);
    assert_eq!(s.monitor_filter(&f, &[mv("north"), mv("east")]).unwrap(), mv("north"));
    assert_eq!(s.monitor_filter(&f, &[mv("east"), mv("north")]).unwrap(), mv("east"));

    // A non-compliant action contradicts its own prohibition plus every
    // derived obligation, so such actions always tie.
    let s = sup("o: O(move(west) | true)\nf: F(move(north) | true)\n", moves());
    for d in ["north", "south", "east", "stop"] {
        assert!(!s.is_compliant(&f, &mv(d)));
        assert_eq!(s.violation_count(&f, &mv(d)), 2, "{d}");
    }
    assert_eq!(s.monitor_filter(&f, &[mv("south"), mv("north")]).unwrap(), mv("south"));
}

#[test]
fn invalid_priorities_are_rejected_up_front() {
    let system = parse("a: O(x | true)\nb: F(x | true)\na > b\nb > a\n").unwrap();
    assert!(Supervisor::new(FactLabelling { actions: moves() }, &system).is_err());
}

#[derive(Clone, Default)]
struct Shared(Arc<Mutex<Vec<u8>>>);

impl Write for Shared {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.lock().unwrap().extend_from_slice(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

#[test]
fn trace_has_one_line_per_query() {
    let buf = Shared::default();
    let s = sup(BENEVOLENT_NORMS, moves()).with_trace(Box::new(buf.clone()));
    let f = facts(&["at(blueGhost,north)", "scared(blueGhost)"]);
    s.is_compliant(&f, &mv("north"));
    s.record_execution(&f, &mv("east"));
    drop(s);
    let text = String::from_utf8(buf.0.lock().unwrap().clone()).unwrap();
    let lines: Vec<Vec<&str>> = text.lines().map(|l| l.split(' ').collect()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0][0], "query");
    assert_eq!(lines[0][2..], ["move(north)", "false", "1"]);
    assert_eq!(lines[1][0], "exec");
    assert_eq!(lines[1][2..], ["move(east)", "true", "0"]);
    assert_eq!(lines[0][1], lines[1][1]);
}

fn mini() -> PacmanEnv {
    PacmanEnv::new(Arc::new(Layout::parse(MINI_LAYOUT).unwrap()), EnvConfig::default())
}

fn pacman_sup(text: &str) -> PacmanSupervisor {
    let system: NormativeSystem = parse(text).unwrap();
    Supervisor::new(PacmanLabelling::new(mini()), &system).unwrap()
}

#[test]
fn game_state_with_scared_ghost_to_the_east() {
    let s = pacman_sup(BENEVOLENT_NORMS);
    let env = s.labelling().env().clone();
    let mut st = env.initial_state();
    st.pacman = Cell::new(1, 0);
    st.ghosts[0].cell = Cell::new(3, 0);
    st.ghosts[0].scared = 5;
    // East lands on (2,0), from which the ghost can step in.
    let legal = env.legal_actions(&st);
    let bad: Vec<Action> = legal
        .iter()
        .copied()
        .filter(|a| !s.is_compliant(&st, a))
        .collect();
    assert_eq!(bad, [Action::East]);
    let permit = pacman_sup(BENEVOLENT_PERMIT_NORMS);
    assert!(legal.iter().all(|a| permit.is_compliant(&st, a)));
}

#[test]
fn compliance_agrees_with_violation_counts_in_played_states() {
    let s = pacman_sup(BENEVOLENT_NORMS);
    let env = s.labelling().env().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let mut st = env.initial_state();
        while !st.is_terminal() {
            let legal = env.legal_actions(&st);
            let report = s.report(&st, &legal);
            for r in &report.actions {
                assert_eq!(r.compliant, r.violations == 0);
                assert_eq!(r.compliant, s.is_compliant(&st, &r.action));
            }
            assert_eq!(report, s.report(&st, &legal));
            let ranking: Vec<Action> = legal.iter().rev().copied().collect();
            let pick = s.monitor_filter(&st, &ranking).unwrap();
            let min = report.actions.iter().map(|r| r.violations).min().unwrap();
            assert_eq!(s.violation_count(&st, &pick), min);
            let a = legal[rand::Rng::gen_range(&mut rng, 0..legal.len())];
            st = env.step(&st, a, &mut rng).unwrap().next;
        }
    }
    assert!(s.cached_theories() > 1);
}

#[test]
fn cache_is_shared_between_threads() {
    let s = pacman_sup(BENEVOLENT_NORMS);
    let env = s.labelling().env().clone();
    let st = env.initial_state();
    let expected = s.compliant_actions(&st, &Action::ALL);
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| assert_eq!(s.compliant_actions(&st, &Action::ALL), expected));
        }
    });
    assert_eq!(s.cached_theories(), 1);
}

#[test]
fn labelling_reports_facts_per_ghost() {
    let l = PacmanLabelling::new(mini());
    let mut st = l.env().initial_state();
    st.ghosts[0].scared = 1;
    let f = l.facts(&st);
    assert!(f.contains(&Literal::pos("scared(blueGhost)")));
    assert!(f.iter().all(|l| l.positive));
}
