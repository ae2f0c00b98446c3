use gmlogic::controls::{
    check_independent, find_family, is_button, is_pushed, is_switch, simulate_countermodel, ControlError, ControlFamily,
    FailureWitness, SearchOptions,
};
use gmlogic::formula::enumerate;
use gmlogic::frame::{
    bs_model, chain, cluster, combo_frame, load, powerset_frame, save, single_point, ComboKind, PowersetSpec,
    DEFAULT_WORLD_BUDGET,
};
use gmlogic::semantics::{eval, ml_fragment, ml_member};
use gmlogic::theories::{classify, decide, validity, Budget, Outcome, Theory, Verdict};
use gmlogic::{parse, Direction, Formula, PointedModel};
use std::collections::BTreeSet;

const B: usize = DEFAULT_WORLD_BUDGET;

fn f(text: &str) -> Formula {
    parse(text).unwrap()
}

fn invalid(t: Theory, text: &str) -> PointedModel {
    match decide(t, &f(text), &Budget::default()).unwrap() {
        Verdict::Invalid(cm) => cm.model,
        v => panic!("{t} {text}: {v:?}"),
    }
}

fn up() -> BTreeSet<Direction> {
    [Direction::Up].into()
}

#[test]
fn dot_two_is_s42_valid() {
    assert_eq!(decide(Theory::S42, &f("<u>[u]p -> [u]<u>p"), &Budget::default()).unwrap(), Verdict::Valid);
}

#[test]
fn euclidean_axiom_fails_on_a_two_chain() {
    let m = invalid(Theory::S42, "<u>p -> [u]<u>p");
    assert_eq!(m.frame(), &chain(2));
    // the refuting valuation makes p true below and false above
    assert_eq!(m.letter("p").iter().collect::<Vec<_>>(), vec![0]);
}

#[test]
fn collapse_axiom_separates_s5_from_s42() {
    assert_eq!(validity(Theory::S5, &f("<u>[u]p -> p"), &Budget::default()).unwrap(), Outcome::Valid);
    let m = invalid(Theory::S42, "<u>[u]p -> p");
    assert_eq!(m.frame(), &chain(2));
    assert_eq!(m.letter("p").iter().collect::<Vec<_>>(), vec![1]);
}

#[test]
fn countermodels_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (t, text) in [
        (Theory::S4, "<u>[u]p -> [u]<u>p"),
        (Theory::S42, "<d>p -> [d]<d>p"),
        (Theory::S5, "p & q -> [u](p | q)"),
    ] {
        let m = invalid(t, text);
        let path = dir.path().join("cm.txt");
        save(&path, "cm", &m).unwrap();
        let back = load(&path).unwrap().model();
        assert_eq!(back, m);
        assert!(!eval(&back, &f(text)).contains(back.point()));
    }
}

#[test]
fn single_point_down_fragment_is_pl() {
    let m = PointedModel::bare(single_point(), 0).unwrap();
    let rep = ml_fragment(&m, 1, 5, &[Direction::Down].into()).unwrap();
    assert!(classify(&rep).matches.contains(&Theory::Pl));
    assert!(ml_member(&m, &f("[d]p <-> p")).unwrap());
}

#[test]
fn three_cluster_fragment_is_s5() {
    let m = PointedModel::with_letters(cluster(3), [("k0", vec![0]), ("k1", vec![1]), ("k2", vec![2])], 0).unwrap();
    let rep = ml_fragment(&m, 1, 7, &up()).unwrap();
    let c = classify(&rep);
    assert_eq!(c.matches, [Theory::S5].into());
    let sep = &c.separators[&Theory::S42];
    assert!(sep.in_fragment);
    // first S5-only validity in enumeration order; the collapse axiom is also in
    assert_eq!(sep.formula, f("p0 -> [u]<u>p0"));
    assert!(ml_member(&m, &f("<u>[u]p0 -> p0")).unwrap());
}

#[test]
fn button_switch_root_fragment_is_s42() {
    let m = bs_model(2, 2, B).unwrap();
    let rep = ml_fragment(&m, 1, 7, &up()).unwrap();
    let c = classify(&rep);
    assert_eq!(c.matches, [Theory::S42].into());
    assert!(!c.separators[&Theory::S5].in_fragment);
    assert!(!ml_member(&m, &f("<u>[u]p0 -> p0")).unwrap());
    for (form, o) in rep.formulas.iter().zip(&rep.outcomes[&Theory::S42]) {
        if *o == Outcome::Valid {
            assert!(ml_member(&m, form).unwrap(), "{form}");
        }
    }
}

#[test]
fn pushed_down_button_refutes_the_collapse_axiom() {
    let spec = PowersetSpec {
        buttons: vec![0],
        classes: vec![],
    };
    let m = powerset_frame(&spec, &[0], B).unwrap();
    assert!(!ml_member(&m, &f("<d>[d]b0 -> b0")).unwrap());
    assert!(ml_member(&m, &f("[u]p -> [u][u]p")).unwrap());
}

#[test]
fn factor_letters_are_unpushed_down_buttons() {
    let spec = PowersetSpec {
        buttons: vec![0, 1],
        classes: vec![vec![2, 3, 4]],
    };
    let m = powerset_frame(&spec, &spec.indices(), B).unwrap();
    let w = m.point();
    for b in ["b0", "b1"] {
        assert!(is_button(&m, w, &f(b), Direction::Down).unwrap());
        assert!(!is_pushed(&m, w, &f(b), Direction::Down).unwrap());
    }
    // the empty set is reachable and sees only itself, so nothing is a switch
    assert!(!is_switch(&m, w, &f("s1"), Direction::Down).unwrap());
    assert!(is_button(&m, w, &Formula::Top, Direction::Down).unwrap());
    assert!(is_pushed(&m, w, &Formula::Top, Direction::Down).unwrap());
    let opts = SearchOptions::default();
    assert!(find_family(&m, Direction::Down, 2, 1, &opts).unwrap().is_none());
    let cert = find_family(&m, Direction::Down, 2, 0, &opts).unwrap().unwrap();
    assert_eq!(cert.family.buttons, vec![f("b0"), f("b1")]);
}

#[test]
fn button_switch_letters_are_independent() {
    for m in 0..=3 {
        for n in 0..=3 {
            let model = bs_model(m, n, B).unwrap();
            let fam = ControlFamily::new(
                Direction::Up,
                (1..=m).map(|i| Formula::atom(&format!("b{i}"))).collect(),
                (1..=n).map(|j| Formula::atom(&format!("s{j}"))).collect(),
            );
            let cert = check_independent(&model, &fam, 1 << 24).unwrap().unwrap();
            assert!(cert.verify(), "bs({m},{n})");
        }
    }
}

#[test]
fn claimed_switch_that_is_a_button_fails() {
    let m = bs_model(1, 0, B).unwrap();
    let fam = ControlFamily::new(Direction::Up, vec![], vec![f("b1")]);
    let w = check_independent(&m, &fam, 1 << 20).unwrap().unwrap_err();
    assert_eq!(w, FailureWitness::NotASwitch { switch: 0 });
}

#[test]
fn small_searches() {
    let opts = SearchOptions::default();
    let point = PointedModel::bare(single_point(), 0).unwrap();
    assert!(find_family(&point, Direction::Up, 1, 0, &opts).unwrap().is_none());
    let c3 = PointedModel::with_letters(cluster(3), [("p", vec![1])], 0).unwrap();
    let cert = find_family(&c3, Direction::Up, 0, 1, &opts).unwrap().unwrap();
    assert_eq!(cert.family.switches, vec![f("p")]);
    let c2 = PointedModel::with_letters(chain(2), [("p", vec![1])], 0).unwrap();
    let fam = ControlFamily::new(Direction::Up, vec![f("p")], vec![]);
    assert!(check_independent(&c2, &fam, 1 << 10).unwrap().is_ok());
}

#[test]
fn combination_frames_have_the_expected_cones() {
    let below = combo_frame(ComboKind::ClusterBelowBs, 2, 1, 0, B).unwrap();
    assert_eq!(below.n(), 3);
    let above = combo_frame(ComboKind::ClusterAboveBs, 2, 1, 0, B).unwrap();
    assert!(above.frame().cone(Direction::Down, 0).is_full());
    assert_eq!(above.frame().cone(Direction::Up, 0).iter().collect::<Vec<_>>(), vec![0, 1]);
}

// Every S4.2 refutation whose countermodel fits the family is transferred to
// a verified refutation by the controls; the rest report too few controls.
#[test]
fn simulation_transfers_s42_refutations() {
    let m = bs_model(3, 1, B).unwrap();
    let cert = find_family(&m, Direction::Up, 3, 1, &SearchOptions::default()).unwrap().unwrap();
    let (mut done, mut short) = (0, 0);
    for g in enumerate(1, 6, &up()) {
        let Verdict::Invalid(cm) = decide(Theory::S42, &g, &Budget::default()).unwrap() else {
            continue;
        };
        match simulate_countermodel(&cert, &g, &cm.model) {
            Ok(s) => {
                assert!(!eval(&m, &g.substitute(&s)).contains(m.point()), "{g}");
                assert!(!ml_member(&m, &g).unwrap(), "{g}");
                done += 1;
            }
            Err(ControlError::InsufficientControls(_)) => short += 1,
            Err(e) => panic!("{g}: {e}"),
        }
    }
    assert!(done > 1000, "{done} transferred, {short} short");
}

#[test]
fn switches_transfer_s5_refutations_on_a_cluster() {
    let letters: Vec<(String, Vec<usize>)> = (0..4).map(|i| (format!("k{i}"), vec![i])).collect();
    let m = PointedModel::with_letters(cluster(4), letters.iter().map(|(p, w)| (p.as_str(), w.clone())), 0).unwrap();
    let cert = find_family(&m, Direction::Up, 0, 2, &SearchOptions::default()).unwrap().unwrap();
    for g in enumerate(2, 5, &up()) {
        if let Verdict::Invalid(cm) = decide(Theory::S5, &g, &Budget::default()).unwrap() {
            let s = simulate_countermodel(&cert, &g, &cm.model).unwrap();
            assert!(!eval(&m, &g.substitute(&s)).contains(0), "{g}");
        }
    }
}
