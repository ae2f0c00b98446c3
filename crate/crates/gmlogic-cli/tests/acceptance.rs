//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use gmlogic::controls::{find_family, simulate_countermodel, SearchOptions};
use gmlogic::formula::enumerate;
use gmlogic::frame::{cluster, single_point};
use gmlogic::semantics::{eval, ml_fragment, ml_member};
use gmlogic::theories::{decide, validity, Budget, Outcome, Theory, Verdict};
use gmlogic::{parse, Direction, Formula, Frame, PointedModel, WorldSet};
use gmlogic_cli::corpus::{corpus, thm4_shape};
use gmlogic_cli::experiments::{self, Experiment};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Check {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Check {
    Check {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Check {
    Check {
        ok: false,
        detail: detail.into(),
    }
}

fn up() -> BTreeSet<Direction> {
    [Direction::Up].into()
}

// Direct recursive evaluation at one world, reading the relation pointwise.
fn naive(frame: &Frame, val: &BTreeMap<String, WorldSet>, f: &Formula, w: usize) -> bool {
    let n = frame.n();
    let rec = |g: &Formula, v: usize| naive(frame, val, g, v);
    let step = |d: Direction, v: usize| match d {
        Direction::Up => frame.up(w, v),
        Direction::Down => frame.up(v, w),
    };
    match f {
        Formula::Atom(p) => val.get(p).is_some_and(|s| s.contains(w)),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Not(a) => !rec(a, w),
        Formula::And(a, b) => rec(a, w) && rec(b, w),
        Formula::Or(a, b) => rec(a, w) || rec(b, w),
        Formula::Imp(a, b) => !rec(a, w) || rec(b, w),
        Formula::Iff(a, b) => rec(a, w) == rec(b, w),
        Formula::Box(d, a) => (0..n).all(|v| !step(*d, v) || rec(a, v)),
        Formula::Dia(d, a) => (0..n).any(|v| step(*d, v) && rec(a, v)),
    }
}

// Classical value with modalities erased.
fn truth_table(f: &Formula, val: &BTreeMap<String, bool>) -> bool {
    let rec = |g: &Formula| truth_table(g, val);
    match f {
        Formula::Atom(p) => val[p],
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Not(a) => !rec(a),
        Formula::And(a, b) => rec(a) && rec(b),
        Formula::Or(a, b) => rec(a) || rec(b),
        Formula::Imp(a, b) => !rec(a) || rec(b),
        Formula::Iff(a, b) => rec(a) == rec(b),
        Formula::Box(_, a) | Formula::Dia(_, a) => rec(a),
    }
}

fn pl_oracle(f: &Formula) -> bool {
    let ls: Vec<String> = f.letters().into_iter().collect();
    (0..1u32 << ls.len()).all(|bits| {
        let val = ls.iter().enumerate().map(|(i, p)| (p.clone(), bits >> i & 1 == 1)).collect();
        truth_table(f, &val)
    })
}

// Universal models with at most `bound` worlds. Worlds with the same letter
// type are bisimilar there, so it suffices to range over sets of types of
// size at most `bound` with the point at any of them.
fn s5_oracle(f: &Formula, bound: usize) -> bool {
    let ls: Vec<String> = f.letters().into_iter().collect();
    let types = 1usize << ls.len();
    for set in 1usize..1 << types {
        let members: Vec<usize> = (0..types).filter(|t| set >> t & 1 == 1).collect();
        if members.len() > bound {
            continue;
        }
        let n = members.len();
        let frame = cluster(n);
        let val = ls
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), WorldSet::from_worlds(n, (0..n).filter(|&w| members[w] >> i & 1 == 1))))
            .collect();
        if (0..n).any(|w| !naive(&frame, &val, f, w)) {
            return false;
        }
    }
    true
}

fn random_formula(rng: &mut StdRng, depth: usize) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2 | 3 => Formula::atom("p"),
            _ => Formula::atom("q"),
        };
    }
    let d = if rng.gen_bool(0.5) { Direction::Up } else { Direction::Down };
    let op = rng.gen_range(0..8);
    let mut sub = || random_formula(rng, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::imp(sub(), sub()),
        4 => Formula::iff(sub(), sub()),
        5 | 6 => Formula::boxed(d, sub()),
        _ => Formula::dia(d, sub()),
    }
}

fn random_model(rng: &mut StdRng) -> (Frame, BTreeMap<String, WorldSet>) {
    let n = rng.gen_range(1..=8);
    let density = rng.gen_range(0.1..0.7);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(density)).collect();
    let frame = gmlogic::frame::make_frame(n, &edges, gmlogic::frame::Closure::NONE).unwrap();
    let val = ["p", "q"]
        .iter()
        .map(|p| (p.to_string(), WorldSet::from_worlds(n, (0..n).filter(|_| rng.gen_bool(0.5)))))
        .collect();
    (frame, val)
}

fn c1_round_trip() -> Check {
    let both: BTreeSet<Direction> = Direction::ALL.into();
    let fs = enumerate(2, 7, &both);
    let bad = fs.iter().filter(|f| parse(&f.to_string()).as_ref() != Ok(*f)).count();
    if bad == 0 {
        pass(format!("{} formulas", fs.len()))
    } else {
        fail(format!("{bad} of {} formulas do not round-trip", fs.len()))
    }
}

fn c2_eval_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    for _ in 0..500 {
        let (frame, val) = random_model(&mut rng);
        for _ in 0..20 {
            let f = random_formula(&mut rng, 4);
            let ext = gmlogic::semantics::eval_in(&frame, &val, &f);
            mismatches += (0..frame.n()).filter(|&w| ext.contains(w) != naive(&frame, &val, &f, w)).count();
        }
    }
    if mismatches == 0 {
        pass("500 models x 20 formulas")
    } else {
        fail(format!("{mismatches} world mismatches"))
    }
}

fn c3_deciders() -> Check {
    let fs = enumerate(2, 7, &up());
    let budget = Budget::default();
    let (mut s5_bad, mut pl_bad, mut unknown) = (0, 0, 0);
    for f in &fs {
        let bound = f.subformulas().len() + 1;
        let s5 = validity(Theory::S5, f, &budget).unwrap();
        let pl = validity(Theory::Pl, f, &budget).unwrap();
        for t in [Theory::S4, Theory::S42] {
            unknown += (validity(t, f, &budget).unwrap() == Outcome::Unknown) as usize;
        }
        unknown += (s5 == Outcome::Unknown) as usize + (pl == Outcome::Unknown) as usize;
        s5_bad += ((s5 == Outcome::Valid) != s5_oracle(f, bound)) as usize;
        pl_bad += ((pl == Outcome::Valid) != pl_oracle(f)) as usize;
    }
    let detail = format!("{} formulas, S5 mismatches {s5_bad}, PL mismatches {pl_bad}, unknown {unknown}", fs.len());
    if s5_bad + pl_bad + unknown == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c4_ordering() -> Check {
    let fs = enumerate(2, 7, &up());
    let budget = Budget::default();
    let valid = |t, f: &Formula| validity(t, f, &budget).unwrap() == Outcome::Valid;
    let mut breaks = 0;
    for f in &fs {
        let (s4, s42, s5) = (valid(Theory::S4, f), valid(Theory::S42, f), valid(Theory::S5, f));
        breaks += ((s4 && !s42) || (s42 && !s5)) as usize;
    }
    let dot2 = parse("<u>[u]p -> [u]<u>p").unwrap();
    let tb = parse("<u>[u]p -> p").unwrap();
    let named = valid(Theory::S42, &dot2) && !valid(Theory::S4, &dot2) && valid(Theory::S5, &tb) && !valid(Theory::S42, &tb);
    let detail = format!("{} formulas, {breaks} ordering breaks, separating axioms {named}", fs.len());
    if breaks == 0 && named {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c5_single_point() -> Check {
    let m = PointedModel::bare(single_point(), 0).unwrap();
    let rep = ml_fragment(&m, 1, 5, &[Direction::Down].into()).unwrap();
    let budget = Budget::default();
    let diff = rep
        .formulas
        .iter()
        .zip(&rep.members)
        .filter(|(f, &mem)| mem != (validity(Theory::Pl, f, &budget).unwrap() == Outcome::Valid))
        .count();
    if diff == 0 {
        pass(format!("{} formulas", rep.formulas.len()))
    } else {
        fail(format!("{diff} disagreements with PL"))
    }
}

fn experiment(e: Experiment) -> (bool, String) {
    match experiments::run(e) {
        Ok(out) if out.passed() => (true, format!("{e} ok")),
        Ok(out) => (false, format!("{e} failed: {}", out.failures().join(", "))),
        Err(err) => (false, format!("{e} error: {err}")),
    }
}

fn c6_thm4() -> Check {
    let (ok, detail) = experiment(Experiment::Thm4);
    Check { ok, detail }
}

fn c7_simulation() -> Check {
    let budget = Budget::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let m = thm4_shape().build().unwrap();
    match find_family(&m, Direction::Down, 2, 1, &SearchOptions::default()).unwrap() {
        None => {
            ok = false;
            notes.push("no certified (2,1) down family on the powerset frame".to_string());
        }
        Some(cert) => {
            let mut failures = 0;
            let mut count = 0;
            for f in enumerate(2, 7, &[Direction::Down].into()) {
                if let Verdict::Invalid(cm) = decide(Theory::S42, &f, &budget).unwrap() {
                    count += 1;
                    failures += simulate_countermodel(&cert, &f, &cm.model).is_err() as usize;
                }
            }
            ok &= failures == 0;
            notes.push(format!("powerset: {failures} failures over {count}"));
        }
    }

    let c4 = PointedModel::new(
        cluster(4),
        (0..4).map(|i| (format!("k{i}"), WorldSet::singleton(4, i))).collect(),
        0,
    )
    .unwrap();
    match find_family(&c4, Direction::Up, 0, 2, &SearchOptions::default()).unwrap() {
        None => {
            ok = false;
            notes.push("no certified switch pair on cluster(4)".to_string());
        }
        Some(cert) => {
            let mut failures = 0;
            let mut count = 0;
            for f in enumerate(2, 7, &up()) {
                if let Verdict::Invalid(cm) = decide(Theory::S5, &f, &budget).unwrap() {
                    count += 1;
                    let refuted = simulate_countermodel(&cert, &f, &cm.model)
                        .map(|s| !eval(&c4, &f.substitute(&s)).contains(c4.point()))
                        .unwrap_or(false);
                    failures += !refuted as usize;
                }
            }
            ok &= failures == 0;
            notes.push(format!("cluster(4): {failures} failures over {count}"));
        }
    }
    Check {
        ok,
        detail: notes.join("; "),
    }
}

fn c8_combinations() -> Check {
    let runs: Vec<(bool, String)> = [Experiment::Thm5, Experiment::Thm6, Experiment::Thm7]
        .into_iter()
        .map(experiment)
        .collect();
    Check {
        ok: runs.iter().all(|(ok, _)| *ok),
        detail: runs.into_iter().map(|(_, d)| d).collect::<Vec<_>>().join("; "),
    }
}

fn c9_thm8() -> Check {
    let (ok, detail) = experiment(Experiment::Thm8);
    Check { ok, detail }
}

fn c10_converse() -> Check {
    let fs = [parse("p -> [u]<d>p").unwrap(), parse("p -> [d]<u>p").unwrap()];
    let shapes = corpus();
    let mut bad = Vec::new();
    for s in &shapes {
        let m = s.build().unwrap();
        for f in &fs {
            if !ml_member(&m, f).unwrap() {
                bad.push(format!("{s}: {f}"));
            }
        }
    }
    if bad.is_empty() {
        pass(format!("{} models", shapes.len()))
    } else {
        fail(bad.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("round-trip", Duration::from_secs(5), c1_round_trip),
        ("eval-oracle", Duration::from_secs(10), c2_eval_oracle),
        ("decider-completeness", Duration::from_secs(60), c3_deciders),
        ("theory-ordering", Duration::from_secs(60), c4_ordering),
        ("single-point-pl", Duration::from_secs(5), c5_single_point),
        ("thm4", Duration::from_secs(600), c6_thm4),
        ("simulation", Duration::from_secs(600), c7_simulation),
        ("thm5-7", Duration::from_secs(900), c8_combinations),
        ("thm8", Duration::from_secs(600), c9_thm8),
        ("converse-validities", Duration::from_secs(60), c10_converse),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let r = run();
        let took = start.elapsed();
        let ok = r.ok && took <= limit;
        let late = if took > limit { " (over time limit)" } else { "" };
        println!(
            "{} {:>2} {name}: {} [{} ms{late}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            r.detail,
            took.as_millis()
        );
        failed += !ok as usize;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
