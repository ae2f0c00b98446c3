//! Experiment suites over the powerset, combination and corpus frames.

use crate::corpus::{corpus, thm4_shape, Shape};
use crate::report::Report;
use crate::CliError;
use gmlogic::controls::{find_family, is_button, is_pushed, SearchOptions};
use gmlogic::frame::ComboKind;
use gmlogic::semantics::{ml_member, MlChecker};
use gmlogic::theories::{Classification, Outcome, Theory};
use gmlogic::{parse, Direction, Formula, PointedModel};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Letters and size bound of every single-frame fragment.
pub const FRAGMENT_LETTERS: usize = 1;
pub const FRAGMENT_SIZE: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    Thm4,
    Thm5,
    Thm6,
    Thm7,
    Thm8,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Thm4,
        Experiment::Thm5,
        Experiment::Thm6,
        Experiment::Thm7,
        Experiment::Thm8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Thm4 => "thm4",
            Experiment::Thm5 => "thm5",
            Experiment::Thm6 => "thm6",
            Experiment::Thm7 => "thm7",
            Experiment::Thm8 => "thm8",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

/// A report together with the named assertions it was checked against.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub report: Report,
    pub checks: Vec<(String, bool)>,
}

impl ExperimentOutcome {
    fn new(e: Experiment) -> Self {
        let mut report = Report::new();
        report.push("experiment", e);
        ExperimentOutcome {
            report,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push((name.to_string(), ok));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }

    /// The report with one `check.<name>` line per assertion.
    pub fn full_report(&self) -> Report {
        let mut r = self.report.clone();
        for (name, ok) in &self.checks {
            r.push(format!("check.{name}"), if *ok { "pass" } else { "fail" });
        }
        r
    }
}

pub fn run(e: Experiment) -> Result<ExperimentOutcome, CliError> {
    match e {
        Experiment::Thm4 => thm4(),
        Experiment::Thm5 => thm5(),
        Experiment::Thm6 => combo(e, ComboKind::ClusterBelowBs, Theory::S42, Theory::S5),
        Experiment::Thm7 => combo(e, ComboKind::ClusterAboveBs, Theory::S5, Theory::S42),
        Experiment::Thm8 => thm8(),
    }
}

fn dir_set(d: Direction) -> BTreeSet<Direction> {
    [d].into()
}

/// The fragment at the point in one direction, appended to the report.
fn fragment_block(
    out: &mut ExperimentOutcome,
    checker: &MlChecker,
    d: Direction,
) -> Result<(Classification, gmlogic::semantics::FragmentReport), CliError> {
    out.report.push("direction", d.name());
    let rep = checker.fragment(FRAGMENT_LETTERS, FRAGMENT_SIZE, &dir_set(d))?;
    let class = out.report.push_fragment(&rep);
    Ok((class, rep))
}

fn header(out: &mut ExperimentOutcome, shape: &Shape, m: &PointedModel) {
    out.report.push("frame", shape);
    out.report.push("point", m.point());
}

fn thm4() -> Result<ExperimentOutcome, CliError> {
    let mut out = ExperimentOutcome::new(Experiment::Thm4);
    let shape = thm4_shape();
    let m = shape.build()?;
    header(&mut out, &shape, &m);
    let checker = MlChecker::new(&m);
    let (class, rep) = fragment_block(&mut out, &checker, Direction::Down)?;
    let cert = find_family(&m, Direction::Down, 2, 1, &SearchOptions::default())?;
    out.report.push_controls(cert.as_ref());

    out.check("down_directed", m.frame().properties().down_directed);
    let s42 = &rep.outcomes[&Theory::S42];
    let contains = rep
        .members
        .iter()
        .zip(s42)
        .all(|(&member, o)| *o != Outcome::Valid || member);
    out.check("contains_s4.2", contains);
    let t_b = parse("<d>[d]p0 -> p0").expect("fixed formula");
    out.check("excludes_<d>[d]p0->p0", !checker.check(&t_b)?.is_member());
    out.check("classifies_s4.2", class.matches.contains(&Theory::S42));
    out.check("s5_separated", class.separators.contains_key(&Theory::S5));
    out.check("family_2_1_certified", cert.is_some());
    Ok(out)
}

fn thm5() -> Result<ExperimentOutcome, CliError> {
    let mut out = ExperimentOutcome::new(Experiment::Thm5);
    let shape = thm4_shape();
    let m = shape.build()?;
    header(&mut out, &shape, &m);
    let checker = MlChecker::new(&m);
    for d in [Direction::Up, Direction::Down] {
        let (class, _) = fragment_block(&mut out, &checker, d)?;
        out.check(&format!("{}_s4.2", d.name()), is_exactly(&class, Theory::S42));
    }
    Ok(out)
}

/// The fragment matches `t` and not the next theory up.
fn is_exactly(class: &Classification, t: Theory) -> bool {
    class.matches.contains(&t) && !class.matches.iter().any(|&u| stronger(u, t))
}

/// Theories ordered by strength of their validities: PL ⊇ S5 ⊇ S4.2 ⊇ S4.
fn stronger(u: Theory, t: Theory) -> bool {
    let rank = |x: Theory| match x {
        Theory::S4 => 0,
        Theory::S42 => 1,
        Theory::S5 => 2,
        Theory::Pl => 3,
    };
    rank(u) > rank(t)
}

fn combo(e: Experiment, kind: ComboKind, up: Theory, down: Theory) -> Result<ExperimentOutcome, CliError> {
    let mut out = ExperimentOutcome::new(e);
    let shape = Shape::Combo {
        kind,
        cluster: 2,
        buttons: 2,
        switches: 1,
    };
    let m = shape.build()?;
    header(&mut out, &shape, &m);
    let checker = MlChecker::new(&m);
    for (d, t) in [(Direction::Up, up), (Direction::Down, down)] {
        let (class, _) = fragment_block(&mut out, &checker, d)?;
        out.check(&format!("{}_{}", d.name(), t.name().to_lowercase()), is_exactly(&class, t));
    }
    Ok(out)
}

/// `<d>[d]f -> f`, valid on every equivalence frame.
fn s5_instance(d: Direction, f: &Formula) -> Formula {
    Formula::imp(Formula::dia(d, Formula::boxed(d, f.clone())), f.clone())
}

/// Counts of the mixed-button sweep over one model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MixedButtons {
    pub worlds: usize,
    pub pairs: usize,
    pub violations: usize,
}

/// For every world and every letter or negated letter `f`: when `f` is an
/// unpushed down button and `~f` an unpushed up button, the instances
/// `<d>[d]f -> f` and `<u>[u]~f -> ~f` must not both be ml-valid there.
pub fn mixed_buttons(m: &PointedModel) -> Result<MixedButtons, CliError> {
    let mut cands = Vec::new();
    for p in m.valuation().keys() {
        cands.push(Formula::atom(p));
        cands.push(Formula::not(Formula::atom(p)));
    }
    let mut out = MixedButtons::default();
    for w in 0..m.n() {
        out.worlds += 1;
        for f in &cands {
            let nf = Formula::not(f.clone());
            let down = is_button(m, w, f, Direction::Down)? && !is_pushed(m, w, f, Direction::Down)?;
            if !down || !(is_button(m, w, &nf, Direction::Up)? && !is_pushed(m, w, &nf, Direction::Up)?) {
                continue;
            }
            out.pairs += 1;
            let at = m.at(w)?;
            if ml_member(&at, &s5_instance(Direction::Down, f))? && ml_member(&at, &s5_instance(Direction::Up, &nf))? {
                out.violations += 1;
            }
        }
    }
    Ok(out)
}

/// Whether the fragments at the point are S5 in both directions. Cheap
/// necessary conditions are checked before computing full fragments.
pub fn s5_both_ways(m: &PointedModel, size: usize) -> Result<bool, CliError> {
    let p = Formula::atom("p0");
    let checker = MlChecker::new(m);
    for d in Direction::ALL {
        if !checker.check(&s5_instance(d, &p))?.is_member() {
            return Ok(false);
        }
    }
    for d in Direction::ALL {
        let rep = checker.fragment(FRAGMENT_LETTERS, size, &dir_set(d))?;
        if !gmlogic::theories::classify(&rep).matches.contains(&Theory::S5) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn thm8() -> Result<ExperimentOutcome, CliError> {
    let mut out = ExperimentOutcome::new(Experiment::Thm8);
    let shapes = corpus();
    out.report.push("frame", format!("corpus({})", shapes.len()));
    let mut total = MixedButtons::default();
    let mut powerset_points = 0;
    let mut s5_s5 = Vec::new();
    for shape in &shapes {
        let m = shape.build()?;
        let r = mixed_buttons(&m)?;
        total.worlds += r.worlds;
        total.pairs += r.pairs;
        total.violations += r.violations;
        if shape.is_powerset() {
            for w in 0..m.n() {
                powerset_points += 1;
                if s5_both_ways(&m.at(w)?, 5)? {
                    s5_s5.push(format!("{shape}@{w}"));
                }
            }
        }
    }
    out.report.push("worlds_checked", total.worlds);
    out.report.push("mixed_button_pairs", total.pairs);
    out.report.push("mixed_button_violations", total.violations);
    out.report.push("powerset_points", powerset_points);
    out.report.push("powerset_s5_s5_points", s5_s5.len());
    for p in &s5_s5 {
        out.report.push("powerset_s5_s5", p);
    }
    out.check("corpus_size", shapes.len() >= 50);
    out.check("mixed_button_violations", total.violations == 0);
    out.check("no_powerset_s5_s5", s5_s5.is_empty());
    Ok(out)
}
