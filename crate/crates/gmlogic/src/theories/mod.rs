//! The monomodal theories PL, S4, S4.2 and S5, decided with countermodels.
//!
//! A formula is decided in the direction its modalities use; formulas without
//! modalities count as up formulas. Countermodels for down formulas are
//! returned with the relation stored in the down direction, so evaluating the
//! original formula on them refutes it.

mod elim;
mod search;

pub use search::MAX_SEARCH_WORLDS;

use crate::compiled::{first_refutation, Compiled, SmallFrame};
use crate::formula::{parse, Direction, Formula};
use crate::frame::{Frame, PointedModel, WorldSet};
use crate::semantics::{FragmentReport, Separator};
use elim::{Atoms, Elim};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    /// Validity on a single reflexive point: modalities are inert.
    Pl,
    S4,
    S42,
    S5,
}

impl Theory {
    pub const ALL: [Theory; 4] = [Theory::Pl, Theory::S4, Theory::S42, Theory::S5];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Pl => "PL",
            Theory::S4 => "S4",
            Theory::S42 => "S4.2",
            Theory::S5 => "S5",
        }
    }

    pub fn from_name(s: &str) -> Option<Theory> {
        Theory::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s))
    }

    /// Whether a reflexive transitive frame belongs to the theory's class, in
    /// direction `d`.
    pub fn admits(self, frame: &Frame, d: Direction) -> bool {
        let p = frame.properties();
        let preorder = p.reflexive && p.transitive;
        match self {
            Theory::Pl => frame.n() == 1 && preorder,
            Theory::S4 => preorder,
            Theory::S42 => {
                preorder
                    && match d {
                        Direction::Up => p.up_directed,
                        Direction::Down => p.down_directed,
                    }
            }
            Theory::S5 => preorder && (0..frame.n()).all(|w| frame.up_row(w).is_full()),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named axiom schemes of a theory, oriented to `d`.
pub fn axioms(t: Theory, d: Direction) -> Vec<(&'static str, Formula)> {
    let k = ("K", "[u](p -> q) -> [u]p -> [u]q");
    let t_ax = ("T", "[u]p -> p");
    let four = ("4", "[u]p -> [u][u]p");
    let list = match t {
        Theory::Pl => vec![t_ax, ("Triv", "p -> [u]p")],
        Theory::S4 => vec![k, t_ax, four],
        Theory::S42 => vec![k, t_ax, four, (".2", "<u>[u]p -> [u]<u>p")],
        Theory::S5 => vec![k, t_ax, four, ("5", "<u>p -> [u]<u>p")],
    };
    list.into_iter()
        .map(|(name, text)| (name, parse(text).expect("axiom text parses").orient(d)))
        .collect()
}

/// Search limits for [`decide`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest frame tried by the canonical countermodel search (at most
    /// [`MAX_SEARCH_WORLDS`]).
    pub max_worlds: usize,
    /// Cap on atoms, and on valuations examined by searches.
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_worlds: MAX_SEARCH_WORLDS,
            nodes: 1 << 26,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("formula mixes up and down modalities")]
    MixedDirections,
}

/// A model refuting a formula at its point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: PointedModel,
}

impl Countermodel {
    pub fn world(&self) -> usize {
        self.model.point()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Countermodel),
    Unknown(String),
}

impl Verdict {
    pub fn outcome(&self) -> Outcome {
        match self {
            Verdict::Valid => Outcome::Valid,
            Verdict::Invalid(_) => Outcome::Invalid,
            Verdict::Unknown(_) => Outcome::Unknown,
        }
    }
}

/// A verdict without its countermodel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Valid,
    Invalid,
    Unknown,
}

fn direction_of(f: &Formula) -> Result<Direction, TheoryError> {
    let dirs = f.directions();
    match dirs.len() {
        0 => Ok(Direction::Up),
        1 => Ok(*dirs.iter().next().expect("one direction")),
        _ => Err(TheoryError::MixedDirections),
    }
}

/// Valid, invalid or undecided within budget, without building a countermodel.
pub fn validity(t: Theory, f: &Formula, budget: &Budget) -> Result<Outcome, TheoryError> {
    direction_of(f)?;
    let c = Compiled::new(&f.orient(Direction::Up));
    Ok(match t {
        Theory::Pl => pl(&c, budget).map_or(Outcome::Unknown, |r| outcome_of(r.is_none())),
        Theory::S5 => s5(&c, budget).map_or(Outcome::Unknown, |r| outcome_of(r.is_none())),
        Theory::S4 | Theory::S42 => match Atoms::build(&c, budget.nodes) {
            None => Outcome::Unknown,
            Some(a) => outcome_of(matches!(elim_decide(t, &a), Elim::Valid)),
        },
    })
}

fn outcome_of(valid: bool) -> Outcome {
    if valid {
        Outcome::Valid
    } else {
        Outcome::Invalid
    }
}

fn elim_decide(t: Theory, a: &Atoms) -> Elim {
    if t == Theory::S4 {
        a.decide_s4()
    } else {
        a.decide_s42()
    }
}

/// Decides `f` in theory `t`. Invalid formulas come with a countermodel from
/// the theory's frame class: the first one in canonical order (by world count,
/// then frame, then valuation) when the search finds one within budget.
pub fn decide(t: Theory, f: &Formula, budget: &Budget) -> Result<Verdict, TheoryError> {
    let d = direction_of(f)?;
    let c = Compiled::new(&f.orient(Direction::Up));
    let found = match t {
        Theory::Pl => pl(&c, budget),
        Theory::S5 => s5(&c, budget),
        Theory::S4 | Theory::S42 => {
            let Some(atoms) = Atoms::build(&c, budget.nodes) else {
                return Ok(Verdict::Unknown("too many atoms".into()));
            };
            match elim_decide(t, &atoms) {
                Elim::Valid => Some(None),
                Elim::Invalid { alive, falsifier } => Some(Some(
                    canonical_search(t, &c, budget).unwrap_or_else(|| {
                        let (rows, letters) = atoms.model(&alive, falsifier);
                        let n = rows.len();
                        let frame = Frame::from_rows(
                            rows.into_iter().map(|r| WorldSet::from_worlds(n, r)).collect(),
                        );
                        (frame, letter_sets(n, c.letters.len(), |w, i| letters[w] >> i & 1 == 1), 0)
                    }),
                )),
            }
        }
    };
    Ok(match found {
        None => Verdict::Unknown("search budget exhausted".into()),
        Some(None) => Verdict::Valid,
        Some(Some((frame, sets, world))) => {
            let frame = if d == Direction::Down { converse(&frame) } else { frame };
            let valuation = c.letters.iter().cloned().zip(sets).collect();
            let model = PointedModel::new(frame, valuation, world).expect("countermodel is well formed");
            Verdict::Invalid(Countermodel { model })
        }
    })
}

type Found = (Frame, Vec<WorldSet>, usize);

fn letter_sets(n: usize, k: usize, holds: impl Fn(usize, usize) -> bool) -> Vec<WorldSet> {
    (0..k)
        .map(|i| WorldSet::from_worlds(n, (0..n).filter(|&w| holds(w, i))))
        .collect()
}

fn small_to_frame(f: &SmallFrame) -> Frame {
    Frame::from_rows(
        f.up.iter()
            .map(|&r| WorldSet::from_worlds(f.n, (0..f.n).filter(|j| r >> j & 1 == 1)))
            .collect(),
    )
}

fn decode(f: &SmallFrame, k: usize, v: u64) -> Found {
    let n = f.n;
    (small_to_frame(f), letter_sets(n, k, |w, i| v >> (i * n + w) & 1 == 1), 0)
}

fn converse(frame: &Frame) -> Frame {
    let n = frame.n();
    Frame::from_rows(
        (0..n)
            .map(|i| WorldSet::from_worlds(n, (0..n).filter(|&j| frame.up(j, i))))
            .collect(),
    )
}

/// Truth table on one reflexive point. `None` when over budget; `Some(None)` when valid.
fn pl(c: &Compiled, budget: &Budget) -> Option<Option<Found>> {
    let k = c.letters.len();
    if k >= 63 || (1u64 << k) > budget.nodes {
        return None;
    }
    let point = SmallFrame::from_up(vec![1]);
    let (hit, _) = first_refutation(c, &point, 0, 0, u64::MAX);
    Some(hit.map(|v| decode(&point, k, v)))
}

/// Universal models of increasing size. A smallest countermodel never
/// repeats a letter type, so sizes beyond `2^k` and `|sub| + 1` are not needed.
fn s5(c: &Compiled, budget: &Budget) -> Option<Option<Found>> {
    let k = c.letters.len();
    let sub = c.nodes.len();
    let bound = if k >= 6 { sub + 1 } else { (sub + 1).min(1 << k) };
    let mut left = budget.nodes;
    for n in 1..=bound {
        if k * n >= 63 || (1u64 << (k * n)) > left {
            return None;
        }
        let frame = SmallFrame::from_up(vec![(1u64 << n) - 1; n]);
        let (hit, used) = first_refutation(c, &frame, 0, 0, u64::MAX);
        if let Some(v) = hit {
            return Some(Some(decode(&frame, k, v)));
        }
        left -= used;
    }
    Some(None)
}

/// First refutation over the canonical small frames of the theory's class.
fn canonical_search(t: Theory, c: &Compiled, budget: &Budget) -> Option<Found> {
    let k = c.letters.len();
    let mut left = budget.nodes;
    for n in 1..=budget.max_worlds.min(MAX_SEARCH_WORLDS) {
        if k * n >= 63 {
            return None;
        }
        for f in search::rooted(n) {
            if t == Theory::S42 && !search::has_top(f) {
                continue;
            }
            let (hit, used) = first_refutation(c, f, 0, 0, left);
            if let Some(v) = hit {
                return Some(decode(f, k, v));
            }
            left = left.saturating_sub(used);
            if left == 0 {
                return None;
            }
        }
    }
    None
}

/// Theories whose validities coincide with a fragment, with the first
/// disagreeing formula for the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub matches: BTreeSet<Theory>,
    pub separators: BTreeMap<Theory, Separator>,
    /// Formulas each theory left undecided; they are not compared.
    pub undecided: BTreeMap<Theory, usize>,
}

/// Compares a monomodal fragment with every theory.
pub fn classify(report: &FragmentReport) -> Classification {
    let mut matches = BTreeSet::new();
    let mut separators = BTreeMap::new();
    let mut undecided = BTreeMap::new();
    for &t in report.outcomes.keys() {
        match report.separator(t) {
            Some(s) => {
                separators.insert(t, s);
            }
            None => {
                matches.insert(t);
            }
        }
        undecided.insert(t, report.unknown(t));
    }
    Classification {
        matches,
        separators,
        undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval;

    fn check(t: Theory, text: &str) -> Verdict {
        decide(t, &parse(text).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn axioms_are_valid_in_their_theory() {
        for t in Theory::ALL {
            for d in Direction::ALL {
                for (name, ax) in axioms(t, d) {
                    assert_eq!(decide(t, &ax, &Budget::default()).unwrap(), Verdict::Valid, "{t} {name}");
                }
            }
        }
    }

    #[test]
    fn separating_axioms() {
        assert_eq!(check(Theory::S4, "<u>[u]p -> [u]<u>p").outcome(), Outcome::Invalid);
        assert_eq!(check(Theory::S42, "<u>p -> [u]<u>p").outcome(), Outcome::Invalid);
        assert_eq!(check(Theory::S5, "<u>p -> [u]<u>p").outcome(), Outcome::Valid);
        assert_eq!(check(Theory::Pl, "p -> [u]p").outcome(), Outcome::Valid);
        assert_eq!(check(Theory::S5, "p -> [u]p").outcome(), Outcome::Invalid);
    }

    #[test]
    fn countermodels_refute_and_belong_to_the_class() {
        let cases = [
            (Theory::S4, "<u>[u]p -> [u]<u>p"),
            (Theory::S42, "<d>p -> [d]<d>p"),
            (Theory::S5, "p -> [u]p"),
            (Theory::Pl, "p & ~q"),
            (Theory::S4, "[d]<d>p -> <d>[d]p"),
        ];
        for (t, text) in cases {
            let f = parse(text).unwrap();
            let d = direction_of(&f).unwrap();
            match decide(t, &f, &Budget::default()).unwrap() {
                Verdict::Invalid(cm) => {
                    assert!(!eval(&cm.model, &f).contains(cm.world()), "{t} {text}");
                    assert!(t.admits(cm.model.frame(), d), "{t} {text}");
                }
                other => panic!("{t} {text}: {other:?}"),
            }
        }
    }

    #[test]
    fn first_countermodel_is_smallest() {
        // .2 needs a fork, p -> [u]p a two-chain
        match check(Theory::S4, "<u>[u]p -> [u]<u>p") {
            Verdict::Invalid(cm) => assert_eq!(cm.model.n(), 3),
            v => panic!("{v:?}"),
        }
        match check(Theory::S4, "p -> [u]p") {
            Verdict::Invalid(cm) => {
                assert_eq!(cm.model.n(), 2);
                assert_eq!(cm.model.frame(), &crate::frame::chain(2));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn mixed_directions_are_rejected() {
        let f = parse("[u]p -> [d]p").unwrap();
        assert_eq!(decide(Theory::S4, &f, &Budget::default()), Err(TheoryError::MixedDirections));
    }

    #[test]
    fn tiny_budgets_give_unknown() {
        let tiny = Budget { max_worlds: 6, nodes: 2 };
        let f = parse("[u]p -> p").unwrap();
        assert_eq!(validity(Theory::S4, &f, &tiny).unwrap(), Outcome::Unknown);
        assert!(matches!(decide(Theory::S5, &f, &tiny).unwrap(), Verdict::Unknown(_)));
    }
}
