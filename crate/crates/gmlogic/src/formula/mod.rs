//! Bimodal propositional formulas over an up modality and its converse.

mod enumerate;
mod parse;
mod print;

pub use enumerate::{enumerate, Enumeration};
pub use parse::{parse, SyntaxError};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Up, Direction::Down];

    pub fn converse(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Formula tree. Children are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Box(Direction, Arc<Formula>),
    Dia(Direction, Arc<Formula>),
}

/// Returns true if `name` matches `[a-z][a-z0-9]*` and is not a keyword.
pub fn is_letter(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        && name != "true"
        && name != "false"
}

/// Canonical letter `p<i>`.
pub fn canonical_letter(i: usize) -> String {
    format!("p{i}")
}

impl Formula {
    /// Panics if `name` is not a valid letter identifier.
    pub fn atom(name: &str) -> Formula {
        assert!(is_letter(name), "invalid letter identifier {name:?}");
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(d: Direction, f: Formula) -> Formula {
        Formula::Box(d, Arc::new(f))
    }

    pub fn dia(d: Direction, f: Formula) -> Formula {
        Formula::Dia(d, Arc::new(f))
    }

    /// Conjunction of a list; `⊤` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Disjunction of a list; `⊥` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::Not(a) | Formula::Box(_, a) | Formula::Dia(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::Box(_, a) | Formula::Dia(_, a) => 1 + a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Atom(p) = g {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Distinct subtrees including `self`, children before parents, each listed once.
    pub fn subformulas(&self) -> Vec<Formula> {
        fn go(f: &Formula, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
            if seen.contains(f) {
                return;
            }
            for c in f.children() {
                go(c, seen, out);
            }
            seen.insert(f.clone());
            out.push(f.clone());
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        go(self, &mut seen, &mut out);
        out
    }

    /// Modal directions occurring in the formula.
    pub fn directions(&self) -> BTreeSet<Direction> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Box(d, _) | Formula::Dia(d, _) = g {
                out.insert(*d);
            }
        });
        out
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => vec![],
            Formula::Not(a) | Formula::Box(_, a) | Formula::Dia(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Rewrites every modality to direction `d`.
    pub fn orient(&self, d: Direction) -> Formula {
        self.map_modal(&|_| d)
    }

    /// Swaps up and down modalities throughout.
    pub fn converse(&self) -> Formula {
        self.map_modal(&|x| x.converse())
    }

    fn map_modal(&self, m: &impl Fn(Direction) -> Direction) -> Formula {
        let r = |a: &Arc<Formula>| Arc::new(a.map_modal(m));
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Imp(a, b) => Formula::Imp(r(a), r(b)),
            Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
            Formula::Box(d, a) => Formula::Box(m(*d), r(a)),
            Formula::Dia(d, a) => Formula::Dia(m(*d), r(a)),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        let r = |a: &Arc<Formula>| Arc::new(a.substitute(s));
        match self {
            Formula::Atom(p) => s.get(p).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Imp(a, b) => Formula::Imp(r(a), r(b)),
            Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
            Formula::Box(d, a) => Formula::Box(*d, r(a)),
            Formula::Dia(d, a) => Formula::Dia(*d, r(a)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", print::print(self))
    }
}

/// Canonical text of a formula with minimal parentheses.
pub fn print(f: &Formula) -> String {
    print::print(f)
}

/// Simultaneous substitution of formulas for letters. Unmapped letters are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, Formula>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn with(mut self, letter: &str, f: Formula) -> Self {
        self.insert(letter, f);
        self
    }

    pub fn insert(&mut self, letter: &str, f: Formula) {
        assert!(is_letter(letter), "invalid letter identifier {letter:?}");
        self.0.insert(letter.to_string(), f);
    }

    pub fn get(&self, letter: &str) -> Option<&Formula> {
        self.0.get(letter)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Formula)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total application: the image of `letter`.
    pub fn apply(&self, letter: &str) -> Formula {
        self.get(letter).cloned().unwrap_or_else(|| Formula::Atom(letter.to_string()))
    }

    /// `then ∘ self`: maps `p` to `self(p)` with `then` applied afterwards.
    pub fn then(&self, then: &Substitution) -> Substitution {
        let mut out: BTreeMap<String, Formula> = BTreeMap::new();
        for (p, f) in &self.0 {
            out.insert(p.clone(), f.substitute(then));
        }
        for (p, f) in &then.0 {
            out.entry(p.clone()).or_insert_with(|| f.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(String, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Formula)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (p, f) in iter {
            s.insert(&p, f);
        }
        s
    }
}
