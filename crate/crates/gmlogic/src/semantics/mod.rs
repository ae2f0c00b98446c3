//! Model checking, definable sets, and membership in the substitution-closed
//! validities of a pointed model.

mod algebra;
mod ml;
mod sat;

pub use algebra::{bisimulation_partition, definable_algebra, quotient, Partition};
pub use ml::{ml_check, ml_fragment, ml_member, FragmentReport, Membership, MlChecker, MlOptions, Separator};

use crate::compiled::{Compiled, Node};
use crate::formula::Formula;
use crate::frame::{Frame, PointedModel, WorldSet};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("world index {index} out of range for a frame of {n} worlds")]
    BadWorldIndex { index: usize, n: usize },
    #[error("{what} needs {needed}, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
}

/// Extension of `f` in the model.
pub fn eval(m: &PointedModel, f: &Formula) -> WorldSet {
    eval_in(m.frame(), m.valuation(), f)
}

/// Extension of `f` on `frame` under `valuation`; unlisted letters are empty.
pub fn eval_in(frame: &Frame, valuation: &BTreeMap<String, WorldSet>, f: &Formula) -> WorldSet {
    let c = Compiled::new(f);
    let n = frame.n();
    let letters: Vec<WorldSet> = c
        .letters
        .iter()
        .map(|p| valuation.get(p).cloned().unwrap_or_else(|| WorldSet::empty(n)))
        .collect();
    eval_compiled(&c, frame, &letters)
}

pub(crate) fn eval_compiled(c: &Compiled, frame: &Frame, letters: &[WorldSet]) -> WorldSet {
    let n = frame.n();
    let mut vals: Vec<WorldSet> = Vec::with_capacity(c.nodes.len());
    for node in &c.nodes {
        let v = match *node {
            Node::Letter(l) => letters[l].clone(),
            Node::Top => WorldSet::full(n),
            Node::Bot => WorldSet::empty(n),
            Node::Not(a) => vals[a].complement(),
            Node::And(a, b) => vals[a].intersect(&vals[b]),
            Node::Or(a, b) => vals[a].union(&vals[b]),
            Node::Imp(a, b) => vals[a].implies(&vals[b]),
            Node::Iff(a, b) => vals[a].iff(&vals[b]),
            Node::Box(d, a) => frame.box_of(d, &vals[a]),
            Node::Dia(d, a) => frame.dia_of(d, &vals[a]),
        };
        vals.push(v);
    }
    vals.pop().expect("compiled formulas are non-empty")
}

/// Truth of `f` at world `w`.
pub fn holds_at(m: &PointedModel, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
    if w >= m.n() {
        return Err(SemanticsError::BadWorldIndex { index: w, n: m.n() });
    }
    Ok(eval(m, f).contains(w))
}

/// Truth of `f` at every world.
pub fn valid_on(m: &PointedModel, f: &Formula) -> bool {
    eval(m, f).is_full()
}

/// Worlds whose whole connected component satisfies `f`.
pub fn multiverse_truth(m: &PointedModel, f: &Formula) -> WorldSet {
    let ext = eval(m, f);
    let n = m.n();
    let mut out = WorldSet::empty(n);
    let mut done = WorldSet::empty(n);
    for w in 0..n {
        if done.contains(w) {
            continue;
        }
        let comp = m.frame().component(w);
        if comp.is_subset(&ext) {
            out.union_with(&comp);
        }
        done.union_with(&comp);
    }
    out
}
