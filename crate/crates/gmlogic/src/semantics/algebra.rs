use super::SemanticsError;
use crate::formula::Direction;
use crate::frame::{Frame, PointedModel, WorldSet};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A partition of the worlds; classes are numbered by their least world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<WorldSet>,
}

impl Partition {
    fn from_labels(labels: &[usize]) -> Partition {
        let n = labels.len();
        let mut renumber = HashMap::new();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = renumber.len();
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        let mut classes = vec![WorldSet::empty(n); renumber.len()];
        for (w, &c) in class_of.iter().enumerate() {
            classes[c].insert(w);
        }
        Partition { class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn classes(&self) -> &[WorldSet] {
        &self.classes
    }

    /// Union of the given classes.
    pub fn union_of(&self, classes: impl IntoIterator<Item = usize>) -> WorldSet {
        let mut out = WorldSet::empty(self.class_of.len());
        for c in classes {
            out.union_with(&self.classes[c]);
        }
        out
    }
}

/// Coarsest partition that respects the given letters and is stable under
/// both the up relation and its converse: the largest bimodal bisimulation.
pub fn bisimulation_partition(m: &PointedModel, letters: &BTreeSet<String>) -> Partition {
    let n = m.n();
    let frame = m.frame();
    let sets: Vec<WorldSet> = letters.iter().map(|p| m.letter(p)).collect();
    let initial: Vec<Vec<bool>> = (0..n).map(|w| sets.iter().map(|s| s.contains(w)).collect()).collect();
    let mut ids = HashMap::new();
    let labels: Vec<usize> = initial
        .into_iter()
        .map(|sig| {
            let next = ids.len();
            *ids.entry(sig).or_insert(next)
        })
        .collect();
    let mut part = Partition::from_labels(&labels);
    let down: Vec<Vec<usize>> = {
        let mut d = vec![Vec::new(); n];
        for (i, j) in frame.edges() {
            d[j].push(i);
        }
        d
    };
    loop {
        let mut ids: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let labels: Vec<usize> = (0..n)
            .map(|w| {
                let mut up: Vec<usize> = frame.up_row(w).iter().map(|v| part.class_of[v]).collect();
                up.sort_unstable();
                up.dedup();
                let mut dn: Vec<usize> = down[w].iter().map(|&v| part.class_of[v]).collect();
                dn.sort_unstable();
                dn.dedup();
                let next = ids.len();
                *ids.entry((part.class_of[w], up, dn)).or_insert(next)
            })
            .collect();
        let refined = Partition::from_labels(&labels);
        if refined.len() == part.len() {
            return refined;
        }
        part = refined;
    }
}

/// The frame on partition classes with `[u] → [v]` iff some member of `[u]`
/// is up-related to some member of `[v]`.
pub fn quotient(frame: &Frame, part: &Partition) -> Frame {
    let q = part.len();
    let mut edges = BTreeSet::new();
    for (i, j) in frame.edges() {
        edges.insert((part.class_of(i), part.class_of(j)));
    }
    let edges: Vec<_> = edges.into_iter().collect();
    crate::frame::make_frame(q, &edges, crate::frame::Closure::NONE).expect("class indices are in range")
}

/// All subsets definable from the given letters with the boolean connectives
/// and both boxes, in canonical order (lexicographic membership from world 0,
/// absent before present).
///
/// These are exactly the unions of bisimulation classes, so the result has
/// `2^q` members for `q` classes; `budget` caps that count.
pub fn definable_algebra(
    m: &PointedModel,
    letters: &BTreeSet<String>,
    budget: usize,
) -> Result<Vec<WorldSet>, SemanticsError> {
    let part = bisimulation_partition(m, letters);
    let q = part.len();
    let needed = 1u128.checked_shl(q as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(SemanticsError::BudgetExceeded {
            what: "definable algebra",
            needed,
            budget: budget as u128,
        });
    }
    let mut sets: Vec<WorldSet> = (0..1usize << q)
        .map(|mask| part.union_of((0..q).filter(|c| mask >> c & 1 == 1)))
        .collect();
    sets.sort();
    Ok(sets)
}

/// Letter extensions of the quotient model (a class satisfies a letter iff
/// its members do).
pub(crate) fn quotient_valuation(m: &PointedModel, part: &Partition) -> BTreeMap<String, WorldSet> {
    m.valuation()
        .iter()
        .map(|(p, set)| {
            let classes = (0..part.len()).filter(|&c| {
                let rep = part.classes[c].first().expect("classes are non-empty");
                set.contains(rep)
            });
            (p.clone(), WorldSet::from_worlds(part.len(), classes))
        })
        .collect()
}

/// Reachability used by a formula mentioning `dirs`.
pub(crate) fn relevant_worlds(frame: &Frame, dirs: &BTreeSet<Direction>, w: usize) -> WorldSet {
    let dirs: Vec<Direction> = dirs.iter().copied().collect();
    frame.reach(&dirs, &WorldSet::singleton(frame.n(), w))
}
