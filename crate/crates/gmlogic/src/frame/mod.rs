//! Finite frames with one stored relation ("up"); "down" is its converse.

mod build;
mod io;
mod worldset;

pub use build::{
    bs_frame, bs_model, combo_frame, powerset_frame, ComboKind, PowersetSpec, DEFAULT_WORLD_BUDGET,
};
pub use io::{load, parse_text, render, save, ParsedFile};
pub use worldset::WorldSet;

use crate::formula::{is_letter, Direction};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum FrameError {
    #[error("world index {index} out of range for a frame of {n} worlds")]
    BadWorldIndex { index: usize, n: usize },
    #[error("a frame needs at least one world")]
    EmptyFrame,
    #[error("frame would have {worlds} worlds, over the budget of {budget}")]
    BudgetExceeded { worlds: u128, budget: usize },
    #[error("index {0} occurs in more than one button or switch class")]
    OverlappingIndexSets(usize),
    #[error("invalid letter identifier {0:?}")]
    BadLetter(String),
    #[error("{}:{line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<text>".into()))]
    ParseError {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    IoError {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Closure operations applied by [`make_frame`] after the listed edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Closure {
    pub reflexive: bool,
    pub transitive: bool,
}

impl Closure {
    pub const NONE: Closure = Closure {
        reflexive: false,
        transitive: false,
    };
    pub const PREORDER: Closure = Closure {
        reflexive: true,
        transitive: true,
    };
}

/// Worlds `0..n` and the up relation as adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Frame {
    up: Vec<WorldSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameProperties {
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub up_directed: bool,
    pub down_directed: bool,
}

impl Frame {
    pub(crate) fn from_rows(up: Vec<WorldSet>) -> Frame {
        debug_assert!(!up.is_empty() && up.iter().all(|r| r.universe() == up.len()));
        Frame { up }
    }

    pub fn n(&self) -> usize {
        self.up.len()
    }

    pub fn worlds(&self) -> WorldSet {
        WorldSet::full(self.n())
    }

    /// Up-successors of `w`.
    pub fn up_row(&self, w: usize) -> &WorldSet {
        &self.up[w]
    }

    pub fn up(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// The converse relation, read off the stored up relation.
    pub fn down(&self, i: usize, j: usize) -> bool {
        self.up(j, i)
    }

    pub fn related(&self, d: Direction, i: usize, j: usize) -> bool {
        match d {
            Direction::Up => self.up(i, j),
            Direction::Down => self.down(i, j),
        }
    }

    /// Successors of `w` in direction `d`.
    pub fn successors(&self, d: Direction, w: usize) -> WorldSet {
        match d {
            Direction::Up => self.up[w].clone(),
            Direction::Down => {
                WorldSet::from_worlds(self.n(), (0..self.n()).filter(|&v| self.up(v, w)))
            }
        }
    }

    /// Up-edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|i| self.up[i].iter().map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(WorldSet::len).sum()
    }

    /// `{w : every d-successor of w lies in x}`.
    pub fn box_of(&self, d: Direction, x: &WorldSet) -> WorldSet {
        match d {
            Direction::Up => {
                WorldSet::from_worlds(self.n(), (0..self.n()).filter(|&w| self.up[w].is_subset(x)))
            }
            Direction::Down => self.dia_of(Direction::Down, &x.complement()).complement(),
        }
    }

    /// `{w : some d-successor of w lies in x}`.
    pub fn dia_of(&self, d: Direction, x: &WorldSet) -> WorldSet {
        match d {
            Direction::Up => {
                WorldSet::from_worlds(self.n(), (0..self.n()).filter(|&w| self.up[w].intersects(x)))
            }
            Direction::Down => {
                let mut out = WorldSet::empty(self.n());
                for v in x.iter() {
                    out.union_with(&self.up[v]);
                }
                out
            }
        }
    }

    /// Worlds reachable from `start` in zero or more steps along the given directions.
    pub fn reach(&self, dirs: &[Direction], start: &WorldSet) -> WorldSet {
        let mut seen = start.clone();
        let mut frontier = start.clone();
        while !frontier.is_empty() {
            let mut next = WorldSet::empty(self.n());
            for &d in dirs {
                next.union_with(&self.dia_of(d.converse(), &frontier));
            }
            frontier = next.difference(&seen);
            seen.union_with(&frontier);
        }
        seen
    }

    /// Reachability cone of `w` in direction `d`, including `w`.
    pub fn cone(&self, d: Direction, w: usize) -> WorldSet {
        self.reach(&[d], &WorldSet::singleton(self.n(), w))
    }

    /// Connected component of `w` under the union of both relations.
    pub fn component(&self, w: usize) -> WorldSet {
        self.reach(&Direction::ALL, &WorldSet::singleton(self.n(), w))
    }

    /// Converse rows, materialized only for whole-frame checks.
    fn rows(&self, d: Direction) -> Vec<WorldSet> {
        match d {
            Direction::Up => self.up.clone(),
            Direction::Down => (0..self.n()).map(|w| self.successors(Direction::Down, w)).collect(),
        }
    }

    fn directed(&self, d: Direction) -> bool {
        let rows = self.rows(d);
        let n = self.n();
        let cones: Vec<WorldSet> = (0..n).map(|w| self.cone(d, w)).collect();
        for i in 0..n {
            let mut partners = WorldSet::empty(n);
            for (w, cone) in cones.iter().enumerate() {
                if cone.contains(i) {
                    partners.union_with(&cones[w]);
                }
            }
            if partners.iter().any(|j| !rows[i].intersects(&rows[j])) {
                return false;
            }
        }
        true
    }

    pub fn properties(&self) -> FrameProperties {
        let n = self.n();
        let reflexive = (0..n).all(|w| self.up(w, w));
        let transitive = (0..n).all(|w| {
            let mut two = WorldSet::empty(n);
            for v in self.up[w].iter() {
                two.union_with(&self.up[v]);
            }
            two.is_subset(&self.up[w])
        });
        let antisymmetric =
            (0..n).all(|i| self.up[i].iter().all(|j| i == j || !self.up(j, i)));
        FrameProperties {
            reflexive,
            transitive,
            antisymmetric,
            up_directed: self.directed(Direction::Up),
            down_directed: self.directed(Direction::Down),
        }
    }

    /// Clusters (mutual-reachability classes) in order of their least world,
    /// for reflexive transitive frames.
    pub fn clusters(&self) -> Vec<WorldSet> {
        let n = self.n();
        let mut assigned = WorldSet::empty(n);
        let mut out = Vec::new();
        for w in 0..n {
            if assigned.contains(w) {
                continue;
            }
            let c = WorldSet::from_worlds(n, self.up[w].iter().filter(|&v| self.up(v, w)).chain([w]));
            assigned.union_with(&c);
            out.push(c);
        }
        out
    }
}

/// Builds a frame from explicit up-edges, then closes it: transitive closure
/// first, then reflexive loops.
pub fn make_frame(n: usize, edges: &[(usize, usize)], close: Closure) -> Result<Frame, FrameError> {
    if n == 0 {
        return Err(FrameError::EmptyFrame);
    }
    let mut rows = vec![WorldSet::empty(n); n];
    for &(i, j) in edges {
        for index in [i, j] {
            if index >= n {
                return Err(FrameError::BadWorldIndex { index, n });
            }
        }
        rows[i].insert(j);
    }
    if close.transitive {
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut next = rows[i].clone();
                for v in rows[i].iter() {
                    next.union_with(&rows[v]);
                }
                if next != rows[i] {
                    rows[i] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    if close.reflexive {
        for (w, row) in rows.iter_mut().enumerate() {
            row.insert(w);
        }
    }
    Ok(Frame::from_rows(rows))
}

/// One reflexive world.
pub fn single_point() -> Frame {
    cluster(1)
}

/// `c` worlds, every world up-related to every world.
pub fn cluster(c: usize) -> Frame {
    assert!(c >= 1, "cluster size must be positive");
    Frame::from_rows(vec![WorldSet::full(c); c])
}

/// `h` worlds linearly ordered `0 ≤ 1 ≤ … ≤ h-1`, reflexive and transitive.
pub fn chain(h: usize) -> Frame {
    assert!(h >= 1, "chain height must be positive");
    Frame::from_rows((0..h).map(|i| WorldSet::from_worlds(h, i..h)).collect())
}

/// A frame with a valuation and a designated world.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointedModel {
    frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
    point: usize,
}

impl PointedModel {
    pub fn new(
        frame: Frame,
        valuation: BTreeMap<String, WorldSet>,
        point: usize,
    ) -> Result<Self, FrameError> {
        let n = frame.n();
        if point >= n {
            return Err(FrameError::BadWorldIndex { index: point, n });
        }
        for (p, set) in &valuation {
            if !is_letter(p) {
                return Err(FrameError::BadLetter(p.clone()));
            }
            if set.universe() != n {
                return Err(FrameError::BadWorldIndex {
                    index: set.universe(),
                    n,
                });
            }
        }
        Ok(PointedModel {
            frame,
            valuation,
            point,
        })
    }

    /// Model with an empty valuation.
    pub fn bare(frame: Frame, point: usize) -> Result<Self, FrameError> {
        Self::new(frame, BTreeMap::new(), point)
    }

    /// Convenience constructor from `(letter, worlds)` pairs.
    pub fn with_letters<'a>(
        frame: Frame,
        letters: impl IntoIterator<Item = (&'a str, Vec<usize>)>,
        point: usize,
    ) -> Result<Self, FrameError> {
        let n = frame.n();
        let mut val = BTreeMap::new();
        for (p, worlds) in letters {
            if let Some(&index) = worlds.iter().find(|&&w| w >= n) {
                return Err(FrameError::BadWorldIndex { index, n });
            }
            val.insert(p.to_string(), WorldSet::from_worlds(n, worlds));
        }
        Self::new(frame, val, point)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    /// Extension of a letter; letters outside the valuation denote the empty set.
    pub fn letter(&self, p: &str) -> WorldSet {
        self.valuation
            .get(p)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.n()))
    }

    pub fn at(&self, point: usize) -> Result<Self, FrameError> {
        Self::new(self.frame.clone(), self.valuation.clone(), point)
    }

    pub fn with_valuation(&self, valuation: BTreeMap<String, WorldSet>) -> Result<Self, FrameError> {
        Self::new(self.frame.clone(), valuation, self.point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_frame_closures() {
        let p = make_frame(1, &[], Closure { reflexive: true, transitive: false }).unwrap();
        assert_eq!(p, single_point());
        let c2 = make_frame(2, &[(0, 1)], Closure::PREORDER).unwrap();
        assert_eq!(c2.edges(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(c2, chain(2));
        let t = make_frame(3, &[(0, 1), (1, 2)], Closure { reflexive: false, transitive: true })
            .unwrap();
        assert!(t.up(0, 2));
        assert!(!t.up(0, 0));
        assert!(matches!(
            make_frame(3, &[(0, 5)], Closure::NONE),
            Err(FrameError::BadWorldIndex { index: 5, n: 3 })
        ));
    }

    #[test]
    fn basic_shapes() {
        assert_eq!(cluster(1), single_point());
        assert_eq!(cluster(3).edge_count(), 9);
        assert_eq!(chain(2).edges(), vec![(0, 0), (0, 1), (1, 1)]);
        assert!(chain(4).properties().antisymmetric);
        assert!(!cluster(2).properties().antisymmetric);
    }

    #[test]
    fn property_flags() {
        let all = single_point().properties();
        assert!(all.reflexive && all.transitive && all.antisymmetric);
        assert!(all.up_directed && all.down_directed);
        let fork = make_frame(3, &[(0, 1), (0, 2)], Closure::PREORDER).unwrap();
        let p = fork.properties();
        assert!(!p.up_directed);
        assert!(p.down_directed);
        assert!(p.reflexive && p.transitive);
    }

    #[test]
    fn converse_is_read_backwards() {
        let c = chain(3);
        assert!(c.down(2, 0) && !c.down(0, 2));
        assert_eq!(c.successors(Direction::Down, 1), WorldSet::from_worlds(3, [0, 1]));
        let x = WorldSet::from_worlds(3, [0, 1]);
        assert_eq!(c.box_of(Direction::Down, &x), WorldSet::from_worlds(3, [0, 1]));
        assert_eq!(c.box_of(Direction::Up, &x), WorldSet::empty(3));
        assert_eq!(c.dia_of(Direction::Up, &x), WorldSet::from_worlds(3, [0, 1]));
    }

    #[test]
    fn cones_and_components() {
        let f = make_frame(4, &[(0, 1)], Closure::PREORDER).unwrap();
        assert_eq!(f.cone(Direction::Up, 0), WorldSet::from_worlds(4, [0, 1]));
        assert_eq!(f.cone(Direction::Down, 1), WorldSet::from_worlds(4, [0, 1]));
        assert_eq!(f.component(1), WorldSet::from_worlds(4, [0, 1]));
        assert_eq!(f.component(3), WorldSet::singleton(4, 3));
    }

    #[test]
    fn clusters_of_a_preorder() {
        let f = make_frame(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)], Closure::PREORDER).unwrap();
        let cs = f.clusters();
        assert_eq!(cs, vec![WorldSet::from_worlds(4, [0, 1]), WorldSet::from_worlds(4, [2, 3])]);
    }

    #[test]
    fn model_validation() {
        assert!(PointedModel::bare(chain(2), 2).is_err());
        assert!(PointedModel::with_letters(chain(2), [("p", vec![3])], 0).is_err());
        assert!(PointedModel::with_letters(chain(2), [("P", vec![1])], 0).is_err());
        let m = PointedModel::with_letters(chain(2), [("p", vec![1])], 0).unwrap();
        assert_eq!(m.letter("q"), WorldSet::empty(2));
        assert_eq!(m.letter("p"), WorldSet::singleton(2, 1));
    }
}
