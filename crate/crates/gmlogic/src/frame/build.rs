use super::{Frame, FrameError, PointedModel, WorldSet};
use std::collections::{BTreeMap, BTreeSet};

/// Default cap on the number of worlds a constructor may create.
pub const DEFAULT_WORLD_BUDGET: usize = 1 << 16;

fn check_budget(log2_worlds: usize, budget: usize) -> Result<usize, FrameError> {
    let worlds = 1u128.checked_shl(log2_worlds as u32).unwrap_or(u128::MAX);
    if worlds > budget as u128 {
        return Err(FrameError::BudgetExceeded { worlds, budget });
    }
    Ok(worlds as usize)
}

/// Button/switch frame: worlds are pairs `(A ⊆ {1..m}, t ∈ {0,1}^n)` with
/// `(A,t)` up-related to `(A',t')` iff `A ⊆ A'`.
///
/// World `(A,t)` has index `A·2^n + t`, where bit `i-1` of `A` stands for `i`
/// and bit `j-1` of `t` is switch `j`. The designated world `(∅, 0…0)` is 0.
pub fn bs_frame(m: usize, n: usize, budget: usize) -> Result<(Frame, usize), FrameError> {
    let total = check_budget(m + n, budget)?;
    let rows = (0..total)
        .map(|w| {
            let a = w >> n;
            WorldSet::from_worlds(total, (0..total).filter(|&v| a & !(v >> n) == 0))
        })
        .collect();
    Ok((Frame::from_rows(rows), 0))
}

fn bs_letters(m: usize, n: usize, total: usize, world: impl Fn(usize) -> Option<usize>) -> BTreeMap<String, WorldSet> {
    let mut val = BTreeMap::new();
    for i in 1..=m {
        let set = (0..total).filter(|&w| world(w).is_some_and(|b| (b >> n) >> (i - 1) & 1 == 1));
        val.insert(format!("b{i}"), WorldSet::from_worlds(total, set));
    }
    for j in 1..=n {
        let set = (0..total).filter(|&w| world(w).is_some_and(|b| b >> (j - 1) & 1 == 1));
        val.insert(format!("s{j}"), WorldSet::from_worlds(total, set));
    }
    val
}

/// [`bs_frame`] with letters `b1..bm` ("button i is in A") and `s1..sn`
/// ("switch bit j is 1"), pointed at the designated world.
pub fn bs_model(m: usize, n: usize, budget: usize) -> Result<PointedModel, FrameError> {
    let (frame, root) = bs_frame(m, n, budget)?;
    let total = frame.n();
    let val = bs_letters(m, n, total, Some);
    PointedModel::new(frame, val, root)
}

/// Index sets for [`powerset_frame`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowersetSpec {
    pub buttons: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl PowersetSpec {
    /// All indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.buttons.iter().chain(self.classes.iter().flatten()).copied().collect();
        all.sort_unstable();
        all
    }
}

/// Subset-lattice model: worlds are the subsets of the index set, up is `⊆`.
///
/// World `S` has index `Σ 2^k` over the positions `k` of its members in the
/// sorted index list. Letters: `b<i>` for each button index `i`, true at `S`
/// iff `i ∉ S`; `s<j>` for the `j`-th class (from 1), true at `S` iff the least
/// member of `C_j ∩ S` sits at an even position of the sorted class, and false
/// when `C_j ∩ S` is empty.
pub fn powerset_frame(
    spec: &PowersetSpec,
    point: &[usize],
    budget: usize,
) -> Result<PointedModel, FrameError> {
    let all = spec.indices();
    let mut seen = BTreeSet::new();
    for &i in &all {
        if !seen.insert(i) {
            return Err(FrameError::OverlappingIndexSets(i));
        }
    }
    let total = check_budget(all.len(), budget)?;
    let pos = |i: usize| all.iter().position(|&x| x == i);
    let mut point_mask = 0usize;
    for &i in point {
        match pos(i) {
            Some(k) => point_mask |= 1 << k,
            None => return Err(FrameError::BadWorldIndex { index: i, n: all.len() }),
        }
    }
    let rows = (0..total)
        .map(|s| WorldSet::from_worlds(total, (0..total).filter(|&t| s & !t == 0)))
        .collect();
    let frame = Frame::from_rows(rows);
    let mut val = BTreeMap::new();
    for &i in &spec.buttons {
        let bit = pos(i).expect("button index is in the index list");
        let set = (0..total).filter(|&s| s >> bit & 1 == 0);
        val.insert(format!("b{i}"), WorldSet::from_worlds(total, set));
    }
    for (j, class) in spec.classes.iter().enumerate() {
        let mut sorted = class.clone();
        sorted.sort_unstable();
        let bits: Vec<usize> = sorted.iter().map(|&i| pos(i).expect("class index is listed")).collect();
        let set = (0..total).filter(|&s| {
            bits.iter().position(|&b| s >> b & 1 == 1).is_some_and(|p| p % 2 == 0)
        });
        val.insert(format!("s{}", j + 1), WorldSet::from_worlds(total, set));
    }
    PointedModel::new(frame, val, point_mask)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComboKind {
    /// A cluster replaces the root of a button/switch frame.
    ClusterBelowBs,
    /// A cluster replaces the root of the order-dual button/switch frame.
    ClusterAboveBs,
}

/// Replaces world `r` by `c` copies forming a cluster; the copies inherit every
/// edge into and out of `r`. Copies take indices `0..c`; the other worlds
/// follow in their original order.
fn inflate(frame: &Frame, r: usize, c: usize) -> (Frame, Vec<Option<usize>>) {
    let n = frame.n();
    let total = n - 1 + c;
    // origin[new] = old world it stands for
    let origin: Vec<usize> = (0..c).map(|_| r).chain((0..n).filter(|&w| w != r)).collect();
    let rows = (0..total)
        .map(|i| {
            WorldSet::from_worlds(total, (0..total).filter(|&j| frame.up(origin[i], origin[j])))
        })
        .collect();
    let back = (0..total).map(|i| (i >= c).then_some(origin[i])).collect();
    (Frame::from_rows(rows), back)
}

/// Grafts a `c`-world cluster onto a button/switch frame at its designated
/// world; see [`ComboKind`]. Letters: `b1..bm`, `s1..sn` as in [`bs_model`]
/// (false on the cluster) and `k0..k(c-1)`, each true at one cluster world.
/// The designated world is cluster world 0.
pub fn combo_frame(
    kind: ComboKind,
    c: usize,
    m: usize,
    n: usize,
    budget: usize,
) -> Result<PointedModel, FrameError> {
    assert!(c >= 1, "cluster size must be positive");
    let (bs, root) = bs_frame(m, n, budget)?;
    if bs.n() - 1 + c > budget {
        return Err(FrameError::BudgetExceeded {
            worlds: (bs.n() - 1 + c) as u128,
            budget,
        });
    }
    let base = match kind {
        ComboKind::ClusterBelowBs => bs,
        ComboKind::ClusterAboveBs => {
            let k = bs.n();
            Frame::from_rows(
                (0..k)
                    .map(|i| WorldSet::from_worlds(k, (0..k).filter(|&j| bs.up(j, i))))
                    .collect(),
            )
        }
    };
    let (frame, origin) = inflate(&base, root, c);
    let total = frame.n();
    let mut val = bs_letters(m, n, total, |w| origin[w]);
    for i in 0..c {
        val.insert(format!("k{i}"), WorldSet::singleton(total, i));
    }
    PointedModel::new(frame, val, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Direction;
    use crate::frame::{chain, single_point};

    const B: usize = DEFAULT_WORLD_BUDGET;

    #[test]
    fn small_bs_frames() {
        assert_eq!(bs_frame(0, 0, B).unwrap().0, single_point());
        assert_eq!(bs_frame(1, 0, B).unwrap().0, chain(2));
        let (f, root) = bs_frame(1, 1, B).unwrap();
        assert_eq!(f.n(), 4);
        assert_eq!(f.up_row(root).len(), 4);
        assert!(matches!(bs_frame(10, 10, B), Err(FrameError::BudgetExceeded { .. })));
    }

    #[test]
    fn bs_frame_is_a_directed_preorder() {
        for (m, n) in [(1, 1), (2, 1), (2, 2)] {
            let p = bs_frame(m, n, B).unwrap().0.properties();
            assert!(p.reflexive && p.transitive && p.up_directed && p.down_directed);
        }
    }

    #[test]
    fn powerset_button_letter() {
        let spec = PowersetSpec { buttons: vec![0], classes: vec![] };
        let m = powerset_frame(&spec, &[0], B).unwrap();
        assert_eq!(m.point(), 1);
        assert!(!m.letter("b0").contains(1));
        assert!(m.letter("b0").contains(0));
    }

    #[test]
    fn powerset_parity_letter() {
        // worlds over indices {1,2}: bit 0 = index 1, bit 1 = index 2
        let spec = PowersetSpec { buttons: vec![], classes: vec![vec![1, 2]] };
        let m = powerset_frame(&spec, &[1, 2], B).unwrap();
        let s = m.letter("s1");
        assert!(s.contains(0b11)); // {1,2}: least present at position 0
        assert!(s.contains(0b01)); // {1}
        assert!(!s.contains(0b10)); // {2}: position 1
        assert!(!s.contains(0b00)); // empty class intersection
    }

    #[test]
    fn powerset_with_button_and_class() {
        let spec = PowersetSpec { buttons: vec![0], classes: vec![vec![1, 2]] };
        let m = powerset_frame(&spec, &[0, 1, 2], B).unwrap();
        assert_eq!(m.n(), 8);
        assert_eq!(m.point(), 7);
        assert!(m.frame().properties().down_directed);
        let overlap = PowersetSpec { buttons: vec![1], classes: vec![vec![1, 2]] };
        assert!(matches!(
            powerset_frame(&overlap, &[], B),
            Err(FrameError::OverlappingIndexSets(1))
        ));
        assert!(powerset_frame(&spec, &[9], B).is_err());
    }

    #[test]
    fn combo_below_replaces_the_root() {
        let m = combo_frame(ComboKind::ClusterBelowBs, 2, 1, 0, B).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.frame().up_row(0), &WorldSet::full(3));
        assert!(!m.frame().up(2, 0));
        let c1 = combo_frame(ComboKind::ClusterBelowBs, 1, 2, 1, B).unwrap();
        assert_eq!(c1.frame(), &bs_frame(2, 1, B).unwrap().0);
        let mut val = c1.valuation().clone();
        assert_eq!(val.remove("k0"), Some(WorldSet::singleton(8, 0)));
        assert_eq!(&val, bs_model(2, 1, B).unwrap().valuation());
    }

    #[test]
    fn combo_above_is_the_order_dual() {
        let m = combo_frame(ComboKind::ClusterAboveBs, 2, 1, 0, B).unwrap();
        let f = m.frame();
        assert_eq!(f.cone(Direction::Down, 0), WorldSet::full(3));
        assert_eq!(f.cone(Direction::Up, 0), WorldSet::from_worlds(3, [0, 1]));
        assert_eq!(m.letter("k1"), WorldSet::singleton(3, 1));
    }
}
