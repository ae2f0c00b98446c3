use bitvec::prelude::*;
use std::fmt;

/// A subset of the worlds `0..n` of a fixed frame, stored as a dense bit-vector.
///
/// Bits past `n` in the last storage word are kept at zero so that word-level
/// operations, equality and hashing agree with set semantics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    bits: BitVec<u64, Lsb0>,
}

impl WorldSet {
    pub fn empty(n: usize) -> Self {
        WorldSet { bits: bitvec![u64, Lsb0; 0; n] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = WorldSet { bits: bitvec![u64, Lsb0; 1; n] };
        s.trim();
        s
    }

    pub fn singleton(n: usize, w: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(w);
        s
    }

    pub fn from_worlds(n: usize, worlds: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    /// Builds a set from raw storage words (bit `w % 64` of word `w / 64`).
    pub fn from_words(n: usize, words: &[u64]) -> Self {
        let mut s = Self::empty(n);
        let raw = s.bits.as_raw_mut_slice();
        for (dst, src) in raw.iter_mut().zip(words) {
            *dst = *src;
        }
        s.trim();
        s
    }

    /// Number of worlds of the ambient frame.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn words(&self) -> &[u64] {
        self.bits.as_raw_slice()
    }

    pub fn contains(&self, w: usize) -> bool {
        w < self.bits.len() && self.bits[w]
    }

    pub fn insert(&mut self, w: usize) {
        self.bits.set(w, true);
    }

    pub fn remove(&mut self, w: usize) {
        self.bits.set(w, false);
    }

    pub fn len(&self) -> usize {
        self.words().iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words().iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.first_one()
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.bits.as_raw_mut_slice() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Material implication `¬self ∪ other`.
    pub fn implies(&self, other: &Self) -> Self {
        let mut out = self.zip_with(other, |a, b| !a | b);
        out.trim();
        out
    }

    /// Biconditional `{w : w ∈ self ⇔ w ∈ other}`.
    pub fn iff(&self, other: &Self) -> Self {
        let mut out = self.zip_with(other, |a, b| !(a ^ b));
        out.trim();
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        self.assert_compatible(other);
        for (a, b) in self.bits.as_raw_mut_slice().iter_mut().zip(other.words()) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.assert_compatible(other);
        for (a, b) in self.bits.as_raw_mut_slice().iter_mut().zip(other.words()) {
            *a &= *b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.assert_compatible(other);
        self.words().iter().zip(other.words()).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.assert_compatible(other);
        self.words().iter().zip(other.words()).any(|(a, b)| a & b != 0)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (a, b) in out.bits.as_raw_mut_slice().iter_mut().zip(other.words()) {
            *a = op(*a, *b);
        }
        out
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.universe(),
            other.universe(),
            "world sets over frames of different sizes"
        );
    }

    fn trim(&mut self) {
        let n = self.bits.len();
        let rem = n % 64;
        if rem != 0 {
            if let Some(last) = self.bits.as_raw_mut_slice().last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl PartialOrd for WorldSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on the membership sequence read from world 0,
/// absent before present. Sets over smaller frames come first.
impl Ord for WorldSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.universe()
            .cmp(&other.universe())
            .then_with(|| {
                for (a, b) in self.words().iter().zip(other.words()) {
                    if a != b {
                        let low = (a ^ b).trailing_zeros();
                        return ((a >> low) & 1).cmp(&((b >> low) & 1));
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_keeps_dead_bits_clear() {
        let s = WorldSet::from_worlds(70, [0, 69]);
        let c = s.complement();
        assert_eq!(c.len(), 68);
        assert!(c.complement() == s);
        assert!(WorldSet::empty(70).complement().is_full());
    }

    #[test]
    fn canonical_order_reads_from_world_zero() {
        let a = WorldSet::from_worlds(3, [1]);
        let b = WorldSet::from_worlds(3, [0]);
        let c = WorldSet::from_worlds(3, [0, 2]);
        let mut v = vec![c.clone(), b.clone(), a.clone(), WorldSet::empty(3)];
        v.sort();
        assert_eq!(v, vec![WorldSet::empty(3), a, b, c]);
    }

    #[test]
    fn implication_and_biconditional() {
        let a = WorldSet::from_worlds(4, [0, 1]);
        let b = WorldSet::from_worlds(4, [1, 2]);
        assert_eq!(a.implies(&b), WorldSet::from_worlds(4, [1, 2, 3]));
        assert_eq!(a.iff(&b), WorldSet::from_worlds(4, [1, 3]));
        assert!(a.intersect(&b).is_subset(&a));
    }
}
