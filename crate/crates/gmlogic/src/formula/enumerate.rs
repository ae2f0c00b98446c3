use super::{canonical_letter, Direction, Formula};
use std::collections::BTreeSet;
use std::sync::Arc;

/// All formulas over `p0..p(k-1)` built from `~`, `&`, `->` and the boxes and
/// diamonds of the requested directions, with size at most `max_size`.
///
/// Order: by size; within a size, by outermost constructor in the order
/// letters `p0..`, `true`, `false`, `~`, then `[u] <u> [d] <d>` (restricted to
/// `dirs`), then `&`, `->`; within a constructor, by the positions of the
/// children in this same order (left child first).
#[derive(Clone, Debug)]
pub struct Enumeration {
    by_size: Vec<Vec<Formula>>,
}

impl Enumeration {
    pub fn new(k: usize, max_size: usize, dirs: &BTreeSet<Direction>) -> Self {
        let mut by_size: Vec<Vec<Formula>> = vec![Vec::new()];
        for n in 1..=max_size {
            let mut level = Vec::new();
            if n == 1 {
                level.extend((0..k).map(|i| Formula::Atom(canonical_letter(i))));
                level.push(Formula::Top);
                level.push(Formula::Bot);
            } else {
                let prev = &by_size[n - 1];
                level.extend(prev.iter().map(|a| Formula::Not(Arc::new(a.clone()))));
                for &d in Direction::ALL.iter().filter(|d| dirs.contains(d)) {
                    level.extend(prev.iter().map(|a| Formula::Box(d, Arc::new(a.clone()))));
                    level.extend(prev.iter().map(|a| Formula::Dia(d, Arc::new(a.clone()))));
                }
                for ctor in [Formula::And as fn(_, _) -> _, Formula::Imp] {
                    for ls in 1..n - 1 {
                        let rs = n - 1 - ls;
                        for a in &by_size[ls] {
                            let a = Arc::new(a.clone());
                            for b in &by_size[rs] {
                                level.push(ctor(a.clone(), Arc::new(b.clone())));
                            }
                        }
                    }
                }
            }
            by_size.push(level);
        }
        Enumeration { by_size }
    }

    pub fn len(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn of_size(&self, n: usize) -> &[Formula] {
        self.by_size.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.by_size.iter().flatten()
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.by_size.into_iter().flatten().collect()
    }
}

/// The canonical enumeration as an ordered vector.
pub fn enumerate(k: usize, max_size: usize, dirs: &BTreeSet<Direction>) -> Vec<Formula> {
    Enumeration::new(k, max_size, dirs).into_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn up() -> BTreeSet<Direction> {
        [Direction::Up].into()
    }

    #[test]
    fn begins_with_letters_then_constants() {
        let e = enumerate(1, 1, &up());
        assert_eq!(e, vec![Formula::atom("p0"), Formula::Top, Formula::Bot]);
        assert!(enumerate(1, 0, &up()).is_empty());
    }

    #[test]
    fn size_two_contains_unary_forms() {
        let e = Enumeration::new(1, 2, &up());
        let two = e.of_size(2);
        let p0 = Formula::atom("p0");
        assert!(two.contains(&Formula::not(p0.clone())));
        assert!(two.contains(&Formula::boxed(Direction::Up, p0.clone())));
        assert!(two.contains(&Formula::dia(Direction::Up, p0)));
        assert_eq!(two.len(), 9);
    }

    // Counts from the recurrence a(1) = k + 2,
    // a(n) = u * a(n-1) + 2 * sum_{i+j=n-1} a(i) a(j), with u unary constructors.
    fn count_oracle(k: usize, max: usize, unary: usize) -> usize {
        let mut a = vec![0usize; max + 1];
        for n in 1..=max {
            a[n] = if n == 1 {
                k + 2
            } else {
                unary * a[n - 1] + 2 * (1..n - 1).map(|i| a[i] * a[n - 1 - i]).sum::<usize>()
            };
        }
        a.iter().sum()
    }

    #[test]
    fn counts_match_recurrence_and_are_duplicate_free() {
        let both: BTreeSet<Direction> = Direction::ALL.into();
        for (k, max, dirs, unary) in [(1, 6, up(), 3), (2, 5, both.clone(), 5), (2, 6, up(), 3)] {
            let e = enumerate(k, max, &dirs);
            assert_eq!(e.len(), count_oracle(k, max, unary));
            let distinct: HashSet<&Formula> = e.iter().collect();
            assert_eq!(distinct.len(), e.len());
            assert!(e.windows(2).all(|w| w[0].size() <= w[1].size()));
        }
    }

    #[test]
    fn only_requested_directions_and_connectives() {
        let down: BTreeSet<Direction> = [Direction::Down].into();
        for f in enumerate(2, 4, &down) {
            assert!(f.directions().iter().all(|d| *d == Direction::Down));
            assert!(f.letters().iter().all(|l| l == "p0" || l == "p1"));
            let text = f.to_string();
            assert!(!text.contains('|') && !text.contains("<->"));
        }
    }
}
