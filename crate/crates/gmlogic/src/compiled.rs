//! Formulas flattened into a subformula DAG, and a bit-parallel evaluator that
//! checks 64 valuations of a small frame at once.

use crate::formula::{Direction, Formula};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Letter(usize),
    Top,
    Bot,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Iff(usize, usize),
    Box(Direction, usize),
    Dia(Direction, usize),
}

/// Children always precede their parents; the root is the last node.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub nodes: Vec<Node>,
    /// Letter names, sorted; `Node::Letter(i)` refers to `letters[i]`.
    pub letters: Vec<String>,
}

impl Compiled {
    pub fn new(f: &Formula) -> Compiled {
        let letters: Vec<String> = f.letters().into_iter().collect();
        let mut c = Compiled {
            nodes: Vec::new(),
            letters,
        };
        let mut memo = HashMap::new();
        c.add(f, &mut memo);
        c
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    fn add(&mut self, f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let node = match f {
            Formula::Atom(p) => Node::Letter(self.letters.binary_search(p).expect("letter listed")),
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::Not(a) => Node::Not(self.add(a, memo)),
            Formula::And(a, b) => Node::And(self.add(a, memo), self.add(b, memo)),
            Formula::Or(a, b) => Node::Or(self.add(a, memo), self.add(b, memo)),
            Formula::Imp(a, b) => Node::Imp(self.add(a, memo), self.add(b, memo)),
            Formula::Iff(a, b) => Node::Iff(self.add(a, memo), self.add(b, memo)),
            Formula::Box(d, a) => Node::Box(*d, self.add(a, memo)),
            Formula::Dia(d, a) => Node::Dia(*d, self.add(a, memo)),
        };
        self.nodes.push(node);
        let i = self.nodes.len() - 1;
        memo.insert(f.clone(), i);
        i
    }

    /// Truth value of every node given letter values and, for modal nodes,
    /// values supplied by `modal`.
    pub fn eval_local(&self, letter: impl Fn(usize) -> bool, modal: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut v = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            v[i] = match *node {
                Node::Letter(l) => letter(l),
                Node::Top => true,
                Node::Bot => false,
                Node::Not(a) => !v[a],
                Node::And(a, b) => v[a] && v[b],
                Node::Or(a, b) => v[a] || v[b],
                Node::Imp(a, b) => !v[a] || v[b],
                Node::Iff(a, b) => v[a] == v[b],
                Node::Box(..) | Node::Dia(..) => modal(i),
            };
        }
        v
    }
}

/// A frame of at most 64 worlds as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SmallFrame {
    pub n: usize,
    pub up: Vec<u64>,
    pub down: Vec<u64>,
}

impl SmallFrame {
    pub fn from_up(up: Vec<u64>) -> SmallFrame {
        let n = up.len();
        assert!(n <= 64);
        let mut down = vec![0u64; n];
        for (i, row) in up.iter().enumerate() {
            for (j, d) in down.iter_mut().enumerate() {
                if row >> j & 1 == 1 {
                    *d |= 1 << i;
                }
            }
        }
        SmallFrame { n, up, down }
    }

    pub fn row(&self, d: Direction, w: usize) -> u64 {
        match d {
            Direction::Up => self.up[w],
            Direction::Down => self.down[w],
        }
    }
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Scans valuations `start, start+1, …` (at most `limit` of them, and never
/// past `2^(k·n)`) for the first one falsifying the formula at `root`.
///
/// Valuation `v` makes letter `i` true at world `w` iff bit `i·n + w` of `v`
/// is set. Returns the refuting valuation, if any, and how many valuations
/// were examined. `start` must be a multiple of 64.
pub(crate) fn first_refutation(
    c: &Compiled,
    frame: &SmallFrame,
    root: usize,
    start: u64,
    limit: u64,
) -> (Option<u64>, u64) {
    debug_assert_eq!(start % 64, 0);
    let n = frame.n;
    let bits = c.letters.len() * n;
    assert!(bits < 64, "valuation index must fit in 64 bits");
    let total = 1u64 << bits;
    let end = total.min(start.saturating_add(limit));
    let mut vals = vec![0u64; c.nodes.len() * n];
    let mut base = start;
    while base < end {
        for (i, node) in c.nodes.iter().enumerate() {
            for w in 0..n {
                let word = match *node {
                    Node::Letter(l) => {
                        let b = l * n + w;
                        if b < 6 {
                            PATTERNS[b]
                        } else if base >> b & 1 == 1 {
                            !0
                        } else {
                            0
                        }
                    }
                    Node::Top => !0,
                    Node::Bot => 0,
                    Node::Not(a) => !vals[a * n + w],
                    Node::And(a, b) => vals[a * n + w] & vals[b * n + w],
                    Node::Or(a, b) => vals[a * n + w] | vals[b * n + w],
                    Node::Imp(a, b) => !vals[a * n + w] | vals[b * n + w],
                    Node::Iff(a, b) => !(vals[a * n + w] ^ vals[b * n + w]),
                    Node::Box(d, a) => {
                        let mut acc = !0u64;
                        let mut row = frame.row(d, w);
                        while row != 0 {
                            let v = row.trailing_zeros() as usize;
                            row &= row - 1;
                            acc &= vals[a * n + v];
                        }
                        acc
                    }
                    Node::Dia(d, a) => {
                        let mut acc = 0u64;
                        let mut row = frame.row(d, w);
                        while row != 0 {
                            let v = row.trailing_zeros() as usize;
                            row &= row - 1;
                            acc |= vals[a * n + v];
                        }
                        acc
                    }
                };
                vals[i * n + w] = word;
            }
        }
        let mut bad = !vals[c.root() * n + root];
        let span = end - base;
        if span < 64 {
            bad &= (1u64 << span) - 1;
        }
        if bad != 0 {
            let v = base + bad.trailing_zeros() as u64;
            return (Some(v), v - start + 1);
        }
        base += 64;
    }
    (None, end.saturating_sub(start))
}
