//! Decision by elimination of atoms.
//!
//! An atom fixes the letters and every modal subformula. The profile of an
//! atom is the set of modal subformulas it commits all successors to (boxes it
//! asserts, diamonds it denies); ordering atoms by profile inclusion gives a
//! preorder. Atoms whose diamonds and failed boxes have no witness above them
//! are removed until none remain to remove.

use crate::compiled::{Compiled, Node};

pub(crate) struct Atoms {
    /// Letter bits in the low `k` bits, then one bit per modal node.
    pub atoms: Vec<u64>,
    pub profile: Vec<u64>,
    /// Bit `j` set iff the atom satisfies what modal node `j` demands of a witness.
    pub serves: Vec<u64>,
    pub root_true: Vec<bool>,
    pub modal_count: usize,
    pub letter_count: usize,
}

pub(crate) enum Elim {
    /// No countermodel.
    Valid,
    /// Surviving atoms and one falsifying the formula.
    Invalid { alive: Vec<usize>, falsifier: usize },
}

impl Atoms {
    /// `None` when `2^(letters + modal nodes)` exceeds `budget`.
    pub fn build(c: &Compiled, budget: u64) -> Option<Atoms> {
        let modal: Vec<usize> = c
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::Box(..) | Node::Dia(..)))
            .map(|(i, _)| i)
            .collect();
        let k = c.letters.len();
        let m = modal.len();
        let bits = k + m;
        if bits >= 40 || (1u64 << bits) > budget {
            return None;
        }
        let mut slot = vec![usize::MAX; c.nodes.len()];
        for (j, &i) in modal.iter().enumerate() {
            slot[i] = j;
        }
        let mut out = Atoms {
            atoms: Vec::new(),
            profile: Vec::new(),
            serves: Vec::new(),
            root_true: Vec::new(),
            modal_count: m,
            letter_count: k,
        };
        for a in 0..1u64 << bits {
            let v = c.eval_local(|l| a >> l & 1 == 1, |i| a >> (k + slot[i]) & 1 == 1);
            let mut ok = true;
            let (mut profile, mut serves) = (0u64, 0u64);
            for (j, &i) in modal.iter().enumerate() {
                match c.nodes[i] {
                    Node::Box(_, x) => {
                        if v[i] && !v[x] {
                            ok = false;
                        }
                        profile |= (v[i] as u64) << j;
                        serves |= (!v[x] as u64) << j;
                    }
                    Node::Dia(_, x) => {
                        if v[x] && !v[i] {
                            ok = false;
                        }
                        profile |= (!v[i] as u64) << j;
                        serves |= (v[x] as u64) << j;
                    }
                    _ => unreachable!(),
                }
            }
            if ok {
                out.atoms.push(a);
                out.profile.push(profile);
                out.serves.push(serves);
                out.root_true.push(v[c.root()]);
            }
        }
        Some(out)
    }

    /// Greatest demand-closed subset of `universe`.
    fn eliminate(&self, universe: &[usize]) -> Vec<usize> {
        let m = self.modal_count;
        let full = if m == 64 { !0 } else { (1u64 << m) - 1 };
        let mut alive: Vec<usize> = universe.to_vec();
        let mut avail = vec![0u64; 1 << m];
        loop {
            avail.iter_mut().for_each(|x| *x = 0);
            for &a in &alive {
                avail[self.profile[a] as usize] |= self.serves[a];
            }
            // superset sums: avail[p] = OR over q ⊇ p
            for bit in 0..m {
                for p in 0..1usize << m {
                    if p >> bit & 1 == 0 {
                        avail[p] |= avail[p | 1 << bit];
                    }
                }
            }
            let before = alive.len();
            alive.retain(|&a| {
                let p = self.profile[a];
                let demands = !p & full;
                demands & !avail[p as usize] == 0
            });
            if alive.len() == before {
                return alive;
            }
        }
    }

    pub fn decide_s4(&self) -> Elim {
        let all: Vec<usize> = (0..self.atoms.len()).collect();
        let alive = self.eliminate(&all);
        match alive.iter().find(|&&a| !self.root_true[a]) {
            Some(&falsifier) => Elim::Invalid { alive, falsifier },
            None => Elim::Valid,
        }
    }

    /// As [`Self::decide_s4`], but the model must have a top cluster: for each
    /// candidate top profile `P`, only atoms below `P` are allowed and one
    /// with profile exactly `P` must survive.
    pub fn decide_s42(&self) -> Elim {
        let mut profiles: Vec<u64> = self.profile.clone();
        profiles.sort_unstable();
        profiles.dedup();
        for &top in &profiles {
            let universe: Vec<usize> =
                (0..self.atoms.len()).filter(|&a| self.profile[a] & !top == 0).collect();
            let alive = self.eliminate(&universe);
            if !alive.iter().any(|&a| self.profile[a] == top) {
                continue;
            }
            if let Some(&falsifier) = alive.iter().find(|&&a| !self.root_true[a]) {
                return Elim::Invalid { alive, falsifier };
            }
        }
        Elim::Valid
    }

    /// Worlds of the model generated by `falsifier` (listed first), with up rows
    /// given by profile inclusion and letter bits per world.
    pub fn model(&self, alive: &[usize], falsifier: usize) -> (Vec<Vec<usize>>, Vec<u64>) {
        let base = self.profile[falsifier];
        let mut worlds = vec![falsifier];
        worlds.extend(alive.iter().copied().filter(|&a| a != falsifier && self.profile[a] & base == base));
        let rows = worlds
            .iter()
            .map(|&a| {
                (0..worlds.len())
                    .filter(|&j| self.profile[worlds[j]] & self.profile[a] == self.profile[a])
                    .collect()
            })
            .collect();
        let letters = worlds.iter().map(|&a| self.atoms[a] & ((1u64 << self.letter_count) - 1)).collect();
        (rows, letters)
    }
}
