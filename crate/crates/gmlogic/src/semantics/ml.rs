//! Membership of a formula in the set of formulas all of whose substitution
//! instances hold at the point.
//!
//! Substituting formulas over the model's letters ranges over the definable
//! algebra, whose members are the unions of bisimulation classes. Such
//! valuations cannot separate bisimilar worlds, so a formula is a member iff
//! it holds at the point's class of the bisimulation quotient under every
//! valuation of that quotient. Only the part of the quotient reachable with
//! the formula's modalities matters.

use super::algebra::{bisimulation_partition, quotient, quotient_valuation, relevant_worlds, Partition};
use super::sat::{self, Adjacency};
use super::{eval_compiled, eval_in, SemanticsError};
use crate::compiled::{first_refutation, Compiled, SmallFrame};
use crate::formula::{canonical_letter, enumerate, Direction, Formula, Substitution};
use crate::frame::{Frame, PointedModel, WorldSet};
use crate::theories::{self, Budget, Outcome, Theory};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlOptions {
    /// Exhaustive search when `letters × relevant classes` is at most this.
    pub brute_force_bits: usize,
    /// Cap on clause literals for the SAT fallback.
    pub max_encoding: usize,
    /// Try valuations definable by short formulas before calling the solver.
    pub quick_candidates: bool,
}

impl Default for MlOptions {
    fn default() -> Self {
        MlOptions {
            brute_force_bits: 12,
            max_encoding: 1 << 26,
            quick_candidates: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// A valuation from the definable algebra falsifying the formula at the point.
    Refuted(BTreeMap<String, WorldSet>),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

struct Cone {
    /// Quotient classes in the cone, ascending; local world `i` is `classes[i]`.
    classes: Vec<usize>,
    frame: Frame,
    root: usize,
    small: Option<SmallFrame>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    candidates: OnceLock<Vec<WorldSet>>,
}

/// Reusable membership checker for one pointed model.
pub struct MlChecker {
    model: PointedModel,
    partition: Partition,
    quotient: Frame,
    qval: BTreeMap<String, WorldSet>,
    point_class: usize,
    options: MlOptions,
    preorder: bool,
    directed: [bool; 2],
    cones: [OnceLock<Cone>; 4],
}

fn dir_key(dirs: &BTreeSet<Direction>) -> usize {
    dirs.contains(&Direction::Up) as usize | (dirs.contains(&Direction::Down) as usize) << 1
}

impl MlChecker {
    pub fn new(model: &PointedModel) -> MlChecker {
        Self::with_options(model, MlOptions::default())
    }

    pub fn with_options(model: &PointedModel, options: MlOptions) -> MlChecker {
        let letters: BTreeSet<String> = model.valuation().keys().cloned().collect();
        let partition = bisimulation_partition(model, &letters);
        let quotient = quotient(model.frame(), &partition);
        let qval = quotient_valuation(model, &partition);
        let point_class = partition.class_of(model.point());
        let props = model.frame().properties();
        MlChecker {
            model: model.clone(),
            partition,
            quotient,
            qval,
            point_class,
            options,
            preorder: props.reflexive && props.transitive,
            directed: [props.up_directed, props.down_directed],
            cones: Default::default(),
        }
    }

    pub fn model(&self) -> &PointedModel {
        &self.model
    }

    /// Number of bisimulation classes of the model.
    pub fn classes(&self) -> usize {
        self.partition.len()
    }

    fn cone(&self, dirs: &BTreeSet<Direction>) -> &Cone {
        self.cones[dir_key(dirs)].get_or_init(|| {
            let rel = relevant_worlds(&self.quotient, dirs, self.point_class);
            let classes: Vec<usize> = rel.iter().collect();
            let r = classes.len();
            let local = |c: usize| classes.binary_search(&c).ok();
            let up: Vec<Vec<usize>> = classes
                .iter()
                .map(|&c| self.quotient.up_row(c).iter().filter_map(local).collect())
                .collect();
            let mut down = vec![Vec::new(); r];
            for (i, row) in up.iter().enumerate() {
                for &j in row {
                    down[j].push(i);
                }
            }
            let rows: Vec<WorldSet> = up.iter().map(|row| WorldSet::from_worlds(r, row.iter().copied())).collect();
            let small = (r <= 64).then(|| {
                SmallFrame::from_up(up.iter().map(|row| row.iter().fold(0u64, |a, &j| a | 1 << j)).collect())
            });
            Cone {
                root: local(self.point_class).expect("point is in its cone"),
                frame: crate::frame::make_frame(r, &rows_to_edges(&rows), crate::frame::Closure::NONE)
                    .expect("local indices are in range"),
                classes,
                small,
                up,
                down,
                candidates: OnceLock::new(),
            }
        })
    }

    /// Candidate sets definable by formulas of size at most 3 over the model's
    /// letters, restricted to the cone.
    fn candidates<'a>(&self, cone: &'a Cone, dirs: &BTreeSet<Direction>) -> &'a [WorldSet] {
        cone.candidates.get_or_init(|| {
            let names: Vec<&String> = self.qval.keys().collect();
            let rename: Substitution = names
                .iter()
                .enumerate()
                .map(|(i, p)| (canonical_letter(i), Formula::atom(p)))
                .collect();
            let local_val: BTreeMap<String, WorldSet> = self
                .qval
                .iter()
                .map(|(p, set)| {
                    let s = WorldSet::from_worlds(
                        cone.classes.len(),
                        cone.classes.iter().enumerate().filter(|(_, &c)| set.contains(c)).map(|(i, _)| i),
                    );
                    (p.clone(), s)
                })
                .collect();
            let dirs = if dirs.is_empty() { [Direction::Up].into() } else { dirs.clone() };
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for f in enumerate(names.len(), 3, &dirs) {
                let set = eval_in(&cone.frame, &local_val, &f.substitute(&rename));
                if seen.insert(set.clone()) {
                    out.push(set);
                }
                if out.len() >= 256 {
                    break;
                }
            }
            out
        })
    }

    /// Exact membership of `f`, with a refuting valuation when it fails.
    pub fn check(&self, f: &Formula) -> Result<Membership, SemanticsError> {
        let dirs = f.directions();
        let cone = self.cone(&dirs);
        let c = Compiled::new(f);
        let k = c.letters.len();
        let r = cone.classes.len();
        if let Some(small) = cone.small.as_ref().filter(|_| k * r <= self.options.brute_force_bits) {
            return Ok(match first_refutation(&c, small, cone.root, 0, u64::MAX).0 {
                None => Membership::Member,
                Some(v) => {
                    let sets = (0..k)
                        .map(|i| (0..r).map(|w| v >> (i * r + w) & 1 == 1).collect())
                        .collect::<Vec<Vec<bool>>>();
                    Membership::Refuted(self.lift(&c, cone, &sets))
                }
            });
        }
        if self.options.quick_candidates && (1..=2).contains(&k) {
            if let Some(sets) = self.quick_refutation(&c, cone, &dirs) {
                return Ok(Membership::Refuted(self.lift(&c, cone, &sets)));
            }
        }
        let adj = Adjacency {
            up: &cone.up,
            down: &cone.down,
        };
        let needed = sat::encoding_size(&c, &adj);
        if needed > self.options.max_encoding {
            return Err(SemanticsError::BudgetExceeded {
                what: "membership encoding",
                needed: needed as u128,
                budget: self.options.max_encoding as u128,
            });
        }
        Ok(match sat::refute(&c, &adj, cone.root) {
            None => Membership::Member,
            Some(sets) => Membership::Refuted(self.lift(&c, cone, &sets)),
        })
    }

    fn quick_refutation(&self, c: &Compiled, cone: &Cone, dirs: &BTreeSet<Direction>) -> Option<Vec<Vec<bool>>> {
        let pool = self.candidates(cone, dirs);
        let as_bools = |s: &WorldSet| (0..cone.classes.len()).map(|w| s.contains(w)).collect::<Vec<bool>>();
        let fails = |sets: &[WorldSet]| !eval_compiled(c, &cone.frame, sets).contains(cone.root);
        match c.letters.len() {
            1 => pool.iter().find(|x| fails(std::slice::from_ref(*x))).map(|x| vec![as_bools(x)]),
            2 => {
                let few = &pool[..pool.len().min(16)];
                for x in few {
                    for y in few {
                        if fails(&[x.clone(), y.clone()]) {
                            return Some(vec![as_bools(x), as_bools(y)]);
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Translates local class valuations to sets of model worlds.
    fn lift(&self, c: &Compiled, cone: &Cone, sets: &[Vec<bool>]) -> BTreeMap<String, WorldSet> {
        c.letters
            .iter()
            .zip(sets)
            .map(|(p, bits)| {
                let classes = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| cone.classes[i]);
                (p.clone(), self.partition.union_of(classes))
            })
            .collect()
    }

    /// Checks every formula of the canonical enumeration and records, for
    /// monomodal enumerations, each theory's verdict alongside.
    pub fn fragment(
        &self,
        k: usize,
        max_size: usize,
        dirs: &BTreeSet<Direction>,
    ) -> Result<FragmentReport, SemanticsError> {
        let formulas = enumerate(k, max_size, dirs);
        let mono = dirs.len() == 1;
        let budget = Budget::default();
        let mut outcomes: BTreeMap<Theory, Vec<Outcome>> = BTreeMap::new();
        if mono {
            for t in Theory::ALL {
                let v = formulas
                    .iter()
                    .map(|f| theories::validity(t, f, &budget).expect("enumeration is monomodal"))
                    .collect();
                outcomes.insert(t, v);
            }
        }
        let mut members = Vec::with_capacity(formulas.len());
        for (i, f) in formulas.iter().enumerate() {
            let implied = mono && self.preorder && {
                let d = *dirs.iter().next().expect("one direction");
                let directed = self.directed[(d == Direction::Down) as usize];
                outcomes[&Theory::S4][i] == Outcome::Valid
                    || (directed && outcomes[&Theory::S42][i] == Outcome::Valid)
            };
            members.push(implied || self.check(f)?.is_member());
        }
        Ok(FragmentReport {
            k,
            max_size,
            dirs: dirs.clone(),
            formulas,
            members,
            outcomes,
        })
    }
}

fn rows_to_edges(rows: &[WorldSet]) -> Vec<(usize, usize)> {
    rows.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
        .collect()
}

/// Membership with a refuting valuation when it fails.
pub fn ml_check(m: &PointedModel, f: &Formula) -> Result<Membership, SemanticsError> {
    MlChecker::new(m).check(f)
}

/// Whether every substitution instance of `f` over the model's letters holds
/// at the point.
pub fn ml_member(m: &PointedModel, f: &Formula) -> Result<bool, SemanticsError> {
    Ok(ml_check(m, f)?.is_member())
}

/// Membership of every formula over `p0..p(k-1)` up to `max_size` in the
/// given directions.
pub fn ml_fragment(
    m: &PointedModel,
    k: usize,
    max_size: usize,
    dirs: &BTreeSet<Direction>,
) -> Result<FragmentReport, SemanticsError> {
    MlChecker::new(m).fragment(k, max_size, dirs)
}

/// A formula on which the fragment and a theory disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub formula: Formula,
    /// True when the formula is in the fragment but not valid in the theory.
    pub in_fragment: bool,
}

/// Result of [`ml_fragment`].
#[derive(Clone, Debug)]
pub struct FragmentReport {
    pub k: usize,
    pub max_size: usize,
    pub dirs: BTreeSet<Direction>,
    /// The enumeration, in canonical order.
    pub formulas: Vec<Formula>,
    /// Membership of each enumerated formula.
    pub members: Vec<bool>,
    /// Each theory's verdict on each formula; empty for bimodal enumerations.
    pub outcomes: BTreeMap<Theory, Vec<Outcome>>,
}

impl FragmentReport {
    /// Members in canonical order.
    pub fn valid(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().zip(&self.members).filter(|(_, &m)| m).map(|(f, _)| f)
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    /// First enumerated formula on which membership and the theory's verdict
    /// differ. Formulas the theory left undecided are skipped.
    pub fn separator(&self, t: Theory) -> Option<Separator> {
        let outcomes = self.outcomes.get(&t)?;
        self.formulas.iter().zip(&self.members).zip(outcomes).find_map(|((f, &m), o)| {
            let differs = match o {
                Outcome::Valid => !m,
                Outcome::Invalid => m,
                Outcome::Unknown => false,
            };
            differs.then(|| Separator {
                formula: f.clone(),
                in_fragment: m,
            })
        })
    }

    /// Number of formulas the theory left undecided.
    pub fn unknown(&self, t: Theory) -> usize {
        self.outcomes
            .get(&t)
            .map_or(0, |o| o.iter().filter(|&&x| x == Outcome::Unknown).count())
    }
}
