//! Buttons and switches: formulas whose truth the reachable worlds can steer.
//!
//! In direction `d`, a button `b` is *pushed* where `[d]b` holds and is a
//! button where `[d]<d>[d]b` holds; a switch `s` satisfies `[d](<d>s & <d>~s)`.
//! A family is independent at a world when every combination of further
//! pushes and switch values is reachable from every reachable world, and
//! pushed buttons stay pushed.

use crate::formula::{canonical_letter, enumerate, Direction, Formula, Substitution};
use crate::frame::{PointedModel, WorldSet};
use crate::semantics::{eval, eval_in, SemanticsError};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ControlError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("independence check needs {needed} table entries, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("at most 32 buttons and 32 switches are supported")]
    TooManyControls,
    #[error("not a countermodel: {0}")]
    NotACountermodel(String),
    #[error("insufficient controls: {0}")]
    InsufficientControls(String),
    #[error("translated formula unexpectedly holds at the point")]
    VerificationFailed,
}

fn pushed_formula(d: Direction, b: &Formula) -> Formula {
    Formula::boxed(d, b.clone())
}

fn button_formula(d: Direction, b: &Formula) -> Formula {
    Formula::boxed(d, Formula::dia(d, Formula::boxed(d, b.clone())))
}

fn switch_formula(d: Direction, s: &Formula) -> Formula {
    Formula::boxed(
        d,
        Formula::and(Formula::dia(d, s.clone()), Formula::dia(d, Formula::not(s.clone()))),
    )
}

fn at(m: &PointedModel, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
    crate::semantics::holds_at(m, w, f)
}

pub fn is_pushed(m: &PointedModel, w: usize, b: &Formula, d: Direction) -> Result<bool, SemanticsError> {
    at(m, w, &pushed_formula(d, b))
}

pub fn is_button(m: &PointedModel, w: usize, b: &Formula, d: Direction) -> Result<bool, SemanticsError> {
    at(m, w, &button_formula(d, b))
}

pub fn is_switch(m: &PointedModel, w: usize, s: &Formula, d: Direction) -> Result<bool, SemanticsError> {
    at(m, w, &switch_formula(d, s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlFamily {
    pub direction: Direction,
    pub buttons: Vec<Formula>,
    pub switches: Vec<Formula>,
}

impl ControlFamily {
    pub fn new(direction: Direction, buttons: Vec<Formula>, switches: Vec<Formula>) -> Self {
        ControlFamily {
            direction,
            buttons,
            switches,
        }
    }
}

/// Why a family is not independent at a world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureWitness {
    NotAButton { button: usize },
    AlreadyPushed { button: usize },
    NotASwitch { switch: usize },
    /// A successor of `world` has button `button` unpushed although it is pushed at `world`.
    Released { world: usize, successor: usize, button: usize },
    /// No successor of `world` shows this pattern (bit `i` = control `i`).
    Unrealized { world: usize, buttons: u64, switches: u64 },
}

/// A successor realizing one pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub world: usize,
    pub buttons: u64,
    pub switches: u64,
    pub successor: usize,
}

/// Proof of independence: for every reachable world and every admissible
/// pattern, a successor realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub family: ControlFamily,
    pub model: PointedModel,
    /// Switch pattern at the point.
    pub initial_switches: u64,
    pub table: Vec<TableEntry>,
}

struct Patterns {
    buttons: Vec<u64>,
    switches: Vec<u64>,
}

fn patterns(m: &PointedModel, fam: &ControlFamily) -> Patterns {
    let n = m.n();
    let pack = |sets: &[WorldSet]| -> Vec<u64> {
        (0..n)
            .map(|w| sets.iter().enumerate().fold(0u64, |acc, (i, s)| acc | (s.contains(w) as u64) << i))
            .collect()
    };
    let pushed: Vec<WorldSet> = fam.buttons.iter().map(|b| eval(m, &pushed_formula(fam.direction, b))).collect();
    let on: Vec<WorldSet> = fam.switches.iter().map(|s| eval(m, s)).collect();
    Patterns {
        buttons: pack(&pushed),
        switches: pack(&on),
    }
}

impl Certificate {
    /// Re-checks every table entry against the model.
    pub fn verify(&self) -> bool {
        let p = patterns(&self.model, &self.family);
        let d = self.family.direction;
        let cone = self.model.frame().cone(d, self.model.point());
        let full = (1u64 << self.family.buttons.len()) - 1;
        let mut count: HashMap<usize, u64> = HashMap::new();
        for e in &self.table {
            if !cone.contains(e.world)
                || !self.model.frame().related(d, e.world, e.successor)
                || p.buttons[e.successor] != e.buttons
                || p.switches[e.successor] != e.switches
                || p.buttons[e.world] & !e.buttons != 0
                || e.buttons & !full != 0
            {
                return false;
            }
            *count.entry(e.world).or_default() += 1;
        }
        let complete = cone.iter().all(|u| {
            let free = (full & !p.buttons[u]).count_ones();
            count.get(&u).copied().unwrap_or(0) == (1u64 << free) << self.family.switches.len()
        });
        complete
    }
}

/// Checks independence of `fam` at the model's point. `budget` caps
/// `reachable worlds × patterns`.
pub fn check_independent(
    m: &PointedModel,
    fam: &ControlFamily,
    budget: u64,
) -> Result<Result<Certificate, FailureWitness>, ControlError> {
    let (mc, nc) = (fam.buttons.len(), fam.switches.len());
    if mc > 32 || nc > 32 {
        return Err(ControlError::TooManyControls);
    }
    let d = fam.direction;
    let w = m.point();
    let frame = m.frame();
    let cone = frame.cone(d, w);
    let needed = (cone.len() as u128) << (mc + nc);
    if needed > budget as u128 {
        return Err(ControlError::BudgetExceeded {
            needed,
            budget: budget as u128,
        });
    }
    for (i, b) in fam.buttons.iter().enumerate() {
        if !is_button(m, w, b, d)? {
            return Ok(Err(FailureWitness::NotAButton { button: i }));
        }
        if is_pushed(m, w, b, d)? {
            return Ok(Err(FailureWitness::AlreadyPushed { button: i }));
        }
    }
    for (j, s) in fam.switches.iter().enumerate() {
        if !is_switch(m, w, s, d)? {
            return Ok(Err(FailureWitness::NotASwitch { switch: j }));
        }
    }
    let p = patterns(m, fam);
    let full = if mc == 0 { 0 } else { (1u64 << mc) - 1 };
    let mut table = Vec::new();
    for u in cone.iter() {
        let mut first: HashMap<(u64, u64), usize> = HashMap::new();
        for t in frame.successors(d, u).iter() {
            let lost = p.buttons[u] & !p.buttons[t];
            if lost != 0 {
                return Ok(Err(FailureWitness::Released {
                    world: u,
                    successor: t,
                    button: lost.trailing_zeros() as usize,
                }));
            }
            first.entry((p.buttons[t], p.switches[t])).or_insert(t);
        }
        let free = full & !p.buttons[u];
        // enumerate supersets of the pushed set in increasing order
        let mut extra = 0u64;
        loop {
            let bs = p.buttons[u] | extra;
            for ss in 0..1u64 << nc {
                match first.get(&(bs, ss)) {
                    Some(&t) => table.push(TableEntry {
                        world: u,
                        buttons: bs,
                        switches: ss,
                        successor: t,
                    }),
                    None => {
                        return Ok(Err(FailureWitness::Unrealized {
                            world: u,
                            buttons: bs,
                            switches: ss,
                        }))
                    }
                }
            }
            if extra == free {
                break;
            }
            extra = (extra.wrapping_sub(free)) & free;
        }
    }
    Ok(Ok(Certificate {
        family: fam.clone(),
        model: m.clone(),
        initial_switches: p.switches[w],
        table,
    }))
}

/// Options for [`find_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest boolean combination of letters tried as a control.
    pub max_size: usize,
    /// Cap on candidates kept per role.
    pub max_candidates: usize,
    /// Cap on families checked.
    pub max_checks: u64,
    /// Cap per independence check, as in [`check_independent`].
    pub table_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_size: 4,
            max_candidates: 24,
            max_checks: 1 << 16,
            table_budget: 1 << 24,
        }
    }
}

/// Searches for `buttons` independent buttons and `switches` independent
/// switches at the model's point among the model's letters and then small
/// boolean combinations of them, in canonical enumeration order. Families are
/// tried with button choices varying slowest; the first certified one wins.
pub fn find_family(
    m: &PointedModel,
    d: Direction,
    buttons: usize,
    switches: usize,
    opts: &SearchOptions,
) -> Result<Option<Certificate>, ControlError> {
    let names: Vec<&String> = m.valuation().keys().collect();
    let rename: Substitution = names
        .iter()
        .enumerate()
        .map(|(i, p)| (canonical_letter(i), Formula::atom(p)))
        .collect();
    let w = m.point();
    let mut seen = BTreeSet::new();
    let (mut bcands, mut scands) = (Vec::new(), Vec::new());
    for f in enumerate(names.len(), opts.max_size, &BTreeSet::new()) {
        let f = f.substitute(&rename);
        if !seen.insert(eval(m, &f)) {
            continue;
        }
        if bcands.len() < opts.max_candidates && is_button(m, w, &f, d)? && !is_pushed(m, w, &f, d)? {
            bcands.push(f.clone());
        }
        if scands.len() < opts.max_candidates && is_switch(m, w, &f, d)? {
            scands.push(f);
        }
    }
    let bcombos = combinations(bcands.len(), buttons);
    let scombos = combinations(scands.len(), switches);
    let mut checks = 0u64;
    for bc in &bcombos {
        for sc in &scombos {
            checks += 1;
            if checks > opts.max_checks {
                return Ok(None);
            }
            let fam = ControlFamily::new(
                d,
                bc.iter().map(|&i| bcands[i].clone()).collect(),
                sc.iter().map(|&i| scands[i].clone()).collect(),
            );
            if let Ok(cert) = check_independent(m, &fam, opts.table_budget)? {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// `r`-element index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

/// Cluster structure of the part of a model generated from its point.
struct Clusters {
    /// Worlds of each cluster; the point's cluster comes first with the point first.
    members: Vec<Vec<usize>>,
    /// `above[i][j]`: cluster `j` is reachable from cluster `i`.
    above: Vec<Vec<bool>>,
}

fn clusters_of(cm: &PointedModel, e: Direction) -> Result<Clusters, ControlError> {
    let frame = cm.frame();
    let root = cm.point();
    let cone: Vec<usize> = frame.cone(e, root).iter().collect();
    let rel = |a: usize, b: usize| frame.related(e, a, b);
    for &a in &cone {
        if !rel(a, a) {
            return Err(ControlError::NotACountermodel("relation is not reflexive".into()));
        }
        for &b in &cone {
            if rel(a, b) && cone.iter().any(|&c| rel(b, c) && !rel(a, c)) {
                return Err(ControlError::NotACountermodel("relation is not transitive".into()));
            }
        }
    }
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = vec![root];
    order.extend(cone.iter().copied().filter(|&w| w != root));
    for &w in &order {
        if members.iter().any(|c| c.contains(&w)) {
            continue;
        }
        let mut c = vec![w];
        c.extend(cone.iter().copied().filter(|&v| v != w && rel(w, v) && rel(v, w)));
        members.push(c);
    }
    let above: Vec<Vec<bool>> = members
        .iter()
        .map(|a| members.iter().map(|b| rel(a[0], b[0])).collect())
        .collect();
    let k = members.len();
    if !(0..k).any(|top| (0..k).all(|i| above[i][top])) {
        return Err(ControlError::NotACountermodel("frame is not directed".into()));
    }
    Ok(Clusters { members, above })
}

/// Monotone map from subsets of `r` buttons onto clusters, sending the empty
/// set to the root cluster, such that every cluster above `g(B)` is `g(B')`
/// for some `B' ⊇ B`.
fn button_map(cl: &Clusters, r: usize, max_nodes: u64) -> Option<Vec<usize>> {
    let k = cl.members.len();
    let subsets: Vec<u64> = {
        let mut s: Vec<u64> = (0..1u64 << r).collect();
        s.sort_by_key(|b| (b.count_ones(), *b));
        s
    };
    // preferred value: the cluster whose set of non-root clusters below it,
    // read as button indices, is exactly B
    let label = |c: usize| -> u64 {
        (1..k).filter(|&j| j <= r && cl.above[j][c]).fold(0u64, |acc, j| acc | 1 << (j - 1))
    };
    let labels: Vec<u64> = (0..k).map(label).collect();
    let mut g = vec![usize::MAX; 1 << r];
    let mut nodes = 0u64;

    fn back_ok(cl: &Clusters, g: &[usize]) -> bool {
        let k = cl.members.len();
        (0..g.len()).all(|b| {
            (0..k).filter(|&e| cl.above[g[b]][e]).all(|e| {
                (0..g.len()).any(|b2| b2 & b == b && g[b2] == e)
            })
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        idx: usize,
        subsets: &[u64],
        cl: &Clusters,
        labels: &[u64],
        g: &mut Vec<usize>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > max_nodes {
            return false;
        }
        if idx == subsets.len() {
            return back_ok(cl, g);
        }
        let b = subsets[idx] as usize;
        let k = cl.members.len();
        let mut options: Vec<usize> = if b == 0 {
            vec![0]
        } else {
            (0..k)
                .filter(|&c| (0..64).filter(|i| b >> i & 1 == 1).all(|i| cl.above[g[b & !(1 << i)]][c]))
                .collect()
        };
        options.sort_by_key(|&c| (labels[c] != b as u64, c));
        for c in options {
            g[b] = c;
            if go(idx + 1, subsets, cl, labels, g, nodes, max_nodes) {
                return true;
            }
        }
        g[b] = usize::MAX;
        false
    }

    go(0, &subsets, cl, &labels, &mut g, &mut nodes, max_nodes).then_some(g)
}

/// Translates a countermodel for `f` into a substitution of formulas over the
/// certified controls, such that the substituted formula (read in the
/// certificate's direction) fails at the certificate's point.
///
/// The countermodel must be a directed preorder around its point; its
/// clusters are indexed by sets of pushed buttons and its worlds within a
/// cluster by switch patterns.
pub fn simulate_countermodel(
    cert: &Certificate,
    f: &Formula,
    cm: &PointedModel,
) -> Result<Substitution, ControlError> {
    let dirs = f.directions();
    if dirs.len() > 1 {
        return Err(ControlError::NotACountermodel("formula mixes directions".into()));
    }
    let e = dirs.iter().next().copied().unwrap_or(cert.family.direction);
    if eval(cm, f).contains(cm.point()) {
        return Err(ControlError::NotACountermodel("formula holds at the point".into()));
    }
    let cl = clusters_of(cm, e)?;
    let (mc, nc) = (cert.family.buttons.len(), cert.family.switches.len());
    let widest = cl.members.iter().map(Vec::len).max().unwrap_or(1);
    if nc < 64 && (1usize << nc.min(63)) < widest {
        return Err(ControlError::InsufficientControls(format!(
            "a cluster of {widest} worlds needs more than {nc} switches"
        )));
    }
    let (r, g) = (0..=mc.min(16))
        .find_map(|r| button_map(&cl, r, 1 << 20).map(|g| (r, g)))
        .ok_or_else(|| {
            ControlError::InsufficientControls(format!(
                "{} clusters cannot be indexed by {mc} buttons",
                cl.members.len()
            ))
        })?;
    let d = cert.family.direction;
    let t0 = cert.initial_switches;
    let world_of = |b: usize, t: u64| {
        let c = &cl.members[g[b]];
        c[((t ^ t0) as usize) % c.len()]
    };
    let pushed: Vec<Formula> = cert.family.buttons[..r].iter().map(|b| pushed_formula(d, b)).collect();
    let button_cond = |b: usize| {
        Formula::conj((0..r).map(|i| {
            if b >> i & 1 == 1 {
                pushed[i].clone()
            } else {
                Formula::not(pushed[i].clone())
            }
        }))
    };
    let switch_cond = |t: u64| {
        Formula::conj(cert.family.switches.iter().enumerate().map(|(j, s)| {
            if t >> j & 1 == 1 {
                s.clone()
            } else {
                Formula::not(s.clone())
            }
        }))
    };
    let mut sigma = Substitution::new();
    for p in f.letters() {
        let ext = cm.letter(&p);
        let mut disjuncts = Vec::new();
        for b in 0..1usize << r {
            let ts: Vec<u64> = (0..1u64 << nc).filter(|&t| ext.contains(world_of(b, t))).collect();
            if ts.is_empty() {
                continue;
            }
            let sw = if ts.len() == 1 << nc {
                Formula::Top
            } else {
                Formula::disj(ts.iter().map(|&t| switch_cond(t)))
            };
            disjuncts.push(match (r, &sw) {
                (0, _) => sw,
                (_, Formula::Top) => button_cond(b),
                _ => Formula::and(button_cond(b), sw),
            });
        }
        let everywhere = (0..1usize << r).all(|b| (0..1u64 << nc).all(|t| ext.contains(world_of(b, t))));
        sigma.insert(&p, if everywhere { Formula::Top } else { Formula::disj(disjuncts) });
    }
    let translated = f.orient(d).substitute(&sigma);
    if eval_in(cert.model.frame(), cert.model.valuation(), &translated).contains(cert.model.point()) {
        return Err(ControlError::VerificationFailed);
    }
    Ok(sigma)
}
