//! Refutation search by SAT: letters at each world are variables, and the
//! formula's value at every world is defined by Tseitin clauses.

use crate::compiled::{Compiled, Node};
use crate::formula::Direction;
use varisat::{ExtendFormula, Lit, Solver};

/// Successor lists of a frame in both directions.
pub(crate) struct Adjacency<'a> {
    pub up: &'a [Vec<usize>],
    pub down: &'a [Vec<usize>],
}

impl Adjacency<'_> {
    fn succ(&self, d: Direction, w: usize) -> &[usize] {
        match d {
            Direction::Up => &self.up[w],
            Direction::Down => &self.down[w],
        }
    }
}

/// Number of clause literals the encoding would need.
pub(crate) fn encoding_size(c: &Compiled, adj: &Adjacency) -> usize {
    let n = adj.up.len();
    c.nodes
        .iter()
        .map(|node| match *node {
            Node::Box(d, _) | Node::Dia(d, _) => {
                (0..n).map(|w| 3 * adj.succ(d, w).len() + 1).sum::<usize>()
            }
            Node::Letter(_) | Node::Top | Node::Bot | Node::Not(_) => 0,
            _ => 12 * n,
        })
        .sum()
}

/// Looks for letter values (indexed `[letter][world]`) that make the formula
/// false at `root`. `None` means no such values exist.
pub(crate) fn refute(c: &Compiled, adj: &Adjacency, root: usize) -> Option<Vec<Vec<bool>>> {
    let n = adj.up.len();
    let mut solver = Solver::new();
    let truth = solver.new_lit();
    solver.add_clause(&[truth]);
    let letters: Vec<Vec<Lit>> = (0..c.letters.len())
        .map(|_| (0..n).map(|_| solver.new_lit()).collect())
        .collect();
    let mut lits: Vec<Vec<Lit>> = Vec::with_capacity(c.nodes.len());
    for node in &c.nodes {
        let row: Vec<Lit> = match *node {
            Node::Letter(l) => letters[l].clone(),
            Node::Top => vec![truth; n],
            Node::Bot => vec![!truth; n],
            Node::Not(a) => lits[a].iter().map(|&x| !x).collect(),
            Node::And(a, b) => gate(&mut solver, &lits[a], &lits[b], Gate::And),
            Node::Or(a, b) => gate(&mut solver, &lits[a], &lits[b], Gate::Or),
            Node::Imp(a, b) => {
                let na: Vec<Lit> = lits[a].iter().map(|&x| !x).collect();
                gate(&mut solver, &na, &lits[b], Gate::Or)
            }
            Node::Iff(a, b) => gate(&mut solver, &lits[a], &lits[b], Gate::Iff),
            Node::Box(d, a) => modal(&mut solver, adj, d, &lits[a], true),
            Node::Dia(d, a) => modal(&mut solver, adj, d, &lits[a], false),
        };
        lits.push(row);
    }
    solver.add_clause(&[!lits[c.root()][root]]);
    if !solver.solve().expect("solver without proof output cannot fail") {
        return None;
    }
    let model = solver.model().expect("satisfiable instance has a model");
    let mut value = vec![false; solver_var_count(&model)];
    for lit in &model {
        value[lit.var().index()] = lit.is_positive();
    }
    Some(
        letters
            .iter()
            .map(|row| row.iter().map(|&l| value[l.var().index()] == l.is_positive()).collect())
            .collect(),
    )
}

fn solver_var_count(model: &[Lit]) -> usize {
    model.iter().map(|l| l.var().index() + 1).max().unwrap_or(0)
}

enum Gate {
    And,
    Or,
    Iff,
}

fn gate(solver: &mut Solver, a: &[Lit], b: &[Lit], g: Gate) -> Vec<Lit> {
    a.iter()
        .zip(b)
        .map(|(&x, &z)| {
            let y = solver.new_lit();
            match g {
                Gate::And => {
                    solver.add_clause(&[!y, x]);
                    solver.add_clause(&[!y, z]);
                    solver.add_clause(&[y, !x, !z]);
                }
                Gate::Or => {
                    solver.add_clause(&[y, !x]);
                    solver.add_clause(&[y, !z]);
                    solver.add_clause(&[!y, x, z]);
                }
                Gate::Iff => {
                    solver.add_clause(&[!y, !x, z]);
                    solver.add_clause(&[!y, x, !z]);
                    solver.add_clause(&[y, x, z]);
                    solver.add_clause(&[y, !x, !z]);
                }
            }
            y
        })
        .collect()
}

/// `y_w ↔ ⋀ a_v` over successors for boxes, `y_w ↔ ⋁ a_v` for diamonds.
fn modal(solver: &mut Solver, adj: &Adjacency, d: Direction, a: &[Lit], is_box: bool) -> Vec<Lit> {
    let n = adj.up.len();
    (0..n)
        .map(|w| {
            let y = solver.new_lit();
            // work with the box form; a diamond is the dual of a box over negations
            let (out, sign) = if is_box { (y, true) } else { (!y, false) };
            let mut big = vec![out];
            for &v in adj.succ(d, w) {
                let av = if sign { a[v] } else { !a[v] };
                solver.add_clause(&[!out, av]);
                big.push(!av);
            }
            solver.add_clause(&big);
            y
        })
        .collect()
}
