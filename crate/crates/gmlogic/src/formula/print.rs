use super::{Direction, Formula};

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

pub(super) fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Not(a) => prefix("~", a, out),
        Formula::Box(Direction::Up, a) => prefix("[u]", a, out),
        Formula::Box(Direction::Down, a) => prefix("[d]", a, out),
        Formula::Dia(Direction::Up, a) => prefix("<u>", a, out),
        Formula::Dia(Direction::Down, a) => prefix("<d>", a, out),
        Formula::And(a, b) => infix(a, " & ", b, AND, false, out),
        Formula::Or(a, b) => infix(a, " | ", b, OR, false, out),
        Formula::Imp(a, b) => infix(a, " -> ", b, IMP, true, out),
        Formula::Iff(a, b) => infix(a, " <-> ", b, IFF, false, out),
    }
}

fn prefix(op: &str, a: &Formula, out: &mut String) {
    out.push_str(op);
    wrapped(a, prec(a) < UNARY, out);
}

fn infix(a: &Formula, op: &str, b: &Formula, level: u8, right_assoc: bool, out: &mut String) {
    let (pa, pb) = (prec(a), prec(b));
    wrapped(a, pa < level || (pa == level && right_assoc), out);
    out.push_str(op);
    wrapped(b, pb < level || (pb == level && !right_assoc), out);
}

fn wrapped(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use Direction::Up;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn minimal_parentheses() {
        let q = Formula::atom("q");
        assert_eq!(print(&Formula::atom("p0")), "p0");
        assert_eq!(print(&Formula::not(Formula::and(p(), q.clone()))), "~(p & q)");
        let dot2 = Formula::imp(
            Formula::dia(Up, Formula::boxed(Up, p())),
            Formula::boxed(Up, Formula::dia(Up, p())),
        );
        assert_eq!(print(&dot2), "<u>[u]p -> [u]<u>p");
        let left_nested = Formula::imp(Formula::imp(p(), q.clone()), p());
        assert_eq!(print(&left_nested), "(p -> q) -> p");
        let right_and = Formula::and(p(), Formula::and(q.clone(), p()));
        assert_eq!(print(&right_and), "p & (q & p)");
        assert_eq!(print(&Formula::boxed(Direction::Down, Formula::Bot)), "[d]false");
    }

    #[test]
    fn printed_text_reparses_to_same_tree() {
        let q = Formula::atom("q");
        let samples = [
            Formula::iff(p(), Formula::iff(q.clone(), p())),
            Formula::iff(Formula::iff(q.clone(), p()), p()),
            Formula::or(Formula::imp(p(), q.clone()), Formula::and(q.clone(), p())),
            Formula::not(Formula::not(Formula::dia(Up, Formula::Top))),
            Formula::and(Formula::or(p(), q.clone()), Formula::iff(p(), q.clone())),
        ];
        for f in samples {
            assert_eq!(parse(&print(&f)).unwrap(), f, "{}", print(&f));
        }
    }
}
