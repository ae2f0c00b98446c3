use super::{Direction, Formula};
use std::collections::BTreeSet;
use std::fmt;

/// Parse failure: byte offset of the offending token and the tokens that would
/// have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: BTreeSet<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exp: Vec<&str> = self.expected.iter().copied().collect();
        write!(
            f,
            "syntax error at byte {}: expected one of {}, found {}",
            self.offset,
            exp.join(" "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Not,
    Box(Direction),
    Dia(Direction),
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    True,
    False,
    Ident(String),
    Invalid(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("letter {s:?}"),
            Tok::Invalid(s) => format!("{s:?}"),
            Tok::End => "end of input".to_string(),
            other => format!("{:?}", token_text(other)),
        }
    }
}

fn token_text(t: &Tok) -> &'static str {
    match t {
        Tok::Not => "~",
        Tok::Box(Direction::Up) => "[u]",
        Tok::Box(Direction::Down) => "[d]",
        Tok::Dia(Direction::Up) => "<u>",
        Tok::Dia(Direction::Down) => "<d>",
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Imp => "->",
        Tok::Iff => "<->",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::True => "true",
        Tok::False => "false",
        Tok::Ident(_) => "letter",
        Tok::Invalid(_) => "?",
        Tok::End => "end of input",
    }
}

const FIXED: [(&str, Tok); 13] = [
    ("<->", Tok::Iff),
    ("<u>", Tok::Dia(Direction::Up)),
    ("<d>", Tok::Dia(Direction::Down)),
    ("<>", Tok::Dia(Direction::Up)),
    ("[u]", Tok::Box(Direction::Up)),
    ("[d]", Tok::Box(Direction::Down)),
    ("[]", Tok::Box(Direction::Up)),
    ("->", Tok::Imp),
    ("~", Tok::Not),
    ("&", Tok::And),
    ("|", Tok::Or),
    ("(", Tok::LParen),
    (")", Tok::RParen),
];

fn lex(text: &str) -> Vec<(usize, Tok)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((start, tok));
            continue;
        }
        match FIXED.iter().find(|(s, _)| text[i..].starts_with(s)) {
            Some((s, tok)) => {
                out.push((i, tok.clone()));
                i += s.len();
            }
            None => {
                let ch = text[i..].chars().next().unwrap_or('?');
                out.push((i, Tok::Invalid(ch.to_string())));
                return out;
            }
        }
    }
    out.push((text.len(), Tok::End));
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    expected: BTreeSet<&'static str>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    /// Consumes the next token if `pred` accepts it; records `names` as expected otherwise.
    fn eat(&mut self, names: &[&'static str], pred: impl Fn(&Tok) -> bool) -> Option<Tok> {
        if pred(self.peek()) {
            let t = self.toks[self.pos].1.clone();
            self.pos += 1;
            self.expected.clear();
            Some(t)
        } else {
            self.expected.extend(names.iter().copied());
            None
        }
    }

    fn error(&self) -> SyntaxError {
        let (offset, tok) = &self.toks[self.pos];
        SyntaxError {
            offset: *offset,
            expected: self.expected.clone(),
            found: tok.describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.eat(&["<->"], |t| *t == Tok::Iff).is_some() {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat(&["->"], |t| *t == Tok::Imp).is_some() {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat(&["|"], |t| *t == Tok::Or).is_some() {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat(&["&"], |t| *t == Tok::And).is_some() {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let prefix = ["~", "[u]", "<u>", "[d]", "<d>", "[]", "<>"];
        match self.eat(&prefix, |t| matches!(t, Tok::Not | Tok::Box(_) | Tok::Dia(_))) {
            Some(Tok::Not) => Ok(Formula::not(self.unary()?)),
            Some(Tok::Box(d)) => Ok(Formula::boxed(d, self.unary()?)),
            Some(Tok::Dia(d)) => Ok(Formula::dia(d, self.unary()?)),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let names = ["true", "false", "letter", "("];
        match self.eat(&names, |t| {
            matches!(t, Tok::True | Tok::False | Tok::Ident(_) | Tok::LParen)
        }) {
            Some(Tok::True) => Ok(Formula::Top),
            Some(Tok::False) => Ok(Formula::Bot),
            Some(Tok::Ident(name)) => Ok(Formula::Atom(name)),
            Some(_) => {
                let inner = self.iff()?;
                match self.eat(&[")"], |t| *t == Tok::RParen) {
                    Some(_) => Ok(inner),
                    None => Err(self.error()),
                }
            }
            None => Err(self.error()),
        }
    }
}

/// Parses a formula in the ASCII grammar:
///
/// ```text
/// formula := iff
/// iff     := imp ("<->" imp)*          left-associative
/// imp     := or ("->" imp)?            right-associative
/// or      := and ("|" and)*
/// and     := unary ("&" unary)*
/// unary   := ("~" | "[u]" | "<u>" | "[d]" | "<d>" | "[]" | "<>") unary | atom
/// atom    := "true" | "false" | letter | "(" formula ")"
/// ```
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
        expected: BTreeSet::new(),
    };
    let f = p.iff()?;
    if p.eat(&["end of input"], |t| *t == Tok::End).is_none() {
        return Err(p.error());
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Direction::{Down, Up};

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn atomic() {
        assert_eq!(parse("p0").unwrap(), Formula::atom("p0"));
        assert_eq!(parse(" true ").unwrap(), Formula::Top);
        assert_eq!(parse("false").unwrap(), Formula::Bot);
    }

    #[test]
    fn dot_two_shape() {
        let expected = Formula::imp(
            Formula::dia(Up, Formula::boxed(Up, p())),
            Formula::boxed(Up, Formula::dia(Up, p())),
        );
        assert_eq!(parse("<u>[u]p -> [u]<u>p").unwrap(), expected);
        assert_eq!(parse("<>[]p->[]<>p").unwrap(), expected);
    }

    #[test]
    fn biconditional_with_down_box() {
        assert_eq!(
            parse("[d]p <-> p").unwrap(),
            Formula::iff(Formula::boxed(Down, p()), p())
        );
    }

    #[test]
    fn associativity_and_precedence() {
        let (a, b, c) = (Formula::atom("a"), Formula::atom("b"), Formula::atom("c"));
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("a <-> b <-> c").unwrap(),
            Formula::iff(Formula::iff(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            parse("a | b & c").unwrap(),
            Formula::or(a.clone(), Formula::and(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("~a & b").unwrap(),
            Formula::and(Formula::not(a.clone()), b.clone())
        );
        assert_eq!(
            parse("a & b -> c | a <-> b").unwrap(),
            Formula::iff(
                Formula::imp(Formula::and(a.clone(), b.clone()), Formula::or(c, a)),
                b
            )
        );
    }

    #[test]
    fn errors_carry_offset_and_expectations() {
        let e = parse("p &").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(e.expected.contains("letter"));
        assert!(e.expected.contains("("));

        let e = parse("(p").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.expected.contains(")"));
        assert!(e.expected.contains("&"));

        let e = parse("p q").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.expected.contains("end of input"));
        assert!(e.expected.contains("->"));

        let e = parse("p # q").unwrap_err();
        assert_eq!(e.offset, 2);

        assert!(parse("").is_err());
        assert!(parse("P").is_err());
        assert!(parse("[x]p").is_err());
    }
}
