//! Formulas of multiplicative polarized linear logic.
//!
//! Positive: `X | P ⊗ P | 1 | ↓N`. Negative: `X⊥ | N ⅋ N | ⊥ | ↑P`.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    NegAtom(String),
    One,
    Bot,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    Down(Box<Formula>),
    Up(Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polarity error at byte {pos}: {msg}")]
    Polarity { pos: usize, msg: String },
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(name.to_string())
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn down(a: Formula) -> Formula {
        Formula::Down(Box::new(a))
    }

    pub fn up(a: Formula) -> Formula {
        Formula::Up(Box::new(a))
    }

    /// Polarity of the outermost connective.
    pub fn polarity(&self) -> Polarity {
        match self {
            Formula::Atom(_) | Formula::One | Formula::Tensor(..) | Formula::Down(_) => {
                Polarity::Positive
            }
            Formula::NegAtom(_) | Formula::Bot | Formula::Par(..) | Formula::Up(_) => {
                Polarity::Negative
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.polarity() == Polarity::Negative
    }

    /// De Morgan dual, non-reversing: `(A ⊗ B)⊥ = A⊥ ⅋ B⊥`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(x) => Formula::NegAtom(x.clone()),
            Formula::NegAtom(x) => Formula::Atom(x.clone()),
            Formula::One => Formula::Bot,
            Formula::Bot => Formula::One,
            Formula::Tensor(a, b) => Formula::par(a.negate(), b.negate()),
            Formula::Par(a, b) => Formula::tensor(a.negate(), b.negate()),
            Formula::Down(a) => Formula::up(a.negate()),
            Formula::Up(a) => Formula::down(a.negate()),
        }
    }

    /// Checks the polarity constraints on immediate subformulas, recursively.
    pub fn well_formed(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::One | Formula::Bot => true,
            Formula::Tensor(a, b) => {
                a.is_positive() && b.is_positive() && a.well_formed() && b.well_formed()
            }
            Formula::Par(a, b) => {
                a.is_negative() && b.is_negative() && a.well_formed() && b.well_formed()
            }
            Formula::Down(a) => a.is_negative() && a.well_formed(),
            Formula::Up(a) => a.is_positive() && a.well_formed(),
        }
    }

    pub fn contains_shift(&self) -> bool {
        match self {
            Formula::Down(_) | Formula::Up(_) => true,
            Formula::Tensor(a, b) | Formula::Par(a, b) => a.contains_shift() || b.contains_shift(),
            _ => false,
        }
    }

    pub fn contains_unit(&self) -> bool {
        match self {
            Formula::One | Formula::Bot => true,
            Formula::Tensor(a, b) | Formula::Par(a, b) => a.contains_unit() || b.contains_unit(),
            Formula::Down(a) | Formula::Up(a) => a.contains_unit(),
            _ => false,
        }
    }

    /// Number of connectives (atoms and units count zero).
    pub fn size(&self) -> usize {
        match self {
            Formula::Tensor(a, b) | Formula::Par(a, b) => 1 + a.size() + b.size(),
            Formula::Down(a) | Formula::Up(a) => 1 + a.size(),
            _ => 0,
        }
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        let mut p = Parser::new(text);
        let f = p.formula()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.syntax("trailing input"));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(x) => write!(f, "{x}"),
            Formula::NegAtom(x) => write!(f, "{x}^"),
            Formula::One => write!(f, "one"),
            Formula::Bot => write!(f, "bot"),
            Formula::Tensor(a, b) => write!(f, "({a} * {b})"),
            Formula::Par(a, b) => write!(f, "({a} | {b})"),
            Formula::Down(a) => write!(f, "dn {a}"),
            Formula::Up(a) => write!(f, "up {a}"),
        }
    }
}

/// Unicode rendering for human-facing reports.
pub struct Pretty<'a>(pub &'a Formula);

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(a: &Formula, top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match a {
                Formula::Atom(x) => write!(f, "{x}"),
                Formula::NegAtom(x) => write!(f, "{x}⊥"),
                Formula::One => write!(f, "1"),
                Formula::Bot => write!(f, "⊥"),
                Formula::Tensor(l, r) | Formula::Par(l, r) => {
                    let op = if matches!(a, Formula::Tensor(..)) { "⊗" } else { "⅋" };
                    if !top {
                        write!(f, "(")?;
                    }
                    go(l, false, f)?;
                    write!(f, " {op} ")?;
                    go(r, false, f)?;
                    if !top {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Formula::Down(b) => {
                    write!(f, "↓")?;
                    go(b, false, f)
                }
                Formula::Up(b) => {
                    write!(f, "↑")?;
                    go(b, false, f)
                }
            }
        }
        go(self.0, true, f)
    }
}

pub(crate) struct Parser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn syntax(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<(), FormulaError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos || !self.src[start].is_ascii_alphabetic() && self.src[start] != b'_' {
            self.pos = start;
            return Err(self.syntax("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let a_pos = self.pos;
                let a = self.formula()?;
                let op = self.peek();
                if op == Some(b')') {
                    // Plain grouping.
                    self.pos += 1;
                    return Ok(a);
                }
                let op_pos = self.pos;
                match op {
                    Some(b'*') | Some(b'|') => self.pos += 1,
                    _ => return Err(self.syntax("expected '*' or '|'")),
                }
                let b_pos = self.pos;
                let b = self.formula()?;
                self.expect(b')')?;
                let want = if op == Some(b'*') { Polarity::Positive } else { Polarity::Negative };
                for (sub, at) in [(&a, a_pos), (&b, b_pos)] {
                    if sub.polarity() != want {
                        let (conn, need) = if want == Polarity::Positive {
                            ("tensor", "positive")
                        } else {
                            ("par", "negative")
                        };
                        return Err(FormulaError::Polarity {
                            pos: at,
                            msg: format!("{conn} at byte {op_pos} needs {need} operands, got {sub}"),
                        });
                    }
                }
                Ok(if want == Polarity::Positive {
                    Formula::tensor(a, b)
                } else {
                    Formula::par(a, b)
                })
            }
            Some(_) => {
                let start = self.pos;
                let name = self.ident()?;
                match name.as_str() {
                    "one" => Ok(Formula::One),
                    "bot" => Ok(Formula::Bot),
                    "dn" | "up" => {
                        let body_pos = {
                            self.skip_ws();
                            self.pos
                        };
                        let body = self.formula()?;
                        if name == "dn" {
                            if !body.is_negative() {
                                return Err(FormulaError::Polarity {
                                    pos: body_pos,
                                    msg: format!("dn at byte {start} needs a negative body, got {body}"),
                                });
                            }
                            Ok(Formula::down(body))
                        } else {
                            if !body.is_positive() {
                                return Err(FormulaError::Polarity {
                                    pos: body_pos,
                                    msg: format!("up at byte {start} needs a positive body, got {body}"),
                                });
                            }
                            Ok(Formula::up(body))
                        }
                    }
                    _ => {
                        if self.peek() == Some(b'^') {
                            self.pos += 1;
                            Ok(Formula::NegAtom(name))
                        } else {
                            Ok(Formula::Atom(name))
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(Formula::parse("X").unwrap(), Formula::atom("X"));
        assert_eq!(Formula::parse("dn (X^)").unwrap(), Formula::down(Formula::neg_atom("X")));
        assert_eq!(
            Formula::parse("dn (up (X * Y))").unwrap(),
            Formula::down(Formula::up(Formula::tensor(Formula::atom("X"), Formula::atom("Y"))))
        );
        assert_eq!(Formula::parse("dn X^").unwrap(), Formula::down(Formula::neg_atom("X")));
    }

    #[test]
    fn polarity_errors_are_typed() {
        assert!(matches!(Formula::parse("dn X"), Err(FormulaError::Polarity { .. })));
        assert!(matches!(Formula::parse("up X^"), Err(FormulaError::Polarity { .. })));
        assert!(matches!(Formula::parse("(X | Y)"), Err(FormulaError::Polarity { .. })));
        assert!(matches!(Formula::parse("(X^ * Y)"), Err(FormulaError::Polarity { .. })));
        assert!(matches!(Formula::parse("(X * Y"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(Formula::parse("X Y"), Err(FormulaError::Syntax { .. })));
    }

    #[test]
    fn polarity_table() {
        assert_eq!(Formula::atom("X").polarity(), Polarity::Positive);
        assert_eq!(Formula::down(Formula::neg_atom("X")).polarity(), Polarity::Positive);
        let p = Formula::par(Formula::neg_atom("X"), Formula::neg_atom("Y"));
        assert_eq!(p.polarity(), Polarity::Negative);
    }

    #[test]
    fn negation_is_non_reversing() {
        let f = Formula::parse("dn (X^ | Y^)").unwrap();
        assert_eq!(f.negate(), Formula::parse("up (X * Y)").unwrap());
        assert_eq!(f.negate().negate(), f);
    }

    #[test]
    fn units_parse() {
        assert_eq!(Formula::parse("(one * X)").unwrap(), Formula::tensor(Formula::One, Formula::atom("X")));
        assert!(Formula::parse("up one").unwrap().contains_unit());
    }
}
