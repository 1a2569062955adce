//! Text syntax for elements and operations.
//!
//! Elements: `term (('+' | '-') term)*`, where a term is an optional
//! `c*` coefficient followed by `(e1,...,ed)` or a product of factors
//! `x<i>^<e>` (juxtaposed or `*`-separated), and an optional `@<summand>`
//! (1-based). A bare integer is a multiple of the unit; `0` is zero.
//!
//! Operations: sums (`+`) of compositions of atoms `Sq^n`, `Q[t]`, `Q[t;s]`,
//! `Sq0^s`, `P^n`, `beta`, `P0^s`. Juxtaposed atoms compose right to left.

use std::fmt;

use crate::bv::{apply_sq, qts_apply, sq0_power, BasicMonomial, PolyElement};
use crate::error::{Error, Result};
use crate::odd::{apply_beta, apply_p, is_prime, p0_power, qts_apply_odd, OddElement};

/// An element of `H*(BV_d)^{⊕α}` at the prime 2 or at an odd prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Mod2(PolyElement),
    Odd(OddElement),
}

impl Element {
    pub fn prime(&self) -> u32 {
        match self {
            Element::Mod2(_) => 2,
            Element::Odd(x) => x.prime(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Element::Mod2(x) => x.d(),
            Element::Odd(x) => x.d(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self {
            Element::Mod2(x) => x.degree(),
            Element::Odd(x) => x.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Mod2(x) => x.is_zero(),
            Element::Odd(x) => x.is_zero(),
        }
    }

    /// Largest summand index (0-based) used by any monomial.
    pub fn max_summand(&self) -> Option<u32> {
        match self {
            Element::Mod2(x) => x.monomials().map(|m| m.summand).max(),
            Element::Odd(x) => x.terms().map(|(m, _)| m.summand).max(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Mod2(x) => x.fmt(f),
            Element::Odd(x) => x.fmt(f),
        }
    }
}

/// Prime, rank and number of summands an element is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Context {
    pub prime: u32,
    pub d: usize,
    pub alpha: u32,
}

impl Context {
    pub fn new(prime: u32, d: usize, alpha: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not a prime")));
        }
        if d == 0 {
            return Err(Error::Precondition("rank d must be at least 1".into()));
        }
        if alpha == 0 {
            return Err(Error::Precondition("number of summands must be at least 1".into()));
        }
        Ok(Context { prime, d, alpha })
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.column(), message: message.into() })
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.error("expected a number");
        }
        let s = &self.rest()[..digits];
        match s.parse::<u32>() {
            Ok(n) => {
                self.pos += digits;
                Ok(n)
            }
            Err(_) => self.error(format!("number `{s}` is too large")),
        }
    }
}

struct Term {
    coeff: u32,
    negative: bool,
    monomial: BasicMonomial,
    column: usize,
}

fn parse_term(c: &mut Cursor<'_>, ctx: &Context, negative: bool) -> Result<Term> {
    c.skip_ws();
    let column = c.column();
    let mut coeff = 1u32;
    let mut exponents = vec![0u32; ctx.d];
    let mut have_monomial = false;
    if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
        coeff = c.number()?;
        if !c.eat("*") {
            // a bare integer: multiple of the unit
            return finish_term(c, ctx, coeff, negative, exponents, column);
        }
    }
    match c.peek() {
        Some('(') => {
            c.expect("(")?;
            let mut v = vec![c.number()?];
            while c.eat(",") {
                v.push(c.number()?);
            }
            c.expect(")")?;
            if v.len() != ctx.d {
                return Err(Error::DimensionMismatch { expected: ctx.d, found: v.len() });
            }
            exponents = v;
            have_monomial = true;
        }
        Some('x') => {
            while c.peek() == Some('x') {
                c.expect("x")?;
                let at = c.column();
                let i = c.number()?;
                if i == 0 || i as usize > ctx.d {
                    return Err(Error::Syntax {
                        column: at,
                        message: format!("variable x{i} outside x1..x{}", ctx.d),
                    });
                }
                let e = if c.eat("^") { c.number()? } else { 1 };
                exponents[i as usize - 1] += e;
                have_monomial = true;
                let save = c.pos;
                if !c.eat("*") || c.peek() != Some('x') {
                    c.pos = save;
                }
            }
        }
        _ => {}
    }
    if !have_monomial {
        return c.error("expected `(` or a variable `x<i>`");
    }
    finish_term(c, ctx, coeff, negative, exponents, column)
}

fn finish_term(
    c: &mut Cursor<'_>,
    ctx: &Context,
    coeff: u32,
    negative: bool,
    exponents: Vec<u32>,
    column: usize,
) -> Result<Term> {
    let mut summand = 0;
    if c.eat("@") {
        let at = c.column();
        let k = c.number()?;
        if k == 0 || k > ctx.alpha {
            return Err(Error::Syntax { column: at, message: format!("summand {k} outside 1..{}", ctx.alpha) });
        }
        summand = k - 1;
    }
    Ok(Term { coeff, negative, monomial: BasicMonomial::in_summand(summand, exponents), column })
}

/// Parses an element; errors carry the 1-based column.
pub fn parse_element(text: &str, ctx: &Context) -> Result<Element> {
    let mut c = Cursor::new(text);
    let mut terms = Vec::new();
    let mut negative = c.eat("-");
    loop {
        terms.push(parse_term(&mut c, ctx, negative)?);
        if c.eat("+") {
            negative = false;
        } else if c.eat("-") {
            negative = true;
        } else {
            break;
        }
    }
    if !c.at_end() {
        return c.error("unexpected input");
    }
    let p = ctx.prime;
    let check_degree = |deg: Option<u32>, t: &Term| -> Result<()> {
        match deg {
            Some(deg) if deg != t.monomial.degree() => Err(Error::Syntax {
                column: t.column,
                message: format!("term of degree {} in an element of degree {deg}", t.monomial.degree()),
            }),
            _ => Ok(()),
        }
    };
    if p == 2 {
        let mut x = PolyElement::zero(ctx.d);
        let mut deg = None;
        for t in terms {
            check_degree(deg, &t)?;
            deg = Some(t.monomial.degree());
            if t.coeff % 2 == 1 {
                x.toggle(t.monomial)?;
            }
        }
        Ok(Element::Mod2(x))
    } else {
        let mut x = OddElement::zero(p, ctx.d);
        let mut deg = None;
        for t in terms {
            check_degree(deg, &t)?;
            deg = Some(t.monomial.degree());
            let c = t.coeff % p;
            let c = if t.negative { (p - c) % p } else { c };
            x.add_term(t.monomial, c)?;
        }
        Ok(Element::Odd(x))
    }
}

/// A single operation symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpAtom {
    Sq(u32),
    /// `Q[t]` when `s` is `None`, else `Q[t;s]`.
    Q { t: u32, s: Option<u32> },
    Sq0(u32),
    P(u32),
    Beta,
    P0(u32),
}

impl OpAtom {
    fn allowed_at(&self, prime: u32) -> bool {
        match self {
            OpAtom::Sq(_) | OpAtom::Sq0(_) => prime == 2,
            OpAtom::P(_) | OpAtom::Beta | OpAtom::P0(_) => prime != 2,
            OpAtom::Q { .. } => true,
        }
    }

    fn apply(&self, x: &Element) -> Element {
        match (self, x) {
            (OpAtom::Sq(n), Element::Mod2(x)) => Element::Mod2(apply_sq(*n, x)),
            (OpAtom::Sq0(s), Element::Mod2(x)) => Element::Mod2(sq0_power(x, *s)),
            (OpAtom::Q { t, s }, Element::Mod2(x)) => Element::Mod2(qts_apply(*t, s.unwrap_or(0), x)),
            (OpAtom::P(n), Element::Odd(x)) => Element::Odd(apply_p(*n, x)),
            (OpAtom::Beta, Element::Odd(x)) => Element::Odd(apply_beta(x)),
            (OpAtom::P0(s), Element::Odd(x)) => Element::Odd(p0_power(x, *s)),
            (OpAtom::Q { t, s }, Element::Odd(x)) => Element::Odd(qts_apply_odd(*t, s.unwrap_or(0), x)),
            _ => unreachable!("prime compatibility is checked before evaluation"),
        }
    }
}

impl fmt::Display for OpAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpAtom::Sq(n) => write!(f, "Sq^{n}"),
            OpAtom::Q { t, s: None } => write!(f, "Q[{t}]"),
            OpAtom::Q { t, s: Some(s) } => write!(f, "Q[{t};{s}]"),
            OpAtom::Sq0(s) => write!(f, "Sq0^{s}"),
            OpAtom::P(n) => write!(f, "P^{n}"),
            OpAtom::Beta => write!(f, "beta"),
            OpAtom::P0(s) => write!(f, "P0^{s}"),
        }
    }
}

/// A sum of compositions; the empty composition is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationExpr {
    pub terms: Vec<Vec<OpAtom>>,
}

impl OperationExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let mut terms = Vec::new();
        if c.eat("0") {
            if !c.at_end() {
                return c.error("unexpected input after `0`");
            }
            return Ok(OperationExpr { terms });
        }
        loop {
            terms.push(parse_composition(&mut c)?);
            if !c.eat("+") {
                break;
            }
        }
        if !c.at_end() {
            return c.error("unexpected input");
        }
        Ok(OperationExpr { terms })
    }

    pub fn check_prime(&self, prime: u32) -> Result<()> {
        for atom in self.terms.iter().flatten() {
            if !atom.allowed_at(prime) {
                let hint = if prime == 2 { "P, beta and P0 need an odd prime" } else { "Sq and Sq0 need the prime 2" };
                return Err(Error::Precondition(format!("`{atom}` is not available at p = {prime}: {hint}")));
            }
        }
        Ok(())
    }

    /// Applies the operation; the rightmost atom of each composition acts first.
    pub fn evaluate(&self, x: &Element) -> Result<Element> {
        self.check_prime(x.prime())?;
        let mut total: Option<Element> = None;
        for term in &self.terms {
            let y = term.iter().rev().fold(x.clone(), |acc, a| a.apply(&acc));
            total = Some(match total {
                None => y,
                Some(acc) => add_elements(&acc, &y)?,
            });
        }
        Ok(total.unwrap_or_else(|| match x {
            Element::Mod2(x) => Element::Mod2(PolyElement::zero(x.d())),
            Element::Odd(x) => Element::Odd(OddElement::zero(x.prime(), x.d())),
        }))
    }
}

fn add_elements(a: &Element, b: &Element) -> Result<Element> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    match (a, b) {
        (Element::Mod2(a), Element::Mod2(b)) => Ok(Element::Mod2(a.add(b)?)),
        (Element::Odd(a), Element::Odd(b)) => Ok(Element::Odd(a.add(b)?)),
        _ => Err(Error::Precondition("adding elements at different primes".into())),
    }
}

fn parse_composition(c: &mut Cursor<'_>) -> Result<Vec<OpAtom>> {
    let mut atoms = Vec::new();
    if c.eat("1") {
        return Ok(atoms);
    }
    loop {
        match c.peek() {
            Some('S' | 'Q' | 'P' | 'b') => atoms.push(parse_atom(c)?),
            _ => break,
        }
    }
    if atoms.is_empty() {
        return c.error("expected an operation (Sq^n, Q[t], Q[t;s], Sq0^s, P^n, beta, P0^s)");
    }
    Ok(atoms)
}

fn parse_atom(c: &mut Cursor<'_>) -> Result<OpAtom> {
    if c.eat("Sq0^") {
        Ok(OpAtom::Sq0(c.number()?))
    } else if c.eat("Sq^") {
        Ok(OpAtom::Sq(c.number()?))
    } else if c.eat("P0^") {
        Ok(OpAtom::P0(c.number()?))
    } else if c.eat("P^") {
        Ok(OpAtom::P(c.number()?))
    } else if c.eat("beta") {
        Ok(OpAtom::Beta)
    } else if c.eat("Q[") {
        let t = c.number()?;
        let s = if c.eat(";") { Some(c.number()?) } else { None };
        c.expect("]")?;
        Ok(OpAtom::Q { t, s })
    } else {
        c.error("unknown operation")
    }
}

impl fmt::Display for OperationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if term.is_empty() {
                write!(f, "1")?;
            }
            for (j, a) in term.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, d: usize) -> Context {
        Context::new(p, d, 2).unwrap()
    }

    #[test]
    fn element_examples() {
        let x = parse_element("(1,2)+(2,1)", &ctx(2, 2)).unwrap();
        assert_eq!(x.to_string(), "(1,2) + (2,1)");
        assert_eq!(parse_element("x1^3 x2", &ctx(2, 2)).unwrap().to_string(), "(3,1)");
        assert_eq!(parse_element("x1^3*x2", &ctx(2, 2)).unwrap().to_string(), "(3,1)");
        assert_eq!(parse_element("x2 x1^3", &ctx(2, 2)).unwrap().to_string(), "(3,1)");
        assert_eq!(parse_element("2*(1,0)", &ctx(3, 2)).unwrap().to_string(), "2*(1,0)");
        assert_eq!(parse_element("(1,0) - (0,1)", &ctx(3, 2)).unwrap().to_string(), "2*(0,1) + (1,0)");
        assert_eq!(parse_element("(1,1)@2", &ctx(2, 2)).unwrap().to_string(), "(1,1)@2");
        assert!(parse_element("0", &ctx(2, 2)).unwrap().is_zero());
        assert!(parse_element("(1,1) + (1,1)", &ctx(2, 2)).unwrap().is_zero());
        assert_eq!(parse_element("1", &ctx(2, 2)).unwrap().to_string(), "(0,0)");
    }

    #[test]
    fn element_errors() {
        assert!(matches!(parse_element("(1,2,3)", &ctx(2, 2)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_element("(1,2", &ctx(2, 2)), Err(Error::Syntax { column: 5, .. })));
        assert!(matches!(parse_element("(1,2) + (1,1)", &ctx(2, 2)), Err(Error::Syntax { column: 9, .. })));
        assert!(matches!(parse_element("x3", &ctx(2, 2)), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_element("(1,1)@3", &ctx(2, 2)), Err(Error::Syntax { .. })));
        assert!(matches!(parse_element("(1,1) junk", &ctx(2, 2)), Err(Error::Syntax { column: 7, .. })));
        assert!(matches!(parse_element("", &ctx(2, 2)), Err(Error::Syntax { column: 1, .. })));
    }

    #[test]
    fn operations_round_trip() {
        for text in ["Sq^2", "Sq^2 Sq^1 + Sq^3", "Q[1] Q[2;3]", "Sq0^2", "P^1 beta + beta P^1", "P0^1", "0", "1 + Sq^1"] {
            let e = OperationExpr::parse(text).unwrap();
            assert_eq!(e.to_string(), text);
            assert_eq!(OperationExpr::parse(&e.to_string()).unwrap(), e);
        }
        assert!(OperationExpr::parse("Sq^").is_err());
        assert!(OperationExpr::parse("Sq^2 +").is_err());
        assert!(OperationExpr::parse("Q[1").is_err());
    }

    #[test]
    fn evaluation() {
        let x = parse_element("(1,1)", &ctx(2, 2)).unwrap();
        let op = OperationExpr::parse("Sq^2").unwrap();
        assert_eq!(op.evaluate(&x).unwrap().to_string(), "(2,2)");
        // Sq^1 Sq^1 = 0
        let op = OperationExpr::parse("Sq^1 Sq^1").unwrap();
        assert!(op.evaluate(&x).unwrap().is_zero());
        // right-to-left: Sq^2 Sq^1 u = Sq^2 u^2 = u^4, Sq^1 Sq^2 u = 0
        let u = parse_element("(1)", &ctx(2, 1)).unwrap();
        assert_eq!(OperationExpr::parse("Sq^2 Sq^1").unwrap().evaluate(&u).unwrap().to_string(), "(4)");
        assert!(OperationExpr::parse("Sq^1 Sq^2").unwrap().evaluate(&u).unwrap().is_zero());
        assert!(OperationExpr::parse("beta").unwrap().evaluate(&u).is_err());
        let t = parse_element("(1)", &ctx(3, 1)).unwrap();
        assert_eq!(OperationExpr::parse("P^1 beta").unwrap().evaluate(&t).unwrap().to_string(), "(6)");
        assert_eq!(OperationExpr::parse("Q[1]").unwrap().evaluate(&t).unwrap().to_string(), "(6)");
        assert!(OperationExpr::parse("Sq^1").unwrap().evaluate(&t).is_err());
    }
}
