//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a list of monomials `ω^e·c` with strictly decreasing
//! exponents and coefficients at least 1; the empty list is 0. Exponents are
//! themselves ordinals, so every value below ε₀ is representable.
//!
//! The textual grammar is
//!
//! ```text
//! expr := "0" | mono ("+" mono)*
//! mono := "w" ("^" atom)? ("*" nat)? | nat
//! atom := nat | "w" | "(" expr ")"
//! ```
//!
//! with whitespace ignored. [`Ordinal::to_string`] emits the canonical
//! spacing, e.g. `w^2*3 + w + 5`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Cantor-normal-form ordinal below ε₀.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// One monomial `ω^exponent · coefficient`.
///
/// Field order is load-bearing: the derived `Ord` on `Vec<Term>` is the CNF order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

/// Zero, successor or limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        Self::monomial(Ordinal::zero(), n)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Self::monomial(exponent, 1)
    }

    /// `ω^exponent · coefficient`; zero when the coefficient is zero.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, which must
    /// already be in Cantor normal form.
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, u64)>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for (i, (exponent, coefficient)) in terms.into_iter().enumerate() {
            if coefficient == 0 {
                return Err(Error::NonCanonical {
                    position: i,
                    message: "zero coefficient".into(),
                });
            }
            if let Some(last) = out.last() {
                if exponent >= last.exponent {
                    return Err(Error::NonCanonical {
                        position: i,
                        message: "exponents must strictly decrease".into(),
                    });
                }
            }
            out.push(Term {
                exponent,
                coefficient,
            });
        }
        Ok(Ordinal { terms: out })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// Coefficient of `ω^0`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exponent.is_zero() => t.coefficient,
            _ => 0,
        }
    }

    /// The ordinal with its finite part removed.
    pub fn infinite_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if terms.last().is_some_and(|t| t.exponent.is_zero()) {
            terms.pop();
        }
        Ordinal { terms }
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Classification by the least exponent.
    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.exponent.is_zero() => Kind::Successor,
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == Kind::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == Kind::Successor
    }

    pub fn succ(&self) -> Ordinal {
        self.add_nat(1)
    }

    /// The immediate predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a finite term");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// `sup` of the set of ordinals below `self`: the predecessor of a
    /// successor, otherwise `self`.
    pub fn set_sup(&self) -> Ordinal {
        self.pred().unwrap_or_else(|| self.clone())
    }

    pub fn add_nat(&self, k: u64) -> Ordinal {
        if k == 0 {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some(t) if t.exponent.is_zero() => {
                t.coefficient = t
                    .coefficient
                    .checked_add(k)
                    .expect("finite part overflows u64");
            }
            _ => terms.push(Term {
                exponent: Ordinal::zero(),
                coefficient: k,
            }),
        }
        Ordinal { terms }
    }

    /// Right multiplication by a natural number: `self · k`.
    pub fn mul_nat(&self, k: u64) -> Ordinal {
        if k == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coefficient = terms[0]
            .coefficient
            .checked_mul(k)
            .expect("coefficient overflows u64");
        Ordinal { terms }
    }

    /// The Wainer-canonical fundamental sequence of a limit ordinal, for `n ≥ 1`:
    /// `(γ + ω^(a+1))[n] = γ + ω^a·n` and `(γ + ω^λ)[n] = γ + ω^(λ[n])`.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        if !self.is_limit() {
            return Err(Error::NotLimit(self.to_string()));
        }
        let mut terms = self.terms.clone();
        let last = terms.pop().expect("limit ordinals are nonzero");
        if last.coefficient > 1 {
            terms.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        match last.exponent.classify() {
            Kind::Successor => terms.push(Term {
                exponent: last.exponent.pred().expect("successor exponent"),
                coefficient: n,
            }),
            Kind::Limit => terms.push(Term {
                exponent: last.exponent.fund_seq(n)?,
                coefficient: 1,
            }),
            Kind::Zero => unreachable!("a limit has a nonzero least exponent"),
        }
        Ok(Ordinal { terms })
    }

    /// `hi - lo` when `lo ≤ hi` and the two differ only in their finite parts.
    pub fn finite_distance(lo: &Ordinal, hi: &Ordinal) -> Option<u64> {
        if lo > hi || lo.infinite_part() != hi.infinite_part() {
            return None;
        }
        Some(hi.finite_part() - lo.finite_part())
    }

    /// Parses the CNF grammar, rejecting non-canonical input.
    pub fn parse(text: &str) -> Result<Ordinal> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let value = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.syntax("unexpected trailing input"));
        }
        Ok(value)
    }
}

/// Ordinal addition with absorption of lower terms.
impl Add<&Ordinal> for &Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: &Ordinal) -> Ordinal {
        let Some(head) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= head.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == head.exponent {
                last.coefficient = last
                    .coefficient
                    .checked_add(head.coefficient)
                    .expect("coefficient overflows u64");
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }
}

impl Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ordinal::parse(s)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::one() {
                if let Some(n) = t.exponent.as_finite() {
                    write!(f, "^{n}")?;
                } else if t.exponent == Ordinal::omega() {
                    f.write_str("^w")?;
                } else {
                    write!(f, "^({})", t.exponent)?;
                }
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Ordinal::parse(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&c) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or_else(|| Error::Syntax {
                    position: start,
                    message: "natural number too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a natural number"));
        }
        Ok(value)
    }

    fn expr(&mut self) -> Result<Ordinal> {
        let mut terms: Vec<Term> = Vec::new();
        let mut zero_at = None;
        let mut monos = 0;
        loop {
            self.skip_ws();
            let start = self.pos;
            let (exponent, coefficient) = self.mono()?;
            monos += 1;
            if coefficient == 0 && !exponent.is_zero() {
                return Err(Error::NonCanonical {
                    position: start,
                    message: "zero coefficient".into(),
                });
            }
            if coefficient == 0 {
                zero_at.get_or_insert(start);
            } else {
                if terms.last().is_some_and(|last| exponent >= last.exponent) {
                    return Err(Error::NonCanonical {
                        position: start,
                        message: "exponents must strictly decrease".into(),
                    });
                }
                terms.push(Term {
                    exponent,
                    coefficient,
                });
            }
            if !self.eat(b'+') {
                break;
            }
        }
        match zero_at {
            Some(_) if monos == 1 => Ok(Ordinal::zero()),
            Some(position) => Err(Error::NonCanonical {
                position,
                message: "zero coefficient".into(),
            }),
            None => Ok(Ordinal { terms }),
        }
    }

    fn mono(&mut self) -> Result<(Ordinal, u64)> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') {
                    self.atom()?
                } else {
                    Ordinal::one()
                };
                let coefficient = if self.eat(b'*') { self.nat()? } else { 1 };
                Ok((exponent, coefficient))
            }
            Some(c) if c.is_ascii_digit() => Ok((Ordinal::zero(), self.nat()?)),
            _ => Err(self.syntax("expected 'w' or a natural number")),
        }
    }

    fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            _ => Err(self.syntax("expected a natural number, 'w' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn parses_zero_and_canonical_sums() {
        assert!(o("0").is_zero());
        let x = o("w^2*3 + w + 5");
        let pairs: Vec<(Ordinal, u64)> = x
            .terms()
            .iter()
            .map(|t| (t.exponent.clone(), t.coefficient))
            .collect();
        assert_eq!(
            pairs,
            vec![(Ordinal::nat(2), 3), (Ordinal::one(), 1), (Ordinal::zero(), 5)]
        );
        assert_eq!(o("  w ^ 2 *3+w+ 5 "), x);
    }

    #[test]
    fn rejects_unsorted_exponents_and_zero_coefficients() {
        assert!(matches!(
            Ordinal::parse("w + w^2"),
            Err(Error::NonCanonical { position: 4, .. })
        ));
        assert!(matches!(Ordinal::parse("w + w"), Err(Error::NonCanonical { .. })));
        assert!(matches!(Ordinal::parse("w*0"), Err(Error::NonCanonical { .. })));
        assert!(matches!(Ordinal::parse("w + 0"), Err(Error::NonCanonical { .. })));
    }

    #[test]
    fn reports_syntax_error_positions() {
        assert_eq!(
            Ordinal::parse("w^"),
            Err(Error::Syntax {
                position: 2,
                message: "expected a natural number, 'w' or '('".into()
            })
        );
        assert!(matches!(Ordinal::parse(""), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(Ordinal::parse("w x"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(Ordinal::parse("w^(w"), Err(Error::Syntax { position: 4, .. })));
    }

    #[test]
    fn formats_canonically() {
        for text in ["0", "7", "w", "w*2 + 1", "w^2*3 + w + 5", "w^w", "w^(w + 1)*2 + w^w"] {
            assert_eq!(o(text).to_string(), text);
        }
        assert_eq!(o("w^(w)").to_string(), "w^w");
        assert_eq!(o("w^(w^2)").to_string(), "w^(w^2)");
    }

    #[test]
    fn compares_in_cnf_order() {
        assert_eq!(Ordinal::omega().cmp(&Ordinal::nat(3)), Ordering::Greater);
        assert_eq!(o("w*2 + 1").cmp(&o("w*2 + 1")), Ordering::Equal);
        assert_eq!(o("w^w").cmp(&o("w^3*9 + w")), Ordering::Greater);
        assert!(o("w") < o("w + 1"));
        assert!(o("w^2") > o("w*100 + 100"));
    }

    #[test]
    fn adds_with_absorption() {
        assert_eq!(&Ordinal::omega() + &Ordinal::one(), o("w + 1"));
        assert_eq!(&Ordinal::nat(3) + &Ordinal::omega(), Ordinal::omega());
        assert_eq!(&o("w^2 + w*3 + 4") + &o("w*2 + 1"), o("w^2 + w*5 + 1"));
        assert_eq!(&o("w + 4") + &o("w^2"), o("w^2"));
        assert_eq!(o("w^2 + w").classify(), Kind::Limit);
        assert_eq!(o("w + 2").classify(), Kind::Successor);
        assert_eq!(Ordinal::zero().classify(), Kind::Zero);
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(Ordinal::omega().fund_seq(3).unwrap(), Ordinal::nat(3));
        assert_eq!(o("w^2").fund_seq(2).unwrap(), o("w*2"));
        assert_eq!(o("w^w").fund_seq(3).unwrap(), o("w^3"));
        assert_eq!(o("w*2").fund_seq(5).unwrap(), o("w + 5"));
        assert_eq!(o("w^(w + 1)").fund_seq(2).unwrap(), o("w^w*2"));
        assert_eq!(o("w + 1").fund_seq(1), Err(Error::NotLimit("w + 1".into())));
        assert_eq!(Ordinal::omega().fund_seq(0), Err(Error::ZeroIndex));
    }

    #[test]
    fn predecessor_and_helpers() {
        assert_eq!(o("w + 1").pred(), Some(Ordinal::omega()));
        assert_eq!(Ordinal::omega().pred(), None);
        assert_eq!(o("w*3 + 2").set_sup(), o("w*3 + 1"));
        assert_eq!(o("w*3 + 2").mul_nat(2), o("w*6 + 2"));
        assert_eq!(Ordinal::finite_distance(&o("w + 3"), &o("w + 7")), Some(4));
        assert_eq!(Ordinal::finite_distance(&o("w + 3"), &o("w*2")), None);
    }

    #[test]
    fn serde_uses_the_grammar() {
        let x = o("w^2 + 3");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"w^2 + 3\"");
        assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), x);
    }
}
