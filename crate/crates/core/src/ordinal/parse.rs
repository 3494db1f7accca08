use num_bigint::BigUint;
use num_traits::Zero;

use super::{Ordinal, Term};
use crate::error::{Error, Result};

/// Parses the canonical ordinal notation.
///
/// ```text
/// ordinal := "0" | term ("+" term)*
/// term    := "w^(" ordinal ")" ("*" nat)? | "w" ("*" nat)? | nat
/// nat     := [1-9][0-9]*
/// ```
///
/// Whitespace between tokens is ignored. Terms must already be in Cantor
/// normal form; out-of-order exponents are rejected rather than normalized.
pub fn parse(text: &str) -> Result<Ordinal> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let ord = p.ordinal()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(ord)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let start = self.pos;
        if self.peek() == Some(b'0') && !self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
            let next = self.peek();
            if next == Some(b'+') || next == Some(b'*') {
                return Err(Error::ZeroCoefficient { pos: start });
            }
            return Ok(Ordinal::zero());
        }
        let mut terms: Vec<Term> = Vec::new();
        loop {
            self.skip_ws();
            let term_pos = self.pos;
            let term = self.term()?;
            if let Some(prev) = terms.last() {
                if prev.exponent <= term.exponent {
                    return Err(Error::NonDecreasingExponents { pos: term_pos });
                }
            }
            terms.push(term);
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.expect(b'(')?;
                    let e = self.ordinal()?;
                    self.expect(b')')?;
                    e
                } else {
                    Ordinal::one()
                };
                let coefficient = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.nat()?
                } else {
                    BigUint::from(1u32)
                };
                Ok(Term {
                    exponent,
                    coefficient,
                })
            }
            Some(c) if c.is_ascii_digit() => Ok(Term {
                exponent: Ordinal::zero(),
                coefficient: self.nat()?,
            }),
            Some(_) => Err(self.error("expected a term ('w' or a natural number)")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        if digits.starts_with('0') {
            if digits.bytes().all(|b| b == b'0') {
                return Err(Error::ZeroCoefficient { pos: start });
            }
            return Err(Error::Syntax {
                pos: start,
                msg: "leading zero in natural number".into(),
            });
        }
        let n: BigUint = digits.parse().expect("validated digits");
        debug_assert!(!n.is_zero());
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(o: &Ordinal) -> Vec<(String, String)> {
        o.terms()
            .iter()
            .map(|t| (t.exponent().to_string(), t.coefficient().to_string()))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(parse("0").unwrap(), Ordinal::zero());
        let o = parse("w^(w)*2 + w^(2) + 3").unwrap();
        assert_eq!(
            terms(&o),
            vec![
                ("w".into(), "2".into()),
                ("2".into(), "1".into()),
                ("0".into(), "3".into())
            ]
        );
        let nested = parse("w^(w^(2))").unwrap();
        assert_eq!(nested.terms().len(), 1);
        assert_eq!(nested.leading_exponent().unwrap(), &parse("w^(2)").unwrap());
    }

    #[test]
    fn sugar_and_whitespace() {
        assert_eq!(parse(" w ").unwrap(), parse("w^(1)").unwrap());
        assert_eq!(parse("w*4+1").unwrap(), parse("w^( 1 ) * 4 + 1").unwrap());
        assert_eq!(parse("w^(0)*3").unwrap(), Ordinal::nat(3u32));
    }

    #[test]
    fn canonical_format() {
        for s in ["0", "w^(w)*2+w^(2)+3", "w+1", "w^(w^(w+1)*3)+w*2", "123456789012345678901234567890"] {
            assert_eq!(parse(s).unwrap().to_string(), s);
        }
        assert_eq!(parse("w^(1)*2 + w^(0)").unwrap().to_string(), "w*2+1");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("w^(1)*0"), Err(Error::ZeroCoefficient { .. })));
        assert!(matches!(parse("w+0"), Err(Error::ZeroCoefficient { .. })));
        assert!(matches!(parse("0+w"), Err(Error::ZeroCoefficient { .. })));
        assert!(matches!(
            parse("3 + w"),
            Err(Error::NonDecreasingExponents { pos: 4 })
        ));
        assert!(matches!(
            parse("w + w"),
            Err(Error::NonDecreasingExponents { .. })
        ));
        assert!(matches!(parse("w^2"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("w^(2"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("x"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("w 3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("012"), Err(Error::Syntax { .. })));
    }
}
