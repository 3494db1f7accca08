//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sequence of terms `w^(e_i) * c_i` with strictly
//! decreasing exponents `e_i` (themselves ordinals) and positive coefficients.
//! The empty sequence is `0`.

mod parse;
mod serde_impl;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use parse::parse;

/// One Cantor-normal-form term `w^exponent * coefficient`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    exponent: Ordinal,
    coefficient: BigUint,
}

impl Term {
    /// Panics if `coefficient` is zero.
    pub fn new(exponent: Ordinal, coefficient: BigUint) -> Self {
        assert!(!coefficient.is_zero(), "CNF coefficients are positive");
        Term {
            exponent,
            coefficient,
        }
    }

    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> &BigUint {
        &self.coefficient
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1u32)
    }

    /// The first infinite ordinal.
    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    pub fn nat(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term::new(Self::zero(), n)],
            }
        }
    }

    /// `w^exponent` as a single term.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term::new(exponent, BigUint::one())],
        }
    }

    /// `w^exponent * coefficient`; zero when `coefficient` is zero.
    pub fn monomial(exponent: Ordinal, coefficient: impl Into<BigUint>) -> Self {
        let coefficient = coefficient.into();
        if coefficient.is_zero() {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term::new(exponent, coefficient)],
        }
    }

    /// Builds an ordinal from terms, rejecting anything that is not in
    /// Cantor normal form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        for (i, pair) in terms.windows(2).enumerate() {
            if pair[0].exponent <= pair[1].exponent {
                return Err(Error::NonDecreasingExponents { pos: i + 1 });
            }
        }
        Ok(Ordinal { terms })
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

    /// The natural number this ordinal denotes, if it is finite.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exponent.is_zero() => Some(t.coefficient.clone()),
            _ => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_nat().and_then(|n| n.to_u64())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    /// Nonzero and not a successor.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    pub fn succ(&self) -> Self {
        self.add(&Self::one())
    }

    /// `Some(a)` with `a + 1 = self` when `self` is a successor.
    pub fn pred(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.coefficient.is_one() {
            terms.pop();
        } else {
            last.coefficient -= 1u32;
        }
        Some(Ordinal { terms })
    }

    pub fn leading_exponent(&self) -> Result<&Ordinal> {
        self.terms
            .first()
            .map(|t| &t.exponent)
            .ok_or(Error::ZeroOrdinal("leading exponent"))
    }

    pub fn last_exponent(&self) -> Result<&Ordinal> {
        self.terms
            .last()
            .map(|t| &t.exponent)
            .ok_or(Error::ZeroOrdinal("last exponent"))
    }

    pub fn leading_coefficient(&self) -> Option<&BigUint> {
        self.terms.first().map(|t| &t.coefficient)
    }

    /// Ordinal sum `self + other`. Terms of `self` below the leading exponent
    /// of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        for t in &self.terms {
            match t.exponent.cmp(&head.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term::new(
                        head.exponent.clone(),
                        &t.coefficient + &head.coefficient,
                    ));
                    terms.extend(other.terms[1..].iter().cloned());
                    return Ordinal { terms };
                }
                Ordering::Less => break,
            }
        }
        terms.extend(other.terms.iter().cloned());
        Ordinal { terms }
    }

    /// Ordinal product `self * k` for a natural `k`.
    pub fn mul_nat(&self, k: impl Into<BigUint>) -> Ordinal {
        let k = k.into();
        if k.is_zero() || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coefficient *= k;
        Ordinal { terms }
    }

    /// Left multiplication `w^mu * self`, which shifts every exponent by `mu`.
    pub fn omega_pow_mul(&self, mu: &Ordinal) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(mu.add(&t.exponent), t.coefficient.clone()))
                .collect(),
        }
    }

    /// The unique `c` with `self + c = target`.
    pub fn left_subtract(&self, target: &Ordinal) -> Result<Ordinal> {
        let underflow = || Error::SubtractionUnderflow {
            lhs: self.to_string(),
            rhs: target.to_string(),
        };
        for (i, (a, b)) in self.terms.iter().zip(&target.terms).enumerate() {
            if a == b {
                continue;
            }
            return match a.exponent.cmp(&b.exponent) {
                Ordering::Less => Ok(Ordinal {
                    terms: target.terms[i..].to_vec(),
                }),
                Ordering::Equal if a.coefficient < b.coefficient => {
                    let mut terms = target.terms[i..].to_vec();
                    terms[0].coefficient -= &a.coefficient;
                    Ok(Ordinal { terms })
                }
                _ => Err(underflow()),
            };
        }
        if self.terms.len() > target.terms.len() {
            return Err(underflow());
        }
        Ok(Ordinal {
            terms: target.terms[self.terms.len()..].to_vec(),
        })
    }

    /// Splits `self = w^mu * quotient + remainder` with `remainder < w^mu`.
    pub fn divide_by_omega_pow(&self, mu: &Ordinal) -> (Ordinal, Ordinal) {
        let split = self.terms.iter().take_while(|t| t.exponent >= *mu).count();
        let quotient = self.terms[..split]
            .iter()
            .map(|t| {
                let e = mu
                    .left_subtract(&t.exponent)
                    .expect("exponent >= mu by construction");
                Term::new(e, t.coefficient.clone())
            })
            .collect();
        (
            Ordinal { terms: quotient },
            Ordinal {
                terms: self.terms[split..].to_vec(),
            },
        )
    }

    /// The terms of `self` with exponent at least `mu`: the largest multiple
    /// of `w^mu` not exceeding `self`.
    pub fn truncate_below(&self, mu: &Ordinal) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .take_while(|t| t.exponent >= *mu)
                .cloned()
                .collect(),
        }
    }

    /// True when `self` is a multiple of `w^mu` (zero counts).
    pub fn is_multiple_of_omega_pow(&self, mu: &Ordinal) -> bool {
        self.terms.last().is_none_or(|t| t.exponent >= *mu)
    }

    /// The `xi` with `w^(w^xi) <= self < w^(w^(xi+1))`.
    pub fn tower_index(&self) -> Result<Ordinal> {
        if self.is_finite() {
            return Err(Error::FiniteOrdinal(self.to_string()));
        }
        Ok(self.leading_exponent()?.leading_exponent()?.clone())
    }

    /// Nesting depth of the exponent tree (0 for finite ordinals).
    pub fn height(&self) -> usize {
        self.terms
            .iter()
            .map(|t| {
                if t.exponent.is_zero() {
                    0
                } else {
                    1 + t.exponent.height()
                }
            })
            .max()
            .unwrap_or(0)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            if t.exponent == Ordinal::one() {
                f.write_str("w")?;
            } else {
                write!(f, "w^({})", t.exponent)?;
            }
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("w").cmp(&o("w")), Ordering::Equal);
        assert!(o("w*2+1") < o("w^(2)"));
        assert!(o("w^(w)") > o("w^(3)"));
        // w*2+1 + w^2 = w^2 witnesses the order
        assert_eq!(o("w*2+1").add(&o("w^(2)")), o("w^(2)"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("w").add(&o("1")), o("w+1"));
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w*3+2").add(&o("w^(2)+w")), o("w^(2)+w"));
        assert_eq!(o("w*3+2").add(&o("w*2+5")), o("w*5+5"));
    }

    #[test]
    fn mul_nat_examples() {
        assert_eq!(o("w").mul_nat(3u32), o("w*3"));
        let a = o("w^(2)+w");
        assert_eq!(a.mul_nat(2u32), o("w^(2)*2+w"));
        assert_eq!(a.mul_nat(2u32), a.add(&a));
        assert_eq!(o("5").mul_nat(4u32), o("20"));
    }

    #[test]
    fn omega_pow_examples() {
        assert_eq!(Ordinal::omega_pow(Ordinal::zero()), Ordinal::one());
        assert_eq!(Ordinal::omega_pow(o("w")), o("w^(w)"));
        assert_eq!(Ordinal::omega_pow(o("w^(2)*2")), o("w^(w^(2)*2)"));
    }

    #[test]
    fn exponents() {
        let a = o("w^(2)*2+w");
        assert_eq!(a.leading_exponent().unwrap(), &o("2"));
        assert_eq!(a.last_exponent().unwrap(), &o("1"));
        assert_eq!(o("7").leading_exponent().unwrap(), &Ordinal::zero());
        assert_eq!(o("7").last_exponent().unwrap(), &Ordinal::zero());
        assert_eq!(o("w^(w)").leading_exponent().unwrap(), &o("w"));
        assert_eq!(o("w^(w)").last_exponent().unwrap(), &o("w"));
        assert!(Ordinal::zero().leading_exponent().is_err());
        assert!(Ordinal::zero().last_exponent().is_err());
    }

    #[test]
    fn left_subtract_examples() {
        assert_eq!(o("w").left_subtract(&o("w*2")).unwrap(), o("w"));
        assert_eq!(o("w").add(&o("w")), o("w*2"));
        let x = o("w^(3)+w+4");
        assert_eq!(x.left_subtract(&x).unwrap(), Ordinal::zero());
        assert_eq!(o("3").left_subtract(&o("w^(2)+5")).unwrap(), o("w^(2)+5"));
        assert_eq!(o("3").add(&o("w^(2)+5")), o("w^(2)+5"));
        assert!(o("w+1").left_subtract(&o("w")).is_err());
        assert!(o("w^(2)").left_subtract(&o("w*7")).is_err());
    }

    #[test]
    fn divide_examples() {
        let g = o("w^(2)*3+w+5");
        let (q, r) = g.divide_by_omega_pow(&o("1"));
        assert_eq!((q.clone(), r.clone()), (o("w*3+1"), o("5")));
        assert_eq!(q.omega_pow_mul(&o("1")).add(&r), g);
        assert_eq!(o("w^(2)").divide_by_omega_pow(&o("2")), (o("1"), o("0")));
        assert_eq!(o("5").divide_by_omega_pow(&o("1")), (o("0"), o("5")));
    }

    #[test]
    fn tower_index_examples() {
        assert_eq!(o("w").tower_index().unwrap(), o("0"));
        assert_eq!(o("w^(w)").tower_index().unwrap(), o("1"));
        let z = o("w^(w^(2)*3+1)");
        assert_eq!(z.tower_index().unwrap(), o("2"));
        let lo = Ordinal::omega_pow(Ordinal::omega_pow(o("2")));
        let hi = Ordinal::omega_pow(Ordinal::omega_pow(o("3")));
        assert!(lo <= z && z < hi);
        assert!(matches!(o("17").tower_index(), Err(Error::FiniteOrdinal(_))));
    }

    #[test]
    fn successor_and_predecessor() {
        assert!(o("w+1").is_successor());
        assert!(o("w^(2)").is_limit());
        assert!(!Ordinal::zero().is_limit());
        assert_eq!(o("w+1").pred(), Some(o("w")));
        assert_eq!(o("w*2+3").pred(), Some(o("w*2+2")));
        assert_eq!(o("w").pred(), None);
    }

    #[test]
    fn naturals_embed_exhaustively() {
        for a in 0u64..200 {
            for b in 0u64..200 {
                let (oa, ob) = (Ordinal::nat(a), Ordinal::nat(b));
                assert_eq!(oa.add(&ob), Ordinal::nat(a + b));
                assert_eq!(oa.cmp(&ob), a.cmp(&b));
                if b > 0 {
                    assert_eq!(oa.mul_nat(b), Ordinal::nat(a * b));
                }
            }
        }
    }
}
