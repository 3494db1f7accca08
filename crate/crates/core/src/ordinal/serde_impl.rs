//! JSON encoding: nested arrays `[[exponent, coefficient], ...]`, where the
//! exponent is itself such an array and `0` is `[]`. Coefficients that do not
//! fit in a `u64` are written as decimal strings.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Ordinal, Term};

struct Coefficient<'a>(&'a BigUint);

impl Serialize for Coefficient<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(n) => s.serialize_u64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for t in &self.terms {
            seq.serialize_element(&(&t.exponent, Coefficient(&t.coefficient)))?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Num(u64),
    Str(String),
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<(Ordinal, RawCoefficient)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (exponent, c) in raw {
            let coefficient = match c {
                RawCoefficient::Num(n) => BigUint::from(n),
                RawCoefficient::Str(s) => s
                    .parse::<BigUint>()
                    .map_err(|e| D::Error::custom(format!("bad coefficient {s:?}: {e}")))?,
            };
            if coefficient.is_zero() {
                return Err(D::Error::custom("zero coefficient"));
            }
            terms.push(Term {
                exponent,
                coefficient,
            });
        }
        Ordinal::from_terms(terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_shape() {
        let o: Ordinal = "w^(w)*2+3".parse().unwrap();
        let json = serde_json::to_string(&o).unwrap();
        assert_eq!(json, "[[[[[[[],1]],1]],2],[[],3]]");
        let back: Ordinal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, o);
        assert_eq!(serde_json::to_string(&Ordinal::zero()).unwrap(), "[]");
    }

    #[test]
    fn big_coefficients_round_trip() {
        let o: Ordinal = "w*123456789012345678901234567890".parse().unwrap();
        let json = serde_json::to_string(&o).unwrap();
        assert!(json.contains("\"123456789012345678901234567890\""));
        assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), o);
    }

    #[test]
    fn rejects_non_normal_form() {
        assert!(serde_json::from_str::<Ordinal>("[[[],1],[[[[],1]],1]]").is_err());
        assert!(serde_json::from_str::<Ordinal>("[[[],0]]").is_err());
    }
}
