use std::fmt::Display;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;

/// One piece of a step function: the value on `(previous up_to, up_to]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<T> {
    pub up_to: Ordinal,
    pub value: T,
}

/// A continuous function on `[0, ambient]` that is constant on finitely many
/// clopen intervals `[0, b0], (b0, b1], ..., (b_{k-1}, ambient]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    ambient: Ordinal,
    pieces: Vec<Piece<T>>,
}

impl<T: Scalar> StepFunction<T> {
    pub fn new(ambient: Ordinal, pieces: Vec<Piece<T>>) -> Result<Self> {
        let Some(last) = pieces.last() else {
            return Err(Error::InvalidStepFunction("no pieces".into()));
        };
        if last.up_to != ambient {
            return Err(Error::InvalidStepFunction(format!(
                "last breakpoint {} differs from ambient {}",
                last.up_to, ambient
            )));
        }
        if let Some(w) = pieces.windows(2).find(|w| w[0].up_to >= w[1].up_to) {
            return Err(Error::InvalidStepFunction(format!(
                "breakpoints not increasing at {}",
                w[1].up_to
            )));
        }
        Ok(StepFunction { ambient, pieces })
    }

    pub fn constant(ambient: Ordinal, value: T) -> Self {
        StepFunction {
            pieces: vec![Piece {
                up_to: ambient.clone(),
                value,
            }],
            ambient,
        }
    }

    pub fn zero(ambient: Ordinal) -> Self {
        Self::constant(ambient, T::zero())
    }

    /// `value` on `(start, end]` (or `[0, end]` without `start`), zero elsewhere.
    pub fn indicator(ambient: Ordinal, start: Option<Ordinal>, end: Ordinal, value: T) -> Result<Self> {
        let mut pieces = Vec::new();
        if let Some(s) = start {
            pieces.push(Piece {
                up_to: s,
                value: T::zero(),
            });
        }
        let at_end = end == ambient;
        pieces.push(Piece { up_to: end, value });
        if !at_end {
            pieces.push(Piece {
                up_to: ambient.clone(),
                value: T::zero(),
            });
        }
        Self::new(ambient, pieces)
    }

    pub fn ambient(&self) -> &Ordinal {
        &self.ambient
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    /// `(start, end, value)` per piece; `start` is `None` for the piece
    /// containing 0.
    pub fn windows(&self) -> impl Iterator<Item = (Option<&Ordinal>, &Ordinal, &T)> {
        self.pieces.iter().enumerate().map(|(i, p)| {
            let start = (i > 0).then(|| &self.pieces[i - 1].up_to);
            (start, &p.up_to, &p.value)
        })
    }

    pub fn value_at(&self, g: &Ordinal) -> Result<&T> {
        if *g > self.ambient {
            return Err(Error::OutsideAmbient {
                point: g.to_string(),
                ambient: self.ambient.to_string(),
            });
        }
        let i = self.pieces.partition_point(|p| p.up_to < *g);
        Ok(&self.pieces[i].value)
    }

    /// `sup |f|` over `set`; zero on the empty set.
    pub fn sup_on(&self, set: &ClosedSet) -> Result<T> {
        self.check_ambient(set.ambient())?;
        let mut best = T::zero();
        for (start, end, v) in self.windows() {
            if v.abs() > best && !set.restrict(start, end).is_empty() {
                best = v.abs();
            }
        }
        Ok(best)
    }

    /// `sup |f|` over the whole ambient interval.
    pub fn sup_norm(&self) -> T {
        self.pieces
            .iter()
            .map(|p| p.value.abs())
            .fold(T::zero(), T::max_of)
    }

    pub fn map(&self, op: impl Fn(&T) -> T) -> Self {
        StepFunction {
            ambient: self.ambient.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    up_to: p.up_to.clone(),
                    value: op(&p.value),
                })
                .collect(),
        }
        .simplified()
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    /// Pointwise combination on the common refinement of both breakpoint lists.
    pub fn zip_with(&self, other: &Self, op: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.check_ambient(&other.ambient)?;
        let (mut i, mut j) = (0, 0);
        let mut pieces = Vec::with_capacity(self.pieces.len() + other.pieces.len());
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a, b) = (&self.pieces[i], &other.pieces[j]);
            let up_to = a.up_to.clone().min(b.up_to.clone());
            pieces.push(Piece {
                value: op(&a.value, &b.value),
                up_to: up_to.clone(),
            });
            if a.up_to == up_to {
                i += 1;
            }
            if b.up_to == up_to {
                j += 1;
            }
        }
        Ok(StepFunction {
            ambient: self.ambient.clone(),
            pieces,
        }
        .simplified())
    }

    /// Convex combination `sum c_i f_i`; the coefficients must be
    /// non-negative and sum to one.
    pub fn convex(coeffs: &[T], fs: &[Self]) -> Result<Self> {
        if coeffs.len() != fs.len() || fs.is_empty() {
            return Err(Error::InvalidConvexCombination(format!(
                "{} coefficients for {} functions",
                coeffs.len(),
                fs.len()
            )));
        }
        if coeffs.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidConvexCombination(
                "negative coefficient".into(),
            ));
        }
        let total = coeffs.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total != T::one() {
            return Err(Error::InvalidConvexCombination(format!(
                "coefficients sum to {total:?}"
            )));
        }
        let mut acc = StepFunction::zero(fs[0].ambient.clone());
        for (c, f) in coeffs.iter().zip(fs) {
            acc = acc.add(&f.scale(c))?;
        }
        Ok(acc)
    }

    /// Merges adjacent pieces with equal values.
    pub fn simplified(mut self) -> Self {
        let mut merged: Vec<Piece<T>> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.drain(..) {
            match merged.last_mut() {
                Some(last) if last.value == p.value => last.up_to = p.up_to,
                _ => merged.push(p),
            }
        }
        self.pieces = merged;
        self
    }

    fn check_ambient(&self, ambient: &Ordinal) -> Result<()> {
        if self.ambient != *ambient {
            return Err(Error::AmbientMismatch(
                self.ambient.to_string(),
                ambient.to_string(),
            ));
        }
        Ok(())
    }
}

/// Piecewise convenience wrapper around [`StepFunction::add`].
pub fn step_add<T: Scalar>(f: &StepFunction<T>, g: &StepFunction<T>) -> Result<StepFunction<T>> {
    f.add(g)
}

pub fn step_scale<T: Scalar>(f: &StepFunction<T>, c: &T) -> StepFunction<T> {
    f.scale(c)
}

pub fn step_convex<T: Scalar>(coeffs: &[T], fs: &[StepFunction<T>]) -> Result<StepFunction<T>> {
    StepFunction::convex(coeffs, fs)
}

struct ValueStr<'a, T>(&'a T);

impl<T: Display> Serialize for ValueStr<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self.0)
    }
}

#[derive(Serialize)]
#[serde(bound = "T: Display")]
struct PieceOut<'a, T: Display> {
    #[serde(rename = "upTo")]
    up_to: &'a Ordinal,
    value: ValueStr<'a, T>,
}

impl<T: Display> Serialize for StepFunction<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pieces: Vec<_> = self
            .pieces
            .iter()
            .map(|p| PieceOut {
                up_to: &p.up_to,
                value: ValueStr(&p.value),
            })
            .collect();
        let mut st = s.serialize_struct("StepFunction", 2)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("pieces", &pieces)?;
        st.end()
    }
}

/// Exact values travel as strings (`"p/q"`); plain JSON integers are
/// accepted on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Str(String),
    Int(i64),
}

#[derive(Deserialize)]
struct RawPiece {
    #[serde(rename = "upTo")]
    up_to: Ordinal,
    value: RawValue,
}

#[derive(Deserialize)]
struct RawStep {
    ambient: Ordinal,
    pieces: Vec<RawPiece>,
}

impl<'de, T> Deserialize<'de> for StepFunction<T>
where
    T: Scalar + FromStr,
    T::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStep::deserialize(d)?;
        let mut pieces = Vec::with_capacity(raw.pieces.len());
        for p in raw.pieces {
            let value = match p.value {
                RawValue::Str(s) => s
                    .trim()
                    .parse::<T>()
                    .map_err(|e| D::Error::custom(format!("bad value {s:?}: {e}")))?,
                RawValue::Int(n) => T::from_i64(n)
                    .ok_or_else(|| D::Error::custom(format!("value {n} not representable")))?,
            };
            pieces.push(Piece {
                up_to: p.up_to,
                value,
            });
        }
        StepFunction::new(raw.ambient, pieces).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn bump(ambient: &str, upto: &str, inside: &str, outside: &str) -> StepFunction<Rational> {
        StepFunction::new(
            o(ambient),
            vec![
                Piece {
                    up_to: o(upto),
                    value: q(inside),
                },
                Piece {
                    up_to: o(ambient),
                    value: q(outside),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let one = StepFunction::constant(o("w"), q("1"));
        assert_eq!(one.add(&one).unwrap(), StepFunction::constant(o("w"), q("2")));
        let f = bump("w", "5", "1", "0");
        assert_eq!(StepFunction::convex(&[q("1")], std::slice::from_ref(&f)).unwrap(), f);
        let g = bump("w", "5", "0", "1");
        let half = StepFunction::convex(&[q("1/2"), q("1/2")], &[f, g]).unwrap();
        assert_eq!(half, StepFunction::constant(o("w"), q("1/2")));
    }

    #[test]
    fn convex_rejects_bad_weights() {
        let f = StepFunction::constant(o("w"), q("1"));
        assert!(StepFunction::convex(&[q("1/2")], std::slice::from_ref(&f)).is_err());
        assert!(StepFunction::convex(&[q("3/2"), q("-1/2")], &[f.clone(), f]).is_err());
    }

    #[test]
    fn refinement_evaluates_pointwise() {
        let f = bump("w^(2)", "w*3", "2", "-1");
        let g = bump("w^(2)", "w+4", "1/3", "5");
        let h = f.add(&g).unwrap();
        for (p, want) in [("0", "7/3"), ("w+4", "7/3"), ("w+5", "7"), ("w*3", "7"), ("w*3+1", "4"), ("w^(2)", "4")] {
            assert_eq!(h.value_at(&o(p)).unwrap(), &q(want), "at {p}");
        }
        assert_eq!(h.pieces().len(), 3);
    }

    #[test]
    fn sup_on_examples() {
        let k = ClosedSet::interval(o("w"));
        let one = StepFunction::constant(o("w"), q("1"));
        assert_eq!(one.sup_on(&k).unwrap(), q("1"));
        let f = bump("w", "5", "1", "0");
        assert_eq!(f.sup_on(&k.derivative()).unwrap(), q("0"));
        assert_eq!(f.sup_on(&ClosedSet::empty(o("w"))).unwrap(), q("0"));
        assert!(f.sup_on(&ClosedSet::interval(o("w+1"))).is_err());
    }

    #[test]
    fn validation() {
        assert!(StepFunction::<Rational>::new(o("w"), vec![]).is_err());
        let bad = vec![
            Piece { up_to: o("5"), value: q("1") },
            Piece { up_to: o("5"), value: q("1") },
            Piece { up_to: o("w"), value: q("1") },
        ];
        assert!(StepFunction::new(o("w"), bad).is_err());
        let short = vec![Piece { up_to: o("5"), value: q("1") }];
        assert!(StepFunction::new(o("w"), short).is_err());
    }

    #[test]
    fn json_shape() {
        let f = bump("w", "5", "1/2", "-3");
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["pieces"][0]["value"], "1/2");
        assert_eq!(v["pieces"][1]["value"], "-3");
        assert_eq!(v["pieces"][0]["upTo"], serde_json::json!([[[], 5]]));
        let back: StepFunction<Rational> = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        let int: StepFunction<Rational> = serde_json::from_str(
            r#"{"ambient": [[[[[], 1]], 1]], "pieces": [{"upTo": [[[[[], 1]], 1]], "value": 2}]}"#,
        )
        .unwrap();
        assert_eq!(int, StepFunction::constant(o("w"), q("2")));
    }

    #[test]
    fn generic_over_floats() {
        let f: StepFunction<f64> = StepFunction::new(
            o("w"),
            vec![
                Piece { up_to: o("3"), value: 0.5 },
                Piece { up_to: o("w"), value: -2.0 },
            ],
        )
        .unwrap();
        assert_eq!(f.sup_norm(), 2.0);
        assert_eq!(*f.scale(&2.0).value_at(&o("1")).unwrap(), 1.0);
    }
}
