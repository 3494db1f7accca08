use crate::error::{Error, Result};
use crate::grasberg::StepFunction;
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;

/// Child probes before the extractor declares the null contract violated.
pub const DEFAULT_PROBE_BUDGET: usize = 1_000_000;

/// Functions in the unit ball of `C(K)` indexed by the nodes of the tree of
/// all finite sequences of child indices.
///
/// Contract: every value has sup norm at most 1, and for each node `p` and
/// each point `g` of the space, `at(p + [k])(g) -> 0` as `k -> infinity`.
/// Bounded pointwise-null sequences in `C(K)` are weakly null. `at` must be
/// pure: the same path always yields the same function.
pub trait WeaklyNullFamily<T: Scalar>: Sync {
    fn space(&self) -> &ClosedSet;

    /// The function at a nonempty path.
    fn at(&self, path: &[usize]) -> StepFunction<T>;

    fn probe_budget(&self) -> usize {
        DEFAULT_PROBE_BUDGET
    }
}

/// Indicators marching to the right along the ladder `a_k = step * k`: the
/// `k`-th child carries the indicator of `(a_k, a_(k+1)]`, clipped to the
/// ambient interval, whatever its parent.
#[derive(Clone, Debug)]
pub struct MarchingIndicators {
    space: ClosedSet,
    step: Ordinal,
}

impl MarchingIndicators {
    /// `step` must be nonzero.
    pub fn new(space: ClosedSet, step: Ordinal) -> Result<Self> {
        if step.is_zero() {
            return Err(Error::InvalidStepFunction("ladder step must be nonzero".into()));
        }
        Ok(MarchingIndicators { space, step })
    }

    pub fn unit_steps(space: ClosedSet) -> Self {
        MarchingIndicators {
            space,
            step: Ordinal::one(),
        }
    }

    pub fn rung(&self, k: usize) -> Ordinal {
        self.step.mul_nat(k as u64)
    }
}

impl<T: Scalar> WeaklyNullFamily<T> for MarchingIndicators {
    fn space(&self) -> &ClosedSet {
        &self.space
    }

    fn at(&self, path: &[usize]) -> StepFunction<T> {
        let k = *path.last().expect("family paths are nonempty");
        let ambient = self.space.ambient().clone();
        let (lo, hi) = (self.rung(k), self.rung(k + 1));
        if lo >= ambient {
            return StepFunction::zero(ambient);
        }
        let hi = hi.min(ambient.clone());
        StepFunction::indicator(ambient, Some(lo), hi, T::one())
            .expect("increasing rungs inside the ambient interval")
    }
}

/// A finite table of child functions, the same below every node; children
/// past the table are zero. `cutoff` bounds the child search.
#[derive(Clone, Debug)]
pub struct TableFamily<T> {
    space: ClosedSet,
    functions: Vec<StepFunction<T>>,
    cutoff: usize,
}

impl<T: Scalar> TableFamily<T> {
    pub fn new(space: ClosedSet, functions: Vec<StepFunction<T>>, cutoff: usize) -> Result<Self> {
        for (k, f) in functions.iter().enumerate() {
            if f.ambient() != space.ambient() {
                return Err(Error::AmbientMismatch(
                    f.ambient().to_string(),
                    space.ambient().to_string(),
                ));
            }
            if f.sup_norm() > T::one() {
                return Err(Error::BoundViolation {
                    path: vec![k],
                    norm: format!("{:?}", f.sup_norm()),
                });
            }
        }
        Ok(TableFamily {
            space,
            functions,
            cutoff,
        })
    }

    /// The family that is identically zero.
    pub fn zero(space: ClosedSet) -> Self {
        TableFamily {
            space,
            functions: Vec::new(),
            cutoff: 1,
        }
    }
}

impl<T: Scalar> WeaklyNullFamily<T> for TableFamily<T> {
    fn space(&self) -> &ClosedSet {
        &self.space
    }

    fn at(&self, path: &[usize]) -> StepFunction<T> {
        let k = *path.last().expect("family paths are nonempty");
        self.functions
            .get(k)
            .cloned()
            .unwrap_or_else(|| StepFunction::zero(self.space.ambient().clone()))
    }

    fn probe_budget(&self) -> usize {
        self.cutoff
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn marching_indicators_move_right() {
        let fam = MarchingIndicators::new(ClosedSet::interval(o("w^(2)*2")), o("w")).unwrap();
        let f: StepFunction<Rational> = fam.at(&[0, 3]);
        let one = Rational::from_integer(1.into());
        assert_eq!(f.value_at(&o("w*3")).unwrap(), &Rational::from_integer(0.into()));
        assert_eq!(f.value_at(&o("w*3+1")).unwrap(), &one);
        assert_eq!(f.value_at(&o("w*4")).unwrap(), &one);
        assert_eq!(f.value_at(&o("w*4+1")).unwrap(), &Rational::from_integer(0.into()));
        let first: StepFunction<Rational> = fam.at(&[0]);
        assert_eq!(first.value_at(&o("0")).unwrap(), &Rational::from_integer(0.into()));
        assert_eq!(first.value_at(&o("w")).unwrap(), &one);
    }

    #[test]
    fn marching_indicators_vanish_past_the_ambient() {
        let fam = MarchingIndicators::unit_steps(ClosedSet::interval(o("5")));
        let f: StepFunction<Rational> = fam.at(&[7]);
        assert_eq!(f.sup_norm(), Rational::from_integer(0.into()));
        let last: StepFunction<Rational> = fam.at(&[4]);
        assert_eq!(last.pieces().len(), 2);
    }

    #[test]
    fn table_family_checks_the_unit_ball() {
        let k = ClosedSet::interval(o("w"));
        let big = StepFunction::constant(o("w"), Rational::from_integer(2.into()));
        assert!(TableFamily::new(k.clone(), vec![big], 10).is_err());
        let fam = TableFamily::<Rational>::zero(k);
        assert_eq!(fam.at(&[0, 0]).sup_norm(), Rational::from_integer(0.into()));
    }
}
