//! The Grasberg norm on `C(K)` for an infinite closed `K` inside `[0, z]`.
//!
//! With `CB(K)` in `(w^o, w^(o+1))` and `b` the largest `n` for which the
//! derived set `K^(w^o * n)` is nonempty, the norm is
//!
//! ```text
//! |f| = max { 2^n * sup |f| over K^(w^o * n) : 0 <= n <= b }
//! ```
//!
//! and the critical set `Phi(f, eps)` collects, level by level, the points
//! where `2^(n+1) |f| > |f| + eps`.

pub(crate) mod random;
mod step;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;

pub use random::random_step_function;
pub use step::{step_add, step_convex, step_scale, Piece, StepFunction};

/// Block counts beyond this are rejected; each level costs one derived set.
pub const MAX_BLOCKS: u32 = 4096;

/// `o(K)`, `b(K)` and `CB(K)` of an infinite space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrasbergParams {
    pub o: Ordinal,
    pub b: u32,
    pub cb: Ordinal,
}

impl GrasbergParams {
    /// `w^o * n`, the derivation order of level `n`.
    pub fn level(&self, n: u32) -> Ordinal {
        Ordinal::omega_pow(self.o.clone()).mul_nat(n)
    }
}

/// Uses `w^o * b < CB(K) <= w^o * (b+1)`, which also covers finite
/// `CB(K) = b + 1`.
pub fn params(space: &ClosedSet) -> Result<GrasbergParams> {
    let cb = space.cb_index();
    if cb <= Ordinal::one() {
        return Err(Error::FiniteSpace(cb.to_string()));
    }
    let o = cb.leading_exponent()?.clone();
    let lead = cb.leading_coefficient().expect("nonzero");
    let b = if cb.terms().len() == 1 {
        lead - 1u32
    } else {
        lead.clone()
    };
    let b = b
        .to_u32()
        .filter(|&b| b <= MAX_BLOCKS)
        .ok_or_else(|| Error::BlockCountTooLarge(b.to_string()))?;
    Ok(GrasbergParams { o, b, cb })
}

/// A space together with its derived levels `K^(w^o * n)`, `n <= b`.
#[derive(Clone, Debug)]
pub struct Grasberg {
    space: ClosedSet,
    params: GrasbergParams,
    levels: Vec<ClosedSet>,
}

impl Grasberg {
    pub fn new(space: &ClosedSet) -> Result<Self> {
        let params = params(space)?;
        let levels = (0..=params.b)
            .map(|n| space.iterated_derivative(&params.level(n)))
            .collect();
        Ok(Grasberg {
            space: space.clone(),
            params,
            levels,
        })
    }

    pub fn space(&self) -> &ClosedSet {
        &self.space
    }

    pub fn params(&self) -> &GrasbergParams {
        &self.params
    }

    pub fn levels(&self) -> &[ClosedSet] {
        &self.levels
    }

    /// Sup norm over the space itself.
    pub fn sup_norm<T: Scalar>(&self, f: &StepFunction<T>) -> Result<T> {
        f.sup_on(&self.space)
    }

    pub fn norm<T: Scalar>(&self, f: &StepFunction<T>) -> Result<T> {
        let mut best = T::zero();
        for (n, level) in self.levels.iter().enumerate() {
            let v = T::pow2(n as u32) * f.sup_on(level)?;
            best = T::max_of(best, v);
        }
        Ok(best)
    }

    /// `Phi(f, eps)`, the union of the level sets `Phi_n(f, eps)`.
    pub fn phi<T: Scalar>(&self, f: &StepFunction<T>, eps: &T) -> Result<ClosedSet> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveEpsilon);
        }
        let threshold = self.norm(f)? + eps.clone();
        let mut out = ClosedSet::empty(self.space.ambient().clone());
        for (n, level) in self.levels.iter().enumerate() {
            let weight = T::pow2(n as u32 + 1);
            for (start, end, v) in f.windows() {
                if weight.clone() * v.abs() > threshold {
                    out = out.union(&level.restrict(start, end))?;
                }
            }
        }
        Ok(out)
    }

    /// Evaluates `CB(Phi(f, eps)) <= w^o`.
    pub fn check_king<T: Scalar>(&self, f: &StepFunction<T>, eps: &T) -> Result<KingReport> {
        let phi = self.phi(f, eps)?;
        let cb_phi = phi.cb_index();
        let bound = Ordinal::omega_pow(self.params.o.clone());
        Ok(KingReport {
            pass: cb_phi <= bound,
            phi,
            cb_phi,
            bound,
        })
    }

    /// Evaluates `|f + g| <= max{|f| + eps, |f|/2 + eps/2 + |g|}` under the
    /// hypothesis `sup |g| over Phi(f, eps) <= eps / 2^b`.
    pub fn check_queen<T: Scalar>(
        &self,
        f: &StepFunction<T>,
        g: &StepFunction<T>,
        eps: &T,
    ) -> Result<QueenReport<T>> {
        let phi = self.phi(f, eps)?;
        let hypothesis_sup = g.sup_on(&phi)?;
        let hypothesis_bound = eps.clone() / T::pow2(self.params.b);
        let hypothesis_ok = hypothesis_sup <= hypothesis_bound;
        let norm_f = self.norm(f)?;
        let norm_g = self.norm(g)?;
        let lhs = self.norm(&f.add(g)?)?;
        let two = T::one() + T::one();
        let rhs = T::max_of(
            norm_f.clone() + eps.clone(),
            norm_f.clone() / two.clone() + eps.clone() / two + norm_g.clone(),
        );
        Ok(QueenReport {
            pass: !hypothesis_ok || lhs <= rhs,
            hypothesis_ok,
            hypothesis_sup,
            hypothesis_bound,
            norm_f,
            norm_g,
            lhs,
            rhs,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KingReport {
    pub phi: ClosedSet,
    pub cb_phi: Ordinal,
    pub bound: Ordinal,
    pub pass: bool,
}

/// All quantities of one queen-estimate evaluation, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct QueenReport<T> {
    pub norm_f: T,
    pub norm_g: T,
    pub lhs: T,
    pub rhs: T,
    pub hypothesis_sup: T,
    pub hypothesis_bound: T,
    pub hypothesis_ok: bool,
    pub pass: bool,
}

impl<T: std::fmt::Display> Serialize for QueenReport<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QueenReport", 8)?;
        st.serialize_field("normF", &self.norm_f.to_string())?;
        st.serialize_field("normG", &self.norm_g.to_string())?;
        st.serialize_field("lhs", &self.lhs.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.serialize_field("hypothesisSup", &self.hypothesis_sup.to_string())?;
        st.serialize_field("hypothesisBound", &self.hypothesis_bound.to_string())?;
        st.serialize_field("hypothesisOk", &self.hypothesis_ok)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

pub fn sup_on<T: Scalar>(f: &StepFunction<T>, set: &ClosedSet) -> Result<T> {
    f.sup_on(set)
}

pub fn grasberg_norm<T: Scalar>(f: &StepFunction<T>, space: &ClosedSet) -> Result<T> {
    Grasberg::new(space)?.norm(f)
}

pub fn phi<T: Scalar>(f: &StepFunction<T>, space: &ClosedSet, eps: &T) -> Result<ClosedSet> {
    Grasberg::new(space)?.phi(f, eps)
}

pub fn check_king<T: Scalar>(f: &StepFunction<T>, space: &ClosedSet, eps: &T) -> Result<KingReport> {
    Grasberg::new(space)?.check_king(f, eps)
}

pub fn check_queen<T: Scalar>(
    f: &StepFunction<T>,
    g: &StepFunction<T>,
    space: &ClosedSet,
    eps: &T,
) -> Result<QueenReport<T>> {
    Grasberg::new(space)?.check_queen(f, g, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Atom;
    use crate::Rational;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn constant(z: &str, v: &str) -> StepFunction<Rational> {
        StepFunction::constant(o(z), q(v))
    }

    fn bump_w() -> StepFunction<Rational> {
        StepFunction::indicator(o("w"), None, o("5"), q("1")).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = params(&ClosedSet::interval(o("w"))).unwrap();
        assert_eq!((p.o.clone(), p.b, p.cb.clone()), (o("0"), 1, o("2")));
        let p = params(&ClosedSet::interval(o("w^(2)"))).unwrap();
        assert_eq!((p.o.clone(), p.b), (o("0"), 2));
        let p = params(&ClosedSet::interval(o("w^(w)"))).unwrap();
        assert_eq!((p.o.clone(), p.b, p.cb.clone()), (o("1"), 1, o("w+1")));
        assert!(matches!(
            params(&ClosedSet::interval(o("7"))),
            Err(Error::FiniteSpace(_))
        ));
    }

    #[test]
    fn params_match_nonempty_levels() {
        for z in ["w", "w^(3)*2+w", "w^(w)", "w^(w*2+3)", "w^(w^(2))*4", "w^(w^(w)+1)"] {
            let k = ClosedSet::interval(o(z));
            let p = params(&k).unwrap();
            let lo = Ordinal::omega_pow(p.o.clone());
            assert!(lo < p.cb && p.cb < Ordinal::omega_pow(p.o.succ()), "{z}");
            assert!(p.level(p.b) < p.cb && p.cb <= p.level(p.b + 1), "{z}");
            assert!(!k.iterated_derivative(&p.level(p.b)).is_empty(), "{z}");
            assert!(k.iterated_derivative(&p.level(p.b + 1)).is_empty(), "{z}");
        }
    }

    #[test]
    fn norm_examples() {
        let kw = ClosedSet::interval(o("w"));
        assert_eq!(grasberg_norm(&constant("w", "1"), &kw).unwrap(), q("2"));
        assert_eq!(grasberg_norm(&bump_w(), &kw).unwrap(), q("1"));
        let kw2 = ClosedSet::interval(o("w^(2)"));
        assert_eq!(grasberg_norm(&constant("w^(2)", "1"), &kw2).unwrap(), q("4"));
    }

    #[test]
    fn phi_examples() {
        let kw = ClosedSet::interval(o("w"));
        let phi1 = phi(&constant("w", "1"), &kw, &q("1/2")).unwrap();
        assert_eq!(phi1.points().unwrap(), vec![o("w")]);
        let phi2 = phi(&bump_w(), &kw, &q("1/2")).unwrap();
        assert_eq!(
            phi2.atoms(),
            &[
                Atom::singleton(o("0")),
                Atom::stratum(o("0"), o("5"), o("0"))
            ]
        );
        // |f| attained at level 0 only and never exceeded by the doubled value
        let flat = StepFunction::indicator(o("w"), None, o("5"), q("1")).unwrap();
        assert!(phi(&flat, &kw, &q("2")).unwrap().is_empty());
        assert!(matches!(
            phi(&flat, &kw, &q("0")),
            Err(Error::NonPositiveEpsilon)
        ));
    }

    #[test]
    fn king_examples() {
        let kw = ClosedSet::interval(o("w"));
        let r = check_king(&constant("w", "1"), &kw, &q("1/2")).unwrap();
        assert_eq!((r.cb_phi.clone(), r.bound.clone(), r.pass), (o("1"), o("1"), true));
        let kww = ClosedSet::interval(o("w^(w)"));
        let r = check_king(&constant("w^(w)", "1"), &kww, &q("1/2")).unwrap();
        assert!(r.cb_phi <= o("w") && r.pass);
        let r = check_king(&bump_w(), &kw, &q("1/2")).unwrap();
        assert_eq!((r.cb_phi.clone(), r.bound.clone(), r.pass), (o("1"), o("1"), true));
    }

    #[test]
    fn queen_tight_example() {
        let kw = ClosedSet::interval(o("w"));
        let f = constant("w", "1");
        let g = constant("w", "1/5");
        let eps = q("2/5");
        assert_eq!(phi(&f, &kw, &eps).unwrap().points().unwrap(), vec![o("w")]);
        let r = check_queen(&f, &g, &kw, &eps).unwrap();
        assert!(r.hypothesis_ok);
        assert_eq!(r.hypothesis_sup, q("1/5"));
        assert_eq!(r.lhs, q("12/5"));
        assert_eq!(r.rhs, q("12/5"));
        assert_eq!(r.lhs, r.norm_f.clone() + eps);
        assert!(r.pass);
    }

    #[test]
    fn queen_trivial_cases() {
        let kw = ClosedSet::interval(o("w^(2)"));
        let f = StepFunction::indicator(o("w^(2)"), Some(o("w")), o("w*3"), q("-3/4")).unwrap();
        let r = check_queen(&f, &constant("w^(2)", "0"), &kw, &q("1/3")).unwrap();
        assert!(r.hypothesis_ok && r.pass && r.lhs == r.norm_f);
        let zero = constant("w^(2)", "0");
        let g = StepFunction::indicator(o("w^(2)"), None, o("w*2"), q("5")).unwrap();
        let r = check_queen(&zero, &g, &kw, &q("1/3")).unwrap();
        assert!(r.hypothesis_ok && r.pass);
        assert_eq!(r.lhs, r.norm_g);
    }

    #[test]
    fn norm_on_derived_subspace() {
        // K = multiples of w in (0, w^2] plus {0}: CB = 2, levels K and {w^2}
        let k = ClosedSet::from_atoms(
            o("w^(2)"),
            vec![
                Atom::singleton(o("0")),
                Atom::stratum(o("0"), o("w^(2)"), o("1")),
            ],
        )
        .unwrap();
        let p = params(&k).unwrap();
        assert_eq!((p.o.clone(), p.b), (o("0"), 1));
        // nonzero only at finite points, which are outside K apart from 0
        let f = StepFunction::indicator(o("w^(2)"), Some(o("0")), o("9"), q("7")).unwrap();
        assert_eq!(grasberg_norm(&f, &k).unwrap(), q("0"));
        let g = StepFunction::indicator(o("w^(2)"), Some(o("w*4")), o("w^(2)"), q("1/2")).unwrap();
        assert_eq!(grasberg_norm(&g, &k).unwrap(), q("1"));
    }
}
