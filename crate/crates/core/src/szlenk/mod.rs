//! Szlenk indices of `C(K)` for closed `K` inside `[0, z]`.
//!
//! `Sz(C(K))` is the least power `w^xi` with `CB(K) <= w^xi`. For the whole
//! interval `[0, z]`, `z >= w`, this is `w^(xi+1)` where `xi` is the tower
//! index of `z`.

mod extract;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;

pub use extract::{extract_small_combination, ChainBound, CertificateSummary, ExtractionCertificate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SzlenkResult {
    /// `w^exponent`.
    pub index: Ordinal,
    pub exponent: Ordinal,
    pub cb: Ordinal,
}

/// Least `xi` with `cb <= w^xi`. Nonempty compact sets have successor
/// CB indices, so `cb = lambda + 1` and the answer is one more than the
/// leading exponent of `lambda`.
pub fn least_power_exponent(cb: &Ordinal) -> Ordinal {
    match cb.pred() {
        None => Ordinal::zero(),
        Some(lambda) if lambda.is_zero() => Ordinal::zero(),
        Some(lambda) => lambda.leading_exponent().expect("nonzero").succ(),
    }
}

pub fn index_of_ck(space: &ClosedSet) -> Result<SzlenkResult> {
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    let cb = space.cb_index();
    let exponent = least_power_exponent(&cb);
    Ok(SzlenkResult {
        index: Ordinal::omega_pow(exponent.clone()),
        exponent,
        cb,
    })
}

/// `Sz(C([0, z])) = w^(xi + 1)` with `w^(w^xi) <= z < w^(w^(xi+1))`.
pub fn index_of_interval(z: &Ordinal) -> Result<SzlenkResult> {
    let exponent = z.tower_index()?.succ();
    Ok(SzlenkResult {
        index: Ordinal::omega_pow(exponent.clone()),
        exponent,
        cb: ClosedSet::interval(z.clone()).cb_index(),
    })
}

/// The `xi`-th Szlenk derivation, at threshold `eps`, of the Dirac
/// functionals of `space`, taken inside that Dirac set.
///
/// Distinct Dirac functionals are at distance 2, so below `eps = 2` a
/// functional survives one derivation exactly when its point is a limit
/// point; from `eps = 2` on nothing survives.
pub fn dirac_derivative<T: Scalar>(space: &ClosedSet, eps: &T, xi: &Ordinal) -> Result<ClosedSet> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let two = T::one() + T::one();
    if *eps < two || xi.is_zero() {
        Ok(space.iterated_derivative(xi))
    } else {
        Ok(ClosedSet::empty(space.ambient().clone()))
    }
}
