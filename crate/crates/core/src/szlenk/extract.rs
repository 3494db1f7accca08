//! Constructive upper estimate for `CB(K) < w`.
//!
//! Given `delta > 0`, a weakly null family in the unit ball, and the block
//! count `b` of `K`, the extractor walks a branch `s_1 < ... < s_n` with
//! `n * delta > 2^(2+b)`. At stage `m` the running sum
//! `g = 2^-(1+b) * (g_1 + ... + g_m)` has a finite critical set
//! `Phi(g, eps)`, and the next block is the first child of `s_m` that is
//! smaller than `eps / 2^b` on it. The queen estimate then keeps
//! `|g| <= (1+eps)^(m-1)`, and the average `(g_1 + ... + g_n) / n` ends
//! with Grasberg norm below `2^(1+b) (1+eps)^n / n < 2^(2+b) / n < delta`.

use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grasberg::{Grasberg, GrasbergParams, StepFunction};
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;
use crate::trees::WeaklyNullFamily;

/// The closing chain `|f| <= 2^(1+b) (1+eps)^n / n < 2^(2+b) / n < delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainBound<T> {
    /// `(1 + eps)^n`, which must stay below 2.
    pub growth: T,
    /// `2^(1+b) (1+eps)^n / n`.
    pub fine: T,
    /// `2^(2+b) / n`.
    pub coarse: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionCertificate<T> {
    pub params: GrasbergParams,
    pub delta: T,
    pub n: usize,
    pub eps: T,
    /// `s_1, ..., s_n`; each path extends the previous one by one child.
    pub branch: Vec<Vec<usize>>,
    pub blocks: Vec<StepFunction<T>>,
    /// Weights of the blocks in the final average.
    pub coefficients: Vec<T>,
    /// `Phi(g, eps)` seen before choosing each block.
    pub critical_sets: Vec<ClosedSet>,
    /// `|2^-(1+b) (g_1 + ... + g_m)|` for `m = 1..=n`.
    pub stage_norms: Vec<T>,
    /// `(1 + eps)^(m-1)` for `m = 1..=n`.
    pub stage_bounds: Vec<T>,
    pub final_fn: StepFunction<T>,
    pub final_norm: T,
    pub final_sup_norm: T,
    pub chain: ChainBound<T>,
}

/// Least `n` with `n * delta > bound`, by doubling then bisection.
fn least_multiple_exceeding<T: Scalar>(delta: &T, bound: &T) -> usize {
    let exceeds = |n: usize| T::from_usize(n).expect("usize fits") * delta.clone() > *bound;
    let mut hi = 1usize;
    while !exceeds(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: !exceeds(lo) (or lo == 0), exceeds(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Runs the stage recursion on `family` and returns the certificate.
///
/// Only spaces with finite Cantor-Bendixson index (`o(K) = 0`) are
/// supported; there every critical set is finite and each block is a
/// single far-out child.
pub fn extract_small_combination<T, F>(
    space: &ClosedSet,
    family: &F,
    delta: &T,
) -> Result<ExtractionCertificate<T>>
where
    T: Scalar,
    F: WeaklyNullFamily<T> + ?Sized,
{
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta);
    }
    family.space().check_ambient(space)?;
    let grasberg = Grasberg::new(space)?;
    let params = grasberg.params().clone();
    if !params.o.is_zero() {
        return Err(Error::UnsupportedDepth(params.o.to_string()));
    }
    let b = params.b;
    let n = least_multiple_exceeding(delta, &T::pow2(2 + b));
    let n_t = T::from_usize(n).expect("usize fits");
    let eps = T::one() / (n_t.clone() + n_t.clone());
    let scale = T::one() / T::pow2(1 + b);
    let target = eps.clone() / T::pow2(b);
    let growth_step = T::one() + eps.clone();

    let ambient = space.ambient().clone();
    let mut sum = StepFunction::zero(ambient);
    let mut path: Vec<usize> = Vec::new();
    let mut branch = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    let mut critical_sets = Vec::with_capacity(n);
    let mut stage_norms = Vec::with_capacity(n);
    let mut stage_bounds = Vec::with_capacity(n);
    let mut bound = T::one();

    for _ in 0..n {
        let g = sum.scale(&scale);
        let phi = grasberg.phi(&g, &eps)?;
        let points = phi.points()?;
        let block = next_block(family, space, &path, &points, &target)?;
        path.push(block.0);
        sum = sum.add(&block.1)?;
        branch.push(path.clone());
        blocks.push(block.1);
        critical_sets.push(phi);
        stage_norms.push(grasberg.norm(&sum.scale(&scale))?);
        stage_bounds.push(bound.clone());
        bound = bound * growth_step.clone();
    }

    let weight = T::one() / n_t.clone();
    let coefficients = vec![weight; n];
    let final_fn = StepFunction::convex(&coefficients, &blocks)?;
    let final_norm = grasberg.norm(&final_fn)?;
    let final_sup_norm = grasberg.sup_norm(&final_fn)?;
    let growth = bound;
    let chain = ChainBound {
        fine: T::pow2(1 + b) * growth.clone() / n_t.clone(),
        coarse: T::pow2(2 + b) / n_t,
        growth,
    };
    let cert = ExtractionCertificate {
        params,
        delta: delta.clone(),
        n,
        eps,
        branch,
        blocks,
        coefficients,
        critical_sets,
        stage_norms,
        stage_bounds,
        final_fn,
        final_norm,
        final_sup_norm,
        chain,
    };
    cert.verify()?;
    Ok(cert)
}

/// First child of `path` whose function is below `target` in absolute value
/// at every point of the critical set.
fn next_block<T, F>(
    family: &F,
    space: &ClosedSet,
    path: &[usize],
    points: &[Ordinal],
    target: &T,
) -> Result<(usize, StepFunction<T>)>
where
    T: Scalar,
    F: WeaklyNullFamily<T> + ?Sized,
{
    let budget = family.probe_budget();
    let mut child = path.to_vec();
    child.push(0);
    let mut worst = None;
    for k in 0..budget {
        *child.last_mut().unwrap() = k;
        let f = family.at(&child);
        let norm = f.sup_on(space)?;
        if norm > T::one() {
            return Err(Error::BoundViolation {
                path: child,
                norm: format!("{norm:?}"),
            });
        }
        let mut offending = None;
        for x in points {
            if f.value_at(x)?.abs() >= *target {
                offending = Some(x);
                break;
            }
        }
        match offending {
            None => return Ok((k, f)),
            Some(x) => worst = Some(x.clone()),
        }
    }
    Err(Error::ContractViolation {
        path: path.to_vec(),
        point: worst.map_or_else(|| "-".to_string(), |x| x.to_string()),
        budget,
    })
}

impl<T: Scalar> ExtractionCertificate<T> {
    /// Re-checks every invariant of the certificate from its own fields.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidCertificate(msg));
        let n = self.n;
        if self.branch.len() != n || self.blocks.len() != n || self.stage_norms.len() != n {
            return fail(format!("certificate lengths disagree with n = {n}"));
        }
        for (m, s) in self.branch.iter().enumerate() {
            let prefix_ok = m == 0 || s[..s.len() - 1] == self.branch[m - 1][..];
            if s.len() != m + 1 || !prefix_ok {
                return fail(format!("branch node {m} does not extend its predecessor"));
            }
        }
        let total = self
            .coefficients
            .iter()
            .cloned()
            .fold(T::zero(), |a, c| a + c);
        if total != T::one() || self.coefficients.iter().any(|c| c.is_negative()) {
            return fail("coefficients are not convex".into());
        }
        for (m, (norm, bound)) in self.stage_norms.iter().zip(&self.stage_bounds).enumerate() {
            if norm > bound {
                return fail(format!("stage {} norm {norm:?} exceeds {bound:?}", m + 1));
            }
        }
        let n_t = T::from_usize(n).expect("usize fits");
        let predicted = T::pow2(1 + self.params.b) / n_t.clone() * self.stage_norms[n - 1].clone();
        let two = T::one() + T::one();
        let checks = [
            (self.final_sup_norm <= self.final_norm, "sup norm exceeds Grasberg norm"),
            (self.final_norm == predicted, "final norm is not the rescaled last stage"),
            (self.final_norm <= self.chain.fine, "final norm exceeds 2^(1+b)(1+eps)^n/n"),
            (self.chain.growth < two, "(1+eps)^n is not below 2"),
            (self.chain.fine < self.chain.coarse, "2^(1+b)(1+eps)^n/n is not below 2^(2+b)/n"),
            (self.chain.coarse < self.delta, "2^(2+b)/n is not below delta"),
            (self.final_norm < self.delta, "final norm is not below delta"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return fail(msg.to_string());
            }
        }
        let prev = T::from_usize(n - 1).expect("usize fits") * self.delta.clone();
        if prev > T::pow2(2 + self.params.b) {
            return fail(format!("n = {n} is not minimal"));
        }
        Ok(())
    }

    pub fn summary(&self) -> CertificateSummary
    where
        T: Display,
    {
        CertificateSummary {
            n: self.n,
            eps: self.eps.to_string(),
            branch: self.branch.clone(),
            stage_norms: self.stage_norms.iter().map(ToString::to_string).collect(),
            final_norm: self.final_norm.to_string(),
        }
    }
}

/// The JSON form of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateSummary {
    pub n: usize,
    pub eps: String,
    pub branch: Vec<Vec<usize>>,
    pub stage_norms: Vec<String>,
    pub final_norm: String,
}
