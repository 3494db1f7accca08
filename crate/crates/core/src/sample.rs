//! Seeded random generation of ordinals, points and closed sets for fuzzing.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::ordinal::{Ordinal, Term};
use crate::topology::{roundup, Atom, ClosedSet};

const MAX_COEFF: u64 = 5;

/// A random ordinal strictly below `w^exponent`.
pub fn below_omega_pow<R: Rng + ?Sized>(rng: &mut R, exponent: &Ordinal) -> Ordinal {
    let mut terms = Vec::new();
    let mut cap = exponent.clone();
    while !cap.is_zero() && !rng.gen_bool(0.2) {
        let e = below(rng, &cap);
        terms.push(Term::new(e.clone(), BigUint::from(rng.gen_range(1..=MAX_COEFF))));
        if e.is_zero() || rng.gen_bool(0.35) {
            break;
        }
        cap = e;
    }
    Ordinal::from_terms(terms).expect("strictly decreasing by construction")
}

/// A random ordinal strictly below `bound`; zero when `bound` is zero.
pub fn below<R: Rng + ?Sized>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    let terms = bound.terms();
    if terms.is_empty() {
        return Ordinal::zero();
    }
    let i = rng.gen_range(0..terms.len());
    let mut out: Vec<Term> = terms[..i].to_vec();
    let t = &terms[i];
    let c = t.coefficient().to_u64().unwrap_or(u64::MAX);
    if c > 1 && rng.gen_bool(0.5) {
        out.push(Term::new(t.exponent().clone(), BigUint::from(rng.gen_range(1..c))));
    }
    let tail = below_omega_pow(rng, t.exponent());
    out.extend(tail.terms().iter().cloned());
    Ordinal::from_terms(out).expect("strictly decreasing by construction")
}

/// A random point of `[0, bound]`, hitting `bound` itself now and then.
pub fn at_most<R: Rng + ?Sized>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    if rng.gen_bool(0.1) {
        bound.clone()
    } else {
        below(rng, bound)
    }
}

/// `w^(w^3)`, the fuzzing horizon for ambient spaces.
pub fn default_horizon() -> Ordinal {
    Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::nat(3u32)))
}

/// A random infinite ordinal below `horizon` (which must exceed `w`).
pub fn infinite_below<R: Rng + ?Sized>(rng: &mut R, horizon: &Ordinal) -> Ordinal {
    loop {
        let z = below(rng, horizon);
        if !z.is_finite() {
            return z;
        }
    }
}

/// Random points of a closed set: atom landmarks plus random members.
pub fn points_of<R: Rng + ?Sized>(rng: &mut R, set: &ClosedSet, count: usize) -> Vec<Ordinal> {
    let mut out = Vec::new();
    if set.is_empty() {
        return out;
    }
    for _ in 0..count {
        let atom = &set.atoms()[rng.gen_range(0..set.atoms().len())];
        match atom {
            Atom::Singleton { singleton } => out.push(singleton.clone()),
            Atom::Stratum { lo, hi, mu } => {
                // a multiple of w^nu for some nu >= mu inside the window
                let top = crate::topology::max_stratum_exponent(lo, hi).expect("nonempty");
                let nu = if rng.gen_bool(0.5) {
                    mu.clone()
                } else {
                    let extra = mu.left_subtract(&top).expect("mu <= top");
                    mu.add(&at_most(rng, &extra))
                };
                let first = roundup(lo, &nu);
                let room = first.left_subtract(hi).expect("nu <= top keeps first <= hi");
                let jump = at_most(rng, &room).truncate_below(&nu);
                let g = first.add(&jump);
                debug_assert!(atom.contains(&g));
                out.push(g);
            }
        }
    }
    out
}

/// A random nonempty closed subset of `[0, ambient]` built from singletons,
/// strata, and derived intervals.
pub fn closed_set<R: Rng + ?Sized>(rng: &mut R, ambient: &Ordinal) -> ClosedSet {
    loop {
        let mut atoms = Vec::new();
        let n = rng.gen_range(1..=4);
        for _ in 0..n {
            match rng.gen_range(0..3) {
                0 => atoms.push(Atom::singleton(at_most(rng, ambient))),
                1 if !ambient.is_zero() => {
                    let a = at_most(rng, ambient);
                    let b = at_most(rng, ambient);
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    let top = ambient.leading_exponent().expect("nonzero").clone();
                    let mu = at_most(rng, &top);
                    atoms.push(Atom::stratum(lo, hi, mu));
                }
                _ => {
                    let xi = at_most(rng, &Ordinal::omega_pow(Ordinal::one()));
                    let whole = ClosedSet::interval(ambient.clone()).iterated_derivative(&xi);
                    atoms.extend(whole.atoms().iter().cloned());
                }
            }
        }
        let set = ClosedSet::from_atoms(ambient.clone(), atoms).expect("atoms inside ambient");
        if !set.is_empty() {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn below_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bound: Ordinal = "w^(w^(2)+w*3)*2+w^(5)+7".parse().unwrap();
        for _ in 0..2000 {
            assert!(below(&mut rng, &bound) < bound);
        }
        assert_eq!(below(&mut rng, &Ordinal::zero()), Ordinal::zero());
    }

    #[test]
    fn sampled_points_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let z = infinite_below(&mut rng, &default_horizon());
            let set = closed_set(&mut rng, &z);
            for g in points_of(&mut rng, &set, 10) {
                assert!(set.contains(&g).unwrap(), "{g} in {set}");
            }
        }
    }
}
