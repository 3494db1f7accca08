//! Closed subsets of compact ordinal spaces `[0, z]` and their
//! Cantor-Bendixson derivatives.
//!
//! A [`ClosedSet`] is a finite union of atoms. A singleton is isolated and
//! vanishes under one derivative. A stratum `(lo, hi] mod w^mu` is the set of
//! nonzero multiples of `w^mu` in the window `(lo, hi]`; its limit points are
//! exactly the multiples of `w^(mu+1)`, so the `xi`-th derivative is the
//! stratum with exponent `mu + xi`, limit stages included.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Atom {
    Singleton {
        singleton: Ordinal,
    },
    /// Nonzero multiples of `w^mu` in `(lo, hi]`.
    Stratum { lo: Ordinal, hi: Ordinal, mu: Ordinal },
}

impl Atom {
    pub fn singleton(point: Ordinal) -> Self {
        Atom::Singleton { singleton: point }
    }

    pub fn stratum(lo: Ordinal, hi: Ordinal, mu: Ordinal) -> Self {
        Atom::Stratum { lo, hi, mu }
    }

    pub fn contains(&self, g: &Ordinal) -> bool {
        match self {
            Atom::Singleton { singleton } => singleton == g,
            Atom::Stratum { lo, hi, mu } => {
                lo < g && g <= hi && !g.is_zero() && g.is_multiple_of_omega_pow(mu)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Atom::Singleton { .. } => false,
            Atom::Stratum { lo, hi, mu } => lo >= hi || roundup(lo, mu) > *hi,
        }
    }

    /// Least `xi` such that the `xi`-th derivative of this atom is empty.
    pub fn height(&self) -> Ordinal {
        match self {
            _ if self.is_empty() => Ordinal::zero(),
            Atom::Singleton { .. } => Ordinal::one(),
            Atom::Stratum { lo, hi, mu } => {
                let top = max_stratum_exponent(lo, hi).expect("nonempty window");
                mu.left_subtract(&top).expect("nonempty stratum").succ()
            }
        }
    }

    fn derived(&self, xi: &Ordinal) -> Option<Atom> {
        match self {
            Atom::Singleton { .. } if xi.is_zero() => Some(self.clone()),
            Atom::Singleton { .. } => None,
            Atom::Stratum { lo, hi, mu } => {
                Some(Atom::stratum(lo.clone(), hi.clone(), mu.add(xi)))
            }
        }
    }

    /// Tightens a stratum's window to multiples of `w^mu`; `None` when empty.
    fn normalized(self) -> Option<Atom> {
        if self.is_empty() {
            return None;
        }
        match self {
            Atom::Stratum { lo, hi, mu } => Some(Atom::Stratum {
                lo: lo.truncate_below(&mu),
                hi: hi.truncate_below(&mu),
                mu,
            }),
            s => Some(s),
        }
    }

    fn subsumed_by(&self, other: &Atom) -> bool {
        match (self, other) {
            (Atom::Singleton { singleton }, o) => o.contains(singleton),
            (
                Atom::Stratum { lo, hi, mu },
                Atom::Stratum {
                    lo: olo,
                    hi: ohi,
                    mu: omu,
                },
            ) => olo <= lo && hi <= ohi && omu <= mu,
            (Atom::Stratum { .. }, Atom::Singleton { .. }) => false,
        }
    }

    fn max_point(&self) -> &Ordinal {
        match self {
            Atom::Singleton { singleton } => singleton,
            Atom::Stratum { hi, .. } => hi,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Singleton { singleton } => write!(f, "{{{singleton}}}"),
            Atom::Stratum { lo, hi, mu } => write!(f, "({lo},{hi}] mod w^({mu})"),
        }
    }
}

/// Least multiple of `w^nu` strictly greater than `lo`.
pub fn roundup(lo: &Ordinal, nu: &Ordinal) -> Ordinal {
    lo.truncate_below(nu).add(&Ordinal::omega_pow(nu.clone()))
}

/// Largest `nu` such that `(lo, hi]` contains a multiple of `w^nu`.
///
/// This is the exponent of `hi` at the first term where `hi` and `lo`
/// differ.
pub fn max_stratum_exponent(lo: &Ordinal, hi: &Ordinal) -> Result<Ordinal> {
    if lo >= hi {
        return Err(Error::SubtractionUnderflow {
            lhs: hi.to_string(),
            rhs: lo.to_string(),
        });
    }
    let i = lo
        .terms()
        .iter()
        .zip(hi.terms())
        .take_while(|(a, b)| a == b)
        .count();
    Ok(hi.terms()[i].exponent().clone())
}

/// A closed subset of `[0, ambient]` in normalized atom form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawClosedSet")]
pub struct ClosedSet {
    ambient: Ordinal,
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawClosedSet {
    ambient: Ordinal,
    atoms: Vec<Atom>,
}

impl TryFrom<RawClosedSet> for ClosedSet {
    type Error = Error;

    fn try_from(raw: RawClosedSet) -> Result<Self> {
        ClosedSet::from_atoms(raw.ambient, raw.atoms)
    }
}

impl ClosedSet {
    pub fn empty(ambient: Ordinal) -> Self {
        ClosedSet {
            ambient,
            atoms: Vec::new(),
        }
    }

    /// The whole space `[0, z]`.
    pub fn interval(z: Ordinal) -> Self {
        let mut atoms = vec![Atom::singleton(Ordinal::zero())];
        if !z.is_zero() {
            atoms.push(Atom::stratum(Ordinal::zero(), z.clone(), Ordinal::zero()));
        }
        ClosedSet::normalize(z, atoms)
    }

    /// Validates that every atom lies in `[0, ambient]` and normalizes.
    pub fn from_atoms(ambient: Ordinal, atoms: Vec<Atom>) -> Result<Self> {
        for atom in &atoms {
            if !atom.is_empty() && *atom.max_point() > ambient {
                return Err(Error::OutsideAmbient {
                    point: atom.max_point().to_string(),
                    ambient: ambient.to_string(),
                });
            }
        }
        Ok(ClosedSet::normalize(ambient, atoms))
    }

    fn normalize(ambient: Ordinal, atoms: Vec<Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().filter_map(Atom::normalized).collect();
        atoms.sort();
        atoms.dedup();
        let keep: Vec<bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                !atoms
                    .iter()
                    .enumerate()
                    .any(|(j, b)| i != j && a.subsumed_by(b))
            })
            .collect();
        let atoms = atoms
            .into_iter()
            .zip(keep)
            .filter_map(|(a, k)| k.then_some(a))
            .collect();
        ClosedSet { ambient, atoms }
    }

    pub fn ambient(&self) -> &Ordinal {
        &self.ambient
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, g: &Ordinal) -> Result<bool> {
        if *g > self.ambient {
            return Err(Error::OutsideAmbient {
                point: g.to_string(),
                ambient: self.ambient.to_string(),
            });
        }
        Ok(self.atoms.iter().any(|a| a.contains(g)))
    }

    /// Removes the isolated points.
    pub fn derivative(&self) -> ClosedSet {
        self.iterated_derivative(&Ordinal::one())
    }

    /// The `xi`-th Cantor-Bendixson derivative.
    pub fn iterated_derivative(&self, xi: &Ordinal) -> ClosedSet {
        let atoms = self.atoms.iter().filter_map(|a| a.derived(xi)).collect();
        ClosedSet::normalize(self.ambient.clone(), atoms)
    }

    /// Least `xi` with an empty `xi`-th derivative.
    pub fn cb_index(&self) -> Ordinal {
        self.atoms
            .iter()
            .map(Atom::height)
            .max()
            .unwrap_or_else(Ordinal::zero)
    }

    pub fn union(&self, other: &ClosedSet) -> Result<ClosedSet> {
        self.check_ambient(other)?;
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        Ok(ClosedSet::normalize(self.ambient.clone(), atoms))
    }

    /// Intersection with the clopen interval `(start, end]`, or `[0, end]`
    /// when `start` is `None`.
    pub fn restrict(&self, start: Option<&Ordinal>, end: &Ordinal) -> ClosedSet {
        let in_window = |g: &Ordinal| start.is_none_or(|s| s < g) && g <= end;
        let atoms = self
            .atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Singleton { singleton } => in_window(singleton).then(|| a.clone()),
                Atom::Stratum { lo, hi, mu } => {
                    let lo = match start {
                        Some(s) if s > lo => s.clone(),
                        _ => lo.clone(),
                    };
                    let hi = if end < hi { end.clone() } else { hi.clone() };
                    Some(Atom::stratum(lo, hi, mu.clone()))
                }
            })
            .collect();
        ClosedSet::normalize(self.ambient.clone(), atoms)
    }

    /// Lists the points of a finite set (every point isolated).
    pub fn points(&self) -> Result<Vec<Ordinal>> {
        if self.cb_index() > Ordinal::one() {
            return Err(Error::InfiniteSet);
        }
        let mut out = Vec::new();
        for atom in &self.atoms {
            match atom {
                Atom::Singleton { singleton } => out.push(singleton.clone()),
                Atom::Stratum { lo, hi, mu } => {
                    let step = Ordinal::omega_pow(mu.clone());
                    let mut g = roundup(lo, mu);
                    while g <= *hi {
                        let next = g.add(&step);
                        out.push(g);
                        g = next;
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub(crate) fn check_ambient(&self, other: &ClosedSet) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(
                self.ambient.to_string(),
                other.ambient.to_string(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("{}");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
