use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{params, Piece, StepFunction};
use crate::ordinal::Ordinal;
use crate::sample;
use crate::scalar::Scalar;
use crate::topology::{roundup, Atom, ClosedSet};

const DENOMINATORS: [i64; 7] = [1, 2, 3, 4, 5, 6, 12];

/// Deterministic random step function on `[0, ambient]` with (at most)
/// `max_pieces` pieces and values in `value_range`.
///
/// Breakpoints mix random points with landmarks of the derived levels
/// `K^(w^o * n)`, so pieces regularly separate those levels.
pub fn random_step_function<T: Scalar>(
    space: &ClosedSet,
    seed: u64,
    max_pieces: usize,
    value_range: (T, T),
) -> StepFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_step_with(&mut rng, space, max_pieces, value_range)
}

pub(crate) fn random_step_with<T: Scalar, R: Rng>(
    rng: &mut R,
    space: &ClosedSet,
    max_pieces: usize,
    value_range: (T, T),
) -> StepFunction<T> {
    let ambient = space.ambient().clone();
    let mut candidates = landmarks(rng, space);
    for _ in 0..2 * max_pieces {
        candidates.push(sample::below(rng, &ambient));
    }
    candidates.retain(|c| *c < ambient);
    candidates.sort();
    candidates.dedup();
    candidates.shuffle(rng);
    candidates.truncate(max_pieces.max(1) - 1);
    candidates.sort();
    candidates.push(ambient.clone());

    let (lo, hi) = value_range;
    let pieces = candidates
        .into_iter()
        .map(|up_to| {
            let den = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
            let t = T::from_ratio(rng.gen_range(0..=den), den);
            Piece {
                up_to,
                value: lo.clone() + (hi.clone() - lo.clone()) * t,
            }
        })
        .collect();
    StepFunction::new(ambient, pieces).expect("sorted distinct breakpoints ending at ambient")
}

/// First points and endpoints of every atom of every derived level, plus
/// random members of those levels.
fn landmarks<R: Rng>(rng: &mut R, space: &ClosedSet) -> Vec<Ordinal> {
    let levels: Vec<ClosedSet> = match params(space) {
        Ok(p) => (0..=p.b.min(8))
            .map(|n| space.iterated_derivative(&p.level(n)))
            .collect(),
        Err(_) => vec![space.clone()],
    };
    let mut out = Vec::new();
    for level in &levels {
        for atom in level.atoms() {
            match atom {
                Atom::Singleton { singleton } => out.push(singleton.clone()),
                Atom::Stratum { lo, hi, mu } => {
                    out.push(roundup(lo, mu));
                    out.push(lo.clone());
                    out.push(hi.clone());
                }
            }
        }
        out.extend(sample::points_of(rng, level, 2));
    }
    out
}
