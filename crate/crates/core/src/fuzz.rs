//! Seeded fuzzing of the two Grasberg estimates, with shrinking.
//!
//! Trial `i` draws everything from its own generator seeded with
//! `seed + i`, so trials are independent, may run in parallel, and are
//! reported in index order.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::grasberg::{random::random_step_with, Grasberg, Piece, StepFunction};
use crate::ordinal::Ordinal;
use crate::scalar::Scalar;
use crate::topology::ClosedSet;

/// Counterexamples kept (and shrunk) per run.
const MAX_REPORTED: usize = 3;
const EPS_DENOMINATORS: [i64; 6] = [1, 2, 3, 4, 8, 12];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimate {
    King,
    Queen,
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimate::King => "king",
            Estimate::Queen => "queen",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_pieces: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 1000,
            seed: 0,
            max_pieces: 8,
        }
    }
}

/// Inputs of one trial. `g` is only present for the queen estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Case<T> {
    pub trial: usize,
    pub f: StepFunction<T>,
    pub g: Option<StepFunction<T>>,
    pub eps: T,
}

#[derive(Clone, Debug)]
pub struct FuzzReport<T> {
    pub estimate: Estimate,
    pub space: ClosedSet,
    pub trials: usize,
    pub passed: usize,
    /// Shrunk failing cases, the earliest trials first.
    pub counterexamples: Vec<Case<T>>,
}

impl<T> FuzzReport<T> {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

impl<T> fmt::Display for FuzzReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} pass", self.passed, self.trials)
    }
}

/// Draws the inputs of trial `trial`. Queen inputs are rescaled so that
/// `g` satisfies the hypothesis `sup |g| on Phi(f, eps) <= eps / 2^b`.
pub fn draw_case<T: Scalar>(
    grasberg: &Grasberg,
    estimate: Estimate,
    config: &FuzzConfig,
    trial: usize,
) -> Result<Case<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
    let space = grasberg.space();
    let unit = (-T::one(), T::one());
    let f = random_step_with(&mut rng, space, config.max_pieces, unit.clone());
    let den = EPS_DENOMINATORS[rng.gen_range(0..EPS_DENOMINATORS.len())];
    let eps = T::from_ratio(rng.gen_range(1..=2 * den), den);
    let g = match estimate {
        Estimate::King => None,
        Estimate::Queen => {
            let g = random_step_with(&mut rng, space, config.max_pieces, unit);
            let sup = g.sup_on(&grasberg.phi(&f, &eps)?)?;
            let bound = eps.clone() / T::pow2(grasberg.params().b);
            Some(if sup > bound {
                g.scale(&(bound / sup))
            } else {
                g
            })
        }
    };
    Ok(Case { trial, f, g, eps })
}

/// Whether the estimate holds on `case`. Queen cases violating the
/// hypothesis count as passing.
pub fn holds<T: Scalar>(grasberg: &Grasberg, case: &Case<T>) -> Result<bool> {
    match &case.g {
        None => Ok(grasberg.check_king(&case.f, &case.eps)?.pass),
        Some(g) => Ok(grasberg.check_queen(&case.f, g, &case.eps)?.pass),
    }
}

pub fn run<T: Scalar>(space: &ClosedSet, estimate: Estimate, config: &FuzzConfig) -> Result<FuzzReport<T>> {
    let grasberg = Grasberg::new(space)?;
    let outcomes: Vec<Result<Option<Case<T>>>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let case = draw_case(&grasberg, estimate, config, i)?;
            Ok(if holds(&grasberg, &case)? { None } else { Some(case) })
        })
        .collect();
    let mut failures = Vec::new();
    for outcome in outcomes {
        if let Some(case) = outcome? {
            failures.push(case);
        }
    }
    let passed = config.trials - failures.len();
    let counterexamples = failures
        .into_iter()
        .take(MAX_REPORTED)
        .map(|case| shrink(case, |c| !holds(&grasberg, c).unwrap_or(false)))
        .collect();
    Ok(FuzzReport {
        estimate,
        space: space.clone(),
        trials: config.trials,
        passed,
        counterexamples,
    })
}

/// Minimizes a failing case while `fails` keeps returning true: first by
/// halving piece counts, then by pulling values toward 0.
pub fn shrink<T: Scalar>(mut case: Case<T>, fails: impl Fn(&Case<T>) -> bool) -> Case<T> {
    loop {
        let candidates = coarsenings(&case.f)
            .into_iter()
            .map(|f| Case { f, ..case.clone() })
            .chain(case.g.iter().flat_map(coarsenings).map(|g| Case {
                g: Some(g),
                ..case.clone()
            }));
        match candidates.into_iter().find(|c| fails(c)) {
            Some(smaller) => case = smaller,
            None => break,
        }
    }
    case.f = simplify_values(&case.f, |f| fails(&Case { f: f.clone(), ..case.clone() }));
    if let Some(g) = case.g.clone() {
        let g = simplify_values(&g, |g| {
            fails(&Case {
                g: Some(g.clone()),
                ..case.clone()
            })
        });
        case.g = Some(g);
    }
    case
}

/// Halvings of `f`: merge neighbouring pairs of pieces keeping either value,
/// or keep only the first half of the breakpoints.
fn coarsenings<T: Scalar>(f: &StepFunction<T>) -> Vec<StepFunction<T>> {
    let pieces = f.pieces();
    if pieces.len() < 2 {
        return Vec::new();
    }
    let ambient = f.ambient().clone();
    let merged = |keep_second: bool| {
        let out: Vec<Piece<T>> = pieces
            .chunks(2)
            .map(|pair| {
                let last = pair.last().unwrap();
                let source = if keep_second { last } else { &pair[0] };
                Piece {
                    up_to: last.up_to.clone(),
                    value: source.value.clone(),
                }
            })
            .collect();
        StepFunction::new(ambient.clone(), out).expect("merging keeps breakpoints increasing")
    };
    let mut front: Vec<Piece<T>> = pieces[..pieces.len().div_ceil(2)].to_vec();
    front.last_mut().unwrap().up_to = ambient.clone();
    let front = StepFunction::new(ambient.clone(), front).expect("prefix of increasing breakpoints");
    vec![merged(false), merged(true), front]
}

fn simplify_values<T: Scalar>(f: &StepFunction<T>, fails: impl Fn(&StepFunction<T>) -> bool) -> StepFunction<T> {
    let mut pieces = f.pieces().to_vec();
    let ambient: Ordinal = f.ambient().clone();
    let two = T::one() + T::one();
    let rebuild = |pieces: &[Piece<T>]| StepFunction::new(ambient.clone(), pieces.to_vec()).expect("same breakpoints");
    for i in 0..pieces.len() {
        if pieces[i].value.is_zero() {
            continue;
        }
        let mut trial = pieces.clone();
        trial[i].value = T::zero();
        if fails(&rebuild(&trial)) {
            pieces = trial;
            continue;
        }
        for _ in 0..16 {
            let mut trial = pieces.clone();
            trial[i].value = trial[i].value.clone() / two.clone();
            if !fails(&rebuild(&trial)) {
                break;
            }
            pieces = trial;
        }
    }
    rebuild(&pieces)
}
