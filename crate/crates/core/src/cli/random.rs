//! Seeded random branch systems and cyclic covers for property testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::rat_int;
use crate::curve::{intersection_multiplicity, Branch, CurveError, Series, TaggedSystem};
use crate::resolve::AxisCurve;

/// Largest exponent used in generated parametrizations.
pub const MAX_EXPONENT: u32 = 12;

/// A random primitive branch `x = t^n`, `y = Σ c_e t^e` (coordinates
/// swapped half of the time), `n ≤ 4`, `1–3` terms of exponent
/// `≤ MAX_EXPONENT`, coefficients in `−3..=3 \ {0}`.
pub fn random_branch(rng: &mut impl Rng) -> Branch {
    loop {
        let n: u32 = rng.gen_range(1..=4);
        let k: usize = rng.gen_range(1..=3);
        let mut exps: Vec<u32> = (1..=MAX_EXPONENT).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
        exps.sort_unstable();
        let g = exps.iter().fold(n, |a, &e| num_integer::gcd(a, e));
        if g != 1 {
            continue;
        }
        let terms: Vec<(u32, i64)> = exps
            .iter()
            .map(|&e| {
                let c = loop {
                    let c: i64 = rng.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                (e, c)
            })
            .collect();
        let x = Series::from_ints(&[(n, 1)]);
        let y = Series::exact(terms.iter().map(|&(e, c)| (e, rat_int(c))));
        let b = if rng.gen_bool(0.5) { Branch::new_unchecked(y, x) } else { Branch::new_unchecked(x, y) };
        if b.validate().is_ok() {
            return b;
        }
    }
}

/// Draws a branch distinct (as a curve germ) from all of `existing`.
fn fresh_branch(rng: &mut impl Rng, existing: &[Branch]) -> Branch {
    loop {
        let b = random_branch(rng);
        // Any failure (identical germs, or precision running out while
        // separating them) rejects the candidate.
        let distinct = existing.iter().all(|e| intersection_multiplicity(e, &b).is_ok());
        if distinct {
            return b;
        }
    }
}

/// A random system with `1–max_per_role` distinct branches per role and
/// multiplicity one, determined by `seed`.
pub fn random_system_sized(seed: u64, max_per_role: usize) -> TaggedSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf = rng.gen_range(1..=max_per_role);
    let ng = rng.gen_range(1..=max_per_role);
    let mut all: Vec<Branch> = Vec::new();
    for i in 0..nf + ng {
        let b = fresh_branch(&mut rng, &all).named(if i < nf { format!("f{i}") } else { format!("g{}", i - nf) });
        all.push(b);
    }
    let g = all.split_off(nf);
    TaggedSystem { f: all.into_iter().map(|b| (b, 1)).collect(), g: g.into_iter().map(|b| (b, 1)).collect(), extra: vec![] }
}

/// A random system with 1–6 branches per role.
pub fn random_system(seed: u64) -> TaggedSystem {
    random_system_sized(seed, 6)
}

/// A random cyclic cover `z^d = h`.
#[derive(Debug, Clone)]
pub struct RandomCover {
    pub degree: u64,
    pub h: Vec<(Branch, u64)>,
    pub f_axis: AxisCurve,
}

/// Lifts the branches of `sys` to the branch of a cover: `d ∈ {2, 3}`,
/// h-multiplicities in `1..=3`, a random choice of the f-axis; branches
/// equal to a coordinate axis are dropped.
pub fn random_cover_of(sys: &TaggedSystem, seed: u64) -> RandomCover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let degree = rng.gen_range(2..=3);
    let f_axis = if rng.gen_bool(0.5) { AxisCurve::XZero } else { AxisCurve::YZero };
    let axes = [Branch::axis_x_zero(), Branch::axis_y_zero()];
    let h = sys
        .all()
        .filter(|(_, b, _)| axes.iter().all(|a| !matches!(intersection_multiplicity(a, b), Err(CurveError::IdenticalBranches(..)))))
        .map(|(_, b, _)| (b.clone(), rng.gen_range(1..=3)))
        .collect();
    RandomCover { degree, h, f_axis }
}
