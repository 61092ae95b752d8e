//! Batch evaluation over independent cases.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over rayon's
//! pool; without it, or through [`map_seq`], it is a plain loop. Results
//! always come back in input order.

use crate::algebra::Algebra;
use crate::dynamics::{brute_force_profile, operator_profile, PeriodicityProfile};
use crate::error::Result;

/// Sequential map, kept available in every build for comparison.
pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_seq(items, f)
}

/// Whether [`map`] actually runs in parallel in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Operator profiles by minimal polynomial, checked against brute force.
pub fn profiles_checked(
    algebras: &[Algebra],
    parallel: bool,
) -> Vec<Result<(PeriodicityProfile, PeriodicityProfile)>> {
    let job = |a: &Algebra| Ok((operator_profile(a)?, brute_force_profile(a)?));
    if parallel {
        map(algebras, job)
    } else {
        map_seq(algebras, job)
    }
}
