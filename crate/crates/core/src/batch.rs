//! Deterministic parallel trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// The generator for trial `index` of a run seeded with `seed`: one ChaCha8
/// stream per trial.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `trials` independent tasks in parallel and returns their results in
/// index order, so output depends only on `seed`.
pub fn parallel_trials<T, F>(trials: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(seed, i)))
        .collect()
}
