//! Independent brute-force and Monte-Carlo reference implementations.
//!
//! Nothing here is fast and nothing here shares code with the analytic
//! paths — that is the point. These routines are consumed by the test
//! suites to cross-check the spectral machinery, and by nothing else.

use crate::bitspace::{all_strings, BitString};
use crate::error::{Error, Result};
use crate::mutation::{mutation_prob, FitnessLevels, ProbabilityVector};
use crate::scalar::Scalar;
use crate::walsh::{FunctionTable, WalshExpansion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// Dimension cap for total-enumeration oracles.
pub const BRUTE_LIMIT: usize = 14;

/// Seed for the reproducible simulation stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngSeed(pub u64);

/// Exact post-mutation fitness histogram by total enumeration: walk every
/// string y, add its reach probability to the bucket of f(y).
pub fn brute_distribution<S: Scalar>(
    f: &FunctionTable<S>,
    x: &BitString,
    p: &S,
) -> Result<(FitnessLevels<S>, ProbabilityVector<S>)> {
    let n = f.n();
    if n > BRUTE_LIMIT {
        return Err(Error::DimensionOverLimit { n, limit: BRUTE_LIMIT });
    }
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let levels = FitnessLevels::from_table(f);
    let mut mass = vec![S::zero(); levels.q()];
    for y in all_strings(n)? {
        let idx = levels
            .index_of(f.value(&y))
            .expect("table value missing from its own level set");
        mass[idx] = mass[idx].clone() + mutation_prob(x, &y, p)?;
    }
    Ok((levels, ProbabilityVector::new(mass)?))
}

/// One Walsh coefficient by the defining 2^n-term dot product.
pub fn brute_walsh_coeff<S: Scalar>(f: &FunctionTable<S>, w: &BitString) -> Result<S> {
    let n = f.n();
    if n > BRUTE_LIMIT {
        return Err(Error::DimensionOverLimit { n, limit: BRUTE_LIMIT });
    }
    if w.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: w.len() });
    }
    let wi = w.to_index();
    let mut acc = S::zero();
    for (xi, v) in f.values().iter().enumerate() {
        if (wi & xi).count_ones() % 2 == 0 {
            acc = acc + v.clone();
        } else {
            acc = acc - v.clone();
        }
    }
    Ok(acc / S::from_int(1i64 << n))
}

/// Walsh expansion of the m-th power of f, computed entirely in the
/// coefficient domain: start from the coefficients given by
/// [`brute_walsh_coeff`] and multiply out `(sum_w a_w psi_w)^m` using
/// `psi_w psi_t = psi_{w xor t}`, i.e. m-1 dyadic convolutions. No value
/// table and no butterfly is involved, so this is an independent route to
/// the same expansion.
pub fn brute_power_walsh<S: Scalar>(f: &FunctionTable<S>, m: usize) -> Result<WalshExpansion<S>> {
    let n = f.n();
    if n > 8 || m > 3 {
        return Err(Error::BudgetExceeded(format!(
            "power expansion limited to n <= 8, m <= 3 (got n = {n}, m = {m})"
        )));
    }
    let size = 1usize << n;
    let base: Vec<S> = (0..size)
        .map(|wi| brute_walsh_coeff(f, &BitString::from_index(wi, n)))
        .collect::<Result<_>>()?;
    let mut acc = vec![S::zero(); size];
    acc[0] = S::one(); // the constant function 1 = psi_0
    for _ in 0..m {
        let mut next = vec![S::zero(); size];
        for (wi, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (ti, b) in base.iter().enumerate() {
                let ui = wi ^ ti;
                next[ui] = next[ui].clone() + a.clone() * b.clone();
            }
        }
        acc = next;
    }
    let table = FunctionTable::new(n, acc)?;
    // Reuse the container, not the transform: coefficients are already
    // in the Walsh basis.
    Ok(expansion_from_coeffs(table))
}

fn expansion_from_coeffs<S: Scalar>(coeffs: FunctionTable<S>) -> WalshExpansion<S> {
    // A WalshExpansion is just the coefficient table with its dimension.
    crate::walsh::WalshExpansion::from_coeffs(coeffs.n(), coeffs.values().to_vec())
}

/// Result of a Monte-Carlo run of the (1+lambda) EA.
#[derive(Clone, Copy, Debug)]
pub struct SimulationResult {
    /// Empirical mean number of generations to reach the optimum.
    pub mean: f64,
    /// Half-width of the normal-approximation 99% confidence interval.
    pub ci99_halfwidth: f64,
    /// Number of independent runs aggregated.
    pub runs: u64,
    /// PRNG identity, recorded for reproducibility.
    pub generator: &'static str,
}

/// Simulate the (1+lambda) EA maximizing `f(x) = n - 2|x|` (the Onemax
/// family member whose optimum is the all-zeros string) with bit-flip
/// probability `p`, from uniform random starts.
///
/// Each generation draws lambda offspring by independent per-bit flips
/// and keeps the best strictly improving one. Generations are counted
/// until the optimum is first sampled. Runs use one ChaCha12 stream per
/// run index, all derived from `seed`, so results are reproducible and
/// independent of scheduling; aggregation is in exact integers.
pub fn simulate_ea(
    n: usize,
    lambda: usize,
    p: f64,
    runs: u64,
    seed: RngSeed,
) -> Result<SimulationResult> {
    if !(0.0..1.0).contains(&p) || p == 0.0 {
        return Err(Error::ProbabilityOutOfRange);
    }
    if runs < 100 {
        return Err(Error::BudgetExceeded(format!(
            "need at least 100 runs, got {runs}"
        )));
    }
    if lambda == 0 {
        return Err(Error::IndexOutOfRange { what: "lambda", index: 0, max: usize::MAX });
    }
    let totals: Vec<u64> = (0..runs)
        .into_par_iter()
        .map(|run| single_run(n, lambda, p, seed.0, run))
        .collect();
    let sum: u128 = totals.iter().map(|&g| g as u128).sum();
    let sum_sq: u128 = totals.iter().map(|&g| (g as u128) * (g as u128)).sum();
    let runs_f = runs as f64;
    let mean = sum as f64 / runs_f;
    let var = (sum_sq as f64 - runs_f * mean * mean) / (runs_f - 1.0);
    // z for a two-sided 99% normal interval
    let z99 = 2.5758293035489004;
    Ok(SimulationResult {
        mean,
        ci99_halfwidth: z99 * (var / runs_f).sqrt(),
        runs,
        generator: "chacha12",
    })
}

fn single_run(n: usize, lambda: usize, p: f64, seed: u64, run: u64) -> u64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(run.wrapping_add(1));
    let words = n.div_ceil(64);
    let mut parent: Vec<u64> = (0..words).map(|_| rng.random()).collect();
    mask_tail(&mut parent, n);
    let mut parent_ones = popcount_words(&parent);
    let mut generations: u64 = 0;
    while parent_ones != 0 {
        generations += 1;
        let mut best_ones = parent_ones;
        let mut best: Option<Vec<u64>> = None;
        for _ in 0..lambda {
            let mut child = parent.clone();
            flip_bits(&mut child, n, p, &mut rng);
            let ones = popcount_words(&child);
            // maximizing n - 2|x| means fewer ones is strictly better
            if ones < best_ones {
                best_ones = ones;
                best = Some(child);
            }
        }
        if let Some(child) = best {
            parent = child;
            parent_ones = best_ones;
        }
    }
    generations
}

fn flip_bits(words: &mut [u64], n: usize, p: f64, rng: &mut ChaCha12Rng) {
    for i in 0..n {
        if rng.random_bool(p) {
            words[i / 64] ^= 1 << (i % 64);
        }
    }
}

fn popcount_words(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

fn mask_tail(words: &mut [u64], n: usize) {
    let used = n % 64;
    if used != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << used) - 1;
        }
    }
}
