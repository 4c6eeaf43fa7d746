//! Independent ground truth for the spectrum and metrics code.
//!
//! Nothing here goes through the dual code or the MacWilliams transform:
//! [`brute_force_spectrum`] enumerates every codeword, [`exhaustive_pue`]
//! enumerates error patterns, and [`monte_carlo_pue`] simulates the channel.
//!
//! The simulation transmits the all-zero codeword only. The code is linear,
//! so an error pattern `e` goes undetected on any codeword exactly when it
//! goes undetected on zero (`e` itself is a codeword); the payload never
//! matters. Error positions are drawn as geometric gaps between flips rather
//! than one Bernoulli trial per bit. The random source is ChaCha8
//! (`rand_chacha::ChaCha8Rng`), seeded from the 64-bit seed with one stream
//! per worker.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{columns_unchecked, encode, CodeSpec, Word};
use crate::error::{domain, unsupported, Result};
use crate::metrics::ChannelModel;
use crate::poly::{Generator, Poly};
use crate::spectrum::{Side, WeightDistribution};

/// Largest `k = n - p` enumerated by [`brute_force_spectrum`].
pub const MAX_BRUTE_FORCE_INFO_BITS: usize = 24;

/// Largest number of error patterns enumerated by [`exhaustive_pue`].
pub const MAX_EXHAUSTIVE_PATTERNS: u128 = 1 << 28;

/// Seed used by the command line when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de_2019_0001;

/// A channel error pattern: set bits are flipped positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPattern(Word);

impl ErrorPattern {
    pub fn new(spec: &CodeSpec, word: Word) -> Result<Self> {
        if word.len() != spec.n() {
            return Err(domain!(
                "error pattern has {} bits, code length is {}",
                word.len(),
                spec.n()
            ));
        }
        Ok(ErrorPattern(word))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    /// A nonzero pattern is undetected iff it is itself a codeword.
    pub fn is_undetected(&self, spec: &CodeSpec) -> Result<bool> {
        Ok(self.0.weight() > 0 && crate::codec::check(spec, &self.0)?)
    }
}

/// Primal weight distribution by enumerating all `2^k` codewords.
///
/// The basis codewords come from [`encode`]; the remaining words are
/// visited in Gray-code order, one XOR each.
pub fn brute_force_spectrum(spec: &CodeSpec) -> Result<WeightDistribution> {
    let k = spec.k();
    if k > MAX_BRUTE_FORCE_INFO_BITS {
        return Err(unsupported!(
            "brute-force spectrum needs 2^{k} codewords; at most 2^{MAX_BRUTE_FORCE_INFO_BITS} allowed"
        ));
    }
    if spec.n() > 64 {
        return Err(unsupported!("brute-force spectrum limited to n <= 64"));
    }
    let basis = (0..k)
        .map(|i| {
            let w = encode(spec, &Poly::monomial(i))?;
            Ok(w.as_poly().to_u64().expect("n <= 64"))
        })
        .collect::<Result<Vec<u64>>>()?;
    let mut counts = vec![0u64; spec.n() + 1];
    let mut word = 0u64;
    counts[0] = 1;
    for i in 1..(1u64 << k) {
        word ^= basis[i.trailing_zeros() as usize];
        counts[word.count_ones() as usize] += 1;
    }
    WeightDistribution::new(
        spec.n(),
        spec.p(),
        Side::Primal,
        counts
            .into_iter()
            .enumerate()
            .map(|(w, c)| (w, BigUint::from(c))),
    )
}

fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.saturating_mul((n - t) as u128) / (t as u128 + 1);
    }
    acc
}

/// Number of codewords of each weight `0..=max_weight`, by enumerating
/// every error pattern of that weight and testing its syndrome.
pub fn low_weight_counts(spec: &CodeSpec, max_weight: usize) -> Result<Vec<u64>> {
    let n = spec.n();
    let max_weight = max_weight.min(n);
    let patterns: u128 = (0..=max_weight).map(|w| binom_u128(n, w)).sum();
    if patterns > MAX_EXHAUSTIVE_PATTERNS {
        return Err(unsupported!(
            "{patterns} error patterns exceed the budget of {MAX_EXHAUSTIVE_PATTERNS}"
        ));
    }
    let cols = columns_unchecked(spec.generator(), n);
    let mut counts = vec![0u64; max_weight + 1];
    counts[0] = 1;
    fn walk(cols: &[u64], start: usize, depth: usize, syn: u64, max: usize, counts: &mut [u64]) {
        for j in start..cols.len() {
            let s = syn ^ cols[j];
            if s == 0 {
                counts[depth + 1] += 1;
            }
            if depth + 1 < max {
                walk(cols, j + 1, depth + 1, s, max, counts);
            }
        }
    }
    if max_weight > 0 {
        walk(&cols, 0, 0, 0, max_weight, &mut counts);
    }
    Ok(counts)
}

/// `sum eps^w (1-eps)^(n-w)` over codeword-valued error patterns of weight
/// `1..=max_weight`. Equals `P_ue` when `max_weight = n`.
pub fn exhaustive_pue(spec: &CodeSpec, channel: ChannelModel, max_weight: usize) -> Result<f64> {
    let counts = low_weight_counts(spec, max_weight)?;
    let eps = channel.epsilon();
    let n = spec.n() as i32;
    Ok(counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| c as f64 * eps.powi(w as i32) * (1.0 - eps).powi(n - w as i32))
        .sum())
}

/// Monte Carlo estimate of `P_ue`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub generator: Generator,
    pub n: usize,
    pub epsilon: f64,
    pub trials: u64,
    pub undetected: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub seed: u64,
    pub workers: usize,
    pub rng: String,
}

impl McEstimate {
    /// Expected number of undetected trials under a given exact `P_ue`.
    pub fn expected_count(&self, p_ue: f64) -> f64 {
        p_ue * self.trials as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn simulate(cols: &[u64], eps: f64, trials: u64, rng: &mut ChaCha8Rng) -> u64 {
    if eps == 0.0 || trials == 0 {
        return 0;
    }
    let gap = Geometric::new(eps).expect("0 < eps <= 1/2");
    let n = cols.len() as u64;
    let mut undetected = 0;
    for _ in 0..trials {
        let mut pos = gap.sample(rng);
        if pos >= n {
            continue;
        }
        let mut syn = 0u64;
        while pos < n {
            syn ^= cols[pos as usize];
            pos = pos.saturating_add(1 + gap.sample(rng));
        }
        if syn == 0 {
            undetected += 1;
        }
    }
    undetected
}

/// Single-worker simulation of `trials` transmissions.
pub fn monte_carlo_pue(spec: &CodeSpec, channel: ChannelModel, trials: u64, seed: u64) -> Result<McEstimate> {
    monte_carlo_pue_parallel(spec, channel, trials, seed, 1)
}

/// Trials split across `workers` ChaCha8 streams `(seed, worker)`. The
/// counts depend on the worker count but not on scheduling.
pub fn monte_carlo_pue_parallel(
    spec: &CodeSpec,
    channel: ChannelModel,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(domain!("at least one trial is required"));
    }
    let workers = workers.max(1);
    let cols = columns_unchecked(spec.generator(), spec.n());
    let eps = channel.epsilon();
    let share = |w: usize| trials / workers as u64 + u64::from((w as u64) < trials % workers as u64);
    let run = |w: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(w as u64);
        simulate(&cols, eps, share(w), &mut rng)
    };
    let undetected: u64 = if workers == 1 {
        run(0)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| domain!("cannot start {workers} workers: {e}"))?;
        pool.install(|| (0..workers).into_par_iter().map(run).sum())
    };
    let estimate = undetected as f64 / trials as f64;
    Ok(McEstimate {
        generator: spec.generator(),
        n: spec.n(),
        epsilon: eps,
        trials,
        undetected,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        seed,
        workers,
        rng: "ChaCha8".to_string(),
    })
}

/// A uniformly random word, for tests that need arbitrary inputs.
pub fn random_word(n: usize, rng: &mut impl Rng) -> Word {
    let mut w = Word::zero(n);
    for j in 0..n {
        if rng.random::<bool>() {
            w.set_bit(j, true);
        }
    }
    w
}
