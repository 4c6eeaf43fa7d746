//! Undetected-error probability and cumulative figures of merit.
//!
//! Over a binary symmetric channel with crossover `eps`,
//!
//! ```text
//! P_ue = sum_i A_i eps^i (1-eps)^(n-i)
//!      = 2^-p [1 + sum_i B_i (1-2eps)^i] - (1-eps)^n
//! ```
//!
//! The dual (B) form subtracts two numbers close to 1: the result can be
//! ~1e-40 while the operands are ~1. It is evaluated in wide fixed point,
//! and below [`PueConfig::crossover`] a dual distribution is converted to
//! its leading primal terms and the A form is used instead.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::krawtchouk::{self, Stop};
use crate::poly::Generator;
use crate::serde_big;
use crate::spectrum::{divide_sum, DistanceProfile, ProfileSweep, Run, Side, WeightDistribution};

/// Binary symmetric channel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ChannelModel {
    epsilon: f64,
}

impl ChannelModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(domain!("crossover probability {epsilon} outside [0, 1/2]"));
        }
        Ok(ChannelModel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Numeric regime for [`p_ue`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PueConfig {
    /// Below this `eps` a dual distribution is evaluated through its
    /// leading primal terms.
    pub crossover: f64,
    /// Primal terms `A_d .. A_{d+extra_terms}` used in that regime.
    pub extra_terms: usize,
}

impl Default for PueConfig {
    fn default() -> Self {
        PueConfig {
            crossover: 1e-4,
            extra_terms: 8,
        }
    }
}

/// Natural log of a big integer, finite for any size.
pub(crate) fn ln_big(v: &BigUint) -> f64 {
    if let Some(f) = v.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    let bits = v.bits();
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 bits") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `count * eps^i * (1-eps)^(n-i)`, evaluated in log space.
fn term(count: &BigUint, i: usize, n: usize, eps: f64) -> f64 {
    if count.is_zero() {
        return 0.0;
    }
    if eps == 0.0 {
        return if i == 0 { count.to_f64().unwrap_or(f64::INFINITY) } else { 0.0 };
    }
    let ln = ln_big(count) + i as f64 * eps.ln() + (n - i) as f64 * (-eps).ln_1p();
    ln.exp()
}

/// `sum_{i>=1} A_i eps^i (1-eps)^(n-i)` over a primal distribution.
pub fn p_ue_primal(dist: &WeightDistribution, channel: ChannelModel) -> Result<f64> {
    if dist.side() != Side::Primal {
        return Err(domain!("A form needs a primal distribution"));
    }
    Ok(dist
        .entries()
        .iter()
        .filter(|(w, _)| *w > 0)
        .map(|(w, c)| term(c, *w, dist.n(), channel.epsilon))
        .sum())
}

/// Fractional bits of the fixed-point B-form evaluation.
const FIXED_BITS: u64 = 256;

/// `x * 2^FIXED_BITS`, truncated; `x` is a finite non-negative double.
fn to_fixed(x: f64) -> BigUint {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | 1 << 52, exp - 1075) };
    let shift = FIXED_BITS as i64 + e;
    if shift >= 0 {
        BigUint::from(mant) << shift as u64
    } else {
        BigUint::from(mant) >> (-shift) as u64
    }
}

fn fixed_mul(a: &BigUint, b: &BigUint) -> BigUint {
    (a * b) >> FIXED_BITS
}

fn fixed_pow(base: &BigUint, mut exp: usize) -> BigUint {
    let mut acc = BigUint::from(1u8) << FIXED_BITS;
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fixed_mul(&acc, &sq);
        }
        exp >>= 1;
        if exp > 0 {
            sq = fixed_mul(&sq, &sq);
        }
    }
    acc
}

/// `2^-p [1 + sum_{i>=1} B_i (1-2eps)^i] - (1-eps)^n` over a dual
/// distribution, in 256-bit fixed point so that the final subtraction
/// keeps full double precision down to results near `2^-200`.
pub fn p_ue_dual(dist: &WeightDistribution, channel: ChannelModel) -> Result<f64> {
    if dist.side() != Side::Dual {
        return Err(domain!("B form needs a dual distribution"));
    }
    let one = BigUint::from(1u8) << FIXED_BITS;
    let e = to_fixed(channel.epsilon);
    let a = &one - (&e << 1u8);
    let b = &one - &e;
    let mut sum = BigUint::zero();
    let mut pow = one.clone();
    let mut at = 0usize;
    for (w, c) in dist.entries() {
        while at < *w {
            pow = fixed_mul(&pow, &a);
            at += 1;
        }
        sum += c * &pow;
    }
    let head = sum >> dist.p();
    let tail = fixed_pow(&b, dist.n());
    if head <= tail {
        // only truncation noise can make this negative
        return Ok(0.0);
    }
    let diff = head - tail;
    Ok(diff.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(FIXED_BITS as i32)))
}

/// Leading primal counts `(i, A_i)` for `i` in `d..=d+extra` from a dual
/// distribution.
pub fn leading_primal_terms(
    dual: &WeightDistribution,
    extra: usize,
) -> Result<Vec<(usize, BigUint)>> {
    let hist: Vec<(u64, u64)> = dual
        .entries()
        .iter()
        .map(|(w, c)| (*w as u64, c.to_u64().unwrap_or(u64::MAX)))
        .collect();
    let n = dual.n() as u64;
    let first = krawtchouk::sums(n, &hist, n, Stop::FirstNonzero)?;
    let d = first.len() - 1;
    if first[d].is_zero() {
        // no nonzero codeword at all
        return Ok(Vec::new());
    }
    let top = (d + extra).min(dual.n());
    let sums = krawtchouk::sums(n, &hist, top as u64, Stop::All)?;
    (d..=top)
        .map(|j| Ok((j, divide_sum(&sums[j], dual.p(), j)?)))
        .filter(|r| !matches!(r, Ok((_, a)) if a.is_zero()))
        .collect()
}

/// `P_ue` with the form chosen by the distribution's side and, for dual
/// input, by the numeric regime.
pub fn p_ue(dist: &WeightDistribution, channel: ChannelModel) -> Result<f64> {
    p_ue_with(dist, channel, PueConfig::default())
}

pub fn p_ue_with(dist: &WeightDistribution, channel: ChannelModel, cfg: PueConfig) -> Result<f64> {
    match dist.side() {
        Side::Primal => p_ue_primal(dist, channel),
        Side::Dual if channel.epsilon >= cfg.crossover => p_ue_dual(dist, channel),
        Side::Dual => {
            let eps = channel.epsilon;
            Ok(leading_primal_terms(dist, cfg.extra_terms)?
                .iter()
                .map(|(i, a)| term(a, *i, dist.n(), eps))
                .sum())
        }
    }
}

/// First nonzero addend `A_d eps^d (1-eps)^(n-d)`.
pub fn p_ue_first_term(d: u32, a_d: &BigUint, n: usize, channel: ChannelModel) -> Result<f64> {
    if d < 1 || a_d.is_zero() {
        return Err(domain!("first term needs d >= 1 and A_d >= 1"));
    }
    if d as usize > n {
        return Err(domain!("distance {d} exceeds length {n}"));
    }
    Ok(term(a_d, d as usize, n, channel.epsilon))
}

/// Cumulative scores of one generator over `[L..M]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scorecard {
    pub generator: Generator,
    pub min_len: usize,
    pub max_len: usize,
    /// `sum d(n)`.
    pub s_d: u64,
    /// `sum A_d(n)`.
    #[serde(with = "serde_big")]
    pub s_ad: BigUint,
    pub runs: Vec<Run>,
}

impl Scorecard {
    /// `S_d` recomputed from the runs alone.
    pub fn s_d_from_runs(&self) -> u64 {
        self.runs.iter().map(|r| r.len() as u64 * u64::from(r.d)).sum()
    }
}

pub fn cumulative_scores(profile: &DistanceProfile) -> Scorecard {
    Scorecard {
        generator: profile.generator(),
        min_len: profile.min_len(),
        max_len: profile.max_len(),
        s_d: profile.lengths().map(|(_, d, _)| u64::from(d)).sum(),
        s_ad: profile.a_d().iter().sum(),
        runs: profile.runs().to_vec(),
    }
}

/// Relative reduction `(P_ref - P_new) / P_ref` in percent.
pub fn improvement(p_ref: f64, p_new: f64) -> Result<f64> {
    if p_ref.is_nan() || p_ref <= 0.0 {
        return Err(domain!("reference probability must be positive, got {p_ref}"));
    }
    Ok((p_ref - p_new) / p_ref * 100.0)
}

/// `P_ref / P_new`; infinite when the new code has no undetected errors.
pub fn ratio(p_ref: f64, p_new: f64) -> f64 {
    p_ref / p_new
}

/// One row of figure data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub epsilon: f64,
    pub n: usize,
    pub p_ue: f64,
    pub p_ue_first: f64,
}

/// `(eps, n, P_ue, P_ue')` for every `n` in `[L..M]` and every `eps`,
/// ordered by `n` then by the given `eps` order.
pub fn curve_rows(
    g: Generator,
    min_len: usize,
    max_len: usize,
    eps: &[ChannelModel],
) -> Result<Vec<CurveRow>> {
    let mut sweep = ProfileSweep::new(g, min_len, max_len)?;
    let mut rows = Vec::with_capacity(eps.len() * (max_len - min_len + 1));
    while let Some(step) = sweep.step()? {
        let dual = sweep.dual_distribution()?;
        for &ch in eps {
            rows.push(CurveRow {
                epsilon: ch.epsilon,
                n: step.n,
                p_ue: p_ue(&dual, ch)?,
                p_ue_first: p_ue_first_term(step.d, &step.a_d, step.n, ch)?,
            });
        }
    }
    Ok(rows)
}

pub const CURVE_CSV_HEADER: &str = "epsilon,n,p_ue,p_ue_first";

pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut s = String::from(CURVE_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{:e},{},{:e},{:e}\n", r.epsilon, r.n, r.p_ue, r.p_ue_first));
    }
    s
}
