//! Weight distributions of CRC codes and their duals.
//!
//! The primal `[n, n-p]` code has `2^(n-p)` codewords; the dual has only
//! `2^p`. Everything here works from the dual side: the `2^p` dual weights
//! are enumerated (incrementally over `n` with [`DualSweepState`]) and the
//! primal counts `A_j` are recovered exactly through the MacWilliams
//! identity `A_j = 2^-p sum_i B_i K_j(i; n)`.

mod profile;
mod sweep;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, internal, Result};
use crate::krawtchouk::{self, Stop};
use crate::poly::Generator;

pub use profile::{distance_profile, DistanceProfile, LengthStep, ProfileSweep, Run};
pub use sweep::{DualSweepState, MAX_SWEEP_DEGREE, MAX_SWEEP_LENGTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Primal,
    Dual,
}

/// Exact codeword counts by weight, stored sparsely over nonzero counts.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    p: usize,
    side: Side,
    counts: Vec<(usize, BigUint)>,
}

impl WeightDistribution {
    /// Validates `counts[0] = 1`, weights within `0..=n`, and the total
    /// (`2^p` for the dual, `2^(n-p)` for the primal side).
    pub fn new(
        n: usize,
        p: usize,
        side: Side,
        counts: impl IntoIterator<Item = (usize, BigUint)>,
    ) -> Result<Self> {
        let mut counts: Vec<(usize, BigUint)> =
            counts.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        counts.sort_by_key(|(w, _)| *w);
        if counts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(domain!("duplicate weight in distribution"));
        }
        if let Some((w, _)) = counts.iter().find(|(w, _)| *w > n) {
            return Err(domain!("weight {w} exceeds length {n}"));
        }
        if counts.first() != Some(&(0, BigUint::one())) {
            return Err(domain!("a linear code has exactly one word of weight 0"));
        }
        if p > n {
            return Err(domain!("{p} check bits exceed length {n}"));
        }
        let dim = match side {
            Side::Dual => p,
            Side::Primal => n - p,
        };
        let total: BigUint = counts.iter().map(|(_, c)| c).sum();
        if total != BigUint::one() << dim {
            return Err(domain!(
                "{side:?} distribution totals {total}, expected 2^{dim}"
            ));
        }
        Ok(WeightDistribution { n, p, side, counts })
    }

    pub(crate) fn from_dense_dual(n: usize, p: usize, hist: &[u64]) -> Result<Self> {
        Self::new(
            n,
            p,
            Side::Dual,
            hist.iter()
                .enumerate()
                .map(|(w, &c)| (w, BigUint::from(c))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Check bits of the underlying CRC code.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `(weight, count)` pairs with nonzero count, ascending weight.
    pub fn entries(&self) -> &[(usize, BigUint)] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> BigUint {
        self.counts
            .binary_search_by_key(&w, |(x, _)| *x)
            .map(|i| self.counts[i].1.clone())
            .unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().map(|(_, c)| c).sum()
    }

    /// Smallest nonzero weight present, if any.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.iter().map(|(w, _)| *w).find(|&w| w > 0)
    }

    /// Dense `0..=n` count vector.
    pub fn dense(&self) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.n + 1];
        for (w, c) in &self.counts {
            v[*w] = c.clone();
        }
        v
    }

    fn dual_hist(&self) -> Result<Vec<(u64, u64)>> {
        if self.side != Side::Dual {
            return Err(domain!("expected a dual weight distribution"));
        }
        self.counts
            .iter()
            .map(|(w, c)| {
                c.to_u64()
                    .map(|c| (*w as u64, c))
                    .ok_or_else(|| domain!("dual count {c} does not fit 64 bits"))
            })
            .collect()
    }
}

impl fmt::Debug for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(n={}, p={}) {{", self.side, self.n, self.p)?;
        for (i, (w, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}:{c}")?;
        }
        f.write_str("}")
    }
}

/// Dual weight distribution of `C_{g,n}` for `p <= n <= order(g)`.
pub fn dual_weight_distribution(g: Generator, n: usize) -> Result<WeightDistribution> {
    let p = g.degree() as usize;
    let mut st = DualSweepState::new(g)?;
    if n < p {
        return Err(domain!("length {n} is below the {p} check bits"));
    }
    if n as u64 > st.order() {
        return Err(domain!(
            "length {n} exceeds the order n_c={} of {g}",
            st.order()
        ));
    }
    for _ in 0..n {
        st.extend()?;
    }
    WeightDistribution::from_dense_dual(n, p, &st.histogram())
}

/// Converts a Krawtchouk sum into `A_j = S_j / 2^p`, asserting exactness.
pub(crate) fn divide_sum(sum: &BigInt, p: usize, j: usize) -> Result<BigUint> {
    let scale = BigInt::one() << p;
    let q = sum / &scale;
    if &q * &scale != *sum {
        return Err(internal!(
            "MacWilliams sum for A_{j} is not divisible by 2^{p}"
        ));
    }
    if krawtchouk::is_negative(&q) {
        return Err(internal!("MacWilliams sum for A_{j} is negative"));
    }
    Ok(q.to_biguint().expect("nonnegative"))
}

/// Exact `A_j` of the primal code from its dual distribution.
pub fn macwilliams_coefficient(dual: &WeightDistribution, j: usize) -> Result<BigUint> {
    if j > dual.n {
        return Err(domain!("weight {j} exceeds length {}", dual.n));
    }
    let hist = dual.dual_hist()?;
    let sums = krawtchouk::sums(dual.n as u64, &hist, j as u64, Stop::All)?;
    divide_sum(&sums[j], dual.p, j)
}

/// Complete primal distribution recovered from the dual one.
pub fn primal_from_dual(dual: &WeightDistribution) -> Result<WeightDistribution> {
    let hist = dual.dual_hist()?;
    let sums = krawtchouk::sums(dual.n as u64, &hist, dual.n as u64, Stop::All)?;
    let counts = sums
        .iter()
        .enumerate()
        .map(|(j, s)| Ok((j, divide_sum(s, dual.p, j)?)))
        .collect::<Result<Vec<_>>>()?;
    WeightDistribution::new(dual.n, dual.p, Side::Primal, counts)
}

/// Minimum distance `d` of `C_{g,n}` and the number `A_d` of
/// minimum-weight codewords.
pub fn min_distance(g: Generator, n: usize) -> Result<(u32, BigUint)> {
    if n <= g.degree() as usize {
        return Err(domain!(
            "C_({g},{n}) has no nonzero codeword: n must exceed p={}",
            g.degree()
        ));
    }
    let dual = dual_weight_distribution(g, n)?;
    let hist = dual.dual_hist()?;
    let cap = (dual.p + 1).min(n) as u64;
    let sums = krawtchouk::sums(n as u64, &hist, cap, Stop::FirstNonzero)?;
    let (j, s) = sums
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, s)| !s.is_zero())
        .ok_or_else(|| internal!("no codeword of weight <= {cap} in C_({g},{n})"))?;
    Ok((j as u32, divide_sum(s, dual.p, j)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(v: u64) -> Generator {
        Generator::new(v).unwrap()
    }

    fn small(d: &WeightDistribution) -> Vec<(usize, u64)> {
        d.entries()
            .iter()
            .map(|(w, c)| (*w, c.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn dual_distribution_examples() {
        let b = dual_weight_distribution(gen(0x7), 3).unwrap();
        assert_eq!(small(&b), vec![(0, 1), (2, 3)]);

        for g in [0x7u64, 0x61, 0xe0f, 0x1a2eb] {
            let p = gen(g).degree() as usize;
            let b = dual_weight_distribution(gen(g), p).unwrap();
            for w in 0..=p {
                let binom = krawtchouk::binomial(p as u64, w as u64);
                assert_eq!(BigInt::from(b.count(w)), binom, "{g:x} w={w}");
            }
        }

        let b = dual_weight_distribution(gen(0x61), 25).unwrap();
        assert_eq!(b.total(), BigUint::from(64u32));
    }

    #[test]
    fn dual_distribution_range_errors() {
        assert!(dual_weight_distribution(gen(0x61), 5).is_err());
        let err = dual_weight_distribution(gen(0x61), 64).unwrap_err();
        assert!(err.to_string().contains("63"));
    }

    #[test]
    fn macwilliams_examples() {
        let b = dual_weight_distribution(gen(0x7), 3).unwrap();
        assert_eq!(macwilliams_coefficient(&b, 1).unwrap(), BigUint::zero());
        assert_eq!(macwilliams_coefficient(&b, 3).unwrap(), BigUint::one());
        for g in [0x61u64, 0x59, 0xe0f] {
            let b = dual_weight_distribution(gen(g), 30).unwrap();
            assert_eq!(macwilliams_coefficient(&b, 0).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn macwilliams_flags_inconsistent_input() {
        // Valid totals but not the dual of any CRC code: the sum for A_1
        // is not divisible by 2^p.
        let fake = WeightDistribution::new(
            5,
            2,
            Side::Dual,
            [(0, 1u32), (1, 1), (3, 2)].map(|(w, c)| (w, BigUint::from(c))),
        )
        .unwrap();
        let err = primal_from_dual(&fake).unwrap_err();
        assert!(matches!(err, crate::Error::Internal(_)), "{err}");
    }

    #[test]
    fn distribution_validation() {
        let bad = WeightDistribution::new(3, 2, Side::Dual, [(0, BigUint::from(2u32))]);
        assert!(bad.is_err());
        let bad = WeightDistribution::new(
            3,
            2,
            Side::Dual,
            [(0, BigUint::one()), (4, BigUint::from(3u32))],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(gen(0x61), 18).unwrap().0, 3);
        assert_eq!(
            min_distance(gen(0x61), 7).unwrap(),
            (3, BigUint::one())
        );
        assert_eq!(min_distance(gen(0xe0f), 149).unwrap().0, 4);
        assert_eq!(min_distance(gen(0xe0f), 150).unwrap().0, 3);
    }

    #[test]
    fn primal_from_dual_of_the_3_1_code() {
        let b = dual_weight_distribution(gen(0x7), 3).unwrap();
        let a = primal_from_dual(&b).unwrap();
        assert_eq!(a.side(), Side::Primal);
        assert_eq!(small(&a), vec![(0, 1), (3, 1)]);
    }
}
