use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{divide_sum, DualSweepState};
use crate::error::{domain, internal, Error, Result};
use crate::krawtchouk::{self, Stop};
use crate::poly::Generator;

pub const PROFILE_SCHEMA: &str = "crcsel.profile/1";

/// Lengths `start..=end` sharing minimum distance `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub d: u32,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Minimum distance and minimum-weight count at every length of `[L..M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    generator: Generator,
    order: u64,
    min_len: usize,
    max_len: usize,
    runs: Vec<Run>,
    a_d: Vec<BigUint>,
}

/// One length of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthStep {
    pub n: usize,
    pub d: u32,
    pub a_d: BigUint,
}

/// Incremental profile computation over `[L..M]`, one length per call to
/// [`ProfileSweep::step`]. Callers may stop early; [`ProfileSweep::finish`]
/// only succeeds once the whole interval has been covered.
pub struct ProfileSweep {
    state: DualSweepState,
    min_len: usize,
    max_len: usize,
    hist: Vec<u32>,
    sparse: Vec<(u64, u64)>,
    runs: Vec<Run>,
    a_d: Vec<BigUint>,
    d_cap: u32,
}

impl ProfileSweep {
    pub fn new(g: Generator, min_len: usize, max_len: usize) -> Result<Self> {
        let state = DualSweepState::new(g)?;
        Self::from_state(state, min_len, max_len)
    }

    pub fn with_order(g: Generator, order: u64, min_len: usize, max_len: usize) -> Result<Self> {
        Self::from_state(DualSweepState::with_order(g, order)?, min_len, max_len)
    }

    fn from_state(mut state: DualSweepState, min_len: usize, max_len: usize) -> Result<Self> {
        let g = state.generator();
        let p = g.degree() as usize;
        if min_len <= p || min_len > max_len {
            return Err(domain!(
                "interval [{min_len}..{max_len}] must satisfy p={p} < L <= M"
            ));
        }
        if max_len as u64 > state.order() {
            return Err(domain!(
                "interval end {max_len} exceeds the order n_c={} of {g}",
                state.order()
            ));
        }
        while state.n() + 1 < min_len {
            state.extend()?;
        }
        Ok(ProfileSweep {
            state,
            min_len,
            max_len,
            hist: Vec::new(),
            sparse: Vec::new(),
            runs: Vec::new(),
            a_d: Vec::with_capacity(max_len - min_len + 1),
            // Singleton bound
            d_cap: (p + 1).min(min_len) as u32,
        })
    }

    pub fn generator(&self) -> Generator {
        self.state.generator()
    }

    pub fn order(&self) -> u64 {
        self.state.order()
    }

    /// Next length to be computed, or `None` when the interval is done.
    pub fn next_length(&self) -> Option<usize> {
        let n = self.state.n() + 1;
        (n <= self.max_len).then_some(n)
    }

    /// Computes the next length. `d` is found by scanning `j = 1, 2, ...`
    /// up to the previous length's distance, which bounds it from above.
    pub fn step(&mut self) -> Result<Option<LengthStep>> {
        let Some(n) = self.next_length() else {
            return Ok(None);
        };
        let g = self.state.generator();
        let p = g.degree() as usize;
        self.state.extend_with_histogram(&mut self.hist)?;
        self.sparse.clear();
        self.sparse.extend(
            self.hist
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(w, &c)| (w as u64, u64::from(c))),
        );
        let cap = self.d_cap.min(n as u32);
        let sums = krawtchouk::sums(n as u64, &self.sparse, u64::from(cap), Stop::FirstNonzero)?;
        let found = sums.iter().enumerate().skip(1).find(|(_, s)| !s.is_zero());
        let Some((d, s)) = found else {
            return Err(internal!(
                "C_({g},{n}) has no codeword of weight <= {cap}, but d cannot increase with n"
            ));
        };
        let d = d as u32;
        if d < 2 {
            return Err(internal!(
                "C_({g},{n}) has distance {d} although n <= n_c"
            ));
        }
        let a_d = divide_sum(s, p, d as usize)?;
        if let (Some(last), Some(prev)) = (self.runs.last_mut(), self.a_d.last()) {
            if last.d == d {
                if a_d < *prev {
                    return Err(internal!(
                        "A_{d} decreased from {prev} to {a_d} at n={n} for {g}"
                    ));
                }
                last.end = n;
            } else {
                self.runs.push(Run { start: n, end: n, d });
            }
        } else {
            self.runs.push(Run { start: n, end: n, d });
        }
        self.a_d.push(a_d.clone());
        self.d_cap = d;
        Ok(Some(LengthStep { n, d, a_d }))
    }

    /// Dual distribution at the most recently computed length.
    pub fn dual_distribution(&self) -> Result<super::WeightDistribution> {
        let p = self.state.generator().degree() as usize;
        super::WeightDistribution::new(
            self.state.n(),
            p,
            super::Side::Dual,
            self.sparse.iter().map(|&(w, c)| (w as usize, BigUint::from(c))),
        )
    }

    /// Lengths computed so far.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn finish(mut self) -> Result<DistanceProfile> {
        while self.step()?.is_some() {}
        Ok(DistanceProfile {
            generator: self.state.generator(),
            order: self.state.order(),
            min_len: self.min_len,
            max_len: self.max_len,
            runs: self.runs,
            a_d: self.a_d,
        })
    }
}

/// Distance profile of `g` over `[min_len..=max_len]` from a single
/// incremental dual sweep.
pub fn distance_profile(g: Generator, min_len: usize, max_len: usize) -> Result<DistanceProfile> {
    ProfileSweep::new(g, min_len, max_len)?.finish()
}

impl DistanceProfile {
    /// Rebuilds a profile from stored parts, checking the run invariants.
    pub fn from_parts(
        generator: Generator,
        order: u64,
        min_len: usize,
        max_len: usize,
        runs: Vec<Run>,
        a_d: Vec<BigUint>,
    ) -> Result<Self> {
        check_runs(&runs, min_len, max_len)?;
        if a_d.len() != max_len - min_len + 1 {
            return Err(domain!(
                "{} A_d values for {} lengths",
                a_d.len(),
                max_len - min_len + 1
            ));
        }
        Ok(DistanceProfile {
            generator,
            order,
            min_len,
            max_len,
            runs,
            a_d,
        })
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Runs in ascending `n`; `d` strictly decreases from run to run.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn a_d(&self) -> &[BigUint] {
        &self.a_d
    }

    pub fn d_at(&self, n: usize) -> Option<u32> {
        self.runs
            .iter()
            .find(|r| r.start <= n && n <= r.end)
            .map(|r| r.d)
    }

    pub fn a_d_at(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(self.min_len).and_then(|i| self.a_d.get(i))
    }

    /// `(n, d, A_d)` for every length.
    pub fn lengths(&self) -> impl Iterator<Item = (usize, u32, &BigUint)> + '_ {
        self.runs
            .iter()
            .flat_map(|r| (r.start..=r.end).map(move |n| (n, r.d)))
            .zip(&self.a_d)
            .map(|((n, d), a)| (n, d, a))
    }

    /// Compact run notation, highest `d` first: `"10:17-18, 8:19-27"`.
    pub fn runs_notation(&self) -> String {
        self.runs
            .iter()
            .map(|r| format!("{}:{}-{}", r.d, r.start, r.end))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ProfileDoc {
            schema: PROFILE_SCHEMA.to_string(),
            generator: self.generator,
            order: self.order,
            min_len: self.min_len,
            max_len: self.max_len,
            runs: self.runs.clone(),
            a_d: self.a_d.iter().map(|a| a.to_string()).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc = serde_json::from_str(text)?;
        if doc.schema != PROFILE_SCHEMA {
            return Err(Error::Parse(format!("unknown profile schema {:?}", doc.schema)));
        }
        let a_d = doc
            .a_d
            .iter()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|e| Error::Parse(format!("bad A_d value {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(doc.generator, doc.order, doc.min_len, doc.max_len, doc.runs, a_d)
    }

    /// `n,d,a_d` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,d,a_d\n");
        for (n, d, a) in self.lengths() {
            let _ = writeln!(s, "{n},{d},{a}");
        }
        s
    }
}

pub(crate) fn check_runs(runs: &[Run], min_len: usize, max_len: usize) -> Result<()> {
    let mut expect = min_len;
    let mut prev_d = u32::MAX;
    for r in runs {
        if r.start != expect || r.end < r.start {
            return Err(domain!("runs do not partition [{min_len}..{max_len}]"));
        }
        if r.d >= prev_d {
            return Err(domain!("run distances must strictly decrease"));
        }
        prev_d = r.d;
        expect = r.end + 1;
    }
    if expect != max_len + 1 {
        return Err(domain!("runs do not partition [{min_len}..{max_len}]"));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    schema: String,
    generator: Generator,
    order: u64,
    min_len: usize,
    max_len: usize,
    runs: Vec<Run>,
    a_d: Vec<String>,
}
