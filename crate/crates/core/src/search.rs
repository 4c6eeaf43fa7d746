//! Exhaustive search for the generator with the largest `S_d` over an
//! interval, ties broken by the smallest `S_Ad`.
//!
//! Candidates are the degree-`p` polynomials with constant term 1, one per
//! reciprocal pair (the numerically smaller). Each candidate is an
//! independent work unit. Work proceeds in fixed-size chunks of consecutive
//! candidates: a chunk is evaluated in parallel, merged in candidate order,
//! and appended to the checkpoint before the next chunk starts. The early
//! rejection bound only uses results from completed chunks, so the report
//! does not depend on the worker count or on where a run was resumed.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, unsupported, Error, Result};
use crate::metrics::{cumulative_scores, Scorecard};
use crate::poly::Generator;
use crate::serde_big;
use crate::spectrum::{ProfileSweep, Run, MAX_SWEEP_DEGREE};

pub const REPORT_SCHEMA: &str = "crcsel.search-report/1";
pub const CHECKPOINT_SCHEMA: &str = "crcsel.checkpoint/1";

/// Above this `p` a full search needs [`SearchConfig::long_run`].
pub const LONG_RUN_DEGREE: u32 = 16;

/// Stop evaluating a candidate whose distance falls below `required_d` at
/// or after `length_threshold`, once its best reachable `S_d` is below the
/// incumbent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarlyReject {
    pub length_threshold: usize,
    pub required_d: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub p: u32,
    pub min_len: usize,
    pub max_len: usize,
    pub early_reject: Option<EarlyReject>,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub top_k: usize,
    /// Candidates per scheduling unit.
    pub chunk_size: usize,
    /// Permits full searches above [`LONG_RUN_DEGREE`].
    pub long_run: bool,
}

impl SearchConfig {
    /// Defaults: early rejection off for `p <= 11`; otherwise threshold
    /// `L + (M-L)/8` with required distance 6.
    pub fn new(p: u32, min_len: usize, max_len: usize) -> Self {
        let early_reject = (p > 11).then(|| EarlyReject {
            length_threshold: min_len + max_len.saturating_sub(min_len) / 8,
            required_d: 6,
        });
        SearchConfig {
            p,
            min_len,
            max_len,
            early_reject,
            workers: 1,
            checkpoint: None,
            top_k: 10,
            chunk_size: 64,
            long_run: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SWEEP_DEGREE).contains(&self.p) {
            return Err(unsupported!("search supports 1 <= p <= {MAX_SWEEP_DEGREE}, got {}", self.p));
        }
        if self.min_len <= self.p as usize || self.min_len > self.max_len {
            return Err(domain!(
                "interval [{}..{}] must satisfy p={} < L <= M",
                self.min_len,
                self.max_len,
                self.p
            ));
        }
        if let Some(er) = self.early_reject {
            if er.required_d < 2 {
                return Err(domain!("early rejection needs required_d >= 2"));
            }
        }
        if self.top_k == 0 || self.chunk_size == 0 || self.workers == 0 {
            return Err(domain!("top_k, chunk_size and workers must be positive"));
        }
        if self.p > LONG_RUN_DEGREE && !self.long_run {
            return Err(unsupported!(
                "a full search at p={} evaluates ~2^{} candidates; pass the long-run flag to start it",
                self.p,
                self.p - 2
            ));
        }
        Ok(())
    }

    /// Identity of the search for checkpoint binding. Worker count and
    /// file paths are excluded: they do not change the result.
    pub fn identity_hash(&self) -> String {
        let ident = serde_json::json!({
            "p": self.p,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "early_reject": self.early_reject,
            "top_k": self.top_k,
            "chunk_size": self.chunk_size,
        });
        hex::encode(Sha256::digest(ident.to_string().as_bytes()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Evaluated,
    RejectedOrder,
    RejectedEarly,
    RejectedReciprocal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub generator: Generator,
    pub order: u64,
    pub status: Status,
    /// Present iff `status` is `Evaluated`.
    pub scorecard: Option<Scorecard>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Every degree-`p` polynomial with constant term 1, ascending.
pub fn all_generators(p: u32) -> impl Iterator<Item = Generator> {
    let top = 1u64 << p;
    (0..1u64 << (p - 1)).map(move |m| Generator::new(top | m << 1 | 1).expect("valid"))
}

/// One representative per reciprocal pair: `g <= reciprocal(g)`.
pub fn reciprocal_representatives(p: u32) -> impl Iterator<Item = Generator> {
    all_generators(p).filter(|g| *g <= g.reciprocal())
}

/// Representatives whose order reaches `max_len`, ascending.
pub fn enumerate_candidates(p: u32, max_len: usize) -> Result<Vec<Generator>> {
    if !(1..=MAX_SWEEP_DEGREE).contains(&p) {
        return Err(unsupported!("candidate enumeration supports 1 <= p <= {MAX_SWEEP_DEGREE}"));
    }
    let mut out = Vec::new();
    for g in reciprocal_representatives(p) {
        if g.order()? >= max_len as u64 {
            out.push(g);
        }
    }
    Ok(out)
}

/// Evaluates one candidate without an incumbent (early rejection never
/// fires without something to compare against).
pub fn evaluate_candidate(g: Generator, config: &SearchConfig) -> Result<EvalResult> {
    evaluate_against(g, config, None)
}

/// Evaluates `g`, rejecting early only if its best reachable `S_d` is
/// strictly below `incumbent`.
pub fn evaluate_against(g: Generator, config: &SearchConfig, incumbent: Option<u64>) -> Result<EvalResult> {
    let start = Instant::now();
    let order = g.order()?;
    let done = |status, scorecard| EvalResult {
        generator: g,
        order,
        status,
        scorecard,
        elapsed: start.elapsed(),
    };
    if g > g.reciprocal() {
        return Ok(done(Status::RejectedReciprocal, None));
    }
    if order < config.max_len as u64 {
        return Ok(done(Status::RejectedOrder, None));
    }
    let mut sweep = ProfileSweep::with_order(g, order, config.min_len, config.max_len)?;
    let mut partial = 0u64;
    while let Some(step) = sweep.step()? {
        partial += u64::from(step.d);
        if let (Some(er), Some(best)) = (config.early_reject, incumbent) {
            if step.n >= er.length_threshold && step.d < er.required_d {
                // d cannot grow again, so every remaining length adds at most d
                let bound = partial + u64::from(step.d) * (config.max_len - step.n) as u64;
                if bound < best {
                    return Ok(done(Status::RejectedEarly, None));
                }
            }
        }
    }
    let profile = sweep.finish()?;
    Ok(done(Status::Evaluated, Some(cumulative_scores(&profile))))
}

fn rank_key(s: &Scorecard) -> (std::cmp::Reverse<u64>, &BigUint, Generator) {
    (std::cmp::Reverse(s.s_d), &s.s_ad, s.generator)
}

/// Evaluated scorecards ordered by `S_d` descending, `S_Ad` ascending,
/// then generator value ascending; truncated to `top_k`.
pub fn rank(results: &[EvalResult], top_k: usize) -> Vec<Scorecard> {
    let mut cards: Vec<&Scorecard> = results
        .iter()
        .filter(|r| r.status == Status::Evaluated)
        .filter_map(|r| r.scorecard.as_ref())
        .collect();
    cards.sort_by(|a, b| rank_key(a).cmp(&rank_key(b)));
    cards.into_iter().take(top_k).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateStats {
    /// `2^(p-1)`.
    pub total: u64,
    pub self_reciprocal: u64,
    pub after_reciprocal_dedup: u64,
    pub after_order_filter: u64,
    pub evaluated: u64,
    pub rejected_early: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_secs: f64,
    /// Sum of per-candidate times, order filter rejections.
    pub order_filter_secs: f64,
    /// Sum of per-candidate times, profiles (complete or rejected early).
    pub evaluation_secs: f64,
    pub resumed_candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub p: u32,
    pub min_len: usize,
    pub max_len: usize,
    pub early_reject: Option<EarlyReject>,
    pub workers: usize,
    pub top_k: usize,
    pub chunk_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub rank: usize,
    pub generator: Generator,
    pub reciprocal: Generator,
    pub order: u64,
    pub s_d: u64,
    #[serde(with = "serde_big")]
    pub s_ad: BigUint,
    pub runs: Vec<Run>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: String,
    pub config: ConfigEcho,
    pub stats: CandidateStats,
    pub ranked: Vec<RankedEntry>,
    pub timings: Timings,
    /// SHA-256 of the ranked list's canonical JSON.
    pub ranked_hash: String,
}

impl SearchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn winner(&self) -> Option<&RankedEntry> {
        self.ranked.first()
    }

    /// Plain-text table of the ranked list.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "p={} interval [{}..{}]: {} generators, {} after reciprocal dedup, {} with order >= {}\n",
            self.config.p,
            self.config.min_len,
            self.config.max_len,
            self.stats.total,
            self.stats.after_reciprocal_dedup,
            self.stats.after_order_filter,
            self.config.max_len
        );
        s.push_str(&format!(
            "evaluated {}, rejected early {}\n",
            self.stats.evaluated, self.stats.rejected_early
        ));
        s.push_str(&format!(
            "{:>4}  {:<18} {:>9} {:>8} {:>14}  runs\n",
            "rank", "g (reciprocal)", "n_c", "S_d", "S_Ad"
        ));
        for e in &self.ranked {
            s.push_str(&format!(
                "{:>4}  {:<18} {:>9} {:>8} {:>14}  {}\n",
                e.rank,
                format!("{} ({})", e.generator, e.reciprocal),
                e.order,
                e.s_d,
                e.s_ad,
                runs_notation(&e.runs)
            ));
        }
        s.push_str(&format!("ranked-list sha256 {}\n", self.ranked_hash));
        s
    }
}

pub fn runs_notation(runs: &[Run]) -> String {
    runs.iter()
        .map(|r| format!("{}:{}-{}", r.d, r.start, r.end))
        .collect::<Vec<_>>()
        .join(", ")
}

fn ranked_hash(ranked: &[RankedEntry]) -> Result<String> {
    let canonical = serde_json::to_string(ranked)?;
    Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
}

/// k-th best `S_d` so far, if at least `k` candidates have been evaluated.
fn incumbent(results: &[EvalResult], k: usize) -> Option<u64> {
    let mut sd: Vec<u64> = results
        .iter()
        .filter_map(|r| r.scorecard.as_ref().map(|s| s.s_d))
        .collect();
    if sd.len() < k {
        return None;
    }
    sd.sort_unstable_by(|a, b| b.cmp(a));
    Some(sd[k - 1])
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CheckpointLine {
    Header {
        schema: String,
        config_hash: String,
        p: u32,
        min_len: usize,
        max_len: usize,
    },
    Candidate {
        index: usize,
        result: EvalResult,
    },
}

struct Checkpoint {
    file: File,
}

impl Checkpoint {
    /// Opens or creates the checkpoint, returning the results already on
    /// disk. Anything unreadable is an error; a run never silently restarts.
    fn open(path: &Path, cfg: &SearchConfig, candidates: &[Generator]) -> Result<(Self, Vec<EvalResult>)> {
        let hash = cfg.identity_hash();
        let mut done = Vec::new();
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let bad = |line: usize, what: String| Error::Checkpoint(format!("{} line {line}: {what}", path.display()));
            let Some(header_end) = text.find('\n') else {
                return Err(Error::Checkpoint(format!("{} has no complete header", path.display())));
            };
            match serde_json::from_str::<CheckpointLine>(&text[..header_end]) {
                Ok(CheckpointLine::Header { schema, config_hash, .. }) => {
                    if schema != CHECKPOINT_SCHEMA {
                        return Err(Error::Checkpoint(format!("unknown checkpoint schema {schema:?}")));
                    }
                    if config_hash != hash {
                        return Err(Error::Checkpoint(format!(
                            "{} belongs to a different search configuration",
                            path.display()
                        )));
                    }
                }
                _ => return Err(Error::Checkpoint(format!("{} has no valid header", path.display()))),
            }
            // byte offset just past the last complete chunk
            let mut keep = header_end + 1;
            let mut pos = header_end + 1;
            let mut lineno = 1;
            while pos < text.len() {
                lineno += 1;
                let Some(len) = text[pos..].find('\n') else {
                    // torn final write
                    break;
                };
                let line = &text[pos..pos + len];
                pos += len + 1;
                let rec = serde_json::from_str::<CheckpointLine>(line).map_err(|e| bad(lineno, e.to_string()))?;
                let CheckpointLine::Candidate { index, result } = rec else {
                    return Err(bad(lineno, "unexpected header".into()));
                };
                if index != done.len() || candidates.get(index) != Some(&result.generator) {
                    return Err(bad(lineno, format!("record {index} out of sequence")));
                }
                done.push(result);
                if done.len() % cfg.chunk_size == 0 || done.len() == candidates.len() {
                    keep = pos;
                }
            }
            // an interrupted chunk is recomputed from its start
            if done.len() != candidates.len() {
                done.truncate(done.len() - done.len() % cfg.chunk_size);
            }
            let file = OpenOptions::new().write(true).open(path)?;
            file.set_len(keep as u64)?;
            drop(file);
            let file = OpenOptions::new().append(true).open(path)?;
            Ok((Checkpoint { file }, done))
        } else {
            let mut file = File::create(path)?;
            let header = CheckpointLine::Header {
                schema: CHECKPOINT_SCHEMA.to_string(),
                config_hash: hash,
                p: cfg.p,
                min_len: cfg.min_len,
                max_len: cfg.max_len,
            };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
            file.sync_data()?;
            Ok((Checkpoint { file }, done))
        }
    }

    fn append(&mut self, first_index: usize, results: &[EvalResult]) -> Result<()> {
        let mut buf = String::new();
        for (i, r) in results.iter().enumerate() {
            let line = CheckpointLine::Candidate {
                index: first_index + i,
                result: r.clone(),
            };
            buf.push_str(&serde_json::to_string(&line)?);
            buf.push('\n');
        }
        self.file.write_all(buf.as_bytes())?;
        self.file.sync_data()?;
        Ok(())
    }
}

/// Runs the whole search.
pub fn run_search(config: &SearchConfig) -> Result<SearchReport> {
    run_search_until(config, None)?.ok_or_else(|| unreachable!("no chunk limit"))
}

/// Runs at most `max_chunks` further chunks; `None` if the search is not
/// finished afterwards (its progress is in the checkpoint).
pub fn run_search_until(config: &SearchConfig, max_chunks: Option<usize>) -> Result<Option<SearchReport>> {
    config.validate()?;
    let wall = Instant::now();
    let p = config.p;
    let candidates: Vec<Generator> = reciprocal_representatives(p).collect();
    let self_reciprocal = candidates.iter().filter(|g| **g == g.reciprocal()).count() as u64;

    let (mut checkpoint, mut results) = match &config.checkpoint {
        Some(path) => {
            let (c, r) = Checkpoint::open(path, config, &candidates)?;
            (Some(c), r)
        }
        None => (None, Vec::new()),
    };
    let resumed = results.len() as u64;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| domain!("cannot start {} workers: {e}", config.workers))?;

    let mut chunks_run = 0usize;
    while results.len() < candidates.len() {
        if max_chunks.is_some_and(|m| chunks_run >= m) {
            return Ok(None);
        }
        let start = results.len();
        let end = (start + config.chunk_size).min(candidates.len());
        let bound = incumbent(&results, config.top_k);
        let chunk: Vec<EvalResult> = pool.install(|| {
            candidates[start..end]
                .par_iter()
                .map(|&g| evaluate_against(g, config, bound))
                .collect::<Result<Vec<_>>>()
        })?;
        if let Some(c) = checkpoint.as_mut() {
            c.append(start, &chunk)?;
        }
        results.extend(chunk);
        chunks_run += 1;
    }

    let count = |s: Status| results.iter().filter(|r| r.status == s).count() as u64;
    let secs = |pred: &dyn Fn(&EvalResult) -> bool| {
        results.iter().filter(|r| pred(r)).map(|r| r.elapsed.as_secs_f64()).sum::<f64>()
    };
    let stats = CandidateStats {
        total: 1u64 << (p - 1),
        self_reciprocal,
        after_reciprocal_dedup: candidates.len() as u64,
        after_order_filter: candidates.len() as u64 - count(Status::RejectedOrder),
        evaluated: count(Status::Evaluated),
        rejected_early: count(Status::RejectedEarly),
    };
    let orders: std::collections::HashMap<Generator, u64> =
        results.iter().map(|r| (r.generator, r.order)).collect();
    let ranked: Vec<RankedEntry> = rank(&results, config.top_k)
        .into_iter()
        .enumerate()
        .map(|(i, s)| RankedEntry {
            rank: i + 1,
            generator: s.generator,
            reciprocal: s.generator.reciprocal(),
            order: orders[&s.generator],
            s_d: s.s_d,
            s_ad: s.s_ad,
            runs: s.runs,
        })
        .collect();
    let ranked_hash = ranked_hash(&ranked)?;
    Ok(Some(SearchReport {
        schema: REPORT_SCHEMA.to_string(),
        config: ConfigEcho {
            p,
            min_len: config.min_len,
            max_len: config.max_len,
            early_reject: config.early_reject,
            workers: config.workers,
            top_k: config.top_k,
            chunk_size: config.chunk_size,
        },
        stats,
        ranked,
        timings: Timings {
            wall_secs: wall.elapsed().as_secs_f64(),
            order_filter_secs: secs(&|r| r.status == Status::RejectedOrder),
            evaluation_secs: secs(&|r| matches!(r.status, Status::Evaluated | Status::RejectedEarly)),
            resumed_candidates: resumed,
        },
        ranked_hash,
    }))
}
