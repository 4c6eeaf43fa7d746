//! The `crcsel` command line.
//!
//! Subcommands: `analyze`, `compare`, `search`, `curves`, `simulate` and
//! `tables`. Every subcommand takes `--format json|csv|table`. Exit codes:
//! 0 success, 2 usage error, 3 domain error, 4 unsupported size.
//!
//! Code lengths and payload lengths have separate flags (`--min-len` vs
//! `--payload-min`); a payload of `A` bits becomes the length `A + p`.
//! Bit 0 of a codeword is the constant term, the last bit on the wire.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::CodeSpec;
use crate::error::{domain, Error, Result};
use crate::metrics::{cumulative_scores, curve_rows, improvement, p_ue, p_ue_first_term, ratio, ChannelModel, CurveRow};
use crate::oracle::{monte_carlo_pue_parallel, McEstimate, DEFAULT_SEED};
use crate::poly::Generator;
use crate::presets::{self, payload_to_length};
use crate::search::{run_search, CandidateStats, EarlyReject, SearchConfig, SearchReport};
use crate::spectrum::{distance_profile, dual_weight_distribution, DistanceProfile, Run};

pub const ANALYZE_SCHEMA: &str = "crcsel.analyze/1";
pub const COMPARE_SCHEMA: &str = "crcsel.compare/1";
pub const CURVES_SCHEMA: &str = "crcsel.curves/1";
pub const SIMULATE_SCHEMA: &str = "crcsel.simulate/1";
pub const TABLES_SCHEMA: &str = "crcsel.tables/1";

#[derive(Parser, Debug)]
#[command(name = "crcsel", version, about = "CRC undetected-error analysis and interval-optimal generator search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance profile, S_d and S_Ad of one generator over an interval.
    Analyze(AnalyzeArgs),
    /// Per-length comparison of a candidate generator against a reference.
    Compare(CompareArgs),
    /// Exhaustive search for the generator with the largest S_d.
    Search(SearchArgs),
    /// P_ue and its first-term approximation for figure data.
    Curves(CurvesArgs),
    /// Monte Carlo estimate of P_ue on a binary symmetric channel.
    Simulate(SimulateArgs),
    /// Recompute the published result tables.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug, Clone, Default)]
pub struct IntervalArgs {
    /// First code length in bits.
    #[arg(long, requires = "max_len", conflicts_with_all = ["payload_min", "payload_max"])]
    pub min_len: Option<usize>,
    /// Last code length in bits.
    #[arg(long, requires = "min_len")]
    pub max_len: Option<usize>,
    /// First payload length in bits (code length = payload + p).
    #[arg(long, requires = "payload_max")]
    pub payload_min: Option<usize>,
    #[arg(long, requires = "payload_min")]
    pub payload_max: Option<usize>,
    /// Named generator and interval, e.g. crc11 or crc24c-dci.
    #[arg(long)]
    pub preset: Option<String>,
}

impl IntervalArgs {
    fn preset(&self) -> Result<Option<&'static presets::Preset>> {
        match &self.preset {
            None => Ok(None),
            Some(name) => presets::preset(name).map(Some).ok_or_else(|| {
                let known: Vec<&str> = presets::NR_PRESETS.iter().map(|p| p.name).collect();
                Error::Parse(format!("unknown preset {name:?}; known: {}", known.join(", ")))
            }),
        }
    }

    /// `[L..M]` in code-length bits for a generator of degree `p`.
    pub fn resolve(&self, p: u32) -> Result<(usize, usize)> {
        if let (Some(l), Some(m)) = (self.min_len, self.max_len) {
            return Ok((l, m));
        }
        if let (Some(a), Some(b)) = (self.payload_min, self.payload_max) {
            return Ok((payload_to_length(a, p)?, payload_to_length(b, p)?));
        }
        match self.preset()? {
            Some(pr) => Ok((pr.min_len, pr.max_len)),
            None => Err(Error::Parse(
                "an interval is required: --min-len/--max-len, --payload-min/--payload-max or --preset".into(),
            )),
        }
    }
}

fn parse_generator(text: &str) -> Result<Generator> {
    text.parse::<Generator>()
}

/// Generator from a positional value, `--poly`, or the preset.
fn pick_generator(pos: Option<&str>, flag: Option<&str>, interval: &IntervalArgs) -> Result<Generator> {
    match (pos, flag) {
        (Some(_), Some(_)) => Err(Error::Parse("give the generator either positionally or with --poly".into())),
        (Some(t), None) | (None, Some(t)) => parse_generator(t),
        (None, None) => match interval.preset()? {
            Some(pr) => Ok(pr.generator()),
            None => Err(Error::Parse("a generator is required (hex, e.g. 59)".into())),
        },
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Generator in hex, full-coefficient notation (x^6+x^4+x^3+1 = 59).
    pub poly: Option<String>,
    #[arg(long = "poly", value_name = "HEX")]
    pub poly_flag: Option<String>,
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Candidate and reference generators; improvement is relative to the
    /// reference.
    #[arg(num_args = 0..=2)]
    pub polys: Vec<String>,
    #[arg(long = "poly", value_name = "HEX")]
    pub poly_flag: Vec<String>,
    #[command(flatten)]
    pub interval: IntervalArgs,
    /// Crossover probability; repeatable. Default 1e-12.
    #[arg(long = "eps")]
    pub eps: Vec<f64>,
    /// Only report these lengths; repeatable.
    #[arg(long = "at")]
    pub at: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Check bits (degree of the generators searched).
    #[arg(long, short)]
    pub p: Option<u32>,
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON-lines progress file; an existing file is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub chunk_size: Option<usize>,
    /// Length from which a candidate below --required-d may be dropped.
    #[arg(long)]
    pub early_threshold: Option<usize>,
    #[arg(long)]
    pub required_d: Option<u32>,
    #[arg(long, conflicts_with_all = ["early_threshold", "required_d"])]
    pub no_early_reject: bool,
    /// Permit full searches above p=16.
    #[arg(long)]
    pub long_run: bool,
    /// JSON file with any of the fields p, min_len, max_len, early_reject,
    /// workers, top_k, chunk_size. Flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    pub poly: Option<String>,
    #[arg(long = "poly", value_name = "HEX")]
    pub poly_flag: Option<String>,
    /// A single code length instead of an interval.
    #[arg(long, conflicts_with_all = ["min_len", "max_len", "payload_min", "payload_max"])]
    pub len: Option<usize>,
    #[command(flatten)]
    pub interval: IntervalArgs,
    /// Crossover probability; repeatable.
    #[arg(long = "eps")]
    pub eps: Vec<f64>,
    /// Log-spaced grid FROM:TO:COUNT, e.g. 1e-12:1e-2:11.
    #[arg(long, conflicts_with = "eps")]
    pub eps_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub poly: Option<String>,
    #[arg(long = "poly", value_name = "HEX")]
    pub poly_flag: Option<String>,
    #[arg(long)]
    pub len: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
pub enum TableId {
    /// p=6 search over [18..25].
    Iii,
    /// p=11 search over [31..1717] and CRC11.
    Iv,
    /// 1a2eb and CRC16 over [17..3840].
    V,
    /// The six p=24 generators over [25..8448] (orders, S_d and runs).
    Vi,
    /// Same computation as vi.
    Vii,
    /// CRC24C and 118b983 over [25..164].
    Vd,
    All,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    #[arg(value_enum, default_values_t = [TableId::All])]
    pub tables: Vec<TableId>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let text = match cmd {
        Command::Analyze(a) => cmd_analyze(a)?,
        Command::Compare(a) => cmd_compare(a)?,
        Command::Search(a) => cmd_search(a)?,
        Command::Curves(a) => cmd_curves(a)?,
        Command::Simulate(a) => cmd_simulate(a, err)?,
        Command::Tables(a) => cmd_tables(a)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema: String,
    pub generator: Generator,
    pub reciprocal: Generator,
    pub p: u32,
    pub order: u64,
    pub min_len: usize,
    pub max_len: usize,
    pub s_d: u64,
    pub s_ad: String,
    pub runs: Vec<Run>,
    pub runs_notation: String,
}

impl AnalyzeReport {
    pub fn from_profile(profile: &DistanceProfile) -> Self {
        let card = cumulative_scores(profile);
        let g = profile.generator();
        AnalyzeReport {
            schema: ANALYZE_SCHEMA.to_string(),
            generator: g,
            reciprocal: g.reciprocal(),
            p: g.degree(),
            order: profile.order(),
            min_len: profile.min_len(),
            max_len: profile.max_len(),
            s_d: card.s_d,
            s_ad: card.s_ad.to_string(),
            runs: card.runs,
            runs_notation: profile.runs_notation(),
        }
    }

    pub fn to_table(&self) -> String {
        format!(
            "generator  {}\nreciprocal {}\np          {}\nn_c        {}\ninterval   [{}..{}]\nS_d        {}\nS_Ad       {}\nruns       {}\n",
            self.generator, self.reciprocal, self.p, self.order, self.min_len, self.max_len, self.s_d, self.s_ad, self.runs_notation
        )
    }
}

/// Profile of `g` over `[L..M]`, checking the interval first so the error
/// cites the order.
pub fn analyze(g: Generator, min_len: usize, max_len: usize) -> Result<DistanceProfile> {
    distance_profile(g, min_len, max_len)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<String> {
    let g = pick_generator(a.poly.as_deref(), a.poly_flag.as_deref(), &a.interval)?;
    let (l, m) = a.interval.resolve(g.degree())?;
    let profile = analyze(g, l, m)?;
    let report = AnalyzeReport::from_profile(&profile);
    match a.format {
        Format::Json => to_json(&report),
        Format::Table => Ok(report.to_table()),
        Format::Csv => Ok(profile.to_csv()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    pub epsilon: f64,
    pub p_ue_first_candidate: f64,
    pub p_ue_first_reference: f64,
    /// `(P_ref - P_new) / P_ref` in percent; absent when `P_ref = 0`.
    pub improvement_pct: Option<f64>,
    /// `P_ref / P_new`; absent when either side is 0.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub d_candidate: u32,
    pub a_d_candidate: String,
    pub d_reference: u32,
    pub a_d_reference: String,
    pub points: Vec<ComparePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub schema: String,
    pub candidate: AnalyzeReport,
    pub reference: AnalyzeReport,
    pub epsilons: Vec<f64>,
    pub rows: Vec<CompareRow>,
}

pub const COMPARE_CSV_HEADER: &str =
    "epsilon,n,d_candidate,a_d_candidate,d_reference,a_d_reference,p_ue_first_candidate,p_ue_first_reference,improvement_pct,ratio";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl CompareReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{COMPARE_CSV_HEADER}\n");
        for (k, eps) in self.epsilons.iter().enumerate() {
            for r in &self.rows {
                let pt = &r.points[k];
                s.push_str(&format!(
                    "{eps:e},{},{},{},{},{},{:e},{:e},{},{}\n",
                    r.n,
                    r.d_candidate,
                    r.a_d_candidate,
                    r.d_reference,
                    r.a_d_reference,
                    pt.p_ue_first_candidate,
                    pt.p_ue_first_reference,
                    opt(pt.improvement_pct),
                    opt(pt.ratio)
                ));
            }
        }
        s
    }

    pub fn to_table(&self) -> String {
        let (c, r) = (&self.candidate, &self.reference);
        let mut s = format!(
            "candidate {} (S_d {}, S_Ad {})  reference {} (S_d {}, S_Ad {})  [{}..{}]\n",
            c.generator, c.s_d, c.s_ad, r.generator, r.s_d, r.s_ad, c.min_len, c.max_len
        );
        s.push_str(&format!("{:>6} {:>3} {:>12} {:>3} {:>12}", "n", "d", "A_d", "d", "A_d"));
        for eps in &self.epsilons {
            s.push_str(&format!("  {:>14} {:>14}", format!("impr%@{eps:e}"), "ratio"));
        }
        s.push('\n');
        for row in &self.rows {
            s.push_str(&format!(
                "{:>6} {:>3} {:>12} {:>3} {:>12}",
                row.n, row.d_candidate, row.a_d_candidate, row.d_reference, row.a_d_reference
            ));
            for pt in &row.points {
                s.push_str(&format!("  {:>14} {:>14}", opt(pt.improvement_pct), opt(pt.ratio)));
            }
            s.push('\n');
        }
        s
    }
}

/// Compares `candidate` with `reference` at every length of `[L..M]` (or
/// only at `at`, when non-empty) using the first-term approximation.
pub fn compare(
    candidate: Generator,
    reference: Generator,
    min_len: usize,
    max_len: usize,
    eps: &[ChannelModel],
    at: &[usize],
) -> Result<CompareReport> {
    for &n in at {
        if n < min_len || n > max_len {
            return Err(domain!("length {n} is outside [{min_len}..{max_len}]"));
        }
    }
    let (pa, pb) = rayon::join(
        || analyze(candidate, min_len, max_len),
        || analyze(reference, min_len, max_len),
    );
    let (pa, pb) = (pa?, pb?);
    let mut rows = Vec::new();
    for ((n, da, aa), (_, db, ab)) in pa.lengths().zip(pb.lengths()) {
        if !at.is_empty() && !at.contains(&n) {
            continue;
        }
        let mut points = Vec::with_capacity(eps.len());
        for &ch in eps {
            let fa = p_ue_first_term(da, aa, n, ch)?;
            let fb = p_ue_first_term(db, ab, n, ch)?;
            points.push(ComparePoint {
                epsilon: ch.epsilon(),
                p_ue_first_candidate: fa,
                p_ue_first_reference: fb,
                improvement_pct: (fb > 0.0).then(|| improvement(fb, fa)).transpose()?,
                ratio: (fa > 0.0 && fb > 0.0).then(|| ratio(fb, fa)),
            });
        }
        rows.push(CompareRow {
            n,
            d_candidate: da,
            a_d_candidate: aa.to_string(),
            d_reference: db,
            a_d_reference: ab.to_string(),
            points,
        });
    }
    Ok(CompareReport {
        schema: COMPARE_SCHEMA.to_string(),
        candidate: AnalyzeReport::from_profile(&pa),
        reference: AnalyzeReport::from_profile(&pb),
        epsilons: eps.iter().map(|c| c.epsilon()).collect(),
        rows,
    })
}

fn channels(eps: &[f64], default: &[f64]) -> Result<Vec<ChannelModel>> {
    let src = if eps.is_empty() { default } else { eps };
    src.iter().map(|&e| ChannelModel::new(e)).collect()
}

fn cmd_compare(a: &CompareArgs) -> Result<String> {
    let texts: Vec<&String> = a.polys.iter().chain(&a.poly_flag).collect();
    if texts.len() != 2 {
        return Err(Error::Parse(format!("compare needs exactly two generators, got {}", texts.len())));
    }
    let (ga, gb) = (parse_generator(texts[0])?, parse_generator(texts[1])?);
    let (l, m) = a.interval.resolve(ga.degree().max(gb.degree()))?;
    let eps = channels(&a.eps, &[1e-12])?;
    let report = compare(ga, gb, l, m, &eps, &a.at)?;
    match a.format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(report.to_csv()),
        Format::Table => Ok(report.to_table()),
    }
}

/// Fields of a search config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfigFile {
    pub p: Option<u32>,
    pub min_len: Option<usize>,
    pub max_len: Option<usize>,
    pub early_reject: Option<EarlyReject>,
    pub workers: Option<usize>,
    pub top_k: Option<usize>,
    pub chunk_size: Option<usize>,
}

pub fn search_config(a: &SearchArgs) -> Result<SearchConfig> {
    let file: SearchConfigFile = match &a.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
        None => SearchConfigFile::default(),
    };
    let p = a
        .p
        .or(file.p)
        .or(a.interval.preset()?.map(|pr| pr.p()))
        .ok_or_else(|| Error::Parse("search needs -p".into()))?;
    let has_flags = a.interval.min_len.is_some() || a.interval.payload_min.is_some() || a.interval.preset.is_some();
    let (l, m) = match (has_flags, file.min_len, file.max_len) {
        (false, Some(l), Some(m)) => (l, m),
        _ => a.interval.resolve(p)?,
    };
    let mut cfg = SearchConfig::new(p, l, m);
    if file.early_reject.is_some() {
        cfg.early_reject = file.early_reject;
    }
    if a.no_early_reject {
        cfg.early_reject = None;
    } else if a.early_threshold.is_some() || a.required_d.is_some() {
        let base = cfg.early_reject.unwrap_or(EarlyReject {
            length_threshold: l + (m - l) / 8,
            required_d: 6,
        });
        cfg.early_reject = Some(EarlyReject {
            length_threshold: a.early_threshold.unwrap_or(base.length_threshold),
            required_d: a.required_d.unwrap_or(base.required_d),
        });
    }
    cfg.workers = a.workers.or(file.workers).unwrap_or(1);
    cfg.top_k = a.top_k.or(file.top_k).unwrap_or(cfg.top_k);
    cfg.chunk_size = a.chunk_size.or(file.chunk_size).unwrap_or(cfg.chunk_size);
    cfg.checkpoint = a.checkpoint.clone();
    cfg.long_run = a.long_run;
    Ok(cfg)
}

pub fn search_csv(report: &SearchReport) -> String {
    let mut s = String::from("rank,generator,reciprocal,order,s_d,s_ad,runs\n");
    for e in &report.ranked {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.rank,
            e.generator,
            e.reciprocal,
            e.order,
            e.s_d,
            e.s_ad,
            crate::search::runs_notation(&e.runs).replace(", ", " ")
        ));
    }
    s
}

fn cmd_search(a: &SearchArgs) -> Result<String> {
    let cfg = search_config(a)?;
    let report = run_search(&cfg)?;
    match a.format {
        Format::Json => to_json(&report),
        Format::Csv => Ok(search_csv(&report)),
        Format::Table => Ok(report.to_table()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvesReport {
    pub schema: String,
    pub generator: Generator,
    pub rows: Vec<CurveRow>,
}

/// Log-spaced grid from `FROM:TO:COUNT`.
pub fn parse_eps_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("expected FROM:TO:COUNT, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [from, to, count] = parts[..] else { return Err(bad()) };
    let from: f64 = from.trim().parse().map_err(|_| bad())?;
    let to: f64 = to.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if from <= 0.0 || to <= 0.0 || count == 0 {
        return Err(domain!("eps range needs positive bounds and count"));
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    let (lf, lt) = (from.log10(), to.log10());
    Ok((0..count)
        .map(|i| 10f64.powf(lf + (lt - lf) * i as f64 / (count - 1) as f64))
        .collect())
}

fn cmd_curves(a: &CurvesArgs) -> Result<String> {
    let g = pick_generator(a.poly.as_deref(), a.poly_flag.as_deref(), &a.interval)?;
    let (l, m) = match a.len {
        Some(n) => (n, n),
        None => a.interval.resolve(g.degree())?,
    };
    let grid = match &a.eps_range {
        Some(r) => parse_eps_range(r)?,
        None => a.eps.clone(),
    };
    let eps = channels(&grid, &[1e-12])?;
    let rows = curve_rows(g, l, m, &eps)?;
    match a.format {
        Format::Csv => Ok(crate::metrics::curve_csv(&rows)),
        Format::Json => to_json(&CurvesReport {
            schema: CURVES_SCHEMA.to_string(),
            generator: g,
            rows,
        }),
        Format::Table => {
            let mut s = format!("{:>12} {:>6} {:>24} {:>24}\n", "epsilon", "n", "p_ue", "p_ue_first");
            for r in &rows {
                s.push_str(&format!("{:>12e} {:>6} {:>24e} {:>24e}\n", r.epsilon, r.n, r.p_ue, r.p_ue_first));
            }
            Ok(s)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub schema: String,
    pub estimate: McEstimate,
    /// Exact `P_ue` from the weight distribution.
    pub exact: f64,
    /// `(estimate - exact) / stderr`; absent when stderr is 0.
    pub z_score: Option<f64>,
}

pub fn simulate(g: Generator, n: usize, eps: f64, trials: u64, seed: u64, workers: usize) -> Result<SimulateReport> {
    let spec = CodeSpec::new(g, n)?;
    let ch = ChannelModel::new(eps)?;
    let exact = p_ue(&dual_weight_distribution(g, n)?, ch)?;
    let estimate = monte_carlo_pue_parallel(&spec, ch, trials, seed, workers)?;
    let z_score = (estimate.stderr > 0.0).then(|| (estimate.estimate - exact) / estimate.stderr);
    Ok(SimulateReport {
        schema: SIMULATE_SCHEMA.to_string(),
        estimate,
        exact,
        z_score,
    })
}

fn cmd_simulate(a: &SimulateArgs, err: &mut dyn Write) -> Result<String> {
    let none = IntervalArgs::default();
    let g = pick_generator(a.poly.as_deref(), a.poly_flag.as_deref(), &none)?;
    let r = simulate(g, a.len, a.eps, a.trials, a.seed, a.workers)?;
    let expected = r.estimate.expected_count(r.exact);
    if expected < 10.0 {
        writeln!(
            err,
            "warning: only {expected:.3e} undetected errors expected in {} trials; the exact value is authoritative",
            a.trials
        )?;
    }
    let e = &r.estimate;
    match a.format {
        Format::Json => to_json(&r),
        Format::Csv => Ok(format!(
            "generator,n,epsilon,trials,undetected,estimate,stderr,exact,seed,workers\n{},{},{:e},{},{},{:e},{:e},{:e},{},{}\n",
            e.generator, e.n, e.epsilon, e.trials, e.undetected, e.estimate, e.stderr, r.exact, e.seed, e.workers
        )),
        Format::Table => Ok(format!(
            "generator  {}\nn          {}\nepsilon    {:e}\ntrials     {}\nundetected {}\nestimate   {:e}\nstderr     {:e}\nexact      {:e}\nz          {}\nseed       {}\nworkers    {}\nrng        {}\n",
            e.generator,
            e.n,
            e.epsilon,
            e.trials,
            e.undetected,
            e.estimate,
            e.stderr,
            r.exact,
            opt(r.z_score),
            e.seed,
            e.workers,
            e.rng
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub generator: Generator,
    pub reciprocal: Generator,
    pub order: u64,
    pub s_d: u64,
    pub s_ad: String,
    pub runs: Vec<Run>,
    /// `winner` for a search winner, or the 5G NR name.
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub schema: String,
    pub table: String,
    pub p: u32,
    pub min_len: usize,
    pub max_len: usize,
    /// Present for tables produced by a full search.
    pub candidates: Option<CandidateStats>,
    pub ranked_hash: Option<String>,
    pub rows: Vec<TableRow>,
}

fn nr_label(g: Generator) -> String {
    presets::NR_PRESETS
        .iter()
        .find(|pr| pr.generator == g.bits() || pr.generator == g.reciprocal().bits())
        .map(|pr| pr.name.split('-').next().unwrap_or(pr.name).to_uppercase())
        .unwrap_or_default()
}

fn row_from_report(r: &AnalyzeReport) -> TableRow {
    TableRow {
        generator: r.generator,
        reciprocal: r.reciprocal,
        order: r.order,
        s_d: r.s_d,
        s_ad: r.s_ad.clone(),
        runs: r.runs.clone(),
        label: nr_label(r.generator),
    }
}

fn analyze_rows(gens: &[u64], l: usize, m: usize, workers: usize) -> Result<Vec<TableRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| domain!("cannot start {workers} workers: {e}"))?;
    pool.install(|| {
        gens.par_iter()
            .map(|&v| {
                let g = Generator::new(v)?;
                Ok(row_from_report(&AnalyzeReport::from_profile(&analyze(g, l, m)?)))
            })
            .collect()
    })
}

fn search_table(name: &str, p: u32, (l, m): (usize, usize), top_k: usize, extra: &[u64], workers: usize) -> Result<TableReport> {
    let mut cfg = SearchConfig::new(p, l, m);
    cfg.top_k = top_k;
    cfg.workers = workers.max(1);
    let report = run_search(&cfg)?;
    let mut rows: Vec<TableRow> = report
        .ranked
        .iter()
        .map(|e| {
            let nr = nr_label(e.generator);
            TableRow {
                generator: e.generator,
                reciprocal: e.reciprocal,
                order: e.order,
                s_d: e.s_d,
                s_ad: e.s_ad.to_string(),
                runs: e.runs.clone(),
                label: if e.rank == 1 { "winner".into() } else { nr },
            }
        })
        .collect();
    let missing: Vec<u64> = extra
        .iter()
        .copied()
        .filter(|&v| !rows.iter().any(|r| r.generator.bits() == v || r.reciprocal.bits() == v))
        .collect();
    rows.extend(analyze_rows(&missing, l, m, workers)?);
    Ok(TableReport {
        schema: TABLES_SCHEMA.to_string(),
        table: name.to_string(),
        p,
        min_len: l,
        max_len: m,
        candidates: Some(report.stats),
        ranked_hash: Some(report.ranked_hash),
        rows,
    })
}

fn verify_table(name: &str, gens: &[u64], (l, m): (usize, usize), workers: usize) -> Result<TableReport> {
    let rows = analyze_rows(gens, l, m, workers)?;
    Ok(TableReport {
        schema: TABLES_SCHEMA.to_string(),
        table: name.to_string(),
        p: Generator::new(gens[0])?.degree(),
        min_len: l,
        max_len: m,
        candidates: None,
        ranked_hash: None,
        rows,
    })
}

/// Recomputes one result table.
pub fn table(id: TableId, workers: usize) -> Result<TableReport> {
    use presets::*;
    match id {
        TableId::Iii => search_table("III", 6, P6_INTERVAL, 32, &[], workers),
        TableId::Iv => search_table("IV", 11, P11_INTERVAL, 1, &[0xe21], workers),
        TableId::V => verify_table("V", &P16_GENERATORS, P16_INTERVAL, workers),
        TableId::Vi | TableId::Vii => verify_table("VI-VII", &P24_GENERATORS, P24_INTERVAL, workers),
        TableId::Vd => verify_table("V-D", &P24_SHORT_GENERATORS, P24_SHORT_INTERVAL, workers),
        TableId::All => Err(domain!("'all' is not a single table")),
    }
}

fn expand(ids: &[TableId]) -> Vec<TableId> {
    let mut v: Vec<TableId> = if ids.contains(&TableId::All) {
        vec![TableId::Iii, TableId::Iv, TableId::V, TableId::Vi, TableId::Vd]
    } else {
        ids.iter().map(|&t| if t == TableId::Vii { TableId::Vi } else { t }).collect()
    };
    v.sort();
    v.dedup();
    v
}

impl TableReport {
    pub fn to_table(&self) -> String {
        let mut s = format!("Table {}  p={}  [{}..{}]\n", self.table, self.p, self.min_len, self.max_len);
        if let Some(c) = &self.candidates {
            s.push_str(&format!(
                "candidates: {} total, {} after reciprocal dedup ({} self-reciprocal), {} with order >= {}\n",
                c.total, c.after_reciprocal_dedup, c.self_reciprocal, c.after_order_filter, self.max_len
            ));
        }
        s.push_str(&format!("{:<20} {:>9} {:>7} {:>14}  {:<8} runs\n", "g (reciprocal)", "n_c", "S_d", "S_Ad", "label"));
        for r in &self.rows {
            s.push_str(&format!(
                "{:<20} {:>9} {:>7} {:>14}  {:<8} {}\n",
                format!("{} ({})", r.generator, r.reciprocal),
                r.order,
                r.s_d,
                r.s_ad,
                r.label,
                crate::search::runs_notation(&r.runs)
            ));
        }
        if let Some(h) = &self.ranked_hash {
            s.push_str(&format!("ranked-list sha256 {h}\n"));
        }
        s
    }
}

fn cmd_tables(a: &TablesArgs) -> Result<String> {
    let reports = expand(&a.tables)
        .into_iter()
        .map(|t| table(t, a.workers))
        .collect::<Result<Vec<_>>>()?;
    match a.format {
        Format::Json => to_json(&reports),
        Format::Table => Ok(reports.iter().map(|r| r.to_table()).collect::<Vec<_>>().join("\n")),
        Format::Csv => {
            let mut s = String::from("table,generator,reciprocal,order,s_d,s_ad,label,runs\n");
            for t in &reports {
                for r in &t.rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        t.table,
                        r.generator,
                        r.reciprocal,
                        r.order,
                        r.s_d,
                        r.s_ad,
                        r.label,
                        crate::search::runs_notation(&r.runs).replace(", ", " ")
                    ));
                }
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("crcsel").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analyze_table_output() {
        let (code, out, _) = run_args(&["analyze", "61", "--min-len", "18", "--max-len", "25"]);
        assert_eq!(code, 0);
        assert!(out.contains("S_d        24\n"), "{out}");
        assert!(out.contains("runs       3:18-25\n"));
    }

    #[test]
    fn order_violation_cites_order() {
        let (code, _, err) = run_args(&["analyze", "3", "--min-len", "5", "--max-len", "5"]);
        assert_eq!(code, 3);
        assert!(err.contains("n_c=1"), "{err}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["analyze", "zz", "--min-len", "18", "--max-len", "25"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["analyze", "61"]).0, 2);
        assert_eq!(run_args(&["search", "-p", "20", "--min-len", "25", "--max-len", "30"]).0, 4);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn payload_and_preset_intervals() {
        let a = run_args(&["analyze", "59", "--payload-min", "12", "--payload-max", "19", "--format", "json"]);
        let b = run_args(&["analyze", "--preset", "crc6", "--poly", "59", "--format", "json"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let c = run_args(&["analyze", "--preset", "crc6", "--format", "json"]);
        let r: AnalyzeReport = serde_json::from_str(&c.1).unwrap();
        assert_eq!((r.generator.bits(), r.min_len, r.max_len), (0x61, 18, 25));
        // lengths and payloads cannot be mixed
        assert_eq!(run_args(&["analyze", "59", "--min-len", "18", "--max-len", "25", "--payload-min", "1", "--payload-max", "2"]).0, 2);
    }

    #[test]
    fn compare_self_is_zero() {
        let eps = [ChannelModel::new(1e-6).unwrap()];
        let g = Generator::new(0x61).unwrap();
        let r = compare(g, g, 18, 25, &eps, &[]).unwrap();
        assert_eq!(r.rows.len(), 8);
        for row in &r.rows {
            assert_eq!(row.points[0].improvement_pct, Some(0.0));
            assert_eq!(row.points[0].ratio, Some(1.0));
        }
    }

    #[test]
    fn compare_zero_eps_has_no_ratio() {
        let eps = [ChannelModel::new(0.0).unwrap()];
        let r = compare(Generator::new(0x59).unwrap(), Generator::new(0x61).unwrap(), 18, 25, &eps, &[20]).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].points[0].improvement_pct, None);
        assert!(r.to_csv().lines().nth(1).unwrap().ends_with(",,"));
    }

    #[test]
    fn eps_range_grid() {
        let g = parse_eps_range("1e-12:1e-2:11").unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[0] - 1e-12).abs() < 1e-24 && (g[10] - 1e-2).abs() < 1e-14);
        assert!((g[5] / 1e-7 - 1.0).abs() < 1e-12);
        assert!(parse_eps_range("1e-3:1e-2").is_err());
        assert!(parse_eps_range("0:1e-2:3").is_err());
    }

    #[test]
    fn search_config_merging() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"p": 6, "min_len": 18, "max_len": 25, "top_k": 3}"#).unwrap();
        let cli = Cli::try_parse_from(["crcsel", "search", "--config", path.to_str().unwrap(), "--top-k", "5"]).unwrap();
        let Command::Search(a) = cli.command else { panic!() };
        let cfg = search_config(&a).unwrap();
        assert_eq!((cfg.p, cfg.min_len, cfg.max_len, cfg.top_k), (6, 18, 25, 5));
        std::fs::write(&path, r#"{"p": 6, "bogus": 1}"#).unwrap();
        assert!(matches!(search_config(&a), Err(Error::Parse(_))));
    }

    #[test]
    fn simulate_reports_exact() {
        let r = simulate(Generator::new(0x7).unwrap(), 3, 0.5, 20_000, 1, 2).unwrap();
        assert!((r.exact - 0.125).abs() < 1e-15);
        assert!(r.z_score.unwrap().abs() < 5.0);
        assert_eq!(r.estimate.workers, 2);
    }

    #[test]
    fn table_iii_rows() {
        let t = table(TableId::Iii, 2).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.rows[0].label, "winner");
        assert_eq!(t.rows[0].generator.bits(), 0x4d);
        assert!(t.rows.iter().any(|r| r.label == "CRC6" && r.generator.bits() == 0x43));
        assert_eq!(expand(&[TableId::Vii, TableId::Vi, TableId::Iii]), vec![TableId::Iii, TableId::Vi]);
    }
}
